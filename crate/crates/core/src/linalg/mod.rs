//! Dense matrices over a ring context, sparse elimination, and local Smith reduction.

pub mod elim;
pub mod modp;
pub mod smith;

use crate::coeffs::Ring;

/// Dense row-major matrix; arithmetic goes through a [`Ring`] context.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Self { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Mat<F> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }
}

pub fn zeros<R: Ring>(ring: &R, rows: usize, cols: usize) -> Mat<R::Elem> {
    Mat::filled(rows, cols, ring.zero())
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Mat<R::Elem> {
    Mat::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch in product");
    let mut out = zeros(ring, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if ring.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let y = b.get(k, j);
                if ring.is_zero(y) {
                    continue;
                }
                let cur = out.get(i, j);
                let v = ring.add(cur, &ring.mul(x, y));
                out.set(i, j, v);
            }
        }
    }
    out
}

pub fn mat_add<R: Ring>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert!(a.rows == b.rows && a.cols == b.cols, "dimension mismatch in sum");
    Mat::from_fn(a.rows, a.cols, |i, j| ring.add(a.get(i, j), b.get(i, j)))
}

pub fn mat_sub<R: Ring>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert!(a.rows == b.rows && a.cols == b.cols, "dimension mismatch in difference");
    Mat::from_fn(a.rows, a.cols, |i, j| ring.sub(a.get(i, j), b.get(i, j)))
}

pub fn mat_scale<R: Ring>(ring: &R, c: &R::Elem, a: &Mat<R::Elem>) -> Mat<R::Elem> {
    a.map(|x| ring.mul(c, x))
}

pub fn mat_vec<R: Ring>(ring: &R, a: &Mat<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|i| {
            let mut acc = ring.zero();
            for (j, x) in a.row(i).iter().enumerate() {
                if !ring.is_zero(x) && !ring.is_zero(&v[j]) {
                    acc = ring.add(&acc, &ring.mul(x, &v[j]));
                }
            }
            acc
        })
        .collect()
}

pub fn is_zero_mat<R: Ring>(ring: &R, a: &Mat<R::Elem>) -> bool {
    a.data.iter().all(|x| ring.is_zero(x))
}

/// Block matrix `[[a, b], [c, d]]`.
pub fn block2<E: Clone>(a: &Mat<E>, b: &Mat<E>, c: &Mat<E>, d: &Mat<E>) -> Mat<E> {
    assert!(a.rows == b.rows && c.rows == d.rows && a.cols == c.cols && b.cols == d.cols);
    Mat::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| match (i < a.rows, j < a.cols) {
        (true, true) => a.get(i, j).clone(),
        (true, false) => b.get(i, j - a.cols).clone(),
        (false, true) => c.get(i - a.rows, j).clone(),
        (false, false) => d.get(i - a.rows, j - a.cols).clone(),
    })
}

pub fn block_diag<R: Ring>(ring: &R, blocks: &[&Mat<R::Elem>]) -> Mat<R::Elem> {
    let n: usize = blocks.iter().map(|b| b.rows).sum();
    let m: usize = blocks.iter().map(|b| b.cols).sum();
    let mut out = zeros(ring, n, m);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
        r0 += b.rows;
        c0 += b.cols;
    }
    out
}

/// Maps every entry through a ring homomorphism given as a closure.
pub fn base_change<E: Clone, F: Clone>(a: &Mat<E>, f: impl FnMut(&E) -> F) -> Mat<F> {
    a.map(f)
}
