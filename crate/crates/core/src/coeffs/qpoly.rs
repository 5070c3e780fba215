use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::laurent::LaurentInt;

/// Dense polynomial in `Q[t]`, coefficients low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    c: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        Self { c }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_default()
    }

    /// Number of leading zero coefficients (the `t`-adic order); 0 for the zero polynomial.
    pub fn low_order(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    /// Divides by `t^k`, assuming the low `k` coefficients vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        Self { c: self.c[k.min(self.c.len())..].to_vec() }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigRational::zero(); k];
        c.extend(self.c.iter().cloned());
        Self { c }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => c.push(a + b),
                (Some(a), None) => c.push(a.clone()),
                (None, Some(b)) => c.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Self::from_coeffs(c)
    }

    pub fn neg(&self) -> Self {
        Self { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        let mut c = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self { c: self.c.iter().map(|x| x * s).collect() }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        if self.c.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let inv_lead = d.lead().recip();
        let mut r = self.c.clone();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = &r[i + dd] * &inv_lead;
            if coef.is_zero() {
                continue;
            }
            for (j, dc) in d.c.iter().enumerate() {
                if !dc.is_zero() {
                    r[i + j] -= &coef * dc;
                }
            }
            q[i] = coef;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.lead().recip();
        self.scale(&l)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Returns `(g, u, v)` with `u*self + v*o = g` and `g` monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.lead().recip();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Multiplicity of the irreducible `p` as a factor of `self` (nonzero).
    pub fn multiplicity(&self, p: &Self) -> u32 {
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(p) {
            k += 1;
            cur = q;
        }
        k
    }

    /// Rough size estimate used for pivot selection.
    pub fn cost(&self) -> u64 {
        self.c
            .iter()
            .map(|x| 1 + (x.numer().bits() + x.denom().bits()) / 32)
            .sum()
    }

    /// The polynomial as an integer Laurent polynomial when all coefficients are integral.
    pub fn to_laurent(&self) -> Option<LaurentInt> {
        let mut terms = Vec::new();
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_integer() {
                return None;
            }
            terms.push((i as i64, c.to_integer()));
        }
        Some(LaurentInt::from_terms(terms))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "t".into(),
                k => format!("t^{k}"),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn mobius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Integer polynomial `t^d - 1` as coefficient vector.
fn t_pow_minus_one(d: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d + 1];
    v[0] = BigInt::from(-1);
    v[d] = BigInt::one();
    v
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

/// Exact division by a monic integer polynomial.
fn int_div_monic(a: &[BigInt], d: &[BigInt]) -> Vec<BigInt> {
    let dd = d.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - dd];
    for i in (0..q.len()).rev() {
        let coef = r[i + dd].clone();
        for (j, dc) in d.iter().enumerate() {
            r[i + j] -= &coef * dc;
        }
        q[i] = coef;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

fn compute_cyclotomic(n: u64) -> LaurentInt {
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        match mobius(n / d) {
            1 => num = int_mul(&num, &t_pow_minus_one(d as usize)),
            -1 => den = int_mul(&den, &t_pow_minus_one(d as usize)),
            _ => {}
        }
    }
    // den is monic up to sign; normalise both so the quotient is exact.
    let sign = den.last().unwrap().clone();
    if sign.is_negative() {
        den.iter_mut().for_each(|x| *x = -&*x);
        num.iter_mut().for_each(|x| *x = -&*x);
    }
    let q = int_div_monic(&num, &den);
    LaurentInt::from_terms(q.into_iter().enumerate().map(|(i, c)| (i as i64, c)))
}

type CycloCache = RwLock<HashMap<u64, Arc<LaurentInt>>>;

fn cache() -> &'static CycloCache {
    static CACHE: OnceLock<CycloCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The `n`-th cyclotomic polynomial, via the Mobius product over divisors of `n`.
pub fn cyclotomic(n: u64) -> LaurentInt {
    assert!(n >= 1, "cyclotomic index must be positive");
    if let Some(p) = cache().read().unwrap().get(&n) {
        return (**p).clone();
    }
    let p = compute_cyclotomic(n);
    cache().write().unwrap().insert(n, Arc::new(p.clone()));
    p
}

/// `Phi_n` as a dense rational polynomial.
pub fn cyclotomic_qpoly(n: u64) -> QPoly {
    laurent_to_qpoly(&cyclotomic(n)).0
}

/// Splits a Laurent polynomial as `t^shift * p(t)` with `p(0) != 0`.
pub fn laurent_to_qpoly(l: &LaurentInt) -> (QPoly, i64) {
    let Some(lo) = l.min_exp() else {
        return (QPoly::zero(), 0);
    };
    let hi = l.max_exp().unwrap();
    let mut c = vec![BigRational::zero(); (hi - lo + 1) as usize];
    for (e, v) in l.terms() {
        c[(e - lo) as usize] = BigRational::from_integer(v.clone());
    }
    (QPoly::from_coeffs(c), lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).to_string(), "-1 + t");
        assert_eq!(cyclotomic(2).to_string(), "1 + t");
        assert_eq!(cyclotomic(6).to_string(), "1 - t + t^2");
        assert_eq!(cyclotomic(8).to_string(), "1 + t^4");
        assert_eq!(cyclotomic(12).to_string(), "1 - t^2 + t^4");
    }

    #[test]
    fn xgcd_identity() {
        let a = QPoly::from_ints(&[5, 1]);
        let b = cyclotomic_qpoly(6);
        let (g, u, v) = a.xgcd(&b);
        assert!(g.is_one());
        assert!(u.mul(&a).add(&v.mul(&b)).is_one());
    }

    #[test]
    fn divrem_reconstructs() {
        let a = QPoly::from_ints(&[3, -2, 0, 7, 1]);
        let d = QPoly::from_ints(&[1, 0, 2]);
        let (q, r) = a.divrem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }
}
