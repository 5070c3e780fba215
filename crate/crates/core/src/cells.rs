//! Kazhdan-Lusztig cells, the a-function, distinguished involutions, gamma-constants and
//! the sorting function `f`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::{HTable, KlTable};
use crate::weyl::{Elt, EltSet, WeylGroup};

/// Partition into strongly connected components plus the induced order on components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Components {
    of: Vec<usize>,
    members: Vec<Vec<Elt>>,
    /// `leq[a][b]`: component `a` is reachable from `b`, i.e. `a <= b`.
    leq: Vec<Vec<bool>>,
}

/// `edges[y]` lists the `x` with `x <= y` in one step.
fn components(n: usize, edges: &[Vec<Elt>]) -> Components {
    let mut graph = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for (y, out) in edges.iter().enumerate() {
        for &x in out {
            if x != y {
                graph.add_edge(nodes[y], nodes[x], ());
            }
        }
    }
    let mut sccs: Vec<Vec<Elt>> =
        tarjan_scc(&graph).into_iter().map(|c| c.into_iter().map(|v| v.index()).collect::<Vec<_>>()).collect();
    for c in sccs.iter_mut() {
        c.sort_unstable();
    }
    sccs.sort_by_key(|c| c[0]);
    let mut of = vec![0; n];
    for (i, c) in sccs.iter().enumerate() {
        for &x in c {
            of[x] = i;
        }
    }
    let k = sccs.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for (y, out) in edges.iter().enumerate() {
        for &x in out {
            if of[x] != of[y] {
                succ[of[y]].insert(of[x]);
            }
        }
    }
    let mut leq = vec![vec![false; k]; k];
    for (b, row) in (0..k).map(|b| (b, reach(b, &succ))) {
        for a in row {
            leq[a][b] = true;
        }
    }
    Components { of, members: sccs, leq }
}

fn reach(start: usize, succ: &[BTreeSet<usize>]) -> Vec<usize> {
    let mut seen = vec![false; succ.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    (0..succ.len()).filter(|&v| seen[v]).collect()
}

/// One-step `<=_L` edges from `C'_s C'_y`.
pub fn left_edges_from_generators(h: &HTable) -> Vec<Vec<Elt>> {
    let g = h.group();
    g.elements()
        .map(|y| {
            let mut out: BTreeSet<Elt> = BTreeSet::new();
            for s in 0..g.rank() {
                out.extend(h.left_mul_s(s, y).into_iter().map(|e| e.0));
            }
            out.into_iter().collect()
        })
        .collect()
}

/// One-step `<=_L` edges from the full supports of `C'_x C'_y`.
pub fn left_edges_from_h_table(h: &HTable) -> Vec<Vec<Elt>> {
    let g = h.group();
    let mut edges: Vec<BTreeSet<Elt>> = vec![BTreeSet::new(); g.size()];
    for x in g.elements() {
        let row = h.row(x);
        for y in g.elements() {
            edges[y].extend(row[y].iter().map(|e| e.0));
        }
    }
    edges.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// W-graph edges: `x <= y` when `mu(x,y) != 0` and `L(x)` is not inside `L(y)`.
pub fn left_edges_from_mu(g: &WeylGroup, kl: &KlTable) -> Vec<Vec<Elt>> {
    g.elements()
        .map(|y| {
            g.elements()
                .filter(|&x| x != y && kl.mu(x, y) != 0 && g.left_descents(x) & !g.left_descents(y) != 0)
                .collect()
        })
        .collect()
}

/// Reachability sets of an edge list, as bitsets per start vertex.
pub fn closure(n: usize, edges: &[Vec<Elt>]) -> Vec<EltSet> {
    (0..n)
        .map(|y| {
            let mut seen = EltSet::new(n);
            seen.insert(y);
            let mut stack = vec![y];
            while let Some(v) = stack.pop() {
                for &x in &edges[v] {
                    if !seen.contains(x) {
                        seen.insert(x);
                        stack.push(x);
                    }
                }
            }
            seen
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CellExport {
    pub id: usize,
    pub members: Vec<String>,
    pub two_sided: usize,
    pub a: u32,
    pub f: u32,
    pub right_descents: Vec<String>,
    pub distinguished: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoSidedExport {
    pub id: usize,
    pub members: Vec<String>,
    pub left_cells: Vec<usize>,
    pub a: u32,
    pub f: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellsExport {
    pub coxeter_type: String,
    pub order: usize,
    pub num_positive_roots: usize,
    pub left_cells: Vec<CellExport>,
    pub two_sided_cells: Vec<TwoSidedExport>,
    /// Covering pairs `(lower, upper)` of the left-cell order.
    pub hasse_left: Vec<(usize, usize)>,
    pub hasse_two_sided: Vec<(usize, usize)>,
}

/// Left, right and two-sided cells with a, f and the cell orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDecomposition {
    left: Components,
    right: Components,
    two: Components,
    left_to_two: Vec<usize>,
    a_elem: Vec<u32>,
    a_two: Vec<u32>,
    f_two: Vec<u32>,
    w0_perm: Vec<usize>,
    distinguished: Vec<Elt>,
    n_pos: u32,
}

/// `deg_t` of a Laurent polynomial with nonnegative degree, or 0 for zero.
fn top_degree(p: &crate::coeffs::LaurentInt) -> i64 {
    p.max_exp().unwrap_or(i64::MIN)
}

/// `a(z) = max_{x,y} deg_t h_{x,y,z}`, by full scan.
pub fn a_function_scan(h: &HTable) -> Vec<u32> {
    let g = h.group();
    let per_x: Vec<Vec<i64>> = g
        .elements()
        .into_par_iter()
        .map(|x| {
            let mut best = vec![i64::MIN; g.size()];
            for entry in h.row(x).iter() {
                for (z, c) in entry {
                    best[*z] = best[*z].max(top_degree(c));
                }
            }
            best
        })
        .collect();
    (0..g.size())
        .map(|z| {
            let m = per_x.iter().map(|b| b[z]).max().unwrap_or(i64::MIN);
            u32::try_from(m.max(0)).expect("a-value fits")
        })
        .collect()
}

impl CellDecomposition {
    pub fn compute(h: &HTable) -> Result<Self> {
        let g = h.group();
        let n = g.size();
        h.fill();
        let ledges = left_edges_from_generators(h);
        let left = components(n, &ledges);
        let inv = |x: Elt| g.inverse(x);
        let redges: Vec<Vec<Elt>> = (0..n).map(|y| ledges[inv(y)].iter().map(|&x| inv(x)).collect()).collect();
        let right = components(n, &redges);
        let both: Vec<Vec<Elt>> = (0..n).map(|y| ledges[y].iter().chain(&redges[y]).copied().collect()).collect();
        let two = components(n, &both);
        let left_to_two: Vec<usize> = left.members.iter().map(|c| two.of[c[0]]).collect();

        let a_elem = a_function_scan(h);
        let mut a_two = Vec::with_capacity(two.members.len());
        for c in &two.members {
            let a = a_elem[c[0]];
            if c.iter().any(|&z| a_elem[z] != a) {
                return Err(Error::Invariant(format!("a not constant on the two-sided cell of {}", g.render(c[0]))));
            }
            a_two.push(a);
        }
        let w0 = g.longest();
        let n_pos = g.length(w0) as u32;
        let mut w0_perm = Vec::with_capacity(two.members.len());
        for c in &two.members {
            let image: BTreeSet<Elt> = c.iter().map(|&x| g.mul(w0, x)).collect();
            let target = two.of[*image.iter().next().expect("nonempty cell")];
            let tset: BTreeSet<Elt> = two.members[target].iter().copied().collect();
            if image != tset {
                return Err(Error::Invariant(format!("w0 * cell of {} is not a two-sided cell", g.render(c[0]))));
            }
            w0_perm.push(target);
        }
        let f_two: Vec<u32> = (0..two.members.len()).map(|c| a_two[c] + n_pos - a_two[w0_perm[c]]).collect();

        let kl = h.kl();
        let mut distinguished = vec![usize::MAX; left.members.len()];
        for d in g.elements() {
            if g.inverse(d) != d {
                continue;
            }
            let deg = kl.get(0, d).max_exp().expect("P_{e,d} is nonzero");
            if a_elem[d] as i64 == g.length(d) as i64 - 2 * deg {
                let lc = left.of[d];
                if distinguished[lc] != usize::MAX {
                    return Err(Error::Invariant(format!("two distinguished involutions in the left cell of {}", g.render(d))));
                }
                distinguished[lc] = d;
            }
        }
        if let Some(lc) = distinguished.iter().position(|&d| d == usize::MAX) {
            return Err(Error::Invariant(format!("no distinguished involution in the left cell of {}", g.render(left.members[lc][0]))));
        }
        Ok(Self { left, right, two, left_to_two, a_elem, a_two, f_two, w0_perm, distinguished, n_pos })
    }

    pub fn num_left_cells(&self) -> usize {
        self.left.members.len()
    }

    pub fn num_right_cells(&self) -> usize {
        self.right.members.len()
    }

    pub fn num_two_sided_cells(&self) -> usize {
        self.two.members.len()
    }

    pub fn left_cell_of(&self, w: Elt) -> usize {
        self.left.of[w]
    }

    pub fn right_cell_of(&self, w: Elt) -> usize {
        self.right.of[w]
    }

    pub fn two_sided_cell_of(&self, w: Elt) -> usize {
        self.two.of[w]
    }

    pub fn left_cell(&self, c: usize) -> &[Elt] {
        &self.left.members[c]
    }

    pub fn right_cell(&self, c: usize) -> &[Elt] {
        &self.right.members[c]
    }

    pub fn two_sided_cell(&self, c: usize) -> &[Elt] {
        &self.two.members[c]
    }

    pub fn left_cells(&self) -> &[Vec<Elt>] {
        &self.left.members
    }

    pub fn two_sided_cells(&self) -> &[Vec<Elt>] {
        &self.two.members
    }

    pub fn two_sided_of_left(&self, lc: usize) -> usize {
        self.left_to_two[lc]
    }

    /// Left cells inside a two-sided cell.
    pub fn left_cells_in(&self, tc: usize) -> Vec<usize> {
        (0..self.num_left_cells()).filter(|&lc| self.left_to_two[lc] == tc).collect()
    }

    /// `x <=_L y`.
    pub fn leq_left(&self, x: Elt, y: Elt) -> bool {
        self.left.leq[self.left.of[x]][self.left.of[y]]
    }

    pub fn leq_right(&self, x: Elt, y: Elt) -> bool {
        self.right.leq[self.right.of[x]][self.right.of[y]]
    }

    pub fn leq_lr(&self, x: Elt, y: Elt) -> bool {
        self.two.leq[self.two.of[x]][self.two.of[y]]
    }

    /// Order on left cell ids.
    pub fn left_cell_leq(&self, a: usize, b: usize) -> bool {
        self.left.leq[a][b]
    }

    pub fn two_sided_leq(&self, a: usize, b: usize) -> bool {
        self.two.leq[a][b]
    }

    pub fn a(&self, z: Elt) -> u32 {
        self.a_elem[z]
    }

    pub fn a_of_two_sided(&self, c: usize) -> u32 {
        self.a_two[c]
    }

    pub fn num_positive_roots(&self) -> u32 {
        self.n_pos
    }

    /// The two-sided cell `w0 c`.
    pub fn w0_times(&self, c: usize) -> usize {
        self.w0_perm[c]
    }

    /// `f(c) = a(c) + N - a(w0 c)` on two-sided cells.
    pub fn f_two_sided(&self, c: usize) -> u32 {
        self.f_two[c]
    }

    pub fn f_left(&self, lc: usize) -> u32 {
        self.f_two[self.left_to_two[lc]]
    }

    pub fn f_elem(&self, w: Elt) -> u32 {
        self.f_two[self.two.of[w]]
    }

    /// `omega <=_f omega'`: `f(omega) < f(omega')` or the same two-sided cell.
    pub fn leq_f(&self, lc: usize, lc2: usize) -> bool {
        self.f_left(lc) < self.f_left(lc2) || self.left_to_two[lc] == self.left_to_two[lc2]
    }

    /// The distinguished involution of each left cell.
    pub fn distinguished(&self) -> &[Elt] {
        &self.distinguished
    }

    pub fn is_distinguished(&self, d: Elt) -> bool {
        self.distinguished[self.left.of[d]] == d
    }

    /// Left cells sorted by `(f, smallest member)`.
    pub fn left_cells_by_f(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.num_left_cells()).collect();
        ids.sort_by_key(|&lc| (self.f_left(lc), self.left.members[lc][0]));
        ids
    }

    /// `gamma_{x,y,z}`: the coefficient of `t^{-a(z)}` in `h_{x,y,z^{-1}}`.
    pub fn gamma(&self, h: &HTable, x: Elt, y: Elt, z: Elt) -> i64 {
        let zi = h.group().inverse(z);
        let c: BigInt = h.h(x, y, zi).coeff(-(self.a_elem[z] as i64));
        c.to_i64().expect("gamma fits in i64")
    }

    pub fn export(&self, g: &WeylGroup) -> CellsExport {
        let render = |c: &[Elt]| c.iter().map(|&w| g.render(w)).collect::<Vec<_>>();
        let left_cells = (0..self.num_left_cells())
            .map(|lc| {
                let m = &self.left.members[lc];
                let r = g.right_descents(m[0]);
                CellExport {
                    id: lc,
                    members: render(m),
                    two_sided: self.left_to_two[lc],
                    a: self.a_two[self.left_to_two[lc]],
                    f: self.f_left(lc),
                    right_descents: (0..g.rank()).filter(|s| r >> s & 1 == 1).map(|s| format!("s{}", s + 1)).collect(),
                    distinguished: g.render(self.distinguished[lc]),
                }
            })
            .collect();
        let two_sided_cells = (0..self.num_two_sided_cells())
            .map(|tc| TwoSidedExport {
                id: tc,
                members: render(&self.two.members[tc]),
                left_cells: self.left_cells_in(tc),
                a: self.a_two[tc],
                f: self.f_two[tc],
            })
            .collect();
        CellsExport {
            coxeter_type: g.coxeter_type().to_string(),
            order: g.size(),
            num_positive_roots: self.n_pos as usize,
            left_cells,
            two_sided_cells,
            hasse_left: hasse(&self.left.leq),
            hasse_two_sided: hasse(&self.two.leq),
        }
    }
}

/// Covering relations of a partial order given by `leq`.
fn hasse(leq: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let k = leq.len();
    let lt = |a: usize, b: usize| a != b && leq[a][b];
    let mut out = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if lt(a, b) && !(0..k).any(|c| lt(a, c) && lt(c, b)) {
                out.push((a, b));
            }
        }
    }
    out
}
