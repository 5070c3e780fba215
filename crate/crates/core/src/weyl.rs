//! Finite Weyl groups: enumeration, multiplication tables, descents, parabolics, Bruhat order.
//!
//! Elements are interned as dense ids sorted by `(length, ShortLex word)`; the identity is 0.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Elt = usize;

/// Subset of the simple reflections as a bitmask (bit `i` is `s_{i+1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct ParabolicSet(pub u32);

impl ParabolicSet {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn full(rank: usize) -> Self {
        Self((1u32 << rank) - 1)
    }

    pub fn contains(&self, s: usize) -> bool {
        self.0 >> s & 1 == 1
    }

    pub fn is_subset(&self, other: u32) -> bool {
        self.0 & !other == 0
    }

    pub fn members(&self) -> Vec<usize> {
        (0..32).filter(|&s| self.contains(s)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// All subsets of a rank-`n` generating set, in increasing mask order.
    pub fn all(rank: usize) -> Vec<ParabolicSet> {
        (0..1u32 << rank).map(ParabolicSet).collect()
    }

    /// Parses `s1,s3` (or `1,3`); the empty string is the empty set.
    pub fn parse(s: &str, rank: usize) -> Result<Self> {
        let mut mask = 0;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let digits = part.strip_prefix('s').unwrap_or(part);
            let i: usize = digits.parse().map_err(|_| Error::Parse(format!("bad generator `{part}`")))?;
            if i == 0 || i > rank {
                return Err(Error::Parse(format!("generator `{part}` out of range for rank {rank}")));
            }
            mask |= 1 << (i - 1);
        }
        Ok(Self(mask))
    }

    pub fn label(&self) -> String {
        let m = self.members();
        if m.is_empty() {
            return "{}".into();
        }
        let inner: Vec<String> = m.iter().map(|s| format!("s{}", s + 1)).collect();
        format!("{{{}}}", inner.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoxeterType {
    pub family: Family,
    pub rank: usize,
}

impl FromStr for CoxeterType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownType(s.to_string());
        let s2 = s.trim();
        let mut chars = s2.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(bad());
        }
        Ok(Self { family, rank })
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl CoxeterType {
    /// Cartan matrix `a[i][j]` with the Bourbaki numbering.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        match self.family {
            Family::A => (0..n - 1).for_each(|i| link(i, i + 1, -1, -1)),
            Family::B => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n - 1, -2, -1);
            }
            Family::C => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n - 1, -1, -2);
            }
            Family::D => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 3, n - 1, -1, -1);
            }
            Family::F => {
                link(0, 1, -1, -1);
                link(1, 2, -2, -1);
                link(2, 3, -1, -1);
            }
            Family::G => link(0, 1, -1, -3),
        }
        a
    }

    pub fn coxeter_matrix(&self) -> Vec<Vec<u32>> {
        let a = self.cartan();
        let n = self.rank;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            1
                        } else {
                            match a[i][j] * a[j][i] {
                                0 => 2,
                                1 => 3,
                                2 => 4,
                                3 => 6,
                                other => panic!("non-crystallographic product {other}"),
                            }
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Degrees of the basic invariants.
    pub fn degrees(&self) -> Vec<u64> {
        let n = self.rank as u64;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C => (1..=n).map(|i| 2 * i).collect(),
            Family::D => {
                let mut d: Vec<u64> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d
            }
            Family::F => vec![2, 6, 8, 12],
            Family::G => vec![2, 6],
        }
    }

    pub fn order(&self) -> u64 {
        self.degrees().iter().product()
    }

    /// Number of positive roots.
    pub fn num_positive_roots(&self) -> u64 {
        self.degrees().iter().map(|d| d - 1).sum()
    }
}

/// Limits on what [`WeylGroup::new`] will enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupBudget {
    pub max_rank: usize,
    pub max_order: u64,
}

impl Default for GroupBudget {
    fn default() -> Self {
        Self { max_rank: 4, max_order: 1152 }
    }
}

/// Type, Coxeter matrix and the parameters `c_s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterDatum {
    pub ty: CoxeterType,
    pub coxeter_matrix: Vec<Vec<u32>>,
    pub params: Vec<u32>,
}

impl CoxeterDatum {
    pub fn new(ty: CoxeterType) -> Self {
        Self { ty, coxeter_matrix: ty.coxeter_matrix(), params: vec![1; ty.rank] }
    }

    /// Parameters must be positive and constant on classes of generators joined by odd bonds.
    pub fn with_params(ty: CoxeterType, params: Vec<u32>) -> Result<Self> {
        let d = Self { ty, coxeter_matrix: ty.coxeter_matrix(), params };
        if d.params.len() != ty.rank || d.params.contains(&0) {
            return Err(Error::Parse("parameters must be positive, one per generator".into()));
        }
        for i in 0..ty.rank {
            for j in 0..ty.rank {
                if d.coxeter_matrix[i][j] % 2 == 1 && d.params[i] != d.params[j] {
                    return Err(Error::Parse(format!("parameters of s{} and s{} must agree", i + 1, j + 1)));
                }
            }
        }
        Ok(d)
    }

    pub fn equal_parameters(&self) -> bool {
        self.params.iter().all(|&c| c == 1)
    }
}

/// Fixed-size bitset over group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EltSet {
    bits: Vec<u64>,
}

impl EltSet {
    pub fn new(n: usize) -> Self {
        Self { bits: vec![0; n.div_ceil(64)] }
    }

    pub fn insert(&mut self, x: Elt) {
        self.bits[x / 64] |= 1 << (x % 64);
    }

    pub fn contains(&self, x: Elt) -> bool {
        self.bits[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn union_with(&mut self, o: &EltSet) {
        for (a, b) in self.bits.iter_mut().zip(&o.bits) {
            *a |= b;
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Elt> + '_ {
        self.bits.iter().enumerate().flat_map(|(k, &b)| (0..64).filter(move |i| b >> i & 1 == 1).map(move |i| 64 * k + i))
    }
}

/// An enumerated finite Weyl group.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    datum: CoxeterDatum,
    words: Vec<Vec<u8>>,
    lengths: Vec<u32>,
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
    inverse: Vec<u32>,
    ldesc: Vec<u32>,
    rdesc: Vec<u32>,
    w0: Elt,
    bruhat_lower: Vec<EltSet>,
}

fn reflect(v: &[i64], s: usize, cartan: &[Vec<i64>]) -> Vec<i64> {
    let c = v[s];
    let mut out = v.to_vec();
    for (j, x) in out.iter_mut().enumerate() {
        *x -= c * cartan[j][s];
    }
    out
}

impl WeylGroup {
    pub fn new(ty: CoxeterType) -> Result<Self> {
        Self::with_datum(CoxeterDatum::new(ty), GroupBudget::default())
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Self::new(label.parse()?)
    }

    pub fn with_datum(datum: CoxeterDatum, budget: GroupBudget) -> Result<Self> {
        let ty = datum.ty;
        if ty.rank > budget.max_rank || ty.order() > budget.max_order {
            return Err(Error::GroupBudget(format!(
                "{ty} has rank {} and order {}, limits are {} and {}",
                ty.rank,
                ty.order(),
                budget.max_rank,
                budget.max_order
            )));
        }
        let n = ty.rank;
        let cartan = ty.cartan();
        // Orbit of rho in fundamental-weight coordinates; (w rho)_s < 0 iff s is a left descent.
        let rho = vec![1i64; n];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut vecs = vec![rho.clone()];
        let mut lens = vec![0u32];
        index.insert(rho, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for s in 0..n {
                let v = reflect(&vecs[i], s, &cartan);
                if !index.contains_key(&v) {
                    if vecs.len() as u64 >= budget.max_order {
                        return Err(Error::GroupBudget(format!("enumeration of {ty} exceeded {}", budget.max_order)));
                    }
                    index.insert(v.clone(), vecs.len());
                    vecs.push(v);
                    lens.push(lens[i] + 1);
                    queue.push_back(vecs.len() - 1);
                }
            }
        }
        let size = vecs.len();
        // Canonical words: repeatedly strip the smallest left descent.
        let raw_words: Vec<Vec<u8>> = (0..size)
            .map(|i| {
                let mut v = vecs[i].clone();
                let mut w = Vec::new();
                while let Some(s) = (0..n).find(|&s| v[s] < 0) {
                    w.push(s as u8);
                    v = reflect(&v, s, &cartan);
                }
                w
            })
            .collect();
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| (lens[a], &raw_words[a]).cmp(&(lens[b], &raw_words[b])));
        let mut new_id = vec![0usize; size];
        for (k, &old) in order.iter().enumerate() {
            new_id[old] = k;
        }
        let words: Vec<Vec<u8>> = order.iter().map(|&o| raw_words[o].clone()).collect();
        let lengths: Vec<u32> = order.iter().map(|&o| lens[o]).collect();
        let vec_of: Vec<Vec<i64>> = order.iter().map(|&o| vecs[o].clone()).collect();
        let lookup = |v: &Vec<i64>| new_id[index[v]];
        let left: Vec<Vec<u32>> =
            (0..n).map(|s| (0..size).map(|w| lookup(&reflect(&vec_of[w], s, &cartan)) as u32).collect()).collect();
        let apply_word = |word: &[u8], start: &Vec<i64>| -> Vec<i64> {
            let mut v = start.clone();
            for &s in word.iter().rev() {
                v = reflect(&v, s as usize, &cartan);
            }
            v
        };
        let rho = vec![1i64; n];
        let right: Vec<Vec<u32>> = (0..n)
            .map(|s| {
                let srho = reflect(&rho, s, &cartan);
                (0..size).map(|w| lookup(&apply_word(&words[w], &srho)) as u32).collect()
            })
            .collect();
        let ldesc: Vec<u32> =
            (0..size).map(|w| (0..n).filter(|&s| vec_of[w][s] < 0).fold(0u32, |m, s| m | 1 << s)).collect();
        let inverse: Vec<u32> = (0..size)
            .map(|w| {
                let rev: Vec<u8> = words[w].iter().rev().copied().collect();
                lookup(&apply_word(&rev, &rho)) as u32
            })
            .collect();
        let rdesc: Vec<u32> = (0..size).map(|w| ldesc[inverse[w] as usize]).collect();
        let w0 = (0..size).max_by_key(|&w| lengths[w]).unwrap();
        let mut g = Self { datum, words, lengths, left, right, inverse, ldesc, rdesc, w0, bruhat_lower: Vec::new() };
        g.bruhat_lower = g.subword_intervals();
        Ok(g)
    }

    /// Lower Bruhat intervals from the subword property: products of subwords of the canonical word.
    fn subword_intervals(&self) -> Vec<EltSet> {
        let size = self.size();
        (0..size)
            .map(|w| {
                let mut set = EltSet::new(size);
                set.insert(0);
                for &s in &self.words[w] {
                    let cur: Vec<Elt> = set.iter().collect();
                    for u in cur {
                        set.insert(self.right[s as usize][u] as usize);
                    }
                }
                set
            })
            .collect()
    }

    pub fn datum(&self) -> &CoxeterDatum {
        &self.datum
    }

    pub fn coxeter_type(&self) -> CoxeterType {
        self.datum.ty
    }

    pub fn rank(&self) -> usize {
        self.datum.ty.rank
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn elements(&self) -> std::ops::Range<Elt> {
        0..self.size()
    }

    pub fn identity(&self) -> Elt {
        0
    }

    pub fn length(&self, w: Elt) -> usize {
        self.lengths[w] as usize
    }

    pub fn word(&self, w: Elt) -> &[u8] {
        &self.words[w]
    }

    /// `s * w`.
    pub fn lmul(&self, s: usize, w: Elt) -> Elt {
        self.left[s][w] as usize
    }

    /// `w * s`.
    pub fn rmul(&self, w: Elt, s: usize) -> Elt {
        self.right[s][w] as usize
    }

    pub fn mul(&self, x: Elt, y: Elt) -> Elt {
        self.words[x].iter().rev().fold(y, |acc, &s| self.lmul(s as usize, acc))
    }

    pub fn inverse(&self, w: Elt) -> Elt {
        self.inverse[w] as usize
    }

    pub fn generator(&self, s: usize) -> Elt {
        self.lmul(s, 0)
    }

    pub fn left_descents(&self, w: Elt) -> u32 {
        self.ldesc[w]
    }

    pub fn right_descents(&self, w: Elt) -> u32 {
        self.rdesc[w]
    }

    pub fn is_left_descent(&self, s: usize, w: Elt) -> bool {
        self.ldesc[w] >> s & 1 == 1
    }

    pub fn is_right_descent(&self, w: Elt, s: usize) -> bool {
        self.rdesc[w] >> s & 1 == 1
    }

    pub fn longest(&self) -> Elt {
        self.w0
    }

    pub fn num_positive_roots(&self) -> usize {
        self.length(self.w0)
    }

    /// The longest element of the parabolic subgroup `W_lambda`.
    pub fn longest_element(&self, lambda: ParabolicSet) -> Elt {
        let mut w = 0;
        // Multiply by any ascent in lambda until none remains.
        while let Some(s) = lambda.members().into_iter().find(|&s| !self.is_left_descent(s, w)) {
            w = self.lmul(s, w);
        }
        w
    }

    /// Elements of `W_lambda`.
    pub fn parabolic_subgroup(&self, lambda: ParabolicSet) -> Vec<Elt> {
        let mut seen = EltSet::new(self.size());
        seen.insert(0);
        let mut queue = VecDeque::from([0]);
        while let Some(w) = queue.pop_front() {
            for s in lambda.members() {
                let v = self.lmul(s, w);
                if !seen.contains(v) {
                    seen.insert(v);
                    queue.push_back(v);
                }
            }
        }
        seen.iter().collect()
    }

    pub fn bruhat_leq(&self, y: Elt, w: Elt) -> bool {
        self.bruhat_lower[w].contains(y)
    }

    pub fn bruhat_interval(&self, w: Elt) -> &EltSet {
        &self.bruhat_lower[w]
    }

    /// Canonical word rendered as `s1.s2.s1`, or `e`.
    pub fn render(&self, w: Elt) -> String {
        if self.words[w].is_empty() {
            return "e".into();
        }
        let parts: Vec<String> = self.words[w].iter().map(|s| format!("s{}", s + 1)).collect();
        parts.join(".")
    }

    /// Parses `s1.s2` (any reduced or unreduced word) or `e`.
    pub fn parse_element(&self, text: &str) -> Result<Elt> {
        let t = text.trim();
        if t == "e" || t.is_empty() {
            return Ok(0);
        }
        let mut w = 0;
        for part in t.split('.') {
            let s = ParabolicSet::parse(part, self.rank())?.members();
            if s.len() != 1 {
                return Err(Error::Parse(format!("bad word `{text}`")));
            }
            w = self.rmul(w, s[0]);
        }
        Ok(w)
    }

    /// Element with a given word (product left to right).
    pub fn from_word(&self, word: &[usize]) -> Elt {
        word.iter().fold(0, |w, &s| self.rmul(w, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for (t, n) in [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12), ("A3", 24), ("B3", 48)] {
            assert_eq!(WeylGroup::from_label(t).unwrap().size(), n, "{t}");
        }
    }

    #[test]
    fn a2_examples() {
        let g = WeylGroup::from_label("A2").unwrap();
        assert_eq!(g.left_descents(0), 0);
        assert_eq!(g.left_descents(g.longest()), 0b11);
        let s1s2 = g.from_word(&[0, 1]);
        assert_eq!(g.left_descents(s1s2), 0b01);
        assert_eq!(g.render(g.longest()), "s1.s2.s1");
        assert_eq!(g.longest_element(ParabolicSet(0b01)), g.generator(0));
        assert!(!g.bruhat_leq(g.generator(0), g.generator(1)));
        assert!(g.bruhat_leq(g.generator(0), g.from_word(&[1, 0])));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(WeylGroup::from_label("A5"), Err(Error::GroupBudget(_))));
        assert!(matches!("Z9".parse::<CoxeterType>(), Err(Error::UnknownType(_))));
    }
}
