//! Scalar-ring contexts used by the generic linear algebra.
//!
//! A context owns whatever data the arithmetic needs (the uniformiser, a prime, ...);
//! elements are plain values.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::laurent::LaurentInt;
use super::local::{cyclo_ctx, cyclo_from_laurent, cyclo_inv, cyclo_mul, local_add, local_div, local_mul, CycloCtx, CycloScalar, LocalScalar};
use super::qpoly::QPoly;
use super::ratfunc::RatFunc;
use crate::linalg::modp;

/// Which scalar ring a module or computation lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "ring", rename_all = "snake_case")]
pub enum RingTag {
    Integral,
    Generic,
    Local { e: u32 },
    Residue { e: u32 },
    AtOne,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Integral => f.write_str("Z[t,t^-1]"),
            RingTag::Generic => f.write_str("Q(t)"),
            RingTag::Local { e } => write!(f, "Q_(Phi_{})", 2 * e),
            RingTag::Residue { e } => write!(f, "k_(Phi_{})", 2 * e),
            RingTag::AtOne => f.write_str("Q"),
        }
    }
}

pub trait Ring: Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Image of an element of `Z[t, t^-1]`.
    fn from_laurent(&self, p: &LaurentInt) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;
    fn tag(&self) -> RingTag;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_int(&self, c: i64) -> Self::Elem {
        self.from_laurent(&LaurentInt::constant(c))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// Rings in which the elimination routines may divide.
///
/// For the local ring, `div(a, b)` is only required when `b` has valuation at most that of `a`;
/// the elimination routines only divide by entries of minimal [`pivot_key`](Field::pivot_key).
pub trait Field: Ring {
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `(valuation, size)`; smaller keys make better pivots.
    fn pivot_key(&self, a: &Self::Elem) -> (i64, u64);

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        self.div(&self.one(), a)
    }
}

/// `Z[t, t^-1]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integral;

impl Ring for Integral {
    type Elem = LaurentInt;
    fn zero(&self) -> LaurentInt {
        LaurentInt::zero()
    }
    fn one(&self) -> LaurentInt {
        LaurentInt::one()
    }
    fn is_zero(&self, a: &LaurentInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &LaurentInt, b: &LaurentInt) -> LaurentInt {
        a + b
    }
    fn neg(&self, a: &LaurentInt) -> LaurentInt {
        -a
    }
    fn mul(&self, a: &LaurentInt, b: &LaurentInt) -> LaurentInt {
        a * b
    }
    fn sub(&self, a: &LaurentInt, b: &LaurentInt) -> LaurentInt {
        a - b
    }
    fn from_laurent(&self, p: &LaurentInt) -> LaurentInt {
        p.clone()
    }
    fn render(&self, a: &LaurentInt) -> String {
        a.to_string()
    }
    fn tag(&self) -> RingTag {
        RingTag::Integral
    }
}

/// The generic fibre `K = Q(t)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct GenericField;

impl Ring for GenericField {
    type Elem = RatFunc;
    fn zero(&self) -> RatFunc {
        RatFunc::zero()
    }
    fn one(&self) -> RatFunc {
        RatFunc::one()
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn from_laurent(&self, p: &LaurentInt) -> RatFunc {
        RatFunc::from_laurent(p)
    }
    fn render(&self, a: &RatFunc) -> String {
        a.to_string()
    }
    fn tag(&self) -> RingTag {
        RingTag::Generic
    }
}

impl Field for GenericField {
    fn div(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.div(b)
    }
    fn pivot_key(&self, a: &RatFunc) -> (i64, u64) {
        (0, a.cost())
    }
}

/// The discrete valuation ring `Q` for a fixed `e`.
#[derive(Clone, Debug)]
pub struct LocalRing {
    ctx: Arc<CycloCtx>,
}

impl LocalRing {
    pub fn new(e: u32) -> Self {
        Self { ctx: cyclo_ctx(e) }
    }

    pub fn e(&self) -> u32 {
        self.ctx.e
    }

    pub fn residue(&self) -> ResidueField {
        ResidueField { ctx: self.ctx.clone() }
    }

    pub fn reduce(&self, a: &LocalScalar) -> CycloScalar {
        CycloScalar::from_reduced(self.ctx.e, super::local::reduce_local(&self.ctx, a))
    }

    pub fn valuation(&self, a: &LocalScalar) -> i64 {
        a.valuation()
    }

    /// The uniformiser `Phi_{2e}(t)`.
    pub fn uniformiser(&self) -> LocalScalar {
        LocalScalar::from_parts(self.ctx.e, RatFunc::from_qpoly(self.ctx.phi.clone()), 1)
    }

    pub fn from_ratfunc(&self, f: RatFunc) -> Option<LocalScalar> {
        LocalScalar::new(self.ctx.e, f).ok()
    }
}

impl Ring for LocalRing {
    type Elem = LocalScalar;
    fn zero(&self) -> LocalScalar {
        LocalScalar::zero(self.ctx.e)
    }
    fn one(&self) -> LocalScalar {
        LocalScalar::one(self.ctx.e)
    }
    fn is_zero(&self, a: &LocalScalar) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &LocalScalar, b: &LocalScalar) -> LocalScalar {
        local_add(&self.ctx, a, b)
    }
    fn neg(&self, a: &LocalScalar) -> LocalScalar {
        a.neg()
    }
    fn mul(&self, a: &LocalScalar, b: &LocalScalar) -> LocalScalar {
        local_mul(a, b)
    }
    fn from_laurent(&self, p: &LaurentInt) -> LocalScalar {
        LocalScalar::from_laurent(self.ctx.e, p)
    }
    fn render(&self, a: &LocalScalar) -> String {
        a.to_string()
    }
    fn tag(&self) -> RingTag {
        RingTag::Local { e: self.ctx.e }
    }
}

impl Field for LocalRing {
    fn div(&self, a: &LocalScalar, b: &LocalScalar) -> LocalScalar {
        debug_assert!(a.is_zero() || b.valuation() <= a.valuation(), "non-integral quotient in local ring");
        local_div(a, b)
    }
    fn pivot_key(&self, a: &LocalScalar) -> (i64, u64) {
        (a.valuation(), a.value().cost())
    }
}

/// The residue field `k` for a fixed `e`.
#[derive(Clone, Debug)]
pub struct ResidueField {
    ctx: Arc<CycloCtx>,
}

impl ResidueField {
    pub fn new(e: u32) -> Self {
        Self { ctx: cyclo_ctx(e) }
    }

    pub fn e(&self) -> u32 {
        self.ctx.e
    }
}

impl Ring for ResidueField {
    type Elem = CycloScalar;
    fn zero(&self) -> CycloScalar {
        CycloScalar::zero(self.ctx.e)
    }
    fn one(&self) -> CycloScalar {
        CycloScalar::one(self.ctx.e)
    }
    fn is_zero(&self, a: &CycloScalar) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        a.add(b)
    }
    fn neg(&self, a: &CycloScalar) -> CycloScalar {
        a.neg()
    }
    fn mul(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        CycloScalar::from_reduced(self.ctx.e, cyclo_mul(&self.ctx, a.value(), b.value()))
    }
    fn sub(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        a.sub(b)
    }
    fn from_laurent(&self, p: &LaurentInt) -> CycloScalar {
        CycloScalar::from_reduced(self.ctx.e, cyclo_from_laurent(&self.ctx, p))
    }
    fn render(&self, a: &CycloScalar) -> String {
        a.to_string()
    }
    fn tag(&self) -> RingTag {
        RingTag::Residue { e: self.ctx.e }
    }
}

impl Field for ResidueField {
    fn div(&self, a: &CycloScalar, b: &CycloScalar) -> CycloScalar {
        let bi = cyclo_inv(&self.ctx, b.value()).expect("division by zero in residue field");
        CycloScalar::from_reduced(self.ctx.e, cyclo_mul(&self.ctx, a.value(), &bi))
    }
    fn pivot_key(&self, a: &CycloScalar) -> (i64, u64) {
        (0, a.value().cost())
    }
}

/// Specialisation `t -> 1`, landing in `Q`.
#[derive(Clone, Copy, Debug, Default)]
pub struct AtOne;

impl Ring for AtOne {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_laurent(&self, p: &LaurentInt) -> BigRational {
        BigRational::from_integer(p.eval_one())
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn tag(&self) -> RingTag {
        RingTag::AtOne
    }
}

impl Field for AtOne {
    fn div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a / b
    }
    fn pivot_key(&self, a: &BigRational) -> (i64, u64) {
        (0, a.numer().bits() + a.denom().bits())
    }
}

/// Specialisation `t -> t0` in `F_p`; rank over it bounds the rank over `Q(t)` from below.
#[derive(Clone, Copy, Debug)]
pub struct ModP {
    pub p: u64,
    pub t0: u64,
}

impl ModP {
    pub const DEFAULT: ModP = ModP { p: 2_147_483_647, t0: 1_234_567 };

    pub fn reduce_rational(&self, c: &BigRational) -> Option<u64> {
        let pb = BigInt::from(self.p);
        let m = |x: &BigInt| -> u64 {
            let r = ((x % &pb) + &pb) % &pb;
            u64::try_from(r).expect("residue fits")
        };
        let d = m(c.denom());
        if d == 0 {
            return None;
        }
        Some(modp::mul_mod(m(c.numer()), modp::inv_mod(d, self.p), self.p))
    }

    /// Value of `t^shift * num / den` at `t0`, if the denominator survives.
    pub fn eval_ratfunc(&self, f: &RatFunc) -> Option<u64> {
        if f.is_zero() {
            return Some(0);
        }
        let ev = |q: &QPoly| -> Option<u64> {
            let mut acc = 0u64;
            for c in q.coeffs().iter().rev() {
                acc = (modp::mul_mod(acc, self.t0, self.p) + self.reduce_rational(c)?) % self.p;
            }
            Some(acc)
        };
        let n = ev(f.num())?;
        let d = ev(f.den())?;
        if d == 0 {
            return None;
        }
        let base = if f.shift() >= 0 { self.t0 } else { modp::inv_mod(self.t0, self.p) };
        let pw = modp::pow_mod(base, f.shift().unsigned_abs(), self.p);
        Some(modp::mul_mod(modp::mul_mod(n, modp::inv_mod(d, self.p), self.p), pw, self.p))
    }
}

impl Ring for ModP {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        modp::mul_mod(*a, *b, self.p)
    }
    fn from_laurent(&self, p: &LaurentInt) -> u64 {
        p.eval_mod(self.t0, self.p)
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn tag(&self) -> RingTag {
        RingTag::AtOne
    }
}

impl Field for ModP {
    fn div(&self, a: &u64, b: &u64) -> u64 {
        modp::mul_mod(*a, modp::inv_mod(*b, self.p), self.p)
    }
    fn pivot_key(&self, _a: &u64) -> (i64, u64) {
        (0, 0)
    }
}
