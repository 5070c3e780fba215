use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::Zero;

use super::laurent::LaurentInt;
use super::qpoly::{cyclotomic_qpoly, QPoly};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// Shared data for a fixed `e`: the uniformiser `Phi_{2e}(t)` and the inverse of `t` modulo it.
#[derive(Debug)]
pub struct CycloCtx {
    pub e: u32,
    pub phi: QPoly,
    t_inv: QPoly,
}

impl CycloCtx {
    fn build(e: u32) -> Self {
        assert!(e >= 1, "e must be positive");
        let phi = cyclotomic_qpoly(2 * e as u64);
        let (_, u, _) = QPoly::monomial(1).xgcd(&phi);
        Self { e, phi, t_inv: u.rem(&cyclotomic_qpoly(2 * e as u64)) }
    }

    pub fn degree(&self) -> usize {
        self.phi.degree().unwrap()
    }

    /// Reduces `t^shift * p` modulo `Phi_{2e}`.
    fn reduce_shifted(&self, p: &QPoly, shift: i64) -> QPoly {
        let mut r = p.rem(&self.phi);
        let (base, k) = if shift >= 0 { (QPoly::monomial(1), shift) } else { (self.t_inv.clone(), -shift) };
        for _ in 0..k {
            r = r.mul(&base).rem(&self.phi);
        }
        r
    }

    fn valuation_of(&self, p: &QPoly) -> i64 {
        p.multiplicity(&self.phi) as i64
    }
}

type CtxCache = RwLock<HashMap<u32, Arc<CycloCtx>>>;

/// Cached context for `e`.
pub fn cyclo_ctx(e: u32) -> Arc<CycloCtx> {
    static CACHE: OnceLock<CtxCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(c) = cache.read().unwrap().get(&e) {
        return c.clone();
    }
    let c = Arc::new(CycloCtx::build(e));
    cache.write().unwrap().insert(e, c.clone());
    c
}

/// Element of the local ring `Q`: `Q[t, t^-1]` localised at `Phi_{2e}(t)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalScalar {
    e: u32,
    value: RatFunc,
    valuation: i64,
}

impl LocalScalar {
    /// Fails with [`Error::NotInLocalRing`] if `Phi_{2e}` divides the denominator.
    pub fn new(e: u32, value: RatFunc) -> Result<Self> {
        let ctx = cyclo_ctx(e);
        if value.is_zero() {
            return Ok(Self { e, value, valuation: 0 });
        }
        let vd = ctx.valuation_of(value.den());
        if vd > 0 {
            return Err(Error::NotInLocalRing);
        }
        let valuation = ctx.valuation_of(value.num());
        Ok(Self { e, value, valuation })
    }

    pub fn from_laurent(e: u32, p: &LaurentInt) -> Self {
        Self::new(e, RatFunc::from_laurent(p)).expect("Laurent polynomials lie in Q")
    }

    pub(crate) fn from_parts(e: u32, value: RatFunc, valuation: i64) -> Self {
        Self { e, value, valuation }
    }

    pub fn zero(e: u32) -> Self {
        Self { e, value: RatFunc::zero(), valuation: 0 }
    }

    pub fn one(e: u32) -> Self {
        Self { e, value: RatFunc::one(), valuation: 0 }
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn value(&self) -> &RatFunc {
        &self.value
    }

    /// Multiplicity of `Phi_{2e}` (meaningless for zero, reported as 0).
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.valuation == 0
    }

    pub fn add(&self, o: &Self) -> Self {
        local_add(&cyclo_ctx(self.e), self, o)
    }

    pub fn neg(&self) -> Self {
        Self { e: self.e, value: self.value.neg(), valuation: self.valuation }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        local_mul(self, o)
    }

    /// Exact quotient when `val(o) <= val(self)`.
    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() || (!self.is_zero() && o.valuation > self.valuation) {
            return Err(Error::NotInLocalRing);
        }
        Ok(local_div(self, o))
    }

    pub fn reduce_mod(&self) -> Result<CycloScalar> {
        reduce_mod(self)
    }
}

pub(crate) fn local_add(ctx: &CycloCtx, a: &LocalScalar, b: &LocalScalar) -> LocalScalar {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let value = a.value.add(&b.value);
    let valuation = if value.is_zero() {
        0
    } else if a.valuation != b.valuation {
        a.valuation.min(b.valuation)
    } else {
        ctx.valuation_of(value.num())
    };
    LocalScalar { e: a.e, value, valuation }
}

pub(crate) fn local_mul(a: &LocalScalar, b: &LocalScalar) -> LocalScalar {
    let value = a.value.mul(&b.value);
    let valuation = if value.is_zero() { 0 } else { a.valuation + b.valuation };
    LocalScalar { e: a.e, value, valuation }
}

pub(crate) fn local_div(a: &LocalScalar, b: &LocalScalar) -> LocalScalar {
    let value = a.value.div(&b.value);
    let valuation = if value.is_zero() { 0 } else { a.valuation - b.valuation };
    LocalScalar { e: a.e, value, valuation }
}

impl fmt::Display for LocalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

impl fmt::Debug for LocalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [v={}]", self.value, self.valuation)
    }
}

/// Element of the residue field `k = Q[t]/(Phi_{2e}(t))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloScalar {
    e: u32,
    value: QPoly,
}

impl CycloScalar {
    pub fn new(e: u32, p: &QPoly) -> Self {
        let ctx = cyclo_ctx(e);
        Self { e, value: p.rem(&ctx.phi) }
    }

    pub fn from_laurent(e: u32, p: &LaurentInt) -> Self {
        let ctx = cyclo_ctx(e);
        Self { e, value: cyclo_from_laurent(&ctx, p) }
    }

    pub(crate) fn from_reduced(e: u32, value: QPoly) -> Self {
        Self { e, value }
    }

    pub fn zero(e: u32) -> Self {
        Self { e, value: QPoly::zero() }
    }

    pub fn one(e: u32) -> Self {
        Self { e, value: QPoly::one() }
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn value(&self) -> &QPoly {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { e: self.e, value: self.value.add(&o.value) }
    }

    pub fn neg(&self) -> Self {
        Self { e: self.e, value: self.value.neg() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { e: self.e, value: self.value.sub(&o.value) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let ctx = cyclo_ctx(self.e);
        Self { e: self.e, value: cyclo_mul(&ctx, &self.value, &o.value) }
    }

    pub fn inv(&self) -> Option<Self> {
        let ctx = cyclo_ctx(self.e);
        cyclo_inv(&ctx, &self.value).map(|value| Self { e: self.e, value })
    }
}

pub(crate) fn cyclo_from_laurent(ctx: &CycloCtx, p: &LaurentInt) -> QPoly {
    let (q, s) = super::qpoly::laurent_to_qpoly(p);
    ctx.reduce_shifted(&q, s)
}

pub(crate) fn cyclo_mul(ctx: &CycloCtx, a: &QPoly, b: &QPoly) -> QPoly {
    let p = a.mul(b);
    if p.degree().is_some_and(|d| d >= ctx.degree()) {
        p.rem(&ctx.phi)
    } else {
        p
    }
}

pub(crate) fn cyclo_inv(ctx: &CycloCtx, a: &QPoly) -> Option<QPoly> {
    if a.is_zero() {
        return None;
    }
    if a.is_constant() {
        return Some(QPoly::constant(a.coeff(0).recip()));
    }
    let (g, u, _) = a.xgcd(&ctx.phi);
    debug_assert!(g.is_one());
    Some(u.rem(&ctx.phi))
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

pub(crate) fn reduce_local(ctx: &CycloCtx, x: &LocalScalar) -> QPoly {
    if x.is_zero() || x.valuation > 0 {
        return QPoly::zero();
    }
    let num = ctx.reduce_shifted(x.value.num(), x.value.shift());
    let den = ctx.reduce_shifted(x.value.den(), 0);
    let dinv = cyclo_inv(ctx, &den).expect("denominator is a unit modulo Phi");
    cyclo_mul(ctx, &num, &dinv)
}

/// Image of `x` in the residue field; rejects elements of negative valuation.
pub fn reduce_mod(x: &LocalScalar) -> Result<CycloScalar> {
    if x.valuation < 0 {
        return Err(Error::NotInLocalRing);
    }
    let ctx = cyclo_ctx(x.e);
    Ok(CycloScalar { e: x.e, value: reduce_local(&ctx, x) })
}

/// Value of a rational number as a residue-field constant.
pub fn cyclo_constant(e: u32, c: BigRational) -> CycloScalar {
    if c.is_zero() {
        return CycloScalar::zero(e);
    }
    CycloScalar { e, value: QPoly::constant(c) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> LaurentInt {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        let x = LocalScalar::from_laurent(3, &l("t^2"));
        assert_eq!(reduce_mod(&x).unwrap().value(), &QPoly::from_ints(&[-1, 1]));
        let phi = LocalScalar::from_laurent(3, &l("1 - t + t^2"));
        assert_eq!(phi.valuation(), 1);
        assert!(reduce_mod(&phi).unwrap().is_zero());
        let inv = LocalScalar::new(3, RatFunc::from_laurent(&l("5 + t")).inv()).unwrap();
        let prod = reduce_mod(&inv).unwrap().mul(&CycloScalar::from_laurent(3, &l("5 + t")));
        assert_eq!(prod, CycloScalar::one(3));
    }

    #[test]
    fn rejects_phi_in_denominator() {
        let v = RatFunc::from_laurent(&l("1 - t + t^2")).inv();
        assert!(LocalScalar::new(3, v).is_err());
    }

    #[test]
    fn valuation_additive() {
        let a = LocalScalar::from_laurent(2, &l("1 + t^2"));
        let b = LocalScalar::from_laurent(2, &l("t^-1 + t"));
        assert_eq!(a.valuation(), 1);
        assert_eq!(b.valuation(), 1);
        assert_eq!(a.mul(&b).valuation(), 2);
        assert_eq!(a.sub(&a).valuation(), 0);
    }
}
