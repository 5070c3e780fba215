use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Element of `Z[t, t^-1]`, stored sparsely as exponent -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentInt {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentInt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let c = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in iter {
            out.add_term(e, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// True for `c * t^k` with a single term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// The involution `t -> t^-1`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Substitutes `x -> x^k` (e.g. a polynomial in `q = t^2` rewritten in `t` with `k = 2`).
    pub fn inflate(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect() }
    }

    /// Inverse of [`inflate`](Self::inflate); `None` if some exponent is not divisible by `k`.
    pub fn deflate(&self, k: i64) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e % k != 0 {
                return None;
            }
            terms.insert(e / k, c.clone());
        }
        Some(Self { terms })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    /// Value at `t = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Value at `t = -1`.
    pub fn eval_minus_one(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| if e.rem_euclid(2) == 0 { c.clone() } else { -c })
            .sum()
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.iter().all(|(e, c)| self.terms.get(&-e) == Some(c))
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Value modulo a prime `p` at `t = t0`; `t0` must be a unit mod `p`.
    pub fn eval_mod(&self, t0: u64, p: u64) -> u64 {
        let inv = crate::linalg::modp::inv_mod(t0 % p, p);
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let base = if *e >= 0 { t0 % p } else { inv };
            let pw = crate::linalg::modp::pow_mod(base, e.unsigned_abs(), p);
            let cm = c.mod_floor_u64(p);
            acc = (acc + crate::linalg::modp::mul_mod(cm, pw, p)) % p;
        }
        acc
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u64().expect("residue fits")
    }
}

impl fmt::Display for LaurentInt {
    /// Canonical rendering, ascending exponents: `3*t^-2 + 1 + t^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mono = match *e {
                0 => String::new(),
                1 => "t".to_string(),
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

impl fmt::Debug for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Splits a signed sum `a + b - c` into `(negative, body)` pieces, keeping `^-k` intact.
pub(crate) fn split_signed_terms(s: &str) -> Result<Vec<(bool, String)>, Error> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let chars: Vec<char> = compact.chars().collect();
    let mut out = Vec::new();
    let mut neg = false;
    let mut cur = String::new();
    let mut depth = 0i32;
    for (i, &ch) in chars.iter().enumerate() {
        let prev = if i > 0 { Some(chars[i - 1]) } else { None };
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let is_sep = (ch == '+' || ch == '-') && depth == 0 && prev != Some('^') && prev != Some('*') && prev != Some('/');
        if is_sep {
            if !cur.is_empty() {
                out.push((neg, std::mem::take(&mut cur)));
            } else if i != 0 {
                return Err(Error::Parse(format!("dangling sign in `{s}`")));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("trailing sign in `{s}`")));
    }
    out.push((neg, cur));
    Ok(out)
}

/// Parses `c`, `c*t^k`, `t^k`, `t` (coefficient text returned raw).
pub(crate) fn split_monomial(body: &str) -> Result<(Option<&str>, i64), Error> {
    let (coef, mono) = match body.find('t') {
        None => return Ok((Some(body), 0)),
        Some(pos) => {
            let coef = &body[..pos];
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            (if coef.is_empty() { None } else { Some(coef) }, &body[pos..])
        }
    };
    let exp = if mono == "t" {
        1
    } else if let Some(rest) = mono.strip_prefix("t^") {
        rest.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in `{body}`")))?
    } else {
        return Err(Error::Parse(format!("bad monomial `{body}`")));
    };
    Ok((coef, exp))
}

impl FromStr for LaurentInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.trim() == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for (neg, body) in split_signed_terms(s)? {
            let (coef, exp) = split_monomial(&body)?;
            let mut c = match coef {
                None => BigInt::one(),
                Some(text) => text.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coefficient `{text}`")))?,
            };
            if neg {
                c = -c;
            }
            out.add_term(exp, c);
        }
        Ok(out)
    }
}

impl Serialize for LaurentInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a LaurentInt> for &'a LaurentInt {
    type Output = LaurentInt;
    fn add(self, rhs: &'a LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentInt {
    type Output = LaurentInt;
    fn add(mut self, rhs: LaurentInt) -> LaurentInt {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentInt> for LaurentInt {
    fn add_assign(&mut self, rhs: &LaurentInt) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentInt> for LaurentInt {
    fn sub_assign(&mut self, rhs: &LaurentInt) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl<'a> Sub<&'a LaurentInt> for &'a LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: &'a LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentInt {
    type Output = LaurentInt;
    fn sub(mut self, rhs: LaurentInt) -> LaurentInt {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        LaurentInt { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        -&self
    }
}

impl<'a> Mul<&'a LaurentInt> for &'a LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: &'a LaurentInt) -> LaurentInt {
        let mut out = LaurentInt::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: LaurentInt) -> LaurentInt {
        &self * &rhs
    }
}

impl From<i64> for LaurentInt {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_canonical() {
        let p = LaurentInt::from_terms([(-2, 3), (0, 1), (4, 1)]);
        assert_eq!(p.to_string(), "3*t^-2 + 1 + t^4");
        assert_eq!(LaurentInt::from_terms([(0, 1), (1, -1)]).to_string(), "1 - t");
        assert_eq!(LaurentInt::from_terms([(-1, -2)]).to_string(), "-2*t^-1");
        assert_eq!(LaurentInt::zero().to_string(), "0");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3*t^-2 + 1 + t^4", "1 - t", "-t^-1 + t", "0", "-5", "t"] {
            let p: LaurentInt = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        let p: LaurentInt = "t^-1 - 2 * t + 7".parse().unwrap();
        assert_eq!(p, LaurentInt::from_terms([(-1, 1), (1, -2), (0, 7)]));
        assert!("3*x".parse::<LaurentInt>().is_err());
        assert!("1 +".parse::<LaurentInt>().is_err());
    }

    #[test]
    fn bar_examples() {
        let sym = LaurentInt::from_terms([(1, 1), (-1, 1)]);
        assert_eq!(sym.bar(), sym);
        assert_eq!(LaurentInt::monomial(1, 2).bar(), LaurentInt::monomial(1, -2));
        assert_eq!(LaurentInt::zero().bar(), LaurentInt::zero());
    }

    #[test]
    fn arithmetic_cancels() {
        let a = LaurentInt::from_terms([(0, 1), (1, 1)]);
        let b = LaurentInt::from_terms([(0, 1), (1, -1)]);
        assert_eq!(&a * &b, LaurentInt::from_terms([(0, 1), (2, -1)]));
        assert!((&a - &a).is_zero());
    }
}
