use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::LaurentInt;
use super::qpoly::{laurent_to_qpoly, QPoly};

/// Element of `K = Q(t)` in the reduced form `t^shift * num / den`.
///
/// `num(0) != 0`, `den(0) != 0`, `den` monic and coprime to `num`; zero is `num = 0, shift = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
    shift: i64,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self { num: QPoly::zero(), den: QPoly::one(), shift: 0 }
    }

    pub fn one() -> Self {
        Self { num: QPoly::one(), den: QPoly::one(), shift: 0 }
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::new(QPoly::constant(c), QPoly::one(), 0)
    }

    pub fn from_laurent(l: &LaurentInt) -> Self {
        let (p, s) = laurent_to_qpoly(l);
        Self::new(p, QPoly::one(), s)
    }

    pub fn from_qpoly(p: QPoly) -> Self {
        Self::new(p, QPoly::one(), 0)
    }

    /// Normalising constructor for `t^shift * num / den`.
    pub fn new(num: QPoly, den: QPoly, shift: i64) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let (kn, kd) = (num.low_order(), den.low_order());
        let mut num = num.shift_down(kn);
        let mut den = den.shift_down(kd);
        let shift = shift + kn as i64 - kd as i64;
        if !den.is_constant() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides");
                den = den.div_exact(&g).expect("gcd divides");
            }
        }
        let l = den.lead();
        if !l.is_one() {
            let li = l.recip();
            num = num.scale(&li);
            den = den.scale(&li);
        }
        Self { num, den, shift }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn cost(&self) -> u64 {
        self.num.cost() + self.den.cost()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(o.shift);
        let a = self.num.shift_up((self.shift - s) as usize);
        let b = o.num.shift_up((o.shift - s) as usize);
        if self.den == o.den {
            let num = a.add(&b);
            if self.den.is_one() {
                return Self::new_poly(num, s);
            }
            return Self::new(num, self.den.clone(), s);
        }
        if self.den.is_one() {
            return Self::new(a.mul(&o.den).add(&b), o.den.clone(), s);
        }
        if o.den.is_one() {
            return Self::new(a.add(&b.mul(&self.den)), self.den.clone(), s);
        }
        Self::new(a.mul(&o.den).add(&b.mul(&self.den)), self.den.mul(&o.den), s)
    }

    fn new_poly(num: QPoly, shift: i64) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let k = num.low_order();
        Self { num: num.shift_down(k), den: QPoly::one(), shift: shift + k as i64 }
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone(), shift: self.shift }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let shift = self.shift + o.shift;
        if self.den.is_one() && o.den.is_one() {
            return Self { num: self.num.mul(&o.num), den: QPoly::one(), shift };
        }
        let g1 = if o.den.is_one() { QPoly::one() } else { self.num.gcd(&o.den) };
        let g2 = if self.den.is_one() { QPoly::one() } else { o.num.gcd(&self.den) };
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let l = den.lead();
        if l.is_one() {
            Self { num, den, shift }
        } else {
            let li = l.recip();
            Self { num: num.scale(&li), den: den.scale(&li), shift }
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone(), -self.shift)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// Value at `t = 1`, if the denominator does not vanish there.
    pub fn eval_one(&self) -> Option<BigRational> {
        let one = BigRational::one();
        let d = self.den.eval(&one);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(&one) / d)
    }

    /// The element as an integer Laurent polynomial, if it is one.
    pub fn to_laurent(&self) -> Option<LaurentInt> {
        if !self.den.is_one() {
            return None;
        }
        self.num.to_laurent().map(|p| p.shift(self.shift))
    }
}

fn write_shifted(f: &mut fmt::Formatter<'_>, p: &QPoly, shift: i64) -> fmt::Result {
    if let Some(l) = p.to_laurent() {
        return write!(f, "{}", l.shift(shift));
    }
    let mut first = true;
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &BigRational::zero();
        let mag = if neg { -c } else { c.clone() };
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        let e = i as i64 + shift;
        match e {
            0 => write!(f, "{mag}")?,
            1 if mag.is_one() => f.write_str("t")?,
            1 => write!(f, "{mag}*t")?,
            _ if mag.is_one() => write!(f, "t^{e}")?,
            _ => write!(f, "{mag}*t^{e}")?,
        }
    }
    Ok(())
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if self.den.is_one() {
            return write_shifted(f, &self.num, self.shift);
        }
        f.write_str("(")?;
        write_shifted(f, &self.num, self.shift)?;
        f.write_str(")/(")?;
        write_shifted(f, &self.den, 0)?;
        f.write_str(")")
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
