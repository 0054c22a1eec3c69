//! Coefficient rings for truncated series.
//!
//! Every ring used as a series coefficient implements [`Coeff`]: exact
//! rationals, formal MZV symbols ([`crate::MzvExpr`]), complex floats for the
//! polylogarithm integrator, and [`Ball`] (complex midpoint with a radius) for
//! numerics that need a propagated error bound.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Commutative ring with a conjugation involution.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    /// Ring involution. Identity on real rings.
    fn conj(&self) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn scaled(&self, q: &BigRational) -> Self {
        self.times(&Self::from_rational(q))
    }

    fn accumulate(&mut self, other: &Self) {
        *self = self.plus(other);
    }

    /// `self += a * b`
    fn accumulate_product(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        self.accumulate(&a.times(b));
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Multiplicative inverse when this ring can produce one.
    fn recip(&self) -> Option<Self> {
        self.is_one().then(Self::one)
    }

    /// Multiply by `(-1)^n`.
    fn signed_by_parity(&self, n: usize) -> Self {
        if n.is_multiple_of(2) {
            self.clone()
        } else {
            self.negated()
        }
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
    fn recip(&self) -> Option<Self> {
        (!Coeff::is_zero(self)).then(|| num_traits::Inv::inv(self.clone()))
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflows f64 on its own
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn recip(&self) -> Option<Self> {
        (self.norm() > 0.0).then(|| Complex64::new(1.0, 0.0) / self)
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
    fn accumulate_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

const ULP: f64 = f64::EPSILON;

/// Complex midpoint-radius number: the true value lies in the closed disc of
/// radius `rad` around `mid`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Ball {
    pub mid: Complex64,
    pub rad: f64,
}

impl Ball {
    pub fn new(mid: Complex64, rad: f64) -> Self {
        Ball { mid, rad }
    }

    pub fn real(value: f64, rad: f64) -> Self {
        Ball {
            mid: Complex64::new(value, 0.0),
            rad,
        }
    }

    pub fn exact(value: f64) -> Self {
        Self::real(value, 0.0)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (self.mid - z).norm() <= self.rad
    }

    fn rounding(mid: Complex64) -> f64 {
        // one rounding per component, plus norm slack
        2.0 * ULP * mid.norm()
    }
}

impl Coeff for Ball {
    fn zero() -> Self {
        Ball::exact(0.0)
    }
    fn one() -> Self {
        Ball::exact(1.0)
    }
    fn is_zero(&self) -> bool {
        self.mid.re == 0.0 && self.mid.im == 0.0 && self.rad == 0.0
    }
    fn plus(&self, other: &Self) -> Self {
        let mid = self.mid + other.mid;
        let rounding = if Coeff::is_zero(&self.mid) || Coeff::is_zero(&other.mid) {
            0.0
        } else {
            Self::rounding(mid)
        };
        Ball::new(mid, self.rad + other.rad + rounding)
    }
    fn negated(&self) -> Self {
        Ball::new(-self.mid, self.rad)
    }
    fn times(&self, other: &Self) -> Self {
        let mid = self.mid * other.mid;
        let rad = self.mid.norm() * other.rad
            + other.mid.norm() * self.rad
            + self.rad * other.rad
            + 2.0 * Self::rounding(mid);
        Ball::new(mid, rad)
    }
    fn from_rational(q: &BigRational) -> Self {
        let v = rational_to_f64(q);
        let exact = BigRational::from_float(v).map(|r| &r == q).unwrap_or(false);
        let rad = if exact { 0.0 } else { v.abs() * ULP };
        Ball::real(v, rad)
    }
    fn conj(&self) -> Self {
        Ball::new(self.mid.conj(), self.rad)
    }
    fn recip(&self) -> Option<Self> {
        let m = self.mid.norm();
        if m <= self.rad {
            return None;
        }
        let mid = Complex64::new(1.0, 0.0) / self.mid;
        Some(Ball::new(
            mid,
            self.rad / (m * (m - self.rad)) + 2.0 * Self::rounding(mid),
        ))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ± {:.1e})", self.mid, self.rad)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn complex_conjugation() {
        let z = Complex64::new(1.0, 2.0);
        assert_eq!(Coeff::conj(&z), Complex64::new(1.0, -2.0));
    }

    #[test]
    fn ball_product_encloses() {
        let a = Ball::real(1.0 / 3.0, 1e-12);
        let b = Ball::real(3.0, 1e-12);
        let p = a.times(&b);
        assert!(p.contains(Complex64::new(1.0, 0.0)));
        assert!(p.rad < 1e-11);
    }

    #[test]
    fn ball_from_rational_exactness() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(Ball::from_rational(&half).rad, 0.0);
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(Ball::from_rational(&third).rad > 0.0);
    }
}
