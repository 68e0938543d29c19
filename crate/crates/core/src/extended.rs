//! Complex numbers with a separate binary exponent.
//!
//! Root squaring drives coefficient magnitudes apart doubly exponentially.
//! Storing `m·2^e` with a normalized mantissa keeps every coefficient
//! representable, so the squared polynomial stays usable long after plain
//! doubles overflow.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{is_finite, Poly, C64, ZERO};

/// `mant · 2^exp` with `max(|re|, |im|)` of the mantissa in `[0.5, 1)`, or zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtComplex {
    mant: C64,
    exp: i64,
}

impl ExtComplex {
    pub const ZERO: ExtComplex = ExtComplex { mant: ZERO, exp: 0 };

    pub fn new(z: C64) -> Self {
        assert!(is_finite(z), "ExtComplex from non-finite value");
        ExtComplex { mant: z, exp: 0 }.normalized()
    }

    fn normalized(self) -> Self {
        let big = self.mant.re.abs().max(self.mant.im.abs());
        if big == 0.0 {
            return Self::ZERO;
        }
        let (_, e) = libm::frexp(big);
        ExtComplex {
            mant: C64::new(libm::ldexp(self.mant.re, -e), libm::ldexp(self.mant.im, -e)),
            exp: self.exp + e as i64,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == ZERO
    }

    /// `log2 |z|`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mant.norm().log2() + self.exp as f64
        }
    }

    /// Conversion back to a double; `None` on overflow.
    pub fn to_c64(&self) -> Option<C64> {
        if self.is_zero() {
            return Some(ZERO);
        }
        let e = self.exp.clamp(-2000, 2000) as i32;
        let z = C64::new(libm::ldexp(self.mant.re, e), libm::ldexp(self.mant.im, e));
        is_finite(z).then_some(z)
    }

    pub fn scale(self, s: C64) -> Self {
        ExtComplex {
            mant: self.mant * s,
            exp: self.exp,
        }
        .normalized()
    }
}

impl Add for ExtComplex {
    type Output = ExtComplex;
    fn add(self, rhs: ExtComplex) -> ExtComplex {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let shift = hi.exp - lo.exp;
        if shift > 1100 {
            return hi;
        }
        let s = -(shift as i32);
        let lo_m = C64::new(libm::ldexp(lo.mant.re, s), libm::ldexp(lo.mant.im, s));
        ExtComplex {
            mant: hi.mant + lo_m,
            exp: hi.exp,
        }
        .normalized()
    }
}

impl Neg for ExtComplex {
    type Output = ExtComplex;
    fn neg(self) -> ExtComplex {
        ExtComplex {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl Sub for ExtComplex {
    type Output = ExtComplex;
    fn sub(self, rhs: ExtComplex) -> ExtComplex {
        self + (-rhs)
    }
}

impl Mul for ExtComplex {
    type Output = ExtComplex;
    fn mul(self, rhs: ExtComplex) -> ExtComplex {
        ExtComplex {
            mant: self.mant * rhs.mant,
            exp: self.exp + rhs.exp,
        }
        .normalized()
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·2^{}", self.mant, self.exp)
    }
}

/// Dense polynomial with extended-exponent coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtPoly {
    coeffs: Vec<ExtComplex>,
}

impl ExtPoly {
    pub fn from_poly(p: &Poly) -> Self {
        ExtPoly {
            coeffs: p.coeffs().iter().map(|&c| ExtComplex::new(c)).collect(),
        }
    }

    pub fn from_coeffs(coeffs: Vec<ExtComplex>) -> Self {
        ExtPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> ExtComplex {
        self.coeffs.get(i).copied().unwrap_or(ExtComplex::ZERO)
    }

    pub fn coeffs(&self) -> &[ExtComplex] {
        &self.coeffs
    }

    /// Plain double coefficients; [`Error::Range`] if any is out of range.
    pub fn to_poly(&self) -> Result<Poly> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.to_c64()
                    .ok_or_else(|| Error::Range(format!("coefficient {i} is {c}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Poly::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_doubles() {
        let a = C64::new(3.5, -1.25);
        let b = C64::new(-0.001, 7.0);
        let (ea, eb) = (ExtComplex::new(a), ExtComplex::new(b));
        assert_eq!((ea + eb).to_c64().unwrap(), a + b);
        assert_eq!((ea - eb).to_c64().unwrap(), a - b);
        assert!(((ea * eb).to_c64().unwrap() - a * b).norm() < 1e-15);
        assert!((ea.log2_abs() - a.norm().log2()).abs() < 1e-15);
    }

    #[test]
    fn survives_far_beyond_double_range() {
        let mut x = ExtComplex::new(C64::new(1e200, 0.0));
        for _ in 0..10 {
            x = x * x;
        }
        assert!((x.log2_abs() - 1024.0 * 200.0 * 10f64.log2()).abs() < 1e-6);
        assert!(x.to_c64().is_none());
        let tiny = ExtComplex::new(C64::new(1.0, 0.0));
        assert_eq!(x + tiny, x);
        assert_eq!((x - x).log2_abs(), f64::NEG_INFINITY);
    }

    #[test]
    fn poly_round_trip() {
        let p = Poly::from_real(&[1.0, -2.5, 0.0, 4.0]);
        assert_eq!(ExtPoly::from_poly(&p).to_poly().unwrap(), p);
    }
}
