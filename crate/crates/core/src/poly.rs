//! Dense univariate polynomials over double-precision complex scalars.
//!
//! Coefficients are stored lowest degree first. All loops run in a fixed
//! index order so results are bit-reproducible from run to run.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};

/// Scalar type used throughout the crate.
pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// `exp(2πi·g/q)`, the `g`-th power of the primitive `q`-th root of unity.
pub fn unity_root(q: usize, g: usize) -> C64 {
    let g = g % q;
    // exact values on the axes keep symmetric node sets symmetric
    if 4 * g % q == 0 {
        return match 4 * g / q {
            0 => ONE,
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, 2.0 * PI * g as f64 / q as f64)
}

pub(crate) fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Dense polynomial `p(x) = Σ p_i x^i`.
///
/// The leading stored coefficient is nonzero except for the zero
/// polynomial, which is kept as a single zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

/// Result of [`Poly::reverse`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reversed {
    pub poly: Poly,
    /// Set when `p_0 = 0`: the reverse has lower degree and its zeros are
    /// no longer the reciprocals of all zeros of `p`.
    pub degree_dropped: bool,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        Self::constant(ZERO)
    }

    /// Monic polynomial with exactly the given multiset of zeros.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut coeffs = vec![ONE];
        for &r in roots {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            coeffs = next;
        }
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> C64 {
        self.coeffs[self.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> C64 {
        self.coeffs.get(i).copied().unwrap_or(ZERO)
    }

    /// Horner evaluation without the finiteness check.
    pub fn horner(&self, x: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
    }

    /// Horner evaluation; a non-finite result is a [`Error::Range`].
    pub fn eval(&self, x: C64) -> Result<C64> {
        let v = self.horner(x);
        if is_finite(v) {
            Ok(v)
        } else {
            Err(Error::Range(format!("p({x}) is not finite")))
        }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    /// `x^d p(1/x)`: the coefficient list reversed.
    pub fn reverse(&self) -> Reversed {
        let degree_dropped = self.coeffs[0] == ZERO && self.degree() > 0;
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Reversed {
            poly: Poly::new(coeffs),
            degree_dropped,
        }
    }

    /// `t(y) = p(c + ρy)`, so the zeros satisfy `x_j = c + ρ·y_j`.
    ///
    /// Taylor shift by repeated synthetic division, then scaling.
    pub fn shift_scale(&self, c: C64, rho: f64) -> Result<Poly> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::Domain(format!("scale factor must be positive, got {rho}")));
        }
        let mut b = self.coeffs.clone();
        let n = self.degree();
        for k in 0..n {
            for j in (k..n).rev() {
                let upper = b[j + 1];
                b[j] += c * upper;
            }
        }
        let mut scale = 1.0;
        for coeff in b.iter_mut() {
            *coeff *= scale;
            scale *= rho;
        }
        if b.iter().all(|&z| is_finite(z)) {
            Ok(Poly::new(b))
        } else {
            Err(Error::Range("shifted coefficients overflow".into()))
        }
    }

    /// `p mod (x^q − 1)`: coefficient `p_i` folded into slot `i mod q`.
    pub fn mod_cyclotomic(&self, q: usize) -> Result<Poly> {
        if q == 0 {
            return Err(Error::Domain("q must be at least 1".into()));
        }
        let mut folded = vec![ZERO; q.min(self.coeffs.len())];
        for (i, &c) in self.coeffs.iter().enumerate() {
            folded[i % q] += c;
        }
        Ok(Poly::new(folded))
    }

    /// `[p(ζ_q^g)]` for `g = 0..q`.
    ///
    /// Radix-2 FFT of the folded coefficients when `q` is a power of two,
    /// node-wise Horner otherwise.
    pub fn eval_at_unity(&self, q: usize) -> Result<Vec<C64>> {
        let folded = self.mod_cyclotomic(q)?;
        if q.is_power_of_two() {
            let mut buf = vec![ZERO; q];
            buf[..folded.coeffs.len()].copy_from_slice(&folded.coeffs);
            // the inverse transform uses exp(+2πi·jk/q), matching ζ_q
            let fft = FftPlanner::new().plan_fft(q, FftDirection::Inverse);
            fft.process(&mut buf);
            Ok(buf)
        } else {
            Ok((0..q).map(|g| folded.horner(unity_root(q, g))).collect())
        }
    }

    /// Split `p(y) = e(y²) + y·o(y²)`.
    pub fn even_odd(&self) -> (Poly, Poly) {
        let even = self.coeffs.iter().step_by(2).copied().collect();
        let odd = self.coeffs.iter().skip(1).step_by(2).copied().collect();
        (Poly::new(even), Poly::new(odd))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `x^k · p(x)`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly::new(coeffs)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Display for Poly {
    /// Polynomial text format: the degree, then one `re im` pair per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.degree())?;
        for c in &self.coeffs {
            writeln!(f, "{} {}", c.re, c.im)?;
        }
        Ok(())
    }
}

/// Closed disc `D(c, ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    center: C64,
    radius: f64,
}

impl Disc {
    pub fn new(center: C64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !is_finite(center) {
            return Err(Error::Domain(format!("invalid disc D({center}, {radius})")));
        }
        Ok(Disc { center, radius })
    }

    pub fn unit() -> Self {
        Disc {
            center: ZERO,
            radius: 1.0,
        }
    }

    pub fn center(&self) -> C64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, z: C64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &Poly, b: &Poly, tol: f64) -> bool {
        a.degree() == b.degree()
            && a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn eval_examples() {
        let p = Poly::from_real(&[6.0, -5.0, 1.0]);
        assert_eq!(p.eval(c(2.0, 0.0)).unwrap(), ZERO);
        assert_eq!(Poly::from_real(&[7.0]).eval(c(-3.5, 2.0)).unwrap(), c(7.0, 0.0));
        let cube = Poly::from_real(&[-8.0, 0.0, 0.0, 1.0]);
        assert_eq!(cube.eval(ZERO).unwrap(), c(-8.0, 0.0));
    }

    #[test]
    fn eval_overflow_is_range_error() {
        let p = Poly::from_real(&[0.0, 0.0, 1.0]);
        assert!(matches!(p.eval(c(1e200, 0.0)), Err(Error::Range(_))));
    }

    #[test]
    fn derivative_examples() {
        let p = Poly::from_real(&[6.0, -5.0, 1.0]);
        assert_eq!(p.derivative(), Poly::from_real(&[-5.0, 2.0]));
        assert_eq!(Poly::from_real(&[7.0]).derivative(), Poly::zero());
        let cube = Poly::from_real(&[-8.0, 0.0, 0.0, 1.0]);
        assert_eq!(cube.derivative(), Poly::from_real(&[0.0, 0.0, 3.0]));
    }

    #[test]
    fn reverse_examples() {
        let p = Poly::from_real(&[2.0, -3.0, 1.0]);
        let r = p.reverse();
        assert_eq!(r.poly, Poly::from_real(&[1.0, -3.0, 2.0]));
        assert!(!r.degree_dropped);
        // zeros {1, 2} map to {1, 0.5}
        assert_eq!(r.poly.eval(c(1.0, 0.0)).unwrap(), ZERO);
        assert_eq!(r.poly.eval(c(0.5, 0.0)).unwrap(), ZERO);

        let pal = Poly::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(pal.reverse().poly, pal);

        let x = Poly::from_real(&[0.0, 1.0]);
        let r = x.reverse();
        assert_eq!(r.poly, Poly::from_real(&[1.0]));
        assert!(r.degree_dropped);
    }

    #[test]
    fn shift_scale_examples() {
        let p = Poly::from_real(&[-3.0, 1.0]);
        assert_eq!(p.shift_scale(c(3.0, 0.0), 1.0).unwrap(), Poly::from_real(&[0.0, 1.0]));

        let p = Poly::from_real(&[6.0, -5.0, 1.0]);
        let t = p.shift_scale(ZERO, 2.0).unwrap();
        assert_eq!(t, Poly::from_real(&[6.0, -10.0, 4.0]));
        assert!(t.eval(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(t.eval(c(1.5, 0.0)).unwrap().norm() < 1e-15);

        let x = Poly::from_real(&[0.0, 1.0]);
        let t = x.shift_scale(c(1.0, 0.0), 0.5).unwrap();
        assert_eq!(t, Poly::from_real(&[1.0, 0.5]));
        assert_eq!(t.eval(c(-2.0, 0.0)).unwrap(), ZERO);

        assert!(matches!(x.shift_scale(ZERO, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn mod_cyclotomic_examples() {
        let cube = Poly::from_real(&[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(cube.mod_cyclotomic(2).unwrap(), Poly::from_real(&[0.0, 1.0]));
        let p = Poly::from_real(&[1.0, 0.0, 1.0, 0.0, 1.0]);
        assert_eq!(p.mod_cyclotomic(4).unwrap(), Poly::from_real(&[2.0, 0.0, 1.0]));
        let small = Poly::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(small.mod_cyclotomic(5).unwrap(), small);
        assert!(small.mod_cyclotomic(0).is_err());
    }

    #[test]
    fn eval_at_unity_examples() {
        let x = Poly::from_real(&[0.0, 1.0]);
        let v = x.eval_at_unity(4).unwrap();
        let want = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        let v = p.eval_at_unity(2).unwrap();
        assert!((v[0] - c(2.0, 0.0)).norm() < 1e-15 && (v[1] - c(2.0, 0.0)).norm() < 1e-15);
        let one = Poly::from_real(&[1.0]);
        assert_eq!(one.eval_at_unity(3).unwrap(), vec![ONE; 3]);
    }

    #[test]
    fn eval_at_unity_matches_horner() {
        let p = Poly::new((0..23).map(|i| c((i as f64).sin(), (i as f64 * 0.7).cos())).collect());
        for q in [1, 3, 7, 8, 16, 32, 50] {
            let fast = p.eval_at_unity(q).unwrap();
            for (g, v) in fast.iter().enumerate() {
                let direct = p.horner(unity_root(q, g));
                let scale = p.coeffs().iter().map(|z| z.norm()).sum::<f64>();
                assert!((v - direct).norm() <= 8.0 * f64::EPSILON * scale * 4.0, "q={q} g={g}");
            }
        }
    }

    #[test]
    fn from_roots_examples() {
        assert_eq!(
            Poly::from_roots(&[c(2.0, 0.0), c(3.0, 0.0)]),
            Poly::from_real(&[6.0, -5.0, 1.0])
        );
        assert_eq!(Poly::from_roots(&[]), Poly::from_real(&[1.0]));
        let p = Poly::from_roots(&[c(0.0, 0.5), c(2.0, 0.0)]);
        let want = Poly::new(vec![c(0.0, 1.0), c(-2.0, -0.5), ONE]);
        assert!(close(&p, &want, 1e-15));
    }

    #[test]
    fn display_uses_text_format() {
        let p = Poly::from_real(&[6.0, -5.0, 1.0]);
        assert_eq!(p.to_string(), "2\n6 0\n-5 0\n1 0\n");
    }

    #[test]
    fn disc_rejects_bad_radius() {
        assert!(Disc::new(ZERO, 0.0).is_err());
        assert!(Disc::new(ZERO, f64::INFINITY).is_err());
        assert!(Disc::new(c(1.0, 1.0), 2.0).unwrap().contains(c(2.0, 2.0)));
    }
}
