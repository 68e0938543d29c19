//! Black-box access to a polynomial through its Newton ratio.
//!
//! Every oracle returns `R(x) = p'(x)/p(x) = Σ_j 1/(x − x_j)`. The negated
//! value `−R(x)` is Newton's inverse ratio; consumers that need it negate at
//! the call site. Evaluating at (numerically) a zero of `p` yields
//! [`Error::Pole`] instead of a non-finite value.
//!
//! Adapters compose: deflation, reversal and shift/scale all wrap another
//! oracle and never mutate it. Each oracle counts its own evaluations, so the
//! counter of the innermost oracle measures the total cost of a pipeline.

mod matrix;
mod slp;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub use matrix::{matrix_oracle, MatrixOracle};
pub use slp::{oracle_from_slp, Dual, Instr, SlpOracle, StraightLineProgram};

use crate::error::{Error, Result};
use crate::poly::{is_finite, Poly, C64, ZERO};

/// `|p(x)|` below this is treated as a zero of `p`.
pub const POLE_THRESHOLD: f64 = 1e-300;

/// Evaluator for `R(x) = p'(x)/p(x)` of a polynomial of known degree.
pub trait NewtonOracle: Send + Sync {
    fn degree(&self) -> usize;

    /// `p'(x)/p(x)`.
    fn evaluate(&self, x: C64) -> Result<C64>;

    /// Number of calls to [`NewtonOracle::evaluate`] (and equivalent bulk
    /// evaluations) made on this oracle so far.
    fn eval_count(&self) -> u64;

    /// The coefficient-backed oracle underneath, when there is one with no
    /// transformation in between. Enables the DFT fast path for Cauchy sums.
    fn coefficients(&self) -> Option<&CoeffOracle> {
        None
    }
}

impl<O: NewtonOracle + ?Sized> NewtonOracle for &O {
    fn degree(&self) -> usize {
        (**self).degree()
    }
    fn evaluate(&self, x: C64) -> Result<C64> {
        (**self).evaluate(x)
    }
    fn eval_count(&self) -> u64 {
        (**self).eval_count()
    }
    fn coefficients(&self) -> Option<&CoeffOracle> {
        (**self).coefficients()
    }
}

impl<O: NewtonOracle + ?Sized> NewtonOracle for Box<O> {
    fn degree(&self) -> usize {
        (**self).degree()
    }
    fn evaluate(&self, x: C64) -> Result<C64> {
        (**self).evaluate(x)
    }
    fn eval_count(&self) -> u64 {
        (**self).eval_count()
    }
    fn coefficients(&self) -> Option<&CoeffOracle> {
        (**self).coefficients()
    }
}

impl<O: NewtonOracle + ?Sized> NewtonOracle for Arc<O> {
    fn degree(&self) -> usize {
        (**self).degree()
    }
    fn evaluate(&self, x: C64) -> Result<C64> {
        (**self).evaluate(x)
    }
    fn eval_count(&self) -> u64 {
        (**self).eval_count()
    }
    fn coefficients(&self) -> Option<&CoeffOracle> {
        (**self).coefficients()
    }
}

/// Thread-safe evaluation counter.
#[derive(Debug, Default)]
pub struct EvalCounter(AtomicU64);

impl EvalCounter {
    pub fn tick(&self) {
        self.add(1);
    }

    pub fn add(&self, n: u64) {
        self.0.fetch_add(n, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

pub(crate) fn ratio_or_pole(x: C64, num: C64, den: C64) -> Result<C64> {
    if !(den.norm() >= POLE_THRESHOLD) {
        return Err(Error::Pole { at: x });
    }
    let r = num / den;
    if is_finite(r) {
        Ok(r)
    } else {
        Err(Error::Pole { at: x })
    }
}

/// Oracle backed by the coefficients of `p`.
#[derive(Debug)]
pub struct CoeffOracle {
    p: Poly,
    dp: Poly,
    rev: Poly,
    drev: Poly,
    counter: EvalCounter,
}

/// Oracle for a polynomial given by its coefficients.
pub fn oracle_from_coeffs(p: &Poly) -> Result<CoeffOracle> {
    CoeffOracle::new(p.clone())
}

impl CoeffOracle {
    pub fn new(p: Poly) -> Result<Self> {
        if p.degree() == 0 {
            return Err(Error::Domain("Newton ratio needs degree at least 1".into()));
        }
        let dp = p.derivative();
        let mut rc = p.coeffs().to_vec();
        rc.reverse();
        // keep the full length: x^d p(1/x) even when p_0 = 0
        let rev = Poly::new(rc);
        let drev = rev.derivative();
        Ok(CoeffOracle {
            p,
            dp,
            rev,
            drev,
            counter: EvalCounter::default(),
        })
    }

    pub fn poly(&self) -> &Poly {
        &self.p
    }

    fn ratio(&self, x: C64) -> Result<C64> {
        if x.norm() <= 1.0 {
            ratio_or_pole(x, self.dp.horner(x), self.p.horner(x))
        } else {
            // p'(x)/p(x) = d/x − r'(1/x)/(x² r(1/x)) with r the reverse; no overflow for large |x|
            let y = x.inv();
            let d = self.p.degree() as f64;
            let inner = ratio_or_pole(x, self.drev.horner(y), self.rev.horner(y))?;
            let r = (C64::new(d, 0.0) - y * inner) * y;
            if is_finite(r) {
                Ok(r)
            } else {
                Err(Error::Pole { at: x })
            }
        }
    }

    /// `R(e^{iφ}ζ_q^g)` for `g = 0..q`, by reduction modulo `x^q − 1` and a DFT.
    pub fn ratios_at_unity(&self, q: usize, rotation: f64) -> Result<Vec<C64>> {
        let twist = C64::from_polar(1.0, rotation);
        // t(y) = p(e^{iφ} y) so that t'(y)/t(y) = e^{iφ} R(e^{iφ} y)
        let mut w = C64::new(1.0, 0.0);
        let mut tc = Vec::with_capacity(self.p.degree() + 1);
        for &c in self.p.coeffs() {
            tc.push(c * w);
            w *= twist;
        }
        let t = Poly::new(tc);
        let vals = t.eval_at_unity(q)?;
        let dvals = t.derivative().eval_at_unity(q)?;
        self.counter.add(q as u64);
        vals.iter()
            .zip(&dvals)
            .enumerate()
            .map(|(g, (&v, &dv))| {
                let node = twist * crate::poly::unity_root(q, g);
                ratio_or_pole(node, dv, v).map(|r| r / twist)
            })
            .collect()
    }
}

impl NewtonOracle for CoeffOracle {
    fn degree(&self) -> usize {
        self.p.degree()
    }

    fn evaluate(&self, x: C64) -> Result<C64> {
        self.counter.tick();
        self.ratio(x)
    }

    fn eval_count(&self) -> u64 {
        self.counter.get()
    }

    fn coefficients(&self) -> Option<&CoeffOracle> {
        Some(self)
    }
}

/// `f = p / Π(x − z_j)` at the ratio level: `R_f(x) = R(x) − Σ 1/(x − z_j)`.
#[derive(Debug)]
pub struct Deflated<O> {
    base: O,
    zeros: Vec<C64>,
    counter: EvalCounter,
}

/// Implicitly deflate `zeros` from `base` without forming any coefficients.
pub fn deflated_oracle<O: NewtonOracle>(base: O, zeros: &[C64]) -> Result<Deflated<O>> {
    if zeros.len() > base.degree() {
        return Err(Error::Domain(format!(
            "cannot deflate {} zeros from degree {}",
            zeros.len(),
            base.degree()
        )));
    }
    Ok(Deflated {
        base,
        zeros: zeros.to_vec(),
        counter: EvalCounter::default(),
    })
}

impl<O> Deflated<O> {
    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn base(&self) -> &O {
        &self.base
    }
}

impl<O: NewtonOracle> NewtonOracle for Deflated<O> {
    fn degree(&self) -> usize {
        self.base.degree() - self.zeros.len()
    }

    fn evaluate(&self, x: C64) -> Result<C64> {
        self.counter.tick();
        if self.zeros.iter().any(|&z| x == z) {
            return Err(Error::Pole { at: x });
        }
        let mut r = self.base.evaluate(x)?;
        for &z in &self.zeros {
            r -= (x - z).inv();
        }
        if is_finite(r) {
            Ok(r)
        } else {
            Err(Error::Pole { at: x })
        }
    }

    fn eval_count(&self) -> u64 {
        self.counter.get()
    }
}

/// Reverse polynomial `x^d p(1/x)`: `R_rev(x) = d/x − R(1/x)/x²`.
#[derive(Debug)]
pub struct Reversed<O> {
    base: O,
    counter: EvalCounter,
}

pub fn reversed_oracle<O: NewtonOracle>(base: O) -> Reversed<O> {
    Reversed {
        base,
        counter: EvalCounter::default(),
    }
}

impl<O: NewtonOracle> NewtonOracle for Reversed<O> {
    fn degree(&self) -> usize {
        self.base.degree()
    }

    fn evaluate(&self, x: C64) -> Result<C64> {
        self.counter.tick();
        if x == ZERO {
            return Err(Error::Pole { at: x });
        }
        let y = x.inv();
        let inner = self.base.evaluate(y).map_err(|e| match e {
            Error::Pole { .. } => Error::Pole { at: x },
            other => other,
        })?;
        let r = (C64::new(self.degree() as f64, 0.0) - inner * y) * y;
        if is_finite(r) {
            Ok(r)
        } else {
            Err(Error::Pole { at: x })
        }
    }

    fn eval_count(&self) -> u64 {
        self.counter.get()
    }
}

/// `t(y) = p(c + ρy)`: `R_t(y) = ρ·R(c + ρy)`.
#[derive(Debug)]
pub struct Shifted<O> {
    base: O,
    center: C64,
    rho: f64,
    counter: EvalCounter,
}

pub fn shifted_oracle<O: NewtonOracle>(base: O, center: C64, rho: f64) -> Result<Shifted<O>> {
    if !(rho > 0.0 && rho.is_finite()) || !is_finite(center) {
        return Err(Error::Domain(format!("invalid shift ({center}, {rho})")));
    }
    Ok(Shifted {
        base,
        center,
        rho,
        counter: EvalCounter::default(),
    })
}

impl<O> Shifted<O> {
    pub fn center(&self) -> C64 {
        self.center
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

impl<O: NewtonOracle> NewtonOracle for Shifted<O> {
    fn degree(&self) -> usize {
        self.base.degree()
    }

    fn evaluate(&self, y: C64) -> Result<C64> {
        self.counter.tick();
        let x = self.center + y * self.rho;
        self.base
            .evaluate(x)
            .map(|r| r * self.rho)
            .map_err(|e| match e {
                Error::Pole { .. } => Error::Pole { at: y },
                other => other,
            })
    }

    fn eval_count(&self) -> u64 {
        self.counter.get()
    }
}

/// Oracle given by a closure, for user-supplied black boxes.
pub struct FnOracle<F> {
    degree: usize,
    f: F,
    counter: EvalCounter,
}

impl<F> FnOracle<F>
where
    F: Fn(C64) -> Result<C64> + Send + Sync,
{
    pub fn new(degree: usize, f: F) -> Self {
        FnOracle {
            degree,
            f,
            counter: EvalCounter::default(),
        }
    }
}

impl<F> NewtonOracle for FnOracle<F>
where
    F: Fn(C64) -> Result<C64> + Send + Sync,
{
    fn degree(&self) -> usize {
        self.degree
    }

    fn evaluate(&self, x: C64) -> Result<C64> {
        self.counter.tick();
        let r = (self.f)(x)?;
        if is_finite(r) {
            Ok(r)
        } else {
            Err(Error::Pole { at: x })
        }
    }

    fn eval_count(&self) -> u64 {
        self.counter.get()
    }
}
