//! Extremal zeros from ratios of consecutive power sums.
//!
//! With `σ_k = Σ x_j^{−k}` the smallest zero satisfies `x_d ≈ σ_k/σ_{k+1}`;
//! with `s_k = Σ x_j^k` the largest satisfies `x_1 ≈ s_{k+1}/s_k`. If the
//! `m` extremal zeros share one value and every other zero is farther by the
//! ratio `Δ < 1`, the relative error `γ` of the ratio obeys
//! `|γ| ≤ 2cΔ^k/(1 − cΔ^k)` with `c = (w − m)/m` for `w` zeros in total.

use crate::error::{Error, Result, Warning};
use crate::powersums::PowerSumEstimate;
use crate::poly::{C64, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Smallest,
    Largest,
}

/// What is known about the modulus gap around the extremal zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    /// Upper bound on `|x_d/x_{d−1}|` (smallest) or `|x_2/x_1|` (largest).
    pub delta: f64,
    /// Multiplicity of the extremal zero.
    pub m: usize,
    /// Number of zeros contributing to the power sums.
    pub degree: usize,
}

impl Separation {
    pub fn new(delta: f64, degree: usize) -> Self {
        Separation { delta, m: 1, degree }
    }

    pub fn with_multiplicity(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    /// `(w − m)/m`.
    pub fn prefactor(&self) -> f64 {
        self.degree.saturating_sub(self.m) as f64 / self.m.max(1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalEstimate {
    pub value: C64,
    pub side: Side,
    pub k: usize,
    pub m: usize,
    pub delta: Option<f64>,
    /// `2Δ^k/(1 − Δ^k)`.
    pub gamma_bound: Option<f64>,
    /// Certified `|value − x|` due to the finite power `k`, with the
    /// `(w − m)/m` prefactor included.
    pub gamma_error: Option<f64>,
    /// `|value − ratio of exact power sums|` from the power-sum bounds.
    pub powersum_error: Option<f64>,
    /// `gamma_error + powersum_error`.
    pub total_error: Option<f64>,
    pub warnings: Vec<Warning>,
}

/// `2Δ^k/(1 − Δ^k)`; infinite when `Δ^k ≥ 1` (only possible at `k = 0`).
pub fn gamma_bound(delta: f64, k: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!("separation ratio {delta} outside [0, 1)")));
    }
    let dk = delta.powi(k as i32);
    if k == 0 || dk >= 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * dk / (1.0 - dk))
}

/// `2cΔ^k/(1 − cΔ^k)`; infinite when `cΔ^k ≥ 1`.
pub fn certified_gamma(delta: f64, k: usize, prefactor: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!("separation ratio {delta} outside [0, 1)")));
    }
    let t = prefactor * delta.powi(k as i32);
    if k == 0 || t >= 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * t / (1.0 - t))
}

/// Smallest `k` with `gamma_bound(Δ, k) ≤ 2^{−b}`, starting from
/// `⌈(b + 2)·ln 2 / ln(1/Δ)⌉`.
pub fn choose_k(delta: f64, b: u32) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("separation ratio {delta} outside (0, 1)")));
    }
    let target = 2f64.powi(-(b as i32));
    let mut k = (((b as f64 + 2.0) * std::f64::consts::LN_2 / (1.0 / delta).ln()).ceil() as usize).max(1);
    while gamma_bound(delta, k)? > target {
        k += 1;
    }
    Ok(k)
}

/// Smallest `k` whose certified relative error `γ/(1 − γ)` is at most `rel`.
pub fn choose_k_certified(delta: f64, prefactor: f64, rel: f64) -> Result<usize> {
    if !(delta >= 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("separation ratio {delta} outside [0, 1)")));
    }
    if !(rel > 0.0) {
        return Err(Error::Domain(format!("target {rel} must be positive")));
    }
    if delta == 0.0 || prefactor == 0.0 {
        return Ok(1);
    }
    let ok = |k: usize| -> Result<bool> {
        let g = certified_gamma(delta, k, prefactor)?;
        Ok(g < 1.0 && g / (1.0 - g) <= rel)
    };
    let mut k = ((4.0 * prefactor / rel).ln() / (1.0 / delta).ln()).ceil().max(1.0) as usize;
    while !ok(k)? {
        k += 1;
    }
    while k > 1 && ok(k - 1)? {
        k -= 1;
    }
    Ok(k)
}

/// `ε + ε₀`.
pub fn total_error(gamma_err: f64, powersum_err: f64) -> Result<f64> {
    if !(gamma_err >= 0.0 && powersum_err >= 0.0) {
        return Err(Error::Domain("error terms must be nonnegative".into()));
    }
    Ok(gamma_err + powersum_err)
}

/// Worst-case change of `num/den` when the two values move by at most
/// `e_num` and `e_den`.
pub fn ratio_error(num: C64, den: C64, e_num: f64, e_den: f64) -> f64 {
    let slack = den.norm() - e_den;
    if !(slack > 0.0) {
        return f64::INFINITY;
    }
    (e_num + (num / den).norm() * e_den) / slack
}

fn estimate(
    num: &PowerSumEstimate,
    den: &PowerSumEstimate,
    k: usize,
    side: Side,
    sep: Option<Separation>,
) -> Result<ExtremalEstimate> {
    if den.value == ZERO {
        return Err(Error::DivByZero(format!(
            "power sum of index {} vanishes: extremal moduli not separated",
            den.h
        )));
    }
    let value = num.value / den.value;
    let powersum_error = match (num.bound, den.bound) {
        (Some(a), Some(b)) => Some(ratio_error(num.value, den.value, a, b)),
        (None, None) => Some(0.0),
        _ => None,
    };
    let mut warnings = Vec::new();
    let (delta, gb, gamma_error) = match sep {
        Some(s) => {
            let gb = gamma_bound(s.delta, k)?;
            let g = certified_gamma(s.delta, k, s.prefactor())?;
            let abs = if g < 1.0 { g / (1.0 - g) * value.norm() } else { f64::INFINITY };
            (Some(s.delta), Some(gb), Some(abs))
        }
        None => {
            warnings.push(Warning::SeparationUnknown);
            (None, None, None)
        }
    };
    let total = match (gamma_error, powersum_error) {
        (Some(g), Some(p)) => Some(total_error(g, p)?),
        _ => None,
    };
    Ok(ExtremalEstimate {
        value,
        side,
        k,
        m: sep.map_or(1, |s| s.m),
        delta,
        gamma_bound: gb,
        gamma_error,
        powersum_error,
        total_error: total,
        warnings,
    })
}

/// `x_d ≈ σ_k/σ_{k+1}` from power sums of the reciprocal zeros.
pub fn estimate_smallest(
    sigma_k: &PowerSumEstimate,
    sigma_k1: &PowerSumEstimate,
    sep: Option<Separation>,
) -> Result<ExtremalEstimate> {
    if sigma_k1.h != sigma_k.h + 1 {
        return Err(Error::Domain("power sums must be consecutive".into()));
    }
    estimate(sigma_k, sigma_k1, sigma_k.h, Side::Smallest, sep)
}

/// `x_1 ≈ s_{k+1}/s_k` from power sums of the zeros.
pub fn estimate_largest(
    s_k: &PowerSumEstimate,
    s_k1: &PowerSumEstimate,
    sep: Option<Separation>,
) -> Result<ExtremalEstimate> {
    if s_k1.h != s_k.h + 1 {
        return Err(Error::Domain("power sums must be consecutive".into()));
    }
    estimate(s_k1, s_k, s_k.h, Side::Largest, sep)
}
