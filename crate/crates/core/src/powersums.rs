//! Power sums `s_h = Σ x_j^h` of polynomial zeros, from coefficients by
//! Newton's identities or from a Newton-ratio oracle by Cauchy sums
//! `s_{h,q} = (1/q) Σ_g ζ^{(h+1)g} R(ζ^g)`.

use rayon::prelude::*;

use crate::error::{Error, Result, Warning};
use crate::oracle::{shifted_oracle, NewtonOracle};
use crate::poly::{unity_root, Disc, C64, ZERO};

/// Largest node count any routine will request.
pub const Q_CAP: usize = 1 << 24;

/// Node evaluations below this count stay on the calling thread.
const PAR_MIN: usize = 64;

/// Discretization parameters of a Cauchy sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyParams {
    pub q: usize,
    /// Assumed isolation: no zeros in the annulus `1/θ < |y| < θ`.
    pub theta: f64,
    pub rho: f64,
    /// Phase `φ` of the nodes `e^{iφ}ζ^g`.
    pub rotation: f64,
    /// Target accuracy `2^{-b₀}`.
    pub eps0_bits: u32,
}

impl CauchyParams {
    pub fn new(q: usize, theta: f64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("q must be at least 1".into()));
        }
        if !(theta > 1.0) {
            return Err(Error::Domain(format!("isolation θ = {theta} must exceed 1")));
        }
        Ok(CauchyParams {
            q,
            theta,
            rho: 1.0,
            rotation: 0.0,
            eps0_bits: 30,
        })
    }

    pub fn with_rotation(mut self, rotation: f64) -> Self {
        self.rotation = rotation.rem_euclid(std::f64::consts::TAU);
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_eps0_bits(mut self, b0: u32) -> Self {
        self.eps0_bits = b0;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerSumSource {
    NewtonIdentities,
    CauchySum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSumEstimate {
    pub h: usize,
    pub value: C64,
    /// Certified `|s_{h,q} − s_h|` under the isolation in `params`.
    pub bound: Option<f64>,
    pub params: Option<CauchyParams>,
    pub source: PowerSumSource,
}

/// Power sums `s'_1 … s'_{k+1}` of the reciprocals of the zeros of
/// `p = 1 + p_1 x + …`, from `trailing = [1, p_1, …, p_{k+1}]`:
/// `s'_i = −i·p_i − Σ_{j=1}^{i−1} p_j s'_{i−j}`.
pub fn newton_power_sums(trailing: &[C64], k: usize) -> Result<Vec<PowerSumEstimate>> {
    if trailing.len() < k + 2 {
        return Err(Error::Domain(format!(
            "need {} trailing coefficients, found {}",
            k + 2,
            trailing.len()
        )));
    }
    if (trailing[0] - C64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::Normalization(format!(
            "p_0 = {} must be 1; divide through first",
            trailing[0]
        )));
    }
    let mut s: Vec<C64> = Vec::with_capacity(k + 2);
    s.push(C64::new(0.0, 0.0)); // unused s'_0 slot keeps indices aligned
    for i in 1..=k + 1 {
        let mut v = -trailing[i] * i as f64;
        for j in 1..i {
            v -= trailing[j] * s[i - j];
        }
        s.push(v);
    }
    Ok(s.into_iter()
        .enumerate()
        .skip(1)
        .map(|(h, value)| PowerSumEstimate {
            h,
            value,
            bound: None,
            params: None,
            source: PowerSumSource::NewtonIdentities,
        })
        .collect())
}

/// Newton ratios at the rotated unity nodes `e^{iφ}ζ_q^g`, `g = 0..q`.
///
/// One set of node values yields every power sum `s_{h,q}` with `h < q`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeValues {
    q: usize,
    rotation: f64,
    ratios: Vec<C64>,
}

impl NodeValues {
    /// Evaluate the oracle at all nodes. Coefficient-backed oracles with
    /// `q < d` use reduction modulo `x^q − 1` and a DFT instead.
    pub fn compute<O: NewtonOracle + ?Sized>(oracle: &O, q: usize, rotation: f64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("q must be at least 1".into()));
        }
        if q > Q_CAP {
            return Err(Error::Cap {
                required: q as u64,
                cap: Q_CAP as u64,
            });
        }
        let ratios = match oracle.coefficients() {
            Some(co) if q < oracle.degree() => co.ratios_at_unity(q, rotation)?,
            _ => {
                let twist = C64::from_polar(1.0, rotation);
                let vals: Vec<Result<C64>> = (0..q)
                    .into_par_iter()
                    .with_min_len(PAR_MIN)
                    .map(|g| oracle.evaluate(twist * unity_root(q, g)))
                    .collect();
                vals.into_iter().collect::<Result<Vec<_>>>()?
            }
        };
        Ok(NodeValues {
            q,
            rotation,
            ratios,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    pub fn ratios(&self) -> &[C64] {
        &self.ratios
    }

    /// Every `step`-th node: the node values for `q/step` nodes.
    pub fn subsampled(&self, step: usize) -> Result<Self> {
        if step == 0 || self.q % step != 0 {
            return Err(Error::Domain(format!("{step} does not divide q = {}", self.q)));
        }
        Ok(NodeValues {
            q: self.q / step,
            rotation: self.rotation,
            ratios: self.ratios.iter().step_by(step).copied().collect(),
        })
    }

    /// `(1/q) Σ_g w_g^{h+1} R(w_g)`, summed in ascending `g`.
    pub fn power_sum(&self, h: usize) -> Result<C64> {
        if h >= self.q {
            return Err(Error::Domain(format!("need h < q, got h = {h}, q = {}", self.q)));
        }
        let twist = C64::from_polar(1.0, self.rotation * (h + 1) as f64);
        let mut acc = ZERO;
        for (g, &r) in self.ratios.iter().enumerate() {
            acc += unity_root(self.q, (g * (h + 1)) % self.q) * r;
        }
        Ok(acc * twist / self.q as f64)
    }
}

/// Cauchy sum `s_{h,q}` over the unit circle with nodes rotated by `rotation`.
pub fn cauchy_sum<O: NewtonOracle + ?Sized>(oracle: &O, h: usize, q: usize, rotation: f64) -> Result<C64> {
    if h >= q {
        return Err(Error::Domain(format!("need h < q, got h = {h}, q = {q}")));
    }
    NodeValues::compute(oracle, q, rotation)?.power_sum(h)
}

/// Cauchy sum over the disc `D(c, ρ)`: estimates `Σ ((x_j − c)/ρ)^h` over
/// the zeros in the disc. The bound uses `params.theta`.
pub fn cauchy_sum_disc<O: NewtonOracle + ?Sized>(
    oracle: &O,
    disc: &Disc,
    h: usize,
    params: &CauchyParams,
) -> Result<PowerSumEstimate> {
    let d = oracle.degree();
    let bound = cauchy_error_bound(d, params.theta, h, params.q)?;
    let value = if disc.center() == ZERO && disc.radius() == 1.0 {
        cauchy_sum(oracle, h, params.q, params.rotation)?
    } else {
        let t = shifted_oracle(oracle, disc.center(), disc.radius())?;
        cauchy_sum(&t, h, params.q, params.rotation)?
    };
    Ok(PowerSumEstimate {
        h,
        value,
        bound: Some(bound),
        params: Some(*params),
        source: PowerSumSource::CauchySum,
    })
}

/// `d·θ^h / (θ^q − 1)`.
pub fn cauchy_error_bound(d: usize, theta: f64, h: usize, q: usize) -> Result<f64> {
    if !(theta > 1.0) {
        return Err(Error::Domain(format!("isolation θ = {theta} must exceed 1")));
    }
    if h >= q {
        return Err(Error::Domain(format!("need h < q, got h = {h}, q = {q}")));
    }
    let tq = theta.powf(q as f64);
    let d = d as f64;
    if tq.is_finite() {
        Ok(d * theta.powf(h as f64) / (tq - 1.0))
    } else {
        Ok(d * theta.powf(h as f64 - q as f64))
    }
}

/// Smallest `q > h` with `cauchy_error_bound(d·max(ρ, 1), θ, h, q) ≤ 2^{−b₀}`.
pub fn choose_q(d: usize, theta: f64, h: usize, b0: u32, rho: f64) -> Result<usize> {
    if !(theta > 1.0) {
        return Err(Error::Domain(format!("isolation θ = {theta} must exceed 1")));
    }
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("radius {rho} must be positive")));
    }
    let dd = d as f64 * rho.max(1.0);
    let eps = 2f64.powi(-(b0 as i32));
    let ok = |q: usize| -> bool {
        let tq = theta.powf(q as f64);
        let b = if tq.is_finite() {
            dd * theta.powf(h as f64) / (tq - 1.0)
        } else {
            dd * theta.powf(h as f64 - q as f64)
        };
        b <= eps
    };
    // θ^{q−h} ≥ 1 + dd/ε suffices; start there and step to the exact minimum
    let guess = h as f64 + ((1.0 + dd / eps).ln() / theta.ln()).ceil();
    if !(guess <= Q_CAP as f64) {
        return Err(Error::Cap {
            required: if guess.is_finite() { guess as u64 } else { u64::MAX },
            cap: Q_CAP as u64,
        });
    }
    let mut q = (guess as usize).max(h + 1);
    while !ok(q) {
        q += 1;
    }
    while q > h + 1 && ok(q - 1) {
        q -= 1;
    }
    if q > Q_CAP {
        return Err(Error::Cap {
            required: q as u64,
            cap: Q_CAP as u64,
        });
    }
    Ok(q)
}

/// Parameters for estimating `s_h` after the variable has been rescaled so
/// the zeros of interest lie within `1/θ`, `θ = 2^{1/h}`:
/// `q = ⌈h·log₂(1 + d·2^{b₀+1})⌉`.
pub fn scaled_params(h: usize, d: usize, b0: u32) -> Result<CauchyParams> {
    if h == 0 {
        return Err(Error::Domain("scaled parameters need h ≥ 1".into()));
    }
    let theta = 2f64.powf(1.0 / h as f64);
    let q = (h as f64 * (1.0 + d as f64 * 2f64.powi(b0 as i32 + 1)).log2()).ceil() as usize;
    if q > Q_CAP {
        return Err(Error::Cap {
            required: q as u64,
            cap: Q_CAP as u64,
        });
    }
    Ok(CauchyParams::new(q.max(h + 1), theta)?.with_eps0_bits(b0))
}

/// Number of zeros in a disc from the Cauchy sum `s_{0,q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootCount {
    pub count: usize,
    /// The raw `s_{0,q}`.
    pub value: C64,
    pub q: usize,
    pub warnings: Vec<Warning>,
}

impl RootCount {
    pub fn confident(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Isolation assumed by [`root_count`] when choosing the minimum node count.
pub const COUNT_THETA: f64 = 1.2;
/// Accuracy bits of the count (`2^{-3}` leaves room for rounding).
pub const COUNT_BITS: u32 = 3;

/// Minimum node count accepted by [`root_count`] for a disc of radius `rho`.
pub fn min_count_q(d: usize, rho: f64) -> Result<usize> {
    choose_q(d, COUNT_THETA, 0, COUNT_BITS, rho)
}

/// `round(Re s_{0,q})` over the disc, flagged when `s_{0,q}` is more than
/// 0.25 from that integer or the count falls outside `[0, d]`.
pub fn root_count<O: NewtonOracle + ?Sized>(oracle: &O, disc: &Disc, q: usize) -> Result<RootCount> {
    root_count_rotated(oracle, disc, q, 0.0)
}

pub fn root_count_rotated<O: NewtonOracle + ?Sized>(
    oracle: &O,
    disc: &Disc,
    q: usize,
    rotation: f64,
) -> Result<RootCount> {
    let d = oracle.degree();
    let min_q = min_count_q(d, disc.radius())?;
    if q < min_q {
        return Err(Error::Domain(format!(
            "q = {q} is below the minimum {min_q} for counting in radius {}",
            disc.radius()
        )));
    }
    let params = CauchyParams::new(q, COUNT_THETA)?.with_rotation(rotation);
    let value = cauchy_sum_disc(oracle, disc, 0, &params)?.value;
    let rounded = value.re.round();
    let mut warnings = Vec::new();
    if (value - C64::new(rounded, 0.0)).norm() > 0.25 || rounded < 0.0 || rounded > d as f64 {
        warnings.push(Warning::LowConfidence { value });
    }
    Ok(RootCount {
        count: rounded.clamp(0.0, d as f64) as usize,
        value,
        q,
        warnings,
    })
}
