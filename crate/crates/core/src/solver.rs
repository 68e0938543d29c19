//! End-to-end root finders: the Lehmer-Newton search, Newton refinement,
//! the extremal-zero pipelines and recursive implicit deflation.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result, Warning};
use crate::extremal::{choose_k_certified, estimate_largest, estimate_smallest, ExtremalEstimate, Separation, Side};
use crate::oracle::{deflated_oracle, reversed_oracle, shifted_oracle, CoeffOracle, NewtonOracle};
use crate::poly::{unity_root, Poly, C64, ZERO};
use crate::powersums::{cauchy_error_bound, choose_q, scaled_params, CauchyParams, NodeValues, PowerSumEstimate, PowerSumSource};
use crate::radii::{find_bracket, newton_smallest_bound, radius_interval};
use crate::squaring::{descend, dlg_step, extremal_power_ratios, Descent, SquaringState};

/// Bits of relative width for the radius refinement inside each Lehmer round.
pub const LEHMER_RADIUS_BITS: u32 = 4;
/// Newton steps allowed when polishing a pipeline estimate.
pub const REFINE_STEPS: usize = 60;
/// Largest separation ratio the extremal pipelines accept.
pub const MAX_DELTA: f64 = 0.95;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Target accuracy `ε = 2^{−eps_bits}`.
    pub eps_bits: u32,
    /// Power-sum accuracy `ε₀ = 2^{−b0}`.
    pub b0: u32,
    /// Largest node count any pipeline may use.
    pub q_cap: usize,
    /// Lehmer circle samples; `None` means `max(32, 4d)`.
    pub sample_q: Option<usize>,
    pub max_rounds: usize,
    /// Polish estimates with Newton's iteration.
    pub refine: bool,
    /// Relative width bits of the radius brackets that bound the separation.
    pub radius_bits: u32,
    /// Phase of the Cauchy nodes.
    pub rotation: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eps_bits: 20,
            b0: 24,
            q_cap: 1 << 20,
            sample_q: None,
            max_rounds: 64,
            refine: true,
            radius_bits: 8,
            rotation: 0.0,
        }
    }
}

impl SolverConfig {
    pub fn eps(&self) -> f64 {
        2f64.powi(-(self.eps_bits as i32))
    }

    pub fn eps0(&self) -> f64 {
        2f64.powi(-(self.b0 as i32))
    }

    /// Lehmer samples for degree `d`.
    pub fn samples(&self, d: usize) -> usize {
        self.sample_q.unwrap_or((4 * d).max(32))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Domain(format!("invalid configuration: {what}")));
        if !(1..=1000).contains(&self.eps_bits) {
            return bad("eps_bits must be in 1..=1000");
        }
        if !(1..=1000).contains(&self.b0) {
            return bad("b0 must be in 1..=1000");
        }
        if self.q_cap < 2 {
            return bad("q_cap must be at least 2");
        }
        if self.sample_q == Some(0) {
            return bad("sample_q must be positive");
        }
        if self.max_rounds == 0 {
            return bad("max_rounds must be positive");
        }
        if !(1..=12).contains(&self.radius_bits) {
            return bad("radius_bits must be in 1..=12");
        }
        if !self.rotation.is_finite() {
            return bad("rotation must be finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    LehmerNewton,
    ExtremalSmall,
    ExtremalLarge,
    DescendDlg,
    NewtonRefine,
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::LehmerNewton => "lehmer_newton",
            Pipeline::ExtremalSmall => "extremal_small",
            Pipeline::ExtremalLarge => "extremal_large",
            Pipeline::DescendDlg => "descend_dlg",
            Pipeline::NewtonRefine => "newton_refine",
        })
    }
}

/// Parameters the extremal pipelines settled on.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalDetails {
    pub k: usize,
    pub q: usize,
    pub theta: f64,
    /// Upper bound on the separation ratio.
    pub delta: f64,
    /// Radius of the disc the power sums were taken over.
    pub scale: f64,
    /// Power sums came from earlier node values minus found zeros.
    pub cached: bool,
    /// The ratio estimate in the rescaled variable.
    pub estimate: ExtremalEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootApproximation {
    /// Final value, refined when refinement helped.
    pub z: C64,
    /// Value before refinement.
    pub estimate: C64,
    /// `d/|R(z)|`, which bounds the distance from `z` to the nearest zero.
    pub residual: f64,
    /// Certified `|estimate − x|` from the ratio and power-sum errors.
    pub error_bound: Option<f64>,
    pub pipeline: Pipeline,
    pub eval_count: u64,
    pub warnings: Vec<Warning>,
    pub details: Option<ExtremalDetails>,
}

impl RootApproximation {
    /// Bound on the distance from `z` to its zero: the smaller of the
    /// residual and `error_bound + |z − estimate|`.
    pub fn bound(&self) -> f64 {
        let carried = self
            .error_bound
            .map_or(f64::INFINITY, |b| b + (self.z - self.estimate).norm());
        carried.min(self.residual)
    }

    pub fn converged(&self) -> bool {
        !self.warnings.iter().any(|w| matches!(w, Warning::NotConverged { .. }))
    }
}

/// `d/|R(z)|`: zero at a zero of `p`, infinite where `R` vanishes.
pub fn residual_at<O: NewtonOracle + ?Sized>(oracle: &O, z: C64) -> Result<f64> {
    match oracle.evaluate(z) {
        Ok(r) if r == ZERO => Ok(f64::INFINITY),
        Ok(r) => Ok(oracle.degree() as f64 / r.norm()),
        Err(Error::Pole { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

fn plain(z: C64, residual: f64, pipeline: Pipeline, eval_count: u64) -> RootApproximation {
    RootApproximation {
        z,
        estimate: z,
        residual,
        error_bound: None,
        pipeline,
        eval_count,
        warnings: Vec::new(),
        details: None,
    }
}

/// Newton's iteration `z ← z − 1/R(z)` until the step is at most `tol`.
///
/// Hitting a zero exactly counts as convergence with residual 0. Five
/// consecutive steps without a decrease in size give [`Error::Stall`]
/// carrying the best iterate.
pub fn newton_refine<O: NewtonOracle + ?Sized>(
    oracle: &O,
    z0: C64,
    tol: f64,
    maxit: usize,
) -> Result<RootApproximation> {
    let start = oracle.eval_count();
    let mut z = z0;
    let mut best = (f64::INFINITY, z0);
    let mut prev = f64::INFINITY;
    let mut stalled = 0;
    let mut at_zero = false;
    for _ in 0..maxit {
        let r = match oracle.evaluate(z) {
            Ok(r) => r,
            Err(Error::Pole { .. }) => {
                at_zero = true;
                break;
            }
            Err(e) => return Err(e),
        };
        if r == ZERO {
            return Err(Error::DivByZero(format!("Newton ratio vanishes at {z}")));
        }
        let step = r.inv();
        let size = step.norm();
        z -= step;
        if size < best.0 {
            best = (size, z);
        }
        if size >= prev {
            stalled += 1;
            if stalled >= 5 {
                return Err(Error::Stall { best: best.1 });
            }
        } else {
            stalled = 0;
        }
        prev = size;
        if size <= tol {
            break;
        }
    }
    let residual = if at_zero { 0.0 } else { residual_at(oracle, z)? };
    Ok(RootApproximation {
        estimate: z0,
        ..plain(z, residual, Pipeline::NewtonRefine, oracle.eval_count() - start)
    })
}

/// Polish `z` and keep the result only if it stays within `window` of `z`
/// and does not raise the residual.
fn polish<O: NewtonOracle + ?Sized>(oracle: &O, z: C64, window: f64) -> Result<(C64, f64)> {
    let here = residual_at(oracle, z)?;
    if here == 0.0 {
        return Ok((z, 0.0));
    }
    let tol = 4.0 * f64::EPSILON * z.norm();
    let cand = match newton_refine(oracle, z, tol, REFINE_STEPS) {
        Ok(r) => Some((r.z, r.residual)),
        Err(Error::Stall { best }) => Some((best, residual_at(oracle, best)?)),
        Err(Error::DivByZero(_) | Error::Range(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(match cand {
        Some((w, res)) if (w - z).norm() <= window && res <= here => (w, res),
        _ => (z, here),
    })
}

/// The next zero towards the target of a Lehmer round: the sample on
/// `C(c, ρ)` with the largest `|R|`, and its residual.
fn best_sample<O: NewtonOracle + ?Sized>(oracle: &O, c: C64, rho: f64, q: usize, rotation: f64) -> Result<(C64, f64)> {
    let twist = C64::from_polar(rho, rotation);
    let d = oracle.degree() as f64;
    let vals: Vec<(C64, Result<C64>)> = (0..q)
        .into_par_iter()
        .map(|g| {
            let x = c + twist * unity_root(q, g);
            (x, oracle.evaluate(x))
        })
        .collect();
    let mut best = (c + twist, f64::INFINITY);
    for (x, r) in vals {
        let res = match r {
            Ok(r) if r == ZERO => f64::INFINITY,
            Ok(r) => d / r.norm(),
            Err(Error::Pole { .. }) => return Ok((x, 0.0)),
            Err(e) => return Err(e),
        };
        if res < best.1 {
            best = (x, res);
        }
    }
    Ok(best)
}

/// Distance from `c` to the nearest zero, to [`LEHMER_RADIUS_BITS`] bits,
/// given the Newton bound `upper`. Falls back to `upper` when counting fails.
fn nearest_radius<O: NewtonOracle + ?Sized>(oracle: &O, c: C64, upper: f64) -> Result<f64> {
    let found = find_bracket(oracle, c, 1, upper)
        .and_then(|(lo, hi)| radius_interval(oracle, c, 1, lo, hi, LEHMER_RADIUS_BITS));
    match found {
        Ok((_, hi)) => Ok(hi.min(upper)),
        Err(Error::CountUnstable { .. } | Error::Bracket(_) | Error::Cap { .. }) => Ok(upper),
        Err(e) => Err(e),
    }
}

/// Lehmer's search driven by Newton ratios: bound the distance to the
/// nearest zero, refine it by counting, sample the circle of that radius,
/// move to the best sample and repeat until `d/|R(c)| ≤ ε`.
pub fn lehmer_newton<O: NewtonOracle + ?Sized>(oracle: &O, config: &SolverConfig) -> Result<RootApproximation> {
    config.validate()?;
    let start = oracle.eval_count();
    let d = oracle.degree();
    if d == 0 {
        return Err(Error::Domain("degree 0 has no zeros".into()));
    }
    let eps = config.eps();
    let q0 = config.samples(d);
    let mut c = ZERO;
    let mut radius = 1.0;
    let mut best = (c, f64::INFINITY);
    let mut warnings = Vec::new();
    let finish = |z: C64, res: f64, warnings: Vec<Warning>| RootApproximation {
        warnings,
        ..plain(z, res, Pipeline::LehmerNewton, oracle.eval_count() - start)
    };
    for round in 0..config.max_rounds {
        let upper = newton_smallest_bound(oracle, c)?.upper;
        if upper < best.1 {
            best = (c, upper);
        }
        if upper <= eps {
            return Ok(finish(c, upper, warnings));
        }
        if upper.is_infinite() {
            warnings.push(Warning::DegenerateCenter { round, center: c });
            c += C64::from_polar(0.37 * radius, 0.7 * round as f64);
            continue;
        }
        let rho = nearest_radius(oracle, c, upper)?;
        radius = rho;
        let mut q = q0;
        for retry in 0..2 {
            let (x, res) = best_sample(oracle, c, rho, q, config.rotation)?;
            let (z, res) = if config.refine && res > 0.0 {
                polish(oracle, x, f64::INFINITY)?
            } else {
                (x, res)
            };
            if res < best.1 {
                best = (z, res);
            }
            if res <= eps {
                return Ok(finish(z, res, warnings));
            }
            if res < upper || retry == 1 {
                c = z;
                break;
            }
            q *= 2;
        }
    }
    warnings.push(Warning::NotConverged {
        rounds: config.max_rounds,
    });
    Ok(finish(best.0, best.1, warnings))
}

/// Node values kept between the steps of [`root_sequence`].
#[derive(Debug, Default)]
struct PowerSumCache {
    entry: Option<CacheEntry>,
    /// Zeros deflated so far with their distance bounds.
    found: Vec<(C64, f64)>,
}

#[derive(Debug)]
struct CacheEntry {
    scale: f64,
    degree: usize,
    nodes: NodeValues,
    /// Number of deflated zeros when the nodes were evaluated.
    found_len: usize,
}

impl PowerSumCache {
    /// `Σ u^h` over the zeros deflated since the entry was made, with
    /// `u = 1/(zR)`, and the error caused by their inaccuracy.
    fn correction(&self, entry: &CacheEntry, h: usize) -> Option<(C64, f64)> {
        let mut sum = ZERO;
        let mut err = 0.0;
        for &(z, dz) in &self.found[entry.found_len..] {
            let m = z.norm();
            if !(m > dz) {
                return None;
            }
            let u = (z * entry.scale).inv();
            let du = dz / (m * (m - dz) * entry.scale);
            sum += u.powu(h as u32);
            err += h as f64 * (u.norm() + du).powi(h as i32 - 1) * du;
        }
        Some((sum, err))
    }
}

/// Power sums `S_k, S_{k+1}` with their bounds, and how they were obtained.
struct Sums {
    k: (C64, f64),
    k1: (C64, f64),
    q: usize,
    cached: bool,
    /// Rounding dominates the truncation error.
    at_floor: bool,
}

struct Plan {
    side: Side,
    d: usize,
    k: usize,
    delta: f64,
    theta: f64,
    plain: bool,
    /// Bounds on the largest modulus of the oriented zeros.
    m_hi: f64,
    m_lo: f64,
}

impl Plan {
    fn use_scaled_nodes(&mut self) {
        self.plain = false;
        self.theta = 2f64.powf(1.0 / (self.k + 1) as f64);
    }

    fn scale(&self) -> f64 {
        self.theta * self.m_hi
    }

    /// Conversion factor from ratio errors to errors in `x`.
    fn to_x(&self, scale: f64) -> f64 {
        match self.side {
            Side::Smallest => 1.0 / scale,
            Side::Largest => scale,
        }
    }

    /// Node count for the power sums over the disc of radius `scale`
    /// (with `d` zeros counted by the error bound) to meet `eps0` in `x`.
    fn nodes(&self, d: usize, scale: f64, eps0: f64) -> Result<usize> {
        let k = self.k;
        let g = (self.d - 1) as f64 * self.delta.powi(k as i32);
        let u_lo = self.m_lo / scale;
        let (s_lo, ratio_hi) = match self.side {
            Side::Smallest => (u_lo.powi(k as i32 + 1) * (1.0 - g), (1.0 + g) / ((1.0 - g) * u_lo)),
            Side::Largest => (u_lo.powi(k as i32) * (1.0 - g), (1.0 + g) / ((1.0 - g) * self.theta)),
        };
        let target = (eps0 / self.to_x(scale) * s_lo / (2.0 * (1.0 + ratio_hi))).min(s_lo / 2.0);
        if !(target > 0.0) {
            return Err(Error::Range(format!("power-sum tolerance underflows at k = {k}")));
        }
        let bits = (-target.log2()).ceil().clamp(1.0, 1.0e6) as u32;
        if self.plain {
            choose_q(d, self.theta, k + 1, bits, 1.0)
        } else {
            Ok(scaled_params(k + 1, d, bits)?.q)
        }
    }
}

fn cap_check(q: usize, cap: usize) -> Result<()> {
    if q > cap {
        return Err(Error::Cap {
            required: q as u64,
            cap: cap as u64,
        });
    }
    Ok(())
}

/// Separation and modulus bounds for the extremal zero on `side`.
fn plan<O: NewtonOracle + ?Sized>(oracle: &O, side: Side, hint: f64, config: &SolverConfig) -> Result<Plan> {
    let d = oracle.degree();
    let bits = config.radius_bits;
    let (j, j_next) = match side {
        Side::Smallest => (1, 2),
        Side::Largest => (d, d - 1),
    };
    let (lo, hi) = find_bracket(oracle, ZERO, j, hint)?;
    let (t_lo, t_hi) = radius_interval(oracle, ZERO, j, lo, hi, bits)?;
    let delta = match side {
        Side::Smallest => {
            let (lo, hi) = find_bracket(oracle, ZERO, j_next, t_hi * 1.5)?;
            let (n_lo, _) = radius_interval(oracle, ZERO, j_next, lo, hi, bits)?;
            t_hi / n_lo
        }
        Side::Largest => {
            let (lo, hi) = find_bracket(oracle, ZERO, j_next, t_lo / 1.5)?;
            let (_, n_hi) = radius_interval(oracle, ZERO, j_next, lo, hi, bits)?;
            n_hi / t_lo
        }
    };
    if !(delta < MAX_DELTA) {
        return Err(Error::Separation { delta });
    }
    let k = choose_k_certified(delta, (d - 1) as f64, config.eps() / t_hi)?;
    let plain = delta <= 0.5;
    let theta = if plain { 2.0 } else { 2f64.powf(1.0 / (k + 1) as f64) };
    let (m_hi, m_lo) = match side {
        Side::Smallest => (1.0 / t_lo, 1.0 / t_hi),
        Side::Largest => (t_hi, t_lo),
    };
    Ok(Plan {
        side,
        d,
        k,
        delta,
        theta,
        plain,
        m_hi,
        m_lo,
    })
}

/// Floating-point error allowance for a power sum from `nodes`: the sum
/// cannot be trusted below a few ulps of the node values it averages.
fn rounding(nodes: &NodeValues, d: usize) -> f64 {
    let mean = nodes.ratios().iter().map(|r| r.norm()).sum::<f64>() / nodes.q() as f64;
    16.0 * d as f64 * f64::EPSILON * mean
}

fn fresh_sums<O: NewtonOracle + ?Sized>(
    oracle: &O,
    plan: &Plan,
    scale: f64,
    q: usize,
    rotation: f64,
) -> Result<(Sums, NodeValues)> {
    let nodes = match plan.side {
        Side::Smallest => NodeValues::compute(&shifted_oracle(reversed_oracle(oracle), ZERO, scale)?, q, rotation)?,
        Side::Largest => NodeValues::compute(&shifted_oracle(oracle, ZERO, scale)?, q, rotation)?,
    };
    let k = plan.k;
    let round = rounding(&nodes, plan.d);
    let trunc = cauchy_error_bound(plan.d, plan.theta, k, q)?;
    let sums = Sums {
        k: (nodes.power_sum(k)?, trunc + round),
        k1: (nodes.power_sum(k + 1)?, cauchy_error_bound(plan.d, plan.theta, k + 1, q)? + round),
        q,
        cached: false,
        at_floor: trunc <= round,
    };
    Ok((sums, nodes))
}

fn cached_sums(plan: &Plan, cache: &PowerSumCache, eps0: f64, rotation: f64) -> Result<Option<(Sums, f64)>> {
    let Some(entry) = &cache.entry else {
        return Ok(None);
    };
    if !plan.plain || entry.nodes.rotation() != rotation || entry.scale < plan.scale() {
        return Ok(None);
    }
    let q = entry.nodes.q();
    if plan.nodes(entry.degree, entry.scale, eps0)? > q {
        return Ok(None);
    }
    let round = rounding(&entry.nodes, entry.degree);
    let one = |h: usize| -> Result<Option<(C64, f64)>> {
        let Some((sub, err)) = cache.correction(entry, h) else {
            return Ok(None);
        };
        let bound = cauchy_error_bound(entry.degree, plan.theta, h, q)? + err + round;
        Ok(Some((entry.nodes.power_sum(h)? - sub, bound)))
    };
    let (Some(k), Some(k1)) = (one(plan.k)?, one(plan.k + 1)?) else {
        return Ok(None);
    };
    Ok(Some((
        Sums {
            k,
            k1,
            q,
            cached: true,
            at_floor: false,
        },
        entry.scale,
    )))
}

fn ratio_estimate(plan: &Plan, sums: &Sums, rotation: f64) -> Result<ExtremalEstimate> {
    let params = CauchyParams::new(sums.q, plan.theta)?.with_rotation(rotation);
    let est = |h: usize, (value, bound): (C64, f64)| PowerSumEstimate {
        h,
        value,
        bound: Some(bound),
        params: Some(params),
        source: PowerSumSource::CauchySum,
    };
    let (a, b) = (est(plan.k, sums.k), est(plan.k + 1, sums.k1));
    let sep = Some(Separation::new(plan.delta, plan.d));
    match plan.side {
        Side::Smallest => estimate_smallest(&a, &b, sep),
        Side::Largest => estimate_largest(&a, &b, sep),
    }
}

fn extremal_root<O: NewtonOracle + ?Sized>(
    oracle: &O,
    side: Side,
    config: &SolverConfig,
    mut cache: Option<&mut PowerSumCache>,
) -> Result<RootApproximation> {
    config.validate()?;
    let start = oracle.eval_count();
    let d = oracle.degree();
    let pipeline = match side {
        Side::Smallest => Pipeline::ExtremalSmall,
        Side::Largest => Pipeline::ExtremalLarge,
    };
    if d == 0 {
        return Err(Error::Domain("degree 0 has no zeros".into()));
    }
    let r0 = match oracle.evaluate(ZERO) {
        Ok(r) => Some(r),
        Err(Error::Pole { .. }) => None,
        Err(e) => return Err(e),
    };
    let exact = |z: C64| -> Result<RootApproximation> {
        let residual = residual_at(oracle, z)?;
        Ok(RootApproximation {
            error_bound: Some(0.0),
            ..plain(z, residual, pipeline, oracle.eval_count() - start)
        })
    };
    match r0 {
        Some(r) if d == 1 => return exact(-r.inv()),
        None if d == 1 || side == Side::Smallest => return exact(ZERO),
        _ => {}
    }
    let hint = r0
        .map(|r| d as f64 / r.norm())
        .filter(|h| h.is_finite() && *h > 0.0)
        .unwrap_or(1.0);
    let mut plan = plan(oracle, side, hint, config)?;
    let eps0 = config.eps0();
    let rot = config.rotation;

    let mut found = None;
    if let Some(c) = cache.as_deref() {
        if let Some((sums, scale)) = cached_sums(&plan, c, eps0, rot)? {
            let est = ratio_estimate(&plan, &sums, rot)?;
            if est.powersum_error.is_some_and(|e| e * plan.to_x(scale) <= eps0) {
                found = Some((sums, scale, est));
            }
        }
    }
    let (sums, scale, est) = match found {
        Some(f) => f,
        None => {
            let mut scale = plan.scale();
            let mut q = plan.nodes(d, scale, eps0)?;
            cap_check(q, config.q_cap)?;
            loop {
                let (sums, nodes) = fresh_sums(oracle, &plan, scale, q, rot)?;
                let est = ratio_estimate(&plan, &sums, rot)?;
                let ok = est.powersum_error.is_some_and(|e| e * plan.to_x(scale) <= eps0);
                if ok {
                    if let (Some(c), true, Side::Smallest) = (cache.as_deref_mut(), plan.plain, side) {
                        c.entry = Some(CacheEntry {
                            scale,
                            degree: d,
                            nodes,
                            found_len: c.found.len(),
                        });
                    }
                    break (sums, scale, est);
                }
                if plan.plain && sums.at_floor {
                    // doubling q cannot beat rounding; move the zero near the circle
                    plan.use_scaled_nodes();
                    scale = plan.scale();
                    q = plan.nodes(d, scale, eps0)?;
                } else {
                    q *= 2;
                }
                cap_check(q, config.q_cap)?;
            }
        }
    };

    let to_x = plan.to_x(scale);
    let estimate = match side {
        Side::Smallest => est.value / scale,
        Side::Largest => est.value * scale,
    };
    let bound = est.total_error.map(|t| t * to_x);
    let (z, residual) = if config.refine {
        let window = 2.0 * bound.unwrap_or(f64::INFINITY) + 8.0 * f64::EPSILON * estimate.norm();
        polish(oracle, estimate, window)?
    } else {
        (estimate, residual_at(oracle, estimate)?)
    };
    Ok(RootApproximation {
        z,
        estimate,
        residual,
        error_bound: bound,
        pipeline,
        eval_count: oracle.eval_count() - start,
        warnings: est.warnings.clone(),
        details: Some(ExtremalDetails {
            k: plan.k,
            q: sums.q,
            theta: plan.theta,
            delta: plan.delta,
            scale,
            cached: sums.cached,
            estimate: est,
        }),
    })
}

/// Zero of smallest modulus from the ratio `σ_k/σ_{k+1}` of power sums of
/// the reciprocal zeros, with a certified error bound.
pub fn smallest_root<O: NewtonOracle + ?Sized>(oracle: &O, config: &SolverConfig) -> Result<RootApproximation> {
    extremal_root(oracle, Side::Smallest, config, None)
}

/// Zero of largest modulus from the ratio `s_{k+1}/s_k`.
pub fn largest_root<O: NewtonOracle + ?Sized>(oracle: &O, config: &SolverConfig) -> Result<RootApproximation> {
    extremal_root(oracle, Side::Largest, config, None)
}

/// Extremal zero of a coefficient polynomial by root squaring: after `h`
/// squarings `−p_0/p_1` approximates `x_d^{2^h}` (or `−p_{d−1}/p_d`
/// approximates `x_1^{2^h}`), and [`descend`] walks it back down.
pub fn descend_root(p: &Poly, h: usize, side: Side, config: &SolverConfig) -> Result<RootApproximation> {
    config.validate()?;
    let oracle = CoeffOracle::new(p.clone())?;
    let mut state = SquaringState::new(p.clone());
    let mut levels = vec![p.clone()];
    for _ in 0..h {
        state = dlg_step(&state)?;
        levels.push(state.p().clone());
    }
    let (small, large) = extremal_power_ratios(&state)?;
    let y = match side {
        Side::Smallest if small == ZERO => {
            return Err(Error::DivByZero("p_h'(0) = 0: no dominant smallest zero".into()))
        }
        Side::Smallest => small.inv(),
        Side::Largest => large,
    };
    let Descent { value, warnings } = descend(&levels, y, h)?;
    let (z, residual) = if config.refine {
        polish(&oracle, value, f64::INFINITY)?
    } else {
        (value, residual_at(&oracle, value)?)
    };
    Ok(RootApproximation {
        estimate: value,
        warnings,
        ..plain(z, residual, Pipeline::DescendDlg, oracle.eval_count())
    })
}

/// Result of [`root_sequence`]: the zeros found in order, and the index and
/// error of the step that failed, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSequence {
    pub roots: Vec<RootApproximation>,
    pub failure: Option<(usize, Error)>,
}

impl RootSequence {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }
}

/// The `n` zeros of smallest modulus, one at a time: find the smallest zero
/// of the implicitly deflated oracle, polish it on the original oracle,
/// deflate it and repeat.
///
/// Power sums over an unchanged disc are reused by subtracting the powers of
/// the zeros found since they were evaluated.
pub fn root_sequence<O: NewtonOracle + ?Sized>(oracle: &O, n: usize, config: &SolverConfig) -> Result<RootSequence> {
    config.validate()?;
    let d = oracle.degree();
    if n > d {
        return Err(Error::Domain(format!("asked for {n} zeros of a degree-{d} polynomial")));
    }
    let mut cache = PowerSumCache::default();
    let mut roots: Vec<RootApproximation> = Vec::new();
    for i in 0..n {
        let start = oracle.eval_count();
        let zeros: Vec<C64> = roots.iter().map(|r| r.z).collect();
        let deflated = deflated_oracle(oracle, &zeros)?;
        let mut r = match extremal_root(&deflated, Side::Smallest, config, Some(&mut cache)) {
            Ok(r) => r,
            Err(e) => {
                return Ok(RootSequence {
                    roots,
                    failure: Some((i, e)),
                })
            }
        };
        if config.refine {
            let (z, res) = polish(oracle, r.z, r.bound().max(8.0 * f64::EPSILON * r.z.norm()))?;
            r.z = z;
            r.residual = res;
        } else {
            r.residual = residual_at(oracle, r.z)?;
        }
        r.eval_count = oracle.eval_count() - start;
        cache.found.push((r.z, r.residual));
        roots.push(r);
    }
    Ok(RootSequence { roots, failure: None })
}

/// For each center `c`, the zero nearest to it via [`smallest_root`] on
/// `p(c + y)`. Centers run in parallel; output order follows the input.
pub fn roots_near<O: NewtonOracle + ?Sized>(
    oracle: &O,
    centers: &[C64],
    config: &SolverConfig,
) -> Vec<Result<RootApproximation>> {
    centers
        .par_iter()
        .map(|&c| {
            let shifted = shifted_oracle(oracle, c, 1.0)?;
            let mut r = smallest_root(&shifted, config)?;
            r.z += c;
            r.estimate += c;
            Ok(r)
        })
        .collect()
}
