//! Bounds on the extremal root radii `|x_d| = min |x_j|` and
//! `|x_1| = max |x_j|`, and black-box radius search by counting zeros.

use crate::error::{Error, Result};
use crate::extended::ExtPoly;
use crate::oracle::{shifted_oracle, NewtonOracle};
use crate::poly::{Poly, C64};
use crate::powersums::{min_count_q, NodeValues};
use crate::squaring::dlg_step_extended;

/// Deepest root squaring [`dlg_sharpened_bounds`] performs.
pub const MAX_SHARPEN_STEPS: usize = 12;

/// Node-count ceiling of the counting probes inside [`radius_bisect`].
pub const BISECT_Q_CAP: usize = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusTarget {
    Smallest,
    Largest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusMethod {
    Coeff,
    NewtonRatio,
    DlgSharpened,
    CauchyBisect,
}

/// `lower ≤ |x| ≤ upper` for the targeted radius; `upper` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusBounds {
    pub lower: f64,
    pub upper: f64,
    pub target: RadiusTarget,
    pub method: RadiusMethod,
}

impl RadiusBounds {
    pub fn contains(&self, r: f64) -> bool {
        self.lower <= r && r <= self.upper
    }

    pub fn is_infinite(&self) -> bool {
        self.upper.is_infinite()
    }
}

/// `(r₋, r₊)` in log2 from log2 |p_i|, or `None` for `p_0 = 0` / `r₊ = 0`.
fn log_extremes(logs: &[f64]) -> (Option<f64>, Option<f64>) {
    let d = logs.len() - 1;
    let r_minus = if logs[0] == f64::NEG_INFINITY {
        None
    } else {
        (1..=d)
            .filter(|&i| logs[i] > f64::NEG_INFINITY)
            .map(|i| (logs[0] - logs[i]) / i as f64)
            .reduce(f64::min)
    };
    let r_plus = (1..=d)
        .filter(|&i| logs[d - i] > f64::NEG_INFINITY)
        .map(|i| (logs[d - i] - logs[d]) / i as f64)
        .reduce(f64::max);
    (r_minus, r_plus)
}

/// Classical bounds `r₋/2 ≤ |x_d| ≤ d·r₋` and `r₊/d ≤ |x_1| ≤ 2r₊` with
/// `r₋ = min_{i≥1} |p_0/p_i|^{1/i}` and `r₊ = max_{i≥1} |p_{d−i}/p_d|^{1/i}`.
pub fn coeff_radii_bounds(p: &Poly) -> Result<(RadiusBounds, RadiusBounds)> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::Domain("degree 0 has no zeros".into()));
    }
    let logs: Vec<f64> = p.coeffs().iter().map(|c| c.norm().log2()).collect();
    let (rm, rp) = log_extremes(&logs);
    let dl = (d as f64).log2();
    let small = match rm {
        Some(r) => (2f64.powf(r - 1.0), 2f64.powf(r + dl)),
        None => (0.0, 0.0),
    };
    let large = match rp {
        Some(r) => (2f64.powf(r - dl), 2f64.powf(r + 1.0)),
        None => (0.0, 0.0),
    };
    Ok((
        RadiusBounds {
            lower: small.0,
            upper: small.1,
            target: RadiusTarget::Smallest,
            method: RadiusMethod::Coeff,
        },
        RadiusBounds {
            lower: large.0,
            upper: large.1,
            target: RadiusTarget::Largest,
            method: RadiusMethod::Coeff,
        },
    ))
}

/// Distance from `c` to the nearest zero is at most `d/|R(c)|`.
///
/// Infinite when `R(c) = 0`; zero when `c` is itself a zero.
pub fn newton_smallest_bound<O: NewtonOracle + ?Sized>(oracle: &O, c: C64) -> Result<RadiusBounds> {
    let upper = match oracle.evaluate(c) {
        Ok(r) if r.norm() == 0.0 => f64::INFINITY,
        Ok(r) => oracle.degree() as f64 / r.norm(),
        Err(Error::Pole { .. }) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(RadiusBounds {
        lower: 0.0,
        upper,
        target: RadiusTarget::Smallest,
        method: RadiusMethod::NewtonRatio,
    })
}

/// Bounds on `|x_d|` and `|x_1|` from the `k`-times root-squared polynomial:
/// `|x_d|^{2^k} ≤ d·|p_0^{(k)}/p_1^{(k)}|` and
/// `|x_1|^{2^k} ≥ |p_{d−1}^{(k)}/p_d^{(k)}|/d`, completed by the classical
/// bounds of `p_k`, then taken to the power `2^{−k}`.
///
/// Squaring runs on extended-exponent coefficients, so large `k` cannot
/// overflow.
pub fn dlg_sharpened_bounds(p: &Poly, k: usize) -> Result<(RadiusBounds, RadiusBounds)> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::Domain("degree 0 has no zeros".into()));
    }
    if k > MAX_SHARPEN_STEPS {
        return Err(Error::Depth {
            h: k,
            limit: MAX_SHARPEN_STEPS,
        });
    }
    let mut e = ExtPoly::from_poly(p);
    for _ in 0..k {
        e = dlg_step_extended(&e);
    }
    let logs: Vec<f64> = e.coeffs().iter().map(|c| c.log2_abs()).collect();
    let scale = 2f64.powi(k as i32);
    let dl = (d as f64).log2();
    let (rm, rp) = log_extremes(&logs);

    let small = if logs[0] == f64::NEG_INFINITY {
        (0.0, 0.0)
    } else {
        if logs[1] == f64::NEG_INFINITY {
            return Err(Error::DivByZero(format!(
                "p_1 vanishes after {k} squarings: coincident smallest root radii"
            )));
        }
        let rm = rm.expect("p_0 and p_1 nonzero");
        (
            2f64.powf((rm - 1.0) / scale),
            2f64.powf((logs[0] - logs[1] + dl) / scale),
        )
    };
    if logs[d - 1] == f64::NEG_INFINITY && d > 1 || rp.is_none() {
        return Err(Error::DivByZero(format!(
            "p_(d-1) vanishes after {k} squarings: coincident largest root radii"
        )));
    }
    let large = (
        2f64.powf((logs[d - 1] - logs[d] - dl) / scale),
        2f64.powf((rp.expect("checked") + 1.0) / scale),
    );
    Ok((
        RadiusBounds {
            lower: small.0,
            upper: small.1,
            target: RadiusTarget::Smallest,
            method: RadiusMethod::DlgSharpened,
        },
        RadiusBounds {
            lower: large.0,
            upper: large.1,
            target: RadiusTarget::Largest,
            method: RadiusMethod::DlgSharpened,
        },
    ))
}

/// A zero count at a probe radius that may have been nudged off a zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub radius: f64,
    pub count: usize,
    /// Node count of the finer of the two agreeing sums.
    pub q: usize,
}

fn cross_checked_count<O: NewtonOracle + ?Sized>(oracle: &O, c: C64, r: f64, q: usize) -> Result<Option<usize>> {
    let d = oracle.degree() as f64;
    let t = shifted_oracle(oracle, c, r)?;
    let fine = NodeValues::compute(&t, 2 * q, 0.0)?;
    let coarse = fine.subsampled(2)?;
    let round = |s: C64| -> Option<usize> {
        let k = s.re.round();
        ((s - C64::new(k, 0.0)).norm() <= 0.25 && (0.0..=d).contains(&k)).then_some(k as usize)
    };
    match (round(coarse.power_sum(0)?), round(fine.power_sum(0)?)) {
        (Some(a), Some(b)) if a == b => Ok(Some(a)),
        _ => Ok(None),
    }
}

/// Count zeros in `D(c, r)`. The count is accepted when the sums over `q`
/// and `2q` nodes round to the same integer within 0.25; otherwise `q`
/// doubles up to [`BISECT_Q_CAP`]. A node on a zero or an exhausted budget
/// moves the circle to each radius in `alts` in turn.
pub fn probe_count<O: NewtonOracle + ?Sized>(oracle: &O, c: C64, r: f64, alts: &[f64]) -> Result<Probe> {
    let d = oracle.degree();
    for &radius in std::iter::once(&r).chain(alts) {
        let mut q = min_count_q(d, radius)?;
        while 2 * q <= BISECT_Q_CAP {
            match cross_checked_count(oracle, c, radius, q) {
                Ok(Some(count)) => return Ok(Probe { radius, count, q: 2 * q }),
                Ok(None) => q *= 2,
                Err(Error::Pole { .. }) => break,
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::CountUnstable { radius: r })
}

/// Radius `ρ` of relative width `2^{−tol_bits}` around the `j`-th smallest
/// root radius about `c`: `D(c, ρ)` holds at least `j` zeros and
/// `D(c, ρ(1 − 2^{−tol_bits}))` fewer than `j`. Bisection on `log ρ`.
///
/// A probe circle within relative distance `~3/q` of a zero cannot be
/// counted with `q` nodes, so with [`BISECT_Q_CAP`] tolerances finer than
/// about 13 bits may end in [`Error::CountUnstable`].
pub fn radius_bisect<O: NewtonOracle + ?Sized>(
    oracle: &O,
    c: C64,
    j: usize,
    lo: f64,
    hi: f64,
    tol_bits: u32,
) -> Result<f64> {
    Ok(radius_interval(oracle, c, j, lo, hi, tol_bits)?.1)
}

/// The final bracket `(lo, hi)` of [`radius_bisect`]: fewer than `j` zeros
/// in `D(c, lo)`, at least `j` in `D(c, hi)`.
pub fn radius_interval<O: NewtonOracle + ?Sized>(
    oracle: &O,
    c: C64,
    j: usize,
    lo: f64,
    hi: f64,
    tol_bits: u32,
) -> Result<(f64, f64)> {
    let d = oracle.degree();
    if j == 0 || j > d {
        return Err(Error::Domain(format!("radius index {j} outside 1..={d}")));
    }
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::Bracket(format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let p_lo = probe_count(oracle, c, lo, &[lo * 0.99])?;
    let p_hi = probe_count(oracle, c, hi, &[hi * 1.01])?;
    if p_lo.count >= j || p_hi.count < j {
        return Err(Error::Bracket(format!(
            "counts {} at {} and {} at {} do not bracket {j}",
            p_lo.count, p_lo.radius, p_hi.count, p_hi.radius
        )));
    }
    let (mut lo, mut hi) = (p_lo.radius, p_hi.radius);
    let shrink = 1.0 - 2f64.powi(-(tol_bits as i32));
    while lo < hi * shrink {
        let mid = (lo * hi).sqrt();
        if !(mid > lo && mid < hi) {
            break;
        }
        // a probe stuck on a zero is retried a quarter of the log-width to either side
        let step = (hi / lo).powf(0.25);
        let p = probe_count(oracle, c, mid, &[mid * step, mid / step])?;
        if p.count >= j {
            hi = p.radius;
        } else {
            lo = p.radius;
        }
    }
    Ok((lo, hi))
}

/// Radii `(lo, hi)` with fewer than `j` zeros in `D(c, lo)` and at least `j`
/// in `D(c, hi)`, found by halving or doubling from `start`.
pub fn find_bracket<O: NewtonOracle + ?Sized>(oracle: &O, c: C64, j: usize, start: f64) -> Result<(f64, f64)> {
    let d = oracle.degree();
    if j == 0 || j > d {
        return Err(Error::Domain(format!("radius index {j} outside 1..={d}")));
    }
    if !(start > 0.0 && start.is_finite()) {
        return Err(Error::Bracket(format!("start radius {start} must be positive and finite")));
    }
    let first = probe_count(oracle, c, start, &[start * 0.9, start * 1.1])?;
    let mut known = first.radius;
    let inside = first.count >= j;
    for _ in 0..MAX_BRACKET_STEPS {
        let r = if inside { known / 2.0 } else { known * 2.0 };
        if !(r > 0.0 && r.is_finite()) {
            break;
        }
        let p = probe_count(oracle, c, r, &[r * 0.9, r * 1.1])?;
        match (inside, p.count >= j) {
            (true, false) => return Ok((p.radius, known)),
            (false, true) => return Ok((known, p.radius)),
            _ => known = p.radius,
        }
    }
    Err(Error::Bracket(format!(
        "no radius change of count around {j} within 2^±{MAX_BRACKET_STEPS} of {start}"
    )))
}

/// Halvings or doublings tried by [`find_bracket`].
pub const MAX_BRACKET_STEPS: usize = 200;

/// [`radius_bisect`] reported as bounds on the targeted radius.
pub fn bisect_bounds<O: NewtonOracle + ?Sized>(
    oracle: &O,
    c: C64,
    j: usize,
    lo: f64,
    hi: f64,
    tol_bits: u32,
) -> Result<RadiusBounds> {
    let (lower, upper) = radius_interval(oracle, c, j, lo, hi, tol_bits)?;
    Ok(RadiusBounds {
        lower,
        upper,
        target: if j == 1 {
            RadiusTarget::Smallest
        } else {
            RadiusTarget::Largest
        },
        method: RadiusMethod::CauchyBisect,
    })
}
