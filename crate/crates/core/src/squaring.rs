//! Root squaring at the coefficient level (Dandelin–Lobachevsky–Gräffe),
//! its Fiedler–Gemignani companion recurrence, the descending process, and
//! root squaring at the level of Newton ratios.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result, Warning};
use crate::extended::{ExtComplex, ExtPoly};
use crate::oracle::NewtonOracle;
use crate::poly::{is_finite, Poly, C64, ZERO};

/// Recursion limit of [`ratio_squaring_eval`]; its cost is `2^h` oracle calls.
pub const MAX_RATIO_DEPTH: usize = 20;

/// `p_h` (zeros `x_j^{2^h}`) and, in FG mode, `q_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaringState {
    h: usize,
    p: Poly,
    q: Option<Poly>,
}

impl SquaringState {
    /// Plain root-squaring state.
    pub fn new(p: Poly) -> Self {
        SquaringState { h: 0, p, q: None }
    }

    /// FG state with `q_0 = x·p'(x)`.
    pub fn with_fg(p: Poly) -> Self {
        let q = p.derivative().shift_up(1);
        SquaringState {
            h: 0,
            p,
            q: Some(q),
        }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn q(&self) -> Option<&Poly> {
        self.q.as_ref()
    }
}

fn convolve<T>(a: &[T], b: &[T], zero: T) -> Vec<T>
where
    T: Copy + Add<Output = T> + Mul<Output = T>,
{
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![zero; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

fn split<T: Copy>(c: &[T]) -> (Vec<T>, Vec<T>) {
    (
        c.iter().step_by(2).copied().collect(),
        c.iter().skip(1).step_by(2).copied().collect(),
    )
}

/// `(−1)^d (e(x)² − x·o(x)²)` with the leading coefficient set to `p_d²`.
fn square_roots_of<T>(c: &[T], zero: T) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    let d = c.len() - 1;
    let (e, o) = split(c);
    let ee = convolve(&e, &e, zero);
    let oo = convolve(&o, &o, zero);
    let mut out = vec![zero; d + 1];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut v = ee.get(k).copied().unwrap_or(zero);
        if k >= 1 {
            v = v - oo.get(k - 1).copied().unwrap_or(zero);
        }
        *slot = if d % 2 == 1 { -v } else { v };
    }
    out[d] = c[d] * c[d];
    out
}

fn squared(p: &Poly) -> Result<Poly> {
    let c = p.coeffs();
    let out = square_roots_of(c, ZERO);
    let d = p.degree();
    if out.iter().any(|z| !is_finite(*z)) {
        return Err(Error::Range("root-squaring coefficient overflowed".into()));
    }
    if out[d] == ZERO || (c[0] != ZERO && out[0] == ZERO) {
        return Err(Error::Range("root-squaring coefficient underflowed to zero".into()));
    }
    Ok(Poly::new(out))
}

/// One root-squaring step: the zeros of the result are the squares of the
/// zeros of `p_h`.
pub fn dlg_step(state: &SquaringState) -> Result<SquaringState> {
    Ok(SquaringState {
        h: state.h + 1,
        p: squared(&state.p)?,
        q: state.q.clone(),
    })
}

/// Root squaring on extended-exponent coefficients. Never overflows.
pub fn dlg_step_extended(p: &ExtPoly) -> ExtPoly {
    ExtPoly::from_coeffs(square_roots_of(p.coeffs(), ExtComplex::ZERO))
}

/// One FG step: `q_{h+1} = b·e − a·o` for `q_h(y) = a(y²) + y·b(y²)` and
/// `p_h(y) = e(y²) + y·o(y²)`, together with the root-squaring step on `p_h`.
pub fn fg_step(state: &SquaringState) -> Result<SquaringState> {
    let q = state
        .q
        .as_ref()
        .ok_or_else(|| Error::Domain("FG step needs a state created with q".into()))?;
    let (e, o) = split(state.p.coeffs());
    let (a, b) = split(q.coeffs());
    let be = convolve(&b, &e, ZERO);
    let ao = convolve(&a, &o, ZERO);
    let n = be.len().max(ao.len()).max(1);
    let next_q: Vec<C64> = (0..n)
        .map(|k| be.get(k).copied().unwrap_or(ZERO) - ao.get(k).copied().unwrap_or(ZERO))
        .collect();
    if next_q.iter().any(|z| !is_finite(*z)) {
        return Err(Error::Range("FG coefficient overflowed".into()));
    }
    Ok(SquaringState {
        h: state.h + 1,
        p: squared(&state.p)?,
        q: Some(Poly::new(next_q)),
    })
}

/// Estimate of the absolutely smallest zero: `q_h(0)/p_h'(0)` with the sign
/// `(−1)^{d·h}` that the signed squaring convention introduces removed.
///
/// At `h = 0` this is `0` since `q_0(0) = 0`.
pub fn gemignani_estimate(state: &SquaringState) -> Result<C64> {
    let q = state
        .q
        .as_ref()
        .ok_or_else(|| Error::Domain("estimate needs an FG state".into()))?;
    let den = state.p.coeff(1);
    if den == ZERO {
        return Err(Error::DivByZero(
            "p_h'(0) = 0: the smallest zero is not separated in modulus (coincident root radii)"
                .into(),
        ));
    }
    let sign = if (state.p.degree() * state.h) % 2 == 1 { -1.0 } else { 1.0 };
    Ok(q.coeff(0) / den * sign)
}

/// `(−p_1/p_0, −p_{d−1}/p_d)` of `p_h`: the power sums `Σ x_j^{−2^h}` and
/// `Σ x_j^{2^h}`, which approximate `x_d^{2^h}` and `x_1^{2^h}` when the
/// extremal zeros are separated in modulus.
pub fn extremal_power_ratios(state: &SquaringState) -> Result<(C64, C64)> {
    let p = &state.p;
    let d = p.degree();
    if d == 0 {
        return Err(Error::Domain("degree 0 has no zeros".into()));
    }
    if p.coeff(0) == ZERO {
        return Err(Error::DivByZero("p_h(0) = 0".into()));
    }
    let small = -p.coeff(1) / p.coeff(0);
    let large = -p.coeff(d - 1) / p.leading();
    Ok((small, large))
}

/// Zero of `p_0` recovered from a zero of `p_h` by the descending process.
#[derive(Debug, Clone, PartialEq)]
pub struct Descent {
    pub value: C64,
    pub warnings: Vec<Warning>,
}

/// Walk `y` (a zero of `p_h`) down through `levels = [p_0, …, p_h]`, choosing
/// at each level the square root with the smaller residual. Exactly `2h`
/// polynomial evaluations.
///
/// When the residuals are within 10% of each other the level is flagged and
/// the candidate with smaller `|Im|` (then nonnegative real part) is kept.
pub fn descend(levels: &[Poly], y: C64, h: usize) -> Result<Descent> {
    if levels.len() != h + 1 {
        return Err(Error::Domain(format!(
            "expected {} levels for h = {h}, found {}",
            h + 1,
            levels.len()
        )));
    }
    let mut z = y;
    let mut warnings = Vec::new();
    for i in (0..h).rev() {
        let r = z.sqrt();
        let cands = [r, -r];
        let res = [
            levels[i].horner(cands[0]).norm(),
            levels[i].horner(cands[1]).norm(),
        ];
        let spread = (res[0] - res[1]).abs();
        let ambiguous = !(spread >= 0.1 * res[0].max(res[1])) || spread == 0.0;
        z = if ambiguous {
            warnings.push(Warning::AmbiguousDescent { level: i });
            tie_break(cands[0], cands[1])
        } else if res[0] < res[1] {
            cands[0]
        } else {
            cands[1]
        };
    }
    Ok(Descent { value: z, warnings })
}

fn tie_break(a: C64, b: C64) -> C64 {
    let (ia, ib) = (a.im.abs(), b.im.abs());
    if ia < ib {
        a
    } else if ib < ia {
        b
    } else if a.re >= 0.0 {
        a
    } else {
        b
    }
}

/// `p_h'(x)/p_h(x)` for the implicit `h`-fold root-squared polynomial, from
/// the oracle of `p` alone:
/// `R_{h+1}(x) = (R_h(√x) − R_h(−√x)) / (2√x)` with the principal root.
pub fn ratio_squaring_eval<O: NewtonOracle + ?Sized>(oracle: &O, x: C64, h: usize) -> Result<C64> {
    if h > MAX_RATIO_DEPTH {
        return Err(Error::Depth {
            h,
            limit: MAX_RATIO_DEPTH,
        });
    }
    ratio_rec(oracle, x, h)
}

fn ratio_rec<O: NewtonOracle + ?Sized>(oracle: &O, x: C64, h: usize) -> Result<C64> {
    if h == 0 {
        return oracle.evaluate(x);
    }
    if x == ZERO {
        return Err(Error::Domain(
            "squared ratio at x = 0 needs a derivative of the oracle".into(),
        ));
    }
    let s = x.sqrt();
    let plus = ratio_rec(oracle, s, h - 1)?;
    let minus = ratio_rec(oracle, -s, h - 1)?;
    let r = (plus - minus) / (s * 2.0);
    if is_finite(r) {
        Ok(r)
    } else {
        Err(Error::Pole { at: x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::companion::{companion_roots, match_distance};
    use crate::oracle::oracle_from_coeffs;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn dlg_examples() {
        let s = dlg_step(&SquaringState::new(Poly::from_real(&[-1.0, 0.0, 1.0]))).unwrap();
        assert_eq!(s.p(), &Poly::from_real(&[1.0, -2.0, 1.0]));
        assert_eq!(s.h(), 1);
        let s = dlg_step(&SquaringState::new(Poly::from_real(&[6.0, -5.0, 1.0]))).unwrap();
        assert_eq!(s.p(), &Poly::from_real(&[36.0, -13.0, 1.0]));
        let s2 = dlg_step(&s).unwrap();
        let want = Poly::from_roots(&[c(16.0, 0.0), c(81.0, 0.0)]);
        assert_eq!(s2.p(), &want);
    }

    #[test]
    fn odd_degree_sign() {
        let roots = [c(0.5, 0.5), c(-2.0, 0.0), c(1.0, -1.5)];
        let s = dlg_step(&SquaringState::new(Poly::from_roots(&roots))).unwrap();
        let sq: Vec<C64> = roots.iter().map(|r| r * r).collect();
        let want = Poly::from_roots(&sq);
        for (a, b) in s.p().coeffs().iter().zip(want.coeffs()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn dlg_overflow_is_range_error() {
        let mut s = SquaringState::new(Poly::from_roots(&[c(1e30, 0.0), c(2.0, 0.0)]));
        let err = (0..6).try_for_each(|_| {
            s = dlg_step(&s)?;
            Ok::<(), Error>(())
        });
        assert!(matches!(err, Err(Error::Range(_))));
    }

    #[test]
    fn extended_matches_plain_and_keeps_going() {
        let p = Poly::from_roots(&[c(0.5, 0.1), c(-1.5, 0.3), c(2.5, -1.0)]);
        let mut s = SquaringState::new(p.clone());
        let mut e = ExtPoly::from_poly(&p);
        for _ in 0..3 {
            s = dlg_step(&s).unwrap();
            e = dlg_step_extended(&e);
        }
        let back = e.to_poly().unwrap();
        for (a, b) in back.coeffs().iter().zip(s.p().coeffs()) {
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
        }
        for _ in 0..12 {
            e = dlg_step_extended(&e);
        }
        // x_1^{2^15} dominates: log2 |p_{d-1}/p_d| ≈ 2^15 log2 |x_1|
        let lr = e.coeff(2).log2_abs() - e.coeff(3).log2_abs();
        let want = 32768.0 * c(2.5, -1.0).norm().log2();
        assert!((lr - want).abs() < 1e-6 * want);
    }

    #[test]
    fn fg_pointwise_identity() {
        let p = Poly::from_roots(&[c(0.4, 0.2), c(-1.1, 0.0), c(2.0, 1.0)]);
        let mut s = SquaringState::with_fg(p);
        for _ in 0..3 {
            let next = fg_step(&s).unwrap();
            for k in 0..10 {
                let x = C64::from_polar(0.3 + 0.2 * k as f64, 0.9 * k as f64);
                let y = x.sqrt();
                let (q, p) = (s.q().unwrap(), s.p());
                let lhs = y * 2.0 * next.q().unwrap().horner(x);
                let rhs = q.horner(y) * p.horner(-y) - q.horner(-y) * p.horner(y);
                assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
            }
            s = next;
        }
    }

    #[test]
    fn gemignani_examples() {
        let mut s = SquaringState::with_fg(Poly::from_roots(&[ZERO, c(2.0, 0.0)]));
        for _ in 0..4 {
            assert_eq!(gemignani_estimate(&s).unwrap(), ZERO);
            s = fg_step(&s).unwrap();
        }
        let mut s = SquaringState::with_fg(Poly::from_roots(&[c(0.5, 0.0), c(2.0, 0.0)]));
        for _ in 0..3 {
            s = fg_step(&s).unwrap();
        }
        let err = (gemignani_estimate(&s).unwrap() - c(0.5, 0.0)).norm();
        assert!(err <= 4.0 * 0.25f64.powi(8), "{err}");
        let s = SquaringState::with_fg(Poly::from_real(&[-1.0, 0.0, 1.0]));
        assert!(matches!(gemignani_estimate(&s), Err(Error::DivByZero(_))));
    }

    #[test]
    fn gemignani_sign_for_odd_degree() {
        let roots = [c(0.3, 0.1), c(1.5, 0.0), c(-2.0, 1.0)];
        let mut s = SquaringState::with_fg(Poly::from_roots(&roots));
        for _ in 0..5 {
            s = fg_step(&s).unwrap();
        }
        assert!((gemignani_estimate(&s).unwrap() - roots[0]).norm() < 1e-9);
    }

    #[test]
    fn extremal_ratio_examples() {
        let s = SquaringState::new(Poly::from_roots(&[c(2.0, 0.0), c(3.0, 0.0)]));
        assert_eq!(extremal_power_ratios(&s).unwrap().1, c(5.0, 0.0));
        let s2 = dlg_step(&dlg_step(&s).unwrap()).unwrap();
        assert_eq!(extremal_power_ratios(&s2).unwrap().1, c(97.0, 0.0));
        let mut s = SquaringState::new(Poly::from_real(&[0.09, -1.0, 1.0]));
        for _ in 0..3 {
            s = dlg_step(&s).unwrap();
        }
        let want = 0.1f64.powi(-8) + 0.9f64.powi(-8);
        assert!((extremal_power_ratios(&s).unwrap().0.re - want).abs() < 1e-7 * want);
    }

    #[test]
    fn descend_examples() {
        let p = Poly::from_real(&[-4.0, 0.0, 1.0]);
        let levels = vec![p.clone(), dlg_step(&SquaringState::new(p)).unwrap().p().clone()];
        let d = descend(&levels, c(4.0, 0.0), 1).unwrap();
        assert_eq!(d.value, c(2.0, 0.0));

        let p = Poly::from_roots(&[c(0.0, 0.5), c(2.0, 0.0)]);
        let s1 = dlg_step(&SquaringState::new(p.clone())).unwrap();
        let s2 = dlg_step(&s1).unwrap();
        let levels = vec![p, s1.p().clone(), s2.p().clone()];
        let d = descend(&levels, c(0.0625, 0.0), 2).unwrap();
        assert!((d.value - c(0.0, 0.5)).norm() < 1e-8);
        assert!(d.warnings.is_empty());

        let p = Poly::from_real(&[-1.0, 0.0, 1.0]);
        let levels = vec![p.clone(), dlg_step(&SquaringState::new(p)).unwrap().p().clone()];
        let d = descend(&levels, c(1.0, 0.0), 1).unwrap();
        assert_eq!(d.value, c(1.0, 0.0));
        assert_eq!(d.warnings, vec![Warning::AmbiguousDescent { level: 0 }]);
    }

    #[test]
    fn ratio_squaring_examples() {
        let p = Poly::from_real(&[6.0, -5.0, 1.0]);
        let o = oracle_from_coeffs(&p).unwrap();
        let x = c(0.7, 0.3);
        assert_eq!(ratio_squaring_eval(&o, x, 0).unwrap(), o.evaluate(x).unwrap());
        let sq = oracle_from_coeffs(&Poly::from_real(&[36.0, -13.0, 1.0])).unwrap();
        let two = c(2.0, 0.0);
        assert!((ratio_squaring_eval(&o, two, 1).unwrap() - sq.evaluate(two).unwrap()).norm() < 1e-10);
        assert!(matches!(ratio_squaring_eval(&o, two, 21), Err(Error::Depth { h: 21, .. })));
    }

    #[test]
    fn ratio_squaring_matches_coefficients_deeper() {
        let p = Poly::from_roots(&[c(0.6, 0.2), c(-0.9, 0.4), c(1.2, -0.7)]);
        let o = oracle_from_coeffs(&p).unwrap();
        let mut s = SquaringState::new(p);
        for h in 1..=4 {
            s = dlg_step(&s).unwrap();
            let direct = oracle_from_coeffs(s.p()).unwrap();
            let x = c(0.3, 1.7);
            let a = ratio_squaring_eval(&o, x, h).unwrap();
            let b = direct.evaluate(x).unwrap();
            assert!((a - b).norm() <= 1e-9 * b.norm().max(1.0), "h={h}");
        }
        assert_eq!(o.eval_count(), 2 + 4 + 8 + 16);
    }

    #[test]
    fn zeros_are_squared() {
        let roots = [c(0.4, 0.3), c(-1.0, 0.8), c(2.0, 0.0), c(0.0, -2.7)];
        let s = dlg_step(&SquaringState::new(Poly::from_roots(&roots))).unwrap();
        let sq: Vec<C64> = roots.iter().map(|r| r * r).collect();
        assert!(match_distance(&companion_roots(s.p()), &sq) < 1e-9);
    }
}
