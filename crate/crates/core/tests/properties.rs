mod common;

use blackbox_roots::companion::{companion_roots, match_distance, Matrix};
use blackbox_roots::extremal::{choose_k, estimate_largest, estimate_smallest, gamma_bound};
use blackbox_roots::oracle::StraightLineProgram;
use blackbox_roots::oracle::{
    deflated_oracle, matrix_oracle, oracle_from_coeffs, oracle_from_slp, reversed_oracle, NewtonOracle,
};
use blackbox_roots::powersums::{
    cauchy_error_bound, cauchy_sum, cauchy_sum_disc, choose_q, newton_power_sums, root_count_rotated,
    CauchyParams, PowerSumEstimate, PowerSumSource,
};
use blackbox_roots::radii::{dlg_sharpened_bounds, newton_smallest_bound, radius_bisect};
use blackbox_roots::solver::{lehmer_newton, root_sequence, smallest_root, SolverConfig};
use blackbox_roots::extended::ExtPoly;
use blackbox_roots::squaring::{dlg_step, dlg_step_extended, extremal_power_ratios, SquaringState};
use blackbox_roots::{Disc, Poly, C64};
use common::*;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn random_poly(r: &mut ChaCha8Rng, d: usize) -> Poly {
    Poly::new((0..=d).map(|_| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect())
}

/// A point at distance at least `gap` from every zero.
fn away_from(r: &mut ChaCha8Rng, roots: &[C64], radius: f64, gap: f64) -> C64 {
    loop {
        let x = polar(radius * r.gen_range(0.0f64..1.0).sqrt(), phase(r));
        if nearest(x, roots) >= gap {
            return x;
        }
    }
}

fn estimate(h: usize, value: C64) -> PowerSumEstimate {
    PowerSumEstimate {
        h,
        value,
        bound: None,
        params: None,
        source: PowerSumSource::CauchySum,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reverse_is_an_involution(seed in any::<u64>(), d in 0usize..16) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, d);
        let back = p.reverse().poly.reverse().poly;
        prop_assert_eq!(back, p);
    }

    #[test]
    fn shift_scale_composes(seed in any::<u64>(), d in 1usize..=16) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, d);
        let center = c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let rho = r.gen_range(0.2..2.0);
        let t = p.shift_scale(center, rho).unwrap();
        for _ in 0..20 {
            let y = polar(r.gen_range(0.0..1.0), phase(&mut r));
            let want = p.horner(center + y * rho);
            let scale: f64 = p.coeffs().iter().map(|a| a.norm()).sum::<f64>()
                * (center.norm() + rho).max(1.0).powi(d as i32);
            prop_assert!((t.horner(y) - want).norm() <= 1e-10 * want.norm().max(1e-6 * scale));
        }
    }

    #[test]
    fn folding_preserves_unity_values(seed in any::<u64>(), d in 0usize..24, q in 1usize..20) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, d);
        let folded = p.mod_cyclotomic(q).unwrap();
        let fast = p.eval_at_unity(q).unwrap();
        for g in 0..q {
            let z = blackbox_roots::poly::unity_root(q, g);
            let want = p.horner(z);
            let tol = 1e-10 * want.norm().max(1e-3);
            prop_assert!((folded.horner(z) - want).norm() <= tol);
            prop_assert!((fast[g] - want).norm() <= tol);
        }
    }

    #[test]
    fn from_roots_round_trips(seed in any::<u64>(), d in 1usize..=12) {
        let mut r = rng(seed);
        let roots = separated_moduli(&mut r, d, (0.1, 0.2), (1.25, 1.5));
        let got = companion_roots(&Poly::from_roots(&roots));
        let scale = max_modulus(&roots).norm();
        prop_assert!(match_distance(&roots, &got) <= 1e-8 * scale);
    }

    #[test]
    fn coefficient_oracle_is_the_root_sum(seed in any::<u64>(), d in 1usize..=10) {
        let mut r = rng(seed);
        let roots: Vec<C64> = (0..d).map(|_| log_uniform(&mut r, 0.2, 5.0)).collect();
        let o = oracle_from_coeffs(&Poly::from_roots(&roots)).unwrap();
        for _ in 0..20 {
            let x = away_from(&mut r, &roots, 6.0, 0.05);
            let want: C64 = roots.iter().map(|z| (x - z).inv()).sum();
            prop_assert!(rel(o.evaluate(x).unwrap(), want) <= 1e-9);
        }
    }

    #[test]
    fn slp_oracle_matches_coefficients(seed in any::<u64>(), d in 1usize..=10) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, d);
        let a = oracle_from_coeffs(&p).unwrap();
        let b = oracle_from_slp(StraightLineProgram::from_poly(&p)).unwrap();
        prop_assert_eq!(b.degree(), d);
        let roots = companion_roots(&p);
        for _ in 0..10 {
            let x = away_from(&mut r, &roots, 3.0, 0.05);
            prop_assert!(rel(b.evaluate(x).unwrap(), a.evaluate(x).unwrap()) <= 1e-9);
        }
    }

    #[test]
    fn full_deflation_vanishes(seed in any::<u64>(), d in 1usize..=8) {
        let mut r = rng(seed);
        let roots: Vec<C64> = (0..d).map(|_| log_uniform(&mut r, 0.2, 5.0)).collect();
        let base = oracle_from_coeffs(&Poly::from_roots(&roots)).unwrap();
        let zeros = companion_roots(base.poly());
        let f = deflated_oracle(&base, &zeros).unwrap();
        prop_assert_eq!(f.degree(), 0);
        for _ in 0..10 {
            let x = away_from(&mut r, &roots, 6.0, 0.1);
            let scale: f64 = zeros.iter().map(|z| (x - z).inv().norm()).sum();
            prop_assert!(f.evaluate(x).unwrap().norm() < 1e-6 * scale);
        }
    }

    #[test]
    fn double_reversal_is_identity(seed in any::<u64>(), d in 1usize..=10) {
        let mut r = rng(seed);
        let roots: Vec<C64> = (0..d).map(|_| log_uniform(&mut r, 0.2, 5.0)).collect();
        let o = oracle_from_coeffs(&Poly::from_roots(&roots)).unwrap();
        let twice = reversed_oracle(reversed_oracle(&o));
        for _ in 0..10 {
            let x = away_from(&mut r, &roots, 6.0, 0.05);
            if x.norm() < 0.05 {
                continue;
            }
            prop_assert!(rel(twice.evaluate(x).unwrap(), o.evaluate(x).unwrap()) <= 1e-8);
        }
    }

    #[test]
    fn companion_matrix_oracle_matches(seed in any::<u64>(), d in 1usize..=8) {
        let mut r = rng(seed);
        let roots: Vec<C64> = (0..d).map(|_| log_uniform(&mut r, 0.3, 3.0)).collect();
        let p = Poly::from_roots(&roots);
        let a = oracle_from_coeffs(&p).unwrap();
        let m = matrix_oracle(Matrix::companion(&p)).unwrap();
        for _ in 0..10 {
            let x = away_from(&mut r, &roots, 4.0, 0.1);
            prop_assert!(rel(m.evaluate(x).unwrap(), a.evaluate(x).unwrap()) <= 1e-8);
        }
    }

    #[test]
    fn squaring_squares_the_zeros(seed in any::<u64>(), d in 1usize..=8) {
        let mut r = rng(seed);
        let roots: Vec<C64> = (0..d).map(|_| log_uniform(&mut r, 0.3, 3.0)).collect();
        let s = dlg_step(&SquaringState::new(Poly::from_roots(&roots))).unwrap();
        let want: Vec<C64> = roots.iter().map(|x| x * x).collect();
        let scale = max_modulus(&want).norm();
        prop_assert!(match_distance(&want, &companion_roots(s.p())) <= 1e-7 * scale);
    }

    #[test]
    fn extremal_ratios_are_power_sums(seed in any::<u64>(), d in 1usize..=8, h in 0u32..=3) {
        let mut r = rng(seed);
        let roots: Vec<C64> = (0..d).map(|_| log_uniform(&mut r, 0.5, 2.0)).collect();
        let mut s = SquaringState::new(Poly::from_roots(&roots));
        for _ in 0..h {
            s = dlg_step(&s).unwrap();
        }
        let (small, large) = extremal_power_ratios(&s).unwrap();
        let e = 1i32 << h;
        let direct: C64 = roots.iter().map(|x| x.powi(e)).sum();
        let inverse: C64 = roots.iter().map(|x| x.powi(-e)).sum();
        let scale: f64 = roots.iter().map(|x| x.norm().powi(e)).sum();
        let iscale: f64 = roots.iter().map(|x| x.norm().powi(-e)).sum();
        prop_assert!((large - direct).norm() <= 1e-7 * scale);
        prop_assert!((small - inverse).norm() <= 1e-7 * iscale);
    }

    #[test]
    fn newton_and_cauchy_sums_agree(seed in any::<u64>(), d in 1usize..=8) {
        let mut r = rng(seed);
        let roots: Vec<C64> = (0..d).map(|_| log_uniform(&mut r, 1.2, 4.0)).collect();
        let p = Poly::from_roots(&roots);
        let p0 = p.coeff(0);
        let k = 4;
        let trailing: Vec<C64> = (0..k + 2).map(|i| p.coeff(i) / p0).collect();
        let newton = newton_power_sums(&trailing, k).unwrap();
        // reciprocal zeros lie in D(0, 1/1.2); the reversed oracle sees them
        let rev = reversed_oracle(oracle_from_coeffs(&p).unwrap());
        let params = CauchyParams::new(64, 1.2).unwrap();
        for s in &newton {
            let cauchy = cauchy_sum_disc(&rev, &Disc::unit(), s.h, &params).unwrap();
            let allowance = cauchy.bound.unwrap() + 1e-12 * (1.0 + s.value.norm());
            prop_assert!((cauchy.value - s.value).norm() <= allowance);
        }
    }

    #[test]
    fn rotation_does_not_change_counts(seed in any::<u64>(), d in 1usize..=8, rot in 0.0f64..std::f64::consts::TAU) {
        let mut r = rng(seed);
        let roots = outside_annulus(&mut r, d, 1.0 / 1.5, 1.5);
        let o = oracle_from_coeffs(&Poly::from_roots(&roots)).unwrap();
        let inside = roots.iter().filter(|x| x.norm() < 1.0).count();
        let q = 64;
        let a = root_count_rotated(&o, &Disc::unit(), q, 0.0).unwrap();
        let b = root_count_rotated(&o, &Disc::unit(), q, rot).unwrap();
        prop_assert_eq!(a.count, inside);
        prop_assert_eq!(b.count, inside);
        for h in 1..6 {
            let bound = cauchy_error_bound(d, 1.5, h, q).unwrap();
            let diff = (cauchy_sum(&o, h, q, 0.0).unwrap() - cauchy_sum(&o, h, q, rot).unwrap()).norm();
            prop_assert!(diff <= 2.0 * bound + 1e-12);
        }
    }

    #[test]
    fn choose_q_is_minimal(d in 1usize..64, theta in 1.05f64..4.0, h in 0usize..20, b0 in 1u32..40) {
        let q = choose_q(d, theta, h, b0, 1.0).unwrap();
        let meets = |q: usize| cauchy_error_bound(d, theta, h, q).unwrap() <= 2f64.powi(-(b0 as i32));
        prop_assert!(q > h);
        prop_assert!(meets(q));
        prop_assert!(q == h + 1 || !meets(q - 1));
    }

    #[test]
    fn equal_zeros_are_exact(a_re in -3.0f64..3.0, a_im in -3.0f64..3.0, w in 1usize..6, k in 1usize..10) {
        let a = c(a_re, a_im);
        prop_assume!(a.norm() > 0.1);
        let wf = w as f64;
        let s = |h: usize| estimate(h, a.powu(h as u32) * wf);
        let sigma = |h: usize| estimate(h, a.inv().powu(h as u32) * wf);
        let large = estimate_largest(&s(k), &s(k + 1), None).unwrap().value;
        let small = estimate_smallest(&sigma(k), &sigma(k + 1), None).unwrap().value;
        prop_assert!(rel(large, a) <= 1e-13);
        prop_assert!(rel(small, a) <= 1e-13);
    }

    #[test]
    fn ratio_error_decays_geometrically(r_small in 0.1f64..1.0, gap in 2.0f64..8.0, a in 0.0f64..std::f64::consts::TAU, b in 0.0f64..std::f64::consts::TAU) {
        let x = polar(r_small, a);
        let y = polar(r_small * gap, b);
        let sigma = |h: usize| estimate(h, x.inv().powu(h as u32) + y.inv().powu(h as u32));
        let err = |k: usize| (estimate_smallest(&sigma(k), &sigma(k + 1), None).unwrap().value - x).norm();
        for k in 4..12 {
            let (e0, e1) = (err(k), err(k + 1));
            if e1 < 1e-13 * r_small {
                break;
            }
            // (1 + o(1)) shrinks like Δ^k; rounding adds a few ulps of |x|
            let slack = 4.0 * gap.powi(-(k as i32)) + 64.0 * f64::EPSILON * r_small / e1;
            prop_assert!(e1 / e0 <= (1.0 / gap) * (1.0 + slack));
        }
    }

    #[test]
    fn cluster_prefactor_bounds_the_tail(seed in any::<u64>(), w in 2usize..7, i in 1usize..=12) {
        let mut r = rng(seed);
        // m zeros at the extremal modulus, the rest at least twice as large
        let m = r.gen_range(1..w);
        let z0 = r.gen_range(0.3..1.0);
        let mut zs: Vec<C64> = (0..m).map(|_| polar(z0, 0.0)).collect();
        for _ in m..w {
            zs.push(polar(z0 * r.gen_range(2.0..4.0), phase(&mut r)));
        }
        let near = zs[m..].iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        let tail: C64 = zs[m..].iter().map(|z| (zs[0] / z).powu(i as u32)).sum::<C64>() / m as f64;
        let bound = ((w - m) as f64 / m as f64) * (z0 / near).powi(i as i32);
        prop_assert!(tail.norm() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn choose_k_meets_its_target(delta in 0.01f64..0.99, b in 1u32..53) {
        let k = choose_k(delta, b).unwrap();
        prop_assert!(gamma_bound(delta, k).unwrap() <= 2f64.powi(-(b as i32)));
    }

    #[test]
    fn sharpening_is_monotone(seed in any::<u64>(), d in 2usize..=8) {
        let mut r = rng(seed);
        let roots = separated_moduli(&mut r, d, (0.2, 2.0), (2.0, 3.0));
        let p = Poly::from_roots(&roots);
        let truth = roots[0].norm();
        let mut prev = f64::INFINITY;
        for k in 0..=6 {
            let (small, _) = dlg_sharpened_bounds(&p, k).unwrap();
            prop_assert!(small.contains(truth));
            prop_assert!(small.upper <= prev * (1.0 + 1e-9));
            prev = small.upper;
        }
        // the certified bound keeps a d^(1/2^k) factor over the ratio estimate
        let factor = (d as f64).powf(1.0 / 64.0);
        prop_assert!(prev <= truth * factor * 1.01);
        let mut e = ExtPoly::from_poly(&p);
        for _ in 0..6 {
            e = dlg_step_extended(&e);
        }
        let ratio = 2f64.powf((e.coeff(0).log2_abs() - e.coeff(1).log2_abs()) / 64.0);
        prop_assert!((ratio - truth).abs() <= 0.01 * truth);
    }

    #[test]
    fn bisection_resolves_isolated_radii(seed in any::<u64>(), d in 2usize..=8, tol_bits in 4u32..=10) {
        let mut r = rng(seed);
        let roots = separated_moduli(&mut r, d, (0.2, 2.0), (1.3, 2.0));
        let o = oracle_from_coeffs(&Poly::from_roots(&roots)).unwrap();
        let j = r.gen_range(1..=d);
        let truth = roots[j - 1].norm();
        let rho = radius_bisect(&o, C64::new(0.0, 0.0), j, truth / 4.0, truth * 4.0, tol_bits).unwrap();
        prop_assert!((rho - truth).abs() <= truth * 2f64.powi(1 - tol_bits as i32));
    }

    #[test]
    fn shifting_fixes_critical_centers(seed in any::<u64>(), d in 2usize..=8, hm in 0.5f64..3.0) {
        let mut r = rng(seed);
        let h = polar(hm, phase(&mut r));
        let mut coeffs = vec![C64::new(0.0, 0.0); d + 1];
        coeffs[0] = -h.powu(d as u32);
        coeffs[d] = c(1.0, 0.0);
        let p = Poly::new(coeffs);
        let zeros: Vec<C64> = (0..d)
            .map(|k| h * polar(1.0, std::f64::consts::TAU * k as f64 / d as f64))
            .collect();
        let o = oracle_from_coeffs(&p).unwrap();
        prop_assert!(newton_smallest_bound(&o, C64::new(0.0, 0.0)).unwrap().is_infinite());
        for _ in 0..5 {
            let center = polar(hm / 2.0 * r.gen_range(0.05f64..1.0).sqrt(), phase(&mut r));
            let b = newton_smallest_bound(&o, center).unwrap();
            prop_assert!(b.upper.is_finite());
            prop_assert!(b.upper >= nearest(center, &zeros) * (1.0 - 1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lehmer_acceptance_is_sound(seed in any::<u64>(), d in 1usize..=8) {
        let mut r = rng(seed);
        let roots = separated_moduli(&mut r, d, (0.2, 2.0), (1.3, 3.0));
        let o = oracle_from_coeffs(&Poly::from_roots(&roots)).unwrap();
        let a = lehmer_newton(&o, &SolverConfig::default()).unwrap();
        prop_assert!(a.converged());
        prop_assert!(a.residual <= SolverConfig::default().eps());
        let ulps = 8.0 * f64::EPSILON * max_modulus(&roots).norm();
        prop_assert!(nearest(a.z, &roots) <= a.residual * (1.0 + 1e-9) + ulps);
    }

    #[test]
    fn sequences_match_companion_roots(seed in any::<u64>(), d in 1usize..=8) {
        let mut r = rng(seed);
        let roots = separated_moduli(&mut r, d, (0.2, 2.0), (1.6, 2.5));
        let p = Poly::from_roots(&roots);
        let seq = root_sequence(&oracle_from_coeffs(&p).unwrap(), d, &SolverConfig::default()).unwrap();
        prop_assert!(seq.is_complete());
        let got: Vec<C64> = seq.roots.iter().map(|a| a.z).collect();
        let tol = seq.roots.iter().map(|a| a.bound()).fold(1e-6, f64::max);
        prop_assert!(match_distance(&companion_roots(&p), &got) <= tol);
    }

    #[test]
    fn eval_counts_are_the_oracle_delta(seed in any::<u64>(), d in 2usize..=6) {
        let mut r = rng(seed);
        let roots = separated_moduli(&mut r, d, (0.2, 2.0), (2.2, 3.0));
        let o = oracle_from_coeffs(&Poly::from_roots(&roots)).unwrap();
        let cfg = SolverConfig::default();
        let before = o.eval_count();
        let a = smallest_root(&o, &cfg).unwrap();
        prop_assert_eq!(a.eval_count, o.eval_count() - before);
        let before = o.eval_count();
        let b = lehmer_newton(&o, &cfg).unwrap();
        prop_assert_eq!(b.eval_count, o.eval_count() - before);
    }
}
