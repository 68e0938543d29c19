//! Instance generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::f64::consts::TAU;

use blackbox_roots::companion::Matrix;
use blackbox_roots::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn phase(r: &mut ChaCha8Rng) -> f64 {
    r.gen_range(0.0..TAU)
}

pub fn polar(m: f64, a: f64) -> C64 {
    C64::from_polar(m, a)
}

/// `|x|` log-uniform in `[lo, hi]` with a random phase.
pub fn log_uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
    let m = (r.gen_range(lo.ln()..hi.ln())).exp();
    polar(m, phase(r))
}

/// `d` zeros whose moduli grow by a factor drawn from `ratio` at each step,
/// starting from a modulus drawn from `first`.
pub fn separated_moduli(
    r: &mut ChaCha8Rng,
    d: usize,
    first: (f64, f64),
    ratio: (f64, f64),
) -> Vec<C64> {
    let mut m = r.gen_range(first.0..first.1);
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        out.push(polar(m, phase(r)));
        m *= r.gen_range(ratio.0..ratio.1);
    }
    out
}

/// Zeros with moduli avoiding `[lo, hi]`, at least one on each side when `d ≥ 2`.
pub fn outside_annulus(r: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Vec<C64> {
    (0..d)
        .map(|i| {
            let inside = if i < 2 { i == 0 } else { r.gen_bool(0.5) };
            let m = if inside {
                lo * r.gen_range(0.2..0.98)
            } else {
                hi * r.gen_range(1.02..3.0)
            };
            polar(m, phase(r))
        })
        .collect()
}

pub fn nearest(z: C64, roots: &[C64]) -> f64 {
    roots.iter().map(|x| (z - x).norm()).fold(f64::INFINITY, f64::min)
}

pub fn min_modulus(roots: &[C64]) -> C64 {
    *roots.iter().min_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap()
}

pub fn max_modulus(roots: &[C64]) -> C64 {
    *roots.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap()
}

/// A dense matrix with spectrum `eig`: upper triangular with random
/// off-diagonal entries, conjugated by a unit lower triangular matrix.
pub fn matrix_with_spectrum(r: &mut ChaCha8Rng, eig: &[C64]) -> Matrix {
    let n = eig.len();
    let mut u = vec![vec![C64::new(0.0, 0.0); n]; n];
    let mut l = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        u[i][i] = eig[i];
        l[i][i] = C64::new(1.0, 0.0);
        for j in i + 1..n {
            u[i][j] = c(r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5));
        }
        for j in 0..i {
            l[i][j] = c(r.gen_range(-0.3..0.3), r.gen_range(-0.3..0.3));
        }
    }
    // inverse of the unit lower triangular factor by forward substitution
    let mut linv = vec![vec![C64::new(0.0, 0.0); n]; n];
    for col in 0..n {
        for i in 0..n {
            let mut v = if i == col { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            for k in 0..i {
                v -= l[i][k] * linv[k][col];
            }
            linv[i][col] = v;
        }
    }
    let (l, u, linv) = (Matrix::from_rows(l), Matrix::from_rows(u), Matrix::from_rows(linv));
    l.mul(&u).mul(&linv)
}
