//! Reference eigenvalue solver: balancing, Hessenberg reduction and
//! single-shift complex QR.
//!
//! It shares no code path with the power-sum machinery and serves as the
//! independent check for every root-finding routine in the crate.

use crate::poly::{Poly, C64, ZERO};

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Companion matrix of `p` (first row `-p_{d-1}/p_d, …, -p_0/p_d`).
    pub fn companion(p: &Poly) -> Self {
        let d = p.degree();
        let lead = p.leading();
        let mut m = Self::zeros(d);
        for j in 0..d {
            m[(0, j)] = -p.coeff(d - 1 - j) / lead;
        }
        for i in 1..d {
            m[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.n.max(1))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// Zeros of `p` as eigenvalues of its companion matrix.
///
/// Exact zeros at the origin are split off first.
pub fn companion_roots(p: &Poly) -> Vec<C64> {
    let mut coeffs = p.coeffs().to_vec();
    let mut roots = Vec::new();
    while coeffs.len() > 1 && coeffs[0] == ZERO {
        coeffs.remove(0);
        roots.push(ZERO);
    }
    let reduced = Poly::new(coeffs);
    if reduced.degree() > 0 {
        roots.extend(eigenvalues(&Matrix::companion(&reduced)));
    }
    roots
}

/// Eigenvalues of a general complex matrix.
pub fn eigenvalues(a: &Matrix) -> Vec<C64> {
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    hessenberg_qr(&mut h)
}

// Parlett–Reinsch balancing with powers of two, so it is exact.
fn balance(a: &mut Matrix) {
    let n = a.n;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            for j in 0..n {
                if j != i {
                    col += a[(j, i)].l1_norm();
                    row += a[(i, j)].l1_norm();
                }
            }
            if row == 0.0 || col == 0.0 {
                continue;
            }
            let sum = row + col;
            let mut f = 1.0;
            let mut c = col;
            let mut r = row;
            while c < r / 2.0 {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while c >= r * 2.0 {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r) < 0.95 * sum {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

// Householder reduction to upper Hessenberg form (similarity transform).
fn hessenberg(a: &mut Matrix) {
    let n = a.n;
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let alpha_norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let mut v: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] += phase * alpha_norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A ← (I − 2vv*/v*v) A (I − 2vv*/v*v)
        for j in 0..n {
            let s: C64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * a[(k + 1 + t, j)]).sum();
            let s = s * (2.0 / vnorm2);
            for (t, vt) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= vt * s;
            }
        }
        for i in 0..n {
            let s: C64 = v.iter().enumerate().map(|(t, vt)| a[(i, k + 1 + t)] * vt).sum();
            let s = s * (2.0 / vnorm2);
            for (t, vt) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= s * vt.conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

fn givens(a: C64, b: C64) -> (f64, C64) {
    // returns (c, s) with [c s; -s̄ c]·[a; b] = [r; 0]
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let norm = an.hypot(bn);
    let c = an / norm;
    let s = (a / an) * b.conj() / norm;
    (c, s)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    // eigenvalue of [[a, b], [c, d]] closest to d
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg_qr(h: &mut Matrix) -> Vec<C64> {
    let n = h.n;
    let mut eig = vec![ZERO; n];
    if n == 0 {
        return eig;
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let max_iter = 100 * n.max(1);
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // find the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].l1_norm();
            let scale = h[(lo, lo)].l1_norm() + h[(lo - 1, lo - 1)].l1_norm();
            let scale = if scale == 0.0 { 1.0 } else { scale };
            if sub <= f64::EPSILON * scale {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        let mut shift = wilkinson_shift(
            h[(hi - 1, hi - 1)],
            h[(hi - 1, hi)],
            h[(hi, hi - 1)],
            h[(hi, hi)],
        );
        if iter % 11 == 0 {
            // exceptional shift breaks cycles
            shift += C64::new(h[(hi, hi - 1)].norm() * 0.75, h[(hi, hi - 1)].norm() * 0.3);
        }
        if iter > max_iter {
            // give up on the block: report the diagonal
            for i in lo..=hi {
                eig[i] = h[(i, i)];
            }
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            iter = 0;
            continue;
        }
        // one implicit-by-explicit shifted QR sweep on the block [lo, hi]
        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        // eigenvalues of the block do not depend on the rest of the matrix,
        // so rotations are confined to rows and columns lo..=hi
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            rots.push((c, s));
        }
        for (t, &(c, s)) in rots.iter().enumerate() {
            let k = lo + t;
            for i in lo..=(k + 1).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
    }
    eig
}

/// Largest distance in an optimal-by-greedy pairing of two root multisets.
///
/// Pairs each element of `a` (largest modulus first) with its nearest
/// unused element of `b`. Adequate for separated test roots.
pub fn match_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| a[j].norm().total_cmp(&a[i].norm()));
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for i in order {
        let (best, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, z)| (j, (z - a[i]).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("equal lengths");
        used[best] = true;
        worst = worst.max(dist);
    }
    worst
}
