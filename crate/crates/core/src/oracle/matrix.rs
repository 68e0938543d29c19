//! Resolvent-trace oracle: for `t(x) = det(xI − T)`, `t'(x)/t(x) = trace((xI − T)^{-1})`.

use super::{EvalCounter, NewtonOracle};
use crate::companion::Matrix;
use crate::error::{Error, Result};
use crate::poly::{is_finite, C64, ZERO};

/// Relative pivot threshold below which `xI − T` counts as singular.
const PIVOT_TOL: f64 = 1e-13;

#[derive(Debug)]
pub struct MatrixOracle {
    t: Matrix,
    pivot_floor: f64,
    counter: EvalCounter,
}

/// Oracle for the characteristic polynomial of a dense square matrix.
pub fn matrix_oracle(t: Matrix) -> Result<MatrixOracle> {
    if t.dim() == 0 {
        return Err(Error::Domain("matrix must be at least 1×1".into()));
    }
    let norm = t.frobenius_norm();
    if !norm.is_finite() {
        return Err(Error::Range("matrix has non-finite entries".into()));
    }
    Ok(MatrixOracle {
        pivot_floor: PIVOT_TOL * norm,
        t,
        counter: EvalCounter::default(),
    })
}

impl MatrixOracle {
    pub fn matrix(&self) -> &Matrix {
        &self.t
    }

    fn trace_resolvent(&self, x: C64) -> Result<C64> {
        let n = self.t.dim();
        let mut a = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = -self.t[(i, j)];
            }
            a[i * n + i] += x;
        }
        // LU with partial pivoting, in place
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (piv, mag) = (k..n)
                .map(|i| (i, a[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if mag <= self.pivot_floor {
                return Err(Error::Pole { at: x });
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let inv = a[k * n + k].inv();
            for i in k + 1..n {
                let l = a[i * n + k] * inv;
                a[i * n + k] = l;
                for j in k + 1..n {
                    let u = a[k * n + j];
                    a[i * n + j] -= l * u;
                }
            }
        }
        // Solve A x = e_col and keep x[col]
        let mut tr = ZERO;
        let mut y = vec![ZERO; n];
        for col in 0..n {
            for i in 0..n {
                let mut s = if perm[i] == col { C64::new(1.0, 0.0) } else { ZERO };
                for j in 0..i {
                    s -= a[i * n + j] * y[j];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in i + 1..n {
                    s -= a[i * n + j] * y[j];
                }
                y[i] = s / a[i * n + i];
            }
            tr += y[col];
        }
        if is_finite(tr) {
            Ok(tr)
        } else {
            Err(Error::Pole { at: x })
        }
    }
}

impl NewtonOracle for MatrixOracle {
    fn degree(&self) -> usize {
        self.t.dim()
    }

    fn evaluate(&self, x: C64) -> Result<C64> {
        self.counter.tick();
        self.trace_resolvent(x)
    }

    fn eval_count(&self) -> u64 {
        self.counter.get()
    }
}
