//! Extremal eigenvalues from the resolvent trace tr((xI − T)^{-1}), which
//! is the Newton ratio of the characteristic polynomial.

use blackbox_roots::companion::{eigenvalues, Matrix};
use blackbox_roots::oracle::matrix_oracle;
use blackbox_roots::solver::{largest_root, smallest_root, SolverConfig};
use blackbox_roots::C64;

fn main() -> blackbox_roots::Result<()> {
    let c = |re: f64, im: f64| C64::new(re, im);
    let t = Matrix::from_rows(vec![
        vec![c(4.0, 0.0), c(1.0, 0.0), c(0.0, 0.5), c(0.0, 0.0)],
        vec![c(0.5, 0.0), c(-2.0, 0.0), c(1.0, 0.0), c(0.2, 0.0)],
        vec![c(0.0, 0.0), c(0.3, 0.0), c(0.4, 0.0), c(0.1, 0.0)],
        vec![c(0.1, 0.0), c(0.0, 0.0), c(0.2, 0.0), c(9.0, 1.0)],
    ]);
    let mut qr = eigenvalues(&t);
    qr.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    println!("QR eigenvalues: {qr:.10?}");
    let o = matrix_oracle(t)?;
    let cfg = SolverConfig::default();
    let s = smallest_root(&o, &cfg)?;
    let l = largest_root(&o, &cfg)?;
    println!("smallest {:.12} ({} resolvent traces)", s.z, s.eval_count);
    println!("largest  {:.12} ({} resolvent traces)", l.z, l.eval_count);
    Ok(())
}
