//! Smallest and largest zeros from ratios of power sums, with the error
//! budget split into its separation and power-sum parts.

use blackbox_roots::oracle::oracle_from_coeffs;
use blackbox_roots::solver::{largest_root, smallest_root, RootApproximation, SolverConfig};
use blackbox_roots::{Poly, C64};

fn show(name: &str, a: &RootApproximation) {
    println!("{name}: {:.14}  residual {:.1e}  bound {:.1e}  evals {}", a.z, a.residual, a.bound(), a.eval_count);
    if let Some(d) = &a.details {
        let e = &d.estimate;
        println!(
            "  k = {}, q = {}, theta = {:.4}, delta = {:.3}, gamma error {:.1e}, power-sum error {:.1e}",
            d.k,
            d.q,
            d.theta,
            d.delta,
            e.gamma_error.unwrap_or(f64::NAN),
            e.powersum_error.unwrap_or(f64::NAN)
        );
    }
}

fn main() -> blackbox_roots::Result<()> {
    let roots = [C64::new(0.1, 0.25), C64::new(-1.0, 0.5), C64::new(2.0, -2.0), C64::new(7.0, 0.0)];
    let o = oracle_from_coeffs(&Poly::from_roots(&roots))?;
    let cfg = SolverConfig::default();
    show("smallest", &smallest_root(&o, &cfg)?);
    show("largest", &largest_root(&o, &cfg)?);
    Ok(())
}
