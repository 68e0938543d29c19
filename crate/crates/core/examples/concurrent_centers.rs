//! Zeros nearest to several centers, solved in parallel on one shared oracle.

use blackbox_roots::oracle::{oracle_from_coeffs, NewtonOracle};
use blackbox_roots::solver::{roots_near, SolverConfig};
use blackbox_roots::{Poly, C64};

fn main() -> blackbox_roots::Result<()> {
    let roots: Vec<C64> = (0..8).map(|k| C64::from_polar(1.0 + 0.3 * k as f64, 0.8 * k as f64)).collect();
    let o = oracle_from_coeffs(&Poly::from_roots(&roots))?;
    let centers: Vec<C64> = roots.iter().map(|z| z + C64::new(0.05, -0.04)).collect();
    for (c, r) in centers.iter().zip(roots_near(&o, &centers, &SolverConfig::default())) {
        match r {
            Ok(a) => println!("near {c:.3}: {:.12}  residual {:.1e}  evals {}", a.z, a.residual, a.eval_count),
            Err(e) => println!("near {c:.3}: {}", e.name()),
        }
    }
    println!("total evaluations {}", o.eval_count());
    Ok(())
}
