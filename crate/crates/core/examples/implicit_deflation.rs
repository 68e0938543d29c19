//! All zeros in order of increasing modulus, deflating each one implicitly
//! through the oracle rather than dividing coefficients.

use blackbox_roots::oracle::{deflated_oracle, oracle_from_coeffs, NewtonOracle};
use blackbox_roots::solver::{root_sequence, SolverConfig};
use blackbox_roots::{Poly, C64};

fn main() -> blackbox_roots::Result<()> {
    let roots = [0.3, -0.7, 1.6, -3.5, 8.0].map(|r| C64::new(r, 0.1 * r));
    let o = oracle_from_coeffs(&Poly::from_roots(&roots))?;
    let seq = root_sequence(&o, roots.len(), &SolverConfig::default())?;
    for a in &seq.roots {
        let cached = a.details.as_ref().is_some_and(|d| d.cached);
        println!("{:.14}  bound {:.1e}  {}{}", a.z, a.bound(), a.pipeline, if cached { " (reused nodes)" } else { "" });
    }
    if let Some((i, e)) = &seq.failure {
        println!("stopped at zero {i}: {e}");
    }

    let base = oracle_from_coeffs(&Poly::from_real(&[2.0, -3.0, 1.0]))?;
    let f = deflated_oracle(&base, &[C64::new(1.0, 0.0)])?;
    let x = C64::new(0.5, 0.5);
    println!("deflated ratio at {x}: {:.15}, 1/(x - 2) = {:.15}", f.evaluate(x)?, (x - 2.0).inv());
    Ok(())
}
