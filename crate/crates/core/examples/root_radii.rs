//! Bounds on the extremal root radii by four methods, and the shift that
//! repairs the Newton bound at a critical point.

use blackbox_roots::oracle::oracle_from_coeffs;
use blackbox_roots::radii::{bisect_bounds, coeff_radii_bounds, dlg_sharpened_bounds, find_bracket, newton_smallest_bound};
use blackbox_roots::{Poly, C64};

fn main() -> blackbox_roots::Result<()> {
    let roots = [C64::new(0.2, 0.1), C64::new(-1.0, 0.0), C64::new(0.0, 4.0)];
    let p = Poly::from_roots(&roots);
    let o = oracle_from_coeffs(&p)?;
    let zero = C64::new(0.0, 0.0);
    println!("true radii: {:.6} .. {:.6}", roots[0].norm(), roots[2].norm());

    let (s, l) = coeff_radii_bounds(&p)?;
    println!("coefficients: smallest [{:.4}, {:.4}], largest [{:.4}, {:.4}]", s.lower, s.upper, l.lower, l.upper);
    for k in [1, 3, 6] {
        let (s, l) = dlg_sharpened_bounds(&p, k)?;
        println!("squared {k}x: smallest [{:.6}, {:.6}], largest [{:.6}, {:.6}]", s.lower, s.upper, l.lower, l.upper);
    }
    println!("newton at 0: |x_d| <= {:.6}", newton_smallest_bound(&o, zero)?.upper);
    let (lo, hi) = find_bracket(&o, zero, 3, 1.0)?;
    let b = bisect_bounds(&o, zero, 3, lo, hi, 12)?;
    println!("bisection: largest in [{:.6}, {:.6}]", b.lower, b.upper);

    // p'(0) = 0 for x^3 - 8
    let cube = oracle_from_coeffs(&Poly::from_real(&[-8.0, 0.0, 0.0, 1.0]))?;
    println!("x^3 - 8 at 0: {}", newton_smallest_bound(&cube, zero)?.upper);
    let c = C64::from_polar(0.37, 0.7);
    println!("x^3 - 8 at {c:.3}: {:.6}", newton_smallest_bound(&cube, c)?.upper);
    Ok(())
}
