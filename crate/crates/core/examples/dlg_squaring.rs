//! Root squaring: coefficients of p_h, the Gemignani estimate of the
//! smallest zero, and the overflow that extended exponents avoid.

use blackbox_roots::extended::ExtPoly;
use blackbox_roots::squaring::{dlg_step, dlg_step_extended, fg_step, gemignani_estimate, SquaringState};
use blackbox_roots::{Poly, C64};

fn main() -> blackbox_roots::Result<()> {
    let p = Poly::from_real(&[6.0, -5.0, 1.0]);
    let s1 = dlg_step(&SquaringState::new(p))?;
    println!("p_1 = {:?}", s1.p().coeffs().iter().map(|c| c.re).collect::<Vec<_>>());

    let roots = [C64::new(0.4, 0.3), C64::new(-1.5, 0.0), C64::new(2.0, 1.0)];
    let mut s = SquaringState::with_fg(Poly::from_roots(&roots));
    for h in 0..5 {
        let z = gemignani_estimate(&s)?;
        println!("h = {h}: estimate {z:.12}, error {:.2e}", (z - roots[0]).norm());
        s = fg_step(&s)?;
    }

    // degree 30 with radii from 0.1 to 10
    let wide: Vec<C64> = (0..30)
        .map(|i| C64::from_polar(10f64.powf(i as f64 / 14.5 - 1.0), i as f64))
        .collect();
    let p = Poly::from_roots(&wide);
    let mut plain = SquaringState::new(p.clone());
    for h in 1..=12 {
        match dlg_step(&plain) {
            Ok(next) => plain = next,
            Err(e) => {
                println!("plain squaring stops at h = {h}: {e}");
                break;
            }
        }
    }
    let mut ext = ExtPoly::from_poly(&p);
    for _ in 0..12 {
        ext = dlg_step_extended(&ext);
    }
    println!("extended p_12: log2|p_0| = {:.1}", ext.coeff(0).log2_abs());
    Ok(())
}
