//! Power sums of the zeros in the unit disc from Cauchy sums, compared with
//! the Newton identities on the trailing coefficients.

use blackbox_roots::oracle::{oracle_from_coeffs, reversed_oracle};
use blackbox_roots::powersums::{
    cauchy_error_bound, cauchy_sum, cauchy_sum_disc, choose_q, newton_power_sums, root_count, CauchyParams,
};
use blackbox_roots::{Disc, Poly, C64};

fn main() -> blackbox_roots::Result<()> {
    let roots = [C64::new(0.3, 0.2), C64::new(-0.4, 0.0), C64::new(2.5, 1.0), C64::new(0.0, -3.0)];
    let p = Poly::from_roots(&roots);
    let o = oracle_from_coeffs(&p)?;

    let (d, theta, b0) = (4, 2.0, 30);
    let q = choose_q(d, theta, 3, b0, 1.0)?;
    println!("q = {q} nodes for h <= 3 at 2^-{b0}");
    for h in 0..=3 {
        let s = cauchy_sum(&o, h, q, 0.0)?;
        let exact: C64 = roots[..2].iter().map(|x| x.powu(h as u32)).sum();
        let bound = cauchy_error_bound(d, theta, h, q)?;
        println!("s_{h} = {s:.12}  error {:.1e}  bound {bound:.1e}", (s - exact).norm());
    }
    println!("zeros in the unit disc: {}", root_count(&o, &Disc::unit(), 32)?.count);

    // reciprocal power sums: Newton identities vs a disc holding every 1/x_j
    let trailing: Vec<C64> = (0..5).map(|i| p.coeff(i) / p.coeff(0)).collect();
    let rev = reversed_oracle(&o);
    let rho = 4.0;
    let params = CauchyParams::new(128, 1.4)?;
    for s in newton_power_sums(&trailing, 3)? {
        let rc = cauchy_sum_disc(&rev, &Disc::new(C64::new(0.0, 0.0), rho)?, s.h, &params)?;
        println!("sigma_{} newton {:.10}  cauchy {:.10}", s.h, s.value, rc.value * rho.powi(s.h as i32));
    }
    Ok(())
}
