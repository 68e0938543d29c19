//! A polynomial known only through a program: the Mandelbrot iteration
//! f_0 = x, f_{i+1} = f_i^2 + x, of degree 2^depth, evaluated with dual
//! numbers. Zero is always a zero; the largest lies near −2.

use blackbox_roots::oracle::{oracle_from_slp, NewtonOracle, StraightLineProgram};
use blackbox_roots::solver::{largest_root, lehmer_newton, SolverConfig};

fn main() -> blackbox_roots::Result<()> {
    let prog = StraightLineProgram::mandelbrot(4);
    println!("{} instructions", prog.len());
    let o = oracle_from_slp(prog)?;
    println!("degree {}", o.degree());
    let cfg = SolverConfig::default();
    let a = lehmer_newton(&o, &cfg)?;
    println!("lehmer-newton: {:.12} residual {:.1e} ({} evaluations)", a.z, a.residual, a.eval_count);
    match largest_root(&o, &cfg) {
        Ok(b) => println!("largest: {:.12} bound {:.1e}", b.z, b.bound()),
        Err(e) => println!("largest: {}: {e}", e.name()),
    }
    Ok(())
}
