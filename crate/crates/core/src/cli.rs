//! The `bbroots` command line.
//!
//! Machine-readable results go to standard output, one item per line,
//! followed by `# evals N`. A human summary goes to standard error. Exit
//! status is 0 on success, 2 on usage or input errors and 3 on numerical
//! errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Warning};
use crate::extended::ExtPoly;
use crate::io::{parse_centers, parse_disc, parse_matrix, parse_poly};
use crate::oracle::{matrix_oracle, oracle_from_coeffs, oracle_from_slp, shifted_oracle, NewtonOracle, SlpOracle, StraightLineProgram};
use crate::poly::{Poly, C64};
use crate::powersums::{cauchy_error_bound, root_count_rotated, NodeValues};
use crate::radii::{coeff_radii_bounds, dlg_sharpened_bounds, find_bracket, newton_smallest_bound, probe_count, radius_interval, RadiusBounds};
use crate::solver::{largest_root, lehmer_newton, root_sequence, roots_near, smallest_root, RootApproximation, SolverConfig};
use crate::squaring::{dlg_step, dlg_step_extended, SquaringState};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "bbroots", version, about = "Polynomial root finding from Newton-ratio oracles")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Target accuracy 2^-b.
    #[arg(long, global = true, default_value_t = 20)]
    pub eps_bits: u32,
    /// Power-sum accuracy 2^-b0.
    #[arg(long, global = true, default_value_t = 24)]
    pub b0: u32,
    /// Largest node count any pipeline may use.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    pub q_cap: usize,
    /// Seed for the random phase of the Cauchy nodes.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print parameters, bounds and evaluation counts to standard error.
    #[arg(long, global = true)]
    pub report: bool,
    /// Worker threads (falls back to ROOTS_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Format of the input file.
    #[arg(long, global = true, value_enum, default_value_t = Format::Poly)]
    pub format: Format,
    /// Degree of an SLP input, required when the program divides.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Skip Newton refinement of pipeline estimates.
    #[arg(long, global = true)]
    pub no_refine: bool,
    /// Relative width bits of radius brackets used to bound separation.
    #[arg(long, global = true, default_value_t = 8)]
    pub radius_bits: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Poly,
    Slp,
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RadiiMethod {
    Coeff,
    Newton,
    Dlg,
    Bisect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Smallest,
    Largest,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Zeros in order of increasing modulus by implicit deflation.
    Roots {
        input: PathBuf,
        /// Number of zeros (default: all).
        #[arg(long)]
        n: Option<usize>,
    },
    /// The zero of smallest modulus.
    Smallest { input: PathBuf },
    /// The zero of largest modulus.
    Largest { input: PathBuf },
    /// A zero by the Lehmer-Newton search from the origin.
    Lehmer {
        input: PathBuf,
        /// Search rounds before giving up (default: 64).
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Circle samples per round.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// The zero nearest to each center in a file.
    Near {
        input: PathBuf,
        /// File of centers, one "re im" per line.
        #[arg(long)]
        centers: PathBuf,
    },
    /// Bounds on root radii.
    Radii {
        input: PathBuf,
        /// Bounding method.
        #[arg(long, value_enum, default_value_t = RadiiMethod::Bisect)]
        method: RadiiMethod,
        /// Squaring steps for the dlg method.
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// Center "re im" for the newton and bisect methods.
        #[arg(long, default_value = "0 0")]
        center: String,
        /// Radius index for bisect (default: 1 and d).
        #[arg(long)]
        j: Option<usize>,
        /// Bisection resolution in relative bits (bisect method).
        #[arg(long, default_value_t = 10)]
        tol_bits: u32,
    },
    /// Cauchy sums s_{h,q} over a disc.
    Powersums {
        input: PathBuf,
        /// Powers, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        h: Vec<usize>,
        /// Nodes on the circle; every --h must be below it.
        #[arg(long)]
        q: usize,
        /// Isolation ratio; enables the error bound column.
        #[arg(long)]
        theta: Option<f64>,
        /// Phase of the nodes (default: from --seed, else 0).
        #[arg(long)]
        rotation: Option<f64>,
        /// Disc "cx cy r" (default: the unit disc).
        #[arg(long)]
        disc: Option<String>,
    },
    /// Coefficients after root-squaring steps.
    Dlg {
        input: PathBuf,
        /// Number of squaring steps.
        #[arg(long)]
        steps: usize,
        /// Square with extended exponents; fails only if the result itself overflows.
        #[arg(long)]
        extended: bool,
    },
    /// Number of zeros in a disc.
    Count {
        input: PathBuf,
        /// Disc "cx cy r".
        #[arg(long)]
        disc: String,
        /// Fixed node count (default: cross-checked adaptive count).
        #[arg(long)]
        q: Option<usize>,
    },
    /// Eigenvalues through the resolvent-trace oracle.
    Eigen {
        /// Matrix file.
        #[arg(long)]
        matrix: PathBuf,
        /// Which eigenvalues to report.
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
    },
}

/// Failure of a run, mapped to the exit status.
enum Failure {
    Usage(String),
    Parse(Error),
    Numerical(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Parse(e),
            other => Failure::Numerical(other),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

enum Input {
    Poly(Poly),
    Other(Box<dyn NewtonOracle>),
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path, common: &Common) -> std::result::Result<Input, Failure> {
    let text = read(path)?;
    Ok(match common.format {
        Format::Poly => Input::Poly(parse_poly(&text)?),
        Format::Slp => {
            let prog = StraightLineProgram::parse(&text)?;
            match common.degree {
                Some(d) => Input::Other(Box::new(SlpOracle::with_degree(prog, d))),
                None => Input::Other(Box::new(oracle_from_slp(prog).map_err(|e| {
                    Failure::Usage(format!("{e}; pass --degree for programs that divide"))
                })?)),
            }
        }
        Format::Matrix => Input::Other(Box::new(matrix_oracle(parse_matrix(&text)?)?)),
    })
}

fn into_oracle(input: Input) -> std::result::Result<Box<dyn NewtonOracle>, Failure> {
    Ok(match input {
        Input::Poly(p) => Box::new(oracle_from_coeffs(&p)?),
        Input::Other(o) => o,
    })
}

fn need_poly(input: Input, verb: &str) -> std::result::Result<Poly, Failure> {
    match input {
        Input::Poly(p) => Ok(p),
        Input::Other(_) => Err(Failure::Usage(format!("{verb} needs coefficients: use --format poly"))),
    }
}

fn parse_point(s: &str) -> std::result::Result<C64, Failure> {
    let pts = parse_centers(s).map_err(|e| Failure::Usage(format!("bad point {s:?}: {e}")))?;
    match pts[..] {
        [p] => Ok(p),
        _ => Err(Failure::Usage(format!("expected one point \"re im\", found {s:?}"))),
    }
}

fn root_line(r: &RootApproximation) -> String {
    format!("{:e} {:e} {:e} {:e} {}", r.z.re, r.z.im, r.residual, r.bound(), r.eval_count)
}

fn warning_list(ws: &[Warning]) -> String {
    let names: Vec<&str> = ws.iter().map(Warning::name).collect();
    if names.is_empty() {
        "none".into()
    } else {
        names.join(",")
    }
}

fn describe(r: &RootApproximation) -> String {
    let mut s = format!(
        "{} z = {} residual {:e} bound {:e} evals {} warnings {}",
        r.pipeline,
        r.z,
        r.residual,
        r.bound(),
        r.eval_count,
        warning_list(&r.warnings)
    );
    if let Some(d) = &r.details {
        s += &format!(
            " k {} q {} theta {} delta {:.4} scale {:e} cached {} estimate {} error_bound {:e}",
            d.k,
            d.q,
            d.theta,
            d.delta,
            d.scale,
            d.cached,
            r.estimate,
            r.error_bound.unwrap_or(f64::NAN)
        );
    }
    s
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    report: bool,
}

impl Ctx<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", s.as_ref());
    }

    fn note(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.err, "{}", s.as_ref());
    }

    fn detail(&mut self, s: impl AsRef<str>) {
        if self.report {
            self.note(s);
        }
    }

    fn evals(&mut self, n: u64) {
        self.line(format!("# evals {n}"));
        self.note(format!("total oracle evaluations: {n}"));
    }
}

fn config(common: &Common) -> std::result::Result<SolverConfig, Failure> {
    let rotation = match common.seed {
        Some(s) => ChaCha8Rng::seed_from_u64(s).gen_range(0.0..std::f64::consts::TAU),
        None => 0.0,
    };
    let cfg = SolverConfig {
        eps_bits: common.eps_bits,
        b0: common.b0,
        q_cap: common.q_cap,
        refine: !common.no_refine,
        radius_bits: common.radius_bits,
        rotation,
        ..SolverConfig::default()
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

fn threads(common: &Common) -> std::result::Result<Option<usize>, Failure> {
    if let Some(t) = common.threads {
        return Ok(Some(t));
    }
    match std::env::var("ROOTS_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("ROOTS_THREADS must be a positive integer, found {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn report_bounds(ctx: &mut Ctx, label: &str, b: &RadiusBounds) {
    ctx.line(format!("{label} {:e} {:e}", b.lower, b.upper));
    ctx.detail(format!("{label} radius via {:?}: [{:e}, {:e}]", b.method, b.lower, b.upper));
}

fn single(ctx: &mut Ctx, oracle: &dyn NewtonOracle, r: crate::error::Result<RootApproximation>) -> Outcome {
    let r = r?;
    ctx.line(root_line(&r));
    ctx.detail(describe(&r));
    ctx.evals(oracle.eval_count());
    Ok(())
}

fn sequence(ctx: &mut Ctx, oracle: &dyn NewtonOracle, n: usize, cfg: &SolverConfig) -> Outcome {
    let seq = root_sequence(oracle, n, cfg)?;
    for r in &seq.roots {
        ctx.line(root_line(r));
        ctx.detail(describe(r));
    }
    ctx.note(format!("found {} of {n} zeros", seq.roots.len()));
    ctx.evals(oracle.eval_count());
    match seq.failure {
        Some((i, e)) => {
            ctx.note(format!("step {i} failed"));
            Err(Failure::Numerical(e))
        }
        None => Ok(()),
    }
}

fn execute(cli: Cli, ctx: &mut Ctx) -> Outcome {
    let common = &cli.common;
    let cfg = config(common)?;
    if let Some(t) = threads(common)? {
        if t == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        // a pool built earlier in this process stays in effect
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match cli.command {
        Command::Roots { input, n } => {
            let o = into_oracle(load(&input, common)?)?;
            let n = n.unwrap_or(o.degree());
            if n > o.degree() {
                return Err(Failure::Usage(format!("--n {n} exceeds the degree {}", o.degree())));
            }
            sequence(ctx, o.as_ref(), n, &cfg)
        }
        Command::Smallest { input } => {
            let o = into_oracle(load(&input, common)?)?;
            single(ctx, o.as_ref(), smallest_root(o.as_ref(), &cfg))
        }
        Command::Largest { input } => {
            let o = into_oracle(load(&input, common)?)?;
            single(ctx, o.as_ref(), largest_root(o.as_ref(), &cfg))
        }
        Command::Lehmer {
            input,
            max_rounds,
            samples,
        } => {
            let cfg = SolverConfig {
                max_rounds: max_rounds.unwrap_or(cfg.max_rounds),
                sample_q: samples.or(cfg.sample_q),
                ..cfg
            };
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let o = into_oracle(load(&input, common)?)?;
            let r = lehmer_newton(o.as_ref(), &cfg)?;
            if !r.converged() {
                ctx.note("warning: NotConverged, best iterate reported");
            }
            single(ctx, o.as_ref(), Ok(r))
        }
        Command::Near { input, centers } => {
            let centers = parse_centers(&read(&centers)?)?;
            let o = into_oracle(load(&input, common)?)?;
            let results = roots_near(o.as_ref(), &centers, &cfg);
            let mut failed = 0;
            for (c, r) in centers.iter().zip(&results) {
                match r {
                    Ok(r) => {
                        ctx.line(root_line(r));
                        ctx.detail(format!("center {c}: {}", describe(r)));
                    }
                    Err(e) => {
                        failed += 1;
                        ctx.line(format!("error {}", e.name()));
                        ctx.note(format!("center {c}: {}: {e}", e.name()));
                    }
                }
            }
            ctx.note(format!("{} of {} centers solved", centers.len() - failed, centers.len()));
            ctx.evals(o.eval_count());
            Ok(())
        }
        Command::Radii {
            input,
            method,
            steps,
            center,
            j,
            tol_bits,
        } => {
            let c = parse_point(&center)?;
            let loaded = load(&input, common)?;
            match method {
                RadiiMethod::Coeff | RadiiMethod::Dlg => {
                    let p = need_poly(loaded, "radii --method coeff/dlg")?;
                    let (small, large) = match method {
                        RadiiMethod::Coeff => coeff_radii_bounds(&p)?,
                        _ => dlg_sharpened_bounds(&p, steps)?,
                    };
                    report_bounds(ctx, "smallest", &small);
                    report_bounds(ctx, "largest", &large);
                    ctx.evals(0);
                }
                RadiiMethod::Newton => {
                    let o = into_oracle(loaded)?;
                    let b = newton_smallest_bound(o.as_ref(), c)?;
                    report_bounds(ctx, "nearest", &b);
                    ctx.evals(o.eval_count());
                }
                RadiiMethod::Bisect => {
                    let o = into_oracle(loaded)?;
                    let d = o.degree();
                    let js = match j {
                        Some(j) if j == 0 || j > d => {
                            return Err(Failure::Usage(format!("--j must be in 1..={d}")));
                        }
                        Some(j) => vec![j],
                        None if d == 1 => vec![1],
                        None => vec![1, d],
                    };
                    let start = newton_smallest_bound(o.as_ref(), c)?.upper;
                    let start = if start.is_finite() && start > 0.0 { start } else { 1.0 };
                    for j in js {
                        let (lo, hi) = find_bracket(o.as_ref(), c, j, start)?;
                        let (lo, hi) = radius_interval(o.as_ref(), c, j, lo, hi, tol_bits)?;
                        ctx.line(format!("radius {j} {lo:e} {hi:e}"));
                        ctx.detail(format!("{j}-th root radius about {c}: [{lo:e}, {hi:e}]"));
                    }
                    ctx.evals(o.eval_count());
                }
            }
            Ok(())
        }
        Command::Powersums {
            input,
            h,
            q,
            theta,
            rotation,
            disc,
        } => {
            let disc = disc.as_deref().map(parse_disc).transpose()?;
            if let Some(&bad) = h.iter().find(|&&h| h >= q) {
                return Err(Failure::Usage(format!("every --h must be below --q, found {bad}")));
            }
            if theta.is_some_and(|t| !(t > 1.0)) {
                return Err(Failure::Usage("--theta must exceed 1".into()));
            }
            let o = into_oracle(load(&input, common)?)?;
            let rotation = rotation.unwrap_or(cfg.rotation);
            let nodes = match disc {
                Some(disc) => NodeValues::compute(&shifted_oracle(o.as_ref(), disc.center(), disc.radius())?, q, rotation)?,
                None => NodeValues::compute(o.as_ref(), q, rotation)?,
            };
            for &h in &h {
                let s = nodes.power_sum(h)?;
                let bound = match theta {
                    Some(t) => format!("{:e}", cauchy_error_bound(o.degree(), t, h, q)?),
                    None => "none".into(),
                };
                ctx.line(format!("{h} {:e} {:e} {bound}", s.re, s.im));
            }
            ctx.detail(format!("q = {q}, rotation = {rotation}"));
            ctx.evals(o.eval_count());
            Ok(())
        }
        Command::Dlg { input, steps, extended } => {
            let p = need_poly(load(&input, common)?, "dlg")?;
            let ph = if extended {
                let mut e = ExtPoly::from_poly(&p);
                for _ in 0..steps {
                    e = dlg_step_extended(&e);
                }
                e.to_poly()?
            } else {
                let mut s = SquaringState::new(p);
                for _ in 0..steps {
                    s = dlg_step(&s)?;
                }
                s.p().clone()
            };
            let _ = write!(ctx.out, "{ph}");
            ctx.detail(format!("{steps} squaring steps, degree {}", ph.degree()));
            ctx.evals(0);
            Ok(())
        }
        Command::Count { input, disc, q } => {
            let disc = parse_disc(&disc)?;
            let o = into_oracle(load(&input, common)?)?;
            match q {
                Some(q) => {
                    let c = root_count_rotated(o.as_ref(), &disc, q, cfg.rotation)?;
                    ctx.line(c.count.to_string());
                    if !c.confident() {
                        ctx.note(format!("warning: LowConfidence, s_0 = {}", c.value));
                    }
                    ctx.detail(format!("s_0 = {} with q = {}", c.value, c.q));
                }
                None => {
                    let p = probe_count(o.as_ref(), disc.center(), disc.radius(), &[])?;
                    ctx.line(p.count.to_string());
                    ctx.detail(format!("count agreed with q = {} and {} nodes", p.q / 2, p.q));
                }
            }
            ctx.evals(o.eval_count());
            Ok(())
        }
        Command::Eigen { matrix, which } => {
            let m = parse_matrix(&read(&matrix)?)?;
            let n = m.dim();
            let o = matrix_oracle(m)?;
            match which {
                Which::Smallest => single(ctx, &o, smallest_root(&o, &cfg)),
                Which::Largest => single(ctx, &o, largest_root(&o, &cfg)),
                Which::All => sequence(ctx, &o, n, &cfg),
            }
        }
    }
}

/// Run the command line and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let mut ctx = Ctx {
        out,
        err,
        report: cli.common.report,
    };
    match execute(cli, &mut ctx) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            ctx.note(format!("error: UsageError: {msg}"));
            EXIT_USAGE
        }
        Err(Failure::Parse(e)) => {
            ctx.note(format!("error: {}: {e}", e.name()));
            EXIT_USAGE
        }
        Err(Failure::Numerical(e)) => {
            ctx.note(format!("error: {}: {e}", e.name()));
            EXIT_NUMERICAL
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["bbroots"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bbroots", "smallest", "x", "--bogus"]).0, EXIT_USAGE);
        let (code, _, err) = run_str(&["bbroots", "smallest", "/nonexistent/p.txt"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("UsageError"));
        assert_eq!(run_str(&["bbroots", "--help"]).0, 0);
    }

    #[test]
    fn point_parsing() {
        assert_eq!(parse_point("1 -2").ok(), Some(C64::new(1.0, -2.0)));
        assert!(parse_point("1 2 3").is_err());
        assert!(parse_point("").is_err());
    }
}
