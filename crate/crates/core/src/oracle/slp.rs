//! Straight-line programs evaluated with forward-mode dual numbers.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::{ratio_or_pole, EvalCounter, NewtonOracle};
use crate::error::{Error, Result};
use crate::poly::{is_finite, Poly, C64, ONE, ZERO};

/// A value together with its derivative with respect to the program input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub value: C64,
    pub deriv: C64,
}

impl Dual {
    pub fn constant(value: C64) -> Self {
        Dual { value, deriv: ZERO }
    }

    pub fn variable(value: C64) -> Self {
        Dual { value, deriv: ONE }
    }

    pub fn scale(self, s: C64) -> Self {
        Dual {
            value: self.value * s,
            deriv: self.deriv * s,
        }
    }

    /// Quotient rule; `None` when the denominator value is zero.
    pub fn checked_div(self, rhs: Dual) -> Option<Dual> {
        if rhs.value == ZERO {
            return None;
        }
        let inv = rhs.value.inv();
        let value = self.value * inv;
        Some(Dual {
            value,
            deriv: (self.deriv - value * rhs.deriv) * inv,
        })
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual {
            value: self.value + rhs.value,
            deriv: self.deriv + rhs.deriv,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual {
            value: self.value - rhs.value,
            deriv: self.deriv - rhs.deriv,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        Dual {
            value: self.value * rhs.value,
            deriv: self.value * rhs.deriv + self.deriv * rhs.value,
        }
    }
}

/// One single-assignment instruction. Operands index earlier instructions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Instr {
    Input,
    Const(C64),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Smul(C64, usize),
}

impl Instr {
    fn operands(&self) -> [Option<usize>; 2] {
        match *self {
            Instr::Input | Instr::Const(_) => [None, None],
            Instr::Add(a, b) | Instr::Sub(a, b) | Instr::Mul(a, b) | Instr::Div(a, b) => {
                [Some(a), Some(b)]
            }
            Instr::Smul(_, a) => [Some(a), None],
        }
    }
}

/// Branch-free program in one input variable; the last instruction is `f(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StraightLineProgram {
    instrs: Vec<Instr>,
}

impl StraightLineProgram {
    pub fn new(instrs: Vec<Instr>) -> Result<Self> {
        if instrs.is_empty() {
            return Err(Error::Domain("empty straight-line program".into()));
        }
        for (i, ins) in instrs.iter().enumerate() {
            for a in ins.operands().into_iter().flatten() {
                if a >= i {
                    return Err(Error::Domain(format!(
                        "instruction {i} uses {a} before it is defined"
                    )));
                }
            }
        }
        Ok(StraightLineProgram { instrs })
    }

    /// Horner scheme for `p`: `2d + 2` instructions.
    pub fn from_poly(p: &Poly) -> Self {
        let c = p.coeffs();
        let d = p.degree();
        let mut instrs = vec![Instr::Input, Instr::Const(c[d])];
        let mut acc = 1;
        for i in (0..d).rev() {
            instrs.push(Instr::Mul(acc, 0));
            instrs.push(Instr::Const(c[i]));
            let n = instrs.len();
            instrs.push(Instr::Add(n - 2, n - 1));
            acc = n;
        }
        StraightLineProgram { instrs }
    }

    /// `f_0 = x`, `f_{i+1} = f_i² + x`; degree `2^depth`, length `2·depth + 1`.
    pub fn mandelbrot(depth: usize) -> Self {
        let mut instrs = vec![Instr::Input];
        let mut cur = 0;
        for _ in 0..depth {
            instrs.push(Instr::Mul(cur, cur));
            let sq = instrs.len() - 1;
            instrs.push(Instr::Add(sq, 0));
            cur = sq + 1;
        }
        StraightLineProgram { instrs }
    }

    pub fn instructions(&self) -> &[Instr] {
        &self.instrs
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// `(f(x), f'(x))` by forward propagation.
    pub fn eval_dual(&self, x: C64) -> Result<Dual> {
        let mut vals: Vec<Dual> = Vec::with_capacity(self.instrs.len());
        for (i, ins) in self.instrs.iter().enumerate() {
            let v = match *ins {
                Instr::Input => Dual::variable(x),
                Instr::Const(c) => Dual::constant(c),
                Instr::Add(a, b) => vals[a] + vals[b],
                Instr::Sub(a, b) => vals[a] - vals[b],
                Instr::Mul(a, b) => vals[a] * vals[b],
                Instr::Div(a, b) => vals[a]
                    .checked_div(vals[b])
                    .ok_or_else(|| Error::DivByZero(format!("instruction {i} at x = {x}")))?,
                Instr::Smul(s, a) => vals[a].scale(s),
            };
            vals.push(v);
        }
        Ok(*vals.last().expect("validated non-empty"))
    }

    /// Degree of `f` as a polynomial, by propagating degree bounds.
    /// `None` when the program divides.
    pub fn degree_bound(&self) -> Option<usize> {
        let mut deg: Vec<usize> = Vec::with_capacity(self.instrs.len());
        for ins in &self.instrs {
            let d = match *ins {
                Instr::Input => 1,
                Instr::Const(_) => 0,
                Instr::Add(a, b) | Instr::Sub(a, b) => deg[a].max(deg[b]),
                Instr::Mul(a, b) => deg[a] + deg[b],
                Instr::Smul(_, a) => deg[a],
                Instr::Div(..) => return None,
            };
            deg.push(d);
        }
        deg.last().copied()
    }

    /// Parse the text form: one `idx op args` line per instruction.
    pub fn parse(text: &str) -> Result<Self> {
        let mut instrs = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let idx: usize = toks[0]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad index {:?}", toks[0])))?;
            if idx != instrs.len() {
                return Err(Error::parse(
                    line_no,
                    format!("expected index {}, found {idx}", instrs.len()),
                ));
            }
            let op = toks.get(1).ok_or_else(|| Error::parse(line_no, "missing op"))?;
            let args = &toks[2..];
            let want = match *op {
                "in" => 0,
                "add" | "sub" | "mul" | "div" | "const" => 2,
                "smul" => 3,
                other => return Err(Error::parse(line_no, format!("unknown op {other:?}"))),
            };
            if args.len() != want {
                return Err(Error::parse(
                    line_no,
                    format!("{op} takes {want} arguments, found {}", args.len()),
                ));
            }
            let num = |s: &str| -> Result<f64> {
                let v: f64 = s
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad number {s:?}")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::parse(line_no, format!("non-finite number {s:?}")))
                }
            };
            let reg = |s: &str| -> Result<usize> {
                let r: usize = s
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad operand {s:?}")))?;
                if r >= idx {
                    return Err(Error::parse(line_no, format!("operand {r} not yet defined")));
                }
                Ok(r)
            };
            let ins = match *op {
                "in" => Instr::Input,
                "const" => Instr::Const(C64::new(num(args[0])?, num(args[1])?)),
                "add" => Instr::Add(reg(args[0])?, reg(args[1])?),
                "sub" => Instr::Sub(reg(args[0])?, reg(args[1])?),
                "mul" => Instr::Mul(reg(args[0])?, reg(args[1])?),
                "div" => Instr::Div(reg(args[0])?, reg(args[1])?),
                _ => Instr::Smul(C64::new(num(args[0])?, num(args[1])?), reg(args[2])?),
            };
            instrs.push(ins);
        }
        if instrs.is_empty() {
            return Err(Error::parse(0, "no instructions"));
        }
        Ok(StraightLineProgram { instrs })
    }
}

impl fmt::Display for StraightLineProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ins) in self.instrs.iter().enumerate() {
            match *ins {
                Instr::Input => writeln!(f, "{i} in")?,
                Instr::Const(c) => writeln!(f, "{i} const {:e} {:e}", c.re, c.im)?,
                Instr::Add(a, b) => writeln!(f, "{i} add {a} {b}")?,
                Instr::Sub(a, b) => writeln!(f, "{i} sub {a} {b}")?,
                Instr::Mul(a, b) => writeln!(f, "{i} mul {a} {b}")?,
                Instr::Div(a, b) => writeln!(f, "{i} div {a} {b}")?,
                Instr::Smul(s, a) => writeln!(f, "{i} smul {:e} {:e} {a}", s.re, s.im)?,
            }
        }
        Ok(())
    }
}

/// Newton-ratio oracle for the function computed by a straight-line program.
#[derive(Debug)]
pub struct SlpOracle {
    prog: StraightLineProgram,
    degree: usize,
    counter: EvalCounter,
}

/// Oracle with the degree inferred from the program structure.
/// Programs that divide need [`SlpOracle::with_degree`].
pub fn oracle_from_slp(prog: StraightLineProgram) -> Result<SlpOracle> {
    let degree = prog.degree_bound().ok_or_else(|| {
        Error::Domain("program divides; supply the degree explicitly".into())
    })?;
    Ok(SlpOracle::with_degree(prog, degree))
}

impl SlpOracle {
    pub fn with_degree(prog: StraightLineProgram, degree: usize) -> Self {
        SlpOracle {
            prog,
            degree,
            counter: EvalCounter::default(),
        }
    }

    pub fn program(&self) -> &StraightLineProgram {
        &self.prog
    }
}

impl NewtonOracle for SlpOracle {
    fn degree(&self) -> usize {
        self.degree
    }

    fn evaluate(&self, x: C64) -> Result<C64> {
        self.counter.tick();
        let f = self.prog.eval_dual(x)?;
        if !is_finite(f.value) || !is_finite(f.deriv) {
            return Err(Error::Range(format!("program overflowed at x = {x}")));
        }
        ratio_or_pole(x, f.deriv, f.value)
    }

    fn eval_count(&self) -> u64 {
        self.counter.get()
    }
}
