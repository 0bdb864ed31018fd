//! Primitive-recursive and μ-recursive schemata, and their compilation to
//! LOOP/WHILE programs.
//!
//! Schemata are written as s-expressions:
//!
//! ```text
//! schema := zero | succ | (zero N) | (proj K N)
//!         | (comp F (G1 ... Gm)) | (primrec G H) | (mu F)
//! ```
//!
//! `(zero N)` is the constant 0 of arity `N` and bare `zero` has arity 0.
//! `(proj K N)` returns its `K`-th of `N` arguments (1-based).
//! Primitive recursion recurses on the first argument:
//! `f(0, x) = g(x)` and `f(y+1, x) = h(y, f(y, x), x)`.
//! `(mu F)` is the least `y` with `F(y, x) = 0`.
//! `#` starts a comment running to the end of the line.

use std::fmt;

use crate::nat::Nat;
use crate::syntax::{Program, Var};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RecSchema {
    Zero { arity: usize },
    Succ,
    Proj { k: usize, n: usize },
    Comp { f: Box<RecSchema>, gs: Vec<RecSchema> },
    PrimRec { base: Box<RecSchema>, step: Box<RecSchema> },
    Mu { f: Box<RecSchema> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("schema syntax error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

fn arity_err<T>(msg: impl Into<String>) -> Result<T, SchemaError> {
    Err(SchemaError::Arity(msg.into()))
}

impl RecSchema {
    pub fn comp(f: RecSchema, gs: Vec<RecSchema>) -> RecSchema {
        RecSchema::Comp { f: Box::new(f), gs }
    }

    pub fn primrec(base: RecSchema, step: RecSchema) -> RecSchema {
        RecSchema::PrimRec { base: Box::new(base), step: Box::new(step) }
    }

    pub fn mu(f: RecSchema) -> RecSchema {
        RecSchema::Mu { f: Box::new(f) }
    }

    /// Number of arguments, after checking that all parts fit together.
    /// A composition with no inner functions has arity 0.
    pub fn arity(&self) -> Result<usize, SchemaError> {
        match self {
            RecSchema::Zero { arity } => Ok(*arity),
            RecSchema::Succ => Ok(1),
            RecSchema::Proj { k, n } => {
                if *k == 0 || k > n {
                    return arity_err(format!("(proj {k} {n}) needs 1 <= k <= n"));
                }
                Ok(*n)
            }
            RecSchema::Comp { f, gs } => {
                let fa = f.arity()?;
                if fa != gs.len() {
                    return arity_err(format!("comp: outer function takes {fa} arguments, {} given", gs.len()));
                }
                let mut inner = None;
                for g in gs {
                    let ga = g.arity()?;
                    match inner {
                        Some(a) if a != ga => {
                            return arity_err(format!("comp: inner functions have arities {a} and {ga}"))
                        }
                        _ => inner = Some(ga),
                    }
                }
                Ok(inner.unwrap_or(0))
            }
            RecSchema::PrimRec { base, step } => {
                let n = base.arity()?;
                let h = step.arity()?;
                if h != n + 2 {
                    return arity_err(format!("primrec: base has arity {n}, so step needs {}, found {h}", n + 2));
                }
                Ok(n + 1)
            }
            RecSchema::Mu { f } => match f.arity()? {
                0 => arity_err("mu: the searched function needs at least one argument"),
                a => Ok(a - 1),
            },
        }
    }

    pub fn is_mu_free(&self) -> bool {
        match self {
            RecSchema::Zero { .. } | RecSchema::Succ | RecSchema::Proj { .. } => true,
            RecSchema::Comp { f, gs } => f.is_mu_free() && gs.iter().all(RecSchema::is_mu_free),
            RecSchema::PrimRec { base, step } => base.is_mu_free() && step.is_mu_free(),
            RecSchema::Mu { .. } => false,
        }
    }

    /// Reference semantics by direct recursion. Each μ-search gives up after
    /// `mu_bound` candidates and yields `None`.
    pub fn evaluate(&self, args: &[Nat], mu_bound: u64) -> Option<Nat> {
        match self {
            RecSchema::Zero { .. } => Some(Nat::ZERO),
            RecSchema::Succ => Some(args[0].add_u64(1)),
            RecSchema::Proj { k, .. } => Some(args[k - 1].clone()),
            RecSchema::Comp { f, gs } => {
                let inner: Option<Vec<Nat>> = gs.iter().map(|g| g.evaluate(args, mu_bound)).collect();
                f.evaluate(&inner?, mu_bound)
            }
            RecSchema::PrimRec { base, step } => {
                let rounds = args[0].to_u64().expect("recursion argument fits in u64");
                let mut acc = base.evaluate(&args[1..], mu_bound)?;
                let mut h_args = Vec::with_capacity(args.len() + 1);
                for y in 0..rounds {
                    h_args.clear();
                    h_args.push(Nat::small(y));
                    h_args.push(acc);
                    h_args.extend_from_slice(&args[1..]);
                    acc = step.evaluate(&h_args, mu_bound)?;
                }
                Some(acc)
            }
            RecSchema::Mu { f } => {
                let mut f_args = Vec::with_capacity(args.len() + 1);
                f_args.push(Nat::ZERO);
                f_args.extend_from_slice(args);
                for y in 0..mu_bound {
                    f_args[0] = Nat::small(y);
                    if f.evaluate(&f_args, mu_bound)?.is_zero() {
                        return Some(Nat::small(y));
                    }
                }
                None
            }
        }
    }
}

impl fmt::Display for RecSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecSchema::Zero { arity: 0 } => f.write_str("zero"),
            RecSchema::Zero { arity } => write!(f, "(zero {arity})"),
            RecSchema::Succ => f.write_str("succ"),
            RecSchema::Proj { k, n } => write!(f, "(proj {k} {n})"),
            RecSchema::Comp { f: outer, gs } => {
                write!(f, "(comp {outer} (")?;
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str("))")
            }
            RecSchema::PrimRec { base, step } => write!(f, "(primrec {base} {step})"),
            RecSchema::Mu { f: inner } => write!(f, "(mu {inner})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn offset(&self) -> usize {
        match self {
            Sexp::Atom(_, o) | Sexp::List(_, o) => *o,
        }
    }
}

fn read_sexp(text: &str) -> Result<Sexp, SchemaError> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' | b')' => {
                tokens.push((&text[i..i + 1], i));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !b"()#".contains(&bytes[i]) {
                    i += 1;
                }
                tokens.push((&text[start..i], start));
            }
        }
    }
    let mut pos = 0;
    let sexp = read_one(&tokens, &mut pos, text.len())?;
    if let Some((tok, offset)) = tokens.get(pos) {
        return Err(SchemaError::Parse { offset: *offset, message: format!("unexpected `{tok}` after schema") });
    }
    Ok(sexp)
}

fn read_one(tokens: &[(&str, usize)], pos: &mut usize, end: usize) -> Result<Sexp, SchemaError> {
    let Some(&(tok, offset)) = tokens.get(*pos) else {
        return Err(SchemaError::Parse { offset: end, message: "unexpected end of input".into() });
    };
    *pos += 1;
    match tok {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some((")", _)) => {
                        *pos += 1;
                        return Ok(Sexp::List(items, offset));
                    }
                    Some(_) => items.push(read_one(tokens, pos, end)?),
                    None => {
                        return Err(SchemaError::Parse { offset: end, message: "unclosed `(`".into() })
                    }
                }
            }
        }
        ")" => Err(SchemaError::Parse { offset, message: "unexpected `)`".into() }),
        atom => Ok(Sexp::Atom(atom.to_string(), offset)),
    }
}

fn number(s: &Sexp) -> Result<usize, SchemaError> {
    match s {
        Sexp::Atom(a, o) => a
            .parse()
            .map_err(|_| SchemaError::Parse { offset: *o, message: format!("expected a number, found `{a}`") }),
        Sexp::List(_, o) => Err(SchemaError::Parse { offset: *o, message: "expected a number, found a list".into() }),
    }
}

fn to_schema(s: &Sexp) -> Result<RecSchema, SchemaError> {
    let bad = |offset: usize, message: String| Err(SchemaError::Parse { offset, message });
    match s {
        Sexp::Atom(a, o) => match a.as_str() {
            "zero" => Ok(RecSchema::Zero { arity: 0 }),
            "succ" => Ok(RecSchema::Succ),
            other => bad(*o, format!("unknown schema `{other}`")),
        },
        Sexp::List(items, o) => {
            let Some(Sexp::Atom(head, _)) = items.first() else {
                return bad(*o, "expected a schema name after `(`".into());
            };
            let args = &items[1..];
            let want = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(SchemaError::Parse {
                        offset: *o,
                        message: format!("`{head}` takes {n} arguments, found {}", args.len()),
                    })
                }
            };
            match head.as_str() {
                "zero" => {
                    want(1)?;
                    Ok(RecSchema::Zero { arity: number(&args[0])? })
                }
                "succ" => {
                    want(0)?;
                    Ok(RecSchema::Succ)
                }
                "proj" => {
                    want(2)?;
                    Ok(RecSchema::Proj { k: number(&args[0])?, n: number(&args[1])? })
                }
                "comp" => {
                    want(2)?;
                    let Sexp::List(gs, _) = &args[1] else {
                        return bad(args[1].offset(), "expected a parenthesized list of inner schemata".into());
                    };
                    let gs = gs.iter().map(to_schema).collect::<Result<_, _>>()?;
                    Ok(RecSchema::comp(to_schema(&args[0])?, gs))
                }
                "primrec" => {
                    want(2)?;
                    Ok(RecSchema::primrec(to_schema(&args[0])?, to_schema(&args[1])?))
                }
                "mu" => {
                    want(1)?;
                    Ok(RecSchema::mu(to_schema(&args[0])?))
                }
                other => bad(*o, format!("unknown schema `{other}`")),
            }
        }
    }
}

/// Parses the s-expression form and checks arities.
pub fn parse_schema(text: &str) -> Result<RecSchema, SchemaError> {
    let s = to_schema(&read_sexp(text)?)?;
    s.arity()?;
    Ok(s)
}

struct Compiler {
    next: u64,
}

impl Compiler {
    fn fresh(&mut self) -> Var {
        self.next += 1;
        Var::new(self.next)
    }

    /// Code computing `s(inputs)` into `out`. Inputs are never written and
    /// every scratch variable is initialized before it is read, so the
    /// fragment can be re-run inside loops.
    fn compile(&mut self, s: &RecSchema, inputs: &[Var], out: &Var) -> Program {
        match s {
            RecSchema::Zero { .. } => Program::constant(out.clone(), 0u64),
            RecSchema::Succ => Program::add(out.clone(), inputs[0].clone(), 1u64),
            RecSchema::Proj { k, .. } => Program::copy(out.clone(), inputs[k - 1].clone()),
            RecSchema::Comp { f, gs } => {
                let temps: Vec<Var> = gs.iter().map(|_| self.fresh()).collect();
                let mut parts: Vec<Program> =
                    gs.iter().zip(&temps).map(|(g, t)| self.compile(g, inputs, t)).collect();
                parts.push(self.compile(f, &temps, out));
                Program::seq_all(parts)
            }
            RecSchema::PrimRec { base, step } => {
                let (acc, counter, next) = (self.fresh(), self.fresh(), self.fresh());
                let mut h_inputs = vec![counter.clone(), acc.clone()];
                h_inputs.extend_from_slice(&inputs[1..]);
                let h = self.compile(step, &h_inputs, &next);
                Program::seq_all([
                    self.compile(base, &inputs[1..], &acc),
                    Program::constant(counter.clone(), 0u64),
                    Program::looping(
                        inputs[0].clone(),
                        Program::seq_all([
                            h,
                            Program::copy(acc.clone(), next),
                            Program::add(counter.clone(), counter, 1u64),
                        ]),
                    ),
                    Program::copy(out.clone(), acc),
                ])
            }
            RecSchema::Mu { f } => {
                // y := 0; w := 1;
                // while w /= 0 do r := f(y, x); w := [r /= 0]; y := y + w end
                let (y, r, w) = (self.fresh(), self.fresh(), self.fresh());
                let mut f_inputs = vec![y.clone()];
                f_inputs.extend_from_slice(inputs);
                let test = self.compile(f, &f_inputs, &r);
                Program::seq_all([
                    Program::constant(y.clone(), 0u64),
                    Program::constant(w.clone(), 1u64),
                    Program::while_nonzero(
                        w.clone(),
                        Program::seq_all([
                            test,
                            Program::constant(w.clone(), 0u64),
                            Program::looping(r, Program::constant(w.clone(), 1u64)),
                            Program::looping(w, Program::add(y.clone(), y.clone(), 1u64)),
                        ]),
                    ),
                    Program::copy(out.clone(), y),
                ])
            }
        }
    }
}

/// Compiles a schema of arity `n` to a program reading `x1..xn` and writing
/// `x0`, with scratch above `xn`. μ-free schemata give `while`-free output.
pub fn compile_recursive(s: &RecSchema) -> Result<Program, SchemaError> {
    let n = s.arity()?;
    let inputs: Vec<Var> = (1..=n as u64).map(Var::new).collect();
    let mut c = Compiler { next: n as u64 };
    Ok(c.compile(s, &inputs, &Var::new(0)))
}
