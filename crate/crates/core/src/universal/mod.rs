//! Self-interpretation: a universal WHILE program, program specialization
//! and the diagonal program.
//!
//! # How `U` works
//!
//! `U` reads a program code from `x1` and an input from `x2` and leaves the
//! simulated program's `x0` in its own `x0`. The simulated state is a single
//! natural `S = pair(v0, pair(v1, ...))` ending in an implicit zero tail
//! (`pair(0, 0) = 0`).
//!
//! Control is a stack of frames `(kind, a, c)`:
//!
//! * kind 1 executes the statement coded by `a`;
//! * kind 2 is a running `loop` with body code `a` and `c` rounds left;
//! * kind 3 is a `while` with body code `a` and guard index `c`.
//!
//! The top four frames live in registers, and deeper frames spill into a
//! nested-pair list. Every in-language operation on a value `V` costs about
//! `V` steps, so a single-number stack would be far slower.

mod builder;

use std::sync::OnceLock;

pub use builder::{block, Builder};

use crate::encoding::{decode, encode};
use crate::nat::Nat;
use crate::semantics::Executable;
use crate::syntax::{max_var, Program, Var};

/// Number of stack frames cached in registers.
const CACHED_FRAMES: usize = 4;

/// Main-loop rounds the diagonal program grants its simulation.
pub const DIAGONAL_CLOCK: u64 = 100;

struct Frames {
    cached: usize,
    kind: Vec<Var>,
    a: Vec<Var>,
    c: Vec<Var>,
    overflow: Var,
}

impl Frames {
    fn new(b: &mut Builder, cached: usize) -> Frames {
        let mut regs = |_| b.reg();
        let kind = (0..cached).map(&mut regs).collect();
        let a = (0..cached).map(&mut regs).collect();
        let c = (0..cached).map(&mut regs).collect();
        Frames { cached, kind, a, c, overflow: b.reg() }
    }

    fn clear(&self, b: &Builder) -> Program {
        let mut parts: Vec<Program> = self.kind.iter().chain(&self.a).chain(&self.c).map(|v| b.set(v, 0)).collect();
        parts.push(b.set(&self.overflow, 0));
        block(parts)
    }

    fn push(&self, b: &mut Builder, kind: u64, a: &Var, c: &Var) -> Program {
        let last = self.cached - 1;
        let [rest, packed] = b.regs();
        let spill = block(vec![
            b.pair(&rest, &self.a[last], &self.c[last]),
            b.pair(&packed, &self.kind[last], &rest),
            b.pair(&self.overflow, &packed, &self.overflow),
        ]);
        let mut parts = vec![b.when_nonzero(&self.kind[last], spill)];
        for i in (1..self.cached).rev() {
            parts.push(b.copy(&self.kind[i], &self.kind[i - 1]));
            parts.push(b.copy(&self.a[i], &self.a[i - 1]));
            parts.push(b.copy(&self.c[i], &self.c[i - 1]));
        }
        parts.push(b.set(&self.kind[0], kind));
        parts.push(b.copy(&self.a[0], a));
        parts.push(b.copy(&self.c[0], c));
        block(parts)
    }

    fn pop(&self, b: &mut Builder, kind: &Var, a: &Var, c: &Var) -> Program {
        let last = self.cached - 1;
        let mut parts = vec![b.copy(kind, &self.kind[0]), b.copy(a, &self.a[0]), b.copy(c, &self.c[0])];
        for i in 0..last {
            parts.push(b.copy(&self.kind[i], &self.kind[i + 1]));
            parts.push(b.copy(&self.a[i], &self.a[i + 1]));
            parts.push(b.copy(&self.c[i], &self.c[i + 1]));
        }
        let [packed, rest] = b.regs();
        let refill = block(vec![
            b.unpair(&packed, &self.overflow, &self.overflow),
            b.unpair(&self.kind[last], &rest, &packed),
            b.unpair(&self.a[last], &self.c[last], &rest),
        ]);
        parts.push(b.set(&self.kind[last], 0));
        parts.push(b.set(&self.a[last], 0));
        parts.push(b.set(&self.c[last], 0));
        parts.push(b.when_nonzero(&self.overflow, refill));
        block(parts)
    }
}

/// Which program the interpreter core is wrapped into.
enum Mode {
    Universal,
    /// Simulate on `(x1, x1)` for a bounded number of rounds; diverge if the
    /// simulation finishes in time and halt otherwise.
    Diagonal { clock: u64 },
}

fn build(mode: Mode, cached: usize) -> Program {
    let code = Var::new(1);
    let input = Var::new(2);
    let mut b = Builder::new(3);
    let zero = b.zero().clone();
    let [state, run, halted, clock] = b.regs();
    let frames = Frames::new(&mut b, cached);
    let [kind, a, c] = b.regs();

    // Executing the statement coded by `a`.
    let [tag, m] = b.regs();
    let split = b.tagsplit(&tag, &m, &a);
    let (tag_flags, g) = b.one_hot(&tag, 5);
    let [is_assign, i, r, j, k, v] = b.regs();
    let assign = block(vec![
        b.unpair(&i, &r, &m),
        b.unpair(&j, &k, &r),
        b.list_get(&v, &state, &j),
        {
            let sub = b.sub_from(&v, &k);
            let add = b.add_to(&v, &k);
            b.if_else(&g[1], sub, add)
        },
        b.list_set(&state, &i, &v),
    ]);
    let [first, second] = b.regs();
    let seq = block(vec![
        b.unpair(&first, &second, &m),
        frames.push(&mut b, 1, &second, &zero),
        frames.push(&mut b, 1, &first, &zero),
    ]);
    let [guard, body, rounds] = b.regs();
    let enter_loop = block(vec![
        b.unpair(&guard, &body, &m),
        b.list_get(&rounds, &state, &guard),
        frames.push(&mut b, 2, &body, &rounds),
    ]);
    let enter_while = block(vec![b.unpair(&guard, &body, &m), frames.push(&mut b, 3, &body, &guard)]);
    let exec = block(vec![
        split,
        tag_flags,
        b.copy(&is_assign, &g[0]),
        b.add_to(&is_assign, &g[1]),
        b.when_nonzero(&is_assign, assign),
        b.when_nonzero(&g[2], seq),
        b.when_nonzero(&g[3], enter_loop),
        b.when_nonzero(&g[4], enter_while),
    ]);

    // Another round of a `loop`.
    let left = b.reg();
    let loop_round = block(vec![
        Program::sub(left.clone(), c.clone(), 1u64),
        frames.push(&mut b, 2, &a, &left),
        frames.push(&mut b, 1, &a, &zero),
    ]);
    let loop_round = b.when_nonzero(&c, loop_round);

    // Another guard test of a `while`.
    let test = b.reg();
    let again = block(vec![frames.push(&mut b, 3, &a, &c), frames.push(&mut b, 1, &a, &zero)]);
    let while_round = block(vec![b.list_get(&test, &state, &c), b.when_nonzero(&test, again)]);

    let pop = frames.pop(&mut b, &kind, &a, &c);
    let (kind_flags, f) = b.one_hot(&kind, 4);
    let mut round = vec![
        pop,
        kind_flags,
        b.when_nonzero(&f[0], block(vec![b.set(&run, 0), b.set(&halted, 1)])),
        b.when_nonzero(&f[1], exec),
        b.when_nonzero(&f[2], loop_round),
        b.when_nonzero(&f[3], while_round),
    ];
    if let Mode::Diagonal { .. } = mode {
        round.push(b.dec(&clock));
        let out_of_time = b.set(&run, 0);
        round.push(b.when_zero(&clock, out_of_time));
    }

    let [row, junk] = b.regs();
    let mut parts = Vec::new();
    if let Mode::Diagonal { clock: rounds } = mode {
        parts.push(b.copy(&input, &code));
        parts.push(b.set(&clock, rounds));
    }
    // Build the state before touching the code: with a huge input this is
    // where the run spends its budget.
    parts.extend([
        b.pair(&row, &input, &zero),
        b.pair(&state, &zero, &row),
        frames.clear(&b),
        b.set(&frames.kind[0], 1),
        b.copy(&frames.a[0], &code),
        b.set(&run, 1),
        b.set(&halted, 0),
        Program::while_nonzero(run.clone(), block(round)),
    ]);
    match mode {
        Mode::Universal => parts.push(b.list_get(&Var::new(0), &state, &zero)),
        Mode::Diagonal { .. } => {
            let spin = Program::while_nonzero(junk.clone(), Program::add(junk.clone(), junk.clone(), 0u64));
            parts.push(b.when_nonzero(&halted, block(vec![b.set(&junk, 1), spin])));
        }
    }
    block(parts)
}

/// The universal program: `x1` holds a program code, `x2` its input, and the
/// simulated program's result ends up in `x0`.
pub fn build_universal() -> Program {
    crate::encoding::compact(&build(Mode::Universal, CACHED_FRAMES))
}

/// The diagonal program `D`. On input `x` it simulates the program coded by
/// `x` on input `x` for [`DIAGONAL_CLOCK`] interpreter rounds. It loops
/// forever if that simulation halts in time, and halts otherwise.
pub fn build_diagonal() -> Program {
    crate::encoding::compact(&build(Mode::Diagonal { clock: DIAGONAL_CLOCK }, CACHED_FRAMES))
}

/// Shared, lazily built copy of [`build_universal`].
pub fn universal() -> &'static Program {
    static U: OnceLock<Program> = OnceLock::new();
    U.get_or_init(build_universal)
}

/// Shared executable form of [`universal`].
pub fn universal_executable() -> &'static Executable {
    static U: OnceLock<Executable> = OnceLock::new();
    U.get_or_init(|| Executable::new(universal()))
}

/// Shared, lazily built copy of [`build_diagonal`].
pub fn diagonal() -> &'static Program {
    static D: OnceLock<Program> = OnceLock::new();
    D.get_or_init(build_diagonal)
}

/// Fixes the first argument of the program coded by `e` to `v`.
///
/// The result codes `prologue; P` where the prologue moves every argument
/// one place up (`x(m+1) := x(m)`, ..., `x2 := x1`, for `m = max_var(P)`),
/// clears `x1` and adds `v` to it. So for any inputs `ys`, the new program
/// on `ys` behaves like `P` on `v` followed by `ys`.
pub fn specialize(e: &Nat, v: &Nat) -> Nat {
    let p = decode(e);
    let m = max_var(&p);
    let top = Var::from_nat(m.clone());
    let mut parts = Vec::new();
    let mut i = top;
    while !i.index().is_zero() {
        let below = Var::from_nat(i.index().monus(&Nat::ONE));
        parts.push(Program::add(i.offset(1), i.clone(), 0u64));
        i = below;
    }
    let x1 = Var::new(1);
    parts.push(Program::looping(x1.clone(), Program::sub(x1.clone(), x1.clone(), 1u64)));
    parts.push(Program::add(x1.clone(), x1, v.clone()));
    let prologue = Program::seq_balanced(parts);
    encode(&Program::seq(prologue, p)).expect("decoded programs are kernel")
}

/// Errors from [`stdlib_macro`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MacroError {
    #[error("unknown macro `{0}`")]
    Unknown(String),
    #[error("macro `{name}` takes {expected} variables, got {found}")]
    WrongArity { name: String, expected: usize, found: usize },
    #[error("variable {0} appears twice in the variable map")]
    Collision(Var),
    #[error("variable {0} is too large to allocate scratch above")]
    IndexTooLarge(Var),
}

/// Signature of a library macro.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MacroSpec {
    pub name: &'static str,
    pub outputs: usize,
    pub inputs: usize,
    /// Uses `while` for speed; a `loop`-only version exists but is slower.
    pub uses_while: bool,
}

/// The macro library. Variable maps list outputs first, then inputs.
pub const MACROS: &[MacroSpec] = &[
    MacroSpec { name: "zero", outputs: 1, inputs: 0, uses_while: false },
    MacroSpec { name: "copy", outputs: 1, inputs: 1, uses_while: false },
    MacroSpec { name: "add", outputs: 1, inputs: 2, uses_while: false },
    MacroSpec { name: "monus", outputs: 1, inputs: 2, uses_while: false },
    MacroSpec { name: "mul", outputs: 1, inputs: 2, uses_while: false },
    MacroSpec { name: "divmod", outputs: 2, inputs: 2, uses_while: true },
    MacroSpec { name: "pair", outputs: 1, inputs: 2, uses_while: false },
    MacroSpec { name: "unpair", outputs: 2, inputs: 1, uses_while: true },
    MacroSpec { name: "tagsplit", outputs: 2, inputs: 1, uses_while: true },
];

/// A kernel program computing macro `name` over `var_map`.
///
/// Scratch registers are allocated above the largest mapped variable; the
/// first of them serves as the zero register and is cleared on entry.
pub fn stdlib_macro(name: &str, var_map: &[Var]) -> Result<Program, MacroError> {
    let spec = MACROS.iter().find(|m| m.name == name).ok_or_else(|| MacroError::Unknown(name.to_string()))?;
    let expected = spec.outputs + spec.inputs;
    if var_map.len() != expected {
        return Err(MacroError::WrongArity { name: name.to_string(), expected, found: var_map.len() });
    }
    for (i, v) in var_map.iter().enumerate() {
        if var_map[..i].contains(v) {
            return Err(MacroError::Collision(v.clone()));
        }
    }
    let mut high = 0u64;
    for v in var_map {
        let idx = v.index().to_u64().filter(|i| *i < u64::MAX / 2).ok_or_else(|| MacroError::IndexTooLarge(v.clone()))?;
        high = high.max(idx);
    }
    let mut b = Builder::new(high + 1);
    let z = b.zero().clone();
    let v = var_map;
    let body = match name {
        "zero" => b.set(&v[0], 0),
        "copy" => b.copy(&v[0], &v[1]),
        "add" => b.add(&v[0], &v[1], &v[2]),
        "monus" => b.monus(&v[0], &v[1], &v[2]),
        "mul" => b.mul(&v[0], &v[1], &v[2]),
        "divmod" => b.divmod(&v[0], &v[1], &v[2], &v[3]),
        "pair" => b.pair(&v[0], &v[1], &v[2]),
        "unpair" => b.unpair(&v[0], &v[1], &v[2]),
        "tagsplit" => b.tagsplit(&v[0], &v[1], &v[2]),
        _ => unreachable!("checked against MACROS"),
    };
    Ok(block(vec![Program::looping(z.clone(), Program::sub(z.clone(), z, 1u64)), body]))
}

#[cfg(test)]
mod tests;
