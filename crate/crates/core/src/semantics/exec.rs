//! Fuel-bounded execution with exact step counting.
//!
//! Programs are lowered to a flat instruction list before running so that
//! execution is iterative and cheap per step. Costs follow a unit model:
//!
//! | construct                 | cost                                   |
//! |---------------------------|----------------------------------------|
//! | `xi := xj + c`, `xi := xj - c`, `xi := c`, `xi := xj` | 1          |
//! | `loop xi do P end`        | 1 on entry, plus the body's costs      |
//! | `while xi /= 0 do P end`  | 1 per guard test (including the last)  |
//! | `if xi = 0 then P else Q end` | `6 + xi + [xi = 0]`, plus the branch |
//! | sequencing, `skip`        | 0                                      |
//!
//! The `if` charge is exactly what its kernel expansion (two flag variables
//! and four `loop`s) costs, so desugaring never changes step counts.

use std::collections::HashMap;



use crate::nat::Nat;
use crate::semantics::State;
use crate::syntax::{head, is_while_free, Program, Var};

/// Step budget for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fuel {
    Limited(u64),
    /// No budget. Only accepted for programs without `while`.
    Unbounded,
    /// No budget, for any program; the caller accepts possible divergence.
    UnboundedUnchecked,
}

impl From<u64> for Fuel {
    fn from(v: u64) -> Fuel {
        Fuel::Limited(v)
    }
}

impl From<Option<u64>> for Fuel {
    fn from(v: Option<u64>) -> Fuel {
        v.map_or(Fuel::Unbounded, Fuel::Limited)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("program contains `while`; an explicit fuel bound is required")]
    FuelRequired,
    #[error("step count exceeds 2^64 - 1")]
    StepOverflow,
}

/// Result of a fuel-bounded run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Halted { state: State, steps: u64 },
    FuelExhausted { state: State, steps: u64 },
}

impl Outcome {
    pub fn steps(&self) -> u64 {
        match self {
            Outcome::Halted { steps, .. } | Outcome::FuelExhausted { steps, .. } => *steps,
        }
    }

    pub fn state(&self) -> &State {
        match self {
            Outcome::Halted { state, .. } | Outcome::FuelExhausted { state, .. } => state,
        }
    }

    pub fn is_halted(&self) -> bool {
        matches!(self, Outcome::Halted { .. })
    }

    /// `x0` of a halted run, `None` when fuel ran out.
    pub fn value(&self) -> Option<&Nat> {
        match self {
            Outcome::Halted { state, .. } => Some(state.output()),
            Outcome::FuelExhausted { .. } => None,
        }
    }
}

/// A single variable update recorded in a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Write {
    pub var: Var,
    pub old: Nat,
    pub new: Nat,
}

/// One charged action of a traced run. `step` is the cumulative step count
/// once the action has been paid for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: u64,
    pub stmt: String,
    pub writes: Vec<Write>,
}

type Slot = u32;

#[derive(Debug, Clone)]
enum Op {
    Add { t: Slot, s: Slot, c: Nat },
    Sub { t: Slot, s: Slot, c: Nat },
    Const { t: Slot, c: Nat },
    /// Pay 1, snapshot the guard; skip to `exit` when it is zero.
    LoopEnter { guard: Slot, exit: u32 },
    /// Free; runs the body again while the snapshot counter is positive.
    LoopNext { body: u32 },
    WhileTest { guard: Slot, exit: u32 },
    Jump { to: u32 },
    /// Pay `6 + g + [g = 0]`; fall through into the then-branch when zero.
    If { guard: Slot, else_at: u32 },
    Halt,
}

/// A program lowered for repeated execution.
#[derive(Debug, Clone)]
pub struct Executable {
    ops: Vec<Op>,
    heads: Vec<String>,
    vars: Vec<Var>,
    slots: HashMap<Var, Slot>,
    while_free: bool,
}

struct Lowering<'a> {
    ops: Vec<Op>,
    heads: Vec<&'a Program>,
    slots: HashMap<Var, Slot>,
    vars: Vec<Var>,
}

impl<'a> Lowering<'a> {
    fn slot(&mut self, v: &Var) -> Slot {
        if let Some(s) = self.slots.get(v) {
            return *s;
        }
        let s = self.vars.len() as Slot;
        self.vars.push(v.clone());
        self.slots.insert(v.clone(), s);
        s
    }

    fn emit(&mut self, op: Op, origin: &'a Program) -> u32 {
        self.ops.push(op);
        self.heads.push(origin);
        (self.ops.len() - 1) as u32
    }

    fn here(&self) -> u32 {
        self.ops.len() as u32
    }

    fn patch_exit(&mut self, at: u32, target: u32) {
        match &mut self.ops[at as usize] {
            Op::LoopEnter { exit, .. } | Op::WhileTest { exit, .. } => *exit = target,
            Op::If { else_at, .. } => *else_at = target,
            Op::Jump { to } => *to = target,
            _ => unreachable!("only branching ops are patched"),
        }
    }

    fn lower(&mut self, p: &'a Program) {
        for stmt in p.statements() {
            self.lower_statement(stmt);
        }
    }

    fn lower_statement(&mut self, p: &'a Program) {
        match p {
            Program::AddAssign { target, source, c } => {
                let (t, s) = (self.slot(target), self.slot(source));
                self.emit(Op::Add { t, s, c: c.clone() }, p);
            }
            Program::SubAssign { target, source, c } => {
                let (t, s) = (self.slot(target), self.slot(source));
                self.emit(Op::Sub { t, s, c: c.clone() }, p);
            }
            Program::ConstAssign { target, c } => {
                let t = self.slot(target);
                self.emit(Op::Const { t, c: c.clone() }, p);
            }
            Program::CopyAssign { target, source } => {
                let (t, s) = (self.slot(target), self.slot(source));
                self.emit(Op::Add { t, s, c: Nat::ZERO }, p);
            }
            Program::Skip => {}
            Program::Seq(..) => self.lower(p),
            Program::Loop { guard, body } => {
                let g = self.slot(guard);
                let enter = self.emit(Op::LoopEnter { guard: g, exit: 0 }, p);
                let body_at = self.here();
                self.lower(body);
                self.emit(Op::LoopNext { body: body_at }, p);
                let after = self.here();
                self.patch_exit(enter, after);
            }
            Program::While { guard, body } => {
                let g = self.slot(guard);
                let test = self.emit(Op::WhileTest { guard: g, exit: 0 }, p);
                self.lower(body);
                self.emit(Op::Jump { to: test }, p);
                let after = self.here();
                self.patch_exit(test, after);
            }
            Program::If { guard, then_branch, else_branch } => {
                let g = self.slot(guard);
                let test = self.emit(Op::If { guard: g, else_at: 0 }, p);
                self.lower(then_branch);
                let skip_else = self.emit(Op::Jump { to: 0 }, p);
                let else_at = self.here();
                self.patch_exit(test, else_at);
                self.lower(else_branch);
                let after = self.here();
                self.patch_exit(skip_else, after);
            }
        }
    }
}

enum Stop {
    Halted,
    Exhausted,
}

impl Executable {
    pub fn new(p: &Program) -> Executable {
        let mut l = Lowering { ops: Vec::new(), heads: Vec::new(), slots: HashMap::new(), vars: Vec::new() };
        l.lower(p);
        l.emit(Op::Halt, p);
        let heads_src = std::mem::take(&mut l.heads);
        Executable {
            heads: Vec::new(),
            ops: l.ops,
            vars: l.vars,
            slots: l.slots,
            while_free: is_while_free(p),
        }
        .with_heads_from(heads_src)
    }

    fn with_heads_from(mut self, origins: Vec<&Program>) -> Executable {
        // Heads are only needed for traces; keep them cheap for big programs.
        self.heads = origins
            .iter()
            .map(|o| match o {
                Program::Seq(..) => String::new(),
                other => head(other),
            })
            .collect();
        self
    }

    fn budget(&self, fuel: Fuel) -> Result<(u64, bool), RunError> {
        match fuel {
            Fuel::Limited(n) => Ok((n, true)),
            Fuel::Unbounded if !self.while_free => Err(RunError::FuelRequired),
            Fuel::Unbounded | Fuel::UnboundedUnchecked => Ok((u64::MAX, false)),
        }
    }

    fn initial(&self, start: &State) -> (Vec<Nat>, State) {
        let mut regs = vec![Nat::ZERO; self.vars.len()];
        let mut extra = State::new();
        for (var, v) in start.iter() {
            match self.slots.get(var) {
                Some(s) => regs[*s as usize] = v.clone(),
                None => extra.set(var.clone(), v.clone()),
            }
        }
        (regs, extra)
    }

    fn final_state(&self, regs: Vec<Nat>, mut extra: State) -> State {
        for (v, val) in self.vars.iter().zip(regs) {
            extra.set(v.clone(), val);
        }
        extra
    }

    pub fn run(&self, inputs: &[Nat], fuel: impl Into<Fuel>) -> Result<Outcome, RunError> {
        self.run_from(&State::from_inputs(inputs), fuel)
    }

    /// Like [`run`](Executable::run), but starting from `start` rather than
    /// from an input tuple.
    pub fn run_from(&self, start: &State, fuel: impl Into<Fuel>) -> Result<Outcome, RunError> {
        let (limit, bounded) = self.budget(fuel.into())?;
        let (mut regs, extra) = self.initial(start);
        let (stop, steps) = self.execute::<false>(&mut regs, limit, &mut Vec::new());
        let state = self.final_state(regs, extra);
        match stop {
            Stop::Halted => Ok(Outcome::Halted { state, steps }),
            Stop::Exhausted if bounded => Ok(Outcome::FuelExhausted { state, steps }),
            Stop::Exhausted => Err(RunError::StepOverflow),
        }
    }

    /// Events for the first `limit` cost units.
    pub fn trace(&self, inputs: &[Nat], limit: u64) -> Vec<TraceEvent> {
        let (mut regs, _) = self.initial(&State::from_inputs(inputs));
        let mut events = Vec::new();
        self.execute::<true>(&mut regs, limit, &mut events);
        events
    }

    fn record(&self, events: &mut Vec<TraceEvent>, op: usize, step: u64, write: Option<(Slot, Nat, Nat)>) {
        events.push(TraceEvent {
            step,
            stmt: self.heads[op].clone(),
            writes: write
                .map(|(s, old, new)| Write { var: self.vars[s as usize].clone(), old, new })
                .into_iter()
                .collect(),
        });
    }

    fn execute<const TRACE: bool>(
        &self,
        regs: &mut [Nat],
        limit: u64,
        events: &mut Vec<TraceEvent>,
    ) -> (Stop, u64) {
        let mut steps: u64 = 0;
        let mut pc: usize = 0;
        let mut counters: Vec<Nat> = Vec::new();
        macro_rules! pay_one {
            () => {
                if steps == limit {
                    return (Stop::Exhausted, steps);
                }
                steps += 1;
            };
        }
        loop {
            match &self.ops[pc] {
                Op::Add { t, s, c } => {
                    pay_one!();
                    let old = if TRACE { Some(regs[*t as usize].clone()) } else { None };
                    if t == s {
                        regs[*t as usize].add_assign(c);
                    } else {
                        regs[*t as usize] = regs[*s as usize].add(c);
                    }
                    if TRACE {
                        self.record(events, pc, steps, Some((*t, old.unwrap(), regs[*t as usize].clone())));
                    }
                    pc += 1;
                }
                Op::Sub { t, s, c } => {
                    pay_one!();
                    let old = if TRACE { Some(regs[*t as usize].clone()) } else { None };
                    if t == s {
                        regs[*t as usize].monus_assign(c);
                    } else {
                        regs[*t as usize] = regs[*s as usize].monus(c);
                    }
                    if TRACE {
                        self.record(events, pc, steps, Some((*t, old.unwrap(), regs[*t as usize].clone())));
                    }
                    pc += 1;
                }
                Op::Const { t, c } => {
                    pay_one!();
                    let old = std::mem::replace(&mut regs[*t as usize], c.clone());
                    if TRACE {
                        self.record(events, pc, steps, Some((*t, old, c.clone())));
                    }
                    pc += 1;
                }
                Op::LoopEnter { guard, exit } => {
                    pay_one!();
                    if TRACE {
                        self.record(events, pc, steps, None);
                    }
                    let count = &regs[*guard as usize];
                    if count.is_zero() {
                        pc = *exit as usize;
                    } else {
                        counters.push(count.clone());
                        pc += 1;
                    }
                }
                Op::LoopNext { body } => {
                    let top = counters.last_mut().expect("loop counter");
                    top.decrement();
                    if top.is_zero() {
                        counters.pop();
                        pc += 1;
                    } else {
                        pc = *body as usize;
                    }
                }
                Op::WhileTest { guard, exit } => {
                    pay_one!();
                    if TRACE {
                        self.record(events, pc, steps, None);
                    }
                    if regs[*guard as usize].is_zero() {
                        pc = *exit as usize;
                    } else {
                        pc += 1;
                    }
                }
                Op::Jump { to } => pc = *to as usize,
                Op::If { guard, else_at } => {
                    let g = &regs[*guard as usize];
                    let zero = g.is_zero();
                    let cost = g.add_u64(if zero { 7 } else { 6 });
                    match cost.to_u64() {
                        Some(k) if k <= limit - steps => steps += k,
                        _ => return (Stop::Exhausted, limit),
                    }
                    if TRACE {
                        self.record(events, pc, steps, None);
                    }
                    pc = if zero { pc + 1 } else { *else_at as usize };
                }
                Op::Halt => return (Stop::Halted, steps),
            }
        }
    }
}

/// Runs `p` on inputs bound to `x1..xn`.
pub fn run(p: &Program, inputs: &[Nat], fuel: impl Into<Fuel>) -> Result<Outcome, RunError> {
    Executable::new(p).run(inputs, fuel)
}

/// Runs `p` from an arbitrary starting state.
pub fn run_from(p: &Program, start: &State, fuel: impl Into<Fuel>) -> Result<Outcome, RunError> {
    Executable::new(p).run_from(start, fuel)
}

/// The function computed by `p`: `x0` after halting, `None` (⊥) when fuel runs out.
pub fn eval_fn(p: &Program, inputs: &[Nat], fuel: impl Into<Fuel>) -> Result<Option<Nat>, RunError> {
    Ok(run(p, inputs, fuel)?.value().cloned())
}

/// Events covering the first `limit` cost units of running `p`.
pub fn trace(p: &Program, inputs: &[Nat], limit: u64) -> Vec<TraceEvent> {
    Executable::new(p).trace(inputs, limit)
}

/// Convenience for building input vectors from machine integers.
pub fn nats(values: &[u64]) -> Vec<Nat> {
    values.iter().map(|v| Nat::small(*v)).collect()
}
