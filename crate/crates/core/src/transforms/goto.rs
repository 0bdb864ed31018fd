use std::collections::HashMap;
use std::fmt;

use crate::nat::Nat;
use crate::semantics::{Fuel, Outcome, RunError, State};
use crate::syntax::{is_kernel, Program, Var};
use crate::transforms::TransformError;

/// One instruction of a jump-based program. Labels are 1-based positions;
/// label 0 means "stop".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instr {
    Add { target: Var, source: Var, c: Nat },
    Sub { target: Var, source: Var, c: Nat },
    IfZeroGoto { guard: Var, target: usize },
    Goto { target: usize },
    Halt,
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Add { target, source, c } => write!(f, "{target} := {source} + {c}"),
            Instr::Sub { target, source, c } => write!(f, "{target} := {source} - {c}"),
            Instr::IfZeroGoto { guard, target } => write!(f, "IF {guard} = 0 GOTO {target}"),
            Instr::Goto { target } => write!(f, "GOTO {target}"),
            Instr::Halt => f.write_str("HALT"),
        }
    }
}

/// A flat program with explicit jumps. Execution starts at label 1 and
/// stops on `HALT`, on a jump to 0, or by running off the end.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GotoProgram {
    pub instrs: Vec<Instr>,
}

impl fmt::Display for GotoProgram {
    /// Numbered lines such as `3: GOTO 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ins) in self.instrs.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{}: {ins}", i + 1)?;
        }
        Ok(())
    }
}

impl GotoProgram {
    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// Checks that every jump target lies in `0..=len`.
    pub fn validate(&self) -> Result<(), TransformError> {
        for (i, ins) in self.instrs.iter().enumerate() {
            if let Instr::IfZeroGoto { target, .. } | Instr::Goto { target } = ins {
                if *target > self.len() {
                    return Err(TransformError::InvalidLabel { at: i + 1, target: *target });
                }
            }
        }
        Ok(())
    }

    /// Largest variable index used, 0 if none.
    pub fn max_var(&self) -> Nat {
        self.vars().map(|v| v.index().clone()).max().unwrap_or(Nat::ZERO)
    }

    fn vars(&self) -> impl Iterator<Item = &Var> {
        self.instrs.iter().flat_map(|ins| match ins {
            Instr::Add { target, source, .. } | Instr::Sub { target, source, .. } => vec![target, source],
            Instr::IfZeroGoto { guard, .. } => vec![guard],
            Instr::Goto { .. } | Instr::Halt => Vec::new(),
        })
    }
}

/// Flattens a loop-free kernel program into jumps, ending with `HALT`.
///
/// `while g /= 0 do P end` starting at label `s` becomes
/// `s: IF g = 0 GOTO after`, the code for `P`, then `GOTO s`.
pub fn to_goto(p: &Program) -> Result<GotoProgram, TransformError> {
    if !is_kernel(p) {
        return Err(TransformError::NotKernel);
    }
    let mut out = Vec::new();
    flatten(p, &mut out)?;
    out.push(Instr::Halt);
    Ok(GotoProgram { instrs: out })
}

fn flatten(p: &Program, out: &mut Vec<Instr>) -> Result<(), TransformError> {
    for stmt in p.statements() {
        match stmt {
            Program::AddAssign { target, source, c } => {
                out.push(Instr::Add { target: target.clone(), source: source.clone(), c: c.clone() })
            }
            Program::SubAssign { target, source, c } => {
                out.push(Instr::Sub { target: target.clone(), source: source.clone(), c: c.clone() })
            }
            Program::While { guard, body } => {
                let start = out.len();
                out.push(Instr::IfZeroGoto { guard: guard.clone(), target: 0 });
                flatten(body, out)?;
                out.push(Instr::Goto { target: start + 1 });
                let after = out.len() + 1;
                out[start] = Instr::IfZeroGoto { guard: guard.clone(), target: after };
            }
            Program::Loop { .. } => return Err(TransformError::ContainsLoop),
            _ => return Err(TransformError::NotKernel),
        }
    }
    Ok(())
}

/// Simulates a jump program with one `while`.
///
/// The instructions are cut into basic blocks: a block starts at label 1,
/// at every jump target and after every jump or `HALT`. Block `b` runs
/// inside `loop f_b do ... end` where the flag `f_b` is 0 or 1. The flag
/// loops hang off a balanced binary tree whose inner nodes carry group
/// flags of their own, so a sweep of the `while` body only enters the
/// subtrees holding an active block:
///
/// ```text
/// pc := z + 1; <raise f_1 and its group flags>;
/// while pc /= 0 do
///   loop F do F := z + 0; <left subtree>; <right subtree> end ...
/// end
/// ```
///
/// A jump raises the target's flag together with the group flags on its
/// path that the current sweep has not entered yet. Forward jumps continue
/// in the same sweep and backward jumps in the next one. `HALT`, jumps to
/// 0 or to a `HALT`, and running off the end set `pc := 0`.
///
/// With `m = max_var(g)` and `B` blocks the result uses `pc = x(m+1)`, an
/// always-zero `z = x(m+2)`, test scratch `x(m+3)` and `x(m+4)`, block flags
/// `f_b = x(m+4+b)` and then the group flags.
pub fn from_goto(g: &GotoProgram) -> Result<Program, TransformError> {
    g.validate()?;
    let halt_only = GotoProgram { instrs: vec![Instr::Halt] };
    let g = if g.is_empty() { &halt_only } else { g };
    let len = g.len();
    let m = Var::from_nat(g.max_var());
    let pc = m.offset(1);
    let z = m.offset(2);
    let h = m.offset(3);
    let k = m.offset(4);
    let set = |v: &Var, c: u64| Program::add(v.clone(), z.clone(), c);

    let mut leader = vec![false; len + 2];
    leader[1] = true;
    for (idx, ins) in g.instrs.iter().enumerate() {
        match ins {
            Instr::Goto { target } | Instr::IfZeroGoto { target, .. } => {
                leader[*target] = true;
                leader[idx + 2] = true;
            }
            Instr::Halt => leader[idx + 2] = true,
            _ => {}
        }
    }
    let starts: Vec<usize> = (1..=len).filter(|&l| leader[l]).collect();
    let mut block_of = vec![0usize; len + 1];
    for (b, &s) in starts.iter().enumerate() {
        let end = starts.get(b + 1).copied().unwrap_or(len + 1);
        for slot in &mut block_of[s..end] {
            *slot = b;
        }
    }
    let blocks = starts.len();
    let flag = |b: usize| m.offset(5 + b as u64);

    // Group flags of the dispatch tree, and for every block the group
    // flags on its path from the root (excluding the root itself).
    let mut paths: Vec<Vec<Var>> = vec![Vec::new(); blocks];
    let mut next_group = 5 + blocks as u64;
    let mut group = |lo: usize, hi: usize, paths: &mut Vec<Vec<Var>>| {
        let v = m.offset(next_group);
        next_group += 1;
        for path in &mut paths[lo..hi] {
            path.push(v.clone());
        }
        v
    };
    fn assign_groups(
        lo: usize,
        hi: usize,
        root: bool,
        paths: &mut Vec<Vec<Var>>,
        group: &mut impl FnMut(usize, usize, &mut Vec<Vec<Var>>) -> Var,
        out: &mut Vec<(usize, usize, Option<Var>)>,
    ) {
        if hi - lo > 1 {
            let v = if root { None } else { Some(group(lo, hi, paths)) };
            out.push((lo, hi, v));
            let mid = (lo + hi) / 2;
            assign_groups(lo, mid, false, paths, group, out);
            assign_groups(mid, hi, false, paths, group, out);
        }
    }
    let mut nodes = Vec::new();
    assign_groups(0, blocks, true, &mut paths, &mut group, &mut nodes);

    // Target block of a jump to label `l`, or `None` when it stops.
    let resolve = |l: usize| match g.instrs.get(l.wrapping_sub(1)) {
        Some(Instr::Halt) | None => None,
        Some(_) => Some(block_of[l]),
    };
    let raise = |from: Option<usize>, to: usize| -> Program {
        let path = &paths[to];
        let skip = match from {
            Some(a) if to > a => path.iter().zip(&paths[a]).take_while(|(p, q)| p == q).count(),
            _ => 0,
        };
        let mut parts: Vec<Program> = path[skip..].iter().map(|v| set(v, 1)).collect();
        parts.push(set(&flag(to), 1));
        Program::seq_all(parts)
    };
    let jump = |from: usize, l: usize| match resolve(l) {
        Some(to) => raise(Some(from), to),
        None => set(&pc, 0),
    };

    let mut code: Vec<Program> = Vec::with_capacity(blocks);
    for (b, &s) in starts.iter().enumerate() {
        let end = starts.get(b + 1).copied().unwrap_or(len + 1);
        let mut parts = vec![set(&flag(b), 0)];
        let mut falls_through = true;
        for i in s..end {
            match &g.instrs[i - 1] {
                Instr::Add { target, source, c } => parts.push(Program::add(target.clone(), source.clone(), c.clone())),
                Instr::Sub { target, source, c } => parts.push(Program::sub(target.clone(), source.clone(), c.clone())),
                Instr::Goto { target } => {
                    parts.push(jump(b, *target));
                    falls_through = false;
                }
                Instr::Halt => {
                    parts.push(set(&pc, 0));
                    falls_through = false;
                }
                Instr::IfZeroGoto { guard, target } => {
                    parts.extend([
                        set(&h, 1),
                        Program::looping(guard.clone(), set(&h, 0)),
                        set(&k, 1),
                        Program::looping(h.clone(), set(&k, 0)),
                        Program::looping(h.clone(), jump(b, *target)),
                        Program::looping(k.clone(), jump(b, i + 1)),
                    ]);
                    falls_through = false;
                }
            }
        }
        if falls_through {
            parts.push(jump(b, end));
        }
        code.push(Program::looping(flag(b), Program::seq_all(parts)));
    }

    // Assemble the tree bottom-up; `nodes` lists parents before children.
    let mut built: HashMap<(usize, usize), Program> =
        code.into_iter().enumerate().map(|(b, p)| ((b, b + 1), p)).collect();
    for (lo, hi, v) in nodes.into_iter().rev() {
        let mid = (lo + hi) / 2;
        let left = built.remove(&(lo, mid)).expect("children are built first");
        let right = built.remove(&(mid, hi)).expect("children are built first");
        let node = match v {
            Some(v) => Program::looping(v.clone(), Program::seq_all([set(&v, 0), left, right])),
            None => Program::seq(left, right),
        };
        built.insert((lo, hi), node);
    }
    let body = built.remove(&(0, blocks)).expect("the root is built");

    let start = match resolve(1) {
        None => set(&pc, 0),
        Some(first) => Program::seq(set(&pc, 1), raise(None, first)),
    };
    Ok(Program::seq(start, Program::while_nonzero(pc.clone(), body)))
}

/// Runs a jump program. `ADD`, `SUB`, `IF` and `GOTO` each cost 1; `HALT`
/// is free. Unbounded fuel is accepted only when every jump goes forward.
pub fn run_goto(g: &GotoProgram, inputs: &[Nat], fuel: impl Into<Fuel>) -> Result<Outcome, RunError> {
    g.validate().expect("run_goto needs valid labels");
    let forward_only = g.instrs.iter().enumerate().all(|(i, ins)| match ins {
        Instr::IfZeroGoto { target, .. } | Instr::Goto { target } => *target == 0 || *target > i + 1,
        _ => true,
    });
    let (limit, bounded) = match fuel.into() {
        Fuel::Limited(n) => (n, true),
        Fuel::Unbounded if !forward_only => return Err(RunError::FuelRequired),
        Fuel::Unbounded | Fuel::UnboundedUnchecked => (u64::MAX, false),
    };

    let mut slots: HashMap<&Var, usize> = HashMap::new();
    let mut names: Vec<&Var> = Vec::new();
    for v in g.vars() {
        slots.entry(v).or_insert_with(|| {
            names.push(v);
            names.len() - 1
        });
    }
    let mut regs = vec![Nat::ZERO; names.len()];
    let mut extra = State::new();
    for (i, val) in inputs.iter().enumerate() {
        let var = Var::new(i as u64 + 1);
        match slots.get(&var) {
            Some(s) => regs[*s] = val.clone(),
            None => extra.set(var, val.clone()),
        }
    }

    let mut steps = 0u64;
    let mut pc = 1usize;
    let halted = loop {
        let Some(ins) = g.instrs.get(pc.wrapping_sub(1)) else { break true };
        if matches!(ins, Instr::Halt) {
            break true;
        }
        if steps == limit {
            break false;
        }
        steps += 1;
        pc = match ins {
            Instr::Add { target, source, c } => {
                regs[slots[target]] = regs[slots[source]].add(c);
                pc + 1
            }
            Instr::Sub { target, source, c } => {
                regs[slots[target]] = regs[slots[source]].monus(c);
                pc + 1
            }
            Instr::IfZeroGoto { guard, target } if regs[slots[guard]].is_zero() => *target,
            Instr::IfZeroGoto { .. } => pc + 1,
            Instr::Goto { target } => *target,
            Instr::Halt => unreachable!(),
        };
    };
    if !halted && !bounded {
        return Err(RunError::StepOverflow);
    }
    for (v, val) in names.into_iter().zip(regs) {
        extra.set(v.clone(), val);
    }
    Ok(if halted {
        Outcome::Halted { state: extra, steps }
    } else {
        Outcome::FuelExhausted { state: extra, steps }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval_fn, nats};
    use crate::syntax::{count_loop, count_while, parse, x};

    fn decrement_loop() -> GotoProgram {
        GotoProgram {
            instrs: vec![
                Instr::IfZeroGoto { guard: x(1), target: 4 },
                Instr::Sub { target: x(1), source: x(1), c: Nat::ONE },
                Instr::Goto { target: 1 },
                Instr::Halt,
            ],
        }
    }

    #[test]
    fn single_assignment() {
        let g = to_goto(&Program::add(x(0), x(0), 1u64)).unwrap();
        assert_eq!(g.to_string(), "1: x0 := x0 + 1\n2: HALT");
    }

    #[test]
    fn while_flattens_to_four_instructions() {
        let p = Program::while_nonzero(x(1), Program::sub(x(1), x(1), 1u64));
        let g = to_goto(&p).unwrap();
        assert_eq!(g, decrement_loop());
        assert_eq!(g.to_string(), "1: IF x1 = 0 GOTO 4\n2: x1 := x1 - 1\n3: GOTO 1\n4: HALT");
        for v in 0..=5u64 {
            let out = run_goto(&g, &nats(&[v]), 1000).unwrap();
            assert!(out.is_halted());
            assert!(out.state().get(&x(1)).is_zero());
        }
    }

    #[test]
    fn sequence_of_two_assignments() {
        let p = parse("x0 := x1 + 1; x0 := x0 + 1").unwrap();
        let g = to_goto(&p).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.instrs[2], Instr::Halt);
        assert_eq!(run_goto(&g, &nats(&[4]), None).unwrap().value(), Some(&Nat::small(6)));
    }

    #[test]
    fn rejects_loops_and_sugar() {
        let l = Program::looping(x(1), Program::add(x(0), x(0), 1u64));
        assert_eq!(to_goto(&l), Err(TransformError::ContainsLoop));
        assert_eq!(to_goto(&Program::Skip), Err(TransformError::NotKernel));
    }

    #[test]
    fn halt_alone_never_enters_the_loop() {
        let p = from_goto(&GotoProgram { instrs: vec![Instr::Halt] }).unwrap();
        let out = crate::semantics::run(&p, &[], 100).unwrap();
        assert!(out.is_halted());
        assert_eq!(out.steps(), 2, "pc := 0 and one failing guard test");
        assert_eq!(count_while(&p), 1);
    }

    #[test]
    fn increment_then_halt() {
        let g = GotoProgram {
            instrs: vec![Instr::Add { target: x(0), source: x(0), c: Nat::ONE }, Instr::Halt],
        };
        let p = from_goto(&g).unwrap();
        assert_eq!(eval_fn(&p, &[], 1000).unwrap(), Some(Nat::ONE));
    }

    #[test]
    fn decrement_loop_round_trip() {
        let p = from_goto(&decrement_loop()).unwrap();
        assert_eq!(count_while(&p), 1);
        assert!(count_loop(&p) > 0);
        for v in 0..=5u64 {
            let out = crate::semantics::run(&p, &nats(&[v]), 10_000).unwrap();
            assert!(out.is_halted());
            assert!(out.state().get(&x(1)).is_zero());
            assert!(out.state().get(&x(0)).is_zero());
        }
    }

    #[test]
    fn invalid_labels_are_rejected() {
        let g = GotoProgram { instrs: vec![Instr::Goto { target: 3 }] };
        assert_eq!(from_goto(&g), Err(TransformError::InvalidLabel { at: 1, target: 3 }));
    }

    #[test]
    fn running_off_the_end_halts() {
        let g = GotoProgram { instrs: vec![Instr::Add { target: x(0), source: x(1), c: Nat::small(2) }] };
        assert_eq!(run_goto(&g, &nats(&[1]), None).unwrap().value(), Some(&Nat::small(3)));
        let p = from_goto(&g).unwrap();
        assert_eq!(eval_fn(&p, &nats(&[1]), 1000).unwrap(), Some(Nat::small(3)));
        let empty = from_goto(&GotoProgram::default()).unwrap();
        assert_eq!(eval_fn(&empty, &nats(&[1]), 1000).unwrap(), Some(Nat::ZERO));
    }

    #[test]
    fn divergence_is_preserved() {
        let p = parse("while x1 /= 0 do x1 := x1 + 1 end").unwrap();
        let g = to_goto(&p).unwrap();
        assert!(!run_goto(&g, &nats(&[1]), 500).unwrap().is_halted());
        let n = from_goto(&g).unwrap();
        assert_eq!(eval_fn(&n, &nats(&[1]), 10_000).unwrap(), None);
        assert_eq!(eval_fn(&n, &nats(&[0]), 10_000).unwrap(), Some(Nat::ZERO));
    }
}
