use crate::syntax::{max_var, Program, Var};

/// Allocates fresh variables above a program's highest index, in the order
/// they are requested.
#[derive(Debug, Clone)]
pub(crate) struct Fresh {
    next: Var,
}

impl Fresh {
    /// Fresh variables start at `max_var(p) + 1`.
    pub(crate) fn above(p: &Program) -> Fresh {
        Fresh { next: Var::from_nat(max_var(p)).offset(1) }
    }

    pub(crate) fn take(&mut self) -> Var {
        let v = self.next.clone();
        self.next = self.next.offset(1);
        v
    }
}

struct Desugarer {
    zero: Var,
    fresh: Fresh,
}

impl Desugarer {
    /// Zero-iteration loop over the always-zero variable: costs exactly 1.
    fn idle_loop(&self) -> Program {
        Program::looping(self.zero.clone(), Program::add(self.zero.clone(), self.zero.clone(), 0u64))
    }

    fn set(&self, v: &Var, c: u64) -> Program {
        Program::add(v.clone(), self.zero.clone(), c)
    }

    /// Kernel form of `p`, or `None` when `p` does nothing at zero cost.
    fn go(&mut self, p: &Program) -> Option<Program> {
        match p {
            Program::AddAssign { .. } | Program::SubAssign { .. } => Some(p.clone()),
            Program::ConstAssign { target, c } => {
                Some(Program::add(target.clone(), self.zero.clone(), c.clone()))
            }
            Program::CopyAssign { target, source } => Some(Program::add(target.clone(), source.clone(), 0u64)),
            Program::Skip => None,
            Program::Seq(..) => {
                let (lefts, last) = p.spine();
                let mut parts: Vec<Program> = lefts.into_iter().filter_map(|s| self.go(s)).collect();
                let last = self.go(last).or_else(|| parts.pop())?;
                Some(Program::from_spine(parts, last))
            }
            Program::Loop { guard, body } => Some(match self.go(body) {
                Some(body) => Program::looping(guard.clone(), body),
                // The entry charge is all a loop with an empty body costs.
                None => self.idle_loop(),
            }),
            Program::While { guard, body } => {
                let body = self.go(body).unwrap_or_else(|| self.idle_loop());
                Some(Program::while_nonzero(guard.clone(), body))
            }
            Program::If { guard, then_branch, else_branch } => {
                let then_flag = self.fresh.take();
                let else_flag = self.fresh.take();
                let then_part = match self.go(then_branch) {
                    Some(q) => Program::looping(then_flag.clone(), q),
                    None => self.idle_loop(),
                };
                let else_part = match self.go(else_branch) {
                    Some(q) => Program::looping(else_flag.clone(), q),
                    None => self.idle_loop(),
                };
                Some(Program::seq_all([
                    self.set(&then_flag, 1),
                    Program::looping(guard.clone(), self.set(&then_flag, 0)),
                    self.set(&else_flag, 1),
                    Program::looping(then_flag.clone(), self.set(&else_flag, 0)),
                    then_part,
                    else_part,
                ]))
            }
        }
    }
}

/// Rewrites every sugar node into kernel statements.
///
/// `x_{m+1}` (where `m = max_var(p)`) serves as an always-zero source; each
/// `if` takes two further fresh flag variables, allocated in pre-order.
/// Outputs and step counts are preserved, except that a program consisting
/// only of `skip` becomes a zero-iteration loop costing one step: every
/// kernel statement costs at least one.
///
/// The fresh variables are only guaranteed to start at zero when no input
/// lands above `x_m`. A program that ignores its last inputs should mention
/// them somewhere, for instance as `x3 := x3 + 0`.
pub fn desugar(p: &Program) -> Program {
    let mut fresh = Fresh::above(p);
    let zero = fresh.take();
    let mut d = Desugarer { zero, fresh };
    d.go(p).unwrap_or_else(|| d.idle_loop())
}
