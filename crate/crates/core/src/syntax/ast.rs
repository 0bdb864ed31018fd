use std::fmt;

use crate::nat::Nat;

/// A program variable `x<i>`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Nat);

impl Var {
    pub const fn new(index: u64) -> Var {
        Var(Nat::small(index))
    }

    pub fn from_nat(index: Nat) -> Var {
        Var(index)
    }

    pub fn index(&self) -> &Nat {
        &self.0
    }

    /// The variable `offset` positions after this one.
    pub fn offset(&self, offset: u64) -> Var {
        Var(self.0.add_u64(offset))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shorthand for `Var::new`.
pub const fn x(index: u64) -> Var {
    Var::new(index)
}

/// Abstract syntax of LOOP/WHILE programs.
///
/// The first five variants form the kernel; the rest are sugar that
/// [`desugar`](crate::transforms::desugar) eliminates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Program {
    /// `target := source + c`
    AddAssign { target: Var, source: Var, c: Nat },
    /// `target := source - c`, truncated at zero.
    SubAssign { target: Var, source: Var, c: Nat },
    Seq(Box<Program>, Box<Program>),
    /// `loop guard do body end`: runs `body` as many times as `guard` held on entry.
    Loop { guard: Var, body: Box<Program> },
    /// `while guard /= 0 do body end`
    While { guard: Var, body: Box<Program> },
    /// `target := c`
    ConstAssign { target: Var, c: Nat },
    /// `target := source`
    CopyAssign { target: Var, source: Var },
    /// `if guard = 0 then then_branch else else_branch end`
    If { guard: Var, then_branch: Box<Program>, else_branch: Box<Program> },
    Skip,
}

impl Program {
    pub fn add(target: Var, source: Var, c: impl Into<Nat>) -> Program {
        Program::AddAssign { target, source, c: c.into() }
    }

    pub fn sub(target: Var, source: Var, c: impl Into<Nat>) -> Program {
        Program::SubAssign { target, source, c: c.into() }
    }

    pub fn seq(first: Program, second: Program) -> Program {
        Program::Seq(Box::new(first), Box::new(second))
    }

    pub fn looping(guard: Var, body: Program) -> Program {
        Program::Loop { guard, body: Box::new(body) }
    }

    pub fn while_nonzero(guard: Var, body: Program) -> Program {
        Program::While { guard, body: Box::new(body) }
    }

    pub fn constant(target: Var, c: impl Into<Nat>) -> Program {
        Program::ConstAssign { target, c: c.into() }
    }

    pub fn copy(target: Var, source: Var) -> Program {
        Program::CopyAssign { target, source }
    }

    pub fn if_zero(guard: Var, then_branch: Program, else_branch: Program) -> Program {
        Program::If {
            guard,
            then_branch: Box::new(then_branch),
            else_branch: Box::new(else_branch),
        }
    }

    /// Right-nested sequence of `parts`; `Skip` when empty.
    pub fn seq_all(parts: impl IntoIterator<Item = Program>) -> Program {
        let mut parts: Vec<Program> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Program::Skip;
        };
        while let Some(p) = parts.pop() {
            acc = Program::seq(p, acc);
        }
        acc
    }

    /// Balanced sequence tree over `parts`. Keeps nesting logarithmic, which
    /// matters for the size of Goedel numbers of large generated programs.
    pub fn seq_balanced(mut parts: Vec<Program>) -> Program {
        match parts.len() {
            0 => Program::Skip,
            1 => parts.pop().unwrap(),
            n => {
                let right = parts.split_off(n / 2);
                Program::seq(Program::seq_balanced(parts), Program::seq_balanced(right))
            }
        }
    }

    pub fn is_sugar_node(&self) -> bool {
        matches!(
            self,
            Program::ConstAssign { .. } | Program::CopyAssign { .. } | Program::If { .. } | Program::Skip
        )
    }

    /// Immediate sub-programs.
    pub fn children(&self) -> Vec<&Program> {
        match self {
            Program::Seq(a, b) => vec![a, b],
            Program::Loop { body, .. } | Program::While { body, .. } => vec![body],
            Program::If { then_branch, else_branch, .. } => vec![then_branch, else_branch],
            _ => Vec::new(),
        }
    }

    /// Visits every node in pre-order.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Program)) {
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            f(p);
            let kids = p.children();
            stack.extend(kids.into_iter().rev());
        }
    }

    /// Variables mentioned directly by this node (not its children).
    pub fn own_vars(&self) -> Vec<&Var> {
        match self {
            Program::AddAssign { target, source, .. }
            | Program::SubAssign { target, source, .. }
            | Program::CopyAssign { target, source } => vec![target, source],
            Program::Loop { guard, .. } | Program::While { guard, .. } | Program::If { guard, .. } => {
                vec![guard]
            }
            Program::ConstAssign { target, .. } => vec![target],
            Program::Seq(..) | Program::Skip => Vec::new(),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Splits a right-nested sequence `Seq(a1, Seq(a2, .. last))` into its
    /// left operands and final element. Non-sequences have an empty spine.
    pub fn spine(&self) -> (Vec<&Program>, &Program) {
        let mut lefts = Vec::new();
        let mut cur = self;
        while let Program::Seq(a, b) = cur {
            lefts.push(a.as_ref());
            cur = b;
        }
        (lefts, cur)
    }

    /// Rebuilds a right-nested sequence from [`spine`](Program::spine) parts.
    pub fn from_spine(lefts: Vec<Program>, last: Program) -> Program {
        lefts.into_iter().rev().fold(last, |acc, l| Program::seq(l, acc))
    }

    /// Flattens nested `Seq` nodes into their statement list, left to right.
    pub fn statements(&self) -> Vec<&Program> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            match p {
                Program::Seq(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                other => out.push(other),
            }
        }
        out
    }
}

/// True iff no sugar node occurs.
pub fn is_kernel(p: &Program) -> bool {
    let mut ok = true;
    p.walk(&mut |n| ok &= !n.is_sugar_node());
    ok
}

/// True iff `p` is kernel and contains no `While`.
pub fn is_for(p: &Program) -> bool {
    is_kernel(p) && count_while(p) == 0
}

/// True iff `p` has no `While` node; sugar is allowed. Equivalent to
/// `is_for(desugar(p))` since desugaring never introduces `While`.
pub fn is_while_free(p: &Program) -> bool {
    count_while(p) == 0
}

/// Largest variable index occurring in `p`, or 0 if none does.
pub fn max_var(p: &Program) -> Nat {
    let mut max = Nat::ZERO;
    p.walk(&mut |n| {
        for v in n.own_vars() {
            if *v.index() > max {
                max = v.index().clone();
            }
        }
    });
    max
}

pub fn count_while(p: &Program) -> usize {
    let mut n = 0;
    p.walk(&mut |q| n += usize::from(matches!(q, Program::While { .. })));
    n
}

pub fn count_loop(p: &Program) -> usize {
    let mut n = 0;
    p.walk(&mut |q| n += usize::from(matches!(q, Program::Loop { .. })));
    n
}
