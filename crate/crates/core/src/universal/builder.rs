use crate::syntax::{Program, Var};

/// Emits kernel code over freshly allocated registers.
///
/// One register is reserved as a constant zero and is never written; it is
/// the source for every `v := c` assignment. Every helper initializes the
/// scratch registers it reads, so generated fragments may run many times
/// inside loops. Outputs are written only after all inputs have been read,
/// which makes it safe for an output to also be an input.
#[derive(Debug, Clone)]
pub struct Builder {
    zero: Var,
    next: u64,
}

/// Sequence of statements, kept as a balanced tree.
pub fn block(parts: Vec<Program>) -> Program {
    Program::seq_balanced(parts)
}

impl Builder {
    /// Allocates from `x(first_free)` upwards; that first register is zero.
    pub fn new(first_free: u64) -> Builder {
        Builder { zero: Var::new(first_free), next: first_free + 1 }
    }

    pub fn zero(&self) -> &Var {
        &self.zero
    }

    pub fn reg(&mut self) -> Var {
        let v = Var::new(self.next);
        self.next += 1;
        v
    }

    pub fn regs<const N: usize>(&mut self) -> [Var; N] {
        std::array::from_fn(|_| self.reg())
    }

    /// Index one past the highest register handed out so far.
    pub fn high_water(&self) -> u64 {
        self.next
    }

    pub fn set(&self, v: &Var, c: u64) -> Program {
        Program::add(v.clone(), self.zero.clone(), c)
    }

    pub fn copy(&self, dst: &Var, src: &Var) -> Program {
        Program::add(dst.clone(), src.clone(), 0u64)
    }

    pub fn inc(&self, v: &Var) -> Program {
        Program::add(v.clone(), v.clone(), 1u64)
    }

    pub fn dec(&self, v: &Var) -> Program {
        Program::sub(v.clone(), v.clone(), 1u64)
    }

    /// `dst := dst + src`, one step per unit of `src`.
    pub fn add_to(&self, dst: &Var, src: &Var) -> Program {
        Program::looping(src.clone(), self.inc(dst))
    }

    /// `dst := dst - src`, one step per unit of `src`.
    pub fn sub_from(&self, dst: &Var, src: &Var) -> Program {
        Program::looping(src.clone(), self.dec(dst))
    }

    /// Runs `body` once if `v` is non-zero. Constant overhead.
    pub fn when_nonzero(&mut self, v: &Var, body: Program) -> Program {
        let t = self.reg();
        block(vec![
            self.copy(&t, v),
            Program::while_nonzero(t.clone(), block(vec![self.set(&t, 0), body])),
        ])
    }

    /// Runs `body` once if `v` is zero. Constant overhead.
    pub fn when_zero(&mut self, v: &Var, body: Program) -> Program {
        self.branch(v, None, Some(body))
    }

    /// Runs `nonzero` or `zero` depending on `v`.
    pub fn if_else(&mut self, v: &Var, nonzero: Program, zero: Program) -> Program {
        self.branch(v, Some(nonzero), Some(zero))
    }

    fn branch(&mut self, v: &Var, nonzero: Option<Program>, zero: Option<Program>) -> Program {
        let [t, w] = self.regs();
        let mut first = vec![self.set(&w, 0), self.set(&t, 0)];
        first.extend(nonzero);
        let mut second = vec![self.set(&t, 0)];
        second.extend(zero);
        block(vec![
            self.set(&t, 1),
            self.copy(&w, v),
            Program::while_nonzero(w.clone(), block(first)),
            Program::while_nonzero(t.clone(), block(second)),
        ])
    }

    /// One-hot flags `g[k] = [v = k]` for `k < n`; all zero when `v >= n`.
    pub fn one_hot(&mut self, v: &Var, n: usize) -> (Program, Vec<Var>) {
        let [e, h] = self.regs();
        let flags: Vec<Var> = (0..n).map(|_| self.reg()).collect();
        let mut parts = vec![self.copy(&e, v), self.set(&h, 1)];
        for g in &flags {
            parts.push(self.set(g, 0));
            let hit = block(vec![self.copy(g, &h), self.set(&h, 0)]);
            parts.push(self.when_zero(&e, hit));
            parts.push(self.dec(&e));
        }
        (block(parts), flags)
    }

    /// `out := a + b`.
    pub fn add(&mut self, out: &Var, a: &Var, b: &Var) -> Program {
        let r = self.reg();
        block(vec![self.copy(&r, a), self.add_to(&r, b), self.copy(out, &r)])
    }

    /// `out := a - b`, truncated at zero.
    pub fn monus(&mut self, out: &Var, a: &Var, b: &Var) -> Program {
        let r = self.reg();
        block(vec![self.copy(&r, a), self.sub_from(&r, b), self.copy(out, &r)])
    }

    /// `out := a * b`.
    pub fn mul(&mut self, out: &Var, a: &Var, b: &Var) -> Program {
        let r = self.reg();
        block(vec![
            self.set(&r, 0),
            Program::looping(a.clone(), self.add_to(&r, b)),
            self.copy(out, &r),
        ])
    }

    /// `q := a div b`, `r := a mod b`; division by zero gives `q = 0`, `r = a`.
    pub fn divmod(&mut self, q_out: &Var, r_out: &Var, a: &Var, b: &Var) -> Program {
        let [q, r, e] = self.regs();
        // e = r + 1 - b is non-zero exactly when r >= b.
        let test = |bld: &Self| block(vec![Program::add(e.clone(), r.clone(), 1u64), bld.sub_from(&e, b)]);
        let divide = block(vec![
            test(self),
            Program::while_nonzero(
                e.clone(),
                block(vec![Program::sub(r.clone(), e.clone(), 1u64), self.inc(&q), test(self)]),
            ),
        ]);
        block(vec![
            self.copy(&r, a),
            self.set(&q, 0),
            self.when_nonzero(b, divide),
            self.copy(q_out, &q),
            self.copy(r_out, &r),
        ])
    }

    /// `out := pair(a, b) = T(a + b) + b` with `T(s) = s(s + 1) / 2`.
    /// Costs about as many steps as the result is large.
    pub fn pair(&mut self, out: &Var, a: &Var, b: &Var) -> Program {
        let [s, r, i] = self.regs();
        block(vec![
            self.copy(&s, a),
            self.add_to(&s, b),
            self.copy(&r, b),
            self.set(&i, 0),
            Program::looping(s.clone(), block(vec![self.inc(&i), self.add_to(&r, &i)])),
            self.copy(out, &r),
        ])
    }

    /// `(a, b) := unpair(n)`, walking the diagonals of the pairing. About
    /// `n` steps.
    pub fn unpair(&mut self, a_out: &Var, b_out: &Var, n: &Var) -> Program {
        let [t, d, w, e, a] = self.regs();
        // e = t + 1 - d is non-zero exactly when another full diagonal fits.
        let test = |bld: &Self| block(vec![Program::add(e.clone(), t.clone(), 1u64), bld.sub_from(&e, &d)]);
        block(vec![
            self.copy(&t, n),
            self.set(&d, 1),
            self.set(&w, 0),
            test(self),
            Program::while_nonzero(
                e.clone(),
                block(vec![Program::sub(t.clone(), e.clone(), 1u64), self.inc(&w), self.inc(&d), test(self)]),
            ),
            self.copy(&a, &w),
            self.sub_from(&a, &t),
            self.copy(b_out, &t),
            self.copy(a_out, &a),
        ])
    }

    /// `r := n mod 5`, `q := n div 5`. About `0.8 n` steps.
    pub fn tagsplit(&mut self, r_out: &Var, q_out: &Var, n: &Var) -> Program {
        let [t, q, a] = self.regs();
        block(vec![
            self.copy(&t, n),
            self.set(&q, 0),
            Program::sub(a.clone(), t.clone(), 4u64),
            Program::while_nonzero(
                a.clone(),
                block(vec![Program::sub(t.clone(), t.clone(), 5u64), self.inc(&q), Program::sub(a.clone(), t.clone(), 4u64)]),
            ),
            self.copy(q_out, &q),
            self.copy(r_out, &t),
        ])
    }

    /// `v := list[i]` for a list stored as nested pairs with a zero tail.
    pub fn list_get(&mut self, v: &Var, list: &Var, i: &Var) -> Program {
        let [t, junk] = self.regs();
        let step = self.unpair(&junk, &t, &t);
        let last = self.unpair(v, &junk, &t);
        block(vec![self.copy(&t, list), Program::looping(i.clone(), step), last])
    }

    /// `list[i] := v`, rebuilding the nested pairs in front of position `i`.
    pub fn list_set(&mut self, list: &Var, i: &Var, v: &Var) -> Program {
        let [t, heads, h, junk] = self.regs();
        let descend = block(vec![self.unpair(&h, &t, &t), self.pair(&heads, &h, &heads)]);
        let ascend = block(vec![self.unpair(&h, &heads, &heads), self.pair(&t, &h, &t)]);
        block(vec![
            self.copy(&t, list),
            self.set(&heads, 0),
            Program::looping(i.clone(), descend),
            self.unpair(&junk, &t, &t),
            self.pair(&t, v, &t),
            Program::looping(i.clone(), ascend),
            self.copy(list, &t),
        ])
    }
}
