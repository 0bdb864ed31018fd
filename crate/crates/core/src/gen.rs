//! Seeded random programs for property tests and benchmarks.
//!
//! All generators are driven by ChaCha8, so a seed names the same program
//! on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::nat::Nat;
use crate::syntax::{x, Program, Var};

pub struct ProgramGen {
    rng: ChaCha8Rng,
}

impl ProgramGen {
    pub fn new(seed: u64) -> ProgramGen {
        ProgramGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn var(&mut self) -> Var {
        if self.rng.gen_ratio(1, 20) {
            x(self.rng.gen_range(11..1000))
        } else {
            x(self.rng.gen_range(0..=10))
        }
    }

    fn constant(&mut self) -> Nat {
        match self.rng.gen_range(0..20) {
            0 => Nat::from(self.rng.gen::<u64>()).mul(&Nat::from(self.rng.gen::<u64>())),
            1 => Nat::from(self.rng.gen::<u64>()),
            _ => Nat::small(self.rng.gen_range(0..=5)),
        }
    }

    /// Any program, sugar included, nested at most `depth` levels.
    pub fn program(&mut self, depth: u32) -> Program {
        self.tree(depth, true)
    }

    /// A kernel program nested at most `depth` levels.
    pub fn kernel(&mut self, depth: u32) -> Program {
        self.tree(depth, false)
    }

    fn tree(&mut self, depth: u32, sugar: bool) -> Program {
        let leaf_kinds = if sugar { 5 } else { 2 };
        if depth == 0 || self.rng.gen_ratio(2, 5) {
            return match self.rng.gen_range(0..leaf_kinds) {
                0 => Program::add(self.var(), self.var(), self.constant()),
                1 => Program::sub(self.var(), self.var(), self.constant()),
                2 => Program::constant(self.var(), self.constant()),
                3 => Program::copy(self.var(), self.var()),
                _ => Program::Skip,
            };
        }
        let kinds = if sugar { 4 } else { 3 };
        match self.rng.gen_range(0..kinds) {
            0 => Program::seq(self.tree(depth - 1, sugar), self.tree(depth - 1, sugar)),
            1 => Program::looping(self.var(), self.tree(depth - 1, sugar)),
            2 => Program::while_nonzero(self.var(), self.tree(depth - 1, sugar)),
            _ => Program::if_zero(self.var(), self.tree(depth - 1, sugar), self.tree(depth - 1, sugar)),
        }
    }

    /// A FOR program over `x0..x6` with at most `max_size` nodes and `depth`
    /// nested loops.
    ///
    /// Loop guards are taken from the inputs `x1..x3`, which are never
    /// assigned. Without that restriction four nested loops over growing
    /// variables can produce values like `2^2^2^n`, and such programs halt
    /// only in theory.
    pub fn for_program(&mut self, depth: u32, max_size: usize) -> Program {
        let mut budget = max_size.max(1);
        self.for_tree(depth, &mut budget)
    }

    /// Builds a statement using at most `budget` nodes, charging what it uses.
    fn for_tree(&mut self, depth: u32, budget: &mut usize) -> Program {
        if depth == 0 || *budget < 4 || self.rng.gen_ratio(1, 3) {
            *budget -= 1;
            let t = if self.rng.gen_bool(0.5) { x(0) } else { x(self.rng.gen_range(4..=6)) };
            let s = x(self.rng.gen_range(0..=6));
            let c = self.rng.gen_range(0..=3u64);
            return if self.rng.gen_bool(0.6) { Program::add(t, s, c) } else { Program::sub(t, s, c) };
        }
        if self.rng.gen_bool(0.5) {
            // A sequence node per extra statement.
            let n = self.rng.gen_range(2..=4);
            let mut parts = vec![];
            for _ in 0..n {
                if *budget < 2 && !parts.is_empty() {
                    break;
                }
                if !parts.is_empty() {
                    *budget -= 1;
                }
                parts.push(self.for_tree(depth, budget));
            }
            Program::seq_all(parts)
        } else {
            *budget -= 1;
            let guard = x(self.rng.gen_range(1..=3));
            Program::looping(guard, self.for_tree(depth - 1, budget))
        }
    }
}
