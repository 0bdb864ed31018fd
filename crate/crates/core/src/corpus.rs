//! A library of reference programs.
//!
//! Most entries are text files under `corpus/`: `.loop` files stay inside
//! the FOR fragment once desugared, `.while` files may use `while`, and
//! `.rec` files hold recursion schemata that are compiled on demand. Text
//! programs declare their arity in a `# arity: N` header line. The
//! Ackermann program is generated, since it needs list-manipulation code
//! that is tedious to write by hand.

use std::sync::OnceLock;

use crate::syntax::{parse, x, Program, Var};
use crate::transforms::{compile_recursive, parse_schema, RecSchema};
use crate::universal::{block, Builder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Loop,
    While,
    Rec,
}

#[derive(Debug, Clone, Copy)]
enum Source {
    Text(&'static str),
    Built(fn() -> Program),
}

/// One corpus program.
#[derive(Debug, Clone)]
pub struct Entry {
    /// File name, such as `add.loop`.
    pub name: &'static str,
    pub kind: Kind,
    pub arity: usize,
    source: Source,
}

impl Entry {
    /// The file text, or `None` for generated entries.
    pub fn text(&self) -> Option<&'static str> {
        match self.source {
            Source::Text(t) => Some(t),
            Source::Built(_) => None,
        }
    }

    pub fn schema(&self) -> Option<RecSchema> {
        match (self.kind, self.source) {
            (Kind::Rec, Source::Text(t)) => Some(parse_schema(t).expect("corpus schemata parse")),
            _ => None,
        }
    }

    pub fn program(&self) -> Program {
        match self.source {
            Source::Built(build) => build(),
            Source::Text(t) if self.kind == Kind::Rec => {
                compile_recursive(&parse_schema(t).expect("corpus schemata parse")).expect("corpus schemata compile")
            }
            Source::Text(t) => parse(t).expect("corpus programs parse"),
        }
    }
}

macro_rules! corpus_files {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../corpus/", $file)))),*]
    };
}

const FILES: &[(&str, &str)] = corpus_files![
    "absdiff.loop",
    "add.loop",
    "add.rec",
    "collatz.while",
    "countdown.while",
    "div.loop",
    "div.while",
    "diverge.while",
    "double.loop",
    "equal.loop",
    "exp.loop",
    "exp.rec",
    "factorial.loop",
    "fib.loop",
    "gcd.while",
    "half.loop",
    "is_zero.loop",
    "isqrt.while",
    "log2.while",
    "max.loop",
    "min.loop",
    "mod.loop",
    "monus.loop",
    "monus.rec",
    "mult.loop",
    "mult.rec",
    "parity.loop",
    "pow2.loop",
    "pred.loop",
    "pred.rec",
    "select.loop",
    "sign.loop",
    "skip.loop",
    "snapshot.loop",
    "spin.while",
    "sqrt_ceil.rec",
    "square.loop",
    "triangle.loop",
];

/// The `N` of a `# arity: N` header line, if present.
pub fn declared_arity(text: &str) -> Option<usize> {
    text.lines().find_map(|l| l.trim().strip_prefix("# arity:")).and_then(|n| n.trim().parse().ok())
}

/// Every corpus program, sorted by name.
pub fn entries() -> &'static [Entry] {
    static ENTRIES: OnceLock<Vec<Entry>> = OnceLock::new();
    ENTRIES.get_or_init(|| {
        let mut all: Vec<Entry> = FILES
            .iter()
            .map(|&(name, text)| {
                let kind = match name.rsplit('.').next() {
                    Some("loop") => Kind::Loop,
                    Some("while") => Kind::While,
                    _ => Kind::Rec,
                };
                let arity = match kind {
                    Kind::Rec => parse_schema(text).and_then(|s| s.arity()).expect("corpus schemata parse"),
                    _ => declared_arity(text).unwrap_or_else(|| panic!("{name} lacks an arity header")),
                };
                Entry { name, kind, arity, source: Source::Text(text) }
            })
            .collect();
        all.push(Entry { name: "ackermann.while", kind: Kind::While, arity: 2, source: Source::Built(ackermann_program) });
        all.sort_by_key(|e| e.name);
        all
    })
}

pub fn entry(name: &str) -> Option<&'static Entry> {
    entries().iter().find(|e| e.name == name)
}

fn named(name: &str) -> Program {
    entry(name).expect("known corpus entry").program()
}

/// `x1 + x2`.
pub fn add_program() -> Program {
    named("add.loop")
}

/// `x1 * x2`.
pub fn mult_program() -> Program {
    named("mult.loop")
}

/// `x1 - 1`, truncated.
pub fn pred_program() -> Program {
    named("pred.loop")
}

/// `x1 - x2`, truncated.
pub fn monus_program() -> Program {
    named("monus.loop")
}

/// `x1 ^ x2`.
pub fn exp_program() -> Program {
    named("exp.loop")
}

/// Rows of the Ackermann iteration kept in registers; higher rows live in a
/// list.
const ACK_CACHED_ROWS: usize = 4;

/// Ackermann's function `A(x1, x2)`.
///
/// Uses the Grossman-Zeitman iteration. Row `i <= m` holds counters
/// `next_i` and `goal_i`, with an infinite goal on the top row `m`. Every
/// round sets `value = next_0 + 1` and walks up from row 0: a row whose
/// `next` has reached its `goal` takes `goal := value` and passes the walk
/// on, and every visited row bumps its `next`. The run stops once `next_m`
/// reaches `n + 1`; `value` is then `A(m, n)`.
///
/// Comparing two counters costs as many steps as they are large, so the
/// cached rows instead track `e_i = goal_i - next_i` and
/// `d_i = next_0 - next_i`. A row hit in the current round gets
/// `goal_i = value = next_0`, hence `e_i := d_i` after its bump. Rows above
/// the cache store `(next_i, goal_i)` pairs in a list and compare directly.
pub fn ackermann_program() -> Program {
    const K: usize = ACK_CACHED_ROWS;
    let (m, n, out) = (x(1), x(2), x(0));
    let mut b = Builder::new(3);
    let e: Vec<Var> = (0..K).map(|_| b.reg()).collect();
    let d: Vec<Var> = (0..K).map(|_| b.reg()).collect();
    let [next0, value, going, remaining, spill, idx, left, entry, cur_n, cur_g, gap, gap2, count, zero_v, one_v] =
        b.regs();

    let (tops, top) = b.one_hot(&m, K);
    let mut init = vec![tops];
    for i in 0..K {
        init.push(b.set(&e[i], 1));
        init.push(b.set(&d[i], 0));
    }
    init.push(b.set(&next0, 0));
    init.push(Program::add(remaining.clone(), n.clone(), 1u64));
    init.push(b.set(&zero_v, 0));
    init.push(b.set(&one_v, 1));
    init.push(b.pair(&entry, &zero_v, &one_v));
    init.push(b.set(&spill, 0));
    init.push(Program::sub(count.clone(), m.clone(), (K - 1) as u64));
    let push_row = b.pair(&spill, &entry, &spill);
    init.push(Program::looping(count.clone(), push_row));

    let finish = |b: &Builder| block(vec![b.dec(&remaining), b.set(&going, 0)]);

    // Row 0 is visited every round; its bump raises every d_i.
    let mut row0 = vec![Program::add(value.clone(), next0.clone(), 1u64), b.set(&going, 1), b.inc(&next0)];
    row0.extend(d[1..].iter().map(|v| b.inc(v)));
    let miss0 = block(vec![b.dec(&e[0]), b.set(&going, 0)]);
    let hit0 = b.set(&e[0], 0);
    let not_top0 = b.if_else(&e[0], miss0, hit0);
    row0.push(b.if_else(&top[0], finish(&b), not_top0));

    let mut rows = vec![block(row0)];
    for i in 1..K {
        let miss = block(vec![b.dec(&e[i]), b.dec(&d[i]), b.set(&going, 0)]);
        let hit = block(vec![b.dec(&d[i]), b.copy(&e[i], &d[i])]);
        let not_top = b.if_else(&e[i], miss, hit);
        let visit = b.if_else(&top[i], finish(&b), not_top);
        rows.push(b.when_nonzero(&going, visit));
    }

    // Rows above the cache, visited while the walk keeps going.
    let fetch = block(vec![b.list_get(&entry, &spill, &idx), b.unpair(&cur_n, &cur_g, &entry)]);
    let compare = block(vec![b.monus(&gap, &cur_n, &cur_g), b.monus(&gap2, &cur_g, &cur_n), b.add_to(&gap, &gap2)]);
    let take = b.copy(&cur_g, &value);
    let stop = b.set(&going, 0);
    let hit_or_stop = b.if_else(&gap, stop, take);
    let not_top = block(vec![compare, hit_or_stop]);
    let visit = b.if_else(&left, not_top, finish(&b));
    let store = block(vec![b.pair(&entry, &cur_n, &cur_g), b.list_set(&spill, &idx, &entry)]);
    rows.push(block(vec![b.set(&idx, 0), Program::sub(left.clone(), m.clone(), K as u64)]));
    rows.push(Program::while_nonzero(
        going.clone(),
        block(vec![fetch, visit, b.inc(&cur_n), store, b.inc(&idx), b.dec(&left)]),
    ));

    block(vec![block(init), Program::while_nonzero(remaining.clone(), block(rows)), b.copy(&out, &value)])
}

/// Small kernel programs whose codes stay below 10^9, used to check the
/// universal program against direct execution.
pub fn universality_suite() -> Vec<Program> {
    [
        "x0 := x0 + 0",
        "x0 := x1 + 0",
        "x0 := x1 + 1",
        "x0 := x1 - 1",
        "x0 := x1 + 0; x0 := x0 + 1",
        "loop x1 do x0 := x0 + 1 end",
        "loop x1 do x0 := x0 + 2 end",
        "while x1 /= 0 do x1 := x1 - 1 end",
        "while x1 /= 0 do x1 := x1 + 1 end",
        "while x1 /= 0 do x0 := x0 + 0 end",
        "x0 := x1 + 0; loop x1 do x0 := x0 + 1 end",
        "loop x1 do loop x1 do x0 := x0 + 1 end end",
    ]
    .iter()
    .map(|s| parse(s).expect("suite programs parse"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval_fn, nats};
    use crate::syntax::{is_for, is_kernel};
    use crate::transforms::desugar;

    #[test]
    fn corpus_is_large_enough_and_loads() {
        assert!(entries().len() >= 30);
        for e in entries() {
            let p = e.program();
            if e.kind == Kind::Loop {
                assert!(is_for(&desugar(&p)), "{} leaves the FOR fragment", e.name);
            }
        }
    }

    #[test]
    fn schemata_match_their_evaluator() {
        for e in entries().iter().filter(|e| e.kind == Kind::Rec) {
            let s = e.schema().unwrap();
            let p = e.program();
            for a in 0..=3u64 {
                for b in 0..=3u64 {
                    let args = nats(&[a, b][..e.arity]);
                    let want = s.evaluate(&args, 100);
                    assert_eq!(eval_fn(&p, &args, 1_000_000u64).unwrap(), want, "{} on {args:?}", e.name);
                }
            }
        }
    }

    #[test]
    fn ackermann_small_values() {
        let p = ackermann_program();
        assert!(is_kernel(&p));
        let expect: [[u64; 4]; 4] = [[1, 2, 3, 4], [2, 3, 4, 5], [3, 5, 7, 9], [5, 13, 29, 61]];
        for (m, row) in expect.iter().enumerate() {
            for (n, &v) in row.iter().enumerate() {
                let got = eval_fn(&p, &nats(&[m as u64, n as u64]), 10_000_000u64).unwrap();
                assert_eq!(got, Some(v.into()), "A({m}, {n})");
            }
        }
        assert_eq!(eval_fn(&p, &nats(&[4, 0]), 10_000_000u64).unwrap(), Some(13u64.into()));
    }

    #[test]
    fn suite_codes_are_small() {
        for p in universality_suite() {
            let c = crate::encoding::encode(&p).unwrap();
            assert!(c.to_u64().is_some_and(|c| c < 1_000_000_000), "{p}");
        }
    }
}
