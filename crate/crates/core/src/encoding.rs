//! Goedel numbering of kernel programs.
//!
//! A program's code is `5 * m + tag`:
//!
//! | tag | statement              | payload `m`                 |
//! |-----|------------------------|-----------------------------|
//! | 0   | `xi := xj + c`         | `pair(i, pair(j, c))`       |
//! | 1   | `xi := xj - c`         | `pair(i, pair(j, c))`       |
//! | 2   | `P; Q`                 | `pair(code P, code Q)`      |
//! | 3   | `loop xi do P end`     | `pair(i, code P)`           |
//! | 4   | `while xi /= 0 do P end` | `pair(i, code P)`         |
//!
//! Every natural decodes to exactly one kernel program.

use num_bigint::BigUint;

use crate::nat::Nat;
use crate::syntax::{head, Program, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("cannot encode sugar `{0}`; desugar the program first")]
    Sugar(String),
}

/// Cantor pairing `(a + b)(a + b + 1) / 2 + b`.
pub fn pair(a: &Nat, b: &Nat) -> Nat {
    if let (Some(a), Some(b)) = (a.to_u64(), b.to_u64()) {
        let s = a as u128 + b as u128;
        if let Some(v) = s.checked_mul(s + 1) {
            let v = v / 2 + b as u128;
            if let Ok(v) = u64::try_from(v) {
                return Nat::small(v);
            }
            return Nat::from_big(BigUint::from(v));
        }
    }
    let s = a.to_big() + b.to_big();
    let t = (&s * (&s + 1u32)) >> 1u32;
    Nat::from_big(t + b.to_big())
}

/// Inverse of [`pair`].
pub fn unpair(n: &Nat) -> (Nat, Nat) {
    if let Some(n) = n.to_u64() {
        let n = n as u128;
        let w = ((8 * n + 1).isqrt() - 1) / 2;
        let b = n - w * (w + 1) / 2;
        return (Nat::small((w - b) as u64), Nat::small(b as u64));
    }
    let n = n.to_big();
    let w: BigUint = (((&n << 3u32) + 1u32).sqrt() - 1u32) >> 1u32;
    let t = (&w * (&w + 1u32)) >> 1u32;
    let b = n - t;
    let a = w - &b;
    (Nat::from_big(a), Nat::from_big(b))
}

fn tagged(m: Nat, tag: u64) -> Nat {
    m.mul(&Nat::small(5)).add_u64(tag)
}

/// Code of a kernel program.
pub fn encode(p: &Program) -> Result<Nat, EncodeError> {
    Ok(match p {
        Program::AddAssign { target, source, c } => {
            tagged(pair(target.index(), &pair(source.index(), c)), 0)
        }
        Program::SubAssign { target, source, c } => {
            tagged(pair(target.index(), &pair(source.index(), c)), 1)
        }
        Program::Seq(a, b) => tagged(pair(&encode(a)?, &encode(b)?), 2),
        Program::Loop { guard, body } => tagged(pair(guard.index(), &encode(body)?), 3),
        Program::While { guard, body } => tagged(pair(guard.index(), &encode(body)?), 4),
        sugar => return Err(EncodeError::Sugar(head(sugar))),
    })
}

/// The program named by `n`. Total: every natural is a code.
pub fn decode(n: &Nat) -> Program {
    let (m, tag) = match n.to_u64() {
        Some(v) => (Nat::small(v / 5), v % 5),
        None => {
            let big = n.to_big();
            let tag = (&big % 5u32).to_u64_digits().first().copied().unwrap_or(0);
            (Nat::from_big(big / 5u32), tag)
        }
    };
    let (l, r) = unpair(&m);
    match tag {
        0 | 1 => {
            let (j, c) = unpair(&r);
            let (t, s) = (Var::from_nat(l), Var::from_nat(j));
            if tag == 0 {
                Program::add(t, s, c)
            } else {
                Program::sub(t, s, c)
            }
        }
        2 => Program::seq(decode(&l), decode(&r)),
        3 => Program::looping(Var::from_nat(l), decode(&r)),
        _ => Program::while_nonzero(Var::from_nat(l), decode(&r)),
    }
}

/// Approximate `log2(n + 1)`.
fn log2_plus_one(n: &Nat) -> f64 {
    match n.to_u64() {
        Some(v) => (v as f64 + 1.0).log2(),
        None => {
            let big = n.to_big();
            let bits = big.bits();
            let top = (&big >> (bits - 53)).to_u64_digits()[0] as f64;
            top.log2() + (bits - 53) as f64
        }
    }
}

/// `log2` of a tagged pair code, given `log2` of its two components.
fn log2_tagged_pair(la: f64, lb: f64) -> f64 {
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    let sum = hi + (1.0 + (lo - hi).exp2()).log2();
    2.0 * sum - 1.0 + 5f64.log2()
}

/// Regroups every sequence of `p` to keep its code small.
///
/// Each level of pairing roughly doubles a code's bit length, so the way a
/// long statement list is bracketed decides whether its code has thousands
/// or astronomically many digits. This merges neighbouring statements
/// greedily, always joining the adjacent pair with the smallest estimated
/// code. Statement order, behaviour and step counts are unchanged.
pub fn compact(p: &Program) -> Program {
    compact_sized(p).0
}

/// Estimated bit length of `encode(p)` without computing it. Infinite for
/// sugar.
pub fn estimated_code_bits(p: &Program) -> f64 {
    match p {
        Program::Seq(a, b) => log2_tagged_pair(estimated_code_bits(a), estimated_code_bits(b)),
        Program::Loop { guard, body } | Program::While { guard, body } => {
            log2_tagged_pair(log2_plus_one(guard.index()), estimated_code_bits(body))
        }
        leaf => encode(leaf).map_or(f64::INFINITY, |c| log2_plus_one(&c)),
    }
}

fn compact_sized(p: &Program) -> (Program, f64) {
    match p {
        Program::Seq(..) => {
            let mut items: Vec<(Program, f64)> = p.statements().into_iter().map(compact_sized).collect();
            while items.len() > 1 {
                let best = (0..items.len() - 1)
                    .min_by(|&i, &j| {
                        let ci = log2_tagged_pair(items[i].1, items[i + 1].1);
                        let cj = log2_tagged_pair(items[j].1, items[j + 1].1);
                        ci.total_cmp(&cj)
                    })
                    .expect("at least two items");
                let (b, lb) = items.remove(best + 1);
                let (a, la) = std::mem::replace(&mut items[best], (Program::Skip, 0.0));
                items[best] = (Program::seq(a, b), log2_tagged_pair(la, lb));
            }
            items.pop().expect("sequences are non-empty")
        }
        Program::Loop { guard, body } | Program::While { guard, body } => {
            let (body, lb) = compact_sized(body);
            let size = log2_tagged_pair(log2_plus_one(guard.index()), lb);
            let node = match p {
                Program::Loop { .. } => Program::looping(guard.clone(), body),
                _ => Program::while_nonzero(guard.clone(), body),
            };
            (node, size)
        }
        Program::If { guard, then_branch, else_branch } => {
            let node = Program::if_zero(guard.clone(), compact(then_branch), compact(else_branch));
            (node, f64::INFINITY)
        }
        leaf => {
            let size = encode(leaf).map_or(f64::INFINITY, |c| log2_plus_one(&c));
            (leaf.clone(), size)
        }
    }
}
