use crate::syntax::Program;
use crate::transforms::{desugar, for_to_while, from_goto, to_goto};

/// Rewrites any program into an equivalent one with exactly one `while`.
///
/// The pipeline is `desugar`, then `for_to_while`, then a round trip
/// through the jump form. The remaining `loop`s are the dispatch flags and
/// zero tests introduced by [`from_goto`].
pub fn normalize_single_while(p: &Program) -> Program {
    let kernel = desugar(p);
    let whiles = for_to_while(&kernel).expect("desugared programs are kernel");
    let jumps = to_goto(&whiles).expect("for_to_while output has no loop");
    from_goto(&jumps).expect("to_goto emits valid labels")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::Nat;
    use crate::semantics::{eval_fn, nats};
    use crate::syntax::{count_while, parse};

    #[test]
    fn skip_normalizes_to_zero_output() {
        let n = normalize_single_while(&Program::Skip);
        assert_eq!(count_while(&n), 1);
        assert_eq!(eval_fn(&n, &[], 1000).unwrap(), Some(Nat::ZERO));
    }

    #[test]
    fn addition_keeps_its_value() {
        let add = parse("loop x1 do x0 := x0 + 1 end; loop x2 do x0 := x0 + 1 end").unwrap();
        let n = normalize_single_while(&add);
        assert_eq!(count_while(&n), 1);
        assert_eq!(eval_fn(&n, &nats(&[2, 3]), 100_000).unwrap(), Some(Nat::small(5)));
    }

    #[test]
    fn sugar_and_nested_whiles() {
        let p = parse(
            "x2 := x1; while x2 /= 0 do x2 := x2 - 1; x3 := x1; \
             while x3 /= 0 do x3 := x3 - 1; if x3 = 0 then x0 := x0 + 1 else skip end end end",
        )
        .unwrap();
        let n = normalize_single_while(&p);
        assert_eq!(count_while(&n), 1);
        for v in 0..=5u64 {
            assert_eq!(
                eval_fn(&n, &nats(&[v]), 1_000_000).unwrap(),
                eval_fn(&p, &nats(&[v]), 1_000_000).unwrap()
            );
        }
    }
}
