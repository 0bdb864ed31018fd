use super::*;
use crate::encoding::pair as pair_nat;
use crate::semantics::{eval_fn, nats, run, State};
use crate::syntax::{is_kernel, parse, x};

fn run_macro(name: &str, vars: &[Var], init: &[(u64, u64)]) -> (State, State) {
    let p = stdlib_macro(name, vars).unwrap();
    let mut inputs = vec![Nat::ZERO; 12];
    for (i, v) in init {
        inputs[*i as usize - 1] = Nat::small(*v);
    }
    let before = State::from_inputs(&inputs);
    let out = run(&p, &inputs, 10_000_000).unwrap();
    assert!(out.is_halted(), "macro {name} ran out of fuel");
    (before, out.state().clone())
}

/// Every variable up to the scratch area that is not in `vars` is unchanged.
fn assert_untouched(before: &State, after: &State, vars: &[Var]) {
    let high = vars.iter().map(|v| v.index().to_u64().unwrap()).max().unwrap();
    for i in 0..=high {
        if !vars.contains(&x(i)) {
            assert_eq!(before.get(&x(i)), after.get(&x(i)), "x{i} was modified");
        }
    }
}

#[test]
fn binary_macros_match_arithmetic() {
    type Op = fn(u64, u64) -> u64;
    let cases: [(&str, Op); 4] = [
        ("add", |a, b| a + b),
        ("monus", |a, b| a.saturating_sub(b)),
        ("mul", |a, b| a * b),
        ("pair", |a, b| pair_nat(&Nat::small(a), &Nat::small(b)).to_u64().unwrap()),
    ];
    let vars = [x(3), x(1), x(2)];
    for (name, oracle) in cases {
        for a in 0..=6 {
            for b in 0..=6 {
                let (before, after) = run_macro(name, &vars, &[(1, a), (2, b), (4, 77), (5, 5)]);
                assert_eq!(after.get(&x(3)), &Nat::small(oracle(a, b)), "{name}({a}, {b})");
                assert_untouched(&before, &after, &vars);
            }
        }
    }
}

#[test]
fn splitting_macros_match_arithmetic() {
    for n in 0..=60u64 {
        let vars = [x(4), x(2), x(1)];
        let (before, after) = run_macro("unpair", &vars, &[(1, n), (3, 9)]);
        let (a, b) = crate::encoding::unpair(&Nat::small(n));
        assert_eq!((after.get(&x(4)), after.get(&x(2))), (&a, &b), "unpair({n})");
        assert_untouched(&before, &after, &vars);

        let (_, after) = run_macro("tagsplit", &vars, &[(1, n)]);
        assert_eq!(after.get(&x(4)), &Nat::small(n % 5));
        assert_eq!(after.get(&x(2)), &Nat::small(n / 5));
    }
    for a in 0..=6u64 {
        for b in 0..=6u64 {
            let vars = [x(5), x(6), x(1), x(2)];
            let (before, after) = run_macro("divmod", &vars, &[(1, a), (2, b), (3, 3)]);
            let (q, r) = a.checked_div(b).map_or((0, a), |q| (q, a % b));
            assert_eq!((after.get(&x(5)), after.get(&x(6))), (&Nat::small(q), &Nat::small(r)));
            assert_untouched(&before, &after, &vars);
        }
    }
}

#[test]
fn small_macros() {
    let (_, after) = run_macro("zero", &[x(1)], &[(1, 9)]);
    assert!(after.get(&x(1)).is_zero());
    let (_, after) = run_macro("copy", &[x(2), x(1)], &[(1, 9)]);
    assert_eq!(after.get(&x(2)), &Nat::small(9));
    let (_, after) = run_macro("add", &[x(3), x(1), x(2)], &[(1, 2), (2, 3)]);
    assert_eq!(after.get(&x(3)), &Nat::small(5));
    let (_, after) = run_macro("pair", &[x(3), x(1), x(2)], &[(1, 1), (2, 2)]);
    assert_eq!(after.get(&x(3)), &Nat::small(8));
}

#[test]
fn outputs_may_alias_inputs_only_through_scratch() {
    assert_eq!(stdlib_macro("add", &[x(1), x(1), x(2)]), Err(MacroError::Collision(x(1))));
    assert_eq!(stdlib_macro("sqrt", &[x(1)]), Err(MacroError::Unknown("sqrt".into())));
    assert!(matches!(stdlib_macro("pair", &[x(1)]), Err(MacroError::WrongArity { .. })));
}

#[test]
fn macros_are_kernel_and_flag_their_loops() {
    for spec in MACROS {
        let vars: Vec<Var> = (1..=(spec.inputs + spec.outputs) as u64).map(x).collect();
        let p = stdlib_macro(spec.name, &vars).unwrap();
        assert!(is_kernel(&p));
        assert_eq!(crate::syntax::count_while(&p) > 0, spec.uses_while, "{}", spec.name);
    }
}

fn via_u(code: u64, input: u64, fuel: u64) -> Option<Nat> {
    let out = universal_executable().run(&nats(&[code, input]), fuel).unwrap();
    out.value().cloned()
}

#[test]
fn universal_runs_small_programs() {
    assert!(is_kernel(universal()));
    let copy = encode(&Program::add(x(0), x(1), 0u64)).unwrap().to_u64().unwrap();
    assert_eq!(via_u(copy, 4, 1_000_000), Some(Nat::small(4)));
    assert_eq!(via_u(0, 9, 1_000_000), Some(Nat::ZERO));
    let countdown = parse("while x1 /= 0 do x1 := x1 - 1 end").unwrap();
    let code = encode(&countdown).unwrap().to_u64().unwrap();
    assert_eq!(via_u(code, 3, 10_000_000), Some(Nat::ZERO));
}

#[test]
fn frames_spill_past_the_register_cache() {
    // With a single cached frame every `;` spills a frame and refills it.
    // Spilling squares the sizes involved, so only tiny codes stay cheap.
    let u = Executable::new(&build(Mode::Universal, 1));
    for src in ["x0 := x0 + 1; x0 := x0 + 0", "x0 := x1 + 1; (x0 := x0 + 0; x0 := x0 - 0)", "x0 := x1 + 2; x0 := x0 - 0"] {
        let p = parse(src).unwrap();
        let code = encode(&p).unwrap();
        for v in 0..=2u64 {
            let direct = eval_fn(&p, &nats(&[v]), None).unwrap();
            let out = u.run(&[code.clone(), Nat::small(v)], 100_000_000u64).unwrap();
            assert_eq!(out.value().cloned(), direct, "{src} on {v}");
        }
    }
}

#[test]
fn specialization_examples() {
    let add2 = parse("x0 := x1 + 0; loop x2 do x0 := x0 + 1 end").unwrap();
    let e = specialize(&encode(&add2).unwrap(), &Nat::small(2));
    assert_eq!(eval_fn(&decode(&e), &nats(&[3]), None).unwrap(), Some(Nat::small(5)));

    let proj1 = Program::add(x(0), x(1), 0u64);
    let e = specialize(&encode(&proj1).unwrap(), &Nat::small(7));
    assert_eq!(eval_fn(&decode(&e), &[], None).unwrap(), Some(Nat::small(7)));

    let ignores_x1 = parse("x0 := x2 + 3").unwrap();
    let e = specialize(&encode(&ignores_x1).unwrap(), &Nat::ZERO);
    for y in 0..5 {
        assert_eq!(eval_fn(&decode(&e), &nats(&[y]), None).unwrap(), Some(Nat::small(y + 3)));
    }
}

#[test]
fn diagonal_halts_on_a_self_diverging_code() {
    // 9 codes `while x1 /= 0 do x0 := x0 + 0 end`, which spins on input 9.
    let d = Executable::new(diagonal());
    assert!(d.run(&nats(&[9]), 1_000_000).unwrap().is_halted());
    // 0 codes `x0 := x0 + 0`, which halts, so the diagonal program spins.
    assert!(!d.run(&nats(&[0]), 1_000_000).unwrap().is_halted());
}
