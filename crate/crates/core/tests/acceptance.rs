//! Acceptance suite. Every criterion prints one PASS/FAIL line with its
//! measurements; the test fails if any criterion does.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use loopwhile::complexity::{growth_profile, steps};
use loopwhile::corpus::{
    ackermann_program, add_program, entries, entry, exp_program, monus_program, mult_program, pred_program,
    universality_suite, Kind,
};
use loopwhile::encoding::{compact, decode, encode};
use loopwhile::gen::ProgramGen;
use loopwhile::semantics::{eval_fn, nats, run, Fuel};
use loopwhile::syntax::{count_loop, count_while, parse, pretty, Program};
use loopwhile::transforms::{desugar, for_to_while, normalize_single_while};
use loopwhile::universal::{build_diagonal, specialize, universal_executable};
use loopwhile::Nat;

type Verdict = Result<String, String>;
type Criterion = fn() -> Verdict;

fn grid(arity: usize, hi: u64) -> Vec<Vec<Nat>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=hi).map(move |k| {
                    let mut w = v.clone();
                    w.push(Nat::small(k));
                    w
                })
            })
            .collect();
    }
    out
}

fn within(limit: Duration, started: Instant, detail: String) -> Verdict {
    let took = started.elapsed();
    if took <= limit {
        Ok(format!("{detail}; {took:.2?}"))
    } else {
        Err(format!("{detail}; took {took:.2?}, limit {limit:?}"))
    }
}

fn c1_round_trip() -> Verdict {
    let t = Instant::now();
    let mut g = ProgramGen::new(1);
    for i in 0..1000 {
        let p = g.program(6);
        let text = pretty(&p);
        match parse(&text) {
            Ok(q) if q == p => {}
            Ok(_) => return Err(format!("program {i} re-parses differently:\n{text}")),
            Err(e) => return Err(format!("program {i} does not re-parse: {e}\n{text}")),
        }
    }
    within(Duration::from_secs(5), t, "1000 random programs, depth <= 6".into())
}

fn c2_arithmetic() -> Verdict {
    let t = Instant::now();
    let big = |n: &Nat| n.to_big();
    type Oracle = fn(&[Nat]) -> Nat;
    let cases: Vec<(&str, Program, usize, u64, Oracle)> = vec![
        ("add.loop", add_program(), 2, 5, |a| a[0].add(&a[1])),
        ("mult.loop", mult_program(), 2, 5, |a| a[0].mul(&a[1])),
        ("pred.loop", pred_program(), 1, 5, |a| a[0].monus(&Nat::ONE)),
        ("monus.loop", monus_program(), 2, 5, |a| a[0].monus(&a[1])),
        ("exp.loop", exp_program(), 2, 3, |a| Nat::from_big(a[0].to_big().pow(a[1].to_u64().unwrap() as u32))),
        ("add.rec", entry("add.rec").unwrap().program(), 2, 5, |a| a[0].add(&a[1])),
        ("mult.rec", entry("mult.rec").unwrap().program(), 2, 5, |a| a[0].mul(&a[1])),
        ("pred.rec", entry("pred.rec").unwrap().program(), 1, 5, |a| a[0].monus(&Nat::ONE)),
        ("monus.rec", entry("monus.rec").unwrap().program(), 2, 5, |a| a[0].monus(&a[1])),
        ("exp.rec", entry("exp.rec").unwrap().program(), 2, 3, |a| Nat::from_big(a[0].to_big().pow(a[1].to_u64().unwrap() as u32))),
    ];
    let mut checked = 0;
    for (name, p, arity, hi, oracle) in cases {
        for args in grid(arity, hi) {
            let got = eval_fn(&p, &args, Fuel::Unbounded).map_err(|e| format!("{name}: {e}"))?;
            let want = oracle(&args);
            if got.as_ref().map(big) != Some(big(&want)) {
                return Err(format!("{name} on {args:?}: got {got:?}, want {want}"));
            }
            checked += 1;
        }
    }
    within(Duration::from_secs(10), t, format!("{checked} grid points over 10 programs"))
}

fn ackermann_oracle(m: u64, n: u64, memo: &mut HashMap<(u64, u64), u64>) -> u64 {
    if let Some(&v) = memo.get(&(m, n)) {
        return v;
    }
    let v = match (m, n) {
        (0, n) => n + 1,
        (m, 0) => ackermann_oracle(m - 1, 1, memo),
        (m, n) => {
            let inner = ackermann_oracle(m, n - 1, memo);
            ackermann_oracle(m - 1, inner, memo)
        }
    };
    memo.insert((m, n), v);
    v
}

fn c3_ackermann() -> Verdict {
    let mut memo = HashMap::new();
    let want = [(2, 3, ackermann_oracle(2, 3, &mut memo)), (3, 3, ackermann_oracle(3, 3, &mut memo))];
    let t = Instant::now();
    let p = ackermann_program();
    let mut detail = vec![];
    for (m, n, w) in want {
        let o = run(&p, &nats(&[m, n]), Fuel::Limited(10_000_000)).unwrap();
        match o.value() {
            Some(v) if *v == Nat::small(w) => detail.push(format!("A({m},{n}) = {w} in {} steps", o.steps())),
            other => return Err(format!("A({m},{n}): got {other:?}, oracle {w}")),
        }
    }
    within(Duration::from_secs(60), t, detail.join(", "))
}

fn c4_transforms() -> Verdict {
    let t = Instant::now();
    let fuel = Fuel::Limited(1_000_000);
    let all = entries();
    let failures: Vec<String> = all
        .par_iter()
        .flat_map_iter(|e| {
            let p = e.program();
            let d = desugar(&p);
            let w = for_to_while(&d).expect("desugared programs are kernel");
            let n = normalize_single_while(&p);
            let mut bad = vec![];
            for args in grid(e.arity, 5) {
                let want = eval_fn(&p, &args, fuel).unwrap();
                for (stage, q) in [("desugar", &d), ("for2while", &w), ("normalize", &n)] {
                    let got = eval_fn(q, &args, fuel).unwrap();
                    if got != want {
                        bad.push(format!("{} after {stage} on {args:?}: {got:?} vs {want:?}", e.name));
                    }
                }
            }
            bad
        })
        .collect();
    if all.len() < 30 {
        return Err(format!("only {} corpus programs", all.len()));
    }
    if let Some(f) = failures.first() {
        return Err(format!("{} disagreements, first: {f}", failures.len()));
    }
    within(Duration::from_secs(300), t, format!("{} programs x 3 stages on [0,5]^arity", all.len()))
}

fn c5_shapes() -> Verdict {
    for e in entries() {
        let p = e.program();
        let n = normalize_single_while(&p);
        if count_while(&n) != 1 {
            return Err(format!("{}: normal form has {} whiles", e.name, count_while(&n)));
        }
        let w = for_to_while(&desugar(&p)).unwrap();
        if count_loop(&w) != 0 {
            return Err(format!("{}: for_to_while left {} loops", e.name, count_loop(&w)));
        }
    }
    Ok(format!("{} programs", entries().len()))
}

fn c6_goedel() -> Verdict {
    let t = Instant::now();
    let mut g = ProgramGen::new(6);
    for i in 0..1000 {
        let p = g.kernel(6);
        let c = encode(&p).map_err(|e| e.to_string())?;
        if decode(&c) != p {
            return Err(format!("random kernel program {i} does not survive encode/decode"));
        }
    }
    for v in 0..=10_000u64 {
        if encode(&decode(&Nat::small(v))) != Ok(Nat::small(v)) {
            return Err(format!("encode(decode({v})) differs"));
        }
    }
    for _ in 0..100 {
        let v = Nat::small(g.rng().gen());
        if encode(&decode(&v)).as_ref() != Ok(&v) {
            return Err(format!("encode(decode({v})) differs"));
        }
    }
    within(Duration::from_secs(10), t, "1000 programs, n <= 10^4, 100 random u64".into())
}

fn c7_universality() -> Verdict {
    let t = Instant::now();
    let suite = universality_suite();
    let mut codes: Vec<(Nat, Program)> = suite.into_iter().map(|p| (encode(&p).unwrap(), p)).collect();
    codes.sort_by_key(|c| c.0.to_big());
    let largest = codes.len().saturating_sub(2);
    let results: Vec<Result<u64, String>> = codes
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, (code, p))| {
            let fuel = if i >= largest { 100_000_000 } else { 10_000_000 };
            (0..=3u64).map(move |x| {
                let direct = eval_fn(p, &[Nat::small(x)], fuel).unwrap();
                let o = universal_executable().run(&[code.clone(), Nat::small(x)], Fuel::Limited(fuel)).unwrap();
                if o.value().cloned() == direct {
                    Ok(if o.is_halted() { o.steps() } else { 0 })
                } else {
                    Err(format!("`{}` on {x}: U gives {:?}, direct {direct:?}", pretty(p).replace('\n', " "), o.value()))
                }
            })
        })
        .collect();
    let mut max_used = 0;
    for r in results {
        max_used = max_used.max(r?);
    }
    within(
        Duration::from_secs(600),
        t,
        format!("{} programs x 4 inputs; largest halting run used {max_used} steps", codes.len()),
    )
}

fn c8_smn() -> Verdict {
    let t = Instant::now();
    let pool: Vec<_> = entries().iter().filter(|e| e.arity == 2).collect();
    let mut g = ProgramGen::new(8);
    for _ in 0..50 {
        let e = pool[g.rng().gen_range(0..pool.len())];
        let (v, y) = (g.rng().gen_range(0..=5u64), g.rng().gen_range(0..=5u64));
        let p = compact(&desugar(&e.program()));
        let code = encode(&p).unwrap();
        let spec = decode(&specialize(&code, &Nat::small(v)));
        let lhs = eval_fn(&spec, &[Nat::small(y)], 1_000_000u64).unwrap();
        let rhs = eval_fn(&decode(&code), &nats(&[v, y]), 1_000_000u64).unwrap();
        if lhs != rhs {
            return Err(format!("{} with v={v}, y={y}: {lhs:?} vs {rhs:?}", e.name));
        }
    }
    within(Duration::from_secs(30), t, format!("50 triples over {} binary corpus programs", pool.len()))
}

fn c9_diagonal() -> Verdict {
    let t = Instant::now();
    let d = build_diagonal();
    let code = encode(&d).unwrap();
    let o = run(&d, std::slice::from_ref(&code), Fuel::Limited(1_000_000)).unwrap();
    if o.is_halted() {
        return Err(format!("D halted on its own code after {} steps", o.steps()));
    }
    within(Duration::from_secs(30), t, format!("fuel exhausted; code of D has {} digits", code.decimal_len()))
}

fn c10_for_totality() -> Verdict {
    let t = Instant::now();
    let mut g = ProgramGen::new(10);
    let programs: Vec<Program> = (0..500).map(|_| g.for_program(4, 50)).collect();
    let mut max_steps = 0;
    for p in &programs {
        for args in grid(2, 3) {
            let o = run(p, &args, Fuel::Unbounded).map_err(|e| e.to_string())?;
            if !o.is_halted() {
                return Err("unbounded run did not halt".into());
            }
            max_steps = max_steps.max(o.steps());
        }
    }
    within(Duration::from_secs(120), t, format!("500 programs x 16 inputs; max steps {max_steps}"))
}

fn c11_complexity() -> Verdict {
    let two = parse("x0 := x0 + 1; x0 := x0 + 1").unwrap();
    if steps(&two, &[], 10) != Some(2) {
        return Err("two increments do not cost 2".into());
    }
    let sizes: Vec<u64> = (0..=8).collect();
    let add = growth_profile(&add_program(), 2, &sizes, 1_000_000);
    let second = add.differences(2, 1).ok_or("uneven sizes")?;
    if second.iter().any(|&d| d != 0) {
        return Err(format!("add second differences {second:?}"));
    }
    let mult = growth_profile(&mult_program(), 2, &(0..=6).collect::<Vec<_>>(), 1_000_000);
    let fit = mult.exact_fit(2).ok_or("mult steps are not quadratic")?;
    if mult.exact_fit(1).is_some() {
        return Err("mult steps are affine".into());
    }
    let fit: Vec<String> = fit.iter().map(|c| c.to_string()).collect();
    Ok(format!("add affine, mult t(n) = {} + {} n + {} n^2", fit[0], fit[1], fit[2]))
}

#[test]
fn acceptance() {
    let criteria: [(&str, Criterion); 11] = [
        ("1 round-trip parsing", c1_round_trip),
        ("2 arithmetic corpus", c2_arithmetic),
        ("3 Ackermann in WHILE", c3_ackermann),
        ("4 transform preservation", c4_transforms),
        ("5 normal form shape", c5_shapes),
        ("6 Goedel bijection", c6_goedel),
        ("7 universality", c7_universality),
        ("8 s-m-n", c8_smn),
        ("9 diagonal demo", c9_diagonal),
        ("10 FOR totality", c10_for_totality),
        ("11 complexity exactness", c11_complexity),
    ];
    let mut failed = vec![];
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS [{name}] {detail}"),
            Err(detail) => {
                println!("FAIL [{name}] {detail}");
                failed.push(name);
            }
        }
    }
    // Loop-fragment corpus entries stay total in the growth profiles too.
    for e in entries().iter().filter(|e| e.kind == Kind::Loop) {
        let prof = growth_profile(&e.program(), e.arity, &[0, 1, 2, 3], 100_000_000);
        assert!(prof.rows.iter().all(|r| !r.exhausted), "{}", e.name);
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
