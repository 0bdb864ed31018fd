//! Compile recursion schemata (primitive recursion and minimisation) into
//! programs and compare them with the direct evaluator.

use loopwhile::semantics::{eval_fn, nats};
use loopwhile::syntax::{is_for, pretty};
use loopwhile::transforms::{compile_recursive, parse_schema};

fn main() {
    let schemata = [
        ("addition", "(primrec (proj 1 1) (comp succ ((proj 2 3))))"),
        ("predecessor", "(primrec (zero 0) (proj 1 2))"),
        // Least y with x1 - y = 0, i.e. the identity, found by search.
        ("search", "(mu (primrec (proj 1 1) (comp (primrec (zero 0) (proj 1 2)) ((proj 2 3)))))"),
    ];
    for (name, text) in schemata {
        let s = parse_schema(text).unwrap();
        let arity = s.arity().unwrap();
        let p = compile_recursive(&s).unwrap();
        println!("{name}: {s}  (arity {arity}, FOR fragment: {})", is_for(&p));
        for a in 0..4u64 {
            let args = nats(&[a, 2][..arity]);
            let direct = s.evaluate(&args, 1_000);
            let compiled = eval_fn(&p, &args, 1_000_000u64).unwrap();
            assert_eq!(direct, compiled);
            println!("  {args:?} -> {}", compiled.map_or("undefined".into(), |v| v.to_string()));
        }
    }
    let pred = compile_recursive(&parse_schema(schemata[1].1).unwrap()).unwrap();
    println!("\ncompiled predecessor:\n{}", pretty(&pred));
}
