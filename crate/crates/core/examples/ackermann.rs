//! Ackermann's function, which no FOR program computes, as a WHILE program.

use loopwhile::corpus::{ackermann_program, entries, Kind};
use loopwhile::semantics::{nats, run};
use loopwhile::syntax::count_while;

fn main() {
    let p = ackermann_program();
    println!("{} nodes, {} while loops", p.size(), count_while(&p));
    for m in 0..=3u64 {
        let row: Vec<String> = (0..=4u64)
            .map(|n| {
                let o = run(&p, &nats(&[m, n]), 100_000_000u64).unwrap();
                format!("{:>4} ({} steps)", o.value().unwrap(), o.steps())
            })
            .collect();
        println!("A({m}, 0..4): {}", row.join(" "));
    }

    println!("\ncorpus:");
    for e in entries() {
        let kind = match e.kind {
            Kind::Loop => "FOR",
            Kind::While => "WHILE",
            Kind::Rec => "schema",
        };
        println!("  {:18} {kind:6} arity {}", e.name, e.arity);
    }
}
