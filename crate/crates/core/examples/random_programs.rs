//! Seeded random programs: the same seed gives the same programs everywhere.

use loopwhile::complexity::nesting_depth;
use loopwhile::gen::ProgramGen;
use loopwhile::semantics::{nats, run, Fuel};
use loopwhile::syntax::pretty;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let mut g = ProgramGen::new(seed);

    let p = g.program(3);
    println!("random program (seed {seed}):\n{}\n", pretty(&p));

    let mut worst = 0;
    for _ in 0..100 {
        let f = g.for_program(4, 50);
        let o = run(&f, &nats(&[3, 3]), Fuel::Unbounded).unwrap();
        worst = worst.max(o.steps());
    }
    let f = g.for_program(4, 50);
    println!("a FOR program of size {} and depth {}:\n{}", f.size(), nesting_depth(&f), pretty(&f));
    println!("\nthe slowest of 100 FOR programs took {worst} steps on (3, 3)");
}
