//! The transformation pipeline: desugar, loop removal, the jump form and
//! the single-`while` normal form, checked against the original.

use loopwhile::semantics::{eval_fn, nats};
use loopwhile::corpus::entry;
use loopwhile::syntax::{count_loop, count_while, pretty};
use loopwhile::transforms::{desugar, for_to_while, from_goto, normalize_single_while, to_goto};

fn main() {
    let max = entry("max.loop").unwrap().program();
    println!("original:\n{}\n", pretty(&max));
    let kernel = desugar(&max);
    let whiles = for_to_while(&kernel).unwrap();
    let jumps = to_goto(&whiles).unwrap();
    let normal = normalize_single_while(&max);

    println!("desugared:\n{}\n", pretty(&kernel));
    println!("jump form:\n{jumps}\n");
    println!(
        "loops/whiles: desugared {}/{}, for_to_while {}/{}, normal form {}/{}",
        count_loop(&kernel),
        count_while(&kernel),
        count_loop(&whiles),
        count_while(&whiles),
        count_loop(&normal),
        count_while(&normal),
    );

    let back = from_goto(&jumps).unwrap();
    for (a, b) in [(0, 3), (4, 2), (5, 5), (1, 9)] {
        let inputs = nats(&[a, b]);
        let want = eval_fn(&max, &inputs, 10_000u64).unwrap();
        let got: Vec<_> = [&kernel, &whiles, &back, &normal]
            .iter()
            .map(|q| eval_fn(q, &inputs, 1_000_000u64).unwrap())
            .collect();
        assert!(got.iter().all(|g| *g == want));
        println!("max({a}, {b}) = {} at every stage", want.unwrap());
    }
}
