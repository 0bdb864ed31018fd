//! The diagonal program applied to its own code. It halts exactly when the
//! simulated program does not, so on itself it must run until fuel is gone.

use loopwhile::encoding::encode;
use loopwhile::semantics::{run, Fuel};
use loopwhile::syntax::parse;
use loopwhile::universal::{diagonal, DIAGONAL_CLOCK};

fn main() {
    let d = diagonal();
    let own = encode(d).unwrap();
    println!("D simulates {DIAGONAL_CLOCK} interpreter rounds; its code has {} digits", own.decimal_len());

    // Code 0 halts at once. Code 9 spins whenever its input is non-zero,
    // which it is when that input is its own code.
    let quick = encode(&parse("x0 := x0 + 0").unwrap()).unwrap();
    let forever = encode(&parse("while x1 /= 0 do x0 := x0 + 0 end").unwrap()).unwrap();
    for (name, code) in [("halting program", quick), ("looping program", forever), ("D itself", own)] {
        let o = run(d, &[code], Fuel::Limited(1_000_000)).unwrap();
        let verdict = if o.is_halted() { "halts" } else { "still running when fuel ran out" };
        println!("D on {name}: {verdict} ({} steps)", o.steps());
    }
}
