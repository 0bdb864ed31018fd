//! Parse a program, run it under a fuel budget and trace its first steps.

use loopwhile::semantics::{nats, run, trace, Fuel, Outcome};
use loopwhile::syntax::{parse, pretty};

fn main() {
    let source = "
        # x0 := x1 * x2, with an `if` to show sugar
        loop x1 do
          loop x2 do x0 := x0 + 1 end
        end;
        if x0 = 0 then x3 := 1 else x3 := 0 end
    ";
    let p = parse(source).expect("valid program");
    println!("{}\n", pretty(&p));

    for (a, b) in [(3, 4), (0, 7)] {
        match run(&p, &nats(&[a, b]), Fuel::Limited(1_000)).unwrap() {
            Outcome::Halted { state, steps } => println!("{a} * {b}: final state {state} after {steps} steps"),
            Outcome::FuelExhausted { steps, .. } => println!("{a} * {b}: out of fuel after {steps} steps"),
        }
    }

    // Programs without `while` may run without a budget.
    let total = run(&p, &nats(&[30, 30]), Fuel::Unbounded).unwrap();
    println!("30 * 30 = {} in {} steps", total.value().unwrap(), total.steps());

    let spin = parse("x1 := x1 + 1; while x1 /= 0 do x1 := x1 + 1 end").unwrap();
    let o = run(&spin, &[], Fuel::Limited(50)).unwrap();
    println!("\nspin halted: {} (steps charged: {})", o.is_halted(), o.steps());

    println!("\nfirst events of 2 * 2:");
    for e in trace(&p, &nats(&[2, 2]), 5) {
        println!("  {}", e.to_json_line());
    }
}
