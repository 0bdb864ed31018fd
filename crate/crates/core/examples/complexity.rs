//! Step-count growth of corpus programs and exact polynomial fits.

use loopwhile::complexity::{growth_profile, nesting_depth};
use loopwhile::corpus::{entry, mult_program};
use loopwhile::transforms::normalize_single_while;

fn main() {
    let sizes: Vec<u64> = (0..=8).collect();
    for name in ["add.loop", "mult.loop", "triangle.loop", "exp.loop", "gcd.while"] {
        let e = entry(name).unwrap();
        let p = e.program();
        let prof = growth_profile(&p, e.arity, &sizes, 10_000_000);
        let steps: Vec<String> =
            prof.rows.iter().map(|r| if r.exhausted { "out of fuel".into() } else { r.steps.to_string() }).collect();
        let fit = (1..=3).find_map(|d| prof.exact_fit(d).map(|c| (d, c)));
        let shape = match fit {
            Some((d, c)) => format!("degree {d}: {}", c.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")),
            None => "no polynomial of degree <= 3".to_string(),
        };
        println!("{name:14} depth {} t(n) = [{}]  {shape}", nesting_depth(&p), steps.join(", "));
    }

    let normal = normalize_single_while(&mult_program());
    let prof = growth_profile(&normal, 2, &(0..=5).collect::<Vec<_>>(), 10_000_000);
    println!("\nmult in single-while form (depth {}):", nesting_depth(&normal));
    print!("{}", prof.to_csv());
}
