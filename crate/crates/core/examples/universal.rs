//! The universal program runs encoded programs; s-m-n fixes arguments.

use loopwhile::complexity::overhead;
use loopwhile::encoding::{decode, encode};
use loopwhile::semantics::{eval_fn, nats, Fuel};
use loopwhile::syntax::{is_kernel, parse, pretty};
use loopwhile::universal::{specialize, universal, universal_executable};
use loopwhile::Nat;

fn main() {
    let u = universal();
    println!("U is a kernel program: {}, {} AST nodes", is_kernel(u), u.size());
    println!("encode(U) has {} decimal digits", encode(u).unwrap().decimal_len());

    let double = parse("loop x1 do x0 := x0 + 2 end").unwrap();
    let code = encode(&double).unwrap();
    for x in 0..4u64 {
        let o = universal_executable().run(&[code.clone(), Nat::small(x)], Fuel::Limited(10_000_000)).unwrap();
        println!("U({code}, {x}) = {} in {} steps", o.value().unwrap(), o.steps());
    }
    let r = overhead(&double, &[Nat::small(3)], 10_000_000).unwrap().unwrap();
    println!("slowdown on input 3: {r} (about {:.0}x)", *r.numer() as f64 / *r.denom() as f64);

    // Fix the first input of addition to 10.
    let add = parse("x0 := x1 + 0; loop x2 do x0 := x0 + 1 end").unwrap();
    let plus_ten = decode(&specialize(&encode(&add).unwrap(), &Nat::small(10)));
    println!("\nadd with x1 = 10:\n{}", pretty(&plus_ten));
    println!("on 5: {}", eval_fn(&plus_ten, &nats(&[5]), 1_000u64).unwrap().unwrap());
}
