//! Cantor pairing and the numbering of kernel programs.

use loopwhile::encoding::{compact, decode, encode, estimated_code_bits, pair, unpair};
use loopwhile::syntax::{parse, pretty};
use loopwhile::Nat;

fn main() {
    let (a, b) = (Nat::small(2), Nat::small(3));
    let p = pair(&a, &b);
    println!("pair(2, 3) = {p}, unpair({p}) = {:?}", unpair(&p));

    for n in [0u64, 1, 7, 9, 123_456] {
        println!("program #{n}: {}", pretty(&decode(&Nat::small(n))).replace('\n', " "));
    }

    let add = parse("x0 := x1 + 0; loop x2 do x0 := x0 + 1 end").unwrap();
    let code = encode(&add).unwrap();
    println!("\nadd has code {code}");
    assert_eq!(decode(&code), add);

    // Right-nested statement lists make codes explode; regrouping helps.
    let long = parse(&["x0 := x0 + 1"; 10].join("; ")).unwrap();
    let short = compact(&long);
    println!(
        "ten increments: {} digits as written, {} after compact (estimate {:.0} bits)",
        encode(&long).unwrap().decimal_len(),
        encode(&short).unwrap().decimal_len(),
        estimated_code_bits(&short),
    );
}
