//! The almost hypercomplex structure on the adapted frame.
//!
//! cargo run --example hypercomplex_triple

use hyperfinsler::hypercomplex::{build_triple, check_projection_identities, quaternion_defect};

fn main() {
    let t = build_triple(1);
    for a in 1..=3 {
        println!("J{a} (columns are images of δ1, δ2, ∂1, ∂2):{}", t.get(a));
    }
    for n in [1, 2, 3, 5] {
        println!(
            "n = {n}: quaternion defect {}",
            quaternion_defect(&build_triple(n))
        );
    }
    for a in [1, 3] {
        println!("J{a}∘v = h∘J{a}: {}", check_projection_identities(&t, a));
    }
}
