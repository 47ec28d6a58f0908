//! Which poset shapes are recognized as products of chains, and which are
//! certified strongly h-free within a search budget.

use posetmod::poset::{product_of_chains, strongly_h_free, PosetCategory};

fn main() {
    let shapes = [
        ("chain 5", PosetCategory::chain(5)),
        ("grid 3x3", PosetCategory::grid(&[3, 3])),
        ("grid 2x2x2", PosetCategory::grid(&[2, 2, 2])),
        ("zig-zag", PosetCategory::zigzag_product(&[vec![true, false, true]])),
        ("gamma1", PosetCategory::gamma1()),
        ("gamma2", PosetCategory::gamma2()),
    ];
    for (name, cat) in shapes {
        println!(
            "{name:<11} {} objects, product of chains: {:<5} strongly h-free: {:?}",
            cat.len(),
            product_of_chains(&cat).is_some(),
            strongly_h_free(&cat, 10_000)
        );
    }
}
