//! Bars of a module over a chain, read off its blocks.

use posetmod::blocks::barcode_1d;
use posetmod::cmod::random_module;
use posetmod::gallery;
use posetmod::poset::PosetCategory;

fn main() -> posetmod::Result<()> {
    let m = gallery::chain_example();
    println!("chain example, dims {:?}: {}", m.dims(), barcode_1d(&m)?);
    let cat = PosetCategory::chain(6);
    for seed in 0..3 {
        let m = random_module(&cat, 3, seed);
        println!("random seed {seed}, dims {:?}: {}", m.dims(), barcode_1d(&m)?);
    }
    Ok(())
}
