//! Blocks of a module, the generalized barcode dimension, and the splitting
//! of a block into generalized bar codes when its holonomy allows it.

use posetmod::blocks::{enumerate_blocks, gbc_decompose, gbcd_vector, PiecePolicy};
use posetmod::gallery;
use posetmod::local::{compute, LocalConfig};

fn main() -> posetmod::Result<()> {
    for name in ["gamma1-block", "d5-obstruction", "chain-example"] {
        let m = gallery::by_name(name)?;
        let cat = m.category();
        let t = m.validate()?;
        let ls = compute(&m, &t, LocalConfig::default());
        println!("{name}");
        for (support, dim) in gbcd_vector(&m, &ls)?.entries {
            println!("  support {{{}}} dim {dim}", support.join(","));
        }
        for block in enumerate_blocks(&m, &ls, PiecePolicy::Complement)? {
            match gbc_decompose(&block, cat) {
                Ok(s) => println!("  block on {:?} splits into {} bar codes", block.key(cat), s.gbcs.len()),
                Err(e) => println!("  block on {:?} does not split: {e}", block.key(cat)),
            }
        }
    }
    Ok(())
}
