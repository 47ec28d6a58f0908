//! A module that carries no inner products compatible with its maps: the
//! holonomy around its loop is multiplication by 2.

use posetmod::blocks::enumerate_blocks;
use posetmod::blocks::PiecePolicy;
use posetmod::gallery;
use posetmod::ip::{check_ipc, obstruction_scan, WipStructure};
use posetmod::local::{compute, LocalConfig};

fn main() -> posetmod::Result<()> {
    let m = gallery::d5_obstruction();
    let cat = m.category();
    let t = m.validate()?;
    let ls = compute(&m, &t, LocalConfig::default());
    for block in enumerate_blocks(&m, &ls, PiecePolicy::Complement)? {
        for (lp, h) in block.support_holonomy(cat)? {
            println!("holonomy around a loop of zig-zag length {}: {h}", lp.zigzag_length());
        }
    }
    println!("scan: {}", obstruction_scan(&m, &ls)?.verdict.describe(cat));
    for seed in 0..3 {
        let w = WipStructure::random(&m, seed);
        println!("random Grams {seed}: {}", check_ipc(&m, &t, &w)?.verdict.describe(cat));
    }
    Ok(())
}
