//! Jacobi refinement of the local structure, on a tame gallery module and on
//! the shear module whose flags keep growing.

use posetmod::gallery;
use posetmod::local::{compute, LocalConfig, Status};

fn main() -> posetmod::Result<()> {
    for name in ["gamma1-block", "three-lines", "d4-shear"] {
        let m = gallery::by_name(name)?;
        let t = m.validate()?;
        let ls = compute(&m, &t, LocalConfig { max_iters: 12, ..LocalConfig::default() });
        println!("{name}");
        for (stage, sizes) in ls.trace.iter().enumerate() {
            println!("  stage {stage:>2}: flag sizes {sizes:?}");
        }
        match ls.status {
            Status::Stabilized(i) => println!("  stable at stage {i}, e(M) = {}", ls.total_excess.unwrap_or(0)),
            Status::CapHit { iterations } => println!("  still refining after {iterations} steps"),
        }
    }
    Ok(())
}
