//! Building inner products that make every map an isometry on the
//! complement of its kernel, then checking them.

use posetmod::cmod::random_module;
use posetmod::gallery;
use posetmod::ip::{check_ipc, construct_ip_persistence};
use posetmod::poset::PosetCategory;

fn main() -> posetmod::Result<()> {
    let mut modules = vec![("gamma1-block".to_string(), gallery::gamma1_block())];
    for seed in 0..3 {
        modules.push((format!("grid 2x3 seed {seed}"), random_module(&PosetCategory::grid(&[2, 3]), 2, seed)));
    }
    for (name, m) in modules {
        let t = m.validate()?;
        match construct_ip_persistence(&m, &t) {
            Ok(w) => {
                let verdict = check_ipc(&m, &t, &w)?.verdict;
                println!("{name}: constructed, check says {}", verdict.describe(m.category()));
                for (x, g) in w.grams().iter().enumerate() {
                    println!("  {}: {}", m.category().name(x), g.matrix());
                }
            }
            Err(e) => println!("{name}: {e}"),
        }
    }
    Ok(())
}
