//! First homology of a diagram of complexes: a hexagon that wraps twice around
//! one triangle and collapses onto another. The resulting module has no
//! compatible inner products.

use posetmod::ip::{check_ipc, obstruction_scan};
use posetmod::linalg::Field;
use posetmod::local::{compute, LocalConfig};
use posetmod::simplicial::{betti, gallery_d7, homology_functor, ipc_presentation};

fn main() -> posetmod::Result<()> {
    let d = gallery_d7();
    let cat = d.category();
    for (x, c) in d.complexes().iter().enumerate() {
        println!("{}: {} vertices, chi {}, b1 {}", cat.name(x), c.count(0), c.euler_characteristic(), betti(c, 1, Field::Rational));
    }
    let h = homology_functor(&d, 1, Field::Rational)?;
    for (e, &(a, b)) in cat.edges().iter().enumerate() {
        println!("H1({} -> {}) = {}", cat.name(a), cat.name(b), h.edge_map(e));
    }
    let t = h.validate()?;
    let ls = compute(&h, &t, LocalConfig::default());
    println!("H1: {}", obstruction_scan(&h, &ls)?.verdict.describe(cat));

    // Presentations need injective vertex maps; the wrap is not one.
    match ipc_presentation(&d, 1, Field::Rational) {
        Ok(p) => {
            let z = check_ipc(&p.cycles, &p.cycles.validate()?, &p.cycle_grams)?;
            println!("cycles: {}", z.verdict.describe(cat));
        }
        Err(e) => println!("no presentation: {e}"),
    }
    Ok(())
}
