//! The tame cover of a module: the direct sum of its blocks with the
//! projection back onto the module. Its kernel has the size of the excess.

use posetmod::blocks::tame_cover;
use posetmod::gallery;
use posetmod::ip::{construct_ip_persistence, WipStructure};
use posetmod::linalg::{Field, Gram, Matrix};
use posetmod::local::{compute, LocalConfig};

fn main() -> posetmod::Result<()> {
    for name in ["three-lines", "gamma1-block", "chain-example"] {
        let m = gallery::by_name(name)?;
        let cat = m.category();
        let t = m.validate()?;
        let ls = compute(&m, &t, LocalConfig::default());
        let w = if name == "three-lines" {
            // e1 + e2 has squared norm 2 at the center
            let mut grams: Vec<Gram> = m.dims().iter().map(|&d| Gram::identity(Field::Rational, d)).collect();
            grams[cat.index_of("l3")?] = Gram::new(Matrix::from_i64(Field::Rational, &[&[2]]))?;
            WipStructure::new(&m, grams)?
        } else {
            construct_ip_persistence(&m, &t)?
        };
        let cover = tame_cover(&m, &t, &ls, &w)?;
        println!(
            "{name}: e(M) = {}, {} blocks, cover dims {:?}, module dims {:?}, kernel {:?}, iso {}",
            ls.total_excess.unwrap_or(0),
            cover.blocks.len(),
            cover.cover.dims(),
            m.dims(),
            cover.kernel_dims,
            cover.is_isomorphism()
        );
    }
    Ok(())
}
