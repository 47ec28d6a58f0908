use std::fmt;

use super::gbcd_vector;
use crate::cmod::CModule;
use crate::error::{Error, Result};
use crate::local::{compute, LocalConfig};

/// Intervals `[birth, death]` of 1-based chain positions, sorted, with
/// repeats for multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Barcode {
    pub bars: Vec<(usize, usize)>,
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bars.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Barcode of a module over a chain, read off its blocks.
pub fn barcode_1d(m: &CModule) -> Result<Barcode> {
    let cat = m.category();
    let order = cat.chain_order()?;
    let mut position = vec![0; cat.len()];
    for (i, &x) in order.iter().enumerate() {
        position[x] = i + 1;
    }
    let t = m.validate()?;
    let ls = compute(m, &t, LocalConfig::default());
    if !ls.is_stabilized() {
        return Err(Error::NotStabilized);
    }
    let mut bars = Vec::new();
    for (support, dim) in gbcd_vector(m, &ls)?.entries {
        let pos: Vec<usize> = support
            .iter()
            .map(|n| cat.index_of(n).map(|x| position[x]))
            .collect::<Result<_>>()?;
        let lo = *pos.iter().min().expect("nonempty support");
        let hi = *pos.iter().max().expect("nonempty support");
        bars.extend(std::iter::repeat_n((lo, hi), dim));
    }
    bars.sort_unstable();
    Ok(Barcode { bars })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::poset::PosetCategory;

    #[test]
    fn chain_example_and_errors() {
        let b = barcode_1d(&gallery::chain_example()).unwrap();
        assert_eq!(b.to_string(), "{[1,3], [2,4]}");
        assert!(matches!(barcode_1d(&gallery::d5_obstruction()), Err(Error::NotAChain)));
        let zero = CModule::zero(PosetCategory::chain(3), crate::linalg::Field::Rational);
        assert!(barcode_1d(&zero).unwrap().bars.is_empty());
    }
}
