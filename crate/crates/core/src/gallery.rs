//! Named example modules.

use crate::cmod::CModule;
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::poset::PosetCategory;
use crate::simplicial::{gallery_d7, homology_functor};

pub const NAMES: [&str; 6] = [
    "gamma1-block",
    "d5-obstruction",
    "d7-geometric",
    "three-lines",
    "d4-shear",
    "chain-example",
];

const Q: Field = Field::Rational;

fn ratio(n: i64, d: i64) -> crate::linalg::Scalar {
    Q.from_ratio(n, d).expect("nonzero denominator")
}

/// Builds a module from named edges; unlisted edges get an error.
fn build(cat: PosetCategory, dims: &[(&str, usize)], maps: Vec<(&str, &str, Matrix)>) -> CModule {
    let mut d = vec![0; cat.len()];
    for (name, k) in dims {
        d[cat.index_of(name).expect("object")] = *k;
    }
    let mut ms = vec![None; cat.edges().len()];
    for (a, b, m) in maps {
        let e = cat
            .edge_index(cat.index_of(a).expect("object"), cat.index_of(b).expect("object"))
            .expect("edge");
        ms[e] = Some(m);
    }
    let ms = ms.into_iter().map(|m| m.expect("every edge assigned")).collect();
    let m = CModule::new(cat, Q, d, ms).expect("gallery module");
    m.validate().expect("gallery module is functorial");
    m
}

/// A rank-two block on the commutative square; it splits into two
/// one-dimensional blocks.
pub fn gamma1_block() -> CModule {
    let ab = Matrix::from_i64(Q, &[&[1, 1], &[0, 1]]);
    let ac = Matrix::from_i64(Q, &[&[2, 0], &[0, 1]]);
    let bd = Matrix::identity(Q, 2);
    let cd = Matrix::from_rows(Q, vec![vec![ratio(1, 2), Q.one()], vec![Q.zero(), Q.one()]]).expect("2x2");
    build(
        PosetCategory::gamma1(),
        &[("a", 2), ("b", 2), ("c", 2), ("d", 2)],
        vec![("a", "b", ab), ("a", "c", ac), ("b", "d", bd), ("c", "d", cd)],
    )
}

/// One-dimensional spaces on the two-source square; one map is 2, the
/// others 1. The holonomy is 2, so no inner products make it isometric.
pub fn d5_obstruction() -> CModule {
    let s = |k: i64| Matrix::from_i64(Q, &[&[k]]);
    build(
        PosetCategory::gamma2(),
        &[("x1", 1), ("x2", 1), ("y1", 1), ("y2", 1)],
        vec![
            ("x1", "y1", s(2)),
            ("x1", "y2", s(1)),
            ("x2", "y1", s(1)),
            ("x2", "y2", s(1)),
        ],
    )
}

/// First rational homology of the hexagon-over-triangle diagram.
pub fn d7_geometric() -> CModule {
    homology_functor(&gallery_d7(), 1, Q).expect("homology of a valid diagram")
}

/// Three distinct lines into a plane.
pub fn three_lines() -> CModule {
    let cat = PosetCategory::from_hasse(&["l1", "l2", "l3", "v"], &[("l1", "v"), ("l2", "v"), ("l3", "v")])
        .expect("valid");
    build(
        cat,
        &[("l1", 1), ("l2", 1), ("l3", 1), ("v", 2)],
        vec![
            ("l1", "v", Matrix::from_i64(Q, &[&[1], &[0]])),
            ("l2", "v", Matrix::from_i64(Q, &[&[0], &[1]])),
            ("l3", "v", Matrix::from_i64(Q, &[&[1], &[1]])),
        ],
    )
}

/// Planes on the two-source square with shear holonomy, plus a line
/// injected at `x1` from an extra source `s`. The shear orbit of the line
/// is infinite, so the local structure keeps growing.
pub fn d4_shear() -> CModule {
    let cat = PosetCategory::from_hasse(
        &["s", "x1", "x2", "y1", "y2"],
        &[("s", "x1"), ("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2")],
    )
    .expect("valid");
    let id = Matrix::identity(Q, 2);
    build(
        cat,
        &[("s", 1), ("x1", 2), ("x2", 2), ("y1", 2), ("y2", 2)],
        vec![
            ("s", "x1", Matrix::from_i64(Q, &[&[0], &[1]])),
            ("x1", "y1", id.clone()),
            ("x1", "y2", Matrix::from_i64(Q, &[&[1, 1], &[0, 1]])),
            ("x2", "y1", id.clone()),
            ("x2", "y2", id),
        ],
    )
}

/// `Q -> Q² -> Q² -> Q`, with bars `[1, 3]` and `[2, 4]`.
pub fn chain_example() -> CModule {
    let cat = PosetCategory::chain(4);
    let n: Vec<String> = cat.objects().to_vec();
    build(
        cat,
        &[(&n[0], 1), (&n[1], 2), (&n[2], 2), (&n[3], 1)],
        vec![
            (&n[0], &n[1], Matrix::from_i64(Q, &[&[1], &[0]])),
            (&n[1], &n[2], Matrix::identity(Q, 2)),
            (&n[2], &n[3], Matrix::from_i64(Q, &[&[0, 1]])),
        ],
    )
}

pub fn by_name(name: &str) -> Result<CModule> {
    Ok(match name {
        "gamma1-block" => gamma1_block(),
        "d5-obstruction" => d5_obstruction(),
        "d7-geometric" => d7_geometric(),
        "three-lines" => three_lines(),
        "d4-shear" => d4_shear(),
        "chain-example" => chain_example(),
        other => return Err(Error::Parse(format!("unknown gallery entry `{other}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{barcode_1d, gbcd_vector};
    use crate::ip::{obstruction_scan, IpVerdict};
    use crate::local::{compute, LocalConfig, Status};

    #[test]
    fn all_entries_build() {
        for name in NAMES {
            let m = by_name(name).unwrap();
            assert!(m.validate().is_ok(), "{name}");
        }
        assert!(by_name("nope").is_err());
    }

    #[test]
    fn shear_never_stabilizes() {
        let m = d4_shear();
        let t = m.validate().unwrap();
        let cfg = LocalConfig { max_iters: 50, ..Default::default() };
        let ls = compute(&m, &t, cfg);
        assert!(matches!(ls.status, Status::CapHit { .. }));
        for w in ls.trace.windows(2) {
            assert!(w[0].iter().zip(&w[1]).all(|(a, b)| a <= b));
            assert!(w[1].iter().sum::<usize>() > w[0].iter().sum::<usize>());
        }
        let (first, last) = (&ls.trace[0], ls.trace.last().unwrap());
        assert!((1..5).all(|x| last[x] > first[x] + 10));
    }

    #[test]
    fn d5_is_obstructed_by_two() {
        let m = d5_obstruction();
        let t = m.validate().unwrap();
        let ls = compute(&m, &t, LocalConfig::default());
        assert_eq!(ls.total_excess, Some(0));
        match obstruction_scan(&m, &ls).unwrap().verdict {
            IpVerdict::Obstructed { operator, .. } => {
                assert_eq!(operator.get(0, 0).abs().unwrap(), Q.from_i64(2).abs().unwrap())
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chain_example_bars() {
        let bars = barcode_1d(&chain_example()).unwrap();
        assert_eq!(bars.bars, [(1, 3), (2, 4)]);
    }

    #[test]
    fn gamma1_block_is_one_block_of_rank_two() {
        let m = gamma1_block();
        let t = m.validate().unwrap();
        let ls = compute(&m, &t, LocalConfig::default());
        let v = gbcd_vector(&m, &ls).unwrap();
        assert_eq!(v.entries, [(vec!["a".to_string(), "b".into(), "c".into(), "d".into()], 2)]);
    }
}
