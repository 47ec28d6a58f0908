use std::collections::HashSet;

use super::loops::{cycle_basis, ZigZagLoop};
use super::PosetCategory;

/// Outcome of the strongly h-free check. The search for a reduction of a loop
/// is bounded, so a negative answer is never certain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HFree {
    Yes,
    Unknown,
}

/// Decomposition of a poset as a product of chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductShape {
    /// Number of points of each chain factor.
    pub factors: Vec<usize>,
    /// 0-based coordinates of every object.
    pub coords: Vec<Vec<usize>>,
}

/// Recognizes products of chains through their join-irreducible elements: in
/// `m_1 × ... × m_k` these form `k` disjoint, mutually incomparable chains and
/// every element is determined by the join-irreducibles below it.
pub fn product_of_chains(cat: &PosetCategory) -> Option<ProductShape> {
    let n = cat.len();
    let irreducible: Vec<usize> = (0..n).filter(|&x| cat.in_edges(x).len() == 1).collect();

    // split into comparability classes, each of which must be a chain
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for &j in &irreducible {
        let hits: Vec<usize> = (0..chains.len())
            .filter(|&c| chains[c].iter().any(|&i| cat.comparable(i, j)))
            .collect();
        match hits.as_slice() {
            [] => chains.push(vec![j]),
            [c] => {
                if !chains[*c].iter().all(|&i| cat.comparable(i, j)) {
                    return None;
                }
                chains[*c].push(j);
            }
            _ => return None,
        }
    }
    let mut factors = Vec::with_capacity(chains.len());
    for c in &mut chains {
        c.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if cat.leq(a, b) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        factors.push(c.len() + 1);
    }
    if factors.iter().product::<usize>() != n {
        return None;
    }

    let coords: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            chains
                .iter()
                .map(|c| c.iter().filter(|&&j| cat.leq(j, x)).count())
                .collect()
        })
        .collect();
    let distinct: HashSet<&Vec<usize>> = coords.iter().collect();
    if distinct.len() != n {
        return None;
    }
    for x in 0..n {
        for y in 0..n {
            let dominated = coords[x].iter().zip(&coords[y]).all(|(a, b)| a <= b);
            if dominated != cat.leq(x, y) {
                return None;
            }
        }
    }
    Some(ProductShape { factors, coords })
}

/// Checks whether every loop in the Hasse diagram can be reduced, by
/// elementary homotopies, to loops with a single source and a single sink.
///
/// Products of chains are recognized directly. Otherwise each basis loop is
/// searched separately: a valley between two peaks is replaced by a minimal
/// common upper bound of those peaks, and dually for a peak. `budget` caps the
/// number of rewrites tried per loop.
pub fn strongly_h_free(cat: &PosetCategory, budget: usize) -> HFree {
    if product_of_chains(cat).is_some() {
        return HFree::Yes;
    }
    for l in cycle_basis(cat) {
        if !reducible(cat, &l, budget) {
            return HFree::Unknown;
        }
    }
    HFree::Yes
}

// turning points of a loop, as an alternating cyclic list beginning with a
// valley
fn turning_points(cat: &PosetCategory, l: &ZigZagLoop) -> Vec<usize> {
    let verts = l.vertices(cat);
    let k = l.steps.len();
    let mut out = Vec::new();
    let mut first_valley = None;
    for i in 0..k {
        let before = l.steps[(i + k - 1) % k].forward;
        let after = l.steps[i].forward;
        if before != after {
            if first_valley.is_none() && after {
                first_valley = Some(out.len());
            }
            out.push(verts[i]);
        }
    }
    if let Some(p) = first_valley {
        out.rotate_left(p);
    }
    out
}

fn reducible(cat: &PosetCategory, l: &ZigZagLoop, budget: usize) -> bool {
    let start = turning_points(cat, l);
    if start.len() <= 2 {
        return true;
    }
    let mut seen = HashSet::new();
    let mut stack = vec![start];
    let mut spent = 0;
    while let Some(seq) = stack.pop() {
        if seq.len() <= 2 {
            return true;
        }
        if !seen.insert(normalize(&seq)) {
            continue;
        }
        for next in rewrites(cat, &seq) {
            spent += 1;
            if spent > budget {
                return false;
            }
            if next.len() <= 2 {
                return true;
            }
            stack.push(next);
        }
    }
    false
}

// even positions are valleys, odd positions are peaks
fn rewrites(cat: &PosetCategory, seq: &[usize]) -> Vec<Vec<usize>> {
    let k = seq.len();
    let mut out = Vec::new();
    for i in 0..k {
        let prev = seq[(i + k - 1) % k];
        let next = seq[(i + 1) % k];
        let valley = i % 2 == 0;
        let candidates: Vec<usize> = if valley {
            extremal_bounds(cat, prev, next, true)
        } else {
            extremal_bounds(cat, prev, next, false)
        };
        for d in candidates {
            // replace prev, seq[i], next by d, which is a turning point of
            // the same kind as prev and next
            let mut s: Vec<usize> = (2..k - 1).map(|o| seq[(i + o) % k]).collect();
            s.push(d);
            // s[0] has the parity of i; re-align so index 0 is a valley
            if !valley {
                s.rotate_left(1);
            }
            out.push(s);
        }
    }
    out
}

// minimal common upper bounds (upper = true) or maximal common lower bounds
fn extremal_bounds(cat: &PosetCategory, a: usize, b: usize, upper: bool) -> Vec<usize> {
    let n = cat.len();
    let bound = |d: usize| {
        if upper {
            cat.leq(a, d) && cat.leq(b, d)
        } else {
            cat.leq(d, a) && cat.leq(d, b)
        }
    };
    let all: Vec<usize> = (0..n).filter(|&d| bound(d)).collect();
    all.iter()
        .copied()
        .filter(|&d| {
            !all.iter().any(|&e| {
                e != d && if upper { cat.leq(e, d) } else { cat.leq(d, e) }
            })
        })
        .collect()
}

fn normalize(seq: &[usize]) -> Vec<usize> {
    // smallest rotation by an even offset keeps the valley/peak parity
    (0..seq.len())
        .step_by(2)
        .map(|r| {
            let mut s = seq.to_vec();
            s.rotate_left(r);
            s
        })
        .min()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_products() {
        let g = PosetCategory::grid(&[2, 3, 2]);
        let shape = product_of_chains(&g).unwrap();
        assert_eq!(shape.factors, vec![2, 3, 2]);
        assert_eq!(strongly_h_free(&g, 0), HFree::Yes);
        assert!(product_of_chains(&PosetCategory::chain(4)).is_some());
    }

    #[test]
    fn gamma2_is_not_reducible() {
        let g = PosetCategory::gamma2();
        assert!(product_of_chains(&g).is_none());
        assert_eq!(strongly_h_free(&g, 1000), HFree::Unknown);
    }

    #[test]
    fn square_with_apex_reduces() {
        // gamma2 with a common top above y1 and y2 and a common bottom
        let c = PosetCategory::from_hasse(
            &["b", "x1", "x2", "y1", "y2", "t"],
            &[
                ("b", "x1"),
                ("b", "x2"),
                ("x1", "y1"),
                ("x1", "y2"),
                ("x2", "y1"),
                ("x2", "y2"),
                ("y1", "t"),
                ("y2", "t"),
            ],
        )
        .unwrap();
        assert_eq!(strongly_h_free(&c, 10_000), HFree::Yes);
    }

    #[test]
    fn zigzag_product_reduces() {
        let z = PosetCategory::zigzag_product(&[vec![true, false], vec![false]]);
        assert_eq!(strongly_h_free(&z, 10_000), HFree::Yes);
    }
}
