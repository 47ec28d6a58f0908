//! Oracles and generators shared by the integration tests. The oracles do
//! not touch the local-structure machinery.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use posetmod::cmod::CModule;
use posetmod::linalg::{Field, Matrix, Subspace};
use posetmod::poset::{PosetCategory, Subcategory};

pub const Q: Field = Field::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bars of a chain module by inclusion-exclusion on ranks of composites:
/// `#[i, j] = r(i,j) − r(i−1,j) − r(i,j+1) + r(i−1,j+1)`, 1-based positions.
pub fn rank_barcode(m: &CModule) -> Vec<(usize, usize)> {
    let cat = m.category();
    let order = cat.chain_order().expect("chain");
    let n = order.len();
    let field = m.field();
    // composite from position i to position j (0-based, i <= j)
    let comp = |i: usize, j: usize| -> Matrix {
        let mut c = Matrix::identity(field, m.dim(order[i]));
        for k in i..j {
            let e = cat.edge_index(order[k], order[k + 1]).expect("chain edge");
            c = m.edge_map(e) * &c;
        }
        c
    };
    let r = |i: isize, j: usize| -> isize {
        if i < 0 || j >= n {
            0
        } else {
            comp(i as usize, j).rank() as isize
        }
    };
    let mut bars = Vec::new();
    for i in 0..n {
        for j in i..n {
            let k = r(i as isize, j) - r(i as isize - 1, j) - r(i as isize, j + 1) + r(i as isize - 1, j + 1);
            assert!(k >= 0, "negative multiplicity");
            bars.extend(std::iter::repeat_n((i + 1, j + 1), k as usize));
        }
    }
    bars.sort_unstable();
    bars
}

/// Number of connected components of a graph on `n` vertices.
pub fn components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut count = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

pub fn random_matrix(rng: &mut ChaCha8Rng, field: Field, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| field.from_i64(rng.random_range(-2..=2))).collect();
    Matrix::from_row_major(field, rows, cols, data).expect("shape")
}

pub fn random_invertible(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, field, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// A random subspace of `field^n` spanned by up to `n` random vectors.
pub fn random_subspace(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Subspace {
    let k = rng.random_range(0..=n);
    Subspace::span(&random_matrix(rng, field, n, k))
}

/// A random connected poset on `n` objects, as its transitive reduction.
pub fn random_poset(rng: &mut ChaCha8Rng, n: usize) -> PosetCategory {
    loop {
        // i < j in a fixed linear extension with probability 1/2
        let mut lt = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                lt[i][j] = rng.random_bool(0.5);
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if lt[i][k] && lt[k][j] {
                        lt[i][j] = true;
                    }
                }
            }
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if lt[i][j] && !(0..n).any(|k| lt[i][k] && lt[k][j]) {
                    edges.push((i, j));
                }
            }
        }
        if components(n, &edges) != 1 {
            continue;
        }
        let owned: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let names: Vec<&str> = owned.iter().map(String::as_str).collect();
        let named: Vec<(&str, &str)> = edges.iter().map(|&(a, b)| (names[a], names[b])).collect();
        return PosetCategory::from_hasse(&names, &named).expect("valid poset");
    }
}

/// `k` copies of the generalized bar code on `sub`, in a random basis at
/// every object.
pub fn random_block(rng: &mut ChaCha8Rng, cat: &PosetCategory, sub: &Subcategory, k: usize) -> CModule {
    let one = CModule::gbc(cat, sub, Q).expect("admissible");
    let copies: Vec<&CModule> = std::iter::repeat_n(&one, k).collect();
    let m = CModule::direct_sum_all(&copies).expect("same category");
    conjugate(rng, &m)
}

pub fn conjugate(rng: &mut ChaCha8Rng, m: &CModule) -> CModule {
    let basis: Vec<Matrix> = m.dims().iter().map(|&d| random_invertible(rng, m.field(), d)).collect();
    m.change_basis(&basis).expect("invertible")
}

/// A random interval `[lo, hi]` of `cat`.
pub fn random_interval(rng: &mut ChaCha8Rng, cat: &PosetCategory) -> Subcategory {
    loop {
        let lo = rng.random_range(0..cat.len());
        let hi = rng.random_range(0..cat.len());
        if cat.leq(lo, hi) {
            return cat.interval(lo, hi);
        }
    }
}
