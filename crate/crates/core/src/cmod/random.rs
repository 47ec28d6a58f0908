use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CModule;
use crate::linalg::{Field, Matrix, Scalar, Subspace};
use crate::poset::PosetCategory;

/// A reproducible random module over `Q`. See [`random_module_over`].
pub fn random_module(cat: &PosetCategory, max_dim: usize, seed: u64) -> CModule {
    random_module_over(cat, Field::Rational, max_dim, seed)
}

/// Draws dimensions uniformly in `0..=max_dim` and then sweeps a linear
/// extension. At each object the incoming edge maps are drawn from the
/// solution space of the commutation constraints against everything already
/// placed, as a random combination of a kernel basis. Coefficients come from
/// `{-2, ..., 2}` over `Q` and are uniform over `F_p`.
pub fn random_module_over(cat: &PosetCategory, field: Field, max_dim: usize, seed: u64) -> CModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cat.len();
    let dims: Vec<usize> = (0..n).map(|_| rng.random_range(0..=max_dim)).collect();
    let mut maps: Vec<Option<Matrix>> = vec![None; cat.edges().len()];
    // composites from every placed object into each placed object
    let mut comp: Vec<Vec<Option<Matrix>>> = vec![vec![None; n]; n];

    for &y in cat.topological_order() {
        let incoming: Vec<usize> = cat.in_edges(y).to_vec();
        let sources: Vec<usize> = incoming.iter().map(|&e| cat.edges()[e].0).collect();
        let dy = dims[y];
        let offsets: Vec<usize> = sources
            .iter()
            .scan(0, |acc, &w| {
                let o = *acc;
                *acc += dy * dims[w];
                Some(o)
            })
            .collect();
        let nvars: usize = sources.iter().map(|&w| dy * dims[w]).sum();

        // X_i φ(z, w_i) = X_j φ(z, w_j) for every common lower bound z
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for i in 0..sources.len() {
            for j in i + 1..sources.len() {
                let (wi, wj) = (sources[i], sources[j]);
                for z in 0..n {
                    if !(cat.leq(z, wi) && cat.leq(z, wj)) {
                        continue;
                    }
                    let a = comp[z][wi].as_ref().expect("placed");
                    let b = comp[z][wj].as_ref().expect("placed");
                    for r in 0..dy {
                        for c in 0..dims[z] {
                            let mut row = vec![field.zero(); nvars];
                            for k in 0..dims[wi] {
                                row[offsets[i] + r * dims[wi] + k] = a.get(k, c).clone();
                            }
                            for k in 0..dims[wj] {
                                let cell = &mut row[offsets[j] + r * dims[wj] + k];
                                *cell = &*cell - b.get(k, c);
                            }
                            rows.push(row);
                        }
                    }
                }
            }
        }

        let solutions = if rows.is_empty() || nvars == 0 {
            Subspace::full(field, nvars)
        } else {
            Subspace::kernel(&Matrix::from_rows(field, rows).expect("rectangular"))
        };
        let mut x = vec![field.zero(); nvars];
        for col in solutions.basis().columns() {
            let c = draw(&mut rng, field);
            if c.is_zero() {
                continue;
            }
            for (xi, ci) in x.iter_mut().zip(&col) {
                *xi = &*xi + &(&c * ci);
            }
        }

        for (i, &e) in incoming.iter().enumerate() {
            let w = sources[i];
            let data = x[offsets[i]..offsets[i] + dy * dims[w]].to_vec();
            maps[e] = Some(Matrix::from_row_major(field, dy, dims[w], data).expect("shape"));
        }

        comp[y][y] = Some(Matrix::identity(field, dy));
        for z in 0..n {
            if z == y || !cat.leq(z, y) {
                continue;
            }
            // any last edge works; the constraints make them agree
            let (i, w) = sources
                .iter()
                .copied()
                .enumerate()
                .find(|&(_, w)| cat.leq(z, w))
                .expect("some predecessor lies above z");
            let m = maps[incoming[i]].as_ref().expect("just drawn");
            comp[z][y] = Some(m * comp[z][w].as_ref().expect("placed"));
        }
    }

    let maps = maps.into_iter().map(|m| m.expect("every edge drawn")).collect();
    CModule::new(cat.clone(), field, dims, maps).expect("shapes match by construction")
}

fn draw(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.random_range(-2..=2)),
        Field::Prime(p) => field.from_i64(rng.random_range(0..p) as i64),
    }
}
