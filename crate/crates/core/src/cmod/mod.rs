//! Modules over a poset category: a vector space per object and a matrix per
//! Hasse edge, with all path composites agreeing.

mod random;

use std::collections::HashMap;

pub use random::{random_module, random_module_over};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};
use crate::poset::{PosetCategory, Subcategory};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CModule {
    category: PosetCategory,
    field: Field,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl CModule {
    /// `maps[e]` belongs to Hasse edge `e` and must be `dims[dst] × dims[src]`.
    /// Functoriality is not checked here; see [`CModule::validate`].
    pub fn new(category: PosetCategory, field: Field, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        if dims.len() != category.len() {
            return Err(Error::DimensionMismatch {
                context: "one dimension per object",
                expected: category.len(),
                found: dims.len(),
            });
        }
        if maps.len() != category.edges().len() {
            return Err(Error::DimensionMismatch {
                context: "one matrix per Hasse edge",
                expected: category.edges().len(),
                found: maps.len(),
            });
        }
        for (&(a, b), m) in category.edges().iter().zip(&maps) {
            if m.field() != field {
                return Err(Error::FieldMismatch);
            }
            if m.rows() != dims[b] {
                return Err(Error::DimensionMismatch {
                    context: "edge matrix rows vs target dimension",
                    expected: dims[b],
                    found: m.rows(),
                });
            }
            if m.cols() != dims[a] {
                return Err(Error::DimensionMismatch {
                    context: "edge matrix columns vs source dimension",
                    expected: dims[a],
                    found: m.cols(),
                });
            }
        }
        Ok(CModule {
            category,
            field,
            dims,
            maps,
        })
    }

    /// Builds a module from named dimensions and edge matrices. Edges touching
    /// a zero-dimensional object may be omitted.
    pub fn from_named(
        category: PosetCategory,
        field: Field,
        dims: &[(&str, usize)],
        maps: &[(&str, &str, Matrix)],
    ) -> Result<Self> {
        let mut d = vec![0; category.len()];
        for &(name, n) in dims {
            d[category.index_of(name)?] = n;
        }
        let mut given: HashMap<usize, Matrix> = HashMap::new();
        for (a, b, m) in maps {
            let (a, b) = (category.index_of(a)?, category.index_of(b)?);
            let e = category.edge_index(a, b).ok_or_else(|| {
                Error::Parse(format!(
                    "{} -> {} is not a Hasse edge",
                    category.name(a),
                    category.name(b)
                ))
            })?;
            given.insert(e, m.clone());
        }
        let mut all = Vec::with_capacity(category.edges().len());
        for (e, &(a, b)) in category.edges().iter().enumerate() {
            match given.remove(&e) {
                Some(m) => all.push(m),
                None if d[a] == 0 || d[b] == 0 => all.push(Matrix::zeros(field, d[b], d[a])),
                None => {
                    return Err(Error::Parse(format!(
                        "missing matrix for edge {} -> {}",
                        category.name(a),
                        category.name(b)
                    )))
                }
            }
        }
        Self::new(category, field, d, all)
    }

    pub fn zero(category: PosetCategory, field: Field) -> Self {
        let dims = vec![0; category.len()];
        let maps = vec![Matrix::zeros(field, 0, 0); category.edges().len()];
        CModule {
            category,
            field,
            dims,
            maps,
        }
    }

    pub fn category(&self) -> &PosetCategory {
        &self.category
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn edge_map(&self, e: usize) -> &Matrix {
        &self.maps[e]
    }

    pub fn edge_maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// Objects with a nonzero vector space.
    pub fn support(&self) -> Subcategory {
        Subcategory::new((0..self.dims.len()).filter(|&x| self.dims[x] > 0))
    }

    /// Computes every composite `M(x ≤ y)`, failing on the first pair of
    /// objects where two directed paths give different matrices.
    pub fn validate(&self) -> Result<MorphismTable> {
        let cat = &self.category;
        let n = cat.len();
        let mut table: Vec<Vec<Option<Matrix>>> = vec![vec![None; n]; n];
        for x in 0..n {
            table[x][x] = Some(Matrix::identity(self.field, self.dims[x]));
            for &y in cat.topological_order() {
                if y == x || !cat.leq(x, y) {
                    continue;
                }
                let mut found: Option<Matrix> = None;
                for &e in cat.in_edges(y) {
                    let w = cat.edges()[e].0;
                    if !cat.leq(x, w) {
                        continue;
                    }
                    let via = table[x][w].as_ref().expect("topological order");
                    let candidate = &self.maps[e] * via;
                    match &found {
                        None => found = Some(candidate),
                        Some(prev) => {
                            if let Some((row, col)) = first_difference(prev, &candidate) {
                                return Err(Error::PathConflict {
                                    from: cat.name(x).to_string(),
                                    to: cat.name(y).to_string(),
                                    row,
                                    col,
                                });
                            }
                        }
                    }
                }
                table[x][y] = found;
            }
        }
        Ok(MorphismTable {
            names: cat.objects().to_vec(),
            table,
        })
    }

    /// Objectwise direct sum with block-diagonal edge maps.
    pub fn direct_sum(&self, other: &CModule) -> Result<CModule> {
        Self::direct_sum_all(&[self, other])
    }

    pub fn direct_sum_all(parts: &[&CModule]) -> Result<CModule> {
        let first = parts.first().ok_or(Error::Empty)?;
        if parts
            .iter()
            .any(|p| p.category != first.category || p.field != first.field)
        {
            return Err(Error::CategoryMismatch);
        }
        let cat = first.category.clone();
        let dims = (0..cat.len())
            .map(|x| parts.iter().map(|p| p.dims[x]).sum())
            .collect();
        let maps = (0..cat.edges().len())
            .map(|e| {
                let blocks: Vec<&Matrix> = parts.iter().map(|p| &p.maps[e]).collect();
                Matrix::block_diag(first.field, &blocks)
            })
            .collect();
        Ok(CModule {
            category: cat,
            field: first.field,
            dims,
            maps,
        })
    }

    /// The restriction to an admissible full subcategory. Object `i` of the
    /// result is `sub.members()[i]` of the parent.
    pub fn restrict(&self, sub: &Subcategory) -> Result<CModule> {
        let cat = self.category.full_subcategory(sub)?;
        let dims = sub.members().iter().map(|&x| self.dims[x]).collect();
        let maps = cat
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (pa, pb) = (sub.members()[a], sub.members()[b]);
                let e = self.category.edge_index(pa, pb).expect("parent edge");
                self.maps[e].clone()
            })
            .collect();
        Ok(CModule {
            category: cat,
            field: self.field,
            dims,
            maps,
        })
    }

    /// The module with dimension 1 on `sub`, identities inside it and zero
    /// elsewhere.
    pub fn gbc(category: &PosetCategory, sub: &Subcategory, field: Field) -> Result<CModule> {
        if !category.is_admissible(sub) {
            return Err(Error::InadmissibleSubcategory(sub.names(category)));
        }
        let dims: Vec<usize> = (0..category.len()).map(|x| usize::from(sub.contains(x))).collect();
        let maps = category
            .edges()
            .iter()
            .map(|&(a, b)| {
                if sub.contains(a) && sub.contains(b) {
                    Matrix::identity(field, 1)
                } else {
                    Matrix::zeros(field, dims[b], dims[a])
                }
            })
            .collect();
        Ok(CModule {
            category: category.clone(),
            field,
            dims,
            maps,
        })
    }

    /// The isomorphic module obtained from new bases: `basis[x]` holds the new
    /// basis vectors of `M(x)` as columns, so each edge map becomes
    /// `basis[y]⁻¹ · M(e) · basis[x]`.
    pub fn change_basis(&self, basis: &[Matrix]) -> Result<CModule> {
        let inverses = basis.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
        let maps = self
            .category
            .edges()
            .iter()
            .zip(&self.maps)
            .map(|(&(a, b), m)| &(&inverses[b] * m) * &basis[a])
            .collect();
        Self::new(self.category.clone(), self.field, self.dims.clone(), maps)
    }
}

fn first_difference(a: &Matrix, b: &Matrix) -> Option<(usize, usize)> {
    (0..a.rows())
        .flat_map(|r| (0..a.cols()).map(move |c| (r, c)))
        .find(|&(r, c)| a.get(r, c) != b.get(r, c))
}

/// Every composite `M(x ≤ y)` of a validated module.
#[derive(Clone, Debug)]
pub struct MorphismTable {
    names: Vec<String>,
    table: Vec<Vec<Option<Matrix>>>,
}

impl MorphismTable {
    pub fn composite(&self, x: usize, y: usize) -> Result<&Matrix> {
        self.table[x][y]
            .as_ref()
            .ok_or_else(|| Error::Incomparable(self.names[x].clone(), self.names[y].clone()))
    }

    /// Like [`MorphismTable::composite`], for pairs already known to be
    /// comparable.
    pub fn get(&self, x: usize, y: usize) -> &Matrix {
        self.table[x][y].as_ref().expect("comparable pair")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn one(v: i64) -> Matrix {
        Matrix::from_i64(Q, &[&[v]])
    }

    fn square(last: i64) -> CModule {
        CModule::new(
            PosetCategory::gamma1(),
            Q,
            vec![1; 4],
            vec![one(1), one(1), one(1), one(last)],
        )
        .unwrap()
    }

    #[test]
    fn commuting_square_validates() {
        let t = square(1).validate().unwrap();
        assert!(t.get(0, 3).is_identity());
        assert!(t.composite(1, 2).is_err());
    }

    #[test]
    fn noncommuting_square_conflicts() {
        let r = square(2).validate();
        assert!(matches!(r, Err(Error::PathConflict { ref from, ref to, row: 0, col: 0 }) if from == "a" && to == "d"));
    }

    #[test]
    fn chain_composite_is_product() {
        let c = PosetCategory::chain(3);
        let a = Matrix::from_i64(Q, &[&[1, 2], &[0, 1]]);
        let b = Matrix::from_i64(Q, &[&[3, 0]]);
        let m = CModule::new(c, Q, vec![2, 2, 1], vec![a.clone(), b.clone()]).unwrap();
        let t = m.validate().unwrap();
        assert_eq!(t.get(0, 2), &(&b * &a));
        assert!(t.get(1, 1).is_identity());
    }

    #[test]
    fn direct_sum_with_zero() {
        let m = square(1);
        let z = CModule::zero(PosetCategory::gamma1(), Q);
        assert_eq!(m.direct_sum(&z).unwrap(), m);
        assert_eq!(m.direct_sum(&m).unwrap().dims(), &[2, 2, 2, 2]);
        let other = CModule::zero(PosetCategory::chain(4), Q);
        assert!(matches!(m.direct_sum(&other), Err(Error::CategoryMismatch)));
    }

    #[test]
    fn gbc_and_restrict() {
        let g = PosetCategory::gamma2();
        let s = g.subcategory_by_names(&["x1", "y1", "y2"]).unwrap();
        let m = CModule::gbc(&g, &s, Q).unwrap();
        assert_eq!(m.dims(), &[1, 0, 1, 1]);
        m.validate().unwrap();
        let r = m.restrict(&s).unwrap();
        assert_eq!(r.dims(), &[1, 1, 1]);
        assert!(CModule::gbc(&g, &Subcategory::new([0, 1]), Q).is_err());

        let grid = PosetCategory::grid(&[3, 3]);
        let row = grid.subcategory_by_names(&["1,1", "2,1", "3,1"]).unwrap();
        let full = CModule::gbc(&grid, &Subcategory::full(&grid), Q).unwrap();
        let bottom = full.restrict(&row).unwrap();
        assert!(bottom.category().is_chain());
        assert_eq!(full.restrict(&Subcategory::full(&grid)).unwrap(), full);
    }

    #[test]
    fn from_named_fills_zero_edges() {
        let g = PosetCategory::chain(3);
        let m = CModule::from_named(g, Q, &[("1", 1), ("2", 1)], &[("1", "2", one(1))]).unwrap();
        assert_eq!(m.edge_map(1).rows(), 0);
        m.validate().unwrap();
    }
}
