use std::cmp::Ordering;
use std::fmt;

use super::gram::Gram;
use super::matrix::Matrix;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// A linear subspace of `k^n`, stored as the reduced column echelon form of a
/// basis. Two values are equal iff they describe the same subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
    // pivots[j] is the pivot row of basis column j, strictly increasing
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient_dim: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, ambient_dim, 0),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Column space of `generators`, in canonical form.
    pub fn span(generators: &Matrix) -> Self {
        let (r, pivots) = generators.transpose().rref();
        let n = generators.rows();
        let mut basis = Matrix::zeros(generators.field(), n, pivots.len());
        for (j, _) in pivots.iter().enumerate() {
            for i in 0..n {
                basis.set(i, j, r.get(j, i).clone());
            }
        }
        Subspace { basis, pivots }
    }

    pub fn span_of_vectors(field: Field, ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Self {
        Self::span(&Matrix::from_columns(field, ambient_dim, vectors))
    }

    /// Null space of `m`.
    pub fn kernel(m: &Matrix) -> Self {
        let n = m.cols();
        let field = m.field();
        let (r, pivots) = m.rref();
        let mut vectors = Vec::new();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![field.zero(); n];
            v[free] = field.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free);
            }
            vectors.push(v);
        }
        Self::span_of_vectors(field, n, &vectors)
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    /// Basis in reduced column echelon form (`ambient_dim × dim`).
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Subspace, context: &'static str) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Residual of `v` after eliminating against the echelon basis; zero iff
    /// `v` lies in the subspace.
    fn residual(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut r = v.to_vec();
        for (j, &p) in self.pivots.iter().enumerate() {
            let f = r[p].clone();
            if f.is_zero() {
                continue;
            }
            for (i, ri) in r.iter_mut().enumerate() {
                let b = self.basis.get(i, j);
                if !b.is_zero() {
                    *ri = &*ri - &(&f * b);
                }
            }
        }
        r
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        self.residual(v).iter().all(Scalar::is_zero)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        other.dim() <= self.dim() && other.basis.columns().all(|c| self.contains_vector(&c))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other, "subspace sum")?;
        if self.contains(other) {
            return Ok(self.clone());
        }
        if other.contains(self) {
            return Ok(other.clone());
        }
        Ok(Self::span(&self.basis.hstack(&[&other.basis])?))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other, "subspace intersection")?;
        if self.contains(other) {
            return Ok(other.clone());
        }
        if other.contains(self) {
            return Ok(self.clone());
        }
        // Ax = By  <=>  (x, y) in ker [A | -B]
        let stacked = self.basis.hstack(&[&other.basis.neg()])?;
        let ker = Self::kernel(&stacked);
        let a = self.dim();
        let top: Vec<usize> = (0..a).collect();
        let mut coeffs = Matrix::zeros(self.field(), a, ker.dim());
        for (j, col) in ker.basis.columns().enumerate() {
            for &i in &top {
                coeffs.set(i, j, col[i].clone());
            }
        }
        Ok(Self::span(&(&self.basis * &coeffs)))
    }

    /// `m(self)`.
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "image: matrix columns vs ambient dimension",
                expected: self.ambient_dim(),
                found: m.cols(),
            });
        }
        Ok(Self::span(&m.checked_mul(&self.basis)?))
    }

    /// `{v : m v ∈ self}`.
    pub fn preimage(&self, m: &Matrix) -> Result<Subspace> {
        if m.rows() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "preimage: matrix rows vs ambient dimension",
                expected: self.ambient_dim(),
                found: m.rows(),
            });
        }
        // rows of `ann` cut out self: ann * w = 0 iff w in self
        let ann = Self::kernel(&self.basis.transpose()).basis.transpose();
        Ok(Self::kernel(&ann.checked_mul(m)?))
    }

    /// `(self ⊂ outer)^⊥` relative to the inner product `g`: the vectors of
    /// `outer` that are `g`-orthogonal to `self`.
    pub fn rel_orth_complement(&self, outer: &Subspace, g: &Gram) -> Result<Subspace> {
        self.check_ambient(outer, "relative orthogonal complement")?;
        if !g.field().is_rational() {
            return Err(Error::PrimeFieldUnsupported("orthogonal complement"));
        }
        if g.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "Gram dimension",
                expected: self.ambient_dim(),
                found: g.dim(),
            });
        }
        if !outer.contains(self) {
            return Err(Error::NotASubset);
        }
        if !g.is_positive_definite()? {
            return Err(Error::IndefiniteGram);
        }
        let pairing = &(&self.basis.transpose() * g.matrix()) * &outer.basis;
        let coeffs = Self::kernel(&pairing);
        Ok(Self::span(&(&outer.basis * coeffs.basis())))
    }

    /// A complement of `self` inside `outer` built from the echelon basis of
    /// `outer`: its columns are taken greedily, in order, whenever they are not
    /// already in the span collected so far.
    pub fn complement_in(&self, outer: &Subspace) -> Result<Subspace> {
        self.check_ambient(outer, "complement")?;
        if !outer.contains(self) {
            return Err(Error::NotASubset);
        }
        let mut current = self.clone();
        let mut picked = Vec::new();
        for col in outer.basis.columns() {
            if current.dim() == outer.dim() {
                break;
            }
            if !current.contains_vector(&col) {
                current = current.sum(&Self::span_of_vectors(
                    self.field(),
                    self.ambient_dim(),
                    std::slice::from_ref(&col),
                ))?;
                picked.push(col);
            }
        }
        Ok(Self::span_of_vectors(self.field(), self.ambient_dim(), &picked))
    }

    /// Coordinates of the columns of `m` in the echelon basis.
    pub fn coordinates(&self, m: &Matrix) -> Option<Matrix> {
        self.basis.solve_in_span(m)
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sort key: (ambient dimension, dimension, basis entries in row-major order).
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient_dim()
            .cmp(&other.ambient_dim())
            .then(self.dim().cmp(&other.dim()))
            .then_with(|| self.basis.entries().cmp(other.basis.entries()))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (j, col) in self.basis.columns().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (i, s) in col.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{s}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}} ⊆ k^{}", self.ambient_dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn span(rows: &[&[i64]]) -> Subspace {
        Subspace::span(&Matrix::from_i64(Q, rows))
    }

    fn e(n: usize, i: usize) -> Subspace {
        let mut v = vec![Q.zero(); n];
        v[i] = Q.one();
        Subspace::span_of_vectors(Q, n, &[v])
    }

    #[test]
    fn canonical_span_examples() {
        assert!(Subspace::span(&Matrix::identity(Q, 3)).is_full());
        assert!(Subspace::span(&Matrix::zeros(Q, 2, 2)).is_zero());
        // columns (1,2), (2,4): one line, normalized so the pivot entry is 1
        let s = span(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis(), &Matrix::from_i64(Q, &[&[1], &[2]]));
        assert_eq!(s, Subspace::span(s.basis()));
    }

    #[test]
    fn kernel_examples() {
        assert!(Subspace::kernel(&Matrix::identity(Q, 3)).is_zero());
        assert!(Subspace::kernel(&Matrix::zeros(Q, 2, 2)).is_full());
        // (1, -1) v = 0  =>  v in span{(1,1)}
        let k = Subspace::kernel(&Matrix::from_i64(Q, &[&[1, -1]]));
        assert_eq!(k, span(&[&[1], &[1]]));
    }

    #[test]
    fn intersect_and_sum_examples() {
        let a = span(&[&[1, 0], &[0, 1], &[0, 0]]);
        let b = span(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert!(e(2, 0).intersect(&e(2, 1)).unwrap().is_zero());
        assert_eq!(a.intersect(&b).unwrap(), e(3, 1));
        assert_eq!(a.sum(&Subspace::zero(Q, 3)).unwrap(), a);
        assert_eq!(e(2, 0).sum(&e(2, 1)).unwrap(), Subspace::full(Q, 2));
        let l1 = span(&[&[1], &[1]]);
        let l2 = span(&[&[1], &[-1]]);
        assert!(l1.sum(&l2).unwrap().is_full());
        assert!(a.intersect(&e(2, 0)).is_err());
    }

    #[test]
    fn preimage_examples() {
        let m = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        let zero = Subspace::zero(Q, 2);
        assert_eq!(zero.preimage(&m).unwrap(), Subspace::kernel(&m));
        let w = span(&[&[3], &[1]]);
        assert_eq!(w.preimage(&Matrix::identity(Q, 2)).unwrap(), w);
        let shear = Matrix::from_i64(Q, &[&[1, 1], &[0, 1]]);
        assert_eq!(e(2, 0).preimage(&shear).unwrap(), e(2, 0));
    }

    #[test]
    fn orthogonal_complement_examples() {
        let g = Gram::identity(Q, 2);
        let full = Subspace::full(Q, 2);
        let zero = Subspace::zero(Q, 2);
        assert_eq!(zero.rel_orth_complement(&full, &g).unwrap(), full);
        assert!(full.rel_orth_complement(&full, &g).unwrap().is_zero());
        assert_eq!(e(2, 0).rel_orth_complement(&full, &g).unwrap(), e(2, 1));
        // w.r.t. ((2,1),(1,2)) the complement of e1 is spanned by (1,-2)
        let g2 = Gram::new(Matrix::from_i64(Q, &[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!(
            e(2, 0).rel_orth_complement(&full, &g2).unwrap(),
            span(&[&[1], &[-2]])
        );
        assert!(matches!(
            e(2, 1).rel_orth_complement(&e(2, 0), &g),
            Err(Error::NotASubset)
        ));
        let bad = Gram::new(Matrix::from_i64(Q, &[&[1, 0], &[0, -1]])).unwrap();
        assert!(matches!(
            zero.rel_orth_complement(&full, &bad),
            Err(Error::IndefiniteGram)
        ));
    }

    #[test]
    fn complement_over_f2() {
        let f2 = Field::prime(2).unwrap();
        let full = Subspace::full(f2, 2);
        let diag = Subspace::span(&Matrix::from_i64(f2, &[&[1], &[1]]));
        let c = diag.complement_in(&full).unwrap();
        // the three lines of F_2^2 are spanned by (1,0), (0,1), (1,1);
        // the greedy pick is the first echelon column, (1,0)
        let lines: Vec<Subspace> = [[1, 0], [0, 1], [1, 1]]
            .iter()
            .map(|v| Subspace::span(&Matrix::from_i64(f2, &[&[v[0]], &[v[1]]])))
            .collect();
        let complements: Vec<&Subspace> = lines
            .iter()
            .filter(|l| l.intersect(&diag).unwrap().is_zero())
            .collect();
        assert_eq!(complements.len(), 2);
        assert_eq!(c, lines[0]);
        assert!(complements.contains(&&c));
        assert_eq!(Subspace::zero(f2, 2).complement_in(&full).unwrap(), full);
        assert!(full.complement_in(&full).unwrap().is_zero());
    }
}
