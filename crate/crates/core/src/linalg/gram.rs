use super::matrix::Matrix;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// A symmetric bilinear form on `k^n`, given by its matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gram {
    matrix: Matrix,
}

impl Gram {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_symmetric() {
            return Err(Error::AsymmetricGram);
        }
        Ok(Gram { matrix })
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Gram {
            matrix: Matrix::identity(field, n),
        }
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// `<v, w>`.
    pub fn pair(&self, v: &[Scalar], w: &[Scalar]) -> Scalar {
        let gw = self.matrix.mul_vec(w);
        v.iter()
            .zip(&gw)
            .fold(self.field().zero(), |acc, (a, b)| &acc + &(a * b))
    }

    /// Sylvester's criterion on the leading principal minors. Rationals only.
    pub fn is_positive_definite(&self) -> Result<bool> {
        if !self.field().is_rational() {
            return Err(Error::PrimeFieldUnsupported("positive definiteness"));
        }
        for k in 1..=self.dim() {
            let idx: Vec<usize> = (0..k).collect();
            let minor = leading_block(&self.matrix, &idx).determinant()?;
            if minor.signum() != Some(1) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The form `b^T G b` induced on the coordinates of the columns of `b`.
    pub fn restrict(&self, basis: &Matrix) -> Gram {
        Gram {
            matrix: &(&basis.transpose() * &self.matrix) * basis,
        }
    }

    /// Block-diagonal form on a direct sum.
    pub fn direct_sum(field: Field, parts: &[&Gram]) -> Gram {
        let blocks: Vec<&Matrix> = parts.iter().map(|g| &g.matrix).collect();
        Gram {
            matrix: Matrix::block_diag(field, &blocks),
        }
    }
}

fn leading_block(m: &Matrix, idx: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(m.field(), idx.len(), idx.len());
    for (i, &r) in idx.iter().enumerate() {
        for (j, &c) in idx.iter().enumerate() {
            out.set(i, j, m.get(r, c).clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn positive_definite_examples() {
        assert!(Gram::identity(Q, 3).is_positive_definite().unwrap());
        let g = Gram::new(Matrix::from_i64(Q, &[&[1, 0], &[0, -1]])).unwrap();
        assert!(!g.is_positive_definite().unwrap());
        // leading minors 2 and 3
        let g = Gram::new(Matrix::from_i64(Q, &[&[2, 1], &[1, 2]])).unwrap();
        assert!(g.is_positive_definite().unwrap());
        assert!(Gram::new(Matrix::from_i64(Q, &[&[1, 2], &[0, 1]])).is_err());
        let f5 = Field::prime(5).unwrap();
        assert!(Gram::identity(f5, 2).is_positive_definite().is_err());
    }
}
