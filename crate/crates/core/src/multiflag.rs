//! Finite families of subspaces of one vector space, closed under
//! intersection, with their associated graded pieces.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg::{Field, Gram, Matrix, Subspace};

pub const DEFAULT_FLAG_CAP: usize = 4096;

/// An intersection-closed family containing `0` and the whole space, kept in
/// canonical order (dimension first, then echelon entries).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiFlag {
    field: Field,
    ambient_dim: usize,
    members: Vec<Subspace>,
}

/// How each graded piece is chosen inside its member. Dimensions never depend
/// on the choice; only the actual subspaces do.
#[derive(Clone, Debug)]
pub enum GradedPolicy {
    /// Orthogonal complement of the lower sum for a positive definite form.
    Orthogonal(Gram),
    /// Echelon-pivot complement; works over any field but is not canonical.
    Complement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub member: Subspace,
    /// Sum of the members properly contained in `member`.
    pub lower: Subspace,
    pub piece: Subspace,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.piece.dim()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDecomposition {
    pub pieces: Vec<GradedPiece>,
    pub excess: usize,
}

impl GradedDecomposition {
    pub fn piece_dims(&self) -> Vec<usize> {
        self.pieces.iter().map(GradedPiece::dim).collect()
    }

    /// True when the pieces together form a direct sum decomposition of the
    /// ambient space (checked by rank, not by the dimension count).
    pub fn spans_directly(&self, ambient_dim: usize) -> bool {
        let Some(first) = self.pieces.first() else {
            return ambient_dim == 0;
        };
        let field = first.piece.field();
        let total: usize = self.pieces.iter().map(GradedPiece::dim).sum();
        if total != ambient_dim {
            return false;
        }
        let bases: Vec<&Matrix> = self.pieces.iter().map(|p| p.piece.basis()).collect();
        let stacked = Matrix::zeros(field, ambient_dim, 0)
            .hstack(&bases)
            .expect("shared ambient");
        stacked.rank() == ambient_dim
    }
}

impl MultiFlag {
    /// `{0, V}`.
    pub fn trivial(field: Field, ambient_dim: usize) -> Self {
        let mut members = vec![Subspace::zero(field, ambient_dim)];
        if ambient_dim > 0 {
            members.push(Subspace::full(field, ambient_dim));
        }
        MultiFlag {
            field,
            ambient_dim,
            members,
        }
    }

    /// The smallest intersection-closed family containing `generators`, `0`
    /// and `V`. Fails once more than `cap` members appear.
    pub fn close(field: Field, ambient_dim: usize, generators: &[Subspace], cap: usize) -> Result<Self> {
        Self::trivial(field, ambient_dim).extend(generators, cap)
    }

    /// Closes `self ∪ extra`, only intersecting pairs that involve something
    /// new.
    pub fn extend(&self, extra: &[Subspace], cap: usize) -> Result<Self> {
        let mut set: BTreeSet<Subspace> = self.members.iter().cloned().collect();
        let mut queue: Vec<Subspace> = Vec::new();
        for g in extra {
            if g.field() != self.field {
                return Err(Error::FieldMismatch);
            }
            if g.ambient_dim() != self.ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: "multi-flag generator",
                    expected: self.ambient_dim,
                    found: g.ambient_dim(),
                });
            }
            if set.insert(g.clone()) {
                queue.push(g.clone());
            }
        }
        if set.len() > cap {
            return Err(Error::FlagCapExceeded { cap });
        }
        while let Some(w) = queue.pop() {
            let snapshot: Vec<Subspace> = set.iter().cloned().collect();
            for u in &snapshot {
                let i = w.intersect(u)?;
                if !set.contains(&i) {
                    set.insert(i.clone());
                    queue.push(i);
                    if set.len() > cap {
                        return Err(Error::FlagCapExceeded { cap });
                    }
                }
            }
        }
        Ok(MultiFlag {
            field: self.field,
            ambient_dim: self.ambient_dim,
            members: set.into_iter().collect(),
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Subspace) -> bool {
        self.members.binary_search(w).is_ok()
    }

    /// Totally ordered by inclusion.
    pub fn is_semi_flag(&self) -> bool {
        self.members.windows(2).all(|p| p[1].contains(&p[0]))
    }

    /// For each member, the sum of the members properly inside it.
    pub fn lower_sums(&self) -> Vec<Subspace> {
        let mut out: Vec<Subspace> = Vec::with_capacity(self.members.len());
        for (i, w) in self.members.iter().enumerate() {
            let mut acc = Subspace::zero(self.field, self.ambient_dim);
            // members are sorted by dimension, so proper subsets come first
            for u in &self.members[..i] {
                if u.dim() < w.dim() && w.contains(u) && !acc.contains(u) {
                    acc = acc.sum(u).expect("shared ambient");
                }
            }
            out.push(acc);
        }
        out
    }

    /// `Σ_W (dim W − dim ΣS(W)) − dim V`.
    pub fn excess(&self) -> usize {
        let total: usize = self
            .members
            .iter()
            .zip(self.lower_sums())
            .map(|(w, s)| w.dim() - s.dim())
            .sum();
        debug_assert!(total >= self.ambient_dim);
        total.saturating_sub(self.ambient_dim)
    }

    pub fn is_general_position(&self) -> bool {
        self.excess() == 0
    }

    pub fn graded(&self, policy: &GradedPolicy) -> Result<GradedDecomposition> {
        if let GradedPolicy::Orthogonal(g) = policy {
            if g.dim() != self.ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: "Gram dimension",
                    expected: self.ambient_dim,
                    found: g.dim(),
                });
            }
            if !g.is_positive_definite()? {
                return Err(Error::IndefiniteGram);
            }
        }
        let mut pieces = Vec::with_capacity(self.members.len());
        let mut total = 0;
        for (w, lower) in self.members.iter().zip(self.lower_sums()) {
            let piece = match policy {
                GradedPolicy::Orthogonal(g) => lower.rel_orth_complement(w, g)?,
                GradedPolicy::Complement => lower.complement_in(w)?,
            };
            total += piece.dim();
            pieces.push(GradedPiece {
                member: w.clone(),
                lower,
                piece,
            });
        }
        Ok(GradedDecomposition {
            pieces,
            excess: total.saturating_sub(self.ambient_dim),
        })
    }
}
