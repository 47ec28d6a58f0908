//! Blocks, generalized barcodes and the tame cover, read off a stabilized
//! local structure.
//!
//! A nonzero graded element at `x` is a member `W` of the flag at `x` whose
//! piece `W / ΣS(W)` is nonzero. Along `x -> y` it survives exactly when
//! `φ(W) ≠ 0`, becoming `φ(W)`; backwards along `z -> x` it survives exactly
//! when `W ⊆ im φ`, becoming `φ⁻¹(W)`. Transports are the induced maps on
//! these subquotients, written in the chosen piece bases.

mod barcode;

use std::collections::{BTreeMap, HashSet, VecDeque};

pub use barcode::{barcode_1d, Barcode};

use crate::cmod::{CModule, MorphismTable};
use crate::error::{Error, Result};
use crate::ip::{check_ipc, composite_defects, IpVerdict, WipStructure};
use crate::linalg::{Gram, Matrix, Subspace};
use crate::local::LocalStructure;
use crate::multiflag::GradedPolicy;
use crate::poset::{cycle_basis_within, PosetCategory, Subcategory, ZigZagLoop};

/// How graded pieces are realized as actual subspaces.
#[derive(Clone, Copy, Debug)]
pub enum PiecePolicy<'a> {
    /// Relative orthogonal complements for one Gram per object.
    Orthogonal(&'a [Gram]),
    /// Echelon-pivot complements (any field, not canonical).
    Complement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedElement {
    pub object: usize,
    pub member: Subspace,
    pub lower: Subspace,
    pub piece: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    support: Subcategory,
    dim: usize,
    elements: Vec<GradedElement>,
    transports: BTreeMap<usize, Matrix>,
}

impl Block {
    pub fn support(&self) -> &Subcategory {
        &self.support
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Graded elements, one per support object, in support order.
    pub fn elements(&self) -> &[GradedElement] {
        &self.elements
    }

    pub fn element(&self, x: usize) -> Option<&GradedElement> {
        self.elements.iter().find(|e| e.object == x)
    }

    /// `dim × dim` matrix of the induced map along Hasse edge `e`.
    pub fn transport(&self, e: usize) -> Option<&Matrix> {
        self.transports.get(&e)
    }

    pub fn transports(&self) -> &BTreeMap<usize, Matrix> {
        &self.transports
    }

    pub fn key(&self, cat: &PosetCategory) -> Vec<String> {
        self.support.names(cat)
    }

    /// The block as a module in its own right: `k^dim` on the support,
    /// transports inside, zero elsewhere.
    pub fn to_module(&self, cat: &PosetCategory) -> CModule {
        let field = self.elements[0].piece.field();
        let dims: Vec<usize> = (0..cat.len())
            .map(|x| if self.support.contains(x) { self.dim } else { 0 })
            .collect();
        let maps = cat
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(a, b))| match self.transports.get(&e) {
                Some(t) => t.clone(),
                None => Matrix::zeros(field, dims[b], dims[a]),
            })
            .collect();
        CModule::new(cat.clone(), field, dims, maps).expect("block shapes")
    }

    /// Operator obtained by going once around each loop, acting on piece
    /// coordinates at the loop's base point.
    pub fn holonomy(&self, cat: &PosetCategory, loops: &[ZigZagLoop]) -> Result<Vec<Matrix>> {
        let field = self.elements[0].piece.field();
        let mut out = Vec::with_capacity(loops.len());
        for l in loops {
            if l.vertices(cat).iter().any(|&v| !self.support.contains(v)) {
                return Err(Error::LoopExitsSupport);
            }
            let mut op = Matrix::identity(field, self.dim);
            for s in &l.steps {
                let t = self.transports.get(&s.edge).ok_or(Error::LoopExitsSupport)?;
                let step = if s.forward { t.clone() } else { t.inverse()? };
                op = &step * &op;
            }
            out.push(op);
        }
        Ok(out)
    }

    /// Holonomy around the fundamental loops of the support itself.
    pub fn support_holonomy(&self, cat: &PosetCategory) -> Result<Vec<(ZigZagLoop, Matrix)>> {
        let loops = cycle_basis_within(cat, &self.support);
        let ops = self.holonomy(cat, &loops)?;
        Ok(loops.into_iter().zip(ops).collect())
    }
}

/// Splitting of a holonomy-free block into rank-one blocks.
#[derive(Clone, Debug)]
pub struct GbcSplitting {
    pub gbcs: Vec<Block>,
    /// Per support object (in support order): columns are the images of the
    /// base basis vectors, in piece coordinates.
    pub change_of_basis: Vec<Matrix>,
}

/// Transports a basis of the base piece along a spanning tree of the support.
/// Fails with the first loop that does not come back to the identity.
pub fn gbc_decompose(block: &Block, cat: &PosetCategory) -> Result<GbcSplitting> {
    for (i, (_, op)) in block.support_holonomy(cat)?.into_iter().enumerate() {
        if !op.is_identity() {
            return Err(Error::HolonomyPresent {
                loop_index: i,
                operator: op,
            });
        }
    }
    let field = block.elements[0].piece.field();
    let members = block.support.members();
    let base = members[0];
    let mut frame: BTreeMap<usize, Matrix> = BTreeMap::new();
    frame.insert(base, Matrix::identity(field, block.dim));
    let mut queue = VecDeque::from([base]);
    while let Some(u) = queue.pop_front() {
        let a_u = frame[&u].clone();
        for (&e, t) in &block.transports {
            let (s, d) = cat.edges()[e];
            let (next, a_v) = if s == u {
                (d, t * &a_u)
            } else if d == u {
                (s, &t.inverse()? * &a_u)
            } else {
                continue;
            };
            if let std::collections::btree_map::Entry::Vacant(slot) = frame.entry(next) {
                slot.insert(a_v);
                queue.push_back(next);
            }
        }
    }

    let mut gbcs = Vec::with_capacity(block.dim);
    for i in 0..block.dim {
        // g_v = P_v A_v e_i; the stored echelon generator is c_v g_v
        let mut scale = BTreeMap::new();
        let elements = block
            .elements
            .iter()
            .map(|el| {
                let g = el.piece.basis().mul_vec(&frame[&el.object].column(i));
                let piece = Subspace::span_of_vectors(field, el.piece.ambient_dim(), std::slice::from_ref(&g));
                let stored = piece.basis().column(0);
                let j = g.iter().position(|v| !v.is_zero()).expect("nonzero");
                let c = &stored[j] * &g[j].inv().expect("nonzero");
                scale.insert(el.object, c);
                GradedElement {
                    object: el.object,
                    member: el.member.clone(),
                    lower: el.lower.clone(),
                    piece,
                }
            })
            .collect::<Vec<_>>();
        // g_a maps to g_b modulo the lower sum, so b_a maps to (c_a / c_b) b_b
        let transports = block
            .transports
            .keys()
            .map(|&e| {
                let (a, b) = cat.edges()[e];
                let s = &scale[&a] * &scale[&b].inv().expect("nonzero");
                (e, Matrix::from_columns(field, 1, &[vec![s]]))
            })
            .collect();
        gbcs.push(Block {
            support: block.support.clone(),
            dim: 1,
            elements,
            transports,
        });
    }
    let change_of_basis = members.iter().map(|x| frame[x].clone()).collect();
    Ok(GbcSplitting {
        gbcs,
        change_of_basis,
    })
}

pub fn graded_elements(
    m: &CModule,
    ls: &LocalStructure,
    policy: PiecePolicy<'_>,
) -> Result<Vec<Vec<GradedElement>>> {
    let mut out = Vec::with_capacity(m.category().len());
    for x in 0..m.category().len() {
        let gp = match policy {
            PiecePolicy::Orthogonal(grams) => GradedPolicy::Orthogonal(grams[x].clone()),
            PiecePolicy::Complement => GradedPolicy::Complement,
        };
        let dec = ls.flag(x).graded(&gp)?;
        out.push(
            dec.pieces
                .into_iter()
                .filter(|p| p.dim() > 0)
                .map(|p| GradedElement {
                    object: x,
                    member: p.member,
                    lower: p.lower,
                    piece: p.piece,
                })
                .collect(),
        );
    }
    Ok(out)
}

/// Follows the graded element `(x, w)` through the Hasse diagram and returns
/// the member reached at every object where it survives.
///
/// Members `A` at `a` and `B` at `b` are linked along `φ: a → b` when
/// `φ(A) = B` and `φ` does not already map the lower sum of `A` onto `B`;
/// the induced map of graded pieces is then an isomorphism. A link is
/// followed only when no other member at `a` is linked to `B`.
pub fn block_category(m: &CModule, ls: &LocalStructure, x: usize, w: &Subspace) -> Result<BTreeMap<usize, Subspace>> {
    if !ls.is_stabilized() {
        return Err(Error::NotStabilized);
    }
    let cat = m.category();
    let lowers: Vec<Vec<Subspace>> = (0..cat.len()).map(|y| ls.flag(y).lower_sums()).collect();
    let lower_of = |y: usize, u: &Subspace| -> Option<&Subspace> {
        let i = ls.flag(y).members().binary_search(u).ok()?;
        Some(&lowers[y][i])
    };
    match lower_of(x, w) {
        Some(l) if l.dim() < w.dim() => {}
        _ => return Err(Error::ZeroPiece),
    }
    // members with nonzero piece at `z` linked to `b` along `phi`; a link
    // is only followed when it is the only one
    let hits = |z: usize, phi: &Matrix, b: &Subspace| -> Result<Vec<Subspace>> {
        let mut out = Vec::new();
        for (u, lu) in ls.flag(z).members().iter().zip(&lowers[z]) {
            if lu.dim() < u.dim() && u.image(phi)? == *b && lu.image(phi)? != *b {
                out.push(u.clone());
            }
        }
        Ok(out)
    };
    let mut found: BTreeMap<usize, Subspace> = BTreeMap::new();
    found.insert(x, w.clone());
    let mut queue = VecDeque::from([x]);
    while let Some(v) = queue.pop_front() {
        let wv = found[&v].clone();
        let lv = lower_of(v, &wv).expect("member").clone();
        let mut reach = Vec::new();
        for &e in cat.out_edges(v) {
            let phi = m.edge_map(e);
            let img = wv.image(phi)?;
            if lv.image(phi)? != img && hits(v, phi, &img)? == [wv.clone()] {
                reach.push((cat.edges()[e].1, img));
            }
        }
        for &e in cat.in_edges(v) {
            let z = cat.edges()[e].0;
            if let [u] = hits(z, m.edge_map(e), &wv)?.as_slice() {
                reach.push((z, u.clone()));
            }
        }
        for (y, u) in reach {
            match found.get(&y) {
                Some(prev) if *prev != u => {
                    return Err(Error::InconsistentDims(format!(
                        "two members reached at {}",
                        cat.name(y)
                    )))
                }
                Some(_) => {}
                None => {
                    if lower_of(y, &u).is_none() {
                        return Err(Error::InconsistentDims(format!(
                            "transported subspace at {} is not a flag member",
                            cat.name(y)
                        )));
                    }
                    found.insert(y, u);
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(found)
}

/// All blocks, in order of discovery (objects in declaration order, members
/// in canonical order).
pub fn enumerate_blocks(m: &CModule, ls: &LocalStructure, policy: PiecePolicy<'_>) -> Result<Vec<Block>> {
    if !ls.is_stabilized() {
        return Err(Error::NotStabilized);
    }
    let cat = m.category();
    let graded = graded_elements(m, ls, policy)?;
    let mut done: HashSet<(usize, Subspace)> = HashSet::new();
    // support -> graded elements reached from each start with that support
    let mut groups: BTreeMap<Subcategory, Vec<Vec<GradedElement>>> = BTreeMap::new();
    for x in 0..cat.len() {
        for start in &graded[x] {
            if done.contains(&(x, start.member.clone())) {
                continue;
            }
            let reached = block_category(m, ls, x, &start.member)?;
            let support = Subcategory::new(reached.keys().copied());
            let key = support.names(cat).join(",");
            if !cat.is_admissible(&support) {
                return Err(Error::InconsistentDims(key));
            }
            let mut elements = Vec::with_capacity(reached.len());
            for (&y, member) in &reached {
                let el = graded[y]
                    .iter()
                    .find(|g| g.member == *member)
                    .ok_or_else(|| Error::InconsistentDims(key.clone()))?;
                if el.piece.dim() != start.piece.dim() || !done.insert((y, member.clone())) {
                    return Err(Error::InconsistentDims(key));
                }
                elements.push(el.clone());
            }
            groups.entry(support).or_default().push(elements);
        }
    }
    let mut blocks = Vec::with_capacity(groups.len());
    for (support, parts) in groups {
        let key = || support.names(cat).join(",");
        let elements = if parts.len() == 1 {
            parts.into_iter().next().expect("one part")
        } else {
            merge_parts(&parts).ok_or_else(|| Error::InconsistentDims(key()))?
        };
        let dim = elements[0].piece.dim();
        let mut transports = BTreeMap::new();
        for (e, &(a, b)) in cat.edges().iter().enumerate() {
            if !(support.contains(a) && support.contains(b)) {
                continue;
            }
            let ea = elements.iter().find(|g| g.object == a).expect("in support");
            let eb = elements.iter().find(|g| g.object == b).expect("in support");
            let t = subquotient_map(m.edge_map(e), ea, eb).ok_or_else(|| Error::InconsistentDims(key()))?;
            if t.rank() != dim {
                return Err(Error::InconsistentDims(key()));
            }
            transports.insert(e, t);
        }
        blocks.push(Block {
            support,
            dim,
            elements,
            transports,
        });
    }
    Ok(blocks)
}

/// Several graded elements per object with one support: sum them object by
/// object. `None` when the summed pieces meet the summed lower parts.
fn merge_parts(parts: &[Vec<GradedElement>]) -> Option<Vec<GradedElement>> {
    let sum = |spaces: Vec<&Subspace>| -> Option<Subspace> {
        let (first, rest) = spaces.split_first()?;
        rest.iter().try_fold((*first).clone(), |acc, s| acc.sum(s).ok())
    };
    (0..parts[0].len())
        .map(|i| {
            let at: Vec<&GradedElement> = parts.iter().map(|p| &p[i]).collect();
            let piece = sum(at.iter().map(|g| &g.piece).collect())?;
            let lower = sum(at.iter().map(|g| &g.lower).collect())?;
            let member = sum(at.iter().map(|g| &g.member).collect())?;
            let total: usize = at.iter().map(|g| g.piece.dim()).sum();
            if piece.dim() != total || piece.sum(&lower).ok()?.dim() != total + lower.dim() {
                return None;
            }
            Some(GradedElement {
                object: at[0].object,
                member,
                lower,
                piece,
            })
        })
        .collect()
}

// φ restricted to piece(a), written in the basis piece(b) ⊕ lower(b) and
// projected to the piece coordinates
fn subquotient_map(phi: &Matrix, a: &GradedElement, b: &GradedElement) -> Option<Matrix> {
    let image = phi * a.piece.basis();
    let frame = b.piece.basis().hstack(&[b.lower.basis()]).ok()?;
    let coords = frame.solve_in_span(&image)?;
    let d = b.piece.dim();
    let rows: Vec<usize> = (0..d).collect();
    Some(coords.transpose().select_columns(&rows).transpose())
}

/// Generalized barcode dimension: block dimension per realized support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbcdVector {
    /// Support object names (declaration order) and dimension, ordered by
    /// support.
    pub entries: Vec<(Vec<String>, usize)>,
}

impl GbcdVector {
    pub fn get<S: AsRef<str>>(&self, support: &[S]) -> usize {
        self.entries
            .iter()
            .find(|(k, _)| k.len() == support.len() && k.iter().zip(support).all(|(a, b)| a == b.as_ref()))
            .map_or(0, |(_, d)| *d)
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|(_, d)| d).sum()
    }
}

pub fn gbcd_vector(m: &CModule, ls: &LocalStructure) -> Result<GbcdVector> {
    let mut blocks = enumerate_blocks(m, ls, PiecePolicy::Complement)?;
    blocks.sort_by(|a, b| a.support.cmp(&b.support));
    Ok(GbcdVector {
        entries: blocks
            .iter()
            .map(|b| (b.key(m.category()), b.dim))
            .collect(),
    })
}

#[derive(Clone, Debug)]
pub struct TameCover {
    pub blocks: Vec<Block>,
    /// `T(M)`, the direct sum of the blocks as modules.
    pub cover: CModule,
    /// `p_M` at each object: the piece bases of the blocks through it.
    pub projection: Vec<Matrix>,
    /// `dim T(M)(x) − dim M(x)`.
    pub kernel_dims: Vec<usize>,
}

impl TameCover {
    pub fn is_isomorphism(&self) -> bool {
        self.kernel_dims.iter().all(|&k| k == 0)
    }
}

/// Requires `ip` to pass [`check_ipc`] and to leave every composite an
/// isometry off its kernel as well; pieces are then orthogonal
/// complements and the inclusions assemble into a module map `T(M) -> M`.
pub fn tame_cover(m: &CModule, t: &MorphismTable, ls: &LocalStructure, ip: &WipStructure) -> Result<TameCover> {
    if !ls.is_stabilized() {
        return Err(Error::NotStabilized);
    }
    match check_ipc(m, t, ip)?.verdict {
        IpVerdict::Verified => {}
        other => return Err(Error::NoVerifiedIpc(other.describe(m.category()))),
    }
    if let Some(&(x, y)) = composite_defects(m, t, ip)?.first() {
        let cat = m.category();
        return Err(Error::NoVerifiedIpc(format!(
            "composite {} -> {} is not an isometry off its kernel",
            cat.name(x),
            cat.name(y)
        )));
    }
    let blocks = enumerate_blocks(m, ls, PiecePolicy::Orthogonal(ip.grams()))?;
    let cat = m.category();
    let field = m.field();
    let modules: Vec<CModule> = blocks.iter().map(|b| b.to_module(cat)).collect();
    let cover = if modules.is_empty() {
        CModule::zero(cat.clone(), field)
    } else {
        CModule::direct_sum_all(&modules.iter().collect::<Vec<_>>())?
    };
    let mut projection = Vec::with_capacity(cat.len());
    let mut kernel_dims = Vec::with_capacity(cat.len());
    for x in 0..cat.len() {
        let parts: Vec<&Matrix> = blocks
            .iter()
            .filter_map(|b| b.element(x).map(|e| e.piece.basis()))
            .collect();
        let p = Matrix::zeros(field, m.dim(x), 0).hstack(&parts)?;
        if p.rank() != m.dim(x) {
            return Err(Error::InconsistentDims(format!("projection at {} is not onto", cat.name(x))));
        }
        kernel_dims.push(p.cols() - m.dim(x));
        projection.push(p);
    }
    for (e, &(a, b)) in cat.edges().iter().enumerate() {
        let lhs = m.edge_map(e) * &projection[a];
        let rhs = &projection[b] * cover.edge_map(e);
        if lhs != rhs {
            return Err(Error::InconsistentDims(format!(
                "projection does not commute along {} -> {}",
                cat.name(a),
                cat.name(b)
            )));
        }
    }
    Ok(TameCover {
        blocks,
        cover,
        projection,
        kernel_dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::local::{compute, LocalConfig};

    const Q: crate::linalg::Field = crate::linalg::Field::Rational;

    fn stable(m: &CModule) -> LocalStructure {
        let t = m.validate().unwrap();
        let ls = compute(m, &t, LocalConfig::default());
        assert!(ls.is_stabilized());
        ls
    }

    #[test]
    fn chain_with_zero_map_has_two_blocks() {
        let m = CModule::new(
            PosetCategory::chain(3),
            Q,
            vec![1, 1, 1],
            vec![Matrix::identity(Q, 1), Matrix::zeros(Q, 1, 1)],
        )
        .unwrap();
        let v = gbcd_vector(&m, &stable(&m)).unwrap();
        assert_eq!(v.get(&["1", "2"]), 1);
        assert_eq!(v.get(&["3"]), 1);
        assert_eq!(v.total(), 3 - 1);
    }

    #[test]
    fn d5_block_holonomy() {
        let m = gallery::d5_obstruction();
        let blocks = enumerate_blocks(&m, &stable(&m), PiecePolicy::Complement).unwrap();
        assert_eq!(blocks.len(), 1);
        let hol = blocks[0].support_holonomy(m.category()).unwrap();
        assert_eq!(hol.len(), 1);
        let d = hol[0].1.determinant().unwrap();
        let two = Q.from_i64(2);
        assert!(d == two || d == two.inv().unwrap());
        assert!(gbc_decompose(&blocks[0], m.category()).is_err());
    }

    #[test]
    fn gamma1_block_splits() {
        let m = gallery::gamma1_block();
        let cat = m.category();
        let blocks = enumerate_blocks(&m, &stable(&m), PiecePolicy::Complement).unwrap();
        let s = gbc_decompose(&blocks[0], cat).unwrap();
        assert_eq!(s.gbcs.len(), 2);
        assert!(s.gbcs.iter().all(|b| b.dim() == 1 && b.support() == blocks[0].support()));
        for c in &s.change_of_basis {
            assert_eq!(c.rank(), 2);
        }
    }

    #[test]
    fn three_lines_cover_has_one_extra_dimension() {
        let m = gallery::three_lines();
        let t = m.validate().unwrap();
        let ls = stable(&m);
        assert_eq!(ls.total_excess, Some(1));
        let mut grams: Vec<Gram> = m.dims().iter().map(|&d| Gram::identity(Q, d)).collect();
        grams[m.category().index_of("l3").unwrap()] = Gram::new(Matrix::from_i64(Q, &[&[2]])).unwrap();
        let w = WipStructure::new(&m, grams).unwrap();
        let cover = tame_cover(&m, &t, &ls, &w).unwrap();
        assert_eq!(cover.kernel_dims.iter().sum::<usize>(), 1);
        assert!(!cover.is_isomorphism());
    }

    #[test]
    fn tame_cover_refuses_bad_grams() {
        let m = gallery::three_lines();
        let t = m.validate().unwrap();
        let ls = stable(&m);
        let w = WipStructure::identity(&m);
        assert!(matches!(tame_cover(&m, &t, &ls, &w), Err(Error::NoVerifiedIpc(_))));
    }
}
