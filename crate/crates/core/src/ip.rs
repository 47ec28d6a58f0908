//! Inner products on the vector spaces of a module, the edge isometry
//! condition, a construction for products of chains, and holonomy
//! obstructions.
//!
//! The condition checked is that every Hasse edge map restricts to an
//! isometry from the orthogonal complement of its kernel onto its image.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::{enumerate_blocks, gbc_decompose, Block, PiecePolicy};
use crate::cmod::{CModule, MorphismTable};
use crate::error::{Error, Result};
use crate::linalg::{Field, Gram, Matrix, Scalar, Subspace};
use crate::local::{compute, LocalConfig, LocalStructure};
use crate::poset::{product_of_chains, PosetCategory, ZigZagLoop};

/// One positive definite Gram matrix per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WipStructure {
    grams: Vec<Gram>,
}

impl WipStructure {
    pub fn new(m: &CModule, grams: Vec<Gram>) -> Result<Self> {
        if !m.field().is_rational() {
            return Err(Error::PrimeFieldUnsupported("inner products"));
        }
        if grams.len() != m.dims().len() {
            return Err(Error::DimensionMismatch {
                context: "one Gram per object",
                expected: m.dims().len(),
                found: grams.len(),
            });
        }
        for (g, &d) in grams.iter().zip(m.dims()) {
            if g.dim() != d {
                return Err(Error::DimensionMismatch {
                    context: "Gram size vs object dimension",
                    expected: d,
                    found: g.dim(),
                });
            }
            if !g.is_positive_definite()? {
                return Err(Error::IndefiniteGram);
            }
        }
        Ok(WipStructure { grams })
    }

    /// The standard dot product everywhere.
    pub fn identity(m: &CModule) -> Self {
        WipStructure {
            grams: m.dims().iter().map(|&d| Gram::identity(m.field(), d)).collect(),
        }
    }

    /// `AᵀA + I` per object with `A` drawn from `{-3..3}`.
    pub fn random(m: &CModule, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = Field::Rational;
        let grams = m
            .dims()
            .iter()
            .map(|&d| {
                let data = (0..d * d).map(|_| field.from_i64(rng.random_range(-3..=3))).collect();
                let a = Matrix::from_row_major(field, d, d, data).expect("square");
                let g = (&a.transpose() * &a).add(&Matrix::identity(field, d)).expect("square");
                Gram::new(g).expect("symmetric")
            })
            .collect();
        WipStructure { grams }
    }

    pub fn grams(&self) -> &[Gram] {
        &self.grams
    }

    pub fn gram(&self, x: usize) -> &Gram {
        &self.grams[x]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IpVerdict {
    Verified,
    /// `⟨φv, φw⟩_y ≠ ⟨v, w⟩_x` for `v, w` orthogonal to the kernel of edge
    /// `edge`.
    Violated {
        edge: usize,
        v: Vec<Scalar>,
        w: Vec<Scalar>,
        source_value: Scalar,
        target_value: Scalar,
    },
    /// A block whose holonomy around `cycle` has determinant other than ±1;
    /// no choice of inner products can make the module's maps isometric.
    Obstructed {
        support: Vec<String>,
        cycle: ZigZagLoop,
        operator: Matrix,
    },
    /// The determinant test found nothing. This does not mean an inner
    /// product structure exists.
    NoObstructionFound,
}

impl IpVerdict {
    pub fn describe(&self, cat: &PosetCategory) -> String {
        match self {
            IpVerdict::Verified => "verified".into(),
            IpVerdict::Violated {
                edge,
                source_value,
                target_value,
                ..
            } => {
                let (a, b) = cat.edges()[*edge];
                format!(
                    "edge {} -> {} is not an isometry off its kernel ({} vs {})",
                    cat.name(a),
                    cat.name(b),
                    target_value,
                    source_value
                )
            }
            IpVerdict::Obstructed { cycle, operator, .. } => format!(
                "holonomy {} around {}",
                operator,
                cycle.render(cat)
            ),
            IpVerdict::NoObstructionFound => "no obstruction found".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpcReport {
    pub verdict: IpVerdict,
}

/// First pair of basis vectors of `ker(φ)^⊥` whose inner product `φ` fails to
/// preserve, with both values.
type Defect = (Vec<Scalar>, Vec<Scalar>, Scalar, Scalar);

fn isometry_defect(phi: &Matrix, gx: &Gram, gy: &Gram) -> Result<Option<Defect>> {
    let full = Subspace::full(phi.field(), phi.cols());
    let perp = Subspace::kernel(phi).rel_orth_complement(&full, gx)?;
    let b = perp.basis();
    let source = gx.restrict(b);
    let target = gy.restrict(&(phi * b));
    for i in 0..b.cols() {
        for j in i..b.cols() {
            let (s, t) = (source.matrix().get(i, j), target.matrix().get(i, j));
            if s != t {
                return Ok(Some((b.column(i), b.column(j), s.clone(), t.clone())));
            }
        }
    }
    Ok(None)
}

/// Checks each Hasse edge. Composites are not checked.
pub fn check_ipc(m: &CModule, _t: &MorphismTable, w: &WipStructure) -> Result<IpcReport> {
    if !m.field().is_rational() {
        return Err(Error::PrimeFieldUnsupported("inner products"));
    }
    for (e, &(x, y)) in m.category().edges().iter().enumerate() {
        if let Some((v, w, source_value, target_value)) = isometry_defect(m.edge_map(e), w.gram(x), w.gram(y))? {
            return Ok(IpcReport {
                verdict: IpVerdict::Violated { edge: e, v, w, source_value, target_value },
            });
        }
    }
    Ok(IpcReport {
        verdict: IpVerdict::Verified,
    })
}

/// Comparable pairs `x < y` whose composite is not an isometry off its
/// kernel, even though every edge may be.
pub fn composite_defects(m: &CModule, t: &MorphismTable, w: &WipStructure) -> Result<Vec<(usize, usize)>> {
    if !m.field().is_rational() {
        return Err(Error::PrimeFieldUnsupported("inner products"));
    }
    let cat = m.category();
    let mut bad = Vec::new();
    for x in 0..cat.len() {
        for y in cat.up_set(x) {
            if y != x && isometry_defect(t.get(x, y), w.gram(x), w.gram(y))?.is_some() {
                bad.push((x, y));
            }
        }
    }
    Ok(bad)
}

/// Inner products for a module over a product of chains.
///
/// Tame modules whose blocks split off are handled exactly: each block frame
/// is made orthonormal and the result is pulled back through the splitting.
/// Otherwise the Grams are built object by object along a linear extension,
/// forced on the images of incoming edges and the identity on a complement,
/// backtracking over the choice of complement.
/// Either way the result is checked with [`check_ipc`] before it is returned.
pub fn construct_ip_persistence(m: &CModule, t: &MorphismTable) -> Result<WipStructure> {
    let cat = m.category();
    if product_of_chains(cat).is_none() {
        return Err(Error::NotProductOfChains);
    }
    if !m.field().is_rational() {
        return Err(Error::PrimeFieldUnsupported("inner products"));
    }
    let ls = compute(m, t, LocalConfig::default());
    let grams = match split_grams(m, &ls) {
        Some(g) => g,
        None => sweep_grams(m, &ls)?,
    };
    let w = WipStructure { grams };
    match check_ipc(m, t, &w)?.verdict {
        IpVerdict::Verified => Ok(w),
        other => Err(Error::NoVerifiedIpc(other.describe(cat))),
    }
}

const SWEEP_BUDGET: usize = 20_000;
const LATTICE_CAP: usize = 256;

/// Sweep along a linear extension with backtracking. At each object the Gram
/// is forced on the images of incoming edges; the rest of the space is an
/// orthogonal complement with the identity Gram, tried in turn among the sums
/// of flag members and finally the pivot complement.
fn sweep_grams(m: &CModule, ls: &LocalStructure) -> Result<Vec<Gram>> {
    let cat = m.category();
    let lattices = (0..cat.len())
        .map(|x| sum_closure(ls.flag(x).members(), LATTICE_CAP))
        .collect::<Result<Vec<_>>>()?;
    let mut grams: Vec<Option<Gram>> = vec![None; cat.len()];
    let mut budget = SWEEP_BUDGET;
    if sweep_from(m, 0, &lattices, &mut grams, &mut budget)? {
        Ok(grams.into_iter().map(|g| g.expect("swept")).collect())
    } else {
        Err(Error::NoVerifiedIpc(if budget == 0 {
            "sweep search budget exhausted".into()
        } else {
            "no sweep choice is consistent".into()
        }))
    }
}

fn sweep_from(
    m: &CModule,
    i: usize,
    lattices: &[Vec<Subspace>],
    grams: &mut Vec<Option<Gram>>,
    budget: &mut usize,
) -> Result<bool> {
    let cat = m.category();
    let Some(&y) = cat.topological_order().get(i) else {
        return Ok(true);
    };
    if *budget == 0 {
        return Ok(false);
    }
    *budget -= 1;
    let field = m.field();
    let n = m.dim(y);
    let Some((basis, form)) = forced_part(m, y, grams)? else {
        return Ok(false);
    };
    let placed = Subspace::span(&basis);
    let full = Subspace::full(field, n);
    let mut candidates: Vec<Subspace> = lattices[y]
        .iter()
        .filter(|w| w.dim() + placed.dim() == n && placed.sum(w).map(|s| s.is_full()).unwrap_or(false))
        .cloned()
        .collect();
    let pivot = placed.complement_in(&full)?;
    if !candidates.contains(&pivot) {
        candidates.push(pivot);
    }
    for extra in candidates {
        let k = extra.dim();
        let c = basis.hstack(&[extra.basis()])?;
        let kform = Matrix::block_diag(field, &[&form, &Matrix::identity(field, k)]);
        // G = C⁻ᵀ K C⁻¹ for the basis C
        let inv = c.inverse()?;
        grams[y] = Some(Gram::new(&(&inv.transpose() * &kform) * &inv)?);
        if sweep_from(m, i + 1, lattices, grams, budget)? {
            return Ok(true);
        }
    }
    grams[y] = None;
    Ok(false)
}

/// Images of the incoming edges at `y` with their pushed-forward Grams, the
/// part of each new image orthogonal to what is already placed. `None` when
/// two images disagree on their intersection.
fn forced_part(m: &CModule, y: usize, grams: &[Option<Gram>]) -> Result<Option<(Matrix, Matrix)>> {
    let cat = m.category();
    let field = m.field();
    let mut basis = Matrix::zeros(field, m.dim(y), 0);
    let mut form = Matrix::zeros(field, 0, 0);
    for &e in cat.in_edges(y) {
        let x = cat.edges()[e].0;
        let gx = grams[x].as_ref().expect("earlier in the sweep");
        let phi = m.edge_map(e);
        let full = Subspace::full(field, m.dim(x));
        let perp = Subspace::kernel(phi).rel_orth_complement(&full, gx)?;
        // u = φ(b) for b in perp, and ⟨u, u'⟩ := ⟨b, b'⟩
        let image = phi * perp.basis();
        let h = gx.restrict(perp.basis());
        let shared = Subspace::span(&basis).intersect(&Subspace::span(&image))?;
        let in_image = image.solve_in_span(shared.basis()).expect("shared part lies in the image");
        let in_placed = basis.solve_in_span(shared.basis()).expect("shared part is placed");
        let lhs = &(&in_placed.transpose() * &form) * &in_placed;
        if lhs != h.restrict(&in_image).into_matrix() {
            return Ok(None);
        }
        let rest_coords = Subspace::kernel(&(&in_image.transpose() * h.matrix()));
        let rest = &image * rest_coords.basis();
        basis = basis.hstack(&[&rest])?;
        form = Matrix::block_diag(field, &[&form, h.restrict(rest_coords.basis()).matrix()]);
    }
    Ok(Some((basis, form)))
}

/// All sums of members, the members included. Fails past `cap`.
fn sum_closure(members: &[Subspace], cap: usize) -> Result<Vec<Subspace>> {
    let mut set: std::collections::BTreeSet<Subspace> = members.iter().cloned().collect();
    let mut queue: Vec<Subspace> = members.to_vec();
    while let Some(w) = queue.pop() {
        for u in members {
            let s = w.sum(u)?;
            if set.insert(s.clone()) {
                if set.len() > cap {
                    return Err(Error::FlagCapExceeded { cap });
                }
                queue.push(s);
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Looks for blocks whose holonomy has determinant other than ±1.
pub fn obstruction_scan(m: &CModule, ls: &LocalStructure) -> Result<IpcReport> {
    if !m.field().is_rational() {
        return Err(Error::PrimeFieldUnsupported("obstruction scan"));
    }
    let cat = m.category();
    for block in enumerate_blocks(m, ls, PiecePolicy::Complement)? {
        for (cycle, op) in block.support_holonomy(cat)? {
            let det = op.determinant()?;
            if det.abs() != Some(m.field().one()) {
                return Ok(IpcReport {
                    verdict: IpVerdict::Obstructed {
                        support: block.key(cat),
                        cycle,
                        operator: op,
                    },
                });
            }
        }
    }
    Ok(IpcReport {
        verdict: IpVerdict::NoObstructionFound,
    })
}

/// Lifts every block piece by lower-sum components so that the piece
/// inclusions commute with the module maps. Each unknown is a matrix
/// `X_x` with `P_x = P⁰_x + L_x X_x`; the conditions are linear in the
/// `X_x`. Returns the lifted piece bases per block, in element order.
fn lift_pieces(m: &CModule, blocks: &[Block]) -> Option<Vec<Vec<Matrix>>> {
    let cat = m.category();
    let field = m.field();
    // (block, element) -> offset of its unknowns
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
    let mut nvars = 0;
    for b in blocks {
        let mut row = Vec::with_capacity(b.elements().len());
        for el in b.elements() {
            row.push(nvars);
            nvars += el.lower.dim() * b.dim();
        }
        offsets.push(row);
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    for (bi, b) in blocks.iter().enumerate() {
        let k = b.dim();
        let pos = |x: usize| b.elements().iter().position(|el| el.object == x);
        for (e, &(a, c)) in cat.edges().iter().enumerate() {
            let Some(ia) = pos(a) else { continue };
            let phi = m.edge_map(e);
            let ea = &b.elements()[ia];
            let pl = phi * ea.lower.basis();
            let mut target = (phi * ea.piece.basis()).neg();
            let inside = pos(c).map(|ic| (ic, b.transport(e).expect("edge inside support")));
            if let Some((ic, t)) = &inside {
                let ec = &b.elements()[*ic];
                target = (ec.piece.basis() * *t).add(&target).expect("same shape");
            }
            // φ L_a X_a − L_c X_c T = target
            for r in 0..m.dim(c) {
                for col in 0..k {
                    let mut eq = vec![field.zero(); nvars];
                    for i in 0..ea.lower.dim() {
                        eq[offsets[bi][ia] + i * k + col] = pl.get(r, i).clone();
                    }
                    if let Some((ic, t)) = &inside {
                        let lc = b.elements()[*ic].lower.basis();
                        for i in 0..lc.cols() {
                            for j in 0..k {
                                let v = lc.get(r, i) * t.get(j, col);
                                let slot = &mut eq[offsets[bi][*ic] + i * k + j];
                                *slot = &*slot - &v;
                            }
                        }
                    }
                    rows.push(eq);
                    rhs.push(target.get(r, col).clone());
                }
            }
        }
    }
    let solution = if nvars == 0 || rows.is_empty() {
        if rhs.iter().any(|v| !v.is_zero()) {
            return None;
        }
        vec![field.zero(); nvars]
    } else {
        let n_eq = rows.len();
        let a = Matrix::from_row_major(field, n_eq, nvars, rows.concat()).expect("shape");
        let b = Matrix::from_columns(field, n_eq, &[rhs]);
        a.solve(&b)?.column(0)
    };
    Some(
        blocks
            .iter()
            .enumerate()
            .map(|(bi, b)| {
                let k = b.dim();
                b.elements()
                    .iter()
                    .enumerate()
                    .map(|(ie, el)| {
                        let l = el.lower.dim();
                        let data = solution[offsets[bi][ie]..offsets[bi][ie] + l * k].to_vec();
                        let x = Matrix::from_row_major(field, l, k, data).expect("shape");
                        el.piece.basis().add(&(el.lower.basis() * &x)).expect("shape")
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Inner products from a splitting of the module into its blocks. Needs a
/// stabilized, tame local structure, liftable pieces, and blocks without
/// holonomy. In each block the transported frame is declared orthonormal.
fn split_grams(m: &CModule, ls: &LocalStructure) -> Option<Vec<Gram>> {
    if ls.total_excess != Some(0) {
        return None;
    }
    let cat = m.category();
    let field = m.field();
    let blocks = enumerate_blocks(m, ls, PiecePolicy::Complement).ok()?;
    let lifted = lift_pieces(m, &blocks)?;
    let mut columns: Vec<Vec<&Matrix>> = vec![Vec::new(); cat.len()];
    let mut forms: Vec<Vec<Matrix>> = vec![Vec::new(); cat.len()];
    for (b, pieces) in blocks.iter().zip(&lifted) {
        let frames = gbc_decompose(b, cat).ok()?.change_of_basis;
        for ((x, p), a) in b.support().members().iter().zip(pieces).zip(frames) {
            let inv = a.inverse().ok()?;
            columns[*x].push(p);
            forms[*x].push(&inv.transpose() * &inv);
        }
    }
    (0..cat.len())
        .map(|x| {
            let p = Matrix::zeros(field, m.dim(x), 0).hstack(&columns[x]).ok()?;
            let pinv = p.inverse().ok()?;
            let k = Matrix::block_diag(field, &forms[x].iter().collect::<Vec<_>>());
            Gram::new(&(&pinv.transpose() * &k) * &pinv).ok()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::poset::PosetCategory;

    const Q: Field = Field::Rational;

    fn doubling() -> CModule {
        CModule::new(PosetCategory::chain(2), Q, vec![1, 1], vec![Matrix::from_i64(Q, &[&[2]])]).unwrap()
    }

    fn gram(k: i64) -> Gram {
        Gram::new(Matrix::from_i64(Q, &[&[k]])).unwrap()
    }

    #[test]
    fn doubling_needs_scaled_source() {
        let m = doubling();
        let t = m.validate().unwrap();
        let bad = WipStructure::new(&m, vec![gram(1), gram(1)]).unwrap();
        assert!(matches!(check_ipc(&m, &t, &bad).unwrap().verdict, IpVerdict::Violated { edge: 0, .. }));
        let good = WipStructure::new(&m, vec![gram(4), gram(1)]).unwrap();
        assert_eq!(check_ipc(&m, &t, &good).unwrap().verdict, IpVerdict::Verified);
        let built = construct_ip_persistence(&m, &t).unwrap();
        assert_eq!(check_ipc(&m, &t, &built).unwrap().verdict, IpVerdict::Verified);
    }

    #[test]
    fn rejects_indefinite_and_misfit_grams() {
        let m = doubling();
        assert!(matches!(WipStructure::new(&m, vec![gram(-1), gram(1)]), Err(Error::IndefiniteGram)));
        assert!(WipStructure::new(&m, vec![gram(1)]).is_err());
    }

    #[test]
    fn construction_on_gallery_and_edge_cases() {
        let m = gallery::chain_example();
        let t = m.validate().unwrap();
        let w = construct_ip_persistence(&m, &t).unwrap();
        assert_eq!(check_ipc(&m, &t, &w).unwrap().verdict, IpVerdict::Verified);

        let zero = CModule::zero(PosetCategory::grid(&[2, 2]), Q);
        let tz = zero.validate().unwrap();
        assert!(construct_ip_persistence(&zero, &tz).is_ok());

        let d5 = gallery::d5_obstruction();
        let t5 = d5.validate().unwrap();
        assert!(matches!(construct_ip_persistence(&d5, &t5), Err(Error::NotProductOfChains)));

        let fp = crate::cmod::random_module_over(&PosetCategory::chain(3), Field::prime(3).unwrap(), 2, 1);
        let tp = fp.validate().unwrap();
        assert!(matches!(construct_ip_persistence(&fp, &tp), Err(Error::PrimeFieldUnsupported(_))));
    }

    #[test]
    fn scan_finds_nothing_on_split_block() {
        let m = gallery::gamma1_block();
        let t = m.validate().unwrap();
        let ls = compute(&m, &t, LocalConfig::default());
        assert_eq!(obstruction_scan(&m, &ls).unwrap().verdict, IpVerdict::NoObstructionFound);
    }
}
