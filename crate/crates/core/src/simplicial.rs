//! Finite simplicial complexes, diagrams of them over a poset category, and
//! the homology modules they induce.

use std::collections::{BTreeMap, BTreeSet};

use crate::cmod::CModule;
use crate::error::{Error, Result};
use crate::ip::WipStructure;
use crate::linalg::{Field, Gram, Matrix, Subspace};
use crate::poset::PosetCategory;

/// Simplices are stored as sorted vertex-index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    simplices: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    /// Face closure of the given simplices. Every listed vertex becomes a
    /// 0-simplex even if no maximal simplex mentions it.
    pub fn from_maximal<S: AsRef<str>>(vertices: &[S], maximal: &[Vec<S>]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut index = BTreeMap::new();
        for (i, v) in names.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::Parse(format!("vertex `{v}` listed twice")));
            }
        }
        let mut simplices = BTreeSet::new();
        for i in 0..names.len() {
            simplices.insert(vec![i]);
        }
        for s in maximal {
            let mut idx = Vec::with_capacity(s.len());
            for v in s {
                let v = v.as_ref();
                idx.push(*index.get(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?);
            }
            idx.sort_unstable();
            idx.dedup();
            if idx.is_empty() {
                continue;
            }
            // all nonempty subsets
            for mask in 1u64..(1u64 << idx.len()) {
                let face: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                simplices.insert(face);
            }
        }
        Ok(Self { vertices: names, simplices })
    }

    /// The boundary of the `n`-simplex on `v0..vn`.
    pub fn sphere(n: usize) -> Self {
        let names: Vec<String> = (0..=n + 1).map(|i| format!("v{i}")).collect();
        let maximal: Vec<Vec<String>> = (0..=n + 1)
            .map(|skip| names.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect())
            .collect();
        Self::from_maximal(&names, &maximal).expect("valid")
    }

    pub fn simplex(n: usize) -> Self {
        let names: Vec<String> = (0..=n).map(|i| format!("v{i}")).collect();
        Self::from_maximal(&names, std::slice::from_ref(&names)).expect("valid")
    }

    /// A cycle graph on `names`, in order.
    pub fn polygon<S: AsRef<str>>(names: &[S]) -> Self {
        let k = names.len();
        let edges: Vec<Vec<&str>> = (0..k)
            .map(|i| vec![names[i].as_ref(), names[(i + 1) % k].as_ref()])
            .collect();
        let verts: Vec<&str> = names.iter().map(|s| s.as_ref()).collect();
        Self::from_maximal(&verts, &edges).expect("valid")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.simplices.contains(simplex)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    /// `n`-simplices in lexicographic order.
    pub fn simplices(&self, n: usize) -> Vec<&[usize]> {
        self.simplices.iter().filter(|s| s.len() == n + 1).map(|s| s.as_slice()).collect()
    }

    pub fn count(&self, n: usize) -> usize {
        self.simplices.iter().filter(|s| s.len() == n + 1).count()
    }

    /// Maximal simplices, for serialization.
    pub fn maximal(&self) -> Vec<Vec<usize>> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v)))
            })
            .cloned()
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .map(|s| if s.len() % 2 == 1 { 1 } else { -1 })
            .sum()
    }
}

/// `∂_n : C_n → C_{n-1}`. Rows index `(n-1)`-simplices, columns `n`-simplices.
/// For `n = 0` the target is zero.
pub fn boundary_matrix(c: &SimplicialComplex, n: usize, field: Field) -> Matrix {
    let cols = c.simplices(n);
    if n == 0 {
        return Matrix::zeros(field, 0, cols.len());
    }
    let rows = c.simplices(n - 1);
    let row_of: BTreeMap<&[usize], usize> = rows.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut d = Matrix::zeros(field, rows.len(), cols.len());
    for (j, s) in cols.iter().enumerate() {
        for skip in 0..s.len() {
            let face: Vec<usize> = s.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
            let sign = if skip % 2 == 0 { 1 } else { -1 };
            d.set(row_of[face.as_slice()], j, field.from_i64(sign));
        }
    }
    d
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    /// Source vertex index to target vertex index.
    pub vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn from_names<S: AsRef<str>>(
        src: &SimplicialComplex,
        dst: &SimplicialComplex,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let mut map = vec![None; src.vertices.len()];
        for (a, b) in pairs {
            let i = src.vertex_index(a.as_ref())?;
            map[i] = Some(dst.vertex_index(b.as_ref())?);
        }
        let vertex_map = map
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Parse(format!("vertex `{}` has no image", src.vertices[i]))))
            .collect::<Result<_>>()?;
        Ok(Self { vertex_map })
    }

    pub fn is_injective(&self) -> bool {
        let set: BTreeSet<_> = self.vertex_map.iter().collect();
        set.len() == self.vertex_map.len()
    }

    fn apply(&self, s: &[usize]) -> Vec<usize> {
        s.iter().map(|&v| self.vertex_map[v]).collect()
    }

    fn check(&self, src: &SimplicialComplex, dst: &SimplicialComplex) -> bool {
        self.vertex_map.len() == src.vertices.len()
            && self.vertex_map.iter().all(|&v| v < dst.vertices.len())
            && src.simplices.iter().all(|s| {
                let mut img = self.apply(s);
                img.sort_unstable();
                img.dedup();
                dst.contains(&img)
            })
    }

    fn compose(&self, then: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            vertex_map: self.vertex_map.iter().map(|&v| then.vertex_map[v]).collect(),
        }
    }
}

/// Matrix of `f` on `n`-chains: a collapsed simplex goes to zero, otherwise
/// to its sorted image with the sign of the sorting permutation.
pub fn chain_map(
    f: &SimplicialMap,
    src: &SimplicialComplex,
    dst: &SimplicialComplex,
    n: usize,
    field: Field,
) -> Matrix {
    let cols = src.simplices(n);
    let rows = dst.simplices(n);
    let row_of: BTreeMap<&[usize], usize> = rows.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut m = Matrix::zeros(field, rows.len(), cols.len());
    for (j, s) in cols.iter().enumerate() {
        let img = f.apply(s);
        let mut inversions = 0;
        let mut collapsed = false;
        for a in 0..img.len() {
            for b in a + 1..img.len() {
                match img[a].cmp(&img[b]) {
                    std::cmp::Ordering::Greater => inversions += 1,
                    std::cmp::Ordering::Equal => collapsed = true,
                    _ => {}
                }
            }
        }
        if collapsed {
            continue;
        }
        let mut sorted = img;
        sorted.sort_unstable();
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        m.set(row_of[sorted.as_slice()], j, field.from_i64(sign));
    }
    m
}

/// A functor from a poset category to simplicial complexes, given on Hasse
/// edges.
#[derive(Clone, Debug)]
pub struct ComplexDiagram {
    category: PosetCategory,
    complexes: Vec<SimplicialComplex>,
    maps: Vec<SimplicialMap>,
}

impl ComplexDiagram {
    /// Checks every map is simplicial and that vertex maps compose the same
    /// way along every pair of directed paths.
    pub fn new(category: PosetCategory, complexes: Vec<SimplicialComplex>, maps: Vec<SimplicialMap>) -> Result<Self> {
        if complexes.len() != category.len() {
            return Err(Error::DimensionMismatch {
                context: "diagram complexes vs objects",
                expected: category.len(),
                found: complexes.len(),
            });
        }
        if maps.len() != category.edges().len() {
            return Err(Error::DimensionMismatch {
                context: "diagram maps vs Hasse edges",
                expected: category.edges().len(),
                found: maps.len(),
            });
        }
        for (e, &(a, b)) in category.edges().iter().enumerate() {
            if !maps[e].check(&complexes[a], &complexes[b]) {
                return Err(Error::NotSimplicial(category.name(a).into(), category.name(b).into()));
            }
        }
        let d = Self { category, complexes, maps };
        d.check_paths()?;
        Ok(d)
    }

    fn check_paths(&self) -> Result<()> {
        let cat = &self.category;
        for &x in cat.topological_order() {
            let mut reached: BTreeMap<usize, SimplicialMap> = BTreeMap::new();
            reached.insert(
                x,
                SimplicialMap { vertex_map: (0..self.complexes[x].vertices.len()).collect() },
            );
            for &y in cat.topological_order() {
                let Some(f) = reached.get(&y).cloned() else { continue };
                for &e in cat.out_edges(y) {
                    let z = cat.edges()[e].1;
                    let g = f.compose(&self.maps[e]);
                    match reached.get(&z) {
                        Some(prev) if *prev != g => {
                            return Err(Error::DiagramConflict(cat.name(x).into(), cat.name(z).into()))
                        }
                        Some(_) => {}
                        None => {
                            reached.insert(z, g);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn category(&self) -> &PosetCategory {
        &self.category
    }

    pub fn complex(&self, x: usize) -> &SimplicialComplex {
        &self.complexes[x]
    }

    pub fn complexes(&self) -> &[SimplicialComplex] {
        &self.complexes
    }

    pub fn map(&self, e: usize) -> &SimplicialMap {
        &self.maps[e]
    }

    pub fn maps(&self) -> &[SimplicialMap] {
        &self.maps
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(SimplicialMap::is_injective)
    }
}

struct HomologyBasis {
    cycles: Subspace,
    boundaries: Subspace,
    reps: Matrix,
}

fn homology_basis(c: &SimplicialComplex, n: usize, field: Field) -> HomologyBasis {
    let cycles = Subspace::kernel(&boundary_matrix(c, n, field));
    let boundaries = Subspace::span(&boundary_matrix(c, n + 1, field));
    let reps = boundaries
        .complement_in(&cycles)
        .expect("boundaries are cycles")
        .basis()
        .clone();
    HomologyBasis { cycles, boundaries, reps }
}

/// `dim H_n(c)` over `field`.
pub fn betti(c: &SimplicialComplex, n: usize, field: Field) -> usize {
    let b = homology_basis(c, n, field);
    b.cycles.dim() - b.boundaries.dim()
}

/// `H_n` of the diagram as a module. Basis vectors at each object are cycle
/// representatives complementing the boundaries in echelon order.
pub fn homology_functor(d: &ComplexDiagram, n: usize, field: Field) -> Result<CModule> {
    let cat = d.category();
    let bases: Vec<HomologyBasis> = d.complexes.iter().map(|c| homology_basis(c, n, field)).collect();
    let mut maps = Vec::with_capacity(cat.edges().len());
    for (e, &(a, b)) in cat.edges().iter().enumerate() {
        let f = chain_map(&d.maps[e], &d.complexes[a], &d.complexes[b], n, field);
        let image = &f * &bases[a].reps;
        let target = &bases[b];
        let h = target.reps.cols();
        let frame = target.reps.hstack(&[target.boundaries.basis()])?;
        let coords = frame
            .solve_in_span(&image)
            .ok_or_else(|| Error::InconsistentDims("chain map does not send cycles to cycles".into()))?;
        let rows: Vec<usize> = (0..h).collect();
        maps.push(coords.transpose().select_columns(&rows).transpose());
    }
    let dims = bases.iter().map(|b| b.reps.cols()).collect();
    let m = CModule::new(cat.clone(), field, dims, maps)?;
    m.validate()?;
    Ok(m)
}

/// Cycles and boundaries of an injective diagram with the dot-product
/// Grams inherited from the simplex basis.
#[derive(Clone, Debug)]
pub struct IpcPresentation {
    pub boundaries: CModule,
    pub boundary_grams: WipStructure,
    pub cycles: CModule,
    pub cycle_grams: WipStructure,
    /// Per object, boundary basis in cycle coordinates.
    pub inclusion: Vec<Matrix>,
    /// `dim Z_n − dim B_n` per object.
    pub cokernel_dims: Vec<usize>,
}

pub fn ipc_presentation(d: &ComplexDiagram, n: usize, field: Field) -> Result<IpcPresentation> {
    let cat = d.category();
    for (e, &(a, b)) in cat.edges().iter().enumerate() {
        if !d.maps[e].is_injective() {
            return Err(Error::NonInjectiveMap(cat.name(a).into(), cat.name(b).into()));
        }
    }
    let bases: Vec<HomologyBasis> = d.complexes.iter().map(|c| homology_basis(c, n, field)).collect();
    let chain: Vec<Matrix> = cat
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| chain_map(&d.maps[e], &d.complexes[a], &d.complexes[b], n, field))
        .collect();
    let sub_module = |pick: &dyn Fn(&HomologyBasis) -> &Subspace| -> Result<(CModule, WipStructure)> {
        let mut maps = Vec::with_capacity(chain.len());
        for (e, &(a, b)) in cat.edges().iter().enumerate() {
            let image = &chain[e] * pick(&bases[a]).basis();
            let coords = pick(&bases[b])
                .coordinates(&image)
                .ok_or_else(|| Error::InconsistentDims("chain map leaves the submodule".into()))?;
            maps.push(coords);
        }
        let dims = bases.iter().map(|h| pick(h).dim()).collect();
        let m = CModule::new(cat.clone(), field, dims, maps)?;
        let grams = bases
            .iter()
            .map(|h| {
                let basis = pick(h).basis();
                Gram::new(&basis.transpose() * basis)
            })
            .collect::<Result<Vec<_>>>()?;
        let w = WipStructure::new(&m, grams)?;
        Ok((m, w))
    };
    let (cycles, cycle_grams) = sub_module(&|h| &h.cycles)?;
    let (boundaries, boundary_grams) = sub_module(&|h| &h.boundaries)?;
    let inclusion = bases
        .iter()
        .map(|h| h.cycles.coordinates(h.boundaries.basis()).expect("boundaries are cycles"))
        .collect();
    let cokernel_dims = bases.iter().map(|h| h.cycles.dim() - h.boundaries.dim()).collect();
    Ok(IpcPresentation {
        boundaries,
        boundary_grams,
        cycles,
        cycle_grams,
        inclusion,
        cokernel_dims,
    })
}

/// Hexagon over a triangle boundary on the two-source, two-sink square:
/// `x1` carries the hexagon, the rest carry the triangle boundary. Edge
/// `x1 -> y1` wraps twice, `x1 -> y2` collapses alternate edges, the edges
/// out of `x2` are identities.
pub fn gallery_d7() -> ComplexDiagram {
    let cat = PosetCategory::gamma2();
    let tri = SimplicialComplex::polygon(&["t0", "t1", "t2"]);
    let hex = SimplicialComplex::polygon(&["w0", "w1", "w2", "w3", "w4", "w5"]);
    let wrap = SimplicialMap { vertex_map: (0..6).map(|i| i % 3).collect() };
    let collapse = SimplicialMap { vertex_map: vec![0, 1, 1, 2, 2, 0] };
    let id = SimplicialMap { vertex_map: vec![0, 1, 2] };
    let mut complexes = vec![tri.clone(); 4];
    complexes[cat.index_of("x1").expect("x1")] = hex;
    let maps = cat
        .edge_names()
        .iter()
        .map(|(a, b)| match (a.as_str(), b.as_str()) {
            ("x1", "y1") => wrap.clone(),
            ("x1", "y2") => collapse.clone(),
            _ => id.clone(),
        })
        .collect();
    ComplexDiagram::new(cat, complexes, maps).expect("gallery diagram is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ip::{check_ipc, IpVerdict};

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn boundary_conventions() {
        let pt = SimplicialComplex::simplex(0);
        let d = boundary_matrix(&pt, 1, q());
        assert_eq!((d.rows(), d.cols()), (1, 0));
        let edge = SimplicialComplex::simplex(1);
        assert_eq!(boundary_matrix(&edge, 1, q()), Matrix::from_i64(q(), &[&[-1], &[1]]));
        let circle = SimplicialComplex::sphere(1);
        assert_eq!(boundary_matrix(&circle, 1, q()).rank(), 2);
        assert_eq!(betti(&circle, 1, q()), 1);
        assert_eq!(betti(&circle, 0, q()), 1);
    }

    #[test]
    fn dd_vanishes_on_sphere() {
        let s = SimplicialComplex::sphere(3);
        for n in 1..4 {
            let dd = &boundary_matrix(&s, n, q()) * &boundary_matrix(&s, n + 1, q());
            assert!(dd.is_zero());
        }
        assert_eq!(betti(&s, 3, q()), 1);
    }

    #[test]
    fn disk_to_point_kills_h1() {
        let cat = PosetCategory::chain(2);
        let d = ComplexDiagram::new(
            cat,
            vec![SimplicialComplex::simplex(2), SimplicialComplex::simplex(0)],
            vec![SimplicialMap { vertex_map: vec![0, 0, 0] }],
        )
        .unwrap();
        assert_eq!(homology_functor(&d, 1, q()).unwrap().dims(), &[0, 0]);
        assert_eq!(homology_functor(&d, 0, q()).unwrap().dims(), &[1, 1]);
    }

    #[test]
    fn d7_degrees() {
        let d = gallery_d7();
        let m = homology_functor(&d, 1, q()).unwrap();
        assert_eq!(m.dims(), &[1, 1, 1, 1]);
        let mut degrees: Vec<String> = d
            .category()
            .edges()
            .iter()
            .enumerate()
            .map(|(e, _)| m.edge_map(e).get(0, 0).abs().unwrap().to_string())
            .collect();
        degrees.sort();
        assert_eq!(degrees, ["1", "1", "1", "2"]);
        let t = m.validate().unwrap();
        let ls = crate::local::compute(&m, &t, Default::default());
        let scan = crate::ip::obstruction_scan(&m, &ls).unwrap();
        assert!(matches!(scan.verdict, IpVerdict::Obstructed { .. }));
    }

    #[test]
    fn rejects_non_simplicial_and_conflicts() {
        let cat = PosetCategory::chain(2);
        let two_points = SimplicialComplex::from_maximal(&["a", "b"], &[]).unwrap();
        let edge = SimplicialComplex::simplex(1);
        let err = ComplexDiagram::new(
            cat,
            vec![edge, two_points],
            vec![SimplicialMap { vertex_map: vec![0, 1] }],
        );
        assert!(matches!(err, Err(Error::NotSimplicial(..))));

        let sq = PosetCategory::gamma1();
        let pts = SimplicialComplex::from_maximal(&["p", "q"], &[]).unwrap();
        let id = SimplicialMap { vertex_map: vec![0, 1] };
        let swap = SimplicialMap { vertex_map: vec![1, 0] };
        let maps: Vec<_> = sq
            .edge_names()
            .iter()
            .map(|(a, b)| if (a.as_str(), b.as_str()) == ("b", "d") { swap.clone() } else { id.clone() })
            .collect();
        let err = ComplexDiagram::new(sq, vec![pts; 4], maps);
        assert!(matches!(err, Err(Error::DiagramConflict(..))));
    }

    #[test]
    fn triangle_into_disk_presentation() {
        let cat = PosetCategory::chain(2);
        let d = ComplexDiagram::new(
            cat,
            vec![SimplicialComplex::sphere(1), SimplicialComplex::simplex(2)],
            vec![SimplicialMap { vertex_map: vec![0, 1, 2] }],
        )
        .unwrap();
        let p = ipc_presentation(&d, 1, q()).unwrap();
        assert_eq!(p.cycles.dims(), &[1, 1]);
        assert_eq!(p.boundaries.dims(), &[0, 1]);
        assert_eq!(p.cokernel_dims, [1, 0]);
        for (m, w) in [(&p.cycles, &p.cycle_grams), (&p.boundaries, &p.boundary_grams)] {
            let t = m.validate().unwrap();
            assert_eq!(check_ipc(m, &t, w).unwrap().verdict, IpVerdict::Verified);
        }
        assert_eq!(homology_functor(&d, 1, q()).unwrap().dims(), &[1, 0]);
    }
}
