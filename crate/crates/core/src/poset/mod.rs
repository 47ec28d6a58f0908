//! Finite poset categories given by their Hasse diagrams.
//!
//! Objects are opaque names; everything that iterates over objects uses the
//! order in which they were declared. The Hasse edges must already be a
//! transitive reduction, so that they are exactly the atomic morphisms.

mod dot;
mod hfree;
mod loops;

use std::collections::{HashMap, VecDeque};

pub use dot::to_dot;
pub use hfree::{product_of_chains, strongly_h_free, HFree, ProductShape};
pub use loops::{cycle_basis, cycle_basis_within, LoopStep, ZigZagLoop};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetCategory {
    objects: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    // leq[x][y] iff x <= y
    leq: Vec<Vec<bool>>,
    topo: Vec<usize>,
}

impl PosetCategory {
    /// Validates and builds the category. Fails on cycles, on edges implied by
    /// longer paths, and on disconnected diagrams.
    pub fn from_hasse<S: AsRef<str>>(objects: &[S], edges: &[(S, S)]) -> Result<Self> {
        let objects: Vec<String> = objects.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, name) in objects.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateObject(name.clone()));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownObject(s.to_string()))
        };
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            idx_edges.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_indexed(objects, index, idx_edges)
    }

    fn from_indexed(
        objects: Vec<String>,
        index: HashMap<String, usize>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = objects.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a == b {
                return Err(Error::SelfLoop(objects[a].clone(), objects[b].clone()));
            }
            if !seen.insert((a, b)) {
                return Err(Error::DuplicateEdge(objects[a].clone(), objects[b].clone()));
            }
            out_edges[a].push(e);
            in_edges[b].push(e);
        }

        // Kahn's algorithm, smallest declared index first for a stable order
        let mut indeg: Vec<usize> = in_edges.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            topo.push(v);
            for &e in &out_edges[v] {
                let w = edges[e].1;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&v| indeg[v] > 0).expect("cycle member");
            return Err(Error::Cycle(objects[stuck].clone()));
        }

        let mut leq = vec![vec![false; n]; n];
        for &v in topo.iter().rev() {
            leq[v][v] = true;
            for &e in &out_edges[v] {
                let w = edges[e].1;
                for u in 0..n {
                    if leq[w][u] {
                        leq[v][u] = true;
                    }
                }
            }
        }

        for &(a, b) in &edges {
            let implied = out_edges[a]
                .iter()
                .map(|&e| edges[e].1)
                .any(|w| w != b && leq[w][b]);
            if implied {
                return Err(Error::RedundantEdge(objects[a].clone(), objects[b].clone()));
            }
        }

        let cat = PosetCategory {
            objects,
            index,
            edges,
            out_edges,
            in_edges,
            leq,
            topo,
        };
        let all: Vec<usize> = (0..n).collect();
        if !cat.is_connected_on(&all) {
            return Err(Error::Disconnected);
        }
        Ok(cat)
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    /// Hasse edges as `(source, target)` index pairs, in declaration order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_names(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.objects[a].clone(), self.objects[b].clone()))
            .collect()
    }

    pub fn edge_index(&self, src: usize, dst: usize) -> Option<usize> {
        self.out_edges[src]
            .iter()
            .copied()
            .find(|&e| self.edges[e].1 == dst)
    }

    pub fn out_edges(&self, x: usize) -> &[usize] {
        &self.out_edges[x]
    }

    pub fn in_edges(&self, x: usize) -> &[usize] {
        &self.in_edges[x]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq[x][y] || self.leq[y][x]
    }

    /// A linear extension; ties broken by declaration order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// All `y` with `x <= y`, including `x`, in declaration order.
    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq[x][y]).collect()
    }

    /// All `z` with `z <= x`, including `x`, in declaration order.
    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.leq[z][x]).collect()
    }

    /// True when the Hasse diagram is a single directed path.
    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|x| (0..self.len()).all(|y| self.comparable(x, y)))
    }

    /// Objects of a chain listed from bottom to top.
    pub fn chain_order(&self) -> Result<Vec<usize>> {
        if !self.is_chain() {
            return Err(Error::NotAChain);
        }
        Ok(self.topo.clone())
    }

    fn is_connected_on(&self, members: &[usize]) -> bool {
        let Some(&start) = members.first() else {
            return false;
        };
        let mut inside = vec![false; self.len()];
        for &m in members {
            inside[m] = true;
        }
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            let nbrs = self.out_edges[v]
                .iter()
                .map(|&e| self.edges[e].1)
                .chain(self.in_edges[v].iter().map(|&e| self.edges[e].0));
            for w in nbrs {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == members.len()
    }

    /// Connected, and pathwise full: every object on a directed path between
    /// two members is a member. For a poset the objects on such paths are
    /// exactly the interval `[u, v]`, so this is convexity.
    pub fn is_admissible(&self, sub: &Subcategory) -> bool {
        let m = sub.members();
        if m.is_empty() || !self.is_connected_on(m) {
            return false;
        }
        for &u in m {
            for &v in m {
                if u == v || !self.leq[u][v] {
                    continue;
                }
                let escapes = (0..self.len())
                    .any(|z| self.leq[u][z] && self.leq[z][v] && !sub.contains(z));
                if escapes {
                    return false;
                }
            }
        }
        true
    }

    /// The interval `[lo, hi]`, empty when `lo` is not below `hi`.
    pub fn interval(&self, lo: usize, hi: usize) -> Subcategory {
        Subcategory::new((0..self.len()).filter(|&z| self.leq[lo][z] && self.leq[z][hi]))
    }

    pub fn subcategory_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Subcategory> {
        let idx = names
            .iter()
            .map(|n| self.index_of(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subcategory::new(idx))
    }

    /// The full subcategory on an admissible subset, as a category of its own
    /// (its Hasse edges are the parent's edges inside the subset). Object `i`
    /// of the result is `sub.members()[i]`.
    pub fn full_subcategory(&self, sub: &Subcategory) -> Result<PosetCategory> {
        if !self.is_admissible(sub) {
            return Err(Error::InadmissibleSubcategory(sub.names(self)));
        }
        let names: Vec<String> = sub.members().iter().map(|&x| self.objects[x].clone()).collect();
        let pos: HashMap<usize, usize> =
            sub.members().iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((*pos.get(&a)?, *pos.get(&b)?)))
            .collect();
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Self::from_indexed(names, index, edges)
    }

    // ---- generators ----

    /// The chain `1 -> 2 -> ... -> n`.
    pub fn chain(n: usize) -> Self {
        Self::zigzag_product(&[vec![true; n.saturating_sub(1)]])
    }

    /// The product of chains `m_1 × ... × m_k` (a `k`-dimensional persistence
    /// category). Objects are named `"i,j,..."`, 1-based.
    pub fn grid(dims: &[usize]) -> Self {
        let factors: Vec<Vec<bool>> = dims.iter().map(|&m| vec![true; m.saturating_sub(1)]).collect();
        Self::zigzag_product(&factors)
    }

    /// Product of zig-zag posets. Factor `f` has `directions[f].len() + 1`
    /// points; `true` at position `i` means `i -> i+1`, `false` means
    /// `i+1 -> i`.
    pub fn zigzag_product(directions: &[Vec<bool>]) -> Self {
        let sizes: Vec<usize> = directions.iter().map(|d| d.len() + 1).collect();
        let total: usize = sizes.iter().product();
        let coords: Vec<Vec<usize>> = (0..total)
            .map(|mut k| {
                let mut c = vec![0; sizes.len()];
                for f in (0..sizes.len()).rev() {
                    c[f] = k % sizes[f];
                    k /= sizes[f];
                }
                c
            })
            .collect();
        let name = |c: &[usize]| {
            c.iter()
                .map(|v| (v + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let names: Vec<String> = coords.iter().map(|c| name(c)).collect();
        let pos: HashMap<Vec<usize>, usize> =
            coords.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut edges = Vec::new();
        for (i, c) in coords.iter().enumerate() {
            for f in 0..sizes.len() {
                if c[f] + 1 < sizes[f] {
                    let mut d = c.clone();
                    d[f] += 1;
                    let j = pos[&d];
                    if directions[f][c[f]] {
                        edges.push((i, j));
                    } else {
                        edges.push((j, i));
                    }
                }
            }
        }
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Self::from_indexed(names, index, edges).expect("zig-zag products are valid posets")
    }

    /// The square with one source and one sink: `a -> b -> d`, `a -> c -> d`.
    pub fn gamma1() -> Self {
        Self::from_hasse(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
        )
        .expect("valid")
    }

    /// The square with two sources and two sinks: `x_i -> y_j` for all `i, j`.
    pub fn gamma2() -> Self {
        Self::from_hasse(
            &["x1", "x2", "y1", "y2"],
            &[("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2")],
        )
        .expect("valid")
    }
}

/// A full subcategory, identified by its object set (sorted indices into the
/// parent category).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subcategory {
    members: Vec<usize>,
}

impl Subcategory {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Subcategory { members }
    }

    pub fn full(cat: &PosetCategory) -> Self {
        Self::new(0..cat.len())
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Object names in declaration order; used as the canonical support key.
    pub fn names(&self, cat: &PosetCategory) -> Vec<String> {
        self.members.iter().map(|&x| cat.name(x).to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_valid() {
        let c = PosetCategory::from_hasse(&["1", "2", "3"], &[("1", "2"), ("2", "3")]).unwrap();
        assert_eq!(c.edges().len(), 2);
        assert!(c.leq(0, 2));
        assert!(c.is_chain());
        assert_eq!(PosetCategory::chain(3), c);
    }

    #[test]
    fn rejects_redundant_edge() {
        let r = PosetCategory::from_hasse(
            &["1", "2", "3", "4"],
            &[("1", "2"), ("1", "3"), ("2", "4"), ("3", "4"), ("1", "4")],
        );
        assert!(matches!(r, Err(Error::RedundantEdge(a, b)) if a == "1" && b == "4"));
    }

    #[test]
    fn rejects_cycles_and_disconnection() {
        let r = PosetCategory::from_hasse(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert!(matches!(r, Err(Error::Cycle(_))));
        let r = PosetCategory::from_hasse(&["a", "b", "c"], &[("a", "b")]);
        assert!(matches!(r, Err(Error::Disconnected)));
        let r = PosetCategory::from_hasse(&["a", "a"], &[]);
        assert!(matches!(r, Err(Error::DuplicateObject(_))));
        let r = PosetCategory::from_hasse(&["a", "b"], &[("a", "c")]);
        assert!(matches!(r, Err(Error::UnknownObject(_))));
    }

    #[test]
    fn gamma2_is_valid() {
        let g = PosetCategory::gamma2();
        assert_eq!(g.len(), 4);
        assert!(!g.comparable(0, 1));
        assert!(g.leq(1, 3));
    }

    #[test]
    fn admissibility_examples() {
        let c = PosetCategory::chain(3);
        assert!(c.is_admissible(&Subcategory::full(&c)));
        assert!(!c.is_admissible(&Subcategory::new([0, 2])));
        assert!(c.is_admissible(&Subcategory::new([1, 2])));
        let g = PosetCategory::gamma2();
        // {x1, y1, y2}: the only directed paths among these are the two
        // edges out of x1, with no intermediate objects
        let s = g.subcategory_by_names(&["x1", "y1", "y2"]).unwrap();
        assert!(g.is_admissible(&s));
        // {x1, x2} has no edges between its members
        assert!(!g.is_admissible(&g.subcategory_by_names(&["x1", "x2"]).unwrap()));
        assert!(!g.is_admissible(&Subcategory::new([])));
    }

    #[test]
    fn grid_edges_and_names() {
        let g = PosetCategory::grid(&[2, 3]);
        assert_eq!(g.len(), 6);
        assert_eq!(g.edges().len(), 7);
        let a = g.index_of("1,1").unwrap();
        let b = g.index_of("2,3").unwrap();
        assert!(g.leq(a, b));
        assert_eq!(g.interval(a, b).len(), 6);
    }

    #[test]
    fn full_subcategory_keeps_hasse_edges() {
        let g = PosetCategory::grid(&[3, 3]);
        let row = g.subcategory_by_names(&["1,1", "2,1", "3,1"]).unwrap();
        let sub = g.full_subcategory(&row).unwrap();
        assert!(sub.is_chain());
        assert_eq!(sub.edges().len(), 2);
    }

    #[test]
    fn zigzag_directions() {
        let z = PosetCategory::zigzag_product(&[vec![true, false]]);
        // 1 -> 2 <- 3
        assert_eq!(z.edges(), &[(0, 1), (2, 1)]);
    }
}
