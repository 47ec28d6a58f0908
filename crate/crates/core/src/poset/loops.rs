use std::collections::VecDeque;

use super::{PosetCategory, Subcategory};

/// One step of a closed walk in the Hasse diagram. `forward` means the edge
/// is traversed from its source to its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LoopStep {
    pub edge: usize,
    pub forward: bool,
}

/// A closed walk in the undirected Hasse diagram, based at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZigZagLoop {
    pub start: usize,
    pub steps: Vec<LoopStep>,
}

impl ZigZagLoop {
    /// Builds the loop through `vertices` (the base point is not repeated at
    /// the end). Every consecutive pair must be joined by a Hasse edge.
    pub fn from_vertices(cat: &PosetCategory, vertices: &[usize]) -> Option<Self> {
        let start = *vertices.first()?;
        let mut steps = Vec::with_capacity(vertices.len());
        for i in 0..vertices.len() {
            let a = vertices[i];
            let b = vertices[(i + 1) % vertices.len()];
            let step = if let Some(e) = cat.edge_index(a, b) {
                LoopStep { edge: e, forward: true }
            } else {
                LoopStep {
                    edge: cat.edge_index(b, a)?,
                    forward: false,
                }
            };
            steps.push(step);
        }
        Some(ZigZagLoop { start, steps })
    }

    /// Visited objects, starting at the base point, without the closing repeat.
    pub fn vertices(&self, cat: &PosetCategory) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.steps.len());
        let mut cur = self.start;
        for s in &self.steps {
            out.push(cur);
            let (a, b) = cat.edges()[s.edge];
            cur = if s.forward { b } else { a };
        }
        out
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of maximal runs of equally oriented steps, counted cyclically.
    pub fn zigzag_length(&self) -> usize {
        let n = self.steps.len();
        if n == 0 {
            return 0;
        }
        let changes = (0..n)
            .filter(|&i| self.steps[i].forward != self.steps[(i + 1) % n].forward)
            .count();
        changes.max(1)
    }

    pub fn render(&self, cat: &PosetCategory) -> String {
        let mut out = cat.name(self.start).to_string();
        for s in &self.steps {
            let (a, b) = cat.edges()[s.edge];
            let cur = if s.forward { b } else { a };
            out.push_str(if s.forward { " -> " } else { " <- " });
            out.push_str(cat.name(cur));
        }
        out
    }
}

/// A fundamental cycle basis of the whole Hasse diagram.
pub fn cycle_basis(cat: &PosetCategory) -> Vec<ZigZagLoop> {
    cycle_basis_within(cat, &Subcategory::full(cat))
}

/// Fundamental cycles of the Hasse diagram restricted to `sub`, from a
/// breadth-first spanning tree rooted at the smallest member. Each loop starts
/// at its smallest vertex and leaves towards its smaller neighbour.
pub fn cycle_basis_within(cat: &PosetCategory, sub: &Subcategory) -> Vec<ZigZagLoop> {
    let Some(&root) = sub.members().first() else {
        return Vec::new();
    };
    let n = cat.len();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree_edge = vec![false; cat.edges().len()];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let mut nbrs: Vec<(usize, usize)> = cat
            .out_edges(v)
            .iter()
            .map(|&e| (cat.edges()[e].1, e))
            .chain(cat.in_edges(v).iter().map(|&e| (cat.edges()[e].0, e)))
            .filter(|&(w, _)| sub.contains(w))
            .collect();
        nbrs.sort_unstable();
        for (w, e) in nbrs {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some(v);
                tree_edge[e] = true;
                queue.push_back(w);
            }
        }
    }

    let mut loops = Vec::new();
    for (e, &(a, b)) in cat.edges().iter().enumerate() {
        if tree_edge[e] || !sub.contains(a) || !sub.contains(b) {
            continue;
        }
        // tree path a .. lca .. b, then close with the edge b -> a
        let (mut x, mut y) = (a, b);
        let mut left = vec![x];
        let mut right = vec![y];
        while x != y {
            if depth[x] >= depth[y] {
                x = parent[x].expect("tree");
                left.push(x);
            } else {
                y = parent[y].expect("tree");
                right.push(y);
            }
        }
        right.pop();
        let mut cycle = left;
        cycle.extend(right.into_iter().rev());
        loops.push(canonical(cat, cycle));
    }
    loops
}

fn canonical(cat: &PosetCategory, mut cycle: Vec<usize>) -> ZigZagLoop {
    let k = cycle.len();
    let (pos, _) = cycle.iter().enumerate().min_by_key(|&(_, v)| *v).expect("nonempty");
    cycle.rotate_left(pos);
    if k > 2 && cycle[k - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    ZigZagLoop::from_vertices(cat, &cycle).expect("cycle follows Hasse edges")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma2_has_one_loop() {
        let g = PosetCategory::gamma2();
        let basis = cycle_basis(&g);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].render(&g), "x1 -> y1 <- x2 -> y2 <- x1");
        assert_eq!(basis[0].zigzag_length(), 4);
    }

    #[test]
    fn grid_loop_count() {
        let g = PosetCategory::grid(&[3, 3]);
        // edges - vertices + 1
        assert_eq!(cycle_basis(&g).len(), 12 - 9 + 1);
        let l = &cycle_basis(&PosetCategory::gamma1())[0];
        assert_eq!(l.zigzag_length(), 2);
    }

    #[test]
    fn chain_has_no_loops() {
        assert!(cycle_basis(&PosetCategory::chain(5)).is_empty());
    }
}
