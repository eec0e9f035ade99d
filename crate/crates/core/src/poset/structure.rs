use fixedbitset::FixedBitSet;

use super::{escape_dot, Poset};

/// Coatoms of a poset together with the down-set of every element, the
/// data behind the subposets `X_I` and `X_{=I}`.
#[derive(Debug, Clone)]
pub struct CoatomView<'a> {
    poset: &'a Poset,
    down: Vec<FixedBitSet>,
    coatoms: Vec<usize>,
}

impl<'a> CoatomView<'a> {
    pub fn new(poset: &'a Poset) -> Self {
        let coatoms = poset.lower_covers(poset.top()).to_vec();
        Self { poset, down: poset.down_sets(), coatoms }
    }

    pub fn poset(&self) -> &'a Poset {
        self.poset
    }

    /// Coatom element ids, ascending.
    pub fn coatoms(&self) -> &[usize] {
        &self.coatoms
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// `X_I`: elements lying below no coatom outside `set`. This is an upper
    /// set, so its Hasse diagram is the restriction of the poset's.
    pub fn generated(&self, set: &[usize]) -> Vec<usize> {
        let mut excluded = FixedBitSet::with_capacity(self.poset.len());
        for &c in self.coatoms.iter().filter(|c| !set.contains(c)) {
            excluded.union_with(&self.down[c]);
        }
        (0..self.poset.len()).filter(|&x| !excluded.contains(x)).collect()
    }

    /// `X_{=I}`: the part of `X_I` lying below every coatom of `set`.
    pub fn generated_exactly(&self, set: &[usize]) -> Vec<usize> {
        self.generated(set)
            .into_iter()
            .filter(|&x| set.iter().all(|&c| self.leq(x, c)))
            .collect()
    }

    /// The coatoms lying above `x`.
    pub fn coatoms_above(&self, x: usize) -> Vec<usize> {
        self.coatoms.iter().copied().filter(|&c| self.leq(x, c)).collect()
    }

    /// Coatoms `i`, `j` are joined when two distinct corank-two elements lie
    /// below both and below no other coatom.
    pub fn entanglement_graph(&self) -> EntanglementGraph {
        let height = self.poset.height();
        let mut counts = std::collections::BTreeMap::<(usize, usize), usize>::new();
        if height >= 2 {
            for x in 0..self.poset.len() {
                if self.poset.rank(x) != height - 2 {
                    continue;
                }
                if let [a, b] = self.coatoms_above(x)[..] {
                    *counts.entry((a, b)).or_default() += 1;
                }
            }
        }
        let edges = counts.into_iter().filter(|&(_, n)| n >= 2).map(|(e, _)| e).collect();
        EntanglementGraph { vertices: self.coatoms.clone(), edges }
    }
}

/// Graph on the coatoms; edges are unordered pairs stored as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntanglementGraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl EntanglementGraph {
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for &v in &self.vertices {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = vec![v];
            seen.push(v);
            let mut i = 0;
            while i < comp.len() {
                for w in self.neighbors(comp[i]) {
                    if !seen.contains(&w) {
                        seen.push(w);
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out.sort();
        out
    }

    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.vertices.len()
    }

    /// Graphviz rendering with caller-supplied vertex labels.
    pub fn to_dot(&self, label: impl Fn(usize) -> String) -> String {
        let mut out = String::from("graph entanglement {\n");
        for &v in &self.vertices {
            out.push_str(&format!("  c{v} [label=\"{}\"];\n", escape_dot(&label(v))));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  c{a} -- c{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Partition;
    use crate::poset::build_poset;

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Entanglement edges translated to row pairs.
    fn row_edges(parts: &[u32]) -> Vec<(usize, usize)> {
        let bp = build_poset(&part(parts));
        let view = CoatomView::new(bp.poset());
        let row_of = |c: usize| bp.coatom_rows().into_iter().find(|&(_, e)| e == c).unwrap().0;
        let mut edges: Vec<(usize, usize)> = view
            .entanglement_graph()
            .edges
            .iter()
            .map(|&(a, b)| {
                let (r, s) = (row_of(a), row_of(b));
                (r.min(s), r.max(s))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    #[test]
    fn entanglement_examples() {
        assert_eq!(row_edges(&[3, 3, 5, 6, 6]), vec![(1, 2), (3, 5), (4, 5)]);
        assert!(row_edges(&[2, 4]).is_empty());
        assert!(row_edges(&[2, 2]).is_empty());
    }

    #[test]
    fn generated_subposets() {
        let bp = build_poset(&part(&[3, 3, 5, 6, 6]));
        let view = CoatomView::new(bp.poset());
        let all = view.generated(view.coatoms());
        assert_eq!(all.len(), bp.len());
        let rows = bp.coatom_rows();
        // Row 1 is a switch coatom, row 2 a push with GJW value 1.
        assert_eq!(view.generated(&[rows[0].1]).len(), 2);
        assert_eq!(view.generated(&[rows[1].1]).len(), 2);
        // X over no coatoms is just the maximum.
        assert_eq!(view.generated(&[]), vec![bp.poset().top()]);
        // Entangled pair {1,2}: two corank-2 elements below exactly those.
        let height = bp.poset().height();
        let pair = [rows[0].1, rows[1].1];
        let corank2 = |set: &[usize]| {
            view.generated_exactly(set).into_iter().filter(|&x| bp.poset().rank(x) + 2 == height).count()
        };
        assert_eq!(corank2(&pair), 2);
        assert_eq!(corank2(&[rows[0].1, rows[2].1]), 1);
    }

    #[test]
    fn push_chain_length_is_gjw_value() {
        // GJW (1, 2): both coatoms are pushes.
        let bp = build_poset(&part(&[2, 4]));
        let view = CoatomView::new(bp.poset());
        let sizes: Vec<usize> = bp.coatom_rows().iter().map(|&(_, c)| view.generated(&[c]).len()).collect();
        assert_eq!(sizes, vec![2, 3]);
    }

    #[test]
    fn forest_checks() {
        let g = EntanglementGraph { vertices: vec![1, 2, 3], edges: vec![(1, 2), (2, 3), (1, 3)] };
        assert!(!g.is_forest());
        let g = EntanglementGraph { vertices: vec![1, 2, 3, 4], edges: vec![(1, 2), (3, 4)] };
        assert!(g.is_forest());
        assert_eq!(g.components(), vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(g.neighbors(2), vec![1]);
        assert!(g.to_dot(|v| format!("row {v}")).contains("c1 -- c2"));
    }
}
