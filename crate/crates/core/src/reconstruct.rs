//! Recovery of the block normal form from the bare cover relation of a
//! poset claimed to be a rook poset.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::board::{Block, GjwSequence, NormalForm, Partition};
use crate::placement::max_placement;
use crate::poset::{
    build_poset_bounded, poincare_polynomial, BoardPoset, CoatomView, EntanglementGraph, IsoOracle, OracleError,
    PoincarePolynomial, Poset, DEFAULT_MAX_ELEMENTS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Inconsistency {
    #[error("the subposet generated by a coatom is not a chain")]
    NotAChain,
    #[error("the entanglement graph is not a forest")]
    NotAForest,
    #[error("an entanglement component has two push coatoms")]
    TwoPushCoatoms,
    #[error("the push coatoms admit no consistent order")]
    PushOrder,
    #[error("no coatom fits the leaf depths of its component")]
    NoRoot,
    #[error("no ordering of an entanglement tree matches the poset")]
    NoCandidate,
    #[error("the rank sizes disagree with the recovered blocks")]
    RankSizes,
    #[error("the poset is not isomorphic to that of the recovered blocks")]
    Verification,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("not a rook poset: {0}")]
    Inconsistent(#[from] Inconsistency),
    #[error(transparent)]
    TooLarge(#[from] OracleError),
    #[error("more than {0} candidate orderings")]
    TooManyCandidates(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReconstructOptions {
    /// Largest poset handed to the isomorphism oracle or built as a
    /// candidate; the input itself is not limited.
    pub max_elements: usize,
    pub max_candidates: usize,
    /// Finish with a full oracle comparison against the recovered board.
    pub verify: bool,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self { max_elements: DEFAULT_MAX_ELEMENTS, max_candidates: 10_000, verify: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoatomProfile {
    pub coatom: usize,
    /// Cover edges in the chain `X_i`.
    pub chain_edges: usize,
    pub is_push: bool,
    pub component: usize,
}

/// A rooted tree on coatom ids whose children are listed in row order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedTree {
    root: usize,
    root_value: u32,
    children: BTreeMap<usize, Vec<usize>>,
    parent: BTreeMap<usize, usize>,
}

impl OrderedTree {
    fn from_edges(root: usize, root_value: u32, graph: &EntanglementGraph) -> Self {
        let mut children = BTreeMap::new();
        let mut parent = BTreeMap::new();
        let mut queue = VecDeque::from([root]);
        let mut seen = BTreeSet::from([root]);
        while let Some(v) = queue.pop_front() {
            let kids: Vec<usize> = graph.neighbors(v).into_iter().filter(|w| seen.insert(*w)).collect();
            for &w in &kids {
                parent.insert(w, v);
                queue.push_back(w);
            }
            children.insert(v, kids);
        }
        Self { root, root_value, children, parent }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn root_value(&self) -> u32 {
        self.root_value
    }

    pub fn children(&self, v: usize) -> &[usize] {
        self.children.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn depth(&self, mut v: usize) -> u32 {
        let mut d = 0;
        while let Some(p) = self.parent(v) {
            v = p;
            d += 1;
        }
        d
    }

    /// `v`, its parent, and so on up to the root.
    pub fn path_to_root(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while let Some(p) = self.parent(v) {
            out.push(p);
            v = p;
        }
        out
    }

    pub fn pre_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children(v).iter().rev());
        }
        out
    }

    /// Children first, in order, then the node: the order of the rows.
    pub fn post_order(&self) -> Vec<usize> {
        self.restricted_post_order(&|_| true, None)
    }

    /// GJW values in row order; each node carries the root value plus its
    /// depth.
    pub fn gjw_values(&self) -> Vec<u32> {
        self.post_order().into_iter().map(|v| self.root_value + self.depth(v)).collect()
    }

    /// Nested parentheses, children in order.
    pub fn shape(&self) -> String {
        fn go(t: &OrderedTree, v: usize, out: &mut String) {
            out.push('(');
            for &c in t.children(v) {
                go(t, c, out);
            }
            out.push(')');
        }
        let mut out = String::new();
        go(self, self.root, &mut out);
        out
    }

    /// Shape with the children at every node sorted, blind to their order.
    fn unordered_shape(&self) -> String {
        fn go(t: &OrderedTree, v: usize) -> String {
            let mut kids: Vec<String> = t.children(v).iter().map(|&c| go(t, c)).collect();
            kids.sort();
            format!("({})", kids.concat())
        }
        go(self, self.root)
    }

    /// Mirror image: every child list reversed.
    pub fn reflected(&self) -> OrderedTree {
        let mut out = self.clone();
        for kids in out.children.values_mut() {
            kids.reverse();
        }
        out
    }

    fn top_branch_point(&self) -> Option<usize> {
        let mut v = self.root;
        loop {
            match self.children(v) {
                [] => return None,
                [only] => v = *only,
                _ => return Some(v),
            }
        }
    }

    /// Post-order over the nodes accepted by `keep`, with the children of
    /// `at.0` replaced by `at.1`.
    fn restricted_post_order(&self, keep: &dyn Fn(usize) -> bool, at: Option<(usize, &[usize])>) -> Vec<usize> {
        fn go(t: &OrderedTree, v: usize, keep: &dyn Fn(usize) -> bool, at: Option<(usize, &[usize])>, out: &mut Vec<usize>) {
            match at {
                Some((node, kids)) if node == v => {
                    for &c in kids {
                        go(t, c, keep, at, out);
                    }
                }
                _ => {
                    for &c in t.children(v).iter().filter(|&&c| keep(c)) {
                        go(t, c, keep, at, out);
                    }
                }
            }
            out.push(v);
        }
        let mut out = Vec::new();
        go(self, self.root, keep, at, &mut out);
        out
    }
}

/// The normal form read off ordered trees: one per 1-ending block, and the
/// sub-blocks of the final block in row order.
pub fn emit_gjw(one_blocks: &[OrderedTree], final_block: &[OrderedTree]) -> NormalForm {
    let mut blocks: Vec<Block> = one_blocks
        .iter()
        .map(|t| Block::new(t.gjw_values()).expect("trees rooted at 1 give 1-ending blocks"))
        .collect();
    if !final_block.is_empty() {
        let tail: Vec<u32> = final_block.iter().flat_map(OrderedTree::gjw_values).collect();
        blocks.push(Block::new(tail).expect("values above 1"));
    }
    NormalForm::from_blocks(blocks)
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub normal_form: NormalForm,
    pub profiles: Vec<CoatomProfile>,
    pub one_blocks: Vec<OrderedTree>,
    /// Sub-blocks of the final block, in row order.
    pub final_block: Vec<OrderedTree>,
    /// How many times a structural test was inconclusive and candidate
    /// enumeration decided instead, including nested calls.
    pub fallbacks: usize,
}

pub fn reconstruct(poset: &Poset) -> Result<NormalForm> {
    Ok(reconstruct_with(poset, &ReconstructOptions::default())?.normal_form)
}

pub fn reconstruct_with(poset: &Poset, options: &ReconstructOptions) -> Result<Reconstruction> {
    Reconstructor { poset, view: CoatomView::new(poset), options: *options, fallbacks: Cell::new(0) }.run()
}

struct Reconstructor<'a> {
    poset: &'a Poset,
    view: CoatomView<'a>,
    options: ReconstructOptions,
    fallbacks: Cell<usize>,
}

/// The lower interval of one coatom of a candidate board.
struct Reference {
    form: Option<NormalForm>,
    interval: Poset,
}

/// The lower interval of one coatom in the input, with its normal form
/// computed on demand.
struct Actual {
    interval: Poset,
    form: Option<Option<NormalForm>>,
}

type Result<T> = std::result::Result<T, ReconstructError>;

impl Reconstructor<'_> {
    fn run(&self) -> Result<Reconstruction> {
        let (profiles, graph) = self.profiles()?;
        let components = graph.components();
        let (singles, pushes) = identify_final_block(&profiles, &components)?;

        let mut one_blocks = Vec::new();
        for comp in singles {
            one_blocks.push(self.one_ending_tree(&comp, &graph)?);
        }

        let order = self.order_push_subblocks(&pushes.iter().map(|&(root, _)| root).collect::<Vec<_>>())?;
        let edges = |c: usize| profiles.iter().find(|p| p.coatom == c).map_or(0, |p| p.chain_edges);
        if order.windows(2).any(|w| edges(w[0]) > edges(w[1])) {
            return Err(Inconsistency::PushOrder.into());
        }
        let mut final_block: Vec<OrderedTree> =
            order.iter().map(|&root| OrderedTree::from_edges(root, edges(root) as u32, &graph)).collect();
        let mut resolved = true;
        for tree in &mut final_block {
            resolved &= self.order_tail_tree(tree)?;
        }
        if !resolved {
            final_block = self.tail_fallback(final_block)?;
        }

        let normal_form = emit_gjw(&one_blocks, &final_block);
        let expected = PoincarePolynomial::from_gjw_values(normal_form.entries());
        if expected != poincare_polynomial(self.poset) {
            return Err(Inconsistency::RankSizes.into());
        }
        if self.options.verify {
            let board = GjwSequence::new(normal_form.entries().collect()).expect("blocks concatenate").partition();
            let candidate = build_poset_bounded(&board, self.options.max_elements)?;
            if !self.oracle().are_isomorphic(self.poset, candidate.poset())? {
                return Err(Inconsistency::Verification.into());
            }
        }
        Ok(Reconstruction { normal_form, profiles, one_blocks, final_block, fallbacks: self.fallbacks.get() })
    }

    fn oracle(&self) -> IsoOracle {
        IsoOracle::new(self.options.max_elements)
    }

    fn profiles(&self) -> Result<(Vec<CoatomProfile>, EntanglementGraph)> {
        let graph = self.view.entanglement_graph();
        if !graph.is_forest() {
            return Err(Inconsistency::NotAForest.into());
        }
        let components = graph.components();
        let top_rank = self.poset.height();
        let mut out = Vec::new();
        for &c in self.view.coatoms() {
            let xs = self.view.generated(&[c]);
            let mut ranks: Vec<u32> = xs.iter().map(|&x| self.poset.rank(x)).collect();
            ranks.sort_unstable_by(|a, b| b.cmp(a));
            if ranks.iter().enumerate().any(|(i, &r)| r as usize + i != top_rank as usize) {
                return Err(Inconsistency::NotAChain.into());
            }
            let chain_edges = xs.len() - 1;
            let component = components.iter().position(|comp| comp.contains(&c)).expect("every coatom is a vertex");
            out.push(CoatomProfile { coatom: c, chain_edges, is_push: chain_edges >= 2, component });
        }
        Ok((out, graph))
    }

    fn bottom_of(&self, region: &[usize]) -> Option<usize> {
        region.iter().copied().min_by_key(|&x| self.poset.rank(x))
    }

    /// Orders push coatoms by row: the minimum of `X_i` covers one element
    /// of `X_{i,x}` exactly when `i` comes first.
    fn order_push_subblocks(&self, roots: &[usize]) -> Result<Vec<usize>> {
        let covered = |i: usize, x: usize| {
            let r = self.bottom_of(&self.view.generated(&[i])).expect("X_i contains the maximum");
            let region: BTreeSet<usize> = self.view.generated(&[i, x]).into_iter().collect();
            self.poset.lower_covers(r).iter().filter(|y| region.contains(y)).count()
        };
        let mut earlier = vec![0; roots.len()];
        for a in 0..roots.len() {
            for b in a + 1..roots.len() {
                match (covered(roots[a], roots[b]), covered(roots[b], roots[a])) {
                    (1, 2) => earlier[b] += 1,
                    (2, 1) => earlier[a] += 1,
                    _ => return Err(Inconsistency::PushOrder.into()),
                }
            }
        }
        sort_by_positions(roots, &earlier).ok_or_else(|| Inconsistency::PushOrder.into())
    }

    /// Roots consistent with the leaf depths, one per rooted shape.
    fn find_root(&self, comp: &[usize], graph: &EntanglementGraph) -> Result<Vec<usize>> {
        if comp.len() == 1 {
            return Ok(comp.to_vec());
        }
        let region = self.view.generated(comp);
        let base = self.bottom_of(&region).map_or(0, |x| self.poset.rank(x));
        let leaves: Vec<(usize, u32)> = comp
            .iter()
            .copied()
            .filter(|&v| graph.neighbors(v).len() == 1)
            .map(|leaf| {
                let m = region
                    .iter()
                    .filter(|&&x| !self.view.leq(x, leaf))
                    .map(|&x| self.poset.rank(x) - base)
                    .min()
                    .expect("the maximum lies below no coatom");
                (leaf, m)
            })
            .collect();
        let mut shapes = BTreeSet::new();
        let mut out = Vec::new();
        for &r in comp {
            let dist = distances(graph, r);
            if leaves.iter().all(|&(leaf, m)| leaf == r || dist[&leaf] + 1 == m)
                && shapes.insert(OrderedTree::from_edges(r, 1, graph).unordered_shape())
            {
                out.push(r);
            }
        }
        if out.is_empty() {
            return Err(Inconsistency::NoRoot.into());
        }
        Ok(out)
    }

    fn one_ending_tree(&self, comp: &[usize], graph: &EntanglementGraph) -> Result<OrderedTree> {
        let roots = self.find_root(comp, graph)?;
        let mut trees: Vec<OrderedTree> = roots.iter().map(|&r| OrderedTree::from_edges(r, 1, graph)).collect();
        if let [tree] = &mut trees[..] {
            if self.order_one_ending(tree)? {
                return Ok(tree.clone());
            }
        }
        self.fallbacks.set(self.fallbacks.get() + 1);
        let target = self.induced(&self.view.generated(comp));
        let mut tried = BTreeSet::new();
        for tree in &trees {
            for order in self.orderings(tree)? {
                let candidate = tree.with_orders(&order);
                if tried.insert(Block::new(candidate.gjw_values()).expect("1-ending").canonical())
                    && self.matches_board(&target, &candidate.gjw_values())?
                {
                    return Ok(candidate);
                }
            }
        }
        Err(Inconsistency::NoCandidate.into())
    }

    /// Orders a 1-ending tree up to reflection: the middle of every three
    /// branches at the top branch point, then the exact order further
    /// down using one branch above as a reference. `false` when some test
    /// is inconclusive.
    fn order_one_ending(&self, tree: &mut OrderedTree) -> Result<bool> {
        let Some(top) = tree.top_branch_point() else {
            return Ok(true);
        };
        let path = tree.path_to_root(top);
        if tree.children(top).len() >= 3 {
            match self.order_by_middles(tree, top, &path)? {
                Some(order) => {
                    tree.children.insert(top, order);
                }
                None => return Ok(false),
            }
        }
        for p in tree.pre_order() {
            if p == top || tree.children(p).len() < 2 {
                continue;
            }
            let mut context = tree.path_to_root(p);
            let branch = context[context.iter().position(|&v| v == top).expect("below the top branch point") - 1];
            let other = *tree.children(top).iter().find(|&&c| c != branch).expect("a branch point has two children");
            context.push(other);
            match self.order_pairwise(tree, p, &context)? {
                Some(order) => {
                    tree.children.insert(p, order);
                }
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    fn order_tail_tree(&self, tree: &mut OrderedTree) -> Result<bool> {
        for p in tree.pre_order() {
            if tree.children(p).len() < 2 {
                continue;
            }
            let context = tree.path_to_root(p);
            match self.order_pairwise(tree, p, &context)? {
                Some(order) => {
                    tree.children.insert(p, order);
                }
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    fn tail_fallback(&self, trees: Vec<OrderedTree>) -> Result<Vec<OrderedTree>> {
        self.fallbacks.set(self.fallbacks.get() + 1);
        let coatoms: Vec<usize> = trees.iter().flat_map(OrderedTree::post_order).collect();
        let target = self.induced(&self.view.generated(&coatoms));
        let options: Vec<Vec<BTreeMap<usize, Vec<usize>>>> =
            trees.iter().map(|t| self.orderings(t)).collect::<Result<_>>()?;
        let total = options.iter().try_fold(1usize, |acc, o| acc.checked_mul(o.len()));
        if total.is_none_or(|n| n > self.options.max_candidates) {
            return Err(ReconstructError::TooManyCandidates(self.options.max_candidates));
        }
        let mut choice = vec![0; trees.len()];
        let mut tried = BTreeSet::new();
        loop {
            let candidate: Vec<OrderedTree> =
                trees.iter().zip(&choice).zip(&options).map(|((t, &i), o)| t.with_orders(&o[i])).collect();
            let values: Vec<u32> = candidate.iter().flat_map(OrderedTree::gjw_values).collect();
            if tried.insert(values.clone()) && self.matches_board(&target, &values)? {
                return Ok(candidate);
            }
            // Odometer over the per-tree choices.
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return Err(Inconsistency::NoCandidate.into());
                }
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// Every assignment of child orders to the branch points of `tree`.
    fn orderings(&self, tree: &OrderedTree) -> Result<Vec<BTreeMap<usize, Vec<usize>>>> {
        let mut out = vec![BTreeMap::new()];
        for v in tree.pre_order() {
            let kids = tree.children(v);
            if kids.len() < 2 {
                continue;
            }
            let perms = permutations(kids);
            if out.len().saturating_mul(perms.len()) > self.options.max_candidates {
                return Err(ReconstructError::TooManyCandidates(self.options.max_candidates));
            }
            out = out
                .into_iter()
                .flat_map(|m| {
                    perms.iter().map(move |p| {
                        let mut m = m.clone();
                        m.insert(v, p.clone());
                        m
                    })
                })
                .collect();
        }
        Ok(out)
    }

    fn matches_board(&self, target: &Poset, values: &[u32]) -> Result<bool> {
        let Ok(gjw) = GjwSequence::new(values.to_vec()) else {
            return Ok(false);
        };
        let candidate = build_poset_bounded(&gjw.partition(), self.options.max_elements)?;
        Ok(self.oracle().are_isomorphic(target, candidate.poset())?)
    }

    /// Children of `p` ordered by comparing every pair; `None` when a
    /// comparison is inconclusive or the answers are not a linear order.
    fn order_pairwise(&self, tree: &OrderedTree, p: usize, context: &[usize]) -> Result<Option<Vec<usize>>> {
        let kids = tree.children(p).to_vec();
        let mut earlier = vec![0; kids.len()];
        for a in 0..kids.len() {
            for b in a + 1..kids.len() {
                match self.decide_pair(tree, p, context, kids[a], kids[b])? {
                    Some(true) => earlier[b] += 1,
                    Some(false) => earlier[a] += 1,
                    None => return Ok(None),
                }
            }
        }
        Ok(sort_by_positions(&kids, &earlier))
    }

    /// Whether `first` comes before `second` among the children of `p`,
    /// judged on the lower intervals of the two coatoms inside `X_R`.
    fn decide_pair(&self, tree: &OrderedTree, p: usize, context: &[usize], first: usize, second: usize) -> Result<Option<bool>> {
        let mut members: BTreeSet<usize> = context.iter().copied().collect();
        members.extend([first, second]);
        let Some(refs) = self.references(tree, &members, p, &[first, second])? else {
            return Ok(None);
        };
        if !self.distinct(&refs[0], &refs[1])? {
            return Ok(None);
        }
        let region = self.view.generated(&members.iter().copied().collect::<Vec<_>>());
        let mut a = self.actual(&region, first);
        let mut b = self.actual(&region, second);
        let pattern = (
            self.matches(&mut a, &refs[0])?,
            self.matches(&mut a, &refs[1])?,
            self.matches(&mut b, &refs[0])?,
            self.matches(&mut b, &refs[1])?,
        );
        Ok(match pattern {
            (true, false, false, true) => Some(true),
            (false, true, true, false) => Some(false),
            _ => None,
        })
    }

    /// Order of the children of the top branch point up to reversal, from
    /// the middle element of every three.
    fn order_by_middles(&self, tree: &OrderedTree, top: usize, path: &[usize]) -> Result<Option<Vec<usize>>> {
        let kids = tree.children(top).to_vec();
        let m = kids.len();
        let mut middle = BTreeMap::new();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let triple = [kids[a], kids[b], kids[c]];
                    match self.triple_middle(tree, top, path, triple)? {
                        Some(x) => middle.insert(triple, x),
                        None => return Ok(None),
                    };
                }
            }
        }
        let mid = |x: usize, y: usize, z: usize| {
            let mut t = [x, y, z];
            t.sort_unstable();
            middle[&t]
        };
        let ends: Vec<usize> = kids.iter().copied().filter(|k| !middle.values().any(|v| v == k)).collect();
        let [start, _] = ends[..] else {
            return Ok(None);
        };
        let position: Vec<usize> = kids
            .iter()
            .map(|&y| {
                if y == start {
                    0
                } else {
                    1 + kids.iter().filter(|&&z| z != start && z != y && mid(start, z, y) == z).count()
                }
            })
            .collect();
        let Some(order) = sort_by_positions(&kids, &position) else {
            return Ok(None);
        };
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    if mid(order[a], order[b], order[c]) != order[b] {
                        return Ok(None);
                    }
                }
            }
        }
        Ok(Some(order))
    }

    fn triple_middle(&self, tree: &OrderedTree, top: usize, path: &[usize], triple: [usize; 3]) -> Result<Option<usize>> {
        let mut members: BTreeSet<usize> = path.iter().copied().collect();
        members.extend(triple);
        let Some(refs) = self.references(tree, &members, top, &triple)? else {
            return Ok(None);
        };
        if !self.distinct(&refs[1], &refs[0])? || !self.distinct(&refs[1], &refs[2])? {
            return Ok(None);
        }
        let region = self.view.generated(&members.iter().copied().collect::<Vec<_>>());
        let mut hits = Vec::new();
        for x in triple {
            if self.matches(&mut self.actual(&region, x), &refs[1])? {
                hits.push(x);
            }
        }
        Ok(match hits[..] {
            [x] => Some(x),
            _ => None,
        })
    }

    /// Builds the board of the tree induced on `members`, with the children
    /// of `at` listed as `kids`, and returns the lower interval of the
    /// coatom of each of `kids` in its rook poset.
    fn references(&self, tree: &OrderedTree, members: &BTreeSet<usize>, at: usize, kids: &[usize]) -> Result<Option<Vec<Reference>>> {
        let nodes = tree.restricted_post_order(&|v| members.contains(&v), Some((at, kids)));
        let values: Vec<u32> = nodes.iter().map(|&v| tree.root_value + tree.depth(v)).collect();
        let Ok(gjw) = GjwSequence::new(values) else {
            return Ok(None);
        };
        let board = build_poset_bounded(&gjw.partition(), self.options.max_elements)?;
        let down = board.poset().down_sets();
        let refs = kids
            .iter()
            .map(|k| {
                let row = nodes.iter().position(|v| v == k).expect("kid is a member") + 1;
                let c = board.coatom_of_row(row).expect("rows with positive GJW value have coatoms");
                reference(&board, c, &down[c].ones().collect::<Vec<_>>())
            })
            .collect();
        Ok(Some(refs))
    }

    fn distinct(&self, a: &Reference, b: &Reference) -> Result<bool> {
        if let (Some(x), Some(y)) = (&a.form, &b.form) {
            return Ok(x != y);
        }
        Ok(!self.oracle().are_isomorphic(&a.interval, &b.interval)?)
    }

    fn actual(&self, region: &[usize], coatom: usize) -> Actual {
        let below: Vec<usize> = region.iter().copied().filter(|&x| self.view.leq(x, coatom)).collect();
        Actual { interval: self.induced(&below), form: None }
    }

    fn matches(&self, actual: &mut Actual, reference: &Reference) -> Result<bool> {
        let Some(form) = &reference.form else {
            return Ok(self.oracle().are_isomorphic(&actual.interval, &reference.interval)?);
        };
        if actual.form.is_none() {
            actual.form = Some(match reconstruct_with(&actual.interval, &self.options) {
                Ok(r) => {
                    self.fallbacks.set(self.fallbacks.get() + r.fallbacks);
                    Some(r.normal_form)
                }
                Err(ReconstructError::Inconsistent(_)) => None,
                Err(e) => return Err(e),
            });
        }
        Ok(actual.form.as_ref().expect("just filled").as_ref() == Some(form))
    }

    fn induced(&self, members: &[usize]) -> Poset {
        self.poset.induced(members).expect("convex subsets of a bounded graded poset").0
    }
}

/// When the coatom placement is the maximum of the board cut out by its
/// prefix maxima, its lower interval is that board's rook poset and the
/// normal form identifies it.
fn reference(board: &BoardPoset, coatom: usize, below: &[usize]) -> Reference {
    let x = board.placement(coatom);
    let mut prefix_max = 0;
    let parts: Vec<u32> = x
        .columns()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            prefix_max = prefix_max.max(c);
            prefix_max.max(i as u32 + 1)
        })
        .collect();
    let form = Partition::new(parts).ok().filter(|b| max_placement(b) == *x).map(|b| b.gjw().normal_form());
    let interval = board.poset().induced(below).expect("lower intervals are convex").0;
    Reference { form, interval }
}

/// 1-ending components, and final-block components with their push coatom.
type Split = (Vec<Vec<usize>>, Vec<(usize, Vec<usize>)>);

/// Components without a coatom of chain length two or more are 1-ending
/// blocks; each other component belongs to the final block, rooted at its
/// unique such coatom.
fn identify_final_block(
    profiles: &[CoatomProfile],
    components: &[Vec<usize>],
) -> std::result::Result<Split, Inconsistency> {
    let mut singles = Vec::new();
    let mut pushes = Vec::new();
    for comp in components {
        let roots: Vec<usize> =
            profiles.iter().filter(|p| p.is_push && comp.contains(&p.coatom)).map(|p| p.coatom).collect();
        match roots[..] {
            [] => singles.push(comp.clone()),
            [root] => pushes.push((root, comp.clone())),
            _ => return Err(Inconsistency::TwoPushCoatoms),
        }
    }
    Ok((singles, pushes))
}

fn distances(graph: &EntanglementGraph, from: usize) -> BTreeMap<usize, u32> {
    let mut dist = BTreeMap::from([(from, 0)]);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for w in graph.neighbors(v) {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// `items` rearranged so that item `i` lands at `positions[i]`, if the
/// positions are a permutation.
fn sort_by_positions(items: &[usize], positions: &[usize]) -> Option<Vec<usize>> {
    let mut out = vec![None; items.len()];
    for (&item, &pos) in items.iter().zip(positions) {
        if pos >= out.len() || out[pos].replace(item).is_some() {
            return None;
        }
    }
    out.into_iter().collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

impl OrderedTree {
    fn with_orders(&self, orders: &BTreeMap<usize, Vec<usize>>) -> OrderedTree {
        let mut out = self.clone();
        for (&v, kids) in orders {
            out.children.insert(v, kids.clone());
        }
        out
    }
}
