//! Bottleneck matchings between two barcodes.
//!
//! The bipartite graph has the bars of the first barcode plus diagonal copies
//! of the second on the left, and the bars of the second barcode plus diagonal
//! copies of the first on the right. Edges are never materialized; neighbor
//! queries go through a deletable range index instead.

use std::collections::{BTreeSet, VecDeque};
use std::ops::Bound;

use crate::rational::{ExtRational, Rational};

/// A bar `[birth, death)` seen as a point of the persistence diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bar {
    pub birth: Rational,
    pub death: ExtRational,
}

impl Bar {
    pub fn new(birth: Rational, death: ExtRational) -> Self {
        Bar { birth, death }
    }

    pub fn finite(birth: impl Into<Rational>, death: impl Into<Rational>) -> Self {
        Bar { birth: birth.into(), death: ExtRational::Finite(death.into()) }
    }

    pub fn infinite(birth: impl Into<Rational>) -> Self {
        Bar { birth: birth.into(), death: ExtRational::Infinity }
    }

    /// `death − birth`, or `None` for infinite bars.
    pub fn length(&self) -> Option<Rational> {
        self.death.finite().map(|d| d - &self.birth)
    }
}

/// `|h − h'|` with `d(∞, ∞) = 0` and `d(∞, finite) = ∞`.
pub fn edge_distance(h: &ExtRational, h2: &ExtRational) -> ExtRational {
    match (h, h2) {
        (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite((a - b).abs()),
        (ExtRational::Infinity, ExtRational::Infinity) => ExtRational::Finite(Rational::zero()),
        _ => ExtRational::Infinity,
    }
}

fn within(x: &Rational, y: &Rational, lambda: &Rational) -> bool {
    if x >= y {
        &(x - y) <= lambda
    } else {
        &(y - x) <= lambda
    }
}

/// The bottleneck graph at a fixed `λ`.
///
/// Left vertex `i < n1` is bar `i` of `first`; left vertex `n1 + j` is the
/// diagonal copy of bar `j` of `second`. Right vertex `j < n2` is bar `j` of
/// `second`; right vertex `n2 + i` is the diagonal copy of bar `i` of `first`.
#[derive(Debug, Clone)]
pub struct MatchGraph {
    pub first: Vec<Bar>,
    pub second: Vec<Bar>,
    pub lambda: Rational,
    two_lambda: Rational,
}

/// A partial matching stored from both sides.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub mate_left: Vec<Option<usize>>,
    pub mate_right: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching { mate_left: vec![None; n], mate_right: vec![None; n] }
    }

    pub fn size(&self) -> usize {
        self.mate_left.iter().filter(|m| m.is_some()).count()
    }

    pub fn unmatched(&self) -> usize {
        self.mate_left.len() - self.size()
    }

    pub fn is_perfect(&self) -> bool {
        self.mate_left.iter().all(Option::is_some)
    }

    pub fn link(&mut self, l: usize, r: usize) {
        self.mate_left[l] = Some(r);
        self.mate_right[r] = Some(l);
    }

    pub fn unlink_left(&mut self, l: usize) {
        if let Some(r) = self.mate_left[l].take() {
            self.mate_right[r] = None;
        }
    }
}

impl MatchGraph {
    pub fn new(first: Vec<Bar>, second: Vec<Bar>, lambda: Rational) -> Self {
        let two_lambda = &lambda + &lambda;
        MatchGraph { first, second, lambda, two_lambda }
    }

    pub fn side_len(&self) -> usize {
        self.first.len() + self.second.len()
    }

    /// Whether a bar may be matched to the diagonal.
    pub fn short(&self, bar: &Bar) -> bool {
        bar.length().is_some_and(|len| len <= self.two_lambda)
    }

    pub fn bars_close(&self, x: &Bar, y: &Bar) -> bool {
        if !within(&x.birth, &y.birth, &self.lambda) {
            return false;
        }
        match (&x.death, &y.death) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => within(a, b, &self.lambda),
            (ExtRational::Infinity, ExtRational::Infinity) => true,
            _ => false,
        }
    }

    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        let (n1, n2) = (self.first.len(), self.second.len());
        match (l < n1, r < n2) {
            (true, true) => self.bars_close(&self.first[l], &self.second[r]),
            (true, false) => r - n2 == l && self.short(&self.first[l]),
            (false, true) => l - n1 == r && self.short(&self.second[r]),
            (false, false) => true,
        }
    }

    /// Index over the given right vertices.
    pub fn index<I: IntoIterator<Item = usize>>(&self, rights: I) -> NeighborIndex {
        NeighborIndex::new(self, rights)
    }

    /// Hopcroft–Karp from scratch.
    pub fn maximum_matching(&self) -> Matching {
        let mut m = Matching::empty(self.side_len());
        self.hopcroft_karp(&mut m);
        m
    }

    /// Runs Hopcroft–Karp phases starting from `m` until no augmenting path remains.
    pub fn hopcroft_karp(&self, m: &mut Matching) {
        let n = self.side_len();
        loop {
            // Layered BFS from all free left vertices.
            let mut layer_left = vec![usize::MAX; n];
            let mut layer_right = vec![usize::MAX; n];
            let mut frontier: Vec<usize> = (0..n).filter(|&l| m.mate_left[l].is_none()).collect();
            if frontier.is_empty() {
                return;
            }
            for &l in &frontier {
                layer_left[l] = 0;
            }
            let mut index = self.index(0..n);
            let mut depth = 0;
            let mut found = false;
            let mut layers: Vec<Vec<usize>> = Vec::new();
            while !frontier.is_empty() && !found {
                let mut reached = Vec::new();
                let mut next = Vec::new();
                for &l in &frontier {
                    while let Some(r) = index.pop_neighbor(self, l) {
                        layer_right[r] = depth;
                        reached.push(r);
                        match m.mate_right[r] {
                            None => found = true,
                            Some(l2) => {
                                layer_left[l2] = depth + 1;
                                next.push(l2);
                            }
                        }
                    }
                }
                layers.push(reached);
                frontier = next;
                depth += 1;
            }
            if !found {
                return;
            }
            // Depth-first augmentation along the layers, deleting visited vertices.
            let last = depth - 1;
            let mut layer_index: Vec<NeighborIndex> =
                layers.iter().map(|rs| self.index(rs.iter().copied())).collect();
            let mut augmented = false;
            for u in 0..n {
                if m.mate_left[u].is_some() || layer_left[u] != 0 {
                    continue;
                }
                if self.augment_layered(u, m, &mut layer_index, last) {
                    augmented = true;
                }
            }
            if !augmented {
                return;
            }
        }
    }

    fn augment_layered(&self, u: usize, m: &mut Matching, idx: &mut [NeighborIndex], last: usize) -> bool {
        // Iterative DFS; stack entries are (left vertex, layer, right vertex used to reach it).
        let mut stack: Vec<(usize, usize)> = vec![(u, 0)];
        let mut via: Vec<usize> = Vec::new();
        while let Some(&(l, k)) = stack.last() {
            match idx[k].pop_neighbor(self, l) {
                Some(r) => match m.mate_right[r] {
                    None if k == last => {
                        via.push(r);
                        for (&(l, _), &r) in stack.iter().zip(&via) {
                            m.link(l, r);
                        }
                        return true;
                    }
                    Some(l2) if k < last => {
                        via.push(r);
                        stack.push((l2, k + 1));
                    }
                    _ => {}
                },
                None => {
                    stack.pop();
                    via.pop();
                }
            }
        }
        false
    }

    /// Repairs a matching with few free vertices by one augmenting search per
    /// free left vertex. Returns `false` as soon as a search fails, in which
    /// case no perfect matching exists.
    pub fn augment_constant(&self, m: &mut Matching) -> bool {
        let n = self.side_len();
        let free: Vec<usize> = (0..n).filter(|&l| m.mate_left[l].is_none()).collect();
        if free.is_empty() {
            return true;
        }
        let mut index = self.index(0..n);
        for u in free {
            if !self.augment_single(u, m, &mut index) {
                return false;
            }
            // Reuse the index while nothing was consumed? Rebuilding keeps it simple and exact.
            index = self.index(0..n);
        }
        true
    }

    fn augment_single(&self, u: usize, m: &mut Matching, index: &mut NeighborIndex) -> bool {
        let n = self.side_len();
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::from([u]);
        while let Some(l) = queue.pop_front() {
            while let Some(r) = index.pop_neighbor(self, l) {
                parent[r] = l;
                match m.mate_right[r] {
                    None => {
                        let mut r = r;
                        loop {
                            let l = parent[r];
                            let prev = m.mate_left[l];
                            m.link(l, r);
                            match prev {
                                Some(p) if l != u => r = p,
                                _ => return true,
                            }
                        }
                    }
                    Some(l2) => queue.push_back(l2),
                }
            }
        }
        false
    }

    /// Whether a perfect matching exists.
    pub fn has_perfect_matching(&self) -> (bool, Matching) {
        let m = self.maximum_matching();
        (m.is_perfect(), m)
    }
}

/// Right vertices still available to a search, queried by L∞ proximity.
///
/// Finite real bars live in a range tree over births whose nodes keep
/// `(death, vertex)` sets; infinite bars live in a set keyed by birth; diagonal
/// copies only need membership.
pub struct NeighborIndex {
    n_second: usize,
    births: Vec<Rational>,
    slot: Vec<usize>,
    tree: Vec<BTreeSet<(Rational, usize)>>,
    infinite: BTreeSet<(Rational, usize)>,
    diagonal: BTreeSet<usize>,
    present: Vec<bool>,
}

impl NeighborIndex {
    fn new<I: IntoIterator<Item = usize>>(g: &MatchGraph, rights: I) -> Self {
        let n2 = g.second.len();
        let mut present = vec![false; g.side_len()];
        let mut finite: Vec<(Rational, usize)> = Vec::new();
        let mut infinite = BTreeSet::new();
        let mut diagonal = BTreeSet::new();
        for r in rights {
            present[r] = true;
            if r >= n2 {
                diagonal.insert(r);
            } else {
                let bar = &g.second[r];
                if bar.death.is_finite() {
                    finite.push((bar.birth.clone(), r));
                } else {
                    infinite.insert((bar.birth.clone(), r));
                }
            }
        }
        finite.sort();
        let k = finite.len();
        let mut slot = vec![usize::MAX; n2];
        let mut tree = Vec::new();
        if k > 0 {
            tree = vec![BTreeSet::new(); 4 * k];
        }
        let mut idx = NeighborIndex {
            n_second: n2,
            births: finite.iter().map(|(b, _)| b.clone()).collect(),
            slot: Vec::new(),
            tree,
            infinite,
            diagonal,
            present,
        };
        for (pos, (_, r)) in finite.iter().enumerate() {
            slot[*r] = pos;
            let death = g.second[*r].death.finite().unwrap().clone();
            idx.update_path(pos, (death, *r), true);
        }
        idx.slot = slot;
        idx
    }

    fn update_path(&mut self, pos: usize, key: (Rational, usize), insert: bool) {
        let k = self.births.len();
        let (mut node, mut lo, mut hi) = (1usize, 0usize, k);
        loop {
            if insert {
                self.tree[node].insert(key.clone());
            } else {
                self.tree[node].remove(&key);
            }
            if hi - lo == 1 {
                break;
            }
            let mid = (lo + hi) / 2;
            if pos < mid {
                node *= 2;
                hi = mid;
            } else {
                node = node * 2 + 1;
                lo = mid;
            }
        }
    }

    pub fn contains(&self, r: usize) -> bool {
        self.present[r]
    }

    /// Deletes right vertex `r` if present.
    pub fn remove(&mut self, g: &MatchGraph, r: usize) {
        if !self.present[r] {
            return;
        }
        self.present[r] = false;
        if r >= self.n_second {
            self.diagonal.remove(&r);
            return;
        }
        let bar = &g.second[r];
        match &bar.death {
            ExtRational::Finite(d) => {
                let pos = self.slot[r];
                self.update_path(pos, (d.clone(), r), false);
            }
            ExtRational::Infinity => {
                self.infinite.remove(&(bar.birth.clone(), r));
            }
        }
    }

    /// Finds, deletes and returns some remaining neighbor of left vertex `l`.
    pub fn pop_neighbor(&mut self, g: &MatchGraph, l: usize) -> Option<usize> {
        let n1 = g.first.len();
        let n2 = self.n_second;
        let found = if l < n1 {
            let bar = &g.first[l];
            let own_diag = n2 + l;
            if self.present[own_diag] && g.short(bar) {
                Some(own_diag)
            } else {
                self.query_bar(g, bar)
            }
        } else {
            let j = l - n1;
            if j < n2 && self.present[j] && g.short(&g.second[j]) {
                Some(j)
            } else {
                self.diagonal.first().copied()
            }
        };
        if let Some(r) = found {
            self.remove(g, r);
        }
        found
    }

    fn query_bar(&self, g: &MatchGraph, bar: &Bar) -> Option<usize> {
        let lo_b = &bar.birth - &g.lambda;
        let hi_b = &bar.birth + &g.lambda;
        match &bar.death {
            ExtRational::Infinity => self
                .infinite
                .range((Bound::Included((lo_b, 0)), Bound::Unbounded))
                .next()
                .filter(|(b, _)| *b <= hi_b)
                .map(|&(_, r)| r),
            ExtRational::Finite(d) => {
                if self.births.is_empty() {
                    return None;
                }
                let from = self.births.partition_point(|b| *b < lo_b);
                let to = self.births.partition_point(|b| *b <= hi_b);
                if from >= to {
                    return None;
                }
                let lo_d = d - &g.lambda;
                let hi_d = d + &g.lambda;
                self.query_tree(1, 0, self.births.len(), from, to, &lo_d, &hi_d)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn query_tree(
        &self,
        node: usize,
        lo: usize,
        hi: usize,
        from: usize,
        to: usize,
        lo_d: &Rational,
        hi_d: &Rational,
    ) -> Option<usize> {
        if to <= lo || hi <= from || self.tree[node].is_empty() {
            return None;
        }
        if from <= lo && hi <= to {
            return self.tree[node]
                .range((Bound::Included((lo_d.clone(), 0)), Bound::Unbounded))
                .next()
                .filter(|(d, _)| d <= hi_d)
                .map(|&(_, r)| r);
        }
        let mid = (lo + hi) / 2;
        self.query_tree(2 * node, lo, mid, from, to, lo_d, hi_d)
            .or_else(|| self.query_tree(2 * node + 1, mid, hi, from, to, lo_d, hi_d))
    }
}

/// Candidate values at which the bottleneck distance can be attained.
pub fn bottleneck_candidates(first: &[Bar], second: &[Bar]) -> Vec<Rational> {
    let mut c = vec![Rational::zero()];
    let half = Rational::new(1, 2);
    for x in first.iter().chain(second) {
        if let Some(len) = x.length() {
            c.push(&len * &half);
        }
    }
    for x in first {
        for y in second {
            c.push((&x.birth - &y.birth).abs());
            if let (Some(a), Some(b)) = (x.death.finite(), y.death.finite()) {
                c.push((a - b).abs());
            }
        }
    }
    c.sort();
    c.dedup();
    c
}

/// Exact bottleneck distance between two barcodes.
pub fn bottleneck_distance(first: &[Bar], second: &[Bar]) -> ExtRational {
    let inf1 = first.iter().filter(|b| !b.death.is_finite()).count();
    let inf2 = second.iter().filter(|b| !b.death.is_finite()).count();
    if inf1 != inf2 {
        return ExtRational::Infinity;
    }
    let cands = bottleneck_candidates(first, second);
    let ok = |lambda: &Rational| MatchGraph::new(first.to_vec(), second.to_vec(), lambda.clone()).has_perfect_matching().0;
    // The largest candidate always admits a perfect matching.
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(&cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    ExtRational::Finite(cands[lo].clone())
}
