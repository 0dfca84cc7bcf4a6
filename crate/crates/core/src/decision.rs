//! Deciding `d_M ≤ λ` by walking a line arrangement in the dual strip.
//!
//! Within one face of the arrangement the slice orders, the barcode pairings
//! and the bottleneck graph are constant, so a single representative slice per
//! face suffices. Moving between adjacent faces changes only a few orders or
//! edges; the walk patches the reductions with vineyard transpositions and
//! repairs the matching with a few augmenting searches.

use crate::arrangement::{
    build_arrangement, euler_walk, join_line, shift_line, slope_line, Arrangement, LinePrimitive,
};
use crate::matching::{Bar, MatchGraph, Matching};
use crate::persistence::RuState;
use crate::presentation::{ElementSet, PairKind, Presentation, Role, Side};
use crate::rational::{ExtRational, Rational};
use crate::slices::{induced_ordered_presentation, push, DualPoint};

/// Counters collected during one walk.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecisionStats {
    pub lines: usize,
    pub faces: usize,
    pub crossings: usize,
    pub transpositions: usize,
    pub repairs: usize,
}

/// The lines whose crossings can change the bottleneck graph: joins of
/// elements of the same presentation and role, `±λ` shifts and slopes of
/// elements compared across presentations, and `±2λ` shifts and slopes of
/// generator/relation pairs of one presentation.
pub fn decision_lines(set: &ElementSet, lambda: &Rational) -> Vec<LinePrimitive> {
    let n = set.len();
    let mut out = Vec::new();
    for h in 0..n {
        for h2 in h + 1..n {
            if set.pair_kind(h, h2) == PairKind::SameOrder {
                out.push(join_line(set, h, h2));
            }
        }
    }
    for h in 0..n {
        for h2 in 0..n {
            let shifts: &[i8] = match set.pair_kind(h, h2) {
                PairKind::Matched => &[-1, 1],
                PairKind::Diagonal => &[-2, 2],
                _ => continue,
            };
            for &i in shifts {
                out.push(shift_line(set, h, h2, i, lambda));
            }
            if h < h2 {
                out.extend(slope_line(set, h, h2, shifts[1], lambda));
            }
        }
    }
    out
}

struct ModuleState<'a> {
    q: &'a Presentation,
    ru: RuState,
    gen_push: Vec<Rational>,
    rel_push: Vec<Rational>,
}

impl<'a> ModuleState<'a> {
    fn new(q: &'a Presentation, s: &DualPoint) -> Self {
        let ind = induced_ordered_presentation(q, s);
        let ru = RuState::reduce(q, ind.row_order, ind.col_order);
        let mut st = ModuleState { q, ru, gen_push: Vec::new(), rel_push: Vec::new() };
        st.set_pushes(s);
        st
    }

    fn set_pushes(&mut self, s: &DualPoint) {
        self.gen_push = self.q.generators.iter().map(|e| push(s, &e.grade)).collect();
        self.rel_push = self.q.relations.iter().map(|e| push(s, &e.grade)).collect();
    }

    fn bars(&self) -> Vec<Bar> {
        bars_of(&self.ru, &self.gen_push, &self.rel_push)
    }

    /// Restores the order by (push, index) with adjacent transpositions.
    /// Returns generators whose partner changed and the number of swaps.
    fn resort(&mut self) -> (Vec<usize>, usize) {
        let mut changed = Vec::new();
        let mut swaps = 0;
        for role in [Role::Generator, Role::Relation] {
            let len = match role {
                Role::Generator => self.ru.num_rows(),
                Role::Relation => self.ru.num_cols(),
            };
            for pos in 1..len {
                let mut j = pos;
                while j > 0 {
                    let (x, y) = match role {
                        Role::Generator => (self.ru.row_order()[j - 1], self.ru.row_order()[j]),
                        Role::Relation => (self.ru.col_order()[j - 1], self.ru.col_order()[j]),
                    };
                    let push = match role {
                        Role::Generator => &self.gen_push,
                        Role::Relation => &self.rel_push,
                    };
                    if (&push[x], x) <= (&push[y], y) {
                        break;
                    }
                    let delta = match role {
                        Role::Generator => self.ru.swap_rows(j - 1),
                        Role::Relation => self.ru.swap_cols(j - 1),
                    };
                    changed.extend(delta);
                    swaps += 1;
                    j -= 1;
                }
            }
        }
        (changed, swaps)
    }
}

fn bars_of(ru: &RuState, gen_push: &[Rational], rel_push: &[Rational]) -> Vec<Bar> {
    (0..gen_push.len())
        .map(|g| Bar {
            birth: gen_push[g].clone(),
            death: match ru.generator_partner(g) {
                Some(r) => ExtRational::Finite(rel_push[r].clone()),
                None => ExtRational::Infinity,
            },
        })
        .collect()
}

/// Bars of the slice restriction at `s`, one per generator; empty bars included.
pub fn slice_bars(q: &Presentation, s: &DualPoint) -> Vec<Bar> {
    let st = ModuleState::new(q, s);
    st.bars()
}

/// Observer hooks for tests: called with each visited face, its representative
/// and whether the maintained graph has a perfect matching there.
pub type FaceObserver<'o> = dyn FnMut(usize, &DualPoint, bool) + 'o;

/// Walk state for one side of the strip.
pub struct Walker<'a> {
    set: ElementSet,
    modules: [ModuleState<'a>; 2],
    graph: MatchGraph,
    matching: Matching,
    pub stats: DecisionStats,
}

impl<'a> Walker<'a> {
    fn start(q: &'a Presentation, q2: &'a Presentation, lambda: &Rational, s: &DualPoint) -> Self {
        let set = ElementSet::new(q, q2);
        let m0 = ModuleState::new(q, s);
        let m1 = ModuleState::new(q2, s);
        let graph = MatchGraph::new(m0.bars(), m1.bars(), lambda.clone());
        let matching = graph.maximum_matching();
        Walker { set, modules: [m0, m1], graph, matching, stats: DecisionStats::default() }
    }

    fn side_index(side: Side) -> usize {
        match side {
            Side::First => 0,
            Side::Second => 1,
        }
    }

    /// Moves to the face with representative `s` across a line carrying `prims`.
    /// Returns whether a perfect matching exists afterwards; with `full` the
    /// matching is maximized even when a repair search fails.
    fn cross(&mut self, prims: &[&LinePrimitive], s: &DualPoint, full: bool) -> bool {
        let mut touched: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (k, module) in self.modules.iter_mut().enumerate() {
            module.set_pushes(s);
            let (changed, swaps) = module.resort();
            self.stats.transpositions += swaps;
            touched[k].extend(changed);
        }
        for p in prims {
            let (h, h2) = p.provenance.elements();
            for e in [h, h2] {
                let r = self.set.refs[e];
                let k = Self::side_index(r.side);
                let g = match r.role {
                    Role::Generator => Some(r.index),
                    Role::Relation => self.modules[k].ru.relation_partner(r.index),
                };
                touched[k].extend(g);
            }
        }
        self.graph.first = self.modules[0].bars();
        self.graph.second = self.modules[1].bars();
        let (n1, n2) = (self.graph.first.len(), self.graph.second.len());
        for (k, gens) in touched.iter().enumerate() {
            for &g in gens {
                let (left, right) = if k == 0 { (g, n2 + g) } else { (n1 + g, g) };
                if let Some(r) = self.matching.mate_left[left] {
                    if !self.graph.has_edge(left, r) {
                        self.matching.unlink_left(left);
                    }
                }
                if let Some(l) = self.matching.mate_right[right] {
                    if !self.graph.has_edge(l, right) {
                        self.matching.unlink_left(l);
                    }
                }
            }
        }
        if self.matching.is_perfect() {
            return true;
        }
        self.stats.repairs += 1;
        if full {
            self.graph.hopcroft_karp(&mut self.matching);
            self.matching.is_perfect()
        } else {
            self.graph.augment_constant(&mut self.matching)
        }
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    pub fn graph(&self) -> &MatchGraph {
        &self.graph
    }
}

fn walk(
    q: &Presentation,
    q2: &Presentation,
    lambda: &Rational,
    mut observer: Option<&mut FaceObserver<'_>>,
) -> (bool, DecisionStats) {
    let set = ElementSet::new(q, q2);
    let prims = decision_lines(&set, lambda);
    let arr: Arrangement = build_arrangement(&prims);
    let walk = euler_walk(&arr);
    let full = observer.is_some();
    let s0 = &arr.faces[walk.start].representative;
    let mut w = Walker::start(q, q2, lambda, s0);
    w.stats.lines = arr.lines.len();
    w.stats.faces = arr.faces.len();
    let mut answer = w.matching.is_perfect();
    if let Some(obs) = observer.as_mut() {
        obs(walk.start, s0, answer);
    }
    if !answer && !full {
        return (false, w.stats);
    }
    for step in &walk.steps {
        let members: Vec<&LinePrimitive> = arr.members[step.line].iter().map(|&k| &prims[k]).collect();
        let s = &arr.faces[step.to].representative;
        w.stats.crossings += 1;
        let ok = w.cross(&members, s, full);
        if let Some(obs) = observer.as_mut() {
            obs(step.to, s, ok);
        }
        if !ok {
            answer = false;
            if !full {
                break;
            }
        }
    }
    (answer, w.stats)
}

/// `d_B(M^s, N^s) ≤ λ` for every slice of slope at most one.
pub fn decide_leq_oneside(q: &Presentation, q2: &Presentation, lambda: &Rational) -> bool {
    walk(q, q2, lambda, None).0
}

pub fn decide_leq_oneside_with_stats(q: &Presentation, q2: &Presentation, lambda: &Rational) -> (bool, DecisionStats) {
    walk(q, q2, lambda, None)
}

/// Visits every face without stopping early, reporting the maintained answer
/// at each face. Repairs use full Hopcroft–Karp phases so the per-face answers
/// stay meaningful after a failure.
pub fn walk_all_faces(q: &Presentation, q2: &Presentation, lambda: &Rational, observer: &mut FaceObserver<'_>) -> bool {
    walk(q, q2, lambda, Some(observer)).0
}

/// `d_M(M, N) ≤ λ`, checking slopes at most one and, after swapping
/// coordinates, slopes at least one.
pub fn decide_leq(q: &Presentation, q2: &Presentation, lambda: &Rational) -> bool {
    decide_leq_oneside(q, q2, lambda)
        && decide_leq_oneside(&q.swap_coordinates(), &q2.swap_coordinates(), lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpres::parse_presentation;

    fn point(x: i64, y: i64) -> Presentation {
        parse_presentation(&format!("fpres v1\nfield 2\ngenerators 1\n{x} {y}\nrelations 0\n")).unwrap()
    }

    #[test]
    fn single_generators_at_distance_one() {
        let (a, b) = (point(0, 0), point(1, 1));
        assert!(decide_leq_oneside(&a, &b, &1.into()));
        assert!(!decide_leq_oneside(&a, &b, &Rational::new(99, 100)));
        assert!(decide_leq(&a, &b, &1.into()));
        assert!(!decide_leq(&a, &b, &Rational::new(99, 100)));
    }

    #[test]
    fn identical_modules() {
        let q = parse_presentation("fpres v1\nfield 2\ngenerators 2\n0 2\n2 0\nrelations 1\n4 4 ; 0:1 1:1\n").unwrap();
        assert!(decide_leq(&q, &q, &0.into()));
        assert!(decide_leq(&q, &q, &Rational::new(1, 3)));
    }
}
