//! Computing `d_M` from the plane arrangement in `(a, b, λ)`-space.
//!
//! The bottleneck distance at slice `s` can only cross the value `λ` on one of
//! finitely many planes, so `d_M` is the level of some vertex where three planes
//! meet. Each plane `P` yields the gap `I_P = (α, β]` between consecutive vertex
//! levels on `P` containing `d_M`; visiting the planes in random order and
//! intersecting those gaps pins down `d_M` with few expensive searches.

use std::cmp::Ordering;
use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decision::{decide_leq, decide_leq_oneside, slice_bars};
use crate::matching::bottleneck_distance;
use crate::presentation::{ElementSet, PairKind, Presentation};
use crate::rational::{ExtRational, Rational};
use crate::slices::DualPoint;

/// How a plane arose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaneTag {
    /// `b = −h_x·a + h'_y + iλ`.
    P(usize, usize, i8),
    /// `a = iλ / |h_x − h'_x|`.
    S(usize, usize, i8),
    /// `a = 0`.
    S0,
    /// `a = 1`.
    S1,
    /// `λ = |h_y − h'_y| / i` for `i ∈ {1, 2}`.
    H(usize, usize, i8),
}

/// `α·a + β·b + γ·λ = δ`, scaled so the first nonzero of `(α, β, γ)` is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane {
    pub coef: [Rational; 4],
    pub tags: Vec<PlaneTag>,
}

impl Plane {
    fn new(coef: [Rational; 4], tag: PlaneTag) -> Plane {
        let lead = coef[..3].iter().find(|c| !c.is_zero()).expect("plane has a nonzero normal").clone();
        let coef = coef.map(|c| &c / &lead);
        Plane { coef, tags: vec![tag] }
    }

    pub fn normal(&self) -> [&Rational; 3] {
        [&self.coef[0], &self.coef[1], &self.coef[2]]
    }

    /// `Some(level)` for planes of constant `λ`.
    pub fn level(&self) -> Option<Rational> {
        if self.coef[0].is_zero() && self.coef[1].is_zero() {
            Some(&self.coef[3] / &self.coef[2])
        } else {
            None
        }
    }

    /// Residual `α·a + β·b + γ·λ − δ`.
    pub fn residual(&self, a: &Rational, b: &Rational, lambda: &Rational) -> Rational {
        let c = &self.coef;
        &(&(&(&c[0] * a) + &(&c[1] * b)) + &(&c[2] * lambda)) - &c[3]
    }
}

fn p_plane(set: &ElementSet, h: usize, h2: usize, i: i8) -> Plane {
    let g = &set.grades;
    Plane::new(
        [g[h].x.clone(), Rational::one(), Rational::from(-(i as i64)), g[h2].y.clone()],
        PlaneTag::P(h, h2, i),
    )
}

fn s_plane(set: &ElementSet, h: usize, h2: usize, i: i8) -> Option<Plane> {
    let dx = (&set.grades[h].x - &set.grades[h2].x).abs();
    if dx.is_zero() {
        return None;
    }
    let z = Rational::zero;
    Some(Plane::new(
        [Rational::one(), z(), -&(&Rational::from(i as i64) / &dx), z()],
        PlaneTag::S(h, h2, i),
    ))
}

fn h_plane(set: &ElementSet, h: usize, h2: usize, i: i8) -> Plane {
    let dy = (&set.grades[h].y - &set.grades[h2].y).abs();
    let z = Rational::zero;
    Plane::new([z(), z(), Rational::one(), &dy / &Rational::from(i as i64)], PlaneTag::H(h, h2, i))
}

fn boundary_planes() -> [Plane; 2] {
    let z = Rational::zero;
    [
        Plane::new([Rational::one(), z(), z(), z()], PlaneTag::S0),
        Plane::new([Rational::one(), z(), z(), Rational::one()], PlaneTag::S1),
    ]
}

fn dedup_planes(raw: Vec<Plane>) -> Vec<Plane> {
    let mut index: HashMap<[Rational; 4], usize> = HashMap::new();
    let mut out: Vec<Plane> = Vec::new();
    for p in raw {
        match index.get(&p.coef) {
            Some(&k) => out[k].tags.extend(p.tags),
            None => {
                index.insert(p.coef.clone(), out.len());
                out.push(p);
            }
        }
    }
    for p in &mut out {
        p.tags.sort();
    }
    out
}

/// Every plane over all pairs of elements: shifts `i ∈ −2..=2`, slopes
/// `i ∈ {1, 2}`, both halvings of `|Δy|`, and the two strip boundaries.
pub fn build_planes(set: &ElementSet) -> Vec<Plane> {
    let n = set.len();
    let mut raw: Vec<Plane> = boundary_planes().into();
    for h in 0..n {
        for h2 in 0..n {
            for i in -2i8..=2 {
                raw.push(p_plane(set, h, h2, i));
            }
            if h <= h2 {
                for i in [1i8, 2] {
                    raw.extend(s_plane(set, h, h2, i));
                    raw.push(h_plane(set, h, h2, i));
                }
            }
        }
    }
    dedup_planes(raw)
}

/// The planes on which a bottleneck edge or diagonal condition can switch:
/// `±λ` conditions between elements of the same role in different
/// presentations, `±2λ` conditions between generators and relations of one
/// presentation, plus `λ = 0` and the strip boundaries.
pub fn build_planes_relevant(set: &ElementSet) -> Vec<Plane> {
    let n = set.len();
    let mut raw: Vec<Plane> = boundary_planes().into();
    let z = Rational::zero;
    raw.push(Plane::new([z(), z(), Rational::one(), z()], PlaneTag::H(0, 0, 1)));
    for h in 0..n {
        for h2 in 0..n {
            let i = match set.pair_kind(h, h2) {
                PairKind::Matched => 1i8,
                PairKind::Diagonal => 2,
                _ => continue,
            };
            raw.push(p_plane(set, h, h2, -i));
            raw.push(p_plane(set, h, h2, i));
            if h < h2 {
                raw.extend(s_plane(set, h, h2, i));
                raw.push(h_plane(set, h, h2, i));
            }
        }
    }
    dedup_planes(raw)
}

fn cross(n: [&Rational; 3], m: [&Rational; 3]) -> [Rational; 3] {
    [
        &(n[1] * m[2]) - &(n[2] * m[1]),
        &(n[2] * m[0]) - &(n[0] * m[2]),
        &(n[0] * m[1]) - &(n[1] * m[0]),
    ]
}

fn dot(n: [&Rational; 3], m: &[Rational; 3]) -> Rational {
    &(&(n[0] * &m[0]) + &(n[1] * &m[1])) + &(n[2] * &m[2])
}

/// Level of the unique common point of three planes, if there is one.
pub fn vertex_level(p: &Plane, q: &Plane, r: &Plane) -> Option<Rational> {
    let qr = cross(q.normal(), r.normal());
    let det = dot(p.normal(), &qr);
    if det.is_zero() {
        return None;
    }
    // Cramer's rule for the λ coordinate.
    let d = [&p.coef[3], &q.coef[3], &r.coef[3]];
    let cols = [[&p.coef[0], &q.coef[0], &r.coef[0]], [&p.coef[1], &q.coef[1], &r.coef[1]]];
    let num = dot(d, &cross(cols[0], cols[1]));
    Some(&num / &det)
}

/// Full vertex of three planes, for residual checks.
pub fn vertex_point(p: &Plane, q: &Plane, r: &Plane) -> Option<[Rational; 3]> {
    let det = dot(p.normal(), &cross(q.normal(), r.normal()));
    if det.is_zero() {
        return None;
    }
    let rows = [p, q, r];
    let solve = |k: usize| {
        let col = |j: usize| -> [&Rational; 3] { rows.map(|pl| if j == k { &pl.coef[3] } else { &pl.coef[j] }) };
        &dot(col(0), &cross(col(1), col(2))) / &det
    };
    Some([solve(0), solve(1), solve(2)])
}

/// Sorted distinct positive levels of vertices of the arrangement lying on `planes[k]`.
pub fn vertices_on_plane(k: usize, planes: &[Plane]) -> Vec<Rational> {
    let p = &planes[k];
    let mut levels = Vec::new();
    for i in 0..planes.len() {
        if i == k {
            continue;
        }
        let pi = cross(p.normal(), planes[i].normal());
        if pi.iter().all(Rational::is_zero) {
            continue;
        }
        for j in i + 1..planes.len() {
            if j == k {
                continue;
            }
            if let Some(l) = vertex_level(p, &planes[i], &planes[j]) {
                if l.is_positive() {
                    levels.push(l);
                }
            }
        }
    }
    levels.sort();
    levels.dedup();
    levels
}

/// A half-open interval `(lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: ExtRational,
}

impl Interval {
    pub fn contains(&self, x: &Rational) -> bool {
        *x > self.lo && ExtRational::Finite(x.clone()) <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.clone().max(other.lo.clone()), hi: self.hi.clone().min(other.hi.clone()) }
    }
}

/// Monotone decision oracle with caching and bound propagation.
pub struct MemoDecide<F: FnMut(&Rational) -> bool> {
    decide: F,
    known_false: Option<Rational>,
    known_true: Option<Rational>,
    cache: HashMap<Rational, bool>,
    pub evaluations: usize,
}

impl<F: FnMut(&Rational) -> bool> MemoDecide<F> {
    pub fn new(decide: F) -> Self {
        MemoDecide { decide, known_false: None, known_true: None, cache: HashMap::new(), evaluations: 0 }
    }

    pub fn decide(&mut self, lambda: &Rational) -> bool {
        if self.known_false.as_ref().is_some_and(|f| lambda <= f) {
            return false;
        }
        if self.known_true.as_ref().is_some_and(|t| lambda >= t) {
            return true;
        }
        if let Some(&v) = self.cache.get(lambda) {
            return v;
        }
        self.evaluations += 1;
        let v = (self.decide)(lambda);
        self.cache.insert(lambda.clone(), v);
        if v {
            if self.known_true.as_ref().is_none_or(|t| lambda < t) {
                self.known_true = Some(lambda.clone());
            }
        } else if self.known_false.as_ref().is_none_or(|f| lambda > f) {
            self.known_false = Some(lambda.clone());
        }
        v
    }
}

/// The gap `(c_i, c_{i+1}]` between consecutive levels (with `c_0 = 0` and
/// `c_{K+1} = ∞`) containing the threshold of `decide`. Requires
/// `decide(0) = false`.
pub fn compute_i_p(levels: &[Rational], decide: &mut impl FnMut(&Rational) -> bool) -> Interval {
    // Index k in 0..=K+1 stands for c_k; the last index is ∞ and counts as true.
    let k_max = levels.len() + 1;
    let value = |k: usize| -> Option<&Rational> { if k == 0 || k == k_max { None } else { Some(&levels[k - 1]) } };
    let (mut lo, mut hi) = (0usize, k_max);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if decide(value(mid).unwrap()) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Interval {
        lo: value(lo).cloned().unwrap_or_else(Rational::zero),
        hi: value(hi).map_or(ExtRational::Infinity, |v| ExtRational::Finite(v.clone())),
    }
}

/// Position along `P ∩ {λ = t}` of the line `P ∩ P'`, as `u + v·t`.
fn slanted_position(p: &Plane, q: &Plane) -> (Rational, Rational) {
    // Solve α a + β b = δ − γ t and α' a + β' b = δ' − γ' t.
    let [a1, b1, g1, d1] = &p.coef;
    let [a2, b2, g2, d2] = &q.coef;
    let det = &(a1 * b2) - &(b1 * a2);
    // a(t) = ((δ−γt)β' − β(δ'−γ't)) / det, b(t) = (α(δ'−γ't) − (δ−γt)α') / det
    let a_u = &(&(d1 * b2) - &(b1 * d2)) / &det;
    let a_v = &(&(b1 * g2) - &(g1 * b2)) / &det;
    let b_u = &(&(a1 * d2) - &(d1 * a2)) / &det;
    let b_v = &(&(g1 * a2) - &(a1 * g2)) / &det;
    // Coordinate along the direction (−β, α).
    let u = &(&(-b1) * &a_u) + &(a1 * &b_u);
    let v = &(&(-b1) * &a_v) + &(a1 * &b_v);
    (u, v)
}

/// Whether lines given by their positions at two levels keep their order:
/// `keys[i] = (at_lo, at_hi)` where `at_hi` may stand for a direction at infinity.
pub fn orders_agree<K: Ord>(keys: &[(K, K)]) -> bool {
    let mut by_lo: Vec<usize> = (0..keys.len()).collect();
    by_lo.sort_by(|&i, &j| (&keys[i].0, &keys[i].1, i).cmp(&(&keys[j].0, &keys[j].1, j)));
    let mut by_hi: Vec<usize> = (0..keys.len()).collect();
    by_hi.sort_by(|&i, &j| (&keys[i].1, &keys[i].0, i).cmp(&(&keys[j].1, &keys[j].0, j)));
    by_lo == by_hi
}

/// True iff no vertex on `planes[k]` has a level strictly inside `(lo, hi)`.
pub fn decide_inclusion(k: usize, interval: &Interval, planes: &[Plane]) -> bool {
    let p = &planes[k];
    let inside = |t: &Rational| *t > interval.lo && ExtRational::Finite(t.clone()) < interval.hi;
    if let Some(level) = p.level() {
        return !inside(&level);
    }
    let n = p.normal();
    let mut slanted: Vec<(Rational, Rational)> = Vec::new();
    for (i, q) in planes.iter().enumerate() {
        if i == k {
            continue;
        }
        let dir = cross(n, q.normal());
        if dir.iter().all(Rational::is_zero) {
            continue;
        }
        if dir[2].is_zero() {
            // P ∩ P' is a line at constant level t.
            let [a1, b1, g1, d1] = &p.coef;
            let [a2, b2, g2, d2] = &q.coef;
            let ratio = if !a1.is_zero() { a2 / a1 } else { b2 / b1 };
            let t = &(&(&ratio * d1) - d2) / &(&(&ratio * g1) - g2);
            if inside(&t) && planes.iter().any(|r| !dot(r.normal(), &dir).is_zero()) {
                return false;
            }
        } else {
            slanted.push(slanted_position(p, q));
        }
    }
    match &interval.hi {
        ExtRational::Finite(hi) => {
            let keys: Vec<(Rational, Rational)> = slanted
                .iter()
                .map(|(u, v)| (u + &(v * &interval.lo), u + &(v * hi)))
                .collect();
            orders_agree(&keys)
        }
        ExtRational::Infinity => {
            // At infinity lines are ordered by slope, then by offset.
            let keys: Vec<((Rational, Rational), (Rational, Rational))> = slanted
                .iter()
                .map(|(u, v)| {
                    let at_lo = u + &(v * &interval.lo);
                    ((at_lo.clone(), v.clone()), (v.clone(), at_lo))
                })
                .collect();
            orders_agree(&keys)
        }
    }
}

/// `d_B` at slice `(1, 0)` of either side is infinite.
pub fn is_infinite(q: &Presentation, q2: &Presentation) -> bool {
    let s = DualPoint { a: Rational::one(), b: Rational::zero() };
    let at = |x: &Presentation, y: &Presentation| {
        bottleneck_distance(&slice_bars(x, &s), &slice_bars(y, &s)) == ExtRational::Infinity
    };
    at(q, q2) || at(&q.swap_coordinates(), &q2.swap_coordinates())
}

pub fn is_zero(q: &Presentation, q2: &Presentation) -> bool {
    decide_leq(q, q2, &Rational::zero())
}

/// Per-side record of the randomized search.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SideReport {
    pub planes: usize,
    pub compute_calls: usize,
    pub decide_calls: usize,
    /// Final `(α, β]`; `None` when the side's distance is zero.
    pub interval: Option<Interval>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingDistance {
    pub value: ExtRational,
    pub seed: u64,
    /// Slopes at most one, then slopes at least one. Empty for the 0 and ∞ shortcuts.
    pub sides: Vec<SideReport>,
}

fn run_side(q: &Presentation, q2: &Presentation, rng: &mut ChaCha8Rng) -> SideReport {
    let set = ElementSet::new(q, q2);
    let mut planes = build_planes_relevant(&set);
    planes.shuffle(rng);
    let mut report = SideReport { planes: planes.len(), ..SideReport::default() };
    let mut memo = MemoDecide::new(|l: &Rational| decide_leq_oneside(q, q2, l));
    if memo.decide(&Rational::zero()) {
        report.decide_calls = memo.evaluations;
        return report;
    }
    let mut current: Option<Interval> = None;
    for k in 0..planes.len() {
        if let Some(iv) = &current {
            if decide_inclusion(k, iv, &planes) {
                continue;
            }
        }
        let levels = vertices_on_plane(k, &planes);
        let ip = compute_i_p(&levels, &mut |l| memo.decide(l));
        report.compute_calls += 1;
        current = Some(match current {
            Some(iv) => iv.intersect(&ip),
            None => ip,
        });
    }
    let iv = current.expect("there is at least one plane");
    report.value = match &iv.hi {
        ExtRational::Finite(v) => v.clone(),
        ExtRational::Infinity => panic!("finite side distance expected after the infinity check"),
    };
    report.decide_calls = memo.evaluations;
    report.interval = Some(iv);
    report
}

/// Exact matching distance. `seed` fixes the plane order.
pub fn matching_distance(q: &Presentation, q2: &Presentation, seed: u64) -> MatchingDistance {
    if is_zero(q, q2) {
        return MatchingDistance { value: ExtRational::Finite(Rational::zero()), seed, sides: Vec::new() };
    }
    if is_infinite(q, q2) {
        return MatchingDistance { value: ExtRational::Infinity, seed, sides: Vec::new() };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let low = run_side(q, q2, &mut rng);
    let high = run_side(&q.swap_coordinates(), &q2.swap_coordinates(), &mut rng);
    let value = match low.value.cmp(&high.value) {
        Ordering::Less => high.value.clone(),
        _ => low.value.clone(),
    };
    MatchingDistance { value: ExtRational::Finite(value), seed, sides: vec![low, high] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(c: [i64; 4]) -> Plane {
        Plane::new(c.map(Rational::from), PlaneTag::S0)
    }

    #[test]
    fn hand_solved_vertex() {
        // a = 1, λ = 2, b = −a + 3
        let (p, q, r) = (plane([1, 0, 0, 1]), plane([0, 0, 1, 2]), plane([1, 1, 0, 3]));
        assert_eq!(vertex_level(&p, &q, &r), Some(2.into()));
        assert_eq!(vertex_point(&p, &q, &r), Some([1.into(), 2.into(), 2.into()]));
        assert_eq!(vertex_level(&p, &p, &q), None);
    }

    #[test]
    fn interval_by_stub_decide() {
        let levels: Vec<Rational> = [1, 2, 5].map(Rational::from).to_vec();
        let iv = compute_i_p(&levels, &mut |l| *l >= Rational::from(2));
        assert_eq!(iv, Interval { lo: 1.into(), hi: ExtRational::Finite(2.into()) });
        let iv = compute_i_p(&levels, &mut |l| *l >= Rational::from(7));
        assert_eq!(iv, Interval { lo: 5.into(), hi: ExtRational::Infinity });
        let iv = compute_i_p(&levels, &mut |l| *l >= Rational::new(1, 2));
        assert_eq!(iv, Interval { lo: 0.into(), hi: ExtRational::Finite(1.into()) });
    }

    #[test]
    fn figure_six_orders() {
        // Positions at α and β of five slanted lines.
        let keys: Vec<(i64, i64)> = vec![(0, 0), (1, 0), (1, 2), (2, 1), (3, 2)];
        assert!(!orders_agree(&keys));
        let parallel: Vec<(i64, i64)> = vec![(0, 1), (1, 2), (2, 3)];
        assert!(orders_agree(&parallel));
        let touching: Vec<(i64, i64)> = vec![(0, 1), (0, 2), (3, 2)];
        assert!(orders_agree(&touching));
    }

    #[test]
    fn h_plane_inclusion() {
        let planes = vec![plane([0, 0, 1, 3]), plane([1, 0, 0, 0])];
        let iv = |lo: i64, hi: i64| Interval { lo: lo.into(), hi: ExtRational::Finite(hi.into()) };
        assert!(!decide_inclusion(0, &iv(1, 4), &planes));
        assert!(decide_inclusion(0, &iv(3, 4), &planes));
        assert!(decide_inclusion(0, &iv(1, 3), &planes));
        assert!(decide_inclusion(0, &iv(1, 3), &planes[1..2]));
    }
}
