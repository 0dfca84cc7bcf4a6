//! Brute-force references for testing.
//!
//! These routines share only the numeric types, presentations, slices and the
//! arrangement's face enumeration with the main path. Reduction, matching,
//! decision and the candidate search are re-derived here in the most direct
//! way available.

use crate::arrangement::{build_arrangement, Line, LinePrimitive, Provenance};
use crate::field::{FieldScalar, PrimeField};
use crate::presentation::{ElementSet, Presentation};
use crate::rational::{ExtRational, Rational};
use crate::slices::{push, DualPoint};

/// Default bound on the number of generators plus relations of both inputs.
pub const DEFAULT_MAX_ELEMENTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("oracle input too large: {size} exceeds the limit {limit}")]
    TooLarge { size: usize, limit: usize },
}

/// A bar of a slice barcode: `(birth, death)`.
pub type NaiveBar = (Rational, ExtRational);

fn pair_cost(x: &NaiveBar, y: &NaiveBar) -> ExtRational {
    let db = (&x.0 - &y.0).abs();
    let dd = match (&x.1, &y.1) {
        (ExtRational::Finite(a), ExtRational::Finite(b)) => (a - b).abs(),
        (ExtRational::Infinity, ExtRational::Infinity) => Rational::zero(),
        _ => return ExtRational::Infinity,
    };
    ExtRational::Finite(db.max(dd))
}

fn deletion_cost(x: &NaiveBar) -> ExtRational {
    match &x.1 {
        ExtRational::Finite(d) => ExtRational::Finite(&(d - &x.0) * &Rational::new(1, 2)),
        ExtRational::Infinity => ExtRational::Infinity,
    }
}

/// Bottleneck distance by enumerating every partial matching. At most six bars per side.
pub fn brute_bottleneck(b1: &[NaiveBar], b2: &[NaiveBar]) -> Result<ExtRational, OracleError> {
    let limit = 6;
    if b1.len().max(b2.len()) > limit {
        return Err(OracleError::TooLarge { size: b1.len().max(b2.len()), limit });
    }
    fn rec(i: usize, b1: &[NaiveBar], b2: &[NaiveBar], used: &mut [bool], cur: ExtRational, best: &mut ExtRational) {
        if cur >= *best {
            return;
        }
        if i == b1.len() {
            let mut total = cur;
            for (j, y) in b2.iter().enumerate() {
                if !used[j] {
                    total = total.max(deletion_cost(y));
                }
            }
            if total < *best {
                *best = total;
            }
            return;
        }
        rec(i + 1, b1, b2, used, cur.clone().max(deletion_cost(&b1[i])), best);
        for j in 0..b2.len() {
            if !used[j] {
                used[j] = true;
                rec(i + 1, b1, b2, used, cur.clone().max(pair_cost(&b1[i], &b2[j])), best);
                used[j] = false;
            }
        }
    }
    let mut best = ExtRational::Infinity;
    let mut used = vec![false; b2.len()];
    rec(0, b1, b2, &mut used, ExtRational::Finite(Rational::zero()), &mut best);
    Ok(best)
}

/// Barcode of a presentation at a slice by textbook column reduction.
pub fn naive_barcode(q: &Presentation, s: &DualPoint) -> Vec<NaiveBar> {
    let f = q.field;
    let gp: Vec<Rational> = q.generators.iter().map(|e| push(s, &e.grade)).collect();
    let rp: Vec<Rational> = q.relations.iter().map(|e| push(s, &e.grade)).collect();
    let mut rows: Vec<usize> = (0..gp.len()).collect();
    rows.sort_by(|&i, &j| (&gp[i], i).cmp(&(&gp[j], j)));
    let mut cols: Vec<usize> = (0..rp.len()).collect();
    cols.sort_by(|&i, &j| (&rp[i], i).cmp(&(&rp[j], j)));
    let dense = q.dense();
    let mut m: Vec<Vec<FieldScalar>> = cols
        .iter()
        .map(|&c| rows.iter().map(|&g| dense[g][c]).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; rows.len()];
    let mut bars = Vec::new();
    for j in 0..m.len() {
        loop {
            let Some(low) = m[j].iter().rposition(|x| !x.is_zero()) else { break };
            match owner[low] {
                Some(k) => {
                    let c = f.div(m[j][low], m[k][low]);
                    let src = m[k].clone();
                    for (x, y) in m[j].iter_mut().zip(src) {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
                None => {
                    owner[low] = Some(j);
                    break;
                }
            }
        }
    }
    for (p, &g) in rows.iter().enumerate() {
        match owner[p] {
            Some(j) => {
                let death = &rp[cols[j]];
                if *death != gp[g] {
                    bars.push((gp[g].clone(), ExtRational::Finite(death.clone())));
                }
            }
            None => bars.push((gp[g].clone(), ExtRational::Infinity)),
        }
    }
    bars.sort();
    bars
}

/// Kuhn's algorithm: can every vertex in `must` (left side) be matched?
fn covers(n_right: usize, adj: &dyn Fn(usize, usize) -> bool, must: &[usize]) -> bool {
    let mut mate_right: Vec<Option<usize>> = vec![None; n_right];
    fn try_kuhn(
        u: usize,
        n_right: usize,
        adj: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        mate_right: &mut [Option<usize>],
    ) -> bool {
        for v in 0..n_right {
            if adj(u, v) && !seen[v] {
                seen[v] = true;
                if mate_right[v].is_none_or(|w| try_kuhn(w, n_right, adj, seen, mate_right)) {
                    mate_right[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    for &u in must {
        let mut seen = vec![false; n_right];
        if !try_kuhn(u, n_right, adj, &mut seen, &mut mate_right) {
            return false;
        }
    }
    true
}

/// Perfect matching criterion via matchings between the two barcodes only:
/// every bar longer than `2λ` on either side must be matched within `λ`.
pub fn naive_bottleneck_leq(b1: &[NaiveBar], b2: &[NaiveBar], lambda: &Rational) -> bool {
    let close = |i: usize, j: usize| match pair_cost(&b1[i], &b2[j]) {
        ExtRational::Finite(c) => &c <= lambda,
        ExtRational::Infinity => false,
    };
    let lambda_ext = ExtRational::Finite(lambda.clone());
    let long1: Vec<usize> = (0..b1.len()).filter(|&i| deletion_cost(&b1[i]) > lambda_ext).collect();
    let long2: Vec<usize> = (0..b2.len()).filter(|&j| deletion_cost(&b2[j]) > lambda_ext).collect();
    covers(b2.len(), &close, &long1) && covers(b1.len(), &|j, i| close(i, j), &long2)
}

/// Bottleneck distance by trying every candidate value in increasing order.
pub fn naive_bottleneck(b1: &[NaiveBar], b2: &[NaiveBar]) -> ExtRational {
    let mut cands = vec![Rational::zero()];
    for x in b1.iter().chain(b2) {
        if let ExtRational::Finite(c) = deletion_cost(x) {
            cands.push(c);
        }
    }
    for x in b1 {
        for y in b2 {
            if let ExtRational::Finite(c) = pair_cost(x, y) {
                cands.push(c);
            }
        }
    }
    cands.sort();
    cands.dedup();
    let (mut lo, mut hi) = (0usize, cands.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if naive_bottleneck_leq(b1, b2, &cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if lo == cands.len() {
        ExtRational::Infinity
    } else {
        ExtRational::Finite(cands[lo].clone())
    }
}

fn related(set: &ElementSet, h: usize, h2: usize) -> Option<i64> {
    let (a, b) = (set.refs[h], set.refs[h2]);
    if a.side != b.side && a.role == b.role {
        Some(1)
    } else if a.side == b.side && a.role != b.role {
        Some(2)
    } else {
        None
    }
}

fn oracle_lines(set: &ElementSet, lambda: &Rational) -> Vec<LinePrimitive> {
    let n = set.len();
    let g = &set.grades;
    let mut out = Vec::new();
    for h in 0..n {
        for h2 in 0..n {
            let (a, b) = (set.refs[h], set.refs[h2]);
            if h < h2 && a.side == b.side && a.role == b.role {
                let j = g[h].join(&g[h2]);
                out.push(LinePrimitive {
                    line: Line::NonVertical { slope: -&j.x, intercept: j.y },
                    provenance: Provenance::Join(h, h2),
                });
            }
            let Some(k) = related(set, h, h2) else { continue };
            for sign in [-1i64, 1] {
                let shift = &Rational::from(sign * k) * lambda;
                out.push(LinePrimitive {
                    line: Line::NonVertical { slope: -&g[h].x, intercept: &g[h2].y + &shift },
                    provenance: Provenance::Shift(h, h2, (sign * k) as i8),
                });
            }
            let dx = (&g[h].x - &g[h2].x).abs();
            if h < h2 && !dx.is_zero() {
                out.push(LinePrimitive {
                    line: Line::Vertical { a: &(&Rational::from(k) * lambda) / &dx },
                    provenance: Provenance::Slope(h, h2, k as i8),
                });
            }
        }
    }
    out
}

/// Decision on one side by checking a representative of every face from scratch.
pub fn naive_decide_oneside(q: &Presentation, q2: &Presentation, lambda: &Rational) -> bool {
    let set = ElementSet::new(q, q2);
    let arr = build_arrangement(&oracle_lines(&set, lambda));
    arr.faces.iter().all(|f| {
        let s = &f.representative;
        naive_bottleneck_leq(&naive_barcode(q, s), &naive_barcode(q2, s), lambda)
    })
}

/// `d_M ≤ λ` by exhaustive per-face evaluation on both sides.
pub fn naive_decide_leq(q: &Presentation, q2: &Presentation, lambda: &Rational) -> bool {
    naive_decide_oneside(q, q2, lambda) && naive_decide_oneside(&q.swap_coordinates(), &q2.swap_coordinates(), lambda)
}

fn rank(field: PrimeField, mut cols: Vec<Vec<FieldScalar>>) -> usize {
    let mut rank = 0;
    let rows = cols.first().map_or(0, Vec::len);
    for r in 0..rows {
        let Some(p) = (rank..cols.len()).find(|&c| !cols[c][r].is_zero()) else { continue };
        cols.swap(rank, p);
        let inv = field.inv(cols[rank][r]);
        let pivot: Vec<FieldScalar> = cols[rank].iter().map(|&x| field.mul(x, inv)).collect();
        for c in 0..cols.len() {
            if c != rank && !cols[c][r].is_zero() {
                let factor = cols[c][r];
                for (x, y) in cols[c].iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(factor, *y));
                }
            }
        }
        cols[rank] = pivot;
        rank += 1;
    }
    rank
}

fn matrix_rank(q: &Presentation) -> usize {
    let m = q.num_generators();
    let cols: Vec<Vec<FieldScalar>> = q
        .columns
        .iter()
        .map(|c| {
            let mut v = vec![FieldScalar::ZERO; m];
            for &(i, x) in c {
                v[i] = x;
            }
            v
        })
        .collect();
    rank(q.field, cols)
}

/// Rank of the structure map `M^s_t → M^s_{t'}` by direct linear algebra.
pub fn rank_oracle(q: &Presentation, s: &DualPoint, t: &Rational, t2: &Rational) -> usize {
    let m = q.num_generators();
    let mut gens: Vec<Vec<FieldScalar>> = Vec::new();
    for (i, g) in q.generators.iter().enumerate() {
        if push(s, &g.grade) <= *t {
            let mut v = vec![FieldScalar::ZERO; m];
            v[i] = FieldScalar::ONE;
            gens.push(v);
        }
    }
    let mut rels: Vec<Vec<FieldScalar>> = Vec::new();
    for (j, r) in q.relations.iter().enumerate() {
        if push(s, &r.grade) <= *t2 {
            let mut v = vec![FieldScalar::ZERO; m];
            for &(i, x) in &q.columns[j] {
                v[i] = x;
            }
            rels.push(v);
        }
    }
    if m == 0 {
        return 0;
    }
    let r_rel = rank(q.field, rels.clone());
    let mut both = gens;
    both.extend(rels);
    rank(q.field, both) - r_rel
}

/// Plane `α·a + β·b + γ·λ = δ`.
type RawPlane = [Rational; 4];

fn oracle_planes(set: &ElementSet) -> Vec<RawPlane> {
    let n = set.len();
    let g = &set.grades;
    let z = Rational::zero;
    let mut out: Vec<RawPlane> = vec![
        [Rational::one(), z(), z(), z()],
        [Rational::one(), z(), z(), Rational::one()],
        [z(), z(), Rational::one(), z()],
    ];
    for h in 0..n {
        for h2 in 0..n {
            let Some(k) = related(set, h, h2) else { continue };
            let kr = Rational::from(k);
            for sign in [-1i64, 1] {
                // h_x·a + b − (sign·k)·λ = h'_y
                out.push([g[h].x.clone(), Rational::one(), -&(&Rational::from(sign) * &kr), g[h2].y.clone()]);
            }
            let dx = (&g[h].x - &g[h2].x).abs();
            if !dx.is_zero() {
                // a − (k/|Δx|)·λ = 0
                out.push([Rational::one(), z(), -&(&kr / &dx), z()]);
            }
            let dy = (&g[h].y - &g[h2].y).abs();
            out.push([z(), z(), Rational::one(), &dy / &kr]);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn det3(m: [[&Rational; 3]; 3]) -> Rational {
    let t1 = m[0][0] * &(&(m[1][1] * m[2][2]) - &(m[1][2] * m[2][1]));
    let t2 = m[0][1] * &(&(m[1][0] * m[2][2]) - &(m[1][2] * m[2][0]));
    let t3 = m[0][2] * &(&(m[1][0] * m[2][1]) - &(m[1][1] * m[2][0]));
    &(&t1 - &t2) + &t3
}

/// Levels of all points where three planes meet in a single point.
fn all_vertex_levels(planes: &[RawPlane]) -> Vec<Rational> {
    let mut levels = Vec::new();
    let n = planes.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (p, q, r) = (&planes[i], &planes[j], &planes[k]);
                let d = det3([[&p[0], &p[1], &p[2]], [&q[0], &q[1], &q[2]], [&r[0], &r[1], &r[2]]]);
                if d.is_zero() {
                    continue;
                }
                let dl = det3([[&p[0], &p[1], &p[3]], [&q[0], &q[1], &q[3]], [&r[0], &r[1], &r[3]]]);
                levels.push(&dl / &d);
            }
        }
    }
    levels.retain(|l| l.is_positive());
    levels.sort();
    levels.dedup();
    levels
}

fn side_distance(q: &Presentation, q2: &Presentation) -> Rational {
    if naive_decide_oneside(q, q2, &Rational::zero()) {
        return Rational::zero();
    }
    let set = ElementSet::new(q, q2);
    let levels = all_vertex_levels(&oracle_planes(&set));
    let (mut lo, mut hi) = (0usize, levels.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if naive_decide_oneside(q, q2, &levels[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    assert!(lo < levels.len(), "a finite matching distance is attained at a vertex level");
    levels[lo].clone()
}

/// Whether some slice barcode has a different number of infinite bars.
pub fn naive_is_infinite(q: &Presentation, q2: &Presentation) -> bool {
    q.num_generators() - matrix_rank(q) != q2.num_generators() - matrix_rank(q2)
}

/// `d_M` from the full set of vertex levels, guarded by `max_elements`.
pub fn naive_matching_distance_with_limit(
    q: &Presentation,
    q2: &Presentation,
    max_elements: usize,
) -> Result<ExtRational, OracleError> {
    let size = q.len() + q2.len();
    if size > max_elements {
        return Err(OracleError::TooLarge { size, limit: max_elements });
    }
    if naive_is_infinite(q, q2) {
        return Ok(ExtRational::Infinity);
    }
    let low = side_distance(q, q2);
    let high = side_distance(&q.swap_coordinates(), &q2.swap_coordinates());
    Ok(ExtRational::Finite(low.max(high)))
}

pub fn naive_matching_distance(q: &Presentation, q2: &Presentation) -> Result<ExtRational, OracleError> {
    naive_matching_distance_with_limit(q, q2, DEFAULT_MAX_ELEMENTS)
}

/// Sampling grid over the strip: `a = i/na` for `i = 1..=na`, `b` evenly spaced in `[b_lo, b_hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub na: usize,
    pub nb: usize,
    pub b_lo: Rational,
    pub b_hi: Rational,
}

impl GridSpec {
    /// A grid whose `b` range covers every grade of both inputs with margin.
    pub fn covering(q: &Presentation, q2: &Presentation, na: usize, nb: usize) -> Self {
        let mut m = Rational::zero();
        for e in q.generators.iter().chain(&q.relations).chain(&q2.generators).chain(&q2.relations) {
            m = m.max(e.grade.x.abs()).max(e.grade.y.abs());
        }
        let m = m + Rational::one();
        GridSpec { na, nb, b_lo: -&m, b_hi: m }
    }

    pub fn points(&self) -> Vec<DualPoint> {
        let mut out = Vec::with_capacity(self.na * self.nb);
        for i in 1..=self.na {
            let a = Rational::new(i as i64, self.na as i64);
            for j in 0..self.nb {
                let b = if self.nb == 1 {
                    self.b_lo.clone()
                } else {
                    let t = Rational::new(j as i64, (self.nb - 1) as i64);
                    &self.b_lo + &(&t * &(&self.b_hi - &self.b_lo))
                };
                out.push(DualPoint { a: a.clone(), b });
            }
        }
        out
    }
}

/// One evaluated sample; `swapped` marks slices of slope at least one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub swapped: bool,
    pub slice: DualPoint,
    pub distance: ExtRational,
}

/// Bottleneck distance at every grid point, on both sides.
pub fn grid_samples(q: &Presentation, q2: &Presentation, grid: &GridSpec) -> Vec<Sample> {
    let (sq, sq2) = (q.swap_coordinates(), q2.swap_coordinates());
    let mut out = Vec::new();
    for (swapped, a, b) in [(false, q, q2), (true, &sq, &sq2)] {
        for s in grid.points() {
            let distance = naive_bottleneck(&naive_barcode(a, &s), &naive_barcode(b, &s));
            out.push(Sample { swapped, slice: s, distance });
        }
    }
    out
}

/// Largest sampled slice distance; a lower bound for `d_M`.
pub fn sampled_lower_bound(q: &Presentation, q2: &Presentation, grid: &GridSpec) -> ExtRational {
    grid_samples(q, q2, grid)
        .into_iter()
        .map(|s| s.distance)
        .max()
        .unwrap_or(ExtRational::Finite(Rational::zero()))
}

/// Number of barcode intervals containing `[t, t']`.
pub fn count_containing(bars: &[NaiveBar], t: &Rational, t2: &Rational) -> usize {
    bars.iter()
        .filter(|(b, d)| b <= t && ExtRational::Finite(t2.clone()) < *d)
        .count()
}
