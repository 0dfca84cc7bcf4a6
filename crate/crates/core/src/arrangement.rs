//! Line arrangements in the dual strip `(0, 1] × ℝ`.
//!
//! Lines come with provenance describing which pair of elements produced them.
//! Geometrically equal lines are merged and remember all their primitives.
//! The arrangement is clipped to a box `[ε, 1] × [y_min, y_max]` that contains
//! every crossing with `0 < a ≤ 1`, which makes all faces bounded convex
//! polygons with exact rational representatives.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::presentation::{ElementSet, Grade};
use crate::rational::Rational;
use crate::slices::{dual_of_point, DualPoint};

/// A line of the `(a, b)` plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Line {
    /// `b = slope·a + intercept`.
    NonVertical { slope: Rational, intercept: Rational },
    /// `a = const`.
    Vertical { a: Rational },
}

impl Line {
    pub fn dual_of(p: &Grade) -> Line {
        let d = dual_of_point(p);
        Line::NonVertical { slope: d.slope, intercept: d.intercept }
    }

    /// Sign of the point relative to the line: for non-vertical lines the sign
    /// of `b − (slope·a + intercept)`, for vertical lines the sign of `a − const`.
    pub fn side(&self, a: &Rational, b: &Rational) -> Ordering {
        match self {
            Line::NonVertical { slope, intercept } => b.cmp(&(&(slope * a) + intercept)),
            Line::Vertical { a: a0 } => a.cmp(a0),
        }
    }

    pub fn intersection(&self, other: &Line) -> Option<(Rational, Rational)> {
        match (self, other) {
            (Line::NonVertical { slope: m1, intercept: c1 }, Line::NonVertical { slope: m2, intercept: c2 }) => {
                if m1 == m2 {
                    return None;
                }
                let a = &(c2 - c1) / &(m1 - m2);
                let b = &(m1 * &a) + c1;
                Some((a, b))
            }
            (Line::NonVertical { slope, intercept }, Line::Vertical { a })
            | (Line::Vertical { a }, Line::NonVertical { slope, intercept }) => {
                Some((a.clone(), &(slope * a) + intercept))
            }
            (Line::Vertical { .. }, Line::Vertical { .. }) => None,
        }
    }
}

/// Which pair of elements produced a line, and how.
///
/// Element ids are global ids of an [`ElementSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    /// Dual of the join of two grades; unordered, `h ≤ h'`.
    Join(usize, usize),
    /// Dual of `(h_x, h'_y + iλ)`; ordered, `i ∈ {−2, −1, 1, 2}`.
    Shift(usize, usize, i8),
    /// Vertical line `a = iλ / |h_x − h'_x|`; unordered, `h < h'`, `i ∈ {1, 2}`.
    Slope(usize, usize, i8),
}

impl Provenance {
    pub fn elements(&self) -> (usize, usize) {
        match *self {
            Provenance::Join(h, k) | Provenance::Shift(h, k, _) | Provenance::Slope(h, k, _) => (h, k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinePrimitive {
    pub line: Line,
    pub provenance: Provenance,
}

pub fn join_line(set: &ElementSet, h: usize, h2: usize) -> LinePrimitive {
    let (h, h2) = if h <= h2 { (h, h2) } else { (h2, h) };
    LinePrimitive {
        line: Line::dual_of(&set.grades[h].join(&set.grades[h2])),
        provenance: Provenance::Join(h, h2),
    }
}

pub fn shift_line(set: &ElementSet, h: usize, h2: usize, i: i8, lambda: &Rational) -> LinePrimitive {
    let y = &set.grades[h2].y + &(&Rational::from(i as i64) * lambda);
    LinePrimitive {
        line: Line::NonVertical { slope: -&set.grades[h].x, intercept: y },
        provenance: Provenance::Shift(h, h2, i),
    }
}

/// `None` when the two x-coordinates agree.
pub fn slope_line(set: &ElementSet, h: usize, h2: usize, i: i8, lambda: &Rational) -> Option<LinePrimitive> {
    let (h, h2) = if h <= h2 { (h, h2) } else { (h2, h) };
    let dx = (&set.grades[h].x - &set.grades[h2].x).abs();
    if dx.is_zero() {
        return None;
    }
    Some(LinePrimitive {
        line: Line::Vertical { a: &(&Rational::from(i as i64) * lambda) / &dx },
        provenance: Provenance::Slope(h, h2, i),
    })
}

/// One join line per unordered pair, including `h = h'`.
pub fn build_lines_l(set: &ElementSet) -> Vec<LinePrimitive> {
    let n = set.len();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for h in 0..n {
        for h2 in h..n {
            out.push(join_line(set, h, h2));
        }
    }
    out
}

/// The join lines together with all shift and slope lines at `λ`.
pub fn build_lines_t_lambda(set: &ElementSet, lambda: &Rational) -> Vec<LinePrimitive> {
    let n = set.len();
    let mut out = build_lines_l(set);
    for h in 0..n {
        for h2 in 0..n {
            for i in [-2i8, -1, 1, 2] {
                out.push(shift_line(set, h, h2, i, lambda));
            }
        }
    }
    for h in 0..n {
        for h2 in h + 1..n {
            for i in [1i8, 2] {
                out.extend(slope_line(set, h, h2, i, lambda));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct HalfEdge {
    pub origin: usize,
    pub twin: usize,
    pub next: usize,
    pub face: usize,
    /// Distinct line carrying this edge, `None` on the box boundary.
    pub line: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Face {
    pub half_edge: usize,
    pub representative: DualPoint,
}

#[derive(Debug, Clone)]
pub struct Arrangement {
    /// Distinct lines that meet the open strip.
    pub lines: Vec<Line>,
    /// For each distinct line, indices into the input primitives, sorted by provenance.
    pub members: Vec<Vec<usize>>,
    /// Input primitives whose line misses the box interior.
    pub outside: Vec<usize>,
    pub vertices: Vec<(Rational, Rational)>,
    pub half_edges: Vec<HalfEdge>,
    /// Bounded faces; the unbounded outer face is `outer_face`.
    pub faces: Vec<Face>,
    pub outer_face: usize,
    /// Neighbors of each bounded face as `(face, line)`.
    pub adjacency: Vec<Vec<(usize, usize)>>,
    pub epsilon: Rational,
    pub y_min: Rational,
    pub y_max: Rational,
}

fn direction_cmp(d1: &(Rational, Rational), d2: &(Rational, Rational)) -> Ordering {
    let upper = |d: &(Rational, Rational)| d.1.is_positive() || (d.1.is_zero() && d.0.is_positive());
    match (upper(d1), upper(d2)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => {
            let cross = &(&d1.0 * &d2.1) - &(&d1.1 * &d2.0);
            // Counterclockwise order: d1 first when d2 is to its left.
            0.cmp(&cross.signum())
        }
    }
}

pub fn build_arrangement(primitives: &[LinePrimitive]) -> Arrangement {
    let one = Rational::one();
    let mut index: HashMap<&Line, usize> = HashMap::new();
    let mut lines: Vec<Line> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut outside = Vec::new();
    for (k, p) in primitives.iter().enumerate() {
        if let Line::Vertical { a } = &p.line {
            if !a.is_positive() || *a >= one {
                outside.push(k);
                continue;
            }
        }
        let id = *index.entry(&p.line).or_insert_with(|| {
            lines.push(p.line.clone());
            members.push(Vec::new());
            lines.len() - 1
        });
        members[id].push(k);
    }
    for m in &mut members {
        m.sort_by_key(|&k| primitives[k].provenance);
    }

    // Pairwise crossings inside the strip.
    let k = lines.len();
    let mut crossings: Vec<(usize, usize, Rational, Rational)> = Vec::new();
    let mut min_a = one.clone();
    for l in &lines {
        if let Line::Vertical { a } = l {
            min_a = min_a.min(a.clone());
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if let Some((a, b)) = lines[i].intersection(&lines[j]) {
                if a.is_positive() && a <= one {
                    min_a = min_a.min(a.clone());
                    crossings.push((i, j, a, b));
                }
            }
        }
    }
    let epsilon = &min_a * &Rational::new(1, 2);
    let mut y_lo: Option<Rational> = None;
    let mut y_hi: Option<Rational> = None;
    let mut see = |y: &Rational| {
        if y_lo.as_ref().is_none_or(|lo| y < lo) {
            y_lo = Some(y.clone());
        }
        if y_hi.as_ref().is_none_or(|hi| y > hi) {
            y_hi = Some(y.clone());
        }
    };
    for l in &lines {
        if let Line::NonVertical { slope, intercept } = l {
            see(&(&(slope * &epsilon) + intercept));
            see(&(slope + intercept));
        }
    }
    for (_, _, _, b) in &crossings {
        see(b);
    }
    let y_min = y_lo.unwrap_or_else(Rational::zero) - one.clone();
    let y_max = y_hi.unwrap_or_else(Rational::zero) + one.clone();

    // Points along each line and each box side.
    let mut on_line: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); k];
    let mut bottom = vec![(epsilon.clone(), y_min.clone()), (one.clone(), y_min.clone())];
    let mut top = vec![(epsilon.clone(), y_max.clone()), (one.clone(), y_max.clone())];
    let mut left = vec![(epsilon.clone(), y_min.clone()), (epsilon.clone(), y_max.clone())];
    let mut right = vec![(one.clone(), y_min.clone()), (one.clone(), y_max.clone())];
    for (i, l) in lines.iter().enumerate() {
        match l {
            Line::NonVertical { slope, intercept } => {
                let p0 = (epsilon.clone(), &(slope * &epsilon) + intercept);
                let p1 = (one.clone(), slope + intercept);
                left.push(p0.clone());
                right.push(p1.clone());
                on_line[i].push(p0);
                on_line[i].push(p1);
            }
            Line::Vertical { a } => {
                let p0 = (a.clone(), y_min.clone());
                let p1 = (a.clone(), y_max.clone());
                bottom.push(p0.clone());
                top.push(p1.clone());
                on_line[i].push(p0);
                on_line[i].push(p1);
            }
        }
    }
    for (i, j, a, b) in crossings {
        on_line[i].push((a.clone(), b.clone()));
        on_line[j].push((a, b));
    }

    let mut vertices: Vec<(Rational, Rational)> = Vec::new();
    let mut vid: HashMap<(Rational, Rational), usize> = HashMap::new();
    let mut intern = |p: (Rational, Rational), vertices: &mut Vec<(Rational, Rational)>| -> usize {
        *vid.entry(p.clone()).or_insert_with(|| {
            vertices.push(p);
            vertices.len() - 1
        })
    };
    let mut half_edges: Vec<HalfEdge> = Vec::new();
    let mut add_chain = |pts: &mut Vec<(Rational, Rational)>,
                         vertical: bool,
                         line: Option<usize>,
                         vertices: &mut Vec<(Rational, Rational)>,
                         half_edges: &mut Vec<HalfEdge>| {
        if vertical {
            pts.sort_by(|p, q| p.1.cmp(&q.1));
        } else {
            pts.sort_by(|p, q| p.0.cmp(&q.0));
        }
        pts.dedup();
        let ids: Vec<usize> = pts.drain(..).map(|p| intern(p, vertices)).collect();
        for w in ids.windows(2) {
            let e = half_edges.len();
            half_edges.push(HalfEdge { origin: w[0], twin: e + 1, next: usize::MAX, face: usize::MAX, line });
            half_edges.push(HalfEdge { origin: w[1], twin: e, next: usize::MAX, face: usize::MAX, line });
        }
    };
    for (i, pts) in on_line.iter_mut().enumerate() {
        let vertical = matches!(lines[i], Line::Vertical { .. });
        add_chain(pts, vertical, Some(i), &mut vertices, &mut half_edges);
    }
    add_chain(&mut bottom, false, None, &mut vertices, &mut half_edges);
    add_chain(&mut top, false, None, &mut vertices, &mut half_edges);
    add_chain(&mut left, true, None, &mut vertices, &mut half_edges);
    add_chain(&mut right, true, None, &mut vertices, &mut half_edges);

    // Rotation system.
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (e, he) in half_edges.iter().enumerate() {
        outgoing[he.origin].push(e);
    }
    let dir = |e: usize, half_edges: &[HalfEdge]| {
        let o = &vertices[half_edges[e].origin];
        let t = &vertices[half_edges[half_edges[e].twin].origin];
        (&t.0 - &o.0, &t.1 - &o.1)
    };
    let mut slot = vec![0usize; half_edges.len()];
    for out in &mut outgoing {
        let dirs: HashMap<usize, (Rational, Rational)> = out.iter().map(|&e| (e, dir(e, &half_edges))).collect();
        out.sort_by(|&x, &y| direction_cmp(&dirs[&x], &dirs[&y]));
        for (k, &e) in out.iter().enumerate() {
            slot[e] = k;
        }
    }
    for e in 0..half_edges.len() {
        let t = half_edges[e].twin;
        let v = half_edges[t].origin;
        let out = &outgoing[v];
        let k = slot[t];
        half_edges[e].next = out[(k + out.len() - 1) % out.len()];
    }

    // Faces as cycles of `next`; the clockwise cycle is the outer face.
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for e in 0..half_edges.len() {
        if half_edges[e].face != usize::MAX {
            continue;
        }
        let f = cycles.len();
        let mut cyc = Vec::new();
        let mut cur = e;
        while half_edges[cur].face == usize::MAX {
            half_edges[cur].face = f;
            cyc.push(cur);
            cur = half_edges[cur].next;
        }
        cycles.push(cyc);
    }
    let area2 = |cyc: &[usize]| -> Rational {
        let mut s = Rational::zero();
        for &e in cyc {
            let p = &vertices[half_edges[e].origin];
            let q = &vertices[half_edges[half_edges[e].twin].origin];
            s = s + (&(&p.0 * &q.1) - &(&p.1 * &q.0));
        }
        s
    };
    let outer_cycle = (0..cycles.len())
        .find(|&f| area2(&cycles[f]).is_negative())
        .expect("box boundary forms the outer face");
    // Renumber so bounded faces are 0..F and the outer face is last.
    let mut renumber = vec![0usize; cycles.len()];
    let mut next_id = 0;
    for (f, r) in renumber.iter_mut().enumerate() {
        if f != outer_cycle {
            *r = next_id;
            next_id += 1;
        }
    }
    renumber[outer_cycle] = next_id;
    for he in &mut half_edges {
        he.face = renumber[he.face];
    }
    let mut faces: Vec<Option<Face>> = vec![None; next_id];
    for (f, cyc) in cycles.iter().enumerate() {
        if f == outer_cycle {
            continue;
        }
        let pts: Vec<&(Rational, Rational)> = cyc.iter().map(|&e| &vertices[half_edges[e].origin]).collect();
        faces[renumber[f]] = Some(Face { half_edge: cyc[0], representative: interior_point(&pts) });
    }
    let faces: Vec<Face> = faces.into_iter().map(|f| f.expect("every bounded face is a cycle")).collect();

    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); faces.len()];
    for he in &half_edges {
        if let Some(l) = he.line {
            let other = half_edges[he.twin].face;
            if he.face < faces.len() && other < faces.len() {
                adjacency[he.face].push((other, l));
            }
        }
    }
    for adj in &mut adjacency {
        adj.sort();
        adj.dedup();
    }

    Arrangement {
        lines,
        members,
        outside,
        vertices,
        half_edges,
        faces,
        outer_face: next_id,
        adjacency,
        epsilon,
        y_min,
        y_max,
    }
}

/// Centroid of the first three non-collinear vertices of a convex polygon.
fn interior_point(pts: &[&(Rational, Rational)]) -> DualPoint {
    let p0 = pts[0];
    let p1 = pts[1];
    for p2 in &pts[2..] {
        let cross = &(&(&p1.0 - &p0.0) * &(&p2.1 - &p0.1)) - &(&(&p1.1 - &p0.1) * &(&p2.0 - &p0.0));
        if !cross.is_zero() {
            let third = Rational::new(1, 3);
            let a = &(&(&p0.0 + &p1.0) + &p2.0) * &third;
            let b = &(&(&p0.1 + &p1.1) + &p2.1) * &third;
            return DualPoint { a, b };
        }
    }
    unreachable!("bounded faces are non-degenerate polygons")
}

impl Arrangement {
    pub fn num_edges(&self) -> usize {
        self.half_edges.len() / 2
    }

    /// Boundary polygon of a bounded face, counterclockwise.
    pub fn face_vertices(&self, f: usize) -> Vec<(Rational, Rational)> {
        let start = self.faces[f].half_edge;
        let mut out = Vec::new();
        let mut e = start;
        loop {
            out.push(self.vertices[self.half_edges[e].origin].clone());
            e = self.half_edges[e].next;
            if e == start {
                break;
            }
        }
        out
    }

    /// Bounded face containing an interior point, by sign vectors.
    pub fn locate(&self, a: &Rational, b: &Rational) -> Option<usize> {
        let target: Vec<Ordering> = self.lines.iter().map(|l| l.side(a, b)).collect();
        if target.contains(&Ordering::Equal) {
            return None;
        }
        self.faces.iter().position(|f| {
            let r = &f.representative;
            self.lines.iter().zip(&target).all(|(l, s)| l.side(&r.a, &r.b) == *s)
        })
    }

    /// Line-oriented text dump; not a stable format.
    pub fn dump(&self, primitives: &[LinePrimitive]) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "box {} 1 {} {}", self.epsilon, self.y_min, self.y_max);
        for (i, l) in self.lines.iter().enumerate() {
            let provs: Vec<String> = self.members[i].iter().map(|&k| format!("{:?}", primitives[k].provenance)).collect();
            let _ = writeln!(out, "line {i} {l:?} {}", provs.join(" "));
        }
        for (f, face) in self.faces.iter().enumerate() {
            let _ = writeln!(out, "face {f} {:?}", face.representative);
        }
        out
    }
}

/// One step of a walk: move from `from` to the adjacent face `to` across `line`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub from: usize,
    pub to: usize,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct Walk {
    pub start: usize,
    pub steps: Vec<Crossing>,
}

/// Face with the lexicographically smallest representative.
pub fn start_face(arr: &Arrangement) -> usize {
    (0..arr.faces.len())
        .min_by(|&f, &g| {
            let (p, q) = (&arr.faces[f].representative, &arr.faces[g].representative);
            (&p.a, &p.b).cmp(&(&q.a, &q.b))
        })
        .expect("an arrangement has at least one face")
}

/// Depth-first tour of a BFS spanning tree of the dual graph.
///
/// Each tree edge is crossed at most twice; the returns after the last new
/// face are omitted.
pub fn euler_walk(arr: &Arrangement) -> Walk {
    let n = arr.faces.len();
    let start = start_face(arr);
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        for &(g, l) in &arr.adjacency[f] {
            if !seen[g] {
                seen[g] = true;
                parent[g] = Some((f, l));
                children[f].push((g, l));
                queue.push_back(g);
            }
        }
    }
    let mut steps = Vec::new();
    let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
    while let Some(&mut (f, ref mut k)) = stack.last_mut() {
        if *k < children[f].len() {
            let (g, l) = children[f][*k];
            *k += 1;
            steps.push(Crossing { from: f, to: g, line: l });
            stack.push((g, 0));
        } else {
            stack.pop();
            if let Some((p, l)) = parent[f] {
                steps.push(Crossing { from: f, to: p, line: l });
            }
        }
    }
    // Drop the trailing returns, which visit nothing new.
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut last_new = 0;
    for (i, s) in steps.iter().enumerate() {
        if !visited[s.to] {
            visited[s.to] = true;
            last_new = i + 1;
        }
    }
    steps.truncate(last_new);
    Walk { start, steps }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nv(m: i64, c: i64) -> LinePrimitive {
        LinePrimitive {
            line: Line::NonVertical { slope: m.into(), intercept: c.into() },
            provenance: Provenance::Join(0, 0),
        }
    }

    #[test]
    fn single_line_two_faces() {
        let arr = build_arrangement(&[nv(0, 0)]);
        assert_eq!(arr.faces.len(), 2);
        let walk = euler_walk(&arr);
        assert_eq!(walk.steps.len(), 1);
    }

    #[test]
    fn two_crossing_lines_four_faces() {
        let arr = build_arrangement(&[nv(1, 0), nv(-1, 1)]);
        assert_eq!(arr.faces.len(), 4);
        let v = arr.vertices.len() as i64;
        let e = arr.num_edges() as i64;
        assert_eq!(v - e + arr.faces.len() as i64, 1);
    }

    #[test]
    fn empty_arrangement_is_the_box() {
        let arr = build_arrangement(&[]);
        assert_eq!(arr.faces.len(), 1);
        assert!(euler_walk(&arr).steps.is_empty());
    }

    #[test]
    fn duplicate_lines_merge() {
        let mut a = nv(1, 0);
        a.provenance = Provenance::Shift(1, 2, 1);
        let arr = build_arrangement(&[nv(1, 0), a, nv(2, 0)]);
        assert_eq!(arr.lines.len(), 2);
        assert_eq!(arr.members[0], vec![0, 1]);
        // Both lines pass through the origin, outside the strip.
        assert_eq!(arr.faces.len(), 3);
    }

    #[test]
    fn vertical_lines_outside_are_dropped() {
        let prims = [
            LinePrimitive { line: Line::Vertical { a: 0.into() }, provenance: Provenance::Slope(0, 1, 1) },
            LinePrimitive { line: Line::Vertical { a: 1.into() }, provenance: Provenance::Slope(0, 1, 2) },
            LinePrimitive { line: Line::Vertical { a: Rational::new(1, 2) }, provenance: Provenance::Slope(0, 2, 1) },
        ];
        let arr = build_arrangement(&prims);
        assert_eq!(arr.outside, vec![0, 1]);
        assert_eq!(arr.faces.len(), 2);
    }
}
