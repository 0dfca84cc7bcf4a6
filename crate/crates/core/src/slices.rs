//! Slices of the parameter plane, their dual points, and pushed grades.
//!
//! A slice `y = a·x + b` with `0 < a ≤ 1` is represented by the point `(a, b)`
//! of the strip `(0, 1] × ℝ`. A grade `p` dualizes to the line
//! `y = −p_x·x + p_y`, and `p` lies on the slice exactly when the slice's dual
//! point lies on that line.

use std::fmt;

use crate::presentation::{Grade, Presentation, Role};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DualPoint {
    pub a: Rational,
    pub b: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("slope {0} is outside (0, 1]")]
pub struct SlopeOutOfRange(pub Rational);

impl DualPoint {
    pub fn new(a: Rational, b: Rational) -> Result<Self, SlopeOutOfRange> {
        if !a.is_positive() || a > Rational::one() {
            return Err(SlopeOutOfRange(a));
        }
        Ok(DualPoint { a, b })
    }

    /// Height of the slice above `x`.
    pub fn y_at(&self, x: &Rational) -> Rational {
        &(&self.a * x) + &self.b
    }
}

impl fmt::Debug for DualPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// The line `y = slope·x + intercept` in the dual plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualLine {
    pub slope: Rational,
    pub intercept: Rational,
}

impl DualLine {
    pub fn eval(&self, a: &Rational) -> Rational {
        &(&self.slope * a) + &self.intercept
    }
}

pub fn dual_of_point(p: &Grade) -> DualLine {
    DualLine { slope: -&p.x, intercept: p.y.clone() }
}

/// y-coordinate of the least point on `s` that is `≥ p`.
pub fn push(s: &DualPoint, p: &Grade) -> Rational {
    let on_slice = s.y_at(&p.x);
    if on_slice > p.y {
        on_slice
    } else {
        p.y.clone()
    }
}

/// Ordered partition of element indices into blocks of equal push value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicePreorder {
    pub blocks: Vec<Vec<usize>>,
}

pub fn slice_preorder(grades: &[Grade], s: &DualPoint) -> SlicePreorder {
    let pushed: Vec<Rational> = grades.iter().map(|g| push(s, g)).collect();
    let mut idx: Vec<usize> = (0..grades.len()).collect();
    idx.sort_by(|&i, &j| pushed[i].cmp(&pushed[j]).then(i.cmp(&j)));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match blocks.last_mut() {
            Some(last) if pushed[last[0]] == pushed[i] => last.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    SlicePreorder { blocks }
}

/// An ordering of a presentation at a slice.
///
/// `row_order[k]` is the generator placed at row `k`; `gen_push[k]` is its
/// pushed grade. Likewise for relations and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedPresentation {
    pub row_order: Vec<usize>,
    pub col_order: Vec<usize>,
    pub gen_push: Vec<Rational>,
    pub rel_push: Vec<Rational>,
}

impl InducedPresentation {
    pub fn apply(&self, q: &Presentation) -> Presentation {
        q.permute(&self.row_order, &self.col_order)
            .expect("induced orders are permutations")
    }

    pub fn is_ordered(&self) -> bool {
        self.gen_push.windows(2).all(|w| w[0] <= w[1]) && self.rel_push.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Orders generators and relations by pushed grade, ties by local index.
pub fn induced_ordered_presentation(q: &Presentation, s: &DualPoint) -> InducedPresentation {
    induced_ordered_presentation_with(q, s, |_, i| i)
}

/// Like [`induced_ordered_presentation`], breaking ties by `tiebreak(role, local index)`.
pub fn induced_ordered_presentation_with<K: Ord>(
    q: &Presentation,
    s: &DualPoint,
    tiebreak: impl Fn(Role, usize) -> K,
) -> InducedPresentation {
    let order = |elems: &[crate::presentation::Element], role: Role| {
        let pushed: Vec<Rational> = elems.iter().map(|e| push(s, &e.grade)).collect();
        let mut idx: Vec<usize> = (0..elems.len()).collect();
        idx.sort_by(|&i, &j| pushed[i].cmp(&pushed[j]).then_with(|| tiebreak(role, i).cmp(&tiebreak(role, j))));
        let sorted = idx.iter().map(|&i| pushed[i].clone()).collect();
        (idx, sorted)
    };
    let (row_order, gen_push) = order(&q.generators, Role::Generator);
    let (col_order, rel_push) = order(&q.relations, Role::Relation);
    InducedPresentation { row_order, col_order, gen_push, rel_push }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpres::parse_presentation;
    use proptest::prelude::*;

    fn dp(a: i64, b: i64) -> DualPoint {
        DualPoint::new(a.into(), b.into()).unwrap()
    }

    #[test]
    fn push_examples() {
        let s = dp(1, -1);
        assert_eq!(push(&s, &Grade::new(3, 2)), Rational::from(2));
        assert_eq!(push(&s, &Grade::new(Rational::from(4), Rational::new(3, 2))), Rational::from(3));
        assert_eq!(push(&s, &Grade::new(5, 4)), Rational::from(4));
    }

    #[test]
    fn dual_lines() {
        assert_eq!(dual_of_point(&Grade::new(3, 2)), DualLine { slope: (-3).into(), intercept: 2.into() });
        assert_eq!(dual_of_point(&Grade::new(0, 0)), DualLine { slope: 0.into(), intercept: 0.into() });
    }

    #[test]
    fn strip_bounds() {
        assert!(DualPoint::new(0.into(), 0.into()).is_err());
        assert!(DualPoint::new(Rational::new(3, 2), 0.into()).is_err());
        assert!(DualPoint::new(1.into(), 0.into()).is_ok());
    }

    #[test]
    fn figure_one_preorders() {
        let grades = [Grade::new(0, 2), Grade::new(2, 0), Grade::new(4, 4)];
        assert_eq!(slice_preorder(&grades, &dp(1, 0)).blocks, vec![vec![0, 1], vec![2]]);
        assert_eq!(slice_preorder(&grades, &dp(1, -2)).blocks, vec![vec![1], vec![0], vec![2]]);
        assert_eq!(slice_preorder(&grades[..1], &dp(1, 0)).blocks, vec![vec![0]]);
    }

    #[test]
    fn figure_one_induced_order() {
        let q = parse_presentation("fpres v1\nfield 2\ngenerators 2\n0 2\n2 0\nrelations 1\n4 4 ; 0:1 1:1\n").unwrap();
        let ind = induced_ordered_presentation(&q, &dp(1, -2));
        assert_eq!(ind.row_order, vec![1, 0]);
        assert_eq!(ind.col_order, vec![0]);
        assert_eq!(ind.gen_push, vec![Rational::from(0), Rational::from(2)]);
        assert_eq!(ind.rel_push, vec![Rational::from(4)]);
        assert!(ind.is_ordered());
        let at_diag = induced_ordered_presentation(&q, &dp(1, 0));
        assert_eq!(at_diag.row_order, vec![0, 1]);
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..5).prop_map(|(n, d)| Rational::new(n, d))
    }

    fn slice() -> impl Strategy<Value = DualPoint> {
        ((1i64..=8, 1i64..=8), small()).prop_map(|((n, d), b)| {
            let (n, d) = if n > d { (d, n) } else { (n, d) };
            DualPoint::new(Rational::new(n, d), b).unwrap()
        })
    }

    proptest! {
        #[test]
        fn duality_preserves_incidence_and_sides(x in small(), y in small(), s in slice()) {
            let p = Grade { x, y };
            let line = dual_of_point(&p);
            prop_assert_eq!(s.y_at(&p.x).cmp(&p.y), s.b.cmp(&line.eval(&s.a)));
        }

        #[test]
        fn push_is_monotone_and_lipschitz(x in small(), y in small(), dx in 0i64..5, dy in 0i64..5, s in slice()) {
            let p = Grade { x: x.clone(), y: y.clone() };
            let q = Grade { x: &x + &Rational::from(dx), y: &y + &Rational::from(dy) };
            let (a, b) = (push(&s, &p), push(&s, &q));
            prop_assert!(a <= b);
            prop_assert!(&b - &a <= Rational::from(dx.max(dy)));
        }
    }
}
