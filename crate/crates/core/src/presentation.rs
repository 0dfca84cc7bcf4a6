//! Graded presentation matrices of 2-parameter persistence modules.

use std::collections::HashSet;
use std::fmt;

use crate::field::{FieldScalar, PrimeField};
use crate::rational::Rational;

/// A point of the parameter plane.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade {
    pub x: Rational,
    pub y: Rational,
}

impl Grade {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        Grade { x: x.into(), y: y.into() }
    }

    /// Componentwise `≤`.
    pub fn le(&self, other: &Grade) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    /// Least common upper bound (componentwise max).
    pub fn join(&self, other: &Grade) -> Grade {
        Grade {
            x: self.x.clone().max(other.x.clone()),
            y: self.y.clone().max(other.y.clone()),
        }
    }

    pub fn swapped(&self) -> Grade {
        Grade { x: self.y.clone(), y: self.x.clone() }
    }
}

impl fmt::Debug for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A generator or relation with its id and grade.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    pub id: usize,
    pub grade: Grade,
}

/// Sparse column: `(row, coefficient)` entries sorted by row, no zeros.
pub type Column = Vec<(usize, FieldScalar)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub field: PrimeField,
    pub generators: Vec<Element>,
    pub relations: Vec<Element>,
    pub columns: Vec<Column>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("duplicate element id {0}")]
    DuplicateId(usize),
    #[error("expected {expected} columns, found {found}")]
    ColumnCount { expected: usize, found: usize },
    #[error("relation {col} references row {row}, but there are only {rows} generators")]
    RowOutOfRange { row: usize, col: usize, rows: usize },
    #[error("relation {col} lists row {row} more than once or out of order")]
    UnsortedColumn { row: usize, col: usize },
    #[error("relation {col} stores an explicit zero or unreduced coefficient at row {row}")]
    BadCoefficient { row: usize, col: usize },
    #[error("grade condition violated at ({row}, {col}): generator grade is not below relation grade")]
    GradeCondition { row: usize, col: usize },
    #[error("{0} is not a permutation of 0..{1}")]
    NotPermutation(&'static str, usize),
}

impl Presentation {
    /// Builds and validates a presentation. Ids are assigned densely:
    /// generators first, then relations.
    pub fn new(
        field: PrimeField,
        generators: Vec<Grade>,
        relations: Vec<Grade>,
        columns: Vec<Column>,
    ) -> Result<Self, PresentationError> {
        let m = generators.len();
        let q = Presentation {
            field,
            generators: generators.into_iter().enumerate().map(|(id, grade)| Element { id, grade }).collect(),
            relations: relations
                .into_iter()
                .enumerate()
                .map(|(j, grade)| Element { id: m + j, grade })
                .collect(),
            columns,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn zero(field: PrimeField) -> Self {
        Presentation { field, generators: Vec::new(), relations: Vec::new(), columns: Vec::new() }
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_relations(&self) -> usize {
        self.relations.len()
    }

    pub fn len(&self) -> usize {
        self.generators.len() + self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entry `[Q]_{i,j}`.
    pub fn entry(&self, row: usize, col: usize) -> FieldScalar {
        self.columns[col]
            .iter()
            .find(|(r, _)| *r == row)
            .map(|(_, c)| *c)
            .unwrap_or(FieldScalar::ZERO)
    }

    pub fn validate(&self) -> Result<(), PresentationError> {
        let mut seen = HashSet::new();
        for e in self.generators.iter().chain(&self.relations) {
            if !seen.insert(e.id) {
                return Err(PresentationError::DuplicateId(e.id));
            }
        }
        if self.columns.len() != self.relations.len() {
            return Err(PresentationError::ColumnCount {
                expected: self.relations.len(),
                found: self.columns.len(),
            });
        }
        let p = self.field.characteristic();
        for (col, column) in self.columns.iter().enumerate() {
            let mut prev: Option<usize> = None;
            for &(row, c) in column {
                if row >= self.generators.len() {
                    return Err(PresentationError::RowOutOfRange { row, col, rows: self.generators.len() });
                }
                if prev.is_some_and(|p| p >= row) {
                    return Err(PresentationError::UnsortedColumn { row, col });
                }
                prev = Some(row);
                if c.is_zero() || c.0 >= p {
                    return Err(PresentationError::BadCoefficient { row, col });
                }
                if !self.generators[row].grade.le(&self.relations[col].grade) {
                    return Err(PresentationError::GradeCondition { row, col });
                }
            }
        }
        Ok(())
    }

    /// Returns `out` with `[out]_{i,j} = [self]_{σ(i),τ(j)}`; elements move with their rows and columns.
    pub fn permute(&self, sigma: &[usize], tau: &[usize]) -> Result<Presentation, PresentationError> {
        check_permutation(sigma, self.generators.len(), "row permutation")?;
        check_permutation(tau, self.relations.len(), "column permutation")?;
        let mut inv_sigma = vec![0; sigma.len()];
        for (i, &s) in sigma.iter().enumerate() {
            inv_sigma[s] = i;
        }
        let generators = sigma.iter().map(|&s| self.generators[s].clone()).collect();
        let relations = tau.iter().map(|&t| self.relations[t].clone()).collect();
        let columns = tau
            .iter()
            .map(|&t| {
                let mut col: Column = self.columns[t].iter().map(|&(r, c)| (inv_sigma[r], c)).collect();
                col.sort_unstable_by_key(|&(r, _)| r);
                col
            })
            .collect();
        Ok(Presentation { field: self.field, generators, relations, columns })
    }

    /// Exchanges the x- and y-coordinate of every grade; the matrix is unchanged.
    pub fn swap_coordinates(&self) -> Presentation {
        let flip = |e: &Element| Element { id: e.id, grade: e.grade.swapped() };
        Presentation {
            field: self.field,
            generators: self.generators.iter().map(flip).collect(),
            relations: self.relations.iter().map(flip).collect(),
            columns: self.columns.clone(),
        }
    }

    /// Dense copy of the matrix, row-major.
    pub fn dense(&self) -> Vec<Vec<FieldScalar>> {
        let mut out = vec![vec![FieldScalar::ZERO; self.relations.len()]; self.generators.len()];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                out[i][j] = c;
            }
        }
        out
    }
}

fn check_permutation(perm: &[usize], n: usize, what: &'static str) -> Result<(), PresentationError> {
    if perm.len() != n {
        return Err(PresentationError::NotPermutation(what, n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(PresentationError::NotPermutation(what, n));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Which presentation of a pair an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Generator,
    Relation,
}

/// Location of an element inside a pair of presentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementRef {
    pub side: Side,
    pub role: Role,
    pub index: usize,
}

/// The disjoint union of all generators and relations of two presentations.
///
/// Global ids are positions in the order: first generators, first relations,
/// second generators, second relations. They double as the fixed tiebreak.
#[derive(Debug, Clone)]
pub struct ElementSet {
    pub grades: Vec<Grade>,
    pub refs: Vec<ElementRef>,
    offsets: [usize; 4],
}

impl ElementSet {
    pub fn new(q: &Presentation, q2: &Presentation) -> Self {
        let mut grades = Vec::with_capacity(q.len() + q2.len());
        let mut refs = Vec::with_capacity(grades.capacity());
        let mut offsets = [0; 4];
        let parts = [
            (Side::First, Role::Generator, &q.generators),
            (Side::First, Role::Relation, &q.relations),
            (Side::Second, Role::Generator, &q2.generators),
            (Side::Second, Role::Relation, &q2.relations),
        ];
        for (k, (side, role, elems)) in parts.into_iter().enumerate() {
            offsets[k] = grades.len();
            for (index, e) in elems.iter().enumerate() {
                grades.push(e.grade.clone());
                refs.push(ElementRef { side, role, index });
            }
        }
        ElementSet { grades, refs, offsets }
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn global_id(&self, r: ElementRef) -> usize {
        let k = match (r.side, r.role) {
            (Side::First, Role::Generator) => 0,
            (Side::First, Role::Relation) => 1,
            (Side::Second, Role::Generator) => 2,
            (Side::Second, Role::Relation) => 3,
        };
        self.offsets[k] + r.index
    }
}

/// How two elements of an [`ElementSet`] can interact in a bottleneck graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// Same presentation and role: their relative order matters for the reduction.
    SameOrder,
    /// Different presentations, same role: compared across a bottleneck edge.
    Matched,
    /// Same presentation, different roles: endpoints of one potential bar.
    Diagonal,
    /// Never compared.
    Unrelated,
}

impl ElementSet {
    pub fn pair_kind(&self, h: usize, h2: usize) -> PairKind {
        let (a, b) = (self.refs[h], self.refs[h2]);
        match (a.side == b.side, a.role == b.role) {
            (true, true) => PairKind::SameOrder,
            (false, true) => PairKind::Matched,
            (true, false) => PairKind::Diagonal,
            (false, false) => PairKind::Unrelated,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> Presentation {
        Presentation::new(
            PrimeField::default(),
            vec![Grade::new(0, 2), Grade::new(2, 0)],
            vec![Grade::new(4, 4)],
            vec![vec![(0, FieldScalar::ONE), (1, FieldScalar::ONE)]],
        )
        .unwrap()
    }

    #[test]
    fn grade_condition_is_enforced() {
        let err = Presentation::new(
            PrimeField::default(),
            vec![Grade::new(2, 0)],
            vec![Grade::new(1, 1)],
            vec![vec![(0, FieldScalar::ONE)]],
        )
        .unwrap_err();
        assert_eq!(err, PresentationError::GradeCondition { row: 0, col: 0 });
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let mut q = fig1();
        q.relations[0].id = 0;
        assert_eq!(q.validate(), Err(PresentationError::DuplicateId(0)));
    }

    #[test]
    fn permutation_moves_rows() {
        let q = fig1();
        let p = q.permute(&[1, 0], &[0]).unwrap();
        assert_eq!(p.generators[0].grade, Grade::new(2, 0));
        assert_eq!(p.columns[0], vec![(0, FieldScalar::ONE), (1, FieldScalar::ONE)]);
        assert_eq!(p.permute(&[1, 0], &[0]).unwrap(), q);
        assert!(q.permute(&[0, 0], &[0]).is_err());
    }

    #[test]
    fn element_set_order() {
        let q = fig1();
        let set = ElementSet::new(&q, &q.swap_coordinates());
        assert_eq!(set.len(), 6);
        assert_eq!(set.grades[3], Grade::new(2, 0));
        let r = set.refs[5];
        assert_eq!((r.side, r.role, r.index), (Side::Second, Role::Relation, 0));
        assert_eq!(set.global_id(r), 5);
    }
}
