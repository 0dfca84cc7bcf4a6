//! RU-decomposition of ordered presentations, barcode pairings, and vineyard
//! updates under adjacent transpositions.
//!
//! We keep `R = D·V` with `D` the permuted presentation matrix and `V`
//! upper-triangular and invertible; `U = V⁻¹` is available on demand. Columns
//! are stored densely: the presentations handled here are small, and dense
//! columns make every transposition a handful of `O(n)` sweeps.

use std::fmt;

use crate::field::{FieldScalar, PrimeField};
use crate::presentation::Presentation;
use crate::rational::{ExtRational, Rational};

#[derive(Clone)]
pub struct RuState {
    field: PrimeField,
    /// Original matrix in local indices, `d[generator][relation]`.
    d: Vec<Vec<FieldScalar>>,
    /// `row_order[pos]` is the generator at row `pos`.
    row_order: Vec<usize>,
    row_pos: Vec<usize>,
    col_order: Vec<usize>,
    col_pos: Vec<usize>,
    /// `r[col][row]`, both by position.
    r: Vec<Vec<FieldScalar>>,
    /// `v[col][row]`, both by column position.
    v: Vec<Vec<FieldScalar>>,
    low: Vec<Option<usize>>,
    pivot_col: Vec<Option<usize>>,
}

/// Which kind of adjacent transposition to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transposition {
    Rows,
    Columns,
}

/// Generators (local indices) whose partner changed during an update.
pub type PairingDelta = Vec<usize>;

impl RuState {
    /// Reduces `q` with rows and columns in the given orders.
    pub fn reduce(q: &Presentation, row_order: Vec<usize>, col_order: Vec<usize>) -> RuState {
        let m = q.num_generators();
        let n = q.num_relations();
        assert_eq!(row_order.len(), m);
        assert_eq!(col_order.len(), n);
        let d = q.dense();
        let mut row_pos = vec![0; m];
        for (p, &g) in row_order.iter().enumerate() {
            row_pos[g] = p;
        }
        let mut col_pos = vec![0; n];
        for (p, &c) in col_order.iter().enumerate() {
            col_pos[c] = p;
        }
        let r: Vec<Vec<FieldScalar>> = col_order
            .iter()
            .map(|&c| row_order.iter().map(|&g| d[g][c]).collect())
            .collect();
        let v = (0..n)
            .map(|j| {
                let mut col = vec![FieldScalar::ZERO; n];
                col[j] = FieldScalar::ONE;
                col
            })
            .collect();
        let mut st = RuState {
            field: q.field,
            d,
            row_order,
            row_pos,
            col_order,
            col_pos,
            r,
            v,
            low: vec![None; n],
            pivot_col: vec![None; m],
        };
        for j in 0..n {
            st.low[j] = lowest(&st.r[j]);
            while let Some(i) = st.low[j] {
                let Some(k) = st.pivot_col[i] else { break };
                let c = st.field.div(st.r[j][i], st.r[k][i]);
                st.add_column(k, j, st.field.neg(c));
                st.low[j] = lowest(&st.r[j]);
            }
            if let Some(i) = st.low[j] {
                st.pivot_col[i] = Some(j);
            }
        }
        st
    }

    /// Column `dst += c · column src` in both `R` and `V`.
    fn add_column(&mut self, src: usize, dst: usize, c: FieldScalar) {
        if c.is_zero() {
            return;
        }
        let f = self.field;
        let (s, t) = pair_mut(&mut self.r, src, dst);
        for (x, y) in t.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x = f.add(*x, f.mul(c, *y));
            }
        }
        let (s, t) = pair_mut(&mut self.v, src, dst);
        for (x, y) in t.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x = f.add(*x, f.mul(c, *y));
            }
        }
    }

    pub fn num_rows(&self) -> usize {
        self.row_order.len()
    }

    pub fn num_cols(&self) -> usize {
        self.col_order.len()
    }

    pub fn row_order(&self) -> &[usize] {
        &self.row_order
    }

    pub fn col_order(&self) -> &[usize] {
        &self.col_order
    }

    pub fn row_position(&self, generator: usize) -> usize {
        self.row_pos[generator]
    }

    pub fn col_position(&self, relation: usize) -> usize {
        self.col_pos[relation]
    }

    /// Relation paired with `generator`, if any.
    pub fn generator_partner(&self, generator: usize) -> Option<usize> {
        self.pivot_col[self.row_pos[generator]].map(|j| self.col_order[j])
    }

    /// Generator paired with `relation`, if any.
    pub fn relation_partner(&self, relation: usize) -> Option<usize> {
        self.low[self.col_pos[relation]].map(|i| self.row_order[i])
    }

    /// Swaps the elements at positions `pos` and `pos + 1`.
    pub fn transpose(&mut self, which: Transposition, pos: usize) -> PairingDelta {
        match which {
            Transposition::Rows => self.swap_rows(pos),
            Transposition::Columns => self.swap_cols(pos),
        }
    }

    /// Swaps the generators at rows `i` and `i + 1`.
    pub fn swap_rows(&mut self, i: usize) -> PairingDelta {
        let gens = [self.row_order[i], self.row_order[i + 1]];
        let before = gens.map(|g| self.generator_partner(g));
        let k = self.pivot_col[i];
        let l = self.pivot_col[i + 1];
        for col in &mut self.r {
            col.swap(i, i + 1);
        }
        self.row_order.swap(i, i + 1);
        self.row_pos[self.row_order[i]] = i;
        self.row_pos[self.row_order[i + 1]] = i + 1;
        // Only columns with lows i or i+1 can change.
        if let Some(k) = k {
            self.low[k] = Some(i + 1);
        }
        if let Some(l) = l {
            self.low[l] = lowest(&self.r[l]);
        }
        if let (Some(k), Some(l)) = (k, l) {
            if self.low[l] == Some(i + 1) {
                let (early, late) = if k < l { (k, l) } else { (l, k) };
                let c = self.field.div(self.r[late][i + 1], self.r[early][i + 1]);
                self.add_column(early, late, self.field.neg(c));
                self.low[late] = lowest(&self.r[late]);
            }
        }
        self.pivot_col[i] = None;
        self.pivot_col[i + 1] = None;
        for c in [k, l].into_iter().flatten() {
            if let Some(p) = self.low[c] {
                self.pivot_col[p] = Some(c);
            }
        }
        let after = gens.map(|g| self.generator_partner(g));
        gens.iter()
            .zip(before.iter().zip(after.iter()))
            .filter(|(_, (b, a))| b != a)
            .map(|(&g, _)| g)
            .collect()
    }

    /// Swaps the relations at columns `j` and `j + 1`.
    pub fn swap_cols(&mut self, j: usize) -> PairingDelta {
        let lows_before = [self.low[j], self.low[j + 1]];
        let gens: Vec<usize> = lows_before.iter().flatten().map(|&p| self.row_order[p]).collect();
        let before: Vec<Option<usize>> = gens.iter().map(|&g| self.generator_partner(g)).collect();

        let coupling = self.v[j + 1][j];
        self.r.swap(j, j + 1);
        self.v.swap(j, j + 1);
        for col in &mut self.v {
            col.swap(j, j + 1);
        }
        self.low.swap(j, j + 1);
        self.col_order.swap(j, j + 1);
        self.col_pos[self.col_order[j]] = j;
        self.col_pos[self.col_order[j + 1]] = j + 1;

        if !coupling.is_zero() {
            // Entry (j+1, j) of V is nonzero; clear it with the column at j+1.
            let c = self.field.div(self.v[j][j + 1], self.v[j + 1][j + 1]);
            self.add_column(j + 1, j, self.field.neg(c));
            self.low[j] = lowest(&self.r[j]);
            if self.low[j].is_some() && self.low[j] == self.low[j + 1] {
                let p = self.low[j].unwrap();
                let c = self.field.div(self.r[j + 1][p], self.r[j][p]);
                self.add_column(j, j + 1, self.field.neg(c));
                self.low[j + 1] = lowest(&self.r[j + 1]);
            }
        }
        for p in lows_before.iter().flatten() {
            self.pivot_col[*p] = None;
        }
        for c in [j, j + 1] {
            if let Some(p) = self.low[c] {
                self.pivot_col[p] = Some(c);
            }
        }
        gens.iter()
            .zip(before)
            .filter(|&(&g, b)| self.generator_partner(g) != b)
            .map(|(&g, _)| g)
            .collect()
    }

    /// Pairing in terms of local generator and relation indices.
    pub fn pairing(&self) -> Vec<(usize, Option<usize>)> {
        (0..self.row_order.len()).map(|g| (g, self.generator_partner(g))).collect()
    }

    /// `U = V⁻¹`, column-major by column position.
    pub fn u_matrix(&self) -> Vec<Vec<FieldScalar>> {
        let n = self.v.len();
        let f = self.field;
        // Solve V·U = I column by column with back substitution.
        let mut u = vec![vec![FieldScalar::ZERO; n]; n];
        for (col, ucol) in u.iter_mut().enumerate() {
            for row in (0..=col).rev() {
                let mut acc = if row == col { FieldScalar::ONE } else { FieldScalar::ZERO };
                for k in row + 1..=col {
                    acc = f.sub(acc, f.mul(self.v[k][row], ucol[k]));
                }
                ucol[row] = f.div(acc, self.v[row][row]);
            }
        }
        u
    }

    /// The presentation matrix in the current order, column-major.
    pub fn ordered_matrix(&self) -> Vec<Vec<FieldScalar>> {
        self.col_order
            .iter()
            .map(|&c| self.row_order.iter().map(|&g| self.d[g][c]).collect())
            .collect()
    }

    /// `R` in the current order, column-major.
    pub fn r_matrix(&self) -> &[Vec<FieldScalar>] {
        &self.r
    }

    /// `V` in the current order, column-major.
    pub fn v_matrix(&self) -> &[Vec<FieldScalar>] {
        &self.v
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Checks `R = D·V`, `R·U = D`, triangularity, reducedness, and pivot bookkeeping.
    pub fn check_invariants(&self) -> Result<(), String> {
        let f = self.field;
        let n = self.v.len();
        let m = self.row_order.len();
        let dm = self.ordered_matrix();
        for j in 0..n {
            if self.v[j][j].is_zero() {
                return Err(format!("V has a zero on the diagonal at {j}"));
            }
            if self.v[j][j + 1..].iter().any(|x| !x.is_zero()) {
                return Err(format!("V is not upper triangular in column {j}"));
            }
            for i in 0..m {
                let mut acc = FieldScalar::ZERO;
                for k in 0..=j {
                    acc = f.add(acc, f.mul(dm[k][i], self.v[j][k]));
                }
                if acc != self.r[j][i] {
                    return Err(format!("R != D·V at ({i}, {j})"));
                }
            }
        }
        let u = self.u_matrix();
        for j in 0..n {
            for i in 0..m {
                let mut acc = FieldScalar::ZERO;
                for k in 0..=j {
                    acc = f.add(acc, f.mul(self.r[k][i], u[j][k]));
                }
                if acc != dm[j][i] {
                    return Err(format!("R·U != D at ({i}, {j})"));
                }
            }
        }
        let mut seen = vec![None; m];
        for j in 0..n {
            let l = lowest(&self.r[j]);
            if l != self.low[j] {
                return Err(format!("stale pivot for column {j}"));
            }
            if let Some(i) = l {
                if let Some(k) = seen[i] {
                    return Err(format!("columns {k} and {j} share pivot row {i}"));
                }
                seen[i] = Some(j);
            }
        }
        if seen != self.pivot_col {
            return Err("pivot map out of sync".into());
        }
        Ok(())
    }
}

impl fmt::Debug for RuState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rows {:?}", self.row_order)?;
        writeln!(f, "cols {:?}", self.col_order)?;
        writeln!(f, "pivots {:?}", self.low)?;
        for i in 0..self.row_order.len() {
            let row: Vec<String> = self.r.iter().map(|c| c[i].to_string()).collect();
            writeln!(f, "R {}", row.join(" "))?;
        }
        for i in 0..self.v.len() {
            let row: Vec<String> = self.v.iter().map(|c| c[i].to_string()).collect();
            writeln!(f, "V {}", row.join(" "))?;
        }
        Ok(())
    }
}

fn lowest(col: &[FieldScalar]) -> Option<usize> {
    col.iter().rposition(|x| !x.is_zero())
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&lo[a], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&hi[0], &mut lo[b])
    }
}

/// One generator with its partner relation (or `None` for an infinite bar).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair {
    pub generator: usize,
    pub relation: Option<usize>,
    /// Pushed grades of generator and relation coincide.
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BarcodePairing {
    pub pairs: Vec<Pair>,
}

/// Reads the pairing off `ru`; `gen_push` and `rel_push` are indexed by local index.
pub fn barcode_pairing(ru: &RuState, gen_push: &[Rational], rel_push: &[Rational]) -> BarcodePairing {
    BarcodePairing {
        pairs: ru
            .pairing()
            .into_iter()
            .map(|(g, r)| Pair {
                generator: g,
                relation: r,
                empty: r.is_some_and(|r| gen_push[g] == rel_push[r]),
            })
            .collect(),
    }
}

/// A half-open interval `[birth, death)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub birth: Rational,
    pub death: ExtRational,
}

impl Interval {
    pub fn contains(&self, t: &Rational) -> bool {
        &self.birth <= t && ExtRational::Finite(t.clone()) < self.death
    }
}

/// Intervals of the non-empty pairs, sorted.
pub fn barcode(bp: &BarcodePairing, gen_push: &[Rational], rel_push: &[Rational]) -> Vec<Interval> {
    let mut out: Vec<Interval> = bp
        .pairs
        .iter()
        .filter(|p| !p.empty)
        .map(|p| Interval {
            birth: gen_push[p.generator].clone(),
            death: match p.relation {
                Some(r) => ExtRational::Finite(rel_push[r].clone()),
                None => ExtRational::Infinity,
            },
        })
        .collect();
    out.sort();
    out
}
