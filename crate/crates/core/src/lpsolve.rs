//! Exact rational simplex.
//!
//! Solves `maximize c.x` subject to `a.x <= b` rows, `a.x = b` rows and
//! `x >= 0`, returning a basic (corner-point) optimum together with a dual
//! certificate. Pivoting uses Bland's rule in both phases, so the solver
//! terminates on degenerate problems and its output is deterministic.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    n_vars: usize,
    objective: Vec<Rational>,
    inequalities: Vec<(Vec<Rational>, Rational)>,
    equalities: Vec<(Vec<Rational>, Rational)>,
}

/// Identifies one constraint of a [`LinearProgram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintRef {
    Inequality(usize),
    Equality(usize),
    NonNegative(usize),
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        LinearProgram {
            n_vars: objective.len(),
            objective,
            ..Default::default()
        }
    }

    /// Adds `row . x <= rhs` and returns its index.
    pub fn add_le(&mut self, row: Vec<Rational>, rhs: Rational) -> usize {
        assert_eq!(row.len(), self.n_vars, "row length must match variable count");
        self.inequalities.push((row, rhs));
        self.inequalities.len() - 1
    }

    /// Adds `row . x = rhs` and returns its index.
    pub fn add_eq(&mut self, row: Vec<Rational>, rhs: Rational) -> usize {
        assert_eq!(row.len(), self.n_vars, "row length must match variable count");
        self.equalities.push((row, rhs));
        self.equalities.len() - 1
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn inequalities(&self) -> &[(Vec<Rational>, Rational)] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[(Vec<Rational>, Rational)] {
        &self.equalities
    }

    /// Gradient of a constraint, oriented as written (`a` for `a.x <= b`,
    /// `e_j` for `x_j >= 0`).
    pub fn gradient(&self, c: ConstraintRef) -> Vec<Rational> {
        match c {
            ConstraintRef::Inequality(i) => self.inequalities[i].0.clone(),
            ConstraintRef::Equality(i) => self.equalities[i].0.clone(),
            ConstraintRef::NonNegative(j) => {
                let mut e = vec![Rational::zero(); self.n_vars];
                e[j] = Rational::one();
                e
            }
        }
    }

    pub fn solve(&self) -> Result<VertexSolution> {
        solve_lp(self)
    }
}

/// An optimal corner point with its tight constraints and dual multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSolution {
    pub values: Vec<Rational>,
    pub objective_value: Rational,
    /// Constraints holding with equality, including active `x_j >= 0` bounds.
    pub tight_set: Vec<ConstraintRef>,
    /// One multiplier per inequality row (all nonnegative).
    pub inequality_duals: Vec<Rational>,
    /// One multiplier per equality row (free sign).
    pub equality_duals: Vec<Rational>,
}

/// Reason a [`VertexSolution::certify`] check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateError(pub String);

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl VertexSolution {
    /// Checks exact primal feasibility, dual feasibility, zero duality gap
    /// and that the tight constraints pin down a single point.
    pub fn certify(&self, lp: &LinearProgram) -> std::result::Result<(), CertificateError> {
        let fail = |m: String| Err(CertificateError(m));
        let n = lp.n_vars;
        if self.values.len() != n {
            return fail("value vector has wrong length".into());
        }
        if let Some(j) = self.values.iter().position(|v| v.is_negative()) {
            return fail(format!("x[{j}] is negative"));
        }
        for (i, (a, b)) in lp.inequalities.iter().enumerate() {
            if dot(a, &self.values) > *b {
                return fail(format!("inequality {i} violated"));
            }
        }
        for (i, (a, b)) in lp.equalities.iter().enumerate() {
            if dot(a, &self.values) != *b {
                return fail(format!("equality {i} violated"));
            }
        }
        if dot(&lp.objective, &self.values) != self.objective_value {
            return fail("objective value mismatch".into());
        }
        if self.inequality_duals.iter().any(|y| y.is_negative()) {
            return fail("negative inequality multiplier".into());
        }
        for j in 0..n {
            let mut lhs = Rational::zero();
            for (y, (a, _)) in self.inequality_duals.iter().zip(&lp.inequalities) {
                lhs += y * &a[j];
            }
            for (y, (a, _)) in self.equality_duals.iter().zip(&lp.equalities) {
                lhs += y * &a[j];
            }
            if lhs < lp.objective[j] {
                return fail(format!("dual constraint {j} violated"));
            }
        }
        let dual_value: Rational = self
            .inequality_duals
            .iter()
            .zip(&lp.inequalities)
            .map(|(y, (_, b))| y * b)
            .chain(
                self.equality_duals
                    .iter()
                    .zip(&lp.equalities)
                    .map(|(y, (_, b))| y * b),
            )
            .sum();
        if dual_value != self.objective_value {
            return fail("duality gap is not zero".into());
        }
        for &c in &self.tight_set {
            let lhs = match c {
                ConstraintRef::NonNegative(j) => self.values[j].clone(),
                _ => dot(&lp.gradient(c), &self.values),
            };
            let rhs = match c {
                ConstraintRef::Inequality(i) => lp.inequalities[i].1.clone(),
                ConstraintRef::Equality(i) => lp.equalities[i].1.clone(),
                ConstraintRef::NonNegative(_) => Rational::zero(),
            };
            if lhs != rhs {
                return fail(format!("{c:?} listed as tight but has slack"));
            }
        }
        if tight_rank(lp, &self.tight_set) != n {
            return fail("tight constraints do not have full rank".into());
        }
        Ok(())
    }

    pub fn is_vertex(&self, lp: &LinearProgram) -> bool {
        tight_rank(lp, &self.tight_set) == lp.n_vars
    }
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter()
        .zip(x)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, v)| c * v)
        .sum()
}

/// Rank of the gradients of `set`, by exact elimination.
pub fn tight_rank(lp: &LinearProgram, set: &[ConstraintRef]) -> usize {
    // Active bounds are unit rows: they contribute one each and remove
    // their column from the remaining rows.
    let mut fixed = vec![false; lp.n_vars];
    for c in set {
        if let ConstraintRef::NonNegative(j) = *c {
            fixed[j] = true;
        }
    }
    let free: Vec<usize> = (0..lp.n_vars).filter(|&j| !fixed[j]).collect();
    let rows: Vec<Vec<Rational>> = set
        .iter()
        .filter(|c| !matches!(c, ConstraintRef::NonNegative(_)))
        .map(|&c| {
            let g = lp.gradient(c);
            free.iter().map(|&j| g[j].clone()).collect()
        })
        .collect();
    (lp.n_vars - free.len()) + matrix_rank(rows, free.len())
}

pub fn matrix_rank(mut rows: Vec<Vec<Rational>>, n_cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let (upper, lower) = rows.split_at_mut(rank + 1);
        let pivot_row = &upper[rank];
        for row in lower {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot_row[col];
            for (x, p) in row[col..n_cols].iter_mut().zip(&pivot_row[col..n_cols]) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    reduced: Vec<Rational>,
    value: Rational,
    /// Columns that may enter the basis.
    enterable: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        if !p.is_one() {
            for v in self.rows[row].iter_mut().filter(|v| !v.is_zero()) {
                *v /= &p;
            }
            self.rhs[row] /= &p;
        }
        let nz: Vec<usize> = (0..self.rows[row].len())
            .filter(|&c| !self.rows[row][c].is_zero())
            .collect();
        let prow = std::mem::take(&mut self.rows[row]);
        let prhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let f = self.rows[r][col].clone();
            for &c in &nz {
                let d = &f * &prow[c];
                self.rows[r][c] -= d;
            }
            if !prhs.is_zero() {
                self.rhs[r] -= &f * &prhs;
            }
        }
        if !self.reduced[col].is_zero() {
            let f = self.reduced[col].clone();
            for &c in &nz {
                let d = &f * &prow[c];
                self.reduced[c] -= d;
            }
            self.value -= &f * &prhs;
        }
        self.rows[row] = prow;
        self.basis[row] = col;
    }

    /// Bland's rule: lowest-index improving column, ties in the ratio test
    /// broken by the lowest basic variable index.
    fn run(&mut self) -> Result<()> {
        loop {
            let Some(col) = (0..self.enterable).find(|&j| self.reduced[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Err(Error::Unbounded),
            }
        }
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let width = self.rows.first().map_or(costs.len(), Vec::len);
        let mut reduced: Vec<Rational> = (0..width).map(|j| -costs[j].clone()).collect();
        let mut value = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[r].iter().enumerate() {
                if !v.is_zero() {
                    reduced[j] += cb * v;
                }
            }
            value += cb * &self.rhs[r];
        }
        self.reduced = reduced;
        self.value = value;
    }
}

/// Solves `lp` to an optimal vertex.
///
/// Columns are laid out as structural variables, then one slack per
/// inequality, then one artificial per row. Artificial columns never
/// re-enter; their final reduced costs are the row multipliers.
pub fn solve_lp(lp: &LinearProgram) -> Result<VertexSolution> {
    let n = lp.n_vars;
    let k = lp.inequalities.len();
    let m = k + lp.equalities.len();
    let width = n + k + m;
    let art = |r: usize| n + k + r;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut negated = vec![false; m];
    let mut phase_one = vec![Rational::zero(); width];
    let mut needs_phase_one = false;

    let all_rows = lp
        .inequalities
        .iter()
        .map(|r| (r, true))
        .chain(lp.equalities.iter().map(|r| (r, false)));
    for (r, ((a, b), is_ineq)) in all_rows.enumerate() {
        let mut row = vec![Rational::zero(); width];
        row[..n].clone_from_slice(a);
        if is_ineq {
            row[n + r] = Rational::one();
        }
        let mut b = b.clone();
        if b.is_negative() {
            negated[r] = true;
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
        }
        row[art(r)] = Rational::one();
        if is_ineq && !negated[r] {
            basis.push(n + r);
        } else {
            basis.push(art(r));
            phase_one[art(r)] = -Rational::one();
            needs_phase_one = true;
        }
        rows.push(row);
        rhs.push(b);
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis,
        reduced: Vec::new(),
        value: Rational::zero(),
        enterable: n + k,
    };

    if needs_phase_one {
        t.set_costs(&phase_one);
        t.run()?;
        if t.value.is_negative() {
            return Err(Error::Infeasible);
        }
        // Drive zero-level artificials out where a structural or slack
        // column can replace them; rows with none left are redundant.
        for r in 0..m {
            if t.basis[r] >= n + k {
                if let Some(c) = (0..n + k).find(|&c| !t.rows[r][c].is_zero()) {
                    t.pivot(r, c);
                }
            }
        }
    }

    let mut costs = vec![Rational::zero(); width];
    costs[..n].clone_from_slice(&lp.objective);
    t.set_costs(&costs);
    t.run()?;

    let mut full = vec![Rational::zero(); width];
    for (r, &b) in t.basis.iter().enumerate() {
        full[b] = t.rhs[r].clone();
    }
    let values = full[..n].to_vec();

    let mut tight_set = Vec::new();
    for i in 0..k {
        if full[n + i].is_zero() {
            tight_set.push(ConstraintRef::Inequality(i));
        }
    }
    tight_set.extend((0..lp.equalities.len()).map(ConstraintRef::Equality));
    tight_set.extend(
        (0..n)
            .filter(|&j| values[j].is_zero())
            .map(ConstraintRef::NonNegative),
    );

    let dual = |r: usize| {
        let y = t.reduced[art(r)].clone();
        if negated[r] {
            -y
        } else {
            y
        }
    };
    let inequality_duals = (0..k).map(dual).collect();
    let equality_duals = (k..m).map(dual).collect();

    let sol = VertexSolution {
        objective_value: t.value.clone(),
        values,
        tight_set,
        inequality_duals,
        equality_duals,
    };
    debug_assert_eq!(sol.objective_value, dot(&lp.objective, &sol.values));
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn v(xs: &[Rational]) -> Vec<Rational> {
        xs.to_vec()
    }

    #[test]
    fn single_bound() {
        let mut lp = LinearProgram::new(v(&[int(1)]));
        lp.add_le(v(&[int(1)]), int(1));
        let s = lp.solve().unwrap();
        assert_eq!(s.values, v(&[int(1)]));
        assert_eq!(s.objective_value, int(1));
        s.certify(&lp).unwrap();
    }

    #[test]
    fn symmetric_two_variable_program() {
        let mut lp = LinearProgram::new(v(&[int(1), int(1)]));
        lp.add_le(v(&[int(1), ratio(1, 1000)]), int(1));
        lp.add_le(v(&[ratio(1, 1000), int(1)]), int(1));
        lp.add_le(v(&[int(1), int(0)]), int(1));
        lp.add_le(v(&[int(0), int(1)]), int(1));
        let s = lp.solve().unwrap();
        assert_eq!(s.values, v(&[ratio(1000, 1001), ratio(1000, 1001)]));
        assert_eq!(s.objective_value, ratio(2000, 1001));
        s.certify(&lp).unwrap();
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::new(v(&[int(1)]));
        lp.add_le(v(&[int(-1)]), int(-2));
        lp.add_le(v(&[int(1)]), int(1));
        assert_eq!(lp.solve(), Err(Error::Infeasible));
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(v(&[int(1), int(0)]));
        lp.add_le(v(&[int(-1), int(1)]), int(1));
        assert_eq!(lp.solve(), Err(Error::Unbounded));
    }

    #[test]
    fn equalities_and_negative_rhs() {
        // max x + 2y s.t. x + y = 3, x - y <= -1, y <= 5/2
        let mut lp = LinearProgram::new(v(&[int(1), int(2)]));
        lp.add_eq(v(&[int(1), int(1)]), int(3));
        lp.add_le(v(&[int(1), int(-1)]), int(-1));
        lp.add_le(v(&[int(0), int(1)]), ratio(5, 2));
        let s = lp.solve().unwrap();
        assert_eq!(s.values, v(&[ratio(1, 2), ratio(5, 2)]));
        assert_eq!(s.objective_value, ratio(11, 2));
        s.certify(&lp).unwrap();
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let mut lp = LinearProgram::new(v(&[int(1), int(1)]));
        lp.add_eq(v(&[int(1), int(1)]), int(2));
        lp.add_eq(v(&[int(2), int(2)]), int(4));
        lp.add_le(v(&[int(1), int(0)]), int(1));
        let s = lp.solve().unwrap();
        assert_eq!(s.objective_value, int(2));
        s.certify(&lp).unwrap();
    }

    #[test]
    fn degenerate_program_terminates() {
        // Classic cycling example for the largest-coefficient rule.
        let mut lp = LinearProgram::new(v(&[ratio(3, 4), int(-150), ratio(1, 50), int(-6)]));
        lp.add_le(v(&[ratio(1, 4), int(-60), ratio(-1, 25), int(9)]), int(0));
        lp.add_le(v(&[ratio(1, 2), int(-90), ratio(-1, 50), int(3)]), int(0));
        lp.add_le(v(&[int(0), int(0), int(1), int(0)]), int(1));
        let s = lp.solve().unwrap();
        assert_eq!(s.objective_value, ratio(1, 20));
        s.certify(&lp).unwrap();
    }

    #[test]
    fn empty_program() {
        let lp = LinearProgram::new(vec![]);
        let s = lp.solve().unwrap();
        assert!(s.values.is_empty());
        assert_eq!(s.objective_value, int(0));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![v(&[int(1), int(2)]), v(&[int(2), int(4)]), v(&[int(0), int(0)])];
        assert_eq!(matrix_rank(rows, 2), 1);
    }
}
