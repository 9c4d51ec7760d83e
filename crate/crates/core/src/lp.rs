//! Dense bounded-variable simplex for maximization problems with finite
//! variable bounds.
//!
//! Every row `a·x {<=,=,>=} b` gets a logical column `s = a·x` whose bounds
//! encode the relation, so the working system is homogeneous: `s - a·x = 0`.
//! Cold solves run a two-phase primal simplex (artificial columns in phase
//! one); rows added afterwards are absorbed with the dual simplex from the
//! current basis.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row<T> {
    /// Sparse coefficients as `(variable, value)`.
    pub coeffs: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Scalar> Row<T> {
    pub fn new(coeffs: Vec<(usize, T)>, relation: Relation, rhs: T) -> Self {
        Row {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn activity(&self, x: &[T]) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, (j, a)| acc + a.clone() * x[*j].clone())
    }

    /// Amount by which `x` violates the row (zero when satisfied).
    pub fn violation(&self, x: &[T]) -> T {
        let act = self.activity(x);
        let zero = T::zero();
        let over = act.clone() - self.rhs.clone();
        let under = self.rhs.clone() - act;
        match self.relation {
            Relation::Le => max(over, zero),
            Relation::Ge => max(under, zero),
            Relation::Eq => max(over.abs(), zero),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    /// Maximized.
    pub objective: Vec<T>,
    pub rows: Vec<Row<T>>,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(objective: Vec<T>, lower: Vec<T>, upper: Vec<T>) -> Self {
        LinearProgram {
            objective,
            rows: Vec::new(),
            lower,
            upper,
        }
    }

    /// `max c·x` over the unit box.
    pub fn unit_box(objective: Vec<T>) -> Self {
        let n = objective.len();
        Self::new(objective, vec![T::zero(); n], vec![T::one(); n])
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, row: Row<T>) {
        self.rows.push(row);
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        self.objective
            .iter()
            .zip(x)
            .fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
    }

    /// Largest violation of any row or bound by `x`.
    pub fn max_violation(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        for (j, v) in x.iter().enumerate() {
            worst = max(worst, self.lower[j].clone() - v.clone());
            worst = max(worst, v.clone() - self.upper[j].clone());
        }
        for row in &self.rows {
            worst = max(worst, row.violation(x));
        }
        worst
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::DimensionMismatch);
        }
        if let Some(j) = (0..n).find(|&j| self.lower[j] > self.upper[j]) {
            return Err(LpError::InvalidBounds(j));
        }
        if self
            .rows
            .iter()
            .any(|r| r.coeffs.iter().any(|(j, _)| *j >= n))
        {
            return Err(LpError::DimensionMismatch);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub values: Vec<T>,
    pub objective_value: T,
}

impl<T> LpSolution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("simplex iteration limit of {0} exceeded")]
    IterationLimit(usize),
    #[error("lower bound exceeds upper bound for variable {0}")]
    InvalidBounds(usize),
    #[error("coefficient or bound vector has the wrong length")]
    DimensionMismatch,
    #[error("solution drifted outside tolerance after reinversion")]
    NumericalTrouble,
}

fn max<T: Scalar>(a: T, b: T) -> T {
    if a >= b {
        a
    } else {
        b
    }
}

fn min<T: Scalar>(a: T, b: T) -> T {
    if a <= b {
        a
    } else {
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Logical(usize),
    Artificial(usize),
}

/// Solves `lp` from scratch.
pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LpError> {
    Simplex::new(lp)?.solve()
}

/// Solves `lp`, then appends `new_rows` and re-optimizes from the optimal
/// basis. Agrees with a cold solve of the enlarged program.
pub fn add_rows_and_resolve<T: Scalar>(
    lp: &LinearProgram<T>,
    new_rows: &[Row<T>],
) -> Result<LpSolution<T>, LpError> {
    let mut s = Simplex::new(lp)?;
    s.solve()?;
    s.add_rows_and_resolve(new_rows)
}

/// Simplex state that survives between solves so rows can be appended and
/// re-optimized from the previous basis.
#[derive(Debug, Clone)]
pub struct Simplex<T> {
    lp: LinearProgram<T>,
    kinds: Vec<ColumnKind>,
    lo: Vec<T>,
    hi: Vec<T>,
    cost: Vec<T>,
    /// `m` rows of `B^-1 M`, where `M x = 0` is the working system.
    tableau: Vec<Vec<T>>,
    /// Row of `M` for each constraint, kept for reinversion.
    original: Vec<Vec<T>>,
    basis: Vec<usize>,
    /// Row index for basic columns.
    row_of: Vec<Option<usize>>,
    at_upper: Vec<bool>,
    value: Vec<T>,
    reduced: Vec<T>,
    solved: bool,
    last: Option<LpSolution<T>>,
    /// Pivots and bound flips performed so far.
    pub iterations: usize,
}

impl<T: Scalar> Simplex<T> {
    pub fn new(lp: &LinearProgram<T>) -> Result<Self, LpError> {
        lp.validate()?;
        let n = lp.num_vars();
        let mut s = Simplex {
            lp: LinearProgram::new(lp.objective.clone(), lp.lower.clone(), lp.upper.clone()),
            kinds: vec![ColumnKind::Structural; n],
            lo: lp.lower.clone(),
            hi: lp.upper.clone(),
            cost: lp.objective.clone(),
            tableau: Vec::new(),
            original: Vec::new(),
            basis: Vec::new(),
            row_of: vec![None; n],
            at_upper: vec![false; n],
            value: lp.lower.clone(),
            reduced: Vec::new(),
            solved: false,
            last: None,
            iterations: 0,
        };
        for row in &lp.rows {
            s.append_row(row.clone());
        }
        Ok(s)
    }

    pub fn program(&self) -> &LinearProgram<T> {
        &self.lp
    }

    fn ncols(&self) -> usize {
        self.kinds.len()
    }

    fn iteration_cap(&self) -> usize {
        50 * (self.lp.rows.len() + self.lp.num_vars()).max(1)
    }

    /// Range of `a·x` over the variable box.
    fn activity_range(&self, row: &Row<T>) -> (T, T) {
        let (mut lo, mut hi) = (T::zero(), T::zero());
        for (j, a) in &row.coeffs {
            let p = a.clone() * self.lp.lower[*j].clone();
            let q = a.clone() * self.lp.upper[*j].clone();
            lo = lo + min(p.clone(), q.clone());
            hi = hi + max(p, q);
        }
        (lo, hi)
    }

    /// Adds the row and its logical column; the logical becomes basic.
    fn append_row(&mut self, row: Row<T>) {
        let (amin, amax) = self.activity_range(&row);
        let (slo, shi) = match row.relation {
            Relation::Le => (min(amin, row.rhs.clone()), row.rhs.clone()),
            Relation::Ge => (row.rhs.clone(), max(amax, row.rhs.clone())),
            Relation::Eq => (row.rhs.clone(), row.rhs.clone()),
        };
        let i = self.lp.rows.len();
        let col = self.ncols();
        self.kinds.push(ColumnKind::Logical(i));
        self.lo.push(slo);
        self.hi.push(shi);
        self.cost.push(T::zero());
        self.at_upper.push(false);
        self.row_of.push(Some(self.tableau.len()));
        for r in self.tableau.iter_mut() {
            r.push(T::zero());
        }
        for r in self.original.iter_mut() {
            r.push(T::zero());
        }
        if !self.reduced.is_empty() {
            self.reduced.push(T::zero());
        }
        let mut orig = vec![T::zero(); col + 1];
        for (j, a) in &row.coeffs {
            orig[*j] = orig[*j].clone() - a.clone();
        }
        orig[col] = T::one();
        // express in the current basis
        let mut trow = orig.clone();
        for (j, a) in &row.coeffs {
            if let Some(r) = self.row_of[*j] {
                let f = -a.clone();
                if f.is_zero() {
                    continue;
                }
                for (t, b) in trow.iter_mut().zip(&self.tableau[r]) {
                    if !b.is_zero() {
                        *t = t.clone() - f.clone() * b.clone();
                    }
                }
            }
        }
        // structurals may repeat in `coeffs`; the basic columns must end at zero
        for &b in &self.basis {
            if matches!(self.kinds[b], ColumnKind::Structural) {
                trow[b] = T::zero();
            }
        }
        self.basis.push(col);
        self.tableau.push(trow);
        self.original.push(orig);
        self.value.push(T::zero());
        self.lp.rows.push(row);
    }

    fn add_artificial(&mut self, r: usize, sigma: T, init: T) -> usize {
        let col = self.ncols();
        self.kinds.push(ColumnKind::Artificial(r));
        self.lo.push(T::zero());
        self.hi.push(init);
        self.cost.push(T::zero());
        self.at_upper.push(false);
        self.row_of.push(None);
        self.value.push(T::zero());
        for row in self.tableau.iter_mut() {
            row.push(T::zero());
        }
        for row in self.original.iter_mut() {
            row.push(T::zero());
        }
        self.original[r][col] = sigma.clone();
        self.tableau[r][col] = sigma;
        col
    }

    fn nonbasic_value(&self, j: usize) -> T {
        if self.at_upper[j] {
            self.hi[j].clone()
        } else {
            self.lo[j].clone()
        }
    }

    fn compute_values(&mut self) {
        for j in 0..self.ncols() {
            if self.row_of[j].is_none() {
                self.value[j] = self.nonbasic_value(j);
            }
        }
        for r in 0..self.basis.len() {
            let mut acc = T::zero();
            for (j, t) in self.tableau[r].iter().enumerate() {
                if !t.is_zero() && self.row_of[j].is_none() {
                    acc = acc - t.clone() * self.value[j].clone();
                }
            }
            self.value[self.basis[r]] = acc;
        }
    }

    fn compute_reduced(&mut self, cost: &[T]) {
        let mut d = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (dj, t) in d.iter_mut().zip(&self.tableau[r]) {
                if !t.is_zero() {
                    *dj = dj.clone() - cb.clone() * t.clone();
                }
            }
        }
        self.reduced = d;
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let mut prow = std::mem::take(&mut self.tableau[r]);
        let p = prow[q].clone();
        for t in prow.iter_mut() {
            if !t.is_zero() {
                *t = t.clone() / p.clone();
            }
        }
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.tableau.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                row[j] = row[j].clone() - f.clone() * prow[j].clone();
            }
            row[q] = T::zero();
        }
        let f = self.reduced[q].clone();
        if !f.is_zero() {
            for &j in &nz {
                self.reduced[j] = self.reduced[j].clone() - f.clone() * prow[j].clone();
            }
            self.reduced[q] = T::zero();
        }
        self.tableau[r] = prow;
        let leaving = self.basis[r];
        self.row_of[leaving] = None;
        self.row_of[q] = Some(r);
        self.basis[r] = q;
    }

    fn movable(&self, j: usize) -> bool {
        self.row_of[j].is_none() && self.lo[j] < self.hi[j]
    }

    /// Primal simplex on the given costs from a primal feasible basis.
    fn primal(&mut self, cost: &[T], budget: &mut usize) -> Result<(), LpError> {
        self.compute_reduced(cost);
        self.compute_values();
        let opt_tol = T::optimality_tol();
        let piv_tol = T::pivot_tol();
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            // pricing
            let mut entering: Option<(usize, T)> = None;
            for j in 0..self.ncols() {
                if !self.movable(j) {
                    continue;
                }
                let d = self.reduced[j].clone();
                let attractive = if self.at_upper[j] {
                    d < -opt_tol.clone()
                } else {
                    d > opt_tol.clone()
                };
                if !attractive {
                    continue;
                }
                let score = d.abs();
                match &entering {
                    None => entering = Some((j, score)),
                    Some((_, best)) if !bland && score > *best => entering = Some((j, score)),
                    _ => {}
                }
                if bland {
                    break;
                }
            }
            let Some((q, _)) = entering else {
                return Ok(());
            };
            if *budget == 0 {
                return Err(LpError::IterationLimit(self.iteration_cap()));
            }
            *budget -= 1;
            self.iterations += 1;

            let increasing = !self.at_upper[q];
            // ratio test: (limit, row, |pivot|)
            let mut limit = self.hi[q].clone() - self.lo[q].clone();
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.basis.len() {
                let alpha = self.tableau[r][q].clone();
                if alpha.abs() <= piv_tol {
                    continue;
                }
                let b = self.basis[r];
                let rate = if increasing {
                    -alpha.clone()
                } else {
                    alpha.clone()
                };
                let room = if rate > T::zero() {
                    (self.hi[b].clone() - self.value[b].clone()) / rate
                } else {
                    (self.lo[b].clone() - self.value[b].clone()) / rate
                };
                let room = max(room, T::zero());
                let better = match &leave {
                    _ if room < limit => true,
                    None => false,
                    Some((lr, lalpha)) if room == limit => {
                        if bland {
                            b < self.basis[*lr]
                        } else {
                            alpha.abs() > *lalpha
                        }
                    }
                    _ => false,
                };
                if better {
                    limit = room;
                    leave = Some((r, alpha.abs()));
                }
            }
            if limit.is_zero() {
                degenerate += 1;
                if degenerate > 3 * self.ncols() {
                    bland = true;
                }
            }
            match leave {
                None => self.at_upper[q] = !self.at_upper[q],
                Some((r, _)) => {
                    let b = self.basis[r];
                    let alpha = self.tableau[r][q].clone();
                    let rate = if increasing { -alpha } else { alpha };
                    self.pivot(r, q);
                    self.at_upper[b] = rate > T::zero();
                }
            }
            self.compute_values();
        }
    }

    /// Dual simplex from a dual feasible basis. Returns `false` when the
    /// primal problem is infeasible.
    fn dual(&mut self, budget: &mut usize) -> Result<bool, LpError> {
        self.compute_reduced(&self.cost.clone());
        self.compute_values();
        let feas_tol = T::feasibility_tol();
        let piv_tol = T::pivot_tol();
        let opt_tol = T::optimality_tol();
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.basis.len() {
                let b = self.basis[r];
                let below = self.lo[b].clone() - self.value[b].clone();
                let above = self.value[b].clone() - self.hi[b].clone();
                let infeas = max(below, above);
                if infeas <= feas_tol {
                    continue;
                }
                let better = match &leave {
                    None => true,
                    Some((lr, worst)) => {
                        if bland {
                            b < self.basis[*lr]
                        } else {
                            infeas > *worst
                        }
                    }
                };
                if better {
                    leave = Some((r, infeas));
                }
            }
            let Some((r, _)) = leave else { return Ok(true) };
            if *budget == 0 {
                return Err(LpError::IterationLimit(self.iteration_cap()));
            }
            *budget -= 1;
            self.iterations += 1;

            let b = self.basis[r];
            let raise = self.value[b] < self.lo[b];
            let mut entering: Option<(usize, T, T)> = None;
            for j in 0..self.ncols() {
                if !self.movable(j) {
                    continue;
                }
                let alpha = self.tableau[r][j].clone();
                if alpha.abs() <= piv_tol {
                    continue;
                }
                // moving x_j in its feasible direction must push x_b toward the violated bound
                let eligible = match (raise, self.at_upper[j]) {
                    (true, false) | (false, true) => alpha < T::zero(),
                    (true, true) | (false, false) => alpha > T::zero(),
                };
                if !eligible {
                    continue;
                }
                let ratio = self.reduced[j].abs() / alpha.abs();
                let better = match &entering {
                    None => true,
                    Some((q, best, balpha)) => {
                        if ratio < *best {
                            true
                        } else if ratio == *best {
                            if bland {
                                j < *q
                            } else {
                                alpha.abs() > *balpha
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    entering = Some((j, ratio, alpha.abs()));
                }
            }
            let Some((q, ratio, _)) = entering else {
                return Ok(false);
            };
            if ratio <= opt_tol {
                degenerate += 1;
                if degenerate > 3 * self.ncols() {
                    bland = true;
                }
            }
            self.pivot(r, q);
            self.at_upper[b] = !raise;
            self.compute_values();
        }
    }

    fn dual_feasible(&self) -> bool {
        let tol = T::optimality_tol();
        (0..self.ncols()).all(|j| {
            if !self.movable(j) {
                return true;
            }
            let d = self.reduced[j].clone();
            if self.at_upper[j] {
                d >= -tol.clone()
            } else {
                d <= tol.clone()
            }
        })
    }

    /// Rebuilds `B^-1 M` from the stored rows for the current basic columns.
    fn reinvert(&mut self) -> Result<(), LpError> {
        let m = self.basis.len();
        let mut t = self.original.clone();
        let cols = self.basis.clone();
        let mut placed = vec![false; m];
        let mut new_basis = vec![usize::MAX; m];
        for &c in &cols {
            let pick = (0..m)
                .filter(|&i| !placed[i] && !t[i][c].is_zero())
                .max_by(|&a, &b| t[a][c].abs().partial_cmp(&t[b][c].abs()).unwrap());
            let Some(r) = pick else {
                return Err(LpError::NumericalTrouble);
            };
            let p = t[r][c].clone();
            for x in t[r].iter_mut() {
                *x = x.clone() / p.clone();
            }
            let prow = t[r].clone();
            for (i, row) in t.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x = x.clone() - f.clone() * y.clone();
                    }
                }
            }
            placed[r] = true;
            new_basis[r] = c;
        }
        self.tableau = t;
        self.basis = new_basis;
        for j in 0..self.ncols() {
            self.row_of[j] = None;
        }
        for (r, &c) in self.basis.iter().enumerate() {
            self.row_of[c] = Some(r);
        }
        Ok(())
    }

    /// Cold solve: phase one with artificial columns, then phase two.
    pub fn solve(&mut self) -> Result<LpSolution<T>, LpError> {
        if self.solved {
            return self.cold_restart();
        }
        let mut budget = self.iteration_cap();
        let n = self.lp.num_vars();
        for j in 0..n {
            self.at_upper[j] = false;
        }
        self.compute_values();
        let tol = T::feasibility_tol();
        let mut artificials = Vec::new();
        for r in 0..self.basis.len() {
            let b = self.basis[r];
            let v = self.value[b].clone();
            let (lo, hi) = (self.lo[b].clone(), self.hi[b].clone());
            if v >= lo.clone() - tol.clone() && v <= hi.clone() + tol.clone() {
                continue;
            }
            // park the logical at its violated bound and let an artificial carry the gap
            let (bound, upper) = if v > hi { (hi, true) } else { (lo, false) };
            let gap = v - bound;
            let sigma = if gap > T::zero() { T::one() } else { -T::one() };
            let col = self.add_artificial(r, sigma.clone(), gap.abs());
            self.row_of[b] = None;
            self.at_upper[b] = upper;
            self.row_of[col] = Some(r);
            self.basis[r] = col;
            for x in self.tableau[r].iter_mut() {
                *x = x.clone() / sigma.clone();
            }
            artificials.push(col);
        }
        if !artificials.is_empty() {
            let mut phase_one = vec![T::zero(); self.ncols()];
            for &a in &artificials {
                phase_one[a] = -T::one();
            }
            self.primal(&phase_one, &mut budget)?;
            let residual = artificials
                .iter()
                .fold(T::zero(), |acc, &a| acc + self.value[a].clone());
            if residual > tol {
                self.solved = true;
                return Ok(self.record(LpStatus::Infeasible));
            }
            for &a in &artificials {
                self.hi[a] = T::zero();
                self.at_upper[a] = false;
            }
            self.drive_out_artificials();
        }
        let cost = self.cost.clone();
        self.primal(&cost, &mut budget)?;
        self.solved = true;
        self.finish(&mut budget)
    }

    fn drive_out_artificials(&mut self) {
        let piv_tol = T::pivot_tol();
        for r in 0..self.basis.len() {
            if !matches!(self.kinds[self.basis[r]], ColumnKind::Artificial(_)) {
                continue;
            }
            let q = (0..self.ncols()).find(|&j| {
                self.row_of[j].is_none()
                    && !matches!(self.kinds[j], ColumnKind::Artificial(_))
                    && self.tableau[r][j].abs() > piv_tol
            });
            if let Some(q) = q {
                let a = self.basis[r];
                self.pivot(r, q);
                self.at_upper[a] = false;
            }
        }
        self.compute_values();
    }

    /// Appends `rows` and re-optimizes from the current basis with the dual
    /// simplex. Equivalent to a cold solve of the enlarged program.
    pub fn add_rows_and_resolve(&mut self, rows: &[Row<T>]) -> Result<LpSolution<T>, LpError> {
        for row in rows {
            if row.coeffs.iter().any(|(j, _)| *j >= self.lp.num_vars()) {
                return Err(LpError::DimensionMismatch);
            }
            self.append_row(row.clone());
        }
        if !self.solved {
            return self.solve();
        }
        if matches!(
            self.last,
            Some(LpSolution {
                status: LpStatus::Infeasible,
                ..
            })
        ) {
            return Ok(self.record(LpStatus::Infeasible));
        }
        let mut budget = self.iteration_cap();
        self.compute_reduced(&self.cost.clone());
        if !self.dual_feasible() {
            return self.cold_restart();
        }
        if !self.dual(&mut budget)? {
            return Ok(self.record(LpStatus::Infeasible));
        }
        let cost = self.cost.clone();
        self.primal(&cost, &mut budget)?;
        self.finish(&mut budget)
    }

    fn cold_restart(&mut self) -> Result<LpSolution<T>, LpError> {
        let lp = self.lp.clone();
        let iterations = self.iterations;
        *self = Simplex::new(&lp)?;
        self.iterations = iterations;
        self.solve()
    }

    /// Checks the point against the original rows; on drift, reinverts and
    /// re-optimizes once.
    fn finish(&mut self, budget: &mut usize) -> Result<LpSolution<T>, LpError> {
        self.compute_values();
        let tol = T::feasibility_tol();
        let sol = self.extract(LpStatus::Optimal);
        if self.lp.max_violation(&sol.values) <= tol {
            self.last = Some(sol.clone());
            return Ok(sol);
        }
        self.reinvert()?;
        self.compute_reduced(&self.cost.clone());
        if self.dual_feasible() && !self.dual(budget)? {
            return Ok(self.record(LpStatus::Infeasible));
        }
        let cost = self.cost.clone();
        self.primal(&cost, budget)?;
        let sol = self.extract(LpStatus::Optimal);
        if self.lp.max_violation(&sol.values) <= tol {
            self.last = Some(sol.clone());
            Ok(sol)
        } else {
            Err(LpError::NumericalTrouble)
        }
    }

    fn extract(&self, status: LpStatus) -> LpSolution<T> {
        let n = self.lp.num_vars();
        let values: Vec<T> = (0..n)
            .map(|j| {
                // snap tiny excursions back into the box
                min(
                    max(self.value[j].clone(), self.lp.lower[j].clone()),
                    self.lp.upper[j].clone(),
                )
            })
            .collect();
        let objective_value = self.lp.objective_value(&values);
        LpSolution {
            status,
            values,
            objective_value,
        }
    }

    fn record(&mut self, status: LpStatus) -> LpSolution<T> {
        let sol = match status {
            LpStatus::Optimal => self.extract(status),
            LpStatus::Infeasible => LpSolution {
                status,
                values: vec![T::zero(); self.lp.num_vars()],
                objective_value: T::zero(),
            },
        };
        self.last = Some(sol.clone());
        sol
    }

    pub fn last_solution(&self) -> Option<&LpSolution<T>> {
        self.last.as_ref()
    }
}
