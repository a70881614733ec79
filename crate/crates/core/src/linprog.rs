//! Two-phase primal simplex over a dense tableau, plus the polyhedron and
//! simplex membership predicates the rest of the crate is built on.

use crate::error::{Error, Result};
use crate::numerics::{dot, max_abs, Lu, Matrix, Tolerance};

/// `{x : A x >= b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    a: Matrix,
    b: Vec<f64>,
}

impl Polyhedron {
    pub fn new(a: Matrix, b: Vec<f64>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::Dimension(format!(
                "constraint matrix has {} rows but rhs has {} entries",
                a.rows(),
                b.len()
            )));
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInstance("non-finite right-hand side".into()));
        }
        Ok(Polyhedron { a, b })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn num_constraints(&self) -> usize {
        self.a.rows()
    }

    /// Largest absolute entry of `[A, b]`.
    pub fn scale(&self) -> f64 {
        self.a.max_abs().max(max_abs(&self.b))
    }

    /// `max_j (b_j - a_j . x)`; nonpositive exactly when `x` is inside.
    pub fn worst_violation(&self, x: &[f64]) -> f64 {
        (0..self.num_constraints())
            .map(|j| self.b[j] - dot(self.a.row(j), x))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Result of a point-in-polyhedron test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub inside: bool,
    pub worst_violation: f64,
}

pub fn point_in_polyhedron(p: &Polyhedron, x: &[f64], tol: Tolerance) -> Result<Membership> {
    if x.len() != p.dim() {
        return Err(Error::Dimension(format!(
            "point of dimension {} against polyhedron in R^{}",
            x.len(),
            p.dim()
        )));
    }
    let worst = p.worst_violation(x);
    Ok(Membership {
        inside: worst <= tol.eps(),
        worst_violation: worst,
    })
}

/// A (k-1)-simplex in R^(k-1), stored as its k vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
}

impl Simplex {
    /// Rejects wrong vertex counts, non-finite coordinates and flat simplices.
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let s = Simplex::from_vertices_unchecked(vertices)?;
        s.factor(Tolerance::default())?;
        Ok(s)
    }

    pub(crate) fn from_vertices_unchecked(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let k = vertices.len();
        if k < 2 {
            return Err(Error::Dimension(format!(
                "a simplex needs at least 2 vertices, got {k}"
            )));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != k - 1) {
            return Err(Error::Dimension(format!(
                "{k} vertices must live in R^{}, found one in R^{}",
                k - 1,
                v.len()
            )));
        }
        if vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInstance("non-finite vertex coordinate".into()));
        }
        Ok(Simplex { vertices })
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertices[i]
    }

    pub fn into_vertices(self) -> Vec<Vec<f64>> {
        self.vertices
    }

    /// Vertices as columns with a row of ones appended (k x k).
    pub fn g_matrix(&self) -> Matrix {
        let k = self.vertices.len();
        let mut data = vec![1.0; k * k];
        for (j, v) in self.vertices.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                data[i * k + j] = x;
            }
        }
        Matrix::new(k, k, data).expect("simplex shape validated on construction")
    }

    pub(crate) fn factor(&self, tol: Tolerance) -> Result<Lu> {
        Lu::factor(&self.g_matrix(), tol).map_err(|_| Error::DegenerateSimplex)
    }

    pub fn centroid(&self) -> Vec<f64> {
        let k = self.num_vertices() as f64;
        (0..self.dim())
            .map(|c| self.vertices.iter().map(|v| v[c]).sum::<f64>() / k)
            .collect()
    }
}

/// Coefficients `l` with `G l = [x; 1]`; membership is `l >= -eps`.
pub fn barycentric(t: &Simplex, x: &[f64], tol: Tolerance) -> Result<Vec<f64>> {
    if x.len() != t.dim() {
        return Err(Error::Dimension(format!(
            "point of dimension {} against simplex in R^{}",
            x.len(),
            t.dim()
        )));
    }
    let lu = t.factor(tol)?;
    lu.solve(&homogenize(x))
}

pub(crate) fn homogenize(x: &[f64]) -> Vec<f64> {
    let mut h = x.to_vec();
    h.push(1.0);
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    Free,
    NonNegative,
}

/// minimize `c . x` subject to `G x >= h`, `E x = f` and per-variable sign
/// bounds (free by default).
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    objective: Vec<f64>,
    bounds: Vec<VarBound>,
    ineq_rows: Vec<Vec<f64>>,
    ineq_rhs: Vec<f64>,
    eq_rows: Vec<Vec<f64>>,
    eq_rhs: Vec<f64>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            objective: vec![0.0; num_vars],
            bounds: vec![VarBound::Free; num_vars],
            ineq_rows: Vec::new(),
            ineq_rhs: Vec::new(),
            eq_rows: Vec::new(),
            eq_rhs: Vec::new(),
        }
    }

    /// Feasibility problem over `p` with the given objective.
    pub fn from_polyhedron(p: &Polyhedron, objective: Vec<f64>) -> Result<Self> {
        let mut lp = LpProblem::new(p.dim());
        lp.set_objective(objective)?;
        for j in 0..p.num_constraints() {
            lp.add_ge(p.a().row(j).to_vec(), p.b()[j])?;
        }
        Ok(lp)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn bounds(&self) -> &[VarBound] {
        &self.bounds
    }

    pub fn num_ineq(&self) -> usize {
        self.ineq_rows.len()
    }

    pub fn num_eq(&self) -> usize {
        self.eq_rows.len()
    }

    pub fn set_objective(&mut self, c: Vec<f64>) -> Result<()> {
        self.check_row(&c)?;
        self.objective = c;
        Ok(())
    }

    pub fn set_bound(&mut self, var: usize, bound: VarBound) {
        self.bounds[var] = bound;
    }

    pub fn add_ge(&mut self, row: Vec<f64>, rhs: f64) -> Result<()> {
        self.check_row(&row)?;
        self.ineq_rows.push(row);
        self.ineq_rhs.push(rhs);
        Ok(())
    }

    pub fn add_le(&mut self, row: Vec<f64>, rhs: f64) -> Result<()> {
        self.add_ge(row.into_iter().map(|v| -v).collect(), -rhs)
    }

    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) -> Result<()> {
        self.check_row(&row)?;
        self.eq_rows.push(row);
        self.eq_rhs.push(rhs);
        Ok(())
    }

    fn check_row(&self, row: &[f64]) -> Result<()> {
        if row.len() != self.num_vars() {
            return Err(Error::Dimension(format!(
                "row of length {} in an LP with {} variables",
                row.len(),
                self.num_vars()
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInstance("non-finite LP coefficient".into()));
        }
        Ok(())
    }

    /// Largest constraint violation of `x` (sign bounds included).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let ineq = self
            .ineq_rows
            .iter()
            .zip(&self.ineq_rhs)
            .map(|(r, h)| h - dot(r, x));
        let eq = self
            .eq_rows
            .iter()
            .zip(&self.eq_rhs)
            .map(|(r, f)| (dot(r, x) - f).abs());
        let bounds = self
            .bounds
            .iter()
            .zip(x)
            .filter(|(b, _)| **b == VarBound::NonNegative)
            .map(|(_, v)| -v);
        ineq.chain(eq).chain(bounds).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<f64>,
        value: f64,
    },
    /// `farkas` holds one multiplier per constraint (inequalities first, then
    /// equalities): inequality multipliers are nonnegative, the combined row is
    /// zero on free variables and nonpositive on sign-bounded ones, and the
    /// combined right-hand side is positive.
    Infeasible {
        farkas: Vec<f64>,
    },
    /// A feasible ray along which the objective decreases without bound.
    Unbounded {
        direction: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub pivot_tol: f64,
    pub max_pivots: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            pivot_tol: 1e-11,
            max_pivots: 10_000,
        }
    }
}

impl LpOptions {
    pub fn with_tolerance(tol: Tolerance) -> Self {
        LpOptions {
            feasibility_tol: tol.eps(),
            optimality_tol: tol.eps(),
            ..LpOptions::default()
        }
    }
}

pub fn lp_solve(p: &LpProblem, tol: Tolerance) -> Result<LpOutcome> {
    lp_solve_with(p, &LpOptions::with_tolerance(tol))
}

pub fn lp_solve_with(p: &LpProblem, opts: &LpOptions) -> Result<LpOutcome> {
    Tableau::build(p, opts).solve(p)
}

/// How an original variable maps onto nonnegative tableau columns.
#[derive(Debug, Clone, Copy)]
struct ColumnMap {
    pos: usize,
    neg: Option<usize>,
}

struct Tableau<'o> {
    opts: &'o LpOptions,
    rows: usize,
    /// columns excluding the rhs
    cols: usize,
    width: usize,
    data: Vec<f64>,
    /// reduced costs; `cost[cols]` holds minus the objective value
    cost: Vec<f64>,
    basis: Vec<usize>,
    var_map: Vec<ColumnMap>,
    num_structural: usize,
    first_artificial: usize,
    /// sign applied to each original constraint row
    row_sign: Vec<f64>,
    /// column that is a unit vector in each row at the start (slack or artificial)
    unit_col: Vec<usize>,
    /// original constraint index of each live tableau row
    row_origin: Vec<usize>,
    pivots: usize,
}

impl<'o> Tableau<'o> {
    fn build(p: &LpProblem, opts: &'o LpOptions) -> Self {
        let mut next = 0;
        let var_map: Vec<ColumnMap> = p
            .bounds
            .iter()
            .map(|b| {
                let pos = next;
                next += 1;
                let neg = (*b == VarBound::Free).then(|| {
                    next += 1;
                    next - 1
                });
                ColumnMap { pos, neg }
            })
            .collect();
        let num_structural = next;
        let n_ineq = p.num_ineq();
        let rows = n_ineq + p.num_eq();
        let first_slack = num_structural;
        let first_artificial = first_slack + n_ineq;

        // decide signs and which rows need artificials
        let mut row_sign = Vec::with_capacity(rows);
        let mut needs_artificial = Vec::with_capacity(rows);
        for &h in &p.ineq_rhs {
            // -g.x + s = -h is directly feasible when h <= 0
            if h <= 0.0 {
                row_sign.push(-1.0);
                needs_artificial.push(false);
            } else {
                row_sign.push(1.0);
                needs_artificial.push(true);
            }
        }
        for &f in &p.eq_rhs {
            row_sign.push(if f < 0.0 { -1.0 } else { 1.0 });
            needs_artificial.push(true);
        }
        let num_artificial = needs_artificial.iter().filter(|&&b| b).count();
        let cols = first_artificial + num_artificial;
        let width = cols + 1;
        let mut data = vec![0.0; rows * width];
        let mut basis = vec![0; rows];
        let mut unit_col = vec![0; rows];
        let mut art = first_artificial;
        for r in 0..rows {
            let (coeffs, rhs) = if r < n_ineq {
                (&p.ineq_rows[r], p.ineq_rhs[r])
            } else {
                (&p.eq_rows[r - n_ineq], p.eq_rhs[r - n_ineq])
            };
            let sign = row_sign[r];
            let row = &mut data[r * width..(r + 1) * width];
            for (j, &a) in coeffs.iter().enumerate() {
                let m = var_map[j];
                row[m.pos] = sign * a;
                if let Some(neg) = m.neg {
                    row[neg] = -sign * a;
                }
            }
            if r < n_ineq {
                row[first_slack + r] = -sign;
            }
            row[cols] = sign * rhs;
            if needs_artificial[r] {
                row[art] = 1.0;
                basis[r] = art;
                unit_col[r] = art;
                art += 1;
            } else {
                basis[r] = first_slack + r;
                unit_col[r] = first_slack + r;
            }
        }
        Tableau {
            opts,
            rows,
            cols,
            width,
            data,
            cost: vec![0.0; width],
            basis,
            var_map,
            num_structural,
            first_artificial,
            row_sign,
            unit_col,
            row_origin: (0..rows).collect(),
            pivots: 0,
        }
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.data[r * self.width + self.cols]
    }

    /// Reduced costs for the cost vector `c` (indexed by column) at the
    /// current basis.
    fn price(&mut self, c: &[f64]) {
        let mut cost = vec![0.0; self.width];
        cost[..self.cols].copy_from_slice(&c[..self.cols]);
        for r in 0..self.rows {
            let cb = c[self.basis[r]];
            if cb == 0.0 {
                continue;
            }
            let row = &self.data[r * self.width..(r + 1) * self.width];
            for (o, &a) in cost.iter_mut().zip(row) {
                *o -= cb * a;
            }
        }
        self.cost = cost;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let inv = 1.0 / self.data[r * w + c];
        for v in &mut self.data[r * w..(r + 1) * w] {
            *v *= inv;
        }
        self.data[r * w + c] = 1.0;
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.data[i * w + c];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.data[i * w..(i + 1) * w];
            for (v, &p) in row.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            row[c] = 0.0;
            if row[self.cols] < 0.0 && row[self.cols] > -self.opts.feasibility_tol {
                row[self.cols] = 0.0;
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for (v, &p) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Runs simplex iterations over columns `< limit`. Returns the entering
    /// column of an unbounded ray, if one is found.
    fn optimize(&mut self, limit: usize) -> Result<Option<usize>> {
        let mut degenerate_run = 0usize;
        let mut bland = false;
        let mut is_basic = vec![false; self.cols];
        for &b in &self.basis {
            is_basic[b] = true;
        }
        loop {
            if self.pivots >= self.opts.max_pivots {
                return Err(Error::IterationLimit(self.opts.max_pivots));
            }
            let mut entering = None;
            let mut best = -self.opts.optimality_tol;
            for (j, &basic) in is_basic.iter().enumerate().take(limit) {
                if basic {
                    continue;
                }
                let d = self.cost[j];
                if d < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(c) = entering else {
                return Ok(None);
            };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, c);
                if a <= self.opts.pivot_tol {
                    continue;
                }
                let ratio = self.rhs(r).max(0.0) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        let tie = (ratio - lratio).abs() <= 1e-12 * lratio.abs().max(1.0);
                        let better = if tie {
                            if bland {
                                self.basis[r] < self.basis[lr]
                            } else {
                                a > self.at(lr, c)
                            }
                        } else {
                            ratio < lratio
                        };
                        if better {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
            let Some((r, ratio)) = leave else {
                return Ok(Some(c));
            };
            if ratio <= self.opts.feasibility_tol {
                degenerate_run += 1;
                if degenerate_run > 50 {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
                bland = false;
            }
            is_basic[self.basis[r]] = false;
            is_basic[c] = true;
            self.pivot(r, c);
        }
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.width;
        self.data.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.row_origin.remove(r);
        self.rows -= 1;
    }

    fn solve(mut self, p: &LpProblem) -> Result<LpOutcome> {
        let rhs_scale = (0..self.rows).map(|r| self.rhs(r).abs()).fold(1.0, f64::max);
        if self.first_artificial < self.cols {
            let mut c1 = vec![0.0; self.cols];
            for v in &mut c1[self.first_artificial..] {
                *v = 1.0;
            }
            self.price(&c1);
            self.optimize(self.cols)?;
            let infeasibility = -self.cost[self.cols];
            if infeasibility > self.opts.feasibility_tol * rhs_scale {
                return Ok(LpOutcome::Infeasible {
                    farkas: self.farkas(&c1),
                });
            }
            self.drive_out_artificials();
        }

        let mut c2 = vec![0.0; self.cols];
        for (j, m) in self.var_map.iter().enumerate() {
            c2[m.pos] = p.objective[j];
            if let Some(neg) = m.neg {
                c2[neg] = -p.objective[j];
            }
        }
        self.price(&c2);
        if let Some(c) = self.optimize(self.first_artificial)? {
            let mut dir_std = vec![0.0; self.num_structural];
            if c < self.num_structural {
                dir_std[c] = 1.0;
            }
            for r in 0..self.rows {
                let b = self.basis[r];
                if b < self.num_structural {
                    dir_std[b] = -self.at(r, c);
                }
            }
            return Ok(LpOutcome::Unbounded {
                direction: self.to_original(&dir_std),
            });
        }
        let mut y = vec![0.0; self.num_structural];
        for r in 0..self.rows {
            let b = self.basis[r];
            if b < self.num_structural {
                y[b] = self.rhs(r).max(0.0);
            }
        }
        let x = self.to_original(&y);
        let value = dot(&p.objective, &x);
        Ok(LpOutcome::Optimal { x, value })
    }

    fn farkas(&self, c1: &[f64]) -> Vec<f64> {
        // the dual of row r is c1[u] - d[u] for the column u that started as
        // the unit vector of that row
        self.unit_col
            .iter()
            .enumerate()
            .map(|(r, &u)| self.row_sign[r] * (c1[u] - self.cost[u]))
            .collect()
    }

    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows {
            if self.basis[r] < self.first_artificial {
                r += 1;
                continue;
            }
            let replacement = (0..self.first_artificial)
                .filter(|j| !self.basis.contains(j))
                .max_by(|&a, &b| self.at(r, a).abs().total_cmp(&self.at(r, b).abs()))
                .filter(|&j| self.at(r, j).abs() > self.opts.pivot_tol.max(1e-9));
            match replacement {
                Some(j) => {
                    self.pivot(r, j);
                    r += 1;
                }
                None => self.remove_row(r),
            }
        }
    }

    fn to_original(&self, y: &[f64]) -> Vec<f64> {
        self.var_map
            .iter()
            .map(|m| y[m.pos] - m.neg.map_or(0.0, |n| y[n]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn unit_square() -> Polyhedron {
        let a = Matrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).unwrap();
        Polyhedron::new(a, vec![0.0, -1.0, 0.0, -1.0]).unwrap()
    }

    fn optimal(outcome: LpOutcome) -> (Vec<f64>, f64) {
        match outcome {
            LpOutcome::Optimal { x, value } => (x, value),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn minimize_single_variable() {
        let mut lp = LpProblem::new(1);
        lp.set_objective(vec![1.0]).unwrap();
        lp.add_ge(vec![1.0], 1.0).unwrap();
        let (x, v) = optimal(lp_solve(&lp, tol()).unwrap());
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_bounds_are_infeasible_with_certificate() {
        let mut lp = LpProblem::new(1);
        lp.add_ge(vec![1.0], 1.0).unwrap();
        lp.add_ge(vec![-1.0], 0.0).unwrap();
        match lp_solve(&lp, tol()).unwrap() {
            LpOutcome::Infeasible { farkas } => {
                assert!(farkas.iter().all(|&y| y >= -1e-12));
                let combined = farkas[0] - farkas[1];
                assert!(combined.abs() < 1e-12);
                assert!(farkas[0] * 1.0 + farkas[1] * 0.0 > 0.0);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn triangle_vertex_optimum() {
        // minimize -x - y on x + y <= 1, x, y >= 0: vertices (0,0), (1,0), (0,1)
        let vertices = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let brute = vertices.iter().map(|v| -v[0] - v[1]).fold(f64::INFINITY, f64::min);
        let mut lp = LpProblem::new(2);
        lp.set_objective(vec![-1.0, -1.0]).unwrap();
        lp.add_le(vec![1.0, 1.0], 1.0).unwrap();
        lp.add_ge(vec![1.0, 0.0], 0.0).unwrap();
        lp.add_ge(vec![0.0, 1.0], 0.0).unwrap();
        let (x, v) = optimal(lp_solve(&lp, tol()).unwrap());
        assert!((v - brute).abs() < 1e-12);
        assert!((x[0] + x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_ray_decreases_objective() {
        let mut lp = LpProblem::new(2);
        lp.set_objective(vec![-1.0, 0.0]).unwrap();
        lp.add_ge(vec![0.0, 1.0], 0.0).unwrap();
        lp.add_le(vec![0.0, 1.0], 1.0).unwrap();
        match lp_solve(&lp, tol()).unwrap() {
            LpOutcome::Unbounded { direction } => {
                assert!(direction[0] > 0.0);
                assert!(direction[1].abs() < 1e-12);
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn equalities_and_sign_bounds() {
        // minimize x + 2y s.t. x + y = 3, x <= 2, x, y >= 0 -> x = 2, y = 1
        let mut lp = LpProblem::new(2);
        lp.set_objective(vec![1.0, 2.0]).unwrap();
        lp.set_bound(0, VarBound::NonNegative);
        lp.set_bound(1, VarBound::NonNegative);
        lp.add_eq(vec![1.0, 1.0], 3.0).unwrap();
        lp.add_le(vec![1.0, 0.0], 2.0).unwrap();
        let (x, v) = optimal(lp_solve(&lp, tol()).unwrap());
        assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LpProblem::new(2);
        lp.set_objective(vec![1.0, 1.0]).unwrap();
        lp.add_eq(vec![1.0, -1.0], 0.0).unwrap();
        lp.add_eq(vec![2.0, -2.0], 0.0).unwrap();
        lp.add_ge(vec![1.0, 0.0], 1.0).unwrap();
        let (x, v) = optimal(lp_solve(&lp, tol()).unwrap());
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let mut lp = LpProblem::new(2);
        lp.set_objective(vec![-1.0, -1.0]).unwrap();
        lp.add_le(vec![1.0, 1.0], 1.0).unwrap();
        lp.add_ge(vec![1.0, 0.0], 0.0).unwrap();
        lp.add_ge(vec![0.0, 1.0], 0.0).unwrap();
        let opts = LpOptions {
            max_pivots: 0,
            ..LpOptions::default()
        };
        assert_eq!(lp_solve_with(&lp, &opts), Err(Error::IterationLimit(0)));
    }

    #[test]
    fn membership_examples() {
        let sq = unit_square();
        let m = point_in_polyhedron(&sq, &[0.5, 0.5], tol()).unwrap();
        assert!(m.inside && m.worst_violation <= 0.0);
        let m = point_in_polyhedron(&sq, &[1.5, 0.5], tol()).unwrap();
        assert!(!m.inside);
        assert!((m.worst_violation - 0.5).abs() < 1e-15);
        // boundary point of the two-solution gadget
        let m = point_in_polyhedron(&sq, &[0.0, 0.5], tol()).unwrap();
        assert!(m.inside);
    }

    #[test]
    fn barycentric_examples() {
        let t = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let l = barycentric(&t, &[0.0, 0.0], tol()).unwrap();
        assert!((l[0] - 1.0).abs() < 1e-15 && l[1].abs() < 1e-15 && l[2].abs() < 1e-15);
        let l = barycentric(&t, &[1.0 / 3.0, 1.0 / 3.0], tol()).unwrap();
        assert!(l.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));

        let t0 = Simplex::new(vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.5]]).unwrap();
        let l = barycentric(&t0, &[0.5, 0.25], tol()).unwrap();
        // hand solution of the 3x3 system: (1/2, 0, 1/2)
        assert!((l[0] - 0.5).abs() < 1e-15 && l[1].abs() < 1e-15 && (l[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn flat_simplex_is_rejected() {
        let flat = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(Simplex::new(flat.clone()), Err(Error::DegenerateSimplex));
        let t = Simplex::from_vertices_unchecked(flat).unwrap();
        assert_eq!(barycentric(&t, &[0.0, 0.0], tol()), Err(Error::DegenerateSimplex));
    }
}
