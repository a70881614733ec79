//! Solvers for INTERMEDIATE SIMPLEX: the one-dimensional interval case and a
//! round-robin local search that moves one vertex at a time by linear
//! programming.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linprog::{homogenize, lp_solve, LpOutcome, LpProblem, Simplex, VarBound};
use crate::numerics::{dot, invert, null_vector, Lu, Matrix, Tolerance};
use crate::reductions::IntermediateSimplexInstance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub max_sweeps: usize,
    /// a vertex counts as inside P once its worst violation is below this
    pub infeasibility_tol: f64,
    pub stall_sweeps: usize,
    pub init_margin: f64,
    pub rng_seed: u64,
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_sweeps: 200,
            infeasibility_tol: 1e-8,
            stall_sweeps: 5,
            init_margin: 2.0,
            rng_seed: 0,
            restarts: 3,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<Tolerance> {
        if self.max_sweeps == 0
            || self.stall_sweeps == 0
            || !(self.init_margin > 0.0 && self.init_margin.is_finite())
            || self.infeasibility_tol.is_nan()
            || self.infeasibility_tol <= 0.0
        {
            return Err(Error::InvalidInstance(format!(
                "search parameters must be positive: {self:?}"
            )));
        }
        Tolerance::new(self.infeasibility_tol)
    }
}

pub fn solve_rank2(inst: &IntermediateSimplexInstance, tol: Tolerance) -> Result<Simplex> {
    if inst.dim() != 1 {
        return Err(Error::Dimension(format!(
            "interval solver needs a one-dimensional instance, got dimension {}",
            inst.dim()
        )));
    }
    let p = inst.polyhedron();
    let threshold = tol.hybrid(p.scale());
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for j in 0..p.num_constraints() {
        let (a, b) = (p.a()[(j, 0)], p.b()[j]);
        if a.abs() <= tol.relative(p.scale()) {
            if b > threshold {
                return Err(Error::EmptyPolyhedron);
            }
        } else if a > 0.0 {
            lo = lo.max(b / a);
        } else {
            hi = hi.min(b / a);
        }
    }
    if lo > hi + threshold {
        return Err(Error::EmptyPolyhedron);
    }
    let xs = inst.points().iter().map(|s| s[0]);
    if lo == f64::NEG_INFINITY {
        lo = xs.clone().fold(f64::INFINITY, f64::min);
    }
    if hi == f64::INFINITY {
        hi = xs.fold(f64::NEG_INFINITY, f64::max);
    }
    Simplex::new(vec![vec![lo], vec![hi]])
}

/// A large simplex strictly containing `points`: a corner below their bounding
/// box plus one far vertex along each axis.
pub fn initial_simplex(points: &[Vec<f64>], margin: f64) -> Result<Simplex> {
    let d = points.first().map_or(0, Vec::len);
    if d == 0 || points.len() < d + 1 {
        return Err(Error::DegenerateSpan);
    }
    let lifted: Vec<Vec<f64>> = points.iter().map(|p| homogenize(p)).collect();
    if crate::numerics::rank(&Matrix::from_rows(&lifted)?, Tolerance::default()) != d + 1 {
        return Err(Error::DegenerateSpan);
    }
    let lo: Vec<f64> = (0..d)
        .map(|c| points.iter().map(|p| p[c]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..d)
        .map(|c| points.iter().map(|p| p[c]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let diagonal = lo
        .iter()
        .zip(&hi)
        .map(|(l, u)| (u - l) * (u - l))
        .sum::<f64>()
        .sqrt();
    let delta = margin * (diagonal + 1.0);
    let corner: Vec<f64> = lo.iter().map(|l| l - delta).collect();
    let reach = hi
        .iter()
        .zip(&corner)
        .map(|(u, v)| u - v)
        .fold(0.0, f64::max);
    let m = d as f64 * reach + delta;
    let mut vertices = vec![corner.clone()];
    for i in 0..d {
        let mut v = corner.clone();
        v[i] += m;
        vertices.push(v);
    }
    Simplex::new(vertices)
}

/// The linear system whose solutions project onto the positions of one free
/// vertex that keep every point covered and the vertex inside P.
///
/// Variables are the free vertex (free sign) followed, per point, by the
/// coefficients of the fixed vertices and the reciprocal weight of the free
/// one (all nonnegative). A point `x` is covered when
/// `Σ c_i f_i + v = w x` and `Σ c_i + 1 = w`. Points already in the hull of
/// the fixed vertices get the placeholder system `c = 0, w = 0` instead.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFeasibleRegion {
    dim: usize,
    num_vars: usize,
    equalities: Vec<(Vec<(usize, f64)>, f64)>,
    facet_rows: Vec<(Vec<f64>, f64)>,
    sign_vars: Vec<usize>,
    vacuous_points: Vec<usize>,
}

impl VertexFeasibleRegion {
    pub fn num_equalities(&self) -> usize {
        self.equalities.len()
    }

    pub fn num_inequalities(&self) -> usize {
        self.facet_rows.len() + self.sign_vars.len()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Points that impose no constraint on the free vertex.
    pub fn vacuous_points(&self) -> &[usize] {
        &self.vacuous_points
    }

    /// The region as an LP with `extra` trailing free variables and a zero
    /// objective.
    fn to_lp(&self, extra: usize) -> Result<LpProblem> {
        let n = self.num_vars + extra;
        let mut lp = LpProblem::new(n);
        for &v in &self.sign_vars {
            lp.set_bound(v, VarBound::NonNegative);
        }
        for (entries, rhs) in &self.equalities {
            let mut row = vec![0.0; n];
            for &(j, a) in entries {
                row[j] += a;
            }
            lp.add_eq(row, *rhs)?;
        }
        Ok(lp)
    }

    fn facet_row(&self, j: usize, n: usize) -> Vec<f64> {
        let mut row = vec![0.0; n];
        row[..self.dim].copy_from_slice(&self.facet_rows[j].0);
        row
    }

    /// Whether the free vertex may sit at `v`, decided by LP feasibility.
    pub fn contains(&self, v: &[f64], tol: Tolerance) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vertex of dimension {} for a region over R^{}",
                v.len(),
                self.dim
            )));
        }
        let mut lp = self.to_lp(0)?;
        for j in 0..self.facet_rows.len() {
            lp.add_ge(self.facet_row(j, self.num_vars), self.facet_rows[j].1 - tol.eps())?;
        }
        for (c, &x) in v.iter().enumerate() {
            let mut row = vec![0.0; self.num_vars];
            row[c] = 1.0;
            lp.add_eq(row, x)?;
        }
        Ok(matches!(lp_solve(&lp, tol)?, LpOutcome::Optimal { .. }))
    }
}

pub fn feasible_region_last_vertex(
    inst: &IntermediateSimplexInstance,
    fixed: &[Vec<f64>],
    tol: Tolerance,
) -> Result<VertexFeasibleRegion> {
    let d = inst.dim();
    let k = d + 1;
    if fixed.len() != d || fixed.iter().any(|f| f.len() != d) {
        return Err(Error::Dimension(format!(
            "expected {d} fixed vertices in R^{d}"
        )));
    }
    let probe = facet_probe(fixed, tol)?;
    let num_vars = d + inst.num_points() * k;
    let mut equalities = Vec::with_capacity(inst.num_points() * k);
    let mut sign_vars = Vec::with_capacity(inst.num_points() * k);
    let mut vacuous_points = Vec::new();
    let slack = point_slack(inst, fixed, tol);
    for (j, x) in inst.points().iter().enumerate() {
        let base = d + j * k;
        let weight = base + d;
        sign_vars.extend(base..base + k);
        let coords = probe.solve(&homogenize(x))?;
        if is_vacuous(&coords, slack) {
            vacuous_points.push(j);
            for v in base..base + k {
                equalities.push((vec![(v, 1.0)], 0.0));
            }
            continue;
        }
        for c in 0..d {
            let mut row: Vec<(usize, f64)> = fixed
                .iter()
                .enumerate()
                .map(|(i, f)| (base + i, f[c]))
                .collect();
            row.push((c, 1.0));
            row.push((weight, -x[c]));
            equalities.push((row, 0.0));
        }
        let mut row: Vec<(usize, f64)> = (base..weight).map(|v| (v, 1.0)).collect();
        row.push((weight, -1.0));
        equalities.push((row, -1.0));
    }
    let p = inst.polyhedron();
    let facet_rows = (0..p.num_constraints())
        .map(|j| (p.a().row(j).to_vec(), p.b()[j]))
        .collect();
    Ok(VertexFeasibleRegion {
        dim: d,
        num_vars,
        equalities,
        facet_rows,
        sign_vars,
        vacuous_points,
    })
}

/// Factors the simplex made of the fixed vertices plus one point off their
/// hyperplane along its normal: the last barycentric coordinate of a point
/// is then its offset from that hyperplane.
fn facet_probe(fixed: &[Vec<f64>], tol: Tolerance) -> Result<Lu> {
    let d = fixed.len();
    let edges: Vec<Vec<f64>> = fixed[1..]
        .iter()
        .map(|f| f.iter().zip(&fixed[0]).map(|(a, b)| a - b).collect())
        .collect();
    let normal = null_vector(&edges, d, tol).ok_or(Error::DegenerateSimplex)?;
    let norm = dot(&normal, &normal).sqrt();
    let mut vertices = fixed.to_vec();
    vertices.push(fixed[0].iter().zip(&normal).map(|(a, n)| a + n / norm).collect());
    Simplex::from_vertices_unchecked(vertices)?.factor(tol)
}

/// The same positions as `feasible_region_last_vertex`, with the per-point
/// coefficients eliminated: `x` is covered exactly when `v - x` lies in the
/// cone spanned by the `x - f_i`, which gives `d` inequalities on `v` alone
/// per point.
fn coverage_cones(
    inst: &IntermediateSimplexInstance,
    fixed: &[Vec<f64>],
    tol: Tolerance,
) -> Result<Vec<(Vec<f64>, f64)>> {
    let d = inst.dim();
    let probe = facet_probe(fixed, tol)?;
    let slack = point_slack(inst, fixed, tol);
    let mut rows = Vec::with_capacity(inst.num_points() * d);
    for x in inst.points() {
        let coords = probe.solve(&homogenize(x))?;
        if is_vacuous(&coords, slack) {
            continue;
        }
        let generators: Vec<Vec<f64>> = fixed
            .iter()
            .map(|f| x.iter().zip(f).map(|(a, b)| a - b).collect())
            .collect();
        let inverse = invert(&Matrix::from_cols(&generators)?, tol)
            .map_err(|_| Error::CoverageInfeasible)?;
        for i in 0..d {
            let r = inverse.row(i);
            let norm = dot(r, r).sqrt();
            let row: Vec<f64> = r.iter().map(|v| v / norm).collect();
            let rhs = dot(&row, x);
            rows.push((row, rhs));
        }
    }
    Ok(rows)
}

fn point_slack(inst: &IntermediateSimplexInstance, fixed: &[Vec<f64>], tol: Tolerance) -> f64 {
    let scale = inst
        .points()
        .iter()
        .flatten()
        .chain(fixed.iter().flatten())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    tol.hybrid(scale)
}

/// On the fixed facet's hyperplane and inside the facet.
fn is_vacuous(probe_coords: &[f64], slack: f64) -> bool {
    let (last, rest) = probe_coords.split_last().expect("probe has k coordinates");
    last.abs() <= slack && rest.iter().all(|&c| c >= -slack)
}

/// LP over the free vertex (plus a trailing violation slack when `relaxed`)
/// with the P rows and the coverage cones of `fixed`.
fn placement_lp(
    inst: &IntermediateSimplexInstance,
    fixed: &[Vec<f64>],
    tol: Tolerance,
    relaxed: bool,
) -> Result<LpProblem> {
    let d = inst.dim();
    let n = d + usize::from(relaxed);
    let mut lp = LpProblem::new(n);
    if relaxed {
        lp.set_bound(d, VarBound::NonNegative);
    }
    let p = inst.polyhedron();
    for j in 0..p.num_constraints() {
        let mut row = p.a().row(j).to_vec();
        row.resize(n, 1.0);
        lp.add_ge(row, p.b()[j])?;
    }
    for (mut row, rhs) in coverage_cones(inst, fixed, tol)? {
        row.resize(n, 0.0);
        lp.add_ge(row, rhs)?;
    }
    Ok(lp)
}

/// Moves a vertex that is already inside P as far from its opposite facet as
/// P and coverage allow. `None` when that distance is unbounded.
fn expand_vertex(
    inst: &IntermediateSimplexInstance,
    t: &Simplex,
    index: usize,
    tol: Tolerance,
) -> Result<Option<Vec<f64>>> {
    let current = t.vertex(index);
    let fixed: Vec<Vec<f64>> = (0..t.num_vertices())
        .filter(|&i| i != index)
        .map(|i| t.vertex(i).to_vec())
        .collect();
    let mut lp = placement_lp(inst, &fixed, tol, false)?;
    let normal = outward_normal(&fixed, current, tol)?;
    lp.set_objective(normal.iter().map(|v| -v).collect())?;
    match lp_solve(&lp, tol)? {
        LpOutcome::Optimal { x, .. } if dot(&normal, &x) > dot(&normal, current) => Ok(Some(x)),
        _ => Ok(None),
    }
}

/// Vertex `index` moved to the position that minimizes its worst violation of
/// P while every point stays covered, together with that violation.
///
/// A vertex already inside P stays where it is. Among positions with the
/// optimal violation, the one farthest from the opposite facet is taken, so
/// the other vertices gain room.
pub fn reposition_vertex(
    inst: &IntermediateSimplexInstance,
    t: &Simplex,
    index: usize,
    tol: Tolerance,
) -> Result<(Vec<f64>, f64)> {
    let current = t.vertex(index).to_vec();
    let current_t = inst.polyhedron().worst_violation(&current).max(0.0);
    if current_t <= inst.violation_threshold(tol) {
        return Ok((current, current_t));
    }
    let fixed: Vec<Vec<f64>> = (0..t.num_vertices())
        .filter(|&i| i != index)
        .map(|i| t.vertex(i).to_vec())
        .collect();
    let d = inst.dim();
    let slack_var = d;
    let mut lp = placement_lp(inst, &fixed, tol, true)?;
    let p = inst.polyhedron();
    let mut objective = vec![0.0; d + 1];
    objective[slack_var] = 1.0;
    lp.set_objective(objective)?;
    let (x, best_t) = match lp_solve(&lp, tol)? {
        LpOutcome::Optimal { x, value } => (x, value.max(0.0)),
        LpOutcome::Infeasible { .. } => return Err(Error::CoverageInfeasible),
        LpOutcome::Unbounded { .. } => unreachable!("the slack objective is bounded below"),
    };
    if best_t >= current_t {
        return Ok((current, current_t));
    }
    let mut best = x[..d].to_vec();

    // push away from the opposite facet without giving up any feasibility
    let normal = outward_normal(&fixed, &current, tol)?;
    let mut cap = vec![0.0; d + 1];
    cap[slack_var] = -1.0;
    lp.add_ge(cap, -best_t)?;
    let mut objective: Vec<f64> = normal.iter().map(|v| -v).collect();
    objective.push(0.0);
    lp.set_objective(objective)?;
    if let Ok(LpOutcome::Optimal { x, .. }) = lp_solve(&lp, tol) {
        let pushed_t = p.worst_violation(&x[..d]).max(0.0);
        if pushed_t <= best_t.max(tol.eps() * 1e-3) {
            best = x[..d].to_vec();
        }
    }
    let t_new = p.worst_violation(&best).max(0.0);
    Ok((best, t_new))
}

/// Unit normal of the hyperplane through `fixed`, oriented towards `side`.
fn outward_normal(fixed: &[Vec<f64>], side: &[f64], tol: Tolerance) -> Result<Vec<f64>> {
    let edges: Vec<Vec<f64>> = fixed[1..]
        .iter()
        .map(|f| f.iter().zip(&fixed[0]).map(|(a, b)| a - b).collect())
        .collect();
    let mut normal = null_vector(&edges, side.len(), tol).ok_or(Error::DegenerateSimplex)?;
    let offset: Vec<f64> = side.iter().zip(&fixed[0]).map(|(a, b)| a - b).collect();
    if dot(&normal, &offset) < 0.0 {
        normal.iter_mut().for_each(|v| *v = -*v);
    }
    let norm = dot(&normal, &normal).sqrt();
    Ok(normal.into_iter().map(|v| v / norm).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Solved(Simplex),
    /// Best simplex seen and the violation of P at each of its vertices.
    Stalled {
        simplex: Simplex,
        vertex_infeasibility: Vec<f64>,
    },
}

pub fn local_search(inst: &IntermediateSimplexInstance, config: &SearchConfig) -> Result<SearchOutcome> {
    local_search_from(inst, None, config)
}

pub fn local_search_from(
    inst: &IntermediateSimplexInstance,
    start: Option<Simplex>,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    local_search_with_progress(inst, start, config, &mut |_, _| {})
}

/// `progress` receives the sweep index (counted across restarts) and the total
/// vertex infeasibility after that sweep.
pub fn local_search_with_progress(
    inst: &IntermediateSimplexInstance,
    start: Option<Simplex>,
    config: &SearchConfig,
    progress: &mut dyn FnMut(usize, f64),
) -> Result<SearchOutcome> {
    let tol = config.validate()?;
    if inst.dim() == 1 {
        return solve_rank2(inst, tol).map(SearchOutcome::Solved);
    }
    if let Some(s) = &start {
        if s.dim() != inst.dim() {
            return Err(Error::Dimension(format!(
                "starting simplex lives in R^{} but the instance in R^{}",
                s.dim(),
                inst.dim()
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut best: Option<(Simplex, Vec<f64>)> = None;
    let mut sweep_counter = 0;
    for attempt in 0..=config.restarts {
        let initial = match (attempt, &start) {
            (0, Some(s)) => s.clone(),
            (0, None) => initial_simplex(inst.points(), config.init_margin)?,
            _ => rotated_initial_simplex(inst.points(), config.init_margin, &mut rng)?,
        };
        if best.is_none() {
            let infeas = vertex_infeasibility(inst, &initial);
            best = Some((initial.clone(), infeas));
        }
        let run = run_sweeps(inst, initial, config, tol, &mut |infeas| {
            progress(sweep_counter, infeas);
            sweep_counter += 1;
        });
        match run {
            Ok(SearchOutcome::Solved(t)) => return Ok(SearchOutcome::Solved(t)),
            Ok(SearchOutcome::Stalled {
                simplex,
                vertex_infeasibility,
            }) => {
                let total: f64 = vertex_infeasibility.iter().sum();
                let better = best
                    .as_ref()
                    .is_none_or(|(_, v)| total <= v.iter().sum::<f64>());
                if better {
                    best = Some((simplex, vertex_infeasibility));
                }
            }
            Err(Error::CoverageInfeasible | Error::DegenerateSimplex | Error::IterationLimit(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let (simplex, vertex_infeasibility) = best.expect("at least one attempt runs");
    Ok(SearchOutcome::Stalled {
        simplex,
        vertex_infeasibility,
    })
}

fn vertex_infeasibility(inst: &IntermediateSimplexInstance, t: &Simplex) -> Vec<f64> {
    t.vertices()
        .iter()
        .map(|v| inst.polyhedron().worst_violation(v).max(0.0))
        .collect()
}

fn run_sweeps(
    inst: &IntermediateSimplexInstance,
    initial: Simplex,
    config: &SearchConfig,
    tol: Tolerance,
    on_sweep: &mut dyn FnMut(f64),
) -> Result<SearchOutcome> {
    let threshold = inst.violation_threshold(tol);
    let mut t = initial;
    let mut infeas = vertex_infeasibility(inst, &t);
    let mut last_total: f64 = infeas.iter().sum();
    let mut idle = 0;
    for _ in 0..config.max_sweeps {
        for index in 0..t.num_vertices() {
            if infeas[index] <= threshold {
                continue;
            }
            let (v, vt) = reposition_vertex(inst, &t, index, tol)?;
            let mut vertices = t.vertices().to_vec();
            vertices[index] = v;
            t = Simplex::new(vertices)?;
            infeas[index] = vt;
        }
        // still stuck: give the infeasible vertices room for the next sweep
        if infeas.iter().any(|&v| v > threshold) {
            for index in 0..t.num_vertices() {
                if infeas[index] > threshold {
                    continue;
                }
                if let Some(v) = expand_vertex(inst, &t, index, tol)? {
                    let mut vertices = t.vertices().to_vec();
                    vertices[index] = v;
                    if let Ok(moved) = Simplex::new(vertices) {
                        t = moved;
                        infeas[index] = inst.polyhedron().worst_violation(t.vertex(index)).max(0.0);
                    }
                }
            }
        }
        let total: f64 = infeas.iter().sum();
        on_sweep(total);
        if infeas.iter().all(|&v| v <= threshold) {
            if verify_solution(inst, &t, tol)?.ok {
                return Ok(SearchOutcome::Solved(t));
            }
            break;
        }
        if last_total - total > threshold {
            idle = 0;
        } else {
            idle += 1;
            if idle >= config.stall_sweeps {
                break;
            }
        }
        last_total = total;
    }
    Ok(SearchOutcome::Stalled {
        vertex_infeasibility: vertex_infeasibility(inst, &t),
        simplex: t,
    })
}

/// `initial_simplex` built in a random orthonormal frame.
fn rotated_initial_simplex(
    points: &[Vec<f64>],
    margin: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Simplex> {
    let d = points[0].len();
    let frame = random_orthonormal(d, rng);
    let rotated: Vec<Vec<f64>> = points
        .iter()
        .map(|p| frame.iter().map(|r| dot(r, p)).collect())
        .collect();
    let t = initial_simplex(&rotated, margin)?;
    let back = t
        .vertices()
        .iter()
        .map(|v| (0..d).map(|c| frame.iter().zip(v).map(|(r, x)| r[c] * x).sum()).collect())
        .collect();
    Simplex::new(back)
}

fn random_orthonormal(d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    while basis.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        for b in &basis {
            let proj = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= proj * y);
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub ok: bool,
    /// largest negative barycentric coefficient over all points, negated
    pub worst_s_violation: f64,
    /// index of the point attaining `worst_s_violation`
    pub worst_point: usize,
    pub worst_p_violation: f64,
    pub worst_vertex: usize,
}

/// Checks `S ⊂ T` through barycentric coordinates and `T ⊂ P` through the
/// vertices.
pub fn verify_solution(
    inst: &IntermediateSimplexInstance,
    t: &Simplex,
    tol: Tolerance,
) -> Result<VerifyReport> {
    if t.dim() != inst.dim() {
        return Err(Error::Dimension(format!(
            "simplex lives in R^{} but the instance in R^{}",
            t.dim(),
            inst.dim()
        )));
    }
    let lu = t.factor(tol)?;
    let (mut worst_s, mut worst_point) = (f64::NEG_INFINITY, 0);
    let mut rhs = vec![1.0; inst.dim() + 1];
    for (j, x) in inst.points().iter().enumerate() {
        rhs[..x.len()].copy_from_slice(x);
        let coords = lu.solve(&rhs)?;
        let v = coords.iter().fold(f64::NEG_INFINITY, |m, c| m.max(-c));
        if v > worst_s {
            (worst_s, worst_point) = (v, j);
        }
    }
    let (mut worst_p, mut worst_vertex) = (f64::NEG_INFINITY, 0);
    for (i, v) in t.vertices().iter().enumerate() {
        let viol = inst.polyhedron().worst_violation(v);
        if viol > worst_p {
            (worst_p, worst_vertex) = (viol, i);
        }
    }
    Ok(VerifyReport {
        ok: worst_s <= tol.eps() && worst_p <= inst.violation_threshold(tol),
        worst_s_violation: worst_s,
        worst_point,
        worst_p_violation: worst_p,
        worst_vertex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linprog::{barycentric, Polyhedron};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn unit_square() -> Polyhedron {
        let a = Matrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).unwrap();
        Polyhedron::new(a, vec![0.0, -1.0, 0.0, -1.0]).unwrap()
    }

    fn square_instance() -> IntermediateSimplexInstance {
        let s = vec![
            vec![0.0, 0.5],
            vec![1.0, 0.5],
            vec![0.5, 0.25],
            vec![0.5, 0.75],
        ];
        IntermediateSimplexInstance::new(unit_square(), s, tol()).unwrap()
    }

    fn t0() -> Simplex {
        Simplex::new(vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.5]]).unwrap()
    }

    fn t1() -> Simplex {
        Simplex::new(vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.5]]).unwrap()
    }

    fn interval(a: &[f64], b: &[f64], s: &[f64]) -> IntermediateSimplexInstance {
        let p = Polyhedron::new(Matrix::from_cols(&[a]).unwrap(), b.to_vec()).unwrap();
        let pts = s.iter().map(|&x| vec![x]).collect();
        IntermediateSimplexInstance::new_unchecked(p, pts).unwrap()
    }

    /// Same vertex set up to ordering, within `eps`.
    fn same_vertex_set(a: &Simplex, b: &Simplex, eps: f64) -> bool {
        a.vertices().iter().all(|v| {
            b.vertices()
                .iter()
                .any(|w| v.iter().zip(w).all(|(x, y)| (x - y).abs() <= eps))
        })
    }

    #[test]
    fn bounded_interval_is_p_itself() {
        let inst = interval(&[1.0, -1.0], &[0.0, -1.0], &[0.2, 0.7]);
        inst.validate(tol()).unwrap();
        let t = solve_rank2(&inst, tol()).unwrap();
        assert_eq!(t.vertices(), &[vec![0.0], vec![1.0]]);
    }

    #[test]
    fn unbounded_side_clamps_to_points() {
        // x >= 0 alone has rank-deficient [A, b]; the shape-only constructor
        // still admits it, and a redundant lower bound restores the rank
        let bare = interval(&[1.0], &[0.0], &[1.0, 3.0]);
        assert_eq!(solve_rank2(&bare, tol()).unwrap().vertices(), &[vec![0.0], vec![3.0]]);
        let padded = interval(&[1.0, 1.0], &[0.0, -1.0], &[1.0, 3.0]);
        padded.validate(tol()).unwrap();
        assert_eq!(solve_rank2(&padded, tol()).unwrap().vertices(), &[vec![0.0], vec![3.0]]);
    }

    #[test]
    fn contradictory_interval_is_empty() {
        let inst = interval(&[1.0, -1.0], &[2.0, -1.0], &[1.5]);
        assert_eq!(solve_rank2(&inst, tol()), Err(Error::EmptyPolyhedron));
    }

    #[test]
    fn initial_simplex_contains_points_strictly() {
        let cases = vec![
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![1e-3, 0.0], vec![0.0, 2e-3], vec![-1e-3, -1e-3]],
            square_instance().points().to_vec(),
        ];
        for pts in cases {
            let t = initial_simplex(&pts, 2.0).unwrap();
            for p in &pts {
                let l = barycentric(&t, p, tol()).unwrap();
                assert!(l.iter().all(|&c| c > 1e-3), "{l:?}");
            }
        }
        assert_eq!(
            initial_simplex(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]], 2.0),
            Err(Error::DegenerateSpan)
        );
    }

    #[test]
    fn region_counts_and_known_vertex() {
        let inst = square_instance();
        let region =
            feasible_region_last_vertex(&inst, &[vec![0.0, 0.0], vec![0.0, 1.0]], tol()).unwrap();
        assert_eq!(region.num_equalities(), 12);
        assert_eq!(region.num_inequalities(), 16);
        assert_eq!(region.vacuous_points(), &[0]);
        assert!(region.contains(&[1.0, 0.5], tol()).unwrap());
        // too short to reach (1, 1/2), and outside P
        assert!(!region.contains(&[0.9, 0.5], tol()).unwrap());
        assert!(!region.contains(&[1.2, 0.5], tol()).unwrap());
    }

    #[test]
    fn region_matches_direct_containment() {
        let inst = square_instance();
        let fixed = vec![vec![0.0, 0.0], vec![0.0, 1.0]];
        let region = feasible_region_last_vertex(&inst, &fixed, tol()).unwrap();
        for i in 0..=20 {
            for j in 0..=20 {
                let v = vec![i as f64 * 0.075 - 0.25, j as f64 * 0.075 - 0.25];
                let Ok(t) = Simplex::new(vec![fixed[0].clone(), fixed[1].clone(), v.clone()]) else {
                    continue;
                };
                let direct = verify_solution(&inst, &t, tol()).unwrap().ok;
                assert_eq!(region.contains(&v, tol()).unwrap(), direct, "{v:?}");
            }
        }
    }

    #[test]
    fn eliminated_cones_agree_with_lifted_region() {
        let inst = square_instance();
        for fixed in [
            vec![vec![0.0, 0.0], vec![0.0, 1.0]],
            vec![vec![1.0, 1.0], vec![0.0, 0.5]],
            vec![vec![-0.5, -0.5], vec![1.5, -0.5]],
        ] {
            let region = feasible_region_last_vertex(&inst, &fixed, tol()).unwrap();
            let cones = coverage_cones(&inst, &fixed, tol()).unwrap();
            for i in 0..=20 {
                for j in 0..=20 {
                    let v = [i as f64 * 0.075 - 0.25, j as f64 * 0.075 - 0.25];
                    let covered = cones.iter().all(|(row, rhs)| dot(row, &v) >= rhs - 1e-9);
                    let inside = inst.polyhedron().worst_violation(&v) <= 1e-9;
                    assert_eq!(region.contains(&v, tol()).unwrap(), covered && inside, "{fixed:?} {v:?}");
                }
            }
        }
    }

    #[test]
    fn expansion_stays_feasible_and_moves_outward() {
        let inst = square_instance();
        let t = Simplex::new(vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.4, 0.5]]).unwrap();
        for index in 0..2 {
            let Some(v) = expand_vertex(&inst, &t, index, tol()).unwrap() else {
                continue;
            };
            assert!(inst.polyhedron().worst_violation(&v) <= 1e-9);
            let mut verts = t.vertices().to_vec();
            let fixed: Vec<Vec<f64>> = (0..3).filter(|&i| i != index).map(|i| verts[i].clone()).collect();
            let normal = outward_normal(&fixed, t.vertex(index), tol()).unwrap();
            let before = dot(&normal, t.vertex(index));
            assert!(dot(&normal, &v) >= before - 1e-12);
            verts[index] = v;
            let moved = Simplex::new(verts).unwrap();
            let report = verify_solution(&inst, &moved, tol()).unwrap();
            assert!(report.worst_s_violation <= 1e-9);
        }
    }

    #[test]
    fn reposition_is_a_fixed_point_on_solutions() {
        let inst = square_instance();
        for t in [t0(), t1()] {
            for i in 0..3 {
                let (v, vt) = reposition_vertex(&inst, &t, i, tol()).unwrap();
                assert_eq!(v, t.vertex(i));
                assert!(vt <= 1e-9);
            }
        }
    }

    #[test]
    fn reposition_pulls_perturbed_vertex_back() {
        let inst = square_instance();
        let t = Simplex::new(vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.2, 0.5]]).unwrap();
        let (v, vt) = reposition_vertex(&inst, &t, 2, tol()).unwrap();
        assert!(vt <= 1e-9);
        let moved = Simplex::new(vec![vec![0.0, 0.0], vec![0.0, 1.0], v]).unwrap();
        assert!(verify_solution(&inst, &moved, tol()).unwrap().ok);
    }

    #[test]
    fn first_reposition_of_initial_simplex_improves() {
        let inst = square_instance();
        let t = initial_simplex(inst.points(), 2.0).unwrap();
        let before = inst.polyhedron().worst_violation(t.vertex(0));
        let (_, after) = reposition_vertex(&inst, &t, 0, tol()).unwrap();
        assert!(after < before, "{after} vs {before}");
    }

    #[test]
    fn local_search_finds_a_square_solution() {
        let inst = square_instance();
        match local_search(&inst, &SearchConfig::default()).unwrap() {
            SearchOutcome::Solved(t) => {
                assert!(
                    same_vertex_set(&t, &t0(), 1e-7) || same_vertex_set(&t, &t1(), 1e-7),
                    "{t:?}"
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn one_dimensional_search_delegates() {
        let inst = interval(&[1.0, -1.0], &[0.0, -1.0], &[0.2, 0.7]);
        assert_eq!(
            local_search(&inst, &SearchConfig::default()).unwrap(),
            SearchOutcome::Solved(solve_rank2(&inst, tol()).unwrap())
        );
    }

    #[test]
    fn verification_examples() {
        let inst = square_instance();
        assert!(verify_solution(&inst, &t0(), tol()).unwrap().ok);
        let corner = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let report = verify_solution(&inst, &corner, tol()).unwrap();
        assert!(!report.ok);
        assert!(report.worst_s_violation > 0.1);
        assert!([1, 3].contains(&report.worst_point));

        // a big enough P admits the initial simplex as is
        let t = initial_simplex(inst.points(), 2.0).unwrap();
        let wide = Polyhedron::new(unit_square().a().clone(), vec![-100.0; 4]).unwrap();
        let roomy =
            IntermediateSimplexInstance::new(wide, inst.points().to_vec(), tol()).unwrap();
        assert!(verify_solution(&roomy, &t, tol()).unwrap().ok);
    }
}
