//! The reduction chain EXACT NMF → P1 → RESTRICTED P1 ↔ INTERMEDIATE SIMPLEX.
//!
//! * P1 asks for a nonsingular `Q` with `W0 Q⁻¹ ≥ 0` and `Q H0 ≥ 0` given any
//!   rank factorization `A = W0 H0`.
//! * RESTRICTED P1 additionally fixes the last column of `W0` to ones; the
//!   transcript records the zero rows deleted, the basis change `Q̂` and the
//!   positive row scaling `D` so a restricted solution maps back.
//! * RESTRICTED P1 and INTERMEDIATE SIMPLEX are the same data rearranged:
//!   `S` is the rows of `W0` without the ones column and `P = {x : H0ᵀ[x; 1] ≥ 0}`.
//!   A simplex `T` with vertex matrix `G` corresponds to `Q = Gᵀ`.

use crate::error::{Error, Result};
use crate::linprog::{homogenize, Polyhedron, Simplex};
use crate::numerics::{complete_to_basis, invert, rank, rank_factor, Matrix, Tolerance};
use crate::search::{local_search_from, solve_rank2, SearchConfig, SearchOutcome};

/// Fails with the most negative entry of `m` when it is below `-eps * max(1, |m|)`.
pub fn check_nonnegative(m: &Matrix, name: &'static str, tol: Tolerance) -> Result<()> {
    let (row, col, value) = m.min_entry();
    if value < -tol.hybrid(m.max_abs()) {
        return Err(Error::NegativeEntries {
            matrix: name,
            row,
            col,
            value,
        });
    }
    Ok(())
}

/// A nonnegative matrix together with its (validated) rank.
#[derive(Debug, Clone, PartialEq)]
pub struct NmfInstance {
    a: Matrix,
    k: usize,
}

impl NmfInstance {
    /// Entries within `eps` below zero are clamped to zero; anything more
    /// negative is rejected, as is a rank different from `k`.
    pub fn new(a: Matrix, k: usize, tol: Tolerance) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInstance("k must be at least 1".into()));
        }
        check_nonnegative(&a, "A", tol)?;
        let a = a.map_entries(|v| v.max(0.0));
        let found = rank(&a, tol);
        if found != k {
            return Err(Error::RankMismatch { expected: k, found });
        }
        Ok(NmfInstance { a, k })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Residual and sign summary of a candidate factorization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorReport {
    pub ok: bool,
    /// `‖A − W H‖∞` (max-abs entry)
    pub residual: f64,
    pub min_w: f64,
    pub min_h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    pub w: Matrix,
    pub h: Matrix,
}

impl FactorPair {
    /// Checks `W, H ≥ −eps` and `‖A − WH‖∞ ≤ eps·‖A‖∞`.
    pub fn verify(&self, a: &Matrix, tol: Tolerance) -> Result<FactorReport> {
        let product = self.w.matmul(&self.h)?;
        let residual = a.sub(&product)?.max_abs();
        let min_w = self.w.min_entry().2;
        let min_h = self.h.min_entry().2;
        let ok = residual <= tol.relative(a.max_abs())
            && min_w >= -tol.hybrid(self.w.max_abs())
            && min_h >= -tol.hybrid(self.h.max_abs());
        Ok(FactorReport {
            ok,
            residual,
            min_w,
            min_h,
        })
    }
}

/// Full-rank factors whose product is entrywise nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct P1Instance {
    w0: Matrix,
    h0: Matrix,
}

impl P1Instance {
    pub fn new(w0: Matrix, h0: Matrix, tol: Tolerance) -> Result<Self> {
        let k = w0.cols();
        if h0.rows() != k {
            return Err(Error::Dimension(format!(
                "W0 has {k} columns but H0 has {} rows",
                h0.rows()
            )));
        }
        for (m, name) in [(&w0, "W0"), (&h0, "H0")] {
            let found = rank(m, tol);
            if found != k {
                return Err(Error::InvalidInstance(format!(
                    "{name} has rank {found}, expected {k}"
                )));
            }
        }
        check_nonnegative(&w0.matmul(&h0)?, "W0*H0", tol)?;
        Ok(P1Instance { w0, h0 })
    }

    pub fn w0(&self) -> &Matrix {
        &self.w0
    }

    pub fn h0(&self) -> &Matrix {
        &self.h0
    }

    pub fn k(&self) -> usize {
        self.w0.cols()
    }
}

/// A P1 instance whose `W0` ends in a column of ones.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedP1Instance {
    inner: P1Instance,
}

impl RestrictedP1Instance {
    pub fn new(w0: Matrix, h0: Matrix, tol: Tolerance) -> Result<Self> {
        let inner = P1Instance::new(w0, h0, tol)?;
        let last = inner.k() - 1;
        for i in 0..inner.w0.rows() {
            let v = inner.w0[(i, last)];
            if (v - 1.0).abs() > tol.eps() {
                return Err(Error::InvalidInstance(format!(
                    "W0[{i}, {last}] = {v} but the last column must be all ones"
                )));
            }
        }
        Ok(RestrictedP1Instance { inner })
    }

    pub fn w0(&self) -> &Matrix {
        &self.inner.w0
    }

    pub fn h0(&self) -> &Matrix {
        &self.inner.h0
    }

    pub fn k(&self) -> usize {
        self.inner.k()
    }

    pub fn as_p1(&self) -> &P1Instance {
        &self.inner
    }
}

/// A polyhedron `P ⊂ R^(k-1)` and points `S ⊂ P` that affinely span it.
#[derive(Debug, Clone, PartialEq)]
pub struct IntermediateSimplexInstance {
    polyhedron: Polyhedron,
    points: Vec<Vec<f64>>,
}

impl IntermediateSimplexInstance {
    pub fn new(polyhedron: Polyhedron, points: Vec<Vec<f64>>, tol: Tolerance) -> Result<Self> {
        let inst = IntermediateSimplexInstance::new_unchecked(polyhedron, points)?;
        inst.validate(tol)?;
        Ok(inst)
    }

    /// Shape checks only; the side constraints are not verified.
    pub fn new_unchecked(polyhedron: Polyhedron, points: Vec<Vec<f64>>) -> Result<Self> {
        let d = polyhedron.dim();
        if points.is_empty() {
            return Err(Error::InvalidInstance("empty point set".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::Dimension(format!(
                "point of dimension {} in an instance over R^{d}",
                p.len()
            )));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInstance("non-finite point coordinate".into()));
        }
        Ok(IntermediateSimplexInstance { polyhedron, points })
    }

    /// `[A, b]` has rank k, `S ⊂ P` and `S` affinely spans `R^(k-1)`.
    pub fn validate(&self, tol: Tolerance) -> Result<()> {
        let k = self.dim() + 1;
        let augmented: Vec<Vec<f64>> = (0..self.polyhedron.num_constraints())
            .map(|j| {
                let mut r = self.polyhedron.a().row(j).to_vec();
                r.push(self.polyhedron.b()[j]);
                r
            })
            .collect();
        let found = rank(&Matrix::from_rows(&augmented)?, tol);
        if found != k {
            return Err(Error::InvalidInstance(format!(
                "[A, b] has rank {found}, expected {k}"
            )));
        }
        let threshold = self.violation_threshold(tol);
        for (i, s) in self.points.iter().enumerate() {
            let v = self.polyhedron.worst_violation(s);
            if v > threshold {
                return Err(Error::InvalidInstance(format!(
                    "point {i} lies outside P (violation {v:e})"
                )));
            }
        }
        let lifted: Vec<Vec<f64>> = self.points.iter().map(|s| homogenize(s)).collect();
        if rank(&Matrix::from_rows(&lifted)?, tol) != k {
            return Err(Error::DegenerateSpan);
        }
        Ok(())
    }

    /// Allowed violation of `A x ≥ b` for points and vertices of this instance.
    pub fn violation_threshold(&self, tol: Tolerance) -> f64 {
        tol.hybrid(self.polyhedron.scale())
    }

    pub fn polyhedron(&self) -> &Polyhedron {
        &self.polyhedron
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Ambient dimension `k - 1`.
    pub fn dim(&self) -> usize {
        self.polyhedron.dim()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_facets(&self) -> usize {
        self.polyhedron.num_constraints()
    }
}

/// Everything needed to carry a RESTRICTED P1 solution back to the P1 instance
/// it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTranscript {
    pub deleted_rows: Vec<usize>,
    pub qhat: Matrix,
    /// `Q̂⁻¹`, the basis completion of `H0 e`
    pub qhat_inv: Matrix,
    /// one positive scaling per kept row
    pub d_diag: Vec<f64>,
    pub original: P1Instance,
}

impl ReductionTranscript {
    pub fn kept_rows(&self) -> Vec<usize> {
        (0..self.original.w0.rows())
            .filter(|i| !self.deleted_rows.contains(i))
            .collect()
    }
}

pub fn nmf_to_p1(inst: &NmfInstance, tol: Tolerance) -> Result<P1Instance> {
    let (w0, h0) = rank_factor(&inst.a, inst.k, tol)?;
    Ok(P1Instance { w0, h0 })
}

/// `(W0 Q⁻¹, Q H0)`, rejected when either factor has a negative entry.
pub fn p1_solution_to_nmf(inst: &P1Instance, q: &Matrix, tol: Tolerance) -> Result<FactorPair> {
    let q_inv = invert(q, tol)?;
    let w = inst.w0.matmul(&q_inv)?;
    let h = q.matmul(&inst.h0)?;
    check_nonnegative(&w, "W0*Q^-1", tol)?;
    check_nonnegative(&h, "Q*H0", tol)?;
    Ok(FactorPair { w, h })
}

pub fn p1_to_restricted(
    inst: &P1Instance,
    tol: Tolerance,
) -> Result<(RestrictedP1Instance, ReductionTranscript)> {
    let k = inst.k();
    let zero_threshold = tol.relative(inst.w0.max_abs());
    let (kept, deleted): (Vec<usize>, Vec<usize>) = (0..inst.w0.rows())
        .partition(|&i| inst.w0.row(i).iter().any(|v| v.abs() > zero_threshold));
    let w_kept = inst.w0.select_rows(&kept)?;

    let row_sums: Vec<f64> = (0..k).map(|i| inst.h0.row(i).iter().sum()).collect();
    let qhat_inv = complete_to_basis(&row_sums)?;
    let qhat = invert(&qhat_inv, tol)?;

    let w1 = w_kept.matmul(&qhat_inv)?;
    let h1 = qhat.matmul(&inst.h0)?;
    let last: Vec<f64> = w1.col(k - 1);
    let last_scale = last.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut d_diag = Vec::with_capacity(last.len());
    for (r, &v) in last.iter().enumerate() {
        if v <= tol.relative(last_scale) || v <= 0.0 {
            return Err(Error::DegenerateRow {
                row: kept[r],
                value: v,
            });
        }
        d_diag.push(1.0 / v);
    }
    let mut w2 = w1.scale_rows(&d_diag)?;
    for r in 0..w2.rows() {
        w2.set(r, k - 1, 1.0);
    }
    let restricted = RestrictedP1Instance {
        inner: P1Instance { w0: w2, h0: h1 },
    };
    let transcript = ReductionTranscript {
        deleted_rows: deleted,
        qhat,
        qhat_inv,
        d_diag,
        original: inst.clone(),
    };
    Ok((restricted, transcript))
}

/// `Q = Q' Q̂`, checked against the original P1 instance.
pub fn restricted_solution_to_p1(
    transcript: &ReductionTranscript,
    q_prime: &Matrix,
    tol: Tolerance,
) -> Result<Matrix> {
    let q = q_prime.matmul(&transcript.qhat)?;
    p1_solution_to_nmf(&transcript.original, &q, tol)?;
    Ok(q)
}

pub fn restricted_to_simplex(inst: &RestrictedP1Instance) -> Result<IntermediateSimplexInstance> {
    let k = inst.k();
    if k < 2 {
        return Err(Error::ZeroDimensional);
    }
    let h0 = inst.h0();
    let head: Vec<usize> = (0..k - 1).collect();
    let a = h0.select_rows(&head)?.transpose();
    let b: Vec<f64> = h0.row(k - 1).iter().map(|v| -v).collect();
    let points = (0..inst.w0().rows())
        .map(|i| inst.w0().row(i)[..k - 1].to_vec())
        .collect();
    IntermediateSimplexInstance::new_unchecked(Polyhedron::new(a, b)?, points)
}

pub fn simplex_to_restricted(inst: &IntermediateSimplexInstance) -> Result<RestrictedP1Instance> {
    let w0 = Matrix::from_rows(&inst.points.iter().map(|s| homogenize(s)).collect::<Vec<_>>())?;
    let p = &inst.polyhedron;
    let mut rows: Vec<Vec<f64>> = (0..p.dim()).map(|c| p.a().col(c)).collect();
    rows.push(p.b().iter().map(|v| -v).collect());
    let h0 = Matrix::from_rows(&rows)?;
    Ok(RestrictedP1Instance {
        inner: P1Instance { w0, h0 },
    })
}

/// `Q = Gᵀ`.
pub fn simplex_solution_to_q(t: &Simplex) -> Result<Matrix> {
    t.factor(Tolerance::default())?;
    Ok(t.g_matrix().transpose())
}

/// Vertices are the rows of `Q` without their last entry, which must be one.
pub fn q_to_simplex_solution(q: &Matrix, tol: Tolerance) -> Result<Simplex> {
    let k = q.rows();
    if !q.is_square() || k < 2 {
        return Err(Error::Dimension(format!(
            "Q must be square of order at least 2, got {:?}",
            q.shape()
        )));
    }
    for i in 0..k {
        let v = q[(i, k - 1)];
        if (v - 1.0).abs() > tol.eps() {
            return Err(Error::NotNormalized { row: i, value: v });
        }
    }
    invert(q, tol)?;
    let vertices = (0..k).map(|i| q.row(i)[..k - 1].to_vec()).collect();
    Simplex::new(vertices)
}

/// Transports a known nonnegative `H` (with `A = W H` for some `W ≥ 0`) into a
/// solution simplex of the restricted instance described by `transcript`.
pub fn simplex_from_factor_hint(
    transcript: &ReductionTranscript,
    h_hint: &Matrix,
    tol: Tolerance,
) -> Result<Simplex> {
    let h0 = &transcript.original.h0;
    if h_hint.shape() != h0.shape() {
        return Err(Error::Dimension(format!(
            "hint H is {:?}, expected {:?}",
            h_hint.shape(),
            h0.shape()
        )));
    }
    // Q = H H0ᵀ (H0 H0ᵀ)⁻¹ solves Q H0 = H when the hint is consistent
    let h0t = h0.transpose();
    let gram_inv = invert(&h0.matmul(&h0t)?, tol)?;
    let q = h_hint.matmul(&h0t)?.matmul(&gram_inv)?;
    let q_prime = q.matmul(&transcript.qhat_inv)?;
    let k = q_prime.rows();
    let last = q_prime.col(k - 1);
    let mut scale = Vec::with_capacity(k);
    for (i, &v) in last.iter().enumerate() {
        if v <= 0.0 {
            return Err(Error::InvalidInstance(format!(
                "hint row {i} of H has nonpositive sum {v:e}"
            )));
        }
        scale.push(1.0 / v);
    }
    let mut normalized = q_prime.scale_rows(&scale)?;
    for i in 0..k {
        normalized.set(i, k - 1, 1.0);
    }
    q_to_simplex_solution(&normalized, tol)
}

#[derive(Debug, Clone, Default)]
pub struct SolveConfig {
    pub tol: Tolerance,
    pub search: SearchConfig,
    /// a candidate nonnegative `H` used to seed the simplex search
    pub warm_start: Option<Matrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NmfOutcome {
    Factorization(FactorPair),
    /// The local search stalled. This says nothing about whether a
    /// factorization exists.
    NoSolutionFound { vertex_infeasibility: Vec<f64> },
}

pub fn solve_exact_nmf(inst: &NmfInstance, config: &SolveConfig) -> Result<NmfOutcome> {
    let tol = config.tol;
    if inst.k == 1 {
        return Ok(NmfOutcome::Factorization(rank_one_factors(&inst.a)?));
    }
    let p1 = nmf_to_p1(inst, tol)?;
    let (restricted, transcript) = p1_to_restricted(&p1, tol)?;
    let is = restricted_to_simplex(&restricted)?;
    let t = if is.dim() == 1 {
        solve_rank2(&is, tol)?
    } else {
        let start = match &config.warm_start {
            Some(h) => Some(simplex_from_factor_hint(&transcript, h, tol)?),
            None => None,
        };
        match local_search_from(&is, start, &config.search)? {
            SearchOutcome::Solved(t) => t,
            SearchOutcome::Stalled {
                vertex_infeasibility,
                ..
            } => return Ok(NmfOutcome::NoSolutionFound { vertex_infeasibility }),
        }
    };
    let q_prime = simplex_solution_to_q(&t)?;
    let q = restricted_solution_to_p1(&transcript, &q_prime, tol)?;
    let mut pair = p1_solution_to_nmf(&p1, &q, tol)?;
    for &r in &transcript.deleted_rows {
        for c in 0..pair.w.cols() {
            pair.w.set(r, c, 0.0);
        }
    }
    let report = pair.verify(&inst.a, tol)?;
    if !report.ok {
        return Err(Error::VerificationFailed(format!(
            "residual {:e}, smallest entries {:e} in W and {:e} in H",
            report.residual, report.min_w, report.min_h
        )));
    }
    Ok(NmfOutcome::Factorization(pair))
}

/// `W` = the largest column of `A`, `H` = each column's ratio to it.
fn rank_one_factors(a: &Matrix) -> Result<FactorPair> {
    let (pr, pc, _) = (0..a.rows())
        .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, a[(i, j)]))
        .fold((0, 0, f64::NEG_INFINITY), |acc, x| if x.2 > acc.2 { x } else { acc });
    let pivot = a[(pr, pc)];
    if pivot <= 0.0 {
        return Err(Error::RankMismatch {
            expected: 1,
            found: 0,
        });
    }
    let w = Matrix::new(a.rows(), 1, a.col(pc))?;
    let h = Matrix::new(1, a.cols(), a.row(pr).iter().map(|v| v / pivot).collect())?;
    Ok(FactorPair { w, h })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn square_instance() -> IntermediateSimplexInstance {
        let a = Matrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).unwrap();
        let p = Polyhedron::new(a, vec![0.0, -1.0, 0.0, -1.0]).unwrap();
        let s = vec![
            vec![0.0, 0.5],
            vec![1.0, 0.5],
            vec![0.5, 0.25],
            vec![0.5, 0.75],
        ];
        IntermediateSimplexInstance::new(p, s, tol()).unwrap()
    }

    #[test]
    fn nmf_instance_validation() {
        let a = Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(NmfInstance::new(a.clone(), 1, tol()).is_ok());
        assert_eq!(
            NmfInstance::new(a, 2, tol()),
            Err(Error::RankMismatch {
                expected: 2,
                found: 1
            })
        );
        let neg = Matrix::from_rows(&[[1.0, -0.5], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            NmfInstance::new(neg, 2, tol()),
            Err(Error::NegativeEntries { row: 0, col: 1, .. })
        ));
        let tiny = Matrix::from_rows(&[[1.0, -1e-12], [0.0, 1.0]]).unwrap();
        let inst = NmfInstance::new(tiny, 2, tol()).unwrap();
        assert_eq!(inst.a()[(0, 1)], 0.0);
    }

    #[test]
    fn identity_and_ones_reduce_to_p1() {
        let id = NmfInstance::new(Matrix::identity(2).unwrap(), 2, tol()).unwrap();
        let p1 = nmf_to_p1(&id, tol()).unwrap();
        let prod = p1.w0().matmul(p1.h0()).unwrap();
        assert!(prod.sub(id.a()).unwrap().max_abs() < 1e-15);

        let ones = NmfInstance::new(Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap(), 1, tol())
            .unwrap();
        let p1 = nmf_to_p1(&ones, tol()).unwrap();
        assert_eq!((p1.w0().shape(), p1.h0().shape()), ((2, 1), (1, 2)));
    }

    #[test]
    fn p1_solution_transport_identity_and_permutation() {
        let w0 = Matrix::from_rows(&[[1.0, 0.0], [2.0, 1.0], [0.0, 3.0]]).unwrap();
        let h0 = Matrix::from_rows(&[[1.0, 0.0, 2.0], [0.0, 1.0, 1.0]]).unwrap();
        let p1 = P1Instance::new(w0.clone(), h0.clone(), tol()).unwrap();
        let pair = p1_solution_to_nmf(&p1, &Matrix::identity(2).unwrap(), tol()).unwrap();
        assert_eq!(pair.w, w0);
        assert_eq!(pair.h, h0);

        let perm = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let pair = p1_solution_to_nmf(&p1, &perm, tol()).unwrap();
        assert_eq!(pair.w.col(0), w0.col(1));
        assert_eq!(pair.h.row(0), h0.row(1));
        assert!(pair.verify(&w0.matmul(&h0).unwrap(), tol()).unwrap().ok);

        let bad = Matrix::from_rows(&[[1.0, -1.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(
            p1_solution_to_nmf(&p1, &bad, tol()),
            Err(Error::NegativeEntries { .. })
        ));
        let singular = Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert_eq!(p1_solution_to_nmf(&p1, &singular, tol()), Err(Error::Singular));
    }

    #[test]
    fn already_restricted_instance_is_a_fixed_point() {
        // last column of W0 all ones and H0 e = e_k
        let w0 = Matrix::from_rows(&[[0.0, 1.0], [1.0, 1.0], [0.5, 1.0]]).unwrap();
        let h0 = Matrix::from_rows(&[[1.0, -1.0], [0.0, 1.0]]).unwrap();
        let p1 = P1Instance::new(w0.clone(), h0.clone(), tol()).unwrap();
        let (r, t) = p1_to_restricted(&p1, tol()).unwrap();
        assert_eq!(r.w0(), &w0);
        assert_eq!(r.h0(), &h0);
        assert_eq!(t.qhat, Matrix::identity(2).unwrap());
        assert_eq!(t.d_diag, vec![1.0; 3]);
        assert!(t.deleted_rows.is_empty());
    }

    #[test]
    fn zero_rows_are_deleted_and_recorded() {
        let w0 = Matrix::from_rows(&[[1.0, 0.0], [0.0, 0.0], [0.0, 2.0]]).unwrap();
        let h0 = Matrix::from_rows(&[[1.0, 2.0], [3.0, 1.0]]).unwrap();
        let p1 = P1Instance::new(w0, h0, tol()).unwrap();
        let (r, t) = p1_to_restricted(&p1, tol()).unwrap();
        assert_eq!(t.deleted_rows, vec![1]);
        assert_eq!(t.kept_rows(), vec![0, 2]);
        assert_eq!(r.w0().rows(), 2);
        assert!(r.w0().col(1).iter().all(|&v| v == 1.0));
        check_nonnegative(&r.w0().matmul(r.h0()).unwrap(), "product", tol()).unwrap();
    }

    #[test]
    fn square_instance_through_restricted_form() {
        // W0 = [x_i, 1] rows, H0 = [Aᵀ; -bᵀ] of the unit square
        let inst = square_instance();
        let r = simplex_to_restricted(&inst).unwrap();
        let expected_w0 = Matrix::from_rows(&[
            [0.0, 0.5, 1.0],
            [1.0, 0.5, 1.0],
            [0.5, 0.25, 1.0],
            [0.5, 0.75, 1.0],
        ])
        .unwrap();
        let expected_h0 = Matrix::from_rows(&[
            [1.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, -1.0],
            [0.0, 1.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(r.w0(), &expected_w0);
        assert_eq!(r.h0(), &expected_h0);
        RestrictedP1Instance::new(r.w0().clone(), r.h0().clone(), tol()).unwrap();
        assert_eq!(restricted_to_simplex(&r).unwrap(), inst);
    }

    #[test]
    fn one_dimensional_restricted_instance_is_rejected() {
        let r = RestrictedP1Instance {
            inner: P1Instance {
                w0: Matrix::from_rows(&[[1.0], [1.0]]).unwrap(),
                h0: Matrix::from_rows(&[[1.0, 2.0]]).unwrap(),
            },
        };
        assert_eq!(restricted_to_simplex(&r), Err(Error::ZeroDimensional));
    }

    #[test]
    fn q_round_trip_and_standard_corners() {
        let t = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let q = simplex_solution_to_q(&t).unwrap();
        assert_eq!(
            q,
            Matrix::from_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]]).unwrap()
        );
        assert_eq!(q_to_simplex_solution(&q, tol()).unwrap(), t);

        let bad = Matrix::from_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 2.0], [0.0, 1.0, 1.0]]).unwrap();
        assert_eq!(
            q_to_simplex_solution(&bad, tol()),
            Err(Error::NotNormalized { row: 1, value: 2.0 })
        );
    }

    #[test]
    fn square_solution_transports_to_nonnegative_factors() {
        let inst = square_instance();
        let r = simplex_to_restricted(&inst).unwrap();
        let t0 = Simplex::new(vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.5]]).unwrap();
        let q = simplex_solution_to_q(&t0).unwrap();
        let pair = p1_solution_to_nmf(r.as_p1(), &q, tol()).unwrap();
        assert!(pair.w.min_entry().2 >= -1e-15);
        assert!(pair.h.min_entry().2 >= -1e-15);
    }

    #[test]
    fn rank_one_short_circuit() {
        let a = Matrix::outer(&[1.0, 0.0, 3.0], &[2.0, 0.5, 4.0]).unwrap();
        let inst = NmfInstance::new(a.clone(), 1, tol()).unwrap();
        match solve_exact_nmf(&inst, &SolveConfig::default()).unwrap() {
            NmfOutcome::Factorization(pair) => {
                let report = pair.verify(&a, tol()).unwrap();
                assert!(report.ok, "{report:?}");
            }
            other => panic!("{other:?}"),
        }
    }
}
