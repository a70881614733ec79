//! Oracles and generators shared by the integration suites.
//!
//! The linear algebra here is deliberately naive and independent of the
//! library's elimination code, so agreement between the two means something.

#![allow(dead_code)]

use exact_nmf::reductions::{nmf_to_p1, p1_to_restricted, restricted_to_simplex, IntermediateSimplexInstance, NmfInstance, ReductionTranscript, RestrictedP1Instance};
use exact_nmf::{Matrix, Simplex, Tolerance};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn tol() -> Tolerance {
    Tolerance::default()
}

/// Gauss-Jordan with partial pivoting on a copy of `a`. `None` when a pivot
/// falls below `1e-12` times the largest entry.
pub fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let mut aug: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &r)| {
            let mut row = row.clone();
            row.push(r);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| aug[x][col].abs().total_cmp(&aug[y][col].abs()))?;
        if aug[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        aug.swap(col, piv);
        let p = aug[col][col];
        for v in aug[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let f = aug[r][col];
                if f != 0.0 {
                    let pivot_row = aug[col].clone();
                    for (dst, src) in aug[r].iter_mut().zip(&pivot_row).skip(col) {
                        *dst -= f * src;
                    }
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n]).collect())
}

pub fn gauss_inverse(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let cols: Option<Vec<Vec<f64>>> = (0..n)
        .map(|j| {
            let e: Vec<f64> = (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
            gauss_solve(a, &e)
        })
        .collect();
    let cols = cols?;
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

pub fn to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn naive_matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|l| row[l] * b[l][j]).sum()).collect())
        .collect()
}

/// Weights `λ` with `Σ λ_i v_i = x`, `Σ λ_i = 1`.
pub fn barycentric_oracle(vertices: &[Vec<f64>], x: &[f64]) -> Option<Vec<f64>> {
    let k = vertices.len();
    let mut a = vec![vec![0.0; k]; k];
    for (i, v) in vertices.iter().enumerate() {
        for (r, &c) in v.iter().enumerate() {
            a[r][i] = c;
        }
        a[k - 1][i] = 1.0;
    }
    let mut rhs = x.to_vec();
    rhs.push(1.0);
    gauss_solve(&a, &rhs)
}

/// Containment checked from scratch: every point has weights `≥ −eps` and
/// every vertex violates no facet by more than the instance threshold.
pub fn simplex_solves(inst: &IntermediateSimplexInstance, t: &Simplex, tol: Tolerance) -> bool {
    let p = inst.polyhedron();
    let threshold = inst.violation_threshold(tol);
    let covered = inst.points().iter().all(|x| {
        barycentric_oracle(t.vertices(), x).is_some_and(|w| w.iter().all(|&c| c >= -tol.eps()))
    });
    let inside = t.vertices().iter().all(|v| {
        (0..p.num_constraints()).all(|j| {
            let lhs: f64 = p.a().row(j).iter().zip(v).map(|(a, x)| a * x).sum();
            lhs - p.b()[j] >= -threshold
        })
    });
    covered && inside
}

/// `‖A − WH‖∞ ≤ rel·‖A‖∞` with `W, H ≥ −eps` scaled, all recomputed here.
pub fn factorization_holds(a: &Matrix, w: &Matrix, h: &Matrix, rel: f64, tol: Tolerance) -> bool {
    let prod = naive_matmul(&to_rows(w), &to_rows(h));
    let a_rows = to_rows(a);
    let a_max = a_rows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let residual = a_rows
        .iter()
        .flatten()
        .zip(prod.iter().flatten())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let nonneg = |m: &Matrix| {
        let s = m.max_abs().max(1.0);
        m.as_slice().iter().all(|&v| v >= -tol.eps() * s)
    };
    residual <= rel * a_max && nonneg(w) && nonneg(h)
}

/// Nonnegative matrix with roughly `zero_frac` of its entries set to zero.
pub fn random_nonneg(rng: &mut ChaCha8Rng, rows: usize, cols: usize, zero_frac: f64) -> Matrix {
    let data = (0..rows * cols)
        .map(|_| if rng.random::<f64>() < zero_frac { 0.0 } else { rng.random_range(0.1..1.0) })
        .collect();
    Matrix::new(rows, cols, data).expect("finite entries")
}

/// A seeded exact-NMF instance of rank `k` together with its generating
/// factors. Draws until the product has rank exactly `k`.
pub fn random_nmf(rng: &mut ChaCha8Rng, m: usize, n: usize, k: usize, zero_frac: f64) -> (NmfInstance, Matrix, Matrix) {
    assert!(k <= m.min(n), "rank {k} impossible for a {m}x{n} matrix");
    loop {
        let w = random_nonneg(rng, m, k, zero_frac);
        let h = random_nonneg(rng, k, n, zero_frac);
        let a = w.matmul(&h).expect("conformable");
        if let Ok(inst) = NmfInstance::new(a, k, tol()) {
            return (inst, w, h);
        }
    }
}

/// Reduces a random rank-`k` instance all the way to the simplex form,
/// skipping draws the reduction rejects.
pub fn random_chain(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    k: usize,
) -> (NmfInstance, Matrix, RestrictedP1Instance, ReductionTranscript, IntermediateSimplexInstance) {
    loop {
        let (inst, _, h) = random_nmf(rng, m, n, k, 0.3);
        let Ok(p1) = nmf_to_p1(&inst, tol()) else { continue };
        let Ok((restricted, transcript)) = p1_to_restricted(&p1, tol()) else { continue };
        let Ok(is) = restricted_to_simplex(&restricted) else { continue };
        return (inst, h, restricted, transcript, is);
    }
}
