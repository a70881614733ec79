//! Dense real matrices and tolerance-aware Gaussian elimination.
//!
//! Every elimination routine here treats a pivot as zero when its magnitude is
//! at most `eps` times the largest absolute entry of the operand, so results
//! are invariant under uniform rescaling of the input.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

/// Absolute comparison threshold, applied relative to the scale of an operand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::InvalidTolerance(eps));
        }
        Ok(Tolerance { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `eps * scale`: a purely relative threshold.
    pub fn relative(&self, scale: f64) -> f64 {
        self.eps * scale
    }

    /// `eps * max(1, scale)`: absolute near unit scale, relative above it.
    pub fn hybrid(&self, scale: f64) -> f64 {
        self.eps * scale.max(1.0)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps: Self::DEFAULT_EPS,
        }
    }
}

/// Dense row-major matrix with finite entries and nonzero shape.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Matrix::new(rows.len(), cols, data)
    }

    pub fn from_cols<C: AsRef<[f64]>>(cols: &[C]) -> Result<Self> {
        Ok(Matrix::from_rows(cols)?.transpose())
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Matrix::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Matrix::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        Ok(m)
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut m = Matrix::zeros(n, n)?;
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        Matrix::new(n, n, m.data)
    }

    pub fn outer(u: &[f64], v: &[f64]) -> Result<Self> {
        let data = u
            .iter()
            .flat_map(|&a| v.iter().map(move |&b| a * b))
            .collect();
        Matrix::new(u.len(), v.len(), data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j]);
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = vec![0.0; self.rows * other.cols];
        for i in 0..self.rows {
            let out = &mut data[i * other.cols..(i + 1) * other.cols];
            for (l, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out.iter_mut().zip(other.row(l)) {
                    *o += a * b;
                }
            }
        }
        Matrix::new(self.rows, other.cols, data)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "cannot subtract {:?} from {:?}",
                other.shape(),
                self.shape()
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix::new(self.rows, self.cols, data)
    }

    pub fn scale_rows(&self, factors: &[f64]) -> Result<Matrix> {
        if factors.len() != self.rows {
            return Err(Error::Dimension("row scaling length".into()));
        }
        let mut data = self.data.clone();
        for (i, &f) in factors.iter().enumerate() {
            for v in &mut data[i * self.cols..(i + 1) * self.cols] {
                *v *= f;
            }
        }
        Matrix::new(self.rows, self.cols, data)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<Matrix> {
        let rows: Vec<&[f64]> = idx.iter().map(|&i| self.row(i)).collect();
        Matrix::from_rows(&rows)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Result<Matrix> {
        let cols: Vec<Vec<f64>> = idx.iter().map(|&j| self.col(j)).collect();
        Matrix::from_cols(&cols)
    }

    /// Largest absolute entry (the operand "scale").
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_entry(&self) -> (usize, usize, f64) {
        let (pos, v) = self
            .data
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (p, v)| if v < acc.1 { (p, v) } else { acc });
        (pos / self.cols, pos % self.cols, v)
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(v.is_finite());
        self.data[i * self.cols + j] = v;
    }

    pub(crate) fn map_entries(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl Matrix {
    /// Text form: a line `m n`, then one line per row, entries with 17
    /// significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            out.push_str(&format_row(self.row(i)));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Matrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let dims = parse_counts(header, 2)?;
        let (m, n) = (dims[0], dims[1]);
        let mut data = Vec::with_capacity(m * n);
        for i in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {m} rows, found {i}")))?;
            let row = parse_reals(line)?;
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend(row);
        }
        if lines.next().is_some() {
            return Err(Error::Parse(format!("more than {m} rows")));
        }
        Matrix::new(m, n, data)
    }
}

/// Whitespace-separated entries with 17 significant digits.
pub fn format_row(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_reals(line: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {t:?}")))
        })
        .collect()
}

/// Exactly `count` nonnegative integers.
pub fn parse_counts(line: &str, count: usize) -> Result<Vec<usize>> {
    let values = line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad count {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.len() != count {
        return Err(Error::Parse(format!(
            "expected {count} counts on {line:?}"
        )));
    }
    Ok(values)
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Row-echelon reduction with partial pivoting.
///
/// Returns the multipliers `L` (m x r, one column per pivot, in the original
/// row order) and the echelon rows `U` (r x n) so that `L * U` reproduces `M`
/// up to the discarded sub-threshold remainder.
fn echelon(m: &Matrix, tol: Tolerance) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let (rows, cols) = m.shape();
    let threshold = tol.relative(m.max_abs());
    let mut work = m.row_vecs();
    let mut perm: Vec<usize> = (0..rows).collect();
    // multipliers[i][r] in the permuted row order
    let mut multipliers = vec![Vec::<f64>::new(); rows];
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let (p, best) = (rank..rows)
            .map(|i| (i, work[i][c].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= threshold {
            continue;
        }
        work.swap(rank, p);
        perm.swap(rank, p);
        multipliers.swap(rank, p);
        let pivot_row = work[rank].clone();
        for i in rank + 1..rows {
            let f = work[i][c] / pivot_row[c];
            multipliers[i].resize(rank, 0.0);
            multipliers[i].push(f);
            if f != 0.0 {
                for j in c..cols {
                    work[i][j] -= f * pivot_row[j];
                }
            }
            work[i][c] = 0.0;
        }
        multipliers[rank].resize(rank, 0.0);
        multipliers[rank].push(1.0);
        rank += 1;
    }
    let mut lower = vec![vec![0.0; rank]; rows];
    for (i, mut l) in multipliers.into_iter().enumerate() {
        l.resize(rank, 0.0);
        lower[perm[i]] = l;
    }
    work.truncate(rank);
    (lower, work)
}

/// Number of pivots found by row-echelon reduction.
pub fn rank(m: &Matrix, tol: Tolerance) -> usize {
    echelon(m, tol).1.len()
}

/// Factor `A = W0 * H0` with `W0` of full column rank `k` and `H0` of full row
/// rank `k`.
pub fn rank_factor(a: &Matrix, k: usize, tol: Tolerance) -> Result<(Matrix, Matrix)> {
    let (lower, upper) = echelon(a, tol);
    if upper.len() != k || k == 0 {
        return Err(Error::RankMismatch {
            expected: k,
            found: upper.len(),
        });
    }
    Ok((Matrix::from_rows(&lower)?, Matrix::from_rows(&upper)?))
}

/// LU factorization with partial pivoting of a square matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(m: &Matrix, tol: Tolerance) -> Result<Lu> {
        if !m.is_square() {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {:?}",
                m.shape()
            )));
        }
        let n = m.rows();
        let threshold = tol.relative(m.max_abs());
        let mut lu = m.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for c in 0..n {
            let (p, best) = (c..n)
                .map(|i| (i, lu[i * n + c].abs()))
                .fold((c, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= threshold || best == 0.0 {
                return Err(Error::Singular);
            }
            if p != c {
                for j in 0..n {
                    lu.swap(c * n + j, p * n + j);
                }
                perm.swap(c, p);
            }
            let pivot = lu[c * n + c];
            for i in c + 1..n {
                let f = lu[i * n + c] / pivot;
                lu[i * n + c] = f;
                if f != 0.0 {
                    for j in c + 1..n {
                        lu[i * n + j] -= f * lu[c * n + j];
                    }
                }
            }
        }
        Ok(Lu { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::Dimension(format!(
                "rhs of length {} for a {n}x{n} system",
                rhs.len()
            )));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        Ok(x)
    }
}

pub fn invert(q: &Matrix, tol: Tolerance) -> Result<Matrix> {
    let lu = Lu::factor(q, tol)?;
    let n = q.rows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(lu.solve(&e)?);
    }
    Matrix::from_cols(&cols)
}

pub fn solve_linear(m: &Matrix, rhs: &[f64], tol: Tolerance) -> Result<Vec<f64>> {
    Lu::factor(m, tol)?.solve(rhs)
}

/// Nonsingular matrix whose last column is `v`; the other columns are the
/// standard basis vectors except the one at `v`'s largest-magnitude entry.
pub fn complete_to_basis(v: &[f64]) -> Result<Matrix> {
    let k = v.len();
    if k == 0 || max_abs(v) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let pivot = v
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (i, x)| if x.abs() > acc.1 { (i, x.abs()) } else { acc })
        .0;
    let mut cols: Vec<Vec<f64>> = (0..k)
        .filter(|&i| i != pivot)
        .map(|i| {
            let mut e = vec![0.0; k];
            e[i] = 1.0;
            e
        })
        .collect();
    cols.push(v.to_vec());
    Matrix::from_cols(&cols)
}

/// A nonzero vector orthogonal to every row of `m` (rows x cols, rows < cols),
/// found by back substitution on the echelon form with the first free column
/// set to one.
pub(crate) fn null_vector(rows: &[Vec<f64>], cols: usize, tol: Tolerance) -> Option<Vec<f64>> {
    if rows.is_empty() {
        let mut v = vec![0.0; cols];
        v[0] = 1.0;
        return Some(v);
    }
    let m = Matrix::from_rows(rows).ok()?;
    let (_, upper) = echelon(&m, tol);
    let threshold = tol.relative(m.max_abs());
    let pivots: Vec<usize> = upper
        .iter()
        .map(|r| r.iter().position(|v| v.abs() > threshold).unwrap_or(cols))
        .collect();
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![0.0; cols];
    x[free] = 1.0;
    for (r, &pc) in pivots.iter().enumerate().rev() {
        if pc >= cols {
            continue;
        }
        let s: f64 = (pc + 1..cols).map(|j| upper[r][j] * x[j]).sum();
        x[pc] = -s / upper[r][pc];
    }
    Some(x)
}
