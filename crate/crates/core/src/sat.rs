//! 3-SAT as INTERMEDIATE SIMPLEX: the gadget encoding, witness simplices for
//! satisfying assignments, decoding of arbitrary solutions, and a brute-force
//! oracle.

use std::fmt;

use crate::error::{Error, Result};
use crate::linprog::{Polyhedron, Simplex};
use crate::numerics::{Matrix, Tolerance};
use crate::reductions::IntermediateSimplexInstance;

/// Variable `var` (1-based) or its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    /// Whether this literal is false under `bits` (0-based).
    fn falsified_by(&self, bits: &[bool]) -> bool {
        bits[self.var - 1] == self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-{}", self.var)
        } else {
            write!(f, "{}", self.var)
        }
    }
}

pub type Clause = [Literal; 3];

/// A CNF formula over variables `1..=p` with three distinct variables per
/// clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf3 {
    p: usize,
    clauses: Vec<Clause>,
}

impl Cnf3 {
    pub fn new(p: usize, clauses: Vec<Clause>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInstance("a formula needs at least one variable".into()));
        }
        for (j, c) in clauses.iter().enumerate() {
            if let Some(l) = c.iter().find(|l| l.var == 0 || l.var > p) {
                return Err(Error::InvalidInstance(format!(
                    "clause {} uses variable {} outside 1..={p}",
                    j + 1,
                    l.var
                )));
            }
            if c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var {
                return Err(Error::InvalidInstance(format!(
                    "clause {} repeats a variable",
                    j + 1
                )));
            }
        }
        Ok(Cnf3 { p, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.p
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.p, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        out
    }
}

/// Parses DIMACS CNF; every clause must have exactly three distinct variables.
pub fn parse_dimacs(text: &str) -> Result<Cnf3> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    'lines: for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            match fields.as_slice() {
                ["cnf", vars, count] if header.is_none() => {
                    let parse = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad header field {s:?}")))
                    };
                    header = Some((parse(vars)?, parse(count)?));
                    continue;
                }
                _ => return Err(Error::Parse(format!("bad problem line {line:?}"))),
            }
        }
        if header.is_none() {
            return Err(Error::Parse("clause before the `p cnf` header".into()));
        }
        for token in line.split_whitespace() {
            if token == "%" {
                break 'lines;
            }
            let value: i64 = token
                .parse()
                .map_err(|_| Error::Parse(format!("bad literal {token:?}")))?;
            if value == 0 {
                let clause: Clause = current.as_slice().try_into().map_err(|_| {
                    Error::Parse(format!(
                        "clause {} has {} literals, expected 3",
                        clauses.len() + 1,
                        current.len()
                    ))
                })?;
                clauses.push(clause);
                current.clear();
            } else {
                current.push(Literal {
                    var: value.unsigned_abs() as usize,
                    negated: value < 0,
                });
            }
        }
    }
    let (p, q) = header.ok_or_else(|| Error::Parse("missing `p cnf` header".into()))?;
    if !current.is_empty() {
        return Err(Error::Parse("last clause is not terminated by 0".into()));
    }
    if clauses.len() != q {
        return Err(Error::Parse(format!(
            "header announces {q} clauses, found {}",
            clauses.len()
        )));
    }
    Cnf3::new(p, clauses).map_err(|e| Error::Parse(e.to_string()))
}

/// `bits[i]` is the value of variable `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub satisfied: bool,
    /// number of false literals in each clause
    pub falsified: Vec<usize>,
}

pub fn evaluate(phi: &Cnf3, sigma: &Assignment) -> Result<Evaluation> {
    if sigma.len() != phi.p {
        return Err(Error::Dimension(format!(
            "assignment of length {} for {} variables",
            sigma.len(),
            phi.p
        )));
    }
    let falsified: Vec<usize> = phi
        .clauses
        .iter()
        .map(|c| c.iter().filter(|l| l.falsified_by(&sigma.bits)).count())
        .collect();
    Ok(Evaluation {
        satisfied: falsified.iter().all(|&m| m <= 2),
        falsified,
    })
}

pub const BRUTE_FORCE_LIMIT: usize = 24;

/// First satisfying assignment, counting with variable 1 as the lowest bit.
pub fn brute_force_sat(phi: &Cnf3) -> Result<Option<Assignment>> {
    if phi.p > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(phi.p));
    }
    let bits_of = |code: u32| (0..phi.p).map(|i| code >> i & 1 == 1).collect::<Vec<_>>();
    Ok((0..1u32 << phi.p)
        .map(bits_of)
        .find(|bits| {
            phi.clauses
                .iter()
                .all(|c| c.iter().any(|l| !l.falsified_by(bits)))
        })
        .map(Assignment::new))
}

/// Coordinates are laid out as all `s`, then all `t`, then all `u`, then all
/// `v`. Indices passed to the accessors are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetLayout {
    pub p: usize,
    pub q: usize,
}

impl GadgetLayout {
    pub fn s(&self, i: usize) -> usize {
        i
    }

    pub fn t(&self, i: usize) -> usize {
        self.p + i
    }

    pub fn u(&self, i: usize) -> usize {
        2 * self.p + i
    }

    pub fn v(&self, j: usize) -> usize {
        3 * self.p + j
    }

    pub fn dim(&self) -> usize {
        3 * self.p + self.q
    }
}

/// Index of the point `b` in the encoded point set.
pub const B_POINT: usize = 1;

pub fn encode(phi: &Cnf3) -> (IntermediateSimplexInstance, GadgetLayout) {
    let layout = GadgetLayout {
        p: phi.p,
        q: phi.clauses.len(),
    };
    let (p, q, d) = (layout.p, layout.q, layout.dim());
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(6 * p + 4 * q);
    let mut rhs = Vec::with_capacity(6 * p + 4 * q);
    let mut push = |entries: &[(usize, f64)], b: f64| {
        let mut r = vec![0.0; d];
        for &(c, a) in entries {
            r[c] += a;
        }
        rows.push(r);
        rhs.push(b);
    };
    for i in 0..p {
        push(&[(layout.s(i), 1.0)], 0.0);
        push(&[(layout.u(i), 1.0), (layout.s(i), -1.0)], 0.0);
    }
    for i in 0..p {
        push(&[(layout.t(i), 1.0)], 0.0);
        push(&[(layout.u(i), 1.0), (layout.t(i), -1.0)], 0.0);
    }
    for i in 0..p {
        push(&[(layout.u(i), 1.0)], 0.0);
        push(&[(layout.u(i), -1.0)], -1.0);
    }
    for j in 0..q {
        push(&[(layout.v(j), 1.0)], 0.0);
    }
    for (j, clause) in phi.clauses.iter().enumerate() {
        for l in clause {
            let i = l.var - 1;
            if l.negated {
                // s - 2t <= v
                push(&[(layout.v(j), 1.0), (layout.s(i), -1.0), (layout.t(i), 2.0)], 0.0);
            } else {
                // 2t - 2s - u <= v
                push(
                    &[
                        (layout.v(j), 1.0),
                        (layout.t(i), -2.0),
                        (layout.s(i), 2.0),
                        (layout.u(i), 1.0),
                    ],
                    0.0,
                );
            }
        }
    }
    let a = Matrix::from_rows(&rows).expect("gadget rows are finite and nonempty");
    let polyhedron = Polyhedron::new(a, rhs).expect("one right-hand side per row");

    let pf = p as f64;
    let mut points = vec![vec![0.0; d]];
    let mut b = vec![0.0; d];
    for i in 0..p {
        b[layout.s(i)] = 1.0 / (4.0 * pf);
        b[layout.t(i)] = 1.0 / (4.0 * pf);
        b[layout.u(i)] = 1.0 / (2.0 * pf);
    }
    for j in 0..q {
        b[layout.v(j)] = 2.5 / (8.0 * pf);
    }
    points.push(b);
    for j in 0..q {
        let mut h = vec![0.0; d];
        h[layout.v(j)] = 1.0;
        points.push(h);
    }
    for (s, t) in [(0.0, 0.25), (0.5, 0.25), (0.25, 0.125), (0.25, 0.375)] {
        for i in 0..p {
            let mut r = vec![0.0; d];
            r[layout.s(i)] = s;
            r[layout.t(i)] = t;
            r[layout.u(i)] = 0.5;
            for j in 0..q {
                r[layout.v(j)] = 1.0;
            }
            points.push(r);
        }
    }
    let inst = IntermediateSimplexInstance::new(polyhedron, points, Tolerance::default())
        .expect("the gadget satisfies the instance side constraints");
    (inst, layout)
}

/// Scaling of the far vertices on the `v` axes used by `witness_simplex`.
pub fn default_lambda(phi: &Cnf3) -> f64 {
    let (p, q) = (phi.p as f64, phi.clauses.len() as f64);
    8.0 * p * (3.0 * p + q)
}

/// Shape of the three vertices of one variable, as `(s, t)` with `u = 1`.
const FALSE_PATTERN: [(f64, f64); 3] = [(0.0, 0.0), (0.0, 1.0), (1.0, 0.5)];
const TRUE_PATTERN: [(f64, f64); 3] = [(1.0, 0.0), (1.0, 1.0), (0.0, 0.5)];
const WITNESS_SCALE: f64 = 5.0 / 8.0;

/// The simplex built from a satisfying assignment. Its vertices are the
/// origin, `lambda` times each `v` axis, then three vertices per variable.
pub fn witness_simplex(phi: &Cnf3, sigma: &Assignment, lambda: f64) -> Result<Simplex> {
    if sigma.len() != phi.p {
        return Err(Error::Dimension(format!(
            "assignment of length {} for {} variables",
            sigma.len(),
            phi.p
        )));
    }
    let layout = GadgetLayout {
        p: phi.p,
        q: phi.clauses.len(),
    };
    let d = layout.dim();
    let mut vertices = vec![vec![0.0; d]];
    for j in 0..layout.q {
        let mut v = vec![0.0; d];
        v[layout.v(j)] = lambda;
        vertices.push(v);
    }
    for i in 0..layout.p {
        let truth = sigma.bits[i];
        let pattern = if truth { TRUE_PATTERN } else { FALSE_PATTERN };
        // the vertex whose pattern would break a literal row lifts that clause's v
        let lifted = if truth { 0 } else { 1 };
        for (k, (s, t)) in pattern.into_iter().enumerate() {
            let mut g = vec![0.0; d];
            g[layout.s(i)] = WITNESS_SCALE * s;
            g[layout.t(i)] = WITNESS_SCALE * t;
            g[layout.u(i)] = WITNESS_SCALE;
            if k == lifted {
                for (j, clause) in phi.clauses.iter().enumerate() {
                    if clause.iter().any(|l| l.var == i + 1 && l.negated == truth) {
                        g[layout.v(j)] = WITNESS_SCALE;
                    }
                }
            }
            vertices.push(g);
        }
    }
    Simplex::new(vertices)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeDiagnostics {
    /// per variable: the `u` entries of its three vertices in pattern order
    pub scaling: Vec<[f64; 3]>,
    /// false literals per clause under the decoded assignment
    pub falsified: Vec<usize>,
    /// `v` entry of each axis vertex
    pub ray_lengths: Vec<f64>,
    /// simplex vertex index of the origin
    pub origin_vertex: usize,
}

/// The formula behind an encoded instance, read off the literal rows of P.
pub fn recover_cnf(inst: &IntermediateSimplexInstance, layout: &GadgetLayout) -> Result<Cnf3> {
    let p = inst.polyhedron();
    let first = 6 * layout.p + layout.q;
    if inst.dim() != layout.dim() || p.num_constraints() != first + 3 * layout.q {
        return Err(Error::StructureMismatch(format!(
            "instance with {} rows in R^{} is not an encoding with layout p={}, q={}",
            p.num_constraints(),
            inst.dim(),
            layout.p,
            layout.q
        )));
    }
    let mut clauses = Vec::with_capacity(layout.q);
    for j in 0..layout.q {
        let mut clause = Vec::with_capacity(3);
        for r in first + 3 * j..first + 3 * j + 3 {
            let row = p.a().row(r);
            let var = (0..layout.p).find(|&i| row[layout.s(i)] != 0.0);
            let lit = match var {
                Some(i) if row[layout.s(i)] == -1.0 && row[layout.t(i)] == 2.0 => Literal::neg(i + 1),
                Some(i) if row[layout.s(i)] == 2.0 && row[layout.t(i)] == -2.0 => Literal::pos(i + 1),
                _ => {
                    return Err(Error::StructureMismatch(format!(
                        "row {r} is not a literal row of clause {}",
                        j + 1
                    )))
                }
            };
            if row[layout.v(j)] != 1.0 {
                return Err(Error::StructureMismatch(format!(
                    "row {r} does not bound v{}",
                    j + 1
                )));
            }
            clause.push(lit);
        }
        clauses.push([clause[0], clause[1], clause[2]]);
    }
    Cnf3::new(layout.p, clauses).map_err(|e| Error::StructureMismatch(e.to_string()))
}

/// Reads the assignment back from a solution simplex of an encoded instance.
pub fn decode(
    inst: &IntermediateSimplexInstance,
    layout: &GadgetLayout,
    t: &Simplex,
    tol: Tolerance,
) -> Result<(Assignment, DecodeDiagnostics)> {
    let phi = recover_cnf(inst, layout)?;
    if t.dim() != layout.dim() {
        return Err(Error::Dimension(format!(
            "simplex in R^{} against a layout of dimension {}",
            t.dim(),
            layout.dim()
        )));
    }
    let eps = tol.eps();
    let mismatch = |msg: String| Err(Error::StructureMismatch(msg));
    let block = |i: usize| [layout.s(i), layout.t(i), layout.u(i)];

    let mut origin = None;
    let mut rays = vec![None; layout.q];
    let mut owned: Vec<Vec<usize>> = vec![Vec::new(); layout.p];
    for (idx, v) in t.vertices().iter().enumerate() {
        if v.iter().all(|x| x.abs() <= eps) {
            if origin.replace(idx).is_some() {
                return mismatch("more than one vertex at the origin".into());
            }
            continue;
        }
        let ray = (0..layout.q).find(|&j| {
            let c = layout.v(j);
            v[c] >= 1.0 - eps && v.iter().enumerate().all(|(k, x)| k == c || x.abs() <= eps)
        });
        if let Some(j) = ray {
            if rays[j].replace(idx).is_some() {
                return mismatch(format!("two vertices on axis v{}", j + 1));
            }
            continue;
        }
        let positive: Vec<usize> = (0..layout.p)
            .filter(|&i| block(i).iter().any(|&c| v[c].abs() > eps))
            .collect();
        match positive.as_slice() {
            [i] if v[layout.u(*i)] > eps => owned[*i].push(idx),
            _ => {
                return mismatch(format!(
                    "vertex {idx} is neither the origin, an axis vertex nor tied to one variable"
                ))
            }
        }
    }
    let origin_vertex = match origin {
        Some(o) => o,
        None => return mismatch("no vertex at the origin".into()),
    };
    let ray_vertices: Vec<usize> = match rays.iter().copied().collect::<Option<Vec<_>>>() {
        Some(r) => r,
        None => return mismatch("an axis of v has no vertex".into()),
    };

    let mut bits = Vec::with_capacity(layout.p);
    let mut scaling = Vec::with_capacity(layout.p);
    for (i, verts) in owned.iter().enumerate() {
        if verts.len() != 3 {
            return mismatch(format!(
                "variable {} owns {} vertices, expected 3",
                i + 1,
                verts.len()
            ));
        }
        // normalize to u = 1 and compare against both patterns as sets
        let shapes: Vec<(f64, f64, f64)> = verts
            .iter()
            .map(|&idx| {
                let v = t.vertex(idx);
                let u = v[layout.u(i)];
                (v[layout.s(i)] / u, v[layout.t(i)] / u, u)
            })
            .collect();
        let slack = shapes.iter().map(|s| 2.0 * eps / s.2).fold(eps, f64::max);
        let assign = |pattern: &[(f64, f64); 3]| -> Option<[f64; 3]> {
            let mut mu = [0.0; 3];
            let mut used = [false; 3];
            for (k, &(ps, pt)) in pattern.iter().enumerate() {
                let hit = (0..3).find(|&n| {
                    !used[n] && (shapes[n].0 - ps).abs() <= slack && (shapes[n].1 - pt).abs() <= slack
                })?;
                used[hit] = true;
                mu[k] = shapes[hit].2;
            }
            Some(mu)
        };
        match (assign(&FALSE_PATTERN), assign(&TRUE_PATTERN)) {
            (Some(mu), None) => {
                bits.push(false);
                scaling.push(mu);
            }
            (None, Some(mu)) => {
                bits.push(true);
                scaling.push(mu);
            }
            _ => {
                return mismatch(format!(
                    "vertices of variable {} match neither pattern",
                    i + 1
                ))
            }
        }
    }
    let sigma = Assignment::new(bits);
    let eval = evaluate(&phi, &sigma)?;
    if !eval.satisfied {
        return mismatch(format!("decoded assignment {sigma} falsifies a clause"));
    }
    let ray_lengths = ray_vertices
        .iter()
        .zip(0..layout.q)
        .map(|(&idx, j)| t.vertex(idx)[layout.v(j)])
        .collect();
    Ok((
        sigma,
        DecodeDiagnostics {
            scaling,
            falsified: eval.falsified,
            ray_lengths,
            origin_vertex,
        },
    ))
}

/// The two-dimensional instance with exactly two solutions, and those
/// solutions.
pub fn lemma_gadget() -> (IntermediateSimplexInstance, Simplex, Simplex) {
    let a = Matrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        .expect("static matrix");
    let square = Polyhedron::new(a, vec![0.0, -1.0, 0.0, -1.0]).expect("static polyhedron");
    let points = vec![
        vec![0.0, 0.5],
        vec![1.0, 0.5],
        vec![0.5, 0.25],
        vec![0.5, 0.75],
    ];
    let inst = IntermediateSimplexInstance::new(square, points, Tolerance::default())
        .expect("static instance is valid");
    let t0 = Simplex::new(vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.5]]).expect("static simplex");
    let t1 = Simplex::new(vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.5]]).expect("static simplex");
    (inst, t0, t1)
}
