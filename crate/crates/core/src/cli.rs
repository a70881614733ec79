//! Command-line front end: text file formats and one subcommand per pipeline
//! stage. Reports go to stdout as `key=value` lines, diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::linprog::{Polyhedron, Simplex};
use crate::numerics::{format_row, parse_counts, parse_reals, Matrix, Tolerance};
use crate::reductions::{
    nmf_to_p1, p1_to_restricted, restricted_to_simplex, solve_exact_nmf,
    FactorPair, IntermediateSimplexInstance, NmfInstance, NmfOutcome, ReductionTranscript,
    SolveConfig,
};
use crate::sat::{
    decode, default_lambda, encode, evaluate, parse_dimacs, witness_simplex, Assignment,
    GadgetLayout,
};
use crate::search::{local_search_from, verify_solution, SearchConfig, SearchOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_STALLED: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;

const NMF_TAG: &str = "nmf-instance";
const INSTANCE_TAG: &str = "intermediate-simplex";
const SIMPLEX_TAG: &str = "simplex";
const LAYOUT_TAG: &str = "gadget-layout";
const TRANSCRIPT_TAG: &str = "reduction-transcript";

#[derive(Debug, Parser)]
#[command(name = "exact-nmf", version, about = "Exact nonnegative matrix factorization through simplex containment")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct TolFlag {
    /// comparison tolerance
    #[arg(long, default_value_t = Tolerance::DEFAULT_EPS)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SearchFlags {
    #[command(flatten)]
    pub tol: TolFlag,
    /// seed for restart rotations
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub max_sweeps: usize,
    #[arg(long, default_value_t = 3)]
    pub restarts: usize,
}

impl SearchFlags {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            max_sweeps: self.max_sweeps,
            rng_seed: self.seed,
            restarts: self.restarts,
            ..SearchConfig::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor a nonnegative matrix of rank k as W H with W, H >= 0
    NmfSolve {
        /// matrix file, or an nmf-instance file carrying k
        input: PathBuf,
        #[arg(short)]
        k: Option<usize>,
        #[arg(long)]
        w_out: PathBuf,
        #[arg(long)]
        h_out: PathBuf,
        /// matrix file with a candidate H to start the search from
        #[arg(long)]
        warm_start: Option<PathBuf>,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Reduce a matrix to an intermediate simplex instance
    Reduce {
        input: PathBuf,
        #[arg(short)]
        k: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[command(flatten)]
        tol: TolFlag,
    },
    /// Search for a simplex nested between the points and the polyhedron
    IsSolve {
        instance: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// simplex file to start the search from
        #[arg(long)]
        warm_start: Option<PathBuf>,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Encode a 3-CNF formula (DIMACS) as an intermediate simplex instance
    SatEncode {
        cnf: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        layout: PathBuf,
    },
    /// Build the witness simplex of an assignment and verify it
    SatWitness {
        cnf: PathBuf,
        /// one line of 0/1 characters, variable 1 first
        assignment: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// length of the far vertices on the clause axes
        #[arg(long)]
        lambda: Option<f64>,
        #[command(flatten)]
        tol: TolFlag,
    },
    /// Read an assignment back from a solution simplex of an encoding
    SatDecode {
        instance: PathBuf,
        layout: PathBuf,
        simplex: PathBuf,
        /// where to write the assignment (stdout report only when absent)
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolFlag,
    },
    /// Check a simplex against an instance, or W and H against a matrix
    Verify {
        #[arg(long, requires = "simplex", conflicts_with_all = ["matrix", "w", "h"])]
        instance: Option<PathBuf>,
        #[arg(long)]
        simplex: Option<PathBuf>,
        #[arg(long, requires_all = ["w", "h"])]
        matrix: Option<PathBuf>,
        #[arg(long)]
        w: Option<PathBuf>,
        #[arg(long)]
        h: Option<PathBuf>,
        #[command(flatten)]
        tol: TolFlag,
    },
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::NmfSolve {
            input,
            k,
            w_out,
            h_out,
            warm_start,
            search,
        } => {
            let tol = Tolerance::new(search.tol.tol)?;
            let inst = read_nmf_input(&input, k, tol)?;
            let config = SolveConfig {
                tol,
                search: search.config(),
                warm_start: warm_start.map(|p| read_matrix(&p)).transpose()?,
            };
            match solve_exact_nmf(&inst, &config)? {
                NmfOutcome::Factorization(pair) => {
                    write(&w_out, &pair.w.to_text())?;
                    write(&h_out, &pair.h.to_text())?;
                    let report = pair.verify(inst.a(), tol)?;
                    println!("status=factorization");
                    println!("residual={:.16e}", report.residual);
                    println!("relative_residual={:.16e}", report.residual / inst.a().max_abs());
                    println!("min_w={:.16e}", report.min_w);
                    println!("min_h={:.16e}", report.min_h);
                    Ok(EXIT_OK)
                }
                NmfOutcome::NoSolutionFound {
                    vertex_infeasibility,
                } => {
                    println!("status=stalled");
                    println!("vertex_infeasibility={}", format_row(&vertex_infeasibility));
                    Ok(EXIT_STALLED)
                }
            }
        }
        Command::Reduce {
            input,
            k,
            out,
            transcript,
            tol,
        } => {
            let tol = Tolerance::new(tol.tol)?;
            let inst = read_nmf_input(&input, k, tol)?;
            let p1 = nmf_to_p1(&inst, tol)?;
            let (restricted, record) = p1_to_restricted(&p1, tol)?;
            let is = restricted_to_simplex(&restricted)?;
            is.validate(tol)?;
            write(&out, &instance_to_text(&is))?;
            if let Some(path) = transcript {
                write(&path, &transcript_to_text(&record))?;
            }
            println!("status=reduced");
            println!("dimension={}", is.dim());
            println!("facets={}", is.num_facets());
            println!("points={}", is.num_points());
            println!("deleted_rows={}", record.deleted_rows.len());
            Ok(EXIT_OK)
        }
        Command::IsSolve {
            instance,
            out,
            warm_start,
            search,
        } => {
            let tol = Tolerance::new(search.tol.tol)?;
            let inst = read_instance(&instance)?;
            inst.validate(tol)?;
            let start = warm_start.map(|p| read_simplex(&p)).transpose()?;
            match local_search_from(&inst, start, &search.config())? {
                SearchOutcome::Solved(t) => {
                    write(&out, &simplex_to_text(&t))?;
                    let report = verify_solution(&inst, &t, tol)?;
                    println!("status=solved");
                    print_verify(&report);
                    Ok(EXIT_OK)
                }
                SearchOutcome::Stalled {
                    simplex,
                    vertex_infeasibility,
                } => {
                    write(&out, &simplex_to_text(&simplex))?;
                    println!("status=stalled");
                    println!("vertex_infeasibility={}", format_row(&vertex_infeasibility));
                    Ok(EXIT_STALLED)
                }
            }
        }
        Command::SatEncode { cnf, out, layout } => {
            let phi = parse_dimacs(&read(&cnf)?)?;
            let (inst, gadget) = encode(&phi);
            write(&out, &instance_to_text(&inst))?;
            write(&layout, &layout_to_text(&gadget))?;
            println!("status=encoded");
            println!("dimension={}", inst.dim());
            println!("facets={}", inst.num_facets());
            println!("points={}", inst.num_points());
            Ok(EXIT_OK)
        }
        Command::SatWitness {
            cnf,
            assignment,
            out,
            lambda,
            tol,
        } => {
            let tol = Tolerance::new(tol.tol)?;
            let phi = parse_dimacs(&read(&cnf)?)?;
            let sigma = parse_assignment(&read(&assignment)?)?;
            let lambda = lambda.unwrap_or_else(|| default_lambda(&phi));
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::InvalidInstance(format!("lambda must be positive, got {lambda}")));
            }
            let t = witness_simplex(&phi, &sigma, lambda)?;
            write(&out, &simplex_to_text(&t))?;
            let (inst, _) = encode(&phi);
            let report = verify_solution(&inst, &t, tol)?;
            println!("satisfied={}", evaluate(&phi, &sigma)?.satisfied);
            print_verify(&report);
            Ok(if report.ok { EXIT_OK } else { EXIT_REJECTED })
        }
        Command::SatDecode {
            instance,
            layout,
            simplex,
            out,
            tol,
        } => {
            let tol = Tolerance::new(tol.tol)?;
            let inst = read_instance(&instance)?;
            let gadget = read_layout(&layout)?;
            let t = read_simplex(&simplex)?;
            let report = verify_solution(&inst, &t, tol)?;
            if !report.ok {
                print_verify(&report);
                return Ok(EXIT_REJECTED);
            }
            let (sigma, diag) = decode(&inst, &gadget, &t, tol)?;
            if let Some(path) = out {
                write(&path, &format!("{sigma}\n"))?;
            }
            println!("assignment={sigma}");
            println!(
                "falsified={}",
                diag.falsified.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ")
            );
            println!("scaling={}", format_row(&diag.scaling.concat()));
            println!("ray_lengths={}", format_row(&diag.ray_lengths));
            Ok(EXIT_OK)
        }
        Command::Verify {
            instance,
            simplex,
            matrix,
            w,
            h,
            tol,
        } => {
            let tol = Tolerance::new(tol.tol)?;
            match (instance, simplex, matrix, w, h) {
                (Some(instance), Some(simplex), None, None, None) => {
                    let inst = read_instance(&instance)?;
                    let t = read_simplex(&simplex)?;
                    let report = verify_solution(&inst, &t, tol)?;
                    print_verify(&report);
                    Ok(if report.ok { EXIT_OK } else { EXIT_REJECTED })
                }
                (None, None, Some(matrix), Some(w), Some(h)) => {
                    let a = read_matrix(&matrix)?;
                    let pair = FactorPair {
                        w: read_matrix(&w)?,
                        h: read_matrix(&h)?,
                    };
                    let report = pair.verify(&a, tol)?;
                    println!("ok={}", report.ok);
                    println!("residual={:.16e}", report.residual);
                    println!("min_w={:.16e}", report.min_w);
                    println!("min_h={:.16e}", report.min_h);
                    Ok(if report.ok { EXIT_OK } else { EXIT_REJECTED })
                }
                _ => Err(Error::InvalidInstance(
                    "verify needs --instance with --simplex, or --matrix with --w and --h".into(),
                )),
            }
        }
    }
}

fn print_verify(report: &crate::search::VerifyReport) {
    println!("ok={}", report.ok);
    println!("worst_s_violation={:.16e}", report.worst_s_violation);
    println!("worst_point={}", report.worst_point);
    println!("worst_p_violation={:.16e}", report.worst_p_violation);
    println!("worst_vertex={}", report.worst_vertex);
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    Matrix::parse_text(&read(path)?)
}

/// A bare matrix needs `k` from the command line; a tagged instance carries
/// its own, which `k` must then agree with.
fn read_nmf_input(path: &Path, k: Option<usize>, tol: Tolerance) -> Result<NmfInstance> {
    let text = read(path)?;
    if first_line(&text) == Some(NMF_TAG) {
        let (a, file_k) = parse_nmf_instance(&text)?;
        if let Some(k) = k.filter(|&k| k != file_k) {
            return Err(Error::InvalidInstance(format!(
                "-k {k} disagrees with k = {file_k} in {}",
                path.display()
            )));
        }
        return NmfInstance::new(a, file_k, tol);
    }
    let k = k.ok_or_else(|| Error::InvalidInstance("a bare matrix input needs -k".into()))?;
    NmfInstance::new(Matrix::parse_text(&text)?, k, tol)
}

fn first_line(text: &str) -> Option<&str> {
    text.lines().find(|l| !l.trim().is_empty()).map(str::trim)
}

/// Lines after the tag, which must match `tag`.
fn tagged_body<'t>(text: &'t str, tag: &str) -> Result<Vec<&'t str>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(str::trim) {
        Some(t) if t == tag => Ok(lines.collect()),
        other => Err(Error::Parse(format!("expected a {tag} file, found header {other:?}"))),
    }
}

fn take_rows(lines: &[&str], start: usize, count: usize, width: usize) -> Result<Vec<Vec<f64>>> {
    if lines.len() < start + count {
        return Err(Error::Parse(format!(
            "expected {count} rows, found {}",
            lines.len().saturating_sub(start)
        )));
    }
    lines[start..start + count]
        .iter()
        .map(|l| {
            let row = parse_reals(l)?;
            if row.len() != width {
                return Err(Error::Parse(format!(
                    "row {l:?} has {} entries, expected {width}",
                    row.len()
                )));
            }
            Ok(row)
        })
        .collect()
}

fn expect_end(lines: &[&str], used: usize) -> Result<()> {
    if lines.len() > used {
        return Err(Error::Parse(format!("{} unexpected trailing lines", lines.len() - used)));
    }
    Ok(())
}

pub fn nmf_instance_to_text(inst: &NmfInstance) -> String {
    let a = inst.a();
    let mut out = format!("{NMF_TAG}\n{} {} {}\n", a.rows(), a.cols(), inst.k());
    for i in 0..a.rows() {
        out.push_str(&format_row(a.row(i)));
        out.push('\n');
    }
    out
}

/// The matrix and rank of an `nmf-instance` file, without validation.
pub fn parse_nmf_instance(text: &str) -> Result<(Matrix, usize)> {
    let lines = tagged_body(text, NMF_TAG)?;
    let dims = parse_counts(lines.first().copied().unwrap_or(""), 3)?;
    let rows = take_rows(&lines, 1, dims[0], dims[1])?;
    expect_end(&lines, 1 + dims[0])?;
    Ok((Matrix::from_rows(&rows)?, dims[2]))
}

pub fn instance_to_text(inst: &IntermediateSimplexInstance) -> String {
    let p = inst.polyhedron();
    let mut out = format!(
        "{INSTANCE_TAG}\n{} {} {}\n",
        p.num_constraints(),
        p.dim(),
        inst.num_points()
    );
    for j in 0..p.num_constraints() {
        let mut row = p.a().row(j).to_vec();
        row.push(p.b()[j]);
        out.push_str(&format_row(&row));
        out.push('\n');
    }
    for s in inst.points() {
        out.push_str(&format_row(s));
        out.push('\n');
    }
    out
}

/// Shape-checked only; call `validate` for the side constraints.
pub fn parse_instance(text: &str) -> Result<IntermediateSimplexInstance> {
    let lines = tagged_body(text, INSTANCE_TAG)?;
    let dims = parse_counts(lines.first().copied().unwrap_or(""), 3)?;
    let (n, d, m) = (dims[0], dims[1], dims[2]);
    let rows = take_rows(&lines, 1, n, d + 1)?;
    let points = take_rows(&lines, 1 + n, m, d)?;
    expect_end(&lines, 1 + n + m)?;
    let a: Vec<Vec<f64>> = rows.iter().map(|r| r[..d].to_vec()).collect();
    let b = rows.iter().map(|r| r[d]).collect();
    IntermediateSimplexInstance::new_unchecked(Polyhedron::new(Matrix::from_rows(&a)?, b)?, points)
}

fn read_instance(path: &Path) -> Result<IntermediateSimplexInstance> {
    parse_instance(&read(path)?)
}

pub fn simplex_to_text(t: &Simplex) -> String {
    let mut out = format!("{SIMPLEX_TAG}\n{} {}\n", t.num_vertices(), t.dim());
    for v in t.vertices() {
        out.push_str(&format_row(v));
        out.push('\n');
    }
    out
}

pub fn parse_simplex(text: &str) -> Result<Simplex> {
    let lines = tagged_body(text, SIMPLEX_TAG)?;
    let dims = parse_counts(lines.first().copied().unwrap_or(""), 2)?;
    let vertices = take_rows(&lines, 1, dims[0], dims[1])?;
    expect_end(&lines, 1 + dims[0])?;
    Simplex::new(vertices)
}

fn read_simplex(path: &Path) -> Result<Simplex> {
    parse_simplex(&read(path)?)
}

pub fn layout_to_text(layout: &GadgetLayout) -> String {
    format!("{LAYOUT_TAG}\n{} {}\n", layout.p, layout.q)
}

pub fn parse_layout(text: &str) -> Result<GadgetLayout> {
    let lines = tagged_body(text, LAYOUT_TAG)?;
    let dims = parse_counts(lines.first().copied().unwrap_or(""), 2)?;
    expect_end(&lines, 1)?;
    Ok(GadgetLayout {
        p: dims[0],
        q: dims[1],
    })
}

fn read_layout(path: &Path) -> Result<GadgetLayout> {
    parse_layout(&read(path)?)
}

pub fn parse_assignment(text: &str) -> Result<Assignment> {
    let line = text.trim();
    let bits = line
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("assignment character {other:?} is not 0 or 1"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Assignment::new(bits))
}

/// Written for inspection; the sections are the deleted rows, `Q̂`, the row
/// scalings and the original factors.
pub fn transcript_to_text(t: &ReductionTranscript) -> String {
    let list = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    let matrix = |name: &str, m: &Matrix| format!("{name} {}", m.to_text());
    let mut out = format!("{TRANSCRIPT_TAG}\n");
    out.push_str(&format!("deleted {} {}\n", t.deleted_rows.len(), list(&t.deleted_rows)));
    out.push_str(&matrix("qhat", &t.qhat));
    out.push_str(&format!("scaling {}\n{}\n", t.d_diag.len(), format_row(&t.d_diag)));
    out.push_str(&matrix("w0", t.original.w0()));
    out.push_str(&matrix("h0", t.original.h0()));
    out
}
