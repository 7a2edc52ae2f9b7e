//! The `freudenthal` command line.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failure, 2 on usage,
//! parse or I/O errors. Diagnostics go to the error stream.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::arithmetic::{rational_decimal, sqrt_decimal, Point, RationalPoint};
use crate::complex::{iterate_subdivision, subdivide_complex, validate_complex, Complex};
use crate::fixtures;
use crate::io::{export_mesh, import_mesh, MeshFormat};
use crate::kernel::{edge_frame, Permutation};
use crate::oracle::{enumeration_equivalence, membership_agreement, partition_check, tiling_check};
use crate::quality::{conjugate_signatures, max_flatness_sq, quality_report, similarity_signature, QualityReport};
use crate::subdivision::{barycentric_iterate, subdivide_points};

#[derive(Parser, Debug)]
#[command(name = "freudenthal", version, about = "Exact Freudenthal subdivision of simplicial complexes")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Subdivide a complex `depth` times.
    Subdivide {
        /// Input mesh (JSON or OFF); `-` or omitted reads standard input.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Output path; omitted writes to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MeshFormat::Json)]
        format: MeshFormat,
    },
    /// Report flatness and similarity classes, optionally over further generations.
    Quality {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of additional generations to report.
        #[arg(long, default_value_t = 0)]
        depth: usize,
    },
    /// Run the brute-force oracle suite on a complex.
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tabulate max q² under Freudenthal and barycentric subdivision.
    Compare {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Print a fixture complex.
    Demo {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = Fixture::Simplex)]
        fixture: Fixture,
        #[arg(long, value_enum, default_value_t = MeshFormat::Json)]
        format: MeshFormat,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    /// Path simplex 0, e1, e1+e2, …
    Simplex,
    /// Corner simplex 0, e1, …, er
    Corner,
    /// Unit cube split into r! simplices
    Cube,
    /// Unit square as two triangles (dim 2 only)
    Square,
    /// Two tetrahedra sharing a face (dim 3 only)
    TwoTets,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<crate::error::Error> for Failure {
    fn from(e: crate::error::Error) -> Self {
        Self::usage(e.to_string())
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ =
                if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, stdin, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Subdivide { input, depth, output, format } => {
            let complex = read_complex(input.as_ref(), stdin)?;
            let result = iterate_subdivision(&complex, *depth)?;
            let doc = export_mesh(&result, *format)?;
            match output {
                Some(path) if path.as_os_str() != "-" => {
                    fs::write(path, &doc.payload)
                        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
                    if cli.json {
                        emit(
                            out,
                            &json!({
                                "output": path.display().to_string(),
                                "generation": result.generation(),
                                "vertices": result.vertices().len(),
                                "cells": result.num_cells(),
                            }),
                        )?;
                    } else {
                        emit_text(
                            out,
                            &format!(
                                "wrote {} vertices, {} cells (generation {}) to {}",
                                result.vertices().len(),
                                result.num_cells(),
                                result.generation(),
                                path.display()
                            ),
                        )?;
                    }
                }
                _ => out.write_all(doc.payload.as_bytes()).map_err(io_failure)?,
            }
            Ok(0)
        }
        Command::Quality { input, depth } => {
            let complex = read_complex(input.as_ref(), stdin)?;
            let mut reports = vec![quality_report(&complex)?];
            let mut current = complex;
            for _ in 0..*depth {
                current = subdivide_complex(&current)?;
                reports.push(quality_report(&current)?);
            }
            if cli.json {
                emit(out, &json!({ "generations": reports.iter().map(report_json).collect::<Vec<_>>() }))?;
            } else {
                emit_text(out, &quality_text(&reports))?;
            }
            Ok(0)
        }
        Command::Verify { input, samples, seed } => {
            let complex = read_complex(input.as_ref(), stdin)?;
            let checks = verify(&complex, *samples, *seed)?;
            let ok = checks.iter().all(|c| c.passed);
            if cli.json {
                emit(
                    out,
                    &json!({
                        "passed": ok,
                        "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
                    }),
                )?;
            } else {
                let mut text = String::new();
                for c in &checks {
                    text.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
                }
                text.push_str(if ok { "all checks passed" } else { "verification FAILED" });
                emit_text(out, &text)?;
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Compare { input, depth } => {
            let complex = read_complex(input.as_ref(), stdin)?;
            let rows = compare(&complex, *depth)?;
            if cli.json {
                emit(
                    out,
                    &json!({
                        "rows": rows.iter().map(|(k, f, b)| json!({
                            "depth": k,
                            "freudenthal_max_flatness_sq": f.to_string(),
                            "barycentric_max_flatness_sq": b.to_string(),
                        })).collect::<Vec<_>>()
                    }),
                )?;
            } else {
                let mut text =
                    format!("{:>5}  {:>28}  {:>28}\n", "depth", "freudenthal max q^2", "barycentric max q^2");
                for (k, f, b) in &rows {
                    text.push_str(&format!(
                        "{k:>5}  {:>28}  {:>28}\n",
                        format!("{f} ({})", rational_decimal(f, 4)),
                        format!("{b} ({})", rational_decimal(b, 4))
                    ));
                }
                emit_text(out, text.trim_end())?;
            }
            Ok(0)
        }
        Command::Demo { dim, fixture, format } => {
            let complex = demo_fixture(*dim, *fixture)?;
            let doc = export_mesh(&complex, *format)?;
            out.write_all(doc.payload.as_bytes()).map_err(io_failure)?;
            Ok(0)
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::usage(format!("write failed: {e}"))
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json value serializes");
    writeln!(out, "{text}").map_err(io_failure)
}

fn emit_text(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(io_failure)
}

fn read_complex(input: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<Complex, Failure> {
    let text = match input {
        Some(path) if path.as_os_str() != "-" => {
            fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?
        }
        _ => {
            let mut buf = String::new();
            stdin.read_to_string(&mut buf).map_err(|e| Failure::usage(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    Ok(import_mesh(&text)?)
}

pub fn demo_fixture(dim: usize, fixture: Fixture) -> crate::error::Result<Complex> {
    let bad = |what: &str| crate::error::Error::Parse(format!("fixture {what} is not available in dimension {dim}"));
    if dim == 0 {
        return Err(bad("of any kind"));
    }
    Ok(match fixture {
        Fixture::Simplex => fixtures::kuhn_simplex(dim),
        Fixture::Corner => fixtures::corner_simplex(dim),
        Fixture::Cube if dim <= 6 => fixtures::unit_cube(dim),
        Fixture::Cube => return Err(bad("cube")),
        Fixture::Square if dim == 2 => fixtures::square(),
        Fixture::Square => return Err(bad("square")),
        Fixture::TwoTets if dim == 3 => fixtures::two_tetrahedra(),
        Fixture::TwoTets => return Err(bad("two-tets")),
    })
}

fn report_json(report: &QualityReport) -> Value {
    json!({
        "generation": report.generation,
        "cells": report.records.len(),
        "max_flatness_sq": report.max_flatness_sq.to_string(),
        "max_flatness_sq_decimal": rational_decimal(&report.max_flatness_sq, 6),
        "max_flatness_decimal": sqrt_decimal(&report.max_flatness_sq, 6),
        "signatures": report.census.iter().map(|(sig, count)| json!({
            "signature": sig.0.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "count": count,
        })).collect::<Vec<_>>(),
    })
}

fn quality_text(reports: &[QualityReport]) -> String {
    let mut text = format!(
        "{:>10}  {:>8}  {:>20}  {:>14}  {:>12}  {:>10}\n",
        "generation", "cells", "max q^2", "max q^2 (dec)", "max q", "signatures"
    );
    for r in reports {
        text.push_str(&format!(
            "{:>10}  {:>8}  {:>20}  {:>14}  {:>12}  {:>10}\n",
            r.generation,
            r.records.len(),
            r.max_flatness_sq.to_string(),
            rational_decimal(&r.max_flatness_sq, 4),
            sqrt_decimal(&r.max_flatness_sq, 4),
            r.census.len()
        ));
    }
    if let Some(last) = reports.last() {
        text.push_str(&format!("signature census (generation {}):\n", last.generation));
        for (sig, count) in &last.census {
            text.push_str(&format!("  {count:>8} × {sig}\n"));
        }
    }
    text.trim_end().to_string()
}

pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The oracle suite behind `verify`.
pub fn verify(complex: &Complex, samples: usize, seed: u64) -> crate::error::Result<Vec<Check>> {
    let mut checks = Vec::new();
    let r = complex.dimension();

    let violations = validate_complex(complex);
    checks.push(Check {
        name: "input complex".into(),
        passed: violations.is_empty(),
        detail: summarize(&violations, "valid"),
    });

    if (1..=6).contains(&r) {
        let eq = enumeration_equivalence(r);
        checks.push(Check {
            name: "child generators agree".into(),
            passed: eq.passed(),
            detail: if eq.passed() {
                format!("{} children in dimension {r}", eq.keyed)
            } else {
                eq.violations.join("; ")
            },
        });
    }

    let mut partition_failures = Vec::new();
    let mut conjugacy_failures = Vec::new();
    for cell in 0..complex.num_cells() {
        let parent = complex.cell_points(cell);
        let children = subdivide_points(&parent)?.all_child_points();
        let report = partition_check(&parent, &children, samples, seed.wrapping_add(cell as u64));
        if !report.passed() {
            partition_failures.push(format!("cell {cell}: {}", report.failures.join(", ")));
        }
        let allowed = conjugate_signatures(&parent)?;
        for (k, child) in children.iter().enumerate() {
            let rational: Vec<RationalPoint> = child.iter().map(Point::to_rational).collect();
            if !allowed.contains(&similarity_signature(&rational)?) {
                conjugacy_failures.push(format!("cell {cell} child {k}"));
            }
        }
    }
    checks.push(Check {
        name: "children partition each cell".into(),
        passed: partition_failures.is_empty(),
        detail: summarize(&partition_failures, &format!("{} cells, {samples} samples each", complex.num_cells())),
    });
    checks.push(Check {
        name: "children similar to conjugates".into(),
        passed: conjugacy_failures.is_empty(),
        detail: summarize(&conjugacy_failures, "every child matches a conjugate"),
    });

    if complex.num_cells() > 0 && r >= 1 {
        let (base, edges) = edge_frame(&complex.cell_points(0));
        let tiling = tiling_check(&base, &edges, samples, seed)?;
        checks.push(Check {
            name: "conjugates tile the parallelepiped".into(),
            passed: tiling.passed(),
            detail: format!(
                "{} conjugates, volume ratio {}, {} uncovered, {} interior overlaps",
                tiling.conjugates, tiling.volume_ratio_sum, tiling.uncovered, tiling.interior_overlaps
            ),
        });
        if r <= 4 {
            let mut disagreements = 0;
            for pi in Permutation::all(r) {
                disagreements += membership_agreement(&base, &edges, &pi, samples, seed)?.disagreements;
            }
            checks.push(Check {
                name: "chain and barycentric membership agree".into(),
                passed: disagreements == 0,
                detail: format!("{disagreements} disagreements"),
            });
        }
    }

    let next = subdivide_complex(complex)?;
    let violations = validate_complex(&next);
    checks.push(Check {
        name: "subdivided complex".into(),
        passed: violations.is_empty(),
        detail: summarize(&violations, &format!("valid with {} cells", next.num_cells())),
    });
    Ok(checks)
}

fn summarize<T: ToString>(items: &[T], ok: &str) -> String {
    if items.is_empty() {
        return ok.to_string();
    }
    let shown: Vec<String> = items.iter().take(5).map(ToString::to_string).collect();
    let more = if items.len() > 5 { format!(" (+{} more)", items.len() - 5) } else { String::new() };
    format!("{}{more}", shown.join("; "))
}

/// Max q² per depth `0..=depth` for both schemes.
pub fn compare(complex: &Complex, depth: usize) -> crate::error::Result<Vec<(usize, BigRational, BigRational)>> {
    let mut rows = Vec::with_capacity(depth + 1);
    let mut current = complex.clone();
    for k in 0..=depth {
        if k > 0 {
            current = subdivide_complex(&current)?;
        }
        let freudenthal = quality_report(&current)?.max_flatness_sq;
        let mut barycentric = BigRational::from_integer(0.into());
        for cell in 0..complex.num_cells() {
            let cells = barycentric_iterate(&complex.cell_rational_points(cell), k)?;
            let m = max_flatness_sq(&cells)?;
            if m > barycentric {
                barycentric = m;
            }
        }
        rows.push((k, freudenthal, barycentric));
    }
    Ok(rows)
}
