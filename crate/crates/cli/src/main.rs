use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use knormal::census::{self, CensusOptions};
use knormal::knormal::{self as kn, BoundEvaluation, ExistenceVerdict, Mode, Provenance};
use knormal::normal_basis::{self, MultTable, NormalBasis};
use knormal::polyring::{self, FactorEntry};
use knormal::reference::{self, PUBLISHED};
use knormal::tower::{format_indices, parse_indices, DEFAULT_SIZE_GUARD};
use knormal::{Error, FqmElem, TowerCtx, TowerParams};

const SIZE_GUARD_ENV: &str = "KNORMAL_SIZE_GUARD";

#[derive(Parser)]
#[command(
    name = "knormal",
    version,
    about = "k-normal elements of F_{q^m} over F_q"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor x^m - 1 over F_q.
    Factor(FieldArgs),
    /// Classify every element of F_{q^m} by k.
    Census(FieldArgs),
    /// Number of k-normal elements from the divisor-sum formula.
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
    },
    /// Formula counts against the lower bound Φ_q(x^m-1)/q^k.
    Bounds(FieldArgs),
    /// Which k are guaranteed to have k-normal elements.
    Exists(FieldArgs),
    /// Smallest-index element that is k-normal, or normal of a given order.
    Find {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, conflicts_with = "order", required_unless_present = "order")]
        k: Option<usize>,
        /// A divisor of q^m-1, `primitive` or `q1-primitive`.
        #[arg(long)]
        order: Option<String>,
    },
    /// Normal basis from a normal element, with its multiplication table.
    NormalBasis {
        #[command(flatten)]
        field: FieldArgs,
        /// Canonical index of the generator; defaults to the first normal element.
        #[arg(long)]
        element: Option<u64>,
    },
    /// Regenerate the golden files for the eight reference tables.
    Tables {
        #[arg(long, default_value = "golden")]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Prime power q; decomposed as p^s.
    #[arg(long, conflicts_with_all = ["p", "s"], required_unless_present = "p")]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, requires = "p", default_value_t = 1)]
    s: u32,
    #[arg(long)]
    m: usize,
    /// Modulus of F_q over F_p as coefficient indices, constant first.
    #[arg(long)]
    f: Option<String>,
    /// Modulus of F_{q^m} over F_q as coefficient indices, constant first.
    #[arg(long)]
    g: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum, default_value_t = ModeArg::Fast)]
    mode: ModeArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print census timing to stderr.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Fast,
    Verify,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Fast => Mode::Fast,
            ModeArg::Verify => Mode::Verify,
        }
    }
}

fn size_guard() -> Result<u128, Error> {
    match std::env::var(SIZE_GUARD_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("{SIZE_GUARD_ENV}={v:?}: {e}"))),
        Err(_) => Ok(DEFAULT_SIZE_GUARD),
    }
}

impl FieldArgs {
    fn params(&self) -> Result<TowerParams, Error> {
        let mut params = match (self.q, self.p) {
            (Some(q), _) => TowerParams::for_q(q, self.m)?,
            (None, Some(p)) => TowerParams::new(p, self.s, self.m),
            (None, None) => unreachable!("clap requires --q or --p"),
        };
        if let Some(f) = &self.f {
            params = params.with_f(parse_indices(f)?);
        }
        if let Some(g) = &self.g {
            params = params.with_g(parse_indices(g)?);
        }
        Ok(params.with_seed(self.seed).with_size_guard(size_guard()?))
    }

    fn tower(&self) -> Result<TowerCtx, Error> {
        self.params()?.build()
    }

    fn q(&self) -> Result<u64, Error> {
        Ok(self.params()?.build_base()?.q())
    }

    fn emit(&self, default: Format, render: impl FnOnce(Format) -> String) -> Result<(), Error> {
        write_output(self.out.as_deref(), &render(self.format.unwrap_or(default)))
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::PreconditionViolated(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::FormulaCensusMismatch { .. }
        | Error::MethodDisagreement { .. }
        | Error::InternalInconsistency(_) => 1,
        Error::SizeGuardExceeded { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Factor(a) => cmd_factor(&a),
        Command::Census(a) => cmd_census(&a),
        Command::Count { field, k } => cmd_count(&field, k),
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Exists(a) => cmd_exists(&a),
        Command::Find { field, k, order } => cmd_find(&field, k, order.as_deref()),
        Command::NormalBasis { field, element } => cmd_normal_basis(&field, element),
        Command::Tables { out, workers } => cmd_tables(&out, workers),
    }
}

#[derive(Serialize)]
struct FactorOutput {
    q: u64,
    m: usize,
    rendered: String,
    factors: Vec<FactorEntry>,
}

fn cmd_factor(a: &FieldArgs) -> Result<(), Error> {
    let ctx = a.params()?;
    let base = ctx.build_base()?;
    let fact = polyring::factor_xm_minus_1(&base, a.m)?;
    let out = FactorOutput {
        q: base.q(),
        m: a.m,
        rendered: fact.render(&base),
        factors: fact.to_entries(),
    };
    a.emit(Format::Md, |fmt| match fmt {
        Format::Json => json(&out),
        Format::Md => format!("{}\n", out.rendered),
        Format::Csv => {
            let mut s = String::from("degree,multiplicity,factor\n");
            for (f, e) in fact.factors() {
                let deg = f.degree().unwrap_or(0);
                s.push_str(&format!("{deg},{e},{}\n", polyring::render_poly(&base, f)));
            }
            s
        }
    })
}

fn cmd_census(a: &FieldArgs) -> Result<(), Error> {
    let ctx = a.tower()?;
    let report = census::census_of(
        &ctx,
        CensusOptions {
            workers: a.workers,
            mode: a.mode.into(),
        },
    )?;
    if a.timing {
        eprintln!(
            "census of {ctx}: {} ms with {} workers",
            report.elapsed_ms.unwrap_or(0),
            report.workers.unwrap_or(1)
        );
    }
    let report = report.without_timing();
    a.emit(Format::Json, |fmt| match fmt {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Md => report.to_markdown(),
    })
}

fn bound_rows(a: &FieldArgs) -> Result<(u64, Vec<BoundEvaluation>), Error> {
    let base = a.params()?.build_base()?;
    let q = base.q();
    let fact = polyring::factor_xm_minus_1(&base, a.m)?;
    Ok((q, kn::evaluate_bounds(q, &fact)?))
}

fn cmd_count(a: &FieldArgs, k: usize) -> Result<(), Error> {
    let (_, rows) = bound_rows(a)?;
    let row = rows
        .into_iter()
        .nth(k)
        .ok_or_else(|| Error::PreconditionViolated(format!("k={k} exceeds m={}", a.m)))?;
    a.emit(Format::Md, |fmt| match fmt {
        Format::Json => json(&row),
        Format::Md => format!("{}\n", row.formula_count),
        Format::Csv => format!("k,count\n{},{}\n", row.k, row.formula_count),
    })
}

fn cmd_bounds(a: &FieldArgs) -> Result<(), Error> {
    let (_, rows) = bound_rows(a)?;
    a.emit(Format::Md, |fmt| match fmt {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("k,count,bound,bound_exact,divisors,sound\n");
            for r in &rows {
                let b = r.bound();
                s.push_str(&format!(
                    "{},{},{},{}/{},{},{}\n",
                    r.k,
                    r.formula_count,
                    b.render(),
                    b.num,
                    b.den,
                    r.divisor_count,
                    r.is_sound()
                ));
            }
            s
        }
        Format::Md => {
            let mut s = String::from(
                "| k | # of k-normal elements | Φ_q(x^m-1)/q^k | exact | divisors of degree m-k | sound |\n|---|---|---|---|---|---|\n",
            );
            for r in &rows {
                let b = r.bound();
                s.push_str(&format!(
                    "| {} | {} | {} | {}/{} | {} | {} |\n",
                    r.k,
                    r.formula_count,
                    b.render(),
                    b.num,
                    b.den,
                    r.divisor_count,
                    if r.is_sound() { "yes" } else { "no" }
                ));
            }
            s
        }
    })
}

fn provenance_name(p: Provenance) -> &'static str {
    match p {
        Provenance::Always => "always",
        Provenance::DividesCase => "divides_case",
        Provenance::GcdCase => "gcd_case",
        Provenance::Reis => "reis",
        Provenance::None => "none",
    }
}

fn render_verdict(v: &ExistenceVerdict) -> String {
    let guaranteed: Vec<String> = (0..=v.m)
        .filter(|&k| v.guaranteed(k))
        .map(|k| k.to_string())
        .collect();
    let mut s = format!(
        "q={} m={} d={} b={} reis={}\nguaranteed k: {}\n\n| k | provenance |\n|---|---|\n",
        v.q,
        v.m,
        v.d,
        v.b.map_or("-".to_string(), |b| b.to_string()),
        v.reis,
        guaranteed.join(",")
    );
    for (k, p) in v.per_k.iter().enumerate() {
        s.push_str(&format!("| {k} | {} |\n", provenance_name(*p)));
    }
    s
}

fn cmd_exists(a: &FieldArgs) -> Result<(), Error> {
    let v = kn::existence_verdict(a.q()?, a.m)?;
    a.emit(Format::Md, |fmt| match fmt {
        Format::Json => json(&v),
        Format::Md => render_verdict(&v),
        Format::Csv => {
            let mut s = String::from("k,provenance,guaranteed\n");
            for (k, p) in v.per_k.iter().enumerate() {
                s.push_str(&format!("{k},{},{}\n", provenance_name(*p), p.guaranteed()));
            }
            s
        }
    })
}

#[derive(Serialize)]
struct FoundElement {
    index: u64,
    coords: String,
    k: usize,
    order: u64,
}

#[derive(Serialize)]
struct FindOutput {
    field: String,
    query: String,
    found: Option<FoundElement>,
}

fn cmd_find(a: &FieldArgs, k: Option<usize>, order: Option<&str>) -> Result<(), Error> {
    let ctx = a.tower()?;
    let (query, hit) = match (k, order) {
        (Some(k), _) => (format!("k={k}"), kn::find_k_normal(&ctx, k)?),
        (None, Some(spec)) => {
            let target = match spec {
                "primitive" => ctx.group_order(),
                "q1-primitive" => kn::q1_primitive_order(&ctx),
                n => n
                    .parse()
                    .map_err(|e| Error::Parse(format!("--order {n:?}: {e}")))?,
            };
            (
                format!("normal of order {target}"),
                kn::find_order_normal(&ctx, target)?,
            )
        }
        (None, None) => unreachable!("clap requires --k or --order"),
    };
    let found = hit.map(|e| describe(&ctx, &e)).transpose()?;
    let out = FindOutput {
        field: ctx.to_string(),
        query,
        found,
    };
    a.emit(Format::Md, |fmt| match fmt {
        Format::Json => json(&out),
        Format::Csv => match &out.found {
            Some(f) => format!(
                "index,coords,k,order\n{},\"{}\",{},{}\n",
                f.index, f.coords, f.k, f.order
            ),
            None => "index,coords,k,order\n".into(),
        },
        Format::Md => match &out.found {
            Some(f) => format!(
                "{}\n{}: index {} coords {} (k={}, order {})\n",
                out.field, out.query, f.index, f.coords, f.k, f.order
            ),
            None => format!(
                "{}\n{}: no such element (all {} elements searched)\n",
                out.field,
                out.query,
                ctx.field_size()
            ),
        },
    })
}

/// Re-derives k and the order of a found element rather than trusting the search.
fn describe(ctx: &TowerCtx, e: &FqmElem) -> Result<FoundElement, Error> {
    Ok(FoundElement {
        index: ctx.index_of(e),
        coords: format_indices(e.coords().iter().map(|c| c.0)),
        k: kn::k_via_rank(ctx, e),
        order: if e.is_zero() {
            0
        } else {
            ctx.multiplicative_order(e)?
        },
    })
}

#[derive(Serialize)]
struct NormalBasisOutput {
    field: String,
    generator: u64,
    /// Row-major; column i holds the coordinates of generator^{q^i}.
    basis_matrix: Vec<Vec<u64>>,
    inverse_matrix: Vec<Vec<u64>>,
    mult_table: MultTable,
}

fn index_rows(m: &knormal::linalg::Matrix<knormal::FqElem>) -> Vec<Vec<u64>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|c| c.0).collect())
        .collect()
}

fn matrix_md(title: &str, rows: &[Vec<u64>]) -> String {
    let n = rows.first().map_or(0, Vec::len);
    let header: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut s = format!(
        "{title}\n\n|   | {} |\n|---|{}\n",
        header.join(" | "),
        "---|".repeat(n)
    );
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        s.push_str(&format!("| {i} | {} |\n", cells.join(" | ")));
    }
    s
}

fn cmd_normal_basis(a: &FieldArgs, element: Option<u64>) -> Result<(), Error> {
    let ctx = a.tower()?;
    let alpha = match element {
        Some(i) => ctx.element(i)?,
        None => kn::find_k_normal(&ctx, 0)?
            .ok_or_else(|| Error::InternalInconsistency("no normal element".into()))?,
    };
    let nb = NormalBasis::new(&ctx, &alpha)?;
    let table = normal_basis::mult_table(&ctx, &nb);
    let out = NormalBasisOutput {
        field: ctx.to_string(),
        generator: ctx.index_of(&alpha),
        basis_matrix: index_rows(nb.basis_matrix()),
        inverse_matrix: index_rows(nb.inverse_matrix()),
        mult_table: table,
    };
    let table_rows: Vec<Vec<u64>> = out
        .mult_table
        .table
        .iter()
        .map(|r| r.iter().map(|c| c.0).collect())
        .collect();
    a.emit(Format::Md, |fmt| match fmt {
        Format::Json => json(&out),
        Format::Csv => {
            let mut s = String::from("i,j,t\n");
            for (i, row) in table_rows.iter().enumerate() {
                for (j, t) in row.iter().enumerate() {
                    s.push_str(&format!("{i},{j},{t}\n"));
                }
            }
            s
        }
        Format::Md => format!(
            "{}\ngenerator index {}\n\n{}\n{}\ndensity {} (least possible {})\n",
            out.field,
            out.generator,
            matrix_md("basis matrix", &out.basis_matrix),
            matrix_md("multiplication table", &table_rows),
            out.mult_table.density,
            out.mult_table.density_lower_bound
        ),
    })
}

fn cmd_tables(out: &Path, workers: usize) -> Result<(), Error> {
    fs::create_dir_all(out)
        .map_err(|e| Error::PreconditionViolated(format!("{}: {e}", out.display())))?;
    for t in &PUBLISHED {
        let g = reference::arbitrate(t, workers)?;
        let path = out.join(g.file_name());
        write_output(Some(&path), &g.to_json())?;
        let errata: Vec<String> = g.errata().map(|r| format!("k={}", r.k)).collect();
        println!(
            "{}: q={} m={} errata [{}] footer {} (published {})",
            path.display(),
            g.q,
            g.m,
            errata.join(","),
            g.q1_primitive_normal.computed,
            g.q1_primitive_normal.published
        );
    }
    Ok(())
}
