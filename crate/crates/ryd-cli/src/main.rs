//! Command-line front end for the `ryd` Schubert calculus library.
//!
//! Exit codes: 0 on success (including a clean verification run), 1 when a
//! verification suite finds violations, 2 on usage, parse or validation
//! errors.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};
use std::ops::Range;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ryd::nonzero::{nonzero_predicate, verify_polytope_description};
use ryd::oracle::Oracle;
use ryd::shapes::{enumerate_shapes, FamilyCtx};
use ryd::{multiply, ClassCombo, Family, RydError, Shape};

#[derive(Parser)]
#[command(
    name = "ryd",
    version,
    about = "Exact Schubert calculus on (co)adjoint homogeneous spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FamilySelector {
    /// Family: Flag, LG, OGodd, OGeven, ChainB, ChainC, G2P1 or G2P2.
    #[arg(long)]
    family: String,
    /// The family parameter n (never a dimension); ignored for G2.
    #[arg(long)]
    n: Option<u32>,
}

impl FamilySelector {
    fn resolve(&self) -> Result<Family, RydError> {
        Family::from_parts(&self.family, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two Schubert classes and print the expansion.
    Multiply {
        #[command(flatten)]
        selector: FamilySelector,
        /// Left factor, e.g. "3,1|off", "4|on" or "4,1|off|up".
        lambda: String,
        /// Right factor.
        mu: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List every Schubert class of a family.
    Enumerate {
        #[command(flatten)]
        selector: FamilySelector,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether a structure constant is nonzero.
    Nonzero {
        #[command(flatten)]
        selector: FamilySelector,
        lambda: String,
        mu: String,
        /// The class whose coefficient is queried.
        nu: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dump the whole multiplication table.
    Table {
        #[command(flatten)]
        selector: FamilySelector,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run an exhaustive verification suite (assoc, oracle, polytope,
    /// counts or values).
    Verify {
        /// One of: assoc, oracle, polytope, counts, values.
        suite: String,
        #[command(flatten)]
        selector: FamilySelector,
    },
    /// Draw the diagram frame of a family, optionally overlaying a class.
    Render {
        #[command(flatten)]
        selector: FamilySelector,
        /// Class to overlay; omitted, every box is drawn open.
        shape: Option<String>,
    },
}

enum CliError {
    Ryd(RydError),
    Io(io::Error),
}

impl From<RydError> for CliError {
    fn from(err: RydError) -> CliError {
        CliError::Ryd(err)
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> CliError {
        CliError::Io(err)
    }
}

/// Buffered stdout.  Routing every line through one writer lets a closed
/// pipe (`ryd table | head`) end the program quietly instead of panicking.
struct Out {
    writer: io::BufWriter<io::StdoutLock<'static>>,
}

impl Out {
    fn new() -> Out {
        Out {
            writer: io::BufWriter::new(io::stdout().lock()),
        }
    }

    fn line(&mut self, args: std::fmt::Arguments<'_>) -> io::Result<()> {
        self.writer.write_fmt(args)?;
        self.writer.write_all(b"\n")
    }

    fn flush(&mut self) -> io::Result<()> {
        self.writer.flush()
    }
}

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {
        $out.line(format_args!($($arg)*))
    };
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Out::new();
    match run(cli.command, &mut out) {
        Ok(code) => code,
        Err(CliError::Io(err)) if err.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(CliError::Io(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(CliError::Ryd(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut Out) -> Result<ExitCode, CliError> {
    let code = match command {
        Command::Multiply {
            selector,
            lambda,
            mu,
            format,
        } => {
            let family = selector.resolve()?;
            run_multiply(out, family, &lambda, &mu, format)?;
            ExitCode::SUCCESS
        }
        Command::Enumerate { selector, format } => {
            let family = selector.resolve()?;
            run_enumerate(out, family, format)?;
            ExitCode::SUCCESS
        }
        Command::Nonzero {
            selector,
            lambda,
            mu,
            nu,
            format,
        } => {
            let family = selector.resolve()?;
            run_nonzero(out, family, &lambda, &mu, &nu, format)?;
            ExitCode::SUCCESS
        }
        Command::Table { selector, format } => {
            let family = selector.resolve()?;
            run_table(out, family, format)?;
            ExitCode::SUCCESS
        }
        Command::Verify { suite, selector } => {
            let family = selector.resolve()?;
            run_verify(out, &suite, family)?
        }
        Command::Render { selector, shape } => {
            let family = selector.resolve()?;
            run_render(out, family, shape.as_deref())?;
            ExitCode::SUCCESS
        }
    };
    out.flush()?;
    Ok(code)
}

/// Short family token used on the command line and in JSON output.
fn cli_name(family: Family) -> &'static str {
    match family {
        Family::Flag { .. } => "Flag",
        Family::LG { .. } => "LG",
        Family::OGodd { .. } => "OGodd",
        Family::OGeven { .. } => "OGeven",
        Family::ChainB { .. } => "ChainB",
        Family::ChainC { .. } => "ChainC",
        Family::G2P1 => "G2P1",
        Family::G2P2 => "G2P2",
    }
}

/// Shape strings may contain commas, so CSV fields are always quoted.
/// The canonical forms never contain quotes themselves.
fn csv_field(text: &str) -> String {
    format!("\"{text}\"")
}

/// Expansion terms as display strings, sorted lexicographically so output
/// is stable for diff-based golden tests.
fn sorted_terms(product: &ClassCombo) -> Result<Vec<(String, i64)>, RydError> {
    let mut rows: Vec<(String, i64)> = product
        .integer_terms()?
        .into_iter()
        .map(|(shape, coeff)| (shape.to_string(), coeff))
        .collect();
    rows.sort();
    Ok(rows)
}

fn run_multiply(
    out: &mut Out,
    family: Family,
    lambda: &str,
    mu: &str,
    format: Format,
) -> Result<(), CliError> {
    let lam = Shape::parse(family, lambda)?;
    let mu = Shape::parse(family, mu)?;
    let rows = sorted_terms(&multiply(&lam, &mu)?)?;
    match format {
        Format::Text => {
            for (shape, coeff) in &rows {
                outln!(out, "{coeff} * {shape}")?;
            }
        }
        Format::Json => {
            let terms: Vec<serde_json::Value> = rows
                .iter()
                .map(|(shape, coeff)| serde_json::json!({ "shape": shape, "coeff": coeff }))
                .collect();
            let doc = serde_json::json!({
                "family": cli_name(family),
                "n": family.n(),
                "terms": terms,
            });
            outln!(out, "{doc}")?;
        }
        Format::Csv => {
            outln!(out, "lambda,mu,nu,coeff")?;
            for (shape, coeff) in &rows {
                outln!(
                    out,
                    "{},{},{},{coeff}",
                    csv_field(&lam.to_string()),
                    csv_field(&mu.to_string()),
                    csv_field(shape),
                )?;
            }
        }
    }
    Ok(())
}

fn run_enumerate(out: &mut Out, family: Family, format: Format) -> Result<(), CliError> {
    let shapes = enumerate_shapes(family)?;
    match format {
        Format::Text => {
            for shape in &shapes {
                outln!(out, "{shape}")?;
            }
        }
        Format::Json => {
            let listed: Vec<String> = shapes.iter().map(Shape::to_string).collect();
            let doc = serde_json::json!({
                "family": cli_name(family),
                "n": family.n(),
                "shapes": listed,
            });
            outln!(out, "{doc}")?;
        }
        Format::Csv => {
            outln!(out, "shape")?;
            for shape in &shapes {
                outln!(out, "{}", csv_field(&shape.to_string()))?;
            }
        }
    }
    Ok(())
}

fn run_nonzero(
    out: &mut Out,
    family: Family,
    lambda: &str,
    mu: &str,
    nu: &str,
    format: Format,
) -> Result<(), CliError> {
    let lam = Shape::parse(family, lambda)?;
    let mu = Shape::parse(family, mu)?;
    let nu = Shape::parse(family, nu)?;
    let hit = nonzero_predicate(&lam, &mu, &nu)?;
    match format {
        Format::Text => outln!(out, "{hit}")?,
        Format::Json => {
            let doc = serde_json::json!({
                "family": cli_name(family),
                "n": family.n(),
                "lambda": lam.to_string(),
                "mu": mu.to_string(),
                "nu": nu.to_string(),
                "nonzero": hit,
            });
            outln!(out, "{doc}")?;
        }
        Format::Csv => {
            outln!(out, "lambda,mu,nu,nonzero")?;
            outln!(
                out,
                "{},{},{},{hit}",
                csv_field(&lam.to_string()),
                csv_field(&mu.to_string()),
                csv_field(&nu.to_string()),
            )?;
        }
    }
    Ok(())
}

fn run_table(out: &mut Out, family: Family, format: Format) -> Result<(), CliError> {
    let shapes = enumerate_shapes(family)?;
    let mut header_done = false;
    let mut entries: Vec<serde_json::Value> = Vec::new();
    for lam in &shapes {
        for mu in &shapes {
            let rows = sorted_terms(&multiply(lam, mu)?)?;
            match format {
                Format::Text => {
                    let sum = if rows.is_empty() {
                        "0".to_string()
                    } else {
                        rows.iter()
                            .map(|(shape, coeff)| format!("{coeff} * {shape}"))
                            .collect::<Vec<_>>()
                            .join(" + ")
                    };
                    outln!(out, "{lam} * {mu} = {sum}")?;
                }
                Format::Csv => {
                    if !header_done {
                        outln!(out, "lambda,mu,nu,coeff")?;
                        header_done = true;
                    }
                    for (shape, coeff) in &rows {
                        outln!(
                            out,
                            "{},{},{},{coeff}",
                            csv_field(&lam.to_string()),
                            csv_field(&mu.to_string()),
                            csv_field(shape),
                        )?;
                    }
                }
                Format::Json => {
                    for (shape, coeff) in &rows {
                        entries.push(serde_json::json!({
                            "lambda": lam.to_string(),
                            "mu": mu.to_string(),
                            "nu": shape,
                            "coeff": coeff,
                        }));
                    }
                }
            }
        }
    }
    if format == Format::Json {
        let doc = serde_json::json!({
            "family": cli_name(family),
            "n": family.n(),
            "entries": entries,
        });
        outln!(out, "{doc}")?;
    }
    Ok(())
}

/// Worker count for the exhaustive suites: the available parallelism,
/// capped by the `RYD_THREADS` environment variable when set.
fn worker_count() -> Result<usize, RydError> {
    let available = std::thread::available_parallelism()
        .map(|v| v.get())
        .unwrap_or(1);
    match std::env::var("RYD_THREADS") {
        Ok(raw) => {
            let cap: usize = raw.parse().ok().filter(|&k| k >= 1).ok_or_else(|| {
                RydError::Invalid(format!(
                    "RYD_THREADS must be a positive integer, got {raw:?}"
                ))
            })?;
            Ok(cap.min(available))
        }
        Err(_) => Ok(available),
    }
}

/// Splits `0..len` into at most `workers` contiguous ranges of near-equal
/// size.
fn chunk_ranges(len: usize, workers: usize) -> Vec<Range<usize>> {
    let workers = workers.clamp(1, len.max(1));
    let base = len / workers;
    let extra = len % workers;
    let mut ranges = Vec::with_capacity(workers);
    let mut start = 0;
    for i in 0..workers {
        let size = base + usize::from(i < extra);
        ranges.push(start..start + size);
        start += size;
    }
    ranges
}

/// Runs `check` over `0..count` on worker threads and returns the combined
/// failure list, sorted so the report is deterministic.
fn parallel_failures<F>(count: usize, workers: usize, check: F) -> Vec<String>
where
    F: Fn(usize) -> Vec<String> + Sync,
{
    let check = &check;
    let mut failures = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunk_ranges(count, workers)
            .into_iter()
            .map(|range| scope.spawn(move || range.flat_map(check).collect::<Vec<String>>()))
            .collect();
        for handle in handles {
            failures.extend(handle.join().expect("verification worker panicked"));
        }
    });
    failures.sort();
    failures
}

fn run_verify(out: &mut Out, suite: &str, family: Family) -> Result<ExitCode, CliError> {
    let failures = match suite.to_ascii_lowercase().as_str() {
        "assoc" => verify_assoc(out, family)?,
        "oracle" => verify_oracle(out, family)?,
        "polytope" => verify_polytope(out, family)?,
        "counts" => verify_counts(out, family)?,
        "values" => verify_values(out, family)?,
        _ => {
            return Err(CliError::Ryd(RydError::Parse {
                what: "suite",
                input: suite.to_string(),
            }))
        }
    };
    for failure in &failures {
        outln!(out, "FAIL {failure}")?;
    }
    if failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn verify_assoc(out: &mut Out, family: Family) -> Result<Vec<String>, CliError> {
    let shapes = enumerate_shapes(family)?;
    let index: BTreeMap<Shape, usize> = shapes.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut table: Vec<Vec<ClassCombo>> = Vec::with_capacity(shapes.len());
    for lam in &shapes {
        let mut row = Vec::with_capacity(shapes.len());
        for mu in &shapes {
            row.push(multiply(lam, mu)?);
        }
        table.push(row);
    }
    let workers = worker_count()?;
    let failures = parallel_failures(shapes.len(), workers, |i| {
        let mut bad = Vec::new();
        for j in 0..shapes.len() {
            for k in 0..shapes.len() {
                let mut left = ClassCombo::new(family);
                for (t, c) in table[i][j].iter() {
                    left.add_scaled(&table[index[t]][k], *c);
                }
                let mut right = ClassCombo::new(family);
                for (t, c) in table[j][k].iter() {
                    right.add_scaled(&table[i][index[t]], *c);
                }
                if left != right {
                    bad.push(format!(
                        "assoc {family}: ({} * {}) * {} differs",
                        shapes[i], shapes[j], shapes[k]
                    ));
                }
            }
        }
        bad
    });
    let triples = shapes.len().pow(3);
    outln!(
        out,
        "assoc {family}: {triples} triples checked, {} violations",
        failures.len()
    )?;
    Ok(failures)
}

fn verify_oracle(out: &mut Out, family: Family) -> Result<Vec<String>, CliError> {
    let oracle = Oracle::new(family)?;
    let shapes = enumerate_shapes(family)?;
    let workers = worker_count()?;
    let failures = parallel_failures(shapes.len(), workers, |i| {
        let mut bad = Vec::new();
        for mu in &shapes {
            let lam = &shapes[i];
            let agree = match (oracle.multiply(lam, mu), multiply(lam, mu)) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            };
            if !agree {
                bad.push(format!("oracle {family}: {lam} * {mu} differs"));
            }
        }
        bad
    });
    outln!(
        out,
        "oracle {family}: {} products compared, {} mismatches",
        shapes.len() * shapes.len(),
        failures.len()
    )?;
    Ok(failures)
}

fn verify_polytope(out: &mut Out, family: Family) -> Result<Vec<String>, CliError> {
    let report = verify_polytope_description(family)?;
    let mut failures = Vec::new();
    if report.mismatches > 0 {
        let shapes = enumerate_shapes(family)?;
        for lam in &shapes {
            for mu in &shapes {
                let product = multiply(lam, mu)?;
                for nu in &shapes {
                    let hit = product.coeff(nu) != 0.into();
                    if hit != nonzero_predicate(lam, mu, nu)? {
                        failures.push(format!("polytope {family}: {lam}, {mu}, {nu} disagrees"));
                    }
                }
            }
        }
    }
    outln!(
        out,
        "polytope {family}: {} triples checked, {} nonzero, {} mismatches",
        report.triples,
        report.nonzero,
        report.mismatches
    )?;
    Ok(failures)
}

fn verify_counts(out: &mut Out, family: Family) -> Result<Vec<String>, CliError> {
    let shapes = enumerate_shapes(family)?;
    let expected = family.num_classes() as usize;
    let distinct = shapes.iter().collect::<BTreeSet<_>>().len();
    outln!(
        out,
        "counts {family}: |Y| = {}, expected {expected}",
        shapes.len()
    )?;
    let mut failures = Vec::new();
    if shapes.len() != expected {
        failures.push(format!(
            "counts {family}: enumerated {} classes, expected {expected}",
            shapes.len()
        ));
    }
    if distinct != shapes.len() {
        failures.push(format!("counts {family}: enumeration contains duplicates"));
    }
    Ok(failures)
}

fn verify_values(out: &mut Out, family: Family) -> Result<Vec<String>, CliError> {
    let allowed: &[i64] = match family {
        Family::Flag { .. } | Family::ChainC { .. } => &[0, 1],
        Family::LG { .. } | Family::ChainB { .. } | Family::G2P1 => &[0, 1, 2],
        Family::OGodd { .. } | Family::OGeven { .. } => &[0, 1, 2, 4, 8],
        Family::G2P2 => &[0, 1, 2, 3],
    };
    let shapes = enumerate_shapes(family)?;
    // Vanishing constants exist in every family (degrees differ), so zero
    // is always part of the observed set.
    let mut observed = BTreeSet::from([0i64]);
    for lam in &shapes {
        for mu in &shapes {
            for (_, coeff) in multiply(lam, mu)?.integer_terms()? {
                observed.insert(coeff);
            }
        }
    }
    let listed = observed
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    outln!(out, "values {family}: observed value set {{{listed}}}")?;
    let rogue: Vec<String> = observed
        .iter()
        .filter(|value| !allowed.contains(value))
        .map(|value| format!("values {family}: unexpected coefficient {value}"))
        .collect();
    Ok(rogue)
}

fn run_render(out: &mut Out, family: Family, shape: Option<&str>) -> Result<(), CliError> {
    let ctx = FamilyCtx::new(family)?;
    let (header, used) = match shape {
        Some(text) => {
            let parsed = Shape::parse(family, text)?;
            let used = ctx.root_set(&parsed)?;
            (format!("{family}  {parsed}"), used)
        }
        None => (family.to_string(), BTreeSet::new()),
    };
    outln!(out, "{header}")?;
    let cells = |roots: &[usize]| -> String {
        roots
            .iter()
            .map(|idx| if used.contains(idx) { "[#]" } else { "[ ]" })
            .collect()
    };
    outln!(out, "{:<6}{}", "top", cells(&[ctx.layout.adjoint]))?;
    // The even orthogonal frame keeps both top arms visible above the two
    // full-width bottom rows; everything else is one or two plain rows.
    let rows: Vec<(&str, &[usize])> = match family {
        Family::OGeven { .. } => vec![
            ("arm a", ctx.layout.rows[2].as_slice()),
            ("arm b", ctx.layout.rows[3].as_slice()),
            ("row a", ctx.layout.rows[0].as_slice()),
            ("row b", ctx.layout.rows[1].as_slice()),
        ],
        Family::Flag { .. } => vec![
            ("arm a", ctx.layout.rows[0].as_slice()),
            ("arm b", ctx.layout.rows[1].as_slice()),
        ],
        Family::LG { .. } | Family::OGodd { .. } => vec![
            ("row a", ctx.layout.rows[0].as_slice()),
            ("row b", ctx.layout.rows[1].as_slice()),
        ],
        _ => vec![("row", ctx.layout.rows[0].as_slice())],
    };
    for (label, roots) in rows {
        outln!(out, "{label:<6}{}", cells(roots))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_ranges_cover_everything_once() {
        for len in [0usize, 1, 5, 16, 17] {
            for workers in [1usize, 2, 3, 8, 64] {
                let ranges = chunk_ranges(len, workers);
                let mut seen = Vec::new();
                for range in &ranges {
                    seen.extend(range.clone());
                }
                assert_eq!(seen, (0..len).collect::<Vec<_>>(), "{len} / {workers}");
            }
        }
    }

    #[test]
    fn csv_fields_are_quoted() {
        assert_eq!(csv_field("3,1|off"), "\"3,1|off\"");
    }

    #[test]
    fn family_tokens_round_trip() {
        for (token, n) in [
            ("Flag", Some(5)),
            ("LG", Some(4)),
            ("OGodd", Some(4)),
            ("OGeven", Some(5)),
            ("ChainB", Some(3)),
            ("ChainC", Some(3)),
            ("G2P1", None),
            ("G2P2", None),
        ] {
            let family = Family::from_parts(token, n).unwrap();
            assert_eq!(cli_name(family), token);
        }
    }
}
