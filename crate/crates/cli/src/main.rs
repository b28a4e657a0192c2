//! `mbflow`: homology, inequalities and spectral sequences of flow category files.

use std::fmt::Write as _;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mbflow::fixtures::{catalog, fixture, BorelSpec};
use mbflow::flowcat::{bimodule_to_map, dualize, realize, validate_category, BimoduleData, FlowCategoryData};
use mbflow::format::{
    parse_bimodule, parse_category, parse_category_unchecked, serialize_category, CategoryFile, FormatError, Oracle,
};
use mbflow::homalg::dim_t;
use mbflow::inequalities::{equivariant_inequality, mb_inequality, InequalityReport};
use mbflow::twisted::spectral_sequence;
use mbflow::{homology, CoefficientRing, Error, HomologySummary};

#[derive(Parser)]
#[command(name = "mbflow", version, about = "Chain-level Morse-Bott flow categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a category file; exit 0 iff it is valid.
    Validate { file: PathBuf },
    /// Homology of the realization.
    Homology {
        file: PathBuf,
        /// `Z`, `Fp:<p>` or `F<p>`; defaults to the file's ring.
        #[arg(long)]
        ring: Option<String>,
    },
    /// Poincaré polynomial of the realization.
    Poincare { file: PathBuf },
    /// Morse-Bott inequality report; exit 0 iff it holds.
    CheckIneq {
        file: PathBuf,
        /// Treat the file as the fiber of a truncated Borel model.
        #[arg(long, requires = "cutoff")]
        equivariant: bool,
        /// Highest degree compared in equivariant mode.
        #[arg(long)]
        cutoff: Option<i64>,
        /// Truncation level of the Borel model; defaults to the least level covering the cutoff.
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Pages of the index-filtration spectral sequence.
    Ss {
        file: PathBuf,
        #[arg(long)]
        field: u64,
        #[arg(long, default_value_t = 4)]
        max_page: usize,
    },
    /// Homology of the cone of a bimodule map.
    Cone { source: PathBuf, target: PathBuf, bimodule: PathBuf },
    /// Homology of the dual category.
    Dual {
        file: PathBuf,
        #[arg(long)]
        ambient_dim: i64,
    },
    /// Shipped fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    List,
    /// Write a fixture file to standard output or a path.
    Emit {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit status and message of a failed command.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        let code = match e {
            FormatError::Validation(_) => 1,
            FormatError::Parse { .. } | FormatError::Schema { .. } => 2,
            FormatError::Ring { .. } => 3,
        };
        Self::new(code, e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::UnsupportedRing(_)) { 3 } else { 1 };
        Self::new(code, e.to_string())
    }
}

struct Style {
    color: bool,
}

impl Style {
    fn detect() -> Self {
        let color = match std::env::var("MBFLOW_COLOR") {
            Ok(v) => v != "0",
            Err(_) => std::io::stdout().is_terminal(),
        };
        Self { color }
    }

    fn verdict(&self, ok: bool, text: &str) -> String {
        match (self.color, ok) {
            (false, _) => text.to_string(),
            (true, true) => format!("\x1b[32m{text}\x1b[0m"),
            (true, false) => format!("\x1b[31m{text}\x1b[0m"),
        }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<CategoryFile, Failure> {
    Ok(parse_category(&read(path)?)?)
}

fn realized_homology(f: &FlowCategoryData) -> Result<HomologySummary, Failure> {
    Ok(homology(&realize(f)?.totalize()?)?)
}

fn validate(path: &Path, style: &Style) -> Outcome {
    let file = parse_category_unchecked(&read(path)?)?;
    let f = &file.category;
    let issues = validate_category(f);
    if !issues.is_empty() {
        let lines: Vec<String> = issues.iter().map(|d| d.to_string()).collect();
        return Err(Failure::new(1, lines.join("\n")));
    }
    realize(f)?;
    let mut out = format!(
        "{}: {} objects, {} correspondences\n",
        style.verdict(true, "valid"),
        f.objects.len(),
        f.correspondences.len()
    );
    if let Some(Oracle { expected_homology, .. }) = &file.oracle {
        let matches = realized_homology(f)? == *expected_homology;
        writeln!(out, "oracle: {}", style.verdict(matches, if matches { "matches" } else { "differs" })).unwrap();
        if !matches {
            return Err(Failure::new(1, format!("{out}computed homology differs from the oracle")));
        }
    }
    Ok((out, 0))
}

fn report(r: &InequalityReport, style: &Style) -> (String, u8) {
    let text = r.to_string().replace("holds: yes", &format!("holds: {}", style.verdict(true, "yes")));
    let text = text.replace("holds: no", &format!("holds: {}", style.verdict(false, "no")));
    (text, if r.holds { 0 } else { 4 })
}

fn check_ineq(path: &Path, equivariant: bool, cutoff: Option<i64>, levels: Option<usize>, style: &Style) -> Outcome {
    let f = load(path)?.category;
    if !equivariant {
        return Ok(report(&mb_inequality(&f)?, style));
    }
    let cutoff = cutoff.expect("clap requires a cutoff");
    let levels = levels.unwrap_or_else(|| usize::try_from(cutoff.max(0) / 2 + 1).unwrap_or(1));
    Ok(report(&equivariant_inequality(&BorelSpec::new(levels, f), cutoff)?, style))
}

fn ss(path: &Path, field: u64, max_page: usize) -> Outcome {
    let ring = CoefficientRing::prime_field(field)?;
    let f = load(path)?.category.with_ring(ring)?;
    let result = spectral_sequence(&realize(&f)?, max_page)?;
    let mut out = format!("spectral sequence over F_{}\n", result.prime);
    for page in &result.pages {
        writeln!(out, "E{}:", page.r).unwrap();
        for (&(p, q), &d) in &page.dims {
            writeln!(out, "  ({p},{q}) {d}").unwrap();
        }
        for ((p, q), rows) in &page.differentials {
            writeln!(
                out,
                "  d{} ({p},{q}) -> ({},{}) rank {}",
                page.r,
                p - page.r as i64,
                q + page.r as i64 - 1,
                rows.len()
            )
            .unwrap();
        }
    }
    writeln!(out, "E_inf:").unwrap();
    for (&(p, q), &d) in &result.e_infinity {
        writeln!(out, "  ({p},{q}) {d}").unwrap();
    }
    match result.collapse_page {
        Some(r) => writeln!(out, "collapses at E{r}").unwrap(),
        None => writeln!(out, "no collapse within {max_page} pages").unwrap(),
    }
    if let Some(msg) = &result.audit_failure {
        return Err(Failure::new(1, format!("{out}audit failed: {msg}")));
    }
    Ok((out, 0))
}

fn cone(source: &Path, target: &Path, bimodule: &Path, style: &Style) -> Outcome {
    let (s, t) = (load(source)?.category, load(target)?.category);
    let blocks = parse_bimodule(&read(bimodule)?, &s, &t)?.blocks;
    let map = bimodule_to_map(&BimoduleData { source: s, target: t, blocks })?;
    let h = homology(&map.cone().totalize()?)?;
    let quasi = h.is_zero();
    let mut out = format!("cone homology\n{h}");
    writeln!(out, "quasi-isomorphism: {}", style.verdict(quasi, if quasi { "yes" } else { "no" })).unwrap();
    Ok((out, 0))
}

fn fixtures(action: FixtureAction) -> Outcome {
    match action {
        FixtureAction::List => {
            let width = catalog().iter().map(|f| f.name.len()).max().unwrap_or(0);
            let out = catalog().iter().map(|f| format!("{:width$}  {}\n", f.name, f.description)).collect();
            Ok((out, 0))
        }
        FixtureAction::Emit { name, out } => {
            let fx = fixture(&name).ok_or_else(|| Failure::new(1, format!("no fixture named `{name}`")))?;
            let text = serialize_category(&CategoryFile {
                category: fx.category,
                oracle: fx.expected.map(|h| Oracle { description: fx.description.to_string(), expected_homology: h }),
            });
            match out {
                None => Ok((text, 0)),
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
                    Ok((String::new(), 0))
                }
            }
        }
    }
}

fn run(command: Command, style: &Style) -> Outcome {
    match command {
        Command::Validate { file } => validate(&file, style),
        Command::Homology { file, ring } => {
            let mut f = load(&file)?.category;
            if let Some(r) = ring {
                f = f.with_ring(r.parse()?)?;
            }
            Ok((realized_homology(&f)?.to_string(), 0))
        }
        Command::Poincare { file } => Ok((format!("{}\n", dim_t(&realized_homology(&load(&file)?.category)?)), 0)),
        Command::CheckIneq { file, equivariant, cutoff, levels } => {
            check_ineq(&file, equivariant, cutoff, levels, style)
        }
        Command::Ss { file, field, max_page } => ss(&file, field, max_page),
        Command::Cone { source, target, bimodule } => cone(&source, &target, &bimodule, style),
        Command::Dual { file, ambient_dim } => {
            let d = dualize(&load(&file)?.category, ambient_dim)?;
            Ok((realized_homology(&d)?.to_string(), 0))
        }
        Command::Fixtures { action } => fixtures(action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::detect();
    match run(cli.command, &style) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
