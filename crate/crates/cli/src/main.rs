use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use krss_core::bredon::{ro_graded, Site};
use krss_core::coeffring::{Theory, Window};
use krss_core::krtower::{self, default_window, KOReference, Mode, Space, Variant};
use krss_core::mackey::MackeyZ2;
use krss_core::render::{coefficient_table, render_page, render_table, Format, Indexing};
use krss_core::verify::{self, Suite};

#[derive(Parser)]
#[command(name = "krss", version, about = "Bredon cohomology and KR-theory spectral sequence charts")]
struct Cli {
    /// write the document here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryArg {
    Hz,
    Hzet,
}

#[derive(Clone, Copy, ValueEnum)]
enum SiteArg {
    Pt,
    Orbit,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Kr,
    Kret,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Kr => Variant::Kr,
            VariantArg::Kret => Variant::KrEt,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Stable,
    Unstable,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Svg,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Svg => Format::Svg,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum IndexingArg {
    Serre,
    Adams,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form coefficient table of HZ or its etale version
    Coeff {
        #[arg(long, value_enum, default_value = "hz")]
        theory: TheoryArg,
        #[arg(long, value_enum, default_value = "pt")]
        site: SiteArg,
        #[arg(long, default_value_t = -8, allow_hyphen_values = true)]
        pmin: i64,
        #[arg(long, default_value_t = 8, allow_hyphen_values = true)]
        pmax: i64,
        #[arg(long, default_value_t = -8, allow_hyphen_values = true)]
        qmin: i64,
        #[arg(long, default_value_t = 8, allow_hyphen_values = true)]
        qmax: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// One Bredon group computed from cellular chains
    Bredon {
        /// `pt`, `orbit`, `S(p,q)`, `orbit(E)` or `smash(E,E)`
        #[arg(long, default_value = "pt")]
        space: String,
        /// `Z`, `Zop` or `A`
        #[arg(long, default_value = "Z")]
        mackey: String,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
    /// A page of the KR spectral sequence
    Ss {
        /// `pt`, `orbit` or `S(c,d)`
        #[arg(long, default_value = "pt")]
        space: String,
        #[arg(long, value_enum, default_value = "kr")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "stable")]
        mode: ModeArg,
        /// 2, 3, 4 or inf
        #[arg(long, default_value = "2")]
        page: String,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long, value_enum, default_value = "serre")]
        indexing: IndexingArg,
    },
    /// Associated graded of one column against the KO or KU reference
    Abutment {
        #[arg(long, value_enum, default_value = "kr")]
        variant: VariantArg,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long, default_value = "pt")]
        space: String,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Run acceptance checks
    Verify {
        /// coeffs, ring, ss, etale or all
        suite: String,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
        #[arg(long, hide = true)]
        flip_transfer: bool,
    },
}

enum Failure {
    Verification,
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let (doc, status) = match execute(cli.command) {
        Ok(doc) => (doc, ExitCode::SUCCESS),
        Err((doc, Failure::Verification)) => (doc, ExitCode::from(1)),
        Err((_, Failure::Usage(e))) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match cli.out {
        Some(path) => {
            if let Err(e) = fs::write(&path, doc) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{doc}"),
    }
    status
}

fn execute(cmd: Command) -> std::result::Result<String, (String, Failure)> {
    match cmd {
        Command::Verify { suite, format, flip_transfer } => run_verify(&suite, format, flip_transfer),
        other => run(other).map_err(|e| (String::new(), Failure::Usage(e))),
    }
}

fn run(cmd: Command) -> Result<String> {
    match cmd {
        Command::Coeff {
            theory,
            site,
            pmin,
            pmax,
            qmin,
            qmax,
            format,
        } => {
            let t = match (site, theory) {
                (SiteArg::Orbit, _) => Theory::Orbit,
                (SiteArg::Pt, TheoryArg::Hz) => Theory::Pt,
                (SiteArg::Pt, TheoryArg::Hzet) => Theory::Etale,
            };
            let window = Window::new(pmin, pmax, qmin, qmax);
            let title = format!("{t:?} coefficients");
            Ok(render_table(&title, window, &coefficient_table(t, window), format.into()))
        }
        Command::Bredon { space, mackey, p, q } => {
            let site = Site::parse(&space)?;
            let m = MackeyZ2::named(&mackey)?;
            Ok(format!("{}\n", ro_graded(&site, p, q, &m)?))
        }
        Command::Ss {
            space,
            variant,
            mode,
            page,
            format,
            indexing,
        } => {
            let space: Space = space.parse().map_err(|e| anyhow!("{e}"))?;
            let mode = match mode {
                ModeArg::Stable => Mode::Stable,
                ModeArg::Unstable => Mode::Unstable,
            };
            let variant = Variant::from(variant);
            let tower = krtower::build(space, variant, mode, default_window())?;
            let e = tower.page(&page)?;
            let indexing = match indexing {
                IndexingArg::Serre => Indexing::Serre,
                IndexingArg::Adams => Indexing::Adams,
            };
            let title = format!("{variant:?} {space} E{page}");
            Ok(render_page(&title, &e, indexing, format.into()))
        }
        Command::Abutment {
            variant,
            degree,
            space,
            format,
        } => {
            let space: Space = space.parse().map_err(|e| anyhow!("{e}"))?;
            let tower = krtower::build(space, variant.into(), Mode::Stable, default_window())?;
            let column = tower.column(degree);
            let expected = KOReference::expected(space, degree);
            match format {
                ReportFormat::Json => Ok(serde_json::to_string_pretty(&column).context("serializing column")? + "\n"),
                ReportFormat::Text => Ok(match &column {
                    krtower::Column::Certified(g) => {
                        let verdict = krtower::match_reference(g, &expected);
                        format!("{g}\nreference {expected}: {verdict:?}\n")
                    }
                    krtower::Column::Indeterminate { degree, reason } => format!("n={degree}: indeterminate ({reason})\n"),
                }),
            }
        }
        Command::Verify { .. } => unreachable!("handled by execute"),
    }
}

fn run_verify(suite: &str, format: ReportFormat, flip: bool) -> std::result::Result<String, (String, Failure)> {
    let suite: Suite = suite.parse().map_err(|e: String| (String::new(), Failure::Usage(anyhow!(e))))?;
    let mut cfg = verify::Config::default();
    if flip {
        cfg = cfg.with_flipped_transfer();
    }
    let outcomes = verify::run(suite, &cfg);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let doc = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&outcomes).expect("serializable") + "\n",
        ReportFormat::Text => {
            let mut s: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
            s += &format!("{suite}: {} passed, {failed} failed\n", outcomes.len() - failed);
            s
        }
    };
    if failed > 0 {
        Err((doc, Failure::Verification))
    } else {
        Ok(doc)
    }
}
