use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand, ValueEnum};

use noncentral::spectrum::{DegeneracyRule, EllRule, SpecialCase};
use noncentral::thermo::{GridSpec, DEFAULT_JUMP_THRESHOLD};
use noncentral::{DerivativeScheme, FormulaVariant, Method, Mode, PartitionModel, PotentialParams, SweepSpec};
use noncentral_cli::dataset::FigureId;
use noncentral_cli::manifest::{
    MethodChoice, OutputFormat, PartitionOptions, SpectrumOptions, Subcommand, SweepOptions,
};
use noncentral_cli::verify::VerifyConfig;
use noncentral_cli::{execute, CliError, RunManifest};

/// Spectra and thermodynamics of the oscillator plus non-central angular potential.
#[derive(Debug, Parser)]
#[command(name = "noncentral", version)]
struct Cli {
    /// Run a saved manifest instead of a subcommand.
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,

    /// Write the manifest of this run to PATH.
    #[arg(long, value_name = "PATH")]
    save_manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, default_value_t = 1.0)]
    a1: f64,
    #[arg(long, default_value_t = 0.0)]
    a2: f64,
    #[arg(long, default_value_t = 0.0)]
    a3: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    #[value(name = "1d")]
    OneD,
    #[value(name = "3d")]
    ThreeD,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::OneD => Mode::OneD,
            ModeArg::ThreeD => Mode::ThreeD,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CaseArg {
    General,
    A2Only,
    A3Only,
    Oscillator,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EllRuleArg {
    Continuous,
    Floor,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DegeneracyArg {
    All,
    Parity,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Em,
    #[value(name = "em_derived")]
    EmDerived,
    #[value(name = "em_paper")]
    EmPaper,
    Exact,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Derived,
    Paper,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ZMethod {
    Direct,
    Em,
    Exact,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DerivativeArg {
    Analytic,
    Central,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureArg {
    F1,
    F2,
    F3,
    F4,
    F5,
}

#[derive(Debug, ClapSubcommand)]
enum Command {
    /// Energy levels and degeneracies.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        n_max: u32,
        /// Tabulate integer l up to this value instead of angular (s, m) rows.
        #[arg(long)]
        ell_max: Option<u32>,
        #[arg(long, default_value_t = 0)]
        s_max: u32,
        #[arg(long, default_value_t = 0)]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = CaseArg::General)]
        case: CaseArg,
        #[arg(long, value_enum, default_value_t = EllRuleArg::Continuous)]
        ell_rule: EllRuleArg,
        #[arg(long, value_enum, default_value_t = DegeneracyArg::All)]
        degeneracy: DegeneracyArg,
    },
    /// Partition function at given alpha_bar values.
    Partition {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModeArg::ThreeD)]
        mode: ModeArg,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "direct,em,exact")]
        methods: Vec<MethodArg>,
        /// Fixed number of terms for the direct sum.
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long, default_value_t = 2)]
        em_order: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Derived)]
        variant: VariantArg,
    },
    /// Thermal functions over an alpha_bar grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModeArg::ThreeD)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0.5)]
        alpha_min: f64,
        #[arg(long, default_value_t = 100.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Spacing::Log)]
        spacing: Spacing,
        #[arg(long, value_enum, default_value_t = ZMethod::Direct)]
        z_method: ZMethod,
        #[arg(long, value_enum, default_value_t = DerivativeArg::Analytic)]
        derivative: DerivativeArg,
        /// Relative step for central differences.
        #[arg(long, default_value_t = DerivativeScheme::DEFAULT_REL_STEP)]
        step: f64,
        #[arg(long, value_enum)]
        figure: Option<FigureArg>,
        #[arg(long, default_value_t = DEFAULT_JUMP_THRESHOLD)]
        jump_threshold: f64,
    },
    /// Run the numerical self-checks.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

fn base(common: &Common, run: Subcommand) -> Result<RunManifest, CliError> {
    Ok(RunManifest {
        params: PotentialParams::new(common.a1, common.a2, common.a3, common.mass, common.hbar)?,
        format: match common.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
        output: common.out.clone(),
        run,
    })
}

fn build(command: Command) -> Result<RunManifest, CliError> {
    match command {
        Command::Spectrum {
            common,
            n_max,
            ell_max,
            s_max,
            m_max,
            case,
            ell_rule,
            degeneracy,
        } => base(
            &common,
            Subcommand::Spectrum(SpectrumOptions {
                n_max,
                ell_max,
                s_max,
                m_max,
                case: match case {
                    CaseArg::General => SpecialCase::General,
                    CaseArg::A2Only => SpecialCase::A2Only,
                    CaseArg::A3Only => SpecialCase::A3Only,
                    CaseArg::Oscillator => SpecialCase::Oscillator,
                },
                ell_rule: match ell_rule {
                    EllRuleArg::Continuous => EllRule::Continuous,
                    EllRuleArg::Floor => EllRule::Floor,
                },
                degeneracy_rule: match degeneracy {
                    DegeneracyArg::All => DegeneracyRule::AllEll,
                    DegeneracyArg::Parity => DegeneracyRule::ParityConstrained,
                },
            }),
        ),
        Command::Partition {
            common,
            mode,
            alpha,
            methods,
            cutoff,
            em_order,
            variant,
        } => base(
            &common,
            Subcommand::Partition(PartitionOptions {
                mode: mode.into(),
                alphas: alpha,
                methods: methods
                    .into_iter()
                    .map(|m| match m {
                        MethodArg::Direct => MethodChoice::Direct,
                        MethodArg::Em | MethodArg::EmDerived => MethodChoice::Em,
                        MethodArg::EmPaper => MethodChoice::EmPaper,
                        MethodArg::Exact => MethodChoice::Exact,
                    })
                    .collect(),
                cutoff,
                em_order,
                variant: match variant {
                    VariantArg::Derived => FormulaVariant::Derived,
                    VariantArg::Paper => FormulaVariant::PaperLiteral,
                },
            }),
        ),
        Command::Sweep {
            common,
            mode,
            alpha_min,
            alpha_max,
            points,
            spacing,
            z_method,
            derivative,
            step,
            figure,
            jump_threshold,
        } => {
            let (min, max) = (alpha_min, alpha_max);
            let grid = match spacing {
                Spacing::Lin => GridSpec::Linear { min, max, points },
                Spacing::Log => GridSpec::Log { min, max, points },
            };
            let method = match z_method {
                ZMethod::Direct => Method::Direct,
                ZMethod::Em => Method::EulerMaclaurin,
                ZMethod::Exact => Method::ClosedFormExact,
            };
            let scheme = match derivative {
                DerivativeArg::Analytic => DerivativeScheme::Analytic,
                DerivativeArg::Central => DerivativeScheme::CentralDifference { rel_step: step },
            };
            let mut opts = SweepOptions::new(SweepSpec {
                grid,
                model: PartitionModel::new(mode.into(), method),
                scheme,
            });
            opts.figure = figure.map(|f| match f {
                FigureArg::F1 => FigureId::F1FreeEnergy,
                FigureArg::F2 => FigureId::F2MeanEnergy,
                FigureArg::F3 => FigureId::F3Entropy,
                FigureArg::F4 => FigureId::F4SpecificHeat,
                FigureArg::F5 => FigureId::F5OneDPanel,
            });
            opts.jump_threshold = jump_threshold;
            base(&common, Subcommand::Sweep(opts))
        }
        Command::Verify { common } => base(&common, Subcommand::Verify(VerifyConfig::default())),
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let manifest = match (cli.manifest, cli.command) {
        (Some(path), None) => RunManifest::load(&path)?,
        (None, Some(command)) => build(command)?,
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("give either --manifest or a subcommand, not both".into()))
        }
        (None, None) => return Err(CliError::Usage("a subcommand or --manifest is required".into())),
    };
    if let Some(path) = &cli.save_manifest {
        manifest.save(path)?;
    }
    let out = execute(&manifest)?;
    match &manifest.output {
        Some(path) => {
            std::fs::write(path, &out.data)
                .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
            for line in &out.summary {
                println!("{line}");
            }
        }
        None => {
            print!("{}", out.data);
            for line in &out.summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(if out.failures > 0 { 1 } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
