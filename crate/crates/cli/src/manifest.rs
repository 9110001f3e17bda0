//! Everything needed to reproduce one run. Identical manifests give
//! byte-identical output.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use noncentral::partition::{FormulaVariant, Mode};
use noncentral::spectrum::{DegeneracyRule, EllRule, SpecialCase};
use noncentral::thermo::{SweepSpec, DEFAULT_JUMP_THRESHOLD};
use noncentral::PotentialParams;

use crate::dataset::FigureId;
use crate::verify::VerifyConfig;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub params: PotentialParams,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub run: Subcommand,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Subcommand {
    Spectrum(SpectrumOptions),
    Partition(PartitionOptions),
    Sweep(SweepOptions),
    Verify(VerifyConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub n_max: u32,
    /// Integer-ℓ table (oscillator labelling) instead of the angular one.
    pub ell_max: Option<u32>,
    pub s_max: u32,
    pub m_max: u32,
    pub case: SpecialCase,
    pub ell_rule: EllRule,
    pub degeneracy_rule: DegeneracyRule,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            n_max: 2,
            ell_max: None,
            s_max: 0,
            m_max: 0,
            case: SpecialCase::General,
            ell_rule: EllRule::Continuous,
            degeneracy_rule: DegeneracyRule::AllEll,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Direct,
    /// Euler-Maclaurin; the 1D form follows `variant`.
    Em,
    /// The 1D closed form with the −ᾱ³/5400 term, whatever `variant` says.
    EmPaper,
    Exact,
}

impl MethodChoice {
    pub fn column(&self, variant: FormulaVariant) -> &'static str {
        match (self, variant) {
            (MethodChoice::Direct, _) => "z_direct",
            (MethodChoice::Em, FormulaVariant::Derived) => "z_em",
            (MethodChoice::Em, FormulaVariant::PaperLiteral) | (MethodChoice::EmPaper, _) => {
                "z_em_paper"
            }
            (MethodChoice::Exact, _) => "z_exact",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionOptions {
    pub mode: Mode,
    pub alphas: Vec<f64>,
    pub methods: Vec<MethodChoice>,
    pub cutoff: Option<usize>,
    pub em_order: usize,
    pub variant: FormulaVariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub spec: SweepSpec,
    pub figure: Option<FigureId>,
    pub jump_threshold: f64,
}

impl SweepOptions {
    pub fn new(spec: SweepSpec) -> Self {
        Self {
            spec,
            figure: None,
            jump_threshold: DEFAULT_JUMP_THRESHOLD,
        }
    }
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid manifest: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading manifest {}", path.display()), e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| CliError::io(format!("writing manifest {}", path.display()), e))
    }
}
