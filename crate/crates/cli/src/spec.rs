//! The JSON problem description read by every subcommand.

use std::path::{Path, PathBuf};

use morrey_core::embeddings::{Direction, EmbeddingProblem, MorreyKind, MorreySpace};
use morrey_core::hardy::{HardyProblem, HardyVariant};
use morrey_core::oracle::{Families, OracleConfig, OracleProblem};
use morrey_core::weights::{RadialProfile, Weight};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// An exponent in `(0, ∞]`, written as a number or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct Exponent(#[serde(with = "morrey_core::exponent::ext")] pub f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "lebesgue_to_lm")]
    LebesgueToLm,
    #[serde(rename = "lebesgue_to_dual_lm")]
    LebesgueToDualLm,
    #[serde(rename = "lm_to_lebesgue")]
    LmToLebesgue,
    #[serde(rename = "dual_lm_to_lebesgue")]
    DualLmToLebesgue,
    #[serde(rename = "hardy_direct")]
    HardyDirect,
    #[serde(rename = "hardy_direct_complement")]
    HardyDirectComplement,
    #[serde(rename = "hardy_sup")]
    HardySup,
    #[serde(rename = "hardy_sup_complement")]
    HardySupComplement,
    #[serde(rename = "hardy_reverse")]
    HardyReverse,
    #[serde(rename = "hardy_reverse_complement")]
    HardyReverseComplement,
}

impl ProblemKind {
    pub fn direction(self) -> Option<Direction> {
        Some(match self {
            ProblemKind::LebesgueToLm => Direction::LebesgueToLM,
            ProblemKind::LebesgueToDualLm => Direction::LebesgueToDualLM,
            ProblemKind::LmToLebesgue => Direction::LMToLebesgue,
            ProblemKind::DualLmToLebesgue => Direction::DualLMToLebesgue,
            _ => return None,
        })
    }

    fn variant(self) -> Option<HardyVariant> {
        Some(match self {
            ProblemKind::HardyDirect => HardyVariant::Direct,
            ProblemKind::HardyDirectComplement => HardyVariant::DirectComplement,
            ProblemKind::HardySup => HardyVariant::Sup,
            ProblemKind::HardySupComplement => HardyVariant::SupComplement,
            ProblemKind::HardyReverse => HardyVariant::Reverse,
            ProblemKind::HardyReverseComplement => HardyVariant::ReverseComplement,
            _ => return None,
        })
    }
}

/// Embeddings use `v1`, `v2` and `omega`; Hardy problems use `v` (outer)
/// and `w` (inner). Missing weights default to `1`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weights {
    pub v1: Option<RadialProfile>,
    pub v2: Option<RadialProfile>,
    pub omega: Option<RadialProfile>,
    pub v: Option<RadialProfile>,
    pub w: Option<RadialProfile>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFlags {
    pub balls: Option<bool>,
    pub complements: Option<bool>,
    pub near_extremal: Option<bool>,
    pub two_block: Option<bool>,
    pub powers: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleOverrides {
    pub grid_cells: Option<usize>,
    pub knot_range: Option<(f64, f64)>,
    pub restarts: Option<usize>,
    pub ascent_sweeps: Option<usize>,
    pub power_iterations: Option<usize>,
    pub seed: Option<u64>,
    pub families: Option<FamilyFlags>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    /// Where `--out` writes when the flag is absent.
    pub path: Option<PathBuf>,
}

/// Parameter grids for `sweep`. Each cell uses `v1 = v2 = ρ^α` and `ω = ρ^β`
/// cut to `(cut, ∞)`, or to `(0, cut)` for the complementary directions.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRanges {
    pub p1: Vec<Exponent>,
    pub p2: Vec<Exponent>,
    pub theta: Vec<Exponent>,
    #[serde(default = "zero_alpha")]
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    #[serde(default = "unit_cut")]
    pub cut: f64,
    /// Also run the oracle on every finite cell.
    #[serde(default)]
    pub oracle: bool,
}

fn zero_alpha() -> Vec<f64> {
    vec![0.0]
}

fn unit_cut() -> f64 {
    1.0
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub direction: ProblemKind,
    #[serde(default = "one")]
    pub n: usize,
    pub p1: Option<Exponent>,
    pub p2: Option<Exponent>,
    pub theta: Option<Exponent>,
    pub p: Option<Exponent>,
    pub q: Option<Exponent>,
    #[serde(default)]
    pub weights: Weights,
    #[serde(default)]
    pub oracle: OracleOverrides,
    #[serde(default)]
    pub output: Outputs,
    pub sweep: Option<SweepRanges>,
}

fn spec_error(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

fn require<T: Copy>(v: Option<T>, name: &str, kind: ProblemKind) -> Result<T, CliError> {
    v.ok_or_else(|| spec_error(format!("{kind:?} needs `{name}`")))
}

fn forbid<T>(v: &Option<T>, name: &str, kind: ProblemKind) -> Result<(), CliError> {
    match v {
        Some(_) => Err(spec_error(format!("`{name}` does not apply to {kind:?}"))),
        None => Ok(()),
    }
}

fn weight(n: usize, profile: &Option<RadialProfile>) -> Result<Weight, CliError> {
    match profile {
        Some(p) => Ok(Weight::new(n, p.clone())?),
        None => Ok(Weight::unit(n)),
    }
}

impl SpecFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| spec_error(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| spec_error(format!("invalid spec: {e}")))
    }

    pub fn is_embedding(&self) -> bool {
        self.direction.direction().is_some()
    }

    /// The single problem the spec describes.
    pub fn problem(&self) -> Result<OracleProblem, CliError> {
        let kind = self.direction;
        let w = &self.weights;
        if let Some(direction) = kind.direction() {
            forbid(&self.p, "p", kind)?;
            forbid(&self.q, "q", kind)?;
            forbid(&w.v, "weights.v", kind)?;
            forbid(&w.w, "weights.w", kind)?;
            let omega = w.omega.clone().ok_or_else(|| spec_error(format!("{kind:?} needs `weights.omega`")))?;
            omega.validate()?;
            Ok(EmbeddingProblem {
                direction,
                n: self.n,
                p1: require(self.p1, "p1", kind)?.0,
                p2: require(self.p2, "p2", kind)?.0,
                theta: require(self.theta, "theta", kind)?.0,
                v1: weight(self.n, &w.v1)?,
                v2: weight(self.n, &w.v2)?,
                omega,
            }
            .into())
        } else {
            let variant = kind.variant().expect("every kind is an embedding or a Hardy problem");
            forbid(&self.p1, "p1", kind)?;
            forbid(&self.p2, "p2", kind)?;
            forbid(&self.theta, "theta", kind)?;
            forbid(&w.v1, "weights.v1", kind)?;
            forbid(&w.v2, "weights.v2", kind)?;
            forbid(&w.omega, "weights.omega", kind)?;
            forbid(&self.sweep, "sweep", kind)?;
            let v = w.v.clone().ok_or_else(|| spec_error(format!("{kind:?} needs `weights.v`")))?;
            v.validate()?;
            Ok(HardyProblem::new(
                variant,
                require(self.p, "p", kind)?.0,
                require(self.q, "q", kind)?.0,
                v,
                weight(self.n, &w.w)?,
            )
            .into())
        }
    }

    /// The Morrey-type side `(p2, θ, ω, v2)` of an embedding spec.
    pub fn morrey_space(&self) -> Result<MorreySpace, CliError> {
        match self.problem()? {
            OracleProblem::Embedding(e) => Ok(MorreySpace {
                kind: if e.direction.complementary() {
                    MorreyKind::Complementary
                } else {
                    MorreyKind::Local
                },
                p: e.p2,
                theta: e.theta,
                omega: e.omega,
                v: e.v2,
            }),
            OracleProblem::Hardy(_) => Err(spec_error("associate needs an embedding spec")),
        }
    }

    pub fn oracle_config(&self, seed: Option<u64>, cells: Option<usize>) -> Result<OracleConfig, CliError> {
        let o = &self.oracle;
        let mut cfg = OracleConfig::default();
        if let Some(v) = o.grid_cells {
            cfg.grid_cells = v;
        }
        if let Some(v) = o.knot_range {
            cfg.knot_range = v;
        }
        if let Some(v) = o.restarts {
            cfg.restarts = v;
        }
        if let Some(v) = o.ascent_sweeps {
            cfg.ascent_sweeps = v;
        }
        if let Some(v) = o.power_iterations {
            cfg.power_iterations = v;
        }
        if let Some(v) = o.seed {
            cfg.seed = v;
        }
        if let Some(f) = &o.families {
            let d = Families::default();
            cfg.families = Families {
                balls: f.balls.unwrap_or(d.balls),
                complements: f.complements.unwrap_or(d.complements),
                near_extremal: f.near_extremal.unwrap_or(d.near_extremal),
                two_block: f.two_block.unwrap_or(d.two_block),
                powers: f.powers.unwrap_or(d.powers),
            };
        }
        if let Some(s) = seed {
            cfg.seed = s;
        }
        if let Some(c) = cells {
            cfg.grid_cells = c;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
