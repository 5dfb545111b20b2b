//! JSON model files: the serialized form of a queue specification.
//!
//! A model names the buffering pair (either a free product of `factors` or an
//! explicit `custom` table), the class distribution `nu`, the rates, and
//! optionally a boundary vector plus solver/simulation settings. Probabilities
//! may be decimals or `"p/q"` rational strings.

use crate::algebra::{FactorSpec, PairSpec, Reduction};
use crate::traffic::{ClassDistribution, SolveOptions};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A probability literal: a number or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbValue {
    Number(f64),
    Rational(String),
}

impl ProbValue {
    pub fn to_f64(&self) -> Result<f64> {
        match self {
            ProbValue::Number(v) => Ok(*v),
            ProbValue::Rational(s) => {
                let parse = |part: &str| -> Result<f64> {
                    part.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad numeric literal `{part}`")))
                };
                match s.split_once('/') {
                    Some((p, q)) => {
                        let den = parse(q)?;
                        if den == 0.0 {
                            return Err(Error::Parse(format!("zero denominator in `{s}`")));
                        }
                        Ok(parse(p)? / den)
                    }
                    None => parse(s),
                }
            }
        }
    }
}

/// One factor in the `factors` list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorJson {
    FreeMonoid { letters: Vec<String> },
    FreeGroup { letters: Vec<String> },
    FiniteMonoid {
        elements: Vec<String>,
        table: Vec<Vec<String>>,
    },
}

impl FactorJson {
    fn to_spec(&self) -> FactorSpec {
        match self {
            FactorJson::FreeMonoid { letters } => FactorSpec::FreeMonoid {
                letters: letters.clone(),
            },
            FactorJson::FreeGroup { letters } => FactorSpec::FreeGroup {
                letters: letters.clone(),
            },
            FactorJson::FiniteMonoid { elements, table } => FactorSpec::FiniteMonoid {
                elements: elements.clone(),
                table: table.clone(),
            },
        }
    }
}

/// An explicit product table; cells are `"1"`, `"*"`, or a letter label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CustomJson {
    pub sigma: Vec<String>,
    pub table: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_starts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warmup: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tracked_len: Option<usize>,
}

/// The on-disk model document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom: Option<CustomJson>,
    pub nu: BTreeMap<String, ProbValue>,
    pub lambda: f64,
    pub mu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_boundary: Option<BTreeMap<String, ProbValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationJson>,
}

/// A fully validated model: the pair plus its rates and options.
#[derive(Debug, Clone)]
pub struct TriplePlusRates {
    pub pair: PairSpec,
    pub nu: ClassDistribution,
    pub lambda: f64,
    pub mu: f64,
    /// Optional boundary vector aligned with the alphabet.
    pub r_boundary: Option<Vec<f64>>,
    pub solver: SolveOptions,
    pub sim: SimDefaults,
}

/// Simulation defaults carried by the model file.
#[derive(Debug, Clone, Copy)]
pub struct SimDefaults {
    pub events: u64,
    pub warmup: Option<u64>,
    pub seed: u64,
    pub reps: usize,
    pub max_tracked_len: usize,
}

impl Default for SimDefaults {
    fn default() -> Self {
        SimDefaults {
            events: 1_000_000,
            warmup: None,
            seed: 0x5eed,
            reps: 1,
            max_tracked_len: 6,
        }
    }
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<ModelFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("model JSON: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<ModelFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        ModelFile::from_json(&text)
    }

    /// Canonical form: rationals resolved to numbers, so that a dumped model
    /// re-parses to an identical document.
    pub fn normalized(&self) -> Result<ModelFile> {
        let norm_map = |m: &BTreeMap<String, ProbValue>| -> Result<BTreeMap<String, ProbValue>> {
            m.iter()
                .map(|(k, v)| Ok((k.clone(), ProbValue::Number(v.to_f64()?))))
                .collect()
        };
        Ok(ModelFile {
            factors: self.factors.clone(),
            custom: self.custom.clone(),
            nu: norm_map(&self.nu)?,
            lambda: self.lambda,
            mu: self.mu,
            r_boundary: self.r_boundary.as_ref().map(norm_map).transpose()?,
            solver: self.solver.clone(),
            simulation: self.simulation.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    /// Validates the document and builds the pair, distribution, and options.
    pub fn build(&self) -> Result<TriplePlusRates> {
        let pair = match (&self.factors, &self.custom) {
            (Some(factors), None) => {
                let specs: Vec<FactorSpec> = factors.iter().map(|f| f.to_spec()).collect();
                PairSpec::build_pair(&specs)?
            }
            (None, Some(custom)) => {
                let n = custom.sigma.len();
                let mut table = vec![vec![Reduction::Irreducible; n]; n];
                for (i, row) in custom.table.iter().enumerate() {
                    if i >= n || row.len() != n {
                        return Err(Error::Parse(format!(
                            "custom table must be {n}x{n} to match sigma"
                        )));
                    }
                    for (j, cell) in row.iter().enumerate() {
                        table[i][j] = match cell.as_str() {
                            "*" => Reduction::Irreducible,
                            "1" => Reduction::Identity,
                            label => {
                                let ix = custom
                                    .sigma
                                    .iter()
                                    .position(|s| s == label)
                                    .ok_or_else(|| Error::UnknownLetter(label.to_string()))?;
                                Reduction::Letter(crate::algebra::GeneratorId(ix as u32))
                            }
                        };
                    }
                }
                if custom.table.len() != n {
                    return Err(Error::Parse(format!(
                        "custom table must be {n}x{n} to match sigma"
                    )));
                }
                PairSpec::build_custom(&custom.sigma, &table)?
            }
            (Some(_), Some(_)) => {
                return Err(Error::Parse(
                    "model must give exactly one of `factors` or `custom`, not both".to_string(),
                ))
            }
            (None, None) => {
                return Err(Error::Parse(
                    "model must give one of `factors` or `custom`".to_string(),
                ))
            }
        };
        let nu = distribution_from_map(&pair, &self.nu, "nu")?;
        let r_boundary = self
            .r_boundary
            .as_ref()
            .map(|m| vector_from_map(&pair, m, "r_boundary"))
            .transpose()?;
        if self.lambda <= 0.0 || !self.lambda.is_finite() {
            return Err(Error::NonPositiveRate(format!("lambda = {}", self.lambda)));
        }
        if self.mu <= 0.0 || !self.mu.is_finite() {
            return Err(Error::NonPositiveRate(format!("mu = {}", self.mu)));
        }
        let mut solver = SolveOptions::default();
        if let Some(s) = &self.solver {
            if let Some(v) = s.tol {
                solver.tol = v;
            }
            if let Some(v) = s.max_iter {
                solver.max_iter = v;
            }
            if let Some(v) = s.theta {
                solver.theta = v;
            }
            if let Some(v) = s.residual_tol {
                solver.residual_tol = v;
            }
            if let Some(v) = s.random_starts {
                solver.random_starts = v;
            }
            if let Some(v) = s.seed {
                solver.seed = v;
            }
        }
        let mut sim = SimDefaults::default();
        if let Some(s) = &self.simulation {
            if let Some(v) = s.events {
                sim.events = v;
            }
            sim.warmup = s.warmup;
            if let Some(v) = s.seed {
                sim.seed = v;
            }
            if let Some(v) = s.reps {
                sim.reps = v;
            }
            if let Some(v) = s.max_tracked_len {
                sim.max_tracked_len = v;
            }
        }
        Ok(TriplePlusRates {
            pair,
            nu,
            lambda: self.lambda,
            mu: self.mu,
            r_boundary,
            solver,
            sim,
        })
    }
}

fn vector_from_map(
    pair: &PairSpec,
    map: &BTreeMap<String, ProbValue>,
    what: &str,
) -> Result<Vec<f64>> {
    let mut v = vec![0.0; pair.len()];
    for (label, value) in map {
        let id = pair
            .by_label(label)
            .ok_or_else(|| Error::Parse(format!("{what}: unknown letter `{label}`")))?;
        v[id.index()] = value.to_f64()?;
    }
    Ok(v)
}

fn distribution_from_map(
    pair: &PairSpec,
    map: &BTreeMap<String, ProbValue>,
    what: &str,
) -> Result<ClassDistribution> {
    let v = vector_from_map(pair, map, what)?;
    ClassDistribution::new(pair, v)
}
