//! Scenario files: which table to use and which state to prepare.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angmom::TwiceInt;
use crate::compose::{Channel, ChannelTable, PreparedState, SyntheticCrossTerm};
use crate::error::{Error, Result};
use crate::states::{
    atomic_phase_state, hopf_state, molecular_phase_state, AngLabel, Axis, ControlParams, CoupledLabel, CoupledState,
    ProductState, Superposition, NORM_TOL,
};

/// Prefix naming a table compiled into the library.
pub const BUNDLED_PREFIX: &str = "bundled:";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub m2: i32,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionSpec {
    pub axis: Axis,
    pub j2: i32,
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledTermSpec {
    pub s2: i32,
    pub m2: i32,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// One way of describing the prepared state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// One atom against a closed-shell partner.
    Superposition(SuperpositionSpec),
    Product {
        a: SuperpositionSpec,
        b: SuperpositionSpec,
    },
    Coupled {
        terms: Vec<CoupledTermSpec>,
    },
    /// `sin η |2 0⟩_x + e^{iξ} cos η |2 2⟩_x`
    Hopf {
        eta_rad: f64,
        xi_rad: f64,
    },
    /// `½(|1 1⟩ + |1 0⟩)(|½ ½⟩ + e^{iβ}|½ −½⟩)`
    AtomicPhase {
        beta_rad: f64,
    },
    /// `(|½ ½⟩_m + e^{iβ}|½ −½⟩_m)/√2`
    MolecularPhase {
        beta_rad: f64,
    },
}

impl SuperpositionSpec {
    fn build(&self) -> Result<Superposition> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((AngLabel::new(TwiceInt(self.j2), TwiceInt(t.m2), self.axis)?, Complex64::new(t.re, t.im))))
            .collect::<Result<Vec<_>>>()?;
        Superposition::new(terms)
    }

    fn from_state(s: &Superposition) -> Result<Self> {
        let j = s.single_j().ok_or_else(|| Error::State("cannot describe mixed-j superposition".into()))?;
        Ok(SuperpositionSpec {
            axis: s.axis(),
            j2: j.0,
            terms: s.terms().iter().map(|(l, a)| TermSpec { m2: l.m.0, re: a.re, im: a.im }).collect(),
        })
    }
}

fn require_unit_norm(norm: f64) -> Result<()> {
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization { norm });
    }
    Ok(())
}

impl StateSpec {
    pub fn build(&self) -> Result<PreparedState> {
        let state = match self {
            StateSpec::Superposition(s) => PreparedState::Single(s.build()?),
            StateSpec::Product { a, b } => PreparedState::Product(ProductState::new(a.build()?, b.build()?)?),
            StateSpec::Coupled { terms } => {
                let terms = terms
                    .iter()
                    .map(|t| (CoupledLabel { s: TwiceInt(t.s2), m: TwiceInt(t.m2) }, Complex64::new(t.re, t.im)))
                    .collect();
                PreparedState::Coupled(CoupledState::new(terms)?)
            }
            StateSpec::Hopf { eta_rad, xi_rad } => {
                PreparedState::Single(hopf_state(ControlParams::new(*eta_rad, *xi_rad)?)?)
            }
            StateSpec::AtomicPhase { beta_rad } => PreparedState::Product(atomic_phase_state(*beta_rad)),
            StateSpec::MolecularPhase { beta_rad } => PreparedState::Coupled(molecular_phase_state(*beta_rad)),
        };
        require_unit_norm(state.norm_sqr())?;
        Ok(state)
    }

    /// Amplitude-level description of `state`.
    pub fn explicit(state: &PreparedState) -> Result<Self> {
        Ok(match state {
            PreparedState::Single(s) => StateSpec::Superposition(SuperpositionSpec::from_state(s)?),
            PreparedState::Product(p) => StateSpec::Product {
                a: SuperpositionSpec::from_state(p.atom_a())?,
                b: SuperpositionSpec::from_state(p.atom_b())?,
            },
            PreparedState::Coupled(c) => StateSpec::Coupled {
                terms: c
                    .terms()
                    .iter()
                    .map(|(l, a)| CoupledTermSpec { s2: l.s.0, m2: l.m.0, re: a.re, im: a.im })
                    .collect(),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessSelection {
    Pi,
    Ai,
    #[default]
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    /// File path, or `bundled:<name>`.
    pub table: String,
    pub state: StateSpec,
    #[serde(default)]
    pub process: ProcessSelection,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub channel_overrides: Vec<Channel>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub synthetic_cross_terms: Vec<SyntheticCrossTerm>,
}

pub fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Input { path: path.display().to_string(), source })
}

/// Load a table from a path or a `bundled:` reference. Relative paths
/// resolve against `base`.
pub fn load_table(reference: &str, base: Option<&Path>) -> Result<ChannelTable> {
    if let Some(name) = reference.strip_prefix(BUNDLED_PREFIX) {
        return ChannelTable::bundled(name).ok_or_else(|| Error::Parse(format!("no bundled table named {name}")));
    }
    let path = resolve_path(reference, base);
    ChannelTable::from_json(&read_input(&path)?)
}

fn resolve_path(reference: &str, base: Option<&Path>) -> PathBuf {
    let p = PathBuf::from(reference);
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Read a scenario; relative table paths are taken from the file's
    /// directory.
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let cfg = Self::from_json(&read_input(path)?)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((cfg, base))
    }

    pub fn table(&self, base: Option<&Path>) -> Result<ChannelTable> {
        load_table(&self.table, base)?.with_overrides(&self.channel_overrides)
    }

    /// Table reference that stays valid from any working directory.
    pub fn absolute_table_ref(&self, base: Option<&Path>) -> String {
        if self.table.starts_with(BUNDLED_PREFIX) {
            return self.table.clone();
        }
        let p = resolve_path(&self.table, base);
        std::fs::canonicalize(&p).unwrap_or(p).display().to_string()
    }
}
