//! Bilinear cross-section composition.
//!
//! A prepared state `Σ_S c_S |S⟩` over product kets `S = (M_A, M_B)` gives
//!
//! ```text
//! σ = Σ_{S,S'} c_S* c_{S'} σ_{S,S'}
//! ```
//!
//! where `σ_{S,S'}` is assembled from per-channel cross sections through the
//! overlaps of each ket with the exit channels `|S M⟩`. Pairs with different
//! total beam-axis projection are never accumulated while the selection-rule
//! filter is on.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angmom::TwiceInt;
use crate::error::{Error, Result};
use crate::states::{self, Axis, CoupledLabel, CoupledState, ProductState, Superposition, NORM_TOL};
use crate::symmetry::{interference_allowed, ChannelPairKey};

/// Exit-channel label of a [`ChannelTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelKey {
    /// Body-frame projection `Ω` (integer).
    Omega { omega: u32 },
    /// Molecular `|S M_S⟩` label in doubled units.
    Molecular {
        #[serde(rename = "S2")]
        s2: i32,
        #[serde(rename = "MS2")]
        ms2: i32,
    },
}

impl ChannelKey {
    pub fn omega(omega: u32) -> Self {
        ChannelKey::Omega { omega }
    }

    pub fn molecular(s: TwiceInt, m: TwiceInt) -> Self {
        ChannelKey::Molecular { s2: s.0, ms2: m.0 }
    }
}

impl fmt::Display for ChannelKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ChannelKey::Omega { omega } => write!(f, "omega={omega}"),
            ChannelKey::Molecular { s2, ms2 } => {
                write!(f, "S={},M_S={}", TwiceInt(s2), TwiceInt(ms2))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyUnit {
    #[serde(rename = "mK")]
    MilliKelvin,
    #[serde(rename = "au")]
    AtomicUnits,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionEnergy {
    pub value: f64,
    pub unit: EnergyUnit,
}

/// One row of a channel table; cross sections in bohr².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub key: ChannelKey,
    #[serde(rename = "sigma_pi_au")]
    pub sigma_pi: f64,
    #[serde(rename = "sigma_ai_au")]
    pub sigma_ai: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Omega,
    Molecular,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    system: String,
    energy: CollisionEnergy,
    channels: Vec<Channel>,
}

/// Diagonal per-channel cross sections for one collision system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct ChannelTable {
    system: String,
    energy: CollisionEnergy,
    channels: Vec<Channel>,
    kind: TableKind,
}

impl TryFrom<RawTable> for ChannelTable {
    type Error = Error;
    fn try_from(raw: RawTable) -> Result<Self> {
        ChannelTable::new(raw.system, raw.energy, raw.channels)
    }
}

impl From<ChannelTable> for RawTable {
    fn from(t: ChannelTable) -> Self {
        RawTable { system: t.system, energy: t.energy, channels: t.channels }
    }
}

const NE_AR_50MK: &str = include_str!("../data/ne_ar_50mK.json");
const HE_LI: &str = include_str!("../data/he_li.json");

impl ChannelTable {
    pub fn new(system: String, energy: CollisionEnergy, channels: Vec<Channel>) -> Result<Self> {
        let first = channels.first().ok_or_else(|| Error::Table("no channels".into()))?;
        let kind = match first.key {
            ChannelKey::Omega { .. } => TableKind::Omega,
            ChannelKey::Molecular { .. } => TableKind::Molecular,
        };
        for (i, ch) in channels.iter().enumerate() {
            let this_kind = match ch.key {
                ChannelKey::Omega { .. } => TableKind::Omega,
                ChannelKey::Molecular { s2, ms2 } => {
                    crate::angmom::check_pair(TwiceInt(s2), TwiceInt(ms2))
                        .map_err(|_| Error::Table(format!("invalid molecular label {}", ch.key)))?;
                    TableKind::Molecular
                }
            };
            if this_kind != kind {
                return Err(Error::Table("mixed omega and molecular keys".into()));
            }
            for s in [ch.sigma_pi, ch.sigma_ai] {
                if !(s.is_finite() && s >= 0.0) {
                    return Err(Error::Table(format!("cross section {s} for {} is not >= 0", ch.key)));
                }
            }
            if channels[..i].iter().any(|c| c.key == ch.key) {
                return Err(Error::Table(format!("duplicate channel {}", ch.key)));
            }
        }
        Ok(ChannelTable { system, energy, channels, kind })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    /// Ne*(³P₂)–Ar at 50 mK, one row per `Ω = 0, 1, 2`.
    pub fn ne_ar_50mk() -> Self {
        Self::from_json(NE_AR_50MK).expect("bundled table is valid")
    }

    /// He*(³S)–Li(²S) spin channels with `σ₊ = σ₋ = 1` and inert quartets.
    pub fn he_li() -> Self {
        Self::from_json(HE_LI).expect("bundled table is valid")
    }

    /// Bundled tables by name.
    pub fn bundled(name: &str) -> Option<Self> {
        match name {
            "ne_ar_50mK" | "ne-ar" | "ne_ar" => Some(Self::ne_ar_50mk()),
            "he_li" | "he-li" => Some(Self::he_li()),
            _ => None,
        }
    }

    pub fn system(&self) -> &str {
        &self.system
    }

    pub fn energy(&self) -> CollisionEnergy {
        self.energy
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn get(&self, key: &ChannelKey) -> Option<&Channel> {
        self.channels.iter().find(|c| &c.key == key)
    }

    /// Replace the cross sections of existing channels.
    pub fn with_overrides(mut self, overrides: &[Channel]) -> Result<Self> {
        for o in overrides {
            let slot = self
                .channels
                .iter_mut()
                .find(|c| c.key == o.key)
                .ok_or_else(|| Error::UnknownChannel(o.key.to_string()))?;
            *slot = *o;
        }
        ChannelTable::new(self.system, self.energy, self.channels)
    }

    /// Smallest and largest channel cross section for `process`.
    pub fn bounds(&self, process: Process) -> (f64, f64) {
        self.channels
            .iter()
            .map(|c| process.pick(c.sigma_pi, c.sigma_ai))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)))
    }

    /// Exit channel fed by the coupled ket `|S M⟩`.
    ///
    /// Omega tables identify `Ω = |M|`; molecular tables use the label as is.
    pub fn resolve(&self, label: CoupledLabel) -> Result<&Channel> {
        let key = match self.kind {
            TableKind::Omega => {
                if !label.m.is_integer() {
                    return Err(Error::UnknownChannel(format!("omega={}", label.m.abs())));
                }
                ChannelKey::omega((label.m.0.unsigned_abs()) / 2)
            }
            TableKind::Molecular => ChannelKey::molecular(label.s, label.m),
        };
        self.get(&key).ok_or_else(|| Error::UnknownChannel(key.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    Pi,
    Ai,
}

impl Process {
    pub fn pick(self, pi: f64, ai: f64) -> f64 {
        match self {
            Process::Pi => pi,
            Process::Ai => ai,
        }
    }
}

/// Any state the composer accepts.
#[derive(Debug, Clone, PartialEq)]
pub enum PreparedState {
    /// One atom in a superposition; the partner is a `J = 0` closed shell.
    Single(Superposition),
    Product(ProductState),
    Coupled(CoupledState),
}

impl From<Superposition> for PreparedState {
    fn from(s: Superposition) -> Self {
        PreparedState::Single(s)
    }
}

impl From<ProductState> for PreparedState {
    fn from(s: ProductState) -> Self {
        PreparedState::Product(s)
    }
}

impl From<CoupledState> for PreparedState {
    fn from(s: CoupledState) -> Self {
        PreparedState::Coupled(s)
    }
}

impl PreparedState {
    pub fn norm_sqr(&self) -> f64 {
        match self {
            PreparedState::Single(s) => s.norm_sqr(),
            PreparedState::Product(p) => p.norm_sqr(),
            PreparedState::Coupled(c) => c.norm_sqr(),
        }
    }

    pub fn axis(&self) -> Axis {
        match self {
            PreparedState::Single(s) => s.axis(),
            PreparedState::Product(p) => p.atom_a().axis(),
            PreparedState::Coupled(_) => Axis::Z,
        }
    }
}

/// Cross-term data beyond the diagonal table, attached to a pair of product
/// kets. Only used to probe the selection-rule filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCrossTerm {
    pub pair: ChannelPairKey,
    #[serde(rename = "sigma_pi_au")]
    pub sigma_pi: f64,
    #[serde(rename = "sigma_ai_au")]
    pub sigma_ai: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionResult {
    pub sigma_pi: f64,
    pub sigma_ai: f64,
    /// Population of each exit channel.
    pub weights: BTreeMap<ChannelKey, f64>,
    /// Distinct populated ket pairs that contribute a cross term.
    pub surviving_cross_terms: Vec<ChannelPairKey>,
    /// Largest `|Im σ|` before taking the real part.
    pub imaginary_residual: f64,
}

impl CompositionResult {
    pub fn sigma(&self, process: Process) -> f64 {
        process.pick(self.sigma_pi, self.sigma_ai)
    }

    pub fn ratio_ai_pi(&self) -> Result<f64> {
        if self.sigma_pi == 0.0 {
            return Err(Error::ZeroDenominator("sigma_PI is zero".into()));
        }
        Ok(self.sigma_ai / self.sigma_pi)
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.values().sum()
    }
}

/// A product ket `(M_A, M_B)` with its overlaps onto exit channels.
struct Ket<'t> {
    label: (TwiceInt, TwiceInt),
    amp: Complex64,
    overlaps: Vec<(CoupledLabel, f64, &'t Channel)>,
}

/// Composer bound to one channel table.
#[derive(Debug, Clone)]
pub struct Composer<'t> {
    table: &'t ChannelTable,
    filter: bool,
    synthetic: Vec<SyntheticCrossTerm>,
}

impl<'t> Composer<'t> {
    pub fn new(table: &'t ChannelTable) -> Self {
        Composer { table, filter: true, synthetic: Vec::new() }
    }

    /// Accumulate every ket pair, including those the selection rule forbids.
    pub fn without_filter(mut self) -> Self {
        self.filter = false;
        self
    }

    pub fn with_synthetic(mut self, terms: impl IntoIterator<Item = SyntheticCrossTerm>) -> Self {
        self.synthetic.extend(terms);
        self
    }

    pub fn table(&self) -> &'t ChannelTable {
        self.table
    }

    pub fn filter_enabled(&self) -> bool {
        self.filter
    }

    pub fn compose(&self, state: &PreparedState) -> Result<CompositionResult> {
        let norm = state.norm_sqr();
        if !(norm > 0.0 && norm <= 1.0 + NORM_TOL) {
            return Err(Error::Normalization { norm });
        }
        match state {
            PreparedState::Coupled(c) => self.compose_coupled(c),
            PreparedState::Single(s) => {
                let z = match s.axis() {
                    Axis::Z => std::borrow::Cow::Borrowed(s),
                    Axis::X => std::borrow::Cow::Owned(states::rotate_axis(s, Axis::X, Axis::Z)?),
                };
                let kets = z
                    .terms()
                    .iter()
                    .map(|(l, a)| {
                        let label = CoupledLabel { s: l.j, m: l.m };
                        Ok(Ket {
                            label: (TwiceInt::ZERO, l.m),
                            amp: *a,
                            overlaps: vec![(label, 1.0, self.table.resolve(label)?)],
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.compose_kets(&kets)
            }
            PreparedState::Product(p) => {
                if p.atom_a().axis() != p.atom_b().axis() {
                    return Err(Error::Axis("atoms quantized along different axes".into()));
                }
                let (a, b) = match p.atom_a().axis() {
                    Axis::Z => (p.atom_a().clone(), p.atom_b().clone()),
                    Axis::X => (
                        states::rotate_axis(p.atom_a(), Axis::X, Axis::Z)?,
                        states::rotate_axis(p.atom_b(), Axis::X, Axis::Z)?,
                    ),
                };
                let mut kets = Vec::with_capacity(a.terms().len() * b.terms().len());
                for (la, ca) in a.terms() {
                    for (lb, cb) in b.terms() {
                        let overlaps = states::coupling_row(la.j, la.m, lb.j, lb.m)?
                            .into_iter()
                            .map(|(label, cg)| Ok((label, cg, self.table.resolve(label)?)))
                            .collect::<Result<Vec<_>>>()?;
                        kets.push(Ket { label: (la.m, lb.m), amp: ca * cb, overlaps });
                    }
                }
                self.compose_kets(&kets)
            }
        }
    }

    fn compose_coupled(&self, state: &CoupledState) -> Result<CompositionResult> {
        let mut weights = BTreeMap::new();
        let (mut pi, mut ai) = (0.0, 0.0);
        for (label, amp) in state.terms() {
            let ch = self.table.resolve(*label)?;
            let w = amp.norm_sqr();
            *weights.entry(ch.key).or_insert(0.0) += w;
            pi += w * ch.sigma_pi;
            ai += w * ch.sigma_ai;
        }
        Ok(CompositionResult {
            sigma_pi: pi,
            sigma_ai: ai,
            weights,
            surviving_cross_terms: Vec::new(),
            imaginary_residual: 0.0,
        })
    }

    fn synthetic_for(&self, key: &ChannelPairKey) -> (f64, f64) {
        self.synthetic
            .iter()
            .filter(|t| t.pair == *key || t.pair == key.swapped())
            .fold((0.0, 0.0), |(p, a), t| (p + t.sigma_pi, a + t.sigma_ai))
    }

    fn compose_kets(&self, kets: &[Ket<'_>]) -> Result<CompositionResult> {
        let mut pi = Complex64::new(0.0, 0.0);
        let mut ai = Complex64::new(0.0, 0.0);
        let mut surviving = Vec::new();

        for (i, ki) in kets.iter().enumerate() {
            for (k, kk) in kets.iter().enumerate() {
                let key = ChannelPairKey::new(ki.label, kk.label);
                if self.filter && !interference_allowed(&key) {
                    continue;
                }
                let (mut s_pi, mut s_ai) = (0.0, 0.0);
                for (li, ti, ch) in &ki.overlaps {
                    for (lk, tk, _) in &kk.overlaps {
                        if li == lk {
                            s_pi += ti * tk * ch.sigma_pi;
                            s_ai += ti * tk * ch.sigma_ai;
                        }
                    }
                }
                if i != k {
                    let (x_pi, x_ai) = self.synthetic_for(&key);
                    s_pi += x_pi;
                    s_ai += x_ai;
                }
                if s_pi == 0.0 && s_ai == 0.0 {
                    continue;
                }
                let c = ki.amp.conj() * kk.amp;
                pi += c * s_pi;
                ai += c * s_ai;
                if i < k && ki.amp.norm_sqr() > 0.0 && kk.amp.norm_sqr() > 0.0 {
                    surviving.push(key);
                }
            }
        }

        // exit-channel populations
        let mut amps: BTreeMap<CoupledLabel, (Complex64, ChannelKey)> = BTreeMap::new();
        for ket in kets {
            for (label, t, ch) in &ket.overlaps {
                amps.entry(*label).or_insert((Complex64::new(0.0, 0.0), ch.key)).0 += ket.amp * t;
            }
        }
        let mut weights = BTreeMap::new();
        for (amp, key) in amps.values() {
            *weights.entry(*key).or_insert(0.0) += amp.norm_sqr();
        }

        Ok(CompositionResult {
            sigma_pi: pi.re,
            sigma_ai: ai.re,
            weights,
            surviving_cross_terms: surviving,
            imaginary_residual: pi.im.abs().max(ai.im.abs()),
        })
    }
}

/// Compose with the selection-rule filter on and no extra cross terms.
pub fn compose(table: &ChannelTable, state: &PreparedState) -> Result<CompositionResult> {
    Composer::new(table).compose(state)
}

/// Population of each `Ω = |M|` for a Z-quantized single-atom state.
///
/// `±M` never interfere, so the weights add incoherently.
pub fn map_to_omega(state: &Superposition) -> Result<BTreeMap<u32, f64>> {
    if state.axis() != Axis::Z {
        return Err(Error::Axis("Omega mapping needs a Z-quantized state".into()));
    }
    if state.single_j().is_none() {
        return Err(Error::State("Omega mapping needs a single j".into()));
    }
    let mut out = BTreeMap::new();
    for (l, a) in state.terms() {
        if !l.m.is_integer() {
            return Err(Error::State(format!("half-integer projection {}", l.m)));
        }
        *out.entry(l.m.0.unsigned_abs() / 2).or_insert(0.0) += a.norm_sqr();
    }
    Ok(out)
}

/// Autoionization width sampled on a radial grid, with branching ratios
/// into exit channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthProfile {
    /// `(r, Γ(r))` in bohr and hartree.
    pub samples: Vec<(f64, f64)>,
    pub branching: BTreeMap<String, f64>,
}

/// Branching-weight sum tolerance.
pub const BRANCHING_TOL: f64 = 1e-12;

/// `Γ_{Ω→X}(r) = Γ_Ω(r) W_{Ω→X}` for every exit channel `X`.
pub fn split_width(profile: &WidthProfile) -> Result<BTreeMap<String, Vec<(f64, f64)>>> {
    for &(r, g) in &profile.samples {
        if !(g.is_finite() && g >= 0.0) || !r.is_finite() {
            return Err(Error::WidthProfile(format!("bad sample ({r}, {g})")));
        }
    }
    if let Some((name, w)) = profile.branching.iter().find(|(_, w)| w.is_nan() || **w < 0.0) {
        return Err(Error::WidthProfile(format!("negative branching weight {w} for {name}")));
    }
    let total: f64 = profile.branching.values().sum();
    if (total - 1.0).abs() > BRANCHING_TOL {
        return Err(Error::BranchingSum(total));
    }
    Ok(profile
        .branching
        .iter()
        .map(|(name, w)| (name.clone(), profile.samples.iter().map(|&(r, g)| (r, g * w)).collect()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{atomic_phase_state, hopf_state, molecular_phase_state, ControlParams};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn bundled_tables_load() {
        let t = ChannelTable::ne_ar_50mk();
        assert_eq!(t.kind(), TableKind::Omega);
        assert_eq!(t.get(&ChannelKey::omega(2)).unwrap().sigma_ai, 1392.43);
        assert_eq!(t.get(&ChannelKey::omega(0)).unwrap().sigma_pi, 1997.95);
        let h = ChannelTable::he_li();
        assert_eq!(h.kind(), TableKind::Molecular);
        assert_eq!(h.channels().len(), 6);
    }

    #[test]
    fn table_validation() {
        let e = CollisionEnergy { value: 1.0, unit: EnergyUnit::AtomicUnits };
        let ch = |key, s| Channel { key, sigma_pi: s, sigma_ai: s };
        assert!(ChannelTable::new("x".into(), e, vec![]).is_err());
        assert!(ChannelTable::new("x".into(), e, vec![ch(ChannelKey::omega(0), -1.0)]).is_err());
        assert!(ChannelTable::new("x".into(), e, vec![ch(ChannelKey::omega(0), 1.0), ch(ChannelKey::omega(0), 2.0)])
            .is_err());
        assert!(ChannelTable::new(
            "x".into(),
            e,
            vec![ch(ChannelKey::omega(0), 1.0), ch(ChannelKey::Molecular { s2: 1, ms2: 1 }, 2.0)]
        )
        .is_err());
    }

    #[test]
    fn table_json_format() {
        let text = r#"{"system":"t","energy":{"value":50,"unit":"mK"},
            "channels":[{"key":{"S2":1,"MS2":-1},"sigma_pi_au":2.0,"sigma_ai_au":0.5}]}"#;
        let t = ChannelTable::from_json(text).unwrap();
        assert_eq!(t.energy().unit, EnergyUnit::MilliKelvin);
        assert_eq!(t.channels()[0].key, ChannelKey::Molecular { s2: 1, ms2: -1 });
        let back = ChannelTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert!(ChannelTable::from_json(r#"{"system":"t"}"#).is_err());
    }

    #[test]
    fn ne_ar_spot_values() {
        let t = ChannelTable::ne_ar_50mk();
        let s = hopf_state(ControlParams::new(FRAC_PI_2, 0.0).unwrap()).unwrap();
        let r = compose(&t, &s.into()).unwrap();
        assert!((r.weights[&ChannelKey::omega(2)] - 0.75).abs() < 1e-12);
        assert!(r.weights[&ChannelKey::omega(1)].abs() < 1e-12);
        assert!((r.weights[&ChannelKey::omega(0)] - 0.25).abs() < 1e-12);
        assert!((r.sigma_ai - 2350.195).abs() < 1e-9 * 2350.195);
        assert!(r.surviving_cross_terms.is_empty());

        let s = hopf_state(ControlParams::new(0.0, 0.0).unwrap()).unwrap();
        let r = compose(&t, &s.into()).unwrap();
        assert!((r.weights[&ChannelKey::omega(2)] - 0.125).abs() < 1e-12);
        assert!((r.weights[&ChannelKey::omega(1)] - 0.5).abs() < 1e-12);
        assert!((r.weights[&ChannelKey::omega(0)] - 0.375).abs() < 1e-12);
        let want_ai = 1392.43 / 8.0 + 3850.76 / 2.0 + 3.0 * 5223.49 / 8.0;
        let want_pi = 350.73 / 8.0 + 1447.30 / 2.0 + 3.0 * 1997.95 / 8.0;
        assert!((r.sigma_ai - want_ai).abs() < 1e-9 * want_ai);
        assert!((r.sigma_pi - want_pi).abs() < 1e-9 * want_pi);
    }

    #[test]
    fn he_li_atomic_state() {
        let t = ChannelTable::he_li()
            .with_overrides(&[
                Channel { key: ChannelKey::Molecular { s2: 1, ms2: 1 }, sigma_pi: 3.0, sigma_ai: 0.0 },
                Channel { key: ChannelKey::Molecular { s2: 1, ms2: -1 }, sigma_pi: 5.0, sigma_ai: 0.0 },
            ])
            .unwrap();
        for beta in [0.0, 0.7, FRAC_PI_2, 2.0, PI] {
            let r = compose(&t, &atomic_phase_state(beta).into()).unwrap();
            let want = (0.25 - beta.cos() / (3.0 * 2f64.sqrt())) * 3.0 + 5.0 / 12.0;
            assert!((r.sigma_pi - want).abs() < 1e-12, "beta={beta}");
            assert!((r.weight_sum() - 1.0).abs() < 1e-12);
            assert!(r.imaginary_residual < 1e-12);
            assert_eq!(r.sigma_ai, 0.0);
        }
        let r = compose(&t, &atomic_phase_state(0.3).into()).unwrap();
        let pair = ChannelPairKey::new((TwiceInt(2), TwiceInt(-1)), (TwiceInt(0), TwiceInt(1)));
        assert_eq!(r.surviving_cross_terms, vec![pair]);
    }

    #[test]
    fn he_li_molecular_state_no_control() {
        let t = ChannelTable::he_li();
        for beta in [0.0, 1.0, 2.0, 3.0] {
            let r = compose(&t, &molecular_phase_state(beta).into()).unwrap();
            assert!((r.sigma_pi - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unknown_channel_is_error() {
        let t = ChannelTable::ne_ar_50mk();
        let s = Superposition::basis(TwiceInt(6), TwiceInt(6), Axis::Z).unwrap();
        assert!(matches!(compose(&t, &s.into()), Err(Error::UnknownChannel(_))));
        let h = ChannelTable::he_li();
        let s = Superposition::basis(TwiceInt(4), TwiceInt(0), Axis::Z).unwrap();
        assert!(matches!(compose(&h, &s.into()), Err(Error::UnknownChannel(_))));
    }

    #[test]
    fn omega_weights() {
        let z = Superposition::basis(TwiceInt(4), TwiceInt(0), Axis::Z).unwrap();
        let w = map_to_omega(&z).unwrap();
        assert_eq!(w[&0], 1.0);
        assert_eq!(w.len(), 1);
        let x = Superposition::basis(TwiceInt(4), TwiceInt(0), Axis::X).unwrap();
        assert!(matches!(map_to_omega(&x), Err(Error::Axis(_))));
    }

    #[test]
    fn width_split() {
        let profile = WidthProfile {
            samples: vec![(5.0, 0.01), (6.0, 0.004)],
            branching: [("PI".to_string(), 0.6), ("AI".to_string(), 0.4)].into_iter().collect(),
        };
        let out = split_width(&profile).unwrap();
        assert!((out["PI"][0].1 - 0.006).abs() < 1e-15);
        assert!((out["AI"][0].1 - 0.004).abs() < 1e-15);
        assert_eq!(out["PI"][1].0, 6.0);

        let only = WidthProfile {
            samples: vec![(5.0, 0.01)],
            branching: [("PI".to_string(), 1.0), ("AI".to_string(), 0.0)].into_iter().collect(),
        };
        let out = split_width(&only).unwrap();
        assert_eq!(out["PI"][0].1, 0.01);
        assert_eq!(out["AI"][0].1, 0.0);

        let bad =
            WidthProfile { samples: vec![(5.0, 0.01)], branching: [("PI".to_string(), 0.7)].into_iter().collect() };
        assert!(matches!(split_width(&bad), Err(Error::BranchingSum(_))));
        let neg = WidthProfile { samples: vec![(5.0, -0.01)], branching: only.branching.clone() };
        assert!(split_width(&neg).is_err());
    }
}
