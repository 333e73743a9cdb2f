//! Single-atom and two-atom angular-momentum states.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angmom::{self, check_pair, projections, DMatrix, TwiceInt, MAX_TWICE_J};
use crate::error::{Error, Result};

/// Upper slack on state norms.
pub const NORM_TOL: f64 = 1e-9;

/// Quantization axis of a ket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Z,
    X,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Z => f.write_str("z"),
            Axis::X => f.write_str("x"),
        }
    }
}

/// Basis ket `|j m⟩` quantized along `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AngLabel {
    pub j: TwiceInt,
    pub m: TwiceInt,
    pub axis: Axis,
}

impl AngLabel {
    pub fn new(j: TwiceInt, m: TwiceInt, axis: Axis) -> Result<Self> {
        check_pair(j, m)?;
        Ok(AngLabel { j, m, axis })
    }
}

fn check_norm(norm: f64) -> Result<()> {
    if !(norm > 0.0 && norm <= 1.0 + NORM_TOL) {
        return Err(Error::Normalization { norm });
    }
    Ok(())
}

/// A superposition of kets sharing one quantization axis.
///
/// Norms below one are allowed so that projections stay first-class values.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    axis: Axis,
    terms: Vec<(AngLabel, Complex64)>,
}

impl Superposition {
    pub fn new(terms: Vec<(AngLabel, Complex64)>) -> Result<Self> {
        let axis = match terms.first() {
            Some((l, _)) => l.axis,
            None => return Err(Error::State("empty superposition".into())),
        };
        for (i, (label, amp)) in terms.iter().enumerate() {
            check_pair(label.j, label.m)?;
            if label.axis != axis {
                return Err(Error::Axis("mixed quantization axes in one superposition".into()));
            }
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(Error::State(format!("non-finite amplitude for 2m={}", label.m.0)));
            }
            if terms[..i].iter().any(|(other, _)| other == label) {
                return Err(Error::State(format!("duplicate label 2j={}, 2m={}", label.j.0, label.m.0)));
            }
        }
        let state = Superposition { axis, terms };
        check_norm(state.norm_sqr())?;
        Ok(state)
    }

    /// Superposition within a single `j` multiplet, from `(2m, amplitude)` pairs.
    pub fn from_amplitudes(j: TwiceInt, axis: Axis, amps: &[(i32, Complex64)]) -> Result<Self> {
        let terms =
            amps.iter().map(|&(m2, a)| Ok((AngLabel::new(j, TwiceInt(m2), axis)?, a))).collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }

    /// `|j m⟩` with unit amplitude.
    pub fn basis(j: TwiceInt, m: TwiceInt, axis: Axis) -> Result<Self> {
        Self::new(vec![(AngLabel::new(j, m, axis)?, Complex64::new(1.0, 0.0))])
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn terms(&self) -> &[(AngLabel, Complex64)] {
        &self.terms
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn amplitude(&self, j: TwiceInt, m: TwiceInt) -> Complex64 {
        self.terms.iter().find(|(l, _)| l.j == j && l.m == m).map_or(Complex64::new(0.0, 0.0), |(_, a)| *a)
    }

    /// `⟨self|other⟩`; labels on different axes are treated as orthogonal.
    pub fn inner(&self, other: &Superposition) -> Complex64 {
        self.terms.iter().filter_map(|(l, a)| other.terms.iter().find(|(k, _)| k == l).map(|(_, b)| a.conj() * b)).sum()
    }

    /// The single `j` shared by every term, if there is one.
    pub fn single_j(&self) -> Option<TwiceInt> {
        let j = self.terms[0].0.j;
        self.terms.iter().all(|(l, _)| l.j == j).then_some(j)
    }

    /// Multiply each amplitude by `f(label)`; norm validation is skipped.
    pub(crate) fn map_amplitudes(&self, f: impl Fn(&AngLabel) -> Complex64) -> Superposition {
        Superposition { axis: self.axis, terms: self.terms.iter().map(|(l, a)| (*l, a * f(l))).collect() }
    }
}

/// Two-atom product state `|ψ_A⟩|ψ_B⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    a: Superposition,
    b: Superposition,
}

impl ProductState {
    pub fn new(a: Superposition, b: Superposition) -> Result<Self> {
        for (name, s) in [("A", &a), ("B", &b)] {
            if s.single_j().is_none() {
                return Err(Error::State(format!("atom {name} mixes several j values")));
            }
            let n = s.norm_sqr();
            if (n - 1.0).abs() > NORM_TOL {
                return Err(Error::Normalization { norm: n });
            }
        }
        Ok(ProductState { a, b })
    }

    pub fn atom_a(&self) -> &Superposition {
        &self.a
    }

    pub fn atom_b(&self) -> &Superposition {
        &self.b
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() * self.b.norm_sqr()
    }

    pub(crate) fn from_parts_unchecked(a: Superposition, b: Superposition) -> Self {
        ProductState { a, b }
    }
}

/// Label `|S M⟩` of the coupled (molecular) basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoupledLabel {
    pub s: TwiceInt,
    pub m: TwiceInt,
}

/// State expanded over the coupled basis `|S M⟩_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledState {
    terms: Vec<(CoupledLabel, Complex64)>,
}

impl CoupledState {
    pub fn new(terms: Vec<(CoupledLabel, Complex64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::State("empty coupled state".into()));
        }
        for (i, (label, amp)) in terms.iter().enumerate() {
            check_pair(label.s, label.m)?;
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(Error::State("non-finite amplitude".into()));
            }
            if terms[..i].iter().any(|(other, _)| other == label) {
                return Err(Error::State(format!("duplicate label 2S={}, 2M={}", label.s.0, label.m.0)));
            }
        }
        let state = CoupledState { terms };
        check_norm(state.norm_sqr())?;
        Ok(state)
    }

    pub fn terms(&self) -> &[(CoupledLabel, Complex64)] {
        &self.terms
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn amplitude(&self, s: TwiceInt, m: TwiceInt) -> Complex64 {
        self.terms.iter().find(|(l, _)| l.s == s && l.m == m).map_or(Complex64::new(0.0, 0.0), |(_, a)| *a)
    }

    /// Orthogonal projection onto the given labels.
    pub fn project(&self, keep: impl Fn(&CoupledLabel) -> bool) -> Vec<(CoupledLabel, Complex64)> {
        self.terms.iter().filter(|(l, _)| keep(l)).copied().collect()
    }

    pub(crate) fn map_amplitudes(&self, f: impl Fn(&CoupledLabel) -> Complex64) -> CoupledState {
        CoupledState { terms: self.terms.iter().map(|(l, a)| (*l, a * f(l))).collect() }
    }
}

/// Hopf coordinates of a normalized two-level amplitude pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlParams {
    pub eta: f64,
    pub xi: f64,
}

impl ControlParams {
    /// `eta ∈ [0, π]`, `xi ∈ [0, 2π)`.
    pub fn new(eta: f64, xi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&eta) {
            return Err(Error::Range(format!("eta = {eta} not in [0, pi]")));
        }
        if !(0.0..2.0 * PI).contains(&xi) {
            return Err(Error::Range(format!("xi = {xi} not in [0, 2pi)")));
        }
        Ok(ControlParams { eta, xi })
    }

    /// `(a₀, a₂) = (sin η, e^{iξ} cos η)`.
    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        let (s, c) = self.eta.sin_cos();
        (Complex64::new(s, 0.0), Complex64::from_polar(c, self.xi))
    }
}

/// `a₀|2 0⟩_x + a₂|2 2⟩_x` with `a₀ = sin η`, `a₂ = e^{iξ} cos η`.
pub fn hopf_state(params: ControlParams) -> Result<Superposition> {
    let params = ControlParams::new(params.eta, params.xi)?;
    let (a0, a2) = params.amplitudes();
    let j = TwiceInt(4);
    Ok(Superposition {
        axis: Axis::X,
        terms: vec![
            (AngLabel { j, m: TwiceInt(0), axis: Axis::X }, a0),
            (AngLabel { j, m: TwiceInt(4), axis: Axis::X }, a2),
        ],
    })
}

fn quarter_turn(j: TwiceInt) -> &'static DMatrix {
    static CACHE: OnceLock<Vec<DMatrix>> = OnceLock::new();
    let table = CACHE.get_or_init(|| {
        (0..=MAX_TWICE_J).map(|j2| angmom::d_matrix(TwiceInt(j2), FRAC_PI_2).expect("valid j")).collect()
    });
    &table[j.0 as usize]
}

/// Re-express a state on another quantization axis.
///
/// `|j M⟩_x = Σ_{M'} d^j_{M'M}(π/2) |j M'⟩`, i.e. a quarter turn about the
/// laboratory Y axis; the reverse direction uses the transpose.
pub fn rotate_axis(state: &Superposition, from: Axis, to: Axis) -> Result<Superposition> {
    if state.axis != from {
        return Err(Error::Axis(format!("state is quantized along {}, not {from}", state.axis)));
    }
    if from == to {
        return Ok(state.clone());
    }
    let x_to_z = from == Axis::X;

    // group by j; output ordered by j descending then m descending
    let mut by_j: BTreeMap<std::cmp::Reverse<TwiceInt>, Vec<(TwiceInt, Complex64)>> = BTreeMap::new();
    for (l, a) in &state.terms {
        by_j.entry(std::cmp::Reverse(l.j)).or_default().push((l.m, *a));
    }
    let mut terms = Vec::new();
    for (std::cmp::Reverse(j), amps) in by_j {
        let d = quarter_turn(j);
        for m_out in projections(j) {
            let row = d.index_of(m_out).expect("projection in range");
            let mut acc = Complex64::new(0.0, 0.0);
            for &(m_in, a) in &amps {
                let col = d.index_of(m_in).expect("validated label");
                let coeff = if x_to_z { d.at(row, col) } else { d.at(col, row) };
                acc += a * coeff;
            }
            terms.push((AngLabel { j, m: m_out, axis: to }, acc));
        }
    }
    Ok(Superposition { axis: to, terms })
}

/// Couple a two-atom product state into the `|S M⟩` basis.
pub fn couple(product: &ProductState) -> Result<CoupledState> {
    let (a, b) = (&product.a, &product.b);
    if a.axis != b.axis {
        return Err(Error::Axis("atoms quantized along different axes".into()));
    }
    let mut acc: BTreeMap<(std::cmp::Reverse<TwiceInt>, std::cmp::Reverse<TwiceInt>), Complex64> = BTreeMap::new();
    for (la, ca) in &a.terms {
        for (lb, cb) in &b.terms {
            for (label, cg) in coupling_row(la.j, la.m, lb.j, lb.m)? {
                *acc.entry((std::cmp::Reverse(label.s), std::cmp::Reverse(label.m)))
                    .or_insert(Complex64::new(0.0, 0.0)) += ca * cb * cg;
            }
        }
    }
    let terms = acc
        .into_iter()
        .map(|((std::cmp::Reverse(s), std::cmp::Reverse(m)), amp)| (CoupledLabel { s, m }, amp))
        .collect();
    Ok(CoupledState { terms })
}

/// Nonzero overlaps `⟨j1 m1; j2 m2 | S M⟩` over all allowed `S`.
pub(crate) fn coupling_row(j1: TwiceInt, m1: TwiceInt, j2: TwiceInt, m2: TwiceInt) -> Result<Vec<(CoupledLabel, f64)>> {
    let m = m1 + m2;
    let mut out = Vec::new();
    let mut s = j1.0 + j2.0;
    while s >= (j1.0 - j2.0).abs() {
        if m.0.abs() <= s {
            let cg = angmom::clebsch_gordan(j1, m1, j2, m2, TwiceInt(s), m)?;
            if cg != 0.0 {
                out.push((CoupledLabel { s: TwiceInt(s), m }, cg));
            }
        }
        s -= 2;
    }
    Ok(out)
}

/// He*(³S) ⊗ Li(²S) atomic superposition
/// `½(|1 1⟩ + |1 0⟩)(|½ ½⟩ + e^{iβ}|½ −½⟩)`.
pub fn atomic_phase_state(beta: f64) -> ProductState {
    let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let he =
        Superposition::from_amplitudes(TwiceInt(2), Axis::Z, &[(2, half), (0, half)]).expect("valid triplet state");
    let li = Superposition::from_amplitudes(
        TwiceInt(1),
        Axis::Z,
        &[(1, half), (-1, half * Complex64::from_polar(1.0, beta))],
    )
    .expect("valid doublet state");
    ProductState::from_parts_unchecked(he, li)
}

/// Molecular-basis doublet superposition
/// `(|½ ½⟩_m + e^{iβ}|½ −½⟩_m)/√2`.
pub fn molecular_phase_state(beta: f64) -> CoupledState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CoupledState {
        terms: vec![
            (CoupledLabel { s: TwiceInt(1), m: TwiceInt(1) }, Complex64::new(h, 0.0)),
            (CoupledLabel { s: TwiceInt(1), m: TwiceInt(-1) }, Complex64::from_polar(h, beta)),
        ],
    }
}

pub type Vec3 = [f64; 3];

/// Positions and momenta of two point masses, with optional
/// center-of-mass/relative coordinates once resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Kinematics {
    pub mass_a: f64,
    pub mass_b: f64,
    pub r_a: Vec3,
    pub r_b: Vec3,
    pub k_a: Vec3,
    pub k_b: Vec3,
    pub frame: Option<RelativeFrame>,
}

/// Center-of-mass position `R`, separation `r = r_B − r_A`, total momentum
/// `K` and relative momentum `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeFrame {
    pub big_r: Vec3,
    pub r: Vec3,
    pub big_k: Vec3,
    pub k: Vec3,
}

impl Kinematics {
    pub fn new(mass_a: f64, mass_b: f64, r_a: Vec3, r_b: Vec3, k_a: Vec3, k_b: Vec3) -> Self {
        Kinematics { mass_a, mass_b, r_a, r_b, k_a, k_b, frame: None }
    }
}

fn lincomb(wa: f64, a: Vec3, wb: f64, b: Vec3) -> Vec3 {
    [wa * a[0] + wb * b[0], wa * a[1] + wb * b[1], wa * a[2] + wb * b[2]]
}

/// Resolve center-of-mass and relative coordinates.
///
/// `k = (m_A k_B − m_B k_A)/(m_A + m_B)` is the momentum conjugate to
/// `r = r_B − r_A`. With `boost`, the momenta are shifted so that `K = 0`.
pub fn to_center_of_mass(kin: &Kinematics, boost: bool) -> Result<Kinematics> {
    let (ma, mb) = (kin.mass_a, kin.mass_b);
    if !(ma > 0.0 && mb > 0.0) {
        return Err(Error::NonPositiveMass(ma, mb));
    }
    let total = ma + mb;
    let mut out = kin.clone();
    if boost {
        let big_k = lincomb(1.0, kin.k_a, 1.0, kin.k_b);
        out.k_a = lincomb(1.0, kin.k_a, -ma / total, big_k);
        out.k_b = lincomb(1.0, kin.k_b, -mb / total, big_k);
    }
    let frame = RelativeFrame {
        big_r: lincomb(ma / total, out.r_a, mb / total, out.r_b),
        r: lincomb(1.0, out.r_b, -1.0, out.r_a),
        big_k: lincomb(1.0, out.k_a, 1.0, out.k_b),
        k: lincomb(ma / total, out.k_b, -mb / total, out.k_a),
    };
    out.frame = Some(frame);
    Ok(out)
}
