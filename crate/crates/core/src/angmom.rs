//! Half-integer angular-momentum algebra.
//!
//! All `j` and `m` values are carried as doubled integers ([`TwiceInt`]) so
//! that spin-½ quantities stay exact. Phases follow the Condon–Shortley
//! convention with active rotations:
//!
//! ```text
//! d^j_{m'm}(θ) = ⟨j m'| exp(-iθ J_y) |j m⟩
//! ```
//!
//! Only squared moduli of these coefficients reach the composed cross
//! sections, so the overall sign convention is unobservable downstream.

use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported `2j`.
pub const MAX_TWICE_J: i32 = 20;

/// A half-integer quantity stored as twice its value (`2j` or `2m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwiceInt(pub i32);

impl TwiceInt {
    pub const ZERO: TwiceInt = TwiceInt(0);

    /// From an integer value (`j = n`).
    pub const fn from_int(n: i32) -> Self {
        TwiceInt(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub const fn abs(self) -> Self {
        TwiceInt(self.0.abs())
    }
}

impl Neg for TwiceInt {
    type Output = TwiceInt;
    fn neg(self) -> TwiceInt {
        TwiceInt(-self.0)
    }
}

impl std::ops::Add for TwiceInt {
    type Output = TwiceInt;
    fn add(self, rhs: TwiceInt) -> TwiceInt {
        TwiceInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for TwiceInt {
    type Output = TwiceInt;
    fn sub(self, rhs: TwiceInt) -> TwiceInt {
        TwiceInt(self.0 - rhs.0)
    }
}

impl fmt::Display for TwiceInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Check that `(j, m)` is a valid ket label.
pub fn check_pair(j: TwiceInt, m: TwiceInt) -> Result<()> {
    if j.0 < 0 || m.0.abs() > j.0 || (j.0 - m.0) % 2 != 0 {
        return Err(Error::AngularMomentum { j2: j.0, m2: m.0 });
    }
    if j.0 > MAX_TWICE_J {
        return Err(Error::AngularMomentumTooLarge(j.0));
    }
    Ok(())
}

/// `m` values of a `j` multiplet, descending.
pub fn projections(j: TwiceInt) -> impl Iterator<Item = TwiceInt> {
    (0..=j.0.max(-1)).map(move |k| TwiceInt(j.0 - 2 * k))
}

const FACTORIALS: [f64; (MAX_TWICE_J + 1) as usize] = {
    let mut table = [1.0; (MAX_TWICE_J + 1) as usize];
    let mut n = 1;
    while n < table.len() {
        table[n] = table[n - 1] * n as f64;
        n += 1;
    }
    table
};

fn fact(n: i32) -> f64 {
    FACTORIALS[n as usize]
}

/// Reduced Wigner matrix element `d^j_{m'm}(θ)`, explicit sum formula.
pub fn wigner_d(j: TwiceInt, m_p: TwiceInt, m: TwiceInt, theta: f64) -> Result<f64> {
    check_pair(j, m_p)?;
    check_pair(j, m)?;

    // integer-valued combinations of the half-integer labels
    let j_plus_mp = (j.0 + m_p.0) / 2;
    let j_minus_mp = (j.0 - m_p.0) / 2;
    let j_plus_m = (j.0 + m.0) / 2;
    let j_minus_m = (j.0 - m.0) / 2;
    let mp_minus_m = (m_p.0 - m.0) / 2;

    let prefactor = (fact(j_plus_mp) * fact(j_minus_mp) * fact(j_plus_m) * fact(j_minus_m)).sqrt();
    let (sin_half, cos_half) = (theta / 2.0).sin_cos();

    let s_min = 0.max(-mp_minus_m);
    let s_max = j_plus_m.min(j_minus_mp);
    let mut sum = 0.0;
    for s in s_min..=s_max {
        let sign = if (mp_minus_m + s) % 2 == 0 { 1.0 } else { -1.0 };
        let denom = fact(j_plus_m - s) * fact(s) * fact(mp_minus_m + s) * fact(j_minus_mp - s);
        let cos_pow = j.0 - mp_minus_m - 2 * s;
        let sin_pow = mp_minus_m + 2 * s;
        sum += sign * cos_half.powi(cos_pow) * sin_half.powi(sin_pow) / denom;
    }
    Ok(prefactor * sum)
}

/// Full reduced rotation matrix `d^j(θ)`.
///
/// Rows are indexed by `m'` and columns by `m`, both running from `+j`
/// down to `-j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DMatrix {
    j: TwiceInt,
    angle: f64,
    entries: Vec<f64>,
}

impl DMatrix {
    pub fn j(&self) -> TwiceInt {
        self.j
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn dim(&self) -> usize {
        (self.j.0 + 1) as usize
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Row/column index of projection `m` (0 for `m = j`).
    pub fn index_of(&self, m: TwiceInt) -> Option<usize> {
        if m.0.abs() > self.j.0 || (self.j.0 - m.0) % 2 != 0 {
            return None;
        }
        Some(((self.j.0 - m.0) / 2) as usize)
    }

    pub fn get(&self, m_p: TwiceInt, m: TwiceInt) -> Option<f64> {
        let r = self.index_of(m_p)?;
        let c = self.index_of(m)?;
        Some(self.entries[r * self.dim() + c])
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim() + col]
    }

    pub fn transpose(&self) -> DMatrix {
        let n = self.dim();
        let mut entries = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[c * n + r] = self.entries[r * n + c];
            }
        }
        DMatrix { j: self.j, angle: -self.angle, entries }
    }

    /// Matrix product `self · other`; the angles add.
    ///
    /// Panics if the two matrices belong to different `j`.
    pub fn product(&self, other: &DMatrix) -> DMatrix {
        assert_eq!(self.j, other.j, "d-matrix product across different j");
        let n = self.dim();
        let mut entries = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[r * n + c] = (0..n).map(|k| self.at(r, k) * other.at(k, c)).sum();
            }
        }
        DMatrix { j: self.j, angle: self.angle + other.angle, entries }
    }
}

pub fn d_matrix(j: TwiceInt, theta: f64) -> Result<DMatrix> {
    check_pair(j, j)?;
    let ms: Vec<TwiceInt> = projections(j).collect();
    let mut entries = Vec::with_capacity(ms.len() * ms.len());
    for &m_p in &ms {
        for &m in &ms {
            entries.push(wigner_d(j, m_p, m, theta)?);
        }
    }
    Ok(DMatrix { j, angle: theta, entries })
}

/// Clebsch–Gordan coefficient `⟨j1 m1; j2 m2 | J M⟩`.
///
/// Built by ladder operators: the stretched state `|J J⟩` is fixed by
/// `J₊|J J⟩ = 0` with `⟨j1 j1; j2 J−j1|J J⟩ > 0`, then lowered with `J₋`.
/// Returns zero when `M ≠ m1 + m2` or the triangle rule fails.
pub fn clebsch_gordan(
    j1: TwiceInt,
    m1: TwiceInt,
    j2: TwiceInt,
    m2: TwiceInt,
    big_j: TwiceInt,
    big_m: TwiceInt,
) -> Result<f64> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(big_j, big_m)?;
    if big_m.0 != m1.0 + m2.0 || !triangle(j1, j2, big_j) {
        return Ok(0.0);
    }
    let column = coupled_column(j1, j2, big_j, big_m);
    Ok(column[((m1.0 + j1.0) / 2) as usize])
}

/// Whether `J` can result from coupling `j1` and `j2`.
pub fn triangle(j1: TwiceInt, j2: TwiceInt, big_j: TwiceInt) -> bool {
    big_j.0 >= (j1.0 - j2.0).abs() && big_j.0 <= j1.0 + j2.0 && (j1.0 + j2.0 - big_j.0) % 2 == 0
}

// √((j − m)(j + m + 1)) in doubled units
fn raise_factor(j: i32, m: i32) -> f64 {
    (f64::from((j - m) * (j + m + 2))).sqrt() / 2.0
}

// √((j + m)(j − m + 1)) in doubled units
fn lower_factor(j: i32, m: i32) -> f64 {
    (f64::from((j + m) * (j - m + 2))).sqrt() / 2.0
}

/// Expansion of `|J M⟩` over `|j1 m1⟩|j2 M−m1⟩`, indexed by `(m1 + j1)/2`.
///
/// Callers must have checked the triangle rule and label validity.
pub(crate) fn coupled_column(j1: TwiceInt, j2: TwiceInt, big_j: TwiceInt, big_m: TwiceInt) -> Vec<f64> {
    let (j1, j2, jj) = (j1.0, j2.0, big_j.0);
    let len = (j1 + 1) as usize;
    let idx = |m1: i32| ((m1 + j1) / 2) as usize;
    let mut c = vec![0.0; len];

    // stretched state M = J
    let lo = (-j1).max(jj - j2);
    c[idx(lo)] = 1.0;
    let mut m1 = lo;
    while m1 < j1 {
        let next = m1 + 2;
        c[idx(next)] = -c[idx(m1)] * raise_factor(j1, m1) / raise_factor(j2, jj - next);
        m1 = next;
    }
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let sign = if c[idx(j1)] < 0.0 { -1.0 } else { 1.0 };
    for x in &mut c {
        *x *= sign / norm;
    }

    let mut m = jj;
    while m > big_m.0 {
        let scale = lower_factor(jj, m);
        let mut lowered = vec![0.0; len];
        let target = m - 2;
        for m1 in (-j1..=j1).step_by(2) {
            let m2 = target - m1;
            if m2.abs() > j2 {
                continue;
            }
            let mut acc = 0.0;
            // J1- acting on |m1+1⟩|m2⟩
            if m1 + 2 <= j1 {
                acc += c[idx(m1 + 2)] * lower_factor(j1, m1 + 2);
            }
            // J2- acting on |m1⟩|m2+1⟩
            if m2 + 2 <= j2 {
                acc += c[idx(m1)] * lower_factor(j2, m2 + 2);
            }
            lowered[idx(m1)] = acc / scale;
        }
        c = lowered;
        m = target;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const TOL: f64 = 1e-12;

    fn t(x: i32) -> TwiceInt {
        TwiceInt(x)
    }

    #[test]
    fn quarter_turn_j2_entries() {
        let v = wigner_d(t(4), t(4), t(0), FRAC_PI_2).unwrap();
        assert!((v - (3.0f64 / 8.0).sqrt()).abs() < TOL);
        let v = wigner_d(t(4), t(0), t(0), FRAC_PI_2).unwrap();
        assert!((v + 0.5).abs() < TOL);
    }

    #[test]
    fn spin_half_half_turn() {
        let v = wigner_d(t(1), t(1), t(1), PI).unwrap();
        assert!(v.abs() < TOL);
        let v = wigner_d(t(1), t(-1), t(1), PI).unwrap();
        assert!((v - 1.0).abs() < TOL);
    }

    #[test]
    fn identity_at_zero() {
        for j in 0..=8 {
            let d = d_matrix(t(j), 0.0).unwrap();
            for r in 0..d.dim() {
                for c in 0..d.dim() {
                    let want = if r == c { 1.0 } else { 0.0 };
                    assert_eq!(d.at(r, c), want);
                }
            }
        }
    }

    #[test]
    fn j1_closed_forms() {
        let th = 0.7;
        let d = d_matrix(t(2), th).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        assert!((d.get(t(2), t(0)).unwrap() + th.sin() / s2).abs() < TOL);
        assert!((d.get(t(2), t(2)).unwrap() - (1.0 + th.cos()) / 2.0).abs() < TOL);
        assert!((d.get(t(-2), t(2)).unwrap() - (1.0 - th.cos()) / 2.0).abs() < TOL);
        assert!((d.get(t(0), t(0)).unwrap() - th.cos()).abs() < TOL);
    }

    #[test]
    fn domain_errors() {
        assert!(wigner_d(t(2), t(4), t(0), 0.1).is_err());
        assert!(wigner_d(t(2), t(1), t(0), 0.1).is_err());
        assert!(wigner_d(t(-1), t(-1), t(-1), 0.1).is_err());
        assert!(wigner_d(t(22), t(0), t(0), 0.1).is_err());
        assert!(clebsch_gordan(t(2), t(3), t(1), t(1), t(3), t(3)).is_err());
    }

    #[test]
    fn cg_named_values() {
        let v = clebsch_gordan(t(2), t(2), t(1), t(1), t(3), t(3)).unwrap();
        assert!((v - 1.0).abs() < TOL);
        let v = clebsch_gordan(t(2), t(2), t(1), t(-1), t(1), t(1)).unwrap();
        assert!((v - (2.0f64 / 3.0).sqrt()).abs() < TOL);
        let v = clebsch_gordan(t(2), t(0), t(1), t(1), t(1), t(1)).unwrap();
        assert!((v + (1.0f64 / 3.0).sqrt()).abs() < TOL);
    }

    #[test]
    fn cg_zero_off_shell() {
        assert_eq!(clebsch_gordan(t(2), t(2), t(1), t(1), t(3), t(1)).unwrap(), 0.0);
        assert_eq!(clebsch_gordan(t(2), t(0), t(2), t(0), t(8), t(0)).unwrap(), 0.0);
    }

    #[test]
    fn twice_int_display() {
        assert_eq!(t(3).to_string(), "3/2");
        assert_eq!(t(-4).to_string(), "-2");
        assert_eq!(projections(t(2)).collect::<Vec<_>>(), vec![t(2), t(0), t(-2)]);
    }
}
