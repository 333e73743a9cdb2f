//! Reference computations that do not share code paths with the library.
#![allow(dead_code)]

use num_complex::Complex64;

pub const NE_AR_PI: [f64; 3] = [1997.95, 1447.30, 350.73];
pub const NE_AR_AI: [f64; 3] = [5223.49, 3850.76, 1392.43];

fn factorial(n: i32) -> f64 {
    assert!(n >= 0);
    (1..=n).map(f64::from).product()
}

/// Racah closed form for `⟨j1 m1; j2 m2 | J M⟩`, arguments in doubled units.
pub fn racah_cg(j1: i32, m1: i32, j2: i32, m2: i32, jj: i32, mm: i32) -> f64 {
    if m1 + m2 != mm || jj < (j1 - j2).abs() || jj > j1 + j2 || (j1 + j2 + jj) % 2 != 0 {
        return 0.0;
    }
    let h = |x: i32| {
        assert!(x % 2 == 0, "odd combination");
        x / 2
    };
    let pre =
        (f64::from(jj + 1) * factorial(h(jj + j1 - j2)) * factorial(h(jj - j1 + j2)) * factorial(h(j1 + j2 - jj))
            / factorial(h(j1 + j2 + jj) + 1))
        .sqrt();
    let pre2 = (factorial(h(jj + mm))
        * factorial(h(jj - mm))
        * factorial(h(j1 - m1))
        * factorial(h(j1 + m1))
        * factorial(h(j2 - m2))
        * factorial(h(j2 + m2)))
    .sqrt();
    let mut sum = 0.0;
    for k in 0..=40 {
        let args = [k, h(j1 + j2 - jj) - k, h(j1 - m1) - k, h(j2 + m2) - k, h(jj - j2 + m1) + k, h(jj - j1 - m2) + k];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / args.iter().map(|&a| factorial(a)).product::<f64>();
    }
    pre * pre2 * sum
}

/// `d^j(θ) = exp(−θ (J₊ − J₋)/2)` by scaled Taylor series, rows/columns
/// ordered `m = j … −j`. Doubled `j`.
pub fn expm_d(j2: i32, theta: f64) -> Vec<Vec<f64>> {
    let n = (j2 + 1) as usize;
    let m_of = |i: usize| f64::from(j2 - 2 * i as i32) / 2.0;
    let j = f64::from(j2) / 2.0;
    // generator G = −(J₊ − J₋)/2
    let mut g = vec![vec![0.0; n]; n];
    for c in 0..n {
        let m = m_of(c);
        if c > 0 {
            // J₊|m⟩ = √((j−m)(j+m+1)) |m+1⟩, row c−1
            g[c - 1][c] -= 0.5 * ((j - m) * (j + m + 1.0)).sqrt();
        }
        if c + 1 < n {
            // J₋|m⟩ = √((j+m)(j−m+1)) |m−1⟩, row c+1
            g[c + 1][c] += 0.5 * ((j + m) * (j - m + 1.0)).sqrt();
        }
    }
    let squarings = 10;
    let scale = theta / f64::from(1 << squarings);
    let a: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|x| x * scale).collect()).collect();
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..30 {
        term = matmul(&term, &a).into_iter().map(|r| r.into_iter().map(|x| x / k as f64).collect()).collect();
        for r in 0..n {
            for c in 0..n {
                result[r][c] += term[r][c];
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|r| (0..n).map(|c| if r == c { 1.0 } else { 0.0 }).collect()).collect()
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n).map(|r| (0..n).map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum()).collect()).collect()
}

/// Ω-weights `(w₀, w₁, w₂)` written out directly from the Hopf amplitudes.
pub fn direct_omega_weights(eta: f64, xi: f64) -> [f64; 3] {
    let a0 = Complex64::new(eta.sin(), 0.0);
    let a2 = Complex64::from_polar(eta.cos(), xi);
    let r38 = (3.0f64 / 8.0).sqrt();
    let w2 = 2.0 * (a0 * r38 + a2 / 4.0).norm_sqr();
    let w1 = a2.norm_sqr() / 2.0;
    let w0 = (a2 * r38 - a0 / 2.0).norm_sqr();
    [w0, w1, w2]
}

pub fn direct_sigma(table: &[f64; 3], eta: f64, xi: f64) -> f64 {
    let w = direct_omega_weights(eta, xi);
    w[0] * table[0] + w[1] * table[1] + w[2] * table[2]
}

/// Maximum of `direct_sigma` on an `n × n` grid (η inclusive, ξ exclusive).
pub fn brute_force_extrema(table: &[f64; 3], n: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let eta = std::f64::consts::PI * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let xi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let v = direct_sigma(table, eta, xi);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}

/// Phase-only factor at `η` from `B ± |A|` with
/// `A = √(3/8) sin η cos η (σ₂ − σ₀)`.
pub fn closed_form_phase_factor(table: &[f64; 3], eta: f64) -> f64 {
    let (s, c) = eta.sin_cos();
    let b = table[2] * 2.0 * (3.0 / 8.0 * s * s + c * c / 16.0)
        + table[1] * c * c / 2.0
        + table[0] * (3.0 / 8.0 * c * c + s * s / 4.0);
    let a = ((3.0f64 / 8.0).sqrt() * s * c * (table[2] - table[0])).abs();
    (b + a) / (b - a)
}
