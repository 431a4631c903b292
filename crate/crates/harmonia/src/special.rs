//! Log-gamma helpers shared by the quadrature and kernel modules.

use std::f64::consts::PI;

/// ln Γ(z/2) for integer `two_z = z·2 ≥ 1`, accumulated from Γ(1/2) = √π or
/// Γ(1) = 1 by the recurrence Γ(x+1) = x·Γ(x).
///
/// All gamma arguments appearing in sphere areas, monomial integrals and the
/// pure-power kernel are half-integers, so this path keeps those ratios clean
/// without a general-purpose approximation.
pub(crate) fn ln_gamma_half(two_z: u64) -> f64 {
    assert!(two_z >= 1, "gamma argument must be positive");
    if two_z % 2 == 0 {
        // ln (m-1)! with m = two_z / 2
        let m = two_z / 2;
        let mut acc = 0.0;
        for i in 2..m {
            acc += (i as f64).ln();
        }
        acc
    } else {
        // ln Γ(1/2 + p) with p = (two_z - 1) / 2
        let p = (two_z - 1) / 2;
        let mut acc = 0.5 * PI.ln();
        for i in 0..p {
            acc += (i as f64 + 0.5).ln();
        }
        acc
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for real x > 0 (Lanczos, g = 7).
pub(crate) fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "gamma argument must be positive");
    if x < 0.5 {
        // shift up: ln Γ(x) = ln Γ(x + 1) - ln x
        return ln_gamma(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}
