//! Harmonic analysis on spheres: dimensions of harmonic spaces, harmonic
//! decomposition of forms, Gegenbauer polynomials and zonal harmonics.
//!
//! Everything here assumes n ≥ 3 so the Gegenbauer parameter α = (n-2)/2 is
//! positive; the circle is handled separately by the cubature module.

use crate::linalg::solve_dense;
use crate::polynomial::monomial_exponents;
use crate::special::ln_gamma_half;
use crate::{Error, HomogeneousPolynomial, Result};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// dim H_j, the dimension of the space of degree-j harmonic forms in R^n:
/// binom(n+j-1, j) - binom(n+j-3, j-2).
pub fn harmonic_dim(n: usize, j: usize) -> usize {
    if j == 0 {
        return 1;
    }
    if j == 1 {
        return n;
    }
    (binomial(n + j - 1, j) - binomial(n + j - 3, j - 2)) as usize
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Surface area of S^{n-1}: 2 π^{n/2} / Γ(n/2).
pub fn sphere_area(n: usize) -> f64 {
    assert!(n >= 2);
    (2.0f64.ln() + n as f64 / 2.0 * PI.ln() - ln_gamma_half(n as u64)).exp()
}

/// Gegenbauer polynomial C_j^{(α)}(t) by the three-term recursion
/// C_0 = 1, C_1 = 2αt, C_j = [2t(j+α-1)C_{j-1} - (j+2α-2)C_{j-2}]/j.
pub fn gegenbauer(j: usize, alpha: f64, t: f64) -> f64 {
    let mut prev = 1.0;
    if j == 0 {
        return prev;
    }
    let mut cur = 2.0 * alpha * t;
    for jj in 2..=j {
        let jf = jj as f64;
        let next = (2.0 * t * (jf + alpha - 1.0) * cur - (jf + 2.0 * alpha - 2.0) * prev) / jf;
        prev = cur;
        cur = next;
    }
    cur
}

/// Monomial coefficients of C_j^{(α)} (index = power of t).
pub(crate) fn gegenbauer_coefficients(j: usize, alpha: f64) -> Vec<f64> {
    let mut prev = vec![0.0; j + 1];
    prev[0] = 1.0;
    if j == 0 {
        return prev;
    }
    let mut cur = vec![0.0; j + 1];
    cur[1] = 2.0 * alpha;
    for jj in 2..=j {
        let jf = jj as f64;
        let mut next = vec![0.0; j + 1];
        for p in 0..jj {
            next[p + 1] += 2.0 * (jf + alpha - 1.0) * cur[p] / jf;
        }
        for p in 0..=j {
            next[p] -= (jf + 2.0 * alpha - 2.0) * prev[p] / jf;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// The normalized Gegenbauer polynomial
/// g_j(t) = dim(H_j) / (μ(S) C_j^{(α)}(1)) · C_j^{(α)}(t) with α = (n-2)/2,
/// so that g_j(⟨x, y⟩) is the reproducing kernel of H_j.
pub fn normalized_gegenbauer(n: usize, j: usize, t: f64) -> f64 {
    assert!(n >= 3, "normalized Gegenbauer polynomials need n >= 3");
    let alpha = (n as f64 - 2.0) / 2.0;
    harmonic_dim(n, j) as f64 / (sphere_area(n) * gegenbauer(j, alpha, 1.0))
        * gegenbauer(j, alpha, t)
}

/// g_0(t), ..., g_jmax(t) in one pass of the recursion.
pub(crate) fn normalized_gegenbauer_upto(n: usize, jmax: usize, t: f64) -> Vec<f64> {
    let alpha = (n as f64 - 2.0) / 2.0;
    let mu = sphere_area(n);
    let raw = gegenbauer_upto(jmax, alpha, t);
    let raw1 = gegenbauer_upto(jmax, alpha, 1.0);
    (0..=jmax)
        .map(|j| harmonic_dim(n, j) as f64 / (mu * raw1[j]) * raw[j])
        .collect()
}

fn gegenbauer_upto(jmax: usize, alpha: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(jmax + 1);
    out.push(1.0);
    if jmax == 0 {
        return out;
    }
    out.push(2.0 * alpha * t);
    for j in 2..=jmax {
        let jf = j as f64;
        let v = (2.0 * t * (jf + alpha - 1.0) * out[j - 1] - (jf + 2.0 * alpha - 2.0) * out[j - 2])
            / jf;
        out.push(v);
    }
    out
}

/// The harmonic decomposition f = Σ_j ‖x‖^{2(k-j)} f_{2j} of a degree-2k
/// form, with each f_{2j} harmonic of degree 2j.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicExpansion {
    n: usize,
    k: usize,
    components: Vec<HomogeneousPolynomial>,
}

impl HarmonicExpansion {
    /// Assemble an expansion from components f_0, f_2, ..., f_{2k}; component
    /// `j` must be a form of degree 2j in a consistent dimension.
    pub fn new(components: Vec<HomogeneousPolynomial>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter(
                "an expansion needs at least the degree-0 component".into(),
            ));
        }
        let n = components[0].n();
        for (j, c) in components.iter().enumerate() {
            if c.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.n(),
                });
            }
            if c.degree() != 2 * j {
                return Err(Error::MixedDegree {
                    degree: 2 * j,
                    exponent_sum: c.degree(),
                });
            }
        }
        let k = components.len() - 1;
        Ok(Self { n, k, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Components indexed by j (degrees 0, 2, ..., 2k).
    pub fn components(&self) -> &[HomogeneousPolynomial] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &HomogeneousPolynomial {
        &self.components[j]
    }

    /// Σ_j ‖x‖^{2(k-j)} f_{2j}, the inverse of [`harmonic_decompose`].
    pub fn reconstruct(&self) -> HomogeneousPolynomial {
        let mut acc = HomogeneousPolynomial::zero(self.n, 2 * self.k);
        for (j, comp) in self.components.iter().enumerate() {
            acc = acc
                .add(&comp.multiply_norm_power(self.k - j))
                .expect("components have matching degrees");
        }
        acc
    }
}

/// Decompose an even-degree form into its unique harmonic expansion.
///
/// The top component is obtained by solving Δ(‖x‖² q) = Δf for q in monomial
/// coordinates (the map is invertible on forms), subtracting, and recursing
/// on q.
pub fn harmonic_decompose(f: &HomogeneousPolynomial) -> Result<HarmonicExpansion> {
    if f.degree() % 2 != 0 {
        return Err(Error::OddDegree { degree: f.degree() });
    }
    let n = f.n();
    let k = f.degree() / 2;
    let mut rev_components = Vec::with_capacity(k + 1);
    let mut current = f.clone();
    for kk in (1..=k).rev() {
        let d = 2 * kk;
        let basis = monomial_exponents(n, (d - 2) as u32);
        let index: HashMap<&[u32], usize> = basis
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_slice(), i))
            .collect();
        let size = basis.len();
        let mut mat = vec![vec![0.0; size]; size];
        for (col, e) in basis.iter().enumerate() {
            let mono = HomogeneousPolynomial::new(n, d - 2, [(e.clone(), 1.0)])?;
            let image = mono.multiply_norm_power(1).laplacian();
            for (exp, c) in image.terms() {
                mat[index[exp]][col] = c;
            }
        }
        let mut rhs = vec![0.0; size];
        for (exp, c) in current.laplacian().terms() {
            rhs[index[exp]] = c;
        }
        let sol = solve_dense(mat, rhs)?;
        let q = HomogeneousPolynomial::new(n, d - 2, basis.into_iter().zip(sol))?;
        let top = current.add(&q.multiply_norm_power(1).scale(-1.0))?;
        rev_components.push(top);
        current = q;
    }
    rev_components.push(current);
    rev_components.reverse();
    HarmonicExpansion::new(rev_components)
}

type ZonalKey = (usize, usize, Vec<u64>);

static ZONAL_CACHE: OnceLock<Mutex<HashMap<ZonalKey, Arc<HomogeneousPolynomial>>>> =
    OnceLock::new();

/// The zonal harmonic φ_y^j: the degree-j harmonic form representing point
/// evaluation at `y` on H_j, expanded to monomials:
/// φ_y^j(x) = dim(H_j) / (μ(S) C_j(1)) · ‖x‖^j C_j^{(α)}(⟨x/‖x‖, y⟩).
///
/// `y` must be a unit vector (within 1e-12). Expansions are cached per
/// (n, j, y) within the process.
pub fn zonal_harmonic(n: usize, j: usize, y: &[f64]) -> Result<HomogeneousPolynomial> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "zonal harmonics need n >= 3, got {n}"
        )));
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: y.len(),
        });
    }
    let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitVector { norm });
    }
    let key: ZonalKey = (n, j, y.iter().map(|v| v.to_bits()).collect());
    let cache = ZONAL_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("zonal cache poisoned").get(&key) {
        return Ok((**hit).clone());
    }

    let alpha = (n as f64 - 2.0) / 2.0;
    let coeffs = gegenbauer_coefficients(j, alpha);
    let scale = harmonic_dim(n, j) as f64 / (sphere_area(n) * gegenbauer(j, alpha, 1.0));
    let mut acc = HomogeneousPolynomial::zero(n, j);
    for (p, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let lin = linear_form_power(y, p as u32)?;
        acc = acc.add(&lin.multiply_norm_power((j - p) / 2).scale(c * scale))?;
    }

    let out = Arc::new(acc);
    cache
        .lock()
        .expect("zonal cache poisoned")
        .insert(key, Arc::clone(&out));
    Ok((*out).clone())
}

/// ⟨x, y⟩^p expanded by the multinomial theorem.
fn linear_form_power(y: &[f64], p: u32) -> Result<HomogeneousPolynomial> {
    let n = y.len();
    let terms = monomial_exponents(n, p).into_iter().map(|beta| {
        let mut coef = multinomial(p, &beta);
        for (yi, &b) in y.iter().zip(&beta) {
            if b > 0 {
                coef *= yi.powi(b as i32);
            }
        }
        (beta, coef)
    });
    HomogeneousPolynomial::new(n, p as usize, terms)
}

fn multinomial(p: u32, parts: &[u32]) -> f64 {
    assert!(p <= 34, "multinomial coefficients overflow u128 beyond 34!");
    let mut acc: u128 = 1;
    for i in 2..=p as u128 {
        acc *= i;
    }
    for &b in parts {
        for i in 2..=b as u128 {
            acc /= i;
        }
    }
    acc as f64
}
