//! Averaging kernels in normalized Gegenbauer coordinates.
//!
//! An even univariate polynomial h that is nonnegative on [-1, 1] determines
//! a degree-preserving averaging operator on forms whose eigenvalues are the
//! coefficients λ_{2j} of h in the basis {g_{2j}}. This module constructs
//! those coefficient vectors three ways: by numerically expanding an
//! arbitrary even polynomial, by the closed-form coefficients of the pure
//! power t^{2s} (normalized to unit mass on the sphere), and by solving the
//! Fang-Fawzi eigenvalue problem for the kernel h = q² that minimizes
//! Σ_{j≤k} (1 - λ_{2j}) subject to λ_0 = 1.

use crate::cubature::gauss_jacobi;
use crate::harmonic::{harmonic_dim, normalized_gegenbauer_upto, sphere_area};
use crate::linalg::jacobi_eigen_symmetric;
use crate::special::ln_gamma_half;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Coefficients λ_0, λ_2, ..., λ_{2s} of an even kernel h in the normalized
/// Gegenbauer basis for S^{n-1}; `lambdas[j]` is λ_{2j}.
#[derive(Debug, Clone, PartialEq)]
pub struct GegenbauerKernel {
    n: usize,
    s: usize,
    lambdas: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct KernelJson {
    n: usize,
    s: usize,
    lambdas: Vec<f64>,
}

impl GegenbauerKernel {
    /// Assemble a kernel from explicit coefficients λ_{2j}, j = 0..=s.
    pub fn from_lambdas(n: usize, lambdas: Vec<f64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "Gegenbauer kernels need n >= 3, got {n}"
            )));
        }
        if lambdas.is_empty() {
            return Err(Error::InvalidParameter(
                "a kernel needs at least the degree-0 coefficient".into(),
            ));
        }
        let s = lambdas.len() - 1;
        Ok(Self { n, s, lambdas })
    }

    /// The kernel with every λ_{2j} = 1 (the averaging operator is the
    /// identity on forms of degree ≤ 2s).
    pub fn identity(n: usize, s: usize) -> Self {
        assert!(n >= 3, "Gegenbauer kernels need n >= 3");
        Self {
            n,
            s,
            lambdas: vec![1.0; s + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Half-degree: the kernel polynomial has degree 2s.
    pub fn s(&self) -> usize {
        self.s
    }

    /// λ_{2j} for j = 0..=s.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// λ_{2j}, zero beyond the kernel degree.
    pub fn lambda(&self, j: usize) -> f64 {
        self.lambdas.get(j).copied().unwrap_or(0.0)
    }

    /// Reconstructed kernel value h(t) = Σ_j λ_{2j} g_{2j}(t).
    pub fn evaluate(&self, t: f64) -> f64 {
        let g = normalized_gegenbauer_upto(self.n, 2 * self.s, t);
        self.lambdas
            .iter()
            .enumerate()
            .map(|(j, &l)| l * g[2 * j])
            .sum()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&KernelJson {
            n: self.n,
            s: self.s,
            lambdas: self.lambdas.clone(),
        })
        .expect("kernel serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: KernelJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.lambdas.len() != doc.s + 1 {
            return Err(Error::Parse(format!(
                "kernel JSON declares s = {} but carries {} coefficients",
                doc.s,
                doc.lambdas.len()
            )));
        }
        Self::from_lambdas(doc.n, doc.lambdas)
    }
}

/// Expand an even univariate polynomial (monomial coefficients, ascending
/// powers) in the normalized Gegenbauer basis:
/// λ_{2j} = ∫ h g_{2j} w dt / ∫ g_{2j}² w dt with w(t) = (1-t²)^{(n-3)/2}.
pub fn gegenbauer_expand(h: &[f64], n: usize) -> Result<GegenbauerKernel> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "Gegenbauer expansion needs n >= 3, got {n}"
        )));
    }
    for (index, &c) in h.iter().enumerate() {
        if index % 2 == 1 && c != 0.0 {
            return Err(Error::OddCoefficient { index });
        }
    }
    let degree = h.iter().rposition(|&c| c != 0.0).unwrap_or(0);
    let s = degree / 2;
    let alpha = (n as f64 - 3.0) / 2.0;
    // integrands have degree <= deg(h) + 2·(2s) <= 4s, so 2s+1 nodes suffice
    let quad = gauss_jacobi(2 * s + 1, alpha)?;
    let mut num = vec![0.0; s + 1];
    let mut den = vec![0.0; s + 1];
    for (&t, &w) in quad.nodes().iter().zip(quad.weights()) {
        let hv: f64 = h.iter().rev().fold(0.0, |acc, &c| acc * t + c);
        let g = normalized_gegenbauer_upto(n, 2 * s, t);
        for j in 0..=s {
            num[j] += w * hv * g[2 * j];
            den[j] += w * g[2 * j] * g[2 * j];
        }
    }
    let lambdas = num.iter().zip(&den).map(|(a, b)| a / b).collect();
    GegenbauerKernel::from_lambdas(n, lambdas)
}

/// Closed-form coefficients of the normalized pure power kernel
/// h_s(t) = t^{2s} / ∫_S y_1^{2s} dμ(y):
/// λ_{2j} = s! Γ((2s+n)/2) / [(s-j)! Γ((2s+2j+n)/2)], zero for j > s.
/// Gamma ratios are taken as log-gamma differences.
pub fn power_kernel(n: usize, s: usize) -> GegenbauerKernel {
    assert!(n >= 3, "power kernel needs n >= 3");
    let lambdas = (0..=s)
        .map(|j| {
            (ln_gamma_half(2 * (s as u64 + 1)) - ln_gamma_half(2 * (s as u64 - j as u64 + 1))
                + ln_gamma_half(2 * s as u64 + n as u64)
                - ln_gamma_half(2 * s as u64 + 2 * j as u64 + n as u64))
            .exp()
        })
        .collect();
    GegenbauerKernel { n, s, lambdas }
}

/// The matrix A_ℓ = τ[g_ℓ] with entries ∫ g_i g_j g_ℓ w dt for 0 ≤ i, j ≤ s.
pub fn toeplitz_matrix(n: usize, ell: usize, s: usize) -> Result<Vec<Vec<f64>>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "Toeplitz matrices need n >= 3, got {n}"
        )));
    }
    let alpha = (n as f64 - 3.0) / 2.0;
    let quad = gauss_jacobi((2 * s + ell) / 2 + 1, alpha)?;
    let jmax = s.max(ell);
    let mut mat = vec![vec![0.0; s + 1]; s + 1];
    for (&t, &w) in quad.nodes().iter().zip(quad.weights()) {
        let g = normalized_gegenbauer_upto(n, jmax, t);
        for i in 0..=s {
            for j in i..=s {
                mat[i][j] += w * g[i] * g[j] * g[ell];
            }
        }
    }
    for i in 0..=s {
        for j in 0..i {
            mat[i][j] = mat[j][i];
        }
    }
    Ok(mat)
}

/// The Fang-Fawzi eigenvalue kernel and its optimum.
#[derive(Debug, Clone)]
pub struct FangFawziSolution {
    /// The kernel h = q² expressed by its even coefficients λ_{2j}.
    pub kernel: GegenbauerKernel,
    /// ρ*_{2k,s} = Σ_{j=0}^{k} (1 - λ_{2j}) = k - k λ_max.
    pub rho: f64,
    /// λ_max(T_{2k,s}).
    pub eigenvalue: f64,
    /// The maximizing unit eigenvector e*.
    pub eigenvector: Vec<f64>,
    /// Coefficients η_j of q in the basis {g_j}, j = 0..=s.
    pub eta: Vec<f64>,
}

/// Solve the Fang-Fawzi problem min Σ_{j=0}^k (1 - λ_{2j}) over kernels
/// h = q² of degree 2s with λ_0 = 1.
///
/// The symmetric eigenproblem is posed on T_{2k,s}, the similarity-symmetrized
/// average of the matrices A_{2j} for j = 1..=k (the j = 0 term is the
/// identity once λ_0 = 1 is absorbed into the unit-norm constraint, so it is
/// left out of the average). The top eigenvector is mapped back to the q
/// coefficients and the kernel coefficients λ_ℓ are read off from q².
pub fn fang_fawzi_kernel(n: usize, k: usize, s: usize) -> Result<FangFawziSolution> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "Fang-Fawzi kernels need n >= 3, got {n}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter(
            "Fang-Fawzi kernels need k >= 1".into(),
        ));
    }
    if s < k {
        return Err(Error::InvalidParameter(format!(
            "Fang-Fawzi kernels need s >= k (got s = {s}, k = {k}); smaller s leaves some lambda_2j = 0"
        )));
    }
    let alpha = (n as f64 - 3.0) / 2.0;
    let mu = sphere_area(n);
    // all integrands below have degree <= 4s
    let quad = gauss_jacobi(2 * s + 2, alpha)?;
    let m = quad.len();
    let gtab: Vec<Vec<f64>> = quad
        .nodes()
        .iter()
        .map(|&t| normalized_gegenbauer_upto(n, 2 * s, t))
        .collect();
    let w = quad.weights();

    // squared norms ∫ g_ℓ² w dt
    let mut d = vec![0.0; 2 * s + 1];
    for ell in 0..=2 * s {
        for node in 0..m {
            d[ell] += w[node] * gtab[node][ell] * gtab[node][ell];
        }
    }
    if d.iter().any(|&v| v.is_nan() || v <= 0.0 || !v.is_finite()) {
        return Err(Error::Numeric(
            "indefinite Gegenbauer Gram matrix in Fang-Fawzi construction".into(),
        ));
    }

    let mut t_mat = vec![vec![0.0; s + 1]; s + 1];
    for j in 1..=k {
        let coef = mu * d[0] / d[2 * j] / k as f64;
        for node in 0..m {
            let g2j = gtab[node][2 * j];
            for i in 0..=s {
                let gi = gtab[node][i];
                for l in i..=s {
                    t_mat[i][l] += coef * w[node] * gi * gtab[node][l] * g2j;
                }
            }
        }
    }
    for i in 0..=s {
        t_mat[i][i] /= d[i];
        for l in i + 1..=s {
            t_mat[i][l] /= (d[i] * d[l]).sqrt();
            t_mat[l][i] = t_mat[i][l];
        }
    }

    let (eigs, vecs) = jacobi_eigen_symmetric(t_mat)?;
    let top = eigs.len() - 1;
    let eigenvalue = eigs[top];
    let mut e: Vec<f64> = (0..=s).map(|i| vecs[i][top]).collect();
    if let Some(first) = e.iter().find(|v| v.abs() > 1e-9) {
        if *first < 0.0 {
            e.iter_mut().for_each(|v| *v = -*v);
        }
    }

    let mut eta: Vec<f64> = e
        .iter()
        .enumerate()
        .map(|(i, &ei)| (mu * d[0]).sqrt() * ei / d[i].sqrt())
        .collect();
    let qvals: Vec<f64> = (0..m)
        .map(|node| {
            eta.iter()
                .enumerate()
                .map(|(i, &c)| c * gtab[node][i])
                .sum()
        })
        .collect();
    let mut lambda_all = vec![0.0; 2 * s + 1];
    for ell in 0..=2 * s {
        let mut acc = 0.0;
        for node in 0..m {
            acc += w[node] * qvals[node] * qvals[node] * gtab[node][ell];
        }
        lambda_all[ell] = acc / d[ell];
    }
    let lambda0 = lambda_all[0];
    if lambda0.is_nan() || lambda0 <= 0.0 {
        return Err(Error::Numeric(
            "Fang-Fawzi normalization produced a nonpositive lambda_0".into(),
        ));
    }
    for l in &mut lambda_all {
        *l /= lambda0;
    }
    eta.iter_mut().for_each(|c| *c /= lambda0.sqrt());

    let lambdas: Vec<f64> = (0..=s).map(|j| lambda_all[2 * j]).collect();
    for j in 0..=k.min(s) {
        if lambdas[j].abs() <= 1e-12 {
            return Err(Error::SingularKernel { index: 2 * j });
        }
    }
    let rho = k as f64 - k as f64 * eigenvalue;
    Ok(FangFawziSolution {
        kernel: GegenbauerKernel { n, s, lambdas },
        rho,
        eigenvalue,
        eigenvector: e,
        eta,
    })
}

/// The Frobenius threshold of a kernel in degree 2k:
/// τ_{2k}(h) = sqrt(Σ_{j=0}^{k} dim(H_{2j}) (1/λ_{2j} - 1)²).
///
/// Fails with the offending index when some λ_{2j}, j ≤ k, vanishes.
pub fn frobenius_threshold(kernel: &GegenbauerKernel, k: usize) -> Result<f64> {
    let mut acc = 0.0;
    for j in 0..=k {
        let lambda = kernel.lambda(j);
        if lambda.abs() <= 1e-12 {
            return Err(Error::SingularKernel { index: 2 * j });
        }
        let dev = 1.0 / lambda - 1.0;
        acc += harmonic_dim(kernel.n(), 2 * j) as f64 * dev * dev;
    }
    Ok(acc.sqrt())
}
