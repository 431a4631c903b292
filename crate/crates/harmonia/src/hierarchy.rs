//! The harmonic-hierarchy engine: diagonal averaging operator and its
//! inverse, membership certification, optimization-free lower bounds,
//! cubature upper bounds, dual moment generators and level sweeps.
//!
//! For a degree-2k form f with harmonic expansion Σ ‖x‖^{2(k-j)} f_{2j} and a
//! kernel with coefficients λ_{2j}, the averaging operator scales component j
//! by λ_{2j}. The lower bound evaluates the inverse image Γ̂⁻¹f at the nodes
//! of a cubature rule of degree 2(k+s) and takes the minimum; it never
//! exceeds the true sphere minimum. The upper bound is the minimum of f
//! itself over the nodes.

use crate::cubature::{cached_rule, CubatureRule};
use crate::harmonic::{harmonic_decompose, sphere_area, zonal_harmonic, HarmonicExpansion};
use crate::kernel::{fang_fawzi_kernel, frobenius_threshold, power_kernel, GegenbauerKernel};
use crate::polynomial::eval_on_nodes;
use crate::{Error, HomogeneousPolynomial, Result};
use std::time::Instant;

/// Which kernel family a sweep uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Power,
    FangFawzi,
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelKind::Power => write!(f, "power"),
            KernelKind::FangFawzi => write!(f, "fangfawzi"),
        }
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(KernelKind::Power),
            "fangfawzi" => Ok(KernelKind::FangFawzi),
            other => Err(Error::InvalidParameter(format!(
                "unknown kernel kind '{other}' (expected power|fangfawzi)"
            ))),
        }
    }
}

/// How a sweep picks its cubature rule per level.
///
/// `PerLevel` uses the exact-degree rule 2(k+s) at each level, keeping node
/// counts minimal. `SharedMax` evaluates every level on the single rule of
/// the largest needed degree; its exactness covers all lower levels, and the
/// fixed node set makes the bound sequences vary monotonically with s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RulePolicy {
    #[default]
    PerLevel,
    SharedMax,
}

/// One hierarchy level's bounds and metadata.
#[derive(Debug, Clone)]
pub struct BoundResult {
    /// Kernel half-degree of this level.
    pub s: usize,
    pub kernel_kind: KernelKind,
    /// Frobenius threshold τ_{2k}(h_s).
    pub tau: f64,
    /// Optimization-free lower bound β*.
    pub lower: f64,
    /// Node-minimum upper bound α^quad.
    pub upper: f64,
    /// Node count of the rule this level was evaluated on.
    pub cubature_size: usize,
    /// Wall-clock time spent on this level, in milliseconds.
    pub elapsed_ms: f64,
}

/// Apply the averaging operator: scale harmonic component 2j by λ_{2j}
/// (zero beyond the kernel degree) and reassemble.
pub fn apply_gamma(
    f: &HomogeneousPolynomial,
    kernel: &GegenbauerKernel,
) -> Result<HomogeneousPolynomial> {
    check_same_n(f, kernel)?;
    let expansion = harmonic_decompose(f)?;
    Ok(scale_expansion(&expansion, |j| kernel.lambda(j)).reconstruct())
}

/// Apply the inverse averaging operator: scale component 2j by 1/λ_{2j}.
/// Fails naming the vanishing coefficient when the kernel is singular up to
/// degree 2k.
pub fn apply_gamma_inverse(
    f: &HomogeneousPolynomial,
    kernel: &GegenbauerKernel,
) -> Result<HomogeneousPolynomial> {
    check_same_n(f, kernel)?;
    let expansion = harmonic_decompose(f)?;
    Ok(inverse_from_expansion(&expansion, kernel)?.reconstruct())
}

fn check_same_n(f: &HomogeneousPolynomial, kernel: &GegenbauerKernel) -> Result<()> {
    if f.n() != kernel.n() {
        return Err(Error::DimensionMismatch {
            expected: kernel.n(),
            got: f.n(),
        });
    }
    Ok(())
}

fn scale_expansion<F: Fn(usize) -> f64>(
    expansion: &HarmonicExpansion,
    factor: F,
) -> HarmonicExpansion {
    let components = expansion
        .components()
        .iter()
        .enumerate()
        .map(|(j, c)| c.scale(factor(j)))
        .collect();
    HarmonicExpansion::new(components).expect("scaling preserves component shape")
}

fn check_invertible(kernel: &GegenbauerKernel, k: usize) -> Result<()> {
    for j in 0..=k {
        if kernel.lambda(j).abs() <= 1e-12 {
            return Err(Error::SingularKernel { index: 2 * j });
        }
    }
    Ok(())
}

fn inverse_from_expansion(
    expansion: &HarmonicExpansion,
    kernel: &GegenbauerKernel,
) -> Result<HarmonicExpansion> {
    check_invertible(kernel, expansion.k())?;
    Ok(scale_expansion(expansion, |j| 1.0 / kernel.lambda(j)))
}

/// Evaluate the averaging operator at `x` through the cubature rule:
/// Σ_z W(z) h(⟨x, z⟩) f(z). Agrees with `apply_gamma(f, kernel)(x)` whenever
/// the rule degree is at least 2(k+s); this is the independent cross-check of
/// the diagonalization.
pub fn convolve_on_nodes(
    f: &HomogeneousPolynomial,
    kernel: &GegenbauerKernel,
    rule: &CubatureRule,
    x: &[f64],
) -> Result<f64> {
    check_same_n(f, kernel)?;
    if rule.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: rule.n(),
        });
    }
    if x.len() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: x.len(),
        });
    }
    let required = f.degree() + 2 * kernel.s();
    if rule.algebraic_degree() < required {
        return Err(Error::InsufficientRuleDegree {
            required,
            available: rule.algebraic_degree(),
        });
    }
    let fvals = eval_on_nodes(f, rule.nodes());
    let mut acc = 0.0;
    for ((z, &w), fv) in rule.nodes().iter().zip(rule.weights()).zip(fvals) {
        let dot: f64 = x.iter().zip(z).map(|(a, b)| a * b).sum();
        acc += w * kernel.evaluate(dot) * fv;
    }
    Ok(acc)
}

fn check_lower_bound_inputs(
    f: &HomogeneousPolynomial,
    kernel: &GegenbauerKernel,
    rule: &CubatureRule,
) -> Result<()> {
    check_same_n(f, kernel)?;
    if rule.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: rule.n(),
        });
    }
    if (kernel.lambda(0) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "lower bounds need lambda_0 = 1, got {}",
            kernel.lambda(0)
        )));
    }
    let required = f.degree() + 2 * kernel.s();
    if rule.algebraic_degree() < required {
        return Err(Error::InsufficientRuleDegree {
            required,
            available: rule.algebraic_degree(),
        });
    }
    Ok(())
}

fn min_over_nodes(f: &HomogeneousPolynomial, rule: &CubatureRule) -> f64 {
    eval_on_nodes(f, rule.nodes())
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

fn lower_from_expansion(
    expansion: &HarmonicExpansion,
    kernel: &GegenbauerKernel,
    rule: &CubatureRule,
) -> Result<f64> {
    let inverse = inverse_from_expansion(expansion, kernel)?.reconstruct();
    if inverse.is_zero() {
        return Ok(0.0);
    }
    Ok(min_over_nodes(&inverse, rule))
}

/// The optimization-free lower bound β*: the minimum of Γ̂⁻¹f over the nodes
/// of a rule of algebraic degree ≥ 2(k+s). Guaranteed ≤ min_{x∈S} f(x).
pub fn lower_bound(
    f: &HomogeneousPolynomial,
    kernel: &GegenbauerKernel,
    rule: &CubatureRule,
) -> Result<f64> {
    check_lower_bound_inputs(f, kernel, rule)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let expansion = harmonic_decompose(f)?;
    lower_from_expansion(&expansion, kernel, rule)
}

/// The cubature upper bound α^quad: the minimum of f over the rule nodes.
/// Never below the true sphere minimum.
pub fn upper_bound(f: &HomogeneousPolynomial, rule: &CubatureRule) -> Result<f64> {
    if rule.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: rule.n(),
        });
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    Ok(min_over_nodes(f, rule))
}

/// Certify membership of f in the hierarchy level A_s: true iff
/// min over the rule nodes of f exceeds (τ_{2k}(h) / √μ(S)) ‖f‖₂, with the
/// L² norm taken through a dedicated rule of degree exactly 4k.
///
/// A true result is cross-checked against the node positivity of Γ̂⁻¹f it
/// implies rather than assumed.
pub fn certify_membership(
    f: &HomogeneousPolynomial,
    kernel: &GegenbauerKernel,
    rule: &CubatureRule,
) -> Result<bool> {
    check_lower_bound_inputs(f, kernel, rule)?;
    if f.is_zero() {
        return Ok(false);
    }
    let k = f.degree() / 2;
    let tau = frobenius_threshold(kernel, k)?;
    let norm_rule = cached_rule(f.n(), 2 * k)?;
    let l2 = f.l2_norm(&norm_rule)?;
    let node_min = min_over_nodes(f, rule);
    let certified = node_min > tau / sphere_area(f.n()).sqrt() * l2;
    if certified {
        let inverse_min = lower_bound(f, kernel, rule)?;
        if inverse_min <= 0.0 {
            return Err(Error::Numeric(format!(
                "certification inconsistency: node minimum of the inverse image is {inverse_min}"
            )));
        }
    }
    Ok(certified)
}

/// A dual-cone generator L_y: the node together with the degree-2k form
/// Σ_{j=0}^{k} λ_{2j} ‖x‖^{2(k-j)} φ_y^{2j}(x) representing the functional
/// f ↦ Γ̂_h(f)(y) against the sphere inner product.
#[derive(Debug, Clone)]
pub struct DualGenerator {
    node: Vec<f64>,
    representer: HomogeneousPolynomial,
}

impl DualGenerator {
    pub fn node(&self) -> &[f64] {
        &self.node
    }

    pub fn representer(&self) -> &HomogeneousPolynomial {
        &self.representer
    }
}

/// Emit one dual generator per node of the level rule.
pub fn moment_generators(
    k: usize,
    kernel: &GegenbauerKernel,
    rule: &CubatureRule,
) -> Result<Vec<DualGenerator>> {
    if rule.n() != kernel.n() {
        return Err(Error::DimensionMismatch {
            expected: kernel.n(),
            got: rule.n(),
        });
    }
    check_invertible(kernel, k)?;
    let n = kernel.n();
    let mut out = Vec::with_capacity(rule.len());
    for node in rule.nodes() {
        let mut representer = HomogeneousPolynomial::zero(n, 2 * k);
        for j in 0..=k {
            let phi = zonal_harmonic(n, 2 * j, node)?;
            representer =
                representer.add(&phi.multiply_norm_power(k - j).scale(kernel.lambda(j)))?;
        }
        out.push(DualGenerator {
            node: node.clone(),
            representer,
        });
    }
    Ok(out)
}

/// Run one hierarchy level per s in `s_min..=s_max`, producing τ, β*, α^quad
/// and timing metadata. Results are deterministic across runs (timings
/// aside).
pub fn sweep(
    f: &HomogeneousPolynomial,
    kind: KernelKind,
    s_min: usize,
    s_max: usize,
    policy: RulePolicy,
) -> Result<Vec<BoundResult>> {
    if s_min > s_max {
        return Ok(Vec::new());
    }
    if f.degree() % 2 != 0 {
        return Err(Error::OddDegree { degree: f.degree() });
    }
    if f.n() < 3 {
        return Err(Error::InvalidParameter(format!(
            "hierarchy sweeps need n >= 3, got n = {}",
            f.n()
        )));
    }
    let k = f.degree() / 2;
    if kind == KernelKind::FangFawzi && s_min < k.max(1) {
        return Err(Error::InvalidParameter(format!(
            "Fang-Fawzi sweeps need s_min >= k (got s_min = {s_min}, k = {k})"
        )));
    }
    let expansion = harmonic_decompose(f)?;
    let shared = match policy {
        RulePolicy::SharedMax => Some(cached_rule(f.n(), k + s_max)?),
        RulePolicy::PerLevel => None,
    };
    let mut results = Vec::with_capacity(s_max - s_min + 1);
    for s in s_min..=s_max {
        let started = Instant::now();
        let level = |e: Error| match e {
            Error::Io(io) => Error::Io(io),
            Error::SingularKernel { index } => Error::SingularKernel { index },
            other => Error::Numeric(format!("sweep level s = {s}: {other}")),
        };
        let kernel = match kind {
            KernelKind::Power => power_kernel(f.n(), s),
            KernelKind::FangFawzi => fang_fawzi_kernel(f.n(), k, s).map_err(level)?.kernel,
        };
        let tau = frobenius_threshold(&kernel, k).map_err(level)?;
        let rule = match &shared {
            Some(rule) => rule.clone(),
            None => cached_rule(f.n(), k + s).map_err(level)?,
        };
        let lower = lower_from_expansion(&expansion, &kernel, &rule).map_err(level)?;
        let upper = upper_bound(f, &rule).map_err(level)?;
        results.push(BoundResult {
            s,
            kernel_kind: kind,
            tau,
            lower,
            upper,
            cubature_size: rule.len(),
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(results)
}

/// Deterministic quasi-random points on S^{n-1}: a Weyl (additive
/// recurrence) sequence on the cube mapped to the sphere by normalization.
/// The seed offsets the sequence start so independent samples can be drawn
/// reproducibly.
pub fn sphere_sample(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let alphas = weyl_increments(n);
    let mut out = Vec::with_capacity(count);
    let mut index = seed.wrapping_mul(count as u64).wrapping_add(1);
    while out.len() < count {
        let mut v: Vec<f64> = (0..n)
            .map(|i| {
                let u = (0.5 + index as f64 * alphas[i]).fract();
                2.0 * u - 1.0
            })
            .collect();
        index = index.wrapping_add(1);
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        out.push(v);
    }
    out
}

fn weyl_increments(n: usize) -> Vec<f64> {
    let mut primes = Vec::with_capacity(n);
    let mut candidate = 2u64;
    while primes.len() < n {
        if primes.iter().all(|&p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes.iter().map(|&p| (p as f64).sqrt().fract()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubature::product_cubature;
    use crate::polynomial::monomial_exponents;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn motzkin() -> HomogeneousPolynomial {
        HomogeneousPolynomial::new(
            3,
            6,
            [
                (vec![2, 4, 0], 1.0),
                (vec![4, 2, 0], 1.0),
                (vec![0, 0, 6], 1.0),
                (vec![2, 2, 2], -3.0),
            ],
        )
        .unwrap()
    }

    fn norm_power(n: usize, k: usize) -> HomogeneousPolynomial {
        HomogeneousPolynomial::constant(n, 1.0).multiply_norm_power(k)
    }

    fn random_form(rng: &mut ChaCha8Rng, n: usize, degree: u32) -> HomogeneousPolynomial {
        let terms = monomial_exponents(n, degree)
            .into_iter()
            .map(|e| (e, rng.gen_range(-1.0..1.0)));
        HomogeneousPolynomial::new(n, degree as usize, terms).unwrap()
    }

    fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.1 {
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    }

    #[test]
    fn gamma_with_identity_kernel_is_identity() {
        let f = motzkin();
        let kernel = GegenbauerKernel::identity(3, 3);
        let g = apply_gamma(&f, &kernel).unwrap();
        let diff = g.add(&f.scale(-1.0)).unwrap();
        assert!(diff.coefficient_norm() <= 1e-12 * f.coefficient_norm());
    }

    #[test]
    fn gamma_fixes_norm_power_when_lambda0_is_one() {
        let f = norm_power(3, 3);
        let kernel = power_kernel(3, 4);
        let g = apply_gamma(&f, &kernel).unwrap();
        let diff = g.add(&f.scale(-1.0)).unwrap();
        assert!(diff.coefficient_norm() <= 1e-12);
    }

    #[test]
    fn gamma_scales_top_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let raw = random_form(&mut rng, 3, 4);
        let top = harmonic_decompose(&raw).unwrap().component(2).clone();
        let kernel = power_kernel(3, 3);
        let g = apply_gamma(&top, &kernel).unwrap();
        let want = top.scale(kernel.lambda(2));
        let diff = g.add(&want.scale(-1.0)).unwrap();
        assert!(diff.coefficient_norm() <= 1e-12 * (1.0 + want.coefficient_norm()));
    }

    #[test]
    fn gamma_inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_form(&mut rng, 3, 6);
        let kernel = power_kernel(3, 5);
        let back = apply_gamma(&apply_gamma_inverse(&f, &kernel).unwrap(), &kernel).unwrap();
        let diff = back.add(&f.scale(-1.0)).unwrap();
        assert!(diff.coefficient_norm() <= 1e-10 * (1.0 + f.coefficient_norm()));
    }

    #[test]
    fn gamma_inverse_scales_harmonics_by_reciprocal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let raw = random_form(&mut rng, 3, 2);
        let h2 = harmonic_decompose(&raw).unwrap().component(1).clone();
        let kernel = power_kernel(3, 1); // lambda_2 = 2/5
        let g = apply_gamma_inverse(&h2, &kernel).unwrap();
        let want = h2.scale(2.5);
        let diff = g.add(&want.scale(-1.0)).unwrap();
        assert!(diff.coefficient_norm() <= 1e-12 * (1.0 + want.coefficient_norm()));
    }

    #[test]
    fn gamma_inverse_rejects_singular_kernel() {
        let f = motzkin(); // k = 3
        let kernel = power_kernel(3, 2); // lambda_6 = 0
        match apply_gamma_inverse(&f, &kernel) {
            Err(Error::SingularKernel { index }) => assert_eq!(index, 6),
            other => panic!("expected singular kernel, got {other:?}"),
        }
    }

    #[test]
    fn convolution_of_norm_power_is_one() {
        let k = 2;
        let f = norm_power(3, k);
        let kernel = power_kernel(3, 3);
        let rule = product_cubature(3, k + 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..3 {
            let x = random_unit(&mut rng, 3);
            let v = convolve_on_nodes(&f, &kernel, &rule, &x).unwrap();
            assert_relative_eq!(v, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn convolution_matches_apply_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let f = random_form(&mut rng, 3, 6);
            let kernel = power_kernel(3, 4);
            let rule = product_cubature(3, 3 + 4).unwrap();
            let x = random_unit(&mut rng, 3);
            let via_nodes = convolve_on_nodes(&f, &kernel, &rule, &x).unwrap();
            let via_diag = apply_gamma(&f, &kernel).unwrap().evaluate(&x).unwrap();
            let l2 = f.l2_norm(&product_cubature(3, 6).unwrap()).unwrap();
            assert!((via_nodes - via_diag).abs() <= 1e-8 * (1.0 + l2));
        }
    }

    #[test]
    fn convolution_with_projection_kernel_gives_mean() {
        // all lambdas zero except lambda_0: the degree-0 projection of f
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = random_form(&mut rng, 3, 4);
        let kernel = GegenbauerKernel::from_lambdas(3, vec![1.0, 0.0, 0.0]).unwrap();
        let rule = product_cubature(3, 2 + 2).unwrap();
        let x = random_unit(&mut rng, 3);
        let v = convolve_on_nodes(&f, &kernel, &rule, &x).unwrap();
        let mean = rule.integrate(&f).unwrap() / sphere_area(3);
        assert_relative_eq!(v, mean, epsilon = 1e-10, max_relative = 1e-8);
        let via_diag = apply_gamma(&f, &kernel).unwrap().evaluate(&x).unwrap();
        assert_relative_eq!(v, via_diag, epsilon = 1e-10, max_relative = 1e-8);
    }

    #[test]
    fn lower_bound_of_norm_power_is_one() {
        let f = norm_power(3, 2);
        let kernel = power_kernel(3, 3);
        let rule = product_cubature(3, 5).unwrap();
        assert_relative_eq!(
            lower_bound(&f, &kernel, &rule).unwrap(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn motzkin_lower_bounds_never_positive() {
        let f = motzkin();
        for s in [3usize, 5, 9] {
            let kernel = power_kernel(3, s);
            let rule = product_cubature(3, 3 + s).unwrap();
            assert!(lower_bound(&f, &kernel, &rule).unwrap() <= 0.0);
        }
    }

    #[test]
    fn zero_polynomial_has_zero_bounds() {
        let f = HomogeneousPolynomial::zero(3, 6);
        let kernel = power_kernel(3, 4);
        let rule = product_cubature(3, 7).unwrap();
        assert_eq!(lower_bound(&f, &kernel, &rule).unwrap(), 0.0);
        assert_eq!(upper_bound(&f, &rule).unwrap(), 0.0);
    }

    #[test]
    fn upper_bound_examples() {
        let rule = product_cubature(3, 5).unwrap();
        assert_relative_eq!(
            upper_bound(&norm_power(3, 2), &rule).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        // Motzkin is nonnegative, so every node minimum stays >= 0,
        // decreasing toward 0 along rules of one parity class
        let f = motzkin();
        let u7 = upper_bound(&f, &product_cubature(3, 7).unwrap()).unwrap();
        let u11 = upper_bound(&f, &product_cubature(3, 11).unwrap()).unwrap();
        let u15 = upper_bound(&f, &product_cubature(3, 15).unwrap()).unwrap();
        assert!(u7 >= 0.0 && u11 >= 0.0 && u15 >= 0.0);
        assert!(u15 < u11 && u11 < u7);
        // even t: the rule contains (0, 1, 0), a zero of the Motzkin form
        let u6 = upper_bound(&f, &product_cubature(3, 6).unwrap()).unwrap();
        assert_eq!(u6, 0.0);
    }

    #[test]
    fn robinson_upper_bounds_nonnegative() {
        // the quaternary quartic with zeros: nonnegative on the whole sphere
        let robinson = {
            let mut terms: Vec<(Vec<u32>, f64)> = Vec::new();
            for i in 0..3usize {
                let mut e4 = vec![0u32; 4];
                e4[i] = 4;
                terms.push((e4, 1.0));
                let mut e31 = vec![0u32; 4];
                e31[i] = 3;
                e31[3] = 1;
                terms.push((e31, -2.0));
                let mut e22 = vec![0u32; 4];
                e22[i] = 2;
                e22[3] = 2;
                terms.push((e22, 1.0));
            }
            for i in 0..3usize {
                let mut e = vec![1u32, 1, 1, 0];
                e[i] += 1;
                terms.push((e, 2.0));
            }
            terms.push((vec![1, 1, 1, 1], -4.0));
            HomogeneousPolynomial::new(4, 4, terms).unwrap()
        };
        for t in [3usize, 6] {
            let rule = product_cubature(4, t).unwrap();
            assert!(upper_bound(&robinson, &rule).unwrap() >= 0.0);
        }
    }

    #[test]
    fn certify_norm_power_against_tau() {
        let k = 2;
        let f = norm_power(3, k);
        let rule = product_cubature(3, k + 3).unwrap();
        // identity kernel: tau = 0 < 1 = node minimum / ||f||_2 · sqrt(mu)
        let identity = GegenbauerKernel::identity(3, 3);
        assert!(certify_membership(&f, &identity, &rule).unwrap());
        // power kernel s = 3 has tau > 1 for k = 2, so certification fails
        let kernel = power_kernel(3, 3);
        let tau = frobenius_threshold(&kernel, k).unwrap();
        assert!(tau > 1.0);
        assert!(!certify_membership(&f, &kernel, &rule).unwrap());
    }

    #[test]
    fn certify_motzkin_always_false() {
        let f = motzkin();
        for s in [3usize, 8] {
            let kernel = power_kernel(3, s);
            let rule = product_cubature(3, 3 + s).unwrap();
            assert!(!certify_membership(&f, &kernel, &rule).unwrap());
        }
    }

    #[test]
    fn certify_shifted_motzkin_flips_with_s() {
        let f = motzkin().add(&norm_power(3, 3).scale(0.5)).unwrap();
        let mut flipped = None;
        for s in [4usize, 8, 16] {
            let kernel = fang_fawzi_kernel(3, 3, s).unwrap().kernel;
            let rule = cached_rule(3, 3 + s).unwrap();
            if certify_membership(&f, &kernel, &rule).unwrap() {
                flipped = Some(s);
                break;
            }
        }
        assert_eq!(flipped, Some(16));
    }

    #[test]
    fn moment_generator_count_matches_rule() {
        let k = 2;
        let s = 2;
        let kernel = power_kernel(3, s);
        let rule = product_cubature(3, k + s).unwrap();
        let gens = moment_generators(k, &kernel, &rule).unwrap();
        assert_eq!(gens.len(), 2 * (k + s + 1) * (k + s + 1));
    }

    #[test]
    fn identity_kernel_generator_reproduces_evaluation() {
        // with lambda ≡ 1 the representer collapses to the Christoffel-Darboux
        // evaluation representer: <rep_y, f> = f(y) on R_{2k}
        let k = 2;
        let kernel = GegenbauerKernel::identity(3, k);
        let rule = product_cubature(3, 2 * k).unwrap();
        let gens = moment_generators(k, &kernel, &rule).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = random_form(&mut rng, 3, 2 * k as u32);
        let pairing_rule = product_cubature(3, 2 * k).unwrap(); // degree 4k
        for gen in gens.iter().step_by(7) {
            let mut acc = 0.0;
            let rvals = eval_on_nodes(gen.representer(), pairing_rule.nodes());
            let fvals = eval_on_nodes(&f, pairing_rule.nodes());
            for ((&w, rv), fv) in pairing_rule.weights().iter().zip(rvals).zip(fvals) {
                acc += w * rv * fv;
            }
            let want = f.evaluate(gen.node()).unwrap();
            assert_relative_eq!(acc, want, epsilon = 1e-9, max_relative = 1e-8);
        }
    }

    #[test]
    fn sweep_counts_and_empty_range() {
        let f = motzkin();
        let out = sweep(&f, KernelKind::Power, 3, 7, RulePolicy::PerLevel).unwrap();
        assert_eq!(out.len(), 5);
        for (i, r) in out.iter().enumerate() {
            let s = 3 + i;
            assert_eq!(r.s, s);
            assert_eq!(r.cubature_size, 2 * (3 + s + 1) * (3 + s + 1));
            assert!(r.lower <= r.upper);
        }
        assert!(sweep(&f, KernelKind::Power, 5, 4, RulePolicy::PerLevel)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn sweep_reports_singular_levels_as_errors() {
        // the power kernel at s < k leaves a vanishing lambda, which must
        // surface as an error rather than a panic, down to s = 0
        let f = motzkin();
        for (s_min, vanishing) in [(0usize, 2usize), (2, 6)] {
            assert!(matches!(
                sweep(&f, KernelKind::Power, s_min, 4, RulePolicy::PerLevel),
                Err(Error::SingularKernel { index }) if index == vanishing
            ));
        }
    }

    #[test]
    fn sweep_requires_s_min_at_least_k_for_fang_fawzi() {
        let f = motzkin();
        assert!(matches!(
            sweep(&f, KernelKind::FangFawzi, 1, 4, RulePolicy::PerLevel),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn sweep_is_bitwise_deterministic() {
        let f = motzkin();
        let a = sweep(&f, KernelKind::FangFawzi, 3, 6, RulePolicy::PerLevel).unwrap();
        let b = sweep(&f, KernelKind::FangFawzi, 3, 6, RulePolicy::PerLevel).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.tau.to_bits(), y.tau.to_bits());
            assert_eq!(x.lower.to_bits(), y.lower.to_bits());
            assert_eq!(x.upper.to_bits(), y.upper.to_bits());
        }
    }

    #[test]
    fn scale_equivariance_of_bounds() {
        let f = motzkin();
        let kernel = power_kernel(3, 4);
        let rule = product_cubature(3, 7).unwrap();
        let base = lower_bound(&f, &kernel, &rule).unwrap();
        for c in [0.25f64, 3.0] {
            let scaled = lower_bound(&f.scale(c), &kernel, &rule).unwrap();
            assert_relative_eq!(scaled, c * base, max_relative = 1e-12);
        }
    }

    #[test]
    fn sphere_sample_is_deterministic_and_unit() {
        let a = sphere_sample(3, 100, 7);
        let b = sphere_sample(3, 100, 7);
        assert_eq!(a, b);
        let c = sphere_sample(3, 100, 8);
        assert_ne!(a, c);
        for v in &a {
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn soundness_sandwich_on_motzkin() {
        let f = motzkin();
        let sample = sphere_sample(3, 20_000, 1);
        let sample_min = eval_on_nodes(&f, &sample)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        for (kind, s) in [(KernelKind::Power, 6usize), (KernelKind::FangFawzi, 6)] {
            let kernel = match kind {
                KernelKind::Power => power_kernel(3, s),
                KernelKind::FangFawzi => fang_fawzi_kernel(3, 3, s).unwrap().kernel,
            };
            let rule = cached_rule(3, 3 + s).unwrap();
            let lo = lower_bound(&f, &kernel, &rule).unwrap();
            let up = upper_bound(&f, &rule).unwrap();
            assert!(lo <= sample_min, "lower {lo} vs sample min {sample_min}");
            assert!(sample_min <= up, "sample min {sample_min} vs upper {up}");
        }
    }
}
