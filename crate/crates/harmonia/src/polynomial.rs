//! Sparse homogeneous multivariate polynomials and their calculus.
//!
//! A form is stored as a map from exponent vectors to coefficients. Every
//! exponent vector must sum to the declared total degree; construction
//! rejects mixed-degree input instead of homogenizing it. Coefficients equal
//! to zero are dropped so that two forms with the same terms compare equal.

use crate::cubature::CubatureRule;
use crate::special::ln_gamma_half;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A homogeneous polynomial in `n` variables of fixed total degree.
///
/// Immutable after construction; all operations return new values.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPolynomial {
    n: usize,
    degree: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    n: usize,
    degree: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    coef: f64,
}

impl HomogeneousPolynomial {
    /// Build a form from `(exponents, coefficient)` pairs.
    ///
    /// Coefficients of repeated exponent vectors accumulate. Exponent vectors
    /// must have length `n` and sum to `degree`; anything else is rejected.
    pub fn new<I>(n: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "variable count must be at least 2, got {n}"
            )));
        }
        let mut map: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (exp, coef) in terms {
            if exp.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: exp.len(),
                });
            }
            let sum: u32 = exp.iter().sum();
            if sum as usize != degree {
                return Err(Error::MixedDegree {
                    degree,
                    exponent_sum: sum as usize,
                });
            }
            *map.entry(exp).or_insert(0.0) += coef;
        }
        map.retain(|_, c| c.abs() >= 1e-300);
        Ok(Self {
            n,
            degree,
            terms: map,
        })
    }

    /// The zero form of the given dimension and degree.
    pub fn zero(n: usize, degree: usize) -> Self {
        Self {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The constant form `value` (degree 0).
    pub fn constant(n: usize, value: f64) -> Self {
        Self::new(n, 0, [(vec![0u32; n], value)]).expect("constant term is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> f64 {
        self.terms.get(exponents).copied().unwrap_or(0.0)
    }

    /// Evaluate at a point of R^n.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut acc = 0.0;
        for (exp, &coef) in &self.terms {
            let mut term = coef;
            for (xi, &e) in x.iter().zip(exp) {
                if e > 0 {
                    term *= xi.powi(e as i32);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Σ_i ∂²/∂x_i² applied to the form; homogeneous of degree `d - 2`
    /// (the zero form of degree `max(d - 2, 0)` when `d < 2`).
    pub fn laplacian(&self) -> HomogeneousPolynomial {
        let out_degree = self.degree.saturating_sub(2);
        let mut out: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        if self.degree >= 2 {
            for (exp, &coef) in &self.terms {
                for i in 0..self.n {
                    if exp[i] >= 2 {
                        let factor = (exp[i] * (exp[i] - 1)) as f64;
                        let mut e = exp.clone();
                        e[i] -= 2;
                        *out.entry(e).or_insert(0.0) += coef * factor;
                    }
                }
            }
            out.retain(|_, c| c.abs() >= 1e-300);
        }
        HomogeneousPolynomial {
            n: self.n,
            degree: out_degree,
            terms: out,
        }
    }

    /// Multiply by ‖x‖^{2m}, expanded into monomials; degree `d + 2m`.
    pub fn multiply_norm_power(&self, m: usize) -> HomogeneousPolynomial {
        let mut terms = self.terms.clone();
        for _ in 0..m {
            let mut next: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
            for (exp, &coef) in &terms {
                for i in 0..self.n {
                    let mut e = exp.clone();
                    e[i] += 2;
                    *next.entry(e).or_insert(0.0) += coef;
                }
            }
            terms = next;
        }
        HomogeneousPolynomial {
            n: self.n,
            degree: self.degree + 2 * m,
            terms,
        }
    }

    /// Sum of two forms of identical dimension and degree.
    pub fn add(&self, other: &HomogeneousPolynomial) -> Result<HomogeneousPolynomial> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        if self.degree != other.degree {
            return Err(Error::MixedDegree {
                degree: self.degree,
                exponent_sum: other.degree,
            });
        }
        let mut terms = self.terms.clone();
        for (exp, &coef) in &other.terms {
            *terms.entry(exp.clone()).or_insert(0.0) += coef;
        }
        terms.retain(|_, c| c.abs() >= 1e-300);
        Ok(HomogeneousPolynomial {
            n: self.n,
            degree: self.degree,
            terms,
        })
    }

    /// The form scaled by a constant.
    pub fn scale(&self, factor: f64) -> HomogeneousPolynomial {
        let mut terms = self.terms.clone();
        for c in terms.values_mut() {
            *c *= factor;
        }
        terms.retain(|_, c| c.abs() >= 1e-300);
        HomogeneousPolynomial {
            n: self.n,
            degree: self.degree,
            terms,
        }
    }

    /// Max-norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// ∂f/∂x_var, homogeneous of degree d - 1.
    pub fn partial_derivative(&self, var: usize) -> HomogeneousPolynomial {
        let out_degree = self.degree.saturating_sub(1);
        let mut out: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        if self.degree >= 1 {
            for (exp, &coef) in &self.terms {
                if exp[var] >= 1 {
                    let mut e = exp.clone();
                    e[var] -= 1;
                    *out.entry(e).or_insert(0.0) += coef * exp[var] as f64;
                }
            }
            out.retain(|_, c| c.abs() >= 1e-300);
        }
        HomogeneousPolynomial {
            n: self.n,
            degree: out_degree,
            terms: out,
        }
    }

    /// L² norm on the sphere computed through a cubature rule of sufficient
    /// algebraic degree (`rule.algebraic_degree() >= 2 * degree`).
    pub fn l2_norm(&self, rule: &CubatureRule) -> Result<f64> {
        if rule.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rule.n(),
            });
        }
        if rule.algebraic_degree() < 2 * self.degree {
            return Err(Error::InsufficientRuleDegree {
                required: 2 * self.degree,
                available: rule.algebraic_degree(),
            });
        }
        let vals = eval_on_nodes(self, rule.nodes());
        let mut acc = 0.0;
        for (v, &w) in vals.iter().zip(rule.weights()) {
            acc += w * v * v;
        }
        Ok(acc.sqrt())
    }

    /// Serialize to the interchange JSON format
    /// `{"n": ..., "degree": ..., "terms": [{"exp": [...], "coef": ...}, ...]}`.
    pub fn to_json_string(&self) -> String {
        let doc = PolynomialJson {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| TermJson {
                    exp: e.clone(),
                    coef: c,
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("polynomial serialization cannot fail")
    }

    /// Parse the interchange JSON format, validating homogeneity.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: PolynomialJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(
            doc.n,
            doc.degree,
            doc.terms.into_iter().map(|t| (t.exp, t.coef)),
        )
    }
}

/// Exact integral of the monomial x^a over S^{n-1} with the area measure:
/// zero when any exponent is odd, otherwise
/// 2·Π_i Γ((a_i+1)/2) / Γ((Σ a_i + n)/2).
pub fn sphere_monomial_integral(exponents: &[u32]) -> f64 {
    let n = exponents.len();
    debug_assert!(n >= 2);
    if exponents.iter().any(|&a| a % 2 == 1) {
        return 0.0;
    }
    let total: u32 = exponents.iter().sum();
    let mut lg = -ln_gamma_half(total as u64 + n as u64);
    for &a in exponents {
        lg += ln_gamma_half(a as u64 + 1);
    }
    2.0 * lg.exp()
}

/// All exponent vectors of length `n` with nonnegative entries summing to
/// `degree`, in lexicographic order.
pub(crate) fn monomial_exponents(n: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            rec(n - 1, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, degree, &mut Vec::new(), &mut out);
    out
}

/// Evaluate a form at many points, sharing per-point power tables.
pub(crate) fn eval_on_nodes(f: &HomogeneousPolynomial, nodes: &[Vec<f64>]) -> Vec<f64> {
    let max_exp = f
        .terms
        .keys()
        .flat_map(|e| e.iter().copied())
        .max()
        .unwrap_or(0) as usize;
    let n = f.n;
    let mut powers = vec![vec![1.0f64; max_exp + 1]; n];
    let mut out = Vec::with_capacity(nodes.len());
    for node in nodes {
        debug_assert_eq!(node.len(), n);
        for (i, &xi) in node.iter().enumerate() {
            let row = &mut powers[i];
            for e in 1..=max_exp {
                row[e] = row[e - 1] * xi;
            }
        }
        let mut acc = 0.0;
        for (exp, &coef) in &f.terms {
            let mut term = coef;
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    term *= powers[i][e as usize];
                }
            }
            acc += term;
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubature::product_cubature;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    pub(crate) fn motzkin() -> HomogeneousPolynomial {
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

    fn norm_squared(n: usize) -> HomogeneousPolynomial {
        HomogeneousPolynomial::constant(n, 1.0).multiply_norm_power(1)
    }

    #[test]
    fn evaluate_motzkin_at_known_zero() {
        let f = motzkin();
        let s = 1.0 / 3f64.sqrt();
        let v = f.evaluate(&[s, s, s]).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn evaluate_norm_squared_at_unit_vector() {
        let f = norm_squared(3);
        assert_relative_eq!(f.evaluate(&[0.0, 0.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_motzkin_single_surviving_monomial() {
        let f = motzkin();
        assert_relative_eq!(f.evaluate(&[0.0, 0.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_rejects_dimension_mismatch() {
        let f = motzkin();
        assert!(matches!(
            f.evaluate(&[1.0, 2.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn laplacian_of_norm_squared_is_2n() {
        let f = norm_squared(3);
        let lap = f.laplacian();
        assert_eq!(lap.degree(), 0);
        assert_relative_eq!(lap.coefficient(&[0, 0, 0]), 6.0);
    }

    #[test]
    fn laplacian_annihilates_harmonic_quadratic() {
        // x1^2 - |x|^2/3 is harmonic in n = 3
        let f = HomogeneousPolynomial::new(3, 2, [(vec![2, 0, 0], 1.0)])
            .unwrap()
            .add(&norm_squared(3).scale(-1.0 / 3.0))
            .unwrap();
        assert!(f.laplacian().coefficient_norm() <= 1e-15);
    }

    #[test]
    fn laplacian_of_motzkin_matches_termwise_differentiation() {
        let f = motzkin();
        let lap = f.laplacian();
        assert_eq!(lap.degree(), 4);
        // independent oracle: d²/dx_i² applied term by term
        let mut expect: std::collections::BTreeMap<Vec<u32>, f64> = Default::default();
        for (exp, coef) in f.terms() {
            for i in 0..3 {
                if exp[i] >= 2 {
                    let mut e = exp.to_vec();
                    e[i] -= 2;
                    *expect.entry(e).or_insert(0.0) += coef * (exp[i] * (exp[i] - 1)) as f64;
                }
            }
        }
        expect.retain(|_, c| *c != 0.0);
        let got: std::collections::BTreeMap<Vec<u32>, f64> =
            lap.terms().map(|(e, c)| (e.to_vec(), c)).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn multiply_norm_power_examples() {
        let one = HomogeneousPolynomial::constant(3, 1.0);
        let r2 = one.multiply_norm_power(1);
        assert_eq!(r2.degree(), 2);
        for i in 0..3 {
            let mut e = vec![0, 0, 0];
            e[i] = 2;
            assert_relative_eq!(r2.coefficient(&e), 1.0);
        }

        let f = motzkin();
        assert_eq!(f.multiply_norm_power(0), f);

        let x1 = HomogeneousPolynomial::new(2, 1, [(vec![1, 0], 1.0)]).unwrap();
        let g = x1.multiply_norm_power(1);
        assert_relative_eq!(g.coefficient(&[3, 0]), 1.0);
        assert_relative_eq!(g.coefficient(&[1, 2]), 1.0);
        assert_eq!(g.num_terms(), 2);
    }

    #[test]
    fn construction_rejects_mixed_degree() {
        let r = HomogeneousPolynomial::new(3, 6, [(vec![2, 4, 0], 1.0), (vec![1, 0, 0], 2.0)]);
        assert!(matches!(r, Err(Error::MixedDegree { .. })));
    }

    #[test]
    fn sphere_monomial_integral_examples() {
        assert_relative_eq!(
            sphere_monomial_integral(&[0, 0, 0]),
            4.0 * PI,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            sphere_monomial_integral(&[2, 0, 0]),
            4.0 * PI / 3.0,
            max_relative = 1e-14
        );
        assert_eq!(sphere_monomial_integral(&[1, 0, 0]), 0.0);
        // symmetry cross-check: sum over i of x_i^2 integrates to mu(S)
        let total: f64 = (0..3)
            .map(|i| {
                let mut e = [0u32; 3];
                e[i] = 2;
                sphere_monomial_integral(&e)
            })
            .sum();
        assert_relative_eq!(total, 4.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn l2_norm_examples() {
        let rule = product_cubature(3, 2).unwrap();
        let one = HomogeneousPolynomial::constant(3, 1.0);
        assert_relative_eq!(
            one.l2_norm(&rule).unwrap(),
            (4.0 * PI).sqrt(),
            max_relative = 1e-12
        );

        let x1 = HomogeneousPolynomial::new(3, 1, [(vec![1, 0, 0], 1.0)]).unwrap();
        assert_relative_eq!(
            x1.l2_norm(&rule).unwrap(),
            (4.0 * PI / 3.0).sqrt(),
            max_relative = 1e-12
        );

        let x1px2 =
            HomogeneousPolynomial::new(3, 1, [(vec![1, 0, 0], 1.0), (vec![0, 1, 0], 1.0)]).unwrap();
        assert_relative_eq!(
            x1px2.l2_norm(&rule).unwrap(),
            (8.0 * PI / 3.0).sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn l2_norm_rejects_insufficient_rule_degree() {
        let rule = product_cubature(3, 2).unwrap();
        let f = motzkin();
        assert!(matches!(
            f.l2_norm(&rule),
            Err(Error::InsufficientRuleDegree {
                required: 12,
                available: 4
            })
        ));
    }

    #[test]
    fn l2_norm_agrees_between_two_sufficient_rules() {
        let f = motzkin();
        let a = f.l2_norm(&product_cubature(3, 6).unwrap()).unwrap();
        let b = f.l2_norm(&product_cubature(3, 9).unwrap()).unwrap();
        assert_relative_eq!(a * a, b * b, max_relative = 1e-10);
    }

    #[test]
    fn json_round_trip() {
        let f = motzkin();
        let s = f.to_json_string();
        let g = HomogeneousPolynomial::from_json_str(&s).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn json_rejects_degree_mismatch() {
        let s = r#"{"n":3,"degree":6,"terms":[{"exp":[2,2,0],"coef":1.0}]}"#;
        assert!(HomogeneousPolynomial::from_json_str(s).is_err());
    }

    proptest! {
        // Euler identity: sum_i x_i ∂f/∂x_i = d · f for a homogeneous form.
        #[test]
        fn euler_identity(
            coefs in proptest::collection::vec(-3.0f64..3.0, 4),
            x in proptest::collection::vec(-1.5f64..1.5, 3),
        ) {
            let exps = [vec![2u32, 4, 0], vec![4, 2, 0], vec![0, 0, 6], vec![2, 2, 2]];
            let f = HomogeneousPolynomial::new(
                3, 6, exps.iter().cloned().zip(coefs.iter().copied()),
            ).unwrap();
            let mut lhs = 0.0;
            for i in 0..3 {
                lhs += x[i] * f.partial_derivative(i).evaluate(&x).unwrap();
            }
            let rhs = 6.0 * f.evaluate(&x).unwrap();
            let scale = 1.0f64.max(rhs.abs());
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        // Laplacian linearity is exact on small-integer coefficients.
        #[test]
        fn laplacian_linearity_exact(a in -6i32..6, b in -6i32..6) {
            let f = HomogeneousPolynomial::new(3, 4, [(vec![2u32, 2, 0], 1.0), (vec![0, 0, 4], 2.0)]).unwrap();
            let g = HomogeneousPolynomial::new(3, 4, [(vec![4u32, 0, 0], 1.0), (vec![1, 1, 2], -3.0)]).unwrap();
            let combo = f.scale(a as f64).add(&g.scale(b as f64)).unwrap();
            let lhs = combo.laplacian();
            let rhs = f.laplacian().scale(a as f64).add(&g.laplacian().scale(b as f64)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        // The monomial sphere integral only depends on the exponent multiset.
        #[test]
        fn sphere_integral_permutation_invariant(e0 in 0u32..5, e1 in 0u32..5, e2 in 0u32..5) {
            let base = sphere_monomial_integral(&[e0, e1, e2]);
            for perm in [[e1, e0, e2], [e2, e1, e0], [e0, e2, e1], [e1, e2, e0], [e2, e0, e1]] {
                let v = sphere_monomial_integral(&perm);
                prop_assert!((v - base).abs() <= 1e-12 * (1.0 + base.abs()));
            }
        }
    }
}
