//! Gauss-Jacobi quadrature and product cubature rules on the sphere.
//!
//! The 1-D rules integrate against the weight (1-s²)^α on [-1, 1]; nodes and
//! weights come from the symmetric tridiagonal recurrence matrix
//! (Golub-Welsch), solved with the in-crate Jacobi rotation eigensolver.
//! Product rules on S^{n-1} are built recursively: the first coordinate is
//! the 1-D Gauss variable for weight exponent (m-3)/2 at sub-dimension m, the
//! remaining coordinates are a lower-dimensional rule scaled by √(1-z²); the
//! recursion bottoms out on the circle at the vertices of a regular polygon.
//! A rule of algebraic degree 2t on S^{n-1} has exactly 2(t+1)^{n-1} nodes
//! and is invariant under coordinate sign changes, bit for bit.

use crate::linalg::jacobi_eigen_symmetric;
use crate::polynomial::{eval_on_nodes, monomial_exponents, sphere_monomial_integral};
use crate::special::ln_gamma;
use crate::{Error, HomogeneousPolynomial, Result};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::sync::{Arc, Mutex, OnceLock};

/// A symmetric Gauss-Jacobi rule for the weight (1-s²)^α on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature1D {
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature1D {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Strictly increasing nodes in (-1, 1).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ w_i g(z_i), approximating ∫ g(s)(1-s²)^α ds.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * g(z))
            .sum()
    }
}

/// Total mass ∫_{-1}^{1} (1-s²)^α ds = √π Γ(α+1)/Γ(α+3/2).
fn jacobi_weight_mass(alpha: f64) -> f64 {
    (0.5 * PI.ln() + ln_gamma(alpha + 1.0) - ln_gamma(alpha + 1.5)).exp()
}

/// An `m`-node Gauss-Jacobi rule for the symmetric weight (1-s²)^α, exact for
/// polynomials of degree ≤ 2m-1. Nodes are symmetric about 0 with equal
/// weights at ±z, enforced exactly.
pub fn gauss_jacobi(points: usize, alpha: f64) -> Result<Quadrature1D> {
    if points == 0 {
        return Err(Error::InvalidParameter(
            "quadrature needs at least one node".into(),
        ));
    }
    if !(alpha.is_finite() && alpha > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "weight exponent must be finite and > -1, got {alpha}"
        )));
    }
    let m = points;
    let mass = jacobi_weight_mass(alpha);

    // monic three-term recurrence p_{k+1} = x p_k - b_k p_{k-1} for the
    // symmetric Jacobi weight; the k = 1 form avoids 0/0 at alpha = -1/2
    let offdiag: Vec<f64> = (1..m)
        .map(|k| {
            let b = if k == 1 {
                1.0 / (3.0 + 2.0 * alpha)
            } else {
                let kf = k as f64;
                let d = 2.0 * kf + 2.0 * alpha;
                kf * (kf + 2.0 * alpha) / (d * d - 1.0)
            };
            b.sqrt()
        })
        .collect();

    let mut jac = vec![vec![0.0; m]; m];
    for (k, &o) in offdiag.iter().enumerate() {
        jac[k][k + 1] = o;
        jac[k + 1][k] = o;
    }
    let (nodes_raw, vectors) = jacobi_eigen_symmetric(jac)
        .map_err(|e| Error::Numeric(format!("Gauss-Jacobi eigenproblem failed: {e}")))?;

    let mut nodes = nodes_raw;
    let mut weights: Vec<f64> = (0..m)
        .map(|i| mass * vectors[0][i] * vectors[0][i])
        .collect();

    // force exact ± symmetry
    for i in 0..m / 2 {
        let j = m - 1 - i;
        let z = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -z;
        nodes[j] = z;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    // remove eigensolver scale drift
    let total: f64 = weights.iter().sum();
    let scale = mass / total;
    for w in &mut weights {
        *w *= scale;
    }

    for i in 0..m {
        if !(nodes[i] > -1.0 && nodes[i] < 1.0) || (i > 0 && nodes[i] <= nodes[i - 1]) {
            return Err(Error::Numeric(format!(
                "Gauss-Jacobi nodes not strictly increasing inside (-1, 1) for m = {m}, alpha = {alpha}"
            )));
        }
    }

    Ok(Quadrature1D {
        alpha,
        nodes,
        weights,
    })
}

/// A cubature rule on the unit sphere S^{n-1}: finite node set with positive
/// weights whose weighted sums reproduce surface integrals of all forms of
/// degree ≤ `algebraic_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubatureRule {
    n: usize,
    algebraic_degree: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl CubatureRule {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn algebraic_degree(&self) -> usize {
        self.algebraic_degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Σ_x W(x) f(x); equals ∫_S f dμ whenever `f.degree() <= algebraic_degree`.
    pub fn integrate(&self, f: &HomogeneousPolynomial) -> Result<f64> {
        if f.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: f.n(),
            });
        }
        let vals = eval_on_nodes(f, &self.nodes);
        Ok(vals.iter().zip(&self.weights).map(|(v, w)| v * w).sum())
    }

    /// Maximum residual over all monomials of total degree `degree` against
    /// the analytic sphere integrals: relative for even monomials, absolute
    /// (against 0) for monomials with an odd exponent.
    pub fn verify_exactness(&self, degree: usize) -> f64 {
        let max_exp = degree;
        let mut powers = vec![vec![1.0f64; max_exp + 1]; self.n];
        let mut tables: Vec<Vec<f64>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            for (i, &xi) in node.iter().enumerate() {
                for e in 1..=max_exp {
                    powers[i][e] = powers[i][e - 1] * xi;
                }
            }
            tables.push(powers.iter().flat_map(|r| r.iter().copied()).collect());
        }
        let stride = max_exp + 1;
        let mut worst = 0.0f64;
        for mono in monomial_exponents(self.n, degree as u32) {
            let mut quad = 0.0;
            for (tab, &w) in tables.iter().zip(&self.weights) {
                let mut term = w;
                for (i, &e) in mono.iter().enumerate() {
                    term *= tab[i * stride + e as usize];
                }
                quad += term;
            }
            let exact = sphere_monomial_integral(&mono);
            let residual = if exact == 0.0 {
                quad.abs()
            } else {
                (quad - exact).abs() / exact.abs()
            };
            worst = worst.max(residual);
        }
        worst
    }

    /// Write nodes and weights as CSV (`x1,...,xn,weight`) with 17
    /// significant digits per value.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        let header: Vec<String> = (1..=self.n).map(|i| format!("x{i}")).collect();
        writeln!(out, "{},weight", header.join(","))?;
        for (node, w) in self.nodes.iter().zip(&self.weights) {
            let row: Vec<String> = node.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{},{:.16e}", row.join(","), w)?;
        }
        Ok(())
    }

    /// Read a rule previously written by [`write_csv`](Self::write_csv).
    pub fn read_csv<R: BufRead>(
        reader: R,
        n: usize,
        algebraic_degree: usize,
    ) -> Result<CubatureRule> {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            if idx == 0 {
                continue; // header
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != n + 1 {
                return Err(Error::Parse(format!(
                    "cubature CSV row has {} fields, expected {}",
                    fields.len(),
                    n + 1
                )));
            }
            let mut node = Vec::with_capacity(n);
            for f in &fields[..n] {
                node.push(
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(e.to_string()))?,
                );
            }
            nodes.push(node);
            weights.push(
                fields[n]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(e.to_string()))?,
            );
        }
        Ok(CubatureRule {
            n,
            algebraic_degree,
            nodes,
            weights,
        })
    }
}

/// The 2(t+1) vertices of a regular polygon on the circle, equal weights
/// π/(t+1); exact for all bivariate forms of degree ≤ 2t+1.
///
/// Vertices sit at angles kπ/(t+1) starting from (1, 0). Trigonometric values
/// are computed once on the first quadrant and reflected so the node set is
/// closed under coordinate sign changes without rounding discrepancies.
pub fn circle_rule(t: usize) -> CubatureRule {
    let m = t + 1;
    let half = m / 2;
    let mut cos_q = Vec::with_capacity(half + 1);
    let mut sin_q = Vec::with_capacity(half + 1);
    for j in 0..=half {
        if 2 * j == m {
            cos_q.push(0.0);
            sin_q.push(1.0);
        } else {
            let th = j as f64 * PI / m as f64;
            cos_q.push(th.cos());
            sin_q.push(th.sin());
        }
    }
    let mut nodes = Vec::with_capacity(2 * m);
    let weight = PI / m as f64;
    for k in 0..2 * m {
        let (x, y) = if k <= half {
            (cos_q[k], sin_q[k])
        } else if k <= m {
            (-cos_q[m - k], sin_q[m - k])
        } else if k <= m + half {
            (-cos_q[k - m], -sin_q[k - m])
        } else {
            (cos_q[2 * m - k], -sin_q[2 * m - k])
        };
        nodes.push(vec![x, y]);
    }
    CubatureRule {
        n: 2,
        algebraic_degree: 2 * t,
        nodes,
        weights: vec![weight; 2 * m],
    }
}

/// Product cubature rule of algebraic degree 2t on S^{n-1} with exactly
/// 2(t+1)^{n-1} nodes, invariant under coordinate sign changes.
pub fn product_cubature(n: usize, t: usize) -> Result<CubatureRule> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "sphere dimension parameter must be at least 2, got {n}"
        )));
    }
    if n == 2 {
        return Ok(circle_rule(t));
    }
    let sub = product_cubature(n - 1, t)?;
    let alpha = (n as f64 - 3.0) / 2.0;
    let line = gauss_jacobi(t + 1, alpha)?;
    let mut nodes = Vec::with_capacity(line.len() * sub.len());
    let mut weights = Vec::with_capacity(line.len() * sub.len());
    for (&z, &wz) in line.nodes().iter().zip(line.weights()) {
        // Gauss nodes are strictly interior, so the scale factor never vanishes
        let r = (1.0 - z * z).sqrt();
        debug_assert!(r > 0.0);
        for (y, &wy) in sub.nodes().iter().zip(sub.weights()) {
            let mut node = Vec::with_capacity(n);
            node.push(z);
            for &yi in y {
                node.push(r * yi);
            }
            nodes.push(node);
            weights.push(wz * wy);
        }
    }
    debug_assert_eq!(nodes.len(), 2 * (t + 1).pow(n as u32 - 1));
    Ok(CubatureRule {
        n,
        algebraic_degree: 2 * t,
        nodes,
        weights,
    })
}

static RULE_CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<CubatureRule>>>> = OnceLock::new();

/// Shared, memoized access to `product_cubature(n, t)`.
///
/// Within a process rules are cached by `(n, t)`. When the environment
/// variable `HARMONIA_CACHE_DIR` points at a directory, rules are also
/// persisted there as `rule_n{N}_t{T}.csv` and reloaded on later runs.
pub fn cached_rule(n: usize, t: usize) -> Result<Arc<CubatureRule>> {
    let cache = RULE_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&(n, t)) {
        return Ok(Arc::clone(rule));
    }
    let rule = match disk_cache_path(n, t) {
        Some(path) if path.exists() => {
            let file = std::fs::File::open(&path)?;
            let loaded = CubatureRule::read_csv(std::io::BufReader::new(file), n, 2 * t)?;
            if loaded.len() != 2 * (t + 1).pow(n as u32 - 1) {
                return Err(Error::Parse(format!(
                    "cached rule {} has wrong node count",
                    path.display()
                )));
            }
            loaded
        }
        Some(path) => {
            let rule = product_cubature(n, t)?;
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)?;
            }
            let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            rule.write_csv(&mut file)?;
            rule
        }
        None => product_cubature(n, t)?,
    };
    let rule = Arc::new(rule);
    cache
        .lock()
        .expect("rule cache poisoned")
        .insert((n, t), Arc::clone(&rule));
    Ok(rule)
}

fn disk_cache_path(n: usize, t: usize) -> Option<std::path::PathBuf> {
    std::env::var_os("HARMONIA_CACHE_DIR")
        .map(|dir| std::path::PathBuf::from(dir).join(format!("rule_n{n}_t{t}.csv")))
}
