//! Classical counterparts in R³: solid spherical harmonics built from
//! Gegenbauer polynomials, the Euclidean Laplacian, and Gauss–Legendre
//! quadrature for the orthogonality integrals.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::float::FloatCore;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{frac, rat, GaussianRational, Rational};
use crate::linalg::exact_rank;
use crate::specfun::{gegenbauer_from_generating_function, UnivariatePoly};

pub const QUAD_POINTS_ENV: &str = "HEISENHARM_QUAD_POINTS";
pub const DEFAULT_QUAD_POINTS: usize = 64;

/// Node count for the interval rules, overridable through
/// `HEISENHARM_QUAD_POINTS`.
pub fn default_quad_points() -> usize {
    std::env::var(QUAD_POINTS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &usize| n >= 1)
        .unwrap_or(DEFAULT_QUAD_POINTS)
}

/// Exponents of `x^a y^b w^c`.
pub type EuclidMonomial = (u32, u32, u32);

/// Sparse polynomial in `(x, y, w)` with Q(i) coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct EuclidPolynomial {
    terms: BTreeMap<EuclidMonomial, GaussianRational>,
}

impl EuclidPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term((0, 0, 0), &c);
        p
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn monomial(a: u32, b: u32, c: u32) -> Self {
        let mut p = Self::zero();
        p.add_term((a, b, c), &GaussianRational::one());
        p
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, 0)
    }

    pub fn w() -> Self {
        Self::monomial(0, 0, 1)
    }

    /// `x² + y² + w²`.
    pub fn r_squared() -> Self {
        &(&Self::monomial(2, 0, 0) + &Self::monomial(0, 2, 0)) + &Self::monomial(0, 0, 2)
    }

    pub fn add_term(&mut self, m: EuclidMonomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(GaussianRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&EuclidMonomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, &(v * c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Largest total degree (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(a, b, c)| a + b + c)
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous_of(&self, m: u32) -> bool {
        self.terms.keys().all(|(a, b, c)| a + b + c == m)
    }

    fn derive(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (&(a, b, c), v) in &self.terms {
            let e = [a, b, c][var];
            if e == 0 {
                continue;
            }
            let mut m = [a, b, c];
            m[var] -= 1;
            out.add_term(
                (m[0], m[1], m[2]),
                &(v * &GaussianRational::from_int(e as i64)),
            );
        }
        out
    }

    pub fn d_x(&self) -> Self {
        self.derive(0)
    }

    pub fn d_y(&self) -> Self {
        self.derive(1)
    }

    pub fn d_w(&self) -> Self {
        self.derive(2)
    }

    /// `x ∂/∂x + y ∂/∂y + w ∂/∂w`.
    pub fn euler_operator(&self) -> Self {
        &(&(&Self::x() * &self.d_x()) + &(&Self::y() * &self.d_y())) + &(&Self::w() * &self.d_w())
    }

    pub fn eval(&self, x: f64, y: f64, w: f64) -> Complex64 {
        eval_numeric(&self.numeric_terms(), x, y, w)
    }

    fn numeric_terms(&self) -> Vec<((i32, i32, i32), Complex64)> {
        self.terms
            .iter()
            .map(|(&(a, b, c), v)| ((a as i32, b as i32, c as i32), v.to_complex()))
            .collect()
    }

    pub fn coefficient_row(&self, monomials: &[EuclidMonomial]) -> Vec<GaussianRational> {
        monomials
            .iter()
            .map(|m| {
                self.terms
                    .get(m)
                    .cloned()
                    .unwrap_or_else(GaussianRational::zero)
            })
            .collect()
    }

    /// All monomials of total degree `m`.
    pub fn monomials_of_degree(m: u32) -> Vec<EuclidMonomial> {
        (0..=m)
            .flat_map(|c| (0..=m - c).map(move |a| (a, m - c - a, c)))
            .collect()
    }
}

impl<'a> Add<&'a EuclidPolynomial> for &'a EuclidPolynomial {
    type Output = EuclidPolynomial;
    fn add(self, rhs: &EuclidPolynomial) -> EuclidPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a> Sub<&'a EuclidPolynomial> for &'a EuclidPolynomial {
    type Output = EuclidPolynomial;
    fn sub(self, rhs: &EuclidPolynomial) -> EuclidPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a EuclidPolynomial> for &'a EuclidPolynomial {
    type Output = EuclidPolynomial;
    fn mul(self, rhs: &EuclidPolynomial) -> EuclidPolynomial {
        let mut out = EuclidPolynomial::zero();
        for (&(a1, b1, c1), v1) in &self.terms {
            for (&(a2, b2, c2), v2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2, c1 + c2), &(v1 * v2));
            }
        }
        out
    }
}

impl fmt::Display for EuclidPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(a, b, c), v)| format!("({v})*x^{a}*y^{b}*w^{c}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for EuclidPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize)]
struct EuclidTerm<'a> {
    x: u32,
    y: u32,
    w: u32,
    coeff: &'a GaussianRational,
}

impl Serialize for EuclidPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(
            self.terms
                .iter()
                .map(|(&(x, y, w), coeff)| EuclidTerm { x, y, w, coeff }),
        )
    }
}

fn eval_numeric(terms: &[((i32, i32, i32), Complex64)], x: f64, y: f64, w: f64) -> Complex64 {
    terms
        .iter()
        .map(|&((a, b, c), v)| v * x.powi(a) * y.powi(b) * w.powi(c))
        .sum()
}

/// `Σ ∂²/∂x_i²` over `(x, y, w)`.
pub fn apply_laplacian(p: &EuclidPolynomial) -> EuclidPolynomial {
    &(&p.d_x().d_x() + &p.d_y().d_y()) + &p.d_w().d_w()
}

/// `(x ± iy)^{|n|} · r^{m−|n|} P^{|n|+1/2}_{m−|n|}(w/r)`, which is a
/// polynomial because `P_j^λ` has the parity of `j`.
pub fn classical_solid_harmonic(m: u32, n: i64) -> Result<EuclidPolynomial> {
    let abs_n = n.unsigned_abs() as u32;
    if abs_n > m {
        return Err(Error::InvalidIndex { m: m as i64, n });
    }
    let j = m - abs_n;
    let lambda = frac(2 * abs_n as i64 + 1, 2);
    let geg = gegenbauer_from_generating_function(&lambda, j as usize)?;
    let p = &geg.polys[j as usize];
    let r2 = EuclidPolynomial::r_squared();
    let mut radial = EuclidPolynomial::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let i = i as u32;
        let term = &EuclidPolynomial::w().pow(i) * &r2.pow((j - i) / 2);
        radial = &radial + &term.scale(c);
    }
    let sign = if n >= 0 { 1 } else { -1 };
    let xy =
        &EuclidPolynomial::x() + &EuclidPolynomial::y().scale(&GaussianRational::imag(rat(sign)));
    Ok(&xy.pow(abs_n) * &radial)
}

/// The `2m + 1` harmonics of degree `m`, `n = −m..=m`.
pub fn r3_basis(m: u32) -> Vec<EuclidPolynomial> {
    (-(m as i64)..=m as i64)
        .map(|n| classical_solid_harmonic(m, n).expect("|n| <= m"))
        .collect()
}

pub fn euclid_rank(polys: &[EuclidPolynomial], m: u32) -> usize {
    let monos = EuclidPolynomial::monomials_of_degree(m);
    let rows: Vec<_> = polys.iter().map(|p| p.coefficient_row(&monos)).collect();
    exact_rank(&rows)
}

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Highest polynomial degree integrated exactly.
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }

    /// `∫_a^b f` by the affine map from `[-1, 1]`.
    pub fn integrate_on<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let (half, mid) = ((b - a) / 2.0, (a + b) / 2.0);
        half * self.integrate(|x| f(mid + half * x))
    }
}

/// Integer-coefficient form of a rational polynomial, so that it can be
/// evaluated exactly at a binary floating-point argument.
struct ScaledPoly {
    numer: Vec<BigInt>,
    denom: BigInt,
}

impl ScaledPoly {
    fn from_poly(p: &UnivariatePoly) -> Self {
        let denom = p.coeffs().iter().fold(BigInt::one(), |acc, c| {
            num_integer::lcm(acc, c.re.denom().clone())
        });
        let numer = p
            .coeffs()
            .iter()
            .map(|c| (&c.re * Rational::from_integer(denom.clone())).to_integer())
            .collect();
        Self { numer, denom }
    }

    /// `p(x)` computed exactly, then rounded once.
    fn eval(&self, x: f64) -> f64 {
        let (mant, exp, sign) = x.integer_decode();
        let mut p = BigInt::from(mant) * BigInt::from(sign);
        let mut q = BigInt::one();
        if exp >= 0 {
            p <<= exp as usize;
        } else {
            q <<= (-exp) as usize;
        }
        // Σ N_j p^j q^{n−j} by Horner
        let n = self.numer.len();
        let mut acc = BigInt::zero();
        let mut q_pow = BigInt::one();
        for (idx, nj) in self.numer.iter().enumerate().rev() {
            if idx + 1 == n {
                acc = nj.clone();
            } else {
                q_pow *= &q;
                acc = acc * &p + nj * &q_pow;
            }
        }
        let denom = &self.denom * q.pow((n.max(1) - 1) as u32);
        BigRational::new_raw(acc, denom)
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

fn rule_cache() -> &'static Mutex<HashMap<usize, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `n`-point Gauss–Legendre rule. Nodes are the roots of the exact
/// Legendre polynomial `P_n`, located by Newton's method with exactly
/// evaluated `P_n` and `P_n'`; weights are `2 / ((1 − x²) P_n'(x)²)`.
pub fn gauss_legendre_rule(n: usize) -> Result<Arc<QuadratureRule>> {
    if n == 0 {
        return Err(Error::Domain(
            "Gauss-Legendre rule needs at least one node".into(),
        ));
    }
    if let Some(rule) = rule_cache().lock().expect("cache poisoned").get(&n) {
        return Ok(rule.clone());
    }
    let leg = gegenbauer_from_generating_function(&frac(1, 2), n)?;
    let p = ScaledPoly::from_poly(&leg.polys[n]);
    let dp = ScaledPoly::from_poly(&leg.polys[n].derivative());

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut prev = f64::INFINITY;
        for _ in 0..50 {
            let dx = p.eval(x) / dp.eval(x);
            // stop once the step is at ulp level or no longer shrinking
            if dx.abs() >= prev {
                break;
            }
            x -= dx;
            if dx.abs() <= 2.0 * f64::EPSILON * x.abs() {
                break;
            }
            prev = dx.abs();
        }
        let d = dp.eval(x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * d * d));
    }
    // ascending order
    nodes.reverse();
    weights.reverse();
    let rule = Arc::new(QuadratureRule {
        nodes,
        weights,
        exactness_degree: 2 * n - 1,
    });
    rule_cache()
        .lock()
        .expect("cache poisoned")
        .insert(n, rule.clone());
    Ok(rule)
}

/// `⟨f, g⟩ = ∫_{S²} f ḡ dω`: Gauss–Legendre in `cos φ` and a `4m+4`
/// point trapezoid rule in `θ`, where `m` bounds the degrees of `f` and `g`.
pub fn sphere_inner_product(f: &EuclidPolynomial, g: &EuclidPolynomial) -> Result<Complex64> {
    let m = f.degree().max(g.degree()) as usize;
    let rule = gauss_legendre_rule(default_quad_points().max(m + 1))?;
    let n_theta = 4 * m + 4;
    let dtheta = 2.0 * PI / n_theta as f64;
    let (fs, gs) = (f.numeric_terms(), g.numeric_terms());
    let total = rule.integrate_complex(|u| {
        let s = (1.0 - u * u).max(0.0).sqrt();
        (0..n_theta)
            .map(|j| {
                let th = j as f64 * dtheta;
                let (x, y) = (s * th.cos(), s * th.sin());
                eval_numeric(&fs, x, y, u) * eval_numeric(&gs, x, y, u).conj()
            })
            .sum::<Complex64>()
            * dtheta
    });
    Ok(total)
}

fn real_or_err(p: &UnivariatePoly) -> Result<()> {
    if p.coeffs().iter().all(GaussianRational::is_real) {
        Ok(())
    } else {
        Err(Error::Domain(
            "weighted interval integral expects real coefficients".into(),
        ))
    }
}

/// `∫₋₁¹ f g (1−x²)^{λ−1/2} dx`, computed as `∫₀^π f(cos φ) g(cos φ)
/// sin^{2λ}φ dφ` with a Gauss–Legendre rule on `[0, π]`.
pub fn weighted_interval_integral(
    f: &UnivariatePoly,
    g: &UnivariatePoly,
    lambda: &Rational,
) -> Result<f64> {
    if *lambda <= frac(-1, 2) {
        return Err(Error::Domain(format!(
            "weight exponent needs λ > -1/2, got {lambda}"
        )));
    }
    real_or_err(f)?;
    real_or_err(g)?;
    let deg = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
    let rule = gauss_legendre_rule(default_quad_points().max(deg + 8))?;
    let power = 2.0 * crate::exactnum::rational_to_f64(lambda);
    Ok(rule.integrate_on(0.0, PI, |phi| {
        let c = phi.cos();
        (f.eval_real(c) * g.eval_real(c)).re * phi.sin().powf(power)
    }))
}

/// Gram matrix `G[j][k] = ∫ P_j^λ P_k^λ (1−x²)^{λ−1/2}` for `j, k ≤ k_max`.
pub fn gegenbauer_gram(lambda: &Rational, k_max: usize) -> Result<Vec<Vec<f64>>> {
    let geg = gegenbauer_from_generating_function(lambda, k_max)?;
    geg.polys
        .iter()
        .map(|pj| {
            geg.polys
                .iter()
                .map(|pk| weighted_interval_integral(pj, pk, lambda))
                .collect()
        })
        .collect()
}
