//! Solid `L_α`-spherical harmonics on `H₁`.
//!
//! A basis harmonic is indexed by `(α, m, n)` with `|n| ≤ m`, `m ≡ n (mod 2)`
//! and `k = (m − |n|)/2`. In Heisenberg spherical coordinates
//! `z = ρ sin^{1/2}φ e^{iθ}`, `t + i|z|² = ρ² e^{iφ}` it reads
//!
//! ```text
//! e^{inθ} ρ^m sin^{|n|/2}φ · H_k^{(α,n)}(e^{iφ}),
//! H_k^{(α,n)}(e^{iφ}) = (−1)^k Σ_v C(A, v) C(B, k−v) e^{i(2v−k)φ},
//! A = −(|n|+n)/2 − (α+1)/2,   B = −(|n|−n)/2 + (α−1)/2.
//! ```
//!
//! The profile `h(x)` in `x = cot φ = t/|z|²` solves
//! `(1+x²)h″ − (i(α+n) + (m−1)x)h′ + ¼(m²−n²)h = 0`, and this module builds it
//! along independent routes (coefficient recurrence, closed-form Pochhammer
//! coefficients, terminating ₂F₁, binomial sum, generating function) so they
//! can be checked against each other. The binomial sum is canonical; it needs
//! no division and is defined for every index.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{frac, gen_binomial, pochhammer, rat, GaussianRational, Rational};
use crate::hpoly::{HPoint, HPolynomial};
use crate::linalg::exact_rank;
use crate::par;
use crate::specfun::{gamma_real, hyp2f1_terminating, UnivariatePoly};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct HarmonicIndex {
    pub alpha: i64,
    pub m: u32,
    pub n: i64,
    pub k: u32,
}

impl HarmonicIndex {
    pub fn new(alpha: i64, m: u32, n: i64) -> Result<Self> {
        let abs_n = n.unsigned_abs();
        if abs_n > m as u64 || !(m as u64 - abs_n).is_multiple_of(2) {
            return Err(Error::InvalidIndex { m: m as i64, n });
        }
        Ok(Self {
            alpha,
            m,
            n,
            k: ((m as u64 - abs_n) / 2) as u32,
        })
    }

    /// All valid indices of degree `m`, ordered by `n = −m, −m+2, …, m`.
    pub fn all_of_degree(alpha: i64, m: u32) -> Vec<Self> {
        (0..=m)
            .map(|j| Self::new(alpha, m, 2 * j as i64 - m as i64).expect("valid by construction"))
            .collect()
    }

    /// The index of the conjugate harmonic: `(−α, m, −n)`.
    pub fn conjugate(&self) -> Self {
        Self {
            alpha: -self.alpha,
            n: -self.n,
            ..*self
        }
    }

    fn abs_n(&self) -> i64 {
        self.n.abs()
    }

    /// Exponent of `(1 − ρe^{iφ})` in the generating function.
    pub fn exponent_a(&self) -> Rational {
        -frac(self.abs_n() + self.n, 2) - frac(self.alpha + 1, 2)
    }

    /// Exponent of `(1 − ρe^{−iφ})` in the generating function.
    pub fn exponent_b(&self) -> Rational {
        -frac(self.abs_n() - self.n, 2) + frac(self.alpha - 1, 2)
    }

    /// `c = −(m+n)/2 − (α−1)/2`, the lower ₂F₁ parameter.
    pub fn hyper_c(&self) -> Rational {
        -frac(self.m as i64 + self.n, 2) - frac(self.alpha - 1, 2)
    }

    /// First `v < k` at which the recurrence factor `2v − α − n − m + 1`
    /// vanishes, if any.
    pub fn degenerate_step(&self) -> Option<u32> {
        (0..self.k).find(|&v| 2 * v as i64 - self.alpha - self.n - self.m as i64 + 1 == 0)
    }
}

impl fmt::Display for HarmonicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(alpha={}, m={}, n={}, k={})",
            self.alpha, self.m, self.n, self.k
        )
    }
}

/// `a_0 .. a_k` of `y(x) = Σ a_v (x − i)^v`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoefficientSequence(pub Vec<GaussianRational>);

impl CoefficientSequence {
    /// Assembles `Σ a_v (x − i)^v`.
    pub fn to_poly(&self) -> UnivariatePoly {
        let x_minus_i = UnivariatePoly::linear(-GaussianRational::i());
        self.0.iter().rev().fold(UnivariatePoly::zero(), |acc, a| {
            &(&acc * &x_minus_i) + &UnivariatePoly::constant(a.clone())
        })
    }
}

fn degenerate(idx: &HarmonicIndex, v: u32) -> Error {
    Error::DegenerateRecurrence {
        alpha: idx.alpha,
        m: idx.m,
        n: idx.n,
        v,
    }
}

/// `i(2v−α−n−m+1)(v+1) a_{v+1} + (v² − mv + (m²−n²)/4) a_v = 0`, `a_0 = 1`.
pub fn coeffs_recurrence(idx: &HarmonicIndex) -> Result<CoefficientSequence> {
    let m = idx.m as i64;
    let quarter = frac(m * m - idx.n * idx.n, 4);
    let mut a = vec![GaussianRational::one()];
    for v in 0..idx.k {
        let vi = v as i64;
        let lead = 2 * vi - idx.alpha - idx.n - m + 1;
        if lead == 0 {
            return Err(degenerate(idx, v));
        }
        let tail = rat(vi * vi - m * vi) + &quarter;
        let denom = GaussianRational::imag(rat(lead * (vi + 1)));
        let next = (-a[v as usize].scale(&tail)).checked_div(&denom)?;
        a.push(next);
    }
    Ok(CoefficientSequence(a))
}

/// `a_v = (i/2)^v (−(m−|n|)/2)_v (−(m+|n|)/2)_v / ((c)_v v!)` with
/// `c = −(m+n)/2 − (α−1)/2`.
pub fn coeffs_closed_form(idx: &HarmonicIndex) -> Result<CoefficientSequence> {
    let (m, abs_n) = (idx.m as i64, idx.abs_n());
    let lower = -frac(m - abs_n, 2);
    let upper = -frac(m + abs_n, 2);
    let c = idx.hyper_c();
    let half_i = GaussianRational::imag(frac(1, 2));
    let seq = (0..=idx.k)
        .map(|v| {
            let den = pochhammer(&c, v) * pochhammer(&rat(1), v);
            if den.is_zero() {
                return Err(degenerate(idx, v - 1));
            }
            let real = pochhammer(&lower, v) * pochhammer(&upper, v) / den;
            Ok(half_i.pow(v as i32)?.scale(&real))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoefficientSequence(seq))
}

/// `F(−k, −(m+|n|)/2; c; w)` evaluated along `w = (1 + ix)/2`.
pub fn y_hypergeometric(idx: &HarmonicIndex) -> Result<UnivariatePoly> {
    let f = hyp2f1_terminating(
        &-rat(idx.k as i64),
        &-frac(idx.m as i64 + idx.abs_n(), 2),
        &idx.hyper_c(),
    )
    .map_err(|e| match e {
        Error::Pole { v, .. } => degenerate(idx, v - 1),
        other => other,
    })?;
    Ok(f.compose_affine(
        &GaussianRational::imag(frac(1, 2)),
        &GaussianRational::real(frac(1, 2)),
    ))
}

/// How a `y` polynomial was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum YRoute {
    /// Directly from the coefficient recurrence.
    Recurrence,
    /// As the conjugate of the `(−α, −n)` solution, because the recurrence
    /// degenerates at this index.
    Conjugation,
}

#[derive(Clone, PartialEq, Debug)]
pub struct YPolynomial {
    pub poly: UnivariatePoly,
    pub route: YRoute,
}

/// The series solution `y(x) = Σ a_v (x−i)^v`, falling back to
/// `conj(y^{(−α,−n)})` when the recurrence is degenerate.
pub fn y_polynomial(idx: &HarmonicIndex) -> Result<YPolynomial> {
    match coeffs_recurrence(idx) {
        Ok(seq) => Ok(YPolynomial {
            poly: seq.to_poly(),
            route: YRoute::Recurrence,
        }),
        Err(Error::DegenerateRecurrence { .. }) => {
            let mirrored =
                coeffs_recurrence(&idx.conjugate()).map_err(|e| Error::Construction {
                    alpha: idx.alpha,
                    m: idx.m,
                    n: idx.n,
                    reason: format!("recurrence degenerate and conjugate route failed: {e}"),
                })?;
            Ok(YPolynomial {
                poly: mirrored.to_poly().conj(),
                route: YRoute::Conjugation,
            })
        }
        Err(e) => Err(e),
    }
}

/// `C(A, v) · C(B, k − v)` for `v = 0..=k`.
pub fn binomial_weights(idx: &HarmonicIndex) -> Vec<Rational> {
    let (a, b) = (idx.exponent_a(), idx.exponent_b());
    (0..=idx.k)
        .map(|v| gen_binomial(&a, v) * gen_binomial(&b, idx.k - v))
        .collect()
}

/// `h_k^{(α,n)}(x) = Σ_v C(A,v) C(B,k−v) (x+i)^v (x−i)^{k−v}`.
pub fn h_polynomial(idx: &HarmonicIndex) -> UnivariatePoly {
    let plus = UnivariatePoly::linear(GaussianRational::i());
    let minus = UnivariatePoly::linear(-GaussianRational::i());
    binomial_weights(idx)
        .into_iter()
        .enumerate()
        .fold(UnivariatePoly::zero(), |acc, (v, w)| {
            let term = &plus.pow(v as u32) * &minus.pow(idx.k - v as u32);
            &acc + &term.scale(&GaussianRational::real(w))
        })
}

/// Left side of the profile ODE applied to `y`; zero iff `y` solves it.
pub fn ode_residual(idx: &HarmonicIndex, y: &UnivariatePoly) -> UnivariatePoly {
    let m = idx.m as i64;
    let one_plus_x2 = UnivariatePoly::from_rationals([rat(1), rat(0), rat(1)]);
    let drift = UnivariatePoly::new(vec![
        GaussianRational::imag(rat(idx.alpha + idx.n)),
        GaussianRational::from_int(m - 1),
    ]);
    let d1 = y.derivative();
    let d2 = d1.derivative();
    let constant = GaussianRational::real(frac(m * m - idx.n * idx.n, 4));
    &(&(&one_plus_x2 * &d2) - &(&drift * &d1)) + &y.scale(&constant)
}

/// `Σ_v c_v e^{i(2v−k)φ}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TrigPolynomial {
    pub k: u32,
    pub c: Vec<GaussianRational>,
}

impl TrigPolynomial {
    pub fn new(k: u32, c: Vec<GaussianRational>) -> Self {
        debug_assert_eq!(c.len(), k as usize + 1);
        Self { k, c }
    }

    pub fn eval(&self, phi: f64) -> Complex64 {
        self.c
            .iter()
            .enumerate()
            .map(|(v, c)| {
                c.to_complex()
                    * Complex64::from_polar(1.0, (2 * v as i64 - self.k as i64) as f64 * phi)
            })
            .sum()
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self::new(self.k, self.c.iter().map(|c| c * s).collect())
    }

    /// `p(cos φ)` written in the `e^{i(2v−k)φ}` basis with `k = deg p`. Fails
    /// if `p` mixes parities, since such a polynomial has no representation
    /// on that basis.
    pub fn from_cos_polynomial(p: &UnivariatePoly) -> Result<Self> {
        let k = p.degree().unwrap_or(0) as i64;
        let mut laurent: BTreeMap<i64, GaussianRational> = BTreeMap::new();
        let mut power: BTreeMap<i64, Rational> = BTreeMap::from([(0, rat(1))]);
        for j in 0..=k {
            let cj = p.coeff(j as usize);
            if !cj.is_zero() {
                for (e, w) in &power {
                    *laurent.entry(*e).or_insert_with(GaussianRational::zero) += &cj.scale(w);
                }
            }
            // multiply by cos φ = (e^{iφ} + e^{−iφ}) / 2
            let mut next: BTreeMap<i64, Rational> = BTreeMap::new();
            for (e, w) in &power {
                let half = w * frac(1, 2);
                *next.entry(e + 1).or_insert_with(Rational::zero) += &half;
                *next.entry(e - 1).or_insert_with(Rational::zero) += &half;
            }
            power = next;
        }
        let mut c = vec![GaussianRational::zero(); k as usize + 1];
        for (e, w) in laurent {
            if w.is_zero() {
                continue;
            }
            if (e + k) % 2 != 0 {
                return Err(Error::Domain("polynomial in cos φ has mixed parity".into()));
            }
            c[((e + k) / 2) as usize] = w;
        }
        Ok(Self::new(k as u32, c))
    }
}

/// `H_k^{(α,n)}` with `c_v = (−1)^k C(A,v) C(B,k−v)`.
pub fn h_trig(idx: &HarmonicIndex) -> TrigPolynomial {
    let sign = GaussianRational::from_int(if idx.k.is_multiple_of(2) { 1 } else { -1 });
    TrigPolynomial::new(
        idx.k,
        binomial_weights(idx)
            .into_iter()
            .map(|w| sign.scale(&w))
            .collect(),
    )
}

/// Coefficients of `ρ^k`, `k = 0..=k_max`, in
/// `(1 − ρe^{iφ})^{A} (1 − ρe^{−iφ})^{B}`, expanded as a product of two
/// binomial series `(1 − u)^{−s} = Σ (s)_j/j! u^j`.
pub fn h_from_generating_function(alpha: i64, n: i64, k_max: u32) -> Vec<TrigPolynomial> {
    let abs_n = n.abs();
    let s_plus = frac(abs_n + n, 2) + frac(alpha + 1, 2);
    let s_minus = frac(abs_n - n, 2) - frac(alpha - 1, 2);
    let series = |s: &Rational| -> Vec<Rational> {
        (0..=k_max)
            .map(|j| pochhammer(s, j) / pochhammer(&rat(1), j))
            .collect()
    };
    let (p, q) = (series(&s_plus), series(&s_minus));
    (0..=k_max)
        .map(|k| {
            // ρ^v e^{ivφ} from the first factor times ρ^{k−v} e^{−i(k−v)φ}
            let c = (0..=k)
                .map(|v| GaussianRational::real(&p[v as usize] * &q[(k - v) as usize]))
                .collect();
            TrigPolynomial::new(k, c)
        })
        .collect()
}

/// `z^{max(n,0)} z̄^{max(−n,0)} (−1)^k Σ_v C(A,v) C(B,k−v) (t+i|z|²)^v (t−i|z|²)^{k−v}`.
pub fn solid_harmonic(idx: &HarmonicIndex) -> HPolynomial {
    let i = GaussianRational::i();
    let w = HPolynomial::z_norm_sqr();
    let plus = &HPolynomial::t() + &w.scale(&i);
    let minus = &HPolynomial::t() - &w.scale(&i);
    let sign = GaussianRational::from_int(if idx.k.is_multiple_of(2) { 1 } else { -1 });
    let sum =
        binomial_weights(idx)
            .into_iter()
            .enumerate()
            .fold(HPolynomial::zero(), |acc, (v, c)| {
                let term = &plus.pow(v as u32) * &minus.pow(idx.k - v as u32);
                &acc + &term.scale(&sign.scale(&c))
            });
    let prefix = HPolynomial::monomial(idx.n.max(0) as u32, (-idx.n).max(0) as u32, 0);
    &prefix * &sum
}

/// Swaps `z ↔ z̄` and conjugates coefficients; maps `L_α`-harmonics of
/// angular index `n` to `L_{−α}`-harmonics of index `−n`.
pub fn conjugate_harmonic(p: &HPolynomial) -> HPolynomial {
    p.conjugate()
}

/// `α` for which [`basis`] is defined: odd, or zero.
pub fn alpha_supported(alpha: i64) -> bool {
    alpha == 0 || alpha % 2 != 0
}

/// One solid harmonic per `n ∈ {−m, −m+2, …, m}`, in that order.
pub fn basis(alpha: i64, m: u32) -> Result<Vec<HPolynomial>> {
    if !alpha_supported(alpha) {
        return Err(Error::Domain(format!(
            "alpha = {alpha} is not supported: need alpha odd or 0"
        )));
    }
    Ok(par::map_collect(
        HarmonicIndex::all_of_degree(alpha, m),
        |idx| solid_harmonic(&idx),
    ))
}

/// Sequential variant of [`basis`].
pub fn basis_seq(alpha: i64, m: u32) -> Result<Vec<HPolynomial>> {
    if !alpha_supported(alpha) {
        return Err(Error::Domain(format!(
            "alpha = {alpha} is not supported: need alpha odd or 0"
        )));
    }
    Ok(par::map_collect_seq(
        HarmonicIndex::all_of_degree(alpha, m),
        |idx| solid_harmonic(&idx),
    ))
}

/// Exact rank over Q(i) of a family of polynomials of Heisenberg degree `m`.
pub fn span_rank(polys: &[HPolynomial], m: u32) -> usize {
    let monos = HPolynomial::monomials_of_degree(m);
    let rows: Vec<_> = polys.iter().map(|p| p.coefficient_row(&monos)).collect();
    exact_rank(&rows)
}

/// `(α, n)` at which `H_k^{(α,n)}(e^{iφ}) = P_k^{ℓ+1/2}(cos φ)`: both
/// generating-function exponents must equal `−(ℓ + ½)`, which forces
/// `α = −2ℓ, n = 2ℓ` (the mirror pair `(2ℓ, −2ℓ)` works as well).
pub fn gegenbauer_index_pair(ell: u32) -> (i64, i64) {
    (-2 * ell as i64, 2 * ell as i64)
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct SphericalPoint {
    pub rho: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    pub fn new(rho: f64, theta: f64, phi: f64) -> Self {
        Self { rho, theta, phi }
    }

    /// `z = ρ sin^{1/2}φ e^{iθ}`, `t = ρ² cos φ`.
    pub fn to_hpoint(&self) -> HPoint {
        let r = self.rho * self.phi.sin().max(0.0).sqrt();
        HPoint::new(
            Complex64::from_polar(r, self.theta),
            self.rho * self.rho * self.phi.cos(),
        )
    }

    pub fn from_hpoint(p: &HPoint) -> Self {
        let rho = p.gauge();
        let theta = p.z.arg().rem_euclid(2.0 * PI);
        let phi = p.z.norm_sqr().atan2(p.t);
        Self { rho, theta, phi }
    }
}

/// `e^{inθ} ρ^m sin^{|n|/2}φ H_k^{(α,n)}(e^{iφ})`. Stays finite at
/// `φ ∈ {0, π}` since `cot φ` is never formed.
pub fn eval_spherical(idx: &HarmonicIndex, pt: &SphericalPoint) -> Complex64 {
    let radial = pt.rho.powi(idx.m as i32) * pt.phi.sin().max(0.0).powf(idx.n.abs() as f64 / 2.0);
    Complex64::from_polar(radial, idx.n as f64 * pt.theta) * h_trig(idx).eval(pt.phi)
}

fn is_odd_integer(x: f64) -> bool {
    x.fract() == 0.0 && (x.abs() % 2.0) == 1.0
}

/// `C_α = Γ((1+α)/2) Γ((1−α)/2) / π²`.
pub fn fundamental_constant(alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || is_odd_integer(alpha) {
        return Err(Error::Domain(format!(
            "C_alpha has a Gamma pole at odd integer alpha = {alpha}"
        )));
    }
    Ok(gamma_real((1.0 + alpha) / 2.0)? * gamma_real((1.0 - alpha) / 2.0)? / (PI * PI))
}

/// `Φ_α(z,t) = C_α (|z|⁴+t²)^{−1/2} ((|z|²+it)/(|z|²−it))^{α/2}`, principal
/// branch for the unimodular power.
pub fn eval_fundamental_solution(alpha: f64, pt: &HPoint) -> Result<Complex64> {
    let c = fundamental_constant(alpha)?;
    let w = pt.z.norm_sqr();
    if w == 0.0 && pt.t == 0.0 {
        return Err(Error::Domain(
            "fundamental solution is singular at the origin".into(),
        ));
    }
    // arg((w+it)/(w−it)) = 2·atan2(t, w), continuous for w ≥ 0 off the origin
    let power = Complex64::from_polar(1.0, pt.t.atan2(w) * alpha);
    Ok(power * c / (w * w + pt.t * pt.t).sqrt())
}

/// `L_α f = −¼(X² + Y²) f + iα T f` at `pt` by central differences in real
/// coordinates `(x, y, t)`, with `X = ∂x + 2y∂t`, `Y = ∂y − 2x∂t`. This is the
/// same operator as `−ZZ̄ + i(α−1)T`.
pub fn finite_difference_l_alpha<F>(f: F, alpha: f64, pt: &HPoint, h: f64) -> Complex64
where
    F: Fn(&HPoint) -> Complex64,
{
    let (x, y, t) = (pt.z.re, pt.z.im, pt.t);
    let at = |dx: f64, dy: f64, dt: f64| f(&HPoint::new(Complex64::new(x + dx, y + dy), t + dt));
    let f0 = at(0.0, 0.0, 0.0);
    let h2 = h * h;
    let fxx = (at(h, 0.0, 0.0) - f0 * 2.0 + at(-h, 0.0, 0.0)) / h2;
    let fyy = (at(0.0, h, 0.0) - f0 * 2.0 + at(0.0, -h, 0.0)) / h2;
    let ftt = (at(0.0, 0.0, h) - f0 * 2.0 + at(0.0, 0.0, -h)) / h2;
    let fxt = (at(h, 0.0, h) - at(h, 0.0, -h) - at(-h, 0.0, h) + at(-h, 0.0, -h)) / (4.0 * h2);
    let fyt = (at(0.0, h, h) - at(0.0, h, -h) - at(0.0, -h, h) + at(0.0, -h, -h)) / (4.0 * h2);
    let ft = (at(0.0, 0.0, h) - at(0.0, 0.0, -h)) / (2.0 * h);
    let xx_yy = fxx + fyy + fxt * (4.0 * y) - fyt * (4.0 * x) + ftt * (4.0 * (x * x + y * y));
    -xx_yy * 0.25 + Complex64::new(0.0, alpha) * ft
}
