//! Sparse polynomials in `(z, z̄, t)` over Q(i) and the left-invariant
//! vector fields of the Heisenberg group `H₁`.
//!
//! `z` and `z̄` are independent commuting symbols, so the Wirtinger
//! derivatives are ordinary partials. Conjugation only happens at numeric
//! evaluation.
//!
//! The vector fields act as
//!
//! ```text
//! Z = ∂/∂z + i z̄ ∂/∂t      Z̄ = ∂/∂z̄ − i z ∂/∂t      T = ∂/∂t
//! X = Z + Z̄                 Y = i (Z − Z̄)
//! ```
//!
//! and the sublaplacian used for harmonicity is `L_α = −Z Z̄ + i(α−1) T`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{rat, GaussianRational, Rational};

/// `z^a z̄^b t^c`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct HMonomial {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl HMonomial {
    pub const fn new(a: u32, b: u32, c: u32) -> Self {
        Self { a, b, c }
    }

    /// Dilation weight: `z`, `z̄` count 1, `t` counts 2.
    pub fn degree(&self) -> u32 {
        self.a + self.b + 2 * self.c
    }

    fn times(&self, o: &HMonomial) -> HMonomial {
        HMonomial::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

// Graded lexicographic by (a+b+2c, a, b, c).
impl Ord for HMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.a, self.b, self.c).cmp(&(other.degree(), other.a, other.b, other.c))
    }
}

impl PartialOrd for HMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of [`HPolynomial::heisenberg_degree`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Homogeneity {
    Homogeneous(u32),
    Inhomogeneous,
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HPolynomial {
    terms: BTreeMap<HMonomial, GaussianRational>,
}

/// A point `(z, t)` of `H₁ ≅ C × R`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct HPoint {
    pub z: Complex64,
    pub t: f64,
}

impl HPoint {
    pub fn new(z: Complex64, t: f64) -> Self {
        Self { z, t }
    }

    pub fn identity() -> Self {
        Self::new(Complex64::new(0.0, 0.0), 0.0)
    }

    /// Korányi gauge `(|z|⁴ + t²)^{1/4}`.
    pub fn gauge(&self) -> f64 {
        (self.z.norm_sqr().powi(2) + self.t * self.t).sqrt().sqrt()
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.z, -self.t)
    }
}

/// Group law `(z,t)(z',t') = (z+z', t+t'+2 Im(z z̄'))`.
pub fn group_multiply(p: &HPoint, q: &HPoint) -> HPoint {
    HPoint::new(p.z + q.z, p.t + q.t + 2.0 * (p.z * q.z.conj()).im)
}

impl HPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(HMonomial::default(), c)
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn term(m: HMonomial, c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, &c);
        p
    }

    pub fn monomial(a: u32, b: u32, c: u32) -> Self {
        Self::term(HMonomial::new(a, b, c), GaussianRational::one())
    }

    pub fn z() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn zbar() -> Self {
        Self::monomial(0, 1, 0)
    }

    pub fn t() -> Self {
        Self::monomial(0, 0, 1)
    }

    /// `z z̄ = |z|²`.
    pub fn z_norm_sqr() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (HMonomial, GaussianRational)>,
    {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: HMonomial, c: &GaussianRational) {
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

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &HMonomial) -> GaussianRational {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&HMonomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    fn map_terms<F>(&self, f: F) -> Self
    where
        F: Fn(&HMonomial, &GaussianRational) -> Vec<(HMonomial, GaussianRational)>,
    {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (m2, c2) in f(m, c) {
                out.add_term(m2, &c2);
            }
        }
        out
    }

    pub fn d_z(&self) -> Self {
        self.map_terms(|m, c| match m.a {
            0 => vec![],
            a => vec![(
                HMonomial::new(a - 1, m.b, m.c),
                c * &GaussianRational::from_int(a.into()),
            )],
        })
    }

    pub fn d_zbar(&self) -> Self {
        self.map_terms(|m, c| match m.b {
            0 => vec![],
            b => vec![(
                HMonomial::new(m.a, b - 1, m.c),
                c * &GaussianRational::from_int(b.into()),
            )],
        })
    }

    pub fn d_t(&self) -> Self {
        self.map_terms(|m, c| match m.c {
            0 => vec![],
            k => vec![(
                HMonomial::new(m.a, m.b, k - 1),
                c * &GaussianRational::from_int(k.into()),
            )],
        })
    }

    /// `Z = ∂/∂z + i z̄ ∂/∂t`.
    pub fn apply_z(&self) -> Self {
        let i = GaussianRational::i();
        &self.d_z() + &(&Self::zbar() * &self.d_t()).scale(&i)
    }

    /// `Z̄ = ∂/∂z̄ − i z ∂/∂t`.
    pub fn apply_zbar(&self) -> Self {
        let mi = -GaussianRational::i();
        &self.d_zbar() + &(&Self::z() * &self.d_t()).scale(&mi)
    }

    pub fn apply_t(&self) -> Self {
        self.d_t()
    }

    /// `X = Z + Z̄`, i.e. `∂/∂x + 2y ∂/∂t` in real coordinates.
    pub fn apply_x(&self) -> Self {
        &self.apply_z() + &self.apply_zbar()
    }

    /// `Y = i(Z − Z̄)`, i.e. `∂/∂y − 2x ∂/∂t` in real coordinates.
    pub fn apply_y(&self) -> Self {
        (&self.apply_z() - &self.apply_zbar()).scale(&GaussianRational::i())
    }

    /// `L_α p = −Z Z̄ p + i(α−1) T p`.
    pub fn apply_l_alpha(&self, alpha: &Rational) -> Self {
        let second = -self.apply_zbar().apply_z();
        let drift = GaussianRational::imag(alpha - rat(1));
        &second + &self.apply_t().scale(&drift)
    }

    /// `X∘X + Y∘Y`, composed from the derived real vector fields.
    pub fn apply_sublaplacian_real(&self) -> Self {
        &self.apply_x().apply_x() + &self.apply_y().apply_y()
    }

    pub fn heisenberg_degree(&self) -> Result<Homogeneity> {
        let mut degrees = self.terms.keys().map(HMonomial::degree);
        let first = degrees.next().ok_or(Error::ZeroPolynomial)?;
        if degrees.all(|d| d == first) {
            Ok(Homogeneity::Homogeneous(first))
        } else {
            Ok(Homogeneity::Inhomogeneous)
        }
    }

    /// Largest Heisenberg weight among the terms (0 for the zero polynomial).
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(HMonomial::degree).max().unwrap_or(0)
    }

    /// Substitutes `z → λz`, `z̄ → λz̄`, `t → λ²t`.
    pub fn dilate(&self, lambda: &Rational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::Domain("dilation by zero".into()));
        }
        Ok(self.map_terms(|m, c| {
            let f = num_traits::pow(lambda.clone(), m.degree() as usize);
            vec![(*m, c.scale(&f))]
        }))
    }

    /// Substitutes `z → γz`, `z̄ → γ̄z̄` for a unimodular `γ ∈ Q(i)`.
    pub fn rotate(&self, gamma: &GaussianRational) -> Result<Self> {
        if gamma.norm_sqr() != rat(1) {
            return Err(Error::Domain(format!(
                "rotation factor {gamma} is not unimodular"
            )));
        }
        let gbar = gamma.conj();
        Ok(self.map_terms(|m, c| {
            let f =
                &gamma.pow(m.a as i32).expect("nonzero") * &gbar.pow(m.b as i32).expect("nonzero");
            vec![(*m, c * &f)]
        }))
    }

    /// Swaps `z ↔ z̄` and conjugates every coefficient. For real arguments
    /// this is complex conjugation of the polynomial function.
    pub fn conjugate(&self) -> Self {
        self.map_terms(|m, c| vec![(HMonomial::new(m.b, m.a, m.c), c.conj())])
    }

    pub fn eval_cartesian(&self, pt: &HPoint) -> Complex64 {
        let zb = pt.z.conj();
        self.terms
            .iter()
            .map(|(m, c)| c.to_complex() * pt.z.powu(m.a) * zb.powu(m.b) * pt.t.powi(m.c as i32))
            .sum()
    }

    /// Coefficients read off along the given monomial list.
    pub fn coefficient_row(&self, monomials: &[HMonomial]) -> Vec<GaussianRational> {
        monomials.iter().map(|m| self.coeff(m)).collect()
    }

    /// All monomials of Heisenberg weight exactly `m`, in canonical order.
    pub fn monomials_of_degree(m: u32) -> Vec<HMonomial> {
        let mut out: Vec<HMonomial> = (0..=m / 2)
            .flat_map(|c| {
                let rest = m - 2 * c;
                (0..=rest).map(move |a| HMonomial::new(a, rest - a, c))
            })
            .collect();
        out.sort();
        out
    }
}

impl<'a> Add<&'a HPolynomial> for &'a HPolynomial {
    type Output = HPolynomial;
    fn add(self, rhs: &HPolynomial) -> HPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a> Sub<&'a HPolynomial> for &'a HPolynomial {
    type Output = HPolynomial;
    fn sub(self, rhs: &HPolynomial) -> HPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a HPolynomial> for &'a HPolynomial {
    type Output = HPolynomial;
    fn mul(self, rhs: &HPolynomial) -> HPolynomial {
        let mut out = HPolynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.times(m2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for HPolynomial {
    type Output = HPolynomial;
    fn neg(self) -> HPolynomial {
        self.scale(&GaussianRational::from_int(-1))
    }
}

impl fmt::Display for HPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = format!("({c})");
                for (sym, e) in [("z", m.a), ("zb", m.b), ("t", m.c)] {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*{sym}")),
                        e => s.push_str(&format!("*{sym}^{e}")),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for HPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize)]
struct TermRecord<'a> {
    a: u32,
    b: u32,
    c: u32,
    coeff: &'a GaussianRational,
}

impl Serialize for HPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, c)| TermRecord {
            a: m.a,
            b: m.b,
            c: m.c,
            coeff: c,
        }))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactnum::frac;
    use proptest::prelude::*;

    fn gi(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(rat(re), rat(im))
    }

    /// `z²z̄ − 2i z t`, the degree-3 harmonic `z(|z|² − 2it)`.
    fn cubic() -> HPolynomial {
        HPolynomial::from_terms([
            (HMonomial::new(2, 1, 0), gi(1, 0)),
            (HMonomial::new(1, 0, 1), gi(0, -2)),
        ])
    }

    pub(crate) fn arb_hpoly(max_deg: u32) -> impl Strategy<Value = HPolynomial> {
        let mono = (0..=max_deg, 0..=max_deg, 0..=max_deg / 2)
            .prop_filter("degree", move |(a, b, c)| a + b + 2 * c <= max_deg);
        let coeff = (-5i64..=5, -5i64..=5, 1i64..4)
            .prop_map(|(re, im, d)| GaussianRational::new(frac(re, d), frac(im, d)));
        prop::collection::vec((mono, coeff), 0..8).prop_map(|ts| {
            HPolynomial::from_terms(
                ts.into_iter()
                    .map(|((a, b, c), k)| (HMonomial::new(a, b, c), k)),
            )
        })
    }

    #[test]
    fn vector_field_examples() {
        assert_eq!(HPolynomial::z().apply_z(), HPolynomial::one());
        assert!(HPolynomial::zbar().apply_z().is_zero());
        assert_eq!(
            HPolynomial::t().apply_zbar(),
            HPolynomial::z().scale(&gi(0, -1))
        );
        assert_eq!(
            HPolynomial::t().pow(2).apply_t(),
            HPolynomial::t().scale(&gi(2, 0))
        );
        assert_eq!(HPolynomial::z().apply_x(), HPolynomial::one());
        assert_eq!(HPolynomial::zbar().apply_x(), HPolynomial::one());
        assert_eq!(HPolynomial::z().apply_y(), HPolynomial::constant(gi(0, 1)));
        assert_eq!(
            HPolynomial::zbar().apply_y(),
            HPolynomial::constant(gi(0, -1))
        );
        let t = HPolynomial::t();
        let comm = &t.apply_x().apply_y() - &t.apply_y().apply_x();
        assert_eq!(comm, HPolynomial::constant(gi(4, 0)));
    }

    #[test]
    fn l_alpha_examples() {
        assert!(HPolynomial::t().apply_l_alpha(&rat(0)).is_zero());
        assert!(cubic().apply_l_alpha(&rat(0)).is_zero());
        for alpha in -7..=7 {
            let p = &HPolynomial::t() + &HPolynomial::z_norm_sqr().scale(&gi(0, alpha));
            assert!(p.apply_l_alpha(&rat(alpha)).is_zero(), "alpha = {alpha}");
        }
    }

    #[test]
    fn real_sublaplacian_examples() {
        assert!(HPolynomial::one().apply_sublaplacian_real().is_zero());
        assert_eq!(
            HPolynomial::z_norm_sqr().apply_sublaplacian_real(),
            HPolynomial::constant(gi(4, 0))
        );
    }

    #[test]
    fn degree_examples() {
        assert_eq!(cubic().heisenberg_degree(), Ok(Homogeneity::Homogeneous(3)));
        let quartic =
            &HPolynomial::monomial(2, 2, 0) - &HPolynomial::monomial(0, 0, 2).scale(&gi(2, 0));
        assert_eq!(quartic.heisenberg_degree(), Ok(Homogeneity::Homogeneous(4)));
        let mixed = &HPolynomial::z() + &HPolynomial::t();
        assert_eq!(mixed.heisenberg_degree(), Ok(Homogeneity::Inhomogeneous));
        assert_eq!(
            HPolynomial::zero().heisenberg_degree(),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn dilation_examples() {
        assert_eq!(
            HPolynomial::t().dilate(&rat(2)).unwrap(),
            HPolynomial::t().scale(&gi(4, 0))
        );
        assert_eq!(cubic().dilate(&rat(3)).unwrap(), cubic().scale(&gi(27, 0)));
        assert_eq!(cubic().dilate(&rat(1)).unwrap(), cubic());
        assert!(cubic().dilate(&rat(0)).is_err());
    }

    #[test]
    fn group_law_examples() {
        let p = HPoint::new(Complex64::new(0.3, -1.2), 0.7);
        assert_eq!(group_multiply(&HPoint::identity(), &p), p);
        let q = group_multiply(&p, &p.inverse());
        assert!(q.z.norm() < 1e-15 && q.t.abs() < 1e-15);
        let r = group_multiply(
            &HPoint::new(Complex64::new(1.0, 0.0), 0.0),
            &HPoint::new(Complex64::new(0.0, 1.0), 0.0),
        );
        assert_eq!(r, HPoint::new(Complex64::new(1.0, 1.0), -2.0));
    }

    #[test]
    fn eval_examples() {
        let pt = HPoint::new(Complex64::new(-2.0, 9.0), 1.5);
        assert_eq!(
            HPolynomial::t().eval_cartesian(&pt),
            Complex64::new(1.5, 0.0)
        );
        let pt = HPoint::new(Complex64::new(3.0, 4.0), 0.0);
        assert_eq!(
            HPolynomial::z_norm_sqr().eval_cartesian(&pt),
            Complex64::new(25.0, 0.0)
        );
        let pt = HPoint::new(Complex64::new(1.0, 0.0), 1.0);
        assert_eq!(cubic().eval_cartesian(&pt), Complex64::new(1.0, -2.0));
    }

    #[test]
    fn serializes_in_canonical_order() {
        let js = serde_json::to_string(&cubic()).unwrap();
        assert_eq!(
            js,
            r#"[{"a":1,"b":0,"c":1,"coeff":{"re":"0","im":"-2"}},{"a":2,"b":1,"c":0,"coeff":{"re":"1","im":"0"}}]"#
        );
        assert_eq!(HPolynomial::monomials_of_degree(2).len(), 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn complex_commutator(p in arb_hpoly(6)) {
            let lhs = &p.apply_zbar().apply_z() - &p.apply_z().apply_zbar();
            prop_assert_eq!(lhs, p.apply_t().scale(&gi(0, -2)));
        }

        #[test]
        fn real_commutators(p in arb_hpoly(6)) {
            let yx = &p.apply_x().apply_y() - &p.apply_y().apply_x();
            prop_assert_eq!(yx, p.apply_t().scale(&gi(4, 0)));
            prop_assert!((&p.apply_t().apply_x() - &p.apply_x().apply_t()).is_zero());
            prop_assert!((&p.apply_t().apply_y() - &p.apply_y().apply_t()).is_zero());
        }

        #[test]
        fn l_alpha_symmetric_form(p in arb_hpoly(6), alpha in -7i64..=7) {
            let alpha = rat(alpha);
            let sym = (&p.apply_zbar().apply_z() + &p.apply_z().apply_zbar()).scale(&GaussianRational::real(frac(-1, 2)));
            let rhs = &sym + &p.apply_t().scale(&GaussianRational::imag(alpha.clone()));
            prop_assert_eq!(p.apply_l_alpha(&alpha), rhs);
        }

        #[test]
        fn sublaplacian_real_identity(p in arb_hpoly(6)) {
            let rhs = (&p.apply_zbar().apply_z() + &p.apply_z().apply_zbar()).scale(&gi(2, 0));
            prop_assert_eq!(p.apply_sublaplacian_real(), rhs);
        }

        #[test]
        fn rotation_commutes_with_l_alpha(p in arb_hpoly(6), alpha in -5i64..=5) {
            let alpha = rat(alpha);
            let i = GaussianRational::i();
            prop_assert_eq!(
                p.rotate(&i).unwrap().apply_l_alpha(&alpha),
                p.apply_l_alpha(&alpha).rotate(&i).unwrap()
            );
        }

        #[test]
        fn l_alpha_has_degree_two(m in 0u32..7, seed in arb_hpoly(6), lam in 1i64..5, alpha in -5i64..=5) {
            // keep only the weight-m part so the input is homogeneous
            let p = HPolynomial::from_terms(
                seed.terms().filter(|(mono, _)| mono.degree() == m).map(|(mono, c)| (*mono, c.clone())),
            );
            let (lam, alpha) = (frac(lam, 2), rat(alpha));
            let lhs = p.dilate(&lam).unwrap().apply_l_alpha(&alpha);
            let rhs = p.apply_l_alpha(&alpha).dilate(&lam).unwrap()
                .scale(&GaussianRational::real(&lam * &lam));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dilation_matches_numeric_scaling(p in arb_hpoly(6), x in -2.0f64..2.0, y in -2.0f64..2.0, t in -2.0f64..2.0) {
            let lam = frac(3, 2);
            let pt = HPoint::new(Complex64::new(x, y), t);
            let scaled = HPoint::new(pt.z * 1.5, pt.t * 2.25);
            let exact = p.dilate(&lam).unwrap().eval_cartesian(&pt);
            let numeric = p.eval_cartesian(&scaled);
            prop_assert!((exact - numeric).norm() <= 1e-12 * exact.norm().max(1.0));
        }

        #[test]
        fn group_law_associative(v in prop::collection::vec(-3.0f64..3.0, 9)) {
            let p = HPoint::new(Complex64::new(v[0], v[1]), v[2]);
            let q = HPoint::new(Complex64::new(v[3], v[4]), v[5]);
            let r = HPoint::new(Complex64::new(v[6], v[7]), v[8]);
            let lhs = group_multiply(&group_multiply(&p, &q), &r);
            let rhs = group_multiply(&p, &group_multiply(&q, &r));
            prop_assert!((lhs.z - rhs.z).norm() < 1e-12 && (lhs.t - rhs.t).abs() < 1e-12 * lhs.t.abs().max(1.0));
        }
    }
}
