use anyhow::{bail, Context, Result};
use heisenharm::classical::{
    apply_laplacian, default_quad_points, euclid_rank, gauss_legendre_rule, gegenbauer_gram,
    r3_basis, EuclidPolynomial, QuadratureRule,
};
use heisenharm::exactnum::{parse_rational, rational_to_string};
use heisenharm::harmonics::{
    eval_fundamental_solution, eval_spherical, fundamental_constant, solid_harmonic, HarmonicIndex,
    SphericalPoint,
};
use heisenharm::specfun::{gegenbauer_from_generating_function, gegenbauer_norm, NormValue};
use heisenharm::verify::{basis_records, verify_up_to, HarmonicRecord};
use heisenharm::{GaussianRational, HPoint, UnivariatePoly};
use num_complex::Complex64;
use serde::Serialize;

use crate::{Format, Rendered};

const EVAL_TOLERANCE: f64 = 1e-12;
const ORTHOGONALITY_TOLERANCE: f64 = 1e-8;

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn json_only(fmt: Format, what: &str) -> Result<()> {
    if fmt == Format::Csv {
        bail!("csv output is only available for coefficient tables, not for {what}");
    }
    Ok(())
}

fn csv_table(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn gaussian_cells(c: &GaussianRational) -> String {
    format!(
        "{},{}",
        rational_to_string(&c.re),
        rational_to_string(&c.im)
    )
}

#[derive(Serialize)]
struct ComplexValue {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

pub fn basis(alpha: i64, degree: u32, fmt: Format) -> Result<Rendered> {
    let records: Vec<HarmonicRecord> = basis_records(alpha, degree)?;
    let body = match fmt {
        Format::Json => json(&records)?,
        Format::Csv => csv_table(
            "alpha,m,n,k,a,b,c,re,im",
            records.iter().flat_map(|r| {
                r.cartesian.terms().map(move |(mono, c)| {
                    format!(
                        "{},{},{},{},{},{},{},{}",
                        r.alpha,
                        r.m,
                        r.n,
                        r.k,
                        mono.a,
                        mono.b,
                        mono.c,
                        gaussian_cells(c)
                    )
                })
            }),
        ),
    };
    let failed = records.iter().find(|r| !r.verified);
    Ok(Rendered {
        body,
        passed: failed.is_none(),
        diagnostic: failed.map(|r| {
            format!(
                "verification failed for alpha={} m={} n={}",
                r.alpha, r.m, r.n
            )
        }),
    })
}

pub fn verify(alpha: i64, max_degree: u32, fmt: Format) -> Result<Rendered> {
    json_only(fmt, "verification reports")?;
    let reports = verify_up_to(alpha, max_degree)?;
    let body = json(&reports)?;
    let first_bad = reports.iter().find(|r| !r.passed());
    let diagnostic = match first_bad {
        None => None,
        Some(degree) => Some(match degree.reports.iter().find(|r| !r.passed()) {
            Some(report) => json(report)?,
            None => format!(
                "degree {}: rank {} (expected {}), table match {:?}",
                degree.m, degree.rank, degree.expected_dimension, degree.table_match
            ),
        }),
    };
    Ok(Rendered {
        body,
        passed: first_bad.is_none(),
        diagnostic,
    })
}

#[derive(Serialize)]
struct EvalOutput {
    index: HarmonicIndex,
    point: SphericalPoint,
    spherical: ComplexValue,
    cartesian: ComplexValue,
    relative_difference: f64,
    passed: bool,
}

pub fn eval(
    alpha: i64,
    degree: u32,
    n: i64,
    rho: f64,
    theta: f64,
    phi: f64,
    fmt: Format,
) -> Result<Rendered> {
    json_only(fmt, "point evaluations")?;
    if !(rho.is_finite() && theta.is_finite() && phi.is_finite())
        || rho < 0.0
        || !(0.0..=std::f64::consts::PI).contains(&phi)
    {
        bail!("point must have rho >= 0 and 0 <= phi <= pi");
    }
    let idx = HarmonicIndex::new(alpha, degree, n)?;
    let pt = SphericalPoint::new(rho, theta, phi);
    let spherical = eval_spherical(&idx, &pt);
    let cartesian = solid_harmonic(&idx).eval_cartesian(&pt.to_hpoint());
    let relative_difference = (spherical - cartesian).norm() / spherical.norm().max(1.0);
    let passed = relative_difference < EVAL_TOLERANCE;
    let out = EvalOutput {
        index: idx,
        point: pt,
        spherical: spherical.into(),
        cartesian: cartesian.into(),
        relative_difference,
        passed,
    };
    Ok(Rendered {
        body: json(&out)?,
        passed,
        diagnostic: (!passed)
            .then(|| format!("spherical and cartesian routes differ by {relative_difference:e}")),
    })
}

fn parse_lambda(s: &str) -> Result<heisenharm::Rational> {
    parse_rational(s).with_context(|| format!("invalid rational lambda '{s}'"))
}

#[derive(Serialize)]
struct GegenbauerOutput<'a> {
    lambda: String,
    k: u32,
    coefficients: &'a UnivariatePoly,
}

pub fn gegenbauer(lambda: &str, k: u32, fmt: Format) -> Result<Rendered> {
    let lam = parse_lambda(lambda)?;
    let series = gegenbauer_from_generating_function(&lam, k as usize)?;
    let p = series
        .get(k as usize)
        .context("missing Gegenbauer polynomial")?;
    let body = match fmt {
        Format::Json => json(&GegenbauerOutput {
            lambda: rational_to_string(&lam),
            k,
            coefficients: p,
        })?,
        Format::Csv => csv_table(
            "power,coefficient",
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(j, c)| format!("{j},{c}")),
        ),
    };
    Ok(Rendered {
        body,
        passed: true,
        diagnostic: None,
    })
}

#[derive(Serialize)]
struct Norm {
    k: u32,
    exact: Option<String>,
    value: f64,
}

impl Norm {
    fn new(k: u32, n: &NormValue) -> Self {
        Self {
            k,
            exact: n.exact().map(rational_to_string),
            value: n.to_f64(),
        }
    }
}

#[derive(Serialize)]
struct OrthogonalityOutput {
    lambda: String,
    kmax: u32,
    quadrature: QuadratureRule,
    gram: Vec<Vec<f64>>,
    norms: Vec<Norm>,
    max_diagonal_error: f64,
    max_off_diagonal: f64,
    tolerance: f64,
    passed: bool,
}

pub fn orthogonality(lambda: &str, kmax: u32, fmt: Format) -> Result<Rendered> {
    json_only(fmt, "Gram matrices")?;
    let lam = parse_lambda(lambda)?;
    let gram = gegenbauer_gram(&lam, kmax as usize)?;
    let norms = (0..=kmax)
        .map(|k| gegenbauer_norm(&lam, k))
        .collect::<heisenharm::Result<Vec<_>>>()?;
    let mut max_diagonal_error: f64 = 0.0;
    let mut max_off_diagonal: f64 = 0.0;
    for (j, row) in gram.iter().enumerate() {
        for (k, g) in row.iter().enumerate() {
            if j == k {
                max_diagonal_error = max_diagonal_error.max((g - norms[j].to_f64()).abs());
            } else {
                max_off_diagonal = max_off_diagonal.max(g.abs());
            }
        }
    }
    let passed =
        max_diagonal_error < ORTHOGONALITY_TOLERANCE && max_off_diagonal < ORTHOGONALITY_TOLERANCE;
    let rule = gauss_legendre_rule(default_quad_points().max(2 * kmax as usize + 8))?;
    let out = OrthogonalityOutput {
        lambda: rational_to_string(&lam),
        kmax,
        quadrature: (*rule).clone(),
        gram,
        norms: norms
            .iter()
            .enumerate()
            .map(|(k, n)| Norm::new(k as u32, n))
            .collect(),
        max_diagonal_error,
        max_off_diagonal,
        tolerance: ORTHOGONALITY_TOLERANCE,
        passed,
    };
    Ok(Rendered {
        body: json(&out)?,
        passed,
        diagnostic: (!passed).then(|| {
            format!("Gram matrix off by {max_diagonal_error:e} (diagonal), {max_off_diagonal:e} (off-diagonal)")
        }),
    })
}

#[derive(Serialize)]
struct R3Harmonic<'a> {
    n: i64,
    polynomial: &'a EuclidPolynomial,
    laplacian_zero: bool,
}

#[derive(Serialize)]
struct R3Output<'a> {
    m: u32,
    rank: usize,
    expected_dimension: usize,
    harmonics: Vec<R3Harmonic<'a>>,
    passed: bool,
}

pub fn r3_basis_cmd(degree: u32, fmt: Format) -> Result<Rendered> {
    let polys = r3_basis(degree);
    let m = degree as i64;
    let harmonics: Vec<R3Harmonic> = polys
        .iter()
        .zip(-m..=m)
        .map(|(p, n)| R3Harmonic {
            n,
            polynomial: p,
            laplacian_zero: apply_laplacian(p).is_zero(),
        })
        .collect();
    let rank = euclid_rank(&polys, degree);
    let expected_dimension = 2 * degree as usize + 1;
    let passed = rank == expected_dimension && harmonics.iter().all(|h| h.laplacian_zero);
    let body = match fmt {
        Format::Json => json(&R3Output {
            m: degree,
            rank,
            expected_dimension,
            harmonics,
            passed,
        })?,
        Format::Csv => csv_table(
            "n,x,y,w,re,im",
            harmonics.iter().flat_map(|h| {
                h.polynomial.terms().map(move |(&(x, y, w), c)| {
                    format!("{},{x},{y},{w},{}", h.n, gaussian_cells(c))
                })
            }),
        ),
    };
    Ok(Rendered {
        body,
        passed,
        diagnostic: (!passed)
            .then(|| format!("rank {rank} of {expected_dimension}, or a nonzero Laplacian")),
    })
}

#[derive(Serialize)]
struct FundamentalOutput {
    alpha: f64,
    z: ComplexValue,
    t: f64,
    c_alpha: f64,
    value: ComplexValue,
}

pub fn fundamental(alpha: f64, z_re: f64, z_im: f64, t: f64, fmt: Format) -> Result<Rendered> {
    json_only(fmt, "fundamental solution values")?;
    let z = Complex64::new(z_re, z_im);
    let c_alpha = fundamental_constant(alpha)?;
    let value = eval_fundamental_solution(alpha, &HPoint::new(z, t))?;
    let out = FundamentalOutput {
        alpha,
        z: z.into(),
        t,
        c_alpha,
        value: value.into(),
    };
    Ok(Rendered {
        body: json(&out)?,
        passed: true,
        diagnostic: None,
    })
}
