//! Executable checks of the trace/multiplier lemma, the square law for
//! conjugated translations, the trace identity for `g0 ∘ h`, the closed
//! form for `ω(gⁿ ∘ g0 ∘ g⁻ⁿ)` and the limit of the exponents `b_n`.

use serde::Serialize;

use crate::moebius::{ExtendedReal, IsometryClass, MoebiusMap};
use crate::tol::Tolerances;
use crate::Error;

/// Relative tolerance used by the closed-form checks.
pub const IDENTITY_TOL: f64 = 1e-10;
pub const EQ3_TOL: f64 = 1e-8;

/// Residuals this small count as "already converged" in trend checks.
const CONVERGED: f64 = 1e-12;

fn relative(actual: f64, expected: f64) -> f64 {
    (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE)
}

fn hyperbolic_parts(
    g: &MoebiusMap,
    tol: &Tolerances,
) -> Result<(f64, ExtendedReal, ExtendedReal), Error> {
    match g.classify_with(tol)? {
        IsometryClass::Hyperbolic {
            lambda,
            attracting,
            repelling,
        } => Ok((lambda, attracting, repelling)),
        _ => Err(Error::NotHyperbolic),
    }
}

fn trend_holds(first: f64, last: f64) -> bool {
    last < first || last <= CONVERGED
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceExponent {
    pub n: u32,
    pub s_tr: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceLemmaReport {
    pub s_lambda: f64,
    pub points: Vec<TraceExponent>,
    pub max_residual: f64,
    /// `|s_tr(n_max) - s_λ| < |s_tr(2) - s_λ|`, or both already negligible.
    pub pass: bool,
}

/// Compares `log tr(tⁿ) / log tr(sⁿ)` with `log λ(t) / log λ(s)` for
/// `n = 1..=n_max`.
pub fn verify_lemma_tr(
    src: &MoebiusMap,
    tgt: &MoebiusMap,
    n_max: u32,
) -> Result<TraceLemmaReport, Error> {
    if n_max < 2 {
        return Err(Error::InvalidParameter("n_max must be at least 2".into()));
    }
    let tol = Tolerances::default();
    let (ls, ..) = hyperbolic_parts(src, &tol)?;
    let (lt, ..) = hyperbolic_parts(tgt, &tol)?;
    let s_lambda = lt.ln() / ls.ln();
    let points: Vec<TraceExponent> = (1..=n_max)
        .map(|n| {
            let s_tr = tgt.pow(n as i64).trace().ln() / src.pow(n as i64).trace().ln();
            TraceExponent {
                n,
                s_tr,
                residual: (s_tr - s_lambda).abs(),
            }
        })
        .collect();
    let max_residual = points.iter().map(|p| p.residual).fold(0.0, f64::max);
    let pass = trend_holds(points[1].residual, points[points.len() - 1].residual);
    Ok(TraceLemmaReport {
        s_lambda,
        points,
        max_residual,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SquareLawReport {
    pub omega: f64,
    /// `ω(h⁻¹ ∘ g0 ∘ h)` read off the product matrix.
    pub signed: f64,
    pub expected: f64,
    pub residual: f64,
    pub pass: bool,
}

/// `ω(h⁻¹ ∘ g0 ∘ h) = -ω(h)²` for the parabolic `h` with the given
/// translation vector and finite fixed point.
pub fn verify_square(omega: f64, fixed: f64) -> Result<SquareLawReport, Error> {
    let h = MoebiusMap::parabolic(omega, ExtendedReal::Finite(fixed))?;
    let omega = h.translation_vector()?;
    let signed = MoebiusMap::G0.conjugate(&h).translation_vector()?;
    let expected = -omega * omega;
    let residual = relative(signed, expected);
    Ok(SquareLawReport {
        omega,
        signed,
        expected,
        residual,
        pass: residual <= IDENTITY_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductTraceReport {
    pub omega: f64,
    pub trace: f64,
    pub expected: f64,
    pub residual: f64,
    pub pass: bool,
}

/// `tr(g0 ∘ h) = |2 + ω(h)|` for the parabolic `h` with the given
/// translation vector and finite fixed point.
pub fn verify_eq2(omega: f64, fixed: f64) -> Result<ProductTraceReport, Error> {
    let h = MoebiusMap::parabolic(omega, ExtendedReal::Finite(fixed))?;
    let omega = h.translation_vector()?;
    let trace = MoebiusMap::G0.compose(&h).trace();
    let expected = (2.0 + omega).abs();
    let residual = (trace - expected).abs() / expected.max(1.0);
    Ok(ProductTraceReport {
        omega,
        trace,
        expected,
        residual,
        pass: residual <= IDENTITY_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugatePowerReport {
    pub n: u32,
    pub lambda: f64,
    pub repelling: f64,
    pub closed_form: f64,
    pub direct: f64,
    pub relative_error: f64,
    pub pass: bool,
}

/// Multiplier and repelling point of `g`, which must attract to 0.
fn anchored_at_zero(g: &MoebiusMap, tol: &Tolerances) -> Result<(f64, f64), Error> {
    let (lambda, attracting, repelling) = hyperbolic_parts(g, tol)?;
    match (attracting, repelling) {
        (ExtendedReal::Finite(p), ExtendedReal::Finite(n)) if p.abs() <= tol.pt && n != 0.0 => {
            Ok((lambda, n))
        }
        _ => Err(Error::WrongNormalization),
    }
}

/// `-(λⁿ - 1)² / (λⁿ N²)`, which equals `-(λⁿ + λ⁻ⁿ - 2) / N²` without
/// the cancellation near `λⁿ = 1`.
pub fn conjugate_power_omega(lambda: f64, repelling: f64, n: u32) -> f64 {
    let log_ln = n as f64 * lambda.ln();
    let m1 = log_ln.exp_m1();
    -(m1 * m1) / (log_ln.exp() * repelling * repelling)
}

fn conjugate_power(g: &MoebiusMap, n: u32) -> MoebiusMap {
    let gn = g.pow(n as i64);
    gn.compose(&MoebiusMap::G0).compose(&gn.inverse())
}

/// Closed form against the translation vector of the product
/// `gⁿ ∘ g0 ∘ g⁻ⁿ`, for `g` with attracting fixed point 0.
pub fn verify_eq3(g: &MoebiusMap, n: u32, tol: &Tolerances) -> Result<ConjugatePowerReport, Error> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let (lambda, repelling) = anchored_at_zero(g, tol)?;
    let closed_form = conjugate_power_omega(lambda, repelling, n);
    let direct = conjugate_power(g, n).translation_vector_with(tol)?;
    let relative_error = relative(direct, closed_form);
    Ok(ConjugatePowerReport {
        n,
        lambda,
        repelling,
        closed_form,
        direct,
        relative_error,
        pass: relative_error <= EQ3_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentLimitReport {
    /// `log λ(t) / log λ(s)`, the claimed limit.
    pub a: f64,
    /// `b_1 .. b_{n_max}`.
    pub b: Vec<f64>,
    /// `|b_{n_max} - a| < |b_1 - a|`, or both already negligible.
    pub pass: bool,
}

/// `b_n = log |ω(tⁿ g0 t⁻ⁿ)| / log |ω(sⁿ g0 s⁻ⁿ)|` from the products, for
/// `s`, `t` both attracting to 0.
pub fn verify_bn_limit(
    src: &MoebiusMap,
    tgt: &MoebiusMap,
    n_max: u32,
    tol: &Tolerances,
) -> Result<ExponentLimitReport, Error> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let (ls, _) = anchored_at_zero(src, tol)?;
    let (lt, _) = anchored_at_zero(tgt, tol)?;
    let a = lt.ln() / ls.ln();
    let b = (1..=n_max)
        .map(|n| {
            let ws = conjugate_power(src, n).translation_vector_with(tol)?;
            let wt = conjugate_power(tgt, n).translation_vector_with(tol)?;
            Ok(wt.abs().ln() / ws.abs().ln())
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    let pass = trend_holds((b[0] - a).abs(), (b[b.len() - 1] - a).abs());
    Ok(ExponentLimitReport { a, b, pass })
}
