//! The boundary map on fixed points, its local Hölder exponents, the
//! axis-intersection test and cross-ratio norm estimates.
//!
//! The boundary map `φ` satisfies `φ ∘ g = j(g) ∘ φ`, so it sends the
//! attracting fixed point of `g` to that of `j(g)`. We only ever know `φ` on
//! such points.

use std::cmp::Ordering;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::marked_group::{
    check_budget, is_cyclic_rep, walk_pair, MarkedIsomorphism, Word, DEFAULT_BUDGET,
};
use crate::moebius::{cross_ratio_with, ExtendedReal, IsometryClass, IsometryKind};
use crate::tol::Tolerances;
use crate::Error;

pub const MIN_FIT_SAMPLES: usize = 8;
pub const DEFAULT_WINDOW: f64 = 0.01;
/// Cap on the number of class pairs compared by [`check_compatibility`].
pub const DEFAULT_PAIR_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    AttractingHyp,
    ParabolicFix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundarySample {
    pub word: Word,
    pub x: ExtendedReal,
    pub y: ExtendedReal,
    pub kind: SampleKind,
}

/// One sample per cyclic representative of length `1..=max_len` that is
/// hyperbolic (attracting point) or parabolic (fixed point) in both
/// groups. Sorted by `x` with ∞ last; points closer than `tol.pt` are
/// merged, keeping the shortest (then least) word.
pub fn boundary_samples(
    iso: &MarkedIsomorphism,
    max_len: usize,
    tol: &Tolerances,
) -> Result<Vec<BoundarySample>, Error> {
    let classes = class_pairs(iso, max_len, tol)?;
    let mut raw: Vec<BoundarySample> = classes
        .into_iter()
        .map(|(word, cs, ct)| {
            let kind = match cs.kind() {
                IsometryKind::Parabolic => SampleKind::ParabolicFix,
                _ => SampleKind::AttractingHyp,
            };
            BoundarySample {
                word,
                x: cs.attracting().expect("hyperbolic or parabolic"),
                y: ct.attracting().expect("hyperbolic or parabolic"),
                kind,
            }
        })
        .collect();
    raw.sort_by(|a, b| {
        a.x.circle_cmp(&b.x)
            .then_with(|| shortlex(&a.word, &b.word))
    });
    let mut out: Vec<BoundarySample> = Vec::with_capacity(raw.len());
    for s in raw {
        match out.last_mut() {
            Some(last) if last.x.approx_eq(s.x, tol.pt) => {
                if shortlex(&s.word, &last.word).is_lt() {
                    *last = s;
                }
            }
            _ => out.push(s),
        }
    }
    Ok(out)
}

fn shortlex(a: &Word, b: &Word) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Classes of every non-trivial cyclic representative up to `max_len` that
/// is hyperbolic or parabolic on both sides.
fn class_pairs(
    iso: &MarkedIsomorphism,
    max_len: usize,
    tol: &Tolerances,
) -> Result<Vec<(Word, IsometryClass, IsometryClass)>, Error> {
    if max_len < 1 {
        return Err(Error::InvalidParameter("max_len must be at least 1".into()));
    }
    check_budget(iso.source().rank(), max_len, DEFAULT_BUDGET)?;
    let mut out = Vec::new();
    let mut failure = None;
    walk_pair(iso.source(), iso.target(), max_len, |word, is, it| {
        if failure.is_some() || word.is_empty() || !is_cyclic_rep(word) {
            return;
        }
        let classes = is
            .map
            .classify_with(tol)
            .and_then(|a| Ok((a, it.map.classify_with(tol)?)));
        match classes {
            Ok((cs, ct)) if cs.kind() != ct.kind() => {
                failure = Some(Error::TypeMismatch(
                    Word::new(word.iter().copied()).expect("reduced"),
                ))
            }
            Ok((cs, ct)) => {
                if matches!(
                    cs.kind(),
                    IsometryKind::Hyperbolic | IsometryKind::Parabolic
                ) {
                    out.push((Word::new(word.iter().copied()).expect("reduced"), cs, ct));
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// True when `y` is strictly increasing along the circle as `x` runs over
/// the sorted samples, allowing a single wrap-around through ∞.
pub fn is_orientation_preserving(samples: &[BoundarySample]) -> bool {
    let n = samples.len();
    if n < 2 {
        return true;
    }
    let mut descents = 0;
    for i in 0..n {
        let (a, b) = (samples[i].y, samples[(i + 1) % n].y);
        match a.circle_cmp(&b) {
            Ordering::Less => {}
            Ordering::Equal => return false,
            Ordering::Greater => descents += 1,
        }
    }
    descents <= 1
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderFit {
    pub alpha_est: f64,
    pub inv_alpha_est: f64,
    pub anchor: ExtendedReal,
    pub anchor_word: Word,
    pub window: f64,
    /// Least-squares slope of `log |Δy|` against `log |Δx|`.
    pub slope: f64,
    #[serde(rename = "constant_C")]
    pub constant_c: f64,
    pub residual: f64,
    pub samples_used: usize,
}

/// Local coordinate: `1/z` when the anchor side sits at ∞.
fn chart(z: ExtendedReal, flip: bool) -> Option<f64> {
    if flip {
        z.recip().finite()
    } else {
        z.finite()
    }
}

/// Fits `|φ(x) - φ(x0)| ≈ C |x - x0|^slope` on the samples with
/// `0 < |x - x0| <= window`. A map with local power `slope` is
/// bi-continuous exactly for exponents up to `min(slope, 1/slope)`, which
/// is `alpha_est`. `constant_C` is the smallest `C >= 1` for which both
/// sides of `|Δx|^{1/α} / C <= |Δy| <= C |Δx|^α` hold on the window.
///
/// At `x0 = ∞` the fit is of `φ(1/x)` at 0; when `φ(x0) = ∞` it is of
/// `1/φ(x)`.
pub fn holder_fit(
    samples: &[BoundarySample],
    anchor_index: usize,
    window: f64,
    tol: &Tolerances,
) -> Result<HolderFit, Error> {
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "window must be positive, got {window}"
        )));
    }
    let anchor = samples.get(anchor_index).ok_or_else(|| {
        Error::InvalidParameter(format!("anchor index {anchor_index} out of range"))
    })?;
    let (flip_x, flip_y) = (anchor.x.is_infinite(), anchor.y.is_infinite());
    let u0 = chart(anchor.x, flip_x).expect("charted anchor is finite");
    let v0 = chart(anchor.y, flip_y).expect("charted anchor is finite");

    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut near = 0usize;
    for (i, s) in samples.iter().enumerate() {
        if i == anchor_index {
            continue;
        }
        let (Some(u), Some(v)) = (chart(s.x, flip_x), chart(s.y, flip_y)) else {
            continue;
        };
        let (du, dv) = ((u - u0).abs(), (v - v0).abs());
        if du > window {
            continue;
        }
        near += 1;
        if du > tol.pt * u0.abs().max(1.0) && dv > 0.0 {
            pts.push((du, dv));
        }
    }
    if pts.is_empty() && near > 0 {
        return Err(Error::DegenerateWindow);
    }
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_FIT_SAMPLES,
            found: pts.len(),
        });
    }

    let logs: Vec<(f64, f64)> = pts.iter().map(|&(du, dv)| (du.ln(), dv.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateWindow);
    }
    let slope = sxy / sxx;
    if !(slope > 0.0) {
        return Err(Error::DegenerateWindow);
    }
    let intercept = my - slope * mx;
    let residual = (logs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let alpha = slope.min(1.0 / slope);
    let constant_c = pts.iter().fold(1.0f64, |c, &(du, dv)| {
        c.max(dv / du.powf(alpha)).max(du.powf(1.0 / alpha) / dv)
    });
    Ok(HolderFit {
        alpha_est: alpha,
        inv_alpha_est: 1.0 / alpha,
        anchor: anchor.x,
        anchor_word: anchor.word.clone(),
        window,
        slope,
        constant_c,
        residual,
        samples_used: pts.len(),
    })
}

/// `max(a, 1/a)` with `a = log λ(j(g)) / log λ(g)`: the local distortion
/// the boundary map must have at the attracting point of `g`.
pub fn local_exponent(
    iso: &MarkedIsomorphism,
    word: &Word,
    tol: &Tolerances,
) -> Result<f64, Error> {
    let (s, t) = iso.evaluate(word);
    match (s.classify_with(tol)?, t.classify_with(tol)?) {
        (
            IsometryClass::Hyperbolic { lambda: ls, .. },
            IsometryClass::Hyperbolic { lambda: lt, .. },
        ) => {
            let a = lt.ln() / ls.ln();
            Ok(a.max(1.0 / a))
        }
        _ => Err(Error::NotHyperbolic),
    }
}

/// Fits at up to `count` anchors, taken from the hyperbolic samples in
/// decreasing order of [`local_exponent`] and skipping anchors whose
/// window is too sparse. These are the points where the Hölder exponent
/// of the boundary map is worst.
pub fn extremal_fits(
    iso: &MarkedIsomorphism,
    samples: &[BoundarySample],
    count: usize,
    window: f64,
    tol: &Tolerances,
) -> Result<Vec<HolderFit>, Error> {
    let mut ranked: Vec<(f64, usize)> = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        if s.kind == SampleKind::AttractingHyp {
            ranked.push((local_exponent(iso, &s.word, tol)?, i));
        }
    }
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut fits = Vec::with_capacity(count);
    for (_, i) in ranked {
        if fits.len() == count {
            break;
        }
        match holder_fit(samples, i, window, tol) {
            Ok(fit) => fits.push(fit),
            Err(Error::InsufficientSamples { .. } | Error::DegenerateWindow) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(fits)
}

fn endpoints(g: &IsometryClass) -> Result<Vec<ExtendedReal>, Error> {
    match *g {
        IsometryClass::Hyperbolic {
            attracting,
            repelling,
            ..
        } => Ok(vec![attracting, repelling]),
        IsometryClass::Parabolic { fixed, .. } => Ok(vec![fixed]),
        IsometryClass::Elliptic { .. } => Err(Error::EllipticInput),
        IsometryClass::Identity => Err(Error::InvalidParameter("the identity has no axis".into())),
    }
}

/// `x` strictly inside the arc between `a` and `b` not containing ∞.
fn strictly_between(x: ExtendedReal, a: ExtendedReal, b: ExtendedReal) -> bool {
    let (lo, hi) = if a.circle_cmp(&b).is_le() {
        (a, b)
    } else {
        (b, a)
    };
    lo.circle_cmp(&x).is_lt() && x.circle_cmp(&hi).is_lt()
}

/// Whether the closed axes meet: hyperbolic axes that cross or share an
/// endpoint, a parabolic point at an axis endpoint, or equal parabolic
/// points. Endpoints within `tol.pt` count as shared.
pub fn axes_intersect(
    g1: &IsometryClass,
    g2: &IsometryClass,
    tol: &Tolerances,
) -> Result<bool, Error> {
    let (e1, e2) = (endpoints(g1)?, endpoints(g2)?);
    if e1
        .iter()
        .any(|p| e2.iter().any(|q| p.approx_eq(*q, tol.pt)))
    {
        return Ok(true);
    }
    if let ([a1, b1], [a2, b2]) = (e1.as_slice(), e2.as_slice()) {
        return Ok(strictly_between(*a2, *a1, *b1) != strictly_between(*b2, *a1, *b1));
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibilityViolation {
    pub first: Word,
    pub second: Word,
    pub source_intersect: bool,
    pub target_intersect: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompatibilityReport {
    pub classes: usize,
    pub pairs_checked: usize,
    pub truncated: bool,
    pub violations: Vec<CompatibilityViolation>,
}

impl CompatibilityReport {
    pub fn is_compatible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares axis intersections pairwise; `source` and `target` are
/// matched by position and must carry the same words.
pub fn compatibility_violations(
    source: &[(Word, IsometryClass)],
    target: &[(Word, IsometryClass)],
    pair_cap: usize,
    tol: &Tolerances,
) -> Result<CompatibilityReport, Error> {
    if source.len() != target.len() || source.iter().zip(target).any(|(a, b)| a.0 != b.0) {
        return Err(Error::InvalidParameter(
            "source and target classes must list the same words".into(),
        ));
    }
    let mut violations = Vec::new();
    let mut pairs = 0usize;
    let mut truncated = false;
    'outer: for i in 0..source.len() {
        for j in i + 1..source.len() {
            if pairs == pair_cap {
                truncated = true;
                break 'outer;
            }
            pairs += 1;
            let s = axes_intersect(&source[i].1, &source[j].1, tol)?;
            let t = axes_intersect(&target[i].1, &target[j].1, tol)?;
            if s != t {
                violations.push(CompatibilityViolation {
                    first: source[i].0.clone(),
                    second: source[j].0.clone(),
                    source_intersect: s,
                    target_intersect: t,
                });
            }
        }
    }
    Ok(CompatibilityReport {
        classes: source.len(),
        pairs_checked: pairs,
        truncated,
        violations,
    })
}

pub type Classes = Vec<(Word, IsometryClass)>;

/// The hyperbolic and parabolic classes of both groups for every cyclic
/// representative up to `max_len`, in matching order.
pub fn classes_up_to(
    iso: &MarkedIsomorphism,
    max_len: usize,
    tol: &Tolerances,
) -> Result<(Classes, Classes), Error> {
    Ok(class_pairs(iso, max_len, tol)?
        .into_iter()
        .map(|(w, cs, ct)| ((w.clone(), cs), (w, ct)))
        .unzip())
}

/// Axis-intersection agreement over all pairs of cyclic representatives up
/// to `max_len`, a necessary condition for a boundary map to exist.
pub fn check_compatibility(
    iso: &MarkedIsomorphism,
    max_len: usize,
    pair_cap: usize,
    tol: &Tolerances,
) -> Result<CompatibilityReport, Error> {
    let (source, target) = classes_up_to(iso, max_len, tol)?;
    compatibility_violations(&source, &target, pair_cap, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossRatioNorm {
    pub cr_norm_lb: f64,
    pub ls_norm_lb: f64,
    pub cr_tuples: usize,
    pub ls_tuples: usize,
    pub seed: u64,
}

/// `|log (φp, φq, φr, φs)| / |log (p, q, r, s)|`, or `None` when either
/// cross-ratio is degenerate or the denominator is below `tol.cr`.
fn tuple_ratio(src: [ExtendedReal; 4], img: [ExtendedReal; 4], tol: &Tolerances) -> Option<f64> {
    let den = cross_ratio_with(src[0], src[1], src[2], src[3], tol)
        .ok()?
        .abs()
        .ln()
        .abs();
    if !(den >= tol.cr) {
        return None;
    }
    let num = cross_ratio_with(img[0], img[1], img[2], img[3], tol)
        .ok()?
        .abs()
        .ln()
        .abs();
    num.is_finite().then_some(num / den)
}

/// Lower bounds for the cross-ratio norm and the length-spectrum norm of
/// the boundary map, both evaluated on sampled points only.
///
/// The length-spectrum tuples are `(g(s), s, N(g), P(g))` for each
/// hyperbolic sample `g` and a seeded random sample `s`; their images use
/// `φ(g(s)) = j(g)(φ(s))`. The cross-ratio pool is `n_tuples` seeded
/// counter-clockwise 4-tuples of sample points plus the length-spectrum
/// tuples, so `ls_norm_lb <= cr_norm_lb` holds by construction.
pub fn cross_ratio_norm(
    iso: &MarkedIsomorphism,
    samples: &[BoundarySample],
    n_tuples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<CrossRatioNorm, Error> {
    if samples.len() < 4 {
        return Err(Error::InsufficientSamples {
            needed: 4,
            found: samples.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ls_norm: Option<f64> = None;
    let mut ls_tuples = 0;
    for sample in samples
        .iter()
        .filter(|s| s.kind == SampleKind::AttractingHyp)
    {
        let (gs, gt) = iso.evaluate(&sample.word);
        let (
            IsometryClass::Hyperbolic {
                attracting: ps,
                repelling: ns,
                ..
            },
            IsometryClass::Hyperbolic {
                attracting: pt,
                repelling: nt,
                ..
            },
        ) = (gs.classify_with(tol)?, gt.classify_with(tol)?)
        else {
            return Err(Error::TypeMismatch(sample.word.clone()));
        };
        let other = &samples[rng.random_range(0..samples.len())];
        if other.x.approx_eq(ps, tol.pt) || other.x.approx_eq(ns, tol.pt) {
            continue;
        }
        let src = [gs.apply(other.x), other.x, ns, ps];
        let img = [gt.apply(other.y), other.y, nt, pt];
        if let Some(r) = tuple_ratio(src, img, tol) {
            ls_tuples += 1;
            ls_norm = Some(ls_norm.map_or(r, |m: f64| m.max(r)));
        }
    }
    let mut cr_norm = ls_norm;
    let mut cr_tuples = ls_tuples;
    for _ in 0..n_tuples {
        let mut idx = index::sample(&mut rng, samples.len(), 4).into_vec();
        idx.sort_unstable();
        let src = idx.iter().map(|&i| samples[i].x).collect::<Vec<_>>();
        let img = idx.iter().map(|&i| samples[i].y).collect::<Vec<_>>();
        if let Some(r) = tuple_ratio(
            [src[0], src[1], src[2], src[3]],
            [img[0], img[1], img[2], img[3]],
            tol,
        ) {
            cr_tuples += 1;
            cr_norm = Some(cr_norm.map_or(r, |m: f64| m.max(r)));
        }
    }
    let (Some(cr_norm_lb), Some(ls_norm_lb)) = (cr_norm, ls_norm) else {
        return Err(Error::InsufficientSamples {
            needed: 4,
            found: samples.len(),
        });
    };
    Ok(CrossRatioNorm {
        cr_norm_lb,
        ls_norm_lb,
        cr_tuples,
        ls_tuples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marked_group::{punctured_torus, thrice_punctured_sphere, TorusRoot};
    use crate::moebius::MoebiusMap;
    use ExtendedReal::{Finite, Infinity};

    fn torus_pair() -> MarkedIsomorphism {
        let tol = Tolerances::default();
        MarkedIsomorphism::new(
            punctured_torus(3.0, 3.0, TorusRoot::Plus).unwrap(),
            punctured_torus(4.0, 3.0, TorusRoot::Plus).unwrap(),
            &tol,
        )
        .unwrap()
    }

    fn hyp(a: ExtendedReal, r: ExtendedReal) -> IsometryClass {
        IsometryClass::Hyperbolic {
            lambda: 4.0,
            attracting: a,
            repelling: r,
        }
    }

    fn para(p: ExtendedReal) -> IsometryClass {
        IsometryClass::Parabolic {
            fixed: p,
            omega: 1.0,
        }
    }

    #[test]
    fn axes_examples() {
        let tol = Tolerances::default();
        let t = |a, b| axes_intersect(&a, &b, &tol).unwrap();
        assert!(t(
            hyp(Finite(0.0), Infinity),
            hyp(Finite(-1.0), Finite(1.0))
        ));
        assert!(!t(
            hyp(Finite(0.0), Finite(1.0)),
            hyp(Finite(2.0), Finite(3.0))
        ));
        assert!(!t(hyp(Finite(0.0), Infinity), para(Finite(5.0))));
        assert!(t(hyp(Finite(0.0), Infinity), para(Finite(0.0))));
        assert!(t(para(Infinity), para(Infinity)));
        assert!(!t(para(Finite(1.0)), para(Infinity)));
        // Nested axes do not cross.
        assert!(!t(
            hyp(Finite(-3.0), Finite(3.0)),
            hyp(Finite(-1.0), Finite(1.0))
        ));
        assert_eq!(
            axes_intersect(
                &IsometryClass::Elliptic { trace: 1.0 },
                &para(Infinity),
                &tol
            ),
            Err(Error::EllipticInput)
        );
    }

    #[test]
    fn identity_samples_and_fits() {
        let tol = Tolerances::default();
        for g in [
            thrice_punctured_sphere(),
            punctured_torus(3.0, 3.0, TorusRoot::Plus).unwrap(),
        ] {
            let iso = MarkedIsomorphism::identity(g);
            let samples = boundary_samples(&iso, 6, &tol).unwrap();
            assert!(samples.iter().all(|s| s.x == s.y));
            assert!(is_orientation_preserving(&samples));
            let fits = extremal_fits(&iso, &samples, 5, 0.5, &tol).unwrap();
            assert!(!fits.is_empty());
            for f in fits {
                assert_eq!((f.alpha_est, f.constant_c), (1.0, 1.0));
            }
            let norm = cross_ratio_norm(&iso, &samples, 200, 7, &tol).unwrap();
            assert_eq!(norm.ls_norm_lb, 1.0);
            assert_eq!(norm.cr_norm_lb, 1.0);
        }
    }

    #[test]
    fn synthetic_square_root() {
        let tol = Tolerances::default();
        let samples: Vec<BoundarySample> = (0..40)
            .map(|k| {
                let x = if k == 0 { 0.0 } else { 2f64.powi(-k) };
                BoundarySample {
                    word: Word::identity(),
                    x: Finite(x),
                    y: Finite(x.sqrt()),
                    kind: SampleKind::AttractingHyp,
                }
            })
            .rev()
            .collect();
        let anchor = samples.iter().position(|s| s.x == Finite(0.0)).unwrap();
        let fit = holder_fit(&samples, anchor, 1.0, &tol).unwrap();
        assert!((fit.alpha_est - 0.5).abs() < 0.02, "{fit:?}");
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!(matches!(
            holder_fit(&samples, anchor, 1e-300, &tol),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn torus_samples_are_monotone_and_compatible() {
        let tol = Tolerances::default();
        let iso = torus_pair();
        let samples = boundary_samples(&iso, 8, &tol).unwrap();
        assert!(samples.len() >= 100, "{}", samples.len());
        assert!(is_orientation_preserving(&samples));
        let report = check_compatibility(&iso, 6, DEFAULT_PAIR_CAP, &tol).unwrap();
        assert!(
            report.is_compatible(),
            "{:?}",
            &report.violations[..report.violations.len().min(3)]
        );
        assert!(report.pairs_checked > 1000);
    }

    #[test]
    fn tampered_target_is_detected() {
        let tol = Tolerances::default();
        let iso = torus_pair();
        let (source, mut target) = classes_up_to(&iso, 4, &tol).unwrap();
        // Move one generator's attracting point across the circle.
        let k = target.iter().position(|(w, _)| w.len() == 1).unwrap();
        if let IsometryClass::Hyperbolic { attracting, .. } = &mut target[k].1 {
            *attracting = Finite(attracting.finite().unwrap() + 100.0);
        }
        let report = compatibility_violations(&source, &target, DEFAULT_PAIR_CAP, &tol).unwrap();
        assert!(!report.is_compatible());
    }

    #[test]
    fn norm_is_seeded() {
        let tol = Tolerances::default();
        let iso = torus_pair();
        let samples = boundary_samples(&iso, 6, &tol).unwrap();
        let a = cross_ratio_norm(&iso, &samples, 500, 11, &tol).unwrap();
        let b = cross_ratio_norm(&iso, &samples, 500, 11, &tol).unwrap();
        assert_eq!(a, b);
        assert!(a.ls_norm_lb <= a.cr_norm_lb + 1e-9);
        assert!(a.ls_norm_lb > 1.0);
        assert!(cross_ratio_norm(&iso, &samples[..3], 10, 1, &tol).is_err());
    }

    #[test]
    fn axes_conjugation_invariance() {
        let tol = Tolerances::default();
        let h = MoebiusMap::new(2.0, 1.0, 3.0, 2.0).unwrap();
        let g1 = MoebiusMap::new(3.0, 1.0, 2.0, 1.0).unwrap();
        let g2 = MoebiusMap::new(1.0, 2.0, 1.0, 3.0).unwrap();
        let c = |g: &MoebiusMap| g.classify().unwrap();
        let before = axes_intersect(&c(&g1), &c(&g2), &tol).unwrap();
        let after = axes_intersect(&c(&g1.conjugate(&h)), &c(&g2.conjugate(&h)), &tol).unwrap();
        assert_eq!(before, after);
        assert_eq!(before, axes_intersect(&c(&g2), &c(&g1), &tol).unwrap());
    }
}
