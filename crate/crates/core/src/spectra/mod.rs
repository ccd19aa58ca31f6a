//! Exponent estimators and distances.
//!
//! `delta_l` is the sup of `log λ(j(g)) / log λ(g)` over hyperbolic words,
//! `rho_l` the sup of `log |ω(j(g))| / log |ω(g)|` over parabolic elements
//! with `|ω(g)| > 1`. Both sups run over a finite set of words, so both are
//! lower bounds that can only grow with the cutoff. Thurston's distance is
//! their logarithm; the length-spectrum distance takes the larger direction.

pub mod verify;

use serde::{Deserialize, Serialize};

use crate::marked_group::{
    check_budget, is_cyclic_rep, walk_pair, EnumerationMode, Image, MarkedGroup, MarkedIsomorphism,
    Word, DEFAULT_BUDGET,
};
use crate::moebius::{
    cusp_conjugate_fixes_infinity, multiplier_from_trace, IsometryClass, IsometryKind, MoebiusMap,
};
use crate::tol::Tolerances;
use crate::Error;

pub const DEFAULT_MAX_LEN: usize = 10;
pub const DEFAULT_DEPTH: u32 = 12;

/// Most constraint violations kept in a report; the total is always counted.
const MAX_REPORTED_VIOLATIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub max_len: usize,
    /// Largest power `n` in the conjugates `gⁿ ∘ g0 ∘ g⁻ⁿ`.
    pub depth: u32,
    /// Word set for the multiplier sup; the translation-vector sup always
    /// uses every word because ω is not a conjugacy invariant.
    pub mode: EnumerationMode,
    pub budget: u64,
    pub tol: Tolerances,
}

impl SearchOptions {
    pub fn new(max_len: usize) -> Self {
        SearchOptions {
            max_len,
            depth: DEFAULT_DEPTH,
            mode: EnumerationMode::CyclicReps,
            budget: DEFAULT_BUDGET,
            tol: Tolerances::default(),
        }
    }

    pub fn with_depth(mut self, depth: u32) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_mode(mut self, mode: EnumerationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_tol(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn check(&self) -> Result<(), Error> {
        if self.max_len < 1 {
            return Err(Error::InvalidParameter("max_len must be at least 1".into()));
        }
        if self.depth < 1 {
            return Err(Error::InvalidParameter("depth must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self::new(DEFAULT_MAX_LEN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentKind {
    Delta,
    Rho,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub cutoff: usize,
    pub value: f64,
    pub witness: Word,
}

/// A parabolic element with `|ω(g)| < 1`. For it the inequality
/// `|ω(j(g))| <= |ω(g)|^a` bounds `a` from above by `bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperConstraint {
    pub word: Word,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub kind: ExponentKind,
    /// `max(1, sup of ratios)` over the words seen.
    pub value: f64,
    /// Lexicographically least word attaining the sup of ratios.
    pub witness: Word,
    pub cutoff: usize,
    /// Running value after each word length `1..=cutoff`.
    pub trace: Vec<TracePoint>,
    /// Number of elements that entered the sup.
    pub samples: usize,
    /// Upper-bound constraints from `|ω| < 1` elements: how many were seen,
    /// the tightest one, and those violated by `value`.
    pub upper_constraint_count: usize,
    pub tightest_upper_bound: Option<f64>,
    pub violated_upper_bound_count: usize,
    pub violations: Vec<UpperConstraint>,
}

impl ExponentEstimate {
    pub fn log_value(&self) -> f64 {
        self.value.ln()
    }
}

/// Running sup with deterministic tie-break on the word.
#[derive(Debug, Clone, Default)]
struct Best {
    ratio: f64,
    word: Option<Word>,
}

impl Best {
    fn offer(&mut self, ratio: f64, word: impl FnOnce() -> Word) {
        match &self.word {
            None => {
                self.ratio = ratio;
                self.word = Some(word());
            }
            Some(current) => {
                if ratio > self.ratio {
                    self.ratio = ratio;
                    self.word = Some(word());
                } else if ratio == self.ratio {
                    let w = word();
                    if &w < current {
                        self.word = Some(w);
                    }
                }
            }
        }
    }

    fn merge(&mut self, other: &Best) {
        if let Some(w) = &other.word {
            self.offer(other.ratio, || w.clone());
        }
    }
}

/// Per-length sups, folded into a cumulative trace.
struct LengthBests {
    by_len: Vec<Best>,
    samples: usize,
}

impl LengthBests {
    fn new(max_len: usize) -> Self {
        LengthBests {
            by_len: vec![Best::default(); max_len + 1],
            samples: 0,
        }
    }

    fn offer(&mut self, len: usize, ratio: f64, word: impl FnOnce() -> Word) {
        self.samples += 1;
        self.by_len[len].offer(ratio, word);
    }

    fn finish(self, kind: ExponentKind, max_len: usize) -> Option<ExponentEstimate> {
        let mut running = Best::default();
        let mut trace = Vec::with_capacity(max_len);
        for (len, best) in self.by_len.iter().enumerate() {
            running.merge(best);
            if len >= 1 {
                trace.push(TracePoint {
                    cutoff: len,
                    value: running.ratio.max(1.0),
                    witness: running.word.clone().unwrap_or_default(),
                });
            }
        }
        let witness = running.word?;
        Some(ExponentEstimate {
            kind,
            value: running.ratio.max(1.0),
            witness,
            cutoff: max_len,
            trace,
            samples: self.samples,
            upper_constraint_count: 0,
            tightest_upper_bound: None,
            violated_upper_bound_count: 0,
            violations: Vec::new(),
        })
    }
}

fn log_ratio(target: f64, source: f64) -> f64 {
    target.ln() / source.ln()
}

/// Sup of `log λ(j(g)) / log λ(g)` over words hyperbolic in both groups.
pub fn delta_l(iso: &MarkedIsomorphism, opts: &SearchOptions) -> Result<ExponentEstimate, Error> {
    opts.check()?;
    let (src, tgt) = (iso.source(), iso.target());
    check_budget(src.rank(), opts.max_len, opts.budget)?;
    let tol = &opts.tol;
    let mut bests = LengthBests::new(opts.max_len);
    let mut failure: Option<Error> = None;
    walk_pair(src, tgt, opts.max_len, |word, is, it| {
        if failure.is_some() || word.is_empty() {
            return;
        }
        if opts.mode == EnumerationMode::CyclicReps && !is_cyclic_rep(word) {
            return;
        }
        match classify_pair(word, is, it, tol) {
            Ok(Some((ls, lt))) => bests.offer(word.len(), log_ratio(lt, ls), || {
                Word::from_reduced(word.to_vec())
            }),
            Ok(None) => {}
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    bests
        .finish(ExponentKind::Delta, opts.max_len)
        .ok_or(Error::NoHyperbolicFound(opts.max_len))
}

/// Multipliers when both images are hyperbolic, `None` when both are not,
/// `TypeMismatch` when the types differ. Multipliers come from the
/// extended-precision traces.
fn classify_pair(
    word: &[i32],
    is: &Image,
    it: &Image,
    tol: &Tolerances,
) -> Result<Option<(f64, f64)>, Error> {
    let cs = is.map.classify_with(tol)?;
    let ct = it.map.classify_with(tol)?;
    match (cs, ct) {
        (IsometryClass::Hyperbolic { .. }, IsometryClass::Hyperbolic { .. }) => Ok(Some((
            multiplier_from_trace(is.trace),
            multiplier_from_trace(it.trace),
        ))),
        (a, b) if a.kind() != b.kind() => {
            Err(Error::TypeMismatch(Word::from_reduced(word.to_vec())))
        }
        _ => Ok(None),
    }
}

/// `log |ω(h ∘ g0 ∘ h⁻¹)|`, which is `2 log |c|`, or `2 log |a|` when the
/// conjugate fixes ∞. Taking logs of the entries avoids overflow of `c²`.
fn log_cusp_conjugate_omega(h: &MoebiusMap, tol: &Tolerances) -> f64 {
    if cusp_conjugate_fixes_infinity(h, tol) {
        2.0 * h.a().abs().ln()
    } else {
        2.0 * h.c().abs().ln()
    }
}

struct RhoAccumulator<'a> {
    bests: LengthBests,
    band: f64,
    constraints: Vec<(Word, f64)>,
    tight: Option<f64>,
    _tol: &'a Tolerances,
}

impl RhoAccumulator<'_> {
    /// Routes one parabolic element by `log |ω|` on each side.
    fn take(&mut self, len: usize, log_src: f64, log_tgt: f64, word: impl FnOnce() -> Word) {
        // | |ω| - 1 | <= band  ⇔  |log |ω|| <= ln(1 + band) to first order.
        if log_src.abs() <= self.band {
            return;
        }
        let ratio = log_tgt / log_src;
        if log_src > 0.0 {
            self.bests.offer(len, ratio, word);
        } else {
            self.tight = Some(self.tight.map_or(ratio, |t: f64| t.min(ratio)));
            self.constraints.push((word(), ratio));
        }
    }
}

/// Sup of `log |ω(j(g))| / log |ω(g)|` over parabolic elements with
/// `|ω(g)| > 1`, drawn from two families:
///
/// * `w · p · w⁻¹` for every word `w` up to the cutoff and every
///   peripheral `p`;
/// * `wⁿ · p₀ · w⁻ⁿ` for every cyclic representative `w` hyperbolic in
///   both groups and `n <= depth`, where `p₀ ↦ g0`.
///
/// Elements with `|ω(g)| < 1` flip the defining inequality into an upper
/// bound on the exponent; they are reported, not folded into the sup.
pub fn rho_l(iso: &MarkedIsomorphism, opts: &SearchOptions) -> Result<ExponentEstimate, Error> {
    opts.check()?;
    let (src, tgt) = (iso.source(), iso.target());
    check_budget(src.rank(), opts.max_len, opts.budget)?;
    let tol = &opts.tol;
    let peripherals: Vec<(Word, MoebiusMap, MoebiusMap)> = src
        .peripherals()
        .iter()
        .map(|p| (p.clone(), src.evaluate(p), tgt.evaluate(p)))
        .collect();
    let first = peripherals[0].0.clone();

    let mut acc = RhoAccumulator {
        bests: LengthBests::new(opts.max_len),
        band: opts.tol.omega_band.ln_1p(),
        constraints: Vec::new(),
        tight: None,
        _tol: tol,
    };
    let mut failure: Option<Error> = None;
    walk_pair(src, tgt, opts.max_len, |word, is, it| {
        if failure.is_some() {
            return;
        }
        let (ms, mt) = (&is.map, &it.map);
        let len = word.len();
        let as_word = || Word::from_reduced(word.to_vec());
        for (k, (p, ps, pt)) in peripherals.iter().enumerate() {
            let conj = || as_word().conjugate_by(p);
            if k == 0 {
                acc.take(
                    len,
                    log_cusp_conjugate_omega(ms, tol),
                    log_cusp_conjugate_omega(mt, tol),
                    conj,
                );
            } else {
                let qs = ms.compose(ps).compose(&ms.inverse());
                let qt = mt.compose(pt).compose(&mt.inverse());
                match (
                    qs.translation_vector_with(tol),
                    qt.translation_vector_with(tol),
                ) {
                    (Ok(ws), Ok(wt)) => acc.take(len, ws.abs().ln(), wt.abs().ln(), conj),
                    (Err(e), _) | (_, Err(e)) => {
                        failure = Some(e);
                        return;
                    }
                }
            }
        }

        if len == 0 || !is_cyclic_rep(word) {
            return;
        }
        match classify_pair(word, is, it, tol) {
            Ok(Some(_)) => {}
            Ok(None) => return,
            Err(e) => {
                failure = Some(e);
                return;
            }
        }
        let (mut hs, mut ht) = (*ms, *mt);
        for n in 1..=opts.depth {
            if n > 1 {
                hs = hs.compose(ms);
                ht = ht.compose(mt);
            }
            let (ls, lt) = (
                log_cusp_conjugate_omega(&hs, tol),
                log_cusp_conjugate_omega(&ht, tol),
            );
            if !(ls.is_finite() && lt.is_finite()) {
                break;
            }
            acc.take(len, ls, lt, || as_word().pow(n as i64).conjugate_by(&first));
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }

    let RhoAccumulator {
        bests,
        constraints,
        tight,
        ..
    } = acc;
    let mut est = bests
        .finish(ExponentKind::Rho, opts.max_len)
        .ok_or(Error::NoParabolicAboveOne)?;
    est.upper_constraint_count = constraints.len();
    est.tightest_upper_bound = tight;
    let mut violated: Vec<UpperConstraint> = constraints
        .into_iter()
        .filter(|(_, bound)| *bound < est.value)
        .map(|(word, bound)| UpperConstraint { word, bound })
        .collect();
    violated.sort_by(|a, b| {
        a.bound
            .total_cmp(&b.bound)
            .then_with(|| a.word.cmp(&b.word))
    });
    est.violated_upper_bound_count = violated.len();
    violated.truncate(MAX_REPORTED_VIOLATIONS);
    est.violations = violated;
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Delta,
    Rho,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionEstimates {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<ExponentEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<ExponentEstimate>,
}

impl DirectionEstimates {
    /// The exponent used for the distance: `delta` unless only `rho` ran.
    fn primary(&self) -> &ExponentEstimate {
        self.delta
            .as_ref()
            .or(self.rho.as_ref())
            .expect("at least one estimator ran")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    #[serde(rename = "d_L_forward")]
    pub d_l_forward: f64,
    #[serde(rename = "d_L_backward")]
    pub d_l_backward: f64,
    pub d_ls: f64,
    pub method: Method,
    pub cutoff: usize,
    pub depth: u32,
    /// `|log δ̂ - log ρ̂|` in the forward direction when both ran.
    pub gap: Option<f64>,
    pub forward: DirectionEstimates,
    pub backward: DirectionEstimates,
}

fn estimate_direction(
    iso: &MarkedIsomorphism,
    method: Method,
    opts: &SearchOptions,
) -> Result<DirectionEstimates, Error> {
    let delta = match method {
        Method::Delta | Method::Both => Some(delta_l(iso, opts)?),
        Method::Rho => None,
    };
    let rho = match method {
        Method::Rho | Method::Both => Some(rho_l(iso, opts)?),
        Method::Delta => None,
    };
    Ok(DirectionEstimates { delta, rho })
}

/// Thurston distances in both directions and the length-spectrum distance.
pub fn distance(
    x: &MarkedGroup,
    y: &MarkedGroup,
    method: Method,
    opts: &SearchOptions,
) -> Result<DistanceReport, Error> {
    let iso = MarkedIsomorphism::new(x.clone(), y.clone(), &opts.tol)?;
    distance_for(&iso, method, opts)
}

pub fn distance_for(
    iso: &MarkedIsomorphism,
    method: Method,
    opts: &SearchOptions,
) -> Result<DistanceReport, Error> {
    let forward = estimate_direction(iso, method, opts)?;
    let backward = estimate_direction(&iso.inverse(), method, opts)?;
    let d_l_forward = forward.primary().log_value();
    let d_l_backward = backward.primary().log_value();
    let gap = match (&forward.delta, &forward.rho) {
        (Some(d), Some(r)) => Some((d.log_value() - r.log_value()).abs()),
        _ => None,
    };
    Ok(DistanceReport {
        d_l_forward,
        d_l_backward,
        d_ls: d_l_forward.max(d_l_backward),
        method,
        cutoff: opts.max_len,
        depth: opts.depth,
        gap,
        forward,
        backward,
    })
}

/// Types of each word's images, used to reject non-type-preserving pairs
/// early without running an estimator.
pub fn type_profile(
    iso: &MarkedIsomorphism,
    max_len: usize,
    tol: &Tolerances,
) -> Result<Vec<(Word, IsometryKind, IsometryKind)>, Error> {
    let mut out = Vec::new();
    let mut failure = None;
    walk_pair(iso.source(), iso.target(), max_len, |word, is, it| {
        if failure.is_some() || !is_cyclic_rep(word) {
            return;
        }
        match (is.map.classify_with(tol), it.map.classify_with(tol)) {
            (Ok(a), Ok(b)) => out.push((Word::from_reduced(word.to_vec()), a.kind(), b.kind())),
            (Err(e), _) | (_, Err(e)) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => {
            out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marked_group::{punctured_torus, thrice_punctured_sphere, TorusRoot};

    fn torus_pair() -> MarkedIsomorphism {
        let tol = Tolerances::default();
        MarkedIsomorphism::new(
            punctured_torus(3.0, 3.0, TorusRoot::Plus).unwrap(),
            punctured_torus(4.0, 3.0, TorusRoot::Plus).unwrap(),
            &tol,
        )
        .unwrap()
    }

    #[test]
    fn identity_gives_one() {
        for g in [
            thrice_punctured_sphere(),
            punctured_torus(3.0, 4.0, TorusRoot::Minus).unwrap(),
        ] {
            let iso = MarkedIsomorphism::identity(g);
            let opts = SearchOptions::new(6).with_depth(6);
            assert_eq!(delta_l(&iso, &opts).unwrap().value, 1.0);
            let rho = rho_l(&iso, &opts).unwrap();
            assert_eq!(rho.value, 1.0);
            assert_eq!(rho.violated_upper_bound_count, 0);
        }
    }

    #[test]
    fn trace_is_monotone_and_ends_at_value() {
        let iso = torus_pair();
        let opts = SearchOptions::new(7).with_depth(8);
        for est in [delta_l(&iso, &opts).unwrap(), rho_l(&iso, &opts).unwrap()] {
            assert_eq!(est.trace.len(), 7);
            for w in est.trace.windows(2) {
                assert!(w[1].value >= w[0].value);
            }
            let last = est.trace.last().unwrap();
            assert_eq!(last.value, est.value);
            assert_eq!(last.witness, est.witness);
            assert!(est.value > 1.0);
        }
    }

    #[test]
    fn delta_witness_reproduces_value() {
        let iso = torus_pair();
        let est = delta_l(&iso, &SearchOptions::new(6)).unwrap();
        let (s, t) = iso.evaluate(&est.witness);
        let ratio = t.classify().unwrap().lambda().ln() / s.classify().unwrap().lambda().ln();
        assert!((ratio - est.value).abs() < 1e-12);
    }

    #[test]
    fn rho_never_exceeds_delta_by_much() {
        // Every translation-vector ratio is bounded by the true exponent; at
        // a finite cutoff the multiplier sup may still be below it, so only
        // sanity-check the ordering with the larger cutoff.
        let iso = torus_pair();
        let rho = rho_l(&iso, &SearchOptions::new(5).with_depth(12)).unwrap();
        let delta = delta_l(&iso, &SearchOptions::new(10)).unwrap();
        assert!(
            rho.value <= delta.value * (1.0 + 1e-3),
            "{} vs {}",
            rho.value,
            delta.value
        );
    }

    #[test]
    fn type_mismatch_is_reported() {
        // Same rank and peripheral, but the thrice-punctured sphere has
        // parabolic generators where the torus has hyperbolic ones.
        let tol = Tolerances::default();
        let tps = thrice_punctured_sphere();
        let torus = punctured_torus(3.0, 3.0, TorusRoot::Plus).unwrap();
        let fake = MarkedGroup::new(
            "fake",
            tps.generators().to_vec(),
            torus.peripherals().to_vec(),
            &tol,
        );
        // [A,B] is hyperbolic in the sphere group, so it cannot even be built.
        assert!(fake.is_err());
        let tps_as_torus = MarkedGroup::new(
            "tps-with-commutator",
            tps.generators().to_vec(),
            vec![Word::new([1]).unwrap()],
            &tol,
        )
        .unwrap();
        let torus_gen_first = MarkedGroup::new(
            "torus-gen",
            vec![MoebiusMap::G0, torus.generators()[1]],
            vec![Word::new([1]).unwrap()],
            &tol,
        )
        .unwrap();
        let iso = MarkedIsomorphism::new(tps_as_torus, torus_gen_first, &tol).unwrap();
        assert!(matches!(
            delta_l(&iso, &SearchOptions::new(3)),
            Err(Error::TypeMismatch(_))
        ));
    }

    #[test]
    fn errors_on_small_cutoff_and_budget() {
        let iso = MarkedIsomorphism::identity(thrice_punctured_sphere());
        assert!(matches!(
            delta_l(&iso, &SearchOptions::new(1)),
            Err(Error::NoHyperbolicFound(1))
        ));
        assert!(matches!(
            delta_l(&iso, &SearchOptions::new(12).with_budget(1000)),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(delta_l(&iso, &SearchOptions::new(0)).is_err());
        assert!(rho_l(&iso, &SearchOptions::new(3).with_depth(0)).is_err());
    }

    #[test]
    fn distance_identities() {
        let g = punctured_torus(3.0, 3.5, TorusRoot::Plus).unwrap();
        let r = distance(&g, &g, Method::Both, &SearchOptions::new(5).with_depth(5)).unwrap();
        assert_eq!((r.d_l_forward, r.d_l_backward, r.d_ls), (0.0, 0.0, 0.0));
        assert_eq!(r.gap, Some(0.0));
        let tps = thrice_punctured_sphere();
        let r = distance(&tps, &tps, Method::Rho, &SearchOptions::new(5)).unwrap();
        assert_eq!(r.d_ls, 0.0);
        assert_eq!(r.gap, None);
    }
}
