//! Real Möbius transformations acting on the upper half-plane and its
//! boundary circle `R ∪ {∞}`.
//!
//! A [`MoebiusMap`] is an element of `PSL(2, R)`: a unimodular real matrix
//! modulo sign. We always store the representative with non-negative trace
//! (ties at trace zero broken by `c > 0`, then `b > 0`), so that `tr(g) >= 0`
//! is well defined and parabolic elements carry trace `+2`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::tol::{Tolerances, ROUNDING_BAND};
use crate::Error;

/// A point of the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::Infinity)
    }

    /// Equality up to `tol`, scaled by the magnitude of the larger point.
    pub fn approx_eq(self, other: ExtendedReal, tol: f64) -> bool {
        match (self, other) {
            (ExtendedReal::Infinity, ExtendedReal::Infinity) => true,
            (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => {
                (x - y).abs() <= tol * 1f64.max(x.abs()).max(y.abs())
            }
            _ => false,
        }
    }

    /// Order along the circle cut open at ∞, with ∞ placed last.
    pub fn circle_cmp(&self, other: &ExtendedReal) -> Ordering {
        match (self, other) {
            (ExtendedReal::Infinity, ExtendedReal::Infinity) => Ordering::Equal,
            (ExtendedReal::Infinity, _) => Ordering::Greater,
            (_, ExtendedReal::Infinity) => Ordering::Less,
            (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => x.total_cmp(y),
        }
    }

    /// `1/x` with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(self) -> ExtendedReal {
        match self {
            ExtendedReal::Infinity => ExtendedReal::Finite(0.0),
            ExtendedReal::Finite(0.0) => ExtendedReal::Infinity,
            ExtendedReal::Finite(x) => ExtendedReal::Finite(1.0 / x),
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        if x.is_infinite() {
            ExtendedReal::Infinity
        } else {
            ExtendedReal::Finite(x)
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::Infinity => f.write_str("inf"),
        }
    }
}

// Finite points serialize as JSON numbers, ∞ as the string "inf".
impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(x) => s.serialize_f64(*x),
            ExtendedReal::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(ExtendedReal::Finite(x)),
            Repr::Str(s) if s == "inf" => Ok(ExtendedReal::Infinity),
            Repr::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// `z ↦ (az + b) / (cz + d)` with `ad - bc = 1` and canonical sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoebiusMap {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// `g0: z ↦ z + 1`.
    pub const G0: MoebiusMap = MoebiusMap {
        a: 1.0,
        b: 1.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds a map from any real matrix with positive determinant, scaling
    /// it to determinant 1 and choosing the canonical sign.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, Error> {
        let det = a * d - b * c;
        if !(det.is_finite() && det > 0.0) || ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::BadDeterminant(det));
        }
        let s = det.sqrt();
        Ok(Self::canonical(a / s, b / s, c / s, d / s))
    }

    pub fn from_rows(m: [[f64; 2]; 2]) -> Result<Self, Error> {
        Self::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    /// Entries already known to be unimodular to working precision.
    pub(crate) fn from_unimodular(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::canonical(a, b, c, d)
    }

    /// Assumes the determinant is already 1.
    fn canonical(a: f64, b: f64, c: f64, d: f64) -> Self {
        let tr = a + d;
        let flip = tr < 0.0 || (tr == 0.0 && (c < 0.0 || (c == 0.0 && b < 0.0)));
        let m = if flip {
            MoebiusMap {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            MoebiusMap { a, b, c, d }
        };
        // Avoid negative zeros so that equal maps compare and print equal.
        MoebiusMap {
            a: m.a + 0.0,
            b: m.b + 0.0,
            c: m.c + 0.0,
            d: m.d + 0.0,
        }
    }

    /// Rescales to determinant 1 only when the product has drifted beyond
    /// what rounding of its own entries explains. For large entries the
    /// computed determinant is dominated by inherited rounding (it is a
    /// difference of two huge products), so it is left alone.
    fn renormalized(a: f64, b: f64, c: f64, d: f64) -> Self {
        const MEASURABLE: f64 = 1e3;
        let ad = a * d;
        let bc = b * c;
        let det = ad - bc;
        let size = ad.abs() + bc.abs();
        let rounding = 8.0 * f64::EPSILON * size;
        if size <= MEASURABLE && (det - 1.0).abs() > rounding.max(f64::EPSILON) && det > 0.0 {
            let s = det.sqrt();
            Self::canonical(a / s, b / s, c / s, d / s)
        } else {
            Self::canonical(a, b, c, d)
        }
    }

    pub fn translation(b: f64) -> Self {
        MoebiusMap {
            a: 1.0,
            b,
            c: 0.0,
            d: 1.0,
        }
    }

    /// `z ↦ k z` for `k > 0`.
    pub fn scaling(k: f64) -> Result<Self, Error> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scale factor {k} must be positive"
            )));
        }
        let s = k.sqrt();
        Ok(MoebiusMap {
            a: s,
            b: 0.0,
            c: 0.0,
            d: 1.0 / s,
        })
    }

    /// The parabolic map with fixed point `fixed` and translation vector
    /// `omega`: `z ↦ z + omega` at ∞, otherwise the map determined by
    /// `1/(g(z) - P) = 1/(z - P) + omega`.
    pub fn parabolic(omega: f64, fixed: ExtendedReal) -> Result<Self, Error> {
        if !(omega.is_finite() && omega != 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega {omega} must be finite and non-zero"
            )));
        }
        match fixed {
            ExtendedReal::Infinity => Ok(Self::translation(omega)),
            ExtendedReal::Finite(p) => {
                Self::new(1.0 + omega * p, -omega * p * p, omega, 1.0 - omega * p)
            }
        }
    }

    /// The hyperbolic map with multiplier `lambda > 1`, attracting fixed
    /// point `attracting` and repelling fixed point `repelling`.
    pub fn hyperbolic(
        lambda: f64,
        attracting: ExtendedReal,
        repelling: ExtendedReal,
    ) -> Result<Self, Error> {
        if !(lambda.is_finite() && lambda > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "multiplier {lambda} must exceed 1"
            )));
        }
        if attracting.approx_eq(repelling, 0.0) {
            return Err(Error::InvalidParameter("fixed points must differ".into()));
        }
        let normal = Self::scaling(lambda)?;
        // `t` sends ∞ to the attracting point and 0 to the repelling one.
        let t = match (attracting, repelling) {
            (ExtendedReal::Infinity, ExtendedReal::Finite(n)) => Self::translation(n),
            (ExtendedReal::Finite(p), ExtendedReal::Infinity) => {
                let t = Self::translation(p);
                return Ok(t
                    .compose(&Self::scaling(1.0 / lambda)?)
                    .compose(&t.inverse()));
            }
            (ExtendedReal::Finite(p), ExtendedReal::Finite(n)) => {
                if p > n {
                    Self::new(p, n, 1.0, 1.0)?
                } else {
                    Self::new(p, -n, 1.0, -1.0)?
                }
            }
            _ => unreachable!(),
        };
        Ok(t.compose(&normal).compose(&t.inverse()))
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn frobenius(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    /// `self ∘ other`, i.e. `z ↦ self(other(z))`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let (f, g) = (self, other);
        Self::renormalized(
            f.a.mul_add(g.a, f.b * g.c),
            f.a.mul_add(g.b, f.b * g.d),
            f.c.mul_add(g.a, f.d * g.c),
            f.c.mul_add(g.b, f.d * g.d),
        )
    }

    pub fn inverse(&self) -> MoebiusMap {
        Self::canonical(self.d, -self.b, -self.c, self.a)
    }

    /// `h⁻¹ ∘ self ∘ h`.
    pub fn conjugate(&self, h: &MoebiusMap) -> MoebiusMap {
        h.inverse().compose(&self.compose(h))
    }

    /// `self^n` by repeated squaring; negative powers use the inverse.
    pub fn pow(&self, n: i64) -> MoebiusMap {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = MoebiusMap::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    /// Projective action on `R ∪ {∞}`.
    pub fn apply(&self, z: ExtendedReal) -> ExtendedReal {
        match z {
            ExtendedReal::Infinity => {
                if self.c == 0.0 {
                    ExtendedReal::Infinity
                } else {
                    ExtendedReal::Finite(self.a / self.c + 0.0)
                }
            }
            ExtendedReal::Finite(x) => {
                let den = self.c.mul_add(x, self.d);
                let scale = (self.c * x).abs() + self.d.abs();
                if den == 0.0 || den.abs() <= f64::EPSILON * scale {
                    ExtendedReal::Infinity
                } else {
                    ExtendedReal::Finite(self.a.mul_add(x, self.b) / den + 0.0)
                }
            }
        }
    }

    /// Trace band treated as parabolic: the configured tolerance, widened
    /// to the rounding error a product of this size can carry.
    pub fn parabolic_band(&self, tol: &Tolerances) -> f64 {
        tol.class.max(ROUNDING_BAND * self.frobenius())
    }

    pub fn classify(&self) -> Result<IsometryClass, Error> {
        self.classify_with(&Tolerances::default())
    }

    pub fn classify_with(&self, tol: &Tolerances) -> Result<IsometryClass, Error> {
        let MoebiusMap { a, b, c, d } = *self;
        let is_identity = (a - 1.0).abs() <= tol.class
            && (d - 1.0).abs() <= tol.class
            && b.abs() <= tol.class
            && c.abs() <= tol.class;
        if is_identity {
            return Ok(IsometryClass::Identity);
        }
        let tr = self.trace();
        let band = self.parabolic_band(tol);
        if (tr - 2.0).abs() <= band {
            if b.abs() <= tol.class && c.abs() <= tol.class {
                return Err(Error::ClassifyAmbiguous);
            }
            return Ok(if c.abs() <= tol.pt {
                IsometryClass::Parabolic {
                    fixed: ExtendedReal::Infinity,
                    omega: b,
                }
            } else {
                IsometryClass::Parabolic {
                    fixed: ExtendedReal::Finite((a - d) / (2.0 * c)),
                    omega: c,
                }
            });
        }
        if tr < 2.0 {
            return Ok(IsometryClass::Elliptic { trace: tr });
        }

        let sq = ((tr - 2.0) * (tr + 2.0)).sqrt();
        let lambda = multiplier_from_trace(tr);

        let (attracting, repelling) = if c == 0.0 {
            let finite = ExtendedReal::Finite(b / (d - a) + 0.0);
            if a.abs() > d.abs() {
                (ExtendedReal::Infinity, finite)
            } else {
                (finite, ExtendedReal::Infinity)
            }
        } else {
            // Roots of c z² + (d - a) z - b = 0, computed without cancellation.
            let lin = d - a;
            let q = -0.5 * (lin + lin.signum() * sq);
            let z1 = q / c;
            let z2 = -b / q;
            let m1 = (c * z1 + d).abs();
            let m2 = (c * z2 + d).abs();
            // |g'(z)| = 1/(cz + d)², so the larger |cz + d| is attracting.
            if m1 >= m2 {
                (
                    ExtendedReal::Finite(z1 + 0.0),
                    ExtendedReal::Finite(z2 + 0.0),
                )
            } else {
                (
                    ExtendedReal::Finite(z2 + 0.0),
                    ExtendedReal::Finite(z1 + 0.0),
                )
            }
        };
        Ok(IsometryClass::Hyperbolic {
            lambda,
            attracting,
            repelling,
        })
    }

    /// The translation vector of a parabolic map.
    pub fn translation_vector(&self) -> Result<f64, Error> {
        self.translation_vector_with(&Tolerances::default())
    }

    pub fn translation_vector_with(&self, tol: &Tolerances) -> Result<f64, Error> {
        match self.classify_with(tol)? {
            IsometryClass::Parabolic { omega, .. } => Ok(omega),
            _ => Err(Error::NotParabolic),
        }
    }

    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        let scale = 1f64.max(self.frobenius()).max(other.frobenius());
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .all(|e| e.abs() <= tol * scale)
    }
}

impl<'de> Deserialize<'de> for MoebiusMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = <[[f64; 2]; 2]>::deserialize(d)?;
        MoebiusMap::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// `λ` with `λ^{1/2} + λ^{-1/2} = tr` for `tr > 2`.
pub fn multiplier_from_trace(tr: f64) -> f64 {
    let root = 0.5 * (tr + ((tr - 2.0) * (tr + 2.0)).sqrt());
    root * root
}

/// `h ∘ g0 ∘ h⁻¹` is parabolic with translation vector `-c²`, or `a²` when
/// it fixes ∞. Computed from the entries of `h` directly, so it keeps full
/// relative precision where forming the product and re-classifying would
/// not.
pub fn cusp_conjugate_omega(h: &MoebiusMap) -> f64 {
    cusp_conjugate_omega_with(h, &Tolerances::default())
}

/// As [`cusp_conjugate_omega`]; the fixed point is taken to be ∞ under
/// the same rule as [`MoebiusMap::classify_with`], i.e. when the
/// conjugate's lower-left entry `-c²` is within `tol.pt` of zero.
pub fn cusp_conjugate_omega_with(h: &MoebiusMap, tol: &Tolerances) -> f64 {
    if cusp_conjugate_fixes_infinity(h, tol) {
        h.a * h.a
    } else {
        -(h.c * h.c)
    }
}

pub(crate) fn cusp_conjugate_fixes_infinity(h: &MoebiusMap, tol: &Tolerances) -> bool {
    h.c * h.c <= tol.pt
}

/// Result of [`MoebiusMap::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsometryClass {
    Identity,
    Elliptic {
        trace: f64,
    },
    Parabolic {
        fixed: ExtendedReal,
        omega: f64,
    },
    Hyperbolic {
        lambda: f64,
        attracting: ExtendedReal,
        repelling: ExtendedReal,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsometryKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl IsometryClass {
    pub fn kind(&self) -> IsometryKind {
        match self {
            IsometryClass::Identity => IsometryKind::Identity,
            IsometryClass::Elliptic { .. } => IsometryKind::Elliptic,
            IsometryClass::Parabolic { .. } => IsometryKind::Parabolic,
            IsometryClass::Hyperbolic { .. } => IsometryKind::Hyperbolic,
        }
    }

    /// Multiplier; 1 for everything that is not hyperbolic.
    pub fn lambda(&self) -> f64 {
        match self {
            IsometryClass::Hyperbolic { lambda, .. } => *lambda,
            _ => 1.0,
        }
    }

    pub fn omega(&self) -> Option<f64> {
        match self {
            IsometryClass::Parabolic { omega, .. } => Some(*omega),
            _ => None,
        }
    }

    /// Attracting fixed point of a hyperbolic map, the fixed point of a
    /// parabolic one.
    pub fn attracting(&self) -> Option<ExtendedReal> {
        match self {
            IsometryClass::Hyperbolic { attracting, .. } => Some(*attracting),
            IsometryClass::Parabolic { fixed, .. } => Some(*fixed),
            _ => None,
        }
    }

    pub fn repelling(&self) -> Option<ExtendedReal> {
        match self {
            IsometryClass::Hyperbolic { repelling, .. } => Some(*repelling),
            _ => None,
        }
    }
}

/// `(p, q, r, s) = (p - r)/(p - s) · (q - s)/(q - r)`.
///
/// A single ∞ argument cancels the two factors that contain it.
pub fn cross_ratio(
    p: ExtendedReal,
    q: ExtendedReal,
    r: ExtendedReal,
    s: ExtendedReal,
) -> Result<f64, Error> {
    cross_ratio_with(p, q, r, s, &Tolerances::default())
}

pub fn cross_ratio_with(
    p: ExtendedReal,
    q: ExtendedReal,
    r: ExtendedReal,
    s: ExtendedReal,
    tol: &Tolerances,
) -> Result<f64, Error> {
    let pts = [p, q, r, s];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i].approx_eq(pts[j], tol.pt) {
                return Err(Error::DegenerateTuple);
            }
        }
    }
    use ExtendedReal::{Finite as F, Infinity as Inf};
    Ok(match (p, q, r, s) {
        (Inf, F(q), F(r), F(s)) => (q - s) / (q - r),
        (F(p), Inf, F(r), F(s)) => (p - r) / (p - s),
        (F(p), F(q), Inf, F(s)) => (q - s) / (p - s),
        (F(p), F(q), F(r), Inf) => (p - r) / (q - r),
        (F(p), F(q), F(r), F(s)) => (p - r) / (p - s) * ((q - s) / (q - r)),
        _ => unreachable!("at most one point can be infinite after the distinctness check"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExtendedReal::{Finite, Infinity};

    fn m(a: f64, b: f64, c: f64, d: f64) -> MoebiusMap {
        MoebiusMap::new(a, b, c, d).unwrap()
    }

    #[test]
    fn compose_examples() {
        let t = MoebiusMap::G0;
        assert_eq!(t.compose(&t), MoebiusMap::translation(2.0));
        let g = m(2.0, 1.0, 3.0, 2.0);
        assert_eq!(g.compose(&MoebiusMap::IDENTITY), g);
        assert_eq!(
            m(1.0, 0.0, 3.0, 1.0).compose(&m(1.0, 1.0, 0.0, 1.0)),
            m(1.0, 1.0, 3.0, 4.0)
        );
        assert_eq!(m(1.0, 1.0, 3.0, 4.0).rows(), [[1.0, 1.0], [3.0, 4.0]]);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(MoebiusMap::G0.inverse(), MoebiusMap::translation(-1.0));
        assert_eq!(MoebiusMap::IDENTITY.inverse(), MoebiusMap::IDENTITY);
        assert_eq!(m(2.0, 0.0, 0.0, 0.5).inverse(), m(0.5, 0.0, 0.0, 2.0));
    }

    #[test]
    fn apply_examples() {
        assert_eq!(MoebiusMap::G0.apply(Infinity), Infinity);
        assert_eq!(m(2.0, 0.0, 0.0, 0.5).apply(Finite(1.0)), Finite(4.0));
        assert_eq!(m(1.0, 0.0, 3.0, 1.0).apply(Finite(-1.0 / 3.0)), Infinity);
        assert_eq!(m(1.0, 0.0, 3.0, 1.0).apply(Infinity), Finite(1.0 / 3.0));
    }

    #[test]
    fn canonical_sign() {
        let g = m(-2.0, 0.0, 0.0, -0.5);
        assert_eq!(g.rows(), [[2.0, 0.0], [0.0, 0.5]]);
        let r = m(0.0, -1.0, 1.0, 0.0);
        assert_eq!(r.rows(), [[0.0, -1.0], [1.0, 0.0]]);
        let r = m(0.0, 1.0, -1.0, 0.0);
        assert_eq!(r.rows(), [[0.0, -1.0], [1.0, 0.0]]);
        assert!(MoebiusMap::new(1.0, 0.0, 0.0, -1.0).is_err());
        assert!(MoebiusMap::new(f64::NAN, 0.0, 0.0, 1.0).is_err());
        // Scaled input is renormalized.
        assert_eq!(m(2.0, 2.0, 0.0, 2.0), MoebiusMap::G0);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            MoebiusMap::G0.classify().unwrap(),
            IsometryClass::Parabolic {
                fixed: Infinity,
                omega: 1.0
            }
        );
        assert_eq!(
            m(2.0, 0.0, 0.0, 0.5).classify().unwrap(),
            IsometryClass::Hyperbolic {
                lambda: 4.0,
                attracting: Infinity,
                repelling: Finite(0.0)
            }
        );
        assert_eq!(
            m(0.0, 1.0, -1.0, 0.0).classify().unwrap().kind(),
            IsometryKind::Elliptic
        );
        assert_eq!(
            MoebiusMap::IDENTITY.classify().unwrap(),
            IsometryClass::Identity
        );
        // Contracting diagonal: 0 attracting.
        let h = m(0.5, 0.0, 0.0, 2.0).classify().unwrap();
        assert_eq!(h.attracting(), Some(Finite(0.0)));
        assert_eq!(h.repelling(), Some(Infinity));
    }

    #[test]
    fn near_identity_is_ambiguous() {
        // Hyperbolic with trace 2 + 1e-10: inside the band but no off-diagonal part.
        let g = m(1.0 + 1e-5, 0.0, 0.0, 1.0 / (1.0 + 1e-5));
        assert_eq!(g.classify(), Err(Error::ClassifyAmbiguous));
        let exact = Tolerances {
            class: 0.0,
            ..Tolerances::default()
        };
        assert_eq!(
            g.classify_with(&exact).unwrap().kind(),
            IsometryKind::Hyperbolic
        );
    }

    #[test]
    fn translation_vector_examples() {
        assert_eq!(MoebiusMap::G0.translation_vector().unwrap(), 1.0);
        assert_eq!(m(1.0, 0.0, 3.0, 1.0).translation_vector().unwrap(), 3.0);
        let h = MoebiusMap::parabolic(2.0, Finite(5.0)).unwrap();
        assert_eq!(h.rows(), [[11.0, -50.0], [2.0, -9.0]]);
        assert_eq!(
            MoebiusMap::G0.conjugate(&h).translation_vector().unwrap(),
            -4.0
        );
        assert_eq!(
            m(2.0, 0.0, 0.0, 0.5).translation_vector(),
            Err(Error::NotParabolic)
        );
    }

    #[test]
    fn translation_vector_defining_relation() {
        // 1/(g(P+1) - P) = 1/1 + omega
        for &(omega, p) in &[(2.0, 5.0), (-0.3, -1.5), (7.0, 0.25)] {
            let g = MoebiusMap::parabolic(omega, Finite(p)).unwrap();
            let IsometryClass::Parabolic { fixed, omega: w } = g.classify().unwrap() else {
                panic!("not parabolic");
            };
            let fixed = fixed.finite().unwrap();
            assert!((fixed - p).abs() < 1e-12);
            let image = g.apply(Finite(fixed + 1.0)).finite().unwrap();
            let lhs = 1.0 / (image - fixed);
            assert!((lhs - 1.0 - w).abs() < 1e-9 * w.abs().max(1.0));
            assert!((w - omega).abs() < 1e-12 * omega.abs());
        }
    }

    #[test]
    fn omega_not_conjugacy_invariant() {
        let c = 3.0;
        let lam = 2.5;
        let g = m(1.0, 0.0, c, 1.0);
        let h = MoebiusMap::scaling(lam).unwrap();
        let w = g.conjugate(&h).translation_vector().unwrap();
        assert!((w - c * lam).abs() < 1e-10);
    }

    #[test]
    fn cross_ratio_examples() {
        assert_eq!(
            cross_ratio(Finite(2.0), Finite(1.0), Finite(0.0), Infinity).unwrap(),
            2.0
        );
        assert_eq!(
            cross_ratio(Finite(3.0), Finite(1.0), Finite(0.0), Infinity).unwrap(),
            3.0
        );
        let g = m(2f64.sqrt(), 0.0, 0.0, 1.0 / 2f64.sqrt());
        let IsometryClass::Hyperbolic {
            lambda,
            attracting,
            repelling,
        } = g.classify().unwrap()
        else {
            panic!()
        };
        let s = Finite(1.0);
        let cr = cross_ratio(g.apply(s), s, repelling, attracting).unwrap();
        assert!((cr - 2.0).abs() < 1e-12);
        assert!((lambda - 2.0).abs() < 1e-12);
        assert_eq!(
            cross_ratio(Finite(1.0), Finite(1.0), Finite(0.0), Infinity),
            Err(Error::DegenerateTuple)
        );
        assert_eq!(
            cross_ratio(Infinity, Finite(1.0), Finite(0.0), Infinity),
            Err(Error::DegenerateTuple)
        );
        // Each infinite slot.
        let (p, q, r, s) = (5.0, 1.0, -2.0, 3.0);
        let big = 1e12;
        for slot in 0..4 {
            let mut pts = [Finite(p), Finite(q), Finite(r), Finite(s)];
            let mut near = pts;
            pts[slot] = Infinity;
            near[slot] = Finite(big);
            let exact = cross_ratio(pts[0], pts[1], pts[2], pts[3]).unwrap();
            let approx = cross_ratio(near[0], near[1], near[2], near[3]).unwrap();
            assert!((exact - approx).abs() < 1e-9, "slot {slot}");
        }
    }

    #[test]
    fn conjugate_examples() {
        let g = m(3.0, 1.0, 2.0, 1.0);
        assert!(g.conjugate(&MoebiusMap::IDENTITY).approx_eq(&g, 1e-15));
        assert_eq!(
            MoebiusMap::G0.conjugate(&MoebiusMap::translation(4.25)),
            MoebiusMap::G0
        );
        let h = m(1.0, 2.0, -1.0, -1.0);
        let lam = g.classify().unwrap().lambda();
        let lam_c = g.conjugate(&h).classify().unwrap().lambda();
        assert!((lam - lam_c).abs() < 1e-12 * lam);
    }

    #[test]
    fn hyperbolic_constructor() {
        let cases = [
            (4.0, Finite(0.0), Finite(1.0)),
            (2.0, Finite(3.0), Finite(-1.0)),
            (10.0, Infinity, Finite(2.0)),
            (1.5, Finite(-2.0), Infinity),
        ];
        for (lam, p, n) in cases {
            let g = MoebiusMap::hyperbolic(lam, p, n).unwrap();
            let IsometryClass::Hyperbolic {
                lambda,
                attracting,
                repelling,
            } = g.classify().unwrap()
            else {
                panic!()
            };
            assert!((lambda - lam).abs() < 1e-12 * lam);
            assert!(attracting.approx_eq(p, 1e-12), "{attracting} vs {p}");
            assert!(repelling.approx_eq(n, 1e-12), "{repelling} vs {n}");
        }
    }

    #[test]
    fn cusp_conjugate_formula() {
        let h = m(2.0, 1.0, 3.0, 2.0);
        let direct = MoebiusMap::G0
            .conjugate(&h.inverse())
            .translation_vector()
            .unwrap();
        assert!((direct - cusp_conjugate_omega(&h)).abs() < 1e-12);
        let h = m(2.0, 1.0, 0.0, 0.5);
        let direct = MoebiusMap::G0
            .conjugate(&h.inverse())
            .translation_vector()
            .unwrap();
        assert!((direct - cusp_conjugate_omega(&h)).abs() < 1e-12);
        // Nearly commuting with g0: the conjugate is classified as fixing ∞.
        let h = m(1.0, 3.0, 1e-14, 1.0);
        let direct = MoebiusMap::G0
            .conjugate(&h.inverse())
            .translation_vector()
            .unwrap();
        assert!((direct - cusp_conjugate_omega(&h)).abs() < 1e-12);
    }

    #[test]
    fn pow_matches_repeated_compose() {
        let g = m(2.0, 1.0, 1.0, 1.0);
        let mut acc = MoebiusMap::IDENTITY;
        for n in 0..8 {
            assert!(g.pow(n).approx_eq(&acc, 1e-13));
            acc = acc.compose(&g);
        }
        assert!(g
            .pow(-3)
            .compose(&g.pow(3))
            .approx_eq(&MoebiusMap::IDENTITY, 1e-12));
    }

    #[test]
    fn extended_real_serde() {
        let v = serde_json::to_string(&[Finite(1.5), Infinity]).unwrap();
        assert_eq!(v, r#"[1.5,"inf"]"#);
        let back: Vec<ExtendedReal> = serde_json::from_str(&v).unwrap();
        assert_eq!(back, vec![Finite(1.5), Infinity]);
        assert!(serde_json::from_str::<ExtendedReal>(r#""nan""#).is_err());
    }
}
