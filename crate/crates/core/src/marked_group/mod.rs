//! Marked Fuchsian representations of free groups with distinguished
//! peripheral (cusp) words.

mod builtin;
mod enumerate;
mod io;
mod word;

pub use builtin::{punctured_torus, thrice_punctured_sphere, TorusRoot};
pub(crate) use enumerate::{check_budget, walk_pair, Image};
pub use enumerate::{
    enumerate_shard, enumerate_words, word_count, EnumerationMode, Words, DEFAULT_BUDGET,
};
pub use io::GroupFile;
pub(crate) use word::is_cyclic_rep;
pub use word::Word;

use crate::moebius::{ExtendedReal, IsometryClass, MoebiusMap};
use crate::tol::Tolerances;
use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct MarkedGroup {
    label: String,
    generators: Vec<MoebiusMap>,
    inverses: Vec<MoebiusMap>,
    peripherals: Vec<Word>,
}

impl MarkedGroup {
    /// Validates the data but does not normalize; see [`MarkedGroup::normalize`].
    pub fn new(
        label: impl Into<String>,
        generators: Vec<MoebiusMap>,
        peripherals: Vec<Word>,
        tol: &Tolerances,
    ) -> Result<Self, Error> {
        let rank = generators.len();
        if rank < 2 {
            return Err(Error::InvalidParameter(format!(
                "rank must be at least 2, got {rank}"
            )));
        }
        if peripherals.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one peripheral word is required".into(),
            ));
        }
        for (i, p) in peripherals.iter().enumerate() {
            if p.max_generator() > rank {
                return Err(Error::InvalidWord(format!(
                    "peripherals[{i}] uses generator {} but rank is {rank}",
                    p.max_generator()
                )));
            }
        }
        let inverses = generators.iter().map(MoebiusMap::inverse).collect();
        let group = MarkedGroup {
            label: label.into(),
            generators,
            inverses,
            peripherals,
        };
        for p in &group.peripherals {
            if group.evaluate(p).classify_with(tol)?.omega().is_none() {
                return Err(Error::NotParabolic);
            }
        }
        group.jorgensen_screen(tol)?;
        Ok(group)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[MoebiusMap] {
        &self.generators
    }

    pub fn peripherals(&self) -> &[Word] {
        &self.peripherals
    }

    pub(crate) fn letter(&self, x: i32) -> MoebiusMap {
        let i = x.unsigned_abs() as usize - 1;
        if x > 0 {
            self.generators[i]
        } else {
            self.inverses[i]
        }
    }

    /// Left-to-right product of generator matrices, accumulated in
    /// double-double so that long or badly conditioned words keep their
    /// trace.
    pub fn evaluate(&self, w: &Word) -> MoebiusMap {
        enumerate::wide_evaluate(self, w.letters())
    }

    /// Every generator replaced by `h⁻¹ ∘ g ∘ h`.
    pub fn conjugated(&self, h: &MoebiusMap) -> MarkedGroup {
        self.map_generators(|g| g.conjugate(h))
    }

    fn map_generators(&self, f: impl Fn(&MoebiusMap) -> MoebiusMap) -> MarkedGroup {
        let generators: Vec<MoebiusMap> = self.generators.iter().map(f).collect();
        MarkedGroup {
            label: self.label.clone(),
            inverses: generators.iter().map(MoebiusMap::inverse).collect(),
            generators,
            peripherals: self.peripherals.clone(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Necessary condition for discreteness, checked on every generator
    /// pair: `|tr²A - 4| + |tr[A,B] - 2| >= 1`.
    pub fn jorgensen_screen(&self, tol: &Tolerances) -> Result<(), Error> {
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if i == j {
                    continue;
                }
                let a = &self.generators[i];
                let b = &self.generators[j];
                let ta = a.trace();
                let value = (ta * ta - 4.0).abs() + (commutator_trace(a, b) - 2.0).abs();
                if value < 1.0 - tol.jorg {
                    return Err(Error::IndiscreteSuspected(i + 1, j + 1, value));
                }
            }
        }
        Ok(())
    }

    /// Conjugates the whole group so that the first peripheral word becomes
    /// exactly or to rounding `z ↦ z + 1`.
    ///
    /// The fixed point is first sent to ∞ and the translation scaled to one.
    /// A negative translation is turned positive by the reflection
    /// `z ↦ -z̄`, which acts on matrices as `(a, b, c, d) ↦ (a, -b, -c, d)`.
    pub fn normalize(&self, tol: &Tolerances) -> Result<MarkedGroup, Error> {
        let first = &self.peripherals[0];
        let IsometryClass::Parabolic { fixed, omega } = self.evaluate(first).classify_with(tol)?
        else {
            return Err(Error::NotParabolic);
        };
        let mut group = match fixed {
            ExtendedReal::Infinity => self.clone(),
            ExtendedReal::Finite(p) => {
                // z ↦ p - 1/z sends ∞ to p, and 1/(g(z) - p) = 1/(z - p) + ω
                // becomes z ↦ z - ω; composing with z ↦ |ω| z gives
                // z ↦ p - 1/(|ω| z), close to normalized already.
                let r = omega.abs().sqrt();
                let u = MoebiusMap::new(p * r, -1.0 / r, r, 0.0)?;
                let u = u.compose(&MoebiusMap::translation(self.centre(&u, tol)));
                self.conjugated(&u)
            }
        };
        // Read ω off the product at ∞ rather than trusting the first
        // estimate: near a finite fixed point it carries far more noise.
        let omega = group.evaluate(first).b();
        if !(omega.is_finite() && omega != 0.0) {
            return Err(Error::NotParabolic);
        }
        if omega < 0.0 {
            group = group.map_generators(reflect);
        }
        let k = omega.abs();
        if k != 1.0 {
            group = group.map_generators(|g| {
                MoebiusMap::from_unimodular(g.a(), g.b() / k, g.c() * k, g.d())
            });
        }
        if let [x] = first.letters() {
            let i = x.unsigned_abs() as usize - 1;
            let g0 = if *x > 0 {
                MoebiusMap::G0
            } else {
                MoebiusMap::G0.inverse()
            };
            group.generators[i] = g0;
            group.inverses[i] = g0.inverse();
        }
        Ok(group)
    }

    /// Median of the generators' fixed points as seen through `u⁻¹`.
    /// Translating it to 0 keeps the normalized entries small; an
    /// arbitrary translation can inflate them by orders of magnitude.
    fn centre(&self, u: &MoebiusMap, tol: &Tolerances) -> f64 {
        let back = u.inverse();
        let mut points: Vec<f64> = self
            .generators
            .iter()
            .filter_map(|g| g.classify_with(tol).ok())
            .flat_map(|c| [c.attracting(), c.repelling()])
            .flatten()
            .filter_map(|x| back.apply(x).finite())
            .collect();
        if points.is_empty() {
            return 0.0;
        }
        points.sort_by(f64::total_cmp);
        let m = points.len();
        0.5 * (points[(m - 1) / 2] + points[m / 2])
    }

    /// Translation vector of the first peripheral.
    pub fn first_peripheral_omega(&self, tol: &Tolerances) -> Result<f64, Error> {
        self.evaluate(&self.peripherals[0])
            .translation_vector_with(tol)
    }

    pub fn is_normalized(&self, tol: &Tolerances) -> bool {
        self.evaluate(&self.peripherals[0])
            .approx_eq(&MoebiusMap::G0, tol.class.max(1e-12))
    }
}

fn reflect(g: &MoebiusMap) -> MoebiusMap {
    MoebiusMap::from_unimodular(g.a(), -g.b(), -g.c(), g.d())
}

/// `tr(A B A⁻¹ B⁻¹)` computed on raw matrices, so independent of the sign
/// chosen for either lift.
pub fn commutator_trace(a: &MoebiusMap, b: &MoebiusMap) -> f64 {
    let mul = |x: [[f64; 2]; 2], y: [[f64; 2]; 2]| {
        [
            [
                x[0][0] * y[0][0] + x[0][1] * y[1][0],
                x[0][0] * y[0][1] + x[0][1] * y[1][1],
            ],
            [
                x[1][0] * y[0][0] + x[1][1] * y[1][0],
                x[1][0] * y[0][1] + x[1][1] * y[1][1],
            ],
        ]
    };
    let inv = |x: [[f64; 2]; 2]| [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]];
    let (a, b) = (a.rows(), b.rows());
    let m = mul(mul(a, b), mul(inv(a), inv(b)));
    m[0][0] + m[1][1]
}

/// A pair of marked groups with the identity correspondence on words:
/// generator `i` of the source goes to generator `i` of the target.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedIsomorphism {
    source: MarkedGroup,
    target: MarkedGroup,
}

impl MarkedIsomorphism {
    /// Both groups must share rank and peripheral words, and both must be
    /// normalized so the first peripheral is `g0`.
    pub fn new(source: MarkedGroup, target: MarkedGroup, tol: &Tolerances) -> Result<Self, Error> {
        if source.rank() != target.rank() {
            return Err(Error::Incompatible(format!(
                "rank {} vs rank {}",
                source.rank(),
                target.rank()
            )));
        }
        if source.peripherals != target.peripherals {
            return Err(Error::Incompatible("peripheral words differ".into()));
        }
        for (name, g) in [("source", &source), ("target", &target)] {
            if !g.is_normalized(tol) {
                return Err(Error::Incompatible(format!(
                    "{name} is not normalized: first peripheral is not z -> z+1"
                )));
            }
        }
        Ok(MarkedIsomorphism { source, target })
    }

    pub fn identity(group: MarkedGroup) -> Self {
        MarkedIsomorphism {
            source: group.clone(),
            target: group,
        }
    }

    pub fn source(&self) -> &MarkedGroup {
        &self.source
    }

    pub fn target(&self) -> &MarkedGroup {
        &self.target
    }

    pub fn inverse(&self) -> MarkedIsomorphism {
        MarkedIsomorphism {
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    /// Images of `w` in both groups.
    pub fn evaluate(&self, w: &Word) -> (MoebiusMap, MoebiusMap) {
        (self.source.evaluate(w), self.target.evaluate(w))
    }

    pub fn with_target(&self, target: MarkedGroup) -> MarkedIsomorphism {
        MarkedIsomorphism {
            source: self.source.clone(),
            target,
        }
    }
}
