//! Built-in test surfaces.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{MarkedGroup, Word};
use crate::moebius::MoebiusMap;
use crate::tol::Tolerances;
use crate::Error;

/// Which root `z` of `z² - xyz + x² + y² = 0` to take for `tr AB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusRoot {
    Plus,
    Minus,
}

impl fmt::Display for TorusRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorusRoot::Plus => "plus",
            TorusRoot::Minus => "minus",
        })
    }
}

impl FromStr for TorusRoot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "plus" | "+" => Ok(TorusRoot::Plus),
            "minus" | "-" => Ok(TorusRoot::Minus),
            _ => Err(Error::InvalidParameter(format!(
                "root must be plus or minus, got `{s}`"
            ))),
        }
    }
}

/// Once-punctured torus with Fricke traces `tr A = x`, `tr B = y`,
/// `tr AB = z`, where `x² + y² + z² = xyz` so that the commutator
/// `[A, B] = A B A⁻¹ B⁻¹` has trace -2. The commutator is the single
/// peripheral word, and the group comes back normalized.
pub fn punctured_torus(x: f64, y: f64, root: TorusRoot) -> Result<MarkedGroup, Error> {
    if !(x > 2.0 && y > 2.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "torus traces must both exceed 2, got x = {x}, y = {y}"
        )));
    }
    let disc = x * x * y * y - 4.0 * (x * x + y * y);
    if disc < 0.0 {
        return Err(Error::NonRealRoot { x, y });
    }
    let z = match root {
        TorusRoot::Plus => 0.5 * (x * y + disc.sqrt()),
        // Product of the roots is x² + y²; avoids cancellation.
        TorusRoot::Minus => (x * x + y * y) / (0.5 * (x * y + disc.sqrt())),
    };
    // A = [[x, 1], [-1, 0]], B = [[0, q], [-1/q, y]] with q² + zq + 1 = 0.
    // The small root, via the product of the roots being 1.
    let q = -2.0 / (z + ((z - 2.0) * (z + 2.0)).max(0.0).sqrt());
    let a = MoebiusMap::new(x, 1.0, -1.0, 0.0)?;
    let b = MoebiusMap::new(0.0, q, -1.0 / q, y)?;
    let tol = Tolerances::default();
    let commutator = Word::new([1, 2, -1, -2])?;
    MarkedGroup::new(
        format!("torus({x},{y},{root})"),
        vec![a, b],
        vec![commutator],
        &tol,
    )?
    .normalize(&tol)
}

/// The thrice-punctured sphere from `z ↦ z + 2` and `z ↦ z / (2z + 1)`,
/// normalized so the first generator is `z ↦ z + 1`. Its peripherals are
/// the two generators and `B A⁻¹`.
pub fn thrice_punctured_sphere() -> MarkedGroup {
    let tol = Tolerances::default();
    let a = MoebiusMap::translation(2.0);
    let b = MoebiusMap::new(1.0, 0.0, 2.0, 1.0).expect("unimodular");
    let peripherals = [[1].as_slice(), &[2], &[2, -1]]
        .iter()
        .map(|w| Word::new(w.iter().copied()).expect("valid word"))
        .collect();
    MarkedGroup::new("tps", vec![a, b], peripherals, &tol)
        .and_then(|g| g.normalize(&tol))
        .expect("thrice-punctured sphere is a valid marked group")
}
