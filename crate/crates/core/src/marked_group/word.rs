use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

/// A freely reduced word in the generators of a free group.
///
/// Letters are 1-based signed generator indices: `i` is the `i`-th
/// generator, `-i` its inverse. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Word(Vec<i32>);

fn reduce(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for x in letters {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

impl Word {
    pub fn new(letters: impl IntoIterator<Item = i32>) -> Result<Self, Error> {
        let letters: Vec<i32> = letters.into_iter().collect();
        if letters.contains(&0) {
            return Err(Error::InvalidWord("letter 0 is not a generator".into()));
        }
        Ok(Word(reduce(letters)))
    }

    /// Wraps letters that are known to be non-zero and freely reduced.
    pub(crate) fn from_reduced(letters: Vec<i32>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != -w[1]) && !letters.contains(&0));
        Word(letters)
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used.
    pub fn max_generator(&self) -> usize {
        self.0
            .iter()
            .map(|x| x.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|x| -x).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(reduce(self.0.iter().chain(other.0.iter()).copied()))
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::identity(), |acc, _| acc.concat(&base))
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate_by(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        is_cyclically_reduced(&self.0)
    }

    /// Strips matching letter/inverse pairs from both ends.
    pub fn cyclic_reduction(&self) -> Word {
        let w = &self.0;
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo >= 2 && w[lo] == -w[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        Word(w[lo..hi].to_vec())
    }

    /// Lexicographically least rotation of the cyclic reduction of the word
    /// or of its inverse. Two words get the same canonical form exactly when
    /// they are conjugate up to inversion.
    pub fn cyclic_canonical(&self) -> Word {
        let r = self.cyclic_reduction();
        let inv = r.inverse();
        let a = least_rotation(&r.0);
        let b = least_rotation(&inv.0);
        Word(a.min(b))
    }

    pub fn is_cyclic_rep(&self) -> bool {
        is_cyclic_rep(&self.0)
    }
}

pub(crate) fn is_cyclically_reduced(w: &[i32]) -> bool {
    w.len() < 2 || w[0] != -w[w.len() - 1]
}

fn least_rotation(w: &[i32]) -> Vec<i32> {
    let n = w.len();
    (0..n.max(1))
        .map(|i| {
            w[i.min(n)..]
                .iter()
                .chain(&w[..i.min(n)])
                .copied()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

/// True when `w` is cyclically reduced and no rotation of `w` or of its
/// inverse is lexicographically smaller.
pub(crate) fn is_cyclic_rep(w: &[i32]) -> bool {
    if !is_cyclically_reduced(w) {
        return false;
    }
    let n = w.len();
    let inv: Vec<i32> = w.iter().rev().map(|x| -x).collect();
    for i in 0..n {
        let rot = w[i..].iter().chain(&w[..i]);
        if rot.cmp(w.iter()).is_lt() {
            return false;
        }
        let rot = inv[i..].iter().chain(&inv[..i]);
        if rot.cmp(w.iter()).is_lt() {
            return false;
        }
    }
    true
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let letters = Vec::<i32>::deserialize(d)?;
        Word::new(letters).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(l: &[i32]) -> Word {
        Word::new(l.iter().copied()).unwrap()
    }

    #[test]
    fn reduction() {
        assert_eq!(w(&[1, -1]), Word::identity());
        assert_eq!(w(&[1, 2, -2, -1, 2]), w(&[2]));
        assert!(Word::new([1, 0]).is_err());
        assert_eq!(w(&[1, 2]).concat(&w(&[-2, 1])), w(&[1, 1]));
        assert_eq!(w(&[1, 2]).pow(-2), w(&[-2, -1, -2, -1]));
    }

    #[test]
    fn cyclic_forms() {
        assert_eq!(w(&[2, 1, -2]).cyclic_reduction(), w(&[1]));
        assert_eq!(w(&[2, 1, 3, -2]).cyclic_canonical(), w(&[-3, -1]));
        assert_eq!(w(&[1, 2, -1, -2]).cyclic_canonical(), w(&[-2, -1, 2, 1]));
        assert!(w(&[-2, -1, 2, 1]).is_cyclic_rep());
        assert!(!w(&[1, 2, -1, -2]).is_cyclic_rep());
        assert!(!w(&[1, 2, -1]).is_cyclic_rep());
        assert!(Word::identity().is_cyclic_rep());
        assert_eq!(Word::identity().cyclic_canonical(), Word::identity());
    }

    #[test]
    fn display() {
        assert_eq!(w(&[1, -2]).to_string(), "1 -2");
        assert_eq!(Word::identity().to_string(), "e");
    }
}
