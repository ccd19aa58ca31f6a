//! Enumeration of freely reduced words.
//!
//! Words come out in shortlex order (by length, then lexicographically with
//! letters ordered `-r < … < -1 < 1 < … < r`). The estimators walk the same
//! tree depth-first and reuse prefix products, so they never materialize the
//! word list.

use serde::{Deserialize, Serialize};

use super::word::{is_cyclic_rep, Word};
use super::MarkedGroup;
use twofloat::TwoFloat;

use crate::moebius::MoebiusMap;
use crate::Error;

/// Default cap on the number of enumerated words.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationMode {
    /// Every freely reduced word.
    All,
    /// One representative per conjugacy-and-inversion class.
    CyclicReps,
}

/// `1 + Σ_{ℓ=1..L} 2r(2r-1)^{ℓ-1}`.
pub fn word_count(rank: usize, max_len: usize) -> u128 {
    let r = rank as u128;
    let mut total: u128 = 1;
    let mut layer: u128 = 2 * r;
    for _ in 0..max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul((2 * r).saturating_sub(1).max(1));
    }
    total
}

pub(crate) fn check_budget(rank: usize, max_len: usize, budget: u64) -> Result<(), Error> {
    let count = word_count(rank, max_len);
    if count > budget as u128 {
        return Err(Error::BudgetExceeded { count, budget });
    }
    Ok(())
}

fn alphabet(rank: usize) -> Vec<i32> {
    let r = rank as i32;
    (-r..=-1).chain(1..=r).collect()
}

/// Iterator over reduced words in shortlex order.
#[derive(Debug, Clone)]
pub struct Words {
    alphabet: Vec<i32>,
    max_len: usize,
    mode: EnumerationMode,
    /// When set, only non-empty words starting with this letter.
    first: Option<i32>,
    current: Option<Vec<i32>>,
}

impl Words {
    fn smallest_after(&self, prev: Option<i32>, min_exclusive: Option<i32>) -> Option<i32> {
        self.alphabet
            .iter()
            .copied()
            .filter(|&x| Some(-x) != prev)
            .find(|&x| min_exclusive.is_none_or(|m| x > m))
    }

    fn first_of_len(&self, len: usize) -> Option<Vec<i32>> {
        if len > self.max_len {
            return None;
        }
        let mut w = Vec::with_capacity(len);
        for i in 0..len {
            let x = match (i, self.first) {
                (0, Some(x)) => x,
                _ => self.smallest_after(w.last().copied(), None)?,
            };
            w.push(x);
        }
        Some(w)
    }

    fn advance(&self, w: &[i32]) -> Option<Vec<i32>> {
        let n = w.len();
        let floor = usize::from(self.first.is_some());
        for i in (floor..n).rev() {
            let prev = if i == 0 { None } else { Some(w[i - 1]) };
            if let Some(x) = self.smallest_after(prev, Some(w[i])) {
                let mut out = w[..i].to_vec();
                out.push(x);
                for _ in i + 1..n {
                    let y = self.smallest_after(out.last().copied(), None)?;
                    out.push(y);
                }
                return Some(out);
            }
        }
        self.first_of_len(n + 1)
    }

    fn step(&mut self) -> Option<Vec<i32>> {
        let cur = self.current.take()?;
        self.current = self.advance(&cur);
        Some(cur)
    }
}

impl Iterator for Words {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            let w = self.step()?;
            if self.mode == EnumerationMode::All || is_cyclic_rep(&w) {
                return Some(Word::from_reduced(w));
            }
        }
    }
}

/// All reduced words of length `<= max_len` over `rank` generators.
pub fn enumerate_words(
    rank: usize,
    max_len: usize,
    mode: EnumerationMode,
    budget: u64,
) -> Result<Words, Error> {
    if max_len < 1 {
        return Err(Error::InvalidParameter("max_len must be at least 1".into()));
    }
    check_budget(rank, max_len, budget)?;
    let mut it = Words {
        alphabet: alphabet(rank),
        max_len,
        mode,
        first: None,
        current: None,
    };
    it.current = it.first_of_len(0);
    Ok(it)
}

/// The non-empty words whose first letter is `first`. Shards for all
/// letters, together with the empty word, partition [`enumerate_words`].
pub fn enumerate_shard(
    rank: usize,
    max_len: usize,
    mode: EnumerationMode,
    first: i32,
    budget: u64,
) -> Result<Words, Error> {
    if first == 0 || first.unsigned_abs() as usize > rank {
        return Err(Error::InvalidWord(format!(
            "letter {first} out of range for rank {rank}"
        )));
    }
    let mut it = enumerate_words(rank, max_len, mode, budget)?;
    it.first = Some(first);
    it.current = it.first_of_len(1);
    Ok(it)
}

/// A word's image, with the trace taken from the extended-precision
/// product. For non-cyclically-reduced words the entries are far larger
/// than the trace, and a plain `f64` product loses it to cancellation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Image {
    pub map: MoebiusMap,
    /// `|tr|` of the unrounded product.
    pub trace: f64,
}

#[derive(Debug, Clone, Copy)]
struct WideMatrix([TwoFloat; 4]);

impl WideMatrix {
    const IDENTITY: WideMatrix = WideMatrix([
        TwoFloat::from_f64(1.0),
        TwoFloat::from_f64(0.0),
        TwoFloat::from_f64(0.0),
        TwoFloat::from_f64(1.0),
    ]);

    fn from_map(m: &MoebiusMap) -> Self {
        WideMatrix([m.a(), m.b(), m.c(), m.d()].map(TwoFloat::from))
    }

    fn mul(&self, o: &WideMatrix) -> WideMatrix {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        WideMatrix([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    fn image(&self) -> Image {
        let [a, b, c, d] = self.0.map(f64::from);
        Image {
            map: MoebiusMap::from_unimodular(a, b, c, d),
            trace: f64::from(self.0[0] + self.0[3]).abs(),
        }
    }
}

/// Product of the letters' matrices in double-double, rounded once.
pub(crate) fn wide_evaluate(group: &MarkedGroup, letters: &[i32]) -> MoebiusMap {
    letters
        .iter()
        .fold(WideMatrix::IDENTITY, |acc, &x| {
            acc.mul(&WideMatrix::from_map(&group.letter(x)))
        })
        .image()
        .map
}

/// Depth-first walk over every reduced word of length `<= max_len`
/// (including the empty word), evaluated in both groups at once.
///
/// The visitor sees the word letters and the two images.
pub(crate) fn walk_pair<F>(src: &MarkedGroup, tgt: &MarkedGroup, max_len: usize, mut visit: F)
where
    F: FnMut(&[i32], &Image, &Image),
{
    let letters = alphabet(src.rank());
    let wide = |g: &MarkedGroup| -> Vec<WideMatrix> {
        letters
            .iter()
            .map(|&x| WideMatrix::from_map(&g.letter(x)))
            .collect()
    };
    let (src_letters, tgt_letters) = (wide(src), wide(tgt));
    let id = WideMatrix::IDENTITY.image();
    let mut word = Vec::with_capacity(max_len);
    visit(&word, &id, &id);

    struct Walk<'a, F> {
        letters: &'a [i32],
        src: &'a [WideMatrix],
        tgt: &'a [WideMatrix],
        max_len: usize,
        visit: F,
    }

    fn rec<F: FnMut(&[i32], &Image, &Image)>(
        w: &mut Walk<'_, F>,
        word: &mut Vec<i32>,
        ms: WideMatrix,
        mt: WideMatrix,
    ) {
        if word.len() == w.max_len {
            return;
        }
        for (i, &x) in w.letters.iter().enumerate() {
            if word.last() == Some(&-x) {
                continue;
            }
            let ns = ms.mul(&w.src[i]);
            let nt = mt.mul(&w.tgt[i]);
            word.push(x);
            (w.visit)(word, &ns.image(), &nt.image());
            rec(w, word, ns, nt);
            word.pop();
        }
    }

    let mut w = Walk {
        letters: &letters,
        src: &src_letters,
        tgt: &tgt_letters,
        max_len,
        visit: &mut visit,
    };
    rec(
        &mut w,
        &mut word,
        WideMatrix::IDENTITY,
        WideMatrix::IDENTITY,
    );
}
