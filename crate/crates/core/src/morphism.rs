//! Non-erasing morphisms and the anchor decision procedure.
//!
//! A morphism is an anchor (it maps every infinite word to a word of bounded
//! additive complexity) exactly when all letter images share one slope. That
//! common slope is the weight. Equivalently, the letter-count matrix
//! `M[i][j] = |φ(s_i)|_{t_j}` annihilates the vector `(t_j − α)_j` for some
//! rational `α`, and `α` is then the weight.
//!
//! For a non-anchor, two letters with different image slopes give a witness
//! pair `s^p, s'^q` whose images have equal length but different sums.
//! Alternating growing powers of that pair yields a word whose image has
//! unbounded additive spread.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::word::{Alphabet, FiniteWord, Rational, Sum, Symbol, WordStream, WordView};

/// A non-erasing morphism from `source*` to `target*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    /// Images in source-alphabet order.
    images: Vec<FiniteWord>,
}

impl Morphism {
    /// Builds a morphism from `(letter, image)` rules. The target alphabet is
    /// the set of symbols used by the images.
    pub fn new(rules: impl IntoIterator<Item = (Symbol, Vec<Symbol>)>) -> Result<Self> {
        let rules: BTreeMap<Symbol, Vec<Symbol>> = collect_rules(rules)?;
        let used: Vec<Symbol> = rules.values().flatten().copied().collect();
        let target = Alphabet::of(&used)?;
        Morphism::build(rules, target)
    }

    /// Like [`Morphism::new`] with an explicit target alphabet, which must
    /// contain every image symbol.
    pub fn with_target(
        rules: impl IntoIterator<Item = (Symbol, Vec<Symbol>)>,
        target: Alphabet,
    ) -> Result<Self> {
        Morphism::build(collect_rules(rules)?, target)
    }

    fn build(rules: BTreeMap<Symbol, Vec<Symbol>>, target: Alphabet) -> Result<Self> {
        let source = Alphabet::new(rules.keys().copied())?;
        let mut images = Vec::with_capacity(rules.len());
        for (s, img) in rules {
            if img.is_empty() {
                return Err(Error::domain(format!("morphism erases letter {s}")));
            }
            if let Some(&t) = img.iter().find(|&&t| !target.contains(t)) {
                return Err(Error::domain(format!(
                    "image of {s} uses {t}, which is outside the target alphabet {target}"
                )));
            }
            images.push(FiniteWord::new(img));
        }
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    /// The identity on `alphabet`.
    pub fn identity(alphabet: &Alphabet) -> Self {
        Morphism {
            source: alphabet.clone(),
            target: alphabet.clone(),
            images: alphabet
                .symbols()
                .iter()
                .map(|&s| FiniteWord::new(vec![s]))
                .collect(),
        }
    }

    /// The anchor `i ↦ i (2k − i)` on `{0, …, k}`, of weight `k`.
    pub fn anchor_pair(k: Symbol) -> Result<Self> {
        if k < 1 {
            return Err(Error::domain("anchor_pair needs k >= 1"));
        }
        Morphism::new((0..=k).map(|i| (i, vec![i, 2 * k - i])))
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    /// `φ(s)`.
    pub fn image(&self, s: Symbol) -> Result<&FiniteWord> {
        self.source
            .index_of(s)
            .map(|i| &self.images[i])
            .ok_or(Error::ForeignSymbol(s))
    }

    /// `(letter, image)` pairs in source order.
    pub fn rules(&self) -> impl Iterator<Item = (Symbol, &FiniteWord)> {
        self.source
            .symbols()
            .iter()
            .copied()
            .zip(self.images.iter())
    }

    /// Image of a finite word.
    pub fn apply(&self, word: &[Symbol]) -> Result<FiniteWord> {
        let mut out = FiniteWord::default();
        for &s in word {
            out.extend_from_slice(self.image(s)?.symbols());
        }
        Ok(out)
    }

    /// Longest image length, `N` in the anchor spread bound.
    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(FiniteWord::len).max().unwrap_or(0)
    }

    fn image_slope(&self, i: usize) -> Rational {
        let img = &self.images[i];
        Rational::new(img.view().total(), img.len() as i128)
    }
}

fn collect_rules(
    rules: impl IntoIterator<Item = (Symbol, Vec<Symbol>)>,
) -> Result<BTreeMap<Symbol, Vec<Symbol>>> {
    let mut map = BTreeMap::new();
    for (s, img) in rules {
        if map.insert(s, img).is_some() {
            return Err(Error::domain(format!("letter {s} has two images")));
        }
    }
    if map.is_empty() {
        return Err(Error::domain("morphism needs at least one rule"));
    }
    Ok(map)
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, img)) in self.rules().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{s}={img}")?;
        }
        Ok(())
    }
}

/// Letter-count matrix of a morphism with its row/column labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorMatrix {
    pub rows: Vec<Symbol>,
    pub columns: Vec<Symbol>,
    pub entries: Vec<Vec<i64>>,
}

impl AnchorMatrix {
    /// The column vector `t_α` with components `t_j − α`.
    pub fn t_alpha(&self, alpha: Rational) -> Vec<Rational> {
        self.columns
            .iter()
            .map(|&t| Rational::from(t as i128) - alpha)
            .collect()
    }

    /// `M · v` in exact arithmetic.
    pub fn mul(&self, v: &[Rational]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (&m, x)| acc + *x * m as i128)
            })
            .collect()
    }

    /// Whether `M · t_α = 0`.
    pub fn annihilates(&self, alpha: Rational) -> bool {
        self.mul(&self.t_alpha(alpha)).iter().all(Zero::is_zero)
    }

    /// The unique `α` with `M · t_α = 0`, if any.
    ///
    /// Row `i` of `M · t_α` is `Σφ(s_i) − α|φ(s_i)|`, which vanishes only at
    /// `α = slope(φ(s_i))`, so a solution exists exactly when all rows agree.
    pub fn solve(&self) -> Option<Rational> {
        let mut alpha: Option<Rational> = None;
        for row in &self.entries {
            let len: i128 = row.iter().map(|&m| m as i128).sum();
            let sum: i128 = row
                .iter()
                .zip(&self.columns)
                .map(|(&m, &t)| m as i128 * t as i128)
                .sum();
            let a = Rational::new(sum, len);
            match alpha {
                None => alpha = Some(a),
                Some(prev) if prev != a => return None,
                _ => {}
            }
        }
        alpha
    }
}

/// `M(φ)[i][j] = |φ(s_i)|_{t_j}`.
pub fn anchor_matrix(phi: &Morphism) -> AnchorMatrix {
    let columns = phi.target.symbols().to_vec();
    let entries = phi
        .images
        .iter()
        .map(|img| {
            let mut row = vec![0i64; columns.len()];
            for &t in img.symbols() {
                let j = phi
                    .target
                    .index_of(t)
                    .expect("image symbols lie in the target");
                row[j] += 1;
            }
            row
        })
        .collect();
    AnchorMatrix {
        rows: phi.source.symbols().to_vec(),
        columns,
        entries,
    }
}

/// Two source words with equal image length and unequal image sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub first: FiniteWord,
    pub second: FiniteWord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorReport {
    pub is_anchor: bool,
    /// Common image slope; present iff `is_anchor`.
    pub weight: Option<Rational>,
    pub matrix: AnchorMatrix,
    /// Present iff not `is_anchor`.
    pub witness: Option<Witness>,
}

/// Decides whether `phi` is an anchor. Linear in the total image length.
pub fn is_anchor(phi: &Morphism) -> AnchorReport {
    let matrix = anchor_matrix(phi);
    let first = phi.image_slope(0);
    let all_equal = (1..phi.images.len()).all(|i| phi.image_slope(i) == first);
    if all_equal {
        debug_assert!(matrix.annihilates(first));
        AnchorReport {
            is_anchor: true,
            weight: Some(first),
            matrix,
            witness: None,
        }
    } else {
        let witness = non_anchor_witness(phi).expect("non-anchor has a witness");
        AnchorReport {
            is_anchor: false,
            weight: None,
            matrix,
            witness: Some(witness),
        }
    }
}

/// For a non-anchor, the pair `(s_1^p, s_i^q)` where `s_1` is the smallest
/// letter, `s_i` the smallest letter whose image slope differs from
/// `slope(φ(s_1))`, and `p|φ(s_1)| = q|φ(s_i)| = lcm(|φ(s_1)|, |φ(s_i)|)`.
pub fn non_anchor_witness(phi: &Morphism) -> Result<Witness> {
    let base = phi.image_slope(0);
    let i = (1..phi.images.len())
        .find(|&i| phi.image_slope(i) != base)
        .ok_or_else(|| Error::domain("morphism is an anchor; no witness exists"))?;
    let len1 = phi.images[0].len();
    let len_i = phi.images[i].len();
    let l = len1.lcm(&len_i);
    let s1 = phi.source.symbols()[0];
    let si = phi.source.symbols()[i];
    Ok(Witness {
        first: FiniteWord::new(vec![s1; l / len1]),
        second: FiniteWord::new(vec![si; l / len_i]),
    })
}

/// Explicit bound `2M' + M` on the additive spread of any image under an
/// anchor, where `N` is the longest image, `M = (2N − 2)·max|t|` bounds image
/// sums of source words whose image lengths differ by at most `2N − 2`, and
/// `M'` is the largest sum gap between target words shorter than `N`.
/// Returns `None` for a non-anchor.
pub fn anchor_spread_bound(phi: &Morphism) -> Option<Sum> {
    if !is_anchor(phi).is_anchor {
        return None;
    }
    let n = phi.max_image_len() as Sum;
    let max_abs = phi.target.max_abs() as Sum;
    let m = (2 * n - 2) * max_abs;
    // Over words of length < N the extreme sums come from constant words.
    let short = n - 1;
    let hi = (short * phi.target.max() as Sum).max(0);
    let lo = (short * phi.target.min() as Sum).min(0);
    let m_prime = hi - lo;
    Some(2 * m_prime + m)
}

/// Lazily streams `φ(ω)`.
pub fn apply_morphism(phi: &Morphism, mut inner: WordStream) -> WordStream {
    let phi = phi.clone();
    let mut pos = 0usize;
    let mut buf: Vec<Symbol> = Vec::new();
    let mut k = 0usize;
    WordStream::new(move || {
        while k == buf.len() {
            pos += 1;
            let s = match inner.symbol(pos) {
                Ok(s) => s,
                Err(Error::PrefixUnavailable { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            buf.clear();
            buf.extend_from_slice(phi.image(s)?.symbols());
            k = 0;
        }
        k += 1;
        Ok(Some(buf[k - 1]))
    })
}

/// The word `B1 B2 B1² B2² B1³ B2³ ⋯` built from the non-anchor witness.
pub fn unbounding_stream(phi: &Morphism) -> Result<WordStream> {
    let w = non_anchor_witness(phi)?;
    let (b1, b2) = (w.first.into_symbols(), w.second.into_symbols());
    // round m emits b1 m times then b2 m times
    let mut round = 1usize;
    let mut rep = 0usize;
    let mut idx = 0usize;
    Ok(WordStream::new(move || {
        let block = if rep < round { &b1 } else { &b2 };
        let s = block[idx];
        idx += 1;
        if idx == block.len() {
            idx = 0;
            rep += 1;
            if rep == 2 * round {
                rep = 0;
                round += 1;
            }
        }
        Ok(Some(s))
    }))
}

/// Increment morphism `s ↦ s + 1`, identity elsewhere, for the letter whose
/// count spread between equal-length factors grows fastest over `prefix`.
///
/// Growth of letter `s` is measured at lengths `1, 2, 4, …` up to half the
/// prefix as `max_n C_s(n) − C_s(1)`, where `C_s(n)` is the largest difference
/// of `|B|_s` over length-`n` factors. Ties go to the smallest letter. When
/// `s + 1` is already a letter the target drops `s`; otherwise it gains `s + 1`.
pub fn abelian_unbounding_morphism(prefix: WordView<'_>) -> Result<Morphism> {
    let alphabet = prefix.alphabet()?;
    let len = prefix.len();
    let mut lengths = vec![1usize];
    while lengths.last().unwrap() * 2 <= (len / 2).max(1) {
        lengths.push(lengths.last().unwrap() * 2);
    }
    let mut best: Option<(usize, Symbol)> = None;
    let mut counts = vec![0usize; len + 1];
    for &s in alphabet.symbols() {
        for (i, &x) in prefix.symbols().iter().enumerate() {
            counts[i + 1] = counts[i] + usize::from(x == s);
        }
        let spread_at = |n: usize| -> usize {
            let (mut lo, mut hi) = (usize::MAX, 0usize);
            for i in 0..=len - n {
                let c = counts[i + n] - counts[i];
                lo = lo.min(c);
                hi = hi.max(c);
            }
            hi - lo
        };
        let base = spread_at(1);
        let growth = lengths.iter().map(|&n| spread_at(n)).max().unwrap_or(0) - base;
        if best.is_none_or(|(g, _)| growth > g) {
            best = Some((growth, s));
        }
    }
    let (_, s) = best.expect("alphabet is nonempty");
    let mut target: Vec<Symbol> = alphabet
        .symbols()
        .iter()
        .copied()
        .filter(|&t| t != s)
        .collect();
    if !alphabet.contains(s + 1) {
        target.push(s + 1);
    }
    let rules = alphabet
        .symbols()
        .iter()
        .map(|&t| (t, vec![if t == s { s + 1 } else { t }]));
    Morphism::with_target(rules, Alphabet::new(target)?)
}
