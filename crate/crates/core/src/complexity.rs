//! Additive, abelian and lattice complexity over a materialized prefix.
//!
//! All counts are taken over the factors of `ω[1..L]` only, so they are
//! lower bounds on the true complexity and never decrease as `L` grows.
//! Each length `n` costs one O(L) pass over prefix sums (or prefix vectors
//! for lattice maps).

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Sum, Symbol, WordView};

/// Largest prefix the enumeration oracle accepts.
pub const ORACLE_MAX_PREFIX: usize = 10_000;

/// Most distinct images `lattice_spread` compares pairwise.
pub const SPREAD_MAX_IMAGES: usize = 100_000;

/// Additive map `μ: S* → Z^t`, given by one integer vector per letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    alphabet: Alphabet,
    dim: usize,
    /// `images[i]` is `μ(alphabet[i])`.
    images: Vec<Vec<i64>>,
}

impl LatticeMap {
    pub fn new(rules: impl IntoIterator<Item = (Symbol, Vec<i64>)>) -> Result<Self> {
        let mut rules: Vec<(Symbol, Vec<i64>)> = rules.into_iter().collect();
        rules.sort_by_key(|r| r.0);
        let alphabet = Alphabet::new(rules.iter().map(|r| r.0))?;
        let dim = rules[0].1.len();
        if dim == 0 {
            return Err(Error::domain("lattice map needs dimension >= 1"));
        }
        if let Some((s, v)) = rules.iter().find(|r| r.1.len() != dim) {
            return Err(Error::domain(format!(
                "image of {s} has dimension {}, expected {dim}",
                v.len()
            )));
        }
        Ok(LatticeMap {
            alphabet,
            dim,
            images: rules.into_iter().map(|r| r.1).collect(),
        })
    }

    /// `Σ`: `t = 1`, `μ(s) = s`.
    pub fn sum(alphabet: &Alphabet) -> Self {
        LatticeMap {
            alphabet: alphabet.clone(),
            dim: 1,
            images: alphabet.symbols().iter().map(|&s| vec![s]).collect(),
        }
    }

    /// Parikh map `ψ`: unit vectors in alphabet order.
    pub fn parikh(alphabet: &Alphabet) -> Self {
        let k = alphabet.len();
        LatticeMap {
            alphabet: alphabet.clone(),
            dim: k,
            images: (0..k)
                .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, s: Symbol) -> Result<&[i64]> {
        self.alphabet
            .index_of(s)
            .map(|i| self.images[i].as_slice())
            .ok_or(Error::ForeignSymbol(s))
    }

    pub fn rules(&self) -> impl Iterator<Item = (Symbol, &[i64])> {
        self.alphabet
            .symbols()
            .iter()
            .copied()
            .zip(self.images.iter().map(Vec::as_slice))
    }

    /// `μ(word)`.
    pub fn apply(&self, word: &[Symbol]) -> Result<Vec<Sum>> {
        let mut acc = vec![0 as Sum; self.dim];
        for &s in word {
            for (a, &x) in acc.iter_mut().zip(self.image(s)?) {
                *a += x as Sum;
            }
        }
        Ok(acc)
    }

    /// Row-major prefix vectors: entries `[i*t .. (i+1)*t]` hold `μ(ω[1..i])`.
    pub(crate) fn prefix_vectors(&self, word: WordView<'_>) -> Result<Vec<Sum>> {
        let t = self.dim;
        let mut out = vec![0 as Sum; (word.len() + 1) * t];
        for (i, &s) in word.symbols().iter().enumerate() {
            let img = self.image(s)?;
            let (done, rest) = out.split_at_mut((i + 1) * t);
            let prev = &done[i * t..];
            for k in 0..t {
                rest[k] = prev[k] + img[k] as Sum;
            }
        }
        Ok(out)
    }
}

/// Which complexity a profile measures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Additive,
    Abelian,
    Lattice(LatticeMap),
}

fn check_length(word: WordView<'_>, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("factor length must be at least 1"));
    }
    if n > word.len() {
        return Err(Error::domain(format!(
            "factor length {n} exceeds prefix length {}",
            word.len()
        )));
    }
    Ok(())
}

/// Sums of all length-`n` factors, `P[i+n] − P[i]`.
fn window_sums(word: WordView<'_>, n: usize) -> impl Iterator<Item = Sum> + '_ {
    let p = word.prefix_sums();
    p[n..].iter().zip(p).map(|(hi, lo)| hi - lo)
}

fn min_max(values: impl Iterator<Item = Sum>) -> (Sum, Sum) {
    values.fold((Sum::MAX, Sum::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// `ρ^Σ(n)` over the prefix: number of distinct length-`n` factor sums.
pub fn additive_complexity(word: WordView<'_>, n: usize) -> Result<usize> {
    check_length(word, n)?;
    let (lo, hi) = min_max(window_sums(word, n));
    let range = hi - lo;
    // dense bitmap when the sums sit in a narrow band, hash set otherwise
    if range <= 4 * word.len() as Sum + 64 {
        let mut seen = vec![false; range as usize + 1];
        let mut count = 0usize;
        for v in window_sums(word, n) {
            let slot = &mut seen[(v - lo) as usize];
            if !*slot {
                *slot = true;
                count += 1;
            }
        }
        Ok(count)
    } else {
        Ok(window_sums(word, n).collect::<HashSet<_>>().len())
    }
}

/// Largest minus smallest length-`n` factor sum.
pub fn sum_spread(word: WordView<'_>, n: usize) -> Result<Sum> {
    check_length(word, n)?;
    let (lo, hi) = min_max(window_sums(word, n));
    Ok(hi - lo)
}

/// Distinct `μ`-images of length-`n` factors.
fn distinct_images(prefix: &[Sum], t: usize, len: usize, n: usize) -> HashSet<Vec<Sum>> {
    let mut set: HashSet<Vec<Sum>> = HashSet::new();
    let mut buf = vec![0 as Sum; t];
    for i in 0..=len - n {
        let lo = &prefix[i * t..(i + 1) * t];
        let hi = &prefix[(i + n) * t..(i + n + 1) * t];
        for k in 0..t {
            buf[k] = hi[k] - lo[k];
        }
        if !set.contains(buf.as_slice()) {
            set.insert(buf.clone());
        }
    }
    set
}

/// `ρ^μ(n)` over the prefix.
pub fn lattice_complexity(word: WordView<'_>, mu: &LatticeMap, n: usize) -> Result<usize> {
    check_length(word, n)?;
    let prefix = mu.prefix_vectors(word)?;
    Ok(distinct_images(&prefix, mu.dim, word.len(), n).len())
}

fn squared_distance(a: &[Sum], b: &[Sum]) -> Sum {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Largest squared Euclidean distance between two distinct images.
fn max_squared_distance(images: &[Vec<Sum>], limit: usize) -> Result<Sum> {
    if images.len() > limit {
        return Err(Error::GuardExceeded {
            what: "distinct lattice images",
            value: images.len(),
            limit,
        });
    }
    let Some(first) = images.first() else {
        return Ok(0);
    };
    // the bounding-box diagonal caps every pairwise distance
    let t = first.len();
    let mut lo = first.clone();
    let mut hi = first.clone();
    for v in images {
        for k in 0..t {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    let cap = squared_distance(&lo, &hi);
    let mut best = 0;
    for (i, a) in images.iter().enumerate() {
        for b in &images[i + 1..] {
            best = best.max(squared_distance(a, b));
            if best == cap {
                return Ok(best);
            }
        }
    }
    Ok(best)
}

/// Largest squared distance `||μ(B) − μ(B')||²` over length-`n` factors.
pub fn lattice_spread(word: WordView<'_>, mu: &LatticeMap, n: usize) -> Result<Sum> {
    lattice_spread_with_limit(word, mu, n, SPREAD_MAX_IMAGES)
}

pub fn lattice_spread_with_limit(
    word: WordView<'_>,
    mu: &LatticeMap,
    n: usize,
    max_images: usize,
) -> Result<Sum> {
    check_length(word, n)?;
    let prefix = mu.prefix_vectors(word)?;
    let images: Vec<Vec<Sum>> = distinct_images(&prefix, mu.dim, word.len(), n)
        .into_iter()
        .collect();
    max_squared_distance(&images, max_images)
}

/// Parikh vector of `word` in alphabet order.
pub fn parikh(word: &[Symbol], alphabet: &Alphabet) -> Result<Vec<usize>> {
    let mut v = vec![0usize; alphabet.len()];
    for &s in word {
        v[alphabet.index_of(s).ok_or(Error::ForeignSymbol(s))?] += 1;
    }
    Ok(v)
}

/// One row of a complexity profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub n: usize,
    pub count: usize,
    /// `max − min` of sums in additive mode, squared Euclidean diameter otherwise.
    pub spread: Sum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityProfile {
    pub mode: Mode,
    pub prefix_len: usize,
    pub rows: Vec<ProfileRow>,
}

/// Counts and spreads for every `n` in `1..=n_max`, evaluated in parallel
/// over the shared prefix and returned in ascending `n`.
pub fn profile(word: WordView<'_>, mode: Mode, n_max: usize) -> Result<ComplexityProfile> {
    profile_with_limit(word, mode, n_max, SPREAD_MAX_IMAGES)
}

pub fn profile_with_limit(
    word: WordView<'_>,
    mode: Mode,
    n_max: usize,
    max_images: usize,
) -> Result<ComplexityProfile> {
    if n_max > word.len() {
        return Err(Error::domain(format!(
            "n_max {n_max} exceeds prefix length {}",
            word.len()
        )));
    }
    let mu = match &mode {
        Mode::Additive => None,
        Mode::Abelian => Some(LatticeMap::parikh(&word.alphabet()?)),
        Mode::Lattice(mu) => Some(mu.clone()),
    };
    let rows: Result<Vec<ProfileRow>> = match mu {
        None => (1..=n_max)
            .into_par_iter()
            .map(|n| {
                Ok(ProfileRow {
                    n,
                    count: additive_complexity(word, n)?,
                    spread: sum_spread(word, n)?,
                })
            })
            .collect(),
        Some(mu) => {
            let prefix = mu.prefix_vectors(word)?;
            (1..=n_max)
                .into_par_iter()
                .map(|n| {
                    let images: Vec<Vec<Sum>> = distinct_images(&prefix, mu.dim, word.len(), n)
                        .into_iter()
                        .collect();
                    Ok(ProfileRow {
                        n,
                        count: images.len(),
                        spread: max_squared_distance(&images, max_images)?,
                    })
                })
                .collect()
        }
    };
    Ok(ComplexityProfile {
        mode,
        prefix_len: word.len(),
        rows: rows?,
    })
}

/// Reference count of distinct `μ`-images: copies every factor and applies
/// `μ` to it symbol by symbol. Refuses prefixes longer than [`ORACLE_MAX_PREFIX`].
pub fn naive_complexity_oracle(word: WordView<'_>, mu: &LatticeMap, n: usize) -> Result<usize> {
    if word.len() > ORACLE_MAX_PREFIX {
        return Err(Error::GuardExceeded {
            what: "oracle prefix length",
            value: word.len(),
            limit: ORACLE_MAX_PREFIX,
        });
    }
    check_length(word, n)?;
    let mut seen = HashSet::new();
    for start in 0..=word.len() - n {
        let factor: Vec<Symbol> = word.symbols()[start..start + n].to_vec();
        seen.insert(mu.apply(&factor)?);
    }
    Ok(seen.len())
}

/// Number of length-`n` words that are factors of both prefixes.
pub fn factor_set_intersection(a: WordView<'_>, b: WordView<'_>, n: usize) -> Result<usize> {
    check_length(a, n)?;
    check_length(b, n)?;
    let fa: HashSet<&[Symbol]> = a.symbols().windows(n).collect();
    let fb: HashSet<&[Symbol]> = b.symbols().windows(n).collect();
    Ok(fa.intersection(&fb).count())
}

/// Number of distinct length-`n` factors of the prefix.
pub fn factor_count(word: WordView<'_>, n: usize) -> Result<usize> {
    check_length(word, n)?;
    Ok(word.symbols().windows(n).collect::<HashSet<_>>().len())
}
