//! Slopes, deviation constants and the `χ` coloring, all in exact arithmetic.
//!
//! For a rational slope `p/q` the scaled deviation `E[i] = q·P[i] − p·i` is an
//! integer, and `ω[a, b]` has slope `p/q` exactly when `E[b] = E[a − 1]`.
//! Most of this module is a scan over `E`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::word::{Rational, Sum, Symbol, WordView};

/// Rational slope `p/q` in lowest terms with `q ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalSlope {
    p: i64,
    q: i64,
}

impl RationalSlope {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::domain("slope denominator must be nonzero"));
        }
        let g = p.gcd(&q);
        let (p, q) = if q < 0 {
            (-p / g, -q / g)
        } else {
            (p / g, q / g)
        };
        Ok(RationalSlope { p, q })
    }

    pub fn integer(p: i64) -> Self {
        RationalSlope { p, q: 1 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.p as i128, self.q as i128)
    }

    /// `E[i] = q·P[i] − p·i`.
    fn scaled_deviation(&self, word: WordView<'_>, i: usize) -> Sum {
        self.q as Sum * word.prefix_sum(i) - self.p as Sum * i as Sum
    }

    fn scaled_deviations<'a>(&self, word: WordView<'a>) -> impl Iterator<Item = Sum> + 'a {
        let (p, q) = (self.p as Sum, self.q as Sum);
        word.prefix_sums()
            .iter()
            .enumerate()
            .map(move |(i, &s)| q * s - p * i as Sum)
    }
}

impl TryFrom<Rational> for RationalSlope {
    type Error = Error;

    fn try_from(r: Rational) -> Result<Self> {
        let p = i64::try_from(*r.numer()).map_err(|_| Error::Overflow("slope numerator"))?;
        let q = i64::try_from(*r.denom()).map_err(|_| Error::Overflow("slope denominator"))?;
        RationalSlope::new(p, q)
    }
}

impl fmt::Display for RationalSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for RationalSlope {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("invalid slope {s:?}, expected p/q"));
        match s.split_once('/') {
            Some((p, q)) => RationalSlope::new(
                p.trim().parse().map_err(|_| bad())?,
                q.trim().parse().map_err(|_| bad())?,
            ),
            None => Ok(RationalSlope::integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

/// Slope of every prefix at lengths `1, 2, 4, …` up to the prefix length,
/// ending with the full prefix.
pub fn slope_estimate(word: WordView<'_>) -> Result<Vec<(usize, Rational)>> {
    if word.is_empty() {
        return Err(Error::domain("slope estimate needs a nonempty prefix"));
    }
    let len = word.len();
    let mut out = Vec::new();
    let mut n = 1usize;
    while n < len {
        out.push((n, Rational::new(word.prefix_sum(n), n as i128)));
        n *= 2;
    }
    out.push((len, Rational::new(word.total(), len as i128)));
    Ok(out)
}

/// Largest `|ΣB − |B|·α|` over nonempty factors of a prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeviationStats {
    pub slope: RationalSlope,
    pub prefix_len: usize,
    pub max_abs_deviation: Rational,
}

/// Spread of `P[i] − i·α` over `0 ≤ i ≤ L`, which equals the largest
/// deviation of any factor from slope `α`.
pub fn deviation_constant(word: WordView<'_>, alpha: RationalSlope) -> Result<DeviationStats> {
    if word.is_empty() {
        return Err(Error::domain("deviation constant needs a nonempty prefix"));
    }
    let (lo, hi) = alpha
        .scaled_deviations(word)
        .fold((Sum::MAX, Sum::MIN), |(lo, hi), e| (lo.min(e), hi.max(e)));
    Ok(DeviationStats {
        slope: alpha,
        prefix_len: word.len(),
        max_abs_deviation: Rational::new(hi - lo, alpha.q as i128),
    })
}

/// `χ(m) = Σω[1, mq] − mp`.
pub fn chi(word: WordView<'_>, alpha: RationalSlope, m: usize) -> Result<Sum> {
    if m == 0 {
        return Err(Error::domain("chi is defined for m >= 1"));
    }
    let end = m
        .checked_mul(alpha.q as usize)
        .ok_or(Error::Overflow("chi index"))?;
    if end > word.len() {
        return Err(Error::PrefixUnavailable {
            requested: end,
            available: word.len(),
        });
    }
    Ok(word.prefix_sum(end) - m as Sum * alpha.p as Sum)
}

/// `χ(1), …, χ(⌊L/q⌋)`; entry `m − 1` holds `χ(m)`.
pub fn chi_colors(word: WordView<'_>, alpha: RationalSlope) -> Vec<Sum> {
    let q = alpha.q as usize;
    (1..=word.len() / q)
        .map(|m| word.prefix_sum(m * q) - m as Sum * alpha.p as Sum)
        .collect()
}

/// Slope of `ω[a, b]`.
pub fn block_slope(word: WordView<'_>, a: usize, b: usize) -> Result<Rational> {
    word.check_range(a, b)?;
    Ok(Rational::new(word.range_sum(a, b), (b - a + 1) as i128))
}

/// `ω = A·B_1·B_2⋯` cut at the positions `m·q` where `χ` takes its most
/// frequent color. `cuts[0] = |A|`; block `B_i` is `ω[cuts[i−1]+1, cuts[i]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiFactorization {
    pub slope: RationalSlope,
    pub color: Sum,
    pub color_range: (Sum, Sum),
    pub cuts: Vec<usize>,
}

impl ChiFactorization {
    pub fn prefix_len(&self) -> usize {
        self.cuts[0]
    }

    /// Blocks as 1-based inclusive index pairs.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cuts.windows(2).map(|w| (w[0] + 1, w[1]))
    }

    pub fn max_block_len(&self) -> usize {
        self.cuts.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }
}

pub fn chi_factorization(word: WordView<'_>, alpha: RationalSlope) -> Result<ChiFactorization> {
    let colors = chi_colors(word, alpha);
    let mut freq: HashMap<Sum, usize> = HashMap::new();
    for &c in &colors {
        *freq.entry(c).or_default() += 1;
    }
    let (color, count) = freq
        .iter()
        .map(|(&c, &n)| (c, n))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .ok_or_else(|| Error::NotFound("no chi colors in the prefix".into()))?;
    if count < 2 {
        return Err(Error::NotFound(format!(
            "no chi color repeats within {} symbols",
            word.len()
        )));
    }
    let q = alpha.q as usize;
    let cuts = colors
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == color)
        .map(|(i, _)| (i + 1) * q)
        .collect();
    let lo = *colors.iter().min().unwrap_or(&0);
    let hi = *colors.iter().max().unwrap_or(&0);
    Ok(ChiFactorization {
        slope: alpha,
        color,
        color_range: (lo, hi),
        cuts,
    })
}

/// Greedy cuts from a start index: each cut is the least index closing a
/// block of slope `α` begun right after the previous cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyCuts {
    pub start: usize,
    pub cuts: Vec<usize>,
    /// Set when the prefix ran out before a further cut was found.
    pub truncated: bool,
}

impl GreedyCuts {
    /// Block lengths `k_1 − start + 1, k_2 − k_1, …`.
    pub fn gaps(&self) -> Vec<usize> {
        let mut prev = self.start - 1;
        self.cuts
            .iter()
            .map(|&c| {
                let g = c - prev;
                prev = c;
                g
            })
            .collect()
    }

    pub fn max_gap(&self) -> usize {
        self.gaps().into_iter().max().unwrap_or(0)
    }
}

pub fn greedy_slope_cuts(
    word: WordView<'_>,
    alpha: RationalSlope,
    start: usize,
) -> Result<GreedyCuts> {
    if start == 0 || start > word.len() {
        return Err(Error::domain(format!(
            "start {start} outside 1..={}",
            word.len()
        )));
    }
    let mut cuts = Vec::new();
    let mut anchor = alpha.scaled_deviation(word, start - 1);
    let mut last = start - 1;
    for i in start..=word.len() {
        let e = alpha.scaled_deviation(word, i);
        if e == anchor {
            cuts.push(i);
            anchor = e;
            last = i;
        }
    }
    Ok(GreedyCuts {
        start,
        cuts,
        truncated: last < word.len(),
    })
}

/// Distinct factors `B` with `1 ≤ |B| ≤ n_max` and slope exactly `α`.
pub fn factors_with_slope(word: WordView<'_>, alpha: Rational, n_max: usize) -> Result<usize> {
    if n_max > word.len() {
        return Err(Error::domain(format!(
            "n_max {n_max} exceeds prefix length {}",
            word.len()
        )));
    }
    let (p, q) = (*alpha.numer(), *alpha.denom());
    let sums = word.prefix_sums();
    let mut total = 0;
    // a factor of slope p/q has length divisible by q
    for n in (q as usize..=n_max).step_by(q as usize) {
        let target = p * (n as i128 / q);
        let found: HashSet<&[Symbol]> = (0..=word.len() - n)
            .filter(|&i| sums[i + n] - sums[i] == target)
            .map(|i| &word.symbols()[i..i + n])
            .collect();
        total += found.len();
    }
    Ok(total)
}
