//! Constructors for the infinite words studied here.
//!
//! Every constructor returns a [`WordStream`]; symbols are produced on demand
//! in exact integer arithmetic.

use std::fmt;

use crate::error::{Error, Result};
use crate::morphism::{apply_morphism, Morphism};
use crate::word::{Interval, Symbol, WordStream};

/// `ω(i) = pattern[(i − 1) mod |pattern|]`.
pub fn periodic(pattern: Vec<Symbol>) -> Result<WordStream> {
    if pattern.is_empty() {
        return Err(Error::domain("periodic pattern must be nonempty"));
    }
    let mut i = 0usize;
    Ok(WordStream::new(move || {
        let s = pattern[i];
        i = (i + 1) % pattern.len();
        Ok(Some(s))
    }))
}

/// The fixed point of `phi` beginning with `seed`.
///
/// `phi(seed)` must start with `seed` and have length at least 2, and every
/// image symbol must itself be a letter of `phi`.
pub fn morphic_fixed_point(phi: &Morphism, seed: Symbol) -> Result<WordStream> {
    let head = phi.image(seed)?;
    if head.len() < 2 || head.symbols()[0] != seed {
        return Err(Error::domain(format!(
            "morphism is not prolongable on {seed}: image is [{head}]"
        )));
    }
    if let Some(&t) = phi
        .target()
        .symbols()
        .iter()
        .find(|&&t| !phi.source().contains(t))
    {
        return Err(Error::domain(format!(
            "fixed point needs an endomorphism; {t} has no image"
        )));
    }
    let phi = phi.clone();
    // out[0..] is the fixed point; out[expanded] is the next letter whose image gets appended.
    let mut out: Vec<Symbol> = head.symbols().to_vec();
    let mut expanded = 1usize;
    let mut next = 0usize;
    Ok(WordStream::new(move || {
        while next >= out.len() {
            let s = out[expanded];
            out.extend_from_slice(phi.image(s)?.symbols());
            expanded += 1;
        }
        next += 1;
        Ok(Some(out[next - 1]))
    }))
}

/// Thue–Morse word, fixed point of `0 → 01, 1 → 10`.
pub fn thue_morse() -> WordStream {
    let phi = Morphism::new([(0, vec![0, 1]), (1, vec![1, 0])]).expect("valid morphism");
    morphic_fixed_point(&phi, 0).expect("prolongable")
}

/// Fibonacci word, fixed point of `0 → 01, 1 → 0`.
pub fn fibonacci_word() -> WordStream {
    let phi = Morphism::new([(0, vec![0, 1]), (1, vec![0])]).expect("valid morphism");
    morphic_fixed_point(&phi, 0).expect("prolongable")
}

/// Continued fraction `[0; a_1, a_2, …]` of a slope in `(0, 1)`.
///
/// The last `repeat` terms cycle forever; `repeat == 0` denotes the finite
/// expansion of a rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    terms: Vec<u64>,
    repeat: usize,
}

impl ContinuedFraction {
    pub fn new(terms: Vec<u64>, repeat: usize) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("continued fraction needs at least one term"));
        }
        if terms.contains(&0) {
            return Err(Error::domain("continued fraction terms must be positive"));
        }
        if repeat > terms.len() {
            return Err(Error::domain(format!(
                "repeat={repeat} exceeds the {} given terms",
                terms.len()
            )));
        }
        if repeat == 0 && terms == [1] {
            return Err(Error::domain("[0;1] = 1 is not a slope in (0,1)"));
        }
        Ok(ContinuedFraction { terms, repeat })
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn repeat(&self) -> usize {
        self.repeat
    }

    pub fn is_rational(&self) -> bool {
        self.repeat == 0
    }

    /// The `i`-th partial quotient `a_i`, 1-based; `None` past a finite expansion.
    pub fn term(&self, i: usize) -> Option<u64> {
        let n = self.terms.len();
        if i <= n {
            Some(self.terms[i - 1])
        } else if self.repeat == 0 {
            None
        } else {
            let start = n - self.repeat;
            Some(self.terms[start + (i - 1 - start) % self.repeat])
        }
    }

    /// `(p, q)` of a finite expansion, in lowest terms.
    pub fn rational(&self) -> Option<(i128, i128)> {
        if !self.is_rational() {
            return None;
        }
        // fold from the innermost term: x = 1/(a_i + x)
        let (mut num, mut den) = (0i128, 1i128);
        for &a in self.terms.iter().rev() {
            let new_den = a as i128 * den + num;
            num = den;
            den = new_den;
        }
        Some((num, den))
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cf=")?;
        for (i, a) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        if self.repeat > 0 {
            write!(f, ";repeat={}", self.repeat)?;
        }
        Ok(())
    }
}

/// Standard words `s_{-1} = 1`, `s_0 = 0`, `s_1 = s_0^{a_1 − 1} s_{-1}`,
/// `s_n = s_{n−1}^{a_n} s_{n−2}`.
struct StandardWords {
    cf: ContinuedFraction,
    prev: Vec<Symbol>,
    cur: Vec<Symbol>,
    n: usize,
}

impl StandardWords {
    fn new(cf: ContinuedFraction) -> Self {
        let a1 = cf.term(1).expect("nonempty expansion") as usize;
        let mut cur = vec![0; a1 - 1];
        cur.push(1);
        StandardWords {
            cf,
            prev: vec![0],
            cur,
            n: 1,
        }
    }

    /// Advances to `s_{n+1}`; false when a finite expansion is exhausted.
    fn advance(&mut self) -> bool {
        let Some(a) = self.cf.term(self.n + 1) else {
            return false;
        };
        let mut next = Vec::with_capacity(self.cur.len() * a as usize + self.prev.len());
        for _ in 0..a {
            next.extend_from_slice(&self.cur);
        }
        next.extend_from_slice(&self.prev);
        self.prev = std::mem::replace(&mut self.cur, next);
        self.n += 1;
        true
    }
}

/// The lower mechanical word `ω(i) = ⌊iα⌋ − ⌊(i − 1)α⌋` of slope
/// `α = [0; a_1, a_2, …]`, built from standard words.
///
/// For irrational `α` this is `0` followed by the limit of the standard
/// words. For rational `α = p/q` the last standard word is `w·xy` with `xy`
/// in `{01, 10}` and the word is the periodic `(0 w 1)^ω`.
pub fn mechanical(cf: &ContinuedFraction) -> Result<WordStream> {
    let mut words = StandardWords::new(cf.clone());
    if cf.is_rational() {
        while words.advance() {}
        let s = &words.cur;
        let mut period = Vec::with_capacity(s.len());
        period.push(0);
        period.extend_from_slice(&s[..s.len().saturating_sub(2)]);
        period.push(1);
        if s.len() < 2 {
            // α = 1/q with q = 1 is excluded; s = "1" only arises from [0;1].
            return Err(Error::domain("slope must lie in (0,1)"));
        }
        return periodic(period);
    }
    let mut i = 0usize;
    Ok(WordStream::new(move || {
        i += 1;
        if i == 1 {
            return Ok(Some(0));
        }
        while words.cur.len() < i - 1 {
            words.advance();
        }
        Ok(Some(words.cur[i - 2]))
    }))
}

/// Concatenation of all nonempty words over `{0, …, k}`, shortest first and
/// lexicographically ascending within each length.
pub fn enum_word(k: Symbol) -> Result<WordStream> {
    if k < 1 {
        return Err(Error::domain("enum_word needs k >= 1"));
    }
    let mut digits: Vec<Symbol> = vec![0];
    let mut pos = 0usize;
    Ok(WordStream::new(move || {
        if pos == digits.len() {
            pos = 0;
            // increment as a base-(k+1) counter; wrap to the next length
            let mut j = digits.len();
            loop {
                if j == 0 {
                    let len = digits.len() + 1;
                    digits.clear();
                    digits.resize(len, 0);
                    break;
                }
                j -= 1;
                if digits[j] < k {
                    digits[j] += 1;
                    break;
                }
                digits[j] = 0;
            }
        }
        pos += 1;
        Ok(Some(digits[pos - 1]))
    }))
}

/// Image of [`enum_word`] under the anchor `i ↦ i (2k − i)`; its additive
/// complexity is `2k + 1` at every length.
pub fn thm11_word(k: Symbol) -> Result<WordStream> {
    Ok(apply_morphism(&Morphism::anchor_pair(k)?, enum_word(k)?))
}

/// `ω' = X'_1 X'_2 ⋯` where `X'_n` concatenates all of `[1,n]^n` in
/// ascending lexicographic order.
pub fn sec24_driver() -> WordStream {
    let mut n = 1usize;
    let mut digits: Vec<Symbol> = vec![1];
    let mut pos = 0usize;
    WordStream::new(move || {
        if pos == digits.len() {
            pos = 0;
            let mut j = n;
            loop {
                if j == 0 {
                    n += 1;
                    digits.clear();
                    digits.resize(n, 1);
                    break;
                }
                j -= 1;
                if digits[j] < n as Symbol {
                    digits[j] += 1;
                    break;
                }
                digits[j] = 1;
            }
        }
        pos += 1;
        Ok(Some(digits[pos - 1]))
    })
}

/// `ω = X_1 X_2 ⋯` with `X_n = 0 1^{ω'(n)} 2` when `ω'(n)` is odd and
/// `2 1^{ω'(n)} 0` otherwise. Slope 1, spread at most 4, but slope-1
/// factorizations need unbounded block lengths.
pub fn sec24_word() -> WordStream {
    let mut driver = sec24_driver();
    let mut n = 0usize;
    let mut block: Vec<Symbol> = Vec::new();
    let mut pos = 0usize;
    WordStream::new(move || {
        if pos == block.len() {
            n += 1;
            let m = driver.symbol(n)?;
            let (open, close) = if m % 2 == 1 { (0, 2) } else { (2, 0) };
            block.clear();
            block.push(open);
            block.extend(std::iter::repeat_n(1, m as usize));
            block.push(close);
            pos = 0;
        }
        pos += 1;
        Ok(Some(block[pos - 1]))
    })
}

/// `1, 2, …, n − 1, n, n, n, …`.
pub fn constant_tail_word(n: Symbol) -> Result<WordStream> {
    if n < 1 {
        return Err(Error::domain("constant_tail_word needs n >= 1"));
    }
    Ok(WordStream::from_fn(move |i| (i as Symbol).min(n)))
}

/// Block lengths of a splice: round `j` takes `rounds[j mod r][i]` symbols
/// from source `i`. The table repeats forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceSchedule {
    rounds: Vec<Vec<usize>>,
}

impl SpliceSchedule {
    /// Each row lists one block length per source. At least one length in
    /// the table must be positive so every cycle emits a symbol.
    pub fn new(rounds: Vec<Vec<usize>>) -> Result<Self> {
        let Some(width) = rounds.first().map(Vec::len) else {
            return Err(Error::domain("splice schedule needs at least one round"));
        };
        if width == 0 {
            return Err(Error::domain(
                "splice schedule rounds must list a length per source",
            ));
        }
        if rounds.iter().any(|r| r.len() != width) {
            return Err(Error::domain(
                "every splice round must have the same number of lengths",
            ));
        }
        if rounds.iter().flatten().all(|&l| l == 0) {
            return Err(Error::domain("splice schedule emits no symbols"));
        }
        Ok(SpliceSchedule { rounds })
    }

    pub fn rounds(&self) -> &[Vec<usize>] {
        &self.rounds
    }

    pub fn sources(&self) -> usize {
        self.rounds[0].len()
    }
}

impl fmt::Display for SpliceSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, row) in self.rounds.iter().enumerate() {
            if j > 0 {
                write!(f, ";")?;
            }
            for (i, l) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

/// `B_{1,1} B_{2,1} ⋯ B_{n,1} B_{1,2} ⋯` where the blocks taken from each
/// source always concatenate to a prefix of that source.
pub fn splice(sources: Vec<WordStream>, schedule: SpliceSchedule) -> Result<WordStream> {
    if schedule.sources() != sources.len() {
        return Err(Error::domain(format!(
            "splice schedule lists {} lengths per round for {} sources",
            schedule.sources(),
            sources.len()
        )));
    }
    splice_rounds(sources, schedule.rounds.into_iter().cycle())
}

/// Splice driven by an arbitrary sequence of rounds. The stream ends when
/// the rounds run out; a round of the wrong width is an error when reached.
pub fn splice_rounds(
    mut sources: Vec<WordStream>,
    mut rounds: impl Iterator<Item = Vec<usize>> + Send + 'static,
) -> Result<WordStream> {
    if sources.is_empty() {
        return Err(Error::domain("splice needs at least one source"));
    }
    let width = sources.len();
    let mut consumed = vec![0usize; width];
    let mut current: Vec<usize> = Vec::new();
    let (mut src, mut left) = (0usize, 0usize);
    Ok(WordStream::new(move || {
        while left == 0 {
            src += 1;
            if src >= current.len() {
                let Some(next) = rounds.next() else {
                    return Ok(None);
                };
                if next.len() != width {
                    return Err(Error::domain(format!(
                        "splice round lists {} lengths for {width} sources",
                        next.len()
                    )));
                }
                current = next;
                src = 0;
            }
            left = current[src];
        }
        left -= 1;
        consumed[src] += 1;
        match sources[src].symbol(consumed[src]) {
            Ok(s) => Ok(Some(s)),
            Err(Error::PrefixUnavailable { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }))
}

/// A set of intervals with at least one position between consecutive members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparatedIntervalSet {
    /// Finite, increasing list; positions past the last interval are kept.
    Explicit(Vec<Interval>),
    /// `[start + j·period, start + j·period + width − 1]` for all `j ≥ 0`.
    Arithmetic {
        start: usize,
        period: usize,
        width: usize,
    },
}

impl SeparatedIntervalSet {
    pub fn explicit(intervals: Vec<Interval>) -> Result<Self> {
        for pair in intervals.windows(2) {
            if pair[0].hi() + 1 >= pair[1].lo() {
                return Err(Error::domain(format!(
                    "intervals {} and {} are not separated",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(SeparatedIntervalSet::Explicit(intervals))
    }

    pub fn arithmetic(start: usize, period: usize, width: usize) -> Result<Self> {
        if start == 0 || width == 0 {
            return Err(Error::domain(
                "arithmetic intervals need start >= 1 and width >= 1",
            ));
        }
        if width >= period {
            return Err(Error::domain(format!(
                "width {width} with period {period} leaves no gap between intervals"
            )));
        }
        Ok(SeparatedIntervalSet::Arithmetic {
            start,
            period,
            width,
        })
    }

    /// The `j`-th interval (0-based), if any.
    pub fn get(&self, j: usize) -> Option<Interval> {
        match self {
            SeparatedIntervalSet::Explicit(v) => v.get(j).copied(),
            SeparatedIntervalSet::Arithmetic {
                start,
                period,
                width,
            } => {
                let lo = start + j * period;
                Some(Interval::new(lo, lo + width - 1).expect("width >= 1"))
            }
        }
    }

    /// Whether `i` lies inside some interval.
    pub fn contains(&self, i: usize) -> bool {
        match self {
            SeparatedIntervalSet::Explicit(v) => {
                let k = v.partition_point(|iv| iv.hi() < i);
                v.get(k).is_some_and(|iv| iv.contains(i))
            }
            SeparatedIntervalSet::Arithmetic {
                start,
                period,
                width,
            } => i >= *start && (i - start) % period < *width,
        }
    }
}

/// `ω ∖ 𝓘`: drops every position inside an interval of `intervals`.
pub fn contract(mut w: WordStream, intervals: SeparatedIntervalSet) -> WordStream {
    let mut pos = 0usize;
    let mut j = 0usize;
    let mut next = intervals.get(0);
    WordStream::new(move || {
        pos += 1;
        if let Some(iv) = next {
            if pos == iv.lo() {
                pos = iv.hi() + 1;
                j += 1;
                next = intervals.get(j);
            }
        }
        match w.symbol(pos) {
            Ok(s) => Ok(Some(s)),
            Err(Error::PrefixUnavailable { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    })
}
