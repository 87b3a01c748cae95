//! Alphabets, finite words and lazily materialized infinite words.
//!
//! Every finite word carries its prefix sums, so the sum of any factor is a
//! single subtraction. Public indices are 1-based and intervals inclusive:
//! `factor(m, n)` is `x_m x_{m+1} ... x_n`.
//!
//! Symbols are `i64` and sums are `i128`. A prefix sum of at most `2^63`
//! symbols of magnitude at most `2^63` fits in 126 bits, so no sum computed
//! over a materializable prefix can overflow.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Symbol = i64;

/// Exact sum of symbols.
pub type Sum = i128;

/// Exact rational used for slopes and deviations.
pub type Rational = Ratio<i128>;

/// A nonempty set of integer symbols, kept in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet(Vec<Symbol>);

impl Alphabet {
    /// Builds an alphabet from distinct symbols; duplicates and the empty set are rejected.
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Result<Self> {
        let mut v: Vec<Symbol> = symbols.into_iter().collect();
        if v.is_empty() {
            return Err(Error::domain("alphabet must be nonempty"));
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::domain(format!("duplicate alphabet symbol {}", w[0])));
        }
        Ok(Alphabet(v))
    }

    /// The set of symbols occurring in `symbols` (duplicates collapse).
    pub fn of(symbols: &[Symbol]) -> Result<Self> {
        let mut v = symbols.to_vec();
        v.sort_unstable();
        v.dedup();
        Alphabet::new(v)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position of `s` in ascending order.
    pub fn index_of(&self, s: Symbol) -> Option<usize> {
        self.0.binary_search(&s).ok()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.index_of(s).is_some()
    }

    pub fn min(&self) -> Symbol {
        self.0[0]
    }

    pub fn max(&self) -> Symbol {
        self.0[self.0.len() - 1]
    }

    /// Largest absolute value of a symbol.
    pub fn max_abs(&self) -> Symbol {
        self.min().abs().max(self.max().abs())
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// 1-based inclusive interval of positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    lo: usize,
    hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo == 0 {
            return Err(Error::domain("interval indices are 1-based"));
        }
        if lo > hi {
            return Err(Error::domain(format!("empty interval [{lo},{hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Borrowed word together with its prefix sums (`sums.len() == symbols.len() + 1`).
#[derive(Clone, Copy, Debug)]
pub struct WordView<'a> {
    symbols: &'a [Symbol],
    sums: &'a [Sum],
}

impl<'a> WordView<'a> {
    pub fn symbols(&self) -> &'a [Symbol] {
        self.symbols
    }

    /// `P[0..=len]` with `P[0] = 0`.
    pub fn prefix_sums(&self) -> &'a [Sum] {
        self.sums
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbol at 1-based position `i`.
    pub fn at(&self, i: usize) -> Symbol {
        self.symbols[i - 1]
    }

    /// Sum of the first `i` symbols.
    pub fn prefix_sum(&self, i: usize) -> Sum {
        self.sums[i]
    }

    pub fn total(&self) -> Sum {
        self.sums[self.symbols.len()]
    }

    /// Sum of `x_m ... x_n`, or 0 when `n < m`.
    pub fn range_sum(&self, m: usize, n: usize) -> Sum {
        if n < m {
            0
        } else {
            self.sums[n] - self.sums[m - 1]
        }
    }

    /// Prefix of length `len`; panics when `len` exceeds the view.
    pub fn truncate(&self, len: usize) -> WordView<'a> {
        WordView {
            symbols: &self.symbols[..len],
            sums: &self.sums[..=len],
        }
    }

    pub fn check_range(&self, m: usize, n: usize) -> Result<()> {
        if m == 0 || m > n {
            return Err(Error::domain(format!(
                "invalid factor bounds [{m},{n}]: need 1 <= m <= n"
            )));
        }
        if n > self.len() {
            return Err(Error::PrefixUnavailable {
                requested: n,
                available: self.len(),
            });
        }
        Ok(())
    }

    pub fn factor(&self, m: usize, n: usize) -> Result<FiniteWord> {
        self.check_range(m, n)?;
        Ok(FiniteWord::new(self.symbols[m - 1..n].to_vec()))
    }

    pub fn to_word(&self) -> FiniteWord {
        FiniteWord {
            symbols: self.symbols.to_vec(),
            sums: self.sums.to_vec(),
        }
    }

    pub fn alphabet(&self) -> Result<Alphabet> {
        Alphabet::of(self.symbols)
    }
}

/// Owned finite word with cached prefix sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteWord {
    symbols: Vec<Symbol>,
    sums: Vec<Sum>,
}

impl Default for FiniteWord {
    fn default() -> Self {
        FiniteWord {
            symbols: Vec::new(),
            sums: vec![0],
        }
    }
}

impl FiniteWord {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        let mut sums = Vec::with_capacity(symbols.len() + 1);
        let mut acc: Sum = 0;
        sums.push(acc);
        for &s in &symbols {
            acc += s as Sum;
            sums.push(acc);
        }
        FiniteWord { symbols, sums }
    }

    pub fn push(&mut self, s: Symbol) {
        let last = *self.sums.last().expect("prefix sums start with 0");
        self.symbols.push(s);
        self.sums.push(last + s as Sum);
    }

    pub fn extend_from_slice(&mut self, symbols: &[Symbol]) {
        self.reserve(symbols.len());
        for &s in symbols {
            self.push(s);
        }
    }

    pub fn reserve(&mut self, additional: usize) {
        self.symbols.reserve(additional);
        self.sums.reserve(additional);
    }

    pub fn view(&self) -> WordView<'_> {
        WordView {
            symbols: &self.symbols,
            sums: &self.sums,
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut out = self.clone();
        out.extend_from_slice(&other.symbols);
        out
    }

    /// `self` repeated `times` times.
    pub fn power(&self, times: usize) -> FiniteWord {
        let mut out = FiniteWord::default();
        out.reserve(self.len() * times);
        for _ in 0..times {
            out.extend_from_slice(&self.symbols);
        }
        out
    }
}

impl From<Vec<Symbol>> for FiniteWord {
    fn from(v: Vec<Symbol>) -> Self {
        FiniteWord::new(v)
    }
}

impl From<&[Symbol]> for FiniteWord {
    fn from(v: &[Symbol]) -> Self {
        FiniteWord::new(v.to_vec())
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Sum of all symbols of `word`; the empty word has sum 0.
pub fn word_sum(word: &FiniteWord) -> Sum {
    word.view().total()
}

/// `ΣB / |B|` in lowest terms.
pub fn slope_finite(word: &FiniteWord) -> Result<Rational> {
    if word.is_empty() {
        return Err(Error::domain("slope of the empty word is undefined"));
    }
    Ok(Rational::new(word_sum(word), word.len() as i128))
}

/// Number of positions of `word` holding `s`.
pub fn count_symbol(word: &FiniteWord, s: Symbol) -> usize {
    word.symbols().iter().filter(|&&x| x == s).count()
}

/// Source of the symbols of an infinite (or, for file input, finite) word.
pub trait Generator: Send {
    /// Produces the next symbol, or `None` once a finite word is exhausted.
    fn next_symbol(&mut self) -> Result<Option<Symbol>>;
}

impl<F> Generator for F
where
    F: FnMut() -> Result<Option<Symbol>> + Send,
{
    fn next_symbol(&mut self) -> Result<Option<Symbol>> {
        self()
    }
}

/// A deterministic word whose prefix is materialized on demand.
///
/// The cache only ever grows, so symbols returned once never change. Growth
/// is amortized by doubling. Extension needs `&mut self`, which serializes it;
/// the `WordView` returned by [`WordStream::prefix`] can then be shared freely.
pub struct WordStream {
    generator: Box<dyn Generator>,
    cache: FiniteWord,
    exhausted: bool,
    pending_error: Option<Error>,
}

impl fmt::Debug for WordStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordStream")
            .field("materialized", &self.cache.len())
            .field("exhausted", &self.exhausted)
            .finish()
    }
}

impl WordStream {
    pub fn new(generator: impl Generator + 'static) -> Self {
        WordStream {
            generator: Box::new(generator),
            cache: FiniteWord::default(),
            exhausted: false,
            pending_error: None,
        }
    }

    /// Infinite word with `ω(i) = f(i)` for 1-based `i`.
    pub fn from_fn(mut f: impl FnMut(usize) -> Symbol + Send + 'static) -> Self {
        let mut i = 0usize;
        WordStream::new(move || {
            i += 1;
            Ok(Some(f(i)))
        })
    }

    /// A finite word; requests past its end fail with `PrefixUnavailable`.
    pub fn finite(symbols: Vec<Symbol>) -> Self {
        WordStream {
            generator: Box::new(|| Ok(None)),
            cache: FiniteWord::new(symbols),
            exhausted: true,
            pending_error: None,
        }
    }

    /// Number of symbols materialized so far.
    pub fn materialized(&self) -> usize {
        self.cache.len()
    }

    /// Ensures at least `len` symbols are materialized.
    pub fn materialize(&mut self, len: usize) -> Result<()> {
        if len <= self.cache.len() {
            return Ok(());
        }
        if let Some(e) = self.pending_error.take() {
            return Err(e);
        }
        let target = len.max(self.cache.len().saturating_mul(2)).max(64);
        self.cache.reserve(target - self.cache.len());
        while !self.exhausted && self.cache.len() < target {
            match self.generator.next_symbol() {
                Ok(Some(s)) => self.cache.push(s),
                Ok(None) => self.exhausted = true,
                Err(e) => {
                    if self.cache.len() < len {
                        return Err(e);
                    }
                    // Past the requested length: surface the error on the next request.
                    self.pending_error = Some(e);
                    self.exhausted = true;
                }
            }
        }
        if self.cache.len() < len {
            if let Some(e) = self.pending_error.take() {
                return Err(e);
            }
            return Err(Error::PrefixUnavailable {
                requested: len,
                available: self.cache.len(),
            });
        }
        Ok(())
    }

    /// The prefix `ω[1..len]`.
    pub fn prefix(&mut self, len: usize) -> Result<WordView<'_>> {
        self.materialize(len)?;
        Ok(self.cache.view().truncate(len))
    }

    /// Everything materialized so far.
    pub fn cached(&self) -> WordView<'_> {
        self.cache.view()
    }

    /// `ω(i)`, 1-based.
    pub fn symbol(&mut self, i: usize) -> Result<Symbol> {
        if i == 0 {
            return Err(Error::domain("word positions are 1-based"));
        }
        self.materialize(i)?;
        Ok(self.cache.symbols()[i - 1])
    }

    /// `ω[m,n]`.
    pub fn factor(&mut self, m: usize, n: usize) -> Result<FiniteWord> {
        if m == 0 || m > n {
            return Err(Error::domain(format!(
                "invalid factor bounds [{m},{n}]: need 1 <= m <= n"
            )));
        }
        self.prefix(n)?.factor(m, n)
    }
}
