//! Textual word, morphism and lattice-map specs.
//!
//! Commas separate symbols and semicolons separate rules, so negative
//! symbols need no quoting. Nested word specs sit inside `[...]` (splice
//! parts, split on `|`) or `(...)` (contraction base).

use std::fmt;
use std::path::PathBuf;

use additive_core::generators::{
    constant_tail_word, contract, enum_word, mechanical, morphic_fixed_point, periodic, sec24_word,
    splice, thm11_word,
};
use additive_core::{
    ContinuedFraction, Interval, LatticeMap, Morphism, SeparatedIntervalSet, SpliceSchedule,
    Symbol, WordStream,
};
use anyhow::{anyhow, bail, ensure, Context, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordSpec {
    Periodic(Vec<Symbol>),
    Morphic {
        phi: Morphism,
        seed: Symbol,
    },
    Mechanical(ContinuedFraction),
    Enum(Symbol),
    Thm11(Symbol),
    Sec24,
    Ladder(Symbol),
    Splice {
        parts: Vec<WordSpec>,
        schedule: SpliceSchedule,
    },
    Contract {
        base: Box<WordSpec>,
        ivals: SeparatedIntervalSet,
    },
    File {
        path: PathBuf,
        symbols: Vec<Symbol>,
    },
}

impl WordSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let spec = match kind {
            "periodic" => WordSpec::Periodic(parse_symbols(rest)?),
            "morphic" => {
                let (rules, seed) = rest
                    .rsplit_once(";seed=")
                    .ok_or_else(|| anyhow!("morphic spec needs ;seed=<s>"))?;
                WordSpec::Morphic {
                    phi: parse_morphism(rules)?,
                    seed: parse_num(seed)?,
                }
            }
            "mechanical" => {
                let body = rest
                    .strip_prefix("cf=")
                    .ok_or_else(|| anyhow!("mechanical spec needs cf=<a1,a2,...>"))?;
                let (terms, repeat) = match body.split_once(";repeat=") {
                    Some((t, r)) => (t, parse_num(r)?),
                    None => (body, 0),
                };
                let terms = terms.split(',').map(parse_num).collect::<Result<_>>()?;
                WordSpec::Mechanical(ContinuedFraction::new(terms, repeat)?)
            }
            "enum" => WordSpec::Enum(parse_key(rest, "k")?),
            "thm11" => WordSpec::Thm11(parse_key(rest, "k")?),
            "sec24" => {
                ensure!(rest.is_empty(), "sec24 takes no parameters");
                WordSpec::Sec24
            }
            "ladder" => WordSpec::Ladder(parse_key(rest, "n")?),
            "splice" => {
                let (inner, after) = bracketed(rest, '[', ']')?;
                let sched = after
                    .strip_prefix(";sched=")
                    .ok_or_else(|| anyhow!("splice spec needs ;sched=<lengths>"))?;
                let parts = split_top(inner, '|')
                    .into_iter()
                    .map(WordSpec::parse)
                    .collect::<Result<Vec<_>>>()?;
                let rounds = sched
                    .split(';')
                    .map(|row| {
                        row.split(',')
                            .map(parse_num)
                            .collect::<Result<Vec<usize>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let schedule = SpliceSchedule::new(rounds)?;
                ensure!(
                    schedule.sources() == parts.len(),
                    "splice schedule lists {} lengths per round for {} words",
                    schedule.sources(),
                    parts.len()
                );
                WordSpec::Splice { parts, schedule }
            }
            "contract" => {
                let body = rest
                    .strip_prefix("base=")
                    .ok_or_else(|| anyhow!("contract spec needs base=(<spec>)"))?;
                let (inner, after) = bracketed(body, '(', ')')?;
                let ivals = after
                    .strip_prefix(";ivals=")
                    .ok_or_else(|| anyhow!("contract spec needs ;ivals=..."))?;
                WordSpec::Contract {
                    base: Box::new(WordSpec::parse(inner)?),
                    ivals: parse_intervals(ivals)?,
                }
            }
            "file" => {
                ensure!(!rest.is_empty(), "file spec needs a path");
                let path = PathBuf::from(rest);
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let symbols = text
                    .split_whitespace()
                    .map(parse_num)
                    .collect::<Result<Vec<Symbol>>>()
                    .with_context(|| format!("parsing {}", path.display()))?;
                WordSpec::File { path, symbols }
            }
            _ => bail!("unknown word kind {kind:?}"),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Construction-time checks that the generators would otherwise only
    /// report lazily.
    fn validate(&self) -> Result<()> {
        match self {
            WordSpec::Periodic(p) => ensure!(!p.is_empty(), "periodic spec needs symbols"),
            WordSpec::Morphic { phi, seed } => {
                morphic_fixed_point(phi, *seed)?;
            }
            WordSpec::Enum(k) | WordSpec::Thm11(k) => ensure!(*k >= 1, "k must be at least 1"),
            WordSpec::Ladder(n) => ensure!(*n >= 1, "n must be at least 1"),
            _ => {}
        }
        Ok(())
    }

    pub fn build(&self) -> Result<WordStream> {
        Ok(match self {
            WordSpec::Periodic(p) => periodic(p.clone())?,
            WordSpec::Morphic { phi, seed } => morphic_fixed_point(phi, *seed)?,
            WordSpec::Mechanical(cf) => mechanical(cf)?,
            WordSpec::Enum(k) => enum_word(*k)?,
            WordSpec::Thm11(k) => thm11_word(*k)?,
            WordSpec::Sec24 => sec24_word(),
            WordSpec::Ladder(n) => constant_tail_word(*n)?,
            WordSpec::Splice { parts, schedule } => {
                let sources = parts.iter().map(WordSpec::build).collect::<Result<_>>()?;
                splice(sources, schedule.clone())?
            }
            WordSpec::Contract { base, ivals } => contract(base.build()?, ivals.clone()),
            WordSpec::File { symbols, .. } => WordStream::finite(symbols.clone()),
        })
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordSpec::Periodic(p) => write!(f, "periodic:{}", join(p, ",")),
            WordSpec::Morphic { phi, seed } => write!(f, "morphic:{phi};seed={seed}"),
            WordSpec::Mechanical(cf) => write!(f, "mechanical:{cf}"),
            WordSpec::Enum(k) => write!(f, "enum:k={k}"),
            WordSpec::Thm11(k) => write!(f, "thm11:k={k}"),
            WordSpec::Sec24 => write!(f, "sec24"),
            WordSpec::Ladder(n) => write!(f, "ladder:n={n}"),
            WordSpec::Splice { parts, schedule } => {
                write!(f, "splice:[{}];sched={schedule}", join(parts, "|"))
            }
            WordSpec::Contract { base, ivals } => {
                write!(f, "contract:base=({base});ivals=")?;
                match ivals {
                    SeparatedIntervalSet::Explicit(v) => {
                        let parts: Vec<String> = v
                            .iter()
                            .map(|iv| format!("{}-{}", iv.lo(), iv.hi()))
                            .collect();
                        write!(f, "{}", parts.join(","))
                    }
                    SeparatedIntervalSet::Arithmetic {
                        start,
                        period,
                        width,
                    } => write!(f, "arith:{start},{period},{width}"),
                }
            }
            WordSpec::File { path, .. } => write!(f, "file:{}", path.display()),
        }
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| anyhow!("expected an integer, found {s:?}"))
}

fn parse_symbols(s: &str) -> Result<Vec<Symbol>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_num).collect()
}

fn parse_key<T: std::str::FromStr>(s: &str, key: &str) -> Result<T> {
    let value = s
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| anyhow!("expected {key}=<value>, found {s:?}"))?;
    parse_num(value)
}

/// Splits `open ... close` off the front of `s`, honoring nesting of both
/// bracket kinds. Returns the inside and the remainder after `close`.
fn bracketed(s: &str, open: char, close: char) -> Result<(&str, &str)> {
    ensure!(s.starts_with(open), "expected {open:?} in {s:?}");
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 {
            ensure!(c == close, "mismatched {c:?} in {s:?}");
            return Ok((&s[1..i], &s[i + 1..]));
        }
    }
    bail!("unclosed {open:?} in {s:?}")
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut from) = (0i32, 0usize);
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[from..i]);
                from = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[from..]);
    parts
}

fn parse_intervals(s: &str) -> Result<SeparatedIntervalSet> {
    if let Some(arith) = s.strip_prefix("arith:") {
        let v: Vec<usize> = arith.split(',').map(parse_num).collect::<Result<_>>()?;
        ensure!(
            v.len() == 3,
            "arith intervals need <start>,<period>,<width>"
        );
        return Ok(SeparatedIntervalSet::arithmetic(v[0], v[1], v[2])?);
    }
    let intervals = s
        .split(',')
        .map(|iv| {
            let (lo, hi) = iv
                .split_once('-')
                .ok_or_else(|| anyhow!("expected <lo>-<hi>, found {iv:?}"))?;
            Ok(Interval::new(parse_num(lo)?, parse_num(hi)?)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SeparatedIntervalSet::explicit(intervals)?)
}

/// `0=0,2;1=1,1`.
pub fn parse_morphism(s: &str) -> Result<Morphism> {
    let rules = s
        .split(';')
        .map(|rule| {
            let (letter, image) = rule
                .split_once('=')
                .ok_or_else(|| anyhow!("expected <s>=<image>, found {rule:?}"))?;
            Ok((parse_num(letter)?, parse_symbols(image)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Morphism::new(rules)?)
}

/// `mu:0=1,0;1=0,1` (the `mu:` prefix is optional).
pub fn parse_mu(s: &str) -> Result<LatticeMap> {
    let body = s.strip_prefix("mu:").unwrap_or(s);
    let rules = body
        .split(';')
        .map(|rule| {
            let (letter, image) = rule
                .split_once('=')
                .ok_or_else(|| anyhow!("expected <s>=<vector>, found {rule:?}"))?;
            let v: Vec<i64> = image.split(',').map(parse_num).collect::<Result<_>>()?;
            Ok((parse_num(letter)?, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LatticeMap::new(rules)?)
}
