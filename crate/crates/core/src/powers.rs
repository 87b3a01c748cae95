//! Additive `k`-powers, `k`-powers modulo a lattice map, and slope-constrained
//! powers found through monochromatic progressions in the `χ` coloring.

use rayon::prelude::*;

use crate::complexity::LatticeMap;
use crate::error::{Error, Result};
use crate::slope::{chi_colors, RationalSlope};
use crate::word::{Sum, WordView};

/// Longest prefix the power searches accept by default.
pub const POWER_MAX_PREFIX: usize = 1_000_000;

/// Starts examined per parallel batch; the earliest batch with a hit wins.
const BATCH: usize = 256;

/// `count` consecutive blocks of length `block_len` from `start` (1-based),
/// all with the same image `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerWitness {
    pub start: usize,
    pub block_len: usize,
    pub count: usize,
    /// Common sum (one entry) or common `μ`-image.
    pub value: Vec<Sum>,
}

impl PowerWitness {
    /// Block `i` (1-based) as an inclusive index pair.
    pub fn block(&self, i: usize) -> (usize, usize) {
        let lo = self.start + (i - 1) * self.block_len;
        (lo, lo + self.block_len - 1)
    }

    pub fn end(&self) -> usize {
        self.block(self.count).1
    }

    /// Recomputes every block image from the raw symbols. `None` means sums.
    pub fn verify(&self, word: WordView<'_>, mu: Option<&LatticeMap>) -> Result<bool> {
        if self.count == 0 || self.block_len == 0 || self.end() > word.len() {
            return Ok(false);
        }
        for i in 1..=self.count {
            let (lo, hi) = self.block(i);
            let block = &word.symbols()[lo - 1..hi];
            let image = match mu {
                None => vec![block.iter().map(|&s| s as Sum).sum()],
                Some(mu) => mu.apply(block)?,
            };
            if image != self.value {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Exhaustive search in (start, block length) order with a prefix guard.
#[derive(Clone, Copy, Debug)]
pub struct PowerSearch {
    k: usize,
    max_prefix: usize,
}

impl PowerSearch {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::domain(format!(
                "power order k = {k} must be at least 2"
            )));
        }
        Ok(PowerSearch {
            k,
            max_prefix: POWER_MAX_PREFIX,
        })
    }

    pub fn with_max_prefix(self, max_prefix: usize) -> Self {
        PowerSearch { max_prefix, ..self }
    }

    fn guard(&self, len: usize) -> Result<()> {
        if len > self.max_prefix {
            return Err(Error::GuardExceeded {
                what: "power search prefix",
                value: len,
                limit: self.max_prefix,
            });
        }
        Ok(())
    }

    pub fn additive(&self, word: WordView<'_>) -> Result<Option<PowerWitness>> {
        self.guard(word.len())?;
        let p = word.prefix_sums();
        let hit = self.scan(word.len(), |i, b| {
            p[i + b] - p[i] == p[i + 2 * b] - p[i + b]
        });
        Ok(hit.map(|(start, b)| PowerWitness {
            start,
            block_len: b,
            count: self.k,
            value: vec![p[start - 1 + b] - p[start - 1]],
        }))
    }

    pub fn modulo(&self, word: WordView<'_>, mu: &LatticeMap) -> Result<Option<PowerWitness>> {
        self.guard(word.len())?;
        let t = mu.dim();
        let p = mu.prefix_vectors(word)?;
        let image = |i: usize, b: usize| {
            let (lo, hi) = (&p[i * t..(i + 1) * t], &p[(i + b) * t..(i + b + 1) * t]);
            hi.iter().zip(lo).map(|(h, l)| h - l)
        };
        let hit = self.scan(word.len(), |i, b| image(i, b).eq(image(i + b, b)));
        Ok(hit.map(|(start, b)| PowerWitness {
            start,
            block_len: b,
            count: self.k,
            value: image(start - 1, b).collect(),
        }))
    }

    /// First `(start, b)` such that `same(i, b)` holds for consecutive block
    /// pairs `i = start − 1, start − 1 + b, …`, with `i` a 0-based offset.
    fn scan(
        &self,
        len: usize,
        same: impl Fn(usize, usize) -> bool + Sync,
    ) -> Option<(usize, usize)> {
        let k = self.k;
        let at = |start: usize| -> Option<usize> {
            let room = len + 1 - start;
            (1..=room / k).find(|&b| (0..k - 1).all(|j| same(start - 1 + j * b, b)))
        };
        let mut lo = 1;
        while lo + k - 1 <= len {
            let hi = (lo + BATCH).min(len + 2 - k);
            let found = (lo..hi)
                .into_par_iter()
                .filter_map(|s| at(s).map(|b| (s, b)))
                .min();
            if found.is_some() {
                return found;
            }
            lo = hi;
        }
        None
    }
}

/// First additive `k`-power in the prefix, smallest start then smallest block length.
pub fn find_additive_kpower(word: WordView<'_>, k: usize) -> Result<Option<PowerWitness>> {
    PowerSearch::new(k)?.additive(word)
}

/// As [`find_additive_kpower`] with `μ`-images compared as vectors.
pub fn find_kpower_mod_mu(
    word: WordView<'_>,
    mu: &LatticeMap,
    k: usize,
) -> Result<Option<PowerWitness>> {
    PowerSearch::new(k)?.modulo(word, mu)
}

/// First progression `start, start + gap, …` (1-based, `terms` entries) of
/// equal colors with `divisor | gap`, ordered by start then gap.
pub fn monochromatic_ap(
    colors: &[Sum],
    terms: usize,
    divisor: usize,
) -> Result<Option<(usize, usize)>> {
    if terms < 2 {
        return Err(Error::domain("a progression needs at least 2 terms"));
    }
    if divisor == 0 {
        return Err(Error::domain("gap divisor must be positive"));
    }
    let n = colors.len();
    for start in 1..=n {
        let c = colors[start - 1];
        let mut gap = divisor;
        while start + (terms - 1) * gap <= n {
            if (1..terms).all(|j| colors[start + j * gap - 1] == c) {
                return Ok(Some((start, gap)));
            }
            gap += divisor;
        }
    }
    Ok(None)
}

/// `blocks` consecutive factors, each of slope `α` and length divisible by
/// `divisor·q`, located via a monochromatic progression in `χ`.
pub fn find_anchored_power(
    word: WordView<'_>,
    alpha: RationalSlope,
    divisor: usize,
    blocks: usize,
) -> Result<Option<PowerWitness>> {
    if blocks < 2 {
        return Err(Error::domain("need at least 2 blocks"));
    }
    if word.len() > POWER_MAX_PREFIX {
        return Err(Error::GuardExceeded {
            what: "power search prefix",
            value: word.len(),
            limit: POWER_MAX_PREFIX,
        });
    }
    let colors = chi_colors(word, alpha);
    let Some((a, gap)) = monochromatic_ap(&colors, blocks + 1, divisor)? else {
        return Ok(None);
    };
    let q = alpha.q() as usize;
    let witness = PowerWitness {
        start: a * q + 1,
        block_len: gap * q,
        count: blocks,
        value: vec![alpha.p() as Sum * gap as Sum],
    };
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fibonacci_word, periodic, thm11_word, thue_morse};
    use crate::word::{Alphabet, FiniteWord, Symbol};
    use proptest::prelude::*;

    fn brute_ap(colors: &[Sum], terms: usize, divisor: usize) -> Option<(usize, usize)> {
        let n = colors.len();
        let mut all = Vec::new();
        for start in 1..=n {
            for gap in 1..=n {
                let idx: Vec<usize> = (0..terms).map(|j| start + j * gap).collect();
                if gap % divisor == 0
                    && idx.iter().all(|&i| i <= n)
                    && idx.iter().all(|&i| colors[i - 1] == colors[start - 1])
                {
                    all.push((start, gap));
                }
            }
        }
        all.into_iter().min()
    }

    #[test]
    fn ap_examples() {
        assert_eq!(monochromatic_ap(&[0, 0, 0, 0], 3, 1).unwrap(), Some((1, 1)));
        assert_eq!(
            monochromatic_ap(&[0, 1, 0, 1, 0, 1, 0], 4, 2).unwrap(),
            Some((1, 2))
        );
        assert_eq!(monochromatic_ap(&[0, 1, 2, 0, 1, 2], 3, 1).unwrap(), None);
        assert_eq!(
            monochromatic_ap(&[0, 1, 2, 0, 1, 2, 0], 3, 1).unwrap(),
            Some((1, 3))
        );
        assert_eq!(
            monochromatic_ap(&[0, 1, 2, 0, 1, 2], 2, 1).unwrap(),
            Some((1, 3))
        );
        assert!(monochromatic_ap(&[0], 1, 1).is_err());
    }

    #[test]
    fn ap_matches_brute_force_exhaustively() {
        // every sequence of length <= 7 over 3 colors, every terms and divisor
        for len in 1..=7u32 {
            for code in 0..3usize.pow(len) {
                let mut c = code;
                let colors: Vec<Sum> = (0..len)
                    .map(|_| {
                        let d = c % 3;
                        c /= 3;
                        d as Sum
                    })
                    .collect();
                for terms in 2..=4 {
                    for divisor in 1..=3 {
                        assert_eq!(
                            monochromatic_ap(&colors, terms, divisor).unwrap(),
                            brute_ap(&colors, terms, divisor),
                            "{colors:?} terms {terms} divisor {divisor}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn additive_examples() {
        let mut w = periodic(vec![0, 1, 1, 0]).unwrap();
        let v = w.prefix(100).unwrap();
        let p = find_additive_kpower(v, 2).unwrap().unwrap();
        assert_eq!(
            (p.start, p.block_len, p.value.as_slice()),
            (1, 2, [1].as_slice())
        );
        assert!(p.verify(v, None).unwrap());
        assert!(find_additive_kpower(v, 1).is_err());

        let mut f = fibonacci_word();
        let v = f.prefix(10_000).unwrap();
        let p = find_additive_kpower(v, 3).unwrap().unwrap();
        assert!(p.verify(v, None).unwrap());

        let mut t = thm11_word(1).unwrap();
        let v = t.prefix(100_000).unwrap();
        let p = find_additive_kpower(v, 4).unwrap().unwrap();
        assert!(p.verify(v, None).unwrap());
    }

    #[test]
    fn no_power_in_short_increasing_word() {
        let w = FiniteWord::new(vec![1, 2, 4, 8, 16]);
        assert_eq!(find_additive_kpower(w.view(), 2).unwrap(), None);
        let guarded = PowerSearch::new(2).unwrap().with_max_prefix(3);
        assert!(matches!(
            guarded.additive(w.view()),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn constant_word_gives_trivial_power() {
        let w = FiniteWord::new(vec![5; 40]);
        for k in 2..=40 {
            let p = find_additive_kpower(w.view(), k).unwrap().unwrap();
            assert_eq!((p.start, p.block_len, p.count), (1, 1, k));
        }
    }

    #[test]
    fn modulo_examples() {
        let bin = Alphabet::new([0, 1]).unwrap();
        let psi = LatticeMap::parikh(&bin);
        let mut w = periodic(vec![0, 1, 1, 0]).unwrap();
        let v = w.prefix(100).unwrap();
        let p = find_kpower_mod_mu(v, &psi, 2).unwrap().unwrap();
        assert_eq!(
            (p.start, p.block_len, p.value.as_slice()),
            (1, 2, [1, 1].as_slice())
        );

        let mut tm = thue_morse();
        let v = tm.prefix(10_000).unwrap();
        let p = find_kpower_mod_mu(v, &psi, 3).unwrap().unwrap();
        assert!(p.verify(v, Some(&psi)).unwrap());
    }

    #[test]
    fn anchored_examples() {
        let mut w = periodic(vec![0, 1]).unwrap();
        let v = w.prefix(100).unwrap();
        let half = RationalSlope::new(1, 2).unwrap();
        let p = find_anchored_power(v, half, 1, 3).unwrap().unwrap();
        assert_eq!((p.start, p.block_len, p.count), (3, 2, 3));
        assert!(p.verify(v, None).unwrap());

        let mut t = thm11_word(1).unwrap();
        let v = t.prefix(100_000).unwrap();
        let p = find_anchored_power(v, RationalSlope::integer(1), 4, 3)
            .unwrap()
            .unwrap();
        assert_eq!(p.block_len % 4, 0);
        assert_eq!(p.value, [p.block_len as Sum]);
        assert!(p.verify(v, None).unwrap());

        let w = FiniteWord::new(vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(
            find_anchored_power(w.view(), RationalSlope::integer(0), 1, 2).unwrap(),
            None
        );
    }

    proptest! {
        #[test]
        fn ap_matches_brute_force(colors in prop::collection::vec(0i128..4, 1..=50), terms in 2usize..6, divisor in 1usize..5) {
            prop_assert_eq!(monochromatic_ap(&colors, terms, divisor).unwrap(), brute_ap(&colors, terms, divisor));
        }

        #[test]
        fn witnesses_verify_and_nest(v in prop::collection::vec(-2i64..=2, 1..80), k in 2usize..5) {
            let w = FiniteWord::new(v);
            let view = w.view();
            let sigma = LatticeMap::sum(&view.alphabet().unwrap());
            let found = find_additive_kpower(view, k + 1).unwrap();
            if let Some(p) = &found {
                prop_assert!(p.verify(view, None).unwrap());
                prop_assert!(find_additive_kpower(view, k).unwrap().is_some());
            }
            let additive = find_additive_kpower(view, k).unwrap();
            prop_assert_eq!(additive, find_kpower_mod_mu(view, &sigma, k).unwrap());
        }

        #[test]
        fn search_is_first_in_order(v in prop::collection::vec(0 as Symbol..3, 1..40), k in 2usize..4) {
            let w = FiniteWord::new(v);
            let view = w.view();
            let s = |a: usize, b: usize| view.range_sum(a, b);
            let mut expected = None;
            'outer: for start in 1..=view.len() {
                for b in 1..=view.len() {
                    if start + k * b - 1 > view.len() { break; }
                    if (1..k).all(|i| s(start + i * b, start + (i + 1) * b - 1) == s(start, start + b - 1)) {
                        expected = Some((start, b));
                        break 'outer;
                    }
                }
            }
            let got = find_additive_kpower(view, k).unwrap().map(|p| (p.start, p.block_len));
            prop_assert_eq!(got, expected);
        }

        #[test]
        fn anchored_blocks_have_the_slope(v in prop::collection::vec(-1i64..=1, 4..150), divisor in 1usize..4, blocks in 2usize..4) {
            let w = FiniteWord::new(v);
            let view = w.view();
            if let Some(p) = find_anchored_power(view, RationalSlope::integer(0), divisor, blocks).unwrap() {
                prop_assert!(p.verify(view, None).unwrap());
                prop_assert_eq!(p.block_len % divisor, 0);
                prop_assert_eq!(p.value.clone(), vec![0]);
            }
        }
    }
}
