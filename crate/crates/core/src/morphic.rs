//! Right-infinite words given by substitutions or periodic repetition, and
//! prefix-scale measurements on them: subword complexity, recurrence windows,
//! eventual periodicity.
//!
//! Everything here is certified on a finite prefix only. Complexity can be
//! undercounted and recurrence windows underestimated relative to the
//! infinite word; every profile records the prefix length it was taken on.
//!
//! Generator config lines:
//!
//! ```text
//! # comment
//! thue-morse: a->ab, b->ba, seed=a
//! abc-period: period=abc
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

/// A prolongable substitution: the image of the seed starts with the seed
/// and is longer than one letter, so iteration converges to a fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphicGenerator {
    name: Option<String>,
    alphabet: Alphabet,
    /// Image of rank `r` at index `r - 1`; `None` for unused letters.
    images: Vec<Option<Vec<u8>>>,
    seed: u8,
}

impl MorphicGenerator {
    pub fn new(name: Option<String>, rules: &BTreeMap<char, String>, seed: char) -> Result<Self> {
        let letters = rules
            .iter()
            .flat_map(|(k, v)| std::iter::once(*k).chain(v.chars()))
            .chain(std::iter::once(seed));
        let mut top = 1;
        for c in letters {
            if !c.is_ascii_lowercase() {
                return Err(Error::Generator(format!("{c:?} is not a letter a..z")));
            }
            top = top.max((c as u8 - b'a' + 1) as usize);
        }
        let alphabet = Alphabet::new(top)?;
        let mut images = vec![None; top];
        for (k, v) in rules {
            if v.is_empty() {
                return Err(Error::Generator(format!("empty image for {k}")));
            }
            images[(*k as u8 - b'a') as usize] = Some(Word::parse(v, alphabet)?.letters().to_vec());
        }
        let seed = seed as u8 - b'a' + 1;
        let gen = MorphicGenerator {
            name,
            alphabet,
            images,
            seed,
        };
        gen.validate()?;
        Ok(gen)
    }

    fn validate(&self) -> Result<()> {
        let letter = |r: u8| self.alphabet.letter(r);
        let seed_image = self
            .image(self.seed)
            .ok_or_else(|| Error::Generator(format!("seed {} has no image", letter(self.seed))))?;
        if seed_image[0] != self.seed || seed_image.len() < 2 {
            return Err(Error::Generator(format!(
                "not prolongable: image of seed {} must start with it and be longer than one letter",
                letter(self.seed)
            )));
        }
        // every letter reachable from the seed needs an image
        let mut seen = vec![false; self.images.len()];
        let mut stack = vec![self.seed];
        while let Some(r) = stack.pop() {
            if std::mem::replace(&mut seen[r as usize - 1], true) {
                continue;
            }
            let image = self.image(r).ok_or_else(|| {
                Error::Generator(format!("letter {} is reachable but has no image", letter(r)))
            })?;
            stack.extend(image.iter().copied());
        }
        Ok(())
    }

    fn image(&self, rank: u8) -> Option<&[u8]> {
        self.images.get(rank as usize - 1)?.as_deref()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Apply the substitution letter by letter.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut out = Vec::new();
        for &r in w.letters() {
            let image = self
                .image(r)
                .ok_or_else(|| Error::Generator(format!("no image for {}", self.alphabet.letter(r))))?;
            out.extend_from_slice(image);
        }
        Word::new(self.alphabet, out)
    }

    /// First `len` letters of the fixed point starting with the seed.
    ///
    /// The fixed point `u` satisfies `u = σ(u[1]) σ(u[2]) ⋯`, so it can be
    /// produced by reading `u` while writing it.
    pub fn prefix(&self, len: usize) -> Word {
        let mut out = self.image(self.seed).expect("validated").to_vec();
        let mut read = 1;
        while out.len() < len {
            let r = out[read];
            out.extend_from_slice(self.image(r).expect("reachable letters have images"));
            read += 1;
        }
        out.truncate(len);
        Word::new(self.alphabet, out).expect("ranks in range")
    }
}

impl fmt::Display for MorphicGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            write!(f, "{name}: ")?;
        }
        for (i, image) in self.images.iter().enumerate() {
            if let Some(image) = image {
                let word = Word::new(self.alphabet, image.clone()).expect("ranks in range");
                write!(f, "{}->{}, ", self.alphabet.letter(i as u8 + 1), word)?;
            }
        }
        write!(f, "seed={}", self.alphabet.letter(self.seed))
    }
}

/// Source of a right-infinite word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    Morphic(MorphicGenerator),
    Periodic { name: Option<String>, period: Word },
}

pub const BUILTIN_NAMES: &[&str] = &["thue-morse", "fibonacci", "tribonacci", "period-<k>"];

impl Generator {
    pub fn periodic(name: Option<String>, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Generator("empty period".into()));
        }
        Ok(Generator::Periodic { name, period })
    }

    /// Built-in generators: `thue-morse`, `fibonacci`, `tribonacci`, and
    /// `period-k` (the first k letters repeated).
    pub fn builtin(name: &str) -> Option<Generator> {
        let rules = |pairs: &[(char, &str)]| -> BTreeMap<char, String> {
            pairs.iter().map(|&(k, v)| (k, v.to_string())).collect()
        };
        let named = Some(name.to_string());
        match name {
            "thue-morse" => MorphicGenerator::new(named, &rules(&[('a', "ab"), ('b', "ba")]), 'a').ok(),
            "fibonacci" => MorphicGenerator::new(named, &rules(&[('a', "ab"), ('b', "a")]), 'a').ok(),
            "tribonacci" => {
                MorphicGenerator::new(named, &rules(&[('a', "ab"), ('b', "ac"), ('c', "a")]), 'a').ok()
            }
            _ => {
                let k: usize = name.strip_prefix("period-")?.parse().ok()?;
                let alphabet = Alphabet::new(k).ok()?;
                let period = Word::new(alphabet, (1..=k as u8).collect()).ok()?;
                return Generator::periodic(named, period).ok();
            }
        }
        .map(Generator::Morphic)
    }

    /// Parse one config line: `name: a->ab, b->ba, seed=a` or `name: period=abc`.
    pub fn parse_line(line: &str) -> Result<Generator> {
        let bad = |why: &str| Error::Generator(format!("{why} in {line:?}"));
        let (name, body) = line
            .split_once(':')
            .ok_or_else(|| bad("missing ':' after the name"))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(bad("empty name"));
        }
        let mut rules = BTreeMap::new();
        let mut seed = None;
        let mut period = None;
        for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if let Some(s) = item.strip_prefix("seed=") {
                let mut chars = s.trim().chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => seed = Some(c),
                    _ => return Err(bad("seed must be a single letter")),
                }
            } else if let Some(p) = item.strip_prefix("period=") {
                period = Some(p.trim().to_string());
            } else if let Some((from, to)) = item.split_once("->") {
                let mut chars = from.trim().chars();
                let letter = match (chars.next(), chars.next()) {
                    (Some(c), None) => c,
                    _ => return Err(bad("rule must map a single letter")),
                };
                if rules.insert(letter, to.trim().to_string()).is_some() {
                    return Err(bad("duplicate rule"));
                }
            } else {
                return Err(bad(&format!("unrecognised item {item:?}")));
            }
        }
        match (period, seed) {
            (Some(p), None) if rules.is_empty() => {
                Generator::periodic(Some(name.to_string()), Word::parse_minimal(&p)?)
            }
            (None, Some(seed)) => Ok(Generator::Morphic(MorphicGenerator::new(
                Some(name.to_string()),
                &rules,
                seed,
            )?)),
            (None, None) => Err(bad("missing seed=")),
            _ => Err(bad("period= cannot be combined with rules or seed=")),
        }
    }

    /// Parse a config file, skipping blank lines and `#` comments.
    pub fn parse_config(text: &str) -> Result<Vec<Generator>> {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(Generator::parse_line)
            .collect()
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Generator::Morphic(g) => g.name(),
            Generator::Periodic { name, .. } => name.as_deref(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Generator::Morphic(g) => g.alphabet(),
            Generator::Periodic { period, .. } => period.alphabet(),
        }
    }

    pub fn prefix(&self, len: usize) -> Result<Word> {
        if len == 0 {
            return Err(Error::Parameter("prefix length must be at least 1".into()));
        }
        Ok(match self {
            Generator::Morphic(g) => g.prefix(len),
            Generator::Periodic { period, .. } => {
                let letters = period.letters().iter().copied().cycle().take(len).collect();
                Word::new(period.alphabet(), letters)?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityValue {
    pub n: usize,
    pub omega: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    pub prefix_length: usize,
    pub values: Vec<ComplexityValue>,
}

impl ComplexityProfile {
    pub fn omega(&self, n: usize) -> Option<usize> {
        self.values.iter().find(|v| v.n == n).map(|v| v.omega)
    }

    /// The counting bounds every finite word obeys: `ω(n) ≤ m^n` and
    /// `ω(n) ≤ prefix_length - n + 1`.
    pub fn within_bounds(&self, m: usize) -> bool {
        self.values.iter().all(|v| {
            let by_alphabet = (m as u128)
                .checked_pow(v.n as u32)
                .is_none_or(|cap| v.omega as u128 <= cap);
            by_alphabet && v.n <= self.prefix_length && v.omega <= self.prefix_length - v.n + 1
        })
    }
}

/// Suffix array of `s` by prefix doubling.
pub(crate) fn suffix_array(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<usize> = s.iter().map(|&c| c as usize).collect();
    if n < 2 {
        return sa;
    }
    let mut tmp = vec![0; n];
    let mut k = 1;
    loop {
        let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0]] = 0;
        for w in 1..n {
            tmp[sa[w]] = tmp[sa[w - 1]] + usize::from(key(sa[w - 1]) != key(sa[w]));
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1]] == n - 1 {
            break;
        }
        k *= 2;
    }
    sa
}

/// `lcp[r]` = longest common prefix of suffixes `sa[r - 1]` and `sa[r]` (Kasai).
pub(crate) fn lcp_array(s: &[u8], sa: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut rank = vec![0; n];
    for (r, &i) in sa.iter().enumerate() {
        rank[i] = r;
    }
    let mut lcp = vec![0; n];
    let mut h = 0;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1];
            while i + h < n && j + h < n && s[i + h] == s[j + h] {
                h += 1;
            }
            lcp[rank[i]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

/// Number of distinct length-n factors of `w` for `n = 1..=n_max`.
///
/// In suffix-array order, the suffix at rank r starts a new length-n factor
/// exactly when `lcp[r] < n <= its length`.
pub fn complexity(w: &Word, n_max: usize) -> Result<ComplexityProfile> {
    let len = w.len();
    if n_max > len {
        return Err(Error::Bounds {
            start: 1,
            end: n_max,
            len,
        });
    }
    let s = w.letters();
    let sa = suffix_array(s);
    let lcp = lcp_array(s, &sa);
    let mut diff = vec![0i64; len + 2];
    for (r, &i) in sa.iter().enumerate() {
        let from = if r == 0 { 1 } else { lcp[r] + 1 };
        let to = len - i;
        if from <= to {
            diff[from] += 1;
            diff[to + 1] -= 1;
        }
    }
    let mut values = Vec::with_capacity(n_max);
    let mut acc = 0i64;
    for (n, d) in diff.iter().enumerate().take(n_max + 1).skip(1) {
        acc += d;
        values.push(ComplexityValue {
            n,
            omega: acc as usize,
        });
    }
    Ok(ComplexityProfile {
        prefix_length: len,
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "json::RecurrenceDoc", try_from = "json::RecurrenceDoc")]
pub struct RecurrenceProfile {
    pub pattern: Word,
    pub prefix_length: usize,
    pub occurrences: usize,
    /// Largest distance between consecutive occurrence starts.
    pub max_gap: usize,
    /// Smallest L such that every length-L factor of the scanned prefix
    /// contains the pattern.
    pub window_constant: Option<usize>,
}

/// Smallest window length L such that every length-L factor of a word of
/// length `n` contains an occurrence of a length-`vlen` pattern starting at
/// one of `starts` (0-based, ascending).
pub(crate) fn smallest_window(n: usize, starts: &[usize], vlen: usize) -> Option<usize> {
    if starts.is_empty() {
        return None;
    }
    // need[i]: window length required for the window starting at i
    let mut need = vec![usize::MAX; n];
    let mut next = starts.len();
    for i in (0..n).rev() {
        while next > 0 && starts[next - 1] >= i {
            next -= 1;
        }
        if next < starts.len() {
            need[i] = starts[next] + vlen - i;
        }
    }
    let mut prefix_max = Vec::with_capacity(n);
    let mut acc = 0;
    for &x in &need {
        acc = acc.max(x);
        prefix_max.push(acc);
    }
    (vlen..=n).find(|&l| prefix_max[n - l] <= l)
}

pub fn recurrence(w: &Word, v: &Word) -> Result<RecurrenceProfile> {
    let occ = w.occurrences(v, None)?;
    if occ.len() < 2 {
        return Err(Error::InsufficientOccurrences(occ.len()));
    }
    let max_gap = occ.windows(2).map(|p| p[1] - p[0]).max().unwrap_or(0);
    let starts: Vec<usize> = occ.iter().map(|s| s - 1).collect();
    Ok(RecurrenceProfile {
        pattern: v.clone(),
        prefix_length: w.len(),
        occurrences: occ.len(),
        max_gap,
        window_constant: smallest_window(w.len(), &starts, v.len()),
    })
}

impl RecurrenceProfile {
    /// Re-check the window claim directly on `w`.
    pub fn verify(&self, w: &Word) -> bool {
        let Ok(occ) = w.occurrences(&self.pattern, None) else {
            return false;
        };
        if w.len() != self.prefix_length || occ.len() != self.occurrences {
            return false;
        }
        match self.window_constant {
            None => false,
            Some(l) if l < self.pattern.len() || l > w.len() => false,
            Some(l) => w.letters().windows(l).all(|win| {
                win.windows(self.pattern.len())
                    .any(|f| f == self.pattern.letters())
            }),
        }
    }
}

/// Smallest period `P <= max_period`, then smallest preperiod, such that the
/// prefix agrees with eventual periodicity: `w[i] = w[i + P]` from the
/// preperiod on, with the periodic tail at least `2P` letters long and at
/// least half the prefix.
///
/// `max_period` is clamped to `len / 2`.
pub fn eventually_periodic_check(w: &Word, max_period: usize) -> Option<(usize, usize)> {
    let s = w.letters();
    let n = s.len();
    (1..=max_period.min(n / 2)).find_map(|period| {
        let preperiod = (0..n - period)
            .rev()
            .find(|&i| s[i] != s[i + period])
            .map_or(0, |i| i + 1);
        let tail = n - preperiod;
        (tail >= 2 * period && 2 * preperiod <= n).then_some((preperiod, period))
    })
}

pub(crate) mod json {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct RecurrenceDoc {
        m: usize,
        pattern: String,
        prefix_length: usize,
        occurrences: usize,
        max_gap: usize,
        window_constant: Option<usize>,
        prefix_certified_only: bool,
    }

    impl From<RecurrenceProfile> for RecurrenceDoc {
        fn from(r: RecurrenceProfile) -> Self {
            RecurrenceDoc {
                m: r.pattern.alphabet().size(),
                pattern: r.pattern.render(),
                prefix_length: r.prefix_length,
                occurrences: r.occurrences,
                max_gap: r.max_gap,
                window_constant: r.window_constant,
                prefix_certified_only: true,
            }
        }
    }

    impl TryFrom<RecurrenceDoc> for RecurrenceProfile {
        type Error = Error;

        fn try_from(d: RecurrenceDoc) -> Result<Self> {
            Ok(RecurrenceProfile {
                pattern: Word::parse(&d.pattern, Alphabet::new(d.m)?)?,
                prefix_length: d.prefix_length,
                occurrences: d.occurrences,
                max_gap: d.max_gap,
                window_constant: d.window_constant,
            })
        }
    }
}
