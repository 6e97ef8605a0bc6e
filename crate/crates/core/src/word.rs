//! Alphabets, words and the degree-lexicographic order.
//!
//! Letters are stored as ranks `1..=m`. Rank 1 (`'a'`) is the *largest*
//! letter, so `x1 ≻ x2 ≻ … ≻ xm`. Positions are 1-based and closed on both
//! ends at every public boundary.
//!
//! The text format caps alphabets at 26 letters (`'a'..='z'`); the
//! algorithms themselves do not care.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ALPHABET: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(u8);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if (1..=MAX_ALPHABET).contains(&size) {
            Ok(Alphabet(size as u8))
        } else {
            Err(Error::AlphabetSize(size))
        }
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn letter(self, rank: u8) -> char {
        (b'a' + rank - 1) as char
    }

    /// Ranks in descending deg-lex order of the letters, i.e. `1, 2, …, m`.
    pub fn ranks(self) -> impl Iterator<Item = u8> + Clone {
        1..=self.0
    }
}

/// Closed 1-based interval `[start, end]` inside a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Position {
    pub start: usize,
    pub end: usize,
}

impl Position {
    pub fn new(start: usize, end: usize) -> Self {
        Position { start, end }
    }

    /// Occurrence of length `len` starting at `start`. `len` must be positive.
    pub fn span(start: usize, len: usize) -> Self {
        Position {
            start,
            end: start + len - 1,
        }
    }

    pub fn length(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn contains(&self, other: &Position) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn check(&self, len: usize) -> Result<()> {
        if self.start >= 1 && self.start <= self.end && self.end <= len {
            Ok(())
        } else {
            Err(Error::Bounds {
                start: self.start,
                end: self.end,
                len,
            })
        }
    }

    /// 0-based half-open range, for slicing.
    pub(crate) fn range(&self) -> std::ops::Range<usize> {
        self.start - 1..self.end
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.start, self.end)
    }
}

/// Compare two rank slices in degree-lexicographic order.
///
/// Longer is greater; for equal lengths the first differing letter decides,
/// with the smaller rank being the greater letter.
pub fn deglex_cmp(u: &[u8], v: &[u8]) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| v.cmp(u))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(alphabet: Alphabet, letters: Vec<u8>) -> Result<Self> {
        if let Some(&rank) = letters.iter().find(|&&r| r == 0 || r as usize > alphabet.size()) {
            return Err(Error::LetterRank {
                rank,
                size: alphabet.0,
            });
        }
        Ok(Word { alphabet, letters })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    /// Parse the text format: the first `m` lowercase letters, no separators.
    pub fn parse(text: &str, alphabet: Alphabet) -> Result<Self> {
        let last = alphabet.letter(alphabet.0);
        let letters = text
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                'a'..='z' if (c as u8 - b'a') < alphabet.0 => Ok(c as u8 - b'a' + 1),
                _ => Err(Error::Parse {
                    index: i + 1,
                    found: c,
                    last,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { alphabet, letters })
    }

    /// Parse with the smallest alphabet covering every letter in `text`.
    pub fn parse_minimal(text: &str) -> Result<Self> {
        let max = text
            .chars()
            .filter(char::is_ascii_lowercase)
            .map(|c| (c as u8 - b'a' + 1) as usize)
            .max()
            .unwrap_or(1);
        Word::parse(text, Alphabet::new(max)?)
    }

    pub fn render(&self) -> String {
        self.letters.iter().map(|&r| self.alphabet.letter(r)).collect()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub(crate) fn from_slice(alphabet: Alphabet, letters: &[u8]) -> Self {
        Word {
            alphabet,
            letters: letters.to_vec(),
        }
    }

    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Self> {
        Word::new(alphabet, self.letters.clone())
    }

    pub fn compare_deglex(&self, other: &Word) -> Result<Ordering> {
        self.same_alphabet(other)?;
        Ok(deglex_cmp(&self.letters, &other.letters))
    }

    pub fn subword(&self, pos: Position) -> Result<Word> {
        pos.check(self.len())?;
        Ok(Word::from_slice(self.alphabet, &self.letters[pos.range()]))
    }

    /// All 1-based starts of `pattern` in `self`, overlaps included.
    ///
    /// With a window, only occurrences lying entirely inside it count.
    pub fn occurrences(&self, pattern: &Word, window: Option<Position>) -> Result<Vec<usize>> {
        self.same_alphabet(pattern)?;
        if pattern.is_empty() {
            return Err(Error::DegeneratePattern);
        }
        let (lo, hi) = match window {
            Some(w) => {
                w.check(self.len())?;
                (w.start - 1, w.end)
            }
            None => (0, self.len()),
        };
        Ok(find_all(&self.letters[lo..hi], &pattern.letters)
            .map(|i| i + lo + 1)
            .collect())
    }

    pub fn concat<'a>(alphabet: Alphabet, parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let letters = parts
            .into_iter()
            .flat_map(|w| w.letters.iter().copied())
            .collect();
        Word { alphabet, letters }
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word {
            alphabet: self.alphabet,
            letters: self.letters.repeat(times),
        }
    }

    fn same_alphabet(&self, other: &Word) -> Result<()> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.alphabet.0,
                right: other.alphabet.0,
            })
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// 0-based starts of `pattern` in `text`.
pub(crate) fn find_all<'a>(text: &'a [u8], pattern: &'a [u8]) -> impl Iterator<Item = usize> + 'a {
    text.windows(pattern.len())
        .enumerate()
        .filter(move |(_, w)| *w == pattern)
        .map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, m: usize) -> Word {
        Word::parse(s, Alphabet::new(m).unwrap()).unwrap()
    }

    #[test]
    fn deglex_examples() {
        assert_eq!(w("", 2).compare_deglex(&w("a", 2)).unwrap(), Ordering::Less);
        assert_eq!(w("ab", 2).compare_deglex(&w("ba", 2)).unwrap(), Ordering::Greater);
        assert_eq!(w("ba", 2).compare_deglex(&w("abb", 2)).unwrap(), Ordering::Less);
        assert_eq!(w("abc", 3).compare_deglex(&w("abc", 3)).unwrap(), Ordering::Equal);
    }

    #[test]
    fn mismatched_alphabets() {
        let err = w("ab", 2).compare_deglex(&w("ab", 3)).unwrap_err();
        assert_eq!(err, Error::AlphabetMismatch { left: 2, right: 3 });
    }

    #[test]
    fn subword_slices() {
        let abba = w("abba", 2);
        assert_eq!(abba.subword(Position::new(2, 3)).unwrap().render(), "bb");
        assert_eq!(abba.subword(Position::new(1, 4)).unwrap().render(), "abba");
        assert_eq!(abba.subword(Position::new(3, 3)).unwrap().render(), "b");
        assert!(matches!(
            abba.subword(Position::new(3, 5)),
            Err(Error::Bounds { .. })
        ));
        assert!(matches!(
            abba.subword(Position::new(0, 1)),
            Err(Error::Bounds { .. })
        ));
        assert!(matches!(
            abba.subword(Position::new(3, 2)),
            Err(Error::Bounds { .. })
        ));
    }

    #[test]
    fn occurrence_scan() {
        assert_eq!(w("aaa", 2).occurrences(&w("aa", 2), None).unwrap(), vec![1, 2]);
        assert_eq!(w("abab", 2).occurrences(&w("ba", 2), None).unwrap(), vec![2]);
        assert!(w("abab", 2).occurrences(&w("bb", 2), None).unwrap().is_empty());
        assert_eq!(
            w("abab", 2).occurrences(&w("", 2), None),
            Err(Error::DegeneratePattern)
        );
        let ab = w("ababab", 2);
        assert_eq!(
            ab.occurrences(&w("ab", 2), Some(Position::new(2, 5))).unwrap(),
            vec![3]
        );
        assert_eq!(
            ab.occurrences(&w("ab", 2), Some(Position::new(2, 6))).unwrap(),
            vec![3, 5]
        );
    }

    #[test]
    fn parse_and_render() {
        let m3 = Alphabet::new(3).unwrap();
        assert_eq!(Word::parse("abc", m3).unwrap().letters(), &[1, 2, 3]);
        assert!(Word::parse("", m3).unwrap().is_empty());
        assert_eq!(
            Word::parse("abd", m3).unwrap_err(),
            Error::Parse {
                index: 3,
                found: 'd',
                last: 'c'
            }
        );
        assert!(matches!(
            Word::parse("aB", m3),
            Err(Error::Parse { index: 2, .. })
        ));
        assert_eq!(w("cab", 3).render(), "cab");
    }

    #[test]
    fn alphabet_cap() {
        assert!(Alphabet::new(0).is_err());
        assert!(Alphabet::new(27).is_err());
        assert_eq!(Alphabet::new(26).unwrap().letter(26), 'z');
    }
}
