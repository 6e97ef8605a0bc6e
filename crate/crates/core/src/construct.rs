//! Windowed construction of a strongly q-decomposable subword inside a
//! uniformly recurrent, aperiodic word, certified on a finite prefix.
//!
//! Pick q distinct factors `w1 ≻ ⋯ ≻ wq` of a common length N and a window
//! size L such that every window `u[i, i+L]` contains all of them. Place
//! `wi` at the leftmost start `ji` in `[2Lq(i-1)+1, 2Lq(i-1)+L+1]`, cut
//! `ui = u[ji, j(i+1)-1]` and `uq = u[jq, jq+2Lq]`. Each `ui` starts with
//! `wi`, so the factors are strictly ordered under every permutation, and
//! the window spacing forces
//!
//! ```text
//! length(u1⋯uq) = 2Lq + jq - j1 + 1 ≥ L(2q²-1) + 1 > (q-1)L(2q+1) ≥ (q-1)·length(ui)
//! ```
//!
//! The last link is not strict in general: with single-letter markers,
//! `j(i+1) - ji` can reach `L(2q+1)` (e.g. `abab⋯`, q = 2, L = 1, j = (1, 6)).
//! The record keeps whether the strict form `length(ui) < L(2q+1)` held.
//!
//! All positions are 1-based closed intervals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphic::{complexity, smallest_window};
use crate::witness::{check_decomposition, MAX_CHECK_Q};
use crate::word::{deglex_cmp, Alphabet, Position, Word};

/// Every proof inequality, evaluated on the certificate's integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub factor_lengths: Vec<usize>,
    /// `L(2q+1)`, upper bound on each factor length.
    pub factor_bound: usize,
    /// Every factor is strictly shorter than `factor_bound`.
    pub factor_bound_strict: bool,
    /// Measured `length(u1⋯uq)`.
    pub total_length: usize,
    /// `2Lq + jq - j1 + 1`.
    pub total_by_formula: usize,
    /// `L(2q²-1) + 1`.
    pub total_lower_bound: usize,
    /// `(q-1)L(2q+1)`.
    pub chain_middle: usize,
    /// `(q-1)·max length(ui)`.
    pub weighted_max_factor: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "json::CertificateDoc", try_from = "json::CertificateDoc")]
pub struct StrongDecompCertificate {
    pub source: Word,
    pub q: usize,
    pub marker_length: usize,
    pub markers: Vec<Word>,
    pub recurrence_constant: usize,
    pub positions: Vec<usize>,
    pub factors: Vec<Word>,
    pub inequalities: InequalityRecord,
}

/// First clause a certificate fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub clause: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.clause, self.detail)
    }
}

impl std::error::Error for Violation {}

fn violation(clause: &'static str, detail: impl Into<String>) -> Violation {
    Violation {
        clause,
        detail: detail.into(),
    }
}

/// Smallest N with at least q distinct length-N factors, and the q deg-lex
/// largest of them in strictly decreasing order.
pub fn select_markers(prefix: &Word, q: usize) -> Result<(usize, Vec<Word>)> {
    if q < 2 {
        return Err(Error::Parameter(format!("need q >= 2 markers, got {q}")));
    }
    let profile = complexity(prefix, prefix.len())?;
    let n = profile
        .values
        .iter()
        .find(|v| v.omega >= q)
        .map(|v| v.n)
        .ok_or(Error::InsufficientComplexity { q, len: prefix.len() })?;
    let mut factors: Vec<&[u8]> = prefix.letters().windows(n).collect();
    factors.sort_unstable_by(|a, b| deglex_cmp(b, a));
    factors.dedup();
    let markers = factors
        .into_iter()
        .take(q)
        .map(|f| Word::from_slice(prefix.alphabet(), f))
        .collect();
    Ok((n, markers))
}

/// Smallest L such that every window `prefix[i, i+L]` (L + 1 letters)
/// contains every marker.
pub fn estimate_l(prefix: &Word, markers: &[Word]) -> Result<usize> {
    let mut widest = 0;
    for marker in markers {
        let occ = prefix.occurrences(marker, None)?;
        if occ.len() < 2 {
            return Err(Error::InsufficientOccurrences(occ.len()));
        }
        let starts: Vec<usize> = occ.iter().map(|s| s - 1).collect();
        let window = smallest_window(prefix.len(), &starts, marker.len())
            .ok_or(Error::InsufficientOccurrences(occ.len()))?;
        widest = widest.max(window);
    }
    Ok(widest.saturating_sub(1))
}

/// Prefix length the construction needs: `2Lq(q-1) + L + 1 + 2Lq + N`.
pub fn required_length(q: usize, l: usize, n: usize) -> Option<usize> {
    let two_lq = 2usize.checked_mul(l)?.checked_mul(q)?;
    two_lq
        .checked_mul(q - 1)?
        .checked_add(l)?
        .checked_add(1)?
        .checked_add(two_lq)?
        .checked_add(n)
}

/// Start window for marker i (1-based): `[2Lq(i-1)+1, 2Lq(i-1)+L+1]`.
fn window(l: usize, q: usize, i: usize) -> Option<(usize, usize)> {
    let lo = 2usize
        .checked_mul(l)?
        .checked_mul(q)?
        .checked_mul(i - 1)?
        .checked_add(1)?;
    Some((lo, lo.checked_add(l)?))
}

pub fn construct(prefix: &Word, q: usize) -> Result<StrongDecompCertificate> {
    if q > MAX_CHECK_Q {
        return Err(Error::Limit {
            what: "q",
            value: q,
            cap: MAX_CHECK_Q,
        });
    }
    let (n, markers) = select_markers(prefix, q)?;
    let l = estimate_l(prefix, &markers)?;
    let need = required_length(q, l, n).ok_or(Error::Overflow("required prefix length"))?;
    if prefix.len() < need {
        return Err(Error::PrefixTooShort {
            have: prefix.len(),
            need,
        });
    }

    let mut positions = Vec::with_capacity(q);
    for (i, marker) in markers.iter().enumerate() {
        let (lo, hi) = window(l, q, i + 1).ok_or(Error::Overflow("window"))?;
        let scan = Position::new(lo, (hi + n - 1).min(prefix.len()));
        let j = prefix
            .occurrences(marker, Some(scan))?
            .into_iter()
            .find(|&j| j <= hi)
            .ok_or_else(|| {
                Error::ConstructionFailed(format!(
                    "marker {} has no occurrence starting in [{lo},{hi}]",
                    i + 1
                ))
            })?;
        positions.push(j);
    }

    let mut factors = Vec::with_capacity(q);
    for i in 0..q {
        let end = if i + 1 < q {
            positions[i + 1] - 1
        } else {
            positions[i] + 2 * l * q
        };
        factors.push(prefix.subword(Position::new(positions[i], end))?);
    }

    let inequalities = evaluate(q, l, &positions, &factors).ok_or(Error::Overflow("inequality record"))?;
    let cert = StrongDecompCertificate {
        source: prefix.clone(),
        q,
        marker_length: n,
        markers,
        recurrence_constant: l,
        positions,
        factors,
        inequalities,
    };
    cert.check()
        .map_err(|v| Error::ConstructionFailed(v.to_string()))?;
    Ok(cert)
}

fn evaluate(q: usize, l: usize, positions: &[usize], factors: &[Word]) -> Option<InequalityRecord> {
    let factor_lengths: Vec<usize> = factors.iter().map(Word::len).collect();
    let factor_bound = l.checked_mul(2 * q + 1)?;
    let total_by_formula = 2usize
        .checked_mul(l)?
        .checked_mul(q)?
        .checked_add(*positions.last()?)?
        .checked_sub(*positions.first()?)?
        .checked_add(1)?;
    Some(InequalityRecord {
        total_length: factor_lengths.iter().sum(),
        factor_bound,
        factor_bound_strict: factor_lengths.iter().all(|&len| len < factor_bound),
        total_by_formula,
        total_lower_bound: l.checked_mul((2 * q * q).checked_sub(1)?)?.checked_add(1)?,
        chain_middle: (q - 1).checked_mul(factor_bound)?,
        weighted_max_factor: (q - 1).checked_mul(*factor_lengths.iter().max()?)?,
        factor_lengths,
    })
}

impl StrongDecompCertificate {
    /// Re-derive every invariant from the raw words and integers, stopping
    /// at the first failure.
    pub fn check(&self) -> std::result::Result<(), Violation> {
        let (q, l, n) = (self.q, self.recurrence_constant, self.marker_length);
        let src = &self.source;

        if !(2..=MAX_CHECK_Q).contains(&q) {
            return Err(violation(
                "parameters",
                format!("q = {q} outside 2..={MAX_CHECK_Q}"),
            ));
        }
        if l == 0 || n == 0 {
            return Err(violation("parameters", "L and N must be positive"));
        }
        if self.markers.len() != q || self.positions.len() != q || self.factors.len() != q {
            return Err(violation(
                "parameters",
                "need exactly q markers, positions and factors",
            ));
        }
        let alphabet = src.alphabet();
        if self
            .markers
            .iter()
            .chain(&self.factors)
            .any(|w| w.alphabet() != alphabet)
        {
            return Err(violation("alphabet", "all words must share the source alphabet"));
        }

        if let Some(i) = self.markers.iter().position(|w| w.len() != n) {
            return Err(violation(
                "markers",
                format!("marker {} does not have length N = {n}", i + 1),
            ));
        }
        for (i, pair) in self.markers.windows(2).enumerate() {
            if pair[0].compare_deglex(&pair[1]) != Ok(std::cmp::Ordering::Greater) {
                return Err(violation(
                    "markers",
                    format!("marker {} is not strictly above marker {}", i + 1, i + 2),
                ));
            }
        }

        if l >= src.len() {
            return Err(violation(
                "recurrence",
                format!("L = {l} leaves no window of L + 1 letters"),
            ));
        }
        for (k, marker) in self.markers.iter().enumerate() {
            for start in 1..=src.len() - l {
                let win = Position::new(start, start + l);
                if src.occurrences(marker, Some(win)).map_or(true, |o| o.is_empty()) {
                    return Err(violation(
                        "recurrence",
                        format!("window {win} misses marker {}", k + 1),
                    ));
                }
            }
        }

        for (i, &j) in self.positions.iter().enumerate() {
            let Some((lo, hi)) = window(l, q, i + 1) else {
                return Err(violation("parameters", "window bounds overflow"));
            };
            if j < lo || j > hi {
                return Err(violation(
                    "windows",
                    format!("j{} = {j} outside [{lo},{hi}]", i + 1),
                ));
            }
        }
        for (i, (&j, marker)) in self.positions.iter().zip(&self.markers).enumerate() {
            if src.subword(Position::span(j, n)).ok().as_ref() != Some(marker) {
                return Err(violation(
                    "marker-placement",
                    format!("marker {} does not occur at j{} = {j}", i + 1, i + 1),
                ));
            }
        }

        let Some(record) = evaluate(q, l, &self.positions, &self.factors) else {
            return Err(violation("parameters", "inequality arithmetic overflows"));
        };
        if record.total_length != record.total_by_formula {
            return Err(violation(
                "length-equation",
                format!(
                    "length(u1⋯uq) = {} but 2Lq + jq - j1 + 1 = {}",
                    record.total_length, record.total_by_formula
                ),
            ));
        }
        for i in 0..q {
            let end = if i + 1 < q {
                self.positions[i + 1].checked_sub(1)
            } else {
                Some(self.positions[i] + 2 * l * q)
            };
            let expected = end.and_then(|end| src.subword(Position::new(self.positions[i], end)).ok());
            if expected.as_ref() != Some(&self.factors[i]) {
                return Err(violation(
                    "factors",
                    format!("u{} is not the source slice it must be", i + 1),
                ));
            }
        }
        if let Some(i) = record
            .factor_lengths
            .iter()
            .position(|&len| len > record.factor_bound)
        {
            return Err(violation(
                "factor-bound",
                format!(
                    "length(u{}) = {} exceeds L(2q+1) = {}",
                    i + 1,
                    record.factor_lengths[i],
                    record.factor_bound
                ),
            ));
        }
        if record.total_length < record.total_lower_bound {
            return Err(violation(
                "length-lower-bound",
                format!(
                    "{} < L(2q²-1)+1 = {}",
                    record.total_length, record.total_lower_bound
                ),
            ));
        }
        if !(record.total_lower_bound > record.chain_middle
            && record.chain_middle >= record.weighted_max_factor)
        {
            return Err(violation(
                "chain",
                format!(
                    "expected {} > {} >= {}",
                    record.total_lower_bound, record.chain_middle, record.weighted_max_factor
                ),
            ));
        }
        if record.total_length <= record.weighted_max_factor {
            return Err(violation(
                "strong-length",
                format!(
                    "(q-1)·length(ui) = {} is not below {}",
                    record.weighted_max_factor, record.total_length
                ),
            ));
        }
        if check_decomposition(&self.factors, true) != Ok(true) {
            return Err(violation(
                "strong-decomposition",
                "factors fail the strong permutation check",
            ));
        }
        if record != self.inequalities {
            return Err(violation(
                "record",
                "stored inequality values differ from recomputed ones",
            ));
        }
        Ok(())
    }

    /// The concatenation `u1⋯uq` and where it sits in the source.
    pub fn subword(&self) -> (Position, Word) {
        let start = self.positions[0];
        let word = Word::concat(self.source.alphabet(), &self.factors);
        (Position::span(start, word.len()), word)
    }
}

pub fn verify_certificate(cert: &StrongDecompCertificate) -> bool {
    cert.check().is_ok()
}

pub(crate) mod json {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct CertificateDoc {
        m: usize,
        source: String,
        q: usize,
        marker_length: usize,
        markers: Vec<String>,
        recurrence_constant: usize,
        positions: Vec<usize>,
        factors: Vec<String>,
        inequalities: InequalityRecord,
    }

    impl From<StrongDecompCertificate> for CertificateDoc {
        fn from(c: StrongDecompCertificate) -> Self {
            CertificateDoc {
                m: c.source.alphabet().size(),
                source: c.source.render(),
                q: c.q,
                marker_length: c.marker_length,
                markers: c.markers.iter().map(Word::render).collect(),
                recurrence_constant: c.recurrence_constant,
                positions: c.positions,
                factors: c.factors.iter().map(Word::render).collect(),
                inequalities: c.inequalities,
            }
        }
    }

    impl TryFrom<CertificateDoc> for StrongDecompCertificate {
        type Error = Error;

        fn try_from(d: CertificateDoc) -> Result<Self> {
            let alphabet = Alphabet::new(d.m)?;
            let words = |v: &[String]| {
                v.iter()
                    .map(|s| Word::parse(s, alphabet))
                    .collect::<Result<Vec<_>>>()
            };
            Ok(StrongDecompCertificate {
                source: Word::parse(&d.source, alphabet)?,
                q: d.q,
                marker_length: d.marker_length,
                markers: words(&d.markers)?,
                recurrence_constant: d.recurrence_constant,
                positions: d.positions,
                factors: words(&d.factors)?,
                inequalities: d.inequalities,
            })
        }
    }
}
