//! Witnesses for the two sides of the Shirshov dichotomy.
//!
//! A word either contains a p-power `t^p` with `t` non-empty, or a subword
//! `w1⋯wq` whose identity-order concatenation strictly deg-lex dominates every
//! other permutation of its factors (q-decomposable). The strong variant also
//! demands `(q - 1)·length(wi) < length(w1⋯wq)` for every factor.
//!
//! Searches are deterministic: powers are reported leftmost first, then by
//! shortest base; decompositions by leftmost start, then shortest subword,
//! then lexicographically earliest vector of factor lengths.

pub(crate) mod decomp;
pub(crate) mod power;

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Position, Word};
use decomp::SplitCounter;

/// Largest q accepted by [`check_decomposition`] (q! permutations).
pub const MAX_CHECK_Q: usize = 8;
/// Largest q accepted by the subword search.
pub const MAX_SEARCH_Q: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Plain,
    Strong,
}

impl Mode {
    pub fn is_strong(self) -> bool {
        self == Mode::Strong
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Plain => "plain",
            Mode::Strong => "strong",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Mode::Plain),
            "strong" => Ok(Mode::Strong),
            other => Err(Error::Parameter(format!(
                "unknown mode {other:?}, expected plain or strong"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerWitness {
    /// The whole occurrence of `base^exponent`.
    pub position: Position,
    pub base: Word,
    pub exponent: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompWitness {
    pub position: Position,
    pub factors: Vec<Word>,
    /// Whether the factors also satisfy the strong length constraint.
    pub strong: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Power(PowerWitness),
    Decomposition(DecompWitness),
}

/// Limits on the exhaustive split search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompBudget {
    /// Longest input word searched at all.
    pub max_length: usize,
    /// Partial and complete splits visited before giving up.
    pub max_splits: u64,
}

impl Default for DecompBudget {
    fn default() -> Self {
        DecompBudget {
            max_length: 200,
            max_splits: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub subwords_examined: u64,
    pub splits_examined: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompSearch {
    Found(DecompWitness),
    NotFound,
    BudgetExceeded,
}

pub fn find_power(w: &Word, p: usize) -> Result<Option<PowerWitness>> {
    check_exponent(p)?;
    Ok(power::leftmost_power(w.letters(), p).map(|(i, l)| power_witness(w, i, l, p)))
}

/// Reference scan comparing every candidate occurrence directly.
pub fn find_power_naive(w: &Word, p: usize) -> Result<Option<PowerWitness>> {
    check_exponent(p)?;
    Ok(power::leftmost_power_naive(w.letters(), p).map(|(i, l)| power_witness(w, i, l, p)))
}

fn check_exponent(p: usize) -> Result<()> {
    if p < 2 {
        return Err(Error::Parameter(format!(
            "power exponent p = {p}, must be at least 2"
        )));
    }
    Ok(())
}

fn power_witness(w: &Word, start: usize, base_len: usize, p: usize) -> PowerWitness {
    PowerWitness {
        position: Position::span(start + 1, base_len * p),
        base: Word::from_slice(w.alphabet(), &w.letters()[start..start + base_len]),
        exponent: p,
    }
}

/// Does `factors` (in this order) form a q-decomposition?
pub fn check_decomposition(factors: &[Word], strong: bool) -> Result<bool> {
    let q = factors.len();
    if q < 2 {
        return Err(Error::Parameter(format!(
            "decomposition needs q >= 2 factors, got {q}"
        )));
    }
    if q > MAX_CHECK_Q {
        return Err(Error::Limit {
            what: "q",
            value: q,
            cap: MAX_CHECK_Q,
        });
    }
    if let Some(i) = factors.iter().position(Word::is_empty) {
        return Err(Error::DegenerateFactor(i + 1));
    }
    let alphabet = factors[0].alphabet();
    if let Some(f) = factors.iter().find(|f| f.alphabet() != alphabet) {
        return Err(Error::AlphabetMismatch {
            left: alphabet.size() as u8,
            right: f.alphabet().size() as u8,
        });
    }
    let slices: Vec<&[u8]> = factors.iter().map(Word::letters).collect();
    let total = slices.iter().map(|s| s.len()).sum();
    Ok(decomp::is_decomposition(&slices)
        && (!strong || decomp::is_strong(slices.iter().map(|s| s.len()), q, total)))
}

pub fn find_decomposable_subword(
    w: &Word,
    q: usize,
    strong: bool,
    budget: DecompBudget,
) -> Result<(DecompSearch, SearchStats)> {
    if q < 2 {
        return Err(Error::Parameter(format!(
            "decomposition needs q >= 2 factors, got {q}"
        )));
    }
    let mut stats = SearchStats::default();
    let n = w.len();
    if n < q {
        return Ok((DecompSearch::NotFound, stats));
    }
    if q > MAX_SEARCH_Q {
        return Err(Error::Limit {
            what: "q",
            value: q,
            cap: MAX_SEARCH_Q,
        });
    }
    if n > budget.max_length {
        return Ok((DecompSearch::BudgetExceeded, stats));
    }
    let s = w.letters();
    let mut counter = SplitCounter::new(budget.max_splits);
    for i in 0..=n - q {
        for len in q..=n - i {
            stats.subwords_examined += 1;
            let found = decomp::earliest_split(&s[i..i + len], q, strong, &mut counter);
            stats.splits_examined = counter.examined.min(counter.limit);
            match found {
                Err(_) => return Ok((DecompSearch::BudgetExceeded, stats)),
                Ok(Some(lengths)) => {
                    let witness = decomp_witness(w.alphabet(), &s[i..i + len], i, &lengths);
                    return Ok((DecompSearch::Found(witness), stats));
                }
                Ok(None) => {}
            }
        }
    }
    Ok((DecompSearch::NotFound, stats))
}

pub(crate) fn decomp_witness(
    alphabet: Alphabet,
    sub: &[u8],
    start: usize,
    lengths: &[usize],
) -> DecompWitness {
    let q = lengths.len();
    let mut factors = Vec::with_capacity(q);
    let mut off = 0;
    for &l in lengths {
        factors.push(Word::from_slice(alphabet, &sub[off..off + l]));
        off += l;
    }
    DecompWitness {
        position: Position::span(start + 1, sub.len()),
        strong: decomp::is_strong(lengths.iter().copied(), q, sub.len()),
        factors,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Power(PowerWitness),
    Decomposition(DecompWitness),
    None,
    BudgetExceeded,
}

impl Outcome {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Power(_) => "power",
            Outcome::Decomposition(_) => "decomposition",
            Outcome::None => "none",
            Outcome::BudgetExceeded => "budget_exceeded",
        }
    }

    pub fn witness(&self) -> Option<Witness> {
        match self {
            Outcome::Power(p) => Some(Witness::Power(p.clone())),
            Outcome::Decomposition(d) => Some(Witness::Decomposition(d.clone())),
            _ => None,
        }
    }
}

impl From<DecompSearch> for Outcome {
    fn from(s: DecompSearch) -> Self {
        match s {
            DecompSearch::Found(d) => Outcome::Decomposition(d),
            DecompSearch::NotFound => Outcome::None,
            DecompSearch::BudgetExceeded => Outcome::BudgetExceeded,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Run the decomposition search even when a power was found.
    pub exhaustive: bool,
    pub budget: DecompBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "json::ReportDoc", try_from = "json::ReportDoc")]
pub struct AnalysisReport {
    pub word: Word,
    pub p: usize,
    pub q: usize,
    pub mode: Mode,
    pub outcome: Outcome,
    /// Decomposition search result, present only for exhaustive runs that
    /// reported a power as the main outcome.
    pub additional: Option<Outcome>,
    pub stats: SearchStats,
}

/// Power search first, then the decomposition search.
pub fn analyze(w: &Word, p: usize, q: usize, mode: Mode, opts: AnalyzeOptions) -> Result<AnalysisReport> {
    let power = find_power(w, p)?;
    if q < 2 {
        return Err(Error::Parameter(format!(
            "decomposition needs q >= 2 factors, got {q}"
        )));
    }
    let mut report = AnalysisReport {
        word: w.clone(),
        p,
        q,
        mode,
        outcome: Outcome::None,
        additional: None,
        stats: SearchStats::default(),
    };
    if let Some(pw) = power {
        report.outcome = Outcome::Power(pw);
        if !opts.exhaustive {
            return Ok(report);
        }
    }
    let (search, stats) = find_decomposable_subword(w, q, mode.is_strong(), opts.budget)?;
    report.stats = stats;
    if matches!(report.outcome, Outcome::Power(_)) {
        report.additional = Some(search.into());
    } else {
        report.outcome = search.into();
    }
    Ok(report)
}

/// Re-check a witness against `w` from scratch with word-level primitives.
pub fn verify_witness(w: &Word, witness: &Witness) -> bool {
    match witness {
        Witness::Power(pw) => verify_power(w, pw),
        Witness::Decomposition(dw) => verify_decomposition(w, dw),
    }
}

fn verify_power(w: &Word, pw: &PowerWitness) -> bool {
    if pw.base.is_empty() || pw.exponent < 2 || pw.base.alphabet() != w.alphabet() {
        return false;
    }
    match w.subword(pw.position) {
        Ok(sub) => sub == pw.base.repeat(pw.exponent),
        Err(_) => false,
    }
}

fn verify_decomposition(w: &Word, dw: &DecompWitness) -> bool {
    let q = dw.factors.len();
    if !(2..=MAX_CHECK_Q).contains(&q)
        || dw
            .factors
            .iter()
            .any(|f| f.is_empty() || f.alphabet() != w.alphabet())
    {
        return false;
    }
    let Ok(sub) = w.subword(dw.position) else {
        return false;
    };
    let identity = Word::concat(w.alphabet(), &dw.factors);
    if identity != sub {
        return false;
    }
    let dominated = (0..q).permutations(q).skip(1).all(|perm| {
        let permuted = Word::concat(w.alphabet(), perm.iter().map(|&j| &dw.factors[j]));
        identity.compare_deglex(&permuted) == Ok(std::cmp::Ordering::Greater)
    });
    dominated && (!dw.strong || dw.factors.iter().all(|f| (q - 1) * f.len() < identity.len()))
}

impl AnalysisReport {
    /// Every witness in the report re-verifies against the word.
    pub fn verify(&self) -> bool {
        let ok = |o: &Outcome| o.witness().is_none_or(|wt| verify_witness(&self.word, &wt));
        let strong_ok = |o: &Outcome| match o {
            Outcome::Decomposition(d) => !self.mode.is_strong() || d.strong,
            _ => true,
        };
        ok(&self.outcome)
            && strong_ok(&self.outcome)
            && self.additional.as_ref().is_none_or(|o| ok(o) && strong_ok(o))
    }
}

pub(crate) mod json {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(tag = "kind", rename_all = "snake_case")]
    pub enum OutcomeDoc {
        Power {
            position: Position,
            base: String,
            exponent: usize,
        },
        Decomposition {
            position: Position,
            factors: Vec<String>,
            strong: bool,
        },
        None,
        BudgetExceeded,
    }

    impl From<&Outcome> for OutcomeDoc {
        fn from(o: &Outcome) -> Self {
            match o {
                Outcome::Power(p) => OutcomeDoc::Power {
                    position: p.position,
                    base: p.base.render(),
                    exponent: p.exponent,
                },
                Outcome::Decomposition(d) => OutcomeDoc::Decomposition {
                    position: d.position,
                    factors: d.factors.iter().map(Word::render).collect(),
                    strong: d.strong,
                },
                Outcome::None => OutcomeDoc::None,
                Outcome::BudgetExceeded => OutcomeDoc::BudgetExceeded,
            }
        }
    }

    impl OutcomeDoc {
        pub fn into_outcome(self, alphabet: Alphabet) -> Result<Outcome> {
            Ok(match self {
                OutcomeDoc::Power {
                    position,
                    base,
                    exponent,
                } => Outcome::Power(PowerWitness {
                    position,
                    base: Word::parse(&base, alphabet)?,
                    exponent,
                }),
                OutcomeDoc::Decomposition {
                    position,
                    factors,
                    strong,
                } => Outcome::Decomposition(DecompWitness {
                    position,
                    factors: factors
                        .iter()
                        .map(|f| Word::parse(f, alphabet))
                        .collect::<Result<_>>()?,
                    strong,
                }),
                OutcomeDoc::None => Outcome::None,
                OutcomeDoc::BudgetExceeded => Outcome::BudgetExceeded,
            })
        }
    }

    #[derive(Serialize, Deserialize)]
    pub struct ReportDoc {
        word: String,
        m: usize,
        p: usize,
        q: usize,
        mode: Mode,
        outcome: OutcomeDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        additional: Option<OutcomeDoc>,
        stats: SearchStats,
    }

    impl From<AnalysisReport> for ReportDoc {
        fn from(r: AnalysisReport) -> Self {
            ReportDoc {
                word: r.word.render(),
                m: r.word.alphabet().size(),
                p: r.p,
                q: r.q,
                mode: r.mode,
                outcome: (&r.outcome).into(),
                additional: r.additional.as_ref().map(Into::into),
                stats: r.stats,
            }
        }
    }

    impl TryFrom<ReportDoc> for AnalysisReport {
        type Error = Error;

        fn try_from(d: ReportDoc) -> Result<Self> {
            let alphabet = Alphabet::new(d.m)?;
            Ok(AnalysisReport {
                word: Word::parse(&d.word, alphabet)?,
                p: d.p,
                q: d.q,
                mode: d.mode,
                outcome: d.outcome.into_outcome(alphabet)?,
                additional: d.additional.map(|o| o.into_outcome(alphabet)).transpose()?,
                stats: d.stats,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, Alphabet::new(2).unwrap()).unwrap()
    }

    fn words(ss: &[&str]) -> Vec<Word> {
        ss.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn power_examples() {
        let pw = find_power(&w("abab"), 2).unwrap().unwrap();
        assert_eq!(pw.base.render(), "ab");
        assert_eq!(pw.position, Position::new(1, 4));
        assert_eq!(find_power(&w("aba"), 2).unwrap(), None);
        assert!(matches!(find_power(&w("aba"), 1), Err(Error::Parameter(_))));
    }

    #[test]
    fn decomposition_checks() {
        assert!(check_decomposition(&words(&["a", "b"]), false).unwrap());
        assert!(!check_decomposition(&words(&["b", "a"]), false).unwrap());
        assert!(!check_decomposition(&words(&["ab", "ab"]), false).unwrap());
        assert!(check_decomposition(&words(&["a", "b"]), true).unwrap());
        assert_eq!(
            check_decomposition(&words(&["a", ""]), false),
            Err(Error::DegenerateFactor(2))
        );
        assert!(matches!(
            check_decomposition(&words(&["a"]), false),
            Err(Error::Parameter(_))
        ));
        let nine = vec![w("a"); 9];
        assert_eq!(
            check_decomposition(&nine, false),
            Err(Error::Limit {
                what: "q",
                value: 9,
                cap: 8
            })
        );
    }

    #[test]
    fn subword_search_examples() {
        let budget = DecompBudget::default();
        let (res, _) = find_decomposable_subword(&w("ba"), 2, false, budget).unwrap();
        assert_eq!(res, DecompSearch::NotFound);

        let (res, stats) = find_decomposable_subword(&w("aba"), 2, false, budget).unwrap();
        let DecompSearch::Found(d) = res else {
            panic!("expected witness")
        };
        assert_eq!(d.position, Position::new(1, 2));
        assert_eq!(d.factors, words(&["a", "b"]));
        assert_eq!(stats.subwords_examined, 1);

        let (res, _) = find_decomposable_subword(&w("ab"), 2, true, budget).unwrap();
        let DecompSearch::Found(d) = res else {
            panic!("expected witness")
        };
        assert!(d.strong);
        assert_eq!(d.factors, words(&["a", "b"]));
    }

    #[test]
    fn search_limits() {
        let budget = DecompBudget {
            max_length: 3,
            max_splits: 10,
        };
        let (res, _) = find_decomposable_subword(&w("bbbb"), 2, false, budget).unwrap();
        assert_eq!(res, DecompSearch::BudgetExceeded);
        assert!(matches!(
            find_decomposable_subword(&w("abababab"), 7, false, DecompBudget::default()),
            Err(Error::Limit { cap: 6, .. })
        ));
        // too short for seven factors: trivially nothing to find
        let (res, _) = find_decomposable_subword(&w("ab"), 7, false, DecompBudget::default()).unwrap();
        assert_eq!(res, DecompSearch::NotFound);
        let tight = DecompBudget {
            max_length: 200,
            max_splits: 2,
        };
        let (res, _) = find_decomposable_subword(&w("bbbbbbbb"), 3, false, tight).unwrap();
        assert_eq!(res, DecompSearch::BudgetExceeded);
    }

    #[test]
    fn analyze_examples() {
        let opts = AnalyzeOptions::default();
        let r = analyze(&w("aa"), 2, 2, Mode::Plain, opts).unwrap();
        assert!(matches!(&r.outcome, Outcome::Power(p) if p.base.render() == "a"));

        let r = analyze(&w("ab"), 2, 2, Mode::Plain, opts).unwrap();
        assert!(matches!(&r.outcome, Outcome::Decomposition(d) if d.factors == words(&["a", "b"])));

        let r = analyze(&w("b"), 2, 2, Mode::Plain, opts).unwrap();
        assert_eq!(r.outcome, Outcome::None);

        let r = analyze(
            &w("aab"),
            2,
            2,
            Mode::Plain,
            AnalyzeOptions {
                exhaustive: true,
                ..opts
            },
        )
        .unwrap();
        assert_eq!(r.outcome.kind(), "power");
        assert_eq!(r.additional.as_ref().map(Outcome::kind), Some("decomposition"));
        assert!(r.verify());
    }

    #[test]
    fn verification_rejects_bad_witnesses() {
        let abab = w("abab");
        let good = find_power(&abab, 2).unwrap().unwrap();
        assert!(verify_witness(&abab, &Witness::Power(good)));

        let bad = PowerWitness {
            position: Position::new(1, 3),
            base: w("ab"),
            exponent: 2,
        };
        assert!(!verify_witness(&w("aba"), &Witness::Power(bad)));

        let bad = DecompWitness {
            position: Position::new(1, 2),
            factors: words(&["b", "a"]),
            strong: false,
        };
        assert!(!verify_witness(&w("ba"), &Witness::Decomposition(bad)));

        let outside = DecompWitness {
            position: Position::new(2, 3),
            factors: words(&["a", "b"]),
            strong: true,
        };
        assert!(!verify_witness(&w("ab"), &Witness::Decomposition(outside)));
    }

    #[test]
    fn report_json_shape() {
        let r = analyze(&w("abab"), 2, 2, Mode::Plain, AnalyzeOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["outcome"]["kind"], "power");
        assert_eq!(v["outcome"]["base"], "ab");
        assert_eq!(v["outcome"]["position"]["start"], 1);
        assert_eq!(v["outcome"]["position"]["end"], 4);
        assert_eq!(v["m"], 2);
        assert_eq!(v["mode"], "plain");
        let back: AnalysisReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
