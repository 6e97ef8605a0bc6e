//! Backtracking search for words with no p-power and no (strong)
//! q-decomposable subword.
//!
//! Witnesses survive extension, so a branch dies the moment one appears.
//! Every witness that is not a suffix of the current word was already present
//! in its parent, hence each new node only checks suffixes.
//!
//! The tree is split by first letter. Each first-letter branch gets its own
//! node budget and is explored in a fixed child order (rank 1 first), so the
//! merged report does not depend on how many threads ran the branches.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::witness::decomp::{earliest_split, SplitCounter};
use crate::witness::power::power_suffix;
use crate::witness::{analyze, AnalyzeOptions, DecompBudget, Mode, Outcome, MAX_SEARCH_Q};
use crate::word::{Alphabet, Word};

pub const MAX_EXEMPLARS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_depth: usize,
    /// Per first-letter branch.
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 64,
            max_nodes: 10_000_000,
        }
    }
}

impl SearchBudget {
    pub fn new(max_depth: usize, max_nodes: u64) -> Result<Self> {
        if max_depth == 0 || max_nodes == 0 {
            return Err(Error::Parameter("search budget limits must be positive".into()));
        }
        Ok(SearchBudget { max_depth, max_nodes })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundClaim {
    /// Search exhausted: `longest_witness_free_length` is exact and
    /// `empirical_bound` is a true upper bound.
    Exact,
    /// Budget hit: only a lower bound on the longest witness-free length.
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "json::BoundDoc", try_from = "json::BoundDoc")]
pub struct BoundReport {
    pub alphabet: Alphabet,
    pub p: usize,
    pub q: usize,
    pub mode: Mode,
    pub longest_witness_free_length: usize,
    pub exemplars: Vec<Word>,
    pub empirical_bound: usize,
    pub exhausted: bool,
    pub nodes_visited: u64,
    /// Candidate words examined at each length, index 0 being the empty word.
    pub nodes_per_depth: Vec<u64>,
    pub budget: SearchBudget,
}

impl BoundReport {
    pub fn claim(&self) -> BoundClaim {
        if self.exhausted {
            BoundClaim::Exact
        } else {
            BoundClaim::LowerBound
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Params {
    m: u8,
    p: usize,
    q: usize,
    strong: bool,
    budget: SearchBudget,
    split_limit: u64,
}

/// What one first-letter branch found.
#[derive(Debug, Default)]
struct Branch {
    deepest: usize,
    exemplars: Vec<Vec<u8>>,
    nodes: u64,
    per_depth: Vec<u64>,
    complete: bool,
}

struct Explorer {
    params: Params,
    word: Vec<u8>,
    out: Branch,
}

impl Explorer {
    fn record(&mut self) {
        let d = self.word.len();
        if d > self.out.deepest {
            self.out.deepest = d;
            self.out.exemplars.clear();
        }
        if d == self.out.deepest && self.out.exemplars.len() < MAX_EXEMPLARS {
            self.out.exemplars.push(self.word.clone());
        }
    }

    /// Visit the candidate `word + rank`; explore it if witness-free.
    fn visit(&mut self, rank: u8) -> Result<()> {
        if self.out.nodes >= self.params.budget.max_nodes {
            self.out.complete = false;
            return Ok(());
        }
        self.out.nodes += 1;
        self.word.push(rank);
        let d = self.word.len();
        if self.out.per_depth.len() <= d {
            self.out.per_depth.resize(d + 1, 0);
        }
        self.out.per_depth[d] += 1;
        match suffix_witness(&self.word, &self.params)? {
            Some(true) => {}
            Some(false) => self.explore()?,
            None => self.out.complete = false,
        }
        self.word.pop();
        Ok(())
    }

    fn explore(&mut self) -> Result<()> {
        self.record();
        if self.word.len() >= self.params.budget.max_depth {
            self.out.complete = false;
            return Ok(());
        }
        for rank in 1..=self.params.m {
            self.visit(rank)?;
        }
        Ok(())
    }
}

/// Does some witness end at the last letter? `None` when the split search
/// ran out of budget and the answer is unknown.
fn suffix_witness(s: &[u8], params: &Params) -> Result<Option<bool>> {
    if power_suffix(s, params.p).is_some() {
        return Ok(Some(true));
    }
    let n = s.len();
    if n < params.q {
        return Ok(Some(false));
    }
    if params.q > MAX_SEARCH_Q {
        return Err(Error::Limit {
            what: "q",
            value: params.q,
            cap: MAX_SEARCH_Q,
        });
    }
    for i in 0..=n - params.q {
        let mut counter = SplitCounter::new(params.split_limit);
        match earliest_split(&s[i..], params.q, params.strong, &mut counter) {
            Ok(Some(_)) => return Ok(Some(true)),
            Ok(None) => {}
            Err(_) => return Ok(None),
        }
    }
    Ok(Some(false))
}

fn search_branch(first: u8, params: Params) -> Result<Branch> {
    let mut ex = Explorer {
        params,
        word: Vec::new(),
        out: Branch {
            complete: true,
            ..Branch::default()
        },
    };
    ex.visit(first)?;
    Ok(ex.out)
}

/// Longest words over `m` letters free of p-powers and of (strongly, in
/// strong mode) q-decomposable subwords, found by depth-first extension.
pub fn longest_witness_free(
    m: usize,
    p: usize,
    q: usize,
    mode: Mode,
    budget: SearchBudget,
    threads: usize,
) -> Result<BoundReport> {
    let alphabet = Alphabet::new(m)?;
    if p < 2 {
        return Err(Error::Parameter(format!(
            "power exponent p = {p}, must be at least 2"
        )));
    }
    if q < 2 {
        return Err(Error::Parameter(format!(
            "decomposition needs q >= 2 factors, got {q}"
        )));
    }
    let budget = SearchBudget::new(budget.max_depth, budget.max_nodes)?;
    let params = Params {
        m: m as u8,
        p,
        q,
        strong: mode.is_strong(),
        budget,
        split_limit: DecompBudget::default().max_splits,
    };

    let branches = run_branches(params, threads.max(1))?;

    let deepest = branches.iter().map(|b| b.deepest).max().unwrap_or(0);
    let exemplars = branches
        .iter()
        .filter(|b| b.deepest == deepest)
        .flat_map(|b| b.exemplars.iter())
        .take(MAX_EXEMPLARS)
        .map(|s| Word::new(alphabet, s.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut per_depth = vec![1u64];
    for b in &branches {
        if per_depth.len() < b.per_depth.len() {
            per_depth.resize(b.per_depth.len(), 0);
        }
        for (d, &c) in b.per_depth.iter().enumerate().skip(1) {
            per_depth[d] += c;
        }
    }
    Ok(BoundReport {
        alphabet,
        p,
        q,
        mode,
        longest_witness_free_length: deepest,
        exemplars,
        empirical_bound: deepest + 1,
        exhausted: branches.iter().all(|b| b.complete),
        nodes_visited: branches.iter().map(|b| b.nodes).sum(),
        nodes_per_depth: per_depth,
        budget,
    })
}

fn run_branches(params: Params, threads: usize) -> Result<Vec<Branch>> {
    let m = params.m as usize;
    if threads == 1 || m == 1 {
        return (1..=params.m).map(|r| search_branch(r, params)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Branch>>>> = Mutex::new((0..m).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads.min(m) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= m {
                    break;
                }
                let result = search_branch(i as u8 + 1, params);
                slots.lock().unwrap()[i] = Some(result);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every branch is searched"))
        .collect()
}

/// Does `w` contain a witness, by a full scan rather than suffix checks?
fn has_witness(w: &Word, p: usize, q: usize, mode: Mode) -> Result<Option<bool>> {
    let report = analyze(w, p, q, mode, AnalyzeOptions::default())?;
    Ok(match report.outcome {
        Outcome::Power(_) | Outcome::Decomposition(_) => Some(true),
        Outcome::None => Some(false),
        Outcome::BudgetExceeded => None,
    })
}

/// Largest `m^len` enumerated word by word in [`verify_frontier`].
const LITERAL_ENUMERATION_CAP: u64 = 1 << 20;

/// Independently re-check a report: every exemplar is witness-free and of the
/// claimed length, and, when the search claims exhaustion, every word of
/// length `empirical_bound` contains a witness.
pub fn verify_frontier(report: &BoundReport) -> bool {
    let (p, q, mode) = (report.p, report.q, report.mode);
    if report.empirical_bound != report.longest_witness_free_length + 1 || report.exemplars.is_empty() {
        return false;
    }
    let exemplars_ok = report.exemplars.iter().all(|w| {
        w.len() == report.longest_witness_free_length
            && w.alphabet() == report.alphabet
            && has_witness(w, p, q, mode) == Ok(Some(false))
    });
    if !exemplars_ok {
        return false;
    }
    if !report.exhausted {
        return true;
    }
    frontier_closed(report.alphabet, report.empirical_bound, p, q, mode)
}

/// Every word of length `len` contains a witness.
fn frontier_closed(alphabet: Alphabet, len: usize, p: usize, q: usize, mode: Mode) -> bool {
    let m = alphabet.size() as u64;
    let total = m.checked_pow(len as u32);
    match total {
        Some(total) if total <= LITERAL_ENUMERATION_CAP => (0..total).all(|code| {
            let mut c = code;
            let letters = (0..len)
                .map(|_| {
                    let r = (c % m) as u8 + 1;
                    c /= m;
                    r
                })
                .collect();
            let w = Word::new(alphabet, letters).expect("ranks in range");
            has_witness(&w, p, q, mode) == Ok(Some(true))
        }),
        // too many words to list: walk the tree, cutting at prefixes that already carry a witness
        _ => closed_below(alphabet, &mut Vec::new(), len, p, q, mode),
    }
}

fn closed_below(
    alphabet: Alphabet,
    prefix: &mut Vec<u8>,
    len: usize,
    p: usize,
    q: usize,
    mode: Mode,
) -> bool {
    if !prefix.is_empty() {
        let w = Word::new(alphabet, prefix.clone()).expect("ranks in range");
        match has_witness(&w, p, q, mode) {
            Ok(Some(true)) => return true,
            Ok(Some(false)) if prefix.len() == len => return false,
            Ok(Some(false)) => {}
            _ => return false,
        }
    }
    alphabet.ranks().all(|r| {
        prefix.push(r);
        let ok = closed_below(alphabet, prefix, len, p, q, mode);
        prefix.pop();
        ok
    })
}

pub(crate) mod json {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct BoundDoc {
        m: usize,
        p: usize,
        q: usize,
        mode: Mode,
        longest_witness_free_length: usize,
        exemplars: Vec<String>,
        empirical_bound: usize,
        exhausted: bool,
        claim: BoundClaim,
        nodes_visited: u64,
        nodes_per_depth: Vec<u64>,
        budget: SearchBudget,
    }

    impl From<BoundReport> for BoundDoc {
        fn from(r: BoundReport) -> Self {
            BoundDoc {
                m: r.alphabet.size(),
                p: r.p,
                q: r.q,
                mode: r.mode,
                longest_witness_free_length: r.longest_witness_free_length,
                exemplars: r.exemplars.iter().map(Word::render).collect(),
                empirical_bound: r.empirical_bound,
                exhausted: r.exhausted,
                claim: r.claim(),
                nodes_visited: r.nodes_visited,
                nodes_per_depth: r.nodes_per_depth,
                budget: r.budget,
            }
        }
    }

    impl TryFrom<BoundDoc> for BoundReport {
        type Error = Error;

        fn try_from(d: BoundDoc) -> Result<Self> {
            let alphabet = Alphabet::new(d.m)?;
            let report = BoundReport {
                alphabet,
                p: d.p,
                q: d.q,
                mode: d.mode,
                longest_witness_free_length: d.longest_witness_free_length,
                exemplars: d
                    .exemplars
                    .iter()
                    .map(|s| Word::parse(s, alphabet))
                    .collect::<Result<_>>()?,
                empirical_bound: d.empirical_bound,
                exhausted: d.exhausted,
                nodes_visited: d.nodes_visited,
                nodes_per_depth: d.nodes_per_depth,
                budget: d.budget,
            };
            if report.claim() != d.claim {
                return Err(Error::Parameter("claim does not match the exhausted flag".into()));
            }
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rendered(r: &BoundReport) -> Vec<String> {
        r.exemplars.iter().map(Word::render).collect()
    }

    #[test]
    fn binary_square_free_frontier() {
        let r = longest_witness_free(2, 2, 9, Mode::Plain, SearchBudget::default(), 1).unwrap();
        assert_eq!(r.longest_witness_free_length, 3);
        assert_eq!(r.empirical_bound, 4);
        assert!(r.exhausted);
        assert_eq!(rendered(&r), ["aba", "bab"]);
        assert!(verify_frontier(&r));
    }

    #[test]
    fn unary_alphabet() {
        let r = longest_witness_free(1, 2, 2, Mode::Plain, SearchBudget::default(), 1).unwrap();
        assert_eq!(r.longest_witness_free_length, 1);
        assert_eq!(rendered(&r), ["a"]);
        assert!(r.exhausted);
    }

    #[test]
    fn ternary_q2_decreasing_words_survive() {
        // xy with x ≻ y decomposes; the only survivors are rank-increasing
        let r = longest_witness_free(3, 2, 2, Mode::Plain, SearchBudget::default(), 1).unwrap();
        assert_eq!(r.longest_witness_free_length, 3);
        assert_eq!(rendered(&r), ["cba"]);
        assert!(verify_frontier(&r));
    }

    #[test]
    fn tampered_reports_fail() {
        let mut r = longest_witness_free(2, 2, 9, Mode::Plain, SearchBudget::default(), 1).unwrap();
        r.exemplars.push(Word::parse("abab", r.alphabet).unwrap());
        assert!(!verify_frontier(&r));

        let mut r = longest_witness_free(2, 2, 9, Mode::Plain, SearchBudget::default(), 1).unwrap();
        r.longest_witness_free_length = 2;
        r.empirical_bound = 3;
        r.exemplars = vec![Word::parse("ab", r.alphabet).unwrap()];
        assert!(!verify_frontier(&r), "length-3 words without witnesses exist");
    }

    #[test]
    fn budget_hit_is_a_lower_bound() {
        let r = longest_witness_free(3, 2, 2, Mode::Plain, SearchBudget::new(64, 2).unwrap(), 1).unwrap();
        assert!(!r.exhausted);
        assert_eq!(r.claim(), BoundClaim::LowerBound);
        assert!(verify_frontier(&r));

        let r = longest_witness_free(2, 3, 9, Mode::Plain, SearchBudget::new(5, 1000).unwrap(), 1).unwrap();
        assert!(!r.exhausted, "depth cap reached with survivors");
        assert_eq!(r.longest_witness_free_length, 5);
    }

    #[test]
    fn thread_count_does_not_change_the_report() {
        let budget = SearchBudget::new(64, 200).unwrap();
        let one = longest_witness_free(3, 2, 3, Mode::Strong, budget, 1).unwrap();
        let many = longest_witness_free(3, 2, 3, Mode::Strong, budget, 3).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn oversized_q_is_reported_when_reached() {
        let err = longest_witness_free(3, 2, 7, Mode::Plain, SearchBudget::default(), 1).unwrap_err();
        assert!(matches!(err, Error::Limit { cap: 6, .. }));
    }

    #[test]
    fn bad_parameters() {
        assert!(longest_witness_free(0, 2, 2, Mode::Plain, SearchBudget::default(), 1).is_err());
        assert!(longest_witness_free(2, 1, 2, Mode::Plain, SearchBudget::default(), 1).is_err());
        assert!(longest_witness_free(2, 2, 1, Mode::Plain, SearchBudget::default(), 1).is_err());
        assert!(SearchBudget::new(0, 1).is_err());
    }

    #[test]
    fn report_json_round_trip() {
        let r = longest_witness_free(2, 2, 9, Mode::Plain, SearchBudget::default(), 1).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"claim\":\"exact\""));
        let back: BoundReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
