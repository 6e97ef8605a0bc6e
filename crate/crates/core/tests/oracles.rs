//! Exhaustive small-instance checks against direct brute-force oracles.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use itertools::Itertools;
use shirshov::construct::{estimate_l, select_markers};
use shirshov::{
    analyze, complexity, construct, eventually_periodic_check, find_decomposable_subword, find_power,
    find_power_naive, longest_witness_free, recurrence, verify_certificate, verify_frontier, verify_witness,
    Alphabet, AnalyzeOptions, DecompBudget, DecompSearch, Generator, Mode, Outcome, SearchBudget, Witness,
    Word,
};

// ---- oracles, written directly from the definitions ----

fn deglex(u: &[u8], v: &[u8]) -> Ordering {
    if u.len() != v.len() {
        return u.len().cmp(&v.len());
    }
    for (a, b) in u.iter().zip(v) {
        if a != b {
            // rank 1 is the largest letter
            return if a < b { Ordering::Greater } else { Ordering::Less };
        }
    }
    Ordering::Equal
}

fn oracle_has_power(s: &[u8], p: usize) -> bool {
    let n = s.len();
    for i in 0..n {
        for l in 1..=n {
            if i + p * l > n {
                break;
            }
            let base = &s[i..i + l];
            if (1..p).all(|k| &s[i + k * l..i + (k + 1) * l] == base) {
                return true;
            }
        }
    }
    false
}

fn splits(len: usize, q: usize) -> Vec<Vec<usize>> {
    // cut points 1..len-1, choose q-1 of them
    (1..len)
        .combinations(q - 1)
        .map(|cuts| {
            let mut bounds = vec![0];
            bounds.extend(cuts);
            bounds.push(len);
            bounds.windows(2).map(|w| w[1] - w[0]).collect()
        })
        .collect()
}

fn oracle_is_decomp(factors: &[&[u8]], strong: bool) -> bool {
    let q = factors.len();
    let identity: Vec<u8> = factors.concat();
    if strong && factors.iter().any(|f| (q - 1) * f.len() >= identity.len()) {
        return false;
    }
    (0..q)
        .permutations(q)
        .filter(|p| p.iter().enumerate().any(|(i, &j)| i != j))
        .all(|perm| {
            let other: Vec<u8> = perm.iter().flat_map(|&i| factors[i].iter().copied()).collect();
            deglex(&identity, &other) == Ordering::Greater
        })
}

fn oracle_word_decomposable(s: &[u8], q: usize, strong: bool) -> bool {
    let n = s.len();
    (0..n).any(|i| {
        (i + q..=n).any(|j| {
            splits(j - i, q).into_iter().any(|lengths| {
                let mut off = i;
                let parts: Vec<&[u8]> = lengths
                    .iter()
                    .map(|&l| {
                        off += l;
                        &s[off - l..off]
                    })
                    .collect();
                oracle_is_decomp(&parts, strong)
            })
        })
    })
}

fn all_words(m: u8, len: usize) -> impl Iterator<Item = Vec<u8>> {
    itertools::repeat_n(1..=m, len).multi_cartesian_product()
}

fn word(alphabet: Alphabet, letters: Vec<u8>) -> Word {
    Word::new(alphabet, letters).unwrap()
}

// ---- witness engine ----

#[test]
fn binary_words_up_to_ten_match_the_oracles() {
    let ab = Alphabet::new(2).unwrap();
    let budget = DecompBudget::default();
    let mut checked = 0;
    for len in 1..=10 {
        for letters in all_words(2, len) {
            let w = word(ab, letters.clone());
            let power = find_power(&w, 2).unwrap();
            assert_eq!(power.is_some(), oracle_has_power(&letters, 2), "{w}");
            assert_eq!(power, find_power_naive(&w, 2).unwrap());
            for strong in [false, true] {
                let (search, _) = find_decomposable_subword(&w, 2, strong, budget).unwrap();
                let expected = oracle_word_decomposable(&letters, 2, strong);
                match search {
                    DecompSearch::Found(d) => {
                        assert!(expected, "{w} strong={strong}");
                        assert!(verify_witness(&w, &Witness::Decomposition(d)));
                    }
                    DecompSearch::NotFound => assert!(!expected, "{w} strong={strong}"),
                    DecompSearch::BudgetExceeded => panic!("budget hit on {w}"),
                }
            }
            let opts = AnalyzeOptions {
                exhaustive: true,
                budget,
            };
            let report = analyze(&w, 2, 2, Mode::Plain, opts).unwrap();
            assert!(report.verify());
            if let Some(wit) = report.outcome.witness() {
                assert!(verify_witness(&w, &wit));
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 2046);
}

#[test]
fn ternary_q3_search_matches_oracle() {
    let abc = Alphabet::new(3).unwrap();
    let budget = DecompBudget::default();
    for len in 3..=6 {
        for letters in all_words(3, len) {
            let w = word(abc, letters.clone());
            for strong in [false, true] {
                let (search, _) = find_decomposable_subword(&w, 3, strong, budget).unwrap();
                let found = matches!(search, DecompSearch::Found(_));
                assert_eq!(
                    found,
                    oracle_word_decomposable(&letters, 3, strong),
                    "{w} strong={strong}"
                );
            }
        }
    }
}

#[test]
fn cube_power_scans_agree_on_short_ternary_words() {
    let abc = Alphabet::new(3).unwrap();
    for len in 1..=9 {
        for letters in all_words(3, len) {
            let w = word(abc, letters.clone());
            let fast = find_power(&w, 3).unwrap();
            assert_eq!(fast.is_some(), oracle_has_power(&letters, 3));
            assert_eq!(fast, find_power_naive(&w, 3).unwrap());
        }
    }
}

// ---- avoidance search ----

fn has_witness(s: &[u8], p: usize, q: usize, strong: bool) -> bool {
    oracle_has_power(s, p) || (s.len() >= q && oracle_word_decomposable(s, q, strong))
}

/// Level-by-level enumeration with a full re-scan of every candidate.
fn oracle_longest(m: u8, p: usize, q: usize, strong: bool) -> (usize, Vec<Vec<u8>>) {
    let mut level: Vec<Vec<u8>> = vec![vec![]];
    let mut depth = 0;
    loop {
        let next: Vec<Vec<u8>> = level
            .iter()
            .flat_map(|w| (1..=m).map(move |r| [w.as_slice(), &[r]].concat()))
            .filter(|w| !has_witness(w, p, q, strong))
            .collect();
        if next.is_empty() {
            return (depth, level);
        }
        level = next;
        depth += 1;
    }
}

#[test]
fn incremental_search_matches_full_rescan() {
    let cases = [
        (2, 2, 9, Mode::Plain),
        (1, 3, 2, Mode::Plain),
        (3, 2, 2, Mode::Plain),
        (2, 3, 2, Mode::Plain),
        (2, 3, 2, Mode::Strong),
        (2, 3, 3, Mode::Plain),
        (2, 3, 3, Mode::Strong),
        (3, 2, 3, Mode::Plain),
        (3, 3, 2, Mode::Strong),
    ];
    for (m, p, q, mode) in cases {
        let report = longest_witness_free(m, p, q, mode, SearchBudget::default(), 1).unwrap();
        let (longest, words) = oracle_longest(m as u8, p, q, mode.is_strong());
        assert!(report.exhausted, "{m} {p} {q} {mode}");
        assert_eq!(report.longest_witness_free_length, longest, "{m} {p} {q} {mode}");
        assert_eq!(report.empirical_bound, longest + 1);
        let mut expected: Vec<String> = words
            .into_iter()
            .map(|l| word(Alphabet::new(m).unwrap(), l).render())
            .collect();
        expected.sort();
        expected.truncate(16);
        let got: Vec<String> = report.exemplars.iter().map(Word::render).collect();
        assert_eq!(got, expected, "{m} {p} {q} {mode}");
        assert!(verify_frontier(&report));
    }
}

#[test]
fn witnesses_persist_under_extension() {
    for len in 1..=8 {
        for letters in all_words(2, len) {
            for (p, q) in [(2, 2), (3, 2), (3, 3), (4, 3)] {
                for strong in [false, true] {
                    if !has_witness(&letters, p, q, strong) {
                        continue;
                    }
                    for r in 1..=2 {
                        let right = [letters.as_slice(), &[r]].concat();
                        let left = [&[r], letters.as_slice()].concat();
                        assert!(has_witness(&right, p, q, strong));
                        assert!(has_witness(&left, p, q, strong));
                    }
                }
            }
        }
    }
}

#[test]
fn square_frontier_by_enumeration() {
    let ab = Alphabet::new(2).unwrap();
    let report = longest_witness_free(2, 2, 9, Mode::Plain, SearchBudget::default(), 2).unwrap();
    assert_eq!(report.longest_witness_free_length, 3);
    for letters in all_words(2, 4) {
        let w = word(ab, letters);
        assert!(find_power(&w, 2).unwrap().is_some(), "{w}");
    }
}

#[test]
fn thread_count_does_not_change_reports() {
    let budget = SearchBudget::new(64, 20_000).unwrap();
    let base = longest_witness_free(3, 2, 3, Mode::Strong, budget, 1).unwrap();
    for threads in [2, 3, 8] {
        let other = longest_witness_free(3, 2, 3, Mode::Strong, budget, threads).unwrap();
        assert_eq!(
            serde_json::to_string(&base).unwrap(),
            serde_json::to_string(&other).unwrap()
        );
    }
}

// ---- morphic words ----

fn oracle_distinct(s: &[u8], n: usize) -> usize {
    s.windows(n).collect::<BTreeSet<_>>().len()
}

/// Smallest L such that every length-L window of `s` contains `v`.
fn oracle_window(s: &[u8], v: &[u8]) -> Option<usize> {
    (v.len()..=s.len()).find(|&l| s.windows(l).all(|win| win.windows(v.len()).any(|f| f == v)))
}

#[test]
fn fibonacci_complexity_is_sturmian() {
    let w = Generator::builtin("fibonacci").unwrap().prefix(500).unwrap();
    let profile = complexity(&w, 20).unwrap();
    for n in 1..=20 {
        assert_eq!(oracle_distinct(w.letters(), n), n + 1);
        assert_eq!(profile.omega(n), Some(n + 1));
    }
}

#[test]
fn complexity_matches_quadratic_count_on_generators() {
    for name in ["thue-morse", "tribonacci", "period-3"] {
        let w = Generator::builtin(name).unwrap().prefix(300).unwrap();
        let profile = complexity(&w, 30).unwrap();
        for n in 1..=30 {
            assert_eq!(
                profile.omega(n),
                Some(oracle_distinct(w.letters(), n)),
                "{name} n={n}"
            );
        }
    }
}

#[test]
fn thue_morse_recurrence_window_pinned() {
    let tm = Generator::builtin("thue-morse").unwrap();
    let w = tm.prefix(1024).unwrap();
    let v = Word::parse("abba", w.alphabet()).unwrap();
    let expected = oracle_window(w.letters(), v.letters());
    assert_eq!(expected, Some(11));
    let profile = recurrence(&w, &v).unwrap();
    assert_eq!(profile.window_constant, expected);
    assert!(profile.verify(&w));
}

#[test]
fn thue_morse_is_not_eventually_periodic() {
    let w = Generator::builtin("thue-morse").unwrap().prefix(256).unwrap();
    assert_eq!(eventually_periodic_check(&w, 64), None);
    let p3 = Generator::builtin("period-3").unwrap().prefix(60).unwrap();
    assert_eq!(eventually_periodic_check(&p3, 20), Some((0, 3)));
}

// ---- construction ----

#[test]
fn thue_morse_markers_and_l_by_scan() {
    let w = Generator::builtin("thue-morse").unwrap().prefix(2048).unwrap();
    // every distinct factor of length 2, largest first
    let mut factors: Vec<&[u8]> = w
        .letters()
        .windows(2)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    factors.sort_by(|a, b| deglex(b, a));
    let (n, markers) = select_markers(&w, 3).unwrap();
    assert_eq!(n, 2);
    let got: Vec<&[u8]> = markers.iter().map(Word::letters).collect();
    assert_eq!(got, factors[..3].to_vec());

    // smallest L with every marker in every length-(L+1) window
    let l_oracle = (1..w.len()).find(|&l| {
        w.letters()
            .windows(l + 1)
            .all(|win| got.iter().all(|m| win.windows(2).any(|f| f == *m)))
    });
    assert_eq!(l_oracle, Some(8));
    assert_eq!(estimate_l(&w, &markers).unwrap(), 8);
}

#[test]
fn certificates_for_fibonacci_and_thue_morse() {
    for (name, q) in [("fibonacci", 2), ("thue-morse", 3), ("tribonacci", 3)] {
        let gen = Generator::builtin(name).unwrap();
        let probe = gen.prefix(4096).unwrap();
        let cert = construct(&probe, q).unwrap();
        assert!(verify_certificate(&cert), "{name}");
        let r = &cert.inequalities;
        assert_eq!(r.total_length, r.total_by_formula);
        assert!(r.total_length >= r.total_lower_bound);
        assert!(r.total_lower_bound > r.chain_middle);
        assert!(r.chain_middle >= r.weighted_max_factor);

        let mut truncated = cert.clone();
        let last = truncated.factors.last_mut().unwrap();
        *last = Word::new(last.alphabet(), last.letters()[..last.len() - 1].to_vec()).unwrap();
        assert!(!verify_certificate(&truncated));
    }
}

#[test]
fn decomposition_outcome_when_no_power() {
    let ab = Alphabet::new(2).unwrap();
    let w = Word::parse("aab", ab).unwrap();
    let report = analyze(&w, 3, 2, Mode::Plain, AnalyzeOptions::default()).unwrap();
    assert!(matches!(report.outcome, Outcome::Decomposition(_)));
}
