//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::{Duration, Instant};

use num::{One, Signed, Zero};

use dedekind_cluster::asymptotics::{
    decompose, integer_part, k_il, ratio_convergence, required_nhat, cluster_check,
    verify_mirror_identity, verify_shift_identity, verify_ksequence_values, verify_shifted_ksequence,
};
use dedekind_cluster::cfrac::convergents_of;
use dedekind_cluster::dedekind::{bhk, s_naive, s_reciprocity, BhkSweep};
use dedekind_cluster::numerics::{int, pow10_neg, ratio, Int, Rational};
use dedekind_cluster::shallit::{check_symmetry, expand, Expansion, Symmetry};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!("{}: {criterion} — {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{criterion}: {detail}");
}

fn within(elapsed: Duration, budget: Duration) -> bool {
    elapsed <= budget
}

fn expansion_with_len(b: u64, len: usize) -> Expansion {
    let mut exp = expand(b, 1).unwrap();
    exp.ensure_len(len).unwrap();
    exp
}

/// Criterion 1: for b in 3..=6, every convergent with t_k <= 1e5 satisfies
/// S_bhk = 12 s_naive = 12 s_reciprocity exactly.
#[test]
fn criterion_1_three_way_agreement() {
    let start = Instant::now();
    let cutoff = Int::from(100_000u64);
    let mut checked = 0usize;
    for b in 3..=6u64 {
        let exp = expansion_with_len(b, 64);
        let terms = std::iter::once(0u64).chain(exp.quotients().iter().copied());
        for c in convergents_of(terms) {
            if c.den > cutoff {
                break;
            }
            let by_formula = bhk(exp.quotients(), c.index).unwrap();
            let by_sum = s_naive(&c.num, &c.den).unwrap();
            let by_descent = s_reciprocity(&c.num, &c.den).unwrap();
            assert_eq!(by_formula, by_sum, "b={b} k={}", c.index);
            assert_eq!(by_formula, by_descent, "b={b} k={}", c.index);
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    // 11 + 9 + 8 + 7 convergents for b = 3, 4, 5, 6
    report(
        "criterion 1 (three-way agreement, t_k <= 1e5)",
        checked == 35 && within(elapsed, Duration::from_secs(60)),
        &format!("{checked} convergents, {elapsed:.2?}"),
    );
}

/// Criterion 2: for b in 3..=6 and every k <= 2048,
/// S_bhk = 12 s_reciprocity exactly. The descent side is embarrassingly
/// parallel over k, so the sweep is split across a few worker threads.
#[test]
fn criterion_2_two_way_agreement_at_scale() {
    let start = Instant::now();
    const K_MAX: usize = 2048;
    let workers = std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1).min(4);
    for b in 3..=6u64 {
        let exp = expansion_with_len(b, K_MAX);
        let terms = std::iter::once(0u64).chain(exp.quotients().iter().copied());
        let convergents: Vec<_> = convergents_of(terms).collect();
        let by_formula: Vec<_> = BhkSweep::new(exp.quotients(), K_MAX).unwrap().collect();
        std::thread::scope(|scope| {
            for chunk_start in 0..workers {
                let convergents = &convergents;
                let by_formula = &by_formula;
                scope.spawn(move || {
                    // strided split balances the k^2-ish per-index cost
                    let mut k = chunk_start;
                    while k <= K_MAX {
                        let c = &convergents[k];
                        let by_descent = s_reciprocity(&c.num, &c.den).unwrap();
                        assert_eq!(by_formula[k], by_descent, "b={b} k={k}");
                        k += workers;
                    }
                });
            }
        });
    }
    let elapsed = start.elapsed();
    report(
        "criterion 2 (two-way agreement, k <= 2048)",
        within(elapsed, Duration::from_secs(300)),
        &format!("4 bases x 2049 indices on {workers} threads, {elapsed:.2?}"),
    );
}

/// Criterion 3: spot values pinned directly from the defining sum and the
/// quotient list.
#[test]
fn criterion_3_spot_values() {
    let s = s_naive(&int(5), &int(11)).unwrap();
    assert_eq!(s.scaled(), ratio(-30, 11));
    let exp = expand(3, 3).unwrap();
    assert_eq!(integer_part(&exp, 8).unwrap(), -3);
    assert_eq!(integer_part(&exp, 7).unwrap(), 0); // = b - 3 for b = 3
    report(
        "criterion 3 (spot values)",
        true,
        "S(5/11) = -30/11, L(8; b=3) = -3, L(7; b=3) = 0",
    );
}

/// Criterion 4: the three quotient symmetries hold for every valid
/// n <= 2^11 and b in 3..=8.
#[test]
fn criterion_4_symmetry_suite() {
    let start = Instant::now();
    let mut checks = 0usize;
    for b in 3..=8u64 {
        let exp = expand(b, 12).unwrap();
        let mut n = 4usize;
        while n <= 1 << 11 {
            assert!(check_symmetry(&exp, Symmetry::Reflection, n).unwrap(), "a: b={b} n={n}");
            checks += 1;
            if n >= 8 {
                assert!(check_symmetry(&exp, Symmetry::Palindrome, n).unwrap(), "b: b={b} n={n}");
                assert!(check_symmetry(&exp, Symmetry::Repetition, n).unwrap(), "c: b={b} n={n}");
                checks += 2;
            }
            n *= 2;
        }
    }
    let elapsed = start.elapsed();
    report(
        "criterion 4 (symmetry suite, n <= 2^11, b in 3..8)",
        true,
        &format!("{checks} identities, zero violations, {elapsed:.2?}"),
    );
}

/// Criterion 5: the integer-part identities over b in 3..=6, n <= 2^11,
/// i <= 4, r <= 4, with zero violations.
#[test]
fn criterion_5_integer_part_suite() {
    let start = Instant::now();
    let mut checks = 0usize;
    for b in 3..=6u64 {
        let deepest = dedekind_cluster::asymptotics::k_seq(4, 1 << 11).unwrap().k;
        let exp = expansion_with_len(b, deepest.max(5 * (1 << 11) / 2));
        let mut n = 4usize;
        while n <= 1 << 11 {
            assert!(verify_mirror_identity(&exp, n).unwrap(), "mirror identity b={b} n={n}");
            checks += 1;
            if n >= 8 {
                assert!(verify_shift_identity(&exp, n).unwrap(), "shift identity b={b} n={n}");
                assert!(verify_ksequence_values(&exp, n, 4).unwrap(), "k-sequence values b={b} n={n}");
                checks += 2;
            }
            n *= 2;
        }
        for i in 0..=4u32 {
            for r in 1..=4u32 {
                let mut nhat = required_nhat(i, r).unwrap();
                while nhat <= 1 << 11 {
                    assert!(verify_shifted_ksequence(&exp, i, r, nhat).unwrap(), "shifted k-sequence b={b} i={i} r={r}");
                    checks += 1;
                    nhat *= 2;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "criterion 5 (integer-part identity suite)",
        within(elapsed, Duration::from_secs(120)),
        &format!("{checks} identities, zero violations, {elapsed:.2?}"),
    );
}

/// Criterion 6: the quantitative ratio bound for b = 3, k in {2, 7, 15},
/// with the distance at n = 2^10 below 1e-8. (k = 15 needs n/2 - 1 >= 15,
/// so its sweep starts at j = 5; j = 4 is outside the statement's domain.)
#[test]
fn criterion_6_ratio_bound() {
    let start = Instant::now();
    for (k, j_min) in [(2usize, 4u32), (7, 4), (15, 5)] {
        let samples = ratio_convergence(3, k, j_min..=10).unwrap();
        for s in &samples {
            assert!(s.within_bound, "k={k} n={}", s.n);
        }
        let last = samples.last().unwrap();
        assert_eq!(last.n, 1 << 10);
        assert!(last.distance < pow10_neg(8), "k={k} final distance");
        for pair in samples.windows(2) {
            assert!(pair[1].distance < pair[0].distance, "k={k} monotone");
        }
    }
    let elapsed = start.elapsed();
    report(
        "criterion 6 (ratio error bound, b=3, k in {2,7,15})",
        true,
        &format!("every distance within (2b+6)/(q+q')^2; j=10 distance < 1e-8, {elapsed:.2?}"),
    );
}

/// Criterion 7: four pairwise-disjoint cluster enclosures per (b, i), each
/// strictly inside its predicted open interval, with the sampled sums
/// strictly closer to the limit at each doubling and the final certified
/// distance below 1e-3; interval length and neighbouring gap are exact.
#[test]
fn criterion_7_cluster_localization() {
    let start = Instant::now();
    let eps = pow10_neg(12);
    for b in 3..=6u64 {
        for i in 0..=3u32 {
            let reports = cluster_check(b, i, 4, &eps, 1 << 11).unwrap();
            assert_eq!(reports.len(), 4);
            for rep in &reports {
                assert!(rep.in_interval, "b={b} i={i} l={}", rep.target.l);
                assert!(rep.disjoint, "b={b} i={i} l={}", rep.target.l);
                assert!(rep.strictly_converging, "b={b} i={i} l={}", rep.target.l);
                assert!(rep.final_distance < rep.tolerance, "b={b} i={i} l={}", rep.target.l);
                assert_eq!(rep.tolerance, pow10_neg(3));
                assert_eq!(rep.samples.last().unwrap().nhat, 1 << 11);
            }
            // exact interval length and neighbouring gap
            let unit = Rational::new(Int::one(), int((b * (b - 1)) as i64));
            let (lo, hi) = dedekind_cluster::asymptotics::predicted_interval(b, i);
            assert_eq!(&hi - &lo, ratio(1, 1) + &unit);
            let (lo_next, hi_next) = dedekind_cluster::asymptotics::predicted_interval(b, i + 1);
            assert_eq!(&lo - &hi_next, ratio(1, 1) - &unit);
            assert_eq!(lo - lo_next, ratio(2, 1));
        }
    }
    let elapsed = start.elapsed();
    report(
        "criterion 7 (cluster localization, b in 3..6, i in 0..3, r = 4)",
        within(elapsed, Duration::from_secs(300)),
        &format!("16 (b, i) cells x 4 clusters, {elapsed:.2?}"),
    );
}

/// Criterion 8: the odd-index decomposition reassembles to the closed form
/// exactly on 100 valid indices, with the documented range checks on the
/// fractional parts.
#[test]
fn criterion_8_decomposition_identity() {
    let mut checked = 0usize;
    'outer: for b in 3..=6u64 {
        let exp = expansion_with_len(b, 3 << 9);
        let x_lo = Rational::new(Int::one(), int(b as i64));
        let x_hi = Rational::new(Int::one(), int(b as i64 - 1));
        for i in 0..=3u32 {
            for l in 1..=4u32 {
                for shift_exp in [8u32, 9] {
                    let nhat = 1usize << shift_exp;
                    if nhat < required_nhat(i, l).unwrap() {
                        continue;
                    }
                    let k = nhat + k_il(i, l).unwrap();
                    let d = decompose(&exp, k).unwrap();
                    let direct = bhk(exp.quotients(), k).unwrap().scaled();
                    assert_eq!(d.reassemble(), direct, "b={b} K={k}");
                    assert!(d.denominator_ratio > Rational::zero());
                    assert!(d.denominator_ratio < Rational::one());
                    assert!(d.convergent_value > x_lo && d.convergent_value < x_hi);
                    checked += 1;
                    if checked == 100 {
                        break 'outer;
                    }
                }
            }
        }
    }
    report(
        "criterion 8 (decomposition identity)",
        checked == 100,
        &format!("{checked} odd indices reassembled exactly"),
    );
}

/// Criterion 9: CLI determinism and exit codes, end to end through the
/// real binary (the full contract lives in tests/cli_e2e.rs).
#[test]
fn criterion_9_cli_contract() {
    let bin = env!("CARGO_BIN_EXE_dedekind-cluster");
    let run = |args: &[&str]| std::process::Command::new(bin).args(args).output().unwrap();
    let a = run(&["trace", "--b", "3", "--max-k", "16", "--format", "json"]);
    let b = run(&["trace", "--b", "3", "--max-k", "16", "--format", "json"]);
    let deterministic = a.stdout == b.stdout && !a.stdout.is_empty();
    let codes_ok = run(&["expand", "--b", "3", "--j", "2"]).status.code() == Some(0)
        && run(&["sum", "--m", "4", "--n", "10"]).status.code() == Some(2)
        && run(&["verify", "--b", "3", "--max-n", "16", "--corrupt", "11"]).status.code()
            == Some(1);
    report(
        "criterion 9 (CLI determinism and exit codes)",
        deterministic && codes_ok,
        "byte-identical reruns; exit codes 0/1/2",
    );
}
