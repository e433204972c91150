//! Acceptance suite. One test per criterion:
//!   1. pinned reference arrays all verify (and mutations fail), under 1 s
//!   2. the odd diagonal filling is deterministic and matches its pinned
//!      7x7 array cell for cell, under 1 s
//!   3. every spec with at most 120 cells that the feasibility decision
//!      marks constructible is constructed and verified (ingredient searches
//!      over budget are skipped and logged), under 5 min
//!   4. exhaustive search certifies the known small nonexistent cases,
//!      under 2 min
//!   5. search and the feasibility decision never contradict each other on
//!      specs with at most 16 cells
//!   6. closed-form line sums and the whole-group sum rule hold exactly
//!   7. componentwise products and diagonal-to-rectangle folds verify on
//!      random and enumerated inputs

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mpfa::constructions::{
    feasibility, kronecker_product, magic_rectangle_set, nonzero_group, nonzero_tight,
    nonzero_two_rows, signed_magic_array, signed_magic_array_odd, zero_sum_cyclic,
    zero_sum_diagonal, zero_sum_diagonal_odd, zero_sum_group, BuildError, Construction,
    FeasibilityStatus,
};
use mpfa::group::abelian_groups_of_order;
use mpfa::ingredients::{IngredientError, Oracle};
use mpfa::search::{search, SearchBudget, SearchOutcome};
use mpfa::verify::verify;
use mpfa::{ArraySet, Group, MagicSpec, OmegaSpec, Pfa};

fn g(moduli: &[u64]) -> Group {
    Group::new(moduli.to_vec()).unwrap()
}

/// Rows split by ';', cells by whitespace, residues by ',', '.' for empty.
fn grid(group: &Group, text: &str) -> Pfa {
    let rows: Vec<Vec<Option<Vec<i64>>>> = text
        .trim()
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|cell| {
                    if cell == "." {
                        None
                    } else {
                        Some(cell.split(',').map(|v| v.parse().unwrap()).collect())
                    }
                })
                .collect()
        })
        .collect();
    Pfa::from_rows(group, &rows).unwrap()
}

fn assert_passes(set: &ArraySet, spec: &MagicSpec, what: &str) {
    let report = verify(set, spec);
    assert!(report.pass(), "{what}: {}", report.summary());
}

fn assert_fails(set: &ArraySet, spec: &MagicSpec, what: &str) {
    assert!(!verify(set, spec).pass(), "{what}: expected a failing report");
}

fn cells_of(a: &Pfa) -> Vec<(usize, usize, Vec<i64>)> {
    let mut v: Vec<(usize, usize, Vec<i64>)> = a
        .filled()
        .map(|(i, j, e)| (i, j, e.residues().to_vec()))
        .collect();
    v.sort();
    v
}

fn assert_same_cells(a: &Pfa, b: &Pfa, what: &str) {
    assert_eq!(cells_of(a), cells_of(b), "{what}");
}

fn full_spec(group: &Group, m: usize, n: usize, s: usize, k: usize, c: usize) -> MagicSpec {
    MagicSpec::new(group.clone(), m, n, s, k, c, OmegaSpec::FullGroup).zero_sum()
}

fn nonzero_spec(group: &Group, m: usize, n: usize, s: usize, k: usize, c: usize) -> MagicSpec {
    MagicSpec::new(group.clone(), m, n, s, k, c, OmegaSpec::NonzeroGroup).zero_sum()
}

fn interval_spec(m: usize, n: usize, s: usize, k: usize, c: usize) -> MagicSpec {
    MagicSpec::new(
        Group::integers(),
        m,
        n,
        s,
        k,
        c,
        OmegaSpec::IntegerInterval { upper: (n * k * c) as i64 },
    )
}

fn signed_spec(m: usize, n: usize, s: usize, k: usize, c: usize) -> MagicSpec {
    let total = (n * k * c) as i64;
    let omega = if total % 2 == 0 {
        OmegaSpec::SignedRange { half: total / 2, include_zero: false }
    } else {
        OmegaSpec::SignedRange { half: (total - 1) / 2, include_zero: true }
    };
    MagicSpec::new(Group::integers(), m, n, s, k, c, omega).zero_sum()
}

/// The 9x15 zero-sum set over Z45 with fills 5/3, as pinned reference text.
const Z45_9X15: &str = "
    23 12 31  8 16  .  .  .  .  .  .  .  .  .  . ;
     1  5 42  4 38  .  .  .  .  .  .  .  .  .  . ;
    21 28 17 33 36  .  .  .  .  .  .  .  .  .  . ;
     .  .  .  .  . 24 13 29  9 15  .  .  .  .  . ;
     .  .  .  .  . 22 26 18 34 35  .  .  .  .  . ;
     .  .  .  .  . 44  6 43  2 40  .  .  .  .  . ;
     .  .  .  .  .  .  .  .  .  . 25 11 30 10 14 ;
     .  .  .  .  .  .  .  .  .  . 20 27 19 32 37 ;
     .  .  .  .  .  .  .  .  .  .  0  7 41  3 39";

const Z5_Z7_DIAGONAL: &str = "
    0,3 2,1 4,1  .   .  3,1 1,1 ;
    1,2 0,6 2,2 4,2  .   .  3,2 ;
    3,3 1,3 0,2 2,3 4,3  .   .  ;
     .  3,4 1,4 0,5 2,4 4,4  .  ;
     .   .  3,5 1,5 0,1 2,5 4,5 ;
    4,6  .   .  3,6 1,6 0,4 2,6 ;
    2,0 4,0  .   .  3,0 1,0 0,0";

#[test]
fn criterion_1_pinned_fixtures_verify() {
    let start = Instant::now();
    let mut checked = 0usize;

    // 2x2 squares using every element of a small group, non-zero line sums
    let z4 = g(&[4]);
    let a = grid(&z4, "0 1; 3 2");
    let spec = MagicSpec::new(z4.clone(), 2, 2, 2, 2, 1, OmegaSpec::FullGroup);
    assert_passes(&ArraySet::singleton(a), &spec, "2x2 over Z4");
    checked += 1;

    let z22 = g(&[2, 2]);
    let a = grid(&z22, "0,0 0,1; 1,0 1,1");
    let spec = MagicSpec::new(z22.clone(), 2, 2, 2, 2, 1, OmegaSpec::FullGroup);
    assert_passes(&ArraySet::singleton(a), &spec, "2x2 over Z2+Z2");
    checked += 1;

    // zero-sum arrays over Z2+Z6: a full 3x4 and a 4x4 with one hole per line
    let z26 = g(&[2, 6]);
    let a = grid(
        &z26,
        "0,0 1,0 0,5 1,1; 1,2 1,5 0,3 0,2; 1,4 0,1 0,4 1,3",
    );
    assert_passes(
        &ArraySet::singleton(a),
        &full_spec(&z26, 3, 4, 4, 3, 1),
        "3x4 over Z2+Z6",
    );
    checked += 1;

    let a = grid(
        &z26,
        "0,0 0,2 0,4 .; . 1,0 1,3 0,3; 0,5 . 1,5 1,2; 0,1 1,4 . 1,1",
    );
    assert_passes(
        &ArraySet::singleton(a),
        &full_spec(&z26, 4, 4, 3, 3, 1),
        "4x4 over Z2+Z6",
    );
    checked += 1;

    // zero-sum arrays over the nonzero elements of Z13
    let z13 = g(&[13]);
    let square13 = grid(&z13, "1 2 10 .; . 3 4 6; 5 . 12 9; 7 8 . 11");
    assert_passes(
        &ArraySet::singleton(square13.clone()),
        &nonzero_spec(&z13, 4, 4, 3, 3, 1),
        "4x4 over Z13*",
    );
    checked += 1;

    let a = grid(&z13, "1 . 3 . 9 .; . 2 . 5 . 6; 12 . 10 . 4 .; . 11 . 8 . 7");
    assert_passes(
        &ArraySet::singleton(a),
        &nonzero_spec(&z13, 4, 6, 3, 2, 1),
        "4x6 over Z13*",
    );
    checked += 1;

    // diagonal 5x5 over Z21*
    let z21 = g(&[21]);
    let a = grid(&z21, "1 19 . 6 16; 20 5 15 . 2; 18 4 9 11 .; . 14 8 13 7; 3 . 10 12 17");
    assert_passes(
        &ArraySet::singleton(a),
        &nonzero_spec(&z21, 5, 5, 4, 4, 1).diagonal(),
        "diagonal 5x5 over Z21*",
    );
    checked += 1;

    // componentwise product layout, including the corrected cell at (5,4)
    let zz = Group::integers();
    let a1 = grid(&zz, "0 . 1; 2 3 .");
    let a2 = grid(&zz, "4 5 . .; . . 6 7; 8 . . 9");
    let product = a1.kronecker(&a2);
    let expected = grid(
        &g(&[0, 0]),
        "0,4 0,5  .   .   .   .   .   .  1,4 1,5  .   .  ;
          .   .  0,6 0,7  .   .   .   .   .   .  1,6 1,7 ;
         0,8  .   .  0,9  .   .   .   .  1,8  .   .  1,9 ;
         2,4 2,5  .   .  3,4 3,5  .   .   .   .   .   .  ;
          .   .  2,6 2,7  .   .  3,6 3,7  .   .   .   .  ;
         2,8  .   .  2,9 3,8  .   .  3,9  .   .   .   . ",
    );
    assert_same_cells(&product, &expected, "componentwise product layout");
    checked += 1;

    // the integer rectangle set: three 3x5 arrays on [1, 45]
    let a0 = grid(&zz, "1 35 9 31 39; 24 28 20 27 16; 44 6 40 11 14");
    let a1 = grid(&zz, "2 36 7 32 38; 45 4 41 12 13; 22 29 21 25 18");
    let a2 = grid(&zz, "3 34 8 33 37; 43 5 42 10 15; 23 30 19 26 17");
    let triple = ArraySet::new(vec![a0, a1, a2]).unwrap();
    assert_passes(&triple, &interval_spec(3, 5, 5, 3, 3), "3x5 triple on [1,45]");
    checked += 1;

    // the 9x15 zero-sum array over Z45 built from that triple
    let z45 = g(&[45]);
    let figure = grid(&z45, Z45_9X15);
    assert_passes(
        &ArraySet::singleton(figure.clone()),
        &full_spec(&z45, 9, 15, 5, 3, 1),
        "9x15 over Z45",
    );
    let built = zero_sum_cyclic(9, 15, 5, 3, 1, &Oracle::with_defaults()).unwrap();
    assert_same_cells(&built.set.arrays()[0], &figure, "9x15 over Z45 is reproduced");
    checked += 1;

    // two 6x6 arrays with four fills per line over Z6+Z2+Z4
    let z624 = g(&[6, 2, 4]);
    let b1 = grid(
        &z624,
        "0,0,0 5,0,0   .     .   4,1,0 3,1,0 ;
         3,1,1 0,0,1 5,0,3   .     .   4,1,3 ;
         0,1,0 1,1,0 0,0,2 5,0,2   .     .   ;
           .   0,1,3 1,1,1 0,0,3 5,0,1   .   ;
           .     .   0,1,2 1,1,2 2,0,0 3,0,0 ;
         3,0,3   .     .   0,1,1 1,1,3 2,0,1",
    );
    let b2 = grid(
        &z624,
        "2,0,2 3,0,2   .     .   2,1,2 5,1,2 ;
         5,1,3 2,0,3 3,0,1   .     .   2,1,1 ;
         4,1,2 3,1,2 4,0,0 1,0,0   .     .   ;
           .   4,1,1 3,1,3 4,0,1 1,0,3   .   ;
           .     .   2,1,0 5,1,0 4,0,2 1,0,2 ;
         1,0,1   .     .   2,1,3 5,1,1 4,0,3",
    );
    let pair = ArraySet::new(vec![b1, b2]).unwrap();
    assert_passes(&pair, &full_spec(&z624, 6, 6, 4, 4, 2), "6x6 pair over Z6+Z2+Z4");
    checked += 1;

    // diagonal 7x7 over Z5+Z7
    let z57 = g(&[5, 7]);
    let diag = grid(&z57, Z5_Z7_DIAGONAL);
    assert_passes(
        &ArraySet::singleton(diag),
        &full_spec(&z57, 7, 7, 5, 5, 1).diagonal(),
        "diagonal 7x7 over Z5+Z7",
    );
    checked += 1;

    // tight two-row arrays over nonzero elements
    let z19 = g(&[19]);
    let a = grid(&z19, "2 4 5 6 7 8 18 16 10; 17 15 14 13 12 11 1 3 9");
    assert_passes(
        &ArraySet::singleton(a),
        &nonzero_spec(&z19, 2, 9, 9, 2, 1),
        "2x9 over Z19*",
    );
    checked += 1;

    let z21 = g(&[21]);
    let p1 = grid(&z21, "1 2 13 16 10; 20 19 8 5 11");
    let p2 = grid(&z21, "3 17 6 7 9; 18 4 15 14 12");
    let pair = ArraySet::new(vec![p1, p2]).unwrap();
    assert_passes(&pair, &nonzero_spec(&z21, 2, 5, 5, 2, 2), "2x5 pair over Z21*");
    checked += 1;

    let z333 = g(&[3, 3, 3]);
    let a = grid(
        &z333,
        "0,0,1 0,1,0 0,1,1 0,2,1 1,0,0 1,0,1 1,0,2 1,1,0 1,1,1 2,2,1 2,1,0 2,1,2 1,2,2 ;
         0,0,2 0,2,0 0,2,2 0,1,2 2,0,0 2,0,2 2,0,1 2,2,0 2,2,2 1,1,2 1,2,0 1,2,1 2,1,1",
    );
    let seed27 = ArraySet::singleton(a);
    assert_passes(&seed27, &nonzero_spec(&z333, 2, 13, 13, 2, 1), "2x13 over (Z3^3)*");
    checked += 1;

    let z55 = g(&[5, 5]);
    let a = grid(
        &z55,
        "0,1 0,2 1,0 1,1 1,2 1,3 4,1 2,0 2,1 3,3 3,2 2,4 ;
         0,4 0,3 4,0 4,4 4,3 4,2 1,4 3,0 3,4 2,2 2,3 3,1",
    );
    assert_passes(
        &ArraySet::singleton(a),
        &nonzero_spec(&z55, 2, 12, 12, 2, 1),
        "2x12 over (Z5^2)*",
    );
    checked += 1;

    // mutations of pinned arrays must be rejected
    let bad = grid(&z13, "2 2 10 .; . 3 4 6; 5 . 12 9; 7 8 . 11");
    assert_fails(
        &ArraySet::singleton(bad),
        &nonzero_spec(&z13, 4, 4, 3, 3, 1),
        "duplicated symbol",
    );
    let bad = grid(&z45, &Z45_9X15.replacen("23 12", "12 23", 1));
    assert_fails(
        &ArraySet::singleton(bad),
        &full_spec(&z45, 9, 15, 5, 3, 1),
        "swapped pair breaks column sums",
    );
    let bad = grid(
        &z333,
        "0,0,0 0,1,0 0,1,1 0,2,1 1,0,0 1,0,1 1,0,2 1,1,0 1,1,1 2,2,1 2,1,0 2,1,2 1,2,2 ;
         0,0,2 0,2,0 0,2,2 0,1,2 2,0,0 2,0,2 2,0,1 2,2,0 2,2,2 1,1,2 1,2,0 1,2,1 2,1,1",
    );
    assert_fails(
        &ArraySet::singleton(bad),
        &nonzero_spec(&z333, 2, 13, 13, 2, 1),
        "zero entry is foreign",
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "fixtures took {elapsed:?}");
    println!("criterion 1: PASS - {checked} pinned fixtures verify, 3 mutations rejected ({elapsed:?})");
}

#[test]
fn criterion_2_diagonal_filling_is_deterministic() {
    let start = Instant::now();
    let expected = grid(&g(&[5, 7]), Z5_Z7_DIAGONAL);
    let once = zero_sum_diagonal_odd(7, 5).unwrap();
    let again = zero_sum_diagonal_odd(7, 5).unwrap();
    assert_same_cells(&once.set.arrays()[0], &expected, "7x7 diagonal filling");
    assert_same_cells(&once.set.arrays()[0], &again.set.arrays()[0], "repeat run");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "diagonal filling took {elapsed:?}");
    println!("criterion 2: PASS - 7x7 diagonal array matches its pinned form cell for cell ({elapsed:?})");
}

/// All (m, n, s, k) with 2 <= s <= n, 2 <= k <= m, ms = nk <= max_cells.
fn shapes(max_cells: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for cells in 4..=max_cells {
        for n in 2..=cells {
            if cells % n != 0 {
                continue;
            }
            let k = cells / n;
            if k < 2 {
                continue;
            }
            for m in 2..=cells {
                if cells % m != 0 {
                    continue;
                }
                let s = cells / m;
                if s < 2 || s > n || k > m {
                    continue;
                }
                out.push((m, n, s, k));
            }
        }
    }
    out
}

#[test]
fn criterion_3_constructible_specs_all_build() {
    let start = Instant::now();
    let oracle = Oracle::with_defaults();
    let mut attempted = 0usize;
    let mut skipped = 0usize;
    let mut failures: Vec<String> = Vec::new();

    // only a budget-bound ingredient search excuses a constructible spec; an
    // ingredient proven nonexistent would mean a wrong route or decision rule
    let mut outcome = |built: Result<Construction, BuildError>, what: String| match built {
        Ok(c) => {
            assert!(c.report().pass(), "{what}: verifier rejected the output");
            attempted += 1;
        }
        Err(BuildError::Ingredient(IngredientError::Unavailable(e))) => {
            skipped += 1;
            if skipped <= 10 {
                println!("  skip {what}: {e}");
            }
        }
        Err(e) => failures.push(format!("{what}: {e}")),
    };

    for (m, n, s, k) in shapes(120) {
        let per = n * k;
        for c in 1..=(120 / per) {
            let spec = interval_spec(m, n, s, k, c);
            if matches!(feasibility(&spec).status, FeasibilityStatus::Exists) {
                outcome(
                    magic_rectangle_set(m, n, s, k, c, &oracle),
                    format!("interval {m}x{n} {s}/{k} c={c}"),
                );
            }
            if c == 1 {
                let spec = signed_spec(m, n, s, k, 1);
                if matches!(feasibility(&spec).status, FeasibilityStatus::Exists) {
                    outcome(
                        signed_magic_array(m, n, s, k, &oracle),
                        format!("signed {m}x{n} {s}/{k}"),
                    );
                }
            }
            for grp in abelian_groups_of_order((per * c) as u64) {
                let spec = full_spec(&grp, m, n, s, k, c);
                if matches!(feasibility(&spec).status, FeasibilityStatus::Exists) {
                    outcome(
                        zero_sum_group(&grp, m, n, s, k, c, &oracle),
                        format!("full {grp} {m}x{n} {s}/{k} c={c}"),
                    );
                }
            }
            for grp in abelian_groups_of_order((per * c + 1) as u64) {
                let spec = nonzero_spec(&grp, m, n, s, k, c);
                if matches!(feasibility(&spec).status, FeasibilityStatus::Exists) {
                    outcome(
                        nonzero_group(&grp, m, n, s, k, c, &oracle),
                        format!("nonzero {grp} {m}x{n} {s}/{k} c={c}"),
                    );
                }
            }
        }
    }

    assert!(failures.is_empty(), "{} failures:\n{}", failures.len(), failures.join("\n"));
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "sweep took {elapsed:?}");
    println!(
        "criterion 3: PASS - {attempted} constructible specs built and verified, \
         {skipped} skipped on ingredient budget ({elapsed:?})"
    );
}

#[test]
fn criterion_4_exhaustive_nonexistence_certificates() {
    let start = Instant::now();
    let budget = SearchBudget::default();
    let cases: Vec<(MagicSpec, &str)> = vec![
        (interval_spec(2, 2, 2, 2, 1), "2x2 tight on [1,4]"),
        (interval_spec(3, 3, 2, 2, 1), "3x3 with 2/2 on [1,6]"),
        (nonzero_spec(&g(&[5]), 2, 2, 2, 2, 1), "2x2 over Z5*"),
        (nonzero_spec(&g(&[3, 3]), 2, 4, 4, 2, 1), "2x4 over (Z3+Z3)*"),
        (full_spec(&g(&[4]), 2, 2, 2, 2, 1), "2x2 over Z4, zero sums"),
        (full_spec(&g(&[6]), 2, 3, 3, 2, 1), "2x3 over Z6, zero sums"),
        (full_spec(&g(&[8]), 2, 4, 4, 2, 1), "2x4 over Z8, zero sums"),
    ];
    for (spec, what) in cases {
        let verdict = feasibility(&spec);
        assert!(
            matches!(verdict.status, FeasibilityStatus::NotExists),
            "{what}: decision says {}",
            verdict.status.label()
        );
        let cert = search(&spec, &budget);
        assert!(
            matches!(cert.outcome, SearchOutcome::NoneExists),
            "{what}: search says {}",
            cert.outcome.label()
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "certificates took {elapsed:?}");
    println!("criterion 4: PASS - 7 exhaustion certificates agree with the decision rules ({elapsed:?})");
}

#[test]
fn criterion_5_search_and_feasibility_agree() {
    let start = Instant::now();
    let budget = SearchBudget::default();
    let mut compared = 0usize;
    let mut undecided = 0usize;
    let mut contradictions: Vec<String> = Vec::new();

    let mut check = |spec: &MagicSpec, what: String| {
        let verdict = feasibility(spec);
        if matches!(verdict.status, FeasibilityStatus::Unknown) {
            return;
        }
        let cert = search(spec, &budget);
        match (&verdict.status, &cert.outcome) {
            (FeasibilityStatus::Exists, SearchOutcome::Found(_))
            | (FeasibilityStatus::NotExists, SearchOutcome::NoneExists) => compared += 1,
            (_, SearchOutcome::BudgetExceeded) => undecided += 1,
            (v, o) => contradictions.push(format!("{what}: {} vs {}", v.label(), o.label())),
        }
    };

    for (m, n, s, k) in shapes(16) {
        let per = n * k;
        for c in 1..=(16 / per) {
            check(&interval_spec(m, n, s, k, c), format!("interval {m}x{n} {s}/{k} c={c}"));
            check(&signed_spec(m, n, s, k, c), format!("signed {m}x{n} {s}/{k} c={c}"));
            for grp in abelian_groups_of_order((per * c) as u64) {
                check(
                    &full_spec(&grp, m, n, s, k, c),
                    format!("full {grp} {m}x{n} {s}/{k} c={c}"),
                );
            }
            for grp in abelian_groups_of_order((per * c + 1) as u64) {
                check(
                    &nonzero_spec(&grp, m, n, s, k, c),
                    format!("nonzero {grp} {m}x{n} {s}/{k} c={c}"),
                );
            }
        }
    }

    assert!(
        contradictions.is_empty(),
        "{} contradictions:\n{}",
        contradictions.len(),
        contradictions.join("\n")
    );
    println!(
        "criterion 5: PASS - {compared} decided specs agree with search, \
         {undecided} searches hit the budget ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_6_closed_form_sums() {
    let oracle = Oracle::with_defaults();

    // integer rectangle sets: row sums s(nkc+1)/2, column sums k(nkc+1)/2
    for (m, n, s, k, c) in [(3, 6, 4, 2, 1), (4, 4, 4, 4, 2), (3, 3, 3, 3, 3), (9, 15, 5, 3, 1)] {
        let built = magic_rectangle_set(m, n, s, k, c, &oracle).unwrap();
        let report = built.report();
        assert!(report.pass());
        let total = (n * k * c + 1) as i64;
        let x = report.row_constant.expect("uniform row sums");
        let y = report.col_constant.expect("uniform column sums");
        assert_eq!(x.residues()[0], s as i64 * total / 2, "{m}x{n} {s}/{k} c={c} row sum");
        assert_eq!(y.residues()[0], k as i64 * total / 2, "{m}x{n} {s}/{k} c={c} column sum");
    }

    // odd symmetric ranges: zero sums, entries exactly -(nk-1)/2 ..= (nk-1)/2
    for (m, n, s, k) in [(3, 3, 3, 3), (3, 5, 5, 3), (5, 5, 5, 5), (5, 3, 3, 5)] {
        let built = signed_magic_array_odd(m, n, s, k, &oracle).unwrap();
        let report = built.report();
        assert!(report.pass());
        assert_eq!(report.row_constant.unwrap().residues()[0], 0);
        assert_eq!(report.col_constant.unwrap().residues()[0], 0);
        let half = (n as i64 * k as i64 - 1) / 2;
        let mut entries: Vec<i64> = built.set.arrays()[0]
            .filled()
            .map(|(_, _, e)| e.residues()[0])
            .collect();
        entries.sort_unstable();
        let expected: Vec<i64> = (-half..=half).collect();
        assert_eq!(entries, expected, "{m}x{n} {s}/{k} symmetric entries");
    }

    // the sum of all elements of a finite abelian group follows the
    // involution rule: the unique involution if there is exactly one, else 0
    let mut groups = 0usize;
    for order in 1..=64u64 {
        for grp in abelian_groups_of_order(order) {
            let invs = grp.involutions().unwrap();
            let expected = if invs.len() == 1 { invs[0].clone() } else { grp.zero() };
            assert_eq!(grp.sum_all().unwrap(), expected, "sum over {grp}");
            groups += 1;
        }
    }

    println!("criterion 6: PASS - line sums exact on 8 builds, whole-group sum rule on {groups} groups");
}

#[test]
fn criterion_7_products_and_folds() {
    let oracle = Oracle::with_defaults();

    let pool: Vec<Construction> = vec![
        zero_sum_cyclic(3, 3, 3, 3, 1, &oracle).unwrap(),
        zero_sum_cyclic(3, 5, 5, 3, 1, &oracle).unwrap(),
        zero_sum_cyclic(5, 5, 5, 5, 1, &oracle).unwrap(),
        zero_sum_cyclic(3, 3, 3, 3, 3, &oracle).unwrap(),
        zero_sum_diagonal_odd(5, 3).unwrap(),
        zero_sum_diagonal_odd(7, 5).unwrap(),
        zero_sum_diagonal(&g(&[2, 2, 4]), 4, 4, 1).unwrap(),
        nonzero_two_rows(3, 1, &oracle).unwrap(),
        nonzero_two_rows(5, 1, &oracle).unwrap(),
        nonzero_tight(4, 4, &oracle).unwrap(),
    ];

    let mut rng = StdRng::seed_from_u64(20260825);
    let mut products = 0usize;
    while products < 50 {
        let a = &pool[rng.random_range(0..pool.len())];
        let b = &pool[rng.random_range(0..pool.len())];
        let built = kronecker_product(a, b)
            .unwrap_or_else(|e| panic!("product of {} and {}: {e}", a.spec.group, b.spec.group));
        assert!(built.report().pass());
        assert_eq!(built.spec.rows, a.spec.rows * b.spec.rows);
        assert_eq!(built.spec.cols, a.spec.cols * b.spec.cols);
        assert_eq!(built.spec.row_fill, a.spec.row_fill * b.spec.row_fill);
        assert_eq!(built.spec.col_fill, a.spec.col_fill * b.spec.col_fill);
        assert_eq!(built.spec.arrays, a.spec.arrays * b.spec.arrays);
        assert!(built.spec.zero_sum);
        products += 1;
    }

    // diagonal squares folded onto rectangles, covering both diagonal fillings
    let tuples: [(&[u64], usize, usize, usize, usize, usize); 10] = [
        (&[2, 16], 4, 8, 8, 4, 1),
        (&[2, 2, 8], 4, 8, 8, 4, 1),
        (&[4, 8], 8, 4, 4, 8, 1),
        (&[6, 2, 8], 6, 12, 8, 4, 2),
        (&[2, 48], 6, 12, 8, 4, 2),
        (&[3, 9], 3, 9, 9, 3, 1),
        (&[3, 21], 3, 21, 21, 3, 1),
        (&[105], 7, 21, 15, 5, 1),
        (&[3, 15], 5, 15, 9, 3, 1),
        (&[5, 25], 5, 25, 25, 5, 1),
    ];
    let mut folds = 0usize;
    for (moduli, m, n, s, k, c) in tuples {
        let grp = g(moduli);
        let d = gcd(s, k);
        let side = n * k / d;
        let inner = zero_sum_diagonal(&grp, side, d, c)
            .unwrap_or_else(|e| panic!("diagonal {side}x{side} over {grp}: {e}"));
        let folded = inner.set.fold_to_rect(m, n).unwrap();
        assert_passes(&folded, &full_spec(&grp, m, n, s, k, c), "folded rectangle");
        folds += 1;
    }

    println!("criterion 7: PASS - {products} random products and {folds} folds verify");
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
