use ldauth_core::laver::{
    doubling_mismatches, extend_row, projects_onto, threshold, LaverError, LaverTable,
};
use ldauth_core::Exec;
use proptest::prelude::*;

/// Straight from the defining recursion, one entry at a time with memoization.
fn naive(n: u32) -> Vec<Vec<u32>> {
    let size = 1usize << n;
    let mut t: Vec<Vec<Option<u32>>> = vec![vec![None; size]; size];
    fn get(t: &mut Vec<Vec<Option<u32>>>, p: usize, q: usize) -> u32 {
        let size = t.len();
        if let Some(v) = t[p][q] {
            return v;
        }
        let v = if p == size - 1 {
            q as u32
        } else if q == 0 {
            (p + 1) as u32
        } else {
            let a = get(t, p, q - 1) as usize;
            get(t, a, p + 1)
        };
        t[p][q] = Some(v);
        v
    }
    for p in (0..size).rev() {
        for q in 0..size {
            get(&mut t, p, q);
        }
    }
    t.into_iter()
        .map(|row| row.into_iter().map(|v| v.unwrap()).collect())
        .collect()
}

#[test]
fn matches_the_defining_recursion() {
    for n in 0..=6 {
        let table = LaverTable::build(n).unwrap();
        let reference = naive(n);
        for (p, row) in reference.iter().enumerate() {
            let got: Vec<u32> = table.row(p).iter().map(|&v| v as u32).collect();
            assert_eq!(&got, row, "A_{n} row {p}");
        }
    }
}

#[test]
fn small_table_values() {
    let a3 = LaverTable::build(3).unwrap();
    let expected: [[u32; 8]; 8] = [
        [1, 3, 5, 7, 1, 3, 5, 7],
        [2, 3, 6, 7, 2, 3, 6, 7],
        [3, 7, 3, 7, 3, 7, 3, 7],
        [4, 5, 6, 7, 4, 5, 6, 7],
        [5, 7, 5, 7, 5, 7, 5, 7],
        [6, 7, 6, 7, 6, 7, 6, 7],
        [7, 7, 7, 7, 7, 7, 7, 7],
        [0, 1, 2, 3, 4, 5, 6, 7],
    ];
    for (p, row) in expected.iter().enumerate() {
        for (q, &v) in row.iter().enumerate() {
            assert_eq!(a3.get(p, q), v);
        }
    }
    let a4 = LaverTable::build(4).unwrap();
    assert_eq!(a4.row_pattern(0).unwrap().pattern, vec![1, 11, 13, 15]);
}

#[test]
fn cap_is_enforced() {
    assert!(matches!(LaverTable::build(13), Err(LaverError::AboveCap { n: 13, .. })));
    assert!(LaverTable::build_with_cap(13, 13).is_ok());
    let a2 = LaverTable::build(2).unwrap();
    assert!(matches!(a2.op(4, 0), Err(LaverError::OutOfRange { .. })));
}

#[test]
fn threshold_values() {
    let expected: [&[usize]; 5] = [
        &[0],
        &[1, 0],
        &[2, 2, 1, 0],
        &[1, 1, 2, 4, 2, 2, 1, 0],
        &[4, 4, 4, 8, 1, 1, 2, 8, 1, 1, 2, 4, 2, 2, 1, 0],
    ];
    for (n, want) in expected.iter().enumerate() {
        let small = LaverTable::build(n as u32).unwrap();
        let big = LaverTable::build(n as u32 + 1).unwrap();
        let got: Vec<usize> = small.thresholds_into(&big).iter().map(|t| t.t).collect();
        assert_eq!(&got, want, "thresholds of A_{n}");
    }
}

#[test]
fn projection_and_doubling_up_to_nine() {
    let mut prev = LaverTable::build(0).unwrap();
    for n in 1..=10 {
        let next = LaverTable::build(n).unwrap();
        assert!(projects_onto(&next, &prev, Exec::Parallel), "A_{n} does not project");
        assert!(doubling_mismatches(&prev, &next, Exec::Parallel).is_empty());
        prev = next;
    }
}

#[test]
fn extend_row_rejects_large_threshold() {
    let a2 = LaverTable::build(2).unwrap();
    let pattern = a2.row_pattern(1).unwrap();
    assert_eq!(pattern.period(), 2);
    assert!(matches!(extend_row(&pattern, 3, 2), Err(LaverError::ThresholdOutOfRange { .. })));
}

fn table_and_row() -> impl Strategy<Value = (u32, u64)> {
    (0u32..=9).prop_flat_map(|n| (Just(n), 0..(1u64 << n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rows_are_periodic_with_power_of_two_period((n, p) in table_and_row()) {
        let table = LaverTable::build(n).unwrap();
        let pattern = table.row_pattern(p as usize).unwrap();
        prop_assert!(pattern.period().is_power_of_two());
        prop_assert!(pattern.is_strictly_increasing());
        prop_assert_eq!(*pattern.pattern.last().unwrap() as usize, table.size() - 1);
        let row: Vec<u32> = table.row(p as usize).iter().map(|&v| v as u32).collect();
        prop_assert_eq!(pattern.expand(table.size()), row);
    }

    #[test]
    fn lazy_threshold_matches_tables((n, p) in table_and_row()) {
        let small = LaverTable::build(n).unwrap();
        let big = LaverTable::build(n + 1).unwrap();
        prop_assert_eq!(threshold(n, p).unwrap(), small.thresholds_into(&big)[p as usize]);
    }

    #[test]
    fn left_distributive(n in 0u32..=8, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let t = LaverTable::build(n).unwrap();
        let m = t.size() as u64;
        let (a, b, c) = (a % m, b % m, c % m);
        let bc = t.op(b, c).unwrap() as u64;
        let ab = t.op(a, b).unwrap() as u64;
        let ac = t.op(a, c).unwrap() as u64;
        prop_assert_eq!(t.op(a, bc).unwrap(), t.op(ab, ac).unwrap());
    }
}
