//! The pruned search against exhaustive enumeration on small sets, plus
//! invariance of the verdicts under qubit permutations and local unitaries.

mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;
use upb_core::exact::rat;
use upb_core::product::local_ops;
use upb_core::unextend::{drop_row, enumerate_orthogonal, find_extension, group, is_upb, is_upb_with, SearchOptions};
use upb_core::uom::{allowed_column_symmetries, families, instantiate};
use upb_core::{Error, GaussRat, PartySplit, ProductVectorSet, ProjQubit};

use common::{brute_enumerate, dot, normalize, row_ket, to_qubit_order, Brute};

fn gauss() -> impl Strategy<Value = GaussRat> {
    ((-4i64..=4, 1i64..=3), (-4i64..=4, 1i64..=3)).prop_map(|((a, b), (c, d))| GaussRat::new(rat(a, b), rat(c, d)))
}

/// Orthogonal sets of at most five rows on two or three qubits. Each qubit
/// draws from `{0, 1, a, a'}`; candidate rows are kept greedily when they are
/// new and orthogonal to everything kept so far.
fn small_orthogonal_set() -> impl Strategy<Value = ProductVectorSet> {
    (2usize..=3).prop_flat_map(|n| {
        (
            proptest::collection::vec(gauss(), n),
            proptest::collection::vec(proptest::collection::vec(0usize..4, n), 1..16),
        )
            .prop_map(move |(seeds, cands)| {
                let pools: Vec<Vec<ProjQubit>> = seeds
                    .into_iter()
                    .map(|a| {
                        let a = if a.is_zero() { GaussRat::one() } else { a };
                        let q = ProjQubit::Finite(a);
                        vec![ProjQubit::zero(), ProjQubit::one(), q.orthogonal(), q]
                    })
                    .collect();
                let mut rows: Vec<Vec<ProjQubit>> = Vec::new();
                for c in cands {
                    let row: Vec<ProjQubit> = c.iter().enumerate().map(|(k, &i)| pools[k][i].clone()).collect();
                    let fits = rows.iter().all(|r| r != &row && r.iter().zip(&row).any(|(x, y)| x.is_orthogonal_to(y)));
                    if fits && rows.len() < 5 {
                        rows.push(row);
                    }
                }
                ProductVectorSet::new(n, rows).expect("distinct rows")
            })
    })
}

fn splits_of(n: usize) -> Vec<PartySplit> {
    let mut out = vec![PartySplit::finest(n)];
    out.extend(PartySplit::bipartitions(n));
    out
}

fn engine_kets(set: &ProductVectorSet, split: &PartySplit) -> Option<Vec<common::Vector>> {
    let sol = enumerate_orthogonal(set, split).unwrap();
    if !sol.is_finite() {
        return None;
    }
    let mut kets: Vec<common::Vector> = sol
        .vectors
        .iter()
        .map(|parts| {
            let flat = parts.iter().fold(vec![GaussRat::from_ints(1, 0)], |acc, p| common::kron(&acc, p.entries()));
            normalize(&flat)
        })
        .collect();
    kets.sort();
    Some(kets)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_matches_exhaustive_reference(set in small_orthogonal_set()) {
        for split in splits_of(set.n_qubits()) {
            let reference = match brute_enumerate(&set, &split) {
                Brute::Finite(mut v) => { v.sort(); Some(v) }
                Brute::Infinite => None,
            };
            prop_assert_eq!(engine_kets(&set, &split), reference, "split {}", split);
        }
    }

    #[test]
    fn witnesses_are_orthogonal_product_vectors(set in small_orthogonal_set()) {
        for split in splits_of(set.n_qubits()) {
            let g = group(&set, &split).unwrap();
            match find_extension(&g).unwrap() {
                Some(w) => {
                    prop_assert!(w.verify(&g));
                    let v = to_qubit_order(w.product_vector().entries(), &split);
                    prop_assert!(!v.iter().all(Zero::is_zero));
                    for i in 0..set.len() {
                        prop_assert!(dot(&row_ket(&set, i), &v).is_zero());
                    }
                }
                None => prop_assert!(common::brute_is_upb(&set, &split)),
            }
        }
    }
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

#[test]
fn counts_invariant_under_cut_preserving_qubit_permutations() {
    for f in families() {
        let (_, set) = instantiate(&f, 5).unwrap();
        let s = drop_row(&set, 1).unwrap();
        let base = enumerate_orthogonal(&s, &PartySplit::ab_cd()).unwrap().count();
        for perm in allowed_column_symmetries() {
            let moved = s.permute_qubits(&perm).unwrap();
            let split = PartySplit::ab_cd().relabel(&inverse(&perm));
            assert_eq!(enumerate_orthogonal(&moved, &split).unwrap().count(), base, "{} under {perm:?}", f.name);
            assert!(is_upb(&set.permute_qubits(&perm).unwrap(), &split).unwrap());
        }
    }
}

#[test]
fn verdicts_follow_qubits_under_any_permutation() {
    // AC:BD separates F1 from F6; permuting the qubits moves that cut.
    let (_, f1) = instantiate(&families()[0], 2).unwrap();
    let perm = [0, 2, 1, 3];
    let moved = f1.permute_qubits(&perm).unwrap();
    assert!(!is_upb(&f1, &PartySplit::ac_bd()).unwrap());
    assert!(!is_upb(&moved, &PartySplit::ab_cd()).unwrap());
    assert!(is_upb(&moved, &PartySplit::ac_bd()).unwrap());
}

#[test]
fn counts_invariant_under_local_unitaries() {
    let ops = [local_ops::flip(), local_ops::phase_i(), local_ops::hadamard_scaled()];
    for f in families() {
        let (_, set) = instantiate(&f, 9).unwrap();
        let s = drop_row(&set, 1).unwrap();
        let base = enumerate_orthogonal(&s, &PartySplit::ab_cd()).unwrap().count();
        for (q, op) in ops.iter().enumerate() {
            assert!(local_ops::is_scaled_unitary(op));
            let moved = s.apply_local(q, op).unwrap();
            assert_eq!(enumerate_orthogonal(&moved, &PartySplit::ab_cd()).unwrap().count(), base);
            assert!(is_upb(&set.apply_local(q + 1, op).unwrap(), &PartySplit::four_qubit()).unwrap());
        }
    }
}

#[test]
fn non_orthogonal_input_is_rejected_with_rows() {
    let z = ProjQubit::zero();
    let set = ProductVectorSet::new(2, vec![vec![z.clone(), z.clone()], vec![z.clone(), ProjQubit::one()], vec![z.clone(), ProjQubit::Finite(GaussRat::from_ints(1, 1))]])
        .unwrap();
    assert_eq!(is_upb(&set, &PartySplit::finest(2)), Err(Error::NotOrthogonal(1, 3)));
}

#[test]
fn budget_guard_and_force() {
    let (_, set) = instantiate(&families()[0], 1).unwrap();
    let tight = SearchOptions { budget: 100.0, force: false };
    assert!(matches!(is_upb_with(&set, &PartySplit::four_qubit(), tight), Err(Error::BudgetExceeded { .. })));
    let forced = SearchOptions { budget: 100.0, force: true };
    assert!(is_upb_with(&set, &PartySplit::four_qubit(), forced).unwrap());
}
