//! Combinatorial necessary conditions on UOM columns: o-numbers and their
//! lower bound, the pairwise-product partition bound, and the structural
//! patterns that rule out unextendibility across the AB:CD cut.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{GaussRat, ProjQubit};
use crate::product::ProductVectorSet;
use crate::uom::{allowed_column_symmetries, families, instantiate, ColumnPerm, UomSpec};

/// Multiplicities of the distinct states in one column and the column's
/// o-number: the number of orthogonal row pairs, `sum mu(x) mu(x')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnProfile {
    pub column: usize,
    /// Distinct states in order of first appearance.
    pub multiplicities: Vec<(ProjQubit, usize)>,
    pub o_number: usize,
}

pub fn o_numbers(set: &ProductVectorSet) -> Vec<ColumnProfile> {
    (0..set.n_qubits())
        .map(|c| {
            let mut mult: Vec<(ProjQubit, usize)> = Vec::new();
            for q in set.column(c) {
                match mult.iter_mut().find(|(x, _)| x == q) {
                    Some((_, n)) => *n += 1,
                    None => mult.push((q.clone(), 1)),
                }
            }
            let mut p = 0;
            for (i, (x, mx)) in mult.iter().enumerate() {
                for (y, my) in &mult[i + 1..] {
                    if x.is_orthogonal_to(y) {
                        p += mx * my;
                    }
                }
            }
            ColumnProfile { column: c, multiplicities: mult, o_number: p }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub holds: bool,
    pub sum: usize,
    pub threshold: usize,
}

/// Every pair of orthogonal rows is orthogonal in at least one column, so
/// the o-numbers of a UOM sum to at least `m(m-1)/2`.
pub fn bound_check(set: &ProductVectorSet) -> BoundCheck {
    let sum = o_numbers(set).iter().map(|c| c.o_number).sum();
    let m = set.len();
    let threshold = m * m.saturating_sub(1) / 2;
    BoundCheck { holds: sum >= threshold, sum, threshold }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxSum {
    pub value: u64,
    pub extremal: Vec<u64>,
}

/// Maximum of `a1 a2 + a3 a4 + ... + a(2n-1) a(2n)` over positive integers
/// summing to `p`, with an assignment reaching it.
pub fn maxsum(p: u32, n: u32) -> Result<MaxSum> {
    if n == 0 || p < 2 * n {
        return Err(Error::BadArity { p, n });
    }
    let free = (p - 2 * n + 2) as u64;
    let hi = free.div_ceil(2);
    let lo = free / 2;
    let mut extremal = vec![1u64; 2 * n as usize];
    extremal[0] = hi;
    extremal[1] = lo;
    Ok(MaxSum { value: hi * lo + n as u64 - 1, extremal })
}

pub const ORACLE_LIMIT: u32 = 24;

/// Exhaustive maximum over all compositions of `p` into `2n` positive parts.
pub fn maxsum_oracle(p: u32, n: u32) -> Result<u64> {
    if p > ORACLE_LIMIT {
        return Err(Error::TooLarge { p, limit: ORACLE_LIMIT });
    }
    if n == 0 || p < 2 * n {
        return Err(Error::BadArity { p, n });
    }
    fn go(parts: &mut Vec<u64>, left: u64, k: usize, best: &mut u64) {
        if parts.len() + 1 == k {
            parts.push(left);
            let v = parts.chunks(2).map(|c| c[0] * c[1]).sum();
            *best = (*best).max(v);
            parts.pop();
            return;
        }
        let remaining = (k - parts.len() - 1) as u64;
        for a in 1..=left - remaining {
            parts.push(a);
            go(parts, left - a, k, best);
            parts.pop();
        }
    }
    let mut best = 0;
    go(&mut Vec::new(), p as u64, 2 * n as usize, &mut best);
    Ok(best)
}

/// Per-column equality classes of an 8-row 4-qubit set, relabeled so that
/// pattern matching is integer comparison.
struct Classes {
    /// `id[c][r]`: index of row `r`'s state among the distinct states of column `c`.
    id: Vec<Vec<usize>>,
    /// `orth[c][r]`: class of the state orthogonal to row `r`'s, if present.
    orth: Vec<Vec<Option<usize>>>,
}

impl Classes {
    fn new(set: &ProductVectorSet) -> Self {
        let mut id = Vec::new();
        let mut orth = Vec::new();
        for c in 0..set.n_qubits() {
            let col = set.column(c);
            let mut distinct: Vec<&ProjQubit> = Vec::new();
            let ids: Vec<usize> = col
                .iter()
                .map(|q| match distinct.iter().position(|d| d == q) {
                    Some(k) => k,
                    None => {
                        distinct.push(q);
                        distinct.len() - 1
                    }
                })
                .collect();
            let o: Vec<Option<usize>> = col
                .iter()
                .map(|q| {
                    let qo = q.orthogonal();
                    distinct.iter().position(|d| **d == qo)
                })
                .collect();
            id.push(ids);
            orth.push(o);
        }
        Classes { id, orth }
    }
}

/// View of the classes through a column symmetry: qubit roles `f, g, h, i`
/// are columns `perm[0..4]`.
struct View<'a> {
    cl: &'a Classes,
    perm: ColumnPerm,
}

impl View<'_> {
    fn eq(&self, role: usize, a: usize, b: usize) -> bool {
        let c = self.perm[role];
        self.cl.id[c][a] == self.cl.id[c][b]
    }

    fn orth(&self, role: usize, a: usize, b: usize) -> bool {
        let c = self.perm[role];
        self.cl.orth[c][a] == Some(self.cl.id[c][b])
    }

    fn eq3(&self, role: usize, a: usize, b: usize, c: usize) -> bool {
        self.eq(role, a, b) && self.eq(role, b, c)
    }
}

const F: usize = 0;
const G: usize = 1;
const H: usize = 2;
const I: usize = 3;
const ROWS: usize = 8;

fn distinct(rows: &[usize]) -> bool {
    rows.iter().enumerate().all(|(k, r)| !rows[..k].contains(r))
}

fn triples() -> impl Iterator<Item = [usize; 3]> {
    (0..ROWS).flat_map(|a| (a + 1..ROWS).flat_map(move |b| (b + 1..ROWS).map(move |c| [a, b, c])))
}

fn pairs() -> impl Iterator<Item = [usize; 2]> {
    (0..ROWS).flat_map(|a| (a + 1..ROWS).map(move |b| [a, b]))
}

type Matcher = fn(&View) -> Option<Vec<usize>>;

fn four_identical(v: &View) -> Option<Vec<usize>> {
    for a in 0..ROWS {
        let rows: Vec<usize> = (0..ROWS).filter(|&b| v.eq(F, a, b)).collect();
        if rows.len() >= 4 {
            return Some(rows);
        }
    }
    None
}

fn shared_party_triple(v: &View) -> Option<Vec<usize>> {
    triples().find(|&[a, b, c]| v.eq3(F, a, b, c) && v.eq3(G, a, b, c)).map(|t| t.to_vec())
}

fn triple_and_pair(v: &View) -> Option<Vec<usize>> {
    for [a, b, c] in triples().filter(|&[a, b, c]| v.eq3(F, a, b, c)) {
        for [d, e] in pairs() {
            if distinct(&[a, b, c, d, e]) && v.eq(G, d, e) {
                return Some(vec![a, b, c, d, e]);
            }
        }
    }
    None
}

fn has_equal_pair(v: &View, role: usize, rows: &[usize]) -> bool {
    rows.iter().enumerate().any(|(k, &a)| rows[k + 1..].iter().any(|&b| v.eq(role, a, b)))
}

fn overlapping_triples_dependent(v: &View) -> Option<Vec<usize>> {
    for [x, y, z] in triples().filter(|&[a, b, c]| v.eq3(F, a, b, c)) {
        // one of the f-triple is j1, the other two share g with a fourth row
        for (j1, j2, j3) in [(x, y, z), (y, x, z), (z, x, y)] {
            for j4 in (0..ROWS).filter(|r| ![j1, j2, j3].contains(r)) {
                if !v.eq3(G, j2, j3, j4) {
                    continue;
                }
                let rest_f: Vec<usize> = (0..ROWS).filter(|r| ![j1, j2, j3].contains(r)).collect();
                let rest_g: Vec<usize> = (0..ROWS).filter(|r| ![j2, j3, j4].contains(r)).collect();
                if has_equal_pair(v, F, &rest_f) || has_equal_pair(v, G, &rest_g) {
                    return Some(vec![j1, j2, j3, j4]);
                }
            }
        }
    }
    None
}

fn triples_on_both_qubits(v: &View) -> Option<Vec<usize>> {
    let tf = triples().find(|&[a, b, c]| v.eq3(F, a, b, c))?;
    let tg = triples().find(|&[a, b, c]| v.eq3(G, a, b, c))?;
    Some([tf, tg].concat())
}

fn triple_across_cut(v: &View) -> Option<Vec<usize>> {
    triples().find(|&[a, b, c]| v.eq3(F, a, b, c) && v.eq3(H, a, b, c)).map(|t| t.to_vec())
}

fn triple_with_pair_on_two(v: &View) -> Option<Vec<usize>> {
    for [x, y, z] in triples().filter(|&[a, b, c]| v.eq3(F, a, b, c)) {
        for (a, b) in [(x, y), (x, z), (y, z)] {
            if v.eq(G, a, b) && v.eq(H, a, b) {
                return Some(vec![x, y, z]);
            }
        }
    }
    None
}

fn pair_with_cross_triple(v: &View) -> Option<Vec<usize>> {
    for [x, y, z] in triples().filter(|&[a, b, c]| v.eq3(H, a, b, c)) {
        for (a, b) in [(x, y), (x, z), (y, z)] {
            if v.eq(F, a, b) && v.eq(G, a, b) {
                return Some(vec![x, y, z]);
            }
        }
    }
    None
}

fn three_column_pair(v: &View) -> Option<Vec<usize>> {
    pairs().find(|&[a, b]| v.eq(F, a, b) && v.eq(G, a, b) && v.eq(H, a, b)).map(|p| p.to_vec())
}

fn party_pair_cross_orthogonal(v: &View) -> Option<Vec<usize>> {
    pairs()
        .find(|&[a, b]| v.eq(F, a, b) && v.eq(G, a, b) && v.orth(H, a, b) && v.orth(I, a, b))
        .map(|p| p.to_vec())
}

fn party_pair(v: &View) -> Option<Vec<usize>> {
    pairs().find(|&[a, b]| v.eq(F, a, b) && v.eq(G, a, b)).map(|p| p.to_vec())
}

/// Patterns on an 8-row 4-qubit set, each sufficient for the set not to be
/// a UPB across AB:CD. Qubit roles `f, g, h, i` refer to the columns after
/// an AB:CD-preserving column symmetry.
const EXCLUSION_PREDICATES: &[(&str, &str, Matcher)] = &[
    ("four_identical", "a qubit carries at least four identical states", four_identical),
    ("shared_party_triple", "three rows agree on f and on g", shared_party_triple),
    ("triple_and_pair", "three rows agree on f, two further rows agree on g", triple_and_pair),
    (
        "overlapping_triples_dependent",
        "f1=f2=f3 and g2=g3=g4, and the remaining f's or g's are not pairwise independent",
        overlapping_triples_dependent,
    ),
    ("triples_on_both_qubits", "f and g each carry three identical states", triples_on_both_qubits),
    ("triple_across_cut", "three rows agree on f and on h", triple_across_cut),
    ("triple_with_pair_on_two", "three rows agree on f, two of them also on g and h", triple_with_pair_on_two),
    ("pair_with_cross_triple", "three rows agree on h, two of them also on f and g", pair_with_cross_triple),
    ("three_column_pair", "two rows agree on f, g and h", three_column_pair),
    ("party_pair_cross_orthogonal", "two rows agree on f and g and are orthogonal on h and i", party_pair_cross_orthogonal),
    ("party_pair", "two rows agree on f and g", party_pair),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiredPredicate {
    pub id: &'static str,
    /// Column symmetry under which the pattern was found.
    pub symmetry: ColumnPerm,
    /// Rows realizing the pattern, 1-based.
    pub rows: Vec<usize>,
}

fn check_shape(set: &ProductVectorSet) -> Result<()> {
    if set.len() != ROWS || set.n_qubits() != 4 {
        return Err(Error::WrongShape { rows: set.len(), qubits: set.n_qubits() });
    }
    Ok(())
}

fn run(set: &ProductVectorSet, table: &[(&'static str, &'static str, Matcher)]) -> Result<Vec<FiredPredicate>> {
    check_shape(set)?;
    let cl = Classes::new(set);
    let syms = allowed_column_symmetries();
    let mut out = Vec::new();
    for (id, _, matcher) in table {
        for perm in &syms {
            if let Some(rows) = matcher(&View { cl: &cl, perm: *perm }) {
                out.push(FiredPredicate { id, symmetry: *perm, rows: rows.iter().map(|r| r + 1).collect() });
                break;
            }
        }
    }
    Ok(out)
}

/// `(id, description)` of every exclusion predicate, in evaluation order.
pub fn exclusion_predicate_list() -> Vec<(&'static str, &'static str)> {
    EXCLUSION_PREDICATES.iter().map(|(id, d, _)| (*id, *d)).collect()
}

/// Every exclusion predicate that fires on `set`, with one witness each.
pub fn exclusion_predicates(set: &ProductVectorSet) -> Result<Vec<FiredPredicate>> {
    run(set, EXCLUSION_PREDICATES)
}

fn equal_and_orthogonal_pairs(v: &View) -> Option<Vec<usize>> {
    pairs()
        .find(|&[a, b]| v.eq(F, a, b) && v.orth(G, a, b) && v.eq(H, a, b) && v.orth(I, a, b))
        .map(|p| p.to_vec())
}

fn pair_on_f_and_h(v: &View) -> Option<Vec<usize>> {
    pairs().find(|&[a, b]| v.eq(F, a, b) && v.eq(H, a, b)).map(|p| p.to_vec())
}

fn chained_triples(v: &View) -> Option<Vec<usize>> {
    for [a, b, c] in triples().filter(|&[a, b, c]| v.eq3(F, a, b, c)) {
        for j3 in [a, b, c] {
            for [d, e] in pairs() {
                if distinct(&[a, b, c, d, e]) && v.eq3(H, j3, d, e) {
                    return Some(vec![a, b, c, d, e]);
                }
            }
        }
    }
    None
}

fn identical_triple(v: &View) -> Option<Vec<usize>> {
    triples().find(|&[a, b, c]| v.eq3(F, a, b, c)).map(|t| t.to_vec())
}

fn identical_pair(v: &View) -> Option<Vec<usize>> {
    pairs().find(|&[a, b]| v.eq(F, a, b)).map(|p| p.to_vec())
}

/// Patterns that single out families of the catalog, with the families
/// claimed to carry them.
const CLASSIFICATION_CLAUSES: &[(&str, &str, Matcher, &[&str])] = &[
    (
        "equal_and_orthogonal_pairs",
        "two rows agree on f and h and are orthogonal on g and i",
        equal_and_orthogonal_pairs,
        &["F1"],
    ),
    ("pair_on_f_and_h", "two rows agree on f and h", pair_on_f_and_h, &["F2", "F3", "F4", "F5"]),
    (
        "chained_triples",
        "f1=f2=f3 and h3=h4=h5 on five distinct rows",
        chained_triples,
        &["F2", "F3", "F4", "F5"],
    ),
    ("identical_triple", "three rows agree on f", identical_triple, &["F2", "F3", "F4", "F5"]),
    ("identical_pair", "two rows agree on f", identical_pair, &["F2", "F3", "F4", "F5", "F6"]),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseMembership {
    pub clause: &'static str,
    pub description: &'static str,
    pub family: String,
    pub holds: bool,
    pub witness: Option<FiredPredicate>,
}

/// For each classification clause and each family it names, whether a
/// generic instance of the family carries the clause's pattern.
pub fn classification_witnesses(seed: u64) -> Result<Vec<ClauseMembership>> {
    let fams = families();
    let mut out = Vec::new();
    for (clause, description, matcher, named) in CLASSIFICATION_CLAUSES {
        for name in *named {
            let spec = fams.iter().find(|s| s.name == *name).expect("named family in catalog");
            let (_, set) = instantiate(spec, seed)?;
            let fired = run(&set, &[(clause, description, *matcher)])?;
            out.push(ClauseMembership {
                clause,
                description,
                family: name.to_string(),
                holds: !fired.is_empty(),
                witness: fired.into_iter().next(),
            });
        }
    }
    Ok(out)
}

fn random_state(rng: &mut ChaCha8Rng) -> ProjQubit {
    let mut part = || crate::exact::rat(rng.gen_range(-3..=3), rng.gen_range(1..=2));
    let re = part();
    let im = part();
    ProjQubit::Finite(GaussRat::new(re, im))
}

/// A random orthogonal set of `rows` distinct 4-qubit product vectors. Each
/// column draws from a small pool `{0, 1, a, a', b, b'}`; rows are added
/// greedily and the build restarts when it gets stuck.
pub fn random_orthogonal_set(rng: &mut ChaCha8Rng, rows: usize) -> ProductVectorSet {
    loop {
        let pools: Vec<Vec<ProjQubit>> = (0..4)
            .map(|_| {
                let a = random_state(rng);
                let b = random_state(rng);
                let mut pool = vec![ProjQubit::zero(), ProjQubit::one(), a.orthogonal(), a, b.orthogonal(), b];
                pool.dedup();
                pool
            })
            .collect();
        let mut set: Vec<Vec<ProjQubit>> = Vec::new();
        let mut attempts = 0;
        while set.len() < rows && attempts < 2000 {
            attempts += 1;
            let cand: Vec<ProjQubit> = pools.iter().map(|p| p.choose(rng).expect("nonempty pool").clone()).collect();
            let fits = set.iter().all(|r| r != &cand && r.iter().zip(&cand).any(|(x, y)| x.is_orthogonal_to(y)));
            if fits {
                set.push(cand);
            }
        }
        if set.len() == rows {
            return ProductVectorSet::new(4, set).expect("distinct rows");
        }
    }
}

/// Deterministic corpus for predicate-soundness fuzzing: alternately a
/// random orthogonal set and a family instance with one inequality atom
/// forced to equality (skipping forcings that break orthogonality or
/// duplicate rows), with rows shuffled.
pub fn fuzz_corpus(seed: u64, count: usize) -> Vec<ProductVectorSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fams = families();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if out.len() % 2 == 0 {
            out.push(random_orthogonal_set(&mut rng, ROWS));
            continue;
        }
        let spec: &UomSpec = fams.choose(&mut rng).expect("families");
        let atoms = spec.inequality_atoms();
        let (name, with) = atoms.choose(&mut rng).expect("atoms");
        let forced = spec.force_equal(name, with);
        let Ok((_, set)) = instantiate(&forced, rng.gen()) else { continue };
        if set.require_orthogonal().is_err() {
            continue;
        }
        let mut perm: Vec<usize> = (0..set.len()).collect();
        perm.shuffle(&mut rng);
        out.push(set.permute_rows(&perm).expect("permutation"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn o_number_of_simple_column() {
        let z = ProjQubit::zero();
        let o = ProjQubit::one();
        let rows = vec![
            vec![z.clone(), z.clone()],
            vec![z.clone(), o.clone()],
            vec![o.clone(), z.clone()],
            vec![o.clone(), o.clone()],
        ];
        let set = ProductVectorSet::new(2, rows).unwrap();
        let prof = o_numbers(&set);
        assert_eq!(prof[0].o_number, 4);
        assert_eq!(prof[0].multiplicities.len(), 2);
        assert!(bound_check(&set).holds);
    }

    #[test]
    fn maxsum_examples() {
        assert_eq!(maxsum(8, 1).unwrap(), MaxSum { value: 16, extremal: vec![4, 4] });
        assert_eq!(maxsum(8, 2).unwrap().value, 10);
        assert_eq!(maxsum(8, 3).unwrap().value, 6);
        assert_eq!(maxsum(8, 4).unwrap().value, 4);
        assert_eq!(maxsum(3, 2), Err(Error::BadArity { p: 3, n: 2 }));
        assert_eq!(maxsum_oracle(25, 2), Err(Error::TooLarge { p: 25, limit: 24 }));
    }

    #[test]
    fn random_sets_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let s = random_orthogonal_set(&mut rng, 8);
            assert_eq!(s.len(), 8);
            assert!(s.require_orthogonal().is_ok());
        }
    }
}
