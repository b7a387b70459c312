use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::split::PartySplit;
use crate::error::{Error, Result};
use crate::exact::{bareiss_rank, CMatrix, GaussInt, GaussRat};
use crate::product::{kron_qubits, ProductVectorSet};

/// Assignments (`parties^rows`) above which a search needs `force`.
pub const DEFAULT_BUDGET: f64 = 1e9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub budget: f64,
    pub force: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, force: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Orthogonality {
    Ok,
    /// First non-orthogonal pair of rows, 1-based.
    ViolatingPair(usize, usize),
}

pub fn check_orthogonality(set: &ProductVectorSet) -> Orthogonality {
    match set.first_non_orthogonal_pair() {
        Some((i, j)) => Orthogonality::ViolatingPair(i + 1, j + 1),
        None => Orthogonality::Ok,
    }
}

/// Rows of a set regrouped into per-party vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupedSet {
    split: PartySplit,
    rows: Vec<Vec<CMatrix>>,
}

impl GroupedSet {
    pub fn split(&self) -> &PartySplit {
        &self.split
    }

    /// `rows()[r][p]` is the party-`p` component of row `r`.
    pub fn rows(&self) -> &[Vec<CMatrix>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn inner(&self, i: usize, j: usize) -> GaussRat {
        let mut acc = GaussRat::one();
        for (a, b) in self.rows[i].iter().zip(&self.rows[j]) {
            acc = &acc * &a.inner(b);
        }
        acc
    }

    fn require_orthogonal(&self) -> Result<()> {
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                if !self.inner(i, j).is_zero() {
                    return Err(Error::NotOrthogonal(i + 1, j + 1));
                }
            }
        }
        Ok(())
    }
}

pub fn group(set: &ProductVectorSet, split: &PartySplit) -> Result<GroupedSet> {
    if split.n_qubits() != set.n_qubits() {
        return Err(Error::BadSplit(format!(
            "split {split} covers {} qubits, set has {}",
            split.n_qubits(),
            set.n_qubits()
        )));
    }
    let rows = set
        .rows()
        .iter()
        .map(|r| split.parties().iter().map(|p| kron_qubits(p.iter().map(|&q| &r[q]))).collect())
        .collect();
    Ok(GroupedSet { split: split.clone(), rows })
}

/// A product vector orthogonal to every row, with the kill assignment that
/// produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionWitness {
    pub split: PartySplit,
    /// Killing party of each row (0-based party index, rows in order).
    pub assignment: Vec<usize>,
    /// One nonzero vector per party, in projective canonical form.
    pub vectors: Vec<CMatrix>,
}

impl ExtensionWitness {
    /// The full ket, parties in split order.
    pub fn product_vector(&self) -> CMatrix {
        self.vectors.iter().fold(CMatrix::column(vec![GaussRat::one()]), |acc, v| acc.kron(v))
    }

    /// Re-checks orthogonality to every row by direct inner products.
    pub fn verify(&self, g: &GroupedSet) -> bool {
        self.vectors.iter().all(|v| !v.is_zero())
            && g.rows.iter().all(|r| {
                r.iter().zip(&self.vectors).map(|(a, v)| a.inner(v)).fold(GaussRat::one(), |acc, x| &acc * &x).is_zero()
            })
    }
}

/// Product vectors with at least one party free to move in a subspace of
/// dimension two or more.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFamily {
    /// Nullspace basis per party.
    pub bases: Vec<Vec<CMatrix>>,
}

/// All product vectors (up to scale) orthogonal to a set under a split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalSolutionSet {
    pub split: PartySplit,
    /// Isolated solutions, per-party canonical vectors, sorted and distinct.
    pub vectors: Vec<Vec<CMatrix>>,
    /// Positive-dimensional families; nonempty means infinitely many solutions.
    pub families: Vec<SolutionFamily>,
}

impl OrthogonalSolutionSet {
    pub fn is_finite(&self) -> bool {
        self.families.is_empty()
    }

    /// Exact number of solutions, or `None` when infinite.
    pub fn count(&self) -> Option<usize> {
        self.is_finite().then_some(self.vectors.len())
    }
}

/// Work counters of the last search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub rank_evaluations: u64,
    pub leaves: u64,
}

enum RankMemo {
    Table(Vec<u8>),
    Map(HashMap<u64, u8>),
}

const UNKNOWN: u8 = u8::MAX;
const TABLE_ROWS: usize = 22;

struct Engine {
    dims: Vec<usize>,
    /// `[party][row]`: conjugated component with denominators cleared.
    ints: Vec<Vec<Vec<GaussInt>>>,
    /// `[party][row]`: conjugated component as a 1 x d matrix row.
    conj: Vec<Vec<Vec<GaussRat>>>,
    memo: Vec<RankMemo>,
    nulls: HashMap<(usize, u64), Vec<CMatrix>>,
    m: usize,
    stats: SearchStats,
}

impl Engine {
    fn new(g: &GroupedSet, opts: SearchOptions) -> Result<Self> {
        let m = g.rows.len();
        let k = g.split.n_parties();
        let assignments = (k as f64).powi(m as i32);
        if m > 64 || (assignments > opts.budget && !opts.force) {
            return Err(Error::BudgetExceeded { assignments, budget: opts.budget });
        }
        let dims = g.split.dims();
        let mut ints = Vec::with_capacity(k);
        let mut conj = Vec::with_capacity(k);
        for p in 0..k {
            let rows: Vec<Vec<GaussRat>> = g.rows.iter().map(|r| r[p].conj().entries().to_vec()).collect();
            let mat = CMatrix::from_rows(&rows);
            ints.push(mat.to_gauss_int_rows());
            conj.push(rows);
        }
        let memo = (0..k)
            .map(|_| if m <= TABLE_ROWS { RankMemo::Table(vec![UNKNOWN; 1 << m]) } else { RankMemo::Map(HashMap::new()) })
            .collect();
        Ok(Engine { dims, ints, conj, memo, nulls: HashMap::new(), m, stats: SearchStats::default() })
    }

    fn compute_rank(&mut self, p: usize, mask: u64) -> u8 {
        self.stats.rank_evaluations += 1;
        let rows: Vec<Vec<GaussInt>> =
            (0..self.m).filter(|r| mask >> r & 1 == 1).map(|r| self.ints[p][r].clone()).collect();
        bareiss_rank(rows) as u8
    }

    /// Whether the rows in `mask` span party `p`'s whole space.
    fn is_full(&mut self, p: usize, mask: u64) -> bool {
        let d = self.dims[p];
        if (mask.count_ones() as usize) < d {
            return false;
        }
        let cached = match &self.memo[p] {
            RankMemo::Table(t) => t[mask as usize],
            RankMemo::Map(h) => h.get(&mask).copied().unwrap_or(UNKNOWN),
        };
        let r = if cached != UNKNOWN {
            cached
        } else {
            let r = self.compute_rank(p, mask);
            match &mut self.memo[p] {
                RankMemo::Table(t) => t[mask as usize] = r,
                RankMemo::Map(h) => {
                    h.insert(mask, r);
                }
            }
            r
        };
        r as usize == d
    }

    /// Depth-first over rows in order, parties in split order. Pushes the
    /// party masks and assignment of every surviving leaf to `leaves`;
    /// returns true to stop early once one leaf is found and `first_only`.
    fn dfs(
        &mut self,
        row: usize,
        masks: &mut [u64],
        assign: &mut Vec<usize>,
        leaves: &mut Vec<(Vec<u64>, Vec<usize>)>,
        first_only: bool,
    ) -> bool {
        self.stats.nodes += 1;
        if row == self.m {
            self.stats.leaves += 1;
            leaves.push((masks.to_vec(), assign.clone()));
            return first_only;
        }
        for p in 0..masks.len() {
            let next = masks[p] | 1 << row;
            if self.is_full(p, next) {
                continue;
            }
            let saved = masks[p];
            masks[p] = next;
            assign.push(p);
            let stop = self.dfs(row + 1, masks, assign, leaves, first_only);
            assign.pop();
            masks[p] = saved;
            if stop {
                return true;
            }
        }
        false
    }

    fn search(&mut self, first_only: bool) -> Vec<(Vec<u64>, Vec<usize>)> {
        let mut masks = vec![0u64; self.dims.len()];
        let mut leaves = Vec::new();
        self.dfs(0, &mut masks, &mut Vec::with_capacity(self.m), &mut leaves, first_only);
        leaves
    }

    /// Basis of the vectors in party `p` orthogonal to the rows in `mask`.
    fn nullspace(&mut self, p: usize, mask: u64) -> Vec<CMatrix> {
        if let Some(b) = self.nulls.get(&(p, mask)) {
            return b.clone();
        }
        let d = self.dims[p];
        let basis = if mask == 0 {
            CMatrix::identity(d).columns()
        } else {
            let rows: Vec<Vec<GaussRat>> =
                (0..self.m).filter(|r| mask >> r & 1 == 1).map(|r| self.conj[p][r].clone()).collect();
            CMatrix::from_rows(&rows).nullspace()
        };
        self.nulls.insert((p, mask), basis.clone());
        basis
    }
}

pub fn find_extension(g: &GroupedSet) -> Result<Option<ExtensionWitness>> {
    find_extension_with(g, SearchOptions::default()).map(|(w, _)| w)
}

pub fn find_extension_with(g: &GroupedSet, opts: SearchOptions) -> Result<(Option<ExtensionWitness>, SearchStats)> {
    g.require_orthogonal()?;
    let mut engine = Engine::new(g, opts)?;
    let leaves = engine.search(true);
    let witness = leaves.into_iter().next().map(|(masks, assignment)| {
        let vectors = masks
            .iter()
            .enumerate()
            .map(|(p, &mask)| engine.nullspace(p, mask)[0].projective_canonical())
            .collect();
        ExtensionWitness { split: g.split.clone(), assignment, vectors }
    });
    Ok((witness, engine.stats))
}

pub fn is_upb(set: &ProductVectorSet, split: &PartySplit) -> Result<bool> {
    is_upb_with(set, split, SearchOptions::default())
}

pub fn is_upb_with(set: &ProductVectorSet, split: &PartySplit, opts: SearchOptions) -> Result<bool> {
    set.require_orthogonal()?;
    let g = group(set, split)?;
    Ok(find_extension_with(&g, opts)?.0.is_none())
}

pub fn enumerate_orthogonal(set: &ProductVectorSet, split: &PartySplit) -> Result<OrthogonalSolutionSet> {
    enumerate_orthogonal_with(set, split, SearchOptions::default()).map(|(s, _)| s)
}

pub fn enumerate_orthogonal_with(
    set: &ProductVectorSet,
    split: &PartySplit,
    opts: SearchOptions,
) -> Result<(OrthogonalSolutionSet, SearchStats)> {
    set.require_orthogonal()?;
    let g = group(set, split)?;
    let mut engine = Engine::new(&g, opts)?;
    let leaves = engine.search(false);
    let mut vectors: Vec<Vec<CMatrix>> = Vec::new();
    let mut families: Vec<SolutionFamily> = Vec::new();
    for (masks, _) in leaves {
        let bases: Vec<Vec<CMatrix>> = masks.iter().enumerate().map(|(p, &mask)| engine.nullspace(p, mask)).collect();
        if bases.iter().all(|b| b.len() == 1) {
            let v: Vec<CMatrix> = bases.into_iter().map(|b| b[0].projective_canonical()).collect();
            if !vectors.contains(&v) {
                vectors.push(v);
            }
        } else {
            let f = SolutionFamily { bases };
            if !families.contains(&f) {
                families.push(f);
            }
        }
    }
    vectors.sort_by(|a, b| cmp_parts(a, b));
    Ok((OrthogonalSolutionSet { split: split.clone(), vectors, families }, engine.stats))
}

fn cmp_parts(a: &[CMatrix], b: &[CMatrix]) -> std::cmp::Ordering {
    a.iter().map(CMatrix::entries).cmp(b.iter().map(CMatrix::entries))
}

fn kron_all(parts: &[&CMatrix]) -> CMatrix {
    parts.iter().fold(CMatrix::column(vec![GaussRat::one()]), |acc, v| acc.kron(v))
}

/// Dimension of the span of every solution; a family contributes the
/// tensor product of its party nullspaces.
pub fn solution_span_rank(sol: &OrthogonalSolutionSet) -> usize {
    let mut rows: Vec<Vec<GaussRat>> = Vec::new();
    for v in &sol.vectors {
        let parts: Vec<&CMatrix> = v.iter().collect();
        rows.push(kron_all(&parts).entries().to_vec());
    }
    for f in &sol.families {
        let mut idx = vec![0usize; f.bases.len()];
        loop {
            let parts: Vec<&CMatrix> = idx.iter().enumerate().map(|(p, &i)| &f.bases[p][i]).collect();
            rows.push(kron_all(&parts).entries().to_vec());
            let mut p = 0;
            while p < idx.len() {
                idx[p] += 1;
                if idx[p] < f.bases[p].len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == idx.len() {
                break;
            }
        }
    }
    if rows.is_empty() {
        return 0;
    }
    CMatrix::from_rows(&rows).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ProjQubit;

    fn set(rows: Vec<Vec<ProjQubit>>) -> ProductVectorSet {
        let n = rows[0].len();
        ProductVectorSet::new(n, rows).unwrap()
    }

    #[test]
    fn orthogonality_check() {
        let z = ProjQubit::zero();
        let o = ProjQubit::one();
        let s = set(vec![vec![z.clone(), z.clone(), z.clone(), z.clone()], vec![z.clone(), z.clone(), z.clone(), o]]);
        assert_eq!(check_orthogonality(&s), Orthogonality::Ok);
        let plus = ProjQubit::Finite(GaussRat::one());
        let s = set(vec![vec![z.clone(), z.clone(), z.clone(), z.clone()], vec![z.clone(), z.clone(), z, plus]]);
        assert_eq!(check_orthogonality(&s), Orthogonality::ViolatingPair(1, 2));
    }

    #[test]
    fn computational_basis_is_not_extendible_when_complete() {
        let z = ProjQubit::zero();
        let o = ProjQubit::one();
        let full = set(vec![vec![z.clone(), z.clone()], vec![z.clone(), o.clone()], vec![o.clone(), z.clone()], vec![o.clone(), o.clone()]]);
        assert!(is_upb(&full, &PartySplit::finest(2)).unwrap());
        let part = full.drop_row(4).unwrap();
        let sol = enumerate_orthogonal(&part, &PartySplit::finest(2)).unwrap();
        assert_eq!(sol.count(), Some(1));
        assert_eq!(solution_span_rank(&sol), 1);
    }

    #[test]
    fn empty_party_gives_family() {
        let z = ProjQubit::zero();
        let s = set(vec![vec![z.clone(), z]]);
        let sol = enumerate_orthogonal(&s, &PartySplit::finest(2)).unwrap();
        assert!(!sol.is_finite());
        assert_eq!(solution_span_rank(&sol), 3);
    }

    #[test]
    fn budget_guard() {
        let z = ProjQubit::zero();
        let s = set(vec![vec![z.clone(), z]]);
        let g = group(&s, &PartySplit::finest(2)).unwrap();
        let opts = SearchOptions { budget: 1.0, force: false };
        assert!(matches!(find_extension_with(&g, opts), Err(Error::BudgetExceeded { .. })));
        assert!(find_extension_with(&g, SearchOptions { force: true, ..opts }).is_ok());
    }
}
