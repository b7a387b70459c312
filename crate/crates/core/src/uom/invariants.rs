use std::collections::BTreeSet;

use serde::Serialize;

use super::label::Label;
use super::spec::UomSpec;

/// Column permutation: new column `k` is old column `perm[k]`.
pub type ColumnPerm = [usize; 4];

/// Per column, the number of independent vector variables. A pair
/// `{x, x'}` counts once, and the constants `0`, `1` (themselves an
/// orthogonal pair) count as one more.
pub fn independent_variable_counts(spec: &UomSpec) -> Vec<usize> {
    (0..spec.cols)
        .map(|c| {
            let classes: BTreeSet<Option<&str>> = spec.column(c).into_iter().map(Label::pair_key).collect();
            classes.len()
        })
        .collect()
}

/// Number of unordered row pairs whose labels agree in both columns `a` and
/// `b` (0-based).
pub fn coincidence_profile(spec: &UomSpec, a: usize, b: usize) -> usize {
    let mut n = 0;
    for i in 0..spec.rows {
        for j in i + 1..spec.rows {
            if spec.grid[i][a] == spec.grid[j][a] && spec.grid[i][b] == spec.grid[j][b] {
                n += 1;
            }
        }
    }
    n
}

/// Coincidence profile of every unordered column pair `(a, b)`, `a < b`, in
/// lexicographic order.
pub fn coincidence_table(spec: &UomSpec) -> Vec<((usize, usize), usize)> {
    let mut out = Vec::new();
    for a in 0..spec.cols {
        for b in a + 1..spec.cols {
            out.push(((a, b), coincidence_profile(spec, a, b)));
        }
    }
    out
}

fn compose(p: &ColumnPerm, q: &ColumnPerm) -> ColumnPerm {
    // (p after q): new[k] = old[q[p[k]]]
    [q[p[0]], q[p[1]], q[p[2]], q[p[3]]]
}

/// Column permutations that keep the cut AB:CD: the group generated by
/// swapping columns 1,2, swapping columns 3,4, and exchanging the two pairs.
pub fn allowed_column_symmetries() -> Vec<ColumnPerm> {
    let gens: [ColumnPerm; 3] = [[1, 0, 2, 3], [0, 1, 3, 2], [2, 3, 0, 1]];
    let mut group: BTreeSet<ColumnPerm> = BTreeSet::from([[0, 1, 2, 3]]);
    loop {
        let mut grown = group.clone();
        for p in &group {
            for g in &gens {
                grown.insert(compose(p, g));
            }
        }
        if grown.len() == group.len() {
            return group.into_iter().collect();
        }
        group = grown;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Feature {
    /// Independent-variable counts differ under every allowed symmetry.
    Counts,
    /// Coincidence tables differ under every allowed symmetry.
    Coincidence,
    /// Each feature alone can be matched, but no single symmetry matches both.
    Joint,
    /// No allowed symmetry, row permutation and per-column relabeling of
    /// pairs `{x, x'}` (constants included) turns one grid into the other.
    Pattern,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    DistinguishedBy(Feature),
    /// No listed feature separates the two; this is not a proof of
    /// equivalence.
    Undistinguished,
}

fn permuted_counts(counts: &[usize], p: &ColumnPerm) -> Vec<usize> {
    p.iter().map(|&k| counts[k]).collect()
}

fn permuted_table(spec: &UomSpec, p: &ColumnPerm) -> Vec<usize> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            out.push(coincidence_profile(spec, p[a], p[b]));
        }
    }
    out
}

/// All features that separate `a` from `b`, in the order counts,
/// coincidence, joint. Both specs must have four columns.
pub fn distinguishing_features(a: &UomSpec, b: &UomSpec) -> Vec<Feature> {
    assert!(a.cols == 4 && b.cols == 4, "inequivalence features are defined for 4-column UOMs");
    let ca = independent_variable_counts(a);
    let cb = independent_variable_counts(b);
    let tb = permuted_table(b, &[0, 1, 2, 3]);
    let syms = allowed_column_symmetries();
    let counts_match: Vec<bool> = syms.iter().map(|p| permuted_counts(&ca, p) == cb).collect();
    let table_match: Vec<bool> = syms.iter().map(|p| permuted_table(a, p) == tb).collect();

    let mut out = Vec::new();
    if !counts_match.iter().any(|&m| m) {
        out.push(Feature::Counts);
    }
    if !table_match.iter().any(|&m| m) {
        out.push(Feature::Coincidence);
    }
    if out.is_empty() && !counts_match.iter().zip(&table_match).any(|(&x, &y)| x && y) {
        out.push(Feature::Joint);
    }
    if a.rows != b.rows || !syms.iter().any(|p| pattern_isomorphic(a, b, p)) {
        out.push(Feature::Pattern);
    }
    out
}

/// A label as (pair key, primed); the constants form the pair with key `None`.
fn split_label(l: &Label) -> (Option<&str>, bool) {
    (l.pair_key(), matches!(l, Label::Const1 | Label::VarPrime(_)))
}

type PairMap<'a> = Vec<(Option<&'a str>, Option<&'a str>, bool)>;

struct Iso<'a> {
    a: &'a UomSpec,
    b: &'a UomSpec,
    perm: &'a ColumnPerm,
    used: Vec<bool>,
    /// Per column of `a`: key in `a` -> (key in `b`, prime flip).
    maps: Vec<PairMap<'a>>,
}

impl<'a> Iso<'a> {
    /// Tries to extend the column maps so that row `ra` of `a` matches row
    /// `rb` of `b`; returns how many entries were pushed per column, or None.
    fn bind(&mut self, ra: usize, rb: usize) -> Option<Vec<usize>> {
        let mut pushed = vec![0; 4];
        for c in 0..4 {
            let (ka, pa) = split_label(&self.a.grid[ra][self.perm[c]]);
            let (kb, pb) = split_label(&self.b.grid[rb][c]);
            let map = &self.maps[c];
            let found_a = map.iter().find(|e| e.0 == ka);
            let found_b = map.iter().find(|e| e.1 == kb);
            let ok = match (found_a, found_b) {
                (Some(e), _) => e.1 == kb && e.2 == (pa != pb),
                (None, Some(_)) => false,
                (None, None) => {
                    self.maps[c].push((ka, kb, pa != pb));
                    pushed[c] = 1;
                    true
                }
            };
            if !ok {
                self.unbind(&pushed);
                return None;
            }
        }
        Some(pushed)
    }

    fn unbind(&mut self, pushed: &[usize]) {
        for (c, &n) in pushed.iter().enumerate() {
            let len = self.maps[c].len();
            self.maps[c].truncate(len - n);
        }
    }

    fn search(&mut self, ra: usize) -> bool {
        if ra == self.a.rows {
            return true;
        }
        for rb in 0..self.b.rows {
            if self.used[rb] {
                continue;
            }
            if let Some(pushed) = self.bind(ra, rb) {
                self.used[rb] = true;
                if self.search(ra + 1) {
                    return true;
                }
                self.used[rb] = false;
                self.unbind(&pushed);
            }
        }
        false
    }
}

/// Whether `a` with columns permuted by `perm` becomes `b` after permuting
/// rows and relabeling each column's pairs `{x, x'}` bijectively.
pub fn pattern_isomorphic(a: &UomSpec, b: &UomSpec, perm: &ColumnPerm) -> bool {
    if a.rows != b.rows || a.cols != 4 || b.cols != 4 {
        return false;
    }
    let mut iso = Iso { a, b, perm, used: vec![false; b.rows], maps: vec![Vec::new(); 4] };
    iso.search(0)
}

pub fn inequivalence_report(a: &UomSpec, b: &UomSpec) -> Verdict {
    match distinguishing_features(a, b).first() {
        Some(&f) => Verdict::DistinguishedBy(f),
        None => Verdict::Undistinguished,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetry_group_has_eight_elements() {
        let g = allowed_column_symmetries();
        assert_eq!(g.len(), 8);
        assert!(g.contains(&[0, 1, 2, 3]));
        assert!(g.contains(&[1, 0, 3, 2]));
        assert!(g.contains(&[2, 3, 1, 0]));
        assert!(!g.contains(&[0, 2, 1, 3]));
    }
}
