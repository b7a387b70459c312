//! Complement states of product sets, partial transposes, and the range
//! criterion for entanglement.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_psd, rat_to_string, CMatrix, GaussRat, Rat};
use crate::product::ProductVectorSet;
use crate::unextend::{enumerate_orthogonal_with, solution_span_rank, PartySplit, SearchOptions};

/// Exact Hermitian matrix of trace one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityMatrix {
    pub dim: usize,
    pub n_qubits: usize,
    pub matrix: CMatrix,
    pub declared_rank: usize,
}

impl DensityMatrix {
    pub fn trace(&self) -> GaussRat {
        self.matrix.trace()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

/// `(I - sum_j |psi_j><psi_j| / <psi_j|psi_j>) / (d - m)`, built from the
/// unnormalized kets so every entry stays a Gaussian rational.
pub fn build_complement_state(set: &ProductVectorSet) -> Result<DensityMatrix> {
    set.require_orthogonal()?;
    let d = set.dim();
    let m = set.len();
    if m >= d {
        return Err(Error::SetTooLarge { rows: m, dim: d });
    }
    let mut acc = CMatrix::identity(d);
    for i in 0..m {
        let v = set.row_vector(i);
        let norm = GaussRat::real(v.inner(&v).re);
        let inv = norm.inv().expect("nonzero ket");
        acc = acc.sub(&v.outer(&v).scale(&inv));
    }
    let scale = GaussRat::real(Rat::new(1.into(), ((d - m) as i64).into()));
    Ok(DensityMatrix { dim: d, n_qubits: set.n_qubits(), matrix: acc.scale(&scale), declared_rank: d - m })
}

/// Transposes the tensor factors of the listed qubits (0-based; qubit 0 is
/// the most significant index bit).
pub fn partial_transpose_qubits(m: &CMatrix, n_qubits: usize, qubits: &[usize]) -> Result<CMatrix> {
    let d = 1usize << n_qubits;
    if m.rows() != d || m.cols() != d {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix on {n_qubits} qubits", m.rows(), m.cols())));
    }
    if let Some(&q) = qubits.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::BadSubset(format!("qubit {q} outside {n_qubits} qubits")));
    }
    let flip: usize = qubits.iter().map(|&q| 1 << (n_qubits - 1 - q)).fold(0, |a, b| a | b);
    let mut out = CMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            let diff = (r ^ c) & flip;
            out.set(r ^ diff, c ^ diff, m.get(r, c).clone());
        }
    }
    Ok(out)
}

/// Partial transpose over the union of the parties listed in `side`
/// (indices into `split`).
pub fn partial_transpose(rho: &DensityMatrix, split: &PartySplit, side: &[usize]) -> Result<CMatrix> {
    if split.n_qubits() != rho.n_qubits {
        return Err(Error::BadSubset(format!("split {split} does not cover {} qubits", rho.n_qubits)));
    }
    let mut qubits = Vec::new();
    for &p in side {
        let party = split.parties().get(p).ok_or_else(|| Error::BadSubset(format!("no party {p} in {split}")))?;
        qubits.extend_from_slice(party);
    }
    partial_transpose_qubits(&rho.matrix, rho.n_qubits, &qubits)
}

/// PSD verdict of the partial transpose for every bipartition of the
/// qubits, keyed like `"A|BCD"`. The side holding qubit `A` is transposed.
pub fn is_ppt_all_cuts(rho: &DensityMatrix, n_qubits: usize) -> Result<BTreeMap<String, bool>> {
    let mut out = BTreeMap::new();
    for cut in PartySplit::bipartitions(n_qubits) {
        let pt = partial_transpose_qubits(&rho.matrix, n_qubits, &cut.parties()[0])?;
        out.insert(cut.label_with("|"), is_psd(&pt)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RangeVerdict {
    /// The range holds at most `d - m - 1` independent product vectors.
    Entangled,
    /// The range criterion says nothing.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntanglementCertificate {
    pub split: PartySplit,
    pub rank: usize,
    /// Exact trace as a rational string.
    pub trace: String,
    pub ppt: BTreeMap<String, bool>,
    /// Product vectors in the range; `None` when infinitely many.
    pub range_product_count: Option<usize>,
    pub range_product_span_rank: usize,
    /// `d - m - 1`.
    pub span_bound: usize,
    pub range_verdict: RangeVerdict,
    pub entangled: bool,
    pub reason: String,
}

impl EntanglementCertificate {
    pub fn is_ppt(&self) -> bool {
        self.ppt.values().all(|&v| v)
    }
}

/// Range criterion: the range of the complement state is the orthogonal
/// complement of the set, so its product vectors are exactly those
/// orthogonal to the set. If they span fewer than `d - m` dimensions the
/// state is entangled; PPT is checked on every qubit bipartition.
pub fn certify(set: &ProductVectorSet, split: &PartySplit) -> Result<EntanglementCertificate> {
    certify_with(set, split, SearchOptions::default())
}

pub fn certify_with(set: &ProductVectorSet, split: &PartySplit, opts: SearchOptions) -> Result<EntanglementCertificate> {
    Ok(certify_splits(set, std::slice::from_ref(split), opts)?.remove(0))
}

/// One certificate per split, sharing the state and its partial transposes.
pub fn certify_splits(
    set: &ProductVectorSet,
    splits: &[PartySplit],
    opts: SearchOptions,
) -> Result<Vec<EntanglementCertificate>> {
    let rho = build_complement_state(set)?;
    let rank = rho.rank();
    let ppt = is_ppt_all_cuts(&rho, set.n_qubits())?;
    let is_ppt = ppt.values().all(|&v| v);
    let trace = rho.trace();
    debug_assert!(trace.im.is_zero());
    let bound = rho.dim - set.len() - 1;
    let mut out = Vec::with_capacity(splits.len());
    for split in splits {
        let (sol, _) = enumerate_orthogonal_with(set, split, opts)?;
        let span = solution_span_rank(&sol);
        let entangled = span <= bound;
        let reason = match (entangled, is_ppt) {
            (true, true) => format!("PPT entangled, rank {rank}"),
            (true, false) => format!("entangled (not PPT), rank {rank}"),
            (false, _) => format!("criterion inconclusive: range product span {span} > {bound}"),
        };
        out.push(EntanglementCertificate {
            split: split.clone(),
            rank,
            trace: rat_to_string(&trace.re),
            ppt: ppt.clone(),
            range_product_count: sol.count(),
            range_product_span_rank: span,
            span_bound: bound,
            range_verdict: if entangled { RangeVerdict::Entangled } else { RangeVerdict::Inconclusive },
            entangled,
            reason,
        });
    }
    Ok(out)
}

/// Whether the two sets have the same number of orthogonal product vectors
/// under `split` (or both infinitely many).
pub fn count_equivalence_check(a: &ProductVectorSet, b: &ProductVectorSet, split: &PartySplit) -> Result<bool> {
    let ca = enumerate_orthogonal_with(a, split, SearchOptions::default())?.0.count();
    let cb = enumerate_orthogonal_with(b, split, SearchOptions::default())?.0.count();
    Ok(ca == cb)
}

/// Whether `(d - m) rho` is idempotent.
pub fn is_scaled_projector(rho: &DensityMatrix) -> bool {
    let scale = GaussRat::real(Rat::from_integer((rho.declared_rank as i64).into()));
    let p = rho.matrix.scale(&scale);
    p.mul(&p) == p
}
