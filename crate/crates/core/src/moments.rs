//! Matrices of two-mode operator moments and the entanglement witnesses built
//! from their determinants.
//!
//! Moments are evaluated exactly for the state as given: each single-mode
//! operator word is multiplied out in a Fock space padded by the number of
//! creation operators in the word, so the truncation never clips an
//! intermediate state.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{annihilation_op, BipartiteState, Mode};
use crate::numerics::{det, ComplexMatrix, Complex, HERMITICITY_TOL};

/// `(i1, i2, i3, i4)` index of the general moment hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex4(pub [usize; 4]);

/// `(i1, i2, i3)` index of the normally ordered sub-hierarchies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex3(pub [usize; 3]);

impl MultiIndex4 {
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }
}

impl MultiIndex3 {
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for MultiIndex3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "({a},{b},{c})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    GeneralSv,
    NomA,
    NomB,
    NomAb,
}

impl Ordering {
    pub fn is_normal(self) -> bool {
        !matches!(self, Ordering::GeneralSv)
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Ordering::GeneralSv => "general_sv",
            Ordering::NomA => "nom_a",
            Ordering::NomB => "nom_b",
            Ordering::NomAb => "nom_ab",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexSet {
    Four(Vec<MultiIndex4>),
    Three(Vec<MultiIndex3>),
}

impl IndexSet {
    pub fn len(&self) -> usize {
        match self {
            IndexSet::Four(v) => v.len(),
            IndexSet::Three(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Ordered index list plus the operator ordering it refers to. The list order
/// fixes the row and column order of the moment matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentMatrixSpec {
    ordering: Ordering,
    indices: IndexSet,
}

fn all_distinct<T: Ord + Clone>(items: &[T]) -> bool {
    let mut sorted = items.to_vec();
    sorted.sort();
    sorted.windows(2).all(|w| w[0] != w[1])
}

impl MomentMatrixSpec {
    pub fn general(indices: Vec<MultiIndex4>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSpec("empty index list".into()));
        }
        if !all_distinct(&indices) {
            return Err(Error::InvalidSpec("repeated index".into()));
        }
        Ok(MomentMatrixSpec {
            ordering: Ordering::GeneralSv,
            indices: IndexSet::Four(indices),
        })
    }

    /// Normally ordered spec. `NomAb` indices must have `i2 = 0`: the middle
    /// component carries the anti-normally ordered `b b†` block of the
    /// single-mode form, which the both-modes form drops.
    pub fn nom(ordering: Ordering, indices: Vec<MultiIndex3>) -> Result<Self> {
        if !ordering.is_normal() {
            return Err(Error::InvalidSpec("general ordering needs four-component indices".into()));
        }
        if indices.is_empty() {
            return Err(Error::InvalidSpec("empty index list".into()));
        }
        if !all_distinct(&indices) {
            return Err(Error::InvalidSpec("repeated index".into()));
        }
        if ordering == Ordering::NomAb {
            if let Some(bad) = indices.iter().find(|i| i.0[1] != 0) {
                return Err(Error::InvalidSpec(format!("nom_ab index {bad} must have i2 = 0")));
            }
        }
        Ok(MomentMatrixSpec {
            ordering,
            indices: IndexSet::Three(indices),
        })
    }

    /// Convenience constructor from plain triples.
    pub fn nom_from(ordering: Ordering, triples: &[[usize; 3]]) -> Result<Self> {
        Self::nom(ordering, triples.iter().map(|t| MultiIndex3(*t)).collect())
    }

    /// All admissible indices of degree `<= max_degree`, graded
    /// lexicographic order.
    pub fn graded(ordering: Ordering, max_degree: usize) -> Result<Self> {
        match ordering {
            Ordering::GeneralSv => {
                let mut out = Vec::new();
                for deg in 0..=max_degree {
                    for i1 in 0..=deg {
                        for i2 in 0..=deg - i1 {
                            for i3 in 0..=deg - i1 - i2 {
                                out.push(MultiIndex4([i1, i2, i3, deg - i1 - i2 - i3]));
                            }
                        }
                    }
                }
                Self::general(out)
            }
            _ => {
                let mut out = Vec::new();
                for deg in 0..=max_degree {
                    for i1 in 0..=deg {
                        for i2 in 0..=deg - i1 {
                            if ordering == Ordering::NomAb && i2 != 0 {
                                continue;
                            }
                            out.push(MultiIndex3([i1, i2, deg - i1 - i2]));
                        }
                    }
                }
                Self::nom(ordering, out)
            }
        }
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn indices(&self) -> &IndexSet {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Single ladder factor raised to a power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

/// Matrix of a single-mode word (leftmost factor first) restricted to the
/// lowest `d` levels, computed without truncation error.
fn word_matrix(word: &[Ladder], d: usize) -> ComplexMatrix {
    let headroom: usize = word
        .iter()
        .map(|f| match f {
            Ladder::Create(p) => *p,
            Ladder::Annihilate(_) => 0,
        })
        .sum();
    let big = d + headroom;
    let a = annihilation_op(big);
    let ad = a.adjoint();
    let mut m = ComplexMatrix::identity(big);
    for f in word {
        m = match *f {
            Ladder::Create(p) => m.matmul(&ad.pow(p)),
            Ladder::Annihilate(p) => m.matmul(&a.pow(p)),
        };
    }
    m.block(d, d)
}

/// `Tr[(X_a ⊗ Y_b) ρ]` for single-mode words on each mode.
pub fn moment(state: &BipartiteState, word_a: &[Ladder], word_b: &[Ladder]) -> Complex {
    let dims = state.dims();
    let x = word_matrix(word_a, dims.a);
    let y = word_matrix(word_b, dims.b);
    let rho = state.rho();
    let mut acc = Complex::default();
    for i in 0..dims.a {
        for k in 0..dims.a {
            let xa = x[(i, k)];
            if xa == Complex::default() {
                continue;
            }
            let mut inner = Complex::default();
            for j in 0..dims.b {
                for l in 0..dims.b {
                    let yb = y[(j, l)];
                    if yb != Complex::default() {
                        inner += yb * rho[(dims.index(k, l), dims.index(i, j))];
                    }
                }
            }
            acc += xa * inner;
        }
    }
    acc
}

/// `⟨a†^pa a^qa b†^pb b^qb⟩`.
pub fn normal_moment(state: &BipartiteState, pa: usize, qa: usize, pb: usize, qb: usize) -> Complex {
    moment(
        state,
        &[Ladder::Create(pa), Ladder::Annihilate(qa)],
        &[Ladder::Create(pb), Ladder::Annihilate(qb)],
    )
}

/// General hierarchy element
/// `Tr[a†^{i2} a^{i1} a†^{j1} a^{j2} b†^{j4} b^{j3} b†^{i3} b^{i4} ρ]`.
pub fn sv_element(state: &BipartiteState, i: MultiIndex4, j: MultiIndex4) -> Complex {
    let [i1, i2, i3, i4] = i.0;
    let [j1, j2, j3, j4] = j.0;
    let wa = [
        Ladder::Create(i2),
        Ladder::Annihilate(i1),
        Ladder::Create(j1),
        Ladder::Annihilate(j2),
    ];
    let wb = [
        Ladder::Create(j4),
        Ladder::Annihilate(j3),
        Ladder::Create(i3),
        Ladder::Annihilate(i4),
    ];
    moment(state, &wa, &wb)
}

/// Normally ordered element. For `NomA`:
/// `Tr[a†^{i1} a^{j1} b†^{j3} b^{j2} b†^{i2} b^{i3} ρ]`; `NomB` swaps the
/// roles of the modes; `NomAb` is `Tr[a†^{i1} a^{j1} b†^{j3} b^{i3} ρ]`.
pub fn nom_element(state: &BipartiteState, i: MultiIndex3, j: MultiIndex3, which: Ordering) -> Result<Complex> {
    let [i1, i2, i3] = i.0;
    let [j1, j2, j3] = j.0;
    let normal = [Ladder::Create(i1), Ladder::Annihilate(j1)];
    let mixed = [
        Ladder::Create(j3),
        Ladder::Annihilate(j2),
        Ladder::Create(i2),
        Ladder::Annihilate(i3),
    ];
    match which {
        Ordering::NomA => Ok(moment(state, &normal, &mixed)),
        Ordering::NomB => Ok(moment(state, &mixed, &normal)),
        Ordering::NomAb => {
            if i2 != 0 || j2 != 0 {
                return Err(Error::InvalidSpec("nom_ab indices must have i2 = 0".into()));
            }
            Ok(moment(state, &normal, &[Ladder::Create(j3), Ladder::Annihilate(i3)]))
        }
        Ordering::GeneralSv => Err(Error::WrongOrdering(which.to_string())),
    }
}

/// Moment matrix of `state` for `spec`, checked to be Hermitian.
pub fn build_matrix(state: &BipartiteState, spec: &MomentMatrixSpec) -> Result<ComplexMatrix> {
    let n = spec.len();
    let mut m = ComplexMatrix::zeros(n, n);
    match &spec.indices {
        IndexSet::Four(idx) => {
            for r in 0..n {
                for c in 0..n {
                    m[(r, c)] = sv_element(state, idx[r], idx[c]);
                }
            }
        }
        IndexSet::Three(idx) => {
            for r in 0..n {
                for c in 0..n {
                    m[(r, c)] = nom_element(state, idx[r], idx[c], spec.ordering)?;
                }
            }
        }
    }
    let herm = m.hermiticity_error();
    let scale = m.max_abs().max(1.0);
    if herm > HERMITICITY_TOL * scale {
        return Err(Error::NotHermitianResult(herm));
    }
    Ok(m)
}

/// Diagonal `H` with `M(t) = H·M(0)·H` under vacuum damping of the normally
/// ordered mode(s).
pub fn scaling_matrix(spec: &MomentMatrixSpec, eta_a: f64, eta_b: f64) -> Result<ComplexMatrix> {
    for eta in [eta_a, eta_b] {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::EtaOutOfRange(eta));
        }
    }
    let idx = match (&spec.indices, spec.ordering) {
        (IndexSet::Three(idx), o) if o.is_normal() => idx,
        _ => return Err(Error::WrongOrdering(spec.ordering.to_string())),
    };
    let diag: Vec<f64> = idx
        .iter()
        .map(|MultiIndex3([i1, _, i3])| {
            let (pa, pb) = match spec.ordering {
                Ordering::NomA => (*i1, 0),
                Ordering::NomB => (0, *i1),
                _ => (*i1, *i3),
            };
            eta_a.powf(pa as f64 / 2.0) * eta_b.powf(pb as f64 / 2.0)
        })
        .collect();
    Ok(ComplexMatrix::from_real_diag(&diag))
}

/// First-order Hillery–Zubairy quantities
/// `w1 = |⟨a b†⟩|² − ⟨a†a b†b⟩` and `w2 = |⟨a b⟩|² − ⟨a†a⟩⟨b†b⟩`.
/// A positive value certifies entanglement.
pub fn hz_first_order(state: &BipartiteState) -> (f64, f64) {
    let ab_dag = normal_moment(state, 0, 1, 1, 0);
    let nn = normal_moment(state, 1, 1, 1, 1);
    let ab = normal_moment(state, 0, 1, 0, 1);
    let na = normal_moment(state, 1, 1, 0, 0);
    let nb = normal_moment(state, 0, 0, 1, 1);
    (ab_dag.norm_sqr() - nn.re, ab.norm_sqr() - na.re * nb.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Entangled,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub value: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
}

/// Scale-aware zero test for a determinant of an `n x n` moment matrix.
pub fn default_det_tol(n: usize) -> f64 {
    1e-12 * n as f64
}

/// Determinant witness: entangled iff `det M < -tol`.
pub fn witness_from_det(state: &BipartiteState, spec: &MomentMatrixSpec, tol: f64) -> Result<WitnessReport> {
    let m = build_matrix(state, spec)?;
    let d = det(&m.hermitian_part())?;
    if d.im.abs() > tol + 1e-10 * d.norm() {
        return Err(Error::ImaginaryResidue(d.im));
    }
    let verdict = if d.re < -tol {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    };
    Ok(WitnessReport {
        value: d.re,
        verdict,
        tolerance: tol,
    })
}

/// Named witness specs for qubit states living in the lowest two levels.
pub mod presets {
    use super::*;

    /// `(1,0,0), (0,0,1), (1,0,1)`; normally ordered in both modes.
    pub fn qubit_d1() -> MomentMatrixSpec {
        MomentMatrixSpec::nom_from(Ordering::NomA, &[[1, 0, 0], [0, 0, 1], [1, 0, 1]]).unwrap()
    }

    /// `(0,0,0), (1,0,0), (1,0,1)`; used when `δ = 0`.
    pub fn qubit_d2() -> MomentMatrixSpec {
        MomentMatrixSpec::nom_from(Ordering::NomA, &[[0, 0, 0], [1, 0, 0], [1, 0, 1]]).unwrap()
    }

    /// `(1,0,0), (0,0,1), (1,0,1), (1,1,1)`; normally ordered in mode `a` only.
    pub fn qubit_d3() -> MomentMatrixSpec {
        MomentMatrixSpec::nom_from(Ordering::NomA, &[[1, 0, 0], [0, 0, 1], [1, 0, 1], [1, 1, 1]]).unwrap()
    }

    pub const NAMES: [&str; 3] = ["d1", "d2", "d3"];

    pub fn by_name(name: &str) -> Option<MomentMatrixSpec> {
        match name {
            "d1" => Some(qubit_d1()),
            "d2" => Some(qubit_d2()),
            "d3" => Some(qubit_d3()),
            _ => None,
        }
    }
}

/// Which mode a normally ordered spec protects.
pub fn protected_modes(ordering: Ordering) -> &'static [Mode] {
    match ordering {
        Ordering::NomA => &[Mode::A],
        Ordering::NomB => &[Mode::B],
        Ordering::NomAb => &[Mode::A, Mode::B],
        Ordering::GeneralSv => &[],
    }
}
