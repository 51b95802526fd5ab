//! Truncated Fock spaces of two bosonic modes `a` and `b`.
//!
//! Basis convention: mode `a` is the slow (leftmost) tensor factor, so the
//! two-mode number state `|i_a, i_b⟩` has index `i_a·d_b + i_b`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c, cr, kron, Complex, ComplexMatrix, HERMITICITY_TOL};

pub const TRACE_TOL: f64 = 1e-10;
pub const QUBIT_NORM_TOL: f64 = 1e-12;
/// Minimum fraction of the coherent-state norm a truncation must keep.
pub const COHERENT_MIN_NORM: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
}

impl Mode {
    pub fn other(self) -> Mode {
        match self {
            Mode::A => Mode::B,
            Mode::B => Mode::A,
        }
    }
}

/// Fock truncations of the two modes (states `|0⟩ … |d-1⟩`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeDims {
    pub a: usize,
    pub b: usize,
}

impl ModeDims {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::DimensionMismatch(format!(
                "mode truncations must be positive, got ({a}, {b})"
            )));
        }
        Ok(ModeDims { a, b })
    }

    pub fn qubits() -> Self {
        ModeDims { a: 2, b: 2 }
    }

    pub fn total(&self) -> usize {
        self.a * self.b
    }

    pub fn of(&self, mode: Mode) -> usize {
        match mode {
            Mode::A => self.a,
            Mode::B => self.b,
        }
    }

    pub fn with(&self, mode: Mode, d: usize) -> Self {
        match mode {
            Mode::A => ModeDims { a: d, b: self.b },
            Mode::B => ModeDims { a: self.a, b: d },
        }
    }

    #[inline]
    pub fn index(&self, ia: usize, ib: usize) -> usize {
        ia * self.b + ib
    }
}

/// Annihilation operator on `d` Fock levels: `a|n⟩ = √n |n-1⟩`.
pub fn annihilation_op(d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = cr((n as f64).sqrt());
    }
    m
}

pub fn creation_op(d: usize) -> ComplexMatrix {
    annihilation_op(d).adjoint()
}

pub fn number_op(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&(0..d).map(|n| n as f64).collect::<Vec<_>>())
}

/// Lifts a single-mode operator to the two-mode space (`op⊗I` or `I⊗op`).
pub fn embed_op(op: &ComplexMatrix, mode: Mode, dims: ModeDims) -> Result<ComplexMatrix> {
    let d = dims.of(mode);
    if op.rows() != d || op.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "{mode:?}-mode operator is {}x{}, mode truncation is {d}",
            op.rows(),
            op.cols()
        )));
    }
    Ok(match mode {
        Mode::A => kron(op, &ComplexMatrix::identity(dims.b)),
        Mode::B => kron(&ComplexMatrix::identity(dims.a), op),
    })
}

/// `(op on mode)·m` for any `m` with `dims.total()` rows, without building
/// the embedded operator.
pub fn left_local(op: &ComplexMatrix, mode: Mode, dims: ModeDims, m: &ComplexMatrix) -> ComplexMatrix {
    let n = dims.total();
    assert_eq!(m.rows(), n);
    let cols = m.cols();
    let mut out = ComplexMatrix::zeros(n, cols);
    for ia in 0..dims.a {
        for ib in 0..dims.b {
            let row = dims.index(ia, ib);
            let (i, d) = match mode {
                Mode::A => (ia, dims.a),
                Mode::B => (ib, dims.b),
            };
            for k in 0..d {
                let w = op[(i, k)];
                if w == Complex::default() {
                    continue;
                }
                let src = match mode {
                    Mode::A => dims.index(k, ib),
                    Mode::B => dims.index(ia, k),
                };
                for col in 0..cols {
                    out[(row, col)] += w * m[(src, col)];
                }
            }
        }
    }
    out
}

/// `m·(op on mode)†`.
pub fn right_local_adjoint(m: &ComplexMatrix, op: &ComplexMatrix, mode: Mode, dims: ModeDims) -> ComplexMatrix {
    left_local(op, mode, dims, &m.adjoint()).adjoint()
}

/// `(K on mode)·ρ·(K on mode)†`.
pub fn conjugate_local(op: &ComplexMatrix, mode: Mode, dims: ModeDims, rho: &ComplexMatrix) -> ComplexMatrix {
    right_local_adjoint(&left_local(op, mode, dims, rho), op, mode, dims)
}

/// Truncated coherent state `|α⟩`, renormalized after truncation.
pub fn coherent_state(alpha: Complex, d: usize) -> Result<Vec<Complex>> {
    if d == 0 {
        return Err(Error::DimensionMismatch("coherent state needs d >= 1".into()));
    }
    let mut amps = Vec::with_capacity(d);
    let mut term = cr((-alpha.norm_sqr() / 2.0).exp());
    for n in 0..d {
        if n > 0 {
            term = term * alpha / (n as f64).sqrt();
        }
        amps.push(term);
    }
    let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if norm_sqr < COHERENT_MIN_NORM {
        return Err(Error::TruncationTooLossy { kept: norm_sqr });
    }
    let norm = norm_sqr.sqrt();
    Ok(amps.into_iter().map(|z| z / norm).collect())
}

/// Haar-random pure vector of dimension `d` (normalized complex Gaussian).
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex> {
    loop {
        let v: Vec<Complex> = (0..d)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Two-mode density matrix. Hermitian with unit trace; positivity is not
/// enforced because the inverse damping map may leave the physical set.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    rho: ComplexMatrix,
    dims: ModeDims,
}

impl BipartiteState {
    pub fn new(rho: ComplexMatrix, dims: ModeDims) -> Result<Self> {
        let n = dims.total();
        if rho.rows() != n || rho.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "density matrix is {}x{}, dims {}x{} need {n}x{n}",
                rho.rows(),
                rho.cols(),
                dims.a,
                dims.b
            )));
        }
        let herm = rho.hermiticity_error();
        if herm > HERMITICITY_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = rho.trace();
        if (tr - cr(1.0)).norm() > TRACE_TOL {
            return Err(Error::TraceError(tr.re));
        }
        Ok(BipartiteState { rho, dims })
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dims(&self) -> ModeDims {
        self.dims
    }

    pub fn into_rho(self) -> ComplexMatrix {
        self.rho
    }

    /// `|i_a, i_b⟩⟨i_a, i_b|`.
    pub fn number_state(ia: usize, ib: usize, dims: ModeDims) -> Result<Self> {
        if ia >= dims.a || ib >= dims.b {
            return Err(Error::DimensionMismatch(format!(
                "|{ia},{ib}⟩ outside truncation ({}, {})",
                dims.a, dims.b
            )));
        }
        let mut psi = vec![Complex::default(); dims.total()];
        psi[dims.index(ia, ib)] = cr(1.0);
        pure_to_state(&psi, dims)
    }

    pub fn vacuum(dims: ModeDims) -> Self {
        Self::number_state(0, 0, dims).expect("vacuum is inside any truncation")
    }

    /// `ρ_a ⊗ ρ_b` for unit-trace Hermitian factors.
    pub fn product(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<Self> {
        let dims = ModeDims::new(rho_a.rows(), rho_b.rows())?;
        Self::new(kron(rho_a, rho_b), dims)
    }

    /// Zero-pads the state into larger truncations.
    pub fn embed(&self, dims: ModeDims) -> Result<Self> {
        if dims.a < self.dims.a || dims.b < self.dims.b {
            return Err(Error::DimensionMismatch(format!(
                "cannot embed ({}, {}) into smaller ({}, {})",
                self.dims.a, self.dims.b, dims.a, dims.b
            )));
        }
        let old = self.dims;
        let mut rho = ComplexMatrix::zeros(dims.total(), dims.total());
        for ia in 0..old.a {
            for ib in 0..old.b {
                for ka in 0..old.a {
                    for kb in 0..old.b {
                        rho[(dims.index(ia, ib), dims.index(ka, kb))] =
                            self.rho[(old.index(ia, ib), old.index(ka, kb))];
                    }
                }
            }
        }
        Ok(BipartiteState { rho, dims })
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.rho.trace_product(&self.rho).re
    }

    /// Trace distance `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch("trace distance of states with different dims".into()));
        }
        let diff = &self.rho - &other.rho;
        let eig = crate::numerics::herm_eigvals(&diff)?;
        Ok(0.5 * eig.iter().map(|v| v.abs()).sum::<f64>())
    }

    /// Expectation value `Tr(Oρ)` of a full two-mode operator.
    pub fn expect(&self, op: &ComplexMatrix) -> Complex {
        op.trace_product(&self.rho)
    }

    /// Wraps a matrix produced by a trace- and Hermiticity-preserving map.
    pub(crate) fn from_map_output(rho: ComplexMatrix, dims: ModeDims) -> Self {
        debug_assert_eq!(rho.rows(), dims.total());
        BipartiteState { rho, dims }
    }
}

/// `|ψ⟩⟨ψ|` for a unit-norm two-mode vector.
pub fn pure_to_state(psi: &[Complex], dims: ModeDims) -> Result<BipartiteState> {
    if psi.len() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for dims ({}, {})",
            psi.len(),
            dims.a,
            dims.b
        )));
    }
    let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > TRACE_TOL {
        return Err(Error::NormError(norm_sqr.sqrt()));
    }
    Ok(BipartiteState {
        rho: ComplexMatrix::outer(psi, psi),
        dims,
    })
}

/// Two-mode cat state `∝ |α_a, α_b⟩ + sign·|−α_a, −α_b⟩` in `d × d` levels.
pub fn two_mode_cat(alpha_a: Complex, alpha_b: Complex, sign: f64, d: usize) -> Result<BipartiteState> {
    let (pa, ma) = (coherent_state(alpha_a, d)?, coherent_state(-alpha_a, d)?);
    let (pb, mb) = (coherent_state(alpha_b, d)?, coherent_state(-alpha_b, d)?);
    let mut psi: Vec<Complex> = (0..d * d)
        .map(|k| pa[k / d] * pb[k % d] + ma[k / d] * mb[k % d] * sign)
        .collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm.is_nan() || norm <= 1e-12 {
        return Err(Error::NormError(norm));
    }
    psi.iter_mut().for_each(|z| *z /= norm);
    pure_to_state(&psi, ModeDims::new(d, d)?)
}

/// Reduced density matrix of the kept mode.
pub fn partial_trace(state: &BipartiteState, keep: Mode) -> ComplexMatrix {
    let dims = state.dims;
    let rho = &state.rho;
    match keep {
        Mode::A => ComplexMatrix::from_fn(dims.a, dims.a, |i, k| {
            (0..dims.b).map(|j| rho[(dims.index(i, j), dims.index(k, j))]).sum()
        }),
        Mode::B => ComplexMatrix::from_fn(dims.b, dims.b, |j, l| {
            (0..dims.a).map(|i| rho[(dims.index(i, j), dims.index(i, l))]).sum()
        }),
    }
}

/// Pure two-qubit state `α|00⟩ + β|01⟩ + γ|10⟩ + δ|11⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitPure {
    pub alpha: Complex,
    pub beta: Complex,
    pub gamma: Complex,
    pub delta: Complex,
}

impl QubitPure {
    pub fn new(alpha: Complex, beta: Complex, gamma: Complex, delta: Complex) -> Result<Self> {
        let q = QubitPure { alpha, beta, gamma, delta };
        let norm_sqr = q.norm_sqr();
        if (norm_sqr - 1.0).abs() > QUBIT_NORM_TOL {
            return Err(Error::NormError(norm_sqr.sqrt()));
        }
        Ok(q)
    }

    /// Scales the amplitudes to unit norm.
    pub fn normalized(alpha: Complex, beta: Complex, gamma: Complex, delta: Complex) -> Result<Self> {
        let raw = QubitPure { alpha, beta, gamma, delta };
        let norm = raw.norm_sqr().sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::NormError(norm));
        }
        Self::new(alpha / norm, beta / norm, gamma / norm, delta / norm)
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        QubitPure {
            alpha: cr(h),
            beta: cr(0.0),
            gamma: cr(0.0),
            delta: cr(h),
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let v = haar_vector(rng, 4);
        QubitPure {
            alpha: v[0],
            beta: v[1],
            gamma: v[2],
            delta: v[3],
        }
    }

    fn norm_sqr(&self) -> f64 {
        self.to_vector().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn to_vector(&self) -> [Complex; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    /// `|αδ − βγ|`.
    pub fn invariant(&self) -> f64 {
        (self.alpha * self.delta - self.beta * self.gamma).norm()
    }

    /// `2|αδ − βγ|`.
    pub fn concurrence(&self) -> f64 {
        2.0 * self.invariant()
    }

    pub fn to_state(&self) -> BipartiteState {
        pure_to_state(&self.to_vector(), ModeDims::qubits()).expect("QubitPure is normalized")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bell_state() -> BipartiteState {
        QubitPure::bell().to_state()
    }

    #[test]
    fn annihilation_examples() {
        assert_eq!(annihilation_op(1), ComplexMatrix::zeros(1, 1));
        let a = annihilation_op(3);
        let mut want = ComplexMatrix::zeros(3, 3);
        want[(0, 1)] = cr(1.0);
        want[(1, 2)] = cr(2f64.sqrt());
        assert_eq!(a, want);

        let a4 = annihilation_op(4);
        let n = &a4.adjoint() * &a4;
        assert!(n.max_abs_diff(&ComplexMatrix::from_real_diag(&[0.0, 1.0, 2.0, 3.0])) < 1e-15);
    }

    #[test]
    fn truncated_commutator_corner() {
        for d in 1..=8 {
            let a = annihilation_op(d);
            let ad = a.adjoint();
            let comm = &(&a * &ad) - &(&ad * &a);
            let mut want = ComplexMatrix::identity(d);
            want[(d - 1, d - 1)] = cr(-((d - 1) as f64));
            assert!(comm.max_abs_diff(&want) < 1e-14, "d = {d}");
        }
    }

    #[test]
    fn embed_examples() {
        let dims = ModeDims::new(2, 3).unwrap();
        assert_eq!(embed_op(&ComplexMatrix::identity(2), Mode::A, dims).unwrap(), ComplexMatrix::identity(6));

        let d22 = ModeDims::qubits();
        let a = embed_op(&annihilation_op(2), Mode::A, d22).unwrap();
        let mut ket10 = vec![cr(0.0); 4];
        ket10[d22.index(1, 0)] = cr(1.0);
        let out = a.mat_vec(&ket10);
        assert_eq!(out, vec![cr(1.0), cr(0.0), cr(0.0), cr(0.0)]);

        let nb = embed_op(&number_op(2), Mode::B, d22).unwrap();
        assert_eq!(nb, ComplexMatrix::from_real_diag(&[0.0, 1.0, 0.0, 1.0]));

        assert!(matches!(
            embed_op(&ComplexMatrix::identity(3), Mode::A, d22),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn local_products_match_embedding() {
        let dims = ModeDims::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = haar_vector(&mut rng, 6);
        let rho = ComplexMatrix::outer(&v, &v);
        for mode in [Mode::A, Mode::B] {
            let d = dims.of(mode);
            let k = ComplexMatrix::from_fn(d, d, |i, j| c(0.3 * i as f64 - 0.1, 0.2 * j as f64 + 0.05));
            let full = embed_op(&k, mode, dims).unwrap();
            let want = &(&full * &rho) * &full.adjoint();
            assert!(conjugate_local(&k, mode, dims, &rho).max_abs_diff(&want) < 1e-15);
        }
    }

    #[test]
    fn coherent_examples() {
        let vac = coherent_state(cr(0.0), 5).unwrap();
        assert_eq!(vac[0], cr(1.0));
        assert!(vac[1..].iter().all(|z| *z == cr(0.0)));

        let psi = coherent_state(cr(1.0), 16).unwrap();
        let n = number_op(16).mat_vec(&psi);
        let mean: Complex = psi.iter().zip(&n).map(|(x, y)| x.conj() * y).sum();
        assert!((mean.re - 1.0).abs() < 1e-6);

        let psi = coherent_state(cr(0.5), 12).unwrap();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);

        assert!(matches!(coherent_state(cr(2.0), 3), Err(Error::TruncationTooLossy { .. })));
    }

    #[test]
    fn pure_state_examples() {
        let dims = ModeDims::qubits();
        let s = pure_to_state(&[cr(1.0), cr(0.0), cr(0.0), cr(0.0)], dims).unwrap();
        assert_eq!(s.rho()[(0, 0)], cr(1.0));
        assert_eq!(s.rho().as_slice().iter().filter(|z| **z != cr(0.0)).count(), 1);

        let b = bell_state();
        assert!((b.rho().trace().re - 1.0).abs() < 1e-15);
        assert!((b.purity() - 1.0).abs() < 1e-15);

        let q = QubitPure::normalized(c(0.3, 0.1), c(-0.2, 0.5), c(0.4, 0.0), c(0.1, -0.6)).unwrap();
        let rho = q.to_state();
        let amps = q.to_vector();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(rho.rho()[(i, j)], amps[i] * amps[j].conj());
            }
        }

        assert!(matches!(
            pure_to_state(&[cr(1.0), cr(1.0), cr(0.0), cr(0.0)], dims),
            Err(Error::NormError(_))
        ));
        assert!(matches!(pure_to_state(&[cr(1.0)], dims), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn qubit_pure_validation() {
        assert!(QubitPure::new(cr(1.0), cr(0.0), cr(0.0), cr(1e-3)).is_err());
        assert!(QubitPure::normalized(cr(0.0), cr(0.0), cr(0.0), cr(0.0)).is_err());
        assert!((QubitPure::bell().concurrence() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let rho_a = ComplexMatrix::from_rows(&[vec![cr(0.7), c(0.1, 0.2)], vec![c(0.1, -0.2), cr(0.3)]]).unwrap();
        let rho_b = ComplexMatrix::from_real_diag(&[0.2, 0.5, 0.3]);
        let s = BipartiteState::product(&rho_a, &rho_b).unwrap();
        assert!(partial_trace(&s, Mode::A).max_abs_diff(&rho_a) < 1e-15);
        assert!(partial_trace(&s, Mode::B).max_abs_diff(&rho_b) < 1e-15);

        // Bell: brute-force contraction against I/2
        let b = bell_state();
        let mut brute = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for k in 0..2 {
                for j in 0..2 {
                    brute[(i, k)] += b.rho()[(2 * i + j, 2 * k + j)];
                }
            }
        }
        assert_eq!(partial_trace(&b, Mode::A), brute);
        assert!(brute.max_abs_diff(&ComplexMatrix::identity(2).scale(cr(0.5))) < 1e-15);
    }

    #[test]
    fn state_validation() {
        let dims = ModeDims::qubits();
        assert!(matches!(
            BipartiteState::new(ComplexMatrix::identity(4), dims),
            Err(Error::TraceError(_))
        ));
        let mut m = ComplexMatrix::identity(4).scale(cr(0.25));
        m[(0, 1)] = cr(0.1);
        assert!(matches!(BipartiteState::new(m, dims), Err(Error::NotHermitian(_))));
        assert!(matches!(
            BipartiteState::new(ComplexMatrix::identity(3), dims),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(ModeDims::new(0, 2).is_err());
    }

    #[test]
    fn embedding_preserves_matrix_elements() {
        let b = bell_state();
        let big = b.embed(ModeDims::new(4, 3).unwrap()).unwrap();
        let d = big.dims();
        assert_eq!(big.rho()[(d.index(1, 1), d.index(0, 0))], b.rho()[(3, 0)]);
        assert!((big.rho().trace().re - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn different_modes_commute(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dims = ModeDims::new(da, db).unwrap();
            let x = ComplexMatrix::from_fn(da, da, |_, _| c(rng.random(), rng.random()));
            let y = ComplexMatrix::from_fn(db, db, |_, _| c(rng.random(), rng.random()));
            let xa = embed_op(&x, Mode::A, dims).unwrap();
            let yb = embed_op(&y, Mode::B, dims).unwrap();
            prop_assert!((&xa * &yb).max_abs_diff(&(&yb * &xa)) < 1e-14);
        }

        #[test]
        fn partial_trace_of_product_is_exact(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = haar_vector(&mut rng, da);
            let v = haar_vector(&mut rng, db);
            let rho_a = ComplexMatrix::outer(&u, &u);
            let rho_b = ComplexMatrix::outer(&v, &v);
            let s = BipartiteState::product(&rho_a, &rho_b).unwrap();
            prop_assert!(partial_trace(&s, Mode::A).max_abs_diff(&rho_a) < 1e-15);
            let tr = partial_trace(&s, Mode::B).trace();
            prop_assert!((tr.re - 1.0).abs() < 1e-14);
        }
    }
}
