//! Passive damping of one mode into a bath mode `r`.
//!
//! The forward channel is available both as a Kraus sum and through an
//! explicit beam-splitter dilation `Tr_r[U (ρ ⊗ σ_r) U†]`; the vacuum-bath
//! channel also has an exact (non-positive) inverse on the truncated space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{annihilation_op, coherent_state, conjugate_local, BipartiteState, Mode, ModeDims};
use crate::numerics::{cr, herm_eigvals, kron, matrix_exp, Complex, ComplexMatrix};

/// Default tolerance for [`is_physical`].
pub const DEFAULT_PHYSICAL_EPS: f64 = 1e-10;

/// Amplitude headroom applied to the bath coherent state when checking that
/// the bath truncation is large enough.
pub const BATH_HEADROOM: f64 = 1.5;

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) || eta.is_nan() {
        return Err(Error::EtaOutOfRange(eta));
    }
    Ok(())
}

/// Vacuum-bath damping of one mode with coupling `eta` (1 = untouched).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DampingChannel {
    pub eta: f64,
    pub phi: f64,
    pub mode: Mode,
    /// Highest Kraus index kept; `None` keeps `d - 1`, which is exact.
    pub n_max: Option<usize>,
}

impl DampingChannel {
    pub fn new(eta: f64, phi: f64, mode: Mode) -> Result<Self> {
        check_eta(eta)?;
        Ok(DampingChannel {
            eta,
            phi,
            mode,
            n_max: None,
        })
    }

    pub fn with_cutoff(mut self, n_max: usize) -> Self {
        self.n_max = Some(n_max);
        self
    }

    pub fn kraus(&self, d: usize) -> Result<KrausSet> {
        let mut set = damping_kraus(self.eta, self.phi, d)?;
        if let Some(n_max) = self.n_max {
            set.ops.truncate(n_max + 1);
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    pub ops: Vec<ComplexMatrix>,
}

impl KrausSet {
    /// `Σ K†K`.
    pub fn completeness(&self) -> ComplexMatrix {
        let d = self.ops[0].rows();
        self.ops
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, k| &acc + &(&k.adjoint() * k))
    }

    /// Max-abs deviation of `Σ K†K` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let d = self.ops[0].rows();
        self.completeness().max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// Kraus sum on one mode of a two-mode density matrix.
    pub fn apply(&self, rho: &ComplexMatrix, mode: Mode, dims: ModeDims) -> ComplexMatrix {
        self.ops
            .iter()
            .fold(ComplexMatrix::zeros(rho.rows(), rho.cols()), |acc, k| {
                &acc + &conjugate_local(k, mode, dims, rho)
            })
    }
}

fn binomial(m: usize, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (m - k) as f64 / (k + 1) as f64)
}

/// Kraus operators `K_0 … K_{d-1}` of the damping channel on `d` levels:
/// `⟨m-n|K_n|m⟩ = √C(m,n) η^{(m-n)/2} (1-η)^{n/2} e^{inφ}`.
pub fn damping_kraus(eta: f64, phi: f64, d: usize) -> Result<KrausSet> {
    check_eta(eta)?;
    let ops = (0..d)
        .map(|n| {
            let mut k = ComplexMatrix::zeros(d, d);
            let phase = Complex::from_polar(1.0, n as f64 * phi);
            for m in n..d {
                let amp = binomial(m, n).sqrt() * eta.powf((m - n) as f64 / 2.0) * (1.0 - eta).powf(n as f64 / 2.0);
                k[(m - n, m)] = phase * amp;
            }
            k
        })
        .collect();
    Ok(KrausSet { ops })
}

/// Forward damping channel on `ch.mode`.
pub fn apply_channel(state: &BipartiteState, ch: &DampingChannel) -> Result<BipartiteState> {
    let dims = state.dims();
    let kraus = ch.kraus(dims.of(ch.mode))?;
    let rho = kraus.apply(state.rho(), ch.mode, dims);
    Ok(BipartiteState::from_map_output(rho, dims))
}

/// Damps both modes with their own couplings (`phi = 0`).
pub fn apply_two_sided(state: &BipartiteState, eta_a: f64, eta_b: f64) -> Result<BipartiteState> {
    let once = apply_channel(state, &DampingChannel::new(eta_a, 0.0, Mode::A)?)?;
    apply_channel(&once, &DampingChannel::new(eta_b, 0.0, Mode::B)?)
}

/// Beam-splitter unitary on `system ⊗ bath` (system index slow) with
/// `U† a U = √η a + √(1-η) e^{iφ} r`.
///
/// `U = exp(θ (e^{iφ} a†r − e^{-iφ} a r†))` with `cos θ = √η`. The generator
/// conserves total photon number, so blocks with `N < min(d_sys, d_env)` are
/// exact despite the truncation.
pub fn beam_splitter_unitary(eta: f64, phi: f64, d_sys: usize, d_env: usize) -> Result<ComplexMatrix> {
    check_eta(eta)?;
    if eta == 0.0 {
        return Err(Error::EtaOutOfRange(eta));
    }
    let theta = eta.sqrt().acos();
    let a = annihilation_op(d_sys);
    let r = annihilation_op(d_env);
    let forward = kron(&a.adjoint(), &r).scale(Complex::from_polar(theta, phi));
    let generator = &forward - &forward.adjoint();
    matrix_exp(&generator)
}

/// Bath-induced operators `E_n = ⟨n|_r U |env⟩_r` on the system mode.
fn bath_kraus(u: &ComplexMatrix, env: &[Complex], d_sys: usize, d_env: usize) -> KrausSet {
    let ops = (0..d_env)
        .map(|n| {
            ComplexMatrix::from_fn(d_sys, d_sys, |i, k| {
                env.iter()
                    .enumerate()
                    .map(|(m, amp)| u[(i * d_env + n, k * d_env + m)] * amp)
                    .sum()
            })
        })
        .collect();
    KrausSet { ops }
}

/// `Tr_r[U (ρ ⊗ |env⟩⟨env|) U†]` on `mode`.
pub fn dilation_evolve(
    state: &BipartiteState,
    eta: f64,
    phi: f64,
    env: &[Complex],
    mode: Mode,
) -> Result<BipartiteState> {
    let dims = state.dims();
    let d_sys = dims.of(mode);
    let d_env = env.len();
    let u = beam_splitter_unitary(eta, phi, d_sys, d_env)?;
    let rho = bath_kraus(&u, env, d_sys, d_env).apply(state.rho(), mode, dims);
    Ok(BipartiteState::from_map_output(rho, dims))
}

/// Damping into a bath mode prepared in the coherent state `|α⟩`.
pub fn coherent_bath_evolve(
    state: &BipartiteState,
    eta: f64,
    phi: f64,
    alpha: Complex,
    d_env: usize,
    mode: Mode,
) -> Result<BipartiteState> {
    check_eta(eta)?;
    coherent_state(alpha * BATH_HEADROOM, d_env)?;
    let env = coherent_state(alpha, d_env)?;
    dilation_evolve(state, eta, phi, &env, mode)
}

/// Displacement `D(β) = exp(β a† − β* a)` on `d` levels.
pub fn displacement_op(beta: Complex, d: usize) -> ComplexMatrix {
    let a = annihilation_op(d);
    let gen = &a.adjoint().scale(beta) - &a.scale(beta.conj());
    matrix_exp(&gen).expect("generator is square")
}

/// Local displacement that relates the coherent-bath output to the vacuum-bath
/// output under the convention of [`beam_splitter_unitary`]:
/// `ρ_coh = D(β) ρ_vac D(β)†` with `β = α e^{iφ} √(1-η)`.
pub fn bath_displacement(eta: f64, phi: f64, alpha: Complex) -> Complex {
    alpha * Complex::from_polar((1.0 - eta).sqrt(), phi)
}

/// Applies `D(β)` to one mode of the state (truncated displacement).
pub fn displace(state: &BipartiteState, beta: Complex, mode: Mode) -> BipartiteState {
    let dims = state.dims();
    let d = displacement_op(beta, dims.of(mode));
    BipartiteState::from_map_output(conjugate_local(&d, mode, dims, state.rho()), dims)
}

/// Formal inverse of the vacuum damping channel,
/// `ρ_in = Σ (-1)^n L_n ρ_out L_n†` with
/// `L_n = η^{-a†a/2} (a √(1-η) e^{iφ}/√η)^n / √n!`.
///
/// The series terminates at `n = d - 1`. The output is Hermitian with unit
/// trace but may have negative eigenvalues.
pub fn inverse_damping(state: &BipartiteState, eta: f64, phi: f64, mode: Mode) -> Result<BipartiteState> {
    check_eta(eta)?;
    if eta == 0.0 {
        return Err(Error::EtaZero);
    }
    let dims = state.dims();
    let d = dims.of(mode);
    let mut acc = ComplexMatrix::zeros(dims.total(), dims.total());
    for n in 0..d {
        let mut l = ComplexMatrix::zeros(d, d);
        let phase = Complex::from_polar(1.0, n as f64 * phi);
        for m in n..d {
            // η^{-(m-n)/2} · ((1-η)/η)^{n/2} = η^{-m/2} (1-η)^{n/2}
            let amp = binomial(m, n).sqrt() * eta.powf(-(m as f64) / 2.0) * (1.0 - eta).powf(n as f64 / 2.0);
            l[(m - n, m)] = phase * amp;
        }
        let term = conjugate_local(&l, mode, dims, state.rho());
        let sign = if n % 2 == 0 { cr(1.0) } else { cr(-1.0) };
        acc = &acc + &term.scale(sign);
    }
    Ok(BipartiteState::from_map_output(acc, dims))
}

/// Inverse damping on both modes.
pub fn inverse_two_sided(state: &BipartiteState, eta: f64, phi: f64) -> Result<BipartiteState> {
    let once = inverse_damping(state, eta, phi, Mode::A)?;
    inverse_damping(&once, eta, phi, Mode::B)
}

/// Positivity check; returns the verdict and the minimum eigenvalue.
pub fn is_physical(state: &BipartiteState, eps: f64) -> (bool, f64) {
    let min = herm_eigvals(state.rho())
        .expect("state matrices are Hermitian")
        .first()
        .copied()
        .unwrap_or(0.0);
    (min >= -eps, min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;
    use crate::fock::{haar_vector, partial_trace, pure_to_state, QubitPure};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_mixed(seed: u64, dims: ModeDims, rank: usize) -> BipartiteState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = dims.total();
        let mut rho = ComplexMatrix::zeros(n, n);
        let weights: Vec<f64> = (0..rank).map(|k| 1.0 + k as f64).collect();
        let total: f64 = weights.iter().sum();
        for w in weights {
            let v = haar_vector(&mut rng, n);
            rho = &rho + &ComplexMatrix::outer(&v, &v).scale(cr(w / total));
        }
        BipartiteState::new(rho.hermitian_part(), dims).unwrap()
    }

    #[test]
    fn kraus_identity_at_eta_one() {
        let k = damping_kraus(1.0, 0.4, 4).unwrap();
        assert_eq!(k.ops[0], ComplexMatrix::identity(4));
        assert!(k.ops[1..].iter().all(|op| op.max_abs() == 0.0));
    }

    #[test]
    fn kraus_full_loss_qubit() {
        let k = damping_kraus(0.0, 0.0, 2).unwrap();
        let mut k0 = ComplexMatrix::zeros(2, 2);
        k0[(0, 0)] = cr(1.0);
        let mut k1 = ComplexMatrix::zeros(2, 2);
        k1[(0, 1)] = cr(1.0);
        assert_eq!(k.ops, vec![k0, k1]);
    }

    #[test]
    fn kraus_qubit_matches_closed_matrices() {
        let (eta, phi) = (0.37, 0.9);
        let k = damping_kraus(eta, phi, 2).unwrap();
        let k0 = ComplexMatrix::from_real_diag(&[1.0, eta.sqrt()]);
        let mut k1 = ComplexMatrix::zeros(2, 2);
        k1[(0, 1)] = Complex::from_polar((1.0 - eta).sqrt(), phi);
        assert!(k.ops[0].max_abs_diff(&k0) < 1e-16);
        assert!(k.ops[1].max_abs_diff(&k1) < 1e-16);
    }

    #[test]
    fn kraus_rejects_bad_eta() {
        assert!(matches!(damping_kraus(1.2, 0.0, 3), Err(Error::EtaOutOfRange(_))));
        assert!(matches!(damping_kraus(-0.1, 0.0, 3), Err(Error::EtaOutOfRange(_))));
        assert!(DampingChannel::new(f64::NAN, 0.0, Mode::A).is_err());
    }

    #[test]
    fn cutoff_breaks_completeness() {
        let ch = DampingChannel::new(0.5, 0.0, Mode::A).unwrap().with_cutoff(1);
        assert!(ch.kraus(4).unwrap().completeness_error() > 1e-3);
        let full = DampingChannel::new(0.5, 0.0, Mode::A).unwrap();
        assert!(full.kraus(4).unwrap().completeness_error() < 1e-12);
    }

    #[test]
    fn single_photon_decays() {
        // brute-force Kraus sum on |1><1| of a lone mode
        let eta = 0.3;
        let dims = ModeDims::new(2, 1).unwrap();
        let s = BipartiteState::number_state(1, 0, dims).unwrap();
        let out = apply_channel(&s, &DampingChannel::new(eta, 0.0, Mode::A).unwrap()).unwrap();
        let want = ComplexMatrix::from_real_diag(&[1.0 - eta, eta]);
        assert!(out.rho().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn identity_channel_leaves_state() {
        let s = random_mixed(1, ModeDims::new(3, 3).unwrap(), 3);
        let out = apply_channel(&s, &DampingChannel::new(1.0, 0.0, Mode::B).unwrap()).unwrap();
        assert!(out.rho().max_abs_diff(s.rho()) < 1e-15);
    }

    #[test]
    fn semigroup_and_preservation() {
        let s = random_mixed(2, ModeDims::new(4, 3).unwrap(), 4);
        for mode in [Mode::A, Mode::B] {
            let (e1, e2) = (0.7, 0.45);
            let twice = apply_channel(
                &apply_channel(&s, &DampingChannel::new(e1, 0.3, mode).unwrap()).unwrap(),
                &DampingChannel::new(e2, 1.1, mode).unwrap(),
            )
            .unwrap();
            let once = apply_channel(&s, &DampingChannel::new(e1 * e2, 0.0, mode).unwrap()).unwrap();
            assert!(twice.rho().max_abs_diff(once.rho()) < 1e-12);
            assert!((once.rho().trace().re - 1.0).abs() < 1e-12);
            assert!(once.rho().hermiticity_error() < 1e-12);
        }
    }

    #[test]
    fn beam_splitter_identity_and_passivity() {
        let u = beam_splitter_unitary(1.0, 0.7, 3, 4).unwrap();
        for i in 0..12 {
            assert!((u[(i, i)].norm() - 1.0).abs() < 1e-14);
        }
        let u = beam_splitter_unitary(0.4, 0.7, 3, 4).unwrap();
        let vac_out = u.mat_vec(&{
            let mut v = vec![cr(0.0); 12];
            v[0] = cr(1.0);
            v
        });
        assert!((vac_out[0] - cr(1.0)).norm() < 1e-14);
        let unitarity = &u.adjoint() * &u;
        assert!(unitarity.max_abs_diff(&ComplexMatrix::identity(12)) < 1e-13);
        assert!(matches!(beam_splitter_unitary(1.5, 0.0, 2, 2), Err(Error::EtaOutOfRange(_))));
    }

    #[test]
    fn beam_splitter_heisenberg_transform() {
        let (eta, phi, ds, de) = (0.35, 0.8, 5, 5);
        let u = beam_splitter_unitary(eta, phi, ds, de).unwrap();
        let a = kron(&annihilation_op(ds), &ComplexMatrix::identity(de));
        let r = kron(&ComplexMatrix::identity(ds), &annihilation_op(de));
        let lhs = &(&u.adjoint() * &a) * &u;
        let rhs = &a.scale(cr(eta.sqrt())) + &r.scale(Complex::from_polar((1.0 - eta).sqrt(), phi));
        // compare on total photon number <= 3, away from the truncation edge
        for i in 0..ds {
            for j in 0..de {
                for k in 0..ds {
                    for l in 0..de {
                        if i + j <= 3 && k + l <= 3 {
                            let (row, col) = (i * de + j, k * de + l);
                            assert!((lhs[(row, col)] - rhs[(row, col)]).norm() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dilation_matches_kraus() {
        let dims = ModeDims::new(4, 2).unwrap();
        let s = random_mixed(3, dims, 3);
        for mode in [Mode::A, Mode::B] {
            let eta = 0.62;
            let d_env = 6;
            let mut vac = vec![cr(0.0); d_env];
            vac[0] = cr(1.0);
            let dil = dilation_evolve(&s, eta, 0.4, &vac, mode).unwrap();
            let kr = apply_channel(&s, &DampingChannel::new(eta, 0.4, mode).unwrap()).unwrap();
            assert!(dil.rho().max_abs_diff(kr.rho()) < 1e-10, "mode {mode:?}");
        }
    }

    #[test]
    fn coherent_bath_vacuum_limit() {
        let s = QubitPure::bell().to_state().embed(ModeDims::new(6, 6).unwrap()).unwrap();
        let coh = coherent_bath_evolve(&s, 0.6, 0.0, cr(0.0), 8, Mode::A).unwrap();
        let vac = apply_channel(&s, &DampingChannel::new(0.6, 0.0, Mode::A).unwrap()).unwrap();
        assert!(coh.rho().max_abs_diff(vac.rho()) < 1e-10);
        assert!(matches!(
            coherent_bath_evolve(&s, 0.6, 0.0, cr(2.0), 4, Mode::A),
            Err(Error::TruncationTooLossy { .. })
        ));
    }

    #[test]
    fn coherent_bath_is_displaced_vacuum_bath() {
        let dims = ModeDims::new(12, 2).unwrap();
        let q = QubitPure::normalized(c(0.5, 0.1), c(0.2, -0.3), c(0.1, 0.4), c(-0.6, 0.2)).unwrap();
        let s = q.to_state().embed(dims).unwrap();
        let (eta, phi, alpha) = (0.6, 0.7, c(0.5, 0.2));
        let coh = coherent_bath_evolve(&s, eta, phi, alpha, 12, Mode::A).unwrap();
        let vac = apply_channel(&s, &DampingChannel::new(eta, phi, Mode::A).unwrap()).unwrap();
        let shifted = displace(&vac, bath_displacement(eta, phi, alpha), Mode::A);
        assert!(coh.rho().max_abs_diff(shifted.rho()) < 1e-6);
        assert!((coh.rho().trace().re - 1.0).abs() < 1e-10);
        // the mean field carries the bath amplitude
        let a = crate::fock::embed_op(&annihilation_op(12), Mode::A, dims).unwrap();
        let mean = coh.expect(&a);
        let want = s.expect(&a) * eta.sqrt() + alpha * Complex::from_polar((1.0 - eta).sqrt(), phi);
        assert!((mean - want).norm() < 1e-8);
    }

    #[test]
    fn inverse_examples() {
        let dims = ModeDims::new(3, 3).unwrap();
        let vac = BipartiteState::vacuum(dims);
        let out = inverse_damping(&vac, 0.4, 0.2, Mode::A).unwrap();
        assert!(out.rho().max_abs_diff(vac.rho()) < 1e-15);

        let s = random_mixed(9, dims, 5);
        let same = inverse_damping(&s, 1.0, 0.0, Mode::B).unwrap();
        assert!(same.rho().max_abs_diff(s.rho()) < 1e-15);

        assert!(matches!(inverse_damping(&s, 0.0, 0.0, Mode::A), Err(Error::EtaZero)));
    }

    #[test]
    fn inverse_round_trips() {
        let dims = ModeDims::new(3, 3).unwrap();
        let s = random_mixed(11, dims, 9);
        for eta in [0.3, 0.7, 0.95] {
            for mode in [Mode::A, Mode::B] {
                let ch = DampingChannel::new(eta, 0.0, mode).unwrap();
                let there = apply_channel(&inverse_damping(&s, eta, 0.0, mode).unwrap(), &ch).unwrap();
                let back = inverse_damping(&apply_channel(&s, &ch).unwrap(), eta, 0.0, mode).unwrap();
                assert!(there.rho().max_abs_diff(s.rho()) < 1e-10);
                assert!(back.rho().max_abs_diff(s.rho()) < 1e-10);
            }
        }
        let inv = inverse_damping(&s, 0.7, 0.0, Mode::A).unwrap();
        assert!((inv.rho().trace().re - 1.0).abs() < 1e-12);
        assert!(inv.rho().hermiticity_error() < 1e-12);
    }

    #[test]
    fn physicality_checks() {
        let s = random_mixed(4, ModeDims::new(3, 3).unwrap(), 9);
        let out = apply_two_sided(&s, 0.3, 0.8).unwrap();
        assert!(is_physical(&out, DEFAULT_PHYSICAL_EPS).0);

        let bad = BipartiteState::new(ComplexMatrix::from_real_diag(&[1.5, -0.5]), ModeDims::new(2, 1).unwrap()).unwrap();
        let (ok, min) = is_physical(&bad, DEFAULT_PHYSICAL_EPS);
        assert!(!ok);
        assert!((min + 0.5).abs() < 1e-15);

        // a pure excited state has no physical preimage
        let one = BipartiteState::number_state(1, 0, ModeDims::new(3, 1).unwrap()).unwrap();
        let pre = inverse_damping(&one, 0.6, 0.0, Mode::A).unwrap();
        assert!(!is_physical(&pre, DEFAULT_PHYSICAL_EPS).0);
    }

    #[test]
    fn reduced_state_of_dilation_is_channel_output() {
        let dims = ModeDims::new(3, 2).unwrap();
        let psi = haar_vector(&mut ChaCha8Rng::seed_from_u64(17), 6);
        let s = pure_to_state(&psi, dims).unwrap();
        let out = apply_channel(&s, &DampingChannel::new(0.5, 0.0, Mode::A).unwrap()).unwrap();
        // mode b is untouched
        assert!(partial_trace(&out, Mode::B).max_abs_diff(&partial_trace(&s, Mode::B)) < 1e-15);
    }
}
