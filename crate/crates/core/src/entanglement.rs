//! Spectrum-based entanglement quantifiers and the closed-form two-qubit
//! concurrences under vacuum damping.

use serde::{Deserialize, Serialize};

use crate::channels::{check_eta, is_physical, DEFAULT_PHYSICAL_EPS};
use crate::error::{Error, Result};
use crate::fock::{BipartiteState, Mode, QubitPure};
use crate::numerics::{cr, herm_eigvals, singular_values, sqrtm_psd, ComplexMatrix};

/// Values of `log₂‖ρ^PT‖₁` below this are reported as zero.
pub const LOG_NEG_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityResult {
    pub log_negativity: f64,
    pub min_pt_eig: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceResult {
    /// `√λ₁ − √λ₂ − √λ₃ − √λ₄`.
    pub raw: f64,
    /// `max(0, raw)`.
    pub value: f64,
    /// Descending.
    pub lambdas: [f64; 4],
}

/// Transposes the `mode` index of `ρ`.
pub fn partial_transpose(state: &BipartiteState, mode: Mode) -> ComplexMatrix {
    let dims = state.dims();
    let rho = state.rho();
    let n = dims.total();
    let mut out = ComplexMatrix::zeros(n, n);
    for ia in 0..dims.a {
        for ib in 0..dims.b {
            for ja in 0..dims.a {
                for jb in 0..dims.b {
                    let (r, c) = match mode {
                        Mode::A => (dims.index(ja, ib), dims.index(ia, jb)),
                        Mode::B => (dims.index(ia, jb), dims.index(ja, ib)),
                    };
                    out[(r, c)] = rho[(dims.index(ia, ib), dims.index(ja, jb))];
                }
            }
        }
    }
    out
}

fn pt_spectrum(state: &BipartiteState) -> Vec<f64> {
    herm_eigvals(&partial_transpose(state, Mode::B)).expect("partial transpose of a Hermitian matrix is Hermitian")
}

/// Smallest eigenvalue of `ρ^{T_B}`.
pub fn partial_transpose_min_eig(state: &BipartiteState) -> f64 {
    pt_spectrum(state).first().copied().unwrap_or(0.0)
}

/// `E_N = log₂‖ρ^PT‖₁` for a state that is positive within `eps`.
pub fn log_negativity_eps(state: &BipartiteState, eps: f64) -> Result<NegativityResult> {
    let (ok, min) = is_physical(state, eps);
    if !ok {
        return Err(Error::Unphysical(min));
    }
    let spec = pt_spectrum(state);
    let norm: f64 = spec.iter().map(|v| v.abs()).sum();
    let mut e = norm.log2();
    if e < LOG_NEG_CLAMP {
        e = 0.0;
    }
    Ok(NegativityResult {
        log_negativity: e,
        min_pt_eig: spec.first().copied().unwrap_or(0.0),
    })
}

pub fn log_negativity(state: &BipartiteState) -> Result<NegativityResult> {
    log_negativity_eps(state, DEFAULT_PHYSICAL_EPS)
}

fn sigma_y_sigma_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 3)] = cr(-1.0);
    m[(1, 2)] = cr(1.0);
    m[(2, 1)] = cr(1.0);
    m[(3, 0)] = cr(-1.0);
    m
}

/// Wootters concurrence of a two-qubit state.
///
/// The `√λᵢ` are taken as singular values of `√ρ (σ_y⊗σ_y) √ρ*`, whose
/// squares are the eigenvalues of `√ρ ρ̃ √ρ`.
pub fn wootters_concurrence(state: &BipartiteState) -> Result<ConcurrenceResult> {
    let dims = state.dims();
    if dims.a != 2 || dims.b != 2 {
        return Err(Error::NotTwoQubit(dims.a, dims.b));
    }
    let root = sqrtm_psd(state.rho())?;
    let r = &(&root * &sigma_y_sigma_y()) * &root.conj();
    let s = singular_values(&r);
    let raw = s[0] - s[1] - s[2] - s[3];
    Ok(ConcurrenceResult {
        raw,
        value: raw.max(0.0),
        lambdas: [s[0] * s[0], s[1] * s[1], s[2] * s[2], s[3] * s[3]],
    })
}

/// `2η(|αδ − βγ| − (1 − η)|δ|²)`, both qubits damped by `η`. Unclamped.
pub fn c2_closed(psi: &QubitPure, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(2.0 * eta * (psi.invariant() - (1.0 - eta) * psi.delta.norm_sqr()))
}

/// `2√η |αδ − βγ|`, one qubit damped by `η`.
pub fn c1_closed(psi: &QubitPure, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(2.0 * eta.sqrt() * psi.invariant())
}

/// `2√(η_a η_b)(|αδ − βγ| − √((1 − η_a)(1 − η_b))|δ|²)`. Unclamped.
pub fn c2_unbalanced(psi: &QubitPure, eta_a: f64, eta_b: f64) -> Result<f64> {
    check_eta(eta_a)?;
    check_eta(eta_b)?;
    let loss = ((1.0 - eta_a) * (1.0 - eta_b)).sqrt();
    Ok(2.0 * (eta_a * eta_b).sqrt() * (psi.invariant() - loss * psi.delta.norm_sqr()))
}

/// Symmetric coupling below which the concurrence vanishes:
/// `η* = 1 − |αδ − βγ|/|δ|²`, or `None` when it never does.
pub fn sde_threshold(psi: &QubitPure) -> Result<Option<f64>> {
    let inv = psi.invariant();
    if inv <= 0.0 {
        return Err(Error::SeparableInput);
    }
    let dd = psi.delta.norm_sqr();
    if inv >= dd {
        return Ok(None);
    }
    Ok(Some(1.0 - inv / dd))
}
