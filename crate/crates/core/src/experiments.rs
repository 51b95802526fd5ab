//! Sweeps over the coupling, random separable states and the search for
//! separable states whose inverse-damped preimage is physical and entangled.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{apply_channel, inverse_damping, inverse_two_sided, is_physical, DampingChannel, DEFAULT_PHYSICAL_EPS};
use crate::entanglement::{log_negativity_eps, wootters_concurrence};
use crate::error::{Error, Result};
use crate::fock::{haar_vector, BipartiteState, Mode, ModeDims};
use crate::moments::{witness_from_det, MomentMatrixSpec};
use crate::numerics::{cr, ComplexMatrix};

/// Environment variable overriding the physicality tolerance.
pub const EPS_ENV: &str = "DECOLAB_EPS";

/// Preimages count as entangled above this log-negativity.
pub const SDE_MIN_LOG_NEG: f64 = 0.01;

/// Physicality tolerance, `DECOLAB_EPS` if set and valid.
pub fn physicality_eps() -> f64 {
    std::env::var(EPS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|v| v.is_finite() && *v >= 0.0)
        .unwrap_or(DEFAULT_PHYSICAL_EPS)
}

/// `n` uniform points on `[lo, hi]`, endpoints included.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// 101 points on `[0.5, 1]`.
pub fn default_inverse_grid() -> Vec<f64> {
    linear_grid(0.5, 1.0, 101)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparableSpec {
    pub num_terms: usize,
    pub local_dim: usize,
    pub seed: u64,
}

impl SeparableSpec {
    pub fn new(num_terms: usize, local_dim: usize, seed: u64) -> Result<Self> {
        if num_terms == 0 {
            return Err(Error::Invalid("num_terms must be at least 1".into()));
        }
        if local_dim < 2 {
            return Err(Error::Invalid("local_dim must be at least 2".into()));
        }
        Ok(SeparableSpec { num_terms, local_dim, seed })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SeparableSpec { seed, ..self }
    }
}

/// `Σ_k p_k |u_k⟩⟨u_k| ⊗ |v_k⟩⟨v_k|` with Haar-random local vectors and
/// Dirichlet(1, …, 1) weights.
pub fn random_separable(spec: &SeparableSpec) -> BipartiteState {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let d = spec.local_dim;
    let weights: Vec<f64> = (0..spec.num_terms).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = weights.iter().sum();
    let n = d * d;
    let mut rho = ComplexMatrix::zeros(n, n);
    for w in &weights {
        let u = haar_vector(&mut rng, d);
        let v = haar_vector(&mut rng, d);
        let uv: Vec<_> = u.iter().flat_map(|x| v.iter().map(move |y| x * y)).collect();
        rho = &rho + &ComplexMatrix::outer(&uv, &uv).scale(cr(w / total));
    }
    BipartiteState::new(rho.hermitian_part(), ModeDims::new(d, d).expect("local_dim >= 2"))
        .expect("convex mixture of normalized projectors")
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub eta: f64,
    pub min_eig: f64,
    pub log_negativity: Option<f64>,
    pub det_values: Vec<(String, f64)>,
    pub concurrence: Option<f64>,
}

/// Named determinant witness evaluated along a sweep.
#[derive(Debug, Clone)]
pub struct NamedWitness {
    pub name: String,
    pub spec: MomentMatrixSpec,
}

impl NamedWitness {
    pub fn new(name: impl Into<String>, spec: MomentMatrixSpec) -> Self {
        NamedWitness { name: name.into(), spec }
    }
}

fn record(state: &BipartiteState, eta: f64, eps: f64, witnesses: &[NamedWitness]) -> Result<SweepRecord> {
    let (physical, min_eig) = is_physical(state, eps);
    let (log_negativity, concurrence) = if physical {
        let ln = log_negativity_eps(state, eps)?.log_negativity;
        let dims = state.dims();
        let conc = if dims.a == 2 && dims.b == 2 {
            Some(wootters_concurrence(state)?.value)
        } else {
            None
        };
        (Some(ln), conc)
    } else {
        (None, None)
    };
    let det_values = witnesses
        .iter()
        .map(|w| Ok((w.name.clone(), witness_from_det(state, &w.spec, 0.0)?.value)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepRecord {
        eta,
        min_eig,
        log_negativity,
        det_values,
        concurrence,
    })
}

/// Which modes the forward channel damps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModePlan {
    AOnly,
    BOnly,
    Both,
    /// Mode `a` follows the grid, mode `b` is damped by the fixed coupling.
    Unbalanced(f64),
}

impl FromStr for ModePlan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        match upper.as_str() {
            "A_ONLY" => Ok(ModePlan::AOnly),
            "B_ONLY" => Ok(ModePlan::BOnly),
            "BOTH" => Ok(ModePlan::Both),
            _ => {
                let eta = upper
                    .strip_prefix("UNBALANCED")
                    .map(|r| r.trim_start_matches([':', '(', '=']).trim_end_matches(')'))
                    .and_then(|r| r.parse::<f64>().ok())
                    .ok_or_else(|| Error::Invalid(format!("unknown plan {s:?}")))?;
                if !(0.0..=1.0).contains(&eta) {
                    return Err(Error::EtaOutOfRange(eta));
                }
                Ok(ModePlan::Unbalanced(eta))
            }
        }
    }
}

impl fmt::Display for ModePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModePlan::AOnly => f.write_str("A_ONLY"),
            ModePlan::BOnly => f.write_str("B_ONLY"),
            ModePlan::Both => f.write_str("BOTH"),
            ModePlan::Unbalanced(eta) => write!(f, "UNBALANCED:{eta}"),
        }
    }
}

fn check_grid(grid: &[f64], open_at_zero: bool) -> Result<()> {
    for &eta in grid {
        if open_at_zero && eta == 0.0 {
            return Err(Error::EtaZero);
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::EtaOutOfRange(eta));
        }
    }
    Ok(())
}

/// Damps `state` at every grid coupling per `plan` and records the
/// entanglement quantities of the output.
pub fn forward_sweep(
    state: &BipartiteState,
    eta_grid: &[f64],
    plan: ModePlan,
    witnesses: &[NamedWitness],
) -> Result<Vec<SweepRecord>> {
    check_grid(eta_grid, false)?;
    let eps = physicality_eps();
    eta_grid
        .par_iter()
        .map(|&eta| {
            let out = match plan {
                ModePlan::AOnly => apply_channel(state, &DampingChannel::new(eta, 0.0, Mode::A)?)?,
                ModePlan::BOnly => apply_channel(state, &DampingChannel::new(eta, 0.0, Mode::B)?)?,
                ModePlan::Both => crate::channels::apply_two_sided(state, eta, eta)?,
                ModePlan::Unbalanced(eta_b) => crate::channels::apply_two_sided(state, eta, eta_b)?,
            };
            record(&out, eta, eps, witnesses)
        })
        .collect()
}

/// Applies the inverse damping map at every grid coupling. Unphysical
/// preimages keep their minimum eigenvalue and leave the entanglement
/// fields empty.
pub fn inverse_sweep(
    state: &BipartiteState,
    eta_grid: &[f64],
    phi: f64,
    two_sided: bool,
    witnesses: &[NamedWitness],
) -> Result<Vec<SweepRecord>> {
    check_grid(eta_grid, true)?;
    let eps = physicality_eps();
    eta_grid
        .par_iter()
        .map(|&eta| {
            let pre = if two_sided {
                inverse_two_sided(state, eta, phi)?
            } else {
                inverse_damping(state, eta, phi, Mode::A)?
            };
            record(&pre, eta, eps, witnesses)
        })
        .collect()
}

/// Separable state with a physical, entangled preimage at `eta`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdeHit {
    pub state: BipartiteState,
    pub seed: u64,
    pub eta: f64,
    pub preimage_min_eig: f64,
    pub preimage_log_neg: f64,
}

/// Trial `t` draws `random_separable(spec.with_seed(spec.seed + t))`, so any
/// hit can be regenerated from its seed.
pub fn sde_search(spec: &SeparableSpec, eta_grid: &[f64], trials: usize, two_sided: bool) -> Result<Vec<SdeHit>> {
    if trials == 0 {
        return Err(Error::Invalid("trials must be at least 1".into()));
    }
    check_grid(eta_grid, true)?;
    let eps = physicality_eps();
    let per_trial: Vec<Vec<SdeHit>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let seed = spec.seed.wrapping_add(t);
            let state = random_separable(&spec.with_seed(seed));
            let mut hits = Vec::new();
            for r in inverse_sweep_serial(&state, eta_grid, two_sided, eps)? {
                if let Some(ln) = r.log_negativity {
                    if ln > SDE_MIN_LOG_NEG {
                        hits.push(SdeHit {
                            state: state.clone(),
                            seed,
                            eta: r.eta,
                            preimage_min_eig: r.min_eig,
                            preimage_log_neg: ln,
                        });
                    }
                }
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

fn inverse_sweep_serial(state: &BipartiteState, grid: &[f64], two_sided: bool, eps: f64) -> Result<Vec<SweepRecord>> {
    grid.iter()
        .map(|&eta| {
            let pre = if two_sided {
                inverse_two_sided(state, eta, 0.0)?
            } else {
                inverse_damping(state, eta, 0.0, Mode::A)?
            };
            record(&pre, eta, eps, &[])
        })
        .collect()
}
