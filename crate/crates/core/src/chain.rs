//! The lumped distance process.
//!
//! A uniform swap from a subset at distance `d` moves it to `d - 1` with
//! probability `q_d = d^2 / (k(n-k))`, to `d + 1` with probability
//! `p_d = (k-d)(n-k-d) / (k(n-k))`, and otherwise keeps the distance.
//! Under Metropolis acceptance with strength `beta` against the distance
//! objective, outward moves are accepted with probability `e^-beta`, which
//! scales `p_d` and leaves `q_d` alone.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::numeric::{self, rational_to_f64};
use crate::params::JohnsonParams;
use crate::shell;

/// Below this the `(e^beta - 1)` root formula cancels badly and the
/// `beta = 0` closed form is used instead.
const SMALL_BETA: f64 = 1e-12;

/// Exact transition probabilities, available when `beta = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRates {
    pub p: Vec<BigRational>,
    pub q: Vec<BigRational>,
    pub r: Vec<BigRational>,
}

/// Birth-death chain on `0..=d_max` for one `(n, k, beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceChain {
    pub params: JohnsonParams,
    pub beta: f64,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    /// Populated only for `beta = 0`.
    pub exact: Option<ExactRates>,
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta < 0.0 {
        return domain(format!("beta must be finite and >= 0, got {beta}"));
    }
    Ok(())
}

/// Unmodified up/down probabilities as exact rationals.
pub(crate) fn exact_up_down(params: JohnsonParams, d: usize) -> (BigRational, BigRational) {
    let (n, k, d) = (params.n() as u64, params.k() as u64, d as u64);
    let deg = params.degree();
    let up = numeric::ratio((k - d) * (n - k - d), deg);
    let down = numeric::ratio(d * d, deg);
    (up, down)
}

impl DistanceChain {
    pub fn new(params: JohnsonParams, beta: f64) -> Result<Self> {
        params.require_chain()?;
        check_beta(beta)?;
        let d_max = params.d_max();

        if beta == 0.0 {
            let (p, q): (Vec<_>, Vec<_>) = (0..=d_max).map(|d| exact_up_down(params, d)).unzip();
            let r: Vec<BigRational> = p
                .iter()
                .zip(&q)
                .map(|(p, q)| BigRational::one() - p - q)
                .collect();
            let to_f = |v: &[BigRational]| v.iter().map(rational_to_f64).collect::<Vec<_>>();
            return Ok(DistanceChain {
                params,
                beta,
                p: to_f(&p),
                q: to_f(&q),
                r: to_f(&r),
                exact: Some(ExactRates { p, q, r }),
            });
        }

        let accept_up = (-beta).exp();
        let deg = params.degree() as f64;
        let (n, k) = (params.n() as f64, params.k() as f64);
        let mut p = Vec::with_capacity(d_max + 1);
        let mut q = Vec::with_capacity(d_max + 1);
        let mut r = Vec::with_capacity(d_max + 1);
        for d in 0..=d_max {
            let df = d as f64;
            let up = (k - df) * (n - k - df) / deg * accept_up;
            let down = df * df / deg;
            p.push(up);
            q.push(down);
            r.push((1.0 - up - down).max(0.0));
        }
        Ok(DistanceChain { params, beta, p, q, r, exact: None })
    }

    pub fn d_max(&self) -> usize {
        self.params.d_max()
    }

    pub fn drift_profile(&self) -> DriftProfile {
        drift_profile(self)
    }
}

/// Alias matching the operation name used throughout the docs.
pub fn build_chain(params: JohnsonParams, beta: f64) -> Result<DistanceChain> {
    DistanceChain::new(params, beta)
}

/// Where the drift-vanishing point sits relative to the state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumStatus {
    /// `0 < d* < d_max`: the drift changes sign inside the chain.
    Interior,
    /// `d*` outside `(0, d_max)`; no interior sign change to check.
    Clamped,
}

/// Conditional mean and variance of one step, per distance.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftProfile {
    pub drift: Vec<f64>,
    pub variance: Vec<f64>,
    pub equilibrium: f64,
    pub status: EquilibriumStatus,
}

impl DriftProfile {
    /// Number of strict sign changes of the drift over `0..=d_max`, with
    /// exact zeros skipped.
    pub fn sign_changes(&self) -> usize {
        let signs: Vec<f64> = self
            .drift
            .iter()
            .filter(|x| **x != 0.0)
            .map(|x| x.signum())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

pub fn drift_profile(chain: &DistanceChain) -> DriftProfile {
    let drift: Vec<f64> = match &chain.exact {
        Some(ex) => ex.p.iter().zip(&ex.q).map(|(p, q)| rational_to_f64(&(p - q))).collect(),
        None => chain.p.iter().zip(&chain.q).map(|(p, q)| p - q).collect(),
    };
    let variance = chain
        .p
        .iter()
        .zip(&chain.q)
        .zip(&drift)
        .map(|((p, q), m)| ((p + q) - m * m).max(0.0))
        .collect();
    let equilibrium =
        equilibrium_distance(chain.params, chain.beta).expect("chain beta already validated");
    let status = if equilibrium > 0.0 && equilibrium < chain.d_max() as f64 {
        EquilibriumStatus::Interior
    } else {
        EquilibriumStatus::Clamped
    };
    DriftProfile { drift, variance, equilibrium, status }
}

/// `k(n-k)/n`, the `beta = 0` drift root, which is also the mean of the
/// hypergeometric shell law.
pub fn equilibrium_distance_exact(params: JohnsonParams) -> BigRational {
    BigRational::new(BigInt::from(params.degree()), BigInt::from(params.n()))
}

/// Root of the drift `((k-d)(n-k-d) e^-beta - d^2) / (k(n-k))`.
pub fn equilibrium_distance(params: JohnsonParams, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta < SMALL_BETA {
        return Ok(rational_to_f64(&equilibrium_distance_exact(params)));
    }
    let n = params.n() as f64;
    let kk = params.degree() as f64;
    let em1 = beta.exp_m1();
    Ok((-n + (n * n + 4.0 * em1 * kk).sqrt()) / (2.0 * em1))
}

/// `-(n / (k(n-k))) (d - d*)`, the affine form of the `beta = 0` drift.
pub fn mean_reversion_form(params: JohnsonParams, d: usize) -> Result<f64> {
    params.check_distance(d)?;
    let slope = params.n() as f64 / params.degree() as f64;
    let d_star = params.degree() as f64 / params.n() as f64;
    Ok(-slope * (d as f64 - d_star))
}

/// Exact `beta = 0` drift `p_d - q_d = 1 - n d / (k(n-k))`.
pub fn exact_drift(params: JohnsonParams, d: usize) -> Result<BigRational> {
    params.check_distance(d)?;
    let (up, down) = exact_up_down(params, d);
    Ok(up - down)
}

/// Pairs `(|shell i| p_i, |shell i+1| q_{i+1})` for `i = 0..d_max`; the two
/// sides are the probability flows across the `i | i+1` cut under the
/// uniform stationary law and must agree.
pub fn detailed_balance_check(params: JohnsonParams) -> Result<Vec<(BigRational, BigRational)>> {
    params.require_chain()?;
    let sizes: Vec<BigRational> = (0..=params.d_max())
        .map(|d| numeric::big_to_rational(&shell::shell_size(params, d).expect("d in range")))
        .collect();
    Ok((0..params.d_max())
        .map(|i| {
            let (p_i, _) = exact_up_down(params, i);
            let (_, q_next) = exact_up_down(params, i + 1);
            (&sizes[i] * p_i, &sizes[i + 1] * q_next)
        })
        .collect())
}

/// Reports `ln(p_d / q_d)` next to `S(d+1) - S(d-1)` at `beta = 0`.
///
/// The two are not equal in general (on `J(5,2)` at `d = 1` they are
/// `ln 2` and `ln 3`); this only surfaces both for inspection.
pub fn entropy_gradient_diagnostic(params: JohnsonParams, d: usize) -> Result<(f64, f64)> {
    params.require_chain()?;
    if d == 0 || d + 1 > params.d_max() {
        return domain(format!(
            "diagnostic needs 1 <= d <= d_max-1, got d={d} for {params}"
        ));
    }
    let (up, down) = exact_up_down(params, d);
    let log_ratio = numeric::ln_rational(&(up / down));
    let above = shell::shell_size(params, d + 1)?;
    let below = shell::shell_size(params, d - 1)?;
    let entropy_diff = numeric::ln_biguint(&above) - numeric::ln_biguint(&below);
    Ok((log_ratio, entropy_diff))
}

/// Whether every exact row satisfies `p + q + r = 1` with entries in `[0, 1]`.
pub fn exact_rows_stochastic(rates: &ExactRates) -> bool {
    let one = BigRational::one();
    rates.p.iter().zip(&rates.q).zip(&rates.r).all(|((p, q), r)| {
        let in_unit = |x: &BigRational| *x >= BigRational::zero() && *x <= one;
        in_unit(p) && in_unit(q) && in_unit(r) && (p + q + r) == one
    })
}
