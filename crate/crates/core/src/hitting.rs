//! Expected hitting times of the target from each starting distance.
//!
//! For the plain walk,
//!
//! ```text
//! h_m = sum_{i=1..m} A_i / (q_i |shell i|),   A_i = sum_{j>=i} |shell j|
//! ```
//!
//! Under Metropolis acceptance the inner sum gains weights `e^{-beta(j-i)}`
//! while `q_i` keeps its unmodified value, since inward moves are always
//! accepted. Both are evaluated with a single backward pass over the shells.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chain::exact_up_down;
use crate::error::{domain, Error, Result};
use crate::numeric::{self, Exactness, LogAccumulator};
use crate::params::JohnsonParams;
use crate::shell::{self, ShellProfile};

/// One entry of a [`HittingTimeTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct HittingTime {
    pub m: usize,
    /// Exact value, when `beta = 0` and the instance is under the cutoff.
    pub exact: Option<BigRational>,
    /// `ln h_m`; `-inf` for `m = 0`.
    pub ln: f64,
}

impl HittingTime {
    /// `h_m` as a double; `inf` once it exceeds the f64 range.
    pub fn value(&self) -> f64 {
        match &self.exact {
            Some(x) => numeric::rational_to_f64(x),
            None => self.ln.exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HittingTimeTable {
    pub params: JohnsonParams,
    pub beta: f64,
    /// Indexed by starting distance `m = 0..=d_max`.
    pub h: Vec<HittingTime>,
    /// Expected draws for uniform sampling with replacement, `C(n, k)`.
    pub iid_baseline: BigUint,
}

fn check_m(params: JohnsonParams, m: usize) -> Result<()> {
    if m > params.d_max() {
        return domain(format!("start distance {m} outside 0..={} for {params}", params.d_max()));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta < 0.0 {
        return domain(format!("beta must be finite and >= 0, got {beta}"));
    }
    Ok(())
}

/// Exact increments `delta_i = A_i / (q_i |shell i|)` for `i = 1..=d_max`.
fn exact_increments(params: JohnsonParams) -> Vec<BigRational> {
    let d_max = params.d_max();
    let sizes: Vec<BigUint> = (0..=d_max)
        .map(|d| shell::shell_size(params, d).expect("d in range"))
        .collect();
    let mut deltas = vec![BigRational::zero(); d_max + 1];
    let mut tail = BigUint::zero();
    for i in (1..=d_max).rev() {
        tail += &sizes[i];
        let (_, q_i) = exact_up_down(params, i);
        let denom = q_i * numeric::big_to_rational(&sizes[i]);
        deltas[i] = numeric::big_to_rational(&tail) / denom;
    }
    deltas
}

/// Exact `h_m` for the plain walk; `m = 0..=d_max`. Errors above the
/// default exactness cutoff.
pub fn hitting_time_rw(params: JohnsonParams, m: usize) -> Result<BigRational> {
    hitting_time_rw_with(params, m, Exactness::default())
}

pub fn hitting_time_rw_with(params: JohnsonParams, m: usize, exactness: Exactness) -> Result<BigRational> {
    params.require_chain()?;
    check_m(params, m)?;
    if !exactness.exact_for(params.n()) {
        return Err(Error::Resource {
            what: "n for exact hitting times",
            actual: params.n() as u128,
            limit: exactness.cutoff as u128,
        });
    }
    Ok(exact_prefix(params, m))
}

fn exact_prefix(params: JohnsonParams, m: usize) -> BigRational {
    exact_increments(params).into_iter().take(m + 1).sum()
}

/// `ln delta_i` for `i = 1..=d_max` under Metropolis strength `beta`,
/// indexed from 0 with a `-inf` placeholder at index 0.
fn log_increments(params: JohnsonParams, beta: f64, log_sizes: &[f64]) -> Vec<f64> {
    let d_max = params.d_max();
    let ln_degree = (params.degree() as f64).ln();
    let mut out = vec![f64::NEG_INFINITY; d_max + 1];
    // Backward log-sum-exp of ln|shell j| - beta*j over j >= i.
    let mut tail = f64::NEG_INFINITY;
    for i in (1..=d_max).rev() {
        tail = numeric::log_add_exp(tail, log_sizes[i] - beta * i as f64);
        let ln_q = 2.0 * (i as f64).ln() - ln_degree;
        out[i] = tail + beta * i as f64 - ln_q - log_sizes[i];
    }
    out
}

fn log_sizes_for(params: JohnsonParams) -> Vec<f64> {
    // Exact logs of big integers are cheap; they keep the float path within
    // a few ulps at every scale we care about.
    ShellProfile::with_exactness(params, Exactness { cutoff: usize::MAX }).log_sizes
}

fn log_prefix_sums(increments: &[f64]) -> Vec<f64> {
    let mut acc = LogAccumulator::new();
    let mut out = Vec::with_capacity(increments.len());
    out.push(f64::NEG_INFINITY);
    for &x in &increments[1..] {
        acc.add_ln(x);
        out.push(acc.ln());
    }
    out
}

/// `ln h_m` under Metropolis strength `beta` (`beta = 0` is the plain walk).
pub fn log_hitting_time(params: JohnsonParams, beta: f64, m: usize) -> Result<f64> {
    params.require_chain()?;
    check_beta(beta)?;
    check_m(params, m)?;
    let inc = log_increments(params, beta, &log_sizes_for(params));
    Ok(log_prefix_sums(&inc)[m])
}

/// `h_m` for the Metropolis-guided walk, carried in log space.
pub fn hitting_time_metropolis(params: JohnsonParams, beta: f64, m: usize) -> Result<LogValue> {
    log_hitting_time(params, beta, m).map(LogValue)
}

/// A positive real stored as its natural log.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(pub f64);

impl LogValue {
    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.exp()
    }
}

/// Expected number of uniform draws until the target appears: `C(n, k)`.
pub fn iid_baseline(params: JohnsonParams) -> BigUint {
    numeric::binomial(params.n() as u64, params.k() as u64)
}

/// `ln(h_m / C(n, k))` for the plain walk.
///
/// Computed from exact rationals at any `n`: at `m = 1` the ratio is
/// `1 - 1/C(n, k)` and the sign is lost in any float evaluation once
/// `C(n, k)` passes `2^53`.
pub fn log_ratio_vs_iid(params: JohnsonParams, m: usize) -> Result<f64> {
    params.require_chain()?;
    check_m(params, m)?;
    if m == 0 {
        return domain("log ratio undefined at m = 0");
    }
    Ok(log_ratios(params)[m])
}

/// `ln(h_m / C(n,k))` for every `m`, index 0 holding `-inf`.
pub fn log_ratios(params: JohnsonParams) -> Vec<f64> {
    let c = numeric::big_to_rational(&iid_baseline(params));
    let mut h = BigRational::zero();
    let mut out = vec![f64::NEG_INFINITY];
    for delta in exact_increments(params).into_iter().skip(1) {
        h += delta;
        let excess = (&h - &c) / &c;
        let v = if excess.abs() < BigRational::new(BigInt::one(), BigInt::from(2)) {
            numeric::rational_to_f64(&excess).ln_1p()
        } else {
            numeric::ln_rational(&h) - numeric::ln_rational(&c)
        };
        out.push(v);
    }
    out
}

impl HittingTimeTable {
    pub fn new(params: JohnsonParams, beta: f64) -> Result<Self> {
        Self::with_exactness(params, beta, Exactness::default())
    }

    pub fn with_exactness(params: JohnsonParams, beta: f64, exactness: Exactness) -> Result<Self> {
        params.require_chain()?;
        check_beta(beta)?;
        let log_h = log_prefix_sums(&log_increments(params, beta, &log_sizes_for(params)));
        let exact: Option<Vec<BigRational>> = (beta == 0.0 && exactness.exact_for(params.n()))
            .then(|| {
                let mut running = BigRational::zero();
                exact_increments(params)
                    .into_iter()
                    .map(|d| {
                        running += d;
                        running.clone()
                    })
                    .collect()
            });
        let h = (0..=params.d_max())
            .map(|m| {
                let exact = exact.as_ref().map(|v| v[m].clone());
                let ln = match &exact {
                    Some(x) if m > 0 => numeric::ln_rational(x),
                    _ => log_h[m],
                };
                HittingTime { m, exact, ln }
            })
            .collect();
        Ok(HittingTimeTable { params, beta, h, iid_baseline: iid_baseline(params) })
    }

    pub fn values(&self) -> Vec<f64> {
        self.h.iter().map(HittingTime::value).collect()
    }

    pub fn log_values(&self) -> Vec<f64> {
        self.h.iter().map(|e| e.ln).collect()
    }
}

/// `ln h_{d_max} / n` for `k = alpha * n` at each `n`.
///
/// At fixed `alpha` this tends to the binary entropy `H(alpha)` from below
/// as the polynomial prefactor of the hitting time becomes negligible.
pub fn entropy_scaling_trend(alpha: Ratio<u64>, ns: &[usize]) -> Result<Vec<(usize, f64)>> {
    ns.iter()
        .map(|&n| {
            let scaled = alpha * Ratio::from_integer(n as u64);
            if !scaled.is_integer() {
                return domain(format!("alpha * n = {scaled} is not an integer for n = {n}"));
            }
            let k = scaled.to_integer().to_usize().expect("fits");
            let params = JohnsonParams::new(n, k)?;
            let ln_h = log_hitting_time(params, 0.0, params.d_max())?;
            Ok((n, ln_h / n as f64))
        })
        .collect()
}

pub fn binary_entropy(alpha: Ratio<u64>) -> f64 {
    numeric::binary_entropy(*alpha.numer() as f64 / *alpha.denom() as f64)
}

/// Ratio of the largest to the smallest `h_m` over `m >= 1`.
pub fn flatness(table: &HittingTimeTable) -> f64 {
    let logs: Vec<f64> = table.h.iter().skip(1).map(|e| e.ln).collect();
    let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = logs.iter().cloned().fold(f64::INFINITY, f64::min);
    (hi - lo).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    fn p(n: usize, k: usize) -> JohnsonParams {
        JohnsonParams::new(n, k).unwrap()
    }

    /// Naive double sum straight from the closed form.
    fn double_sum(params: JohnsonParams, beta: f64, m: usize) -> f64 {
        let sizes: Vec<f64> = (0..=params.d_max())
            .map(|d| shell::shell_size(params, d).unwrap().to_f64().unwrap())
            .collect();
        (1..=m)
            .map(|i| {
                let q = (i * i) as f64 / params.degree() as f64;
                let inner: f64 = (i..=params.d_max())
                    .map(|j| sizes[j] * (-beta * (j - i) as f64).exp())
                    .sum();
                inner / (q * sizes[i])
            })
            .sum()
    }

    #[test]
    fn j52_exact_values() {
        let params = p(5, 2);
        assert_eq!(hitting_time_rw(params, 0).unwrap(), ratio(0, 1));
        assert_eq!(hitting_time_rw(params, 1).unwrap(), ratio(9, 1));
        assert_eq!(hitting_time_rw(params, 2).unwrap(), ratio(21, 2));
        assert!(hitting_time_rw(params, 3).is_err());
    }

    #[test]
    fn exact_path_respects_cutoff() {
        let err = hitting_time_rw_with(p(80, 10), 1, Exactness { cutoff: 64 });
        assert!(matches!(err, Err(Error::Resource { .. })));
        assert!(hitting_time_rw_with(p(80, 10), 1, Exactness { cutoff: 100 }).is_ok());
    }

    #[test]
    fn metropolis_j52() {
        let params = p(5, 2);
        assert!((hitting_time_metropolis(params, 0.0, 1).unwrap().value() - 9.0).abs() < 1e-13);
        let want = 6.0 + 3.0 * (-1f64).exp();
        let got = hitting_time_metropolis(params, 1.0, 1).unwrap().value();
        assert!((got - want).abs() / want < 1e-14, "{got}");
        assert!(hitting_time_metropolis(params, 1.0, 3).is_err());
        assert!(hitting_time_metropolis(params, f64::NAN, 1).is_err());
    }

    #[test]
    fn log_path_matches_naive_double_sum() {
        for &(n, k) in &[(10, 4), (20, 7), (30, 15)] {
            let params = p(n, k);
            for beta in [0.0, 0.5, 2.0] {
                for m in 1..=params.d_max() {
                    let want = double_sum(params, beta, m);
                    let got = hitting_time_metropolis(params, beta, m).unwrap().value();
                    assert!((got - want).abs() / want < 1e-12, "{params} beta={beta} m={m}");
                }
            }
        }
    }

    #[test]
    fn log_path_matches_exact_below_30() {
        for params in JohnsonParams::all_up_to(3, 30) {
            let table = HittingTimeTable::new(params, 0.0).unwrap();
            for m in 1..=params.d_max() {
                let exact = numeric::rational_to_f64(table.h[m].exact.as_ref().unwrap());
                let via_log = log_hitting_time(params, 0.0, m).unwrap().exp();
                assert!((via_log - exact).abs() / exact < 1e-10, "{params} m={m}");
            }
        }
    }

    #[test]
    fn first_step_identity() {
        for params in JohnsonParams::all_up_to(3, 30) {
            let h1 = hitting_time_rw(params, 1).unwrap();
            let c = numeric::big_to_rational(&iid_baseline(params));
            assert_eq!(h1, c - BigRational::one(), "{params}");
        }
    }

    #[test]
    fn table_shape_and_monotonicity() {
        let table = HittingTimeTable::new(p(12, 5), 0.0).unwrap();
        assert_eq!(table.h.len(), 6);
        assert_eq!(table.h[0].value(), 0.0);
        assert_eq!(table.h[0].ln, f64::NEG_INFINITY);
        let v = table.values();
        assert!(v.windows(2).all(|w| w[1] > w[0]));

        // Late increments fall below one ulp of h_m here, so only the
        // increments themselves can be strictly positive.
        let params = p(200, 40);
        let big = HittingTimeTable::new(params, 2.0).unwrap();
        assert!(big.h.iter().all(|e| e.exact.is_none()));
        assert!(big.log_values().windows(2).all(|w| w[1] >= w[0]));
        let inc = log_increments(params, 2.0, &log_sizes_for(params));
        assert!(inc[1..].iter().all(|x| x.is_finite()));
    }

    #[test]
    fn metropolis_decreases_with_beta() {
        let params = p(200, 40);
        let tables: Vec<_> = [0.0, 0.5, 1.0, 2.0]
            .iter()
            .map(|&b| HittingTimeTable::new(params, b).unwrap().log_values())
            .collect();
        for m in 1..=40 {
            for w in tables.windows(2) {
                assert!(w[1][m] < w[0][m], "m={m}");
            }
        }
    }

    #[test]
    fn iid_values() {
        assert_eq!(iid_baseline(p(5, 2)), BigUint::from(10u32));
        assert_eq!(iid_baseline(p(3, 1)), BigUint::from(3u32));
    }

    #[test]
    fn log_ratio_small() {
        let v = log_ratio_vs_iid(p(5, 2), 1).unwrap();
        assert!((v - 0.9f64.ln()).abs() < 1e-15);
        assert!(log_ratio_vs_iid(p(5, 2), 0).is_err());
    }

    #[test]
    fn log_ratio_keeps_sign_at_scale() {
        let params = p(200, 40);
        let r1 = log_ratio_vs_iid(params, 1).unwrap();
        assert!(r1 < 0.0 && r1.abs() < 1e-40);
        for m in 2..=40 {
            assert!(log_ratio_vs_iid(params, m).unwrap() > 0.0, "m={m}");
        }
    }

    #[test]
    fn scaling_trend() {
        let alpha = Ratio::new(1u64, 5);
        let trend = entropy_scaling_trend(alpha, &[20, 40, 60, 80, 100]).unwrap();
        assert!(trend.windows(2).all(|w| w[1].1 > w[0].1));
        let h = binary_entropy(alpha);
        assert!((trend[4].1 - h).abs() < 0.06);
        assert!(trend.iter().all(|(_, v)| *v < h));

        assert!(entropy_scaling_trend(Ratio::new(1, 2), &[2]).is_err());
        assert!(entropy_scaling_trend(alpha, &[21]).is_err());
    }

    #[test]
    fn flat_in_start_distance_at_scale() {
        let table = HittingTimeTable::new(p(200, 40), 0.0).unwrap();
        assert!(flatness(&table) < 2.0);
    }
}
