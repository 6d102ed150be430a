//! Distance shells around a fixed target and the entropy landscape they
//! induce.
//!
//! The shell at distance `d` holds every subset sharing exactly `k - d`
//! elements with the target, so its size is `C(k, d) * C(n - k, d)`. The
//! entropy `S(d)` is the natural log of that size.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::Result;
use crate::numeric::{self, Exactness};
use crate::params::JohnsonParams;

/// Exact number of subsets at swap distance `d` from the target.
pub fn shell_size(params: JohnsonParams, d: usize) -> Result<BigUint> {
    params.check_distance(d)?;
    let (n, k, d) = (params.n() as u64, params.k() as u64, d as u64);
    Ok(numeric::binomial(k, d) * numeric::binomial(n - k, d))
}

/// `ln |shell d|` through log-gamma, without building big integers.
pub fn log_shell_size_approx(params: JohnsonParams, d: usize) -> Result<f64> {
    params.check_distance(d)?;
    let (n, k, d) = (params.n() as u64, params.k() as u64, d as u64);
    Ok(numeric::ln_binomial(k, d) + numeric::ln_binomial(n - k, d))
}

/// Entropy increment `S(d+1) - S(d) = ln((k-d)(n-k-d) / (d+1)^2)`.
pub fn entropy_increment(params: JohnsonParams, d: usize) -> f64 {
    let (n, k, d) = (params.n() as f64, params.k() as f64, d as f64);
    ((k - d) * (n - k - d) / ((d + 1.0) * (d + 1.0))).ln()
}

/// Continuous maximizer of the shell sizes, `(k(n-k) - 1) / (n + 2)`.
pub fn continuous_argmax(params: JohnsonParams) -> BigRational {
    let num = params.degree() as i64 - 1;
    BigRational::new(BigInt::from(num), BigInt::from(params.n() as i64 + 2))
}

/// Shell sizes normalized by `C(n, k)`: the hypergeometric law of the
/// distance of a uniformly random subset.
pub fn shell_distribution(params: JohnsonParams) -> Vec<BigRational> {
    let total = BigInt::from(numeric::binomial(params.n() as u64, params.k() as u64));
    (0..=params.d_max())
        .map(|d| {
            let size = BigInt::from(shell_size(params, d).expect("d in range"));
            BigRational::new(size, total.clone())
        })
        .collect()
}

/// Shell sizes, entropy landscape and maximizers of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellProfile {
    pub params: JohnsonParams,
    /// `|shell d|` for `d = 0..=d_max`.
    pub sizes: Vec<BigUint>,
    /// `S(d) = ln |shell d|`.
    pub log_sizes: Vec<f64>,
    /// `S(d+1) - S(d)` for `d = 0..d_max`.
    pub increments: Vec<f64>,
    /// Distances attaining the largest shell; two entries on a tie.
    pub argmax_set: BTreeSet<usize>,
    /// `(k(n-k) - 1) / (n + 2)`.
    pub continuous_argmax: BigRational,
    /// Whether `log_sizes` came from the exact big-integer path.
    pub exact_logs: bool,
}

impl ShellProfile {
    pub fn new(params: JohnsonParams) -> Self {
        Self::with_exactness(params, Exactness::default())
    }

    pub fn with_exactness(params: JohnsonParams, exactness: Exactness) -> Self {
        let d_max = params.d_max();
        let sizes: Vec<BigUint> = (0..=d_max)
            .map(|d| shell_size(params, d).expect("d in range"))
            .collect();
        let exact_logs = exactness.exact_for(params.n());
        let log_sizes = if exact_logs {
            sizes.iter().map(numeric::ln_biguint).collect()
        } else {
            (0..=d_max)
                .map(|d| log_shell_size_approx(params, d).expect("d in range"))
                .collect()
        };
        let increments = (0..d_max).map(|d| entropy_increment(params, d)).collect();

        let largest = sizes.iter().max().expect("nonempty").clone();
        let argmax_set = sizes
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == largest)
            .map(|(d, _)| d)
            .collect();

        ShellProfile {
            params,
            sizes,
            log_sizes,
            increments,
            argmax_set,
            continuous_argmax: continuous_argmax(params),
            exact_logs,
        }
    }

    pub fn total(&self) -> BigUint {
        self.sizes.iter().sum()
    }

    pub fn continuous_argmax_f64(&self) -> f64 {
        numeric::rational_to_f64(&self.continuous_argmax)
    }

    /// `floor` and `ceil` of the continuous maximizer.
    pub fn argmax_bracket(&self) -> (usize, usize) {
        let (q, r) = self
            .continuous_argmax
            .numer()
            .div_rem(self.continuous_argmax.denom());
        let floor = q.to_usize().expect("nonnegative");
        (floor, if r.is_zero() { floor } else { floor + 1 })
    }

    /// Whether the largest shell size is attained at `floor` or `ceil` of
    /// the continuous maximizer.
    pub fn max_attained_in_bracket(&self) -> bool {
        let (lo, hi) = self.argmax_bracket();
        self.argmax_set.contains(&lo) || self.argmax_set.contains(&hi)
    }

    /// The maximizing distances predicted by the shell-size ratio: the single
    /// distance `ceil(d_hat)` when `d_hat` is fractional, and the tied pair
    /// `{d_hat, d_hat + 1}` when it is an integer (the ratio is then exactly
    /// one between them).
    pub fn predicted_argmax(&self) -> BTreeSet<usize> {
        let (lo, hi) = self.argmax_bracket();
        if lo == hi {
            [lo, lo + 1].into_iter().filter(|&d| d <= self.params.d_max()).collect()
        } else {
            BTreeSet::from([hi])
        }
    }

    /// True when the sign of consecutive differences goes from nonnegative
    /// to nonpositive at most once.
    pub fn is_unimodal(&self) -> bool {
        let mut descending = false;
        for w in self.sizes.windows(2) {
            if w[1] > w[0] {
                if descending {
                    return false;
                }
            } else if w[1] < w[0] {
                descending = true;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn p(n: usize, k: usize) -> JohnsonParams {
        JohnsonParams::new(n, k).unwrap()
    }

    /// Counts 2-subsets of {0..n} by overlap with {0, 1}.
    fn enumerate_shells(n: usize, k: usize) -> Vec<u64> {
        let target: u64 = (1 << k) - 1;
        let mut counts = vec![0u64; k.min(n - k) + 1];
        for mask in 0u64..(1 << n) {
            if mask.count_ones() as usize == k {
                let d = (mask & !target).count_ones() as usize;
                counts[d] += 1;
            }
        }
        counts
    }

    #[test]
    fn shell_sizes_j52() {
        assert_eq!(enumerate_shells(5, 2), vec![1, 6, 3]);
        let sizes: Vec<BigUint> = (0..=2).map(|d| shell_size(p(5, 2), d).unwrap()).collect();
        assert_eq!(sizes, vec![1u32.into(), 6u32.into(), 3u32.into()]);
    }

    #[test]
    fn shell_sizes_match_enumeration() {
        for params in JohnsonParams::all_up_to(2, 12) {
            let expected = enumerate_shells(params.n(), params.k());
            let got: Vec<u64> = ShellProfile::new(params)
                .sizes
                .iter()
                .map(|s| s.to_u64().unwrap())
                .collect();
            assert_eq!(got, expected, "{params}");
        }
    }

    #[test]
    fn out_of_range_distance() {
        assert!(shell_size(p(5, 2), 3).is_err());
        assert!(log_shell_size_approx(p(5, 2), 3).is_err());
    }

    #[test]
    fn profile_j52() {
        let prof = ShellProfile::new(p(5, 2));
        assert_eq!(prof.continuous_argmax, numeric::ratio(5, 7));
        assert_eq!(prof.argmax_set, BTreeSet::from([1]));
        assert_eq!(prof.argmax_bracket(), (0, 1));
        assert!((prof.log_sizes[1] - 6f64.ln()).abs() < 1e-15);
        assert!((prof.increments[0] - 6f64.ln()).abs() < 1e-15);
        assert!((prof.increments[1] - 0.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn profile_j200_40() {
        let prof = ShellProfile::new(p(200, 40));
        assert_eq!(prof.params.d_max(), 40);
        assert_eq!(format!("{:.2}", prof.continuous_argmax_f64()), "31.68");
        assert!(!prof.exact_logs);
    }

    #[test]
    fn ties_keep_both_distances() {
        // J(4,2): sizes (1, 4, 1); J(6,3): sizes (1, 9, 9, 1).
        // d_hat = 1 exactly, and shells 1 and 2 tie, so the maximizers are
        // not both inside {floor, ceil} = {1}.
        let prof = ShellProfile::new(p(6, 3));
        assert_eq!(prof.argmax_set, BTreeSet::from([1, 2]));
        assert_eq!(prof.argmax_bracket(), (1, 1));
        assert!(prof.max_attained_in_bracket());
        assert_eq!(prof.predicted_argmax(), prof.argmax_set);
    }

    #[test]
    fn maximizer_characterization() {
        for params in JohnsonParams::all_up_to(3, 60) {
            let prof = ShellProfile::new(params);
            assert_eq!(prof.argmax_set, prof.predicted_argmax(), "{params}");
            assert!(prof.max_attained_in_bracket(), "{params}");
            assert!(*prof.argmax_set.first().unwrap() >= 1, "{params}");
        }
    }

    #[test]
    fn increment_signs_around_fractional_maximizer() {
        for params in JohnsonParams::all_up_to(3, 60) {
            let prof = ShellProfile::new(params);
            let d_hat = prof.continuous_argmax_f64();
            if !prof.continuous_argmax.is_integer() {
                for (d, inc) in prof.increments.iter().enumerate() {
                    if (d as f64) < d_hat {
                        assert!(*inc > 0.0, "{params} d={d}");
                    } else {
                        assert!(*inc < 0.0, "{params} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn distribution_j52() {
        let dist = shell_distribution(p(5, 2));
        assert_eq!(dist, vec![numeric::ratio(1, 10), numeric::ratio(6, 10), numeric::ratio(3, 10)]);
        let mean: BigRational = dist
            .iter()
            .enumerate()
            .map(|(d, x)| x * BigInt::from(d))
            .sum();
        assert_eq!(mean, numeric::ratio(6, 5));
        assert!(dist.iter().sum::<BigRational>().is_one());
    }

    #[test]
    fn log_gamma_path_j52() {
        assert_eq!(log_shell_size_approx(p(5, 2), 0).unwrap(), 0.0);
        assert!((log_shell_size_approx(p(5, 2), 1).unwrap() - 1.791_759_469_228_055).abs() < 1e-12);
    }

    #[test]
    fn log_gamma_path_agrees_with_exact_up_to_500() {
        for &(n, k) in &[(200, 40), (500, 250), (500, 17), (333, 100), (64, 31)] {
            let params = p(n, k);
            for d in 0..=params.d_max() {
                let exact = numeric::ln_biguint(&shell_size(params, d).unwrap());
                let approx = log_shell_size_approx(params, d).unwrap();
                let err = (exact - approx).abs() / exact.abs().max(1.0);
                assert!(err < 1e-10, "{params} d={d}: {exact} vs {approx}");
            }
        }
    }
}
