//! Numeric helpers shared by the analytic modules: exact binomials, natural
//! logs of big integers and rationals, log-gamma binomials, and a compensated
//! log-space accumulator.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

/// Instances with `n` at or below this use exact rational arithmetic.
pub const DEFAULT_EXACT_CUTOFF: usize = 64;

/// Selects between the exact big-integer path and the log-gamma float path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exactness {
    pub cutoff: usize,
}

impl Default for Exactness {
    fn default() -> Self {
        Exactness { cutoff: DEFAULT_EXACT_CUTOFF }
    }
}

impl Exactness {
    pub fn exact_for(&self, n: usize) -> bool {
        n <= self.cutoff
    }
}

/// `C(n, r)` exactly; zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 1..=r {
        // acc * (n - r + i) is divisible by i at every step.
        acc *= n - r + i;
        acc /= i;
    }
    acc
}

/// Natural log of a positive big integer, accurate to a few ulps.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_bigint(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    ln_biguint(x.magnitude())
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// Nearest double to a rational, computed from its logarithm when the
/// numerator or denominator is too large for a direct conversion.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * ln_rational(&x.abs()).exp()
}

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn big_to_rational(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

/// `ln C(n, r)` through log-gamma.
pub fn ln_binomial(n: u64, r: u64) -> f64 {
    assert!(r <= n, "ln_binomial({n}, {r})");
    if r == 0 || r == n {
        return 0.0;
    }
    let (n, r) = (n as f64, r as f64);
    ln_gamma(n + 1.0) - ln_gamma(r + 1.0) - ln_gamma(n - r + 1.0)
}

/// `ln(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Binary entropy `-a ln a - (1-a) ln(1-a)` in nats.
pub fn binary_entropy(alpha: f64) -> f64 {
    if alpha <= 0.0 || alpha >= 1.0 {
        return 0.0;
    }
    -alpha * alpha.ln() - (1.0 - alpha) * (1.0 - alpha).ln()
}

/// Sum of positive terms supplied as natural logs.
///
/// Terms are rescaled against the running maximum and added with
/// Neumaier compensation, so summands spanning many orders of magnitude
/// neither overflow nor lose their low-order contributions.
#[derive(Debug, Clone, Copy)]
pub struct LogAccumulator {
    scale: f64,
    sum: f64,
    comp: f64,
}

impl Default for LogAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl LogAccumulator {
    pub fn new() -> Self {
        LogAccumulator { scale: f64::NEG_INFINITY, sum: 0.0, comp: 0.0 }
    }

    pub fn add_ln(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if ln_term > self.scale {
            let factor = (self.scale - ln_term).exp();
            self.sum *= factor;
            self.comp *= factor;
            self.scale = ln_term;
        }
        let x = (ln_term - self.scale).exp();
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Natural log of the accumulated sum; `-inf` when empty.
    pub fn ln(&self) -> f64 {
        if self.scale == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        self.scale + (self.sum + self.comp).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: usize) -> Vec<Vec<BigUint>> {
        let mut rows = vec![vec![BigUint::one()]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![BigUint::one(); i + 1];
            for j in 1..i {
                row[j] = &prev[j - 1] + &prev[j];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binomial_matches_pascal() {
        let rows = pascal(200);
        for n in 0..=200u64 {
            for r in 0..=n {
                assert_eq!(binomial(n, r), rows[n as usize][r as usize], "C({n},{r})");
            }
        }
        assert_eq!(binomial(3, 5), BigUint::zero());
    }

    #[test]
    fn ln_of_huge_integers() {
        let x = BigUint::one() << 3000u32;
        let expected = 3000.0 * std::f64::consts::LN_2;
        assert!((ln_biguint(&x) - expected).abs() / expected < 1e-15);
        let y = binomial(2000, 1000);
        let via_gamma = ln_binomial(2000, 1000);
        assert!((ln_biguint(&y) - via_gamma).abs() / via_gamma < 1e-12);
    }

    #[test]
    fn ln_binomial_small() {
        assert_eq!(ln_binomial(10, 0), 0.0);
        assert!((ln_binomial(5, 2) - 10f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn accumulator_matches_direct_sum() {
        let terms = [1.0f64, 2.5, 1e-3, 7.0, 1e5];
        let mut acc = LogAccumulator::new();
        for t in terms {
            acc.add_ln(t.ln());
        }
        let direct: f64 = terms.iter().sum();
        assert!((acc.ln() - direct.ln()).abs() < 1e-15);
        assert_eq!(LogAccumulator::new().ln(), f64::NEG_INFINITY);
    }

    #[test]
    fn accumulator_handles_overflowing_terms() {
        let mut acc = LogAccumulator::new();
        acc.add_ln(1000.0);
        acc.add_ln(1000.0);
        assert!((acc.ln() - (1000.0 + std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn log_add_exp_identities() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 3.0), 3.0);
        assert!((log_add_exp(0.0, 0.0) - std::f64::consts::LN_2).abs() < 1e-16);
    }

    #[test]
    fn binary_entropy_at_one_fifth() {
        assert!((binary_entropy(0.2) - 0.500_402_423_538_188).abs() < 1e-12);
        assert_eq!(binary_entropy(0.0), 0.0);
    }

    #[test]
    fn rational_conversion_beyond_f64_range() {
        let big = BigRational::from_integer(BigInt::from(10u32).pow(400));
        let v = rational_to_f64(&(big.clone() / (big * BigInt::from(4))));
        assert_eq!(v, 0.25);
    }
}
