use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A Johnson graph instance `J(n, k)`: `k`-subsets of an `n`-element set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct JohnsonParams {
    n: usize,
    k: usize,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    k: usize,
}

impl TryFrom<RawParams> for JohnsonParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        JohnsonParams::new(raw.n, raw.k)
    }
}

impl From<JohnsonParams> for RawParams {
    fn from(p: JohnsonParams) -> Self {
        RawParams { n: p.n, k: p.k }
    }
}

impl JohnsonParams {
    /// Requires `1 <= k <= n - 1`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return domain(format!("need 1 <= k <= n-1, got n={n}, k={k}"));
        }
        Ok(JohnsonParams { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Largest possible swap distance, `min(k, n - k)`.
    pub fn d_max(&self) -> usize {
        self.k.min(self.n - self.k)
    }

    /// Vertex degree `k(n - k)`, the number of distinct single swaps.
    pub fn degree(&self) -> u64 {
        (self.k as u64) * ((self.n - self.k) as u64)
    }

    /// `k / n` as an exact ratio.
    pub fn alpha(&self) -> Ratio<usize> {
        Ratio::new(self.k, self.n)
    }

    pub fn alpha_f64(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// `J(2, 1)` is a single edge whose distance chain just flips between 0
    /// and 1; it is excluded from every chain-level computation.
    pub fn is_degenerate(&self) -> bool {
        self.n == 2 && self.k == 1
    }

    pub fn require_chain(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::UnsupportedInstance { n: self.n, k: self.k })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_distance(&self, d: usize) -> Result<()> {
        if d > self.d_max() {
            domain(format!("distance {d} outside 0..={} for {self}", self.d_max()))
        } else {
            Ok(())
        }
    }

    /// Every valid instance with `n` in `lo..=hi`.
    pub fn all_up_to(lo: usize, hi: usize) -> impl Iterator<Item = JohnsonParams> {
        (lo.max(2)..=hi).flat_map(|n| (1..n).map(move |k| JohnsonParams { n, k }))
    }
}

impl fmt::Display for JohnsonParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J({},{})", self.n, self.k)
    }
}
