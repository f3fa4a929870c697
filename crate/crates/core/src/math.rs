//! Floating-point helpers that work without `std`.
//!
//! Binomial and Poisson probabilities use Loader's saddle-point expansion
//! (`stirlerr` + `bd0`), which keeps full relative precision for atom numbers
//! far beyond the range where `exp(lgamma(..))` differences lose digits.

use alloc::vec::Vec;

pub const LN_2PI: f64 = 1.837_877_066_409_345_5;
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn atan(x: f64) -> f64 {
    libm::atan(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

/// `ln(n!)`.
pub fn ln_factorial(n: u32) -> f64 {
    if n < 2 {
        0.0
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// Gaussian probability density.
pub fn normal_pdf(x: f64, mean: f64, sigma: f64) -> f64 {
    let z = (x - mean) / sigma;
    exp(-0.5 * z * z) / (SQRT_2PI * sigma)
}

/// Error of Stirling's approximation, `ln(n!) - [ln√(2π) + (n+½)ln n - n]`.
pub(crate) fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;

    if n <= 15.0 {
        // n! is exact in f64 up to 22!, so the log carries one rounding only.
        let mut fact = 1.0;
        let mut k = 2.0;
        while k <= n {
            fact *= k;
            k += 1.0;
        }
        return ln(fact) - (n + 0.5) * ln(n) + n - 0.5 * LN_2PI;
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x/np) + np - x`, evaluated without cancellation.
pub(crate) fn bd0(x: f64, np: f64) -> f64 {
    if abs(x - np) < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        if abs(s) < f64::MIN_POSITIVE {
            return s;
        }
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
    }
    x * ln(x / np) + np - x
}

/// Binomial probability `C(n, k) p^k (1-p)^(n-k)`, with `q = 1 - p` passed
/// separately so that rational `p` such as `Q/M` keeps its complement exact.
pub fn binomial_pmf(n: u32, k: u32, p: f64, q: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    if k == 0 {
        if n == 0 {
            return 1.0;
        }
        let lc = if p < 0.1 {
            -bd0(nf, nf * q) - nf * p
        } else {
            nf * ln(q)
        };
        return exp(lc);
    }
    if k == n {
        let lc = if q < 0.1 {
            -bd0(nf, nf * p) - nf * q
        } else {
            nf * ln(p)
        };
        return exp(lc);
    }
    let x = k as f64;
    let lc = stirlerr(nf) - stirlerr(x) - stirlerr(nf - x) - bd0(x, nf * p) - bd0(nf - x, nf * q);
    let lf = LN_2PI + ln(x) + ln_1p(-x / nf);
    exp(lc - 0.5 * lf)
}

/// Poisson probability `λ^k e^{-λ} / k!`.
pub fn poisson_pmf(k: u32, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if k == 0 {
        return exp(-lambda);
    }
    let x = k as f64;
    exp(-stirlerr(x) - bd0(x, lambda)) / sqrt(2.0 * core::f64::consts::PI * x)
}

/// Pairwise (cascade) summation; the result depends only on the order of
/// `values`, never on how the caller chunked the work.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BASE: usize = 16;
    if values.len() <= BASE {
        return values.iter().sum();
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Streaming counterpart of [`pairwise_sum`]: partial sums are merged like a
/// binary counter, so the summation tree is fixed by the number of values.
#[derive(Debug, Clone, Default)]
pub struct PairwiseAccumulator {
    stack: Vec<(u32, f64)>,
}

impl PairwiseAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, value: f64) {
        let mut level = 0;
        let mut sum = value;
        while let Some(&(top_level, top)) = self.stack.last() {
            if top_level != level {
                break;
            }
            self.stack.pop();
            sum += top;
            level += 1;
        }
        self.stack.push((level, sum));
    }

    pub fn total(&self) -> f64 {
        self.stack.iter().rev().fold(0.0, |acc, &(_, s)| acc + s)
    }
}
