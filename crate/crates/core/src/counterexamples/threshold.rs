use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::binom_u128;

/// Which case of the threshold formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `2k ≤ n`.
    Low,
    /// `n < 2k` and `3k ≤ 2n`.
    Middle,
    /// `2n < 3k`.
    High,
}

impl Branch {
    /// Exact integer case selection.
    pub fn select(n: usize, k: usize) -> Branch {
        if 2 * k <= n {
            Branch::Low
        } else if 3 * k <= 2 * n {
            Branch::Middle
        } else {
            Branch::High
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Low => "low",
            Branch::Middle => "middle",
            Branch::High => "high",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub n: usize,
    pub k: usize,
    pub value: f64,
    pub branch: Branch,
    /// The integer whose base-2 logarithm sets the threshold:
    /// `C(2k,k)` (low, with `p̄ = k/log₂`), `Σ_{i=1}^k C(2(n−k),i)` (middle),
    /// `2^{2(n−k)} − 1` (high).
    pub count: u128,
}

pub(crate) fn check_nk(n: usize, k: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::domain(format!("need n ≥ 3, got {n}")));
    }
    if k < 2 || k > n - 1 {
        return Err(Error::domain(format!(
            "need 2 ≤ k ≤ n − 1, got k = {k}, n = {n}"
        )));
    }
    if n > 60 {
        return Err(Error::domain("n > 60 overflows the exact binomial sums"));
    }
    Ok(())
}

/// `p̄_k`: for `p < p̄_k` the cube pair violates the `p`-Brunn-Minkowski inequality.
pub fn threshold_pbar(n: usize, k: usize) -> Result<Threshold> {
    check_nk(n, k)?;
    let branch = Branch::select(n, k);
    let (nu, ku) = (n as u64, k as u64);
    let (count, value) = match branch {
        Branch::Low => {
            let c = binom_u128(2 * ku, ku);
            (c, k as f64 / (c as f64).log2())
        }
        Branch::Middle => {
            let c: u128 = (1..=ku).map(|i| binom_u128(2 * (nu - ku), i)).sum();
            (c, 1.0 / (c as f64).log2())
        }
        Branch::High => {
            let c = (1u128 << (2 * (n - k))) - 1;
            (c, 1.0 / (c as f64).log2())
        }
    };
    Ok(Threshold {
        n,
        k,
        value,
        branch,
        count,
    })
}

/// All thresholds for `n_min ≤ n ≤ n_max`, `2 ≤ k ≤ n − 1`, ordered by `(n, k)`.
pub fn threshold_table(n_min: usize, n_max: usize) -> Result<Vec<Threshold>> {
    let mut rows = Vec::new();
    for n in n_min.max(3)..=n_max {
        for k in 2..n {
            rows.push(threshold_pbar(n, k)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let t = threshold_pbar(3, 2).unwrap();
        assert_eq!(t.branch, Branch::Middle);
        assert!((t.value - 1.0 / 3f64.log2()).abs() < 1e-15);
        assert!((t.value - 0.63093).abs() < 1e-5);
        let t = threshold_pbar(4, 2).unwrap();
        assert_eq!(t.branch, Branch::Low);
        assert!((t.value - 2.0 / 6f64.log2()).abs() < 1e-15);
        assert!((t.value - 0.77371).abs() < 1e-5);
        let t = threshold_pbar(5, 4).unwrap();
        assert_eq!(t.branch, Branch::High);
        assert!((t.value - 0.63093).abs() < 1e-5);
        assert_eq!(threshold_pbar(5, 3).unwrap().count, 14);
    }

    #[test]
    fn domain() {
        assert!(threshold_pbar(2, 1).is_err());
        assert!(threshold_pbar(5, 1).is_err());
        assert!(threshold_pbar(5, 5).is_err());
    }

    #[test]
    fn below_one_and_case_bounds() {
        for n in 3..=50 {
            for k in 2..n {
                let t = threshold_pbar(n, k).unwrap();
                assert!(t.value > 0.0 && t.value < 1.0, "({n},{k})");
                match t.branch {
                    Branch::Middle => {
                        assert!(t.value < 1.0 / (2.0 * n as f64 / 3.0).log2() + 1e-15)
                    }
                    Branch::High => assert!(t.value <= 1.0 / 3f64.log2() + 1e-15),
                    Branch::Low => {}
                }
            }
        }
    }

    #[test]
    fn low_branch_decreases_to_one_half() {
        let vals: Vec<f64> = (2..=25)
            .map(|k| threshold_pbar(50, k).unwrap().value)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(vals.iter().all(|&v| v > 0.5));
        assert!(vals.last().unwrap() - 0.5 < 0.1);
    }

    #[test]
    fn table_order_and_size() {
        let t = threshold_table(3, 10).unwrap();
        assert_eq!(t.len(), (3..=10).map(|n| n - 2).sum::<usize>());
        assert_eq!((t[0].n, t[0].k), (3, 2));
    }
}
