//! Share sizes and the asymptotic overhead comparison against earlier
//! rushing-secure constructions.
//!
//! Overheads are compared in the log2 domain as `coefficient * l + constant`
//! for security level `2^-l` and a one-element underlying share.

use num_rational::Ratio;

use crate::ciss::CissParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShareOverhead {
    pub elements: u64,
    pub bits: u64,
}

/// Size of one share: `(2n - 1) l' + 2m - 1` elements of `w` bits.
pub fn share_overhead(n: usize, m: usize, lprime: usize, w: u32) -> Result<ShareOverhead> {
    if n == 0 || m == 0 || lprime == 0 || w == 0 {
        return Err(Error::InvalidConfig(
            "share_overhead parameters must be at least 1".into(),
        ));
    }
    let elements = CissParams { n, m, lprime }.share_elements() as u64;
    Ok(ShareOverhead {
        elements,
        bits: elements * w as u64,
    })
}

/// `log2(overhead) = coefficient * l + constant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogOverhead {
    pub coefficient: u64,
    pub constant: f64,
    pub log2: f64,
}

impl LogOverhead {
    fn new(coefficient: u64, constant: f64, l: u32) -> Self {
        Self {
            coefficient,
            constant,
            log2: coefficient as f64 * l as f64 + constant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverheadComparison {
    pub n: usize,
    pub k: usize,
    pub l: u32,
    /// This construction: `2^{l(2n-1)}`.
    pub ours: LogOverhead,
    /// Lower bound for the IOS12 construction:
    /// `(n^2(n+1))^{4n+1} 2^{l(4n+1)}`.
    pub ios12: LogOverhead,
    /// The PW91 construction, transcribed as stated:
    /// `(n - ceil(k/2))^{n+k} 2^{(n+k) l}`. `None` when the base is zero.
    pub pw91: Option<LogOverhead>,
}

impl OverheadComparison {
    /// `(4n + 1) / (2n - 1)`, tending to 2 as `n` grows.
    pub fn ios12_coefficient_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.ios12.coefficient, self.ours.coefficient)
    }

    /// `(n + k) / (2n - 1)`, close to 1 when `k` is close to `n`.
    pub fn pw91_coefficient_ratio(&self) -> Ratio<u64> {
        Ratio::new((self.n + self.k) as u64, self.ours.coefficient)
    }
}

pub fn compare_overheads(n: usize, k: usize, l: u32) -> Result<OverheadComparison> {
    if k == 0 || k > n {
        return Err(Error::InvalidThreshold { k, n });
    }
    let nf = n as f64;
    let ours = LogOverhead::new(2 * n as u64 - 1, 0.0, l);
    let c = 4 * n as u64 + 1;
    let ios12 = LogOverhead::new(c, c as f64 * (nf * nf * (nf + 1.0)).log2(), l);
    let base = n - k.div_ceil(2);
    let pw = (n + k) as u64;
    let pw91 = (base > 0).then(|| LogOverhead::new(pw, pw as f64 * (base as f64).log2(), l));
    Ok(OverheadComparison {
        n,
        k,
        l,
        ours,
        ios12,
        pw91,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn share_sizes() {
        assert_eq!(
            share_overhead(3, 2, 4, 4).unwrap(),
            ShareOverhead {
                elements: 23,
                bits: 92
            }
        );
        assert_eq!(share_overhead(1, 1, 1, 1).unwrap().elements, 2);
        let a = share_overhead(5, 2, 3, 4).unwrap();
        let b = share_overhead(5, 2, 3, 8).unwrap();
        assert_eq!(a.elements, b.elements);
        assert_eq!(2 * a.bits, b.bits);
        assert!(share_overhead(0, 1, 1, 1).is_err());
    }

    #[test]
    fn coefficients() {
        for n in 1..=12 {
            for k in 1..=n {
                let c = compare_overheads(n, k, 80).unwrap();
                assert_eq!(c.ours.coefficient, 2 * n as u64 - 1);
                assert_eq!(c.ios12.coefficient, 4 * n as u64 + 1);
                if let Some(pw) = c.pw91 {
                    assert_eq!(pw.coefficient, (n + k) as u64);
                }
            }
        }
        let c = compare_overheads(3, 2, 10).unwrap();
        assert_eq!(c.ours.log2, 50.0);
        assert!((c.ios12.log2 - (13.0 * 10.0 + 13.0 * 36f64.log2())).abs() < 1e-9);
        assert_eq!(c.pw91.unwrap().log2, 5.0 * 10.0 + 5.0);
        assert!(compare_overheads(2, 3, 10).is_err());
    }

    #[test]
    fn limits() {
        // the IOS12 coefficient ratio approaches 2 from above
        let far = compare_overheads(1000, 1, 1)
            .unwrap()
            .ios12_coefficient_ratio();
        assert!(far > Ratio::from_integer(2) && far < Ratio::new(2002, 1000));
        // k = n: (n + k) / (2n - 1) = 2n / (2n - 1)
        let k_eq_n = compare_overheads(10, 10, 1)
            .unwrap()
            .pw91_coefficient_ratio();
        assert_eq!(k_eq_n, Ratio::new(20, 19));
        assert_eq!(compare_overheads(4, 2, 0).unwrap().ours.log2, 0.0);
        assert_eq!(compare_overheads(1, 1, 5).unwrap().pw91, None);
    }
}
