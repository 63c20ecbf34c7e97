//! Closed-form crossing-number bounds and their constants.
//!
//! Every bound returns a [`BoundValue`]: the formula's value plus a flag for
//! whether the side condition that makes it a valid lower bound holds. The
//! value is reported even when the flag is false.

use alloc::format;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::{math, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub applicable: bool,
    /// The side condition, e.g. `e >= 4n`.
    pub hypothesis: String,
}

/// Constants of the `e >= c n` crossing bound for graphs whose subgraphs
/// satisfy `e(H) <= A n(H)^(1+alpha)`:
/// `c = 88^(2 alpha) 2^(alpha+2) A` and
/// `c' = 1 / (180^2 2^(1+2/alpha) A^(1/alpha))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(rename = "A")]
    pub a: f64,
    pub alpha: f64,
    pub c: f64,
    pub c_prime: f64,
    /// `ln c'`; `c'` underflows long before its logarithm does.
    pub ln_c_prime: f64,
}

/// Below this `alpha` the constants are evaluated in log space.
const LOG_SPACE_ALPHA: f64 = 0.25;

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {x}")))
    }
}

pub fn theorem2_constants(a: f64, alpha: f64) -> Result<BoundParams> {
    positive("A", a)?;
    positive("alpha", alpha)?;
    let ln_c_prime = -(2.0 * math::ln(180.0)
        + (1.0 + 2.0 / alpha) * core::f64::consts::LN_2
        + math::ln(a) / alpha);
    let (c, c_prime) = if alpha < LOG_SPACE_ALPHA {
        let ln_c = 2.0 * alpha * math::ln(88.0) + (alpha + 2.0) * core::f64::consts::LN_2 + math::ln(a);
        (math::exp(ln_c), math::exp(ln_c_prime))
    } else {
        let c = math::powf(88.0, 2.0 * alpha) * math::powf(2.0, alpha + 2.0) * a;
        let c_prime =
            1.0 / (180.0 * 180.0 * math::powf(2.0, 1.0 + 2.0 / alpha) * math::powf(a, 1.0 / alpha));
        (c, c_prime)
    };
    Ok(BoundParams { a, alpha, c, c_prime, ln_c_prime })
}

/// `e^3 / (64 n^2)`, applicable when `e >= 4n`.
pub fn crossing_lemma_lb(n: usize, e: usize) -> Result<BoundValue> {
    if n == 0 {
        return Err(Error::InvalidParameter(String::from("n must be at least 1")));
    }
    let (nf, ef) = (n as f64, e as f64);
    Ok(BoundValue {
        value: ef * ef * ef / (64.0 * nf * nf),
        applicable: e >= 4 * n,
        hypothesis: String::from("e >= 4n"),
    })
}

/// `max(0, e - 3n + 6)`; always applicable.
pub fn euler_lb(n: usize, e: usize) -> Result<BoundValue> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n must be at least 3, got {n}")));
    }
    let value = (e + 6).saturating_sub(3 * n);
    Ok(BoundValue { value: value as f64, applicable: true, hypothesis: String::from("none") })
}

/// `c' e^(2+1/alpha) / n^(1+1/alpha)`, applicable when `e >= c n`.
pub fn theorem2_lb(n: usize, e: usize, params: &BoundParams) -> Result<BoundValue> {
    if n == 0 {
        return Err(Error::InvalidParameter(String::from("n must be at least 1")));
    }
    let value = power_ratio(params.c_prime, params.ln_c_prime, params.alpha, n, e);
    Ok(BoundValue {
        value,
        applicable: (e as f64) >= params.c * n as f64,
        hypothesis: format!("e >= c n with c = {}", params.c),
    })
}

/// `c' e^(2+1/alpha) / n^(1+1/alpha)`, in log space for small `alpha`.
fn power_ratio(c_prime: f64, ln_c_prime: f64, alpha: f64, n: usize, e: usize) -> f64 {
    if e == 0 {
        return 0.0;
    }
    let (nf, ef) = (n as f64, e as f64);
    if alpha < LOG_SPACE_ALPHA {
        math::exp(ln_c_prime + (2.0 + 1.0 / alpha) * math::ln(ef) - (1.0 + 1.0 / alpha) * math::ln(nf))
    } else {
        c_prime * math::powf(ef, 2.0 + 1.0 / alpha) / math::powf(nf, 1.0 + 1.0 / alpha)
    }
}

/// The `e >= c n log^2 n` form with caller-supplied constants. `log` is the
/// natural logarithm.
pub fn pst_lb(n: usize, e: usize, alpha: f64, c: f64, c_prime: f64) -> Result<BoundValue> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    positive("alpha", alpha)?;
    positive("c", c)?;
    positive("c'", c_prime)?;
    let ln_n = math::ln(n as f64);
    Ok(BoundValue {
        value: power_ratio(c_prime, math::ln(c_prime), alpha, n, e),
        applicable: (e as f64) >= c * n as f64 * ln_n * ln_n,
        hypothesis: format!("e >= c n (ln n)^2 with c = {c}"),
    })
}

/// The `C_{2k}`-free specialization: `theorem2_lb` with
/// `theorem2_constants(100k, 1/k)`, i.e. `c' e^(2+k) / n^(1+k)`.
pub fn corollary_c2k_lb(n: usize, e: usize, k: usize) -> Result<BoundValue> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("cycle parameter k must be >= 2, got {k}")));
    }
    let params = theorem2_constants(100.0 * k as f64, 1.0 / k as f64)?;
    theorem2_lb(n, e, &params)
}

/// `100 k n^(1+1/k)`: the edge bound for graphs without a `2k`-cycle.
pub fn bs_max_edges(n: usize, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("cycle parameter k must be >= 2, got {k}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter(String::from("n must be at least 1")));
    }
    Ok(100.0 * k as f64 * math::powf(n as f64, 1.0 + 1.0 / k as f64))
}

/// Constants of the converse statement: if every subgraph with at least `N`
/// edges has `cr(H) <= e(H)^2 / 2^(16+3/alpha)`, then
/// `e(G) <= A n^(1+alpha)` with `A = max(88^2 2^(1+3/alpha), N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualParams {
    #[serde(rename = "N")]
    pub n_edges: f64,
    pub alpha: f64,
    #[serde(rename = "A_dual")]
    pub a_dual: f64,
    pub threshold_exponent: f64,
}

impl DualParams {
    /// `e^2 / 2^(16+3/alpha)`.
    pub fn threshold(&self, e: f64) -> f64 {
        e * e / math::powf(2.0, self.threshold_exponent)
    }

    /// `A n^(1+alpha)`.
    pub fn edge_bound(&self, n: f64) -> f64 {
        self.a_dual * math::powf(n, 1.0 + self.alpha)
    }
}

pub fn dual_constants(n_edges: f64, alpha: f64) -> Result<DualParams> {
    positive("N", n_edges)?;
    positive("alpha", alpha)?;
    let a_dual = (88.0 * 88.0 * math::powf(2.0, 1.0 + 3.0 / alpha)).max(n_edges);
    Ok(DualParams { n_edges, alpha, a_dual, threshold_exponent: 16.0 + 3.0 / alpha })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn crossing_lemma() {
        let b = crossing_lemma_lb(10, 40).unwrap();
        assert_eq!((b.value, b.applicable), (10.0, true));
        let b = crossing_lemma_lb(10, 20).unwrap();
        assert_eq!((b.value, b.applicable), (1.25, false));
        let b = crossing_lemma_lb(1, 0).unwrap();
        assert_eq!((b.value, b.applicable), (0.0, false));
    }

    #[test]
    fn euler() {
        assert_eq!(euler_lb(5, 10).unwrap().value, 1.0);
        assert_eq!(euler_lb(6, 15).unwrap().value, 3.0);
        assert_eq!(euler_lb(4, 3).unwrap().value, 0.0);
        assert!(euler_lb(2, 1).is_err());
    }

    #[test]
    fn constants() {
        let p = theorem2_constants(0.5, 1.0).unwrap();
        assert_eq!(p.c, 30976.0);
        assert_eq!(p.c_prime, 1.0 / 129600.0);
        let p = theorem2_constants(1.0, 1.0).unwrap();
        assert_eq!(p.c, 61952.0);
        assert_eq!(p.c_prime, 1.0 / 259200.0);
        let p = theorem2_constants(200.0, 0.5).unwrap();
        let c = 88.0 * 2f64.powf(2.5) * 200.0;
        assert!((p.c / c - 1.0).abs() < 1e-14);
        let cp = 1.0 / (180.0 * 180.0 * 32.0 * 200.0 * 200.0);
        assert!((p.c_prime / cp - 1.0).abs() < 1e-14);
        assert!(theorem2_constants(0.0, 1.0).is_err());
        assert!(theorem2_constants(1.0, -1.0).is_err());
    }

    #[test]
    fn log_space_matches_direct_where_both_fit() {
        for alpha in [0.05, 0.1, 0.2, 0.24] {
            let p = theorem2_constants(3.0, alpha).unwrap();
            let c = 88f64.powf(2.0 * alpha) * 2f64.powf(alpha + 2.0) * 3.0;
            let cp = 1.0 / (32400.0 * 2f64.powf(1.0 + 2.0 / alpha) * 3f64.powf(1.0 / alpha));
            assert!((p.c / c - 1.0).abs() < 1e-12);
            assert!((p.c_prime / cp - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn theorem2_examples() {
        let p = theorem2_constants(0.5, 1.0).unwrap();
        let b = theorem2_lb(10, 50, &p).unwrap();
        assert!((b.value - 125000.0 / 12960000.0).abs() < 1e-15);
        assert!(!b.applicable);
        assert_eq!(theorem2_lb(10, 0, &p).unwrap().value, 0.0);
        let b = theorem2_lb(1, 0, &p).unwrap();
        assert_eq!((b.value, b.applicable), (0.0, false));
    }

    #[test]
    fn pst_examples() {
        let b = pst_lb(16, 1000, 1.0, 1.0, 1.0).unwrap();
        assert!(b.applicable);
        assert!((b.value - 3.90625e6).abs() < 1e-6);
        assert_eq!(pst_lb(16, 0, 1.0, 1.0, 1.0).unwrap().value, 0.0);
        assert!(pst_lb(16, 10, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn corollary_examples() {
        let b = corollary_c2k_lb(10, 100, 2).unwrap();
        let cp = 1.0 / (180.0 * 180.0 * 32.0 * 200.0 * 200.0);
        assert!((b.value / (cp * 1e8 / 1e3) - 1.0).abs() < 1e-12);
        assert_eq!(corollary_c2k_lb(10, 0, 2).unwrap().value, 0.0);
        assert!(corollary_c2k_lb(10, 5, 1).is_err());
    }

    #[test]
    fn bs_edges() {
        assert!((bs_max_edges(100, 2).unwrap() - 200000.0).abs() < 1e-6);
        assert!((bs_max_edges(1, 3).unwrap() - 300.0).abs() < 1e-12);
        assert!((bs_max_edges(64, 2).unwrap() - 102400.0).abs() < 1e-6);
        assert!(bs_max_edges(10, 1).is_err());
    }

    #[test]
    fn dual() {
        let d = dual_constants(10.0, 1.0).unwrap();
        assert_eq!((d.a_dual, d.threshold_exponent), (123904.0, 19.0));
        assert_eq!(dual_constants(1e6, 1.0).unwrap().a_dual, 1e6);
        assert_eq!(dual_constants(10.0, 3.0).unwrap().threshold_exponent, 17.0);
        assert_eq!(d.threshold(1024.0), 2.0);
    }

    #[test]
    fn converse_contradiction_constant() {
        // The converse argument ends in 180^2 > 2^15, which is false.
        assert_eq!(180u32.pow(2), 32400);
        assert_eq!(2u32.pow(15), 32768);
        assert!(180u32.pow(2) < 2u32.pow(15));
        for alpha in [0.1, 0.5, 1.0, 2.0, 7.0] {
            let lhs = 1.0 / 2f64.powf(16.0 + 3.0 / alpha);
            let rhs = 1.0 / (32400.0 * 2f64.powf(1.0 + 3.0 / alpha));
            assert!(lhs <= rhs);
        }
    }

    proptest! {
        #[test]
        fn theorem2_monotone(n in 1usize..500, e in 0usize..5000, de in 1usize..100, dn in 1usize..100,
                             a in 0.1f64..10.0, alpha in 0.05f64..3.0) {
            let p = theorem2_constants(a, alpha).unwrap();
            let base = theorem2_lb(n, e, &p).unwrap().value;
            prop_assert!(theorem2_lb(n, e + de, &p).unwrap().value >= base);
            prop_assert!(theorem2_lb(n + dn, e, &p).unwrap().value <= base);
        }

        #[test]
        fn corollary_is_theorem2_composition(n in 1usize..1000, e in 0usize..100_000, k in 2usize..=6) {
            let via = theorem2_lb(n, e, &theorem2_constants(100.0 * k as f64, 1.0 / k as f64).unwrap()).unwrap();
            prop_assert_eq!(corollary_c2k_lb(n, e, k).unwrap(), via);
        }
    }
}
