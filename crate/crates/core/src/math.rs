//! `f64` helpers; `core` has no transcendental functions.

pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// `x^k` by repeated squaring; exact whenever every intermediate is representable.
pub(crate) fn powi(x: f64, k: u32) -> f64 {
    let mut base = x;
    let mut exp = k;
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

/// Relative-tolerance `a <= b`.
pub(crate) fn le_tol(a: f64, b: f64, rel: f64) -> bool {
    a <= b + rel * b.abs().max(1.0)
}
