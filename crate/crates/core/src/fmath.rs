//! Scalar math routed through libm so the crate computes identically with
//! and without std. sqrt is correctly rounded either way; for sin/cos/log
//! this pins one implementation instead of whatever platform libm is linked.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// x^n by binary exponentiation; n is small everywhere this is used.
pub(crate) fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_std() {
        for n in 0..12u32 {
            assert_eq!(powi(1.5, n), 1.5f64.powi(n as i32));
        }
        assert_eq!(powi(0.0, 0), 1.0);
    }

    #[test]
    fn sqrt_is_correctly_rounded_like_std() {
        for &x in &[0.0, 1.0, 2.0, 0.3, 17.25, 1e-12, 1e12] {
            assert_eq!(sqrt(x), x.sqrt());
        }
    }
}
