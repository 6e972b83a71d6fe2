//! Thin wrappers over `libm` so every build uses the same routines.

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sin_cos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn acos(x: f64) -> f64 {
    libm::acos(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// `base^k` for a non-negative integer exponent.
#[inline]
pub(crate) fn powu(base: f64, k: u64) -> f64 {
    libm::pow(base, k as f64)
}

/// `2^-k`, exact for every `k` down to the subnormal range.
#[inline]
pub(crate) fn exp2_neg(k: u32) -> f64 {
    libm::exp2(-(k as f64))
}
