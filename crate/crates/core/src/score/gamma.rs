/// Natural log of the gamma function for positive arguments.
///
/// Delegates to the musl-derived `lgamma` in `libm`, which stays within a few
/// ulps over the argument range the score uses.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma called with {x}");
    libm::lgamma(x)
}
