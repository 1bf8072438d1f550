#pragma once

#include <complex>

namespace latbench::specfun {

/// ln Gamma(x) for x > 0.  Lanczos approximation (g = 607/128, 15 terms);
/// relative error below 1e-13 on [1e-3, 170].
double log_gamma(double x);

/// Principal-branch ln Gamma(z) for re(z) > 0.  Branch cuts of the inner
/// complex log can offset the imaginary part by multiples of 2*pi, which is
/// harmless for exp(n * log_gamma(z)) with integer n.
std::complex<double> log_gamma(std::complex<double> z);

/// Gamma(z) for re(z) > 0.
std::complex<double> gamma(std::complex<double> z);

/// Regularized upper incomplete Gamma, Q(a,x) = Gamma(a,x)/Gamma(a), for
/// a > 0, x >= 0.  Series for x < a+1, continued fraction otherwise.
double reg_upper_gamma(double a, double x);

/// psi(x) = d/dx ln Gamma(x), x > 0.
double digamma(double x);

/// psi'(x), x > 0.
double trigamma(double x);

}  // namespace latbench::specfun
