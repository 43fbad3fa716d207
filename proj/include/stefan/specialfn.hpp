#pragma once

#include <functional>

namespace stefan {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;

    // Throws DomainError when a field violates its invariant.
    void validate() const;
};

// Principal branch W0 of the Lambert function: w * exp(w) = x, w >= -1.
// Throws DomainError for x < -1/e and NonConvergence when the Halley
// iteration does not reach |w e^w - x| <= tol * max(1, |x|) within 50 steps.
double lambert_w0(double x, double tol = 1e-13);

// Wright omega for real arguments, W0(exp(a)), without overflowing exp(a).
double wright_omega(double a);

// E1(x) = int_x^inf exp(-t)/t dt for x > 0.
double exp_integral_e1(double x);

// exp(x) * E1(x); finite for every x > 0 and ~1/x for large x.
double exp_integral_e1_scaled(double x);

// Phi(omega) = int_omega^inf s^-1 exp(-mu s / (2a)) ds = E1(mu omega / (2a)).
double phi_integral(double omega, double mu, double a);

// Adaptive Gauss-Kronrod (7/15) quadrature with global interval bisection.
// hi may be +infinity; the tail is mapped to [0, 1) by t = lo + s/(1-s).
// Throws NonConvergence when max_subdivisions is exceeded.
double adaptive_integrate(const std::function<double(double)>& f, double lo, double hi,
                          const QuadratureConfig& cfg = {});

}  // namespace stefan
