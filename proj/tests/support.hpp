#pragma once

// Problem builders and independent oracles shared by the unit tests and the
// acceptance binary. The oracles use Boost.Math and plain scans so that they
// share no code with the library routines they check.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/lambert_w.hpp>

#include "stefan/io.hpp"
#include "stefan/solver.hpp"
#include "stefan/verify.hpp"

#ifndef STEFAN_PROBLEMS_DIR
#define STEFAN_PROBLEMS_DIR "problems"
#endif

namespace support {

inline std::string problem_path(const std::string& name) { return std::string(STEFAN_PROBLEMS_DIR) + "/" + name; }

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Constant diffusivities a1 = a2 = 1 and the thresholds of the shipped
// example1.yaml.
inline stefan::ReducedStefanProblem example1(double q = 5.0, double u_v = 2.0) {
    stefan::ReducedStefanProblem p;
    p.model = stefan::EnthalpyModel::make(stefan::FunctionProfile::constant(1.0), stefan::FunctionProfile::constant(1.0),
                                          u_v, 1.0, 1.0, 0.0, 1.0, 1.0);
    p.R = 1.0;
    p.q = q;
    return p;
}

// d1 = 1/u, d2 = 1, as in example2.yaml.
inline stefan::ReducedStefanProblem example2() {
    stefan::ReducedStefanProblem p;
    p.model = stefan::EnthalpyModel::make(stefan::FunctionProfile::power(1.0, -1.0),
                                          stefan::FunctionProfile::constant(1.0), 1.0, 2.0, 0.0, 4.0, 1.0, 1.0);
    p.R = 1.0;
    p.q = -3.0;
    return p;
}

inline stefan::ReducedStefanProblem planar(double q = 2.0) {
    stefan::ReducedStefanProblem p = example1(q);
    p.geometry = stefan::GeometryKind::Planar;
    return p;
}

inline stefan::FluxSpec axial(double q) { return stefan::FluxSpec::axial_constant(q); }

// ---------------------------------------------------------------------------
// Example 1 oracle: closed-form residuals written from the exponential
// integral of Boost.Math, root located by a grid scan and bisection.

struct ConstantParams {
    double a1 = 1, a2 = 1, R = 1, u_v = 2, u_m = 1, v_m = 1, v_inf = 0, H_v = 1, H_m = 1, q = 5;
};

inline ConstantParams params_of(const stefan::ReducedStefanProblem& p) {
    ConstantParams c;
    c.a1 = p.model.d1.constant_value();
    c.a2 = p.model.d2.constant_value();
    c.R = p.R;
    c.u_v = p.model.u_v;
    c.u_m = p.model.u_m;
    c.v_m = p.model.v_m;
    c.v_inf = p.model.v_inf;
    c.H_v = p.model.H_v;
    c.H_m = p.model.H_m;
    c.q = p.q;
    return c;
}

inline double oracle_e1(double x) { return boost::math::expint(1, x); }

struct ConstantClosedForm {
    ConstantParams c;
    double omega2, mu;

    double phi1(double w) const { return oracle_e1(mu * w / (2 * c.a1)); }
    double phi2(double w) const { return oracle_e1(mu * w / (2 * c.a2)); }
    double c1() const { return (c.u_v - c.u_m) / (phi1(c.R) - phi1(omega2)); }
    double c3() const { return (c.v_m - c.v_inf) / phi2(omega2); }
    double u(double w) const { return c.u_m + c1() * (phi1(w) - phi1(omega2)); }
    double v(double w) const { return c.v_inf + c3() * phi2(w); }
    double du(double w) const { return -c1() * std::exp(-mu * w / (2 * c.a1)) / w; }
    double dv(double w) const { return -c3() * std::exp(-mu * w / (2 * c.a2)) / w; }
    double f1() const { return 2 * c.a1 * du(c.R) - (mu * c.H_v - c.q); }
    double f2() const { return 2 * c.a2 * dv(omega2) - 2 * c.a1 * du(omega2) - mu * c.H_m; }
};

inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// First sign change of f on a log grid over [lo, hi], refined by bisection.
inline std::optional<double> scan_root(const std::function<double(double)>& f, double lo, double hi, int n) {
    double x_prev = lo, f_prev = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double x = lo * std::pow(hi / lo, static_cast<double>(i) / n);
        const double fx = f(x);
        if (std::isfinite(f_prev) && std::isfinite(fx) && (fx < 0) != (f_prev < 0)) return bisect(f, x_prev, x);
        x_prev = x;
        f_prev = fx;
    }
    return std::nullopt;
}

struct Root {
    double omega2 = 0, mu = 0;
};

// Scan (omega2, mu) over (R, 20 R] x (0, 10]: for each mu the F1 = 0 branch
// omega2(mu) is located on a grid, then F2 along the branch is scanned.
inline std::optional<Root> constant_root_oracle(const ConstantParams& c) {
    auto branch = [&](double mu) -> std::optional<double> {
        auto f1 = [&](double w) { return ConstantClosedForm{c, w, mu}.f1(); };
        return scan_root(f1, c.R * (1 + 1e-9), 20 * c.R, 400);
    };
    auto g = [&](double mu) {
        const auto w = branch(mu);
        return w ? ConstantClosedForm{c, *w, mu}.f2() : std::nan("");
    };
    const auto mu = scan_root(g, 1e-3, 10.0, 400);
    if (!mu) return std::nullopt;
    const auto w = branch(*mu);
    if (!w) return std::nullopt;
    return Root{*w, *mu};
}

// ---------------------------------------------------------------------------
// Planar constant-diffusivity oracle: u = u_v + A (exp(-mu z / a1) - 1),
// v = v_inf + (v_m - v_inf) exp(-mu (z - z2) / a2), with the planar balances
// d1v u'(0) = mu H_v - q and d2m v'(z2) - d1m u'(z2) = mu H_m.

struct PlanarClosedForm {
    ConstantParams c;
    double z2, mu;

    double amp() const { return -(mu * c.H_v - c.q) / mu; }
    double u(double z) const { return c.u_v + amp() * (std::exp(-mu * z / c.a1) - 1.0); }
    double v(double z) const { return c.v_inf + (c.v_m - c.v_inf) * std::exp(-mu * (z - z2) / c.a2); }
    double du(double z) const { return -(mu / c.a1) * amp() * std::exp(-mu * z / c.a1); }
    double dv(double z) const { return -(mu / c.a2) * (c.v_m - c.v_inf) * std::exp(-mu * (z - z2) / c.a2); }
};

// u(z2) = u_m fixes z2 for a given mu; the Stefan balance is then scanned in mu.
inline std::optional<Root> planar_root_oracle(const ConstantParams& c) {
    auto z2_of = [&](double mu) -> double {
        const PlanarClosedForm f{c, 0.0, mu};
        const double e = 1.0 + (c.u_m - c.u_v) / f.amp();
        return e > 0.0 && e < 1.0 ? -c.a1 * std::log(e) / mu : std::nan("");
    };
    auto g = [&](double mu) {
        const double z2 = z2_of(mu);
        if (!std::isfinite(z2)) return std::nan("");
        const PlanarClosedForm f{c, z2, mu};
        return c.a2 * f.dv(z2) - c.a1 * f.du(z2) - mu * c.H_m;
    };
    const auto mu = scan_root(g, 1e-3, 10.0, 400);
    if (!mu) return std::nullopt;
    return Root{z2_of(*mu), *mu};
}

// ---------------------------------------------------------------------------
// Example 2 oracle pieces: the exponent of the implicit relation and its
// integral by Gauss-Kronrod quadrature with Boost's Lambert W.

struct FastParams {
    double R, u_v, H_v, q, mu;

    double p_r() const { return (mu * H_v - q) * R / 2; }
    double exponent(double nu) const { return -(mu / 2) * (nu - R * u_v) + std::log(p_r()) + p_r(); }
    double p(double nu) const { return boost::math::lambert_w0(std::exp(exponent(nu))); }
    double integral(double nu) const {
        auto f = [&](double s) { return 1.0 / (s * (1.0 + p(s))); };
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, R * u_v, nu, 15, 1e-14);
    }
};

// ---------------------------------------------------------------------------
// Profile helpers.

// Derivative of the stored profile at every knot by the five-point rule.
inline std::vector<double> knot_derivative(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> d(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) d[i] = stefan::lagrange_derivative(xs, ys, i);
    return d;
}

// Finite-difference weights for derivatives 0..m at x0 from the nodes xs
// (Fornberg's recursion); w[k][j] multiplies f(xs[j]) in the k-th derivative.
inline std::vector<std::vector<double>> fd_weights(double x0, const std::vector<double>& xs, int m) {
    const std::size_t n = xs.size();
    std::vector<std::vector<double>> c(static_cast<std::size_t>(m) + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0, c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const int mn = std::min(static_cast<int>(i), m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

// Residual of (g d(y) y')' + c mu g y' = 0 at the interior knots of a stored
// profile, with g = omega and c = 1/2 for the paraboloid, g = 1 and c = 1 for
// the planar wave. The divergence is expanded as
//   g d y'' + g' d y' + g d'(y) y'^2
// with y' and y'' from centred five-point weights on the knots.
inline double ode_residual_max(const stefan::MonotoneCubic& prof, const stefan::FunctionProfile& d, double mu,
                               bool paraboloid) {
    const auto& xs = prof.xs();
    const auto& ys = prof.ys();
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < xs.size(); ++i) {
        const std::vector<double> nodes(xs.begin() + static_cast<long>(i) - 2, xs.begin() + static_cast<long>(i) + 3);
        const auto w = fd_weights(xs[i], nodes, 2);
        double dy = 0.0, d2y = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
            dy += w[1][j] * ys[i - 2 + j];
            d2y += w[2][j] * ys[i - 2 + j];
        }
        const double y = ys[i];
        const double step = 1e-5 * std::max(1.0, std::abs(y));
        const double dd = (d(y + step) - d(y - step)) / (2 * step);
        const double g = paraboloid ? xs[i] : 1.0;
        const double dg = paraboloid ? 1.0 : 0.0;
        const double div = g * d(y) * d2y + dg * d(y) * dy + g * dd * dy * dy;
        const double adv = (paraboloid ? 0.5 : 1.0) * mu * g * dy;
        worst = std::max(worst, std::abs(div + adv));
    }
    return worst;
}

// Relative distance between two profiles sampled on n points of the common
// range, scaled by the larger profile magnitude.
inline double profile_distance(const stefan::MonotoneCubic& a, const stefan::MonotoneCubic& b, int n = 200,
                               double hi_cap = 0.0) {
    const double lo = std::max(a.lo(), b.lo());
    double hi = std::min(a.hi(), b.hi());
    if (hi_cap > 0.0) hi = std::min(hi, hi_cap);
    double scale = 0.0, worst = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = lo + (hi - lo) * i / n;
        scale = std::max(scale, std::abs(a(w)));
        worst = std::max(worst, std::abs(a(w) - b(w)));
    }
    return worst / std::max(scale, 1e-300);
}

// Copy of a solution with its liquid profile multiplied by `factor`.
inline stefan::ParaboloidSolution scale_liquid(const stefan::ParaboloidSolution& s, double factor) {
    stefan::ParaboloidSolution out = s;
    std::vector<double> ys = s.profiles.u.ys();
    for (double& y : ys) y *= factor;
    out.profiles.u = stefan::MonotoneCubic(s.profiles.u.xs(), ys);
    return out;
}

// Largest ratio perturbed / baseline over the audited residual fields.
inline double worst_ratio(const stefan::ResidualReport& base, const stefan::ResidualReport& pert) {
    const std::array<std::pair<double, double>, 10> pairs{{
        {base.pde_liquid_max, pert.pde_liquid_max},
        {base.pde_liquid_l2, pert.pde_liquid_l2},
        {base.pde_solid_max, pert.pde_solid_max},
        {base.pde_solid_l2, pert.pde_solid_l2},
        {base.bc_evaporation_flux, pert.bc_evaporation_flux},
        {base.bc_evaporation_dirichlet, pert.bc_evaporation_dirichlet},
        {base.bc_stefan_flux, pert.bc_stefan_flux},
        {base.bc_stefan_dirichlet_u, pert.bc_stefan_dirichlet_u},
        {base.bc_stefan_dirichlet_v, pert.bc_stefan_dirichlet_v},
        {base.farfield, pert.farfield},
    }};
    double worst = 0.0;
    for (const auto& [b, p] : pairs) worst = std::max(worst, p / std::max(b, 1e-300));
    return worst;
}

// Residual fields of two reports, pairwise.
inline std::vector<std::pair<double, double>> report_pairs(const stefan::ResidualReport& a,
                                                           const stefan::ResidualReport& b) {
    return {{a.pde_liquid_max, b.pde_liquid_max},
            {a.pde_liquid_l2, b.pde_liquid_l2},
            {a.pde_solid_max, b.pde_solid_max},
            {a.pde_solid_l2, b.pde_solid_l2},
            {a.bc_evaporation_flux, b.bc_evaporation_flux},
            {a.bc_evaporation_dirichlet, b.bc_evaporation_dirichlet},
            {a.bc_stefan_flux, b.bc_stefan_flux},
            {a.bc_stefan_dirichlet_u, b.bc_stefan_dirichlet_u},
            {a.bc_stefan_dirichlet_v, b.bc_stefan_dirichlet_v},
            {a.farfield, b.farfield}};
}

}  // namespace support
