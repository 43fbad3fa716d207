#include "stefan/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "stefan/errors.hpp"
#include "stefan/specialfn.hpp"

namespace stefan {

namespace {

namespace odeint = boost::numeric::odeint;

constexpr double kFarFieldLengths = 40.0;
constexpr double kLiquidSearchLengths = 50.0;

bool paraboloid(const ReducedStefanProblem& p) { return p.geometry == GeometryKind::Paraboloid; }

// Surface balances read m (d2m v' - d1m u') = mu H_m and m d1v u' = mu H_v - q
// with m = 2 on paraboloids and m = 1 on planes.
double balance_factor(const ReducedStefanProblem& p) { return paraboloid(p) ? 2.0 : 1.0; }
double omega1_of(const ReducedStefanProblem& p) { return paraboloid(p) ? p.R : 0.0; }
double metric(const ReducedStefanProblem& p, double w) { return paraboloid(p) ? w : 1.0; }

struct Brackets {
    double w_lo, w_hi, mu_lo, mu_hi;
};

Brackets resolve_brackets(const ReducedStefanProblem& p, const RootSolveConfig& cfg) {
    const EnthalpyModel& m = p.model;
    Brackets b{};
    if (paraboloid(p)) {
        b.w_lo = cfg.omega2_lo > 0.0 ? cfg.omega2_lo : p.R * (1.0 + 1e-9);
        b.w_hi = cfg.omega2_hi > 0.0 ? cfg.omega2_hi : 100.0 * p.R;
        if (!(b.w_lo > p.R)) throw DomainError("RootSolveConfig: omega2 bracket must lie above R");
    } else {
        b.w_lo = cfg.omega2_lo > 0.0 ? cfg.omega2_lo : 0.0;
        b.w_hi = cfg.omega2_hi > 0.0 ? cfg.omega2_hi : std::numeric_limits<double>::infinity();
    }
    // Energy balance scale mu ~ q / (latent + sensible heat), and on
    // paraboloids also the diffusive scale d1v / R.
    const double heat = m.H_v + m.H_m + std::abs(m.u_v - m.u_m) + std::abs(m.v_m - m.v_inf);
    double lo = std::abs(p.q) / heat;
    double hi = lo;
    if (paraboloid(p)) {
        lo = std::min(lo, m.d1v / p.R);
        hi = std::max(hi, m.d1v / p.R);
    }
    b.mu_lo = cfg.mu_lo > 0.0 ? cfg.mu_lo : 1e-4 * lo;
    b.mu_hi = cfg.mu_hi > 0.0 ? cfg.mu_hi : 1e4 * hi;
    if (!(b.w_hi > b.w_lo) || !(b.mu_hi > b.mu_lo)) throw DomainError("RootSolveConfig: empty bracket");
    return b;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double f = n > 1 ? static_cast<double>(i) / (n - 1) : 0.5;
        out[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
    }
    return out;
}

// Uniform nodes. Clustered nodes would shrink the end spacing until rounding
// in the stored values dominates finite-difference checks of the profile.
std::vector<double> uniform_grid(double a, double b, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    x.front() = a;
    x.back() = b;
    return x;
}

// Spacing h0 at a, growing by a constant ratio so that the last node is b.
std::vector<double> geometric_grid(double a, double b, int n, double h0) {
    const double span = b - a;
    const int m = n - 1;
    std::vector<double> x(static_cast<std::size_t>(n));
    if (h0 * m >= span) {
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + span * i / m;
    } else {
        auto total = [&](double r) { return h0 * std::expm1(m * std::log(r)) / (r - 1.0); };
        double lo = 1.0 + 1e-12, hi = 2.0;
        while (total(hi) < span) hi = 1.0 + 2.0 * (hi - 1.0);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (total(mid) < span ? lo : hi) = mid;
        }
        const double r = 0.5 * (lo + hi);
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] = a + h0 * std::expm1(i * std::log(r)) / (r - 1.0);
        }
    }
    x.front() = a;
    x.back() = b;
    return x;
}

// Largest diffusivity over a phase range; sets the slowest kernel decay.
double max_diffusivity(const FunctionProfile& d, double a, double b) {
    return d.max_over(std::min(a, b), std::max(a, b));
}

double solid_length(const ReducedStefanProblem& p, double mu) {
    const EnthalpyModel& m = p.model;
    return balance_factor(p) * max_diffusivity(m.d2, m.v_m, m.v_inf) / mu;
}

std::vector<double> solid_grid(const ReducedStefanProblem& p, double w2, double mu, int n) {
    const double L2 = solid_length(p, mu);
    const double near = paraboloid(p) ? std::min(L2, w2) : L2;
    return geometric_grid(w2, w2 + kFarFieldLengths * L2, n, near / 500.0);
}

// ---------------------------------------------------------------------------
// Closed form, constant diffusivities. Phi(w) = E1(mu w / (2a)) is carried as
// exp(-s) E1s(s) relative to the value at R to avoid underflow.

struct ConstantCase {
    double a1, a2, R, u_v, u_m, v_m, v_inf, mu, w2;
    double s1R, s12, s22, D;

    ConstantCase(const ReducedStefanProblem& p, double w2_, double mu_)
        : a1(p.model.d1.constant_value()), a2(p.model.d2.constant_value()), R(p.R), u_v(p.model.u_v),
          u_m(p.model.u_m), v_m(p.model.v_m), v_inf(p.model.v_inf), mu(mu_), w2(w2_) {
        s1R = mu * R / (2.0 * a1);
        s12 = mu * w2 / (2.0 * a1);
        s22 = mu * w2 / (2.0 * a2);
        D = exp_integral_e1_scaled(s1R) - std::exp(-(s12 - s1R)) * exp_integral_e1_scaled(s12);
    }

    double u(double w) const {
        const double s = mu * w / (2.0 * a1);
        const double num = std::exp(-(s - s1R)) * exp_integral_e1_scaled(s) -
                           std::exp(-(s12 - s1R)) * exp_integral_e1_scaled(s12);
        return u_m + (u_v - u_m) * num / D;
    }
    double du(double w) const {
        const double s = mu * w / (2.0 * a1);
        return -(u_v - u_m) * std::exp(-(s - s1R)) / (w * D);
    }
    double v(double w) const {
        const double s = mu * w / (2.0 * a2);
        return v_inf + (v_m - v_inf) * std::exp(-(s - s22)) * exp_integral_e1_scaled(s) / exp_integral_e1_scaled(s22);
    }
    double dv_at_w2() const { return -(v_m - v_inf) / (w2 * exp_integral_e1_scaled(s22)); }
};

std::array<double, 2> constant_residuals(const ReducedStefanProblem& p, double w2, double mu) {
    const ConstantCase c(p, w2, mu);
    const EnthalpyModel& m = p.model;
    const double F1 = 2.0 * c.a1 * c.du(p.R) - (mu * m.H_v - p.q);
    const double F2 = 2.0 * c.a2 * c.dv_at_w2() - 2.0 * c.a1 * c.du(w2) - mu * m.H_m;
    return {F1, F2};
}

// ---------------------------------------------------------------------------
// Closed form, d1 = k / (u + C). In w = u + C the liquid ODE gives
// ln p + p = A(omega w) with p = (omega / w) dw/domega.

struct FastCase {
    double k, C, a2, R, w_v, w_m, mu, pR, lnpR;

    FastCase(const ReducedStefanProblem& p, double mu_)
        : k(p.model.d1.coefficient()), C(p.model.d1.shift()), a2(p.model.d2.constant_value()), R(p.R),
          w_v(p.model.u_v + p.model.d1.shift()), w_m(p.model.u_m + p.model.d1.shift()), mu(mu_) {
        const double drive = mu * p.model.H_v - p.q;
        if (!(drive > 0.0)) {
            throw DomainError(fmt::format("fast diffusion needs mu H_v - q > 0 (got {})", drive));
        }
        pR = drive * R / (2.0 * k);
        lnpR = std::log(pR);
    }

    double A(double nu) const { return -(mu / (2.0 * k)) * (nu - R * w_v) + lnpR + pR; }
    double p(double nu) const { return wright_omega(A(nu)); }
    double integrand(double s) const { return 1.0 / (s * (1.0 + p(s))); }
    double integral(double lo, double hi) const {
        if (lo == hi) return 0.0;
        QuadratureConfig q;
        q.abs_tol = 1e-15;
        q.rel_tol = 1e-14;
        return adaptive_integrate([this](double s) { return integrand(s); }, lo, hi, q);
    }
};

std::array<double, 2> fast_residuals(const ReducedStefanProblem& p, double w2, double mu) {
    const FastCase f(p, mu);
    const double nu2 = w2 * f.w_m;
    const double F1 = f.integral(p.R * f.w_v, nu2) - std::log(w2 / p.R);
    const double s22 = mu * w2 / (2.0 * f.a2);
    const double dv = -(p.model.v_m - p.model.v_inf) / (w2 * exp_integral_e1_scaled(s22));
    const double F2 = 2.0 * f.a2 * dv - 2.0 * f.k * f.p(nu2) / w2 - mu * p.model.H_m;
    return {F1, F2};
}

// ---------------------------------------------------------------------------
// Two-equation root finder over (omega2, mu), working in the log variables
// (ln(omega2 - omega1), ln mu).

using Residual2 = std::function<std::array<double, 2>(double, double)>;

struct RootSet {
    std::vector<std::array<double, 2>> roots;  // (omega2, mu), ascending mu
    int iterations = 0;
    int evaluations = 0;
};

class TwoByTwo {
public:
    TwoByTwo(Residual2 F, double w1, const Brackets& b, const RootSolveConfig& cfg)
        : F_(std::move(F)), w1_(w1), b_(b), cfg_(cfg) {}

    RootSet run() {
        const int n = std::max(cfg_.multistart, 1);
        for (double w : log_grid(b_.w_lo - w1_, b_.w_hi - w1_, n)) {
            for (double mu : log_grid(b_.mu_lo, b_.mu_hi, n)) {
                newton({std::log(w), std::log(mu)});
            }
        }
        if (set_.roots.empty()) nested_bisection();
        std::sort(set_.roots.begin(), set_.roots.end(), [](auto& a, auto& b) { return a[1] < b[1]; });
        return set_;
    }

private:
    using V2 = Eigen::Vector2d;

    std::optional<V2> eval(const V2& x) {
        ++set_.evaluations;
        const double w2 = w1_ + std::exp(x[0]);
        const double mu = std::exp(x[1]);
        try {
            const auto f = F_(w2, mu);
            if (!std::isfinite(f[0]) || !std::isfinite(f[1])) return std::nullopt;
            return V2(f[0], f[1]);
        } catch (const DomainError&) {
        } catch (const RangeError&) {
        } catch (const NonConvergence&) {
        }
        return std::nullopt;
    }

    bool inside(double w2, double mu) const {
        return w2 >= b_.w_lo && w2 <= b_.w_hi && mu >= b_.mu_lo && mu <= b_.mu_hi;
    }

    void record(double w2, double mu) {
        if (!inside(w2, mu)) return;
        for (const auto& r : set_.roots) {
            if (std::abs(r[0] - w2) <= 1e-6 * w2 && std::abs(r[1] - mu) <= 1e-6 * mu) return;
        }
        set_.roots.push_back({w2, mu});
    }

    std::optional<V2> newton(V2 x) {
        auto f = eval(x);
        if (!f) return std::nullopt;
        constexpr double h = 1e-6;
        for (int it = 0; it < cfg_.max_iters; ++it) {
            ++set_.iterations;
            if (f->lpNorm<Eigen::Infinity>() <= cfg_.abs_tol) {
                record(w1_ + std::exp(x[0]), std::exp(x[1]));
                return x;
            }
            Eigen::Matrix2d J;
            for (int j = 0; j < 2; ++j) {
                V2 xh = x;
                xh[j] += h;
                auto fh = eval(xh);
                double step = h;
                if (!fh) {
                    xh[j] = x[j] - h;
                    fh = eval(xh);
                    step = -h;
                }
                if (!fh) return std::nullopt;
                J.col(j) = (*fh - *f) / step;
            }
            if (!(std::abs(J.determinant()) > 0.0)) return std::nullopt;
            V2 dx = -J.partialPivLu().solve(*f);
            if (!dx.allFinite()) return std::nullopt;
            const double cap = dx.lpNorm<Eigen::Infinity>();
            if (cap > 2.0) dx *= 2.0 / cap;
            double lam = 1.0;
            bool accepted = false;
            for (int k = 0; k < 30; ++k, lam *= 0.5) {
                const V2 xn = x + lam * dx;
                auto fn = eval(xn);
                if (fn && fn->norm() < f->norm()) {
                    x = xn;
                    f = fn;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) return std::nullopt;
        }
        return std::nullopt;
    }

    // Smallest root in mu of F1(omega2, .) on the mu bracket.
    std::optional<double> mu_on_f1(double w2) {
        const auto mus = log_grid(b_.mu_lo, b_.mu_hi, 64);
        auto f1 = [&](double mu) -> std::optional<double> {
            const auto f = eval(V2(std::log(w2 - w1_), std::log(mu)));
            if (!f) return std::nullopt;
            return (*f)[0];
        };
        std::optional<double> prev = f1(mus[0]);
        for (std::size_t i = 1; i < mus.size(); ++i) {
            const auto cur = f1(mus[i]);
            if (prev && cur && (*prev) * (*cur) <= 0.0) {
                double a = mus[i - 1], b = mus[i], fa = *prev;
                for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
                    const double m = 0.5 * (a + b);
                    const auto fm = f1(m);
                    if (!fm) break;
                    if (fa * (*fm) <= 0.0) b = m;
                    else { a = m; fa = *fm; }
                }
                return 0.5 * (a + b);
            }
            prev = cur;
        }
        return std::nullopt;
    }

    void nested_bisection() {
        auto h = [&](double w2) -> std::optional<double> {
            const auto mu = mu_on_f1(w2);
            if (!mu) return std::nullopt;
            const auto f = eval(V2(std::log(w2 - w1_), std::log(*mu)));
            if (!f) return std::nullopt;
            return (*f)[1];
        };
        const auto ws = log_grid(b_.w_lo - w1_, b_.w_hi - w1_, 64);
        std::optional<double> prev = h(w1_ + ws[0]);
        for (std::size_t i = 1; i < ws.size(); ++i) {
            const auto cur = h(w1_ + ws[i]);
            if (prev && cur && (*prev) * (*cur) <= 0.0) {
                double a = w1_ + ws[i - 1], b = w1_ + ws[i], fa = *prev;
                for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
                    const double m = 0.5 * (a + b);
                    const auto fm = h(m);
                    if (!fm) break;
                    if (fa * (*fm) <= 0.0) b = m;
                    else { a = m; fa = *fm; }
                }
                const double w2 = 0.5 * (a + b);
                if (const auto mu = mu_on_f1(w2)) newton(V2(std::log(w2 - w1_), std::log(*mu)));
            }
            prev = cur;
        }
    }

    Residual2 F_;
    double w1_;
    Brackets b_;
    RootSolveConfig cfg_;
    RootSet set_;
};

void note_roots(ParaboloidSolution& sol, const RootSet& rs) {
    sol.diagnostics.iterations = rs.iterations;
    sol.diagnostics.evaluations = rs.evaluations;
    sol.diagnostics.roots_found = static_cast<int>(rs.roots.size());
    if (rs.roots.size() > 1) {
        sol.notes.push_back(fmt::format("MultipleRoots: {} distinct roots found, returning the smallest mu",
                                        rs.roots.size()));
    }
}

// ---------------------------------------------------------------------------
// Shooting. Each phase is integrated in flux form: with F = g(w) d(u) u'
// (g = w on paraboloids, 1 on planes) the ODE becomes
//   u' = F / (g d(u)),   F' = -c mu F / d(u),   c = 1/2 or 1.

using State = std::array<double, 2>;

struct PhaseOde {
    const FunctionProfile* d;
    double mu;
    bool para;
    bool clamp;
    double lo, hi;

    void operator()(const State& x, State& dxdt, double w) const {
        const double arg = clamp ? std::clamp(x[0], lo, hi) : x[0];
        const double dv = d->eval(arg);
        dxdt[0] = x[1] / ((para ? w : 1.0) * dv);
        dxdt[1] = -(para ? 0.5 : 1.0) * mu * x[1] / dv;
    }
};

PhaseOde make_ode(const ReducedStefanProblem& p, const FunctionProfile& d, double mu) {
    PhaseOde ode{&d, mu, paraboloid(p), false, 0.0, 0.0};
    if (d.family() == FunctionProfile::Family::Tabulated) {
        ode.clamp = true;
        ode.lo = d.table().lo();
        ode.hi = d.table().hi();
    }
    return ode;
}

struct March {
    bool hit = false;
    double w_hit = 0.0;
    State x_hit{};
    State x_end{};
    int steps = 0;
};

// Integrates from w0 to w_end, stopping early where x[0] crosses `level`.
// Values of x[0] at `nodes` (ascending, within the integrated range) are
// written to `values`.
March march(const PhaseOde& ode, const State& x0, double w0, double w_end, double dt0, double tol,
            std::optional<double> level, const std::vector<double>* nodes = nullptr,
            std::vector<double>* values = nullptr) {
    auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(x0, w0, dt0);
    March out;
    std::size_t k = 0;
    auto sample_until = [&](double t_lim) {
        if (!nodes) return;
        while (k < nodes->size() && (*nodes)[k] <= t_lim) {
            const double t = (*nodes)[k];
            if (t <= w0) {
                values->push_back(x0[0]);
            } else {
                State s;
                stepper.calc_state(t, s);
                values->push_back(s[0]);
            }
            ++k;
        }
    };
    sample_until(w0);
    State prev = x0;
    try {
        for (;;) {
            const auto [ta, tb] = stepper.do_step(ode);
            ++out.steps;
            State cur = stepper.current_state();
            if (!std::isfinite(cur[0]) || !std::isfinite(cur[1])) {
                throw StiffnessError(fmt::format("non-finite state at w = {}", tb));
            }
            if (stepper.current_time_step() < 1e-14 * std::max(1.0, std::abs(tb))) {
                throw StiffnessError(fmt::format("step size underflow at w = {}", tb));
            }
            const bool last = tb >= w_end;
            const double t_lim = last ? w_end : tb;
            if (last) stepper.calc_state(w_end, cur);
            if (level && (prev[0] - *level) * (cur[0] - *level) <= 0.0) {
                auto f = [&](double t) {
                    State s;
                    stepper.calc_state(t, s);
                    return s[0] - *level;
                };
                std::uintmax_t iters = 100;
                const auto r = boost::math::tools::toms748_solve(f, ta, t_lim, prev[0] - *level, cur[0] - *level,
                                                                 boost::math::tools::eps_tolerance<double>(52), iters);
                out.hit = true;
                out.w_hit = 0.5 * (r.first + r.second);
                stepper.calc_state(out.w_hit, out.x_hit);
                sample_until(out.w_hit);
                return out;
            }
            sample_until(t_lim);
            if (last) {
                out.x_end = cur;
                return out;
            }
            prev = cur;
        }
    } catch (const odeint::odeint_error& e) {
        throw StiffnessError(fmt::format("step size control failed: {}", e.what()));
    }
}

struct LiquidShot {
    double w2;
    double flux;  // F(omega2) = g(omega2) d1m u'(omega2)
    double miss;  // u(omega2) - u_m
};

class Shooter {
public:
    Shooter(const ReducedStefanProblem& p, const Brackets& b, const RootSolveConfig& cfg) : p_(p), b_(b), cfg_(cfg) {
        const EnthalpyModel& m = p.model;
        d1max_ = max_diffusivity(m.d1, m.u_v, m.u_m);
    }

    double liquid_length(double mu) const { return balance_factor(p_) * d1max_ / mu; }
    double start_flux(double mu) const {
        return metric(p_, omega1_of(p_)) * (mu * p_.model.H_v - p_.q) / balance_factor(p_);
    }
    double initial_step(double mu) const {
        const double L = liquid_length(mu);
        return 1e-4 * (paraboloid(p_) ? std::min(L, p_.R) : L);
    }

    std::optional<LiquidShot> liquid(double mu) const {
        const EnthalpyModel& m = p_.model;
        const double F0 = start_flux(mu);
        if (F0 == 0.0 || (F0 > 0.0) != (m.u_m > m.u_v)) return std::nullopt;
        const double w1 = omega1_of(p_);
        const double w_end = std::min(b_.w_hi, w1 + kLiquidSearchLengths * liquid_length(mu));
        const PhaseOde ode = make_ode(p_, m.d1, mu);
        const March r = march(ode, {m.u_v, F0}, w1, w_end, initial_step(mu), cfg_.ode_tol, m.u_m);
        if (!r.hit || r.w_hit <= b_.w_lo) return std::nullopt;
        return LiquidShot{r.w_hit, r.x_hit[1], r.x_hit[0] - m.u_m};
    }

    // Signed solid flux G(omega2) = g d2m v'(omega2) that sends v to v_inf
    // at the truncation radius.
    double solid_flux(double mu, double w2, int* marches = nullptr) const {
        const EnthalpyModel& m = p_.model;
        const double dir = m.v_inf > m.v_m ? 1.0 : -1.0;
        const double w_max = w2 + kFarFieldLengths * solid_length(p_, mu);
        const PhaseOde ode = make_ode(p_, m.d2, mu);
        const double dt0 = 1e-4 * (paraboloid(p_) ? std::min(solid_length(p_, mu), w2) : solid_length(p_, mu));
        auto miss = [&](double sigma) {
            if (marches) ++*marches;
            const March r = march(ode, {m.v_m, dir * sigma}, w2, w_max, dt0, cfg_.ode_tol, std::nullopt);
            return dir * (r.x_end[0] - m.v_inf);
        };
        // Linear estimate from the constant-diffusivity kernel.
        const double dv = std::abs(m.v_inf - m.v_m);
        const double sigma0 = paraboloid(p_)
                                  ? dv * m.d2m / exp_integral_e1_scaled(mu * w2 / (2.0 * m.d2m))
                                  : dv * mu;
        double lo = 0.5 * sigma0, hi = 2.0 * sigma0;
        double flo = miss(lo), fhi = miss(hi);
        for (int i = 0; i < 60 && flo > 0.0; ++i) {
            hi = lo;
            fhi = flo;
            lo *= 0.25;
            flo = miss(lo);
        }
        for (int i = 0; i < 60 && fhi < 0.0; ++i) {
            lo = hi;
            flo = fhi;
            hi *= 4.0;
            fhi = miss(hi);
        }
        if (flo > 0.0 || fhi < 0.0) throw NoRoot("far-field condition could not be bracketed");
        std::uintmax_t iters = 200;
        const double ftol = 1e-14 * std::max(1.0, dv);
        auto tol = [&](double a, double b) { return std::abs(b - a) <= 4e-16 * std::abs(b); };
        const auto r = boost::math::tools::toms748_solve(
            [&](double s) {
                const double v = miss(s);
                return std::abs(v) <= ftol ? 0.0 : v;
            },
            lo, hi, flo, fhi, tol, iters);
        return dir * 0.5 * (r.first + r.second);
    }

    // Stefan balance as a function of mu alone.
    std::optional<double> stefan(double mu, int* marches = nullptr) const {
        try {
            const auto shot = liquid(mu);
            if (!shot) return std::nullopt;
            const double G = solid_flux(mu, shot->w2, marches);
            return balance_factor(p_) * (G - shot->flux) / metric(p_, shot->w2) - mu * p_.model.H_m;
        } catch (const DomainError&) {
        } catch (const RangeError&) {
        } catch (const NoRoot&) {
        }
        return std::nullopt;
    }

private:
    const ReducedStefanProblem& p_;
    Brackets b_;
    RootSolveConfig cfg_;
    double d1max_;
};

ParaboloidSolution solve_by_shooting(const ReducedStefanProblem& p, const RootSolveConfig& cfg) {
    p.validate();
    cfg.validate();
    const Brackets b = resolve_brackets(p, cfg);
    const Shooter sh(p, b, cfg);
    int marches = 0;
    auto G = [&](double mu) { return sh.stefan(mu, &marches); };

    const double decades = std::log10(b.mu_hi / b.mu_lo);
    const int n = std::max(2, static_cast<int>(std::ceil(decades * std::max(cfg.multistart, 1))) + 1);
    const auto mus = log_grid(b.mu_lo, b.mu_hi, n);
    std::vector<std::optional<double>> gs;
    for (double mu : mus) gs.push_back(G(mu));

    std::vector<double> roots;
    int iterations = 0;
    for (std::size_t i = 1; i < mus.size(); ++i) {
        if (!gs[i - 1] || !gs[i]) continue;
        if (*gs[i - 1] * *gs[i] > 0.0) continue;
        double a = mus[i - 1], c = mus[i];
        double fa = *gs[i - 1], fc = *gs[i];
        if (fa == 0.0) {
            roots.push_back(a);
            continue;
        }
        if (fc == 0.0) continue;  // picked up as the left end of the next interval
        std::uintmax_t iters = static_cast<std::uintmax_t>(cfg.max_iters);
        try {
            auto f = [&](double mu) {
                const auto g = G(mu);
                if (!g) throw DomainError("Stefan balance undefined inside bracket");
                return std::abs(*g) <= 1e-3 * cfg.abs_tol ? 0.0 : *g;
            };
            auto tol = [](double x, double y) { return std::abs(y - x) <= 1e-15 * std::abs(y); };
            const auto r = boost::math::tools::toms748_solve(f, a, c, fa, fc, tol, iters);
            iterations += static_cast<int>(iters);
            const double mu = std::abs(r.first - r.second) == 0.0 ? r.first : 0.5 * (r.first + r.second);
            const auto g = G(mu);
            if (g && std::abs(*g) <= 100.0 * cfg.abs_tol) roots.push_back(mu);
        } catch (const DomainError&) {
        }
    }
    if (roots.empty()) {
        throw NoRoot(fmt::format("no mu in [{:.6g}, {:.6g}] satisfies the Stefan balance", b.mu_lo, b.mu_hi));
    }
    std::sort(roots.begin(), roots.end());
    const double mu = roots.front();
    const auto shot = sh.liquid(mu);
    if (!shot) throw NoRoot("liquid shot lost at the refined root");
    const double w2 = shot->w2;
    const double G2 = sh.solid_flux(mu, w2, &marches);

    ParaboloidSolution sol;
    sol.solver_tag = SolverTag::Shooting;
    sol.geometry = SurfaceGeometry{p.geometry, omega1_of(p), w2, mu};
    sol.diagnostics.iterations = iterations;
    sol.diagnostics.evaluations = marches;
    sol.diagnostics.roots_found = static_cast<int>(roots.size());
    sol.diagnostics.root_residuals = {shot->miss,
                                      balance_factor(p) * (G2 - shot->flux) / metric(p, w2) - mu * p.model.H_m};
    if (roots.size() > 1) {
        sol.notes.push_back(fmt::format("MultipleRoots: {} distinct roots found, returning the smallest mu",
                                        roots.size()));
    }

    const EnthalpyModel& m = p.model;
    const int npts = cfg.profile_points;
    const auto wl = uniform_grid(omega1_of(p), w2, npts);
    std::vector<double> ul;
    march(make_ode(p, m.d1, mu), {m.u_v, sh.start_flux(mu)}, wl.front(), w2, sh.initial_step(mu), cfg.ode_tol,
          std::nullopt, &wl, &ul);
    ul.front() = m.u_v;
    ul.back() = m.u_m;

    const auto ws = solid_grid(p, w2, mu, npts);
    std::vector<double> vs;
    const double dt0 = 1e-2 * (ws[1] - ws[0]);
    march(make_ode(p, m.d2, mu), {m.v_m, G2}, w2, ws.back(), dt0, cfg.ode_tol, std::nullopt, &ws, &vs);
    vs.front() = m.v_m;
    sol.diagnostics.farfield_residual = std::abs(vs.back() - m.v_inf);
    sol.profiles = ReducedProfiles{MonotoneCubic(wl, ul), MonotoneCubic(ws, vs), m.v_inf};
    sol.notes.push_back(fmt::format("far field imposed at omega_max = {:.17g}", ws.back()));
    return sol;
}

MonotoneCubic closed_form_solid(const ReducedStefanProblem& p, double w2, double mu, int n, double a2,
                                double* farfield) {
    const EnthalpyModel& m = p.model;
    const auto ws = solid_grid(p, w2, mu, n);
    const double s22 = mu * w2 / (2.0 * a2);
    const double e22 = exp_integral_e1_scaled(s22);
    std::vector<double> vs(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const double s = mu * ws[i] / (2.0 * a2);
        vs[i] = m.v_inf + (m.v_m - m.v_inf) * std::exp(-(s - s22)) * exp_integral_e1_scaled(s) / e22;
    }
    vs.front() = m.v_m;
    *farfield = std::abs(vs.back() - m.v_inf);
    return MonotoneCubic(ws, vs);
}

}  // namespace

void ReducedStefanProblem::validate() const {
    model.validate();
    if (geometry == GeometryKind::Paraboloid && !(R > 0.0 && std::isfinite(R))) {
        throw DomainError(fmt::format("ReducedStefanProblem: R must be > 0 (got {})", R));
    }
    if (!std::isfinite(q) || q == 0.0) throw DomainError("ReducedStefanProblem: q must be finite and nonzero");
}

void RootSolveConfig::validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("RootSolveConfig: abs_tol must be > 0");
    if (max_iters < 1) throw DomainError("RootSolveConfig: max_iters must be >= 1");
    if (multistart < 1) throw DomainError("RootSolveConfig: multistart must be >= 1");
    if (profile_points < 8) throw DomainError("RootSolveConfig: profile_points must be >= 8");
    if (!(ode_tol > 0.0 && ode_tol < 1e-3)) throw DomainError("RootSolveConfig: ode_tol must lie in (0, 1e-3)");
    if (omega2_lo < 0.0 || omega2_hi < 0.0 || mu_lo < 0.0 || mu_hi < 0.0) {
        throw DomainError("RootSolveConfig: bracket entries must be >= 0 (0 selects the default)");
    }
    if (omega2_lo > 0.0 && omega2_hi > 0.0 && !(omega2_hi > omega2_lo)) {
        throw DomainError("RootSolveConfig: empty omega2 bracket");
    }
    if (mu_lo > 0.0 && mu_hi > 0.0 && !(mu_hi > mu_lo)) throw DomainError("RootSolveConfig: empty mu bracket");
}

const char* solver_tag_name(SolverTag t) {
    switch (t) {
        case SolverTag::ClosedFormConstant: return "ClosedFormConstant";
        case SolverTag::ClosedFormFastDiffusion: return "ClosedFormFastDiffusion";
        case SolverTag::Shooting: return "Shooting";
    }
    return "?";
}

bool is_constant_case(const EnthalpyModel& model) { return model.d1.is_constant() && model.d2.is_constant(); }

bool is_fast_diffusion_case(const EnthalpyModel& model) {
    return model.d1.canonical_family() == FunctionProfile::Family::Power && model.d1.exponent() == -1.0 &&
           model.d2.is_constant();
}

std::array<double, 2> transcendental_residuals(const ReducedStefanProblem& problem, double omega2, double mu) {
    if (problem.geometry != GeometryKind::Paraboloid) {
        throw UnsupportedCase("transcendental residuals are defined for the paraboloid geometry only");
    }
    if (!(omega2 > problem.R)) throw DomainError(fmt::format("omega2 = {} must exceed R = {}", omega2, problem.R));
    if (!(mu > 0.0)) throw DomainError(fmt::format("mu = {} must be > 0", mu));
    if (is_constant_case(problem.model)) return constant_residuals(problem, omega2, mu);
    if (is_fast_diffusion_case(problem.model)) return fast_residuals(problem, omega2, mu);
    throw UnsupportedCase(fmt::format("no closed-form residuals for d1 = {}, d2 = {}", problem.model.d1.describe(),
                                      problem.model.d2.describe()));
}

double fast_diffusion_exponent(const ReducedStefanProblem& problem, double mu, double nu) {
    return FastCase(problem, mu).A(nu);
}

double fast_diffusion_integral(const ReducedStefanProblem& problem, double mu, double nu) {
    const FastCase f(problem, mu);
    return f.integral(problem.R * f.w_v, nu);
}

ParaboloidSolution solve_constant_diffusivity(const ReducedStefanProblem& problem, const RootSolveConfig& cfg) {
    problem.validate();
    cfg.validate();
    if (problem.geometry != GeometryKind::Paraboloid) throw UnsupportedCase("closed forms need the paraboloid geometry");
    if (!is_constant_case(problem.model)) throw UnsupportedCase("solve_constant_diffusivity needs constant d1 and d2");
    const Brackets b = resolve_brackets(problem, cfg);
    TwoByTwo finder([&](double w2, double mu) { return constant_residuals(problem, w2, mu); }, problem.R, b, cfg);
    const RootSet rs = finder.run();
    if (rs.roots.empty()) {
        throw NoRoot(fmt::format("no (omega2, mu) root in ({:.6g}, {:.6g}] x [{:.6g}, {:.6g}]", b.w_lo, b.w_hi,
                                 b.mu_lo, b.mu_hi));
    }
    const double w2 = rs.roots.front()[0];
    const double mu = rs.roots.front()[1];

    ParaboloidSolution sol;
    sol.solver_tag = SolverTag::ClosedFormConstant;
    sol.geometry = SurfaceGeometry{GeometryKind::Paraboloid, problem.R, w2, mu};
    sol.diagnostics.root_residuals = constant_residuals(problem, w2, mu);
    note_roots(sol, rs);

    const ConstantCase c(problem, w2, mu);
    const auto wl = uniform_grid(problem.R, w2, cfg.profile_points);
    std::vector<double> ul(wl.size());
    for (std::size_t i = 0; i < wl.size(); ++i) ul[i] = c.u(wl[i]);
    ul.front() = c.u_v;
    ul.back() = c.u_m;
    double farfield = 0.0;
    MonotoneCubic v = closed_form_solid(problem, w2, mu, cfg.profile_points, c.a2, &farfield);
    sol.diagnostics.farfield_residual = farfield;
    sol.notes.push_back(fmt::format("far field imposed at omega_max = {:.17g}", v.hi()));
    sol.profiles = ReducedProfiles{MonotoneCubic(wl, ul), std::move(v), problem.model.v_inf};
    return sol;
}

ParaboloidSolution solve_fast_diffusion(const ReducedStefanProblem& problem, const RootSolveConfig& cfg) {
    problem.validate();
    cfg.validate();
    if (problem.geometry != GeometryKind::Paraboloid) throw UnsupportedCase("closed forms need the paraboloid geometry");
    if (!is_fast_diffusion_case(problem.model)) {
        throw UnsupportedCase("solve_fast_diffusion needs d1 = k (u + C)^-1 and constant d2");
    }
    Brackets b = resolve_brackets(problem, cfg);
    // ln((mu H_v - q) R / 2k) needs mu > q / H_v.
    b.mu_lo = std::max(b.mu_lo, problem.q / problem.model.H_v * (1.0 + 1e-12));
    if (!(b.mu_hi > b.mu_lo)) throw NoRoot("mu bracket lies below q / H_v");
    TwoByTwo finder([&](double w2, double mu) { return fast_residuals(problem, w2, mu); }, problem.R, b, cfg);
    const RootSet rs = finder.run();
    if (rs.roots.empty()) {
        throw NoRoot(fmt::format("no (omega2, mu) root in ({:.6g}, {:.6g}] x [{:.6g}, {:.6g}]", b.w_lo, b.w_hi,
                                 b.mu_lo, b.mu_hi));
    }
    const double w2 = rs.roots.front()[0];
    const double mu = rs.roots.front()[1];

    ParaboloidSolution sol;
    sol.solver_tag = SolverTag::ClosedFormFastDiffusion;
    sol.geometry = SurfaceGeometry{GeometryKind::Paraboloid, problem.R, w2, mu};
    sol.diagnostics.root_residuals = fast_residuals(problem, w2, mu);
    note_roots(sol, rs);
    sol.notes.push_back("implicit relation integrated from nu = R (u_v + C)");

    // March the implicit relation along the grid: at each node solve
    // I(nu) = ln(omega / R) for nu = omega w, carrying I forward.
    const FastCase f(problem, mu);
    const auto wl = uniform_grid(problem.R, w2, cfg.profile_points);
    std::vector<double> ul(wl.size());
    ul.front() = problem.model.u_v;
    double nu_prev = problem.R * f.w_v;
    double I_prev = 0.0;
    for (std::size_t i = 1; i + 1 < wl.size(); ++i) {
        const double target = std::log(wl[i] / problem.R);
        const double lo = std::max(nu_prev, wl[i] * f.w_v);
        const double hi = wl[i] * f.w_m;
        auto g = [&](double nu) { return I_prev + f.integral(nu_prev, nu) - target; };
        const double glo = g(lo);
        const double ghi = g(hi);
        double nu;
        if (glo >= 0.0) {
            nu = lo;
        } else if (ghi <= 0.0) {
            nu = hi;
        } else {
            std::uintmax_t iters = 200;
            const auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                                             boost::math::tools::eps_tolerance<double>(52), iters);
            nu = 0.5 * (r.first + r.second);
        }
        I_prev += f.integral(nu_prev, nu);
        nu_prev = nu;
        ul[i] = nu / wl[i] - f.C;
    }
    ul.back() = problem.model.u_m;
    double farfield = 0.0;
    MonotoneCubic v = closed_form_solid(problem, w2, mu, cfg.profile_points, f.a2, &farfield);
    sol.diagnostics.farfield_residual = farfield;
    sol.notes.push_back(fmt::format("far field imposed at omega_max = {:.17g}", v.hi()));
    sol.profiles = ReducedProfiles{MonotoneCubic(wl, ul), std::move(v), problem.model.v_inf};
    return sol;
}

ParaboloidSolution solve_shooting(const ReducedStefanProblem& problem, const RootSolveConfig& cfg) {
    if (problem.geometry != GeometryKind::Paraboloid) throw UnsupportedCase("solve_shooting needs the paraboloid geometry");
    return solve_by_shooting(problem, cfg);
}

ParaboloidSolution solve_planar(const ReducedStefanProblem& problem, const RootSolveConfig& cfg) {
    if (problem.geometry != GeometryKind::Planar) throw UnsupportedCase("solve_planar needs the planar geometry");
    return solve_by_shooting(problem, cfg);
}

ParaboloidSolution solve(const ReducedStefanProblem& problem, SolveMethod method, const RootSolveConfig& cfg) {
    if (problem.geometry == GeometryKind::Planar) {
        if (method == SolveMethod::ClosedForm) throw UnsupportedCase("no closed-form path for the planar geometry");
        return solve_planar(problem, cfg);
    }
    const bool constant = is_constant_case(problem.model);
    const bool fast = is_fast_diffusion_case(problem.model);
    switch (method) {
        case SolveMethod::Shooting:
            return solve_shooting(problem, cfg);
        case SolveMethod::ClosedForm:
            if (constant) return solve_constant_diffusivity(problem, cfg);
            if (fast) return solve_fast_diffusion(problem, cfg);
            throw UnsupportedCase(fmt::format("no closed form for d1 = {}, d2 = {}", problem.model.d1.describe(),
                                              problem.model.d2.describe()));
        case SolveMethod::Auto:
            break;
    }
    if (constant) return solve_constant_diffusivity(problem, cfg);
    if (fast) return solve_fast_diffusion(problem, cfg);
    return solve_shooting(problem, cfg);
}

}  // namespace stefan
