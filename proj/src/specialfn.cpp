#include "stefan/specialfn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include <fmt/format.h>

#include "stefan/errors.hpp"

namespace stefan {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxHalley = 50;

// e split into a double and its rounding error, so that e*x + 1 keeps its
// leading digits next to the branch point x = -1/e.
constexpr double kEHi = 2.718281828459045;
constexpr double kELo = 1.4456468917292502e-16;

bool small_step(double step, double w) {
    return std::abs(step) <= 4.0 * kEps * std::max(1.0, std::abs(w));
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("QuadratureConfig: abs_tol must be > 0");
    if (!(rel_tol > 0.0)) throw DomainError("QuadratureConfig: rel_tol must be > 0");
    if (max_subdivisions < 1) throw DomainError("QuadratureConfig: max_subdivisions must be >= 1");
}

double lambert_w0(double x, double tol) {
    if (std::isnan(x)) throw DomainError("lambert_w0: argument is NaN");
    if (std::isinf(x)) {
        if (x > 0) return x;
        throw DomainError("lambert_w0: argument below -1/e");
    }
    const double ex1 = std::fma(kEHi, x, 1.0) + kELo * x;
    if (ex1 < 0.0) {
        if (ex1 > -4.0 * kEps) return -1.0;
        throw DomainError(fmt::format("lambert_w0: x = {} is below -1/e", x));
    }
    if (x == 0.0) return 0.0;
    if (ex1 == 0.0) return -1.0;

    double w;
    if (x < -0.32) {
        // Series about the branch point in p = sqrt(2(ex + 1)).
        const double p = std::sqrt(2.0 * ex1);
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
    } else if (x <= 3.0) {
        const double l = std::log1p(x);
        w = l * (1.0 - std::log1p(l) / (2.0 + l));
    } else {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    bool converged = false;
    if (x > std::numbers::e) {
        // Halley on g(w) = w + ln w - ln x, which stays well scaled for huge x.
        const double lx = std::log(x);
        for (int it = 0; it < kMaxHalley; ++it) {
            const double g = w + std::log(w) - lx;
            const double g1 = 1.0 + 1.0 / w;
            const double g2 = -1.0 / (w * w);
            const double step = g / (g1 - 0.5 * g * g2 / g1);
            w -= step;
            if (small_step(step, w)) {
                converged = true;
                break;
            }
        }
    } else {
        for (int it = 0; it < kMaxHalley; ++it) {
            const double e = std::exp(w);
            const double f = w * e - x;
            if (f == 0.0) {
                converged = true;
                break;
            }
            const double wp1 = w + 1.0;
            if (wp1 == 0.0) break;
            const double step = f / (e * wp1 - (w + 2.0) * f / (2.0 * wp1));
            w -= step;
            if (small_step(step, w)) {
                converged = true;
                break;
            }
        }
    }
    const double resid = std::abs(w * std::exp(w) - x);
    // The floor term is the rounding error of evaluating w e^w itself, which
    // only exceeds tol for |x| beyond ~1e17.
    const double bound = std::max(tol, 8.0 * kEps * (1.0 + std::abs(w))) * std::max(1.0, std::abs(x));
    if (!converged || !(resid <= bound)) {
        throw NonConvergence(fmt::format("lambert_w0: no convergence at x = {} (residual {})", x, resid));
    }
    return w;
}

double wright_omega(double a) {
    if (std::isnan(a)) throw DomainError("wright_omega: argument is NaN");
    if (a <= 1.0) return lambert_w0(std::exp(a));
    if (std::isinf(a)) return a;
    double w = a - std::log(a);
    for (int it = 0; it < kMaxHalley; ++it) {
        const double g = w + std::log(w) - a;
        const double g1 = 1.0 + 1.0 / w;
        const double g2 = -1.0 / (w * w);
        const double step = g / (g1 - 0.5 * g * g2 / g1);
        w -= step;
        if (small_step(step, w)) return w;
    }
    throw NonConvergence(fmt::format("wright_omega: no convergence at a = {}", a));
}

namespace {

// Power series, valid for 0 < x <= 1.
double e1_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x / k;
        const double add = term / k;
        sum += add;
        if (std::abs(add) <= kEps * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(x) - sum;
}

// Continued fraction for exp(x) E1(x), x > 1, by the modified Lentz method.
double e1_scaled_cf(double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) return h;
    }
    throw NonConvergence(fmt::format("exp_integral_e1: continued fraction stalled at x = {}", x));
}

void check_e1_arg(double x) {
    if (!(x > 0.0)) throw DomainError(fmt::format("exp_integral_e1: x = {} must be > 0", x));
}

}  // namespace

double exp_integral_e1(double x) {
    check_e1_arg(x);
    if (std::isinf(x)) return 0.0;
    if (x <= 1.0) return e1_series(x);
    return e1_scaled_cf(x) * std::exp(-x);
}

double exp_integral_e1_scaled(double x) {
    check_e1_arg(x);
    if (std::isinf(x)) return 0.0;
    if (x <= 1.0) return std::exp(x) * e1_series(x);
    return e1_scaled_cf(x);
}

double phi_integral(double omega, double mu, double a) {
    if (!(omega > 0.0) || !(mu > 0.0) || !(a > 0.0)) {
        throw DomainError(fmt::format("phi_integral: arguments must be positive (omega={}, mu={}, a={})",
                                      omega, mu, a));
    }
    return exp_integral_e1(mu * omega / (2.0 * a));
}

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod15(const std::function<double(double)>& g, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    auto eval = [&](double x) {
        const double y = g(x);
        if (!std::isfinite(y)) {
            throw DomainError(fmt::format("adaptive_integrate: integrand not finite at {}", x));
        }
        return y;
    };
    const double fc = eval(c);
    double kron = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = eval(c - dx);
        const double f2 = eval(c + dx);
        kron += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double lo, double hi,
                          const QuadratureConfig& cfg) {
    cfg.validate();
    if (std::isnan(lo) || std::isnan(hi) || std::isinf(lo) || !(lo < hi)) {
        throw DomainError(fmt::format("adaptive_integrate: need finite lo < hi (lo={}, hi={})", lo, hi));
    }
    std::function<double(double)> g = f;
    double a = lo;
    double b = hi;
    if (std::isinf(hi)) {
        g = [&f, lo](double s) {
            const double om = 1.0 - s;
            return f(lo + s / om) / (om * om);
        };
        a = 0.0;
        b = 1.0;
    }

    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod15(g, a, b);
    double total = first.value;
    double error = first.error;
    heap.push(first);
    int splits = 0;
    while (error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
        if (splits >= cfg.max_subdivisions) {
            throw NonConvergence(fmt::format(
                "adaptive_integrate: {} subdivisions exceeded (estimated error {})", cfg.max_subdivisions, error));
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = gauss_kronrod15(g, worst.a, mid);
        Segment right = gauss_kronrod15(g, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    // Re-sum to shed the drift accumulated by the incremental updates.
    double sum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        heap.pop();
    }
    return sum;
}

}  // namespace stefan
