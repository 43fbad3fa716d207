#include "stefan/interp.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "stefan/errors.hpp"

namespace stefan {

double lagrange_derivative(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t i) {
    const std::size_t n = xs.size();
    const std::size_t m = std::min<std::size_t>(5, n);
    std::size_t j0 = i >= 2 ? i - 2 : 0;
    if (j0 + m > n) j0 = n - m;
    const double xi = xs[i];
    double d = 0.0;
    for (std::size_t j = j0; j < j0 + m; ++j) {
        double w;
        if (j == i) {
            w = 0.0;
            for (std::size_t k = j0; k < j0 + m; ++k) {
                if (k != i) w += 1.0 / (xi - xs[k]);
            }
        } else {
            double num = 1.0;
            double den = 1.0;
            for (std::size_t k = j0; k < j0 + m; ++k) {
                if (k == j) continue;
                den *= xs[j] - xs[k];
                if (k != i) num *= xi - xs[k];
            }
            w = num / den;
        }
        d += w * ys[j];
    }
    return d;
}

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n) {
        throw DomainError(fmt::format("MonotoneCubic: need >= 2 knots with matching sizes (got {} and {})",
                                      n, ys_.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
            throw DomainError(fmt::format("MonotoneCubic: non-finite knot at index {}", i));
        }
        if (i > 0 && !(xs_[i] > xs_[i - 1])) {
            throw DomainError(fmt::format("MonotoneCubic: knots not strictly increasing at index {}", i));
        }
    }
    std::vector<double> sec(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) sec[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);

    ds_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = n == 2 ? sec[0] : lagrange_derivative(xs_, ys_, i);
        if (i == 0 || i + 1 == n) {
            const double s = i == 0 ? sec[0] : sec[n - 2];
            if (d * s <= 0.0) d = 0.0;
            else if (std::abs(d) > 3.0 * std::abs(s)) d = 3.0 * s;
        } else {
            const double a = sec[i - 1];
            const double b = sec[i];
            if (a * b <= 0.0 || d * a <= 0.0) {
                d = 0.0;
            } else {
                const double cap = 3.0 * std::min(std::abs(a), std::abs(b));
                if (std::abs(d) > cap) d = std::copysign(cap, a);
            }
        }
        ds_[i] = d;
    }
}

bool MonotoneCubic::contains(double x) const {
    if (xs_.empty()) return false;
    const double slack = 1e-12 * (xs_.back() - xs_.front());
    return x >= xs_.front() - slack && x <= xs_.back() + slack;
}

std::size_t MonotoneCubic::locate(double& x) const {
    if (!contains(x)) {
        if (xs_.empty()) throw RangeError("MonotoneCubic: evaluation of an empty interpolant");
        throw RangeError(fmt::format("MonotoneCubic: argument {} outside [{}, {}]", x, xs_.front(), xs_.back()));
    }
    x = std::clamp(x, xs_.front(), xs_.back());
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (i + 1 >= xs_.size()) i = xs_.size() - 2;
    return i;
}

double MonotoneCubic::eval(double x) const {
    const std::size_t i = locate(x);
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * ys_[i] + h10 * h * ds_[i] + h01 * ys_[i + 1] + h11 * h * ds_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
    const std::size_t i = locate(x);
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t;
    const double d00 = (6 * t2 - 6 * t) / h;
    const double d10 = 3 * t2 - 4 * t + 1;
    const double d01 = (-6 * t2 + 6 * t) / h;
    const double d11 = 3 * t2 - 2 * t;
    return d00 * ys_[i] + d10 * ds_[i] + d01 * ys_[i + 1] + d11 * ds_[i + 1];
}

}  // namespace stefan
