#pragma once

#include <cstddef>
#include <vector>

namespace stefan {

// Shape-preserving piecewise-cubic Hermite interpolant on strictly increasing
// knots. Knot slopes come from a five-point Lagrange derivative and are then
// limited (zero at local extrema, at most three times the adjacent secants),
// so monotone data gives a monotone interpolant.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    // Throws DomainError unless xs is strictly increasing, sizes match and
    // there are at least two knots.
    MonotoneCubic(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const { return eval(x); }
    // Out-of-range arguments throw RangeError. Arguments within a relative
    // 1e-12 of the span outside an end knot are clamped to that knot.
    double eval(double x) const;
    double derivative(double x) const;

    bool empty() const { return xs_.empty(); }
    std::size_t size() const { return xs_.size(); }
    double lo() const { return xs_.front(); }
    double hi() const { return xs_.back(); }
    bool contains(double x) const;
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }
    const std::vector<double>& slopes() const { return ds_; }

private:
    std::size_t locate(double& x) const;

    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<double> ds_;
};

// Five-point Lagrange derivative of tabulated data at knot i (one-sided near
// the ends); fourth order on smooth data.
double lagrange_derivative(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t i);

}  // namespace stefan
