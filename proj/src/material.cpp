#include "stefan/material.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "stefan/errors.hpp"

namespace stefan {

FunctionProfile FunctionProfile::constant(double c) {
    if (!std::isfinite(c) || c == 0.0) throw DomainError(fmt::format("Constant profile: c = {} must be finite and nonzero", c));
    FunctionProfile p;
    p.family_ = Family::Constant;
    p.coef_ = c;
    return p;
}

FunctionProfile FunctionProfile::power(double D, double alpha, double shift) {
    if (!std::isfinite(D) || D == 0.0 || !std::isfinite(alpha) || !std::isfinite(shift)) {
        throw DomainError(fmt::format("Power profile: need finite D != 0, alpha, shift (D={}, alpha={}, C={})", D, alpha, shift));
    }
    FunctionProfile p;
    p.family_ = Family::Power;
    p.coef_ = D;
    p.alpha_ = alpha;
    p.shift_ = shift;
    return p;
}

FunctionProfile FunctionProfile::exponential(double D, double alpha) {
    if (!std::isfinite(D) || D == 0.0 || !std::isfinite(alpha)) {
        throw DomainError(fmt::format("Exponential profile: need finite D != 0 and alpha (D={}, alpha={})", D, alpha));
    }
    FunctionProfile p;
    p.family_ = Family::Exponential;
    p.coef_ = D;
    p.alpha_ = alpha;
    return p;
}

FunctionProfile FunctionProfile::tabulated(std::vector<double> args, std::vector<double> values) {
    FunctionProfile p;
    p.family_ = Family::Tabulated;
    p.table_ = MonotoneCubic(std::move(args), std::move(values));
    return p;
}

double FunctionProfile::eval(double x) const {
    switch (family_) {
        case Family::Constant:
            return coef_;
        case Family::Power: {
            const double base = x + shift_;
            if (alpha_ == 0.0) return coef_;
            if (base <= 0.0 && (alpha_ != std::round(alpha_) || (base == 0.0 && alpha_ < 0.0))) {
                throw DomainError(fmt::format("Power profile: base {} outside the domain of exponent {}", base, alpha_));
            }
            return coef_ * std::pow(base, alpha_);
        }
        case Family::Exponential:
            return coef_ * std::exp(alpha_ * x);
        case Family::Tabulated:
            return table_.eval(x);
    }
    return 0.0;
}

FunctionProfile::Family FunctionProfile::canonical_family() const {
    if ((family_ == Family::Power || family_ == Family::Exponential) && alpha_ == 0.0) return Family::Constant;
    return family_;
}

double FunctionProfile::constant_value() const {
    if (!is_constant()) throw DomainError("constant_value: profile is not constant");
    return coef_;
}

namespace {

template <class Pick>
double extreme_over(const FunctionProfile& p, double lo, double hi, Pick pick) {
    if (lo > hi) std::swap(lo, hi);
    double best = pick(p.eval(lo), p.eval(hi));
    using F = FunctionProfile::Family;
    const F fam = p.canonical_family();
    if (fam == F::Constant || fam == F::Exponential) return best;
    if (fam == F::Power && lo + p.shift() > 0.0) return best;
    constexpr int n = 256;
    for (int i = 1; i < n; ++i) best = pick(best, p.eval(lo + (hi - lo) * i / n));
    if (fam == F::Tabulated) {
        for (double x : p.table().xs()) {
            if (x > lo && x < hi) best = pick(best, p.eval(x));
        }
    }
    return best;
}

}  // namespace

double FunctionProfile::min_over(double lo, double hi) const {
    return extreme_over(*this, lo, hi, [](double a, double b) { return std::min(a, b); });
}

double FunctionProfile::max_over(double lo, double hi) const {
    return extreme_over(*this, lo, hi, [](double a, double b) { return std::max(a, b); });
}

std::string FunctionProfile::describe() const {
    switch (family_) {
        case Family::Constant:
            return fmt::format("constant({})", coef_);
        case Family::Power:
            return fmt::format("power(D={}, alpha={}, shift={})", coef_, alpha_, shift_);
        case Family::Exponential:
            return fmt::format("exponential(D={}, alpha={})", coef_, alpha_);
        case Family::Tabulated:
            return fmt::format("tabulated({} knots on [{}, {}])", table_.size(), table_.lo(), table_.hi());
    }
    return "?";
}

const char* family_name(FunctionProfile::Family f) {
    switch (f) {
        case FunctionProfile::Family::Constant: return "constant";
        case FunctionProfile::Family::Power: return "power";
        case FunctionProfile::Family::Exponential: return "exponential";
        case FunctionProfile::Family::Tabulated: return "tabulated";
    }
    return "?";
}

void MaterialSpec::validate() const {
    for (double v : {H_v, H_m, T_v, T_m, T_inf}) {
        if (!std::isfinite(v)) throw DomainError("MaterialSpec: non-finite constant");
    }
    if (!(H_v > 0.0)) throw DomainError(fmt::format("MaterialSpec: H_v = {} must be > 0", H_v));
    if (!(H_m > 0.0)) throw DomainError(fmt::format("MaterialSpec: H_m = {} must be > 0", H_m));
    if (!(T_v > T_m && T_m > T_inf)) {
        throw DomainError(fmt::format("MaterialSpec: need T_v > T_m > T_inf (got {}, {}, {})", T_v, T_m, T_inf));
    }
}

double EnthalpyMap::enthalpy(double T) const {
    const double slack = 1e-12 * std::max(1.0, T_hi - T_lo);
    if (T < T_lo - slack || T > T_hi + slack) {
        throw RangeError(fmt::format("temperature {} outside the mapped range [{}, {}]", T, T_lo, T_hi));
    }
    if (linear) return c * T;
    return table.eval(T);
}

double EnthalpyMap::value_lo() const { return linear ? c * T_lo : table.ys().front(); }
double EnthalpyMap::value_hi() const { return linear ? c * T_hi : table.ys().back(); }

double EnthalpyMap::temperature(double value) const {
    const double lo = value_lo();
    const double hi = value_hi();
    const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (value < lo - slack || value > hi + slack) {
        throw RangeError(fmt::format("enthalpy {} outside the tabulated range [{}, {}]", value, lo, hi));
    }
    if (linear) return value / c;
    if (value <= lo) return T_lo;
    if (value >= hi) return T_hi;
    auto f = [&](double T) { return table.eval(T) - value; };
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, T_lo, T_hi, lo - value, hi - value,
                                               boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

EnthalpyModel EnthalpyModel::make(FunctionProfile d1, FunctionProfile d2, double u_v, double u_m, double v_m,
                                  double v_inf, double H_v, double H_m) {
    EnthalpyModel m;
    m.d1 = std::move(d1);
    m.d2 = std::move(d2);
    m.u_v = u_v;
    m.u_m = u_m;
    m.v_m = v_m;
    m.v_inf = v_inf;
    m.H_v = H_v;
    m.H_m = H_m;
    m.d1v = m.d1(u_v);
    m.d1m = m.d1(u_m);
    m.d2m = m.d2(v_m);
    m.validate();
    return m;
}

void EnthalpyModel::validate() const {
    for (double v : {u_v, u_m, v_m, v_inf, H_v, H_m, d1v, d1m, d2m}) {
        if (!std::isfinite(v)) throw DomainError("EnthalpyModel: non-finite constant");
    }
    if (u_v == u_m) throw DomainError("EnthalpyModel: u_v must differ from u_m");
    if (v_m == v_inf) throw DomainError("EnthalpyModel: v_m must differ from v_inf");
    if (!(H_v > 0.0) || !(H_m > 0.0)) throw DomainError("EnthalpyModel: latent heats must be > 0");
    const double d1min = d1.min_over(std::min(u_v, u_m), std::max(u_v, u_m));
    const double d2min = d2.min_over(std::min(v_m, v_inf), std::max(v_m, v_inf));
    if (!(d1min > 0.0)) throw DomainError(fmt::format("EnthalpyModel: d1 not positive on the liquid range (min {})", d1min));
    if (!(d2min > 0.0)) throw DomainError(fmt::format("EnthalpyModel: d2 not positive on the solid range (min {})", d2min));
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
    if (!close(d1v, d1(u_v)) || !close(d1m, d1(u_m)) || !close(d2m, d2(v_m))) {
        throw DomainError("EnthalpyModel: threshold diffusivities inconsistent with d1, d2");
    }
}

namespace {

// d(u) = lambda(u/c)/c for a constant capacity c, kept in closed form.
FunctionProfile scale_conductivity(const FunctionProfile& lambda, double c) {
    using F = FunctionProfile::Family;
    switch (lambda.family()) {
        case F::Constant:
            return FunctionProfile::constant(lambda.coefficient() / c);
        case F::Power:
            return FunctionProfile::power(lambda.coefficient() * std::pow(c, -lambda.exponent() - 1.0),
                                          lambda.exponent(), c * lambda.shift());
        case F::Exponential:
            return FunctionProfile::exponential(lambda.coefficient() / c, lambda.exponent() / c);
        case F::Tabulated: {
            std::vector<double> xs = lambda.table().xs();
            std::vector<double> ys = lambda.table().ys();
            for (double& x : xs) x *= c;
            for (double& y : ys) y /= c;
            return FunctionProfile::tabulated(std::move(xs), std::move(ys));
        }
    }
    return lambda;
}

struct PhaseTransform {
    FunctionProfile d;
    EnthalpyMap map;
};

PhaseTransform transform_phase(const FunctionProfile& lambda, const FunctionProfile& cap, double T_lo, double T_hi,
                               const QuadratureConfig& quad, int knots, const char* name) {
    try {
        const double lo0 = std::min(0.0, T_lo);
        if (cap.min_over(lo0, T_hi) < 0.0) {
            throw TransformError(fmt::format("heat capacity {} is negative on [{}, {}]", name, lo0, T_hi));
        }
        if (!(cap.min_over(T_lo, T_hi) > 0.0)) {
            throw TransformError(fmt::format("heat capacity {} is not positive on [{}, {}]", name, T_lo, T_hi));
        }
        if (!(lambda.min_over(T_lo, T_hi) > 0.0)) {
            throw TransformError(fmt::format("conductivity of phase {} is not positive on [{}, {}]", name, T_lo, T_hi));
        }
        PhaseTransform out;
        out.map.T_lo = T_lo;
        out.map.T_hi = T_hi;
        if (cap.is_constant()) {
            const double c = cap.constant_value();
            out.map.linear = true;
            out.map.c = c;
            out.d = scale_conductivity(lambda, c);
            return out;
        }
        if (knots < 2) throw TransformError("goodman_transform: need at least 2 knots");
        auto C = [&](double T) { return cap(T); };
        std::vector<double> Ts(knots), phis(knots), us(knots), ds(knots);
        for (int i = 0; i < knots; ++i) Ts[i] = T_lo + (T_hi - T_lo) * i / (knots - 1);
        Ts.back() = T_hi;
        if (T_lo > 0.0) phis[0] = adaptive_integrate(C, 0.0, T_lo, quad);
        else if (T_lo < 0.0) phis[0] = -adaptive_integrate(C, T_lo, 0.0, quad);
        else phis[0] = 0.0;
        for (int i = 1; i < knots; ++i) phis[i] = phis[i - 1] + adaptive_integrate(C, Ts[i - 1], Ts[i], quad);
        for (int i = 0; i < knots; ++i) ds[i] = lambda(Ts[i]) / cap(Ts[i]);
        out.map.table = MonotoneCubic(Ts, phis);
        out.d = FunctionProfile::tabulated(phis, ds);
        return out;
    } catch (const TransformError&) {
        throw;
    } catch (const Error& e) {
        throw TransformError(fmt::format("phase {}: {}", name, e.what()));
    }
}

}  // namespace

EnthalpyModel goodman_transform(const MaterialSpec& spec, const QuadratureConfig& quad, int knots) {
    spec.validate();
    quad.validate();
    PhaseTransform liq = transform_phase(spec.lambda1, spec.c1, spec.T_m, spec.T_v, quad, knots, "1 (liquid)");
    PhaseTransform sol = transform_phase(spec.lambda2, spec.c2, spec.T_inf, spec.T_m, quad, knots, "2 (solid)");
    const double u_m = liq.map.value_lo();
    const double u_v = liq.map.value_hi();
    const double v_inf = sol.map.value_lo();
    const double v_m = sol.map.value_hi();
    EnthalpyModel m = EnthalpyModel::make(std::move(liq.d), std::move(sol.d), u_v, u_m, v_m, v_inf, spec.H_v, spec.H_m);
    m.liquid_map = std::move(liq.map);
    m.solid_map = std::move(sol.map);
    return m;
}

double invert_enthalpy(const EnthalpyModel& model, Phase phase, double value) {
    const auto& map = phase == Phase::Liquid ? model.liquid_map : model.solid_map;
    if (!map) throw DomainError("invert_enthalpy: model carries no temperature map (built from enthalpy data)");
    return map->temperature(value);
}

double enthalpy_of_temperature(const EnthalpyModel& model, Phase phase, double T) {
    const auto& map = phase == Phase::Liquid ? model.liquid_map : model.solid_map;
    if (!map) throw DomainError("enthalpy_of_temperature: model carries no temperature map");
    return map->enthalpy(T);
}

}  // namespace stefan
