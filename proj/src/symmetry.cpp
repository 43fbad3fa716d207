#include "stefan/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "stefan/errors.hpp"

namespace stefan {

FluxComponent FluxComponent::constant(double q) {
    FluxComponent c;
    c.kind = Kind::Const;
    c.q = q;
    return c;
}

FluxComponent FluxComponent::inv_sqrt_t(double q) {
    FluxComponent c;
    c.kind = Kind::InvSqrtT;
    c.q = q;
    return c;
}

FluxComponent FluxComponent::rot_const(double q1, double q2, double lambda) {
    FluxComponent c;
    c.kind = Kind::RotConst;
    c.q1 = q1;
    c.q2 = q2;
    c.lambda = lambda;
    return c;
}

FluxComponent FluxComponent::rot_inv_sqrt_t(double q1, double q2, double lambda) {
    FluxComponent c = rot_const(q1, q2, lambda);
    c.kind = Kind::RotInvSqrtT;
    return c;
}

FluxComponent FluxComponent::arbitrary(std::vector<std::pair<double, double>> samples) {
    FluxComponent c;
    c.kind = Kind::Arbitrary;
    c.samples = std::move(samples);
    return c;
}

const char* flux_kind_name(FluxComponent::Kind k) {
    switch (k) {
        case FluxComponent::Kind::Zero: return "zero";
        case FluxComponent::Kind::Const: return "const";
        case FluxComponent::Kind::InvSqrtT: return "inv_sqrt_t";
        case FluxComponent::Kind::RotConst: return "rot_const";
        case FluxComponent::Kind::RotInvSqrtT: return "rot_inv_sqrt_t";
        case FluxComponent::Kind::Arbitrary: return "samples";
    }
    return "?";
}

FluxSpec FluxSpec::axial_constant(double q) {
    FluxSpec f;
    f.q3 = FluxComponent::constant(q);
    return f;
}

namespace {

using Kind = FluxComponent::Kind;

void validate_component(const FluxComponent& c, int index) {
    auto bad = [index](const std::string& msg) { return DomainError(fmt::format("flux component q{}: {}", index, msg)); };
    for (double v : {c.q, c.q1, c.q2, c.lambda}) {
        if (!std::isfinite(v)) throw bad("non-finite constant");
    }
    if (c.kind == Kind::Arbitrary) {
        if (c.samples.empty()) throw bad("sampled family needs at least one sample");
        for (std::size_t i = 0; i < c.samples.size(); ++i) {
            if (!std::isfinite(c.samples[i].first) || !std::isfinite(c.samples[i].second)) throw bad("non-finite sample");
            if (i > 0 && !(c.samples[i].first > c.samples[i - 1].first)) throw bad("sample times must increase");
        }
    }
    if (c.is_rotating() && c.lambda != 0.0 && c.q1 == 0.0 && c.q2 == 0.0) {
        throw bad("rotating family needs q1^2 + q2^2 != 0 when lambda != 0");
    }
}

double eval_component(const FluxComponent& c, double t, int index) {
    switch (c.kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Const:
            return c.q;
        case Kind::InvSqrtT:
            if (!(t > 0.0)) throw DomainError("flux q/sqrt(t) needs t > 0");
            return c.q / std::sqrt(t);
        case Kind::RotConst:
        case Kind::RotInvSqrtT: {
            double tau = c.lambda * t;
            double scale = 1.0;
            if (c.kind == Kind::RotInvSqrtT) {
                if (!(t > 0.0)) throw DomainError("rotating flux with 1/sqrt(t) needs t > 0");
                tau = 0.5 * c.lambda * std::log(t);
                scale = 1.0 / std::sqrt(t);
            }
            const double th1 = c.q1 * std::cos(tau) + c.q2 * std::sin(tau);
            const double th2 = -c.q1 * std::sin(tau) + c.q2 * std::cos(tau);
            return scale * (index == 1 ? th1 : th2);
        }
        case Kind::Arbitrary: {
            const auto& s = c.samples;
            if (s.size() == 1) {
                if (t != s[0].first) throw RangeError("sampled flux evaluated away from its single sample");
                return s[0].second;
            }
            if (t < s.front().first || t > s.back().first) {
                throw RangeError(fmt::format("sampled flux evaluated at t = {} outside [{}, {}]", t, s.front().first,
                                             s.back().first));
            }
            auto it = std::upper_bound(s.begin(), s.end(), t, [](double v, const auto& p) { return v < p.first; });
            if (it == s.end()) return s.back().second;
            auto prev = it - 1;
            const double w = (t - prev->first) / (it->first - prev->first);
            return (1.0 - w) * prev->second + w * it->second;
        }
    }
    return 0.0;
}

}  // namespace

void FluxSpec::validate() const {
    validate_component(q1, 1);
    validate_component(q2, 2);
    validate_component(q3, 3);
    if (q3.is_rotating()) throw DomainError("flux component q3 cannot be a rotating family");
    if (q1.is_rotating() || q2.is_rotating()) {
        if (!(q1 == q2)) throw DomainError("rotating flux families must appear identically in q1 and q2");
    }
    if (q1.kind == Kind::Zero && q2.kind == Kind::Zero) {
        if ((q3.kind == Kind::Const || q3.kind == Kind::InvSqrtT) && q3.q == 0.0) {
            throw DomainError("flux component q3 needs q != 0 when q1 and q2 are zero");
        }
    }
}

std::array<double, 3> FluxSpec::eval(double t) const {
    return {eval_component(q1, t, 1), eval_component(q2, t, 2), eval_component(q3, t, 3)};
}

const char* generator_name(Generator g) {
    static const char* names[] = {"T0", "T1", "T2", "T3", "T4", "T5", "T6", "T7"};
    return names[static_cast<int>(g)];
}

namespace {

enum class Transverse { Zero, ConstPair, InvSqrtPair, Other };
enum class Axial { Zero, Const, InvSqrt, SampledNonzero, Other };

// Folds parameter values that collapse a family into a simpler one.
Kind canonical_kind(const FluxComponent& c) {
    if ((c.kind == Kind::Const || c.kind == Kind::InvSqrtT) && c.q == 0.0) return Kind::Zero;
    if (c.is_rotating() && c.q1 == 0.0 && c.q2 == 0.0) return Kind::Zero;
    return c.kind;
}

Transverse classify_transverse(const FluxComponent& a, const FluxComponent& b, double& lambda) {
    lambda = 0.0;
    const Kind ka = canonical_kind(a);
    const Kind kb = canonical_kind(b);
    if (ka == Kind::RotConst) {
        lambda = a.lambda;
        return Transverse::ConstPair;
    }
    if (ka == Kind::RotInvSqrtT) {
        lambda = a.lambda;
        return Transverse::InvSqrtPair;
    }
    if (ka == Kind::Zero && kb == Kind::Zero) return Transverse::Zero;
    auto in = [](Kind k, Kind allowed) { return k == Kind::Zero || k == allowed; };
    if (in(ka, Kind::Const) && in(kb, Kind::Const)) return Transverse::ConstPair;
    if (in(ka, Kind::InvSqrtT) && in(kb, Kind::InvSqrtT)) return Transverse::InvSqrtPair;
    return Transverse::Other;
}

Axial classify_axial(const FluxComponent& c) {
    switch (canonical_kind(c)) {
        case Kind::Zero: return Axial::Zero;
        case Kind::Const: return Axial::Const;
        case Kind::InvSqrtT: return Axial::InvSqrt;
        case Kind::Arbitrary: {
            const bool nonzero = std::all_of(c.samples.begin(), c.samples.end(), [](const auto& s) { return s.second != 0.0; });
            return nonzero ? Axial::SampledNonzero : Axial::Other;
        }
        default: return Axial::Other;
    }
}

std::vector<Generator> generators_for_case(int c) {
    using G = Generator;
    switch (c) {
        case 2: return {G::T1, G::T2, G::T3, G::T5};
        case 3: return {G::T1, G::T2, G::T3, G::T6};
        case 4: return {G::T1, G::T2, G::T3, G::T7};
        case 5: return {G::T0, G::T1, G::T2, G::T3, G::T5};
        case 6: return {G::T1, G::T2, G::T3, G::T4, G::T5};
        default: return {G::T1, G::T2, G::T3};
    }
}

}  // namespace

SymmetryReport classify_flux(const FluxSpec& flux) {
    flux.validate();
    double lambda = 0.0;
    const Transverse tr = classify_transverse(flux.q1, flux.q2, lambda);
    const Axial ax = classify_axial(flux.q3);
    int c = 1;
    switch (tr) {
        case Transverse::Zero:
            if (ax == Axial::Const) c = 5;
            else if (ax == Axial::InvSqrt) c = 6;
            else if (ax == Axial::SampledNonzero) c = 2;
            break;
        case Transverse::ConstPair:
            if (ax == Axial::Zero || ax == Axial::Const) c = 3;
            break;
        case Transverse::InvSqrtPair:
            if (ax == Axial::Zero || ax == Axial::InvSqrt) c = 4;
            break;
        case Transverse::Other:
            break;
    }
    SymmetryReport r;
    r.table2_case = c;
    r.group_generators = generators_for_case(c);
    r.dimension = static_cast<int>(r.group_generators.size());
    r.rotation_rate = (c == 3 || c == 4) ? lambda : 0.0;
    return r;
}

int classify_diffusivities(const FunctionProfile& d1, const FunctionProfile& d2) {
    using F = FunctionProfile::Family;
    const F f1 = d1.canonical_family();
    const F f2 = d2.canonical_family();
    if (f1 == F::Constant && f2 == F::Constant) {
        const double a = d1.constant_value();
        const double b = d2.constant_value();
        return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)) ? 10 : 9;
    }
    if (f1 == F::Constant) return 2;
    if (f2 == F::Constant) return 3;
    if (f1 == F::Exponential && f2 == F::Exponential) return 4;
    if (f1 == F::Exponential && f2 == F::Power) return 5;
    if (f1 == F::Power && f2 == F::Exponential) return 6;
    if (f1 == F::Power && f2 == F::Power) {
        auto special = [](double a) { return std::abs(a + 0.8) <= 1e-12; };
        return special(d1.exponent()) && special(d2.exponent()) ? 8 : 7;
    }
    return 1;
}

SpaceTimePoint apply_group(const GroupElement& elem, const SpaceTimePoint& p) {
    const double e = elem.parameter;
    auto [t, x1, x2, x3] = p;
    auto rotate = [&](double tau) {
        const double c = std::cos(tau);
        const double s = std::sin(tau);
        const double y1 = x1 * c + x2 * s;
        const double y2 = -x1 * s + x2 * c;
        x1 = y1;
        x2 = y2;
    };
    switch (elem.generator) {
        case Generator::T0: t += e; break;
        case Generator::T1: x1 += e; break;
        case Generator::T2: x2 += e; break;
        case Generator::T3: x3 += e; break;
        case Generator::T4: {
            const double k = std::exp(e);
            t *= k * k;
            x1 *= k;
            x2 *= k;
            x3 *= k;
            break;
        }
        case Generator::T5: rotate(e); break;
        case Generator::T6:
            t += e;
            rotate(elem.rotation_rate * e);
            break;
        case Generator::T7: {
            const double k = std::exp(e);
            rotate(elem.rotation_rate * e);
            t *= k * k;
            x1 *= k;
            x2 *= k;
            x3 *= k;
            break;
        }
    }
    return {t, x1, x2, x3};
}

ScalingRecord ScalingRecord::inverse() const {
    ScalingRecord r;
    r.alpha = 1.0 / alpha;
    r.beta = 1.0 / beta;
    r.delta1 = 1.0 / delta1;
    r.delta2 = 1.0 / delta2;
    r.gamma4 = -gamma4 / delta1;
    r.gamma5 = -gamma5 / delta2;
    return r;
}

namespace {

void check_record(const ScalingRecord& r) {
    for (double v : {r.alpha, r.beta, r.delta1, r.delta2, r.gamma4, r.gamma5}) {
        if (!std::isfinite(v)) throw GaugeError("equivalence transformation with non-finite constants");
    }
    if (!(r.alpha > 0.0) || !(r.beta > 0.0)) {
        throw GaugeError(fmt::format("equivalence transformation needs alpha, beta > 0 (got {}, {})", r.alpha, r.beta));
    }
    if (!(r.delta1 > 0.0) || !(r.delta2 > 0.0)) {
        throw GaugeError(fmt::format("gauge needs delta1, delta2 > 0 (got {}, {})", r.delta1, r.delta2));
    }
    const double k = r.alpha / r.beta;
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
    if (!close(r.delta1, k) || !close(r.delta2, k)) {
        throw GaugeError(fmt::format(
            "delta1 = {}, delta2 = {} break d1v = d1(u_v) unless both equal alpha/beta = {}", r.delta1, r.delta2, k));
    }
}

FluxComponent transform_component(const FluxComponent& c, double alpha) {
    FluxComponent o = c;
    switch (c.kind) {
        case Kind::Zero:
        case Kind::Const:
            break;
        case Kind::InvSqrtT:
            o.q = c.q * std::sqrt(alpha);
            break;
        case Kind::RotConst:
            o.lambda = c.lambda / alpha;
            break;
        case Kind::RotInvSqrtT: {
            const double phi = 0.5 * c.lambda * std::log(alpha);
            const double s = std::sqrt(alpha);
            o.q1 = s * (c.q1 * std::cos(phi) - c.q2 * std::sin(phi));
            o.q2 = s * (c.q1 * std::sin(phi) + c.q2 * std::cos(phi));
            break;
        }
        case Kind::Arbitrary:
            for (auto& s : o.samples) s.first *= alpha;
            break;
    }
    return o;
}

}  // namespace

FunctionProfile transform_profile(const FunctionProfile& d, double scale, double delta, double gamma) {
    using F = FunctionProfile::Family;
    if (!(delta > 0.0)) throw GaugeError("transform_profile: delta must be > 0");
    switch (d.family()) {
        case F::Constant:
            return FunctionProfile::constant(scale * d.coefficient());
        case F::Power:
            return FunctionProfile::power(scale * d.coefficient() * std::pow(delta, -d.exponent()), d.exponent(),
                                          delta * d.shift() - gamma);
        case F::Exponential:
            return FunctionProfile::exponential(scale * d.coefficient() * std::exp(-d.exponent() * gamma / delta),
                                                d.exponent() / delta);
        case F::Tabulated: {
            std::vector<double> xs = d.table().xs();
            std::vector<double> ys = d.table().ys();
            for (double& x : xs) x = delta * x + gamma;
            for (double& y : ys) y *= scale;
            return FunctionProfile::tabulated(std::move(xs), std::move(ys));
        }
    }
    return d;
}

EnthalpyModel transform_model(const EnthalpyModel& m, const ScalingRecord& r) {
    check_record(r);
    const double s = r.beta * r.beta / r.alpha;
    const double h = r.alpha / r.beta;
    return EnthalpyModel::make(transform_profile(m.d1, s, r.delta1, r.gamma4),
                               transform_profile(m.d2, s, r.delta2, r.gamma5), r.delta1 * m.u_v + r.gamma4,
                               r.delta1 * m.u_m + r.gamma4, r.delta2 * m.v_m + r.gamma5,
                               r.delta2 * m.v_inf + r.gamma5, h * m.H_v, h * m.H_m);
}

FluxSpec transform_flux(const FluxSpec& f, const ScalingRecord& r) {
    check_record(r);
    return {transform_component(f.q1, r.alpha), transform_component(f.q2, r.alpha),
            transform_component(f.q3, r.alpha)};
}

NormalizedProblem normalize_problem(const EnthalpyModel& model, const FluxSpec& flux, const NormalizeOptions& opts) {
    if (opts.alpha < 0.0 || opts.beta < 0.0) throw GaugeError("normalize_problem: alpha and beta must be positive");
    ScalingRecord r;
    r.beta = opts.beta > 0.0 ? opts.beta : 1.0;
    r.alpha = opts.alpha > 0.0 ? opts.alpha : r.beta * r.beta * model.d1v;
    r.delta1 = r.delta2 = r.alpha / r.beta;
    r.gamma4 = 1.0 - r.delta1 * model.u_v;
    r.gamma5 = -r.delta2 * model.v_inf;
    return {transform_model(model, r), transform_flux(flux, r), r};
}

std::pair<EnthalpyModel, FluxSpec> denormalize_problem(const NormalizedProblem& p) {
    const ScalingRecord inv = p.record.inverse();
    return {transform_model(p.model, inv), transform_flux(p.flux, inv)};
}

}  // namespace stefan
