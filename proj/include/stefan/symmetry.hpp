#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "stefan/material.hpp"

namespace stefan {

// One component family of the boundary flux Q(t). The rotating families bind
// components 1 and 2: both slots of a FluxSpec must then hold the same value.
struct FluxComponent {
    enum class Kind { Zero, Const, InvSqrtT, RotConst, RotInvSqrtT, Arbitrary };

    Kind kind = Kind::Zero;
    double q = 0.0;                 // Const, InvSqrtT
    double q1 = 0.0, q2 = 0.0;      // rotating families
    double lambda = 0.0;            // rotating families
    std::vector<std::pair<double, double>> samples;  // Arbitrary: (t, value), t increasing

    static FluxComponent zero() { return {}; }
    static FluxComponent constant(double q);
    static FluxComponent inv_sqrt_t(double q);
    static FluxComponent rot_const(double q1, double q2, double lambda);
    static FluxComponent rot_inv_sqrt_t(double q1, double q2, double lambda);
    static FluxComponent arbitrary(std::vector<std::pair<double, double>> samples);

    bool is_rotating() const { return kind == Kind::RotConst || kind == Kind::RotInvSqrtT; }
    bool operator==(const FluxComponent&) const = default;
};

const char* flux_kind_name(FluxComponent::Kind k);

struct FluxSpec {
    FluxComponent q1, q2, q3;

    static FluxSpec axial_constant(double q);
    // Throws DomainError on a broken coupling or side condition.
    void validate() const;
    // Q(t); Arbitrary components interpolate their samples linearly and throw
    // RangeError outside them.
    std::array<double, 3> eval(double t) const;
};

enum class Generator { T0, T1, T2, T3, T4, T5, T6, T7 };
const char* generator_name(Generator g);

struct SymmetryReport {
    int table2_case = 1;
    std::vector<Generator> group_generators;
    int dimension = 0;
    double rotation_rate = 0.0;  // lambda of T6 / T7
};

struct GroupElement {
    Generator generator = Generator::T0;
    double parameter = 0.0;
    double rotation_rate = 0.0;  // used by T6 and T7 only
};

using SpaceTimePoint = std::array<double, 4>;  // (t, x1, x2, x3)

SymmetryReport classify_flux(const FluxSpec& flux);
int classify_diffusivities(const FunctionProfile& d1, const FunctionProfile& d2);
SpaceTimePoint apply_group(const GroupElement& elem, const SpaceTimePoint& p);

// Constants of an equivalence transformation:
//   t~ = alpha t, x~ = beta x, u~ = delta1 u + gamma4, v~ = delta2 v + gamma5.
// Enthalpy models tie d1v to d1(u_v), so delta1 = delta2 = alpha / beta is
// required for the transformed model to stay consistent.
struct ScalingRecord {
    double alpha = 1.0, beta = 1.0;
    double delta1 = 1.0, delta2 = 1.0;
    double gamma4 = 0.0, gamma5 = 0.0;

    ScalingRecord inverse() const;
};

struct NormalizeOptions {
    // Zero selects the canonical choice: beta = 1 and alpha = d1v, which
    // gives d1v~ = 1 along with u_v~ = 1, v_inf~ = 0.
    double alpha = 0.0;
    double beta = 0.0;
};

struct NormalizedProblem {
    EnthalpyModel model;
    FluxSpec flux;
    ScalingRecord record;
};

// Throws GaugeError unless alpha beta delta1 delta2 != 0, delta1, delta2 > 0
// and delta1 = delta2 = alpha/beta.
EnthalpyModel transform_model(const EnthalpyModel& model, const ScalingRecord& rec);
FluxSpec transform_flux(const FluxSpec& flux, const ScalingRecord& rec);
FunctionProfile transform_profile(const FunctionProfile& d, double scale, double delta, double gamma);

NormalizedProblem normalize_problem(const EnthalpyModel& model, const FluxSpec& flux, const NormalizeOptions& opts = {});
std::pair<EnthalpyModel, FluxSpec> denormalize_problem(const NormalizedProblem& p);

}  // namespace stefan
