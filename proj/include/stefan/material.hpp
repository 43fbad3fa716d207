#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stefan/interp.hpp"
#include "stefan/specialfn.hpp"

namespace stefan {

// A scalar coefficient function of temperature or enthalpy.
//   Constant:     c
//   Power:        D (x + C)^alpha
//   Exponential:  D exp(alpha x)
//   Tabulated:    monotone cubic through (arg, value) knots, no extrapolation
class FunctionProfile {
public:
    enum class Family { Constant, Power, Exponential, Tabulated };

    FunctionProfile() = default;
    static FunctionProfile constant(double c);
    static FunctionProfile power(double D, double alpha, double shift = 0.0);
    static FunctionProfile exponential(double D, double alpha);
    static FunctionProfile tabulated(std::vector<double> args, std::vector<double> values);

    double operator()(double x) const { return eval(x); }
    double eval(double x) const;

    Family family() const { return family_; }
    // Family after folding zero exponents: Power and Exponential with
    // alpha = 0 are constants.
    Family canonical_family() const;
    bool is_constant() const { return canonical_family() == Family::Constant; }
    // Value of a profile whose canonical family is Constant.
    double constant_value() const;

    double coefficient() const { return coef_; }
    double exponent() const { return alpha_; }
    double shift() const { return shift_; }
    const MonotoneCubic& table() const { return table_; }

    // Smallest value over [lo, hi]: exact for the analytic families, knots
    // plus a dense sample for tabulated ones. Throws like eval() when the
    // interval leaves the domain.
    double min_over(double lo, double hi) const;
    double max_over(double lo, double hi) const;

    std::string describe() const;

private:
    Family family_ = Family::Constant;
    double coef_ = 1.0;
    double alpha_ = 0.0;
    double shift_ = 0.0;
    MonotoneCubic table_;
};

const char* family_name(FunctionProfile::Family f);

enum class Phase { Liquid, Solid };

struct MaterialSpec {
    FunctionProfile lambda1, lambda2;  // conductivities, W m^-1 K^-1
    FunctionProfile c1, c2;            // volumetric heat capacities, J m^-3 K^-1
    double H_v = 0.0;                  // latent heats, J m^-3
    double H_m = 0.0;
    double T_v = 0.0;                  // temperatures, K
    double T_m = 0.0;
    double T_inf = 0.0;

    void validate() const;
};

// Temperature to enthalpy map phi_k(T) = int_0^T C_k over the active range
// of one phase. Linear maps are held exactly.
struct EnthalpyMap {
    double T_lo = 0.0, T_hi = 0.0;
    bool linear = false;
    double c = 0.0;
    MonotoneCubic table;

    double enthalpy(double T) const;
    double temperature(double value) const;
    double value_lo() const;
    double value_hi() const;
};

struct EnthalpyModel {
    FunctionProfile d1, d2;
    double u_v = 0.0, u_m = 0.0, v_m = 0.0, v_inf = 0.0;
    double d1v = 0.0, d1m = 0.0, d2m = 0.0;
    double H_v = 0.0, H_m = 0.0;
    // Present when the model came from a MaterialSpec.
    std::optional<EnthalpyMap> liquid_map, solid_map;

    // Fills d1v, d1m, d2m from the profiles and validates.
    static EnthalpyModel make(FunctionProfile d1, FunctionProfile d2, double u_v, double u_m, double v_m,
                              double v_inf, double H_v, double H_m);
    void validate() const;
};

inline constexpr int kDefaultTransformKnots = 512;

// Goodman substitution. Throws TransformError when a heat capacity is
// negative on [min(0, T), max T] or not strictly positive on a phase's
// active temperature range.
EnthalpyModel goodman_transform(const MaterialSpec& spec, const QuadratureConfig& quad = {},
                                int knots = kDefaultTransformKnots);

double invert_enthalpy(const EnthalpyModel& model, Phase phase, double value);
double enthalpy_of_temperature(const EnthalpyModel& model, Phase phase, double T);

}  // namespace stefan
