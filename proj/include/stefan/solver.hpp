#pragma once

#include <array>
#include <string>
#include <vector>

#include "stefan/material.hpp"
#include "stefan/reduction.hpp"

namespace stefan {

// Reduced traveling-wave problem. For the paraboloid geometry the invariant
// is omega and the surfaces are omega = R and omega = omega2; for the planar
// geometry it is z = x3 - mu t with surfaces z = 0 and z = omega2 (R unused).
// q is the x3 component of the constant boundary flux.
struct ReducedStefanProblem {
    EnthalpyModel model;
    double R = 1.0;
    double q = 0.0;
    GeometryKind geometry = GeometryKind::Paraboloid;

    void validate() const;
};

// Zero bracket entries select defaults derived from the problem scales.
struct RootSolveConfig {
    double abs_tol = 1e-10;
    int max_iters = 100;
    double omega2_lo = 0.0, omega2_hi = 0.0;
    double mu_lo = 0.0, mu_hi = 0.0;
    int multistart = 8;         // seeds per axis of the (omega2, mu) log grid
    int profile_points = 512;   // knots per phase
    double ode_tol = 1e-12;     // local error of the shooting integrator

    void validate() const;
};

enum class SolverTag { ClosedFormConstant, ClosedFormFastDiffusion, Shooting };
const char* solver_tag_name(SolverTag t);

struct SolveDiagnostics {
    // Closed forms: (F1, F2) at the root. Shooting: (u(omega2) - u_m, Stefan
    // balance) at the root.
    std::array<double, 2> root_residuals{0.0, 0.0};
    int iterations = 0;
    int evaluations = 0;
    int roots_found = 0;
    double farfield_residual = 0.0;  // |v(omega_max) - v_inf|
};

struct ParaboloidSolution {
    ReducedProfiles profiles;
    SurfaceGeometry geometry;
    SolverTag solver_tag = SolverTag::Shooting;
    std::vector<std::string> notes;
    SolveDiagnostics diagnostics;

    double omega2() const { return geometry.omega2; }
    double mu() const { return geometry.mu; }
};

// Example 1: d1 = a1 and d2 = a2 constant.
ParaboloidSolution solve_constant_diffusivity(const ReducedStefanProblem& problem, const RootSolveConfig& cfg = {});
// Example 2: d1 = k (u + C)^-1 and d2 = a2 constant (k = 1, C = 0 in the
// textbook case).
ParaboloidSolution solve_fast_diffusion(const ReducedStefanProblem& problem, const RootSolveConfig& cfg = {});
// Any positive diffusivities; paraboloid geometry.
ParaboloidSolution solve_shooting(const ReducedStefanProblem& problem, const RootSolveConfig& cfg = {});
// Planar geometry; omega1 = 0 and omega2 is the melting plane z2.
ParaboloidSolution solve_planar(const ReducedStefanProblem& problem, const RootSolveConfig& cfg = {});

bool is_constant_case(const EnthalpyModel& model);
bool is_fast_diffusion_case(const EnthalpyModel& model);

// Residuals of the two transcendental equations for the closed-form cases.
// Throws DomainError for omega2 <= R, mu <= 0 or, in the fast-diffusion
// case, mu H_v - q <= 0; UnsupportedCase for other diffusivity families.
std::array<double, 2> transcendental_residuals(const ReducedStefanProblem& problem, double omega2, double mu);

// Implicit relation of the fast-diffusion case: the integral
//   int_{R w_v}^{nu} ds / (s (1 + W(exp(A(s)))))
// with w = u + C, which equals ln(omega / R) along the solution at nu = omega w.
double fast_diffusion_integral(const ReducedStefanProblem& problem, double mu, double nu);
// A(nu) and p(nu) = W(exp(A(nu))) = (omega / w) dw/domega.
double fast_diffusion_exponent(const ReducedStefanProblem& problem, double mu, double nu);

enum class SolveMethod { Auto, ClosedForm, Shooting };

// Auto picks the closed form matching the diffusivity family, else shooting;
// the planar geometry always goes to solve_planar.
ParaboloidSolution solve(const ReducedStefanProblem& problem, SolveMethod method, const RootSolveConfig& cfg = {});

}  // namespace stefan
