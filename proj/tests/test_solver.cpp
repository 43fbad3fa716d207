#include <cmath>
#include <string>

#include <doctest.h>

#include "stefan/errors.hpp"
#include "stefan/solver.hpp"
#include "stefan/specialfn.hpp"
#include "stefan/symmetry.hpp"
#include "support.hpp"

using namespace stefan;
using support::rel_err;

TEST_CASE("Example 1 root matches the independent grid-scan oracle") {
    const ReducedStefanProblem p = support::example1();
    const auto oracle = support::constant_root_oracle(support::params_of(p));
    REQUIRE(oracle.has_value());
    const ParaboloidSolution sol = solve_constant_diffusivity(p);
    CHECK(sol.solver_tag == SolverTag::ClosedFormConstant);
    CHECK(rel_err(sol.omega2(), oracle->omega2) <= 1e-8);
    CHECK(rel_err(sol.mu(), oracle->mu) <= 1e-8);
    // The residuals of the oracle's own closed form vanish at the returned root.
    const support::ConstantClosedForm f{support::params_of(p), sol.omega2(), sol.mu()};
    CHECK(std::abs(f.f1()) <= 1e-10);
    CHECK(std::abs(f.f2()) <= 1e-10);
    const auto res = transcendental_residuals(p, sol.omega2(), sol.mu());
    CHECK(std::abs(res[0]) <= 1e-10);
    CHECK(std::abs(res[1]) <= 1e-10);
    CHECK(sol.geometry.omega1 == p.R);
}

TEST_CASE("Example 1 profiles satisfy the boundary values, balances and ODE") {
    const ReducedStefanProblem p = support::example1();
    const ParaboloidSolution sol = solve_constant_diffusivity(p);
    const auto& u = sol.profiles.u;
    const auto& v = sol.profiles.v;
    CHECK(std::abs(u(p.R) - p.model.u_v) <= 1e-10);
    CHECK(std::abs(u(sol.omega2()) - p.model.u_m) <= 1e-10);
    CHECK(std::abs(v(sol.omega2()) - p.model.v_m) <= 1e-10);
    CHECK(sol.diagnostics.farfield_residual <= 1e-6);

    const support::ConstantClosedForm f{support::params_of(p), sol.omega2(), sol.mu()};
    for (int i = 0; i <= 40; ++i) {
        const double w = p.R + (sol.omega2() - p.R) * i / 40.0;
        CHECK(std::abs(u(w) - f.u(w)) <= 1e-9);
        const double ws = sol.omega2() * (1.0 + 2.0 * i / 40.0);
        CHECK(std::abs(v(ws) - f.v(ws)) <= 1e-9);
    }

    // Balances with profile derivatives taken from the stored knots.
    const auto du = support::knot_derivative(u.xs(), u.ys());
    const auto dv = support::knot_derivative(v.xs(), v.ys());
    const double evap = 2 * p.model.d1v * du.front() - (sol.mu() * p.model.H_v - p.q);
    const double stefan = 2 * p.model.d2m * dv.front() - 2 * p.model.d1m * du.back() - sol.mu() * p.model.H_m;
    CHECK(std::abs(evap) <= 1e-8);
    CHECK(std::abs(stefan) <= 1e-8);

    CHECK(support::ode_residual_max(u, p.model.d1, sol.mu(), true) <= 1e-8);
    CHECK(support::ode_residual_max(v, p.model.d2, sol.mu(), true) <= 1e-7);
    // The liquid equation also holds to 1e-8 on a 200-knot profile.
    RootSolveConfig coarse;
    coarse.profile_points = 200;
    const ParaboloidSolution s200 = solve_constant_diffusivity(p, coarse);
    CHECK(s200.profiles.u.xs().size() == 200);
    CHECK(support::ode_residual_max(s200.profiles.u, p.model.d1, s200.mu(), true) <= 1e-8);
}

TEST_CASE("Example 2 satisfies the implicit relation, the flux identity and the ODE") {
    const ReducedStefanProblem p = support::example2();
    const ParaboloidSolution sol = solve_fast_diffusion(p);
    CHECK(sol.solver_tag == SolverTag::ClosedFormFastDiffusion);
    const double mu = sol.mu();
    const support::FastParams fp{p.R, p.model.u_v, p.model.H_v, p.q, mu};
    REQUIRE(fp.p_r() > 0.0);

    const auto& u = sol.profiles.u;
    for (int i = 0; i < 50; ++i) {
        const double w = p.R + (sol.omega2() - p.R) * (i + 0.5) / 50.0;
        const double lhs = fp.integral(w * u(w));
        CHECK(std::abs(lhs - std::log(w / p.R)) <= 1e-8);
    }

    // ln p + p = A(nu) with p = (omega / u) du/domega from the stored knots.
    const auto du = support::knot_derivative(u.xs(), u.ys());
    double worst = 0.0;
    for (std::size_t i = 0; i < u.xs().size(); ++i) {
        const double w = u.xs()[i], uu = u.ys()[i];
        const double pw = w * du[i] / uu;
        worst = std::max(worst, std::abs(std::log(pw) + pw - fp.exponent(w * uu)));
    }
    CHECK(worst <= 1e-8);

    CHECK(std::abs(u(p.R) - p.model.u_v) <= 1e-10);
    CHECK(std::abs(u(sol.omega2()) - p.model.u_m) <= 1e-10);
    CHECK(std::abs(sol.profiles.v(sol.omega2()) - p.model.v_m) <= 1e-10);
    CHECK(support::ode_residual_max(u, p.model.d1, mu, true) <= 1e-7);
    CHECK(support::ode_residual_max(sol.profiles.v, p.model.d2, mu, true) <= 1e-7);

    const auto res = transcendental_residuals(p, sol.omega2(), mu);
    CHECK(std::abs(res[0]) <= 1e-10);
    CHECK(std::abs(res[1]) <= 1e-10);
    CHECK(fast_diffusion_integral(p, mu, p.R * p.model.u_v) == 0.0);
    CHECK(wright_omega(fast_diffusion_exponent(p, mu, p.R * p.model.u_v)) == doctest::Approx(fp.p_r()).epsilon(1e-12));
}

TEST_CASE("shooting reproduces both closed forms") {
    const struct {
        ReducedStefanProblem p;
        double tol;
    } cases[] = {{support::example1(), 1e-6}, {support::example2(), 1e-5}};
    for (const auto& c : cases) {
        const ParaboloidSolution closed = solve(c.p, SolveMethod::ClosedForm);
        const ParaboloidSolution shot = solve_shooting(c.p);
        CHECK(shot.solver_tag == SolverTag::Shooting);
        CHECK(rel_err(shot.omega2(), closed.omega2()) <= c.tol);
        CHECK(rel_err(shot.mu(), closed.mu()) <= c.tol);
        CHECK(support::profile_distance(closed.profiles.u, shot.profiles.u) <= c.tol);
        CHECK(support::profile_distance(closed.profiles.v, shot.profiles.v, 200, 4.0 * closed.omega2()) <= c.tol);
    }
}

TEST_CASE("planar wave matches its closed-form oracle") {
    const ReducedStefanProblem p = support::planar();
    const auto oracle = support::planar_root_oracle(support::params_of(p));
    REQUIRE(oracle.has_value());
    // With these parameters the root is known exactly: mu = q / 4, z2 = 2 ln 1.5.
    CHECK(oracle->mu == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(oracle->omega2 == doctest::Approx(2.0 * std::log(1.5)).epsilon(1e-12));
    const ParaboloidSolution sol = solve(p, SolveMethod::Auto);
    CHECK(sol.geometry.kind == GeometryKind::Planar);
    CHECK(sol.geometry.omega1 == 0.0);
    CHECK(rel_err(sol.omega2(), oracle->omega2) <= 1e-6);
    CHECK(rel_err(sol.mu(), oracle->mu) <= 1e-6);
    const support::PlanarClosedForm f{support::params_of(p), oracle->omega2, oracle->mu};
    for (int i = 0; i <= 20; ++i) {
        const double z = sol.omega2() * i / 20.0;
        CHECK(std::abs(sol.profiles.u(z) - f.u(z)) <= 1e-6);
    }
    CHECK(support::ode_residual_max(sol.profiles.u, p.model.d1, sol.mu(), false) <= 1e-7);
}

TEST_CASE("melting front approaches the evaporation front as u_v tends to u_m") {
    double prev = 1e300;
    for (double gap : {0.5, 0.25, 0.125}) {
        const ParaboloidSolution sol = solve_constant_diffusivity(support::example1(5.0, 1.0 + gap));
        CHECK(sol.omega2() > 1.0);
        CHECK(sol.omega2() < prev);
        prev = sol.omega2();
    }
}

TEST_CASE("solutions are equivariant under the scaling gauge") {
    const ReducedStefanProblem p = support::example1();
    const ParaboloidSolution base = solve_constant_diffusivity(p);
    const double alpha = 4.0, beta = 2.0;
    const NormalizedProblem n = normalize_problem(p.model, support::axial(p.q), {alpha, beta});
    ReducedStefanProblem scaled;
    scaled.model = n.model;
    scaled.R = beta * p.R;
    scaled.q = n.flux.q3.q;
    CHECK(scaled.q == p.q);
    const ParaboloidSolution s = solve_constant_diffusivity(scaled);
    CHECK(rel_err(s.omega2(), beta * base.omega2()) <= 1e-8);
    CHECK(rel_err(s.mu(), beta / alpha * base.mu()) <= 1e-8);

    // The canonical gauge of the same problem.
    const NormalizedProblem c = normalize_problem(p.model, support::axial(p.q));
    ReducedStefanProblem canon;
    canon.model = c.model;
    canon.R = c.record.beta * p.R;
    canon.q = c.flux.q3.q;
    const ParaboloidSolution sc = solve_constant_diffusivity(canon);
    CHECK(rel_err(sc.omega2(), c.record.beta * base.omega2()) <= 1e-8);
    CHECK(rel_err(sc.mu(), c.record.beta / c.record.alpha * base.mu()) <= 1e-8);
}

TEST_CASE("solver failures and validation") {
    CHECK_THROWS_AS(solve_constant_diffusivity(support::example1(-1.0)), NoRoot);
    ReducedStefanProblem p = support::example1();
    p.R = 0.0;
    CHECK_THROWS_AS(solve(p, SolveMethod::Auto), DomainError);
    p = support::example1();
    p.q = 0.0;
    CHECK_THROWS_AS(solve(p, SolveMethod::Auto), DomainError);

    RootSolveConfig cfg;
    cfg.multistart = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.ode_tol = 0.1;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.mu_lo = 2.0;
    cfg.mu_hi = 1.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);

    // A bracket that excludes the root reports NoRoot.
    cfg = {};
    cfg.mu_lo = 2.0;
    cfg.mu_hi = 5.0;
    CHECK_THROWS_AS(solve_constant_diffusivity(support::example1(), cfg), NoRoot);
}

TEST_CASE("solve dispatches on the diffusivity family") {
    CHECK(solve(support::example1(), SolveMethod::Auto).solver_tag == SolverTag::ClosedFormConstant);
    CHECK(solve(support::example2(), SolveMethod::Auto).solver_tag == SolverTag::ClosedFormFastDiffusion);
    CHECK(solve(support::example1(), SolveMethod::Shooting).solver_tag == SolverTag::Shooting);
    ReducedStefanProblem p = support::example1();
    p.model = EnthalpyModel::make(FunctionProfile::exponential(1.0, 0.1), FunctionProfile::constant(1.0), 2.0, 1.0,
                                  1.0, 0.0, 1.0, 1.0);
    CHECK_FALSE(is_constant_case(p.model));
    CHECK_FALSE(is_fast_diffusion_case(p.model));
    CHECK_THROWS_AS(solve(p, SolveMethod::ClosedForm), UnsupportedCase);
    CHECK_THROWS_AS(transcendental_residuals(p, 1.5, 0.5), UnsupportedCase);
    CHECK(solve(p, SolveMethod::Auto).solver_tag == SolverTag::Shooting);
    CHECK_THROWS_AS(solve(support::planar(), SolveMethod::ClosedForm), UnsupportedCase);
    CHECK_THROWS_AS(solve_constant_diffusivity(support::planar()), UnsupportedCase);
    CHECK(std::string(solver_tag_name(SolverTag::Shooting)) == "Shooting");
}

TEST_CASE("transcendental residuals: domain and limits") {
    const ReducedStefanProblem p = support::example1();
    CHECK_THROWS_AS(transcendental_residuals(p, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(transcendental_residuals(p, 1.5, 0.0), DomainError);
    // Far from the root both residuals follow the oracle's closed form.
    for (double w : {1.1, 2.0, 5.0}) {
        for (double mu : {0.1, 1.0, 3.0}) {
            const auto r = transcendental_residuals(p, w, mu);
            const support::ConstantClosedForm f{support::params_of(p), w, mu};
            CHECK(r[0] == doctest::Approx(f.f1()).epsilon(1e-10));
            CHECK(r[1] == doctest::Approx(f.f2()).epsilon(1e-10));
        }
    }
    // As omega2 -> R the liquid gradient blows up and F1 grows without bound.
    const double near = std::abs(transcendental_residuals(p, 1.0 + 1e-6, 0.5)[0]);
    const double mid = std::abs(transcendental_residuals(p, 1.0 + 1e-3, 0.5)[0]);
    CHECK(near > 100.0 * mid / 2);
    ReducedStefanProblem e2 = support::example2();
    e2.q = 5.0;  // mu H_v - q < 0 for mu < 5
    CHECK_THROWS_AS(transcendental_residuals(e2, 1.5, 1.0), DomainError);
}
