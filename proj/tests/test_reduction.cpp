#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include <doctest.h>

#include "stefan/errors.hpp"
#include "stefan/reduction.hpp"
#include "support.hpp"

using namespace stefan;

namespace {

const std::string kBoth = "∂S_k/∂t = 0 and q·n₁ = 0";
const std::string kTime = "∂S_k/∂t = 0";
const std::string kFlux = "q·n₁ = 0";

std::set<std::string> ids_of(const std::vector<Subalgebra>& list) {
    std::set<std::string> out;
    for (const auto& s : list) out.insert(s.id);
    return out;
}

Subalgebra get(const std::string& id) {
    const auto s = find_subalgebra(id);
    REQUIRE(s.has_value());
    return *s;
}

}  // namespace

TEST_CASE("admissible families per dimension") {
    CHECK(ids_of(enumerate_subalgebras(1)) == std::set<std::string>{"1a", "1b", "1c"});
    CHECK(ids_of(enumerate_subalgebras(2)) == std::set<std::string>{"2b", "2c", "2d"});
    CHECK(ids_of(enumerate_subalgebras(3)) == std::set<std::string>{"3c", "3d"});
    CHECK(ids_of(enumerate_subalgebras(4)) == std::set<std::string>{"4b"});
    CHECK_THROWS_AS(enumerate_subalgebras(0), DomainError);
    CHECK_THROWS_AS(enumerate_subalgebras(5), DomainError);
    CHECK(unfiltered_subalgebras(5).size() == 1);
    for (int d = 1; d <= 4; ++d) {
        for (const auto& s : enumerate_subalgebras(d)) {
            CHECK(s.dimension == d);
            CHECK(static_cast<int>(s.generators.size()) == d);
            CHECK(check_restrictions(s).admissible);
        }
    }
}

TEST_CASE("listed families carry their angle and beta constraints") {
    for (const auto& s : enumerate_subalgebras(1)) {
        if (s.id == "1a") CHECK(s.constraint == "phi != 0, pi/2");
        else CHECK(s.constraint.empty());
    }
    for (const auto& s : enumerate_subalgebras(3)) {
        if (s.id == "3d") CHECK(s.constraint == "phi != 0, pi/2 if beta != 0");
        else CHECK(s.constraint == "phi != 0, pi/2");
    }
    const auto four = enumerate_subalgebras(4).front();
    CHECK(four.beta == 0.0);
    CHECK(four.generators.front() == "J12");
    CHECK(four.constraint == "beta = 0; phi != 0, pi/2");
}

TEST_CASE("families dropped from the list violate both restrictions") {
    for (const char* id : {"2a", "3a", "3b", "4a", "5a"}) {
        const Admissibility a = check_restrictions(get(id));
        CHECK_FALSE(a.admissible);
        CHECK(a.reason == kBoth);
    }
    // 4b with beta != 0 contains Pt and P3 at once.
    const Admissibility a = check_restrictions(get("4b").with(std::nullopt, 0.5, 1.0));
    CHECK_FALSE(a.admissible);
    CHECK(a.reason == kBoth);
}

TEST_CASE("angle exclusions name the violated restriction") {
    const double half_pi = std::numbers::pi / 2;
    // With K: phi = 0 gives K = P3, phi = pi/2 gives K = Pt.
    auto a = check_restrictions(get("1a").with(std::nullopt, std::nullopt, 0.0));
    CHECK(a.reason == kFlux);
    a = check_restrictions(get("1a").with(std::nullopt, std::nullopt, half_pi));
    CHECK(a.reason == kTime);
    // With L: phi = 0 gives L = -Pt, phi = pi/2 gives L = P3.
    for (const char* id : {"2c", "2d", "3c"}) {
        a = check_restrictions(get(id).with(std::nullopt, std::nullopt, 0.0));
        CHECK(a.reason == kTime);
        a = check_restrictions(get(id).with(std::nullopt, std::nullopt, half_pi));
        CHECK(a.reason == kFlux);
    }
    a = check_restrictions(get("3d").with(std::nullopt, 0.5, half_pi));
    CHECK(a.reason == kTime);
    a = check_restrictions(get("3d").with(std::nullopt, 0.0, half_pi));
    CHECK(a.admissible);
    a = check_restrictions(get("4b").with(std::nullopt, 0.0, 0.0));
    CHECK(a.reason == kTime);
}

TEST_CASE("rule-based and sampled restriction checks agree everywhere") {
    const double angles[] = {0.0, 0.3, 1.0, std::numbers::pi / 2, 2.0, 3.0};
    const double betas[] = {0.0, 0.3, -1.2};
    for (int d = 1; d <= 5; ++d) {
        for (const auto& s : unfiltered_subalgebras(d)) {
            for (double phi : angles) {
                for (double beta : betas) {
                    const Subalgebra v = s.with(0.7, beta, phi);
                    const Admissibility r = check_restrictions_by_rule(v);
                    const Admissibility m = check_restrictions_by_samples(v);
                    CHECK_MESSAGE(r.admissible == m.admissible, v.id << " phi=" << phi << " beta=" << beta);
                    CHECK_MESSAGE(r.reason == m.reason, v.id << " phi=" << phi << " beta=" << beta);
                }
            }
        }
    }
}

TEST_CASE("build_ansatz reductions and their speeds") {
    const double phi = 2.0;
    Ansatz a = build_ansatz(get("4b").with(std::nullopt, 0.0, phi));
    CHECK(a.kind == Ansatz::Kind::PlanarWave);
    CHECK(a.mu == doctest::Approx(-std::tan(phi)));
    CHECK(a.mu > 0.0);

    a = build_ansatz(get("3c").with(0.5, std::nullopt, phi));
    CHECK(a.kind == Ansatz::Kind::PlanarWave);
    CHECK(a.mu == doctest::Approx(-std::tan(phi)));
    CHECK(a.alpha_star == doctest::Approx(-0.5 / std::cos(phi)));

    a = build_ansatz(get("3d").with(std::nullopt, 0.4, 0.5));
    CHECK(a.kind == Ansatz::Kind::PlanarWave);
    CHECK(a.mu == doctest::Approx(1.0 / std::tan(0.5)));
    CHECK_THROWS_AS(build_ansatz(get("3d").with(std::nullopt, 0.0, 0.5)), UnsupportedSubalgebra);

    a = build_ansatz(get("2d").with(std::nullopt, 0.0, phi));
    CHECK(a.kind == Ansatz::Kind::ParaboloidOmega);
    CHECK(a.mu == doctest::Approx(-std::tan(phi)));
    a = build_ansatz(get("2d").with(std::nullopt, 0.6, phi));
    CHECK(a.kind == Ansatz::Kind::HelicalRZ);
    CHECK(a.beta == 0.6);

    CHECK_THROWS_AS(build_ansatz(get("1b")), UnsupportedSubalgebra);
    CHECK_THROWS_AS(build_ansatz(get("2a")), UnsupportedSubalgebra);
    CHECK_THROWS_AS(build_ansatz(get("1a").with(std::nullopt, std::nullopt, 0.0)), UnsupportedSubalgebra);
    CHECK(std::string(ansatz_name(Ansatz::Kind::HelicalRZ)) == "HelicalRZ");
}

TEST_CASE("omega_of_point examples") {
    CHECK(omega_of_point({3.0, 4.0, 0.0}, 0.0, 1.0) == 5.0);
    CHECK(omega_of_point({0.0, 0.0, 1.5}, 0.0, 1.0) == 3.0);
    CHECK(omega_of_point({0.0, 0.0, -1.0}, 0.0, 1.0) == 0.0);
    // Moving frame: z = x3 - mu t.
    CHECK(omega_of_point({0.0, 0.0, 2.5}, 1.0, 1.0) == 3.0);
    // The stable branch keeps full relative accuracy far below the apex.
    const double w = omega_of_point({1e-3, 0.0, -1e4}, 0.0, 1.0);
    CHECK(w == doctest::Approx(1e-6 / (2e4)).epsilon(1e-10));
}

TEST_CASE("surface_points lie on their paraboloids") {
    SurfaceGeometry g{GeometryKind::Paraboloid, 1.0, 1.7, 0.6};
    const double t = 2.0;
    for (Surface which : {Surface::Evaporation, Surface::Melting}) {
        const double wk = which == Surface::Evaporation ? g.omega1 : g.omega2;
        const auto pts = surface_points(g, which, t, 200);
        REQUIRE(pts.size() == 200);
        CHECK(pts[0][0] == 0.0);
        CHECK(pts[0][1] == 0.0);
        CHECK(pts[0][2] == doctest::Approx(wk / 2 + g.mu * t));
        for (const auto& p : pts) {
            const double z = p[2] - g.mu * t;
            const double f = (p[0] * p[0] + p[1] * p[1]) / (wk * wk) + 2 * z / wk - 1.0;
            CHECK(std::abs(f) <= 1e-12 * std::max(1.0, (p[0] * p[0] + p[1] * p[1]) / (wk * wk)));
            CHECK(omega_of_point(p, t, g.mu) == doctest::Approx(wk).epsilon(1e-12));
        }
    }
    SurfaceGeometry planar{GeometryKind::Planar, 0.0, 0.8, 0.5};
    for (const auto& p : surface_points(planar, Surface::Melting, 3.0, 50)) CHECK(p[2] == doctest::Approx(0.8 + 1.5));
    CHECK_THROWS_AS(surface_points(SurfaceGeometry{GeometryKind::Paraboloid, 1.0, 0.5, 1.0}, Surface::Melting, 0, 10),
                    DomainError);
    CHECK_THROWS_AS(surface_points(g, Surface::Melting, 0.0, 0), DomainError);
}

TEST_CASE("evaporation surface meets the plane z = 0 at radius R") {
    SurfaceGeometry g{GeometryKind::Paraboloid, 1.3, 2.0, 0.6};
    const auto pts = surface_points(g, Surface::Evaporation, 0.0, 400, 1.3);
    // The last spiral point sits at the full reach r = R, hence z = 0.
    const auto& last = pts.back();
    CHECK(std::hypot(last[0], last[1]) == doctest::Approx(1.3).epsilon(1e-14));
    CHECK(std::abs(last[2]) <= 1e-14);
}

TEST_CASE("Placement round trip and transport by group elements") {
    Placement p{0.4, {0.3, -1.2, 2.0}, 0.9};
    const SpaceTimePoint x{1.5, 0.2, 0.7, -0.4};
    const auto back = p.to_local(p.to_world(x));
    for (int i = 0; i < 4; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-14));
    const auto v = p.vector_to_local(p.vector_to_world({1.0, 2.0, 3.0}));
    CHECK(v[0] == doctest::Approx(1.0));
    CHECK(v[1] == doctest::Approx(2.0));

    // Transporting the placement and the point by the same element keeps the
    // local coordinates fixed.
    for (Generator gen : {Generator::T0, Generator::T1, Generator::T2, Generator::T3, Generator::T5}) {
        const GroupElement g{gen, 0.37, 0.0};
        const auto before = p.to_local(x);
        const auto after = p.transported(g).to_local(apply_group(g, x));
        for (int i = 0; i < 4; ++i) CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-13));
    }
    CHECK_THROWS_AS(p.transported(GroupElement{Generator::T4, 0.1, 0.0}), UnsupportedCase);
    CHECK_THROWS_AS(p.transported(GroupElement{Generator::T6, 0.1, 1.0}), UnsupportedCase);
}

TEST_CASE("reconstruct_field phases, interface values and far field") {
    const ParaboloidSolution sol = solve_constant_diffusivity(support::example1());
    const auto& g = sol.geometry;
    const auto& prof = sol.profiles;
    const double t = 0.7;
    auto on_axis = [&](double w) { return SpaceTimePoint{t, 0.0, 0.0, w / 2 + g.mu * t}; };

    FieldSample s = reconstruct_field(prof, g, on_axis(0.5 * g.omega1));
    CHECK(s.phase == FieldPhase::Gas);

    s = reconstruct_field(prof, g, on_axis(g.omega1));
    CHECK(s.phase == FieldPhase::Liquid);
    CHECK(s.u == doctest::Approx(2.0).epsilon(1e-12));

    s = reconstruct_field(prof, g, on_axis(0.5 * (g.omega1 + g.omega2)));
    CHECK(s.phase == FieldPhase::Liquid);
    CHECK(s.u > 1.0);
    CHECK(s.u < 2.0);

    const SpaceTimePoint iface{t, 0.0, 0.0, g.omega2 / 2 + g.mu * t};
    s = reconstruct_field(prof, g, iface);
    CHECK(s.phase == FieldPhase::Interface);
    CHECK(s.u == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.v == doctest::Approx(1.0).epsilon(1e-12));

    s = reconstruct_field(prof, g, on_axis(1.5 * g.omega2));
    CHECK(s.phase == FieldPhase::Solid);
    CHECK(s.v < 1.0);
    CHECK(s.v > 0.0);
    CHECK_FALSE(s.far_field);

    s = reconstruct_field(prof, g, on_axis(2.0 * prof.v.hi()));
    CHECK(s.phase == FieldPhase::Solid);
    CHECK(s.far_field);
    CHECK(s.v == prof.v_inf);
    CHECK(std::string(field_phase_name(FieldPhase::Interface)) == "interface");
}

TEST_CASE("reconstruct_field is covariant under translations and rotations") {
    const ParaboloidSolution sol = solve_constant_diffusivity(support::example1());
    const Placement base{};
    const GroupElement moves[] = {{Generator::T0, 0.8, 0.0}, {Generator::T1, -0.5, 0.0},
                                  {Generator::T3, 1.1, 0.0}, {Generator::T5, 0.7, 0.0}};
    const SpaceTimePoint pts[] = {{0.5, 0.3, 0.2, 1.1}, {1.0, -0.9, 0.4, 0.0}, {0.2, 1.5, -1.0, 2.0}};
    for (const auto& g : moves) {
        const Placement moved = base.transported(g);
        for (const auto& x : pts) {
            const FieldSample a = reconstruct_field(sol.profiles, sol.geometry, x, base);
            const FieldSample b = reconstruct_field(sol.profiles, sol.geometry, apply_group(g, x), moved);
            CHECK(a.phase == b.phase);
            CHECK(a.omega == doctest::Approx(b.omega).epsilon(1e-12));
            CHECK(a.u == doctest::Approx(b.u).epsilon(1e-12));
            CHECK(a.v == doctest::Approx(b.v).epsilon(1e-12));
        }
    }
}
