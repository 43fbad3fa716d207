#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>

#include <doctest.h>

#include "stefan/errors.hpp"
#include "stefan/io.hpp"
#include "support.hpp"

using namespace stefan;
using support::problem_path;

namespace {

const std::string kMinimal = R"(schema: 1
enthalpy:
  d1: {family: constant, value: 1}
  d2: {family: constant, value: 1}
  u_v: 2
  u_m: 1
  v_m: 1
  v_inf: 0
  H_v: 1
  H_m: 1
flux:
  q3: {kind: const, q: 5}
geometry:
  ansatz: paraboloid
  R: 1
)";

// Replaces the first occurrence of `from` in the minimal problem.
std::string edited(const std::string& from, const std::string& to) {
    std::string s = kMinimal;
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

ParseError parse_error_of(const std::string& text) {
    try {
        parse_problem(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a ParseError");
    return ParseError("unreachable");
}

}  // namespace

TEST_CASE("shipped problem files load") {
    for (const char* name : {"example1.yaml", "example2.yaml", "tabulated.yaml", "material.yaml", "planar.yaml",
                             "rotating_flux.yaml", "arbitrary_flux.yaml", "noroot.yaml", "strict_tolerance.yaml"}) {
        CHECK_NOTHROW(load_problem(problem_path(name)));
    }
    const ProblemFile e1 = load_problem(problem_path("example1.yaml"));
    CHECK(e1.model.u_v == 2.0);
    CHECK(e1.flux.q3.kind == FluxComponent::Kind::Const);
    CHECK(e1.flux.q3.q == 5.0);
    CHECK(e1.geometry == GeometryKind::Paraboloid);
    CHECK(e1.verify.levels == 2);
    CHECK(e1.output_dir == "out/example1");
    CHECK_FALSE(e1.material.has_value());

    const ProblemFile mat = load_problem(problem_path("material.yaml"));
    REQUIRE(mat.material.has_value());
    CHECK(mat.model.u_v == doctest::Approx(mat.material->T_v * 1.0));

    const ProblemFile pl = load_problem(problem_path("planar.yaml"));
    CHECK(pl.geometry == GeometryKind::Planar);
    CHECK(load_problem(problem_path("strict_tolerance.yaml")).tolerance.bc_flux == 1e-30);
}

TEST_CASE("malformed fixture is rejected at the offending line") {
    try {
        load_problem(problem_path("malformed.yaml"));
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
        CHECK(std::string(e.what()).find("unknown key 'enthalpy.u_mm'") != std::string::npos);
    }
    CHECK_THROWS_AS(load_problem(problem_path("does_not_exist.yaml")), ParseError);
}

TEST_CASE("parse errors name the key and line") {
    CHECK(parse_error_of(edited("schema: 1", "schema: 2")).line() == 1);
    ParseError e = parse_error_of(edited("  u_m: 1\n", ""));
    CHECK(std::string(e.what()).find("missing key 'enthalpy.u_m'") != std::string::npos);
    e = parse_error_of(edited("  v_m: 1", "  v_m: abc"));
    CHECK(e.line() == 7);
    CHECK(std::string(e.what()).find("enthalpy.v_m") != std::string::npos);
    e = parse_error_of(edited("constant, value: 1}\n  d2", "cubic, value: 1}\n  d2"));
    CHECK(std::string(e.what()).find("unknown family 'cubic'") != std::string::npos);
    e = parse_error_of(edited("ansatz: paraboloid", "ansatz: torus"));
    CHECK(e.line() == 14);
    e = parse_error_of(edited("kind: const", "kind: pulsed"));
    CHECK(std::string(e.what()).find("unknown kind 'pulsed'") != std::string::npos);
    e = parse_error_of(edited("value: 1}\n  d2", "value: -1}\n  d2"));  // negative diffusivity
    CHECK(e.line() > 0);
    e = parse_error_of(edited("q: 5", "q: 0"));  // a lone vanishing axial flux
    CHECK(e.line() > 0);
    e = parse_error_of(kMinimal + "extra: 1\n");
    CHECK(std::string(e.what()).find("unknown key 'extra'") != std::string::npos);
    CHECK(e.line() == 16);
    e = parse_error_of(kMinimal + "solver: {multistart: 0}\n");
    CHECK(e.line() == 16);
    e = parse_error_of("schema: [1\n");
    CHECK(e.line() >= 1);
    CHECK_THROWS_AS(parse_problem(""), ParseError);
    CHECK(std::string(ParseError("boom", 3).what()) == "line 3: boom");
}

TEST_CASE("reduced_problem accepts only the constant axial case") {
    const ReducedStefanProblem p = reduced_problem(load_problem(problem_path("example1.yaml")));
    CHECK(p.q == 5.0);
    CHECK(p.R == 1.0);
    CHECK_THROWS_AS(reduced_problem(load_problem(problem_path("rotating_flux.yaml"))), UnsupportedCase);
    CHECK_THROWS_AS(reduced_problem(load_problem(problem_path("arbitrary_flux.yaml"))), UnsupportedCase);
}

TEST_CASE("format_double round-trips every double") {
    for (double x : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, std::numeric_limits<double>::max(),
                     -2.5e-17, 1.6680508971154278}) {
        const double y = parse_double(format_double(x));
        CHECK(std::memcmp(&x, &y, sizeof x) == 0);
    }
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(std::isinf(parse_double(".inf")));
    CHECK(std::isnan(parse_double("nan")));
    CHECK(format_double(0.5) == "0.5");
    CHECK_THROWS_AS(parse_double("1.5x"), ParseError);
    CHECK_THROWS_AS(parse_double(""), ParseError);
}

TEST_CASE("solution files round-trip bit for bit") {
    ParaboloidSolution sol = solve_constant_diffusivity(support::example1());
    sol.notes.push_back("a \"quoted\" note");
    const std::string yaml = solution_yaml(sol), csv = profile_csv(sol);
    const ParaboloidSolution back = parse_solution(yaml, csv);
    CHECK(solution_yaml(back) == yaml);
    CHECK(profile_csv(back) == csv);
    CHECK(back.omega2() == sol.omega2());
    CHECK(back.mu() == sol.mu());
    CHECK(back.solver_tag == sol.solver_tag);
    CHECK(back.notes == sol.notes);
    CHECK(back.profiles.u.ys() == sol.profiles.u.ys());
    CHECK(back.profiles.v.xs() == sol.profiles.v.xs());

    const auto dir = std::filesystem::temp_directory_path() / "stefan_test_io";
    std::filesystem::remove_all(dir);
    write_solution(sol, (dir / "nested").string());
    const ParaboloidSolution disk = read_solution((dir / "nested").string());
    CHECK(solution_yaml(disk) == yaml);
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(parse_solution(yaml, "x,y\n1,2\n"), ParseError);
    CHECK_THROWS_AS(parse_solution(yaml, "omega,value,phase\n1,2,plasma\n"), ParseError);
}

TEST_CASE("report files round-trip") {
    const ReducedStefanProblem p = support::example1();
    AuditConfig cfg;
    cfg.levels = 2;
    const ResidualReport r = audit(solve_constant_diffusivity(p), p.model, support::axial(p.q), cfg);
    const AuditThresholds t;
    const std::string yaml = report_yaml(r, t, audit_failures(r, t));
    const ResidualReport back = parse_report(yaml);
    for (const auto& [a, b] : support::report_pairs(r, back)) CHECK(a == b);
    REQUIRE(back.convergence_order.has_value());
    CHECK(*back.convergence_order == *r.convergence_order);
    CHECK(back.levels == r.levels);
    CHECK(back.grid_spacing == r.grid_spacing);
    CHECK(report_yaml(back, t, audit_failures(back, t)) == yaml);
}

TEST_CASE("classification file lists the flux case and group") {
    const std::string y = classification_yaml(classify_flux(support::axial(5.0)), 10);
    CHECK(y.find("schema: 1") != std::string::npos);
    CHECK(y.find("T0") != std::string::npos);
    CHECK(y.find("10") != std::string::npos);
}
