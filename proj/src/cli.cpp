#include "stefan/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <regex>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "stefan/errors.hpp"
#include "stefan/io.hpp"

namespace stefan::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string problem;
    std::string method = "auto";
    double grid = 0.0;
    int levels = 0;
    std::string what = "surfaces";
    double t = 0.0;
    std::string plane = "x2=0";
    std::string out_dir;
    std::string solution_dir;
    int resolution = 101;
};

void setup_logging() {
    static std::once_flag once;
    std::call_once(once, [] {
        auto logger = spdlog::stderr_logger_st("stefan");
        spdlog::set_default_logger(logger);
        const char* env = std::getenv("STEFAN_LOG");
        if (!env) {
            spdlog::set_level(spdlog::level::off);
            return;
        }
        const std::string lvl = env;
        spdlog::set_level(lvl == "1" ? spdlog::level::info : spdlog::level::from_str(lvl));
    });
}

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

std::string resolve_out_dir(const Options& o, const ProblemFile& pf) {
    if (!o.out_dir.empty()) return o.out_dir;
    if (!pf.output_dir.empty()) {
        const fs::path dir(pf.output_dir);
        return dir.is_absolute() ? dir.string() : (fs::path(o.problem).parent_path() / dir).string();
    }
    return "out";
}

std::string in_dir(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

void check_match(const ParaboloidSolution& sol, const ProblemFile& pf) {
    if (sol.geometry.kind != pf.geometry) {
        throw ParseError(fmt::format("solution geometry '{}' does not match the problem's '{}'",
                                     geometry_name(sol.geometry.kind), geometry_name(pf.geometry)));
    }
    if (pf.geometry == GeometryKind::Paraboloid && std::abs(sol.geometry.omega1 - pf.R) > 1e-12 * pf.R) {
        throw ParseError(fmt::format("solution omega1 = {} does not match R = {}", sol.geometry.omega1, pf.R));
    }
    if (sol.profiles.v_inf != pf.model.v_inf) {
        throw ParseError(fmt::format("solution v_inf = {} does not match the problem's {}", sol.profiles.v_inf,
                                     pf.model.v_inf));
    }
}

int cmd_classify(const Options& o, std::ostream& out) {
    const ProblemFile pf = load_problem(o.problem);
    const SymmetryReport rep = classify_flux(pf.flux);
    const int dcase = classify_diffusivities(pf.model.d1, pf.model.d2);
    out << fmt::format("Table 2 case {}\n", rep.table2_case);
    std::string gens;
    for (Generator g : rep.group_generators) gens += fmt::format(" {}", generator_name(g));
    out << fmt::format("flux group:{} (dimension {})\n", gens, rep.dimension);
    if (rep.table2_case == 3 || rep.table2_case == 4) {
        out << fmt::format("rotation rate: {}\n", format_double(rep.rotation_rate));
    }
    out << fmt::format("Table 1 case {}\n", dcase);
    const std::string dir = resolve_out_dir(o, pf);
    write_file(in_dir(dir, kClassificationFile), classification_yaml(rep, dcase));
    return kExitOk;
}

int cmd_solve(const Options& o, std::ostream& out) {
    const ProblemFile pf = load_problem(o.problem);
    const ReducedStefanProblem rp = reduced_problem(pf);
    SolveMethod method;
    if (o.method == "auto") method = SolveMethod::Auto;
    else if (o.method == "closed-form") method = SolveMethod::ClosedForm;
    else if (o.method == "shooting") method = SolveMethod::Shooting;
    else throw ParseError(fmt::format("unknown method '{}'", o.method));
    spdlog::info("solving {} with method {}", o.problem, o.method);
    const ParaboloidSolution sol = solve(rp, method, pf.solver);
    spdlog::info("root: omega2 = {}, mu = {}", sol.omega2(), sol.mu());
    const std::string dir = resolve_out_dir(o, pf);
    write_solution(sol, dir);
    out << fmt::format("solver: {}\n", solver_tag_name(sol.solver_tag));
    out << fmt::format("omega2: {}\n", format_double(sol.omega2()));
    out << fmt::format("mu: {}\n", format_double(sol.mu()));
    for (const auto& n : sol.notes) out << fmt::format("note: {}\n", n);
    out << fmt::format("wrote {} and {}\n", in_dir(dir, kSolutionFile), in_dir(dir, kProfileFile));
    return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    const ProblemFile pf = load_problem(o.problem);
    const std::string dir = resolve_out_dir(o, pf);
    const ParaboloidSolution sol = read_solution(o.solution_dir.empty() ? dir : o.solution_dir);
    check_match(sol, pf);
    AuditConfig cfg = pf.verify;
    if (o.grid > 0.0) cfg.h = o.grid;
    if (o.levels > 0) cfg.levels = o.levels;
    const ResidualReport rep = audit(sol, pf.model, pf.flux, cfg);
    const auto failures = audit_failures(rep, pf.tolerance);
    const std::string path = in_dir(dir, kReportFile);
    write_file(path, report_yaml(rep, pf.tolerance, failures));
    out << fmt::format("pde liquid: max {:.3e}, l2 {:.3e}\n", rep.pde_liquid_max, rep.pde_liquid_l2);
    out << fmt::format("pde solid: max {:.3e}, l2 {:.3e}\n", rep.pde_solid_max, rep.pde_solid_l2);
    if (rep.convergence_order) out << fmt::format("convergence order: {:.3f}\n", *rep.convergence_order);
    out << fmt::format("status: {}\nwrote {}\n", failures.empty() ? "pass" : "fail", path);
    if (failures.empty()) return kExitOk;
    std::string list;
    for (const auto& f : failures) list += (list.empty() ? "" : "; ") + f;
    err << fmt::format("error[audit]: {} residual check(s) failed: {}\n", failures.size(), one_line(list));
    return kExitAudit;
}

// "x1=0", "x2 = -0.5", ...: fixed axis index and value.
std::pair<int, double> parse_plane(const std::string& spec) {
    static const std::regex re(R"(^\s*x([123])\s*=\s*(\S+)\s*$)");
    std::smatch m;
    if (!std::regex_match(spec, m, re)) {
        throw ParseError(fmt::format("malformed plane spec '{}' (expected x1=c, x2=c or x3=c)", spec));
    }
    double v;
    try {
        v = parse_double(m[2].str());
    } catch (const ParseError&) {
        throw ParseError(fmt::format("malformed plane spec '{}': '{}' is not a number", spec, m[2].str()));
    }
    if (!std::isfinite(v)) throw ParseError(fmt::format("malformed plane spec '{}': value must be finite", spec));
    return {std::stoi(m[1].str()), v};
}

std::string slice_csv(const ParaboloidSolution& sol, const ProblemFile& pf, int axis, double value, double t,
                      int n) {
    const SurfaceGeometry& g = sol.geometry;
    const double L = 2.0 * g.omega2;
    const bool temperature = pf.material.has_value();
    std::string csv = fmt::format("x1,x2,x3,t,phase,{}\n", temperature ? "temperature" : "enthalpy");
    const int a = axis == 1 ? 2 : 1;
    const int b = axis == 3 ? 2 : 3;
    auto range = [&](int k, int i) {
        const double c = k == 3 ? g.mu * t : 0.0;
        return c - L + 2.0 * L * i / (n - 1);
    };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            SpaceTimePoint p{t, 0.0, 0.0, 0.0};
            p[static_cast<std::size_t>(axis)] = value;
            p[static_cast<std::size_t>(a)] = range(a, i);
            p[static_cast<std::size_t>(b)] = range(b, j);
            const FieldSample s = reconstruct_field(sol.profiles, g, p);
            double field = std::nan("");
            if (s.phase == FieldPhase::Liquid || s.phase == FieldPhase::Interface) {
                field = temperature ? invert_enthalpy(pf.model, Phase::Liquid, s.u) : s.u;
            } else if (s.phase == FieldPhase::Solid) {
                field = temperature ? invert_enthalpy(pf.model, Phase::Solid, s.v) : s.v;
            }
            csv += fmt::format("{},{},{},{},{},{}\n", format_double(p[1]), format_double(p[2]), format_double(p[3]),
                               format_double(t), field_phase_name(s.phase), format_double(field));
        }
    }
    return csv;
}

int cmd_export(const Options& o, std::ostream& out) {
    const ProblemFile pf = load_problem(o.problem);
    const std::string dir = resolve_out_dir(o, pf);
    if (o.resolution < 2) throw ParseError("--resolution must be >= 2");
    if (!std::isfinite(o.t)) throw ParseError("--t must be finite");
    if (o.what == "surfaces") {
        const ParaboloidSolution sol = read_solution(o.solution_dir.empty() ? dir : o.solution_dir);
        check_match(sol, pf);
        std::string csv = "x1,x2,x3,surface_id,t\n";
        int id = 1;
        for (Surface s : {Surface::Evaporation, Surface::Melting}) {
            for (const auto& x : surface_points(sol.geometry, s, o.t, o.resolution)) {
                csv += fmt::format("{},{},{},{},{}\n", format_double(x[0]), format_double(x[1]), format_double(x[2]),
                                   id, format_double(o.t));
            }
            ++id;
        }
        const std::string path = in_dir(dir, "surfaces.csv");
        write_file(path, csv);
        out << fmt::format("wrote {}\n", path);
        return kExitOk;
    }
    if (o.what == "field-slice") {
        const auto [axis, value] = parse_plane(o.plane);
        const ParaboloidSolution sol = read_solution(o.solution_dir.empty() ? dir : o.solution_dir);
        check_match(sol, pf);
        const std::string path = in_dir(dir, "slice.csv");
        write_file(path, slice_csv(sol, pf, axis, value, o.t, o.resolution));
        out << fmt::format("wrote {}\n", path);
        return kExitOk;
    }
    throw ParseError(fmt::format("unknown export kind '{}' (expected surfaces or field-slice)", o.what));
}

int fail(std::ostream& err, const char* kind, const std::string& msg, int code) {
    err << fmt::format("error[{}]: {}\n", kind, one_line(msg));
    return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    setup_logging();
    Options o;
    CLI::App app{"Traveling-wave solutions of the two-phase Stefan problem with evaporation", "stefan"};
    app.require_subcommand(1);
    auto* classify = app.add_subcommand("classify", "Report the symmetry cases of a problem");
    auto* solve_cmd = app.add_subcommand("solve", "Solve the reduced problem and write profiles");
    auto* verify = app.add_subcommand("verify", "Audit a solution against the full problem");
    auto* exp = app.add_subcommand("export", "Write surface or field-slice data");
    for (auto* sc : {classify, solve_cmd, verify, exp}) {
        sc->add_option("problem", o.problem, "Problem file")->required();
        sc->add_option("--out-dir", o.out_dir, "Output directory");
    }
    solve_cmd->add_option("--method", o.method, "auto, closed-form or shooting")
        ->check(CLI::IsMember({"auto", "closed-form", "shooting"}));
    verify->add_option("--grid", o.grid, "Finite-difference spacing h");
    verify->add_option("--levels", o.levels, "1 or 2 grid levels")->check(CLI::IsMember({1, 2}));
    verify->add_option("--solution-dir", o.solution_dir, "Directory holding solution.yaml");
    exp->add_option("--what", o.what, "surfaces or field-slice");
    exp->add_option("--t", o.t, "Time of the snapshot");
    exp->add_option("--plane", o.plane, "Slice plane, e.g. x2=0");
    exp->add_option("--resolution", o.resolution, "Points per axis (slices) or per surface");
    exp->add_option("--solution-dir", o.solution_dir, "Directory holding solution.yaml");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return fail(err, "usage", e.what(), kExitParse);
    }

    try {
        if (classify->parsed()) return cmd_classify(o, out);
        if (solve_cmd->parsed()) return cmd_solve(o, out);
        if (verify->parsed()) return cmd_verify(o, out, err);
        return cmd_export(o, out);
    } catch (const ParseError& e) {
        return fail(err, e.kind(), e.what(), kExitParse);
    } catch (const GridError& e) {
        return fail(err, e.kind(), e.what(), kExitParse);
    } catch (const NoRoot& e) {
        return fail(err, e.kind(), e.what(), kExitNoRoot);
    } catch (const UnsupportedCase& e) {
        return fail(err, e.kind(), e.what(), kExitUnsupported);
    } catch (const UnsupportedSubalgebra& e) {
        return fail(err, e.kind(), e.what(), kExitUnsupported);
    } catch (const Error& e) {
        return fail(err, e.kind(), e.what(), kExitInternal);
    } catch (const std::exception& e) {
        return fail(err, "internal", e.what(), kExitInternal);
    }
}

}  // namespace stefan::cli
