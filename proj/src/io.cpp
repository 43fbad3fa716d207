#include "stefan/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "stefan/errors.hpp"

namespace stefan {

namespace {

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

// A YAML mapping whose keys are checked off as they are read, so that
// leftovers can be reported as unknown keys.
class Section {
public:
    Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.IsMap()) throw ParseError(fmt::format("'{}' must be a mapping", path_), line_of(node_));
    }

    int line() const { return line_of(node_); }
    const std::string& path() const { return path_; }

    bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

    YAML::Node get(const std::string& key) {
        seen_.insert(key);
        const YAML::Node n = node_[key];
        if (!n) throw ParseError(fmt::format("missing key '{}'", qualified(key)), line());
        return n;
    }

    double num(const std::string& key) { return to_double(get(key), key); }
    double num_or(const std::string& key, double fallback) { return has(key) ? num(key) : fallback; }

    int integer(const std::string& key) {
        const YAML::Node n = get(key);
        const double v = to_double(n, key);
        if (v != std::floor(v) || std::abs(v) > 1e9) {
            throw ParseError(fmt::format("'{}' must be an integer", qualified(key)), line_of(n));
        }
        return static_cast<int>(v);
    }
    int integer_or(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

    std::string str(const std::string& key) {
        const YAML::Node n = get(key);
        if (!n.IsScalar()) throw ParseError(fmt::format("'{}' must be a scalar", qualified(key)), line_of(n));
        return n.Scalar();
    }

    std::vector<double> list(const std::string& key) {
        const YAML::Node n = get(key);
        if (!n.IsSequence()) throw ParseError(fmt::format("'{}' must be a list", qualified(key)), line_of(n));
        std::vector<double> out;
        for (const auto& e : n) out.push_back(to_double(e, key));
        return out;
    }

    Section child(const std::string& key) { return Section(get(key), qualified(key)); }

    // Rejects keys outside `allowed` before any required key is looked up, so
    // a misspelt key is reported as unknown rather than as a missing one.
    void only(std::initializer_list<const char*> allowed) const {
        for (const auto& kv : node_) {
            const std::string key = kv.first.Scalar();
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
                throw ParseError(fmt::format("unknown key '{}'", qualified(key)), line_of(kv.first));
            }
        }
    }

    void finish() const {
        for (const auto& kv : node_) {
            const std::string key = kv.first.Scalar();
            if (!seen_.count(key)) {
                throw ParseError(fmt::format("unknown key '{}'", qualified(key)), line_of(kv.first));
            }
        }
    }

    std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    double to_double(const YAML::Node& n, const std::string& key) const {
        if (!n.IsScalar()) throw ParseError(fmt::format("'{}' must be a number", qualified(key)), line_of(n));
        try {
            return parse_double(n.Scalar());
        } catch (const ParseError& e) {
            throw ParseError(fmt::format("'{}': {}", qualified(key), e.what()), line_of(n));
        }
    }

    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

YAML::Node load_yaml(const std::string& text) {
    try {
        return YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ParseError(e.msg, e.mark.line + 1);
    }
}

// Runs a constructor or validator and reports its failure against a section.
template <class F>
auto anchored(const Section& s, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(fmt::format("in '{}': {}", s.path(), e.what()), s.line());
    }
}

FunctionProfile parse_profile(Section s) {
    const std::string family = s.str("family");
    FunctionProfile p;
    if (family == "constant") {
        s.only({"family", "value"});
        const double v = s.num("value");
        p = anchored(s, [&] { return FunctionProfile::constant(v); });
    } else if (family == "power") {
        s.only({"family", "coefficient", "exponent", "shift"});
        const double D = s.num("coefficient"), a = s.num("exponent"), C = s.num_or("shift", 0.0);
        p = anchored(s, [&] { return FunctionProfile::power(D, a, C); });
    } else if (family == "exponential") {
        s.only({"family", "coefficient", "exponent"});
        const double D = s.num("coefficient"), a = s.num("exponent");
        p = anchored(s, [&] { return FunctionProfile::exponential(D, a); });
    } else if (family == "tabulated") {
        s.only({"family", "args", "values"});
        auto args = s.list("args");
        auto values = s.list("values");
        p = anchored(s, [&] { return FunctionProfile::tabulated(std::move(args), std::move(values)); });
    } else {
        throw ParseError(fmt::format("'{}': unknown family '{}'", s.qualified("family"), family), s.line());
    }
    s.finish();
    return p;
}

FluxComponent parse_component(Section s) {
    const std::string kind = s.str("kind");
    FluxComponent c;
    if (kind == "zero") {
        s.only({"kind"});
        c = FluxComponent::zero();
    } else if (kind == "const") {
        s.only({"kind", "q"});
        c = FluxComponent::constant(s.num("q"));
    } else if (kind == "inv_sqrt_t") {
        s.only({"kind", "q"});
        c = FluxComponent::inv_sqrt_t(s.num("q"));
    } else if (kind == "rot_const" || kind == "rot_inv_sqrt_t") {
        s.only({"kind", "q1", "q2", "lambda"});
        const double q1 = s.num("q1"), q2 = s.num("q2"), lam = s.num("lambda");
        c = kind == "rot_const" ? FluxComponent::rot_const(q1, q2, lam) : FluxComponent::rot_inv_sqrt_t(q1, q2, lam);
    } else if (kind == "samples") {
        s.only({"kind", "t", "value"});
        const auto t = s.list("t");
        const auto v = s.list("value");
        if (t.size() != v.size()) throw ParseError(fmt::format("'{}': t and value differ in length", s.path()), s.line());
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < t.size(); ++i) pts.emplace_back(t[i], v[i]);
        c = anchored(s, [&] { return FluxComponent::arbitrary(std::move(pts)); });
    } else {
        throw ParseError(fmt::format("'{}': unknown kind '{}'", s.qualified("kind"), kind), s.line());
    }
    s.finish();
    return c;
}

GeometryKind parse_geometry_kind(const std::string& s, int line) {
    if (s == "paraboloid" || s == "ParaboloidOmega") return GeometryKind::Paraboloid;
    if (s == "planar" || s == "PlanarWave") return GeometryKind::Planar;
    throw ParseError(fmt::format("unknown ansatz '{}' (expected paraboloid or planar)", s), line);
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string format_opt(const std::optional<double>& v) { return format_double(*v); }

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", x);
}

double parse_double(const std::string& s) {
    std::string t = s;
    if (t == ".inf" || t == ".Inf" || t == "+.inf") t = "inf";
    if (t == "-.inf" || t == "-.Inf") t = "-inf";
    if (t == ".nan" || t == ".NaN") t = "nan";
    if (t.empty()) throw ParseError("empty number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || (errno == ERANGE && std::isinf(v))) throw ParseError(fmt::format("'{}' is not a number", s));
    return v;
}

ProblemFile parse_problem(const std::string& text) {
    const YAML::Node root = load_yaml(text);
    if (!root || root.IsNull()) throw ParseError("empty problem file");
    Section top(root, "");
    top.only({"schema", "material", "enthalpy", "flux", "geometry", "solver", "tolerance", "verify", "output"});
    const int schema = top.integer("schema");
    if (schema != kSchemaVersion) {
        throw ParseError(fmt::format("unsupported schema {} (expected {})", schema, kSchemaVersion), top.line());
    }
    ProblemFile pf;
    const bool has_material = top.has("material"), has_enthalpy = top.has("enthalpy");
    if (has_material == has_enthalpy) {
        throw ParseError("exactly one of 'material' and 'enthalpy' must be present", top.line());
    }
    if (has_material) {
        Section s = top.child("material");
        s.only({"lambda1", "lambda2", "c1", "c2", "H_v", "H_m", "T_v", "T_m", "T_inf"});
        MaterialSpec m;
        m.lambda1 = parse_profile(s.child("lambda1"));
        m.lambda2 = parse_profile(s.child("lambda2"));
        m.c1 = parse_profile(s.child("c1"));
        m.c2 = parse_profile(s.child("c2"));
        m.H_v = s.num("H_v");
        m.H_m = s.num("H_m");
        m.T_v = s.num("T_v");
        m.T_m = s.num("T_m");
        m.T_inf = s.num("T_inf");
        s.finish();
        anchored(s, [&] { m.validate(); });
        pf.model = anchored(s, [&] { return goodman_transform(m); });
        pf.material = m;
    } else {
        Section s = top.child("enthalpy");
        s.only({"d1", "d2", "u_v", "u_m", "v_m", "v_inf", "H_v", "H_m"});
        FunctionProfile d1 = parse_profile(s.child("d1"));
        FunctionProfile d2 = parse_profile(s.child("d2"));
        const double u_v = s.num("u_v"), u_m = s.num("u_m"), v_m = s.num("v_m"), v_inf = s.num("v_inf");
        const double H_v = s.num("H_v"), H_m = s.num("H_m");
        s.finish();
        pf.model = anchored(s, [&] { return EnthalpyModel::make(d1, d2, u_v, u_m, v_m, v_inf, H_v, H_m); });
    }
    {
        Section s = top.child("flux");
        auto component = [&](const char* key) {
            if (!s.has(key)) return FluxComponent::zero();
            return anchored(s, [&] { return parse_component(s.child(key)); });
        };
        pf.flux.q1 = component("q1");
        pf.flux.q2 = component("q2");
        pf.flux.q3 = component("q3");
        s.finish();
        anchored(s, [&] { pf.flux.validate(); });
    }
    {
        Section s = top.child("geometry");
        s.only({"ansatz", "R"});
        pf.geometry = parse_geometry_kind(s.str("ansatz"), s.line());
        pf.R = s.num_or("R", 1.0);
        s.finish();
        if (pf.geometry == GeometryKind::Paraboloid && !(pf.R > 0.0 && std::isfinite(pf.R))) {
            throw ParseError("'geometry.R' must be a positive number", s.line());
        }
    }
    if (top.has("solver")) {
        Section s = top.child("solver");
        RootSolveConfig& c = pf.solver;
        c.abs_tol = s.num_or("abs_tol", c.abs_tol);
        c.max_iters = s.integer_or("max_iters", c.max_iters);
        c.omega2_lo = s.num_or("omega2_lo", c.omega2_lo);
        c.omega2_hi = s.num_or("omega2_hi", c.omega2_hi);
        c.mu_lo = s.num_or("mu_lo", c.mu_lo);
        c.mu_hi = s.num_or("mu_hi", c.mu_hi);
        c.multistart = s.integer_or("multistart", c.multistart);
        c.profile_points = s.integer_or("profile_points", c.profile_points);
        c.ode_tol = s.num_or("ode_tol", c.ode_tol);
        s.finish();
        anchored(s, [&] { c.validate(); });
    }
    if (top.has("tolerance")) {
        Section s = top.child("tolerance");
        AuditThresholds& t = pf.tolerance;
        t.pde_max = s.num_or("pde_max", t.pde_max);
        t.pde_l2 = s.num_or("pde_l2", t.pde_l2);
        t.bc_flux = s.num_or("bc_flux", t.bc_flux);
        t.bc_dirichlet = s.num_or("bc_dirichlet", t.bc_dirichlet);
        t.farfield = s.num_or("farfield", t.farfield);
        t.order_lo = s.num_or("order_lo", t.order_lo);
        t.order_hi = s.num_or("order_hi", t.order_hi);
        s.finish();
    }
    if (top.has("verify")) {
        Section s = top.child("verify");
        AuditConfig& v = pf.verify;
        v.h = s.num_or("h", v.h);
        v.levels = s.integer_or("levels", v.levels);
        v.n_omega = s.integer_or("n_omega", v.n_omega);
        v.n_r = s.integer_or("n_r", v.n_r);
        v.n_az = s.integer_or("n_az", v.n_az);
        v.surface_samples = s.integer_or("surface_samples", v.surface_samples);
        s.finish();
        anchored(s, [&] { v.validate(); });
    }
    if (top.has("output")) {
        Section s = top.child("output");
        s.only({"dir"});
        pf.output_dir = s.str("dir");
        s.finish();
    }
    top.finish();
    return pf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(fmt::format("cannot open '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", path));
    out << content;
    if (!out) throw Error(fmt::format("write to '{}' failed", path));
}

ProblemFile load_problem(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return parse_problem(text);
    } catch (const ParseError& e) {
        throw e.with_context(path);
    }
}

ReducedStefanProblem reduced_problem(const ProblemFile& pf) {
    const SymmetryReport rep = classify_flux(pf.flux);
    if (rep.table2_case != 5) {
        throw UnsupportedCase(fmt::format("reduction not implemented for Table 2 case {}", rep.table2_case));
    }
    ReducedStefanProblem p;
    p.model = pf.model;
    p.R = pf.R;
    p.q = pf.flux.q3.q;
    p.geometry = pf.geometry;
    return p;
}

std::string solution_yaml(const ParaboloidSolution& sol) {
    const SurfaceGeometry& g = sol.geometry;
    const SolveDiagnostics& d = sol.diagnostics;
    std::string out;
    out += "# Traveling-wave solution; SI units (omega in m, mu in m/s, u and v in J/m^3).\n";
    out += fmt::format("schema: {}\n", kSchemaVersion);
    out += fmt::format("solver_tag: {}\n", solver_tag_name(sol.solver_tag));
    out += "geometry:\n";
    out += fmt::format("  kind: {}\n", geometry_name(g.kind));
    out += fmt::format("  omega1: {}\n", format_double(g.omega1));
    out += fmt::format("  omega2: {}\n", format_double(g.omega2));
    out += fmt::format("  mu: {}\n", format_double(g.mu));
    out += fmt::format("v_inf: {}\n", format_double(sol.profiles.v_inf));
    out += fmt::format("profiles: {}\n", kProfileFile);
    out += "diagnostics:\n";
    out += fmt::format("  root_residuals: [{}, {}]\n", format_double(d.root_residuals[0]),
                       format_double(d.root_residuals[1]));
    out += fmt::format("  iterations: {}\n", d.iterations);
    out += fmt::format("  evaluations: {}\n", d.evaluations);
    out += fmt::format("  roots_found: {}\n", d.roots_found);
    out += fmt::format("  farfield_residual: {}\n", format_double(d.farfield_residual));
    if (sol.notes.empty()) {
        out += "notes: []\n";
    } else {
        out += "notes:\n";
        for (const auto& n : sol.notes) out += "  - " + quoted(n) + "\n";
    }
    return out;
}

std::string profile_csv(const ParaboloidSolution& sol) {
    std::string out = "omega,value,phase\n";
    auto rows = [&](const MonotoneCubic& m, const char* phase) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            out += fmt::format("{},{},{}\n", format_double(m.xs()[i]), format_double(m.ys()[i]), phase);
        }
    };
    rows(sol.profiles.u, "liquid");
    rows(sol.profiles.v, "solid");
    return out;
}

ParaboloidSolution parse_solution(const std::string& yaml, const std::string& csv) {
    const YAML::Node root = load_yaml(yaml);
    if (!root || root.IsNull()) throw ParseError("empty solution file");
    Section top(root, "");
    if (top.integer("schema") != kSchemaVersion) throw ParseError("unsupported solution schema", top.line());
    ParaboloidSolution sol;
    const std::string tag = top.str("solver_tag");
    if (tag == "ClosedFormConstant") sol.solver_tag = SolverTag::ClosedFormConstant;
    else if (tag == "ClosedFormFastDiffusion") sol.solver_tag = SolverTag::ClosedFormFastDiffusion;
    else if (tag == "Shooting") sol.solver_tag = SolverTag::Shooting;
    else throw ParseError(fmt::format("unknown solver_tag '{}'", tag), top.line());
    {
        Section g = top.child("geometry");
        sol.geometry.kind = parse_geometry_kind(g.str("kind"), g.line());
        sol.geometry.omega1 = g.num("omega1");
        sol.geometry.omega2 = g.num("omega2");
        sol.geometry.mu = g.num("mu");
        g.finish();
        anchored(g, [&] { sol.geometry.validate(); });
    }
    sol.profiles.v_inf = top.num("v_inf");
    top.str("profiles");
    {
        Section d = top.child("diagnostics");
        const auto rr = d.list("root_residuals");
        if (rr.size() != 2) throw ParseError("'diagnostics.root_residuals' must hold two numbers", d.line());
        sol.diagnostics.root_residuals = {rr[0], rr[1]};
        sol.diagnostics.iterations = d.integer("iterations");
        sol.diagnostics.evaluations = d.integer("evaluations");
        sol.diagnostics.roots_found = d.integer("roots_found");
        sol.diagnostics.farfield_residual = d.num("farfield_residual");
        d.finish();
    }
    {
        const YAML::Node notes = top.get("notes");
        if (!notes.IsSequence()) throw ParseError("'notes' must be a list", line_of(notes));
        for (const auto& n : notes) sol.notes.push_back(n.Scalar());
    }
    top.finish();

    std::istringstream in(csv);
    std::string line;
    int lineno = 1;
    if (!std::getline(in, line) || line != "omega,value,phase") {
        throw ParseError("profile CSV must start with 'omega,value,phase'", 1);
    }
    std::vector<double> wl, ul, ws, vs;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw ParseError("profile row needs three fields", lineno);
        double w, v;
        try {
            w = parse_double(line.substr(0, c1));
            v = parse_double(line.substr(c1 + 1, c2 - c1 - 1));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        }
        const std::string phase = line.substr(c2 + 1);
        if (phase == "liquid") {
            wl.push_back(w);
            ul.push_back(v);
        } else if (phase == "solid") {
            ws.push_back(w);
            vs.push_back(v);
        } else {
            throw ParseError(fmt::format("unknown phase '{}'", phase), lineno);
        }
    }
    try {
        sol.profiles.u = MonotoneCubic(std::move(wl), std::move(ul));
        sol.profiles.v = MonotoneCubic(std::move(ws), std::move(vs));
    } catch (const Error& e) {
        throw ParseError(fmt::format("profile CSV: {}", e.what()));
    }
    return sol;
}

void write_solution(const ParaboloidSolution& sol, const std::string& dir) {
    write_file((std::filesystem::path(dir) / kSolutionFile).string(), solution_yaml(sol));
    write_file((std::filesystem::path(dir) / kProfileFile).string(), profile_csv(sol));
}

ParaboloidSolution read_solution(const std::string& dir) {
    const auto base = std::filesystem::path(dir);
    const std::string yaml_path = (base / kSolutionFile).string();
    const std::string csv_path = (base / kProfileFile).string();
    try {
        return parse_solution(read_file(yaml_path), read_file(csv_path));
    } catch (const ParseError& e) {
        throw ParseError(fmt::format("{}: {}", yaml_path, e.what()), 0);
    }
}

std::string report_yaml(const ResidualReport& r, const AuditThresholds& t, const std::vector<std::string>& failures) {
    std::string out;
    out += "# Residual report of the full (t, x) problem; SI units.\n";
    out += fmt::format("schema: {}\n", kSchemaVersion);
    out += fmt::format("status: {}\n", failures.empty() ? "pass" : "fail");
    out += "residuals:\n";
    auto field = [&](const char* name, double v) { out += fmt::format("  {}: {}\n", name, format_double(v)); };
    field("pde_liquid_max", r.pde_liquid_max);
    field("pde_liquid_l2", r.pde_liquid_l2);
    field("pde_solid_max", r.pde_solid_max);
    field("pde_solid_l2", r.pde_solid_l2);
    field("bc_evaporation_flux", r.bc_evaporation_flux);
    field("bc_evaporation_dirichlet", r.bc_evaporation_dirichlet);
    field("bc_stefan_flux", r.bc_stefan_flux);
    field("bc_stefan_dirichlet_u", r.bc_stefan_dirichlet_u);
    field("bc_stefan_dirichlet_v", r.bc_stefan_dirichlet_v);
    field("farfield", r.farfield);
    out += fmt::format("grid_spacing: {}\n", format_double(r.grid_spacing));
    out += fmt::format("levels: {}\n", r.levels);
    out += fmt::format("samples_per_phase: {}\n", r.samples_per_phase);
    if (r.convergence_order) {
        out += fmt::format("convergence_order: {}\n", format_opt(r.convergence_order));
        out += fmt::format("convergence_order_liquid: {}\n", format_opt(r.convergence_order_liquid));
        out += fmt::format("convergence_order_solid: {}\n", format_opt(r.convergence_order_solid));
    }
    out += "thresholds:\n";
    field("pde_max", t.pde_max);
    field("pde_l2", t.pde_l2);
    field("bc_flux", t.bc_flux);
    field("bc_dirichlet", t.bc_dirichlet);
    field("farfield", t.farfield);
    field("order_lo", t.order_lo);
    field("order_hi", t.order_hi);
    if (failures.empty()) {
        out += "failures: []\n";
    } else {
        out += "failures:\n";
        for (const auto& f : failures) out += "  - " + quoted(f) + "\n";
    }
    return out;
}

ResidualReport parse_report(const std::string& yaml) {
    const YAML::Node root = load_yaml(yaml);
    if (!root || root.IsNull()) throw ParseError("empty report");
    Section top(root, "");
    if (top.integer("schema") != kSchemaVersion) throw ParseError("unsupported report schema", top.line());
    ResidualReport r;
    {
        Section s = top.child("residuals");
        r.pde_liquid_max = s.num("pde_liquid_max");
        r.pde_liquid_l2 = s.num("pde_liquid_l2");
        r.pde_solid_max = s.num("pde_solid_max");
        r.pde_solid_l2 = s.num("pde_solid_l2");
        r.bc_evaporation_flux = s.num("bc_evaporation_flux");
        r.bc_evaporation_dirichlet = s.num("bc_evaporation_dirichlet");
        r.bc_stefan_flux = s.num("bc_stefan_flux");
        r.bc_stefan_dirichlet_u = s.num("bc_stefan_dirichlet_u");
        r.bc_stefan_dirichlet_v = s.num("bc_stefan_dirichlet_v");
        r.farfield = s.num("farfield");
        s.finish();
    }
    r.grid_spacing = top.num("grid_spacing");
    r.levels = top.integer("levels");
    r.samples_per_phase = top.integer("samples_per_phase");
    if (top.has("convergence_order")) {
        r.convergence_order = top.num("convergence_order");
        r.convergence_order_liquid = top.num("convergence_order_liquid");
        r.convergence_order_solid = top.num("convergence_order_solid");
    }
    top.get("status");
    top.get("thresholds");
    top.get("failures");
    top.finish();
    return r;
}

std::string classification_yaml(const SymmetryReport& flux_case, int diffusivity_case) {
    std::string out = fmt::format("schema: {}\n", kSchemaVersion);
    out += fmt::format("flux_case: {}\n", flux_case.table2_case);
    out += fmt::format("flux_group_dimension: {}\n", flux_case.dimension);
    std::string gens;
    for (std::size_t i = 0; i < flux_case.group_generators.size(); ++i) {
        gens += (i ? ", " : "") + std::string(generator_name(flux_case.group_generators[i]));
    }
    out += fmt::format("flux_generators: [{}]\n", gens);
    if (flux_case.table2_case == 3 || flux_case.table2_case == 4) {
        out += fmt::format("rotation_rate: {}\n", format_double(flux_case.rotation_rate));
    }
    out += fmt::format("diffusivity_case: {}\n", diffusivity_case);
    return out;
}

}  // namespace stefan
