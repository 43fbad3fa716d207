#include "stefan/reduction.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "stefan/errors.hpp"

namespace stefan {

namespace {

constexpr const char* kBothReasons = "∂S_k/∂t = 0 and q·n₁ = 0";
constexpr const char* kTimeReason = "∂S_k/∂t = 0";
constexpr const char* kFluxReason = "q·n₁ = 0";
constexpr const char* kAngleConstraint = "phi != 0, pi/2";

constexpr double kGenericAlpha = 0.7;
constexpr double kGenericBeta = 0.3;
constexpr double kGenericPhi = 1.0;

Subalgebra make(std::string id, std::vector<std::string> gens) {
    Subalgebra s;
    s.id = std::move(id);
    s.dimension = static_cast<int>(gens.size());
    s.generators = std::move(gens);
    return s;
}

const std::string K = "P3 cos(phi) + Pt sin(phi)";
const std::string L = "P3 sin(phi) - Pt cos(phi)";

std::vector<Subalgebra> catalog() {
    return {
        make("1a", {K}),
        make("1b", {"P1 + alpha (" + K + ")"}),
        make("1c", {"J12 + beta (" + K + ")"}),
        make("2a", {"P3", "Pt"}),
        make("2b", {"P1 + alpha (" + K + ")", "P2"}),
        make("2c", {"P1 + alpha (" + K + ")", L}),
        make("2d", {"J12 + beta (" + K + ")", L}),
        make("3a", {"P1", "P3", "Pt"}),
        make("3b", {"J12", "P3", "Pt"}),
        make("3c", {"P1 + alpha (" + K + ")", "P2", L}),
        make("3d", {"J12 + beta (" + K + ")", "P1", "P2"}),
        make("4a", {"P1", "P2", "P3", "Pt"}),
        make("4b", {"J12 + beta (" + K + ")", "P1", "P2", L}),
        make("5a", {"J12", "P1", "P2", "P3", "Pt"}),
    };
}

double alpha_of(const Subalgebra& s) { return s.alpha.value_or(kGenericAlpha); }
double beta_of(const Subalgebra& s) { return s.beta.value_or(kGenericBeta); }
double phi_of(const Subalgebra& s) { return s.phi.value_or(kGenericPhi); }

bool near(double a, double b) { return std::abs(a - b) <= 1e-12; }

using Vec4 = Eigen::Vector4d;  // components along (t, x1, x2, x3)

std::vector<Vec4> fields_at(const Subalgebra& s, const Vec4& p) {
    const double a = alpha_of(s);
    const double b = beta_of(s);
    const double ph = phi_of(s);
    const Vec4 Pt(1, 0, 0, 0), P1(0, 1, 0, 0), P2(0, 0, 1, 0), P3(0, 0, 0, 1);
    const Vec4 J12(0, p[2], -p[1], 0);
    const Vec4 Kv = std::cos(ph) * P3 + std::sin(ph) * Pt;
    const Vec4 Lv = std::sin(ph) * P3 - std::cos(ph) * Pt;
    const std::string& id = s.id;
    if (id == "1a") return {Kv};
    if (id == "1b") return {P1 + a * Kv};
    if (id == "1c") return {J12 + b * Kv};
    if (id == "2a") return {P3, Pt};
    if (id == "2b") return {P1 + a * Kv, P2};
    if (id == "2c") return {P1 + a * Kv, Lv};
    if (id == "2d") return {J12 + b * Kv, Lv};
    if (id == "3a") return {P1, P3, Pt};
    if (id == "3b") return {J12, P3, Pt};
    if (id == "3c") return {P1 + a * Kv, P2, Lv};
    if (id == "3d") return {J12 + b * Kv, P1, P2};
    if (id == "4a") return {P1, P2, P3, Pt};
    if (id == "4b") return {J12 + b * Kv, P1, P2, Lv};
    if (id == "5a") return {J12, P1, P2, P3, Pt};
    throw DomainError("unknown subalgebra id '" + id + "'");
}

bool in_span(const std::vector<Vec4>& cols, const Vec4& e) {
    Eigen::MatrixXd A(4, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) A.col(static_cast<Eigen::Index>(j)) = cols[j];
    Eigen::MatrixXd B(4, cols.size() + 1);
    B << A, e;
    Eigen::FullPivLU<Eigen::MatrixXd> la(A), lb(B);
    la.setThreshold(1e-10);
    lb.setThreshold(1e-10);
    return la.rank() == lb.rank();
}

Admissibility verdict(bool time_fixed, bool flux_tangent) {
    if (time_fixed && flux_tangent) return {false, kBothReasons};
    if (time_fixed) return {false, kTimeReason};
    if (flux_tangent) return {false, kFluxReason};
    return {true, ""};
}

// Angle exclusions. With L among the generators, phi = 0 makes L = -Pt and
// phi = pi/2 makes L = P3; with K the roles swap.
Admissibility angle_rule(double phi, bool via_L) {
    const bool at0 = near(phi, 0.0);
    const bool at90 = near(phi, std::numbers::pi / 2);
    if (!at0 && !at90) return {true, ""};
    const bool time_fixed = via_L ? at0 : at90;
    return verdict(time_fixed, !time_fixed);
}

}  // namespace

Subalgebra Subalgebra::with(std::optional<double> a, std::optional<double> b, std::optional<double> p) const {
    Subalgebra s = *this;
    if (a) s.alpha = a;
    if (b) s.beta = b;
    if (p) s.phi = p;
    return s;
}

std::vector<Subalgebra> unfiltered_subalgebras(int dimension) {
    if (dimension < 1 || dimension > 5) throw DomainError(fmt::format("no subalgebras of dimension {}", dimension));
    std::vector<Subalgebra> out;
    for (auto& s : catalog()) {
        if (s.dimension == dimension) out.push_back(s);
    }
    return out;
}

std::vector<Subalgebra> enumerate_subalgebras(int dimension) {
    if (dimension < 1 || dimension > 4) throw DomainError(fmt::format("dimension {} is not in 1..4", dimension));
    std::vector<Subalgebra> out;
    for (auto s : unfiltered_subalgebras(dimension)) {
        const std::string& id = s.id;
        if (id == "2a" || id == "3a" || id == "3b" || id == "4a") continue;
        if (id == "1a" || id == "2c" || id == "2d" || id == "3c") s.constraint = kAngleConstraint;
        if (id == "3d") s.constraint = "phi != 0, pi/2 if beta != 0";
        if (id == "4b") {
            s.beta = 0.0;
            s.generators.front() = "J12";
            s.constraint = std::string("beta = 0; ") + kAngleConstraint;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::optional<Subalgebra> find_subalgebra(const std::string& id) {
    for (auto& s : catalog()) {
        if (s.id == id) return s;
    }
    return std::nullopt;
}

Admissibility check_restrictions_by_rule(const Subalgebra& s) {
    const std::string& id = s.id;
    if (id == "2a" || id == "3a" || id == "3b" || id == "4a" || id == "5a") return {false, kBothReasons};
    if (id == "1b" || id == "1c" || id == "2b") return {true, ""};
    const double phi = phi_of(s);
    if (id == "1a") return angle_rule(phi, false);
    if (id == "2c" || id == "2d" || id == "3c") return angle_rule(phi, true);
    if (id == "3d") return near(beta_of(s), 0.0) ? Admissibility{true, ""} : angle_rule(phi, false);
    if (id == "4b") return near(beta_of(s), 0.0) ? angle_rule(phi, true) : Admissibility{false, kBothReasons};
    throw DomainError("unknown subalgebra id '" + id + "'");
}

Admissibility check_restrictions_by_samples(const Subalgebra& s) {
    const Vec4 points[] = {Vec4(0.37, 0.61, -0.29, 0.83), Vec4(1.3, -0.7, 0.45, -0.2), Vec4(-0.8, 0.19, 1.7, 0.55)};
    bool time_fixed = true;
    bool flux_tangent = true;
    for (const Vec4& p : points) {
        const auto cols = fields_at(s, p);
        time_fixed = time_fixed && in_span(cols, Vec4(1, 0, 0, 0));
        flux_tangent = flux_tangent && in_span(cols, Vec4(0, 0, 0, 1));
    }
    return verdict(time_fixed, flux_tangent);
}

Admissibility check_restrictions(const Subalgebra& s) {
    const Admissibility rule = check_restrictions_by_rule(s);
    const Admissibility sampled = check_restrictions_by_samples(s);
    if (rule.admissible != sampled.admissible || rule.reason != sampled.reason) {
        throw std::logic_error(fmt::format("restriction checks disagree for subalgebra {}: rule '{}' vs samples '{}'",
                                           s.id, rule.reason, sampled.reason));
    }
    return rule;
}

const char* ansatz_name(Ansatz::Kind k) {
    switch (k) {
        case Ansatz::Kind::PlanarWave: return "PlanarWave";
        case Ansatz::Kind::HelicalRZ: return "HelicalRZ";
        case Ansatz::Kind::ParaboloidOmega: return "ParaboloidOmega";
    }
    return "?";
}

Ansatz build_ansatz(const Subalgebra& s) {
    const Admissibility adm = check_restrictions(s);
    if (!adm.admissible) {
        throw UnsupportedSubalgebra(fmt::format("subalgebra {} is inadmissible: {}", s.id, adm.reason));
    }
    const double phi = phi_of(s);
    Ansatz a;
    if (s.id == "4b") {
        a.kind = Ansatz::Kind::PlanarWave;
        a.mu = -std::tan(phi);
        a.invariant_vars = "z = x3 - mu t";
        return a;
    }
    if (s.id == "3c") {
        a.kind = Ansatz::Kind::PlanarWave;
        a.mu = -std::tan(phi);
        a.alpha_star = -alpha_of(s) / std::cos(phi);
        a.invariant_vars = "z = alpha* x1 + x3 - mu t";
        return a;
    }
    if (s.id == "3d") {
        if (near(beta_of(s), 0.0)) {
            throw UnsupportedSubalgebra("subalgebra 3d with beta = 0 leaves u(t, x3) unreduced");
        }
        a.kind = Ansatz::Kind::PlanarWave;
        a.mu = std::cos(phi) / std::sin(phi);
        a.invariant_vars = "z = x3 - mu t";
        return a;
    }
    if (s.id == "2d") {
        a.mu = -std::tan(phi);
        a.beta = beta_of(s);
        if (near(a.beta, 0.0)) {
            a.kind = Ansatz::Kind::ParaboloidOmega;
            a.beta = 0.0;
            a.invariant_vars = "omega = z + sqrt(z^2 + r^2), z = x3 - mu t, r = sqrt(x1^2 + x2^2)";
        } else {
            a.kind = Ansatz::Kind::HelicalRZ;
            a.invariant_vars = "r = sqrt(x1^2 + x2^2), z = x3 - mu t - beta arctan(x1/x2)";
        }
        return a;
    }
    throw UnsupportedSubalgebra(fmt::format("subalgebra {} reduces to a PDE problem that is not handled", s.id));
}

const char* geometry_name(GeometryKind g) { return g == GeometryKind::Paraboloid ? "paraboloid" : "planar"; }

void SurfaceGeometry::validate() const {
    if (!std::isfinite(omega1) || !std::isfinite(omega2) || !std::isfinite(mu)) {
        throw DomainError("SurfaceGeometry: non-finite parameter");
    }
    if (kind == GeometryKind::Paraboloid && !(omega1 > 0.0)) throw DomainError("SurfaceGeometry: need omega1 > 0");
    if (!(omega2 > omega1)) throw DomainError(fmt::format("SurfaceGeometry: need omega2 > omega1 (got {} <= {})", omega2, omega1));
    if (!(mu > 0.0)) throw DomainError(fmt::format("SurfaceGeometry: need mu > 0 (got {})", mu));
}

double omega_of_point(const std::array<double, 3>& x, double t, double mu) {
    const double z = x[2] - mu * t;
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double rho = std::sqrt(z * z + r2);
    if (z >= 0.0) return z + rho;
    if (rho == -z) return 0.0;
    return r2 / (rho - z);
}

std::vector<std::array<double, 3>> surface_points(const SurfaceGeometry& geom, Surface which, double t,
                                                  int n_samples, double r_max) {
    geom.validate();
    if (n_samples < 1) throw DomainError("surface_points: need at least one sample");
    const double wk = which == Surface::Evaporation ? geom.omega1 : geom.omega2;
    const double reach = r_max > 0.0 ? r_max : 2.0 * std::max(std::abs(wk), geom.omega2 - geom.omega1);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<std::array<double, 3>> pts;
    pts.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double frac = n_samples > 1 ? static_cast<double>(i) / (n_samples - 1) : 0.0;
        const double r = reach * std::sqrt(frac);
        const double th = golden * i;
        const double x1 = r * std::cos(th);
        const double x2 = r * std::sin(th);
        double z;
        if (geom.kind == GeometryKind::Paraboloid) z = 0.5 * (wk - r * r / wk);
        else z = wk;
        pts.push_back({x1, x2, z + geom.mu * t});
    }
    return pts;
}

SpaceTimePoint Placement::to_world(const SpaceTimePoint& p) const {
    const auto v = vector_to_world({p[1], p[2], p[3]});
    return {p[0] + t0, v[0] + origin[0], v[1] + origin[1], v[2] + origin[2]};
}

SpaceTimePoint Placement::to_local(const SpaceTimePoint& p) const {
    const auto v = vector_to_local({p[1] - origin[0], p[2] - origin[1], p[3] - origin[2]});
    return {p[0] - t0, v[0], v[1], v[2]};
}

std::array<double, 3> Placement::vector_to_world(const std::array<double, 3>& v) const {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {v[0] * c + v[1] * s, -v[0] * s + v[1] * c, v[2]};
}

std::array<double, 3> Placement::vector_to_local(const std::array<double, 3>& v) const {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {v[0] * c - v[1] * s, v[0] * s + v[1] * c, v[2]};
}

Placement Placement::transported(const GroupElement& g) const {
    Placement p = *this;
    const double e = g.parameter;
    switch (g.generator) {
        case Generator::T0: p.t0 += e; break;
        case Generator::T1: p.origin[0] += e; break;
        case Generator::T2: p.origin[1] += e; break;
        case Generator::T3: p.origin[2] += e; break;
        case Generator::T5: {
            const double c = std::cos(e);
            const double s = std::sin(e);
            p.origin = {origin[0] * c + origin[1] * s, -origin[0] * s + origin[1] * c, origin[2]};
            p.angle += e;
            break;
        }
        default:
            throw UnsupportedCase(fmt::format("generator {} is not a symmetry of the constant-flux problem",
                                              generator_name(g.generator)));
    }
    return p;
}

const char* field_phase_name(FieldPhase p) {
    switch (p) {
        case FieldPhase::Gas: return "gas";
        case FieldPhase::Liquid: return "liquid";
        case FieldPhase::Interface: return "interface";
        case FieldPhase::Solid: return "solid";
    }
    return "?";
}

double invariant_of(const SurfaceGeometry& geom, const Placement& place, const SpaceTimePoint& world) {
    const SpaceTimePoint p = place.to_local(world);
    if (geom.kind == GeometryKind::Planar) return p[3] - geom.mu * p[0];
    return omega_of_point({p[1], p[2], p[3]}, p[0], geom.mu);
}

FieldSample reconstruct_field(const ReducedProfiles& prof, const SurfaceGeometry& geom, const SpaceTimePoint& query,
                              const Placement& place) {
    FieldSample s;
    const double w = invariant_of(geom, place, query);
    s.omega = w;
    const double slack = 1e-12 * std::max(1.0, std::abs(geom.omega2));
    if (w < geom.omega1 - slack) {
        s.phase = FieldPhase::Gas;
        return s;
    }
    if (std::abs(w - geom.omega2) <= slack) {
        s.phase = FieldPhase::Interface;
        s.u = prof.u.eval(geom.omega2);
        s.v = prof.v.eval(geom.omega2);
        return s;
    }
    if (w < geom.omega2) {
        s.phase = FieldPhase::Liquid;
        s.u = prof.u.eval(std::max(w, geom.omega1));
        return s;
    }
    s.phase = FieldPhase::Solid;
    if (w > prof.v.hi()) {
        s.far_field = true;
        s.v = prof.v_inf;
        return s;
    }
    s.v = prof.v.eval(w);
    return s;
}

}  // namespace stefan
