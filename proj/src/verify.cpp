#include "stefan/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "stefan/errors.hpp"

namespace stefan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

struct Norms {
    double max = 0.0;
    double sum_sq = 0.0;
    int n = 0;

    void add(double r) {
        const double a = std::isnan(r) ? kInf : std::abs(r);
        max = std::max(max, a);
        sum_sq += a * a;
        ++n;
    }
    double l2() const { return n ? std::sqrt(sum_sq / n) : 0.0; }
};

struct PhaseWindow {
    FieldPhase phase;
    double lo, hi;
};

std::vector<PhaseWindow> windows(const ParaboloidSolution& sol, const AuditConfig& cfg) {
    const SurfaceGeometry& g = sol.geometry;
    const double m = exclusion_band(cfg.h, g.mu);
    const double liquid_lo = g.omega1 + m;
    const double liquid_hi = g.omega2 - m;
    const double solid_lo = g.omega2 + m;
    const double solid_hi = std::min(solid_lo + g.omega2, sol.profiles.v.hi() - m);
    if (!(liquid_hi > liquid_lo)) {
        throw GridError(fmt::format("liquid layer [{}, {}] is thinner than twice the exclusion band {}", g.omega1,
                                    g.omega2, m));
    }
    if (!(solid_hi > solid_lo)) throw GridError("solid table too short for the exclusion band");
    return {{FieldPhase::Liquid, liquid_lo, liquid_hi}, {FieldPhase::Solid, solid_lo, solid_hi}};
}

// Local-frame sample points at t = 0 on invariant levels between lo and hi.
std::vector<SpaceTimePoint> samples(const ParaboloidSolution& sol, const PhaseWindow& w, const AuditConfig& cfg) {
    const SurfaceGeometry& g = sol.geometry;
    const double r_max = 1.5 * g.omega2;
    std::vector<SpaceTimePoint> pts;
    for (int i = 0; i < cfg.n_omega; ++i) {
        const double om = w.lo + (w.hi - w.lo) * i / std::max(1, cfg.n_omega - 1);
        for (int j = 0; j < cfg.n_r; ++j) {
            const double r = r_max * j / std::max(1, cfg.n_r - 1);
            for (int k = 0; k < cfg.n_az; ++k) {
                const double th = 0.3 + 2.0 * std::numbers::pi * k / cfg.n_az;
                const double z = g.kind == GeometryKind::Paraboloid ? (om * om - r * r) / (2.0 * om) : om;
                pts.push_back({0.0, r * std::cos(th), r * std::sin(th), z});
            }
        }
    }
    return pts;
}

double field_value(const ParaboloidSolution& sol, const SpaceTimePoint& x, const Placement& place,
                   FieldPhase expected) {
    const FieldSample s = reconstruct_field(sol.profiles, sol.geometry, x, place);
    if (s.phase != expected) {
        throw GridError(fmt::format("stencil point in {} phase while sampling the {} phase",
                                    field_phase_name(s.phase), field_phase_name(expected)));
    }
    return expected == FieldPhase::Liquid ? s.u : s.v;
}

// du/dt - div(d(u) grad u) by central differences in world coordinates,
// with arithmetic-mean face diffusivities.
double stencil_residual(const ParaboloidSolution& sol, const FunctionProfile& d, const SpaceTimePoint& X, double h,
                        const Placement& place, FieldPhase phase) {
    auto f = [&](const SpaceTimePoint& p) { return field_value(sol, p, place, phase); };
    const double u0 = f(X);
    const double d0 = d(u0);
    SpaceTimePoint a = X, b = X;
    a[0] += h;
    b[0] -= h;
    const double ut = (f(a) - f(b)) / (2.0 * h);
    double div = 0.0;
    for (int k = 1; k <= 3; ++k) {
        a = X;
        b = X;
        a[k] += h;
        b[k] -= h;
        const double up = f(a), um = f(b);
        const double dp = 0.5 * (d(up) + d0), dm = 0.5 * (d(um) + d0);
        div += (dp * (up - u0) - dm * (u0 - um)) / (h * h);
    }
    return ut - div;
}

struct PhaseNorms {
    Norms liquid, solid;
};

PhaseNorms pde_norms(const ParaboloidSolution& sol, const EnthalpyModel& model, double h, const AuditConfig& cfg) {
    sol.geometry.validate();
    PhaseNorms out;
    for (const PhaseWindow& w : windows(sol, cfg)) {
        const FunctionProfile& d = w.phase == FieldPhase::Liquid ? model.d1 : model.d2;
        Norms& n = w.phase == FieldPhase::Liquid ? out.liquid : out.solid;
        for (const SpaceTimePoint& p : samples(sol, w, cfg)) {
            const SpaceTimePoint X = cfg.placement.to_world(p);
            double r;
            try {
                r = stencil_residual(sol, d, X, h, cfg.placement, w.phase);
            } catch (const RangeError&) {
                r = kInf;
            } catch (const DomainError&) {
                r = kInf;
            }
            n.add(r);
        }
    }
    return out;
}

struct SurfaceFrame {
    double omega;
    Vec3 grad_omega;  // world frame
    Vec3 grad_S;      // world frame
    double dS_dt;
};

SurfaceFrame surface_frame(const SurfaceGeometry& g, double wk, const Vec3& x_local, double t_local,
                           const Placement& place) {
    SurfaceFrame f;
    if (g.kind == GeometryKind::Planar) {
        f.omega = x_local[2] - g.mu * t_local;
        f.grad_omega = place.vector_to_world({0.0, 0.0, 1.0});
        f.grad_S = f.grad_omega;
        f.dS_dt = -g.mu;
        return f;
    }
    const double z = x_local[2] - g.mu * t_local;
    const double rho = std::hypot(z, std::hypot(x_local[0], x_local[1]));
    f.omega = omega_of_point(x_local, t_local, g.mu);
    f.grad_omega = place.vector_to_world({x_local[0] / rho, x_local[1] / rho, f.omega / rho});
    f.grad_S = place.vector_to_world({2.0 * x_local[0] / (wk * wk), 2.0 * x_local[1] / (wk * wk), 2.0 / wk});
    f.dS_dt = -2.0 * g.mu / wk;
    return f;
}

double order_of(const Norms& coarse, const Norms& fine) { return std::log2(coarse.l2() / fine.l2()); }

}  // namespace

void AuditConfig::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("AuditConfig: h must be > 0");
    if (levels != 1 && levels != 2) throw DomainError("AuditConfig: levels must be 1 or 2");
    if (n_omega < 1 || n_r < 1 || n_az < 1 || surface_samples < 1) {
        throw DomainError("AuditConfig: sample counts must be >= 1");
    }
}

double exclusion_band(double h, double mu) { return 8.0 * h + 2.0 * mu * h; }

ResidualReport pde_residual(const ParaboloidSolution& sol, const EnthalpyModel& model, double h,
                            const AuditConfig& cfg) {
    cfg.validate();
    const PhaseNorms n = pde_norms(sol, model, h, cfg);
    ResidualReport r;
    r.pde_liquid_max = n.liquid.max;
    r.pde_liquid_l2 = n.liquid.l2();
    r.pde_solid_max = n.solid.max;
    r.pde_solid_l2 = n.solid.l2();
    r.grid_spacing = h;
    r.levels = 1;
    r.samples_per_phase = n.liquid.n;
    return r;
}

ResidualReport boundary_residual(const ParaboloidSolution& sol, const EnthalpyModel& model, const FluxSpec& flux,
                                 int n_surface_samples, const Placement& place) {
    const SurfaceGeometry& g = sol.geometry;
    g.validate();
    const ReducedProfiles& prof = sol.profiles;
    ResidualReport r;
    const double t_local = 0.0;
    const double t_world = place.to_world({t_local, 0.0, 0.0, 0.0})[0];
    const Vec3 Q = flux.eval(t_world);

    auto guarded = [](auto&& fn) {
        try {
            const double v = fn();
            return std::isnan(v) ? kInf : std::abs(v);
        } catch (const RangeError&) {
            return kInf;
        } catch (const DomainError&) {
            return kInf;
        }
    };

    for (const Vec3& x : surface_points(g, Surface::Evaporation, t_local, n_surface_samples)) {
        const SurfaceFrame f = surface_frame(g, g.omega1, x, t_local, place);
        const double flux_res = guarded([&] {
            const double du = prof.u.derivative(f.omega);
            Vec3 grad_u;
            for (int k = 0; k < 3; ++k) grad_u[k] = du * f.grad_omega[k];
            return model.d1v * dot(grad_u, f.grad_S) + model.H_v * f.dS_dt + dot(Q, f.grad_S);
        });
        r.bc_evaporation_flux = std::max(r.bc_evaporation_flux, flux_res);
        r.bc_evaporation_dirichlet =
            std::max(r.bc_evaporation_dirichlet, guarded([&] { return prof.u.eval(f.omega) - model.u_v; }));
    }
    for (const Vec3& x : surface_points(g, Surface::Melting, t_local, n_surface_samples)) {
        const SurfaceFrame f = surface_frame(g, g.omega2, x, t_local, place);
        const double flux_res = guarded([&] {
            const double du = prof.u.derivative(f.omega);
            const double dv = prof.v.derivative(f.omega);
            const double gs = dot(f.grad_omega, f.grad_S);
            return model.d2m * dv * gs - model.d1m * du * gs + model.H_m * f.dS_dt;
        });
        r.bc_stefan_flux = std::max(r.bc_stefan_flux, flux_res);
        r.bc_stefan_dirichlet_u =
            std::max(r.bc_stefan_dirichlet_u, guarded([&] { return prof.u.eval(f.omega) - model.u_m; }));
        r.bc_stefan_dirichlet_v =
            std::max(r.bc_stefan_dirichlet_v, guarded([&] { return prof.v.eval(f.omega) - model.v_m; }));
    }
    r.farfield = guarded([&] { return prof.v.eval(prof.v.hi()) - model.v_inf; });
    return r;
}

ResidualReport audit(const ParaboloidSolution& sol, const EnthalpyModel& model, const FluxSpec& flux,
                     const AuditConfig& cfg) {
    cfg.validate();
    ResidualReport r = boundary_residual(sol, model, flux, cfg.surface_samples, cfg.placement);
    const PhaseNorms coarse = pde_norms(sol, model, cfg.h, cfg);
    PhaseNorms finest = coarse;
    r.grid_spacing = cfg.h;
    r.levels = cfg.levels;
    if (cfg.levels == 2) {
        finest = pde_norms(sol, model, 0.5 * cfg.h, cfg);
        r.grid_spacing = 0.5 * cfg.h;
        r.convergence_order_liquid = order_of(coarse.liquid, finest.liquid);
        r.convergence_order_solid = order_of(coarse.solid, finest.solid);
        const double a = *r.convergence_order_liquid, b = *r.convergence_order_solid;
        r.convergence_order = (std::isnan(a) || std::isnan(b)) ? std::nan("") : std::min(a, b);
    }
    r.pde_liquid_max = finest.liquid.max;
    r.pde_liquid_l2 = finest.liquid.l2();
    r.pde_solid_max = finest.solid.max;
    r.pde_solid_l2 = finest.solid.l2();
    r.samples_per_phase = finest.liquid.n;
    return r;
}

std::vector<std::string> audit_failures(const ResidualReport& r, const AuditThresholds& t) {
    std::vector<std::string> out;
    auto check = [&](const char* name, double v, double tol) {
        if (!(v <= tol)) out.push_back(fmt::format("{} = {:.3e} > {:.3e}", name, v, tol));
    };
    check("pde_liquid_max", r.pde_liquid_max, t.pde_max);
    check("pde_liquid_l2", r.pde_liquid_l2, t.pde_l2);
    check("pde_solid_max", r.pde_solid_max, t.pde_max);
    check("pde_solid_l2", r.pde_solid_l2, t.pde_l2);
    check("bc_evaporation_flux", r.bc_evaporation_flux, t.bc_flux);
    check("bc_evaporation_dirichlet", r.bc_evaporation_dirichlet, t.bc_dirichlet);
    check("bc_stefan_flux", r.bc_stefan_flux, t.bc_flux);
    check("bc_stefan_dirichlet_u", r.bc_stefan_dirichlet_u, t.bc_dirichlet);
    check("bc_stefan_dirichlet_v", r.bc_stefan_dirichlet_v, t.bc_dirichlet);
    check("farfield", r.farfield, t.farfield);
    if (r.convergence_order) {
        const double p = *r.convergence_order;
        if (!(p >= t.order_lo && p <= t.order_hi)) {
            out.push_back(fmt::format("convergence_order = {:.3f} outside [{}, {}]", p, t.order_lo, t.order_hi));
        }
    }
    return out;
}

}  // namespace stefan
