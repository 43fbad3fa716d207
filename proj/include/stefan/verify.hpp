#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stefan/material.hpp"
#include "stefan/reduction.hpp"
#include "stefan/solver.hpp"
#include "stefan/symmetry.hpp"

namespace stefan {

// Residuals of the full (t, x) problem. Evaluations that leave a profile
// table count as infinite residuals.
struct ResidualReport {
    double pde_liquid_max = 0.0, pde_liquid_l2 = 0.0;
    double pde_solid_max = 0.0, pde_solid_l2 = 0.0;
    double bc_evaporation_flux = 0.0, bc_evaporation_dirichlet = 0.0;
    double bc_stefan_flux = 0.0, bc_stefan_dirichlet_u = 0.0, bc_stefan_dirichlet_v = 0.0;
    double farfield = 0.0;
    double grid_spacing = 0.0;  // finest level
    int levels = 0;
    int samples_per_phase = 0;
    // Present only when two levels ran: log2 of the L2 ratio per phase, and
    // the smaller of the two.
    std::optional<double> convergence_order, convergence_order_liquid, convergence_order_solid;
};

struct AuditThresholds {
    double pde_max = 2e-2;
    double pde_l2 = 5e-3;
    double bc_flux = 1e-7;
    double bc_dirichlet = 1e-9;
    double farfield = 1e-6;
    double order_lo = 1.7, order_hi = 2.3;
};

struct AuditConfig {
    double h = 0.02;   // coarsest spacing in space and time
    int levels = 1;    // 1 or 2 (h and h/2)
    int n_omega = 10, n_r = 10, n_az = 10;
    int surface_samples = 64;
    Placement placement;

    void validate() const;
};

// Width in invariant units of the band kept clear of both surfaces.
double exclusion_band(double h, double mu);

// PDE residuals at spacing h on the interior sample set defined by cfg.h.
// Throws GridError when a phase has no room outside the exclusion band or
// a stencil straddles a surface.
ResidualReport pde_residual(const ParaboloidSolution& sol, const EnthalpyModel& model, double h,
                            const AuditConfig& cfg = {});

// Surface and far-field residuals, with gradients from the profiles by the
// chain rule through grad omega.
ResidualReport boundary_residual(const ParaboloidSolution& sol, const EnthalpyModel& model, const FluxSpec& flux,
                                 int n_surface_samples, const Placement& place = {});

ResidualReport audit(const ParaboloidSolution& sol, const EnthalpyModel& model, const FluxSpec& flux,
                     const AuditConfig& cfg = {});

// Names of the report fields above their thresholds (empty when passing).
std::vector<std::string> audit_failures(const ResidualReport& r, const AuditThresholds& t);

}  // namespace stefan
