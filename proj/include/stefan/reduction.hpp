#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "stefan/interp.hpp"
#include "stefan/symmetry.hpp"

namespace stefan {

// A member of the Lie-Goursat list of subalgebras of
// <Pt, P1, P2, P3, J12> with K = P3 cos(phi) + Pt sin(phi) and
// L = P3 sin(phi) - Pt cos(phi). Parameters that the family does not use are
// left empty; parameters the family uses but that are left empty are
// evaluated at generic sample values.
struct Subalgebra {
    std::string id;
    int dimension = 0;
    std::vector<std::string> generators;
    std::optional<double> alpha, beta, phi;
    // Human-readable side condition from the admissible list ("" if none).
    std::string constraint;

    Subalgebra with(std::optional<double> alpha, std::optional<double> beta, std::optional<double> phi) const;
};

struct Admissibility {
    bool admissible = false;
    std::string reason;  // empty when admissible
};

// Admissible families for dimension 1-4, with their parameter constraints.
std::vector<Subalgebra> enumerate_subalgebras(int dimension);
// The unfiltered algebraic list for dimension 1-5.
std::vector<Subalgebra> unfiltered_subalgebras(int dimension);
std::optional<Subalgebra> find_subalgebra(const std::string& id);

// Both checks below are run; check_restrictions throws std::logic_error if
// they disagree.
Admissibility check_restrictions(const Subalgebra& s);
Admissibility check_restrictions_by_rule(const Subalgebra& s);
// Evaluates the generators as vector fields on (t, x1, x2, x3) at generic
// points: the invariant surfaces have dS/dt = 0 iff d/dt lies in their span,
// and q . n1 = 0 for q along x3 iff d/dx3 does.
Admissibility check_restrictions_by_samples(const Subalgebra& s);

struct Ansatz {
    enum class Kind { PlanarWave, HelicalRZ, ParaboloidOmega };
    Kind kind = Kind::PlanarWave;
    std::string invariant_vars;
    std::string wave_speed_symbol = "mu";
    double mu = 0.0;          // speed implied by the subalgebra angle
    double alpha_star = 0.0;  // PlanarWave: z = alpha_star x1 + x3 - mu t
    double beta = 0.0;        // HelicalRZ
};

const char* ansatz_name(Ansatz::Kind k);

// Throws UnsupportedSubalgebra for inadmissible families and for admissible
// ones whose reduction is not an ODE problem handled here.
Ansatz build_ansatz(const Subalgebra& s);

enum class GeometryKind { Paraboloid, Planar };

const char* geometry_name(GeometryKind g);

// Paraboloid: surfaces are the omega levels omega1 = R and omega2.
// Planar: surfaces are the planes z = omega1 (= 0) and z = omega2.
struct SurfaceGeometry {
    GeometryKind kind = GeometryKind::Paraboloid;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double mu = 0.0;

    void validate() const;
};

double omega_of_point(const std::array<double, 3>& x, double t, double mu);

enum class Surface { Evaporation, Melting };

// Points on surface k at time t; paraboloid samples follow a golden-angle
// spiral over r <= r_max (default 2 omega_k), planar samples a square of the
// same half-width.
std::vector<std::array<double, 3>> surface_points(const SurfaceGeometry& geom, Surface which, double t,
                                                  int n_samples, double r_max = 0.0);

// Rigid placement of a solution in space-time: world = (t + t0, rot(angle) x + origin)
// with the rotation convention of T5.
struct Placement {
    double t0 = 0.0;
    std::array<double, 3> origin{0.0, 0.0, 0.0};
    double angle = 0.0;

    SpaceTimePoint to_world(const SpaceTimePoint& local) const;
    SpaceTimePoint to_local(const SpaceTimePoint& world) const;
    std::array<double, 3> vector_to_world(const std::array<double, 3>& v) const;
    std::array<double, 3> vector_to_local(const std::array<double, 3>& v) const;
    // Composes a group element of a constant-flux problem (T0, T1, T2, T3, T5)
    // after this placement; other generators throw UnsupportedCase.
    Placement transported(const GroupElement& g) const;
};

struct ReducedProfiles {
    MonotoneCubic u;  // on [omega1, omega2]
    MonotoneCubic v;  // on [omega2, omega_max]
    double v_inf = 0.0;
};

enum class FieldPhase { Gas, Liquid, Interface, Solid };
const char* field_phase_name(FieldPhase p);

struct FieldSample {
    FieldPhase phase = FieldPhase::Gas;
    double omega = 0.0;
    double u = 0.0;  // liquid and interface
    double v = 0.0;  // solid and interface
    bool far_field = false;  // omega beyond the solid table, v = v_inf substituted
};

// Invariant coordinate of a world point: omega (paraboloid) or z (planar).
double invariant_of(const SurfaceGeometry& geom, const Placement& place, const SpaceTimePoint& world);

FieldSample reconstruct_field(const ReducedProfiles& prof, const SurfaceGeometry& geom, const SpaceTimePoint& query,
                              const Placement& place = {});

}  // namespace stefan
