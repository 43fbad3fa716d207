#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stefan/material.hpp"
#include "stefan/solver.hpp"
#include "stefan/symmetry.hpp"
#include "stefan/verify.hpp"

namespace stefan {

inline constexpr int kSchemaVersion = 1;

// A loaded problem file. Exactly one of the material and enthalpy sections
// is present in the file; `model` is the enthalpy model either way.
struct ProblemFile {
    std::optional<MaterialSpec> material;
    EnthalpyModel model;
    FluxSpec flux;
    GeometryKind geometry = GeometryKind::Paraboloid;
    double R = 1.0;
    RootSolveConfig solver;
    AuditThresholds tolerance;
    AuditConfig verify;
    std::string output_dir;  // empty when the file does not name one
};

// Throws ParseError, anchored to the offending line, for syntax errors,
// unknown or missing keys and values that break a nested invariant.
ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);

// Case-5 reduced problem built from a problem file. Throws UnsupportedCase
// for any other flux case.
ReducedStefanProblem reduced_problem(const ProblemFile& pf);

// Doubles are written with 17 significant digits; inf and nan as such.
std::string format_double(double x);
double parse_double(const std::string& s);

inline constexpr const char* kSolutionFile = "solution.yaml";
inline constexpr const char* kProfileFile = "profile.csv";
inline constexpr const char* kReportFile = "report.yaml";
inline constexpr const char* kClassificationFile = "classification.yaml";

std::string solution_yaml(const ParaboloidSolution& sol);
std::string profile_csv(const ParaboloidSolution& sol);
ParaboloidSolution parse_solution(const std::string& yaml, const std::string& csv);
void write_solution(const ParaboloidSolution& sol, const std::string& dir);
ParaboloidSolution read_solution(const std::string& dir);

std::string report_yaml(const ResidualReport& r, const AuditThresholds& t, const std::vector<std::string>& failures);
ResidualReport parse_report(const std::string& yaml);

std::string classification_yaml(const SymmetryReport& flux_case, int diffusivity_case);

std::string read_file(const std::string& path);
// Creates parent directories as needed.
void write_file(const std::string& path, const std::string& content);

}  // namespace stefan
