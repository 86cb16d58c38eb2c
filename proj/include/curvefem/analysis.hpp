#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "curvefem/assembly.hpp"

namespace cfem {

/// Errors of one refinement level, all measured on the physical domain
/// through the lift (never on the computational domain directly).
struct ErrorRecord {
  double h = 0.0;
  int n_dofs = 0;
  double e_L2_bulk = 0.0;
  double e_H1semi_bulk = 0.0;
  double e_L2_surf = 0.0;
  double e_H1semi_surf = 0.0;

  double norm(int which) const {
    const double v[4] = {e_L2_bulk, e_H1semi_bulk, e_L2_surf, e_H1semi_surf};
    return v[which];
  }
};

/// Four lifted error norms of a discrete solution against the exact one.
ErrorRecord lifted_errors(const FESpace& space, const std::vector<double>& coeffs,
                          const ProblemSpec& spec, const LiftMap& lift);

/// Pairwise estimated orders log(e_i/e_{i+1}) / log(h_i/h_{i+1}). Requires
/// at least two records and strictly decreasing h; errors below 1e-14 make
/// the ratio meaningless and throw ZeroError.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs);

/// Least-squares slope of log(e) against log(h).
double eoc_slope(const std::vector<double>& errors, const std::vector<double>& hs);

struct StudyReport {
  std::string problem;
  int r = 1;
  int k = 1;
  LiftVariant lift = LiftVariant::Modified;
  std::vector<ErrorRecord> records; // ordered by decreasing h

  struct EocSummary {
    bool valid = false;
    std::vector<double> pairwise;
    double slope = 0.0;
  };
  std::array<EocSummary, 4> eoc; // L2 bulk, H1 bulk, L2 surf, H1 surf

  /// Order between the two finest levels (how convergence tables are read).
  double finest_order(int which) const;
};

inline constexpr const char* kStudyCsvHeader = "h,ndofs,eL2_bulk,eH1_bulk,eL2_surf,eH1_surf";

void write_study_csv(const StudyReport& report, std::ostream& out);

/// Markdown tables mirroring the benchmark layout: rows are mesh degrees,
/// columns P1..P4, one table per norm pair (surface pair, and the bulk pair
/// for the bulk problem).
std::string eoc_markdown_tables(const std::string& problem,
                                const std::vector<StudyReport>& reports);

/// Runs a convergence study: builds the refinement family, elevates to
/// degree r, assembles, solves and evaluates the lifted errors per level.
/// problem is "ventcel-disk" or "sphere-laplace". Deterministic.
StudyReport run_study(const std::string& problem, int r, int k, int levels,
                      LiftVariant lift = LiftVariant::Modified);

/// Geometric error probe: per level the defect of the plain measure of the
/// computational domain and of the lifted measure (which is exact up to
/// quadrature) against the analytic measure.
struct GeometricErrorReport {
  std::string domain;
  int r = 1;
  std::vector<double> hs;
  std::vector<double> plain_gap;  // | |Omega_h^(r)| - |Omega| |
  std::vector<double> lifted_gap; // | integral of J_G - |Omega| |
  std::vector<double> plain_eoc;
  bool superconvergent = false; // plain-measure EOC >= 3.5 on the finest pair
};

GeometricErrorReport geometric_error_study(const std::string& domain_name, int r, int levels);

} // namespace cfem
