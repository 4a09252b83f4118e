// spectral.hpp — spectral diagnostics built on Prüfer trajectories:
// Bernstein–Szegő density approximants with interval-mass quadrature,
// uniform-convergence diagnostics of log r_n away from the exceptional set,
// and resonance scans (power-law drift of log r_n) at the exceptional points.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbvlab/phase_set.hpp"
#include "gbvlab/prufer.hpp"

namespace gbv {

// Density samples of the n-th approximant on an eta grid:
//   circle:  1 / (2 pi r_n^2(eta))
//   line:    1 / (pi (a_n^2 p_n^2(x) + p_{n-1}^2(x))),  x = 2 cos(eta/2).
struct MeasureProbe {
    Model model = Model::opuc;
    index_t n = 0;
    std::vector<double> grid;
    std::vector<double> density;
};

MeasureProbe density_probe(const Coefficients& coeffs, index_t n, std::span<const double> grid,
                           int threads = 1);

// Composite-Simpson quadrature of the probe density over [lo, hi] (endpoints
// snapped to the probe grid), refined dyadically until two successive
// refinements agree to 1e-8.  Throws ResolutionError (carrying the best
// estimate) when the grid is exhausted first.
double interval_mass(const MeasureProbe& probe, double lo, double hi);

enum class Verdict { converging, diverging_plus, diverging_minus, inconclusive };

std::string to_string(Verdict v);

struct ConvergenceReport {
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    std::vector<index_t> checkpoints;
    // sup over the grid of max |log r_m - log r_n| over checkpoints m, n
    // beyond each checkpoint (one entry per checkpoint).
    std::vector<double> sup_tail_osc;
    // Finite-grid safety margin: grid spacing times the observed eta-gradient
    // of the tail oscillation, estimated by finite differences.
    double grid_margin = 0.0;
    Verdict verdict = Verdict::inconclusive;
};

// Runs trajectories on a uniform grid over the interval and reports whether
// log r_n is settling (tail oscillation across the last two checkpoints under
// 1e-2), drifting to +/- infinity uniformly, or neither.  The interval must
// keep positive distance from the exceptional phases; this is the caller's
// responsibility.
ConvergenceReport convergence_diagnostic(const Coefficients& coeffs, double interval_lo,
                                         double interval_hi, int grid_points,
                                         std::span<const index_t> checkpoints, int threads = 1);

inline constexpr double kConvergenceOscThreshold = 1e-2;
inline constexpr double kResonantSlopeThreshold = 0.05;
inline constexpr double kControlSlopeThreshold = 5e-3;

struct ResonancePointReport {
    double eta = 0.0;
    double point = 0.0;  // spectral point: 2 cos(eta/2) on the line, eta itself on the circle
    bool is_candidate = false;
    bool skipped = false;
    std::string note;
    double slope = 0.0;     // least-squares slope of log r_n against log n over [N/10, N]
    double slope_ci = 0.0;  // 1.96 x standard error of the slope
};

struct ResonanceScan {
    index_t N = 0;
    std::vector<ResonancePointReport> points;
};

// For each candidate in S and each control offset, fits log r_n ~ s log n
// over n in [N/10, N].  Drift bounded away from zero is expected only at
// candidates; controls should sit near zero.  Candidates at trajectory
// singularities are skipped with a note.
ResonanceScan resonance_scan(const Coefficients& coeffs, const ExceptionalSet& candidates,
                             std::span<const double> control_offsets, index_t N,
                             int threads = 1);

}  // namespace gbv
