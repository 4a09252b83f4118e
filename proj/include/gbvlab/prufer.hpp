// prufer.hpp — Prüfer variables (log r_n, theta_n) for orthogonal polynomials
// on the unit circle (OPUC) and on the real line (OPRL), evolved by the
// unified one-step recursion
//
//   r_{n+1}/r_n e^{i(theta_{n+1}-theta_n)}
//       = (1 - c a_n - conj(a_n) e^{-i[(n+1) eta + 2 theta_n]})
//         / sqrt((1 - c a_n)(1 - c conj(a_n)) - a_n conj(a_n)),
//
// with c = 0 for OPUC and c = 1 for OPRL.  Radial dynamics live entirely in
// the log domain; theta increments are unwrapped into (-pi, pi].

#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <variant>
#include <vector>

#include "gbvlab/common.hpp"
#include "gbvlab/phase_set.hpp"
#include "gbvlab/sequences.hpp"

namespace gbv {

struct PruferState {
    index_t n = 0;
    double log_r = 0.0;
    double theta = 0.0;
};

class VerblunskyCoeffs {
public:
    VerblunskyCoeffs() : seq_(CoeffSequence::zero(0)) {}
    explicit VerblunskyCoeffs(CoeffSequence seq) : seq_(std::move(seq)) {
        if (seq_.start_index() > 0)
            throw std::invalid_argument("VerblunskyCoeffs: sequence must start at index 0");
    }
    cplx alpha(index_t n) const { return seq_(n); }
    const CoeffSequence& sequence() const { return seq_; }

private:
    CoeffSequence seq_;
};

class JacobiCoeffs {
public:
    using RealFn = std::function<double(index_t)>;

    JacobiCoeffs() : JacobiCoeffs([](index_t) { return 1.0; }, [](index_t) { return 0.0; }) {}
    JacobiCoeffs(RealFn a, RealFn b) : a_(std::move(a)), b_(std::move(b)) {}

    static JacobiCoeffs free_case() { return JacobiCoeffs(); }
    // Discrete Schrödinger: a == 1, b_n = V_n.
    static JacobiCoeffs schrodinger(RealFn potential) {
        return JacobiCoeffs([](index_t) { return 1.0; }, std::move(potential));
    }

    // a_0 := 1 by convention so that r_0 = 1; the recursion never consumes a
    // genuine a_0.
    double a(index_t n) const { return n == 0 ? 1.0 : a_(n); }
    double b(index_t n) const { return b_(n); }

private:
    RealFn a_, b_;
};

using Coefficients = std::variant<VerblunskyCoeffs, JacobiCoeffs>;

inline Model model_of(const Coefficients& c) {
    return std::holds_alternative<VerblunskyCoeffs>(c) ? Model::opuc : Model::oprl;
}

// The OPRL surrogate coefficient (a_n^2 - 1 + e^{i eta/2} b_{n+1}) / (e^{i eta} - 1),
// which plays the role the Verblunsky coefficient plays on the circle.
// Singular for eta within 1e-12 of 2*pi*Z.
cplx alpha_eta(double a_n, double b_next, double eta);

// One step of the unified recursion.  Throws StepDomainError when the
// radicand (1 - c a - c conj(a)) + (c^2 - 1)|a|^2 is not positive and
// DegenerateStepError when the numerator vanishes.
PruferState unified_prufer_step(const PruferState& state, cplx alpha_n, double eta, Model model);

// States for n = 0..N.  For Jacobi data the surrogate alpha_n(eta) is formed
// internally at each step; eta must lie in (0, 2*pi) away from the endpoints.
std::vector<PruferState> prufer_trajectory(const VerblunskyCoeffs& coeffs, double eta, index_t N);
std::vector<PruferState> prufer_trajectory(const JacobiCoeffs& coeffs, double eta, index_t N);
std::vector<PruferState> prufer_trajectory(const Coefficients& coeffs, double eta, index_t N);

// Streaming form: on_state(state) is called for n = 0..N without storing the
// trajectory.  Step errors are annotated with the step index.
void run_prufer(const Coefficients& coeffs, double eta, index_t N,
                const std::function<void(const PruferState&)>& on_state);

struct DirectPrufer {
    double log_r = 0.0;
    double theta_mod = 0.0;  // in (-pi, pi]
};

// Prüfer data extracted from the orthogonal polynomials themselves, computed
// by the defining recursions with per-step renormalization.  Independent of
// the log-domain step recursion; guarded to n <= 1000.
DirectPrufer direct_polynomial_prufer(const VerblunskyCoeffs& coeffs, double eta, index_t n);
DirectPrufer direct_polynomial_prufer(const JacobiCoeffs& coeffs, double eta, index_t n);
DirectPrufer direct_polynomial_prufer(const Coefficients& coeffs, double eta, index_t n);

// Renormalized orthogonal-polynomial values at x = 2 cos(eta/2): p_n and
// p_{n-1} scaled by a common positive factor exp(log_scale).
struct ScaledPolyPair {
    double p_n = 0.0;
    double p_prev = 0.0;
    double log_scale = 0.0;
};
ScaledPolyPair renormalized_jacobi_polys(const JacobiCoeffs& coeffs, double eta, index_t n);

// CSV dump with header "n,log_r,theta", one row per recorded step.
void write_trajectory_csv(std::ostream& os, std::span<const PruferState> states,
                          index_t stride = 1);

}  // namespace gbv
