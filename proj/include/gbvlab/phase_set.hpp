// phase_set.hpp — finite sets of phases modulo 2*pi with tolerance-based
// deduplication, Minkowski sums, the critical sets A_p, and the exceptional
// spectral sets S they generate.

#pragma once

#include <vector>

#include "gbvlab/common.hpp"

namespace gbv {

enum class Model { opuc = 0, oprl = 1 };

inline int model_constant(Model m) { return m == Model::opuc ? 0 : 1; }

class PhaseSet {
public:
    PhaseSet() = default;
    explicit PhaseSet(const std::vector<double>& raw, double dedup_tol = 1e-9);

    // Stored phases, canonicalized to [0, 2*pi), sorted ascending, no two
    // within dedup_tol of each other (circularly).
    const std::vector<double>& phases() const { return phases_; }
    double dedup_tol() const { return tol_; }
    std::size_t size() const { return phases_.size(); }
    bool empty() const { return phases_.empty(); }
    bool contains(double phase) const;

    PhaseSet unite(const PhaseSet& other) const;
    PhaseSet negated() const;

    static PhaseSet singleton(double phase, double dedup_tol = 1e-9) {
        return PhaseSet(std::vector<double>{phase}, dedup_tol);
    }

private:
    std::vector<double> phases_;
    double tol_ = 1e-9;
};

PhaseSet minkowski_sum(const PhaseSet& a, const PhaseSet& b);
// A + (-B), elementwise differences mod 2*pi.
PhaseSet minkowski_diff(const PhaseSet& a, const PhaseSet& b);
// k-fold Minkowski sum; the empty sum (k = 0) is the additive identity {0}.
PhaseSet k_fold_sum(const PhaseSet& a, int k);

// A_1 = {} (unit circle) or {0} (real line); A_2 = A u A_1; beyond that
// q-fold(A) - (q-1)-fold(A) with p = 2q+1 on the circle, (p-1)-fold(A_2) on
// the line.  Even p >= 4 is rejected for the circle.
PhaseSet critical_set_Ap(const PhaseSet& A, int p, Model model);

enum class ExceptionalVariant { circle, line_plain, line_widened, schrodinger_pp };

struct ExceptionalPoint {
    double eta = 0.0;       // generating phase, canonical in [0, 2*pi)
    double point_re = 0.0;  // 2 cos(eta/2) on the line; Re e^{i eta} on the circle
    double point_im = 0.0;  // 0 on the line; Im e^{i eta} on the circle
    bool boundary = false;  // line model only: point outside the open interval (-2, 2)
};

struct ExceptionalSet {
    Model model = Model::opuc;
    ExceptionalVariant variant = ExceptionalVariant::circle;
    PhaseSet generating;  // the phase set whose image the points are
    std::vector<ExceptionalPoint> points;
};

// The finite exceptional set S outside of which the measure is purely a.c.:
//   circle:         S = { e^{i eta} : eta in q-fold(A) - (q-1)-fold(A) },  p = 2q+1 odd
//   line_plain:     S = { 2 cos(eta/2) : eta in (p-1)-fold(A u {0}) }
//   line_widened:   as line_plain with A replaced by (A+A) u A, for phase sets
//                   certified on {a_n - 1} rather than {a_n^2 - 1}
//   schrodinger_pp: S = { 2 cos(eta/2) : eta in U_{k=1}^{p-1} k-fold(A) },
//                   the candidate embedded point masses of the half-line
//                   Schrödinger operator
// Line-model points outside (-2, 2) are retained and flagged `boundary`.
ExceptionalSet exceptional_S(const PhaseSet& A, int p, Model model, ExceptionalVariant variant);

}  // namespace gbv
