// sequences.hpp — lazily evaluated coefficient sequences, rotated
// bounded-variation components, and their decompositions.
//
// A sequence beta has rotated bounded variation with phase phi if
//   sum_n |e^{i phi} beta_{n+1} - beta_n| < infinity,
// and generalized bounded variation with phase set A if it is a finite sum
// of such components with phases in A.  Sequences are represented as pure
// index -> value evaluators with an explicit start index; infinite objects
// are probed over finite windows.

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "gbvlab/common.hpp"

namespace gbv {

class CoeffSequence {
public:
    using Eval = std::function<cplx(index_t)>;

    CoeffSequence() : CoeffSequence(0, [](index_t) { return cplx{0.0, 0.0}; }) {}
    CoeffSequence(index_t start_index, Eval eval, std::optional<double> bound = {})
        : start_(start_index), eval_(std::move(eval)), bound_(bound) {}

    cplx operator()(index_t n) const {
        if (n < start_) {
            throw std::out_of_range("CoeffSequence: index " + std::to_string(n) +
                                    " below start index " + std::to_string(start_));
        }
        return eval_(n);
    }

    index_t start_index() const { return start_; }
    const std::optional<double>& bound() const { return bound_; }

    static CoeffSequence zero(index_t start = 0) {
        return CoeffSequence(start, [](index_t) { return cplx{0.0, 0.0}; }, 0.0);
    }
    static CoeffSequence constant(cplx value, index_t start = 0) {
        return CoeffSequence(start, [value](index_t) { return value; }, std::abs(value));
    }

    CoeffSequence conjugated() const {
        auto e = eval_;
        return CoeffSequence(start_, [e](index_t n) { return std::conj(e(n)); }, bound_);
    }
    CoeffSequence scaled(cplx factor) const {
        auto e = eval_;
        std::optional<double> b;
        if (bound_) b = *bound_ * std::abs(factor);
        return CoeffSequence(start_, [e, factor](index_t n) { return factor * e(n); }, b);
    }
    CoeffSequence plus(const CoeffSequence& other) const {
        auto e1 = eval_;
        auto e2 = other.eval_;
        index_t s1 = start_, s2 = other.start_;
        std::optional<double> b;
        if (bound_ && other.bound_) b = *bound_ + *other.bound_;
        // Below either start the missing summand counts as zero.
        return CoeffSequence(std::min(s1, s2),
                             [e1, e2, s1, s2](index_t n) {
                                 cplx v{0.0, 0.0};
                                 if (n >= s1) v += e1(n);
                                 if (n >= s2) v += e2(n);
                                 return v;
                             },
                             b);
    }
    CoeffSequence times(const CoeffSequence& other) const {
        auto e1 = eval_;
        auto e2 = other.eval_;
        std::optional<double> b;
        if (bound_ && other.bound_) b = *bound_ * *other.bound_;
        return CoeffSequence(std::max(start_, other.start_),
                             [e1, e2](index_t n) { return e1(n) * e2(n); }, b);
    }

private:
    index_t start_;
    Eval eval_;
    std::optional<double> bound_;
};

// One rotated bounded-variation summand.  A component is "certified" when a
// finite variation budget has been declared by its constructor (power-law
// constructors supply exact analytic budgets).
struct RotatedBVComponent {
    CoeffSequence seq;
    double phase = 0.0;
    std::optional<double> variation_budget;

    bool certified() const { return variation_budget.has_value(); }
};

// Sum representation alpha_n = sum_l beta_n^{(l)}.  `represented` evaluates
// the combined sequence directly (it must agree with the component sum at
// every index, up to roundoff).
struct GBVDecomposition {
    std::vector<RotatedBVComponent> components;
    CoeffSequence represented;

    std::vector<double> phases() const {
        std::vector<double> out;
        out.reserve(components.size());
        for (const auto& c : components) out.push_back(c.phase);
        return out;
    }
    CoeffSequence component_sum() const {
        CoeffSequence acc = CoeffSequence::zero(represented.start_index());
        for (const auto& c : components) acc = acc.plus(c.seq);
        return acc;
    }
};

// Partial rotated-variation sum  sum_{n=from}^{to-1} |e^{i phi} beta_{n+1} - beta_n|.
// Monotone nondecreasing in `to`.
double rotated_variation(const RotatedBVComponent& comp, index_t from, index_t to);

struct WvnTerm {
    double lambda = 0.0;  // coupling
    double phi = 0.0;     // frequency
    double alpha = 0.0;   // phase offset
    double gamma = 1.0;   // decay exponent, > 0
};

// V_n = sum_k lambda_k cos(n phi_k + alpha_k) / n^{gamma_k} + W_n for n >= n0,
// decomposed into rotated-BV components with phases {+phi_k, -phi_k} (each
// cosine split into two conjugate rotations) plus an optional l^1 tail with
// phase 0.
GBVDecomposition wigner_von_neumann(const std::vector<WvnTerm>& terms, index_t n0 = 1,
                                    std::optional<CoeffSequence> tail = {},
                                    std::optional<double> tail_l1_budget = {});

// beta_n = z e^{-i n phase} n^{-1/(p-1)} for n >= n0, zero below.  Certified:
// the modulation cancels in the variation sum, whose exact value is
// 2 |z| n0^{-1/(p-1)} (one onset jump plus a telescoping tail).
RotatedBVComponent power_law_rotated(cplx z, double phase, int p, index_t n0);

enum class GbvCheckKind { product, sum, conjugate, square_shift };

struct GbvCheckItem {
    std::string name;
    double phase = 0.0;
    std::vector<double> variation_at_cutoffs;  // partial sums at dyadic cutoffs
    double measured_variation = 0.0;           // value at the last cutoff
    double budget = 0.0;                       // analytic bound when available
    bool passed = false;
};

struct GbvCheckReport {
    GbvCheckKind kind;
    std::vector<GbvCheckItem> items;
    double max_recombination_error = 0.0;
    bool passed = false;
};

// Numeric certification of the closure rules for rotated/generalized bounded
// variation: products add phases, sums take phase unions, conjugation negates
// phases, and {a_n^2 - 1} decomposes with phases (A+A) u A given {a_n - 1}
// in GBV(A).  Failures are reported, never thrown.
GbvCheckReport gbv_algebra_check(GbvCheckKind kind,
                                 const std::vector<RotatedBVComponent>& inputs,
                                 index_t window_lo, index_t window_hi);

}  // namespace gbv
