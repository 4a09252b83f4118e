#include "gbvlab/phase_set.hpp"

#include <algorithm>
#include <cmath>

namespace gbv {

namespace {

std::vector<double> canonicalize(const std::vector<double>& raw, double tol) {
    std::vector<double> kept;
    kept.reserve(raw.size());
    for (double x : raw) {
        const double c = wrap_two_pi(x);
        bool duplicate = false;
        for (double k : kept) {
            if (circular_distance(c, k) < tol) {
                duplicate = true;  // merged to the first-seen representative
                break;
            }
        }
        if (!duplicate) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

}  // namespace

PhaseSet::PhaseSet(const std::vector<double>& raw, double dedup_tol)
    : phases_(canonicalize(raw, dedup_tol)), tol_(dedup_tol) {}

bool PhaseSet::contains(double phase) const {
    const double c = wrap_two_pi(phase);
    for (double k : phases_)
        if (circular_distance(c, k) < tol_) return true;
    return false;
}

PhaseSet PhaseSet::unite(const PhaseSet& other) const {
    std::vector<double> all = phases_;
    all.insert(all.end(), other.phases_.begin(), other.phases_.end());
    return PhaseSet(all, std::min(tol_, other.tol_));
}

PhaseSet PhaseSet::negated() const {
    std::vector<double> out;
    out.reserve(phases_.size());
    for (double p : phases_) out.push_back(-p);
    return PhaseSet(out, tol_);
}

PhaseSet minkowski_sum(const PhaseSet& a, const PhaseSet& b) {
    std::vector<double> sums;
    sums.reserve(a.size() * b.size());
    for (double x : a.phases())
        for (double y : b.phases()) sums.push_back(x + y);
    return PhaseSet(sums, std::min(a.dedup_tol(), b.dedup_tol()));
}

PhaseSet minkowski_diff(const PhaseSet& a, const PhaseSet& b) {
    return minkowski_sum(a, b.negated());
}

PhaseSet k_fold_sum(const PhaseSet& a, int k) {
    if (k < 0) throw std::invalid_argument("k_fold_sum: k must be >= 0");
    if (k == 0) return PhaseSet({0.0}, a.dedup_tol());
    PhaseSet acc = a;
    for (int i = 1; i < k; ++i) acc = minkowski_sum(acc, a);
    return acc;
}

PhaseSet critical_set_Ap(const PhaseSet& A, int p, Model model) {
    if (p < 1) throw std::invalid_argument("critical_set_Ap: p must be >= 1");
    const PhaseSet A1 = model == Model::opuc ? PhaseSet({}, A.dedup_tol())
                                             : PhaseSet({0.0}, A.dedup_tol());
    if (p == 1) return A1;
    if (p == 2) return A.unite(A1);
    if (model == Model::opuc) {
        if (p % 2 == 0)
            throw std::invalid_argument(
                "critical_set_Ap: the circle model requires odd p, got " + std::to_string(p));
        const int q = (p - 1) / 2;
        return minkowski_diff(k_fold_sum(A, q), k_fold_sum(A, q - 1));
    }
    return k_fold_sum(A.unite(A1), p - 1);
}

namespace {

ExceptionalPoint map_point(double eta, Model model) {
    ExceptionalPoint pt;
    pt.eta = eta;
    if (model == Model::opuc) {
        pt.point_re = std::cos(eta);
        pt.point_im = std::sin(eta);
        pt.boundary = false;
    } else {
        pt.point_re = 2.0 * std::cos(eta / 2.0);
        pt.point_im = 0.0;
        pt.boundary = std::abs(pt.point_re) >= 2.0 - 1e-12;
    }
    return pt;
}

}  // namespace

ExceptionalSet exceptional_S(const PhaseSet& A, int p, Model model,
                             ExceptionalVariant variant) {
    ExceptionalSet out;
    out.model = model;
    out.variant = variant;

    switch (variant) {
        case ExceptionalVariant::circle: {
            if (model != Model::opuc)
                throw std::invalid_argument("exceptional_S: circle variant needs circle model");
            if (p < 3 || p % 2 == 0)
                throw std::invalid_argument("exceptional_S: circle variant needs odd p >= 3");
            const int q = (p - 1) / 2;
            out.generating = minkowski_diff(k_fold_sum(A, q), k_fold_sum(A, q - 1));
            break;
        }
        case ExceptionalVariant::line_plain: {
            if (model != Model::oprl)
                throw std::invalid_argument("exceptional_S: line variant needs line model");
            if (p < 2) throw std::invalid_argument("exceptional_S: need p >= 2");
            const PhaseSet tilde = A.unite(PhaseSet({0.0}, A.dedup_tol()));
            out.generating = k_fold_sum(tilde, p - 1);
            break;
        }
        case ExceptionalVariant::line_widened: {
            if (model != Model::oprl)
                throw std::invalid_argument("exceptional_S: line variant needs line model");
            if (p < 2) throw std::invalid_argument("exceptional_S: need p >= 2");
            const PhaseSet widened = minkowski_sum(A, A).unite(A);
            const PhaseSet tilde = widened.unite(PhaseSet({0.0}, A.dedup_tol()));
            out.generating = k_fold_sum(tilde, p - 1);
            break;
        }
        case ExceptionalVariant::schrodinger_pp: {
            if (model != Model::oprl)
                throw std::invalid_argument("exceptional_S: point-mass variant needs line model");
            if (p < 2) throw std::invalid_argument("exceptional_S: need p >= 2");
            PhaseSet acc({}, A.dedup_tol());
            for (int k = 1; k <= p - 1; ++k) acc = acc.unite(k_fold_sum(A, k));
            out.generating = acc;
            break;
        }
    }

    for (double eta : out.generating.phases()) out.points.push_back(map_point(eta, model));
    return out;
}

}  // namespace gbv
