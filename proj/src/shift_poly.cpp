#include "gbvlab/shift_poly.hpp"

#include <algorithm>
#include <cmath>

namespace gbv {

namespace {

constexpr double kZeroCoeff = 1e-14;

std::vector<cplx> trim(std::vector<cplx> c) {
    double scale = 0.0;
    for (const auto& v : c) scale = std::max(scale, std::abs(v));
    while (c.size() > 1 && std::abs(c.back()) <= kZeroCoeff * std::max(scale, 1.0))
        c.pop_back();
    return c;
}

// Long division: returns (quotient, remainder) with deg rem < deg divisor.
std::pair<std::vector<cplx>, std::vector<cplx>> divmod(std::vector<cplx> num,
                                                       const std::vector<cplx>& den) {
    const int dn = static_cast<int>(num.size()) - 1;
    const int dd = static_cast<int>(den.size()) - 1;
    if (dn < dd) return {{cplx{0.0, 0.0}}, std::move(num)};
    std::vector<cplx> quot(dn - dd + 1, cplx{0.0, 0.0});
    for (int k = dn - dd; k >= 0; --k) {
        const cplx q = num[k + dd] / den[dd];
        quot[k] = q;
        for (int j = 0; j <= dd; ++j) num[k + j] -= q * den[j];
    }
    num.resize(dd == 0 ? 1 : dd);
    if (num.empty()) num.push_back(cplx{0.0, 0.0});
    return {std::move(quot), trim(std::move(num))};
}

}  // namespace

ShiftPolynomial::ShiftPolynomial(std::vector<cplx> coeffs) : coeffs_(trim(std::move(coeffs))) {
    if (coeffs_.empty()) coeffs_.push_back(cplx{0.0, 0.0});
}

bool ShiftPolynomial::is_zero() const {
    return coeffs_.size() == 1 && std::abs(coeffs_[0]) <= kZeroCoeff;
}

ShiftPolynomial ShiftPolynomial::operator+(const ShiftPolynomial& o) const {
    std::vector<cplx> c(std::max(coeffs_.size(), o.coeffs_.size()), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i] += o.coeffs_[i];
    return ShiftPolynomial(std::move(c));
}

ShiftPolynomial ShiftPolynomial::operator-(const ShiftPolynomial& o) const {
    return *this + o.scaled(cplx{-1.0, 0.0});
}

ShiftPolynomial ShiftPolynomial::operator*(const ShiftPolynomial& o) const {
    std::vector<cplx> c(coeffs_.size() + o.coeffs_.size() - 1, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
    return ShiftPolynomial(std::move(c));
}

ShiftPolynomial ShiftPolynomial::scaled(cplx factor) const {
    std::vector<cplx> c = coeffs_;
    for (auto& v : c) v *= factor;
    return ShiftPolynomial(std::move(c));
}

ShiftPolynomial ShiftPolynomial::rotation_factor(double phi) {
    return ShiftPolynomial({cplx{-1.0, 0.0}, std::polar(1.0, phi)});
}

std::vector<cplx> ShiftPolynomial::roots() const {
    const int d = degree();
    if (d < 1 || is_zero()) return {};
    // Monic normalization, then Durand–Kerner from staggered initial guesses.
    std::vector<cplx> monic(coeffs_.begin(), coeffs_.end());
    const cplx lead = monic.back();
    for (auto& v : monic) v /= lead;
    double radius = 0.0;
    for (int i = 0; i < d; ++i) radius = std::max(radius, std::abs(monic[i]));
    radius = 1.0 + radius;

    auto eval = [&](cplx z) {
        cplx acc = monic[d];
        for (int i = d - 1; i >= 0; --i) acc = acc * z + monic[i];
        return acc;
    };

    std::vector<cplx> z(d);
    const cplx seed = cplx{0.4, 0.9};
    cplx w = seed;
    for (int i = 0; i < d; ++i) {
        z[i] = radius * w / std::abs(w);
        w *= seed;
        z[i] *= std::pow(0.9, i % 7);
    }
    for (int iter = 0; iter < 400; ++iter) {
        double shift = 0.0;
        for (int i = 0; i < d; ++i) {
            cplx denom{1.0, 0.0};
            for (int j = 0; j < d; ++j)
                if (j != i) denom *= z[i] - z[j];
            if (std::abs(denom) == 0.0) {
                z[i] += cplx{1e-8, 1e-8};
                continue;
            }
            const cplx delta = eval(z[i]) / denom;
            z[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-14 * radius) break;
    }
    return z;
}

CoeffSequence apply_shift_poly(const ShiftPolynomial& P, const CoeffSequence& z) {
    const auto coeffs = P.coeffs();
    return CoeffSequence(z.start_index(), [coeffs, z](index_t n) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            acc += coeffs[k] * z(n + static_cast<index_t>(k));
        return acc;
    });
}

std::pair<ShiftPolynomial, ShiftPolynomial> bezout_coprime(const ShiftPolynomial& Q,
                                                           const ShiftPolynomial& R,
                                                           double tol) {
    if (Q.is_zero() || R.is_zero())
        throw std::invalid_argument("bezout_coprime: zero polynomial");

    // Root-separation check; near-coincident roots are a genuine caller error.
    const auto rq = Q.roots();
    const auto rr = R.roots();
    for (const auto& a : rq) {
        for (const auto& b : rr) {
            if (std::abs(a - b) < tol)
                throw CoprimalityError("bezout_coprime: common root near (" +
                                           std::to_string(a.real()) + ", " +
                                           std::to_string(a.imag()) + "i)",
                                       a);
        }
    }

    if (Q.degree() == 0) return {ShiftPolynomial({cplx{1.0, 0.0} / Q.coeff(0)}), ShiftPolynomial()};
    if (R.degree() == 0) return {ShiftPolynomial(), ShiftPolynomial({cplx{1.0, 0.0} / R.coeff(0)})};

    // Extended Euclid over C[T].
    std::vector<cplx> r0 = Q.coeffs(), r1 = R.coeffs();
    ShiftPolynomial s0 = ShiftPolynomial::one(), s1;
    ShiftPolynomial t0, t1 = ShiftPolynomial::one();
    double scale = 0.0;
    for (const auto& v : r0) scale = std::max(scale, std::abs(v));
    for (const auto& v : r1) scale = std::max(scale, std::abs(v));

    while (true) {
        double r1norm = 0.0;
        for (const auto& v : r1) r1norm = std::max(r1norm, std::abs(v));
        if (r1norm <= 1e-12 * scale) break;
        auto [q, rem] = divmod(r0, r1);
        ShiftPolynomial qp(std::move(q));
        r0 = std::move(r1);
        r1 = std::move(rem);
        ShiftPolynomial s2 = s0 - qp * s1;
        ShiftPolynomial t2 = t0 - qp * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }

    ShiftPolynomial gcd(std::move(r0));
    if (gcd.degree() >= 1) {
        const auto roots = gcd.roots();
        const cplx root = roots.empty() ? cplx{0.0, 0.0} : roots.front();
        throw CoprimalityError("bezout_coprime: nonconstant gcd", root);
    }
    const cplx norm = gcd.coeff(0);
    return {s0.scaled(cplx{1.0, 0.0} / norm), t0.scaled(cplx{1.0, 0.0} / norm)};
}

ExtractionResult extract_component(const CoeffSequence& alpha,
                                   const std::vector<double>& phases, std::size_t target,
                                   index_t window_lo, index_t window_hi, double p,
                                   double coprimality_tol) {
    if (target >= phases.size())
        throw std::invalid_argument("extract_component: target out of range");
    for (std::size_t i = 0; i < phases.size(); ++i) {
        for (std::size_t j = i + 1; j < phases.size(); ++j) {
            if (circular_distance(phases[i], phases[j]) < coprimality_tol)
                throw CoprimalityError(
                    "extract_component: repeated phase " + std::to_string(phases[i]),
                    std::polar(1.0, -phases[i]));
        }
    }

    ShiftPolynomial Q = ShiftPolynomial::one();
    for (std::size_t l = 0; l < phases.size(); ++l)
        if (l != target) Q = Q * ShiftPolynomial::rotation_factor(phases[l]);

    ExtractionResult result;
    if (Q.degree() == 0) {
        result.filtered = alpha;
        result.reconstructed = alpha;
    } else {
        const ShiftPolynomial R = ShiftPolynomial::rotation_factor(phases[target]);
        auto [U, V] = bezout_coprime(Q, R, coprimality_tol);
        result.filtered = apply_shift_poly(Q, alpha);
        result.reconstructed = apply_shift_poly(U * Q, alpha);
    }

    double acc = 0.0;
    for (index_t n = window_lo; n <= window_hi; ++n)
        acc += std::pow(std::abs(result.reconstructed(n)), p);
    result.norm_estimate = std::pow(acc, 1.0 / p);
    return result;
}

}  // namespace gbv
