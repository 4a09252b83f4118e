// expansion.hpp — the coefficient algebra behind the log-amplitude expansion:
// exact binomial/rational tables (xi, Xi, omega, Omega), the Taylor
// polynomials P_{k,l} of the phase-ratio powers, the symmetric product of
// multivariate functions, and the recursively defined families f/g/G/H whose
// singular structure locates the possible pure points.

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gbvlab/common.hpp"

namespace gbv {

// Exact binomial coefficient with the combinatorial convention: zero unless
// 0 <= k <= n.  Throws for n large enough to overflow 64-bit arithmetic.
std::int64_t binom(int n, int k);

// Small exact rational, normalized with positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_zero() const { return num_ == 0; }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator-() const { return Rational(-num_, den_); }
    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }

private:
    std::int64_t num_, den_;
};

// chi(eta) = 1/(e^{-i eta} - 1) = -1/2 + (i/2) cot(eta/2).  The real part is
// exactly -1/2; poles at eta in 2*pi*Z (guarded at 1e-12).
cplx chi(double eta);

namespace detail {

// Taylor polynomial of (phase ratio)^k - 1 in powers of the coefficient:
//   P_{k,l}(a, e^{i w}) = sum_{u,v >= 0, 0 < u+v < l} (-1)^v C(k+u-1,u) C(k,v)
//                         (a e^{i w} + c conj(a))^u (conj(a) e^{-i w} + c a)^v.
// Templated on the real type so tests can run extended-precision oracles.
template <typename R>
std::complex<R> eval_P_impl(int k, int l, std::complex<R> alpha, R omega_phase, int c) {
    const std::complex<R> eiw(std::cos(omega_phase), std::sin(omega_phase));
    const std::complex<R> x = alpha * eiw + static_cast<R>(c) * std::conj(alpha);
    const std::complex<R> y = std::conj(alpha) * std::conj(eiw) + static_cast<R>(c) * alpha;
    std::complex<R> total(0, 0);
    std::complex<R> xu(1, 0);
    for (int u = 0; u < l; ++u) {
        std::complex<R> yv(1, 0);
        for (int v = 0; u + v < l; ++v) {
            if (u + v > 0) {
                const std::int64_t cu = binom(k + u - 1, u);
                const std::int64_t cv = binom(k, v);
                if (cu != 0 && cv != 0) {
                    const R sign = (v % 2 == 0) ? R(1) : R(-1);
                    total += sign * static_cast<R>(cu) * static_cast<R>(cv) * xu * yv;
                }
            }
            yv *= y;
        }
        xu *= x;
    }
    return total;
}

// (phase ratio)^k itself, for remainder checks; omega_phase is the full
// combined phase (n+1) eta + 2 theta.
template <typename R>
std::complex<R> phase_ratio_pow(int k, std::complex<R> alpha, R omega_phase, int c) {
    const std::complex<R> eiw(std::cos(omega_phase), std::sin(omega_phase));
    const std::complex<R> num =
        R(1) - std::conj(alpha) * std::conj(eiw) - static_cast<R>(c) * alpha;
    const std::complex<R> den = R(1) - alpha * eiw - static_cast<R>(c) * std::conj(alpha);
    return std::pow(num / den, k);
}

}  // namespace detail

// P_{k,l} evaluated in double precision; P_{1,1} is identically zero.
cplx eval_P(int k, int l, cplx alpha, double omega_phase, int c);

// Seed coefficients of the log-amplitude expansion, indexed by the powers of
// (alpha, conj(alpha), e^{i K [...]}, c).  For K > 0 the value is
// delta_{I-K} delta_{J-L} C(K+L,K)/(K+L); the K = 0 block is obtained by
// exact expansion of the radicand's log series, with the overall sign chosen
// coherently with the K > 0 block (see coeff_Xi scaling).
Rational coeff_xi(int I, int J, int K, int L);

// Rescaled seeds Xi = K xi: delta_{I-K} delta_{J-L} C(K+L-1, K-1).
std::int64_t coeff_Xi(int I, int J, int K, int L);

// Transition weights of the recursion (read off the Taylor expansion of the
// phase-ratio powers) and their rescaled version Omega with
// (K + gamma - alpha) Omega = K omega.
std::int64_t coeff_omega(int K, int alpha, int beta, int gamma, int delta);
std::int64_t coeff_Omega(int K, int alpha, int beta, int gamma, int delta);

// A function of (eta; x_1..x_I; y_1..y_J), symmetric separately in the x's
// and in the y's.
struct SymFn {
    int x_arity = 0;
    int y_arity = 0;
    std::function<cplx(double, std::span<const double>, std::span<const double>)> eval;

    cplx operator()(double eta, std::span<const double> xs, std::span<const double> ys) const;
};

SymFn sym_constant(cplx value, int x_arity = 0, int y_arity = 0);

// Symmetric product: arity (I+K, J+L), evaluated by enumerating which
// arguments feed each factor (binomially many splits) rather than summing
// over all permutations; the two agree for symmetric factors.
SymFn sym_product(const SymFn& p, const SymFn& q);

// Reference permutation-sum evaluation, for testing the split enumeration.
cplx sym_product_permutation_sum(const SymFn& p, const SymFn& q, double eta,
                                 std::span<const double> xs, std::span<const double> ys);

// Memoized evaluator for the recursive coefficient families:
//   f_{I,J,K,L} = xi_{I,J,K,L} + sum omega_{K,a,b,g,d} (.) g_{I-a-d, J-b-g, K+g-a, L-b-d}
//   g_{I,J,K,L} = chi(K eta - sum x + sum y) f_{I,J,K,L}
//   G = K g,  H = K (f + g).
// All families vanish outside I,J,K,L >= 0.  The recursion is well-founded
// on I+J (the all-zero transition is excluded).  Instances are not
// thread-safe; use one evaluator per worker.
class CoeffAlgebra {
public:
    explicit CoeffAlgebra(int max_order = 6) : max_order_(max_order) {}

    cplx f(int I, int J, int K, int L, double eta, std::span<const double> xs,
           std::span<const double> ys);
    cplx g(int I, int J, int K, int L, double eta, std::span<const double> xs,
           std::span<const double> ys);
    cplx G(int I, int J, int K, int L, double eta, std::span<const double> xs,
           std::span<const double> ys);
    cplx H(int I, int J, int K, int L, double eta, std::span<const double> xs,
           std::span<const double> ys);

    int max_order() const { return max_order_; }
    void clear_cache() { memo_.clear(); }

private:
    int max_order_;
    std::unordered_map<std::string, cplx> memo_;
};

struct IdentityOptions {
    int max_index = 12;       // exact integer identities scan 0..max_index
    int box_lo = -2;          // support/scaling scans
    int box_hi = 6;
    int random_points = 100;  // functional identities
    int max_order = 4;        // I+J cap for the splitting identity
    int max_k = 3;            // K cap for the splitting identity
    int max_l = 2;            // L cap for the splitting identity
    std::uint64_t seed = 0x5eedULL;
};

struct IdentityReport {
    std::string identity;
    std::string ranges;
    long instances = 0;
    double max_residual = 0.0;  // 0 for exact integer checks
    bool exact = false;
    bool passed = false;
};

// Known identities: kronecker-convolution, vandermonde, binomial-double-count,
// xi-rescaling, omega-rescaling, xi-convolution, omega-convolution,
// xi-omega-exchange, g-splitting, g-closed-instances, chi-product,
// chi-real-part, support-conventions.
IdentityReport verify_identity(const std::string& which, const IdentityOptions& opts = {});
std::vector<IdentityReport> verify_all_identities(const IdentityOptions& opts = {});

}  // namespace gbv
