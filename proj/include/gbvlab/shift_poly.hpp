// shift_poly.hpp — polynomials in the index-shift operator T, with
// (P(T) z)_n = sum_k c_k z_{n+k}, plus the Bezout machinery used to isolate a
// single rotated bounded-variation component out of a finite sum.

#pragma once

#include <utility>
#include <vector>

#include "gbvlab/common.hpp"
#include "gbvlab/sequences.hpp"

namespace gbv {

class ShiftPolynomial {
public:
    ShiftPolynomial() : coeffs_{cplx{0.0, 0.0}} {}
    explicit ShiftPolynomial(std::vector<cplx> coeffs);

    // Coefficients c_0..c_d of sum_k c_k T^k.  Always trimmed so that the top
    // coefficient is nonzero (except for the zero polynomial, degree 0).
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    cplx coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : cplx{0.0, 0.0};
    }
    bool is_zero() const;

    ShiftPolynomial operator+(const ShiftPolynomial& o) const;
    ShiftPolynomial operator-(const ShiftPolynomial& o) const;
    ShiftPolynomial operator*(const ShiftPolynomial& o) const;
    ShiftPolynomial scaled(cplx factor) const;

    // All complex roots (Durand–Kerner iteration; degree 0 has none).
    std::vector<cplx> roots() const;

    static ShiftPolynomial one() { return ShiftPolynomial({cplx{1.0, 0.0}}); }
    static ShiftPolynomial shift() { return ShiftPolynomial({{0.0, 0.0}, {1.0, 0.0}}); }
    // e^{i phi} T - 1, the operator annihilating exact rotations with phase phi.
    static ShiftPolynomial rotation_factor(double phi);

private:
    std::vector<cplx> coeffs_;
};

// (P(T) z)_n = sum_k c_k z_{n+k}; linear in both arguments.
CoeffSequence apply_shift_poly(const ShiftPolynomial& P, const CoeffSequence& z);

// U, V with U Q + V R = 1, deg U < deg R, deg V < deg Q.  Throws
// CoprimalityError (reporting a shared root) if Q and R have roots closer
// than `tol`.
std::pair<ShiftPolynomial, ShiftPolynomial> bezout_coprime(const ShiftPolynomial& Q,
                                                           const ShiftPolynomial& R,
                                                           double tol = 1e-9);

struct ExtractionResult {
    CoeffSequence filtered;       // Q(T) alpha, with Q = prod_{l != target} (e^{i phi_l} T - 1)
    CoeffSequence reconstructed;  // U(T) Q(T) alpha ~ target component modulo l^1
    double norm_estimate = 0.0;   // windowed l^p norm of the reconstruction
};

// Isolates the component with phases[target] out of a sequence known to be a
// sum of rotated-BV components with the given (mutually distinct) phases.
// Recovery is only defined modulo l^1, so callers should compare against
// ground truth with a residual budget rather than expect exact equality.
ExtractionResult extract_component(const CoeffSequence& alpha,
                                   const std::vector<double>& phases, std::size_t target,
                                   index_t window_lo, index_t window_hi, double p = 2.0,
                                   double coprimality_tol = 1e-9);

}  // namespace gbv
