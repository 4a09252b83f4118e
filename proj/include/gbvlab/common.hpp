// common.hpp — shared scalar types, angle helpers, and the error taxonomy
// used across the library.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gbv {

using cplx = std::complex<double>;
using index_t = std::int64_t;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383280;

// Wrap into [0, 2*pi).
inline double wrap_two_pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

// Wrap into (-pi, pi].
inline double wrap_pm_pi(double x) {
    double r = std::remainder(x, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

// Circular distance between two angles, in [0, pi].
inline double circular_distance(double a, double b) {
    return std::abs(wrap_pm_pi(a - b));
}

// A map evaluated at a phase congruent to 0 mod 2*pi, where 1/(e^{-i eta}-1)
// has a pole.
class SingularityError : public std::domain_error {
public:
    explicit SingularityError(const std::string& what, double phase = 0.0)
        : std::domain_error(what), phase_(phase) {}
    double phase() const { return phase_; }

private:
    double phase_;
};

// Shift polynomials sharing a root within tolerance.
class CoprimalityError : public std::domain_error {
public:
    CoprimalityError(const std::string& what, cplx root)
        : std::domain_error(what), root_(root) {}
    cplx root() const { return root_; }

private:
    cplx root_;
};

// Recursion step left its admissible domain (radicand <= 0); reports the
// step index and the offending coefficient.
class StepDomainError : public std::domain_error {
public:
    StepDomainError(const std::string& what, index_t n, cplx alpha)
        : std::domain_error(what), n_(n), alpha_(alpha) {}
    index_t step() const { return n_; }
    cplx alpha() const { return alpha_; }

private:
    index_t n_;
    cplx alpha_;
};

// Step ratio numerator vanished exactly.
class DegenerateStepError : public std::domain_error {
public:
    DegenerateStepError(const std::string& what, index_t n, cplx alpha)
        : std::domain_error(what), n_(n), alpha_(alpha) {}
    index_t step() const { return n_; }
    cplx alpha() const { return alpha_; }

private:
    index_t n_;
    cplx alpha_;
};

// Quadrature could not reach the requested tolerance on the available grid;
// carries the best estimate achieved.
class ResolutionError : public std::runtime_error {
public:
    ResolutionError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

// Experiment configuration failed validation.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gbv
