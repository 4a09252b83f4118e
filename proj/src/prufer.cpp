#include "gbvlab/prufer.hpp"

#include <cmath>
#include <cstdio>

namespace gbv {

cplx alpha_eta(double a_n, double b_next, double eta) {
    if (std::abs(wrap_pm_pi(eta)) < 1e-12)
        throw SingularityError("alpha_eta: eta within 1e-12 of 2*pi*Z", eta);
    const cplx denom = std::polar(1.0, eta) - cplx{1.0, 0.0};
    const cplx num = cplx{a_n * a_n - 1.0, 0.0} + std::polar(1.0, eta / 2.0) * b_next;
    return num / denom;
}

PruferState unified_prufer_step(const PruferState& state, cplx alpha_n, double eta,
                                Model model) {
    const double c = static_cast<double>(model_constant(model));
    // radicand (1 - c a)(1 - c conj(a)) - |a|^2: equals 1 - |a|^2 on the circle
    // and 1 - 2 Re a on the line; real and required positive.
    const double norm2 = std::norm(alpha_n);
    const double radicand =
        model == Model::opuc ? 1.0 - norm2 : 1.0 - 2.0 * alpha_n.real();
    if (!(radicand > 0.0)) {
        throw StepDomainError("unified_prufer_step: nonpositive radicand at n = " +
                                  std::to_string(state.n),
                              state.n, alpha_n);
    }
    const double omega = static_cast<double>(state.n + 1) * eta + 2.0 * state.theta;
    const cplx num =
        cplx{1.0, 0.0} - c * alpha_n - std::conj(alpha_n) * std::polar(1.0, -omega);
    const double mod = std::abs(num);
    if (mod == 0.0)
        throw DegenerateStepError("unified_prufer_step: vanishing step numerator at n = " +
                                      std::to_string(state.n),
                                  state.n, alpha_n);
    PruferState next;
    next.n = state.n + 1;
    next.log_r = state.log_r + std::log(mod) - 0.5 * std::log(radicand);
    // arg(num) lies in (-pi, pi] and equals half the argument of the phase
    // ratio num/conj(num) up to the unwrapping convention.
    next.theta = state.theta + std::arg(num);
    return next;
}

namespace {

template <typename AlphaFn>
void run_steps(AlphaFn&& alpha_of, double eta, Model model, index_t N,
               const std::function<void(const PruferState&)>& on_state) {
    PruferState state;  // r_0 = 1, theta_0 = 0
    on_state(state);
    for (index_t n = 0; n < N; ++n) {
        state = unified_prufer_step(state, alpha_of(n), eta, model);
        on_state(state);
    }
}

}  // namespace

void run_prufer(const Coefficients& coeffs, double eta, index_t N,
                const std::function<void(const PruferState&)>& on_state) {
    if (std::holds_alternative<VerblunskyCoeffs>(coeffs)) {
        const auto& v = std::get<VerblunskyCoeffs>(coeffs);
        run_steps([&](index_t n) { return v.alpha(n); }, eta, Model::opuc, N, on_state);
    } else {
        const auto& j = std::get<JacobiCoeffs>(coeffs);
        if (!(eta > 0.0 && eta < kTwoPi) || std::abs(wrap_pm_pi(eta)) < 1e-12)
            throw SingularityError("run_prufer: line model needs eta in (0, 2*pi)", eta);
        run_steps([&](index_t n) { return alpha_eta(j.a(n), j.b(n + 1), eta); }, eta,
                  Model::oprl, N, on_state);
    }
}

std::vector<PruferState> prufer_trajectory(const Coefficients& coeffs, double eta, index_t N) {
    std::vector<PruferState> out;
    out.reserve(static_cast<std::size_t>(N) + 1);
    run_prufer(coeffs, eta, N, [&](const PruferState& s) { out.push_back(s); });
    return out;
}

std::vector<PruferState> prufer_trajectory(const VerblunskyCoeffs& coeffs, double eta,
                                           index_t N) {
    return prufer_trajectory(Coefficients{coeffs}, eta, N);
}

std::vector<PruferState> prufer_trajectory(const JacobiCoeffs& coeffs, double eta, index_t N) {
    return prufer_trajectory(Coefficients{coeffs}, eta, N);
}

namespace {

constexpr index_t kDirectGuard = 1000;

void check_direct_guard(index_t n) {
    if (n < 0 || n > kDirectGuard)
        throw std::out_of_range(
            "direct_polynomial_prufer: n beyond the overflow guard (" +
            std::to_string(kDirectGuard) + "); use the step recursion instead");
}

}  // namespace

DirectPrufer direct_polynomial_prufer(const VerblunskyCoeffs& coeffs, double eta, index_t n) {
    check_direct_guard(n);
    // Szegő pair (phi_k, phi_k^*) on |z| = 1 with per-step renormalization;
    // at z = e^{i eta}: phi_n = r_n e^{i(n eta + theta_n)}, phi_n^* = r_n e^{-i theta_n}.
    const cplx z = std::polar(1.0, eta);
    cplx phi{1.0, 0.0}, phi_star{1.0, 0.0};
    double log_scale = 0.0;
    for (index_t k = 0; k < n; ++k) {
        const cplx a = coeffs.alpha(k);
        const double norm2 = std::norm(a);
        if (!(norm2 < 1.0))
            throw StepDomainError("direct_polynomial_prufer: |alpha| >= 1 at n = " +
                                      std::to_string(k),
                                  k, a);
        const double rho = std::sqrt(1.0 - norm2);
        const cplx phi_next = (z * phi - std::conj(a) * phi_star) / rho;
        const cplx star_next = (phi_star - a * z * phi) / rho;
        phi = phi_next;
        phi_star = star_next;
        const double s = std::max(std::abs(phi), std::abs(phi_star));
        if (s > 0.0) {
            phi /= s;
            phi_star /= s;
            log_scale += std::log(s);
        }
    }
    DirectPrufer out;
    out.log_r = log_scale + std::log(std::abs(phi));
    out.theta_mod = wrap_pm_pi(-std::arg(phi_star));
    return out;
}

ScaledPolyPair renormalized_jacobi_polys(const JacobiCoeffs& coeffs, double eta, index_t n) {
    if (std::abs(wrap_pm_pi(eta)) < 1e-12)
        throw SingularityError("renormalized_jacobi_polys: eta within 1e-12 of 2*pi*Z", eta);
    const double x = 2.0 * std::cos(eta / 2.0);
    double p_prev = 0.0;  // p_{-1}
    double p_cur = 1.0;   // p_0
    double log_scale = 0.0;
    for (index_t k = 0; k < n; ++k) {
        const double a_next = coeffs.a(k + 1);
        if (!(a_next > 0.0))
            throw StepDomainError("renormalized_jacobi_polys: a <= 0 at n = " +
                                      std::to_string(k + 1),
                                  k + 1, cplx{a_next, 0.0});
        const double p_next = ((x - coeffs.b(k + 1)) * p_cur - coeffs.a(k) * p_prev) / a_next;
        p_prev = p_cur;
        p_cur = p_next;
        const double s = std::max(std::abs(p_cur), std::abs(p_prev));
        if (s > 0.0) {
            p_cur /= s;
            p_prev /= s;
            log_scale += std::log(s);
        }
    }
    return {p_cur, p_prev, log_scale};
}

DirectPrufer direct_polynomial_prufer(const JacobiCoeffs& coeffs, double eta, index_t n) {
    check_direct_guard(n);
    const auto pp = renormalized_jacobi_polys(coeffs, eta, n);
    // r_n e^{i(n eta/2 + theta_n)} = a_n p_n - p_{n-1} e^{-i eta/2}
    const cplx val = cplx{coeffs.a(n) * pp.p_n, 0.0} -
                     cplx{pp.p_prev, 0.0} * std::polar(1.0, -eta / 2.0);
    DirectPrufer out;
    out.log_r = pp.log_scale + std::log(std::abs(val));
    out.theta_mod = wrap_pm_pi(std::arg(val) - static_cast<double>(n) * eta / 2.0);
    return out;
}

DirectPrufer direct_polynomial_prufer(const Coefficients& coeffs, double eta, index_t n) {
    if (std::holds_alternative<VerblunskyCoeffs>(coeffs))
        return direct_polynomial_prufer(std::get<VerblunskyCoeffs>(coeffs), eta, n);
    return direct_polynomial_prufer(std::get<JacobiCoeffs>(coeffs), eta, n);
}

void write_trajectory_csv(std::ostream& os, std::span<const PruferState> states,
                          index_t stride) {
    if (stride < 1) stride = 1;
    os << "n,log_r,theta\n";
    char buf[96];
    for (std::size_t i = 0; i < states.size(); i += static_cast<std::size_t>(stride)) {
        const auto& s = states[i];
        std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g\n",
                      static_cast<long long>(s.n), s.log_r, s.theta);
        os << buf;
    }
}

}  // namespace gbv
