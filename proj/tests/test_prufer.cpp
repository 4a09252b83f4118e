#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "gbvlab/prufer.hpp"

using namespace gbv;

namespace {

// Deterministic l2-decaying Verblunsky draw (values frozen at construction).
VerblunskyCoeffs random_verblunsky(std::uint64_t seed, index_t n_max) {
    auto values = std::make_shared<std::vector<cplx>>();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    for (index_t n = 0; n <= n_max; ++n) {
        const double mag = 0.5 * std::pow(static_cast<double>(n + 1), -0.6);
        values->push_back(std::polar(mag, ang(rng)));
    }
    return VerblunskyCoeffs(CoeffSequence(0, [values](index_t n) {
        return n < static_cast<index_t>(values->size()) ? (*values)[n] : cplx{0.0, 0.0};
    }));
}

JacobiCoeffs random_jacobi(std::uint64_t seed, index_t n_max) {
    auto a = std::make_shared<std::vector<double>>();
    auto b = std::make_shared<std::vector<double>>();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    a->push_back(1.0);
    b->push_back(0.0);
    for (index_t n = 1; n <= n_max; ++n) {
        const double decay = 0.3 * std::pow(static_cast<double>(n), -0.6);
        a->push_back(1.0 + decay * unit(rng));
        b->push_back(decay * unit(rng));
    }
    return JacobiCoeffs(
        [a](index_t n) { return n < static_cast<index_t>(a->size()) ? (*a)[n] : 1.0; },
        [b](index_t n) { return n < static_cast<index_t>(b->size()) ? (*b)[n] : 0.0; });
}

}  // namespace

TEST_CASE("alpha_eta: free Jacobi data gives zero") {
    CHECK(alpha_eta(1.0, 0.0, 1.7) == cplx{0.0, 0.0});
}

TEST_CASE("alpha_eta: direct complex arithmetic") {
    // a = 1, b_next = 1, eta = pi: e^{i pi/2} / (e^{i pi} - 1) = i / (-2)
    const cplx v = alpha_eta(1.0, 1.0, kPi);
    CHECK(v.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(v.imag() == doctest::Approx(-0.5));

    // a^2 = 2, b_next = 0, eta = pi: 1 / (-2)
    const cplx w = alpha_eta(std::sqrt(2.0), 0.0, kPi);
    CHECK(w.real() == doctest::Approx(-0.5));
    CHECK(std::abs(w.imag()) < 1e-15);
}

TEST_CASE("alpha_eta: singular eta rejected") {
    CHECK_THROWS_AS(alpha_eta(1.0, 1.0, 0.0), SingularityError);
    CHECK_THROWS_AS(alpha_eta(1.0, 1.0, kTwoPi), SingularityError);
    CHECK_THROWS_AS(alpha_eta(1.0, 1.0, 2.0 * kTwoPi + 1e-13), SingularityError);
}

TEST_CASE("unified_prufer_step: zero coefficient is a fixed point") {
    PruferState s{5, 0.3, 1.2};
    for (Model m : {Model::opuc, Model::oprl}) {
        const auto next = unified_prufer_step(s, cplx{0.0, 0.0}, 0.9, m);
        CHECK(next.n == 6);
        CHECK(next.log_r == 0.3);
        CHECK(next.theta == 1.2);
    }
}

TEST_CASE("unified_prufer_step: real coefficient at a resonant phase") {
    // circle model, alpha = 1/2, (n+1) eta + 2 theta = 0 mod 2pi:
    // amplitude ratio |1 - 1/2| / sqrt(1 - 1/4) = 1/sqrt(3)
    PruferState s{0, 0.0, 0.0};
    const auto next = unified_prufer_step(s, cplx{0.5, 0.0}, kTwoPi, Model::opuc);
    CHECK(next.log_r == doctest::Approx(std::log(1.0 / std::sqrt(3.0))).epsilon(1e-14));
}

TEST_CASE("unified_prufer_step: domain errors") {
    PruferState s{3, 0.0, 0.0};
    CHECK_THROWS_AS(unified_prufer_step(s, cplx{1.0, 0.0}, 1.0, Model::opuc),
                    StepDomainError);
    // line model radicand 1 - 2 Re alpha <= 0
    CHECK_THROWS_AS(unified_prufer_step(s, cplx{0.6, 0.1}, 1.0, Model::oprl),
                    StepDomainError);
    try {
        unified_prufer_step(s, cplx{0.6, 0.1}, 1.0, Model::oprl);
    } catch (const StepDomainError& e) {
        CHECK(e.step() == 3);
        CHECK(e.alpha() == cplx{0.6, 0.1});
    }
}

TEST_CASE("unified step: modulus and phase-ratio consistency at random samples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    std::uniform_real_distribution<double> mag(0.0, 0.45);
    for (int i = 0; i < 2000; ++i) {
        const cplx alpha = std::polar(mag(rng), ang(rng));
        const double eta = ang(rng), theta = ang(rng);
        const index_t n = static_cast<index_t>(rng() % 1000);
        const Model model = (rng() & 1) ? Model::oprl : Model::opuc;
        const double c = model == Model::opuc ? 0.0 : 1.0;
        const double omega = static_cast<double>(n + 1) * eta + 2.0 * theta;
        const double radicand =
            model == Model::opuc ? 1.0 - std::norm(alpha) : 1.0 - 2.0 * alpha.real();
        if (!(radicand > 0.0)) continue;

        const cplx num = 1.0 - c * alpha - std::conj(alpha) * std::polar(1.0, -omega);
        const cplx full_ratio = num / std::sqrt(radicand);
        // modulus form
        const double mod_form =
            std::abs(1.0 - alpha * std::polar(1.0, omega) - c * std::conj(alpha)) /
            std::sqrt(radicand);
        CHECK(std::abs(std::abs(full_ratio) - mod_form) <= 1e-12 * mod_form);
        // phase form is unimodular
        const cplx phase_ratio =
            (1.0 - std::conj(alpha) * std::polar(1.0, -omega) - c * alpha) /
            (1.0 - alpha * std::polar(1.0, omega) - c * std::conj(alpha));
        CHECK(std::abs(std::abs(phase_ratio) - 1.0) <= 1e-12);

        // the step realizes exactly these quantities
        PruferState s{n, 0.0, theta};
        const auto next = unified_prufer_step(s, alpha, eta, model);
        CHECK(next.log_r == doctest::Approx(std::log(mod_form)).epsilon(1e-12));
        CHECK(next.theta - s.theta > -kPi);
        CHECK(next.theta - s.theta <= kPi);
    }
}

TEST_CASE("line-model surrogate coefficient identities") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> au(0.5, 1.5), bu(-1.0, 1.0), eu(0.1, kTwoPi - 0.1);
    for (int i = 0; i < 200; ++i) {
        const double a = au(rng), b = bu(rng), eta = eu(rng);
        const cplx alpha = alpha_eta(a, b, eta);
        CHECK(2.0 * alpha.real() == doctest::Approx(1.0 - a * a).epsilon(1e-12));
        CHECK(2.0 * (alpha * std::polar(1.0, eta / 2.0)).real() ==
              doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("prufer_trajectory: free circle model stays at log r = 0") {
    VerblunskyCoeffs zero(CoeffSequence::zero(0));
    const auto traj = prufer_trajectory(zero, 1.234, 10000);
    REQUIRE(traj.size() == 10001);
    for (const auto& s : traj) {
        CHECK(s.log_r == 0.0);
        CHECK(s.theta == 0.0);
    }
}

TEST_CASE("prufer_trajectory: free line model stays at log r = 0") {
    const auto traj = prufer_trajectory(JacobiCoeffs::free_case(), 2.1, 10000);
    for (const auto& s : traj) CHECK(s.log_r == 0.0);
}

TEST_CASE("prufer_trajectory: single kicked coefficient matches the one-step value") {
    VerblunskyCoeffs kicked(CoeffSequence(
        0, [](index_t n) { return n == 0 ? cplx{0.5, 0.0} : cplx{0.0, 0.0}; }));
    const double eta = 0.77;
    const auto traj = prufer_trajectory(kicked, eta, 3);
    const double expected =
        std::log(std::abs(1.0 - 0.5 * std::polar(1.0, eta)) / std::sqrt(0.75));
    CHECK(traj[1].log_r == doctest::Approx(expected).epsilon(1e-14));
    CHECK(traj[2].log_r == traj[1].log_r);  // later coefficients vanish
}

TEST_CASE("prufer_trajectory: line model rejects band-edge eta") {
    CHECK_THROWS_AS(prufer_trajectory(JacobiCoeffs::free_case(), 0.0, 10), SingularityError);
    CHECK_THROWS_AS(prufer_trajectory(JacobiCoeffs::free_case(), kTwoPi, 10),
                    SingularityError);
}

TEST_CASE("direct_polynomial_prufer: free circle polynomials are pure rotations") {
    VerblunskyCoeffs zero(CoeffSequence::zero(0));
    for (index_t n : {0, 1, 7, 100, 1000}) {
        const auto d = direct_polynomial_prufer(zero, 0.9, n);
        CHECK(std::abs(d.log_r) < 1e-12);
        CHECK(std::abs(d.theta_mod) < 1e-12);
    }
}

TEST_CASE("direct_polynomial_prufer: free line model at the band center") {
    // eta = pi (x = 0): p_1(0) = 0, p_2(0) = -1, and r_2 = 1
    const auto pp = renormalized_jacobi_polys(JacobiCoeffs::free_case(), kPi, 2);
    const double scale = std::exp(pp.log_scale);
    CHECK(pp.p_n * scale == doctest::Approx(-1.0));
    CHECK(pp.p_prev * scale == doctest::Approx(0.0).epsilon(1e-15));
    const auto d = direct_polynomial_prufer(JacobiCoeffs::free_case(), kPi, 2);
    CHECK(d.log_r == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("direct_polynomial_prufer: guard range") {
    VerblunskyCoeffs zero(CoeffSequence::zero(0));
    CHECK_THROWS_AS(direct_polynomial_prufer(zero, 1.0, 1001), std::out_of_range);
}

TEST_CASE("coefficients outside the unit disk are rejected along every path") {
    VerblunskyCoeffs bad(CoeffSequence::constant(cplx{1.2, 0.0}, 0));
    CHECK_THROWS_AS(prufer_trajectory(bad, 1.0, 5), StepDomainError);
    CHECK_THROWS_AS(direct_polynomial_prufer(bad, 1.0, 5), StepDomainError);
}

TEST_CASE("direct polynomials agree with the step recursion at n = 150") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto v = random_verblunsky(seed, 200);
        const double eta = 0.5 + 0.37 * static_cast<double>(seed);
        const auto traj = prufer_trajectory(v, eta, 150);
        const auto direct = direct_polynomial_prufer(v, eta, 150);
        CHECK(std::abs(traj[150].log_r - direct.log_r) <=
              1e-8 * std::max(1.0, std::abs(direct.log_r)));
        CHECK(circular_distance(traj[150].theta, direct.theta_mod) < 1e-7);

        const auto j = random_jacobi(seed, 200);
        const auto jt = prufer_trajectory(j, eta, 150);
        const auto jd = direct_polynomial_prufer(j, eta, 150);
        CHECK(std::abs(jt[150].log_r - jd.log_r) <=
              1e-8 * std::max(1.0, std::abs(jd.log_r)));
    }
}

TEST_CASE("amplitude identity and sandwich from the line-model polynomials") {
    const auto j = random_jacobi(9, 120);
    for (double eta : {1.0, 2.0, kPi, 4.5}) {
        const double x = 2.0 * std::cos(eta / 2.0);
        for (index_t n : {5, 20, 100}) {
            const auto pp = renormalized_jacobi_polys(j, eta, n);
            const double a = j.a(n);
            // r_n^2 = a^2 p_n^2 - a x p_n p_{n-1} + p_{n-1}^2 (common scale divides out)
            const cplx val = cplx{a * pp.p_n, 0.0} -
                             cplx{pp.p_prev, 0.0} * std::polar(1.0, -eta / 2.0);
            const double r2 = std::norm(val);
            const double rhs =
                a * a * pp.p_n * pp.p_n - a * x * pp.p_n * pp.p_prev + pp.p_prev * pp.p_prev;
            CHECK(std::abs(r2 - rhs) <= 1e-10 * std::max(1.0, std::abs(r2)));

            // epsilon-sandwich: eps (a^2 p^2 + q^2) <= r^2 <= (2 - eps)(a^2 p^2 + q^2)
            const double eps = (2.0 - std::abs(x)) / 2.0;
            const double sum = a * a * pp.p_n * pp.p_n + pp.p_prev * pp.p_prev;
            CHECK(r2 >= eps * sum - 1e-12);
            CHECK(r2 <= (2.0 - eps) * sum + 1e-12);
        }
    }
}

TEST_CASE("trajectory CSV dump") {
    VerblunskyCoeffs zero(CoeffSequence::zero(0));
    const auto traj = prufer_trajectory(zero, 1.0, 10);
    std::ostringstream os;
    write_trajectory_csv(os, traj, 5);
    const std::string out = os.str();
    CHECK(out.substr(0, 14) == "n,log_r,theta\n");
    CHECK(out.find("0,0,0\n") != std::string::npos);
    CHECK(out.find("10,0,0\n") != std::string::npos);
}
