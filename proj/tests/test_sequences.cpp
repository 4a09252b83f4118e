#include <doctest.h>

#include <cmath>
#include <complex>

#include "gbvlab/sequences.hpp"

using namespace gbv;

namespace {

CoeffSequence modulated_inverse(double phi, index_t start = 1) {
    // beta_n = e^{-i n phi} / n
    return CoeffSequence(start, [phi](index_t n) {
        return std::polar(1.0 / static_cast<double>(n), -phi * static_cast<double>(n));
    });
}

}  // namespace

TEST_CASE("rotated_variation: exact rotation has zero variation") {
    const double phi = 0.9;
    RotatedBVComponent comp{
        CoeffSequence(0, [phi](index_t n) { return std::polar(0.7, -phi * static_cast<double>(n)); }),
        phi,
        {}};
    CHECK(rotated_variation(comp, 0, 40) < 1e-13);
}

TEST_CASE("rotated_variation: telescoping modulus") {
    // beta_n = e^{-i n phi}/n over n = 1..10 telescopes to 1 - 1/10
    RotatedBVComponent comp{modulated_inverse(1.3), 1.3, {}};
    CHECK(rotated_variation(comp, 1, 10) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("rotated_variation: alternating signs, phase zero") {
    RotatedBVComponent comp{
        CoeffSequence(0, [](index_t n) { return cplx{n % 2 == 0 ? 1.0 : -1.0, 0.0}; }), 0.0, {}};
    CHECK(rotated_variation(comp, 0, 4) == 8.0);  // four steps of size 2, exact

    SUBCASE("telescoping is exact on integer-valued data") {
        CHECK(rotated_variation(comp, 0, 2) + rotated_variation(comp, 2, 7) ==
              rotated_variation(comp, 0, 7));
    }
}

TEST_CASE("rotated_variation: generic telescoping within a few ulp") {
    RotatedBVComponent comp{modulated_inverse(0.7), 0.7, {}};
    const double a = rotated_variation(comp, 1, 57);
    const double b = rotated_variation(comp, 57, 301);
    const double whole = rotated_variation(comp, 1, 301);
    CHECK(std::abs((a + b) - whole) <= 8.0 * std::abs(whole) * 1e-16 + 1e-18);
}

TEST_CASE("rotated_variation: monotone in the window end") {
    RotatedBVComponent comp{modulated_inverse(2.1), 2.1, {}};
    double prev = 0.0;
    for (index_t to = 1; to <= 64; to *= 2) {
        const double v = rotated_variation(comp, 1, to);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("rotated_variation: window below start index is rejected") {
    RotatedBVComponent comp{modulated_inverse(0.5, 3), 0.5, {}};
    CHECK_THROWS_AS(rotated_variation(comp, 1, 10), std::out_of_range);
    CHECK_THROWS_AS(rotated_variation(comp, 5, 4), std::out_of_range);
}

TEST_CASE("boundedness bound from the variation budget") {
    auto comp = power_law_rotated(cplx{0.8, 0.3}, 1.7, 3, 4);
    REQUIRE(comp.certified());
    const double cap = std::abs(comp.seq(0)) + *comp.variation_budget;
    for (index_t n = 0; n <= 2000; n += 7) CHECK(std::abs(comp.seq(n)) <= cap + 1e-12);
}

TEST_CASE("wigner_von_neumann: direct cosine values") {
    auto decomp = wigner_von_neumann({{1.0, kPi / 2.0, 0.0, 1.0}});
    CHECK(std::abs(decomp.represented(1)) < 1e-15);          // cos(pi/2)/1
    CHECK(decomp.represented(2).real() == doctest::Approx(-0.5));  // cos(pi)/2
    CHECK(decomp.represented(2).imag() == 0.0);
}

TEST_CASE("wigner_von_neumann: empty sum is the zero sequence") {
    auto decomp = wigner_von_neumann({});
    for (index_t n = 1; n < 20; ++n) CHECK(decomp.represented(n) == cplx{0.0, 0.0});
    CHECK(decomp.components.empty());
}

TEST_CASE("wigner_von_neumann: two conjugate components per cosine") {
    auto decomp = wigner_von_neumann({{2.0, 1.0, 0.0, 0.5}});
    REQUIRE(decomp.components.size() == 2);
    CHECK(decomp.components[0].phase == 1.0);
    CHECK(decomp.components[1].phase == -1.0);
    for (index_t n = 1; n <= 100; ++n) {
        const double expect = 1.0 / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(decomp.components[0].seq(n)) == doctest::Approx(expect));
        // the components recombine to the cosine values
        const cplx sum = decomp.components[0].seq(n) + decomp.components[1].seq(n);
        CHECK(std::abs(sum - decomp.represented(n)) < 1e-15);
    }
}

TEST_CASE("wigner_von_neumann: l1 tail joins as a phase-0 component") {
    auto tail = CoeffSequence(1, [](index_t n) {
        return cplx{std::pow(0.5, static_cast<double>(n)), 0.0};
    });
    auto decomp = wigner_von_neumann({{1.0, 0.7, 0.1, 1.0}}, 1, tail, 1.0);
    REQUIRE(decomp.components.size() == 3);
    CHECK(decomp.components[2].phase == 0.0);
    CHECK(*decomp.components[2].variation_budget == 2.0);
    const cplx direct = decomp.represented(3);
    const cplx sum =
        decomp.components[0].seq(3) + decomp.components[1].seq(3) + decomp.components[2].seq(3);
    CHECK(std::abs(direct - sum) < 1e-15);
}

TEST_CASE("wigner_von_neumann: parameter validation") {
    CHECK_THROWS_AS(wigner_von_neumann({{1.0, 1.0, 0.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(wigner_von_neumann({{1.0, 1.0, 0.0, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(wigner_von_neumann({}, 0), std::invalid_argument);
}

TEST_CASE("power_law_rotated: p=2 gives 1/n") {
    auto comp = power_law_rotated(cplx{1.0, 0.0}, 0.0, 2, 1);
    for (index_t n = 1; n <= 32; ++n)
        CHECK(comp.seq(n) == cplx{1.0 / static_cast<double>(n), 0.0});
}

TEST_CASE("power_law_rotated: zero below the onset, exact modulus above") {
    auto comp = power_law_rotated(cplx{0.0, 1.0}, kPi, 3, 5);
    CHECK(comp.seq(4) == cplx{0.0, 0.0});
    CHECK(std::abs(comp.seq(9)) == doctest::Approx(1.0 / 3.0));  // 9^{-1/2}
}

TEST_CASE("power_law_rotated: partial variation sums stay under the exact budget") {
    auto comp = power_law_rotated(cplx{1.2, -0.4}, 2.3, 2, 3);
    REQUIRE(comp.certified());
    const double budget = *comp.variation_budget;
    CHECK(budget == doctest::Approx(2.0 * std::abs(cplx{1.2, -0.4}) / 3.0));
    double prev = 0.0;
    for (index_t to : {10, 100, 1000, 10000}) {
        const double v = rotated_variation(comp, 0, to);
        CHECK(v <= budget * (1.0 + 1e-12));
        CHECK(v >= prev);
        prev = v;
    }
    // Cauchy tails
    CHECK(rotated_variation(comp, 1000, 10000) < 2e-3);
}

TEST_CASE("power_law_rotated: parameter validation") {
    CHECK_THROWS_AS(power_law_rotated(cplx{1.0, 0.0}, 0.0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(power_law_rotated(cplx{1.0, 0.0}, 0.0, 2, 0), std::invalid_argument);
}

TEST_CASE("gbv_algebra_check: constant-modulus rotations compose to zero variation") {
    const double phi = 0.8, psi = 1.9;
    RotatedBVComponent beta{
        CoeffSequence(1, [phi](index_t n) { return std::polar(1.0, -phi * static_cast<double>(n)); }),
        phi,
        {}};
    RotatedBVComponent gamma{
        CoeffSequence(1, [psi](index_t n) { return std::polar(1.0, -psi * static_cast<double>(n)); }),
        psi,
        {}};
    auto rep = gbv_algebra_check(GbvCheckKind::product, {beta, gamma}, 1, 256);
    REQUIRE(rep.items.size() == 1);
    CHECK(rep.items[0].phase == doctest::Approx(phi + psi));
    CHECK(rep.items[0].measured_variation < 1e-10);  // pure roundoff accumulation
    CHECK(rep.passed);
}

TEST_CASE("gbv_algebra_check: product of decaying rotations has finite variation at the sum phase") {
    RotatedBVComponent beta{modulated_inverse(1.0), 1.0, {}};
    RotatedBVComponent gamma{modulated_inverse(2.0), 2.0, {}};
    auto rep = gbv_algebra_check(GbvCheckKind::product, {beta, gamma}, 1, 4096);
    REQUIRE(rep.items.size() == 1);
    CHECK(rep.items[0].phase == doctest::Approx(3.0));
    CHECK(rep.passed);
    // dyadic increments decay: the last doubling adds less than the first
    const auto& v = rep.items[0].variation_at_cutoffs;
    REQUIRE(v.size() >= 3);
    CHECK(v.back() - v[v.size() - 2] < v[1] - v[0]);
}

TEST_CASE("gbv_algebra_check: conjugation negates the phase, same variation") {
    auto comp = power_law_rotated(cplx{0.5, 0.5}, 1.1, 2, 1);
    auto rep = gbv_algebra_check(GbvCheckKind::conjugate, {comp}, 1, 512);
    REQUIRE(rep.items.size() == 1);
    CHECK(rep.items[0].phase == doctest::Approx(-1.1));
    CHECK(rep.passed);
}

TEST_CASE("gbv_algebra_check: sums decompose with the union phase set") {
    auto c1 = power_law_rotated(cplx{1.0, 0.0}, 0.4, 2, 1);
    auto c2 = power_law_rotated(cplx{0.0, 1.0}, 2.9, 2, 1);
    auto rep = gbv_algebra_check(GbvCheckKind::sum, {c1, c2}, 1, 512);
    CHECK(rep.items.size() == 2);
    CHECK(rep.passed);
    CHECK(rep.max_recombination_error < 1e-12);
}

TEST_CASE("gbv_algebra_check: square-shift decomposition for a_n - 1 = cos(n)/n") {
    auto decomp = wigner_von_neumann({{1.0, 1.0, 0.0, 1.0}});
    auto rep = gbv_algebra_check(GbvCheckKind::square_shift, decomp.components, 1, 2048);
    CHECK(rep.passed);
    CHECK(rep.max_recombination_error < 1e-12);
    // phases of the constructed terms lie in (A+A) u A with A = {1, -1}
    for (const auto& item : rep.items) {
        const double c = wrap_two_pi(item.phase);
        bool ok = false;
        for (double target : {2.0, 0.0, -2.0, 1.0, -1.0})
            ok = ok || circular_distance(c, wrap_two_pi(target)) < 1e-12;
        CHECK(ok);
    }
}

TEST_CASE("coefficient sequences are deterministic") {
    auto decomp = wigner_von_neumann({{1.3, 0.9, 0.2, 0.8}});
    for (index_t n = 1; n < 50; n += 3) {
        const cplx a = decomp.represented(n);
        const cplx b = decomp.represented(n);
        CHECK(a.real() == b.real());
        CHECK(a.imag() == b.imag());
    }
}
