#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gbvlab/phase_set.hpp"

using namespace gbv;

namespace {

bool set_matches(const PhaseSet& got, std::vector<double> expected, double tol = 1e-9) {
    for (auto& e : expected) e = wrap_two_pi(e);
    std::sort(expected.begin(), expected.end());
    if (got.size() != expected.size()) return false;
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (circular_distance(got.phases()[i], expected[i]) > tol) return false;
    return true;
}

}  // namespace

TEST_CASE("PhaseSet: canonicalization into [0, 2pi) and dedup") {
    PhaseSet s({-1.0, 1.0, 1.0 + 1e-12, kTwoPi + 1.0, 0.0});
    CHECK(set_matches(s, {0.0, 1.0, kTwoPi - 1.0}));
    CHECK(s.contains(1.0));
    CHECK(s.contains(1.0 - 5e-10));
    CHECK(!s.contains(2.0));

    SUBCASE("idempotent") {
        PhaseSet again(s.phases(), s.dedup_tol());
        CHECK(set_matches(again, {0.0, 1.0, kTwoPi - 1.0}));
    }

    SUBCASE("wraparound dedup near 0 and 2pi") {
        PhaseSet w({1e-12, kTwoPi - 1e-12});
        CHECK(w.size() == 1);
    }
}

TEST_CASE("minkowski_sum: additive identity") {
    PhaseSet zero({0.0});
    PhaseSet b({0.3, 2.2, 5.5});
    CHECK(set_matches(minkowski_sum(zero, b), {0.3, 2.2, 5.5}));
}

TEST_CASE("k_fold_sum: two-fold of {1, -1}") {
    PhaseSet a({1.0, -1.0});
    CHECK(set_matches(k_fold_sum(a, 2), {2.0, 0.0, kTwoPi - 2.0}));
}

TEST_CASE("k_fold_sum: empty-sum convention") {
    PhaseSet a({0.4, 1.9});
    CHECK(set_matches(k_fold_sum(a, 0), {0.0}));
    CHECK_THROWS_AS(k_fold_sum(a, -1), std::invalid_argument);
}

TEST_CASE("minkowski_sum: commutative and associative within tolerance") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.0, kTwoPi);
    for (int trial = 0; trial < 10; ++trial) {
        PhaseSet a({dist(rng), dist(rng)});
        PhaseSet b({dist(rng), dist(rng)});
        PhaseSet c({dist(rng)});
        auto ab = minkowski_sum(a, b);
        auto ba = minkowski_sum(b, a);
        REQUIRE(ab.size() == ba.size());
        for (std::size_t i = 0; i < ab.size(); ++i)
            CHECK(circular_distance(ab.phases()[i], ba.phases()[i]) < 1e-9);
        auto left = minkowski_sum(minkowski_sum(a, b), c);
        auto right = minkowski_sum(a, minkowski_sum(b, c));
        REQUIRE(left.size() == right.size());
        for (std::size_t i = 0; i < left.size(); ++i)
            CHECK(circular_distance(left.phases()[i], right.phases()[i]) < 1e-9);
    }
}

TEST_CASE("k_fold_sum: monotone under set inclusion and bounded cardinality") {
    PhaseSet a({0.7, 3.1});
    PhaseSet b({0.7, 3.1, 4.9});
    for (int k = 0; k <= 4; ++k) {
        auto ka = k_fold_sum(a, k);
        auto kb = k_fold_sum(b, k);
        for (double p : ka.phases()) CHECK(kb.contains(p));
        CHECK(ka.size() <= std::pow(static_cast<double>(a.size()), k) + 0.5);
    }
}

TEST_CASE("critical_set_Ap: circle model") {
    PhaseSet a({0.9});
    SUBCASE("p = 3 reduces to A by the empty-sum convention") {
        CHECK(set_matches(critical_set_Ap(a, 3, Model::opuc), {0.9}));
    }
    SUBCASE("p = 1 is empty; p = 2 equals A") {
        CHECK(critical_set_Ap(a, 1, Model::opuc).empty());
        CHECK(set_matches(critical_set_Ap(a, 2, Model::opuc), {0.9}));
    }
    SUBCASE("even p >= 4 is rejected") {
        CHECK_THROWS_AS(critical_set_Ap(a, 4, Model::opuc), std::invalid_argument);
    }
    SUBCASE("p = 5 on a symmetric pair") {
        PhaseSet sym({1.0, -1.0});
        // 2-fold minus 1-fold: {2,0,-2} - {1,-1}
        CHECK(set_matches(critical_set_Ap(sym, 5, Model::opuc), {1.0, -1.0, 3.0, -3.0}));
    }
}

TEST_CASE("critical_set_Ap: line model") {
    PhaseSet sym({1.0, -1.0});
    SUBCASE("p = 1 is {0}") {
        CHECK(set_matches(critical_set_Ap(sym, 1, Model::oprl), {0.0}));
    }
    SUBCASE("p = 2 adjoins zero") {
        CHECK(set_matches(critical_set_Ap(sym, 2, Model::oprl), {0.0, 1.0, -1.0}));
    }
    SUBCASE("p = 3 is the two-fold sum of A u {0}") {
        CHECK(set_matches(critical_set_Ap(sym, 3, Model::oprl),
                          {2.0, 0.0, -2.0, 1.0, -1.0}));
    }
}

TEST_CASE("critical_set_Ap contains all i-fold minus j-fold combinations (line model)") {
    // requires A = -A; exhaustive over i >= 1, j >= 0, i + j < p
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> dist(0.1, kPi - 0.1);
    for (int trial = 0; trial < 5; ++trial) {
        const double u = dist(rng), v = dist(rng);
        PhaseSet A({u, -u, v, -v});
        for (int p = 2; p <= 5; ++p) {
            auto Ap = critical_set_Ap(A, p, Model::oprl);
            for (int i = 1; i + 0 < p; ++i) {
                for (int j = 0; i + j < p; ++j) {
                    auto diff = minkowski_diff(k_fold_sum(A, i), k_fold_sum(A, j));
                    for (double ph : diff.phases()) CHECK(Ap.contains(ph));
                }
            }
        }
    }
}

TEST_CASE("exceptional_S: circle, p = 3, singleton A") {
    auto S = exceptional_S(PhaseSet({0.9}), 3, Model::opuc, ExceptionalVariant::circle);
    REQUIRE(S.points.size() == 1);
    CHECK(S.points[0].eta == doctest::Approx(0.9));
    CHECK(S.points[0].point_re == doctest::Approx(std::cos(0.9)));
    CHECK(S.points[0].point_im == doctest::Approx(std::sin(0.9)));
    CHECK(!S.points[0].boundary);
}

TEST_CASE("exceptional_S: line case 1, p = 2, symmetric pair") {
    const double phi = 1.1;
    auto S = exceptional_S(PhaseSet({phi, -phi}), 2, Model::oprl,
                           ExceptionalVariant::line_plain);
    // generating phases {0, phi, 2pi - phi} -> points {2, 2cos(phi/2), -2cos(phi/2)}
    REQUIRE(S.points.size() == 3);
    std::vector<double> pts;
    int boundary_count = 0;
    for (const auto& p : S.points) {
        pts.push_back(p.point_re);
        boundary_count += p.boundary ? 1 : 0;
    }
    std::sort(pts.begin(), pts.end());
    CHECK(pts[0] == doctest::Approx(-2.0 * std::cos(phi / 2.0)));
    CHECK(pts[1] == doctest::Approx(2.0 * std::cos(phi / 2.0)));
    CHECK(pts[2] == doctest::Approx(2.0));
    CHECK(boundary_count == 1);  // only the eta = 0 image sits on the boundary
}

TEST_CASE("exceptional_S: line case 2 widens the generating set") {
    const double phi = 1.1;
    auto S1 = exceptional_S(PhaseSet({phi, -phi}), 2, Model::oprl,
                            ExceptionalVariant::line_plain);
    auto S2 = exceptional_S(PhaseSet({phi, -phi}), 2, Model::oprl,
                            ExceptionalVariant::line_widened);
    CHECK(S2.points.size() >= S1.points.size());
    for (double ph : S1.generating.phases()) CHECK(S2.generating.contains(ph));
    CHECK(S2.generating.contains(2.0 * phi));
}

TEST_CASE("exceptional_S: point-mass candidates, p = 2") {
    const double phi = 1.1;
    auto S = exceptional_S(PhaseSet({phi, -phi}), 2, Model::oprl,
                           ExceptionalVariant::schrodinger_pp);
    // k = 1 only; the canonical phases phi and 2pi - phi map to +/- 2cos(phi/2)
    REQUIRE(S.points.size() == 2);
    std::vector<double> pts{S.points[0].point_re, S.points[1].point_re};
    std::sort(pts.begin(), pts.end());
    CHECK(pts[0] == doctest::Approx(-2.0 * std::cos(phi / 2.0)));
    CHECK(pts[1] == doctest::Approx(2.0 * std::cos(phi / 2.0)));
    CHECK(!S.points[0].boundary);
    CHECK(!S.points[1].boundary);
}

TEST_CASE("exceptional_S: variant/model mismatches are rejected") {
    PhaseSet a({1.0});
    CHECK_THROWS_AS(exceptional_S(a, 3, Model::oprl, ExceptionalVariant::circle),
                    std::invalid_argument);
    CHECK_THROWS_AS(exceptional_S(a, 2, Model::opuc, ExceptionalVariant::line_plain),
                    std::invalid_argument);
    CHECK_THROWS_AS(exceptional_S(a, 4, Model::opuc, ExceptionalVariant::circle),
                    std::invalid_argument);
    CHECK_THROWS_AS(exceptional_S(a, 1, Model::oprl, ExceptionalVariant::line_plain),
                    std::invalid_argument);
}
