#include <doctest.h>

#include <cmath>
#include <limits>

#include "hyqmom/errors.hpp"
#include "hyqmom/hyqmom_closure.hpp"
#include "hyqmom/kinetic_state.hpp"
#include "test_util.hpp"

using namespace hyqmom;

TEST_CASE("primitive_to_conserved examples") {
    const Vec5 m = primitive_to_conserved({1, 0, 1, 0, 2});
    CHECK((m - Vec5(1, 0, 1, 0, 3)).norm() < 1e-15);
    // r = 2 + 8 + 6 = 16; M2 = 2 + 2, M3 = 2 + 6 + 4, M4 = 2 + 12 + 16 + 16
    const Vec5 q = primitive_to_conserved({2, 1, 2, 4, 6});
    CHECK((q - Vec5(2, 2, 4, 12, 46)).norm() < 1e-13);
}

TEST_CASE("primitive_to_conserved rejects singular or non-finite input") {
    CHECK_THROWS_AS(primitive_to_conserved({1, 0, 0, 0, 0}), InvalidStateError);
    CHECK_THROWS_AS(primitive_to_conserved({1, std::numeric_limits<double>::quiet_NaN(), 1, 0, 2}), InvalidStateError);
    CHECK_THROWS_AS(primitive_to_conserved({1, 0, 1, std::numeric_limits<double>::infinity(), 2}), InvalidStateError);
}

TEST_CASE("conserved_to_primitive examples") {
    const PrimitiveState a = conserved_to_primitive(Vec5(1, 0, 1, 0, 3));
    CHECK((a.as_vector() - Vec5(1, 0, 1, 0, 2)).norm() < 1e-15);
    const PrimitiveState b = conserved_to_primitive(Vec5(2, 2, 4, 12, 46));
    CHECK((b.as_vector() - Vec5(2, 1, 2, 4, 6)).norm() < 1e-13);
}

TEST_CASE("conserved_to_primitive errors carry the functional") {
    try {
        conserved_to_primitive(Vec5(-1, 0, 1, 0, 3));
        FAIL("expected throw");
    } catch (const RealizabilityError& e) {
        CHECK(e.functional() == "rho");
        CHECK(e.value() == -1.0);
    }
    try {
        conserved_to_primitive(Vec5(1, 1, 1, 0, 3));  // p = 1 - 1 = 0
        FAIL("expected throw");
    } catch (const RealizabilityError& e) {
        CHECK(e.functional() == "p");
    }
}

TEST_CASE("round trip over random realizable states") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto worst_over = [&](auto gen) {
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const PrimitiveState a = gen();
            const PrimitiveState b = conserved_to_primitive(primitive_to_conserved(a));
            // u and h can be near zero; measure against the natural scales
            const double c = std::sqrt(a.p / a.rho);
            const Vec5 scale(a.rho, c, a.p, a.p * c, a.p * a.p / a.rho);
            worst = std::max(worst, ((a.as_vector() - b.as_vector()).cwiseQuotient(scale)).cwiseAbs().maxCoeff());
        }
        return worst;
    };
    // well-conditioned states: |u| ~ thermal speed, k ~ p^2/rho
    const double moderate = worst_over([&] {
        PrimitiveState a;
        a.rho = 0.5 + 1.5 * unit(rng);
        a.p = 0.5 + 1.5 * unit(rng);
        const double c = std::sqrt(a.p / a.rho);
        a.u = (-1.0 + 2.0 * unit(rng)) * c;
        a.h = (-1.0 + 2.0 * unit(rng)) * a.p * c;
        a.k = (0.5 + 1.5 * unit(rng)) * a.p * a.p / a.rho;
        return a;
    });
    CHECK(moderate < 1e-13);
    // wide ranges lose digits to cancellation in k = r - p^2/rho - h^2/p
    CHECK(worst_over([&] { return testutil::random_state(rng); }) < 1e-9);
}

TEST_CASE("convex functionals") {
    ConvexFunctionals f = convex_functionals(Vec5(1, 0, 1, 0, 3));
    CHECK(f.c_rho == doctest::Approx(1.0));
    CHECK(f.c_p == doctest::Approx(1.0));
    CHECK(f.c_k == doctest::Approx(2.0));
    CHECK(std::abs(c_kurtosis(Vec5(1, 0, 1, 0, 1))) < 1e-15);
    f = convex_functionals(Vec5(2, 2, 4, 12, 46));
    CHECK(f.c_rho == doctest::Approx(2.0));
    CHECK(f.c_p == doctest::Approx(2.0));
    CHECK(f.c_k == doctest::Approx(6.0));
    CHECK_THROWS_AS(c_pressure(Vec5(0, 0, 1, 0, 3)), DegenerateStateError);
}

TEST_CASE("normalized moments and Hankel determinants") {
    NormalizedMoments nm = normalized_moments(Vec5(1, 0, 1, 0, 3));
    CHECK(nm.m3t == doctest::Approx(0.0));
    CHECK(nm.m4t == doctest::Approx(3.0));
    HankelDeterminants d = hankel_determinants(nm);
    CHECK(d.d0 == 1.0);
    CHECK(d.d1 == 1.0);
    CHECK(d.d2 == doctest::Approx(2.0));

    nm = normalized_moments(primitive_to_conserved({2, 1, 2, 4, 6}));
    CHECK(nm.m3t == doctest::Approx(2.0));
    CHECK(nm.m4t == doctest::Approx(8.0));
    CHECK(hankel_determinants(nm).d2 == doctest::Approx(3.0));
    CHECK(hankel_determinants({1.0, 2.0}).d2 == doctest::Approx(0.0));
    CHECK_THROWS_AS(normalized_moments(Vec5(1, 1, 1, 0, 3)), RealizabilityError);
}

TEST_CASE("d2 > 0 iff C_k > 0 on random states") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int agree = 0;
    const int n = 5000;
    for (int i = 0; i < n; ++i) {
        PrimitiveState a = testutil::random_state(rng);
        a.k = (unit(rng) - 0.3) * a.p * a.p / a.rho;  // both signs
        if (std::abs(a.k) < 1e-6 * a.p * a.p / a.rho) a.k = 0.1 * a.p * a.p / a.rho;
        const Vec5 q = primitive_to_conserved(a);
        const bool d2pos = hankel_determinants(normalized_moments(q)).d2 > 0.0;
        const bool ckpos = c_kurtosis(q) > 0.0;
        agree += (d2pos == ckpos);
    }
    CHECK(agree == n);
}

TEST_CASE("functionals stay positive under the Rusanov convex combination") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const PrimitiveState a = testutil::random_state(rng), b = testutil::random_state(rng);
        const Vec5 qa = primitive_to_conserved(a), qb = primitive_to_conserved(b);
        const double lam = std::max(max_wave_speed(a), max_wave_speed(b)) * (1.0 + unit(rng));
        // M+ = (lam q + f)/2lam and M- = (lam q - f)/2lam are realizable for lam >= max |lambda|
        const Vec5 mp = 0.5 * (qa + flux(qa) / lam), mm = 0.5 * (qb - flux(qb) / lam);
        // the update is a sum of such half-states, which must remain realizable
        const Vec5 mix = mp + mm;
        const ConvexFunctionals f = convex_functionals(mix);
        CHECK(f.c_rho > 0.0);
        CHECK(f.c_p > 0.0);
        CHECK(f.c_k > 0.0);
    }
}

TEST_CASE("conserved jacobian matches finite differences") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const PrimitiveState a = testutil::random_state(rng);
        const Mat5 J = conserved_jacobian(a);
        for (int j = 0; j < 5; ++j) {
            Vec5 ap = a.as_vector(), am = a.as_vector();
            const double hstep = 1e-6 * std::max(1.0, std::abs(ap[j]));
            ap[j] += hstep;
            am[j] -= hstep;
            const Vec5 col = (primitive_to_conserved(PrimitiveState::from_vector(ap)) -
                              primitive_to_conserved(PrimitiveState::from_vector(am))) /
                             (2 * hstep);
            CHECK((col - J.col(j)).norm() < 1e-5 * std::max(1.0, col.norm()));
        }
        CHECK(std::abs(J(0, 1)) == 0.0);  // lower triangular
    }
}
