#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "oneway/model.hpp"

using namespace oneway;

TEST_CASE("model: validate accepts well-formed profiles") {
    CHECK_NOTHROW(validate(testutil::profile_a1()));
    CHECK_NOTHROW(validate(testutil::profile_a2()));
    CHECK_NOTHROW(validate(testutil::profile_five()));
    CHECK_NOTHROW(validate(PiecewiseWavenumber{{2.0}, {}}));
}

TEST_CASE("model: validate rejects malformed profiles with 1-based indices") {
    SUBCASE("nonpositive alpha") {
        PiecewiseWavenumber pw{{2.0, -1.0, 2.0}, {0.3, 0.6}};
        CHECK_THROWS_AS(validate(pw), NonPositiveAlpha);
        try {
            validate(pw);
        } catch (const NonPositiveAlpha& e) {
            CHECK(e.index == 2);
        }
    }
    SUBCASE("zero alpha") {
        CHECK_THROWS_AS(validate(PiecewiseWavenumber{{0.0}, {}}), NonPositiveAlpha);
    }
    SUBCASE("interface fraction outside (0, 1)") {
        PiecewiseWavenumber pw{{1.0, 3.0}, {1.2}};
        CHECK_THROWS_AS(validate(pw), InterfaceOutOfRange);
        try {
            validate(pw);
        } catch (const InterfaceOutOfRange& e) {
            CHECK(e.index == 1);
        }
        CHECK_THROWS_AS(validate(PiecewiseWavenumber{{1.0, 3.0}, {0.0}}),
                        InterfaceOutOfRange);
    }
    SUBCASE("non-monotone interfaces") {
        PiecewiseWavenumber pw{{1.0, 2.0, 3.0}, {0.5, 0.5}};
        CHECK_THROWS_AS(validate(pw), NonMonotoneInterfaces);
        try {
            validate(pw);
        } catch (const NonMonotoneInterfaces& e) {
            CHECK(e.index == 2);
        }
    }
    SUBCASE("interface count mismatch") {
        CHECK_THROWS_AS(validate(PiecewiseWavenumber{{1.0, 2.0}, {0.3, 0.6}}),
                        std::invalid_argument);
    }
}

TEST_CASE("model: alpha_at evaluates the piecewise profile") {
    const auto a1 = testutil::profile_a1();

    CHECK(alpha_at(a1, 0.5) == doctest::Approx(2.0));
    CHECK(alpha_at(a1, 0.0) == doctest::Approx(2.0));
    CHECK(alpha_at(a1, kPi) == doctest::Approx(2.0));
    CHECK(alpha_at(PiecewiseWavenumber{{5.0}, {}}, kPi) == doctest::Approx(5.0));

    SUBCASE("right-continuity at the interfaces") {
        CHECK(alpha_at(a1, kPi / 3.0) == doctest::Approx(1.0));
        CHECK(alpha_at(a1, 2.0 * kPi / 3.0) == doctest::Approx(2.0));
    }
    SUBCASE("constant within each piece") {
        for (int v = 0; v < a1.pieces(); ++v) {
            const double lo = a1.boundary(v), hi = a1.boundary(v + 1);
            const double ref = alpha_at(a1, 0.5 * (lo + hi));
            for (int i = 1; i < 40; ++i) {
                const double z = lo + (hi - lo) * i / 40.0;
                CHECK(alpha_at(a1, z) == ref);
            }
        }
    }
    SUBCASE("domain guard") {
        CHECK_THROWS_AS(alpha_at(a1, -0.1), DomainError);
        CHECK_THROWS_AS(alpha_at(a1, kPi + 1e-9), DomainError);
    }
}

TEST_CASE("model: piece boundaries and lookup") {
    const auto a2 = testutil::profile_a2();
    CHECK(a2.boundary(0) == 0.0);
    CHECK(a2.boundary(1) == doctest::Approx(kPi / 4.0));
    CHECK(a2.boundary(2) == doctest::Approx(3.0 * kPi / 4.0));
    CHECK(a2.boundary(3) == kPi);

    const auto s = a2.boundaries();
    REQUIRE(s.size() == 4);
    for (std::size_t k = 1; k < s.size(); ++k) CHECK(s[k] > s[k - 1]);

    CHECK(a2.piece_index(0.0) == 0);
    CHECK(a2.piece_index(kPi / 4.0) == 1);  // interface belongs to the right
    CHECK(a2.piece_index(kPi) == 2);
}

TEST_CASE("model: solver config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(validate(cfg));

    SUBCASE("secant tolerance") {
        cfg.secant_tol = 0.0;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SUBCASE("iteration cap") {
        cfg.secant_max_iter = 1;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SUBCASE("cutoff threshold range") {
        cfg.cutoff_threshold = 1.0;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SUBCASE("quadrature panel floor") {
        cfg.quadrature_panels = 4;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SUBCASE("truncation tolerance") {
        cfg.truncation_tol = -1.0;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SUBCASE("propagation sign") {
        cfg.propagation_sign = 0;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SUBCASE("expansion cap") {
        cfg.m_max = 0;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
}
