#include <random>

#include "doctest.h"
#include "oracle_support.hpp"
#include "qset/error.hpp"
#include "qset/extremality.hpp"
#include "qset/realization.hpp"

using namespace qset;
using namespace qtest;

namespace {

QubitRealization random_realization(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2 * PI, 2 * PI);
    return {u(rng), {u(rng), u(rng)}, {u(rng), u(rng)}};
}

}  // namespace

TEST_CASE("born_point examples") {
    CHECK(max_diff(born_point(tsirelson_realization()), tsirelson_behavior()) < 1e-15);
    CHECK(max_diff(born_point(example_r3()), r3_behavior()) < 1e-15);

    // Product state |00>: everything factorizes.
    QubitRealization prod{0, {0.4, 1.3}, {2.0, 0.1}};
    Behavior p = born_point(prod);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(p.corr[x][y] == doctest::Approx(p.margA[x] * p.margB[y]).epsilon(1e-14));
    CHECK(p.margA[0] == doctest::Approx(std::cos(0.4)));
}

TEST_CASE("born_point agrees with the matrix evaluation") {
    std::mt19937_64 rng(11);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        QubitRealization r = random_realization(rng);
        worst = std::max(worst, max_diff(born_point(r), born_point_matrix(r)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("born_point periodicity and range") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 2000; ++i) {
        QubitRealization r = random_realization(rng);
        Behavior p = born_point(r);
        CHECK(validate(p).empty());
        QubitRealization s = r;
        s.theta += PI;
        s.a[1] += 2 * PI;
        s.b[0] -= 2 * PI;
        CHECK(max_diff(born_point(s), p) < 1e-12);
        // theta -> -theta together with b -> -b.
        QubitRealization t = r;
        t.theta = -r.theta;
        t.b = {-r.b[0], -r.b[1]};
        CHECK(max_diff(born_point(t), p) < 1e-12);
    }
}

TEST_CASE("marginals stay inside the open interval away from product states") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 2000; ++i) {
        QubitRealization r = sample_realization(rng(), {});
        Behavior p = born_point(r);
        for (int k = 0; k < 2; ++k) {
            CHECK(std::abs(p.margA[k]) < 1);
            CHECK(std::abs(p.margB[k]) < 1);
        }
    }
}

TEST_CASE("apply_symmetry on parameters is equivariant") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
        QubitRealization r = random_realization(rng);
        Behavior p = born_point(r);
        for (const auto& g : symmetry_group())
            CHECK(max_diff(born_point(apply_symmetry(g, r)), apply_symmetry(g, p)) < 1e-12);
    }
}

TEST_CASE("in_canonical_range") {
    CHECK(in_canonical_range(example_r3()));
    CHECK(in_canonical_range(tsirelson_realization()));
    CHECK_FALSE(in_canonical_range({PI / 8, {PI / 2, 0.1}, {PI / 4, 3 * PI / 4}}));
    CHECK_FALSE(in_canonical_range({PI / 8, {0, PI / 2}, {3 * PI / 4, PI / 4}}));
    CHECK_FALSE(in_canonical_range({PI, {0, 1}, {1, 2}}));
    CHECK_FALSE(in_canonical_range({PI / 8, {0.5, 1}, {0.2, 2}}));
}

TEST_CASE("canonicalize examples") {
    CanonicalRealization c = canonicalize(example_r3());
    CHECK(c.element.is_identity());
    CHECK(c.realization.theta == doctest::Approx(PI / 8));

    // a0 > a1: only an input swap on Alice is needed.
    QubitRealization swapped{PI / 8, {PI / 2, 0}, {PI / 4, 3 * PI / 4}};
    CanonicalRealization s = canonicalize(swapped);
    SymmetryElement want;
    want.inputSwapA = true;
    CHECK(s.element == want);
    CHECK(s.realization.a[0] == doctest::Approx(0).epsilon(1e-14));
    CHECK(s.realization.a[1] == doctest::Approx(PI / 2));

    QubitRealization big{3 * PI / 5, {0.3, 2.0}, {0.9, 2.5}};
    CanonicalRealization q = canonicalize(big, ThetaSector::Quarter);
    CHECK(q.realization.theta > 0);
    CHECK(q.realization.theta <= PI / 4 + 1e-12);
    CHECK(in_canonical_range(q.realization));
    CHECK(max_diff(born_point(q.realization), apply_symmetry(q.element, born_point(big))) < 1e-12);
}

TEST_CASE("canonicalize properties") {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 3000; ++i) {
        QubitRealization r = random_realization(rng);
        if (std::abs(std::remainder(r.theta, PI / 2)) < 1e-3) continue;
        for (ThetaSector sec : {ThetaSector::Any, ThetaSector::Quarter}) {
            CanonicalRealization c = canonicalize(r, sec);
            INFO("i=" << i);
            CHECK(in_canonical_range(c.realization));
            CHECK(max_diff(born_point(c.realization), apply_symmetry(c.element, born_point(r))) < 1e-10);
            if (sec == ThetaSector::Quarter) CHECK(c.realization.theta <= PI / 4 + 1e-12);
            // Idempotent on its own output.
            CanonicalRealization d = canonicalize(c.realization, sec);
            CHECK(max_diff(born_point(d.realization), born_point(c.realization)) < 1e-10);
        }
    }
}

TEST_CASE("sample_realization") {
    QubitRealization r1 = sample_realization(42), r2 = sample_realization(42), r3 = sample_realization(43);
    CHECK(r1.theta == r2.theta);
    CHECK(r1.a == r2.a);
    CHECK(r1.b == r2.b);
    CHECK(r1.theta != r3.theta);

    SampleConstraints strict;
    strict.quarter = true;
    strict.nonlocal = true;
    strict.alternation = Alternation::Strict;
    SampleConstraints non;
    non.quarter = true;
    non.alternation = Alternation::Non;
    for (std::uint64_t s = 0; s < 300; ++s) {
        QubitRealization r = sample_realization(s, {});
        CHECK(in_canonical_range(r));
        CHECK(std::abs(std::remainder(r.theta, PI / 2)) >= THETA_MARGIN);

        QubitRealization q = sample_realization(s, strict);
        CHECK(in_canonical_range(q));
        CHECK(q.theta <= PI / 4);
        CHECK_FALSE(is_local(born_point(q)));
        CHECK(full_alternation_check(q, true).holds);

        QubitRealization n = sample_realization(s, non);
        CHECK_FALSE(full_alternation_check(n, false).holds);
    }

    SampleConstraints bad;
    bad.canonical = false;
    bad.alternation = Alternation::Full;
    CHECK_THROWS_AS(sample_realization(1, bad), Error);
}
