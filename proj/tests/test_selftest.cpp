#include <random>

#include "doctest.h"
#include "oracle_support.hpp"
#include "qset/error.hpp"
#include "qset/extremality.hpp"
#include "qset/selftest.hpp"

using namespace qset;
using namespace qtest;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Precondition;
}

double angle_diff(const QubitRealization& r, const QubitRealization& s) {
    double m = std::abs(r.theta - s.theta);
    for (int k = 0; k < 2; ++k) {
        m = std::max(m, std::abs(std::remainder(r.a[k] - s.a[k], 2 * PI)));
        m = std::max(m, std::abs(std::remainder(r.b[k] - s.b[k], 2 * PI)));
    }
    return m;
}

}  // namespace

TEST_CASE("Example R3 is recovered") {
    Reconstruction rec = reconstruct_realization(r3_behavior());
    CHECK(angle_diff(rec.realization, example_r3()) < 1e-9);
    CHECK(rec.element.is_identity());
    CHECK(rec.roundtrip_error < 1e-12);
    CHECK(rec.trace.theta == doctest::Approx(PI / 8));
    CHECK(rec.trace.bgauge == doctest::Approx(PI / 2));
}

TEST_CASE("Tsirelson point is recovered") {
    Reconstruction rec = reconstruct_realization(tsirelson_behavior());
    CHECK(rec.realization.theta == doctest::Approx(PI / 4));
    CHECK(rec.roundtrip_error < 1e-12);
    CHECK(max_diff(born_point(rec.realization), apply_symmetry(rec.element, tsirelson_behavior())) < 1e-12);
}

TEST_CASE("reconstruction errors") {
    Behavior t03 = born_point({0.3, {0, PI / 2}, {PI / 4, 3 * PI / 4}});
    CHECK(kind_of([&] { reconstruct_realization(t03); }) == ErrorKind::NotSelfTesting);
    CHECK(kind_of([] { reconstruct_realization(born_point(pi16_realization())); }) == ErrorKind::LocalInput);
    CHECK(kind_of([] { reconstruct_realization(Behavior{}); }) == ErrorKind::LocalInput);
    CHECK(kind_of([] { reconstruct_realization(make({0, 0}, {0, 0}, 1.2, 0, 0, 0)); }) ==
          ErrorKind::InvalidBehavior);

    // Noise of 1e-3 breaks the equalities.
    Behavior noisy = r3_behavior();
    noisy.corr[1][1] -= 1e-3;
    CHECK(kind_of([&] { reconstruct_realization(noisy); }) == ErrorKind::NotSelfTesting);
}

TEST_CASE("selftest_certificate") {
    for (const Behavior& p : {r3_behavior(), tsirelson_behavior()}) {
        SelftestCertificate c = selftest_certificate(p);
        CHECK(c.max_residual < 1e-8);
        for (double r : c.residuals) CHECK(std::abs(r) <= c.max_residual);
        CHECK(c.roundtrip_error == c.reconstruction.roundtrip_error);
        CHECK(c.roundtrip_error < 1e-10);
    }
}

TEST_CASE("relabeled inputs are brought back") {
    const auto& G = symmetry_group();
    for (std::size_t k = 0; k < G.size(); k += 5) {
        Behavior p = apply_symmetry(G[k], r3_behavior());
        Reconstruction rec = reconstruct_realization(p);
        CHECK(angle_diff(rec.realization, example_r3()) < 1e-9);
        CHECK(max_diff(born_point(rec.realization), apply_symmetry(rec.element, p)) < 1e-10);
    }
}

TEST_CASE("roundtrip on strictly alternating samples") {
    SampleConstraints c;
    c.quarter = true;
    c.nonlocal = true;
    c.alternation = Alternation::Strict;
    double worst = 0;
    for (std::uint64_t s = 0; s < 300; ++s) {
        QubitRealization r = sample_realization(1000 + s, c);
        Behavior p = born_point(r);
        Reconstruction rec = reconstruct_realization(p);
        QubitRealization want = canonicalize(r, ThetaSector::Quarter).realization;
        worst = std::max(worst, angle_diff(rec.realization, want));
        CHECK(max_diff(born_point(rec.realization), apply_symmetry(rec.element, p)) < TOL_RECON);

        const ReconstructionTrace& t = rec.trace;
        CHECK(t.gauge_residual <= TOL_EQ);
        CHECK(t.theta == t.theta_branches[0]);
        CHECK(t.theta_branches[0] + t.theta_branches[1] == doctest::Approx(PI / 2));
        CHECK(t.theta == doctest::Approx(rec.realization.theta).epsilon(1e-9));
        for (int x = 0; x < 2; ++x)
            CHECK(t.gamma_x[x] == doctest::Approx(t.gamma - (t.w[0][x] + t.w[1][x]) / 4));
        // 0 <= w[.][1] <= bgauge <= w[.][0] <= pi
        for (int al = 0; al < 2; ++al) {
            CHECK(t.w[al][1] >= -TOL_EQ);
            CHECK(t.w[al][1] <= t.bgauge + TOL_EQ);
            CHECK(t.bgauge <= t.w[al][0] + TOL_EQ);
            CHECK(t.w[al][0] <= PI + TOL_EQ);
        }
    }
    CHECK(worst < 1e-7);
}
