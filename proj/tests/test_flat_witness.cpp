#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "oracle_support.hpp"
#include "qset/error.hpp"
#include "qset/extremality.hpp"
#include "qset/flat_witness.hpp"
#include "qset/oracles.hpp"

using namespace qset;
using namespace qtest;

namespace {

Eigen::Matrix2d obs(double t) {
    Eigen::Matrix2d m;
    m << std::cos(t), std::sin(t), std::sin(t), -std::cos(t);
    return m;
}

Eigen::Matrix4d kron(const Eigen::Matrix2d& u, const Eigen::Matrix2d& v) {
    Eigen::Matrix4d k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = u(i, j) * v;
    return k;
}

// <psi| M_k |phi_theta> over the eight observables in vec() order.
Vec8 matrix_tangent(const QubitRealization& r, const Eigen::Vector4d& psi) {
    Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d A[2] = {obs(r.a[0]), obs(r.a[1])}, B[2] = {obs(r.b[0]), obs(r.b[1])};
    Eigen::Matrix4d M[8] = {kron(A[0], I),    kron(A[1], I),    kron(I, B[0]),    kron(I, B[1]),
                            kron(A[0], B[0]), kron(A[1], B[0]), kron(A[0], B[1]), kron(A[1], B[1])};
    Eigen::Vector4d phi(std::cos(r.theta), 0, 0, std::sin(r.theta));
    Vec8 out;
    for (int k = 0; k < 8; ++k) out[k] = psi.dot(M[k] * phi);
    return out;
}

double vdiff(const Vec8& u, const Vec8& v) {
    double m = 0;
    for (int i = 0; i < 8; ++i) m = std::max(m, std::abs(u[i] - v[i]));
    return m;
}

Vec8 moved(const QubitRealization& r, const std::array<double, 5>& coeffs) {
    TangentBasis t = tangent_basis(r);
    Vec8 v = born_point(r).vec();
    for (int k = 0; k < 5; ++k)
        for (int i = 0; i < 8; ++i) v[i] += coeffs[k] * t.vecs[k][i];
    return v;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Precondition;
}

const Sector SECTORS[3] = {{1, 1}, {1, -1}, {-1, -1}};

QubitRealization quarter_sample(std::uint64_t seed) {
    SampleConstraints c;
    c.quarter = true;
    return sample_realization(seed, c);
}

}  // namespace

TEST_CASE("born_point_derivative at Example R3") {
    Vec8 d = born_point_derivative(example_r3(), Param::A0);
    Vec8 want = {0, 0, 0, 0, 0.5, 0, 0.5, 0};
    CHECK(vdiff(d, want) < 1e-14);
}

TEST_CASE("born_point_derivative matches central differences") {
    std::mt19937_64 rng(41);
    const double h = 1e-6;
    double worst = 0;
    for (int i = 0; i < 500; ++i) {
        QubitRealization r = sample_realization(rng(), {});
        for (Param p : {Param::Theta, Param::A0, Param::A1, Param::B0, Param::B1}) {
            QubitRealization up = r, dn = r;
            double* slot = p == Param::Theta ? &up.theta
                         : p == Param::A0    ? &up.a[0]
                         : p == Param::A1    ? &up.a[1]
                         : p == Param::B0    ? &up.b[0]
                                             : &up.b[1];
            *slot += h;
            double* slot2 = p == Param::Theta ? &dn.theta
                          : p == Param::A0    ? &dn.a[0]
                          : p == Param::A1    ? &dn.a[1]
                          : p == Param::B0    ? &dn.b[0]
                                              : &dn.b[1];
            *slot2 -= h;
            Vec8 u = born_point(up).vec(), v = born_point(dn).vec(), fd;
            for (int k = 0; k < 8; ++k) fd[k] = (u[k] - v[k]) / (2 * h);
            worst = std::max(worst, vdiff(fd, born_point_derivative(r, p)));
        }
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("tangent rows match the matrix evaluation") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 300; ++i) {
        QubitRealization r = quarter_sample(rng());
        TangentBasis t = tangent_basis(r);
        Eigen::Vector4d psi(std::sin(r.theta), 0, 0, -std::cos(r.theta)), e01(0, 1, 0, 0), e10(0, 0, 1, 0);
        CHECK(vdiff(t.vecs[0], matrix_tangent(r, psi)) < 1e-12);
        CHECK(vdiff(t.vecs[1], matrix_tangent(r, e01)) < 1e-12);
        CHECK(vdiff(t.vecs[2], matrix_tangent(r, e10)) < 1e-12);
        CHECK(vdiff(t.vecs[3], born_point_derivative(r, Param::A0)) == 0);
        CHECK(vdiff(t.vecs[4], born_point_derivative(r, Param::B0)) == 0);
    }
}

TEST_CASE("solve_sector lands on the sector space") {
    std::mt19937_64 rng(43);
    double worst = 0;
    int solved = 0;
    for (int i = 0; i < 1000; ++i) {
        SampleConstraints c;
        c.quarter = true;
        QubitRealization r = sample_realization(rng(), c);
        for (Sector sec : SECTORS) {
            SectorSolution sol;
            try {
                sol = solve_sector(r, sec);
            } catch (const Error&) {
                continue;
            }
            ++solved;
            CHECK(sol.coeffs[4] == 0);
            Behavior L = Behavior::from_vec(moved(r, sol.coeffs));
            // Substitute into the defining equalities independently of the solver.
            double e = std::max(std::abs(L.margA[0] - sec.s), std::abs(L.margA[1] - sec.t));
            for (int y = 0; y < 2; ++y) {
                e = std::max(e, std::abs(L.corr[0][y] - sec.s * L.margB[y]));
                e = std::max(e, std::abs(L.corr[1][y] - sec.t * L.margB[y]));
                e = std::max(e, std::abs(L.margB[y] - sol.alphas[y]));
            }
            worst = std::max(worst, e);
        }
    }
    CHECK(solved > 2000);
    CHECK(worst < 1e-10);
}

TEST_CASE("solve_sector preconditions") {
    CHECK(kind_of([] { solve_sector(example_r3(), {-1, 1}); }) == ErrorKind::Precondition);
}

TEST_CASE("delta_condition at theta = pi/16") {
    auto d = delta_condition(pi16_realization(), {1, 1});
    // sin(-pi/4) sin(-pi/8) and sin(-3pi/4) sin(-5pi/8).
    CHECK(d[0] == doctest::Approx(0.2705980500730985).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(0.6532814824381882).epsilon(1e-12));
    CHECK(std::abs(delta_condition(example_r3(), {1, 1})[0]) < 1e-15);
}

TEST_CASE("delta sign matches |alpha| <= 1") {
    std::mt19937_64 rng(44);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        SampleConstraints c;
        c.quarter = true;
        QubitRealization r = sample_realization(rng(), c);
        for (Sector sec : SECTORS) {
            auto d = delta_condition(r, sec);
            SectorSolution sol;
            try {
                sol = solve_sector(r, sec);
            } catch (const Error&) {
                continue;
            }
            for (int y = 0; y < 2; ++y) {
                if (std::abs(d[y]) < 1e-9) continue;
                CHECK((d[y] >= 0) == (std::abs(sol.alphas[y]) <= 1));
                ++checked;
            }
        }
    }
    CHECK(checked > 5000);
}

TEST_CASE("find_witness examples") {
    CHECK_FALSE(find_witness(tsirelson_realization()).has_value());

    auto r3 = find_witness(example_r3());
    REQUIRE(r3.has_value());
    CHECK(r3->nonlocal);

    auto w = find_witness(pi16_realization());
    REQUIRE(w.has_value());
    CHECK(w->sector == Sector{1, 1});
    CHECK_FALSE(w->nonlocal);
    CHECK(w->deltas[0] == doctest::Approx(0.2705980500730985));
}

TEST_CASE("witness invariants") {
    SampleConstraints c;
    c.quarter = true;
    int found = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        QubitRealization r = sample_realization(7000 + s, c);
        auto w = find_witness(r);
        CHECK(w.has_value() == !full_alternation_check(r, true).holds);
        if (!w) continue;
        ++found;
        const Behavior& L = w->L;
        CHECK(w->residual <= TOL_EQ);
        CHECK(vdiff(L.vec(), moved(r, w->coeffs)) <= TOL_EQ);
        CHECK(validate(L).empty());
        CHECK(is_local(L));
        CHECK(local_membership_lp(L).local);
        for (int y = 0; y < 2; ++y) {
            CHECK(w->deltas[y] >= -TOL_EQ);
            CHECK(std::abs(w->alphas[y]) <= 1 + TOL_EQ);
        }
        CHECK(w->nonlocal == !is_local(born_point(r)));

        // Every functional orthogonal to the tangent rows takes the same value at P and L.
        Orthocomplement oc = orthocomplement(tangent_basis(r));
        for (const auto& beta : oc.basis) {
            BellFunctional f{beta, 0};
            CHECK(std::abs(bell_value(f, L) - bell_value(f, born_point(r))) < 1e-8);
        }
    }
    CHECK(found > 500);
}

TEST_CASE("orthocomplement") {
    std::mt19937_64 rng(45);
    for (int i = 0; i < 300; ++i) {
        QubitRealization r = quarter_sample(rng());
        TangentBasis t = tangent_basis(r);
        Orthocomplement oc = orthocomplement(t);

        Eigen::Matrix<double, 5, 8> M;
        for (int k = 0; k < 5; ++k)
            for (int j = 0; j < 8; ++j) M(k, j) = t.vecs[k][j];
        Eigen::JacobiSVD<Eigen::Matrix<double, 5, 8>> svd(M);
        svd.setThreshold(1e-10);
        CHECK(oc.rank == int(svd.rank()));
        CHECK(int(oc.basis.size()) == 8 - oc.rank);
        CHECK_FALSE(oc.rank_deficient);

        for (std::size_t u = 0; u < oc.basis.size(); ++u) {
            for (std::size_t v = 0; v < oc.basis.size(); ++v) {
                double d = 0;
                for (int j = 0; j < 8; ++j) d += oc.basis[u][j] * oc.basis[v][j];
                CHECK(std::abs(d - (u == v ? 1.0 : 0.0)) < 1e-12);
            }
            for (int k = 0; k < 5; ++k) {
                double d = 0;
                for (int j = 0; j < 8; ++j) d += oc.basis[u][j] * t.vecs[k][j];
                CHECK(std::abs(d) < 1e-10);
            }
        }
    }

    Orthocomplement deg = orthocomplement(tangent_basis({PI / 8, {0, 0}, {0, 0}}));
    CHECK(deg.rank_deficient);
    CHECK(deg.rank < 5);
    CHECK(int(deg.basis.size()) == 8 - deg.rank);
}
