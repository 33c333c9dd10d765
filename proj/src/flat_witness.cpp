#include "qset/flat_witness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qset/error.hpp"
#include "qset/extremality.hpp"
#include "qset/steering.hpp"

namespace qset {

namespace {

constexpr double PI = std::numbers::pi;

void require_quarter(const QubitRealization& r) {
    if (!in_canonical_range(r)) throw Error(ErrorKind::Precondition, "realization is not canonical");
    if (!(r.theta > 0 && r.theta <= PI / 4 + 1e-12))
        throw Error(ErrorKind::DegenerateTheta, "theta must lie in (0, pi/4]");
}

double dot(const Vec8& u, const Vec8& v) {
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += u[i] * v[i];
    return s;
}

}  // namespace

Vec8 born_point_derivative(const QubitRealization& r, Param p) {
    const double c2 = std::cos(2 * r.theta), s2 = std::sin(2 * r.theta);
    const double ca[2] = {std::cos(r.a[0]), std::cos(r.a[1])}, sa[2] = {std::sin(r.a[0]), std::sin(r.a[1])};
    const double cb[2] = {std::cos(r.b[0]), std::cos(r.b[1])}, sb[2] = {std::sin(r.b[0]), std::sin(r.b[1])};
    Behavior d;
    switch (p) {
        case Param::Theta:
            for (int k = 0; k < 2; ++k) {
                d.margA[k] = -2 * s2 * ca[k];
                d.margB[k] = -2 * s2 * cb[k];
            }
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) d.corr[x][y] = 2 * c2 * sa[x] * sb[y];
            break;
        case Param::A0:
        case Param::A1: {
            int x = p == Param::A0 ? 0 : 1;
            d.margA[x] = -c2 * sa[x];
            for (int y = 0; y < 2; ++y) d.corr[x][y] = -sa[x] * cb[y] + s2 * ca[x] * sb[y];
            break;
        }
        case Param::B0:
        case Param::B1: {
            int y = p == Param::B0 ? 0 : 1;
            d.margB[y] = -c2 * sb[y];
            for (int x = 0; x < 2; ++x) d.corr[x][y] = -ca[x] * sb[y] + s2 * sa[x] * cb[y];
            break;
        }
    }
    return d.vec();
}

TangentBasis tangent_basis(const QubitRealization& r) {
    require_quarter(r);
    using Eigen::Matrix2d;
    using Eigen::Matrix4d;
    using Eigen::Vector4d;
    Matrix2d Z, X, I = Matrix2d::Identity();
    Z << 1, 0, 0, -1;
    X << 0, 1, 1, 0;
    auto obs = [&](double t) -> Matrix2d { return std::cos(t) * Z + std::sin(t) * X; };
    auto kron = [](const Matrix2d& u, const Matrix2d& v) {
        Matrix4d k;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = u(i, j) * v;
        return k;
    };
    std::array<Matrix4d, 8> M;
    M[0] = kron(obs(r.a[0]), I);
    M[1] = kron(obs(r.a[1]), I);
    M[2] = kron(I, obs(r.b[0]));
    M[3] = kron(I, obs(r.b[1]));
    M[4] = M[0] * M[2];
    M[5] = M[1] * M[2];
    M[6] = M[0] * M[3];
    M[7] = M[1] * M[3];

    const Vector4d phi(std::cos(r.theta), 0, 0, std::sin(r.theta));
    const std::array<Vector4d, 3> perp = {Vector4d(std::sin(r.theta), 0, 0, -std::cos(r.theta)),
                                          Vector4d(0, 1, 0, 0), Vector4d(0, 0, 1, 0)};
    TangentBasis t;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 8; ++k) t.vecs[i][k] = perp[i].dot(M[k] * phi);
    t.vecs[3] = born_point_derivative(r, Param::A0);
    t.vecs[4] = born_point_derivative(r, Param::B0);
    return t;
}

SectorSolution solve_sector(const QubitRealization& r, Sector sec) {
    require_quarter(r);
    if (sec.s == -1 && sec.t == 1) throw Error(ErrorKind::Precondition, "sector (-1,+1) is excluded");
    const double A0 = r.a[0] + (1 - sec.s) * PI / 2, A1 = r.a[1] + (1 - sec.t) * PI / 2;
    const double dl = (A0 - A1) / 2, sg = (A0 + A1) / 2;
    const double c2 = std::cos(2 * r.theta), s2 = std::sin(2 * r.theta);
    SectorSolution out;
    out.D = std::cos(dl) + std::cos(sg) * c2;
    if (std::abs(out.D) < 1e-12) throw Error(ErrorKind::DegenerateDenominator, "D_st vanishes");
    const double D = out.D;
    out.coeffs = {std::cos(sg) * s2 / D,
                  2 * std::sin(A0 / 2) * std::cos(A1 / 2) * std::sin(r.theta) / D,
                  2 * std::cos(A0 / 2) * std::sin(A1 / 2) * std::cos(r.theta) / D,
                  -2 * std::sin(dl) / D,
                  0.0};
    for (int y = 0; y < 2; ++y)
        out.alphas[y] =
            (std::cos(r.b[y]) * (c2 * std::cos(dl) + std::cos(sg)) + s2 * std::sin(r.b[y]) * std::sin(sg)) / D;
    return out;
}

std::array<double, 2> delta_condition(const QubitRealization& r, Sector sec) {
    require_quarter(r);
    if (sec.s == -1 && sec.t == 1) throw Error(ErrorKind::Precondition, "sector (-1,+1) is excluded");
    const double t0 = modified_angle(r.theta, sec.s, r.a[0]);
    const double t1 = modified_angle(r.theta, sec.t, r.a[1]);
    std::array<double, 2> d{};
    for (int y = 0; y < 2; ++y) d[y] = sec.s * sec.t * std::sin(t0 - r.b[y]) * std::sin(t1 - r.b[y]);
    return d;
}

std::optional<FlatnessWitness> find_witness(const QubitRealization& r) {
    require_quarter(r);
    if (full_alternation_check(r, true).holds) return std::nullopt;

    const Behavior P = born_point(r);
    const Vec8 pv = P.vec();
    const TangentBasis T = tangent_basis(r);
    for (Sector sec : {Sector{1, 1}, Sector{1, -1}, Sector{-1, -1}}) {
        SectorSolution sol;
        try {
            sol = solve_sector(r, sec);
        } catch (const Error&) {
            continue;
        }
        auto deltas = delta_condition(r, sec);
        if (deltas[0] < -TOL_EQ || deltas[1] < -TOL_EQ) continue;
        if (std::abs(sol.alphas[0]) > 1 + TOL_EQ || std::abs(sol.alphas[1]) > 1 + TOL_EQ) continue;

        FlatnessWitness w;
        w.sector = sec;
        w.coeffs = sol.coeffs;
        w.alphas = sol.alphas;
        w.deltas = deltas;
        w.L.margA = {double(sec.s), double(sec.t)};
        w.L.margB = sol.alphas;
        for (int y = 0; y < 2; ++y) {
            w.L.corr[0][y] = sec.s * sol.alphas[y];
            w.L.corr[1][y] = sec.t * sol.alphas[y];
        }
        Vec8 moved = pv;
        for (int i = 0; i < 5; ++i)
            for (int k = 0; k < 8; ++k) moved[k] += sol.coeffs[i] * T.vecs[i][k];
        Vec8 lv = w.L.vec();
        for (int k = 0; k < 8; ++k) w.residual = std::max(w.residual, std::abs(lv[k] - moved[k]));
        auto ch = chsh_all(P);
        w.nonlocal = *std::max_element(ch.begin(), ch.end()) > 2 + TOL_EQ;
        return w;
    }
    return std::nullopt;
}

Orthocomplement orthocomplement(const TangentBasis& t) {
    Orthocomplement out;
    std::vector<Vec8> q;

    // Orthogonalizes v against q twice; returns the remaining norm.
    auto reduce = [&](Vec8& v) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : q) {
                double c = dot(u, v);
                for (int k = 0; k < 8; ++k) v[k] -= c * u[k];
            }
        return std::sqrt(dot(v, v));
    };
    auto pivoted = [&](std::vector<Vec8> cands, std::size_t limit) {
        std::size_t added = 0;
        while (!cands.empty() && added < limit) {
            std::size_t best = 0;
            double best_norm = -1;
            std::vector<Vec8> reduced = cands;
            for (std::size_t i = 0; i < reduced.size(); ++i) {
                double n = reduce(reduced[i]);
                if (n > best_norm) {
                    best_norm = n;
                    best = i;
                }
            }
            if (best_norm < 1e-10) break;
            Vec8 v = reduced[best];
            for (auto& x : v) x /= best_norm;
            reduce(v);
            double n = std::sqrt(dot(v, v));
            for (auto& x : v) x /= n;
            q.push_back(v);
            cands.erase(cands.begin() + static_cast<long>(best));
            ++added;
        }
        return added;
    };

    std::vector<Vec8> rows(t.vecs.begin(), t.vecs.end());
    out.rank = static_cast<int>(pivoted(rows, 5));
    out.rank_deficient = out.rank < 5;

    std::vector<Vec8> unit(8);
    for (int k = 0; k < 8; ++k) unit[k][k] = 1.0;
    std::size_t before = q.size();
    pivoted(unit, 8 - q.size());
    out.basis.assign(q.begin() + static_cast<long>(before), q.end());
    return out;
}

}  // namespace qset
