#include "qset/realization.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qset/error.hpp"
#include "qset/extremality.hpp"

namespace qset {

namespace {

constexpr double PI = std::numbers::pi;

double reduce_2pi(double v) {
    double r = std::fmod(v, 2.0 * PI);
    if (r < 0) r += 2.0 * PI;
    if (r >= 2.0 * PI - 1e-13) r = 0.0;
    return r + 0.0;
}

double reduce_pi(double v) {
    double r = std::fmod(v, PI);
    if (r < 0) r += PI;
    if (r >= PI - 1e-15) r = 0.0;
    return r + 0.0;
}

std::array<double, 5> key(const QubitRealization& r) { return {r.theta, r.a[0], r.a[1], r.b[0], r.b[1]}; }

QubitRealization mirror(const QubitRealization& r) { return {r.theta, {-r.a[0], -r.a[1]}, {-r.b[0], -r.b[1]}}; }

// Representatives of the local-unitary orbit of r with theta in [0, pi/4].
std::vector<QubitRealization> quarter_variants(QubitRealization r) {
    r.theta = reduce_pi(r.theta);
    if (r.theta > PI / 2) r = {PI - r.theta, {-r.a[0], -r.a[1]}, r.b};
    std::vector<QubitRealization> base;
    if (r.theta > PI / 4) {
        r = {PI / 2 - r.theta, {PI - r.a[0], PI - r.a[1]}, {PI - r.b[0], PI - r.b[1]}};
    }
    base.push_back(r);
    if (std::abs(r.theta - PI / 4) < 1e-12) {
        base.push_back({r.theta, {PI - r.a[0], PI - r.a[1]}, {PI - r.b[0], PI - r.b[1]}});
        // Maximally entangled: only angle differences matter.
        std::vector<QubitRealization> rotated;
        for (const auto& q : base)
            for (double phi : {q.a[0], q.a[1], q.b[0], q.b[1]})
                rotated.push_back({PI / 4, {q.a[0] - phi, q.a[1] - phi}, {q.b[0] - phi, q.b[1] - phi}});
        base.insert(base.end(), rotated.begin(), rotated.end());
    }
    std::vector<QubitRealization> out;
    for (const auto& q : base) {
        out.push_back(q);
        out.push_back(mirror(q));
    }
    return out;
}

}  // namespace

Behavior born_point(const QubitRealization& r) {
    const double c2 = std::cos(2.0 * r.theta), s2 = std::sin(2.0 * r.theta);
    Behavior p;
    for (int x = 0; x < 2; ++x) p.margA[x] = c2 * std::cos(r.a[x]);
    for (int y = 0; y < 2; ++y) p.margB[y] = c2 * std::cos(r.b[y]);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            p.corr[x][y] = std::cos(r.a[x]) * std::cos(r.b[y]) + s2 * std::sin(r.a[x]) * std::sin(r.b[y]);
    return p;
}

Behavior born_point_matrix(const QubitRealization& r) {
    using Eigen::Matrix2d;
    using Eigen::Matrix4d;
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
    Eigen::Vector4d phi(std::cos(r.theta), 0.0, 0.0, std::sin(r.theta));
    auto expect = [&](const Matrix4d& m) { return phi.dot(m * phi); };

    Behavior p;
    for (int x = 0; x < 2; ++x) p.margA[x] = expect(kron(obs(r.a[x]), I));
    for (int y = 0; y < 2; ++y) p.margB[y] = expect(kron(I, obs(r.b[y])));
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) p.corr[x][y] = expect(kron(obs(r.a[x]), obs(r.b[y])));
    return p;
}

QubitRealization apply_symmetry(const SymmetryElement& g, const QubitRealization& r) {
    QubitRealization q = r;
    for (int x = 0; x < 2; ++x)
        if (g.outputFlip[x]) q.a[x] += PI;
    for (int y = 0; y < 2; ++y)
        if (g.outputFlip[2 + y]) q.b[y] += PI;
    if (g.inputSwapA) std::swap(q.a[0], q.a[1]);
    if (g.inputSwapB) std::swap(q.b[0], q.b[1]);
    if (g.partySwap) std::swap(q.a, q.b);
    return q;
}

bool in_canonical_range(const QubitRealization& r) {
    return r.theta >= 0 && r.theta < PI && r.a[0] >= 0 && r.a[0] <= r.b[0] && r.b[0] <= r.b[1] &&
           r.b[1] < PI && r.a[0] <= r.a[1] && r.a[1] < PI;
}

CanonicalRealization canonicalize(const QubitRealization& r, ThetaSector sector) {
    std::vector<QubitRealization> variants;
    if (sector == ThetaSector::Quarter) {
        variants = quarter_variants(r);
    } else {
        QubitRealization q = r;
        q.theta = reduce_pi(q.theta);
        variants.push_back(q);
    }

    bool found = false;
    CanonicalRealization best;
    for (const auto& v : variants) {
        for (const auto& g : symmetry_group()) {
            QubitRealization q = apply_symmetry(g, v);
            for (auto& t : q.a) t = reduce_2pi(t);
            for (auto& t : q.b) t = reduce_2pi(t);
            if (!in_canonical_range(q)) continue;
            if (!found || key(q) < key(best.realization)) {
                best = {q, g};
                found = true;
            }
        }
    }
    if (!found) throw Error(ErrorKind::Precondition, "no relabeling brings the realization into range");
    return best;
}

QubitRealization sample_realization(std::uint64_t seed, const SampleConstraints& c) {
    if (c.alternation != Alternation::Any && !c.canonical)
        throw Error(ErrorKind::Precondition, "alternation constraints need canonical sampling");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int max_tries = 200000;
    for (int tries = 0; tries < max_tries; ++tries) {
        QubitRealization r;
        if (c.quarter) {
            r.theta = THETA_MARGIN + (PI / 4 - THETA_MARGIN) * unit(rng);
        } else {
            r.theta = PI * unit(rng);
            double off = std::abs(std::remainder(r.theta, PI / 2));
            if (off < THETA_MARGIN) continue;
        }
        double span = c.canonical ? PI : 2.0 * PI;
        r.a = {span * unit(rng), span * unit(rng)};
        r.b = {span * unit(rng), span * unit(rng)};
        if (c.canonical && !in_canonical_range(r)) continue;
        if (c.nonlocal && is_local(born_point(r))) continue;
        switch (c.alternation) {
            case Alternation::Any: break;
            case Alternation::Full:
                if (!full_alternation_check(r, false).holds) continue;
                break;
            case Alternation::Strict:
                if (!full_alternation_check(r, true).holds) continue;
                break;
            case Alternation::Non:
                if (full_alternation_check(r, false).holds) continue;
                break;
        }
        return r;
    }
    throw Error(ErrorKind::SamplingFailed, "constraint region not hit after bounded retries");
}

}  // namespace qset
