#pragma once

// Reference values and helpers shared by the tests. Nothing here calls the
// library code paths it is used to check.

#include <array>
#include <cmath>
#include <numbers>

#include "qset/behavior.hpp"
#include "qset/realization.hpp"

namespace qtest {

constexpr double PI = std::numbers::pi;
inline const double R2 = std::sqrt(2.0);

inline qset::QubitRealization example_r3() { return {PI / 8, {0, PI / 2}, {PI / 4, 3 * PI / 4}}; }
inline qset::QubitRealization tsirelson_realization() { return {PI / 4, {0, PI / 2}, {PI / 4, 3 * PI / 4}}; }
inline qset::QubitRealization pi16_realization() { return {PI / 16, {0, PI / 2}, {PI / 4, 3 * PI / 4}}; }

inline qset::Behavior make(std::array<double, 2> a, std::array<double, 2> b, double c00, double c01, double c10,
                           double c11) {
    qset::Behavior p;
    p.margA = a;
    p.margB = b;
    p.corr = {{{c00, c01}, {c10, c11}}};
    return p;
}

// Marginals 0, corr(00,01,10,11) = (r, -r, r, r) with r = 1/sqrt 2.
inline qset::Behavior tsirelson_behavior() { return make({0, 0}, {0, 0}, R2 / 2, -R2 / 2, R2 / 2, R2 / 2); }

// Example R3 values frozen from the high-precision oracle run.
inline qset::Behavior r3_behavior() { return make({R2 / 2, 0}, {0.5, -0.5}, R2 / 2, -R2 / 2, 0.5, 0.5); }

inline qset::Behavior pr_box() { return make({0, 0}, {0, 0}, 1, 1, 1, -1); }

inline double max_diff(const qset::Behavior& p, const qset::Behavior& q) {
    auto u = p.vec(), v = q.vec();
    double m = 0;
    for (int i = 0; i < 8; ++i) m = std::max(m, std::abs(u[i] - v[i]));
    return m;
}

}  // namespace qtest
