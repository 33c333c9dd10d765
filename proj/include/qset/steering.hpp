#pragma once

#include <array>

#include "qset/behavior.hpp"
#include "qset/realization.hpp"

namespace qset {

using AngleTable = std::array<std::array<double, 2>, 2>;                      // [alpha][x]
using CorrelatorTable = std::array<std::array<std::array<double, 2>, 2>, 2>;  // [alpha][x][y]

// alpha index 0 is +1, index 1 is -1.
constexpr int sign_of(int index) { return index == 0 ? 1 : -1; }

// Representative of v mod pi in [0, pi).
double mod_pi(double v);

// Polar angle of T_theta(u) for u at polar angle a, reduced to (-pi, pi].
double steer_vector(double theta, double a);

// 2 atan(tan(a/2) tan(theta)^alpha) in atan2 form, unreduced.
double modified_angle(double theta, int alpha, double a);

AngleTable modified_angles(const QubitRealization& r);

struct SteeredCorrelators {
    CorrelatorTable c{};
    AngleTable atilde{};
    bool has_angles = false;
};

// c[alpha][x][y] = (<A_x B_y> + alpha <B_y>) / (1 + alpha <A_x>).
SteeredCorrelators steered_correlators(const Behavior& p);

SteeredCorrelators steered_correlators(const QubitRealization& r);

// Same maps with Alice and Bob exchanged: indices become [beta][y][x].
SteeredCorrelators bob_steered_correlators(const Behavior& p);
AngleTable bob_modified_angles(const QubitRealization& r);

}  // namespace qset
