#include "qset/steering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qset/error.hpp"

namespace qset {

namespace {
constexpr double PI = std::numbers::pi;
}

double mod_pi(double v) {
    double r = std::fmod(v, PI);
    if (r < 0) r += PI;
    if (r >= PI) r -= PI;
    return r + 0.0;
}

double steer_vector(double theta, double a) {
    double y = std::sin(a / 2) * std::sin(theta);
    double x = std::cos(a / 2) * std::cos(theta);
    if (std::hypot(x, y) < 1e-12) throw Error(ErrorKind::NullImage, "steering maps the vector to zero");
    double t = 2.0 * std::atan2(y, x);
    if (t <= -PI) t += 2.0 * PI;
    if (t > PI) t -= 2.0 * PI;
    return t;
}

double modified_angle(double theta, int alpha, double a) {
    if (alpha > 0) return 2.0 * std::atan2(std::sin(a / 2) * std::sin(theta), std::cos(a / 2) * std::cos(theta));
    return 2.0 * std::atan2(std::sin(a / 2) * std::cos(theta), std::cos(a / 2) * std::sin(theta));
}

AngleTable modified_angles(const QubitRealization& r) {
    if (std::abs(std::sin(2.0 * r.theta)) < 1e-12)
        throw Error(ErrorKind::DegenerateTheta, "theta is a multiple of pi/2");
    AngleTable t{};
    for (int al = 0; al < 2; ++al)
        for (int x = 0; x < 2; ++x) t[al][x] = modified_angle(r.theta, sign_of(al), r.a[x]);
    return t;
}

SteeredCorrelators steered_correlators(const Behavior& p) {
    SteeredCorrelators s;
    for (int x = 0; x < 2; ++x)
        if (!(std::abs(p.margA[x]) < 1.0))
            throw Error(ErrorKind::MarginalUnit, "|<A_" + std::to_string(x) + ">| = 1");
    for (int al = 0; al < 2; ++al)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                double v = (p.corr[x][y] + sign_of(al) * p.margB[y]) / (1.0 + sign_of(al) * p.margA[x]);
                if (std::abs(v) > 1.0 + TOL_CLAMP)
                    throw Error(ErrorKind::InvalidBehavior, "steered correlator outside [-1, 1]: " + std::to_string(v));
                s.c[al][x][y] = std::clamp(v, -1.0, 1.0);
            }
    return s;
}

SteeredCorrelators steered_correlators(const QubitRealization& r) {
    SteeredCorrelators s = steered_correlators(born_point(r));
    s.atilde = modified_angles(r);
    s.has_angles = true;
    return s;
}

SteeredCorrelators bob_steered_correlators(const Behavior& p) {
    SymmetryElement swap;
    swap.partySwap = true;
    return steered_correlators(apply_symmetry(swap, p));
}

AngleTable bob_modified_angles(const QubitRealization& r) {
    return modified_angles({r.theta, r.b, r.a});
}

}  // namespace qset
