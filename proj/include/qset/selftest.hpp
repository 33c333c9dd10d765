#pragma once

#include <array>

#include "qset/behavior.hpp"
#include "qset/realization.hpp"
#include "qset/steering.hpp"

namespace qset {

// Angles in the frame where Bob's B1 sits at 0 and B0 at bgauge.
// For inputs obeying the self-test equalities: 0 <= w[t][1] <= bgauge <= w[s][0] <= pi.
struct ReconstructionTrace {
    AngleTable w{};               // [alpha][x]
    double bgauge = 0.0;
    double gamma = 0.0;           // half of the frame angle rho placing B1 at rho
    std::array<double, 2> gamma_x{};  // gamma - (w[+][x] + w[-][x]) / 4
    double theta = 0.0;
    std::array<double, 2> theta_branches{};  // acos(+C)/2 and acos(-C)/2
    double gauge_residual = 0.0;
};

struct Reconstruction {
    QubitRealization realization;  // canonical, theta in (0, pi/4]
    ReconstructionTrace trace;
    SymmetryElement element;       // born_point(realization) ~ apply_symmetry(element, input)
    double roundtrip_error = 0.0;
};

Reconstruction reconstruct_realization(const Behavior& p);

struct SelftestCertificate {
    Reconstruction reconstruction;
    std::array<double, 4> residuals{};  // self-test equalities of the relabeled input
    double max_residual = 0.0;
    double roundtrip_error = 0.0;
};

SelftestCertificate selftest_certificate(const Behavior& p);

}  // namespace qset
