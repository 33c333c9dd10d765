#pragma once

#include <array>
#include <cstdint>

#include "qset/behavior.hpp"

namespace qset {

// State cos(theta)|00> + sin(theta)|11>, observables cos(a) Z + sin(a) X on each side.
struct QubitRealization {
    double theta = 0.0;
    std::array<double, 2> a{};
    std::array<double, 2> b{};
};

Behavior born_point(const QubitRealization& r);

// Same quantity from explicit 4x4 matrices; used as an independent check.
Behavior born_point_matrix(const QubitRealization& r);

// Relabeling acting on the parameters: an output flip adds pi to that angle,
// input swaps exchange angles, the party swap exchanges a and b. Angles are left unreduced.
QubitRealization apply_symmetry(const SymmetryElement& g, const QubitRealization& r);

// theta in [0, pi), 0 <= a0 <= b0 <= b1 < pi, a0 <= a1 < pi.
bool in_canonical_range(const QubitRealization& r);

enum class ThetaSector {
    Any,      // theta reduced mod pi, relabelings only
    Quarter,  // additionally map theta into [0, pi/4] through local unitaries
};

struct CanonicalRealization {
    QubitRealization realization;
    SymmetryElement element;  // born_point(realization) == apply_symmetry(element, born_point(input))
};

CanonicalRealization canonicalize(const QubitRealization& r, ThetaSector sector = ThetaSector::Any);

enum class Alternation { Any, Full, Strict, Non };

struct SampleConstraints {
    bool canonical = true;
    bool quarter = false;   // theta in (0, pi/4]
    bool nonlocal = false;
    Alternation alternation = Alternation::Any;
};

// Distance kept from multiples of pi/2 when sampling theta.
constexpr double THETA_MARGIN = 1e-3;

QubitRealization sample_realization(std::uint64_t seed, const SampleConstraints& c = {});

}  // namespace qset
