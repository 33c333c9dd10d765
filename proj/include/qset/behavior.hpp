#pragma once

#include <array>
#include <string>
#include <vector>

namespace qset {

constexpr double TOL_EQ = 1e-8;
constexpr double TOL_CLAMP = 1e-9;
constexpr double TOL_RECON = 1e-6;

using Vec8 = std::array<double, 8>;

// A point of the CHSH correlation space: <A_x>, <B_y>, <A_x B_y>.
struct Behavior {
    std::array<double, 2> margA{};
    std::array<double, 2> margB{};
    std::array<std::array<double, 2>, 2> corr{};  // corr[x][y]

    // (A0, A1, B0, B1, A0B0, A1B0, A0B1, A1B1), the Bell functional order.
    Vec8 vec() const;
    static Behavior from_vec(const Vec8& v);

    // (margA, margB, corr row-major); used for lexicographic comparisons.
    Vec8 serial() const;
};

double max_abs_diff(const Behavior& p, const Behavior& q);

// p[a][b][x][y] = p(a b | x y); outcome index 0 is +1, index 1 is -1.
using Probabilities = std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2>;

Probabilities probabilities(const Behavior& p);

std::vector<std::string> validate(const Behavior& p);

// Throws InvalidBehavior listing the violations.
void require_valid(const Behavior& p);

struct BellFunctional {
    Vec8 coeffs{};  // same order as Behavior::vec()
    double offset = 0.0;

    static BellFunctional chsh();
};

double bell_value(const BellFunctional& beta, const Behavior& p);

// The eight sign variants of CHSH on the correlators (odd number of minus signs).
std::array<double, 8> chsh_all(const Behavior& p);

// Fine's criterion: max CHSH variant <= 2.
bool is_local(const Behavior& p);

struct SymmetryElement {
    bool partySwap = false;
    bool inputSwapA = false;
    bool inputSwapB = false;
    std::array<bool, 4> outputFlip{};  // A0, A1, B0, B1

    bool is_identity() const;
    bool operator==(const SymmetryElement&) const = default;
};

std::string to_string(const SymmetryElement& g);

// Output flips act first (on the original labels), then input swaps, then the party swap.
Behavior apply_symmetry(const SymmetryElement& g, const Behavior& p);

// compose(g, h) acts as h followed by g.
SymmetryElement compose(const SymmetryElement& g, const SymmetryElement& h);
SymmetryElement inverse(const SymmetryElement& g);

// Closure of the generators; identity first, then breadth-first order.
const std::vector<SymmetryElement>& symmetry_group();

struct CanonicalBehavior {
    Behavior behavior;
    SymmetryElement element;
};

CanonicalBehavior canonical_behavior(const Behavior& p);

}  // namespace qset
