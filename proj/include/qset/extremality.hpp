#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qset/behavior.hpp"
#include "qset/realization.hpp"
#include "qset/steering.hpp"

namespace qset {

struct SignPattern {
    std::array<std::array<int, 2>, 2> eps{};  // eps[x][y]
    bool operator==(const SignPattern&) const = default;
};

// The 8 patterns with prod eps = -1.
const std::vector<SignPattern>& sign_patterns();

// The pattern used by the self-test equalities: a single minus on (x,y) = (0,1).
SignPattern lemma1_pattern();

enum class Side { Alice, Bob };

struct Prop1Result {
    bool holds = false;
    // Row 4*st + (2x+y): st = 2*(s==-1) + (t==-1), minus sign on term (x,y).
    // Columns: S - pi and -S - pi; each must be <= TOL_EQ.
    std::array<std::array<double, 2>, 16> residuals{};
    double max_abs_sum = 0.0;  // max |S| over all rows
};

Prop1Result prop1_check(const Behavior& p, Side side = Side::Alice);

// Requires vanishing marginals.
bool masanes_check(const Behavior& p);

struct Lemma1Result {
    bool holds = false;
    std::array<double, 4> residuals{};  // sum - pi for (s,t) = (+,+), (+,-), (-,+), (-,-)
};

Lemma1Result lemma1_check(const Behavior& p);

// Self-test equalities after a search over relabelings; returns the first element of the
// group for which the relabeled behavior passes.
std::optional<SymmetryElement> lemma1_relabeled(const Behavior& p);

struct Theorem1Result {
    bool holds = false;
    std::optional<SignPattern> pattern;
    double best_residual = 0.0;  // smallest max-residual over the 8 patterns
};

Theorem1Result theorem1_behavior_check(const Behavior& p);

struct AlternationResult {
    bool holds = false;
    // [a~0^+], [a~0^-], b0-[a~0^+], b0-[a~0^-], [a~1^+]-b0, [a~1^-]-b0, b1-[a~1^+], b1-[a~1^-]
    std::array<double, 8> margins{};
};

// Canonical input. For theta in (pi/2, pi) the chain is evaluated on the locally
// equivalent realization (pi - theta, -a, b) brought back into range.
AlternationResult full_alternation_check(const QubitRealization& r, bool strict);

// Chain 0 <= a0 <= [b~0^beta] <= a1 <= [b~1^beta'] < pi with Bob's modified angles.
AlternationResult bob_alternation_check(const QubitRealization& r, bool strict);

enum class Verdict { Local, ExtremalExposed, ExtremalNonExposed, NonExtremalInQ, FailsNecessaryQ2Pure, Indeterminate };

const char* to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Indeterminate;
    struct Details {
        std::string reason;
        double max_chsh = 0.0;
        std::optional<SignPattern> pattern;
        double theorem1_residual = 0.0;
        bool prop1_alice = true;
        bool prop1_bob = true;
        std::optional<QubitRealization> realization;
        std::optional<std::array<double, 8>> margins;
        bool membership_certified = true;
    } details;
};

Classification classify(const Behavior& p);

}  // namespace qset
