#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qset/behavior.hpp"
#include "qset/realization.hpp"

namespace qset {

struct DeterministicVertex {
    std::array<int, 2> aOut{};
    std::array<int, 2> bOut{};

    Behavior behavior() const;
};

// Every assignment of +-1 outcomes to the four measurements.
std::vector<DeterministicVertex> deterministic_vertices();

struct LocalLpResult {
    bool local = false;
    std::vector<double> weights;  // over deterministic_vertices(), when local
    // When not local: separator(v) <= 0 on every vertex and separator(P) > 0.
    BellFunctional separator;
    double infeasibility = 0.0;  // phase-one optimum
};

LocalLpResult local_membership_lp(const Behavior& p);

struct BellMaxResult {
    double value = 0.0;
    QubitRealization argmax;
    std::vector<double> history;  // best value after the grid and after each refinement round
};

// Grid over [0, pi)^5 followed by coordinate ascent with a shrinking step.
BellMaxResult bell_max_q2(const BellFunctional& beta, int resolution = 16, int refinements = 60);

struct DecompositionOptions {
    int trials = 1000;
    std::uint64_t seed = 1;
    double residual_tol = 1e-12;  // max-norm of lambda P1 + (1 - lambda) P2 - P
    double min_separation = 0.1;  // max-norm of P1 - P2
    int max_iterations = 200;
    std::optional<QubitRealization> hint;  // some starts are perturbations of this realization
};

struct DecompositionResult {
    bool found = false;
    Behavior P1, P2;
    double lambda = 0.0;
    double residual = 0.0;
    double separation = 0.0;
    std::string family;  // "q2+q2" or "q2+local"
    int trial = -1;
    std::uint64_t seed = 0;
};

// Multistart Levenberg-Marquardt over pairs of qubit realizations, or a qubit
// realization and a mixture of deterministic vertices. Failing to find a
// decomposition is evidence of extremality, not a proof.
DecompositionResult decomposition_search(const Behavior& p, const DecompositionOptions& opt = {});

}  // namespace qset
