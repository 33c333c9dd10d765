#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qset/behavior.hpp"
#include "qset/realization.hpp"

namespace qset {

enum class Param { Theta, A0, A1, B0, B1 };

// Analytic d born_point / d param in Behavior::vec() order.
Vec8 born_point_derivative(const QubitRealization& r, Param p);

// Rows: T_{psi_theta}, T_{|01>}, T_{|10>}, dP/da0, dP/db0, with
// T_psi[k] = <psi| M_k |phi_theta> and psi_theta = sin(theta)|00> - cos(theta)|11>.
struct TangentBasis {
    std::array<Vec8, 5> vecs{};
};

TangentBasis tangent_basis(const QubitRealization& r);

struct Sector {
    int s = 1;
    int t = 1;
    bool operator==(const Sector&) const = default;
};

struct SectorSolution {
    std::array<double, 5> coeffs{};  // (x, y, z, a, b) on the tangent rows
    std::array<double, 2> alphas{};  // <B_y> of the sector point
    double D = 0.0;
};

// Coefficients moving P into the sector space L_st: <A_0> = s, <A_1> = t,
// <A_0 B_y> = s <B_y>, <A_1 B_y> = t <B_y>. Sector (-1,+1) is excluded.
SectorSolution solve_sector(const QubitRealization& r, Sector sec);

// s t sin(a~0^s - b_y) sin(a~1^t - b_y); nonnegative iff |alpha_y| <= 1.
std::array<double, 2> delta_condition(const QubitRealization& r, Sector sec);

struct FlatnessWitness {
    Sector sector;
    std::array<double, 5> coeffs{};
    std::array<double, 2> alphas{};
    Behavior L;                     // the local sector point
    std::array<double, 2> deltas{};
    double residual = 0.0;          // |L - (P + coeffs . T)|_inf
    bool nonlocal = true;           // whether P itself is nonlocal
};

// Sectors tried in the order (+,+), (+,-), (-,-). Returns nothing iff the
// realization passes the strict alternation check.
std::optional<FlatnessWitness> find_witness(const QubitRealization& r);

struct Orthocomplement {
    std::vector<Vec8> basis;  // orthonormal, orthogonal to every tangent row
    int rank = 0;             // numerical rank of the tangent rows
    bool rank_deficient = false;
};

// Gram-Schmidt with pivoting; pivots below 1e-10 count as dependent.
Orthocomplement orthocomplement(const TangentBasis& t);

}  // namespace qset
