#include "qset/extremality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qset/error.hpp"
#include "qset/selftest.hpp"

namespace qset {

namespace {

constexpr double PI = std::numbers::pi;

void require_nonlocal(const Behavior& p) {
    if (is_local(p)) throw Error(ErrorKind::LocalInput, "behavior is local");
}

using AsinTable = std::array<std::array<std::array<double, 2>, 2>, 2>;

// Values within a few ulps of +-1 read as +-1.
double unit_asin(double v) {
    constexpr double SNAP = 8 * std::numeric_limits<double>::epsilon();
    if (1.0 - std::abs(v) <= SNAP) return std::copysign(PI / 2, v);
    return std::asin(v);
}

AsinTable asin_table(const CorrelatorTable& c) {
    AsinTable t{};
    for (int al = 0; al < 2; ++al)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) t[al][x][y] = unit_asin(c[al][x][y]);
    return t;
}

// Sum of eps[x][y] * asin c[u_x][x][y].
double pattern_sum(const AsinTable& t, const SignPattern& e, int u0, int u1) {
    return e.eps[0][0] * t[u0][0][0] + e.eps[0][1] * t[u0][0][1] + e.eps[1][0] * t[u1][1][0] +
           e.eps[1][1] * t[u1][1][1];
}

// Canonical realization with theta in (0, pi/2) carrying the same behavior.
QubitRealization below_half_pi(const QubitRealization& r) {
    if (!in_canonical_range(r)) throw Error(ErrorKind::Precondition, "realization is not canonical");
    if (std::abs(std::sin(2.0 * r.theta)) < 1e-12)
        throw Error(ErrorKind::DegenerateTheta, "theta is a multiple of pi/2");
    if (r.theta < PI / 2) return r;
    return canonicalize({PI - r.theta, {-r.a[0], -r.a[1]}, r.b}).realization;
}

AlternationResult finish(std::array<double, 8> m, bool strict, int first_strict, int last_strict) {
    AlternationResult res;
    res.margins = m;
    res.holds = true;
    for (int i = 0; i < 8; ++i) {
        bool tight = strict && i >= first_strict && i <= last_strict;
        if (tight ? !(m[i] > TOL_EQ) : !(m[i] >= -TOL_EQ)) res.holds = false;
    }
    return res;
}

}  // namespace

const std::vector<SignPattern>& sign_patterns() {
    static const std::vector<SignPattern> pats = [] {
        std::vector<SignPattern> v;
        for (int m = 0; m < 16; ++m) {
            if (__builtin_popcount(m) % 2 == 0) continue;
            SignPattern p;
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) p.eps[x][y] = (m >> (2 * x + y)) & 1 ? -1 : 1;
            v.push_back(p);
        }
        return v;
    }();
    return pats;
}

SignPattern lemma1_pattern() {
    SignPattern p;
    p.eps = {{{1, -1}, {1, 1}}};
    return p;
}

Prop1Result prop1_check(const Behavior& p, Side side) {
    SteeredCorrelators s = side == Side::Alice ? steered_correlators(p) : bob_steered_correlators(p);
    AsinTable t = asin_table(s.c);
    Prop1Result res;
    res.holds = true;
    for (int st = 0; st < 4; ++st) {
        int si = st >> 1, ti = st & 1;
        for (int k = 0; k < 4; ++k) {
            SignPattern e;
            e.eps = {{{1, 1}, {1, 1}}};
            e.eps[k >> 1][k & 1] = -1;
            double sum = pattern_sum(t, e, si, ti);
            res.residuals[4 * st + k] = {sum - PI, -sum - PI};
            res.max_abs_sum = std::max(res.max_abs_sum, std::abs(sum));
            if (std::abs(sum) > PI + TOL_EQ) res.holds = false;
        }
    }
    return res;
}

bool masanes_check(const Behavior& p) {
    for (double m : {p.margA[0], p.margA[1], p.margB[0], p.margB[1]})
        if (std::abs(m) > TOL_EQ) throw Error(ErrorKind::NonzeroMarginals, "marginals must vanish");
    std::array<std::array<double, 2>, 2> t{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double v = p.corr[x][y];
            if (std::abs(v) > 1.0 + TOL_CLAMP)
                throw Error(ErrorKind::InvalidBehavior, "correlator outside [-1, 1]");
            t[x][y] = unit_asin(std::clamp(v, -1.0, 1.0));
        }
    for (int k = 0; k < 4; ++k) {
        double sum = 0.0;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) sum += (2 * x + y == k ? -1.0 : 1.0) * t[x][y];
        if (std::abs(sum) > PI + TOL_EQ) return false;
    }
    return true;
}

Lemma1Result lemma1_check(const Behavior& p) {
    require_nonlocal(p);
    AsinTable t = asin_table(steered_correlators(p).c);
    Lemma1Result res;
    res.holds = true;
    const SignPattern e = lemma1_pattern();
    for (int st = 0; st < 4; ++st) {
        res.residuals[st] = pattern_sum(t, e, st >> 1, st & 1) - PI;
        if (std::abs(res.residuals[st]) > TOL_EQ) res.holds = false;
    }
    return res;
}

std::optional<SymmetryElement> lemma1_relabeled(const Behavior& p) {
    require_nonlocal(p);
    for (const auto& g : symmetry_group()) {
        Behavior q = apply_symmetry(g, p);
        bool ok = true;
        for (double m : q.margA)
            if (!(std::abs(m) < 1.0)) ok = false;
        if (ok && lemma1_check(q).holds) return g;
    }
    return std::nullopt;
}

Theorem1Result theorem1_behavior_check(const Behavior& p) {
    require_nonlocal(p);
    AsinTable t = asin_table(steered_correlators(p).c);
    Theorem1Result res;
    res.best_residual = INFINITY;
    for (const auto& e : sign_patterns()) {
        double worst = 0.0;
        for (int u = 0; u < 4; ++u) worst = std::max(worst, std::abs(pattern_sum(t, e, u >> 1, u & 1) - PI));
        if (worst < res.best_residual) res.best_residual = worst;
        if (worst <= TOL_EQ && !res.holds) {
            res.holds = true;
            res.pattern = e;
        }
    }
    return res;
}

AlternationResult full_alternation_check(const QubitRealization& r, bool strict) {
    QubitRealization q = below_half_pi(r);
    AngleTable at = modified_angles(q);
    std::array<double, 8> m{};
    for (int al = 0; al < 2; ++al) {
        double x0 = mod_pi(at[al][0]), x1 = mod_pi(at[al][1]);
        m[al] = x0;
        m[2 + al] = q.b[0] - x0;
        m[4 + al] = x1 - q.b[0];
        m[6 + al] = q.b[1] - x1;
    }
    return finish(m, strict, 2, 7);
}

AlternationResult bob_alternation_check(const QubitRealization& r, bool strict) {
    QubitRealization q = below_half_pi(r);
    AngleTable bt = bob_modified_angles(q);
    std::array<double, 8> m{};
    for (int be = 0; be < 2; ++be) {
        double y0 = mod_pi(bt[be][0]), y1 = mod_pi(bt[be][1]);
        m[be] = y0 - q.a[0];
        m[2 + be] = q.a[1] - y0;
        m[4 + be] = y1 - q.a[1];
        m[6 + be] = PI - y1;
    }
    return finish(m, strict, 0, 5);
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Local: return "Local";
        case Verdict::ExtremalExposed: return "ExtremalExposed";
        case Verdict::ExtremalNonExposed: return "ExtremalNonExposed";
        case Verdict::NonExtremalInQ: return "NonExtremalInQ";
        case Verdict::FailsNecessaryQ2Pure: return "FailsNecessaryQ2Pure";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "Unknown";
}

Classification classify(const Behavior& p) {
    require_valid(p);
    Classification out;
    auto& d = out.details;
    auto ch = chsh_all(p);
    d.max_chsh = *std::max_element(ch.begin(), ch.end());
    if (is_local(p)) {
        out.verdict = Verdict::Local;
        d.reason = "all CHSH values <= 2";
        return out;
    }

    Theorem1Result t1 = theorem1_behavior_check(p);
    d.theorem1_residual = t1.best_residual;
    d.pattern = t1.pattern;
    if (t1.holds) {
        try {
            Reconstruction rec = reconstruct_realization(p);
            AlternationResult alt = full_alternation_check(rec.realization, true);
            d.realization = rec.realization;
            d.margins = alt.margins;
            out.verdict = alt.holds ? Verdict::ExtremalExposed : Verdict::ExtremalNonExposed;
            d.reason = alt.holds ? "extremality equalities hold; strict alternation"
                                 : "extremality equalities hold; alternation has equality margins";
        } catch (const Error& e) {
            out.verdict = Verdict::Indeterminate;
            d.reason = std::string("extremality equalities hold but reconstruction failed: ") + e.what();
        }
        return out;
    }

    auto side_ok = [&](Side s) {
        try {
            return prop1_check(p, s).holds;
        } catch (const Error&) {
            return true;
        }
    };
    d.prop1_alice = side_ok(Side::Alice);
    d.prop1_bob = side_ok(Side::Bob);
    if (!d.prop1_alice && !d.prop1_bob) {
        out.verdict = Verdict::FailsNecessaryQ2Pure;
        d.reason = "necessary qubit inequalities violated on both sides";
        return out;
    }
    out.verdict = Verdict::NonExtremalInQ;
    d.membership_certified = false;
    d.reason = "extremality equalities fail; membership in Q not certified";
    return out;
}

}  // namespace qset
