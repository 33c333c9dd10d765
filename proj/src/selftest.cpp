#include "qset/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "qset/error.hpp"
#include "qset/extremality.hpp"

namespace qset {

namespace {

constexpr double PI = std::numbers::pi;

struct RawResult {
    QubitRealization realization;
    ReconstructionTrace trace;
};

// Input satisfies the self-test equalities with the fixed sign placement.
RawResult reconstruct_raw(const Behavior& q) {
    const CorrelatorTable c = steered_correlators(q).c;
    ReconstructionTrace tr;

    // Bob's relative angle from the best-conditioned (alpha, x) pair.
    double best_cond = -1.0;
    for (int al = 0; al < 2; ++al)
        for (int x = 0; x < 2; ++x) {
            double c0 = c[al][x][0], c1 = c[al][x][1];
            double cond = std::min(1.0 - c0 * c0, 1.0 - c1 * c1);
            if (cond <= best_cond) continue;
            best_cond = cond;
            tr.bgauge = x == 0 ? std::acos(c1) - std::acos(c0) : std::acos(c1) + std::acos(c0);
        }
    const double sb = std::sin(tr.bgauge), cb = std::cos(tr.bgauge);
    if (!(sb > 1e-12)) throw Error(ErrorKind::InconsistentGauge, "Bob's measurements coincide");

    double resid = 0.0;
    for (int al = 0; al < 2; ++al)
        for (int x = 0; x < 2; ++x) {
            double c0 = c[al][x][0], c1 = c[al][x][1];
            double s = (c0 - c1 * cb) / sb;
            // w = pi at equality points
            if (s < 0 && s > -TOL_EQ) s = 0.0;
            tr.w[al][x] = std::atan2(s, c1);
            resid = std::max(resid, std::abs(std::hypot(s, c1) - 1.0));
        }
    for (int al = 0; al < 2; ++al) {
        resid = std::max(resid, tr.w[al][1] - tr.bgauge);
        resid = std::max(resid, tr.bgauge - tr.w[al][0]);
        resid = std::max(resid, -tr.w[al][1]);
        resid = std::max(resid, tr.w[al][0] - PI);
    }
    tr.gauge_residual = resid;
    if (resid > TOL_EQ)
        throw Error(ErrorKind::InconsistentGauge, "gauge consistency residual " + std::to_string(resid));

    // sin(dl_x) = cos(2 theta) sin(rho - sg_x).
    std::array<double, 2> dl{}, sg{};
    for (int x = 0; x < 2; ++x) {
        dl[x] = (tr.w[0][x] - tr.w[1][x]) / 2;
        sg[x] = (tr.w[0][x] + tr.w[1][x]) / 2;
    }
    double num = std::sin(dl[0]) * std::sin(sg[1]) - std::sin(dl[1]) * std::sin(sg[0]);
    double den = std::sin(dl[0]) * std::cos(sg[1]) - std::sin(dl[1]) * std::cos(sg[0]);
    double rho = 0.0, C = 0.0;
    if (std::abs(num) + std::abs(den) < 1e-12) {
        rho = tr.w[0][0];
    } else {
        rho = std::atan2(num, den);
        int xs = std::abs(std::sin(rho - sg[0])) >= std::abs(std::sin(rho - sg[1])) ? 0 : 1;
        C = std::sin(dl[xs]) / std::sin(rho - sg[xs]);
        if (C < 0) {
            rho += PI;
            C = -C;
        }
    }
    if (C > 1.0 + TOL_EQ) throw Error(ErrorKind::NoThetaBranch, "cos(2 theta) = " + std::to_string(C));
    C = std::min(C, 1.0);
    tr.theta_branches = {std::acos(C) / 2, std::acos(-C) / 2};
    tr.theta = tr.theta_branches[0];
    if (!(tr.theta > 0 && tr.theta <= PI / 4 + 1e-12))
        throw Error(ErrorKind::NoThetaBranch, "no branch in (0, pi/4]");
    tr.gamma = rho / 2;
    for (int x = 0; x < 2; ++x) tr.gamma_x[x] = tr.gamma - (tr.w[0][x] + tr.w[1][x]) / 4;

    // Undo the steering from both branches and average on the circle.
    QubitRealization r;
    r.theta = tr.theta;
    for (int x = 0; x < 2; ++x) {
        double from_plus = modified_angle(tr.theta, -1, rho - tr.w[0][x]);
        double from_minus = modified_angle(tr.theta, +1, rho - tr.w[1][x]);
        r.a[x] = std::atan2(std::sin(from_plus) + std::sin(from_minus), std::cos(from_plus) + std::cos(from_minus));
    }
    r.b = {rho - tr.bgauge, rho};
    return {r, tr};
}

}  // namespace

Reconstruction reconstruct_realization(const Behavior& p) {
    require_valid(p);
    std::optional<SymmetryElement> g = lemma1_relabeled(p);
    if (!g) throw Error(ErrorKind::NotSelfTesting, "self-test equalities fail under every relabeling");
    RawResult raw = reconstruct_raw(apply_symmetry(*g, p));
    CanonicalRealization canon = canonicalize(raw.realization, ThetaSector::Quarter);

    Reconstruction out;
    out.realization = canon.realization;
    out.trace = raw.trace;
    out.element = compose(canon.element, *g);
    out.roundtrip_error = max_abs_diff(born_point(out.realization), apply_symmetry(out.element, p));
    if (out.roundtrip_error > TOL_RECON)
        throw Error(ErrorKind::NotSelfTesting,
                    "reconstructed realization misses the input by " + std::to_string(out.roundtrip_error));
    return out;
}

SelftestCertificate selftest_certificate(const Behavior& p) {
    SelftestCertificate cert;
    cert.reconstruction = reconstruct_realization(p);
    std::optional<SymmetryElement> g = lemma1_relabeled(p);
    Lemma1Result l1 = lemma1_check(apply_symmetry(*g, p));
    cert.residuals = l1.residuals;
    for (double r : l1.residuals) cert.max_residual = std::max(cert.max_residual, std::abs(r));
    cert.roundtrip_error = cert.reconstruction.roundtrip_error;
    return cert;
}

}  // namespace qset
