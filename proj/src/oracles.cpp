#include "qset/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <numbers>
#include <random>

#include "qset/error.hpp"
#include "qset/flat_witness.hpp"
#include "qset/parallel.hpp"

namespace qset {

namespace {

constexpr double PI = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

Behavior DeterministicVertex::behavior() const {
    Behavior p;
    for (int x = 0; x < 2; ++x) p.margA[x] = aOut[x];
    for (int y = 0; y < 2; ++y) p.margB[y] = bOut[y];
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) p.corr[x][y] = aOut[x] * bOut[y];
    return p;
}

std::vector<DeterministicVertex> deterministic_vertices() {
    std::vector<DeterministicVertex> out;
    for (int m = 0; m < 16; ++m) {
        DeterministicVertex v;
        v.aOut = {m & 1 ? -1 : 1, m & 2 ? -1 : 1};
        v.bOut = {m & 4 ? -1 : 1, m & 8 ? -1 : 1};
        out.push_back(v);
    }
    return out;
}

// Phase-one simplex with Bland's rule on: sum_j w_j = 1, sum_j w_j v_j = P, w >= 0.
LocalLpResult local_membership_lp(const Behavior& p) {
    require_valid(p);
    const auto verts = deterministic_vertices();
    const int n = static_cast<int>(verts.size());
    const int m = 9;
    const int cols = n + m;
    const double eps = 1e-12;

    std::vector<std::vector<double>> T(m, std::vector<double>(cols + 1, 0.0));
    std::array<double, 9> sigma{};
    const Vec8 pv = p.vec();
    for (int i = 0; i < m; ++i) {
        double rhs = i == 0 ? 1.0 : pv[i - 1];
        sigma[i] = rhs < 0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) {
            double a = i == 0 ? 1.0 : verts[j].behavior().vec()[i - 1];
            T[i][j] = sigma[i] * a;
        }
        T[i][n + i] = 1.0;
        T[i][cols] = sigma[i] * rhs;
    }
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    // Reduced costs for minimizing the sum of artificials.
    std::vector<double> rc(cols + 1, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) rc[j] -= T[i][j];
    for (int i = 0; i < m; ++i) rc[cols] -= T[i][cols];

    for (int iter = 0; iter < 1000; ++iter) {
        int enter = -1;
        for (int j = 0; j < cols; ++j)
            if (rc[j] < -eps) {
                enter = j;
                break;
            }
        if (enter < 0) break;
        int leave = -1;
        double best = INFINITY;
        for (int i = 0; i < m; ++i) {
            if (T[i][enter] <= eps) continue;
            double ratio = T[i][cols] / T[i][enter];
            if (leave < 0 || ratio < best - eps || (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave < 0) break;  // unbounded cannot happen in phase one
        double piv = T[leave][enter];
        for (auto& v : T[leave]) v /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave || T[i][enter] == 0.0) continue;
            double f = T[i][enter];
            for (int j = 0; j <= cols; ++j) T[i][j] -= f * T[leave][j];
        }
        double f = rc[enter];
        for (int j = 0; j <= cols; ++j) rc[j] -= f * T[leave][j];
        basis[leave] = enter;
    }

    LocalLpResult res;
    res.infeasibility = -rc[cols];
    res.local = res.infeasibility <= 1e-9;
    if (res.local) {
        res.weights.assign(n, 0.0);
        for (int i = 0; i < m; ++i)
            if (basis[i] < n) res.weights[basis[i]] = T[i][cols];
    } else {
        std::array<double, 9> y{};
        for (int i = 0; i < m; ++i) y[i] = sigma[i] * (1.0 - rc[n + i]);
        res.separator.offset = y[0];
        for (int k = 0; k < 8; ++k) res.separator.coeffs[k] = y[k + 1];
    }
    return res;
}

BellMaxResult bell_max_q2(const BellFunctional& beta, int resolution, int refinements) {
    if (resolution < 16) throw Error(ErrorKind::Precondition, "resolution must be at least 16");
    auto value = [&](const std::array<double, 5>& z) {
        return bell_value(beta, born_point({z[0], {z[1], z[2]}, {z[3], z[4]}}));
    };

    // Grid pass, keeping a few of the best points as refinement starts.
    const int keep = 4;
    std::vector<std::pair<double, std::array<double, 5>>> top;
    const double h0 = PI / resolution;
    std::array<int, 5> idx{};
    const long total = static_cast<long>(std::pow(resolution, 5));
    for (long k = 0; k < total; ++k) {
        long r = k;
        std::array<double, 5> z{};
        for (int d = 4; d >= 0; --d) {
            idx[d] = static_cast<int>(r % resolution);
            r /= resolution;
            z[d] = idx[d] * h0;
        }
        double v = value(z);
        if (static_cast<int>(top.size()) < keep || v > top.back().first) {
            top.emplace_back(v, z);
            std::stable_sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
            if (static_cast<int>(top.size()) > keep) top.pop_back();
        }
    }

    BellMaxResult best;
    best.value = -INFINITY;
    for (const auto& [v0, z0] : top) {
        std::array<double, 5> z = z0;
        double v = v0;
        double h = h0;
        std::vector<double> hist{v};
        for (int round = 0; round < refinements || h > 1e-12; ++round) {
            bool improved = false;
            for (int d = 0; d < 5; ++d)
                for (double dir : {1.0, -1.0}) {
                    auto trial = z;
                    trial[d] += dir * h;
                    double tv = value(trial);
                    if (tv > v) {
                        v = tv;
                        z = trial;
                        improved = true;
                    }
                }
            if (!improved) h /= 2;
            hist.push_back(v);
            if (round > 100000) break;
        }
        if (v > best.value) {
            best.value = v;
            best.argmax = {z[0], {z[1], z[2]}, {z[3], z[4]}};
            best.history = hist;
        }
    }
    return best;
}

namespace {

struct Model {
    bool local_family;
    int dim() const { return local_family ? 5 + 16 + 1 : 11; }
};

struct Eval {
    Vec8 P1{}, P2{};
    double lambda = 0.5;
    Eigen::Matrix<double, 9, 1> r;
    Eigen::Matrix<double, 9, Eigen::Dynamic> J;
};

QubitRealization realization_at(const Eigen::VectorXd& z, int off) {
    return {z[off], {z[off + 1], z[off + 2]}, {z[off + 3], z[off + 4]}};
}

void evaluate(const Model& model, const Eigen::VectorXd& z, const Vec8& target, double sep_target,
              const std::vector<Vec8>& verts, Eval& e) {
    const int n = model.dim();
    e.J.setZero(9, n);
    const double mu = z[n - 1];
    e.lambda = 0.5 + 0.48 * std::sin(mu);

    QubitRealization r1 = realization_at(z, 0);
    e.P1 = born_point(r1).vec();
    std::array<Vec8, 5> d1;
    for (int p = 0; p < 5; ++p) d1[p] = born_point_derivative(r1, static_cast<Param>(p));

    std::vector<Vec8> d2;
    if (model.local_family) {
        std::array<double, 16> w{};
        double mx = -INFINITY, sum = 0;
        for (int j = 0; j < 16; ++j) mx = std::max(mx, z[5 + j]);
        for (int j = 0; j < 16; ++j) sum += (w[j] = std::exp(z[5 + j] - mx));
        e.P2.fill(0.0);
        for (int j = 0; j < 16; ++j) {
            w[j] /= sum;
            for (int k = 0; k < 8; ++k) e.P2[k] += w[j] * verts[j][k];
        }
        d2.resize(16);
        for (int j = 0; j < 16; ++j)
            for (int k = 0; k < 8; ++k) d2[j][k] = w[j] * (verts[j][k] - e.P2[k]);
    } else {
        QubitRealization r2 = realization_at(z, 5);
        e.P2 = born_point(r2).vec();
        d2.resize(5);
        for (int p = 0; p < 5; ++p) d2[p] = born_point_derivative(r2, static_cast<Param>(p));
    }

    for (int k = 0; k < 8; ++k) {
        e.r[k] = e.lambda * e.P1[k] + (1 - e.lambda) * e.P2[k] - target[k];
        for (int p = 0; p < 5; ++p) e.J(k, p) = e.lambda * d1[p][k];
        for (std::size_t p = 0; p < d2.size(); ++p) e.J(k, 5 + p) = (1 - e.lambda) * d2[p][k];
        e.J(k, n - 1) = 0.48 * std::cos(mu) * (e.P1[k] - e.P2[k]);
    }

    // Keeps the two parts apart so the trivial split P = P is not a solution.
    int kmax = 0;
    for (int k = 1; k < 8; ++k)
        if (std::abs(e.P1[k] - e.P2[k]) > std::abs(e.P1[kmax] - e.P2[kmax])) kmax = k;
    double gap = e.P1[kmax] - e.P2[kmax];
    double short_by = sep_target - std::abs(gap);
    e.r[8] = std::max(0.0, short_by);
    if (short_by > 0) {
        double sg = gap >= 0 ? 1.0 : -1.0;
        for (int p = 0; p < 5; ++p) e.J(8, p) = -sg * d1[p][kmax];
        for (std::size_t p = 0; p < d2.size(); ++p) e.J(8, 5 + p) = sg * d2[p][kmax];
    }
}

struct TrialOutcome {
    double residual = INFINITY;
    double separation = 0.0;
    Behavior P1, P2;
    double lambda = 0.0;
};

TrialOutcome run_trial(const Model& model, const Vec8& target, const DecompositionOptions& opt, std::uint64_t seed,
                       const std::vector<Vec8>& verts, bool from_hint) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = model.dim();
    Eigen::VectorXd z(n);
    auto fill_realization = [&](int off) {
        if (from_hint && opt.hint) {
            const auto& h = *opt.hint;
            double base[5] = {h.theta, h.a[0], h.a[1], h.b[0], h.b[1]};
            for (int i = 0; i < 5; ++i) z[off + i] = base[i] + 0.3 * gauss(rng);
        } else {
            z[off] = PI * unit(rng);
            for (int i = 1; i < 5; ++i) z[off + i] = 2 * PI * unit(rng);
        }
    };
    fill_realization(0);
    if (model.local_family) {
        for (int j = 0; j < 16; ++j) z[5 + j] = 2.0 * gauss(rng);
    } else {
        fill_realization(5);
    }
    z[n - 1] = -1.5 + 3.0 * unit(rng);

    const double sep_target = 1.5 * opt.min_separation;
    Eval e;
    evaluate(model, z, target, sep_target, verts, e);
    double cost = e.r.squaredNorm();
    double damping = 1e-3;
    for (int it = 0; it < opt.max_iterations && cost > 1e-32; ++it) {
        Eigen::MatrixXd A = e.J.transpose() * e.J;
        Eigen::VectorXd g = e.J.transpose() * e.r;
        bool accepted = false;
        while (damping < 1e12) {
            Eigen::MatrixXd M = A;
            for (int i = 0; i < n; ++i) M(i, i) += damping * (A(i, i) + 1e-12);
            Eigen::VectorXd step = M.ldlt().solve(-g);
            Eigen::VectorXd zn = z + step;
            Eval en;
            evaluate(model, zn, target, sep_target, verts, en);
            double cn = en.r.squaredNorm();
            if (cn < cost) {
                z = zn;
                e = std::move(en);
                cost = cn;
                damping = std::max(damping / 3, 1e-15);
                accepted = true;
                break;
            }
            damping *= 4;
        }
        if (!accepted) break;
    }

    TrialOutcome out;
    out.residual = e.r.head<8>().cwiseAbs().maxCoeff();
    for (int k = 0; k < 8; ++k) out.separation = std::max(out.separation, std::abs(e.P1[k] - e.P2[k]));
    out.P1 = Behavior::from_vec(e.P1);
    out.P2 = Behavior::from_vec(e.P2);
    out.lambda = e.lambda;
    return out;
}

}  // namespace

DecompositionResult decomposition_search(const Behavior& p, const DecompositionOptions& opt) {
    require_valid(p);
    const Vec8 target = p.vec();
    std::vector<Vec8> verts;
    for (const auto& v : deterministic_vertices()) verts.push_back(v.behavior().vec());

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(std::max(opt.trials, 0)));
    std::vector<std::uint64_t> seeds(outcomes.size());
    std::atomic<int> first_hit{INT_MAX};
    auto accept = [&](const TrialOutcome& o) {
        return o.residual <= opt.residual_tol && o.separation >= opt.min_separation && validate(o.P1).empty() &&
               validate(o.P2).empty();
    };
    parallel_for(outcomes.size(), [&](std::size_t i) {
        int trial = static_cast<int>(i);
        if (trial > first_hit.load()) return;
        seeds[i] = splitmix64(opt.seed ^ splitmix64(static_cast<std::uint64_t>(trial)));
        Model model{trial % 2 == 1};
        bool from_hint = opt.hint.has_value() && trial % 4 < 2;
        outcomes[i] = run_trial(model, target, opt, seeds[i], verts, from_hint);
        if (accept(outcomes[i])) {
            int cur = first_hit.load();
            while (trial < cur && !first_hit.compare_exchange_weak(cur, trial)) {
            }
        }
    });

    DecompositionResult res;
    res.seed = opt.seed;
    int hit = first_hit.load();
    if (hit == INT_MAX) return res;
    const auto& o = outcomes[static_cast<std::size_t>(hit)];
    res.found = true;
    res.P1 = o.P1;
    res.P2 = o.P2;
    res.lambda = o.lambda;
    res.residual = o.residual;
    res.separation = o.separation;
    res.family = hit % 2 == 1 ? "q2+local" : "q2+q2";
    res.trial = hit;
    res.seed = seeds[static_cast<std::size_t>(hit)];
    return res;
}

}  // namespace qset
