#include "qset/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>

#include "qset/error.hpp"

namespace qset {

Vec8 Behavior::vec() const {
    return {margA[0], margA[1], margB[0], margB[1], corr[0][0], corr[1][0], corr[0][1], corr[1][1]};
}

Behavior Behavior::from_vec(const Vec8& v) {
    Behavior p;
    p.margA = {v[0], v[1]};
    p.margB = {v[2], v[3]};
    p.corr[0][0] = v[4];
    p.corr[1][0] = v[5];
    p.corr[0][1] = v[6];
    p.corr[1][1] = v[7];
    return p;
}

Vec8 Behavior::serial() const {
    return {margA[0], margA[1], margB[0], margB[1], corr[0][0], corr[0][1], corr[1][0], corr[1][1]};
}

double max_abs_diff(const Behavior& p, const Behavior& q) {
    Vec8 u = p.vec(), v = q.vec();
    double m = 0.0;
    for (int i = 0; i < 8; ++i) m = std::max(m, std::abs(u[i] - v[i]));
    return m;
}

Probabilities probabilities(const Behavior& p) {
    Probabilities out{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    double sa = a == 0 ? 1.0 : -1.0;
                    double sb = b == 0 ? 1.0 : -1.0;
                    out[a][b][x][y] =
                        (1.0 + sa * p.margA[x] + sb * p.margB[y] + sa * sb * p.corr[x][y]) / 4.0;
                }
    return out;
}

std::vector<std::string> validate(const Behavior& p) {
    std::vector<std::string> out;
    auto check = [&](const char* name, double v) {
        if (!std::isfinite(v) || std::abs(v) > 1.0 + TOL_EQ) {
            std::ostringstream os;
            os << "component out of range: " << name << " = " << v;
            out.push_back(os.str());
        }
    };
    check("margA[0]", p.margA[0]);
    check("margA[1]", p.margA[1]);
    check("margB[0]", p.margB[0]);
    check("margB[1]", p.margB[1]);
    check("corr[0][0]", p.corr[0][0]);
    check("corr[0][1]", p.corr[0][1]);
    check("corr[1][0]", p.corr[1][0]);
    check("corr[1][1]", p.corr[1][1]);

    Probabilities pr = probabilities(p);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    if (!(pr[a][b][x][y] >= -TOL_EQ)) {
                        std::ostringstream os;
                        os << "negative probability: p(" << (a ? '-' : '+') << ',' << (b ? '-' : '+')
                           << '|' << x << ',' << y << ") = " << pr[a][b][x][y];
                        out.push_back(os.str());
                    }
    return out;
}

void require_valid(const Behavior& p) {
    auto v = validate(p);
    if (v.empty()) return;
    std::string msg;
    for (const auto& s : v) msg += (msg.empty() ? "" : "; ") + s;
    throw Error(ErrorKind::InvalidBehavior, msg);
}

BellFunctional BellFunctional::chsh() {
    BellFunctional b;
    b.coeffs = {0, 0, 0, 0, 1, 1, 1, -1};
    return b;
}

double bell_value(const BellFunctional& beta, const Behavior& p) {
    Vec8 v = p.vec();
    double s = beta.offset;
    for (int i = 0; i < 8; ++i) s += beta.coeffs[i] * v[i];
    return s;
}

std::array<double, 8> chsh_all(const Behavior& p) {
    std::array<double, 8> out{};
    int k = 0;
    for (int m = 0; m < 16; ++m) {
        int minus = __builtin_popcount(m);
        if (minus % 2 == 0) continue;
        double s = 0.0;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) s += ((m >> (2 * x + y)) & 1 ? -1.0 : 1.0) * p.corr[x][y];
        out[k++] = s;
    }
    return out;
}

bool is_local(const Behavior& p) {
    require_valid(p);
    auto v = chsh_all(p);
    return *std::max_element(v.begin(), v.end()) <= 2.0 + TOL_EQ;
}

bool SymmetryElement::is_identity() const { return *this == SymmetryElement{}; }

std::string to_string(const SymmetryElement& g) {
    std::string s;
    s += g.partySwap ? 'P' : '-';
    s += g.inputSwapA ? 'X' : '-';
    s += g.inputSwapB ? 'Y' : '-';
    s += ':';
    for (bool f : g.outputFlip) s += f ? '1' : '0';
    return s;
}

Behavior apply_symmetry(const SymmetryElement& g, const Behavior& p) {
    Behavior q = p;
    for (int x = 0; x < 2; ++x)
        if (g.outputFlip[x]) {
            q.margA[x] = -q.margA[x];
            q.corr[x][0] = -q.corr[x][0];
            q.corr[x][1] = -q.corr[x][1];
        }
    for (int y = 0; y < 2; ++y)
        if (g.outputFlip[2 + y]) {
            q.margB[y] = -q.margB[y];
            q.corr[0][y] = -q.corr[0][y];
            q.corr[1][y] = -q.corr[1][y];
        }
    if (g.inputSwapA) {
        std::swap(q.margA[0], q.margA[1]);
        std::swap(q.corr[0], q.corr[1]);
    }
    if (g.inputSwapB) {
        std::swap(q.margB[0], q.margB[1]);
        std::swap(q.corr[0][0], q.corr[0][1]);
        std::swap(q.corr[1][0], q.corr[1][1]);
    }
    if (g.partySwap) {
        std::swap(q.margA, q.margB);
        std::swap(q.corr[0][1], q.corr[1][0]);
    }
    return q;
}

namespace {

// out[i] = sign[i] * in[perm[i]] on Behavior::vec() coordinates.
struct SignedPerm {
    std::array<int, 8> perm{};
    std::array<int, 8> sign{};
    auto operator<=>(const SignedPerm&) const = default;
};

SignedPerm matrix_of(const SymmetryElement& g) {
    Vec8 tag{};
    for (int i = 0; i < 8; ++i) tag[i] = i + 1;
    Vec8 img = apply_symmetry(g, Behavior::from_vec(tag)).vec();
    SignedPerm m;
    for (int i = 0; i < 8; ++i) {
        m.sign[i] = img[i] > 0 ? 1 : -1;
        m.perm[i] = static_cast<int>(std::abs(img[i])) - 1;
    }
    return m;
}

SignedPerm multiply(const SignedPerm& g, const SignedPerm& h) {
    SignedPerm m;
    for (int i = 0; i < 8; ++i) {
        m.perm[i] = h.perm[g.perm[i]];
        m.sign[i] = g.sign[i] * h.sign[g.perm[i]];
    }
    return m;
}

struct GroupTables {
    std::vector<SymmetryElement> elements;
    std::map<SignedPerm, SymmetryElement> by_matrix;
};

GroupTables build_group() {
    GroupTables t;
    // All field combinations, indexed by their action; distinct fields may not give distinct actions.
    for (int m = 0; m < 128; ++m) {
        SymmetryElement g;
        g.partySwap = m & 1;
        g.inputSwapA = m & 2;
        g.inputSwapB = m & 4;
        for (int k = 0; k < 4; ++k) g.outputFlip[k] = (m >> (3 + k)) & 1;
        t.by_matrix.emplace(matrix_of(g), g);
    }

    std::vector<SymmetryElement> gens(7);
    gens[0].partySwap = true;
    gens[1].inputSwapA = true;
    gens[2].inputSwapB = true;
    for (int k = 0; k < 4; ++k) gens[3 + k].outputFlip[k] = true;

    std::map<SignedPerm, bool> seen;
    std::deque<SignedPerm> queue;
    SignedPerm id = matrix_of(SymmetryElement{});
    seen[id] = true;
    queue.push_back(id);
    while (!queue.empty()) {
        SignedPerm cur = queue.front();
        queue.pop_front();
        t.elements.push_back(t.by_matrix.at(cur));
        for (const auto& g : gens) {
            SignedPerm next = multiply(matrix_of(g), cur);
            if (!seen.count(next)) {
                seen[next] = true;
                queue.push_back(next);
            }
        }
    }
    return t;
}

const GroupTables& tables() {
    static const GroupTables t = build_group();
    return t;
}

}  // namespace

SymmetryElement compose(const SymmetryElement& g, const SymmetryElement& h) {
    return tables().by_matrix.at(multiply(matrix_of(g), matrix_of(h)));
}

SymmetryElement inverse(const SymmetryElement& g) {
    SignedPerm m = matrix_of(g), inv;
    for (int i = 0; i < 8; ++i) {
        inv.perm[m.perm[i]] = i;
        inv.sign[m.perm[i]] = m.sign[i];
    }
    return tables().by_matrix.at(inv);
}

const std::vector<SymmetryElement>& symmetry_group() { return tables().elements; }

CanonicalBehavior canonical_behavior(const Behavior& p) {
    CanonicalBehavior best{p, SymmetryElement{}};
    Vec8 key = p.serial();
    for (const auto& g : symmetry_group()) {
        Behavior q = apply_symmetry(g, p);
        Vec8 k = q.serial();
        if (k < key) {
            key = k;
            best = {q, g};
        }
    }
    return best;
}

}  // namespace qset
