#include "json_io.hpp"

#include <cmath>
#include <string>

#include "qset/error.hpp"

namespace qset {

namespace {

// Accepts a JSON number or a decimal string.
double number(const json& j, const char* what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == s.size() && used > 0) return v;
    }
    throw Error(ErrorKind::InvalidBehavior, std::string("expected a number for ") + what);
}

std::array<double, 2> pair(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::InvalidBehavior, std::string(what) + " needs two entries");
    return {number(j[0], what), number(j[1], what)};
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::InvalidBehavior, std::string("missing field ") + key);
    return j.at(key);
}

json sign_pattern(const SignPattern& s) { return json::array({json::array({s.eps[0][0], s.eps[0][1]}), json::array({s.eps[1][0], s.eps[1][1]})}); }

json angle_table(const AngleTable& t) {
    return json{{"plus", json::array({t[0][0], t[0][1]})}, {"minus", json::array({t[1][0], t[1][1]})}};
}

}  // namespace

json to_json(const Behavior& p) {
    return json{{"margA", json::array({p.margA[0], p.margA[1]})},
                {"margB", json::array({p.margB[0], p.margB[1]})},
                {"corr", json::array({json::array({p.corr[0][0], p.corr[0][1]}),
                                      json::array({p.corr[1][0], p.corr[1][1]})})}};
}

Behavior behavior_from_json(const json& j) {
    Behavior p;
    p.margA = pair(field(j, "margA"), "margA");
    p.margB = pair(field(j, "margB"), "margB");
    const json& c = field(j, "corr");
    if (!c.is_array() || c.size() != 2) throw Error(ErrorKind::InvalidBehavior, "corr needs two rows");
    p.corr[0] = pair(c[0], "corr");
    p.corr[1] = pair(c[1], "corr");
    return p;
}

json to_json(const QubitRealization& r) {
    return json{{"theta", r.theta}, {"a", json::array({r.a[0], r.a[1]})}, {"b", json::array({r.b[0], r.b[1]})}};
}

QubitRealization realization_from_json(const json& j) {
    QubitRealization r;
    r.theta = number(field(j, "theta"), "theta");
    r.a = pair(field(j, "a"), "a");
    r.b = pair(field(j, "b"), "b");
    return r;
}

json to_json(const SymmetryElement& g) {
    return json{{"partySwap", g.partySwap},
                {"inputSwapA", g.inputSwapA},
                {"inputSwapB", g.inputSwapB},
                {"outputFlip", json::array({g.outputFlip[0], g.outputFlip[1], g.outputFlip[2], g.outputFlip[3]})}};
}

json to_json(const SteeredCorrelators& s) {
    json c = json::array();
    for (int al = 0; al < 2; ++al)
        c.push_back(json::array({json::array({s.c[al][0][0], s.c[al][0][1]}), json::array({s.c[al][1][0], s.c[al][1][1]})}));
    json out{{"c", json{{"plus", c[0]}, {"minus", c[1]}}}};
    if (s.has_angles) out["atilde"] = angle_table(s.atilde);
    return out;
}

json to_json(const Classification& c) {
    const auto& d = c.details;
    json det{{"reason", d.reason},
             {"max_chsh", d.max_chsh},
             {"theorem1_residual", d.theorem1_residual},
             {"prop1_alice", d.prop1_alice},
             {"prop1_bob", d.prop1_bob},
             {"membership_certified", d.membership_certified}};
    if (d.pattern) det["pattern"] = sign_pattern(*d.pattern);
    if (d.realization) det["realization"] = to_json(*d.realization);
    if (d.margins) det["alternation_margins"] = *d.margins;
    if (!d.membership_certified) det["caveat"] = "membership in Q not certified";
    return json{{"verdict", to_string(c.verdict)}, {"details", det}};
}

json to_json(const Reconstruction& r) {
    const auto& t = r.trace;
    return json{{"realization", to_json(r.realization)},
                {"element", to_json(r.element)},
                {"roundtrip_error", r.roundtrip_error},
                {"trace",
                 json{{"w", angle_table(t.w)},
                      {"bgauge", t.bgauge},
                      {"gamma", t.gamma},
                      {"gamma_x", json::array({t.gamma_x[0], t.gamma_x[1]})},
                      {"theta", t.theta},
                      {"theta_branches", json::array({t.theta_branches[0], t.theta_branches[1]})},
                      {"gauge_residual", t.gauge_residual}}}};
}

json to_json(const SelftestCertificate& c) {
    return json{{"realization", to_json(c.reconstruction.realization)},
                {"certificate",
                 json{{"reconstruction", to_json(c.reconstruction)},
                      {"residuals", c.residuals},
                      {"max_residual", c.max_residual},
                      {"roundtrip_error", c.roundtrip_error}}}};
}

json to_json(const FlatnessWitness& w) {
    return json{{"sector", json::array({w.sector.s, w.sector.t})},
                {"coeffs", w.coeffs},
                {"alphas", w.alphas},
                {"L", to_json(w.L)},
                {"deltas", w.deltas},
                {"residual", w.residual},
                {"nonlocal", w.nonlocal}};
}

json to_json(const LocalLpResult& r) {
    json out{{"local", r.local}, {"infeasibility", r.infeasibility}};
    if (r.local) {
        json ws = json::array();
        auto verts = deterministic_vertices();
        for (std::size_t i = 0; i < r.weights.size(); ++i)
            if (r.weights[i] > 0)
                ws.push_back(json{{"aOut", verts[i].aOut}, {"bOut", verts[i].bOut}, {"weight", r.weights[i]}});
        out["weights"] = ws;
    } else {
        out["separator"] = json{{"coeffs", r.separator.coeffs}, {"offset", r.separator.offset}};
    }
    return out;
}

json to_json(const BellMaxResult& r) {
    return json{{"value", r.value}, {"argmax", to_json(r.argmax)}, {"rounds", r.history.size()}};
}

json to_json(const DecompositionResult& r) {
    json out{{"found", r.found}, {"seed", r.seed}};
    if (r.found) {
        out["P1"] = to_json(r.P1);
        out["P2"] = to_json(r.P2);
        out["lambda"] = r.lambda;
        out["residual"] = r.residual;
        out["separation"] = r.separation;
        out["family"] = r.family;
        out["trial"] = r.trial;
    }
    return out;
}

}  // namespace qset
