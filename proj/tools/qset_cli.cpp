#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json_io.hpp"
#include "qset/error.hpp"
#include "qset/parallel.hpp"

using namespace qset;

namespace {

constexpr int EXIT_VALIDATION = 1;
constexpr int EXIT_USAGE = 2;
constexpr int EXIT_PRECONDITION = 3;

struct RealizationFlags {
    double theta = 0, a0 = 0, a1 = 0, b0 = 0, b1 = 0;
    bool degrees = false;

    void add_to(CLI::App* app) {
        app->add_option("--theta", theta, "state angle");
        app->add_option("--a0", a0, "Alice angle a0");
        app->add_option("--a1", a1, "Alice angle a1");
        app->add_option("--b0", b0, "Bob angle b0");
        app->add_option("--b1", b1, "Bob angle b1");
        app->add_flag("--degrees", degrees, "angles given in degrees");
    }
    double scale() const { return degrees ? std::numbers::pi / 180.0 : 1.0; }
    QubitRealization get() const {
        double k = scale();
        return {theta * k, {a0 * k, a1 * k}, {b0 * k, b1 * k}};
    }
};

std::string read_input(const std::string& path) {
    std::stringstream ss;
    if (path.empty() || path == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::InvalidBehavior, "cannot open " + path);
        ss << in.rdbuf();
    }
    return ss.str();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidBehavior, std::string("malformed JSON: ") + e.what());
    }
}

Behavior read_behavior(const std::string& path) { return behavior_from_json(parse_json(read_input(path))); }

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw Error(ErrorKind::Precondition, "cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void print_behavior_table(std::ostream& os, const Behavior& p) {
    os.precision(17);
    os << "margA " << p.margA[0] << ' ' << p.margA[1] << '\n';
    os << "margB " << p.margB[0] << ' ' << p.margB[1] << '\n';
    os << "corr0 " << p.corr[0][0] << ' ' << p.corr[0][1] << '\n';
    os << "corr1 " << p.corr[1][0] << ' ' << p.corr[1][1] << '\n';
}

struct Range {
    std::string name;
    double min = 0, max = 0;
    int steps = 1;
};

Range parse_range(const std::string& text) {
    Range r;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4) throw CLI::ValidationError("--range", "expected NAME:MIN:MAX:STEPS");
    r.name = parts[0];
    if (r.name != "theta" && r.name != "a0" && r.name != "a1" && r.name != "b0" && r.name != "b1")
        throw CLI::ValidationError("--range", "unknown parameter " + r.name);
    try {
        r.min = std::stod(parts[1]);
        r.max = std::stod(parts[2]);
        r.steps = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--range", "bad number in " + text);
    }
    if (r.steps < 1 || r.min > r.max) throw CLI::ValidationError("--range", "need steps >= 1 and min <= max");
    return r;
}

double& slot(QubitRealization& r, const std::string& name) {
    if (name == "theta") return r.theta;
    if (name == "a0") return r.a[0];
    if (name == "a1") return r.a[1];
    if (name == "b0") return r.b[0];
    return r.b[1];
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string scan_row(const QubitRealization& r) {
    std::string row = fmt(r.theta) + ',' + fmt(r.a[0]) + ',' + fmt(r.a[1]) + ',' + fmt(r.b[0]) + ',' + fmt(r.b[1]);
    Behavior p = born_point(r);
    Classification c;
    try {
        c = classify(p);
    } catch (const Error&) {
        c.verdict = Verdict::Indeterminate;
    }
    row += ',';
    row += to_string(c.verdict);

    std::string margins(8, ',');
    try {
        auto alt = full_alternation_check(canonicalize(r).realization, false);
        margins.clear();
        for (double m : alt.margins) margins += ',' + fmt(m);
    } catch (const Error&) {
    }
    row += margins;

    std::string resid(4, ',');
    std::string t1 = ",";
    if (c.verdict != Verdict::Local) {
        try {
            auto l1 = lemma1_check(p);
            resid.clear();
            for (double v : l1.residuals) resid += ',' + fmt(v);
            t1 = ',' + fmt(theorem1_behavior_check(p).best_residual);
        } catch (const Error&) {
        }
    }
    return row + resid + t1 + '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum correlations of the CHSH scenario: evaluation, classification, self-testing"};
    app.require_subcommand(1);

    std::string input, output;
    bool as_json = false;

    RealizationFlags evalr;
    auto* eval = app.add_subcommand("eval", "behavior of a qubit realization");
    evalr.add_to(eval);
    eval->add_flag("--json", as_json, "JSON output");
    eval->add_option("--output", output, "output file");

    auto* cls = app.add_subcommand("classify", "extremality verdict for a behavior");
    cls->add_option("--input", input, "behavior JSON (default stdin)");
    cls->add_option("--output", output, "output file");
    cls->add_flag("--json", as_json, "JSON output");

    auto* st = app.add_subcommand("selftest", "reconstruct the realization of a self-testing behavior");
    st->add_option("--input", input, "behavior JSON (default stdin)");
    st->add_option("--output", output, "output file");
    st->add_flag("--json", as_json, "accepted for symmetry; output is always JSON");

    RealizationFlags steerr;
    auto* steer = app.add_subcommand("steer", "modified angles and steered correlators");
    steerr.add_to(steer);
    steer->add_option("--input", input, "behavior JSON; without it the realization flags are used");
    steer->add_option("--output", output, "output file");
    steer->add_flag("--json", as_json, "accepted for symmetry; output is always JSON");

    RealizationFlags witr;
    auto* wit = app.add_subcommand("witness", "flat direction certifying non-exposedness");
    witr.add_to(wit);
    wit->add_option("--output", output, "output file");
    wit->add_flag("--json", as_json, "JSON output");

    RealizationFlags scanr;
    std::vector<std::string> ranges;
    auto* scan = app.add_subcommand("scan", "CSV of verdicts over a parameter grid");
    scanr.add_to(scan);
    scan->add_option("--range", ranges, "NAME:MIN:MAX:STEPS, outermost first")->required();
    scan->add_option("--output", output, "output file");

    auto* oracle = app.add_subcommand("oracle", "brute-force checks");
    oracle->require_subcommand(1);
    std::vector<double> coeffs;
    double offset = 0;
    bool use_chsh = false;
    int resolution = 16, refinements = 60;
    auto* bmax = oracle->add_subcommand("bell-max", "maximize a Bell functional over qubit realizations");
    bmax->add_option("--coeffs", coeffs, "8 coefficients (A0,A1,B0,B1,A0B0,A1B0,A0B1,A1B1)")->expected(8)->delimiter(',');
    bmax->add_option("--offset", offset, "constant term");
    bmax->add_flag("--chsh", use_chsh, "use the CHSH functional");
    bmax->add_option("--resolution", resolution, "grid points per axis")->check(CLI::Range(16, 64));
    bmax->add_option("--refinements", refinements, "minimum refinement rounds");
    bmax->add_option("--output", output, "output file");

    auto* olocal = oracle->add_subcommand("local", "LP membership in the local polytope");
    olocal->add_option("--input", input, "behavior JSON (default stdin)");
    olocal->add_option("--output", output, "output file");

    int trials = 1000;
    std::uint64_t seed = 1;
    auto* odec = oracle->add_subcommand("decompose", "search for a convex decomposition");
    odec->add_option("--input", input, "behavior JSON (default stdin)");
    odec->add_option("--trials", trials, "number of starts");
    odec->add_option("--seed", seed, "random seed");
    odec->add_option("--output", output, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return EXIT_USAGE;
    }

    try {
        Output out(output);
        std::ostream& os = out.stream();
        if (*eval) {
            Behavior p = born_point(evalr.get());
            if (as_json)
                os << to_json(p).dump(2) << '\n';
            else
                print_behavior_table(os, p);
        } else if (*cls) {
            Classification c = classify(read_behavior(input));
            if (as_json) {
                os << to_json(c).dump(2) << '\n';
            } else {
                os << "verdict: " << to_string(c.verdict) << '\n' << "reason: " << c.details.reason << '\n';
                if (!c.details.membership_certified) os << "caveat: membership in Q not certified\n";
            }
        } else if (*st) {
            os << to_json(selftest_certificate(read_behavior(input))).dump(2) << '\n';
        } else if (*steer) {
            SteeredCorrelators s =
                input.empty() ? steered_correlators(steerr.get()) : steered_correlators(read_behavior(input));
            os << to_json(s).dump(2) << '\n';
        } else if (*wit) {
            auto w = find_witness(witr.get());
            if (as_json)
                os << (w ? json{{"witness", to_json(*w)}} : json{{"witness", nullptr}, {"status", "exposed"}}).dump(2)
                   << '\n';
            else if (w)
                os << to_json(*w).dump(2) << '\n';
            else
                os << "exposed/none\n";
        } else if (*scan) {
            std::vector<Range> rs;
            for (const auto& s : ranges) rs.push_back(parse_range(s));
            const double k = scanr.scale();
            std::size_t total = 1;
            for (const auto& r : rs) total *= static_cast<std::size_t>(r.steps);
            std::vector<std::string> rows(total);
            QubitRealization base = scanr.get();
            parallel_for(total, [&](std::size_t i) {
                QubitRealization r = base;
                std::size_t rem = i;
                for (std::size_t d = rs.size(); d-- > 0;) {
                    const Range& g = rs[d];
                    std::size_t idx = rem % static_cast<std::size_t>(g.steps);
                    rem /= static_cast<std::size_t>(g.steps);
                    double v = g.steps == 1 ? g.min : g.min + (g.max - g.min) * double(idx) / double(g.steps - 1);
                    slot(r, g.name) = v * k;
                }
                rows[i] = scan_row(r);
            });
            os << "theta,a0,a1,b0,b1,verdict";
            for (int i = 0; i < 8; ++i) os << ",margin" << i;
            for (int i = 0; i < 4; ++i) os << ",selftest_residual" << i;
            os << ",theorem1_residual\n";
            for (const auto& r : rows) os << r;
        } else if (*bmax) {
            BellFunctional beta;
            if (use_chsh) {
                beta = BellFunctional::chsh();
            } else {
                if (coeffs.size() != 8) {
                    std::cerr << "usage error: give --chsh or --coeffs with 8 values\n";
                    return EXIT_USAGE;
                }
                std::copy(coeffs.begin(), coeffs.end(), beta.coeffs.begin());
            }
            beta.offset += offset;
            os << to_json(bell_max_q2(beta, resolution, refinements)).dump(2) << '\n';
        } else if (*olocal) {
            os << to_json(local_membership_lp(read_behavior(input))).dump(2) << '\n';
        } else if (*odec) {
            DecompositionOptions opt;
            opt.trials = trials;
            opt.seed = seed;
            os << to_json(decomposition_search(read_behavior(input), opt)).dump(2) << '\n';
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return EXIT_USAGE;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::InvalidBehavior ? EXIT_VALIDATION : EXIT_PRECONDITION;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_VALIDATION;
    }
    return 0;
}
