// Prints one PASS/FAIL line per acceptance criterion and exits non-zero on any failure.

#include "adif/game.hpp"
#include "adif/meta.hpp"
#include "adif/parser.hpp"
#include "adif/suites.hpp"
#include "phi7_play.hpp"

#include <chrono>
#include <iostream>
#include <sstream>

using namespace adif;

namespace {

const char* phi3 = "A x . E[+{}] y . x = y";
const char* phi4 = "E x . A[+{}] y . ~(x = y)";
const char* phi5 = "A x . E[-{x}] y . x = y";
const char* phi6 = "E x . A[-{x}] y . ~(x = y)";
const char* phi7 = "E x . A[+{}] y . E[+{x}] z . (x = y) & (y = z)";

struct Outcome {
    bool pass = true;
    std::string detail;
};

double now() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

// Runs the suites, fails on any failing one and on the time limit.
Outcome suites_outcome(const std::vector<SuiteResult>& rs, double seconds, double limit) {
    Outcome o;
    std::ostringstream d;
    for (auto& r : rs) {
        d << r.name << "=" << (r.ok() ? "ok" : "FAILED") << " ";
        if (!r.ok()) {
            o.pass = false;
            std::cerr << "  " << r.summary() << "\n";
        }
    }
    if (seconds >= limit) o.pass = false;
    d << "(" << seconds << " s, limit " << limit << " s)";
    o.detail = d.str();
    return o;
}

Outcome golden() {
    auto a = binary_structure();
    auto triv = trivial_hyperteam(2);
    Outcome o;
    std::ostringstream d;
    for (auto [s, want] : {std::pair{phi3, false}, std::pair{phi4, true}, std::pair{phi7, true}}) {
        double t0 = now();
        bool got = sat_adif(a, triv, Flag::EA, parse_formula(s));
        double dt = now() - t0;
        o.pass = o.pass && got == want && dt < 1.0;
        d << (got ? "true" : "false") << " ";
    }
    o.detail = "phi3 phi4 phi7 = " + d.str();
    return o;
}

Outcome pseudo_sentences() {
    auto a = binary_structure();
    auto z = make_hyperteam(2, {"z"}, {{{0}, {1}}});
    double t0 = now();
    bool five = sat_adif(a, z, Flag::AE, parse_formula(phi5));
    bool six = sat_adif(a, z, Flag::EA, parse_formula(phi6));
    double dt = now() - t0;
    return {five && !six && dt < 1.0, std::string("phi5/AE=") + (five ? "true" : "false") +
                                          " phi6/EA=" + (six ? "true" : "false")};
}

Outcome dual_example() {
    std::vector<int> a11{0, 0, 0}, a12{0, 0, 1}, a21{0, 1, 0}, a22{0, 1, 1}, a3{1, 1, 1};
    auto x = make_hyperteam(2, {"x", "y", "z"}, {{a11, a12}, {a21, a22}, {a3}});
    auto want = make_hyperteam(2, {"x", "y", "z"}, {{a11, a21, a3}, {a11, a22, a3}, {a12, a21, a3}, {a12, a22, a3}});
    auto d = dualize(x);
    return {d == want, std::to_string(d.teams.size()) + " teams"};
}

Outcome undetermined() {
    auto u = undetermined_pair(binary_structure());
    return {u.as_expected(), "DIF neither true nor false, ADIF decided"};
}

Outcome engines(const SuiteConfig& cfg) {
    auto a = laws_structure();
    double t0 = now();
    auto r = suite_engine_agreement(a, cfg);
    auto o = suites_outcome({r}, now() - t0, 600);
    if (r.notes["sentences"] < 200) o.pass = false;
    o.detail += " sentences=" + std::to_string(r.notes["sentences"]);
    return o;
}

Outcome contrary_play() {
    auto a = binary_structure();
    auto r = game_winner(a, parse_formula(phi7));
    auto t = testing::play_against_contrary_abelard(r);
    bool ok = r.winner == Player::Eloise && !t.terminal && t.cycle_max_priority == 2;
    return {ok, "infinite=" + std::string(t.terminal ? "no" : "yes") +
                    " cycle max priority=" + std::to_string(t.cycle_max_priority)};
}

} // namespace

int main() {
    SuiteConfig cfg;
    auto a = laws_structure();
    int failures = 0;
    auto report = [&](int n, const std::string& what, auto&& run) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << "criterion " << n << " " << (o.pass ? "PASS" : "FAIL") << " " << what << ": " << o.detail
                  << std::endl;
    };
    report(1, "golden sentences", golden);
    report(2, "pseudo sentences", pseudo_sentences);
    report(3, "dualisation example", dual_example);
    report(4, "undetermined pair", undetermined);
    report(5, "engine agreement", [&] { return engines(cfg); });
    report(6, "fundamentals", [&] {
        double t0 = now();
        auto rs = fundamentals(a, cfg);
        return suites_outcome(rs, now() - t0, 300);
    });
    report(7, "adequacy", [&] {
        double t0 = now();
        HyperteamCorpus c(a.size(), cfg);
        std::vector<SuiteResult> rs{suite_fol_adequacy(a, c), suite_dif_adequacy(a, c)};
        return suites_outcome(rs, now() - t0, 600);
    });
    report(8, "appendix", [&] {
        double t0 = now();
        auto rs = appendix(a, cfg);
        return suites_outcome(rs, now() - t0, 900);
    });
    report(9, "contrary play on the golden sentence", contrary_play);
    report(10, "reduce", [&] {
        double t0 = now();
        auto r = suite_reduce(a, cfg);
        return suites_outcome({r}, now() - t0, 600);
    });
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
