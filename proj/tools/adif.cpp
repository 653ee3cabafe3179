#include "adif/game.hpp"
#include "adif/io.hpp"
#include "adif/meta.hpp"
#include "adif/parser.hpp"
#include "adif/semantics.hpp"
#include "adif/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

using namespace adif;
using Json = nlohmann::ordered_json;

namespace {

struct RunConfig {
    std::string command;
    std::string structure_path;
    std::string formula_text;
    std::string formula_path;
    std::string hyperteam_path;
    std::string flag = "EA";
    bool reduce = false;
    std::size_t max_teams = 3;
    std::size_t max_states = 5'000'000;
    unsigned seed = 1;
    bool trace = false;
    bool json = false;
};

struct Report {
    int exit_code = 0;
    Json json;
    std::string text;
};

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string formula_source(const RunConfig& cfg) {
    if (!cfg.formula_text.empty()) return cfg.formula_text;
    if (!cfg.formula_path.empty()) return read_file(cfg.formula_path);
    fail(ErrorCode::Precondition, "this command needs --formula or --formula-file");
}

Structure structure_for(const RunConfig& cfg, const Structure& fallback) {
    return cfg.structure_path.empty() ? fallback : load_structure(cfg.structure_path);
}

Hyperteam hyperteam_for(const RunConfig& cfg, const Structure& a) {
    return cfg.hyperteam_path.empty() ? trivial_hyperteam(a.size()) : load_hyperteam(cfg.hyperteam_path, a);
}

Report verdict_report(const RunConfig& cfg, const Formula& f, bool value, double seconds) {
    Report r;
    r.exit_code = value ? 0 : 1;
    r.json = {{"command", cfg.command}, {"formula", print(f)}, {"flag", cfg.flag}, {"result", value}, {"seconds", seconds}};
    r.text = std::string("result ") + (value ? "true" : "false") + "\n";
    return r;
}

Report cmd_check(const RunConfig& cfg) {
    Structure a = structure_for(cfg, binary_structure());
    Formula f = parse_formula(formula_source(cfg), ParseMode::Adif);
    Hyperteam x = hyperteam_for(cfg, a);
    SatOptions opt;
    opt.reduce = cfg.reduce;
    Stopwatch sw;
    bool value = sat_adif(a, x, cfg.flag == "EA" ? Flag::EA : Flag::AE, f, opt);
    Report r = verdict_report(cfg, f, value, sw.seconds());
    if (cfg.trace) {
        std::string ht = print_hyperteam(x, &a);
        r.json["hyperteam"] = ht;
        r.text = "hyperteam " + ht + "\nflag " + cfg.flag + "\n" + r.text;
    }
    return r;
}

// A plain prenex sentence goes through the Herbrand-Skolem transform;
// anything else is read as a meta formula and evaluated directly.
Report cmd_check_meta(const RunConfig& cfg) {
    Structure a = structure_for(cfg, binary_structure());
    Formula f = parse_formula(formula_source(cfg), ParseMode::Meta);
    SatOptions opt;
    opt.reduce = cfg.reduce;
    Formula target = f;
    Hyperteam x = hyperteam_for(cfg, a);
    Flag flag = cfg.flag == "EA" ? Flag::EA : Flag::AE;
    if (!has_meta(f)) {
        if (!cfg.hyperteam_path.empty()) fail(ErrorCode::Precondition, "check-meta on a plain sentence takes no hyperteam");
        target = herbrand_skolem_form(prenex_sentence(f));
        flag = Flag::EA;
    }
    Stopwatch sw;
    bool value = sat_meta(a, {}, x, flag, target, opt);
    Report r = verdict_report(cfg, f, value, sw.seconds());
    r.json["meta_formula"] = print(target);
    if (cfg.trace) {
        r.text = "meta " + print(target) + "\n" + r.text;
        if (cfg.hyperteam_path.empty() && flag == Flag::EA) {
            auto sk = skolemisation_search(a, target);
            std::string dump = sk ? sk->dump(&a) : "";
            r.json["witness"] = sk ? Json(dump) : Json(nullptr);
            r.text += sk ? "witness\n" + dump : "no witness\n";
        }
    }
    return r;
}

Report cmd_game(const RunConfig& cfg) {
    Structure a = structure_for(cfg, binary_structure());
    Formula f = parse_formula(formula_source(cfg), ParseMode::Adif);
    GameOptions go;
    go.max_states = cfg.max_states;
    Stopwatch sw;
    GameResult g = game_winner(a, f, go);
    double seconds = sw.seconds();
    Report r;
    r.exit_code = g.winner == Player::Eloise ? 0 : 1;
    r.json = {{"command", cfg.command},
              {"formula", print(f)},
              {"winner", player_name(g.winner)},
              {"states", g.game.states.size()},
              {"seconds", seconds}};
    r.text = std::string("winner ") + player_name(g.winner) + "\nstates " + std::to_string(g.game.states.size()) + "\n";
    if (cfg.trace) {
        std::string t = g.trace_text(&a);
        r.json["trace"] = t;
        r.text += t;
    }
    return r;
}

Report suite_report(const RunConfig& cfg, const std::vector<SuiteResult>& results) {
    Report r;
    Json suites = Json::array();
    bool ok = true;
    for (auto& s : results) {
        ok = ok && s.ok();
        Json j = {{"name", s.name},
                  {"status", s.ok() ? "pass" : "fail"},
                  {"vacuous", s.vacuous},
                  {"checks", s.checks},
                  {"failures", s.failures},
                  {"seconds", s.seconds}};
        Json notes = Json::object();
        for (auto& [k, v] : s.notes) notes[k] = v;
        j["notes"] = notes;
        j["counterexample"] = s.counterexample.empty() ? Json(nullptr) : Json(s.counterexample);
        suites.push_back(j);
        r.text += s.summary() + "\n";
    }
    r.exit_code = ok ? 0 : 1;
    r.json = {{"command", cfg.command}, {"max_teams", cfg.max_teams}, {"seed", cfg.seed}, {"ok", ok}, {"suites", suites}};
    r.text += std::string(ok ? "all suites passed" : "some suites failed") + "\n";
    return r;
}

SuiteConfig suite_config(const RunConfig& cfg) {
    SuiteConfig sc;
    sc.max_teams = cfg.max_teams;
    sc.max_states = cfg.max_states;
    sc.seed = cfg.seed;
    return sc;
}

Report cmd_adequacy(const RunConfig& cfg) {
    Structure a = structure_for(cfg, laws_structure());
    return suite_report(cfg, adequacy(a, suite_config(cfg)));
}

Report cmd_laws(const RunConfig& cfg) {
    Structure a = structure_for(cfg, laws_structure());
    SuiteConfig sc = suite_config(cfg);
    std::vector<SuiteResult> all = fundamentals(a, sc);
    all.push_back(suite_reduce(a, sc));
    for (auto& s : appendix(a, sc)) all.push_back(std::move(s));
    return suite_report(cfg, all);
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Evaluate ADIF formulae and run the property suites"};
    app.add_option("command", cfg.command, "check | check-meta | game | adequacy | laws")
        ->required()
        ->check(CLI::IsMember({"check", "check-meta", "game", "adequacy", "laws"}));
    app.add_option("--structure", cfg.structure_path, "structure file (default: domain {0,1} with equality only)");
    auto* fo = app.add_option("--formula", cfg.formula_text, "formula text");
    auto* ff = app.add_option("--formula-file", cfg.formula_path, "file containing the formula");
    fo->excludes(ff);
    app.add_option("--hyperteam", cfg.hyperteam_path, "hyperteam file (default: the trivial hyperteam)");
    app.add_option("--flag", cfg.flag, "alternation flag")->check(CLI::IsMember({"EA", "AE"}));
    app.add_flag("--reduce", cfg.reduce, "keep hyperteams minimal during evaluation");
    app.add_option("--max-teams", cfg.max_teams, "largest hyperteam in the suite corpora (0 skips them)");
    app.add_option("--max-states", cfg.max_states, "state budget for game expansion");
    app.add_option("--seed", cfg.seed, "seed for randomized corpora");
    app.add_flag("--trace", cfg.trace, "print witnesses and plays");
    app.add_flag("--json", cfg.json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Report r;
        if (cfg.command == "check") r = cmd_check(cfg);
        else if (cfg.command == "check-meta") r = cmd_check_meta(cfg);
        else if (cfg.command == "game") r = cmd_game(cfg);
        else if (cfg.command == "adequacy") r = cmd_adequacy(cfg);
        else r = cmd_laws(cfg);
        if (cfg.json) std::cout << r.json.dump(2) << "\n";
        else std::cout << r.text;
        return r.exit_code;
    } catch (const Error& e) {
        if (cfg.json) std::cout << Json{{"command", cfg.command}, {"error", std::string(code_name(e.code()))}, {"message", e.what()}}.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
