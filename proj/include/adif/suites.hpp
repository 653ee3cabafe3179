#pragma once

#include "game.hpp"
#include "hyperteam.hpp"
#include "meta.hpp"
#include "parity.hpp"
#include "parser.hpp"
#include "semantics.hpp"
#include "structure.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace adif {

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string counterexample; // first failure only
    bool vacuous = false;
    double seconds = 0;
    std::map<std::string, std::size_t> notes; // extra counters worth reporting

    bool ok() const { return failures == 0; }

    void check(bool good, const std::function<std::string()>& describe) {
        ++checks;
        if (good) return;
        if (failures++ == 0) counterexample = describe();
    }

    std::string summary() const {
        std::string s = name + ": " + (ok() ? "pass" : "FAIL") + " checks=" + std::to_string(checks) +
                        " failures=" + std::to_string(failures);
        if (vacuous) s += " (vacuous)";
        for (auto& [k, v] : notes) s += " " + k + "=" + std::to_string(v);
        if (!counterexample.empty()) s += "\n  first counterexample: " + counterexample;
        return s;
    }
};

struct SuiteConfig {
    std::size_t max_teams = 3;
    std::size_t max_assignments = 3;
    int bucket_depth = 12;
    std::size_t max_states = 5'000'000;
    unsigned seed = 1;
    std::size_t partition_dual_cap = 8; // team partitioning enumerates all bipartitions of dual(X)
};

// {0,1} with P = {1} and R = {(0,1)}.
inline Structure laws_structure() {
    Structure s = binary_structure();
    s.add_relation("P", 1, {{1}});
    s.add_relation("R", 2, {{0, 1}});
    return s;
}

namespace detail {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline std::vector<Formula> parse_all(const std::vector<std::string>& texts) {
    std::vector<Formula> out;
    for (auto& t : texts) out.push_back(parse_formula(t));
    return out;
}

inline std::string describe(const Hyperteam& x, Flag f) {
    return "X = " + (x.teams.empty() ? std::string("(empty)") : print_hyperteam(x)) + " vars " +
           to_string(x.var_set()) + " flag " + flag_name(f);
}

} // namespace detail

// All hyperteams within bounds over each variable set drawn from {x, y}.
struct HyperteamCorpus {
    std::vector<std::vector<std::string>> varsets{{}, {"x"}, {"y"}, {"x", "y"}};
    std::vector<std::vector<Hyperteam>> teams;
    std::vector<std::vector<Hyperteam>> duals;

    HyperteamCorpus(int dom, const SuiteConfig& cfg) {
        for (auto& v : varsets) {
            teams.push_back(cfg.max_teams == 0 ? std::vector<Hyperteam>{}
                                               : enumerate_hyperteams(dom, v, cfg.max_teams, cfg.max_assignments));
            std::vector<Hyperteam> d;
            for (auto& x : teams.back()) d.push_back(dualize(x));
            duals.push_back(std::move(d));
        }
    }

    std::size_t size() const {
        std::size_t n = 0;
        for (auto& t : teams) n += t.size();
        return n;
    }

    // Calls f(varset index, hyperteam index) for every hyperteam whose variables cover `need`.
    void each(const VarSet& need, const std::function<void(std::size_t, std::size_t)>& f) const {
        for (std::size_t v = 0; v < varsets.size(); ++v) {
            if (!subset_of(need, VarSet(varsets[v].begin(), varsets[v].end()))) continue;
            for (std::size_t i = 0; i < teams[v].size(); ++i) f(v, i);
        }
    }
};

// Formulae over x and y used by the law suites.
inline std::vector<Formula> law_pool() {
    return detail::parse_all({
        "true",
        "false",
        "P(x)",
        "x = y",
        "R(x,y)",
        "~R(y,x)",
        "P(x) | P(y)",
        "R(x,y) & ~P(y)",
        "E z . R(x,z)",
        "A[+{}] z . ~(x = z)",
        "E[-{x}] z . R(z,y)",
        "A z . (R(z,x) | P(y))",
        "E[+{}] y . (x = y & P(y))",
        "A x . E[+{}] y . x = y",
        "E x . A[+{}] y . ~(x = y)",
        "A x . E[-{x}] y . x = y",
    });
}

// Smaller pools for the binary and ternary Boolean laws.
inline std::vector<Formula> law_pool_pairs() {
    return detail::parse_all({"true", "false", "P(x)", "R(x,y)", "~R(y,x)", "E z . R(x,z)", "A[+{}] z . ~(x = z)",
                              "E[-{x}] z . R(z,y)"});
}

inline std::vector<Formula> law_pool_triples() {
    return detail::parse_all({"false", "P(x)", "R(x,y)", "E z . R(x,z)", "A[+{}] z . ~(y = z)"});
}

struct LawInstance {
    std::string label;
    Formula lhs, rhs;
    bool implication = false; // lhs ⇒ rhs only
};

// Every instance of the Boolean laws over the pools above.
inline std::vector<LawInstance> boolean_law_instances() {
    std::vector<LawInstance> out;
    auto T = mk_true(), F = mk_false();
    auto add = [&](std::string l, Formula a, Formula b, bool imp = false) { out.push_back({std::move(l), a, b, imp}); };
    add("1a", neg(F), T);
    add("1b", neg(T), F);
    for (auto& p : law_pool()) {
        add("1c", p, neg(neg(p)));
        add("2a", conj(p, F), F);
        add("2a", conj(F, p), F);
        add("2b", conj(p, T), p);
        add("2b", conj(T, p), p);
        add("3a", disj(p, T), T);
        add("3a", disj(T, p), T);
        add("3b", disj(p, F), p);
        add("3b", disj(F, p), p);
    }
    auto pairs = law_pool_pairs();
    for (auto& p1 : pairs)
        for (auto& p2 : pairs) {
            add("4a", conj(p1, p2), conj(p2, p1));
            add("4b", disj(p1, p2), disj(p2, p1));
            add("5a", conj(p1, p2), p1, true);
            add("6a", p1, disj(p1, p2), true);
            add("7a", conj(p1, p2), neg(disj(neg(p1), neg(p2))));
            add("7b", disj(p1, p2), neg(conj(neg(p1), neg(p2))));
        }
    auto triples = law_pool_triples();
    for (auto& p1 : triples)
        for (auto& p : triples)
            for (auto& p2 : triples) {
                add("5b", conj(p1, conj(p, p2)), conj(conj(p1, p), p2));
                add("6b", disj(p1, disj(p, p2)), disj(disj(p1, p), p2));
            }
    const std::vector<Constraint> cons{Constraint::plus({}), Constraint::plus({"x"}), Constraint::plus({"y"}),
                                       Constraint::except({}), Constraint::except({"y"})};
    for (auto& p : law_pool()) {
        VarSet bound = bound_vars(p);
        for (std::string v : {"x", "y", "z"}) {
            if (bound.count(v)) continue;
            for (auto& c : cons) {
                if (!c.minus && c.vars.count(v)) continue;
                add("8a", quant(Kind::Exists, c, v, p), neg(quant(Kind::Forall, c, v, neg(p))));
                add("8b", quant(Kind::Forall, c, v, p), neg(quant(Kind::Exists, c, v, neg(p))));
            }
        }
    }
    return out;
}

// Prenex prefixes over fresh variables z, u with their matrices.
inline std::vector<std::pair<Prefix, Formula>> prefix_extension_instances() {
    std::vector<std::pair<Prefix, Formula>> out;
    const std::vector<Constraint> cz{Constraint::plus({}), Constraint::plus({"x"}), Constraint::plus({"x", "y"}),
                                     Constraint::except({}), Constraint::except({"y"})};
    const std::vector<Constraint> cu{Constraint::plus({}), Constraint::plus({"z"}), Constraint::except({}),
                                     Constraint::except({"x"})};
    auto m1 = detail::parse_all({"R(x,z)", "z = y | P(z)", "~(x = z)"});
    auto m2 = detail::parse_all({"R(z,u)", "~(x = u)", "z = u", "R(z,u) & ~(x = u)", "z = u | R(y,z)"});
    for (QSym q : {QSym::Exists, QSym::Forall})
        for (auto& c : cz)
            for (auto& m : m1) out.push_back({{Quant{q, c, "z"}}, m});
    for (QSym q1 : {QSym::Exists, QSym::Forall})
        for (QSym q2 : {QSym::Exists, QSym::Forall})
            for (auto& c1 : {Constraint::plus({}), Constraint::plus({"x"}), Constraint::except({})})
                for (auto& c2 : cu)
                    for (auto& m : m2) out.push_back({{Quant{q1, c1, "z"}, Quant{q2, c2, "u"}}, m});
    return out;
}

// ---- fundamentals -----------------------------------------------------------

namespace detail {

// Refinement relation between all hyperteams of one variable set, restricted to W.
inline std::vector<std::vector<char>> refinement_matrix(const std::vector<Hyperteam>& xs, const VarSet& w) {
    std::vector<Hyperteam> proj;
    for (auto& x : xs) proj.push_back(restrict_to(x, w));
    std::vector<std::vector<char>> m(xs.size(), std::vector<char>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) m[i][j] = refines_aligned(proj[i], proj[j]);
    return m;
}

class RefinementCache {
public:
    explicit RefinementCache(const HyperteamCorpus& c) : c_(c) {}
    const std::vector<std::vector<char>>& get(std::size_t v, const VarSet& w) {
        auto key = std::make_pair(v, w);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, refinement_matrix(c_.teams[v], w)).first;
        return it->second;
    }

private:
    const HyperteamCorpus& c_;
    std::map<std::pair<std::size_t, VarSet>, std::vector<std::vector<char>>> cache_;
};

inline std::vector<VarSet> subsets_of(const std::vector<std::string>& vars) {
    std::vector<VarSet> out;
    for (std::size_t m = 0; m < (std::size_t(1) << vars.size()); ++m) {
        VarSet s;
        for (std::size_t i = 0; i < vars.size(); ++i)
            if ((m >> i) & 1) s.insert(vars[i]);
        out.push_back(s);
    }
    return out;
}

// Two fresh variables over two old ones make the duals too large to enumerate,
// so the suites keep quantified plus hyperteam variables at three or fewer.
inline bool within_variable_bound(std::size_t bound, const Hyperteam& x) { return bound + x.vars.size() <= 3; }

inline SuiteResult vacuous_result(std::string name) {
    SuiteResult r;
    r.name = std::move(name);
    r.vacuous = true;
    return r;
}

} // namespace detail

inline SuiteResult suite_empty_null(const Structure& a, const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"empty-and-null"};
    AdifEvaluator ev(a);
    for (auto& f : law_pool())
        c.each(support_vars(f), [&](std::size_t v, std::size_t i) {
            auto& x = c.teams[v][i];
            if (x.is_empty()) {
                r.check(!ev.sat(x, Flag::EA, f), [&] { return "EA holds on the empty hyperteam: " + print(f); });
                r.check(ev.sat(x, Flag::AE, f), [&] { return "AE fails on the empty hyperteam: " + print(f); });
            }
            if (x.is_null()) {
                r.check(ev.sat(x, Flag::EA, f), [&] { return "EA fails on null " + detail::describe(x, Flag::EA) + ": " + print(f); });
                r.check(!ev.sat(x, Flag::AE, f), [&] { return "AE holds on null " + detail::describe(x, Flag::AE) + ": " + print(f); });
            }
        });
    r.seconds = t.seconds();
    return r;
}

inline SuiteResult suite_refinement(const Structure& a, const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"hyperteam-refinement"};
    AdifEvaluator ev(a);
    detail::RefinementCache cache(c);
    for (auto& f : law_pool()) {
        VarSetExpr fr = free_vars(f);
        for (std::size_t v = 0; v < c.varsets.size(); ++v) {
            VarSet vs(c.varsets[v].begin(), c.varsets[v].end());
            if (!subset_of(support_vars(f), vs)) continue;
            auto& rel = cache.get(v, fr.materialize(vs));
            auto& xs = c.teams[v];
            std::vector<char> ea(xs.size()), ae(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                ea[i] = ev.sat(xs[i], Flag::EA, f);
                ae[i] = ev.sat(xs[i], Flag::AE, f);
            }
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < xs.size(); ++j) {
                    if (!rel[i][j]) continue;
                    r.check(!ea[i] || ea[j], [&] { return "EA not upward closed: " + print(f) + " from " + detail::describe(xs[i], Flag::EA) + " to " + print_hyperteam(xs[j]); });
                    r.check(!ae[j] || ae[i], [&] { return "AE not downward closed: " + print(f) + " from " + detail::describe(xs[j], Flag::AE) + " to " + print_hyperteam(xs[i]); });
                }
        }
    }
    r.seconds = t.seconds();
    return r;
}

inline SuiteResult suite_double_dualisation(const Structure& a, const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"double-dualisation"};
    AdifEvaluator ev(a);
    for (auto& f : law_pool())
        c.each(support_vars(f), [&](std::size_t v, std::size_t i) {
            auto& x = c.teams[v][i];
            auto& d = c.duals[v][i];
            Hyperteam dd = dualize(d);
            for (Flag fl : {Flag::EA, Flag::AE}) {
                bool s = ev.sat(x, fl, f);
                r.check(s == ev.sat(dd, fl, f), [&] { return "dual(dual(X)) differs: " + print(f) + " " + detail::describe(x, fl); });
                r.check(s == ev.sat(d, dual(fl), f), [&] { return "(dual X, dual flag) differs: " + print(f) + " " + detail::describe(x, fl); });
            }
        });
    // Involution on the hyperteams themselves. Inclusion holds for the ⊆-minimal
    // teams only: {{x=0},{x=1},{x=0,x=1}} loses its largest team.
    for (std::size_t v = 0; v < c.varsets.size(); ++v)
        for (std::size_t i = 0; i < c.teams[v].size(); ++i) {
            auto& x = c.teams[v][i];
            Hyperteam dd = dualize(c.duals[v][i]);
            for (auto& w : detail::subsets_of(c.varsets[v]))
                r.check(equiv_w(x, dd, w), [&] { return "dual(dual(X)) not equivalent on " + to_string(w) + " for " + print_hyperteam(x); });
            if (!x.is_proper()) continue;
            bool kept = true;
            for (auto& t : reduce(x).teams) kept = kept && std::find(dd.teams.begin(), dd.teams.end(), t) != dd.teams.end();
            r.check(kept, [&] { return "a minimal team is lost by double dualisation of " + print_hyperteam(x); });
        }
    r.seconds = t.seconds();
    return r;
}

inline SuiteResult suite_determinacy(const Structure& a, const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"game-theoretic-determinacy"};
    AdifEvaluator ev(a);
    for (auto& f : law_pool()) {
        Formula nf = neg(f);
        c.each(support_vars(f), [&](std::size_t v, std::size_t i) {
            auto& x = c.teams[v][i];
            for (Flag fl : {Flag::EA, Flag::AE}) {
                bool s = ev.sat(x, fl, f);
                r.check(s != ev.sat(x, dual(fl), nf), [&] { return "flag form: " + print(f) + " " + detail::describe(x, fl); });
                r.check(s != ev.sat(c.duals[v][i], fl, nf), [&] { return "hyperteam form: " + print(f) + " " + detail::describe(x, fl); });
            }
        });
    }
    r.seconds = t.seconds();
    return r;
}

inline SuiteResult suite_excluded_middle(const Structure& a) {
    detail::Timer t;
    SuiteResult r{"excluded-middle"};
    AdifEvaluator ev(a);
    Hyperteam triv = trivial_hyperteam(a.size());
    std::vector<Formula> sentences;
    for (auto& f : law_pool())
        if (free_vars(f).is_empty()) sentences.push_back(f);
    for (auto& s : detail::parse_all({"A x . E y . R(x,y)", "E x . A y . R(x,y)", "E x . P(x)", "A x . P(x)",
                                      "A x . E[+{}] y . R(x,y) | x = y", "E x . A[+{}] y . E[+{x}] z . (x = y & y = z)"}))
        sentences.push_back(s);
    for (auto& s : sentences) {
        bool p = ev.sat(triv, Flag::EA, s), n = ev.sat(triv, Flag::EA, neg(s));
        r.check(p != n, [&] { return "both or neither of the sentence and its negation hold: " + print(s); });
        r.check(p == ev.sat(triv, Flag::AE, s), [&] { return "flags disagree on the trivial hyperteam: " + print(s); });
    }
    r.seconds = t.seconds();
    return r;
}

inline SuiteResult suite_boolean_laws(const Structure& a, const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"boolean-laws"};
    AdifEvaluator ev(a);
    std::map<std::string, std::size_t> per_item;
    for (auto& law : boolean_law_instances()) {
        ++per_item[law.label];
        VarSet need = set_union(support_vars(law.lhs), support_vars(law.rhs));
        c.each(need, [&](std::size_t v, std::size_t i) {
            auto& x = c.teams[v][i];
            for (Flag fl : {Flag::EA, Flag::AE}) {
                bool l = ev.sat(x, fl, law.lhs), rr = ev.sat(x, fl, law.rhs);
                r.check(law.implication ? (!l || rr) : (l == rr), [&] {
                    return "item " + law.label + ": " + print(law.lhs) + (law.implication ? "  =>  " : "  ==  ") +
                           print(law.rhs) + " on " + detail::describe(x, fl);
                });
            }
        });
    }
    r.notes["instances"] = boolean_law_instances().size();
    r.notes["items"] = per_item.size();
    r.seconds = t.seconds();
    return r;
}

inline SuiteResult suite_prefix_extension(const Structure& a, const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"prefix-extension"};
    AdifEvaluator ev(a);
    for (auto& [prefix, matrix] : prefix_extension_instances()) {
        Formula whole = attach_prefix(prefix, matrix);
        c.each(support_vars(whole), [&](std::size_t v, std::size_t i) {
            auto& x = c.teams[v][i];
            if (!detail::within_variable_bound(prefix.size(), x)) return;
            for (Flag fl : {Flag::EA, Flag::AE}) {
                Hyperteam e = extend_prefix(x, prefix, fl);
                r.check(ev.sat(x, fl, whole) == ev.sat(e, fl, matrix),
                        [&] { return print(whole) + " on " + detail::describe(x, fl); });
            }
        });
    }
    r.seconds = t.seconds();
    return r;
}

inline std::vector<SuiteResult> fundamentals(const Structure& a, const SuiteConfig& cfg) {
    if (cfg.max_teams == 0) {
        std::vector<SuiteResult> out;
        for (auto n : {"empty-and-null", "hyperteam-refinement", "double-dualisation", "game-theoretic-determinacy",
                       "excluded-middle", "boolean-laws", "prefix-extension"})
            out.push_back(detail::vacuous_result(n));
        return out;
    }
    HyperteamCorpus c(a.size(), cfg);
    return {suite_empty_null(a, c),      suite_refinement(a, c),      suite_double_dualisation(a, c),
            suite_determinacy(a, c),     suite_excluded_middle(a),    suite_boolean_laws(a, c),
            suite_prefix_extension(a, c)};
}

// Every formula occurring in a fundamentals query.
inline std::vector<Formula> fundamentals_formulas() {
    std::vector<Formula> out = law_pool();
    for (auto& f : law_pool()) out.push_back(neg(f));
    for (auto& l : boolean_law_instances()) {
        out.push_back(l.lhs);
        out.push_back(l.rhs);
    }
    for (auto& [p, m] : prefix_extension_instances()) out.push_back(attach_prefix(p, m));
    return out;
}

// sat on X, on reduce(X), and with the reducing evaluator must agree.
inline SuiteResult suite_reduce(const Structure& a, const SuiteConfig& cfg) {
    if (cfg.max_teams == 0) return detail::vacuous_result("reduce-soundness");
    detail::Timer t;
    SuiteResult r{"reduce-soundness"};
    HyperteamCorpus c(a.size(), cfg);
    SatOptions ro;
    ro.reduce = true;
    AdifEvaluator plain(a), reducing(a, ro);
    std::size_t skipped = 0;
    for (auto& f : fundamentals_formulas()) {
        const std::size_t bound = bound_vars(f).size();
        c.each(support_vars(f), [&](std::size_t v, std::size_t i) {
            auto& x = c.teams[v][i];
            if (!detail::within_variable_bound(bound, x)) {
                ++skipped;
                return;
            }
            Hyperteam rx = reduce(x);
            for (Flag fl : {Flag::EA, Flag::AE}) {
                bool s = plain.sat(x, fl, f);
                r.check(s == plain.sat(rx, fl, f), [&] { return "reduce(X) differs: " + print(f) + " " + detail::describe(x, fl); });
                r.check(s == reducing.sat(x, fl, f), [&] { return "reducing evaluator differs: " + print(f) + " " + detail::describe(x, fl); });
            }
        });
    }
    r.notes["skipped-over-three-variables"] = skipped;
    r.seconds = t.seconds();
    return r;
}

// ---- adequacy ------------------------------------------------------------------

inline std::vector<Formula> fol_pool() {
    return detail::parse_all({"P(x)", "x = y", "R(x,y)", "~R(y,x)", "P(x) | P(y)", "R(x,y) & ~P(y)", "E z . R(x,z)",
                              "A z . (R(z,x) | P(y))", "~(E z . (R(z,x) & P(z)))", "E y . (x = y & P(y))",
                              "A x . E y . R(x,y)", "(A z . ~R(x,z)) | E z . (z = y & ~P(x))",
                              "~(P(x) & ~R(x,y) | x = y)"});
}

inline std::vector<Formula> dif_exists_pool() {
    return detail::parse_all({"R(x,y)", "~(x = y)", "R(x,y) | P(x)", "P(x) & ~R(y,x)", "E[+{}] z . R(x,z)",
                              "E[+{x}] z . R(x,z)", "E[-{x}] z . z = y", "A[-{}] z . (R(x,z) | z = y)",
                              "A[-{}] z . E[+{}] u . z = u", "A[-{}] z . E[+{z}] u . (R(z,u) | P(x))",
                              "(E[+{y}] z . R(z,x)) | E[+{}] z . x = z", "A[-{}] x . E[+{}] y . x = y"});
}

inline std::vector<Formula> dif_forall_pool() {
    return detail::parse_all({"R(x,y)", "~P(x)", "x = y | ~R(x,y)", "A[+{}] z . R(x,z)", "A[+{x}] z . ~(z = x)",
                              "E[-{}] z . A[+{}] u . (z = u | R(u,z))", "E[-{}] z . (R(x,z) & P(z))",
                              "A[-{x}] z . (z = y | P(z))", "E[-{}] x . A[+{}] y . ~(x = y)",
                              "(A[+{y}] z . R(z,x)) & A[+{}] z . ~(y = z)"});
}

inline SuiteResult suite_fol_adequacy(const Structure& a, const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"fol-adequacy"};
    AdifEvaluator ev(a);
    for (auto& f : fol_pool()) {
        if (!is_fol(f)) {
            r.check(false, [&] { return "pool formula outside the first-order fragment: " + print(f); });
            continue;
        }
        c.each(support_vars(f), [&](std::size_t v, std::size_t i) {
            auto& x = c.teams[v][i];
            std::vector<std::vector<bool>> truth;
            for (std::size_t k = 0; k < x.teams.size(); ++k) {
                std::vector<bool> row;
                for (auto& s : team_assignments(x.team(k))) row.push_back(sat_fol(a, s, f));
                truth.push_back(row);
            }
            bool oracle_ea = false, oracle_ae = true;
            for (auto& row : truth) {
                bool all = true, any = false;
                for (bool b : row) {
                    all = all && b;
                    any = any || b;
                }
                oracle_ea = oracle_ea || all;
                oracle_ae = oracle_ae && any;
            }
            r.check(ev.sat(x, Flag::EA, f) == oracle_ea, [&] { return print(f) + " " + detail::describe(x, Flag::EA); });
            r.check(ev.sat(x, Flag::AE, f) == oracle_ae, [&] { return print(f) + " " + detail::describe(x, Flag::AE); });
        });
    }
    r.seconds = t.seconds();
    return r;
}

inline SuiteResult suite_dif_adequacy(const Structure& a, const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"dif-adequacy"};
    AdifEvaluator ev(a);
    std::size_t skipped = 0;
    auto run = [&](const std::vector<Formula>& pool, Flag fl, DifFlag beta) {
        for (auto& f : pool)
            c.each(support_vars(f), [&](std::size_t v, std::size_t i) {
                auto& x = c.teams[v][i];
                if (!detail::within_variable_bound(bound_vars(f).size(), x)) {
                    ++skipped;
                    return;
                }
                bool oracle = fl == Flag::EA ? false : true;
                for (std::size_t k = 0; k < x.teams.size(); ++k) {
                    bool s = sat_dif(a, x.team(k), beta, f);
                    oracle = fl == Flag::EA ? (oracle || s) : (oracle && s);
                }
                r.check(ev.sat(x, fl, f) == oracle, [&] { return print(f) + " " + detail::describe(x, fl); });
            });
    };
    run(dif_exists_pool(), Flag::EA, DifFlag::Forall);
    run(dif_forall_pool(), Flag::AE, DifFlag::Exists);
    r.notes["skipped-over-three-variables"] = skipped;
    r.seconds = t.seconds();
    return r;
}

struct UndeterminedReport {
    bool phi3_true = false, phi3_false = false; // DIF truth / falsity of the universal sentence
    bool phi4_true = false, phi4_false = false;
    bool phi3_adif = false, phi4_adif = false;   // ADIF truth
    bool phi3_adif_neg = false, phi4_adif_neg = false;

    bool as_expected() const {
        return !phi3_true && !phi3_false && !phi4_true && !phi4_false && !phi3_adif && phi3_adif_neg && phi4_adif &&
               !phi4_adif_neg;
    }
};

// An IF sentence is true when its ∃-DIF reading holds under ∀ on {∅} and
// false when its ∀-DIF reading fails under ∃ on {∅}.
inline UndeterminedReport undetermined_pair(const Structure& a) {
    Team empty_asg = trivial_hyperteam(a.size()).team(0);
    auto phi3e = parse_formula("A[-{}] x . E[+{}] y . x = y");
    auto phi3a = parse_formula("A[-{}] x . E[-{}] y . x = y");
    auto phi4a = parse_formula("E[-{}] x . A[+{}] y . ~(x = y)");
    auto phi4e = parse_formula("E[-{}] x . A[-{}] y . ~(x = y)");
    UndeterminedReport u;
    u.phi3_true = sat_dif(a, empty_asg, DifFlag::Forall, phi3e);
    u.phi3_false = !sat_dif(a, empty_asg, DifFlag::Exists, phi3a);
    u.phi4_true = sat_dif(a, empty_asg, DifFlag::Forall, phi4e);
    u.phi4_false = !sat_dif(a, empty_asg, DifFlag::Exists, phi4a);
    // The -{} constraints make these pseudo sentences, so they are evaluated on {∅} directly.
    Hyperteam triv = trivial_hyperteam(a.size());
    u.phi3_adif = sat_adif(a, triv, Flag::EA, phi3e);
    u.phi3_adif_neg = sat_adif(a, triv, Flag::EA, neg(phi3e));
    u.phi4_adif = sat_adif(a, triv, Flag::EA, phi4a);
    u.phi4_adif_neg = sat_adif(a, triv, Flag::EA, neg(phi4a));
    return u;
}

inline SuiteResult suite_undetermined(const Structure& a) {
    detail::Timer t;
    SuiteResult r{"if-undetermined-pair"};
    auto u = undetermined_pair(a);
    r.check(!u.phi3_true && !u.phi3_false, [] { return "universal sentence is determined under DIF"; });
    r.check(!u.phi4_true && !u.phi4_false, [] { return "existential sentence is determined under DIF"; });
    r.check(!u.phi3_adif && u.phi3_adif_neg, [] { return "ADIF does not refute the universal sentence"; });
    r.check(u.phi4_adif && !u.phi4_adif_neg, [] { return "ADIF does not prove the existential sentence"; });
    r.seconds = t.seconds();
    return r;
}

// Prenex sentences over x, y, z with every quantifier constrained to a subset
// of the earlier variables, and matrices over = and R. A -W constraint would
// leave cofinitely many free variables, so none appear here.
inline std::vector<Formula> prenex_corpus() {
    std::vector<Formula> out;
    const std::vector<std::string> names{"x", "y", "z"};
    const std::vector<std::vector<std::string>> matrices{
        {"x = x", "R(x,x)", "~R(x,x)"},
        {"x = y", "R(x,y)", "~(x = y) & R(y,x)", "R(x,y) | R(y,x)"},
        {"x = y & y = z", "R(x,z) | ~(y = z)", "R(x,y) & R(y,z) | x = z"},
    };
    std::function<void(std::size_t, std::size_t, Prefix&)> rec = [&](std::size_t len, std::size_t i, Prefix& p) {
        if (i == len) {
            for (auto& m : matrices[len - 1]) out.push_back(attach_prefix(p, parse_formula(m)));
            return;
        }
        std::vector<std::string> earlier(names.begin(), names.begin() + static_cast<long>(i));
        std::vector<Constraint> cons;
        for (auto& s : detail::subsets_of(earlier)) cons.push_back(Constraint::plus(s));
        for (QSym q : {QSym::Exists, QSym::Forall})
            for (auto& c : cons) {
                p.push_back(Quant{q, c, names[i]});
                rec(len, i + 1, p);
                p.pop_back();
            }
    };
    for (std::size_t len = 1; len <= 3; ++len) {
        Prefix p;
        rec(len, 0, p);
    }
    return out;
}

struct AgreementRow {
    Formula sentence;
    bool compositional = false, meta = false, game = false;
    std::size_t states = 0;
};

inline SuiteResult suite_engine_agreement(const Structure& a, const SuiteConfig& cfg,
                                          std::vector<AgreementRow>* rows = nullptr) {
    detail::Timer t;
    SuiteResult r{"engine-agreement"};
    GameOptions go;
    go.max_states = cfg.max_states;
    std::size_t true_count = 0;
    for (auto& f : prenex_corpus()) {
        AgreementRow row{f};
        row.compositional = is_true_sentence(a, f);
        row.meta = model_check(a, f);
        auto g = game_winner(a, f, go);
        row.game = g.winner == Player::Eloise;
        row.states = g.game.states.size();
        true_count += row.compositional;
        r.check(row.compositional == row.meta && row.meta == row.game, [&] {
            return print(f) + " compositional=" + std::to_string(row.compositional) + " meta=" +
                   std::to_string(row.meta) + " game=" + std::to_string(row.game);
        });
        r.check(verify_strategy(g.game.game, g.solution, 0) && verify_strategy(g.game.game, g.solution, 1),
                [&] { return "solver strategy fails verification on " + print(f); });
        if (rows) rows->push_back(row);
    }
    r.notes["sentences"] = prenex_corpus().size();
    r.notes["true"] = true_count;
    r.seconds = t.seconds();
    return r;
}

inline std::vector<SuiteResult> adequacy(const Structure& a, const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    if (cfg.max_teams == 0) {
        out.push_back(detail::vacuous_result("fol-adequacy"));
        out.push_back(detail::vacuous_result("dif-adequacy"));
    } else {
        HyperteamCorpus c(a.size(), cfg);
        out.push_back(suite_fol_adequacy(a, c));
        out.push_back(suite_dif_adequacy(a, c));
    }
    out.push_back(suite_undetermined(a));
    out.push_back(suite_engine_agreement(a, cfg));
    return out;
}

// ---- appendix suites -------------------------------------------------------------

inline SuiteResult suite_monotonicity(const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"monotonicity"};
    detail::RefinementCache cache(c);
    const std::string fresh = "z";
    for (std::size_t v = 0; v < c.varsets.size(); ++v) {
        auto& xs = c.teams[v];
        auto subsets = detail::subsets_of(c.varsets[v]);
        // ext_U(X, z) for every X and U ⊆ var(X)
        std::vector<std::vector<Hyperteam>> ext(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (auto& u : subsets) ext[i].push_back(extend(xs[i], fresh, u));
        // The corpus is closed under taking subsets of teams, so every bipartition
        // of a member is a pair of corpus indices.
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < xs.size(); ++i) index[xs[i].key()] = i;
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> parts(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const std::size_t n = xs[i].teams.size();
            for (std::size_t b = 0; b < (std::size_t(1) << n); ++b) {
                std::vector<Bits> p1, p2;
                for (std::size_t k = 0; k < n; ++k) ((b >> k) & 1 ? p1 : p2).push_back(xs[i].teams[k]);
                parts[i].emplace_back(index.at(from_teams(xs[i].dom, xs[i].vars, p1).key()),
                                      index.at(from_teams(xs[i].dom, xs[i].vars, p2).key()));
            }
        }
        for (std::size_t wi = 0; wi < subsets.size(); ++wi) {
            const VarSet& w = subsets[wi];
            VarSet wz = w;
            wz.insert(fresh);
            // item 2a
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t ui = 0; ui < subsets.size(); ++ui)
                    r.check(equal_w(xs[i], ext[i][ui], w), [&] {
                        return "2a: X and ext_" + to_string(subsets[ui]) + "(X,z) differ on " + to_string(w) + " for " +
                               print_hyperteam(xs[i]);
                    });
            auto& rel = cache.get(v, w);
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < xs.size(); ++j) {
                    if (!rel[i][j]) continue;
                    auto& x = xs[i];
                    auto& y = xs[j];
                    // item 1
                    r.check(refines(c.duals[v][j], c.duals[v][i], w), [&] {
                        return "1: dual not antitone on " + to_string(w) + ": " + print_hyperteam(x) + " / " + print_hyperteam(y);
                    });
                    // item 2b
                    for (std::size_t ui = 0; ui < subsets.size(); ++ui) {
                        if (!subset_of(subsets[ui], w)) continue;
                        for (std::size_t uj = 0; uj < subsets.size(); ++uj) {
                            if (!subset_of(subsets[ui], subsets[uj])) continue;
                            r.check(refines(ext[i][ui], ext[j][uj], wz), [&] {
                                return "2b: U=" + to_string(subsets[ui]) + " U'=" + to_string(subsets[uj]) + " W=" +
                                       to_string(w) + " " + print_hyperteam(x) + " / " + print_hyperteam(y);
                            });
                        }
                    }
                    // item 3
                    for (auto [y1, y2] : parts[j]) {
                        bool found = false;
                        for (auto [x1, x2] : parts[i])
                            if (rel[x1][y1] && rel[x2][y2]) {
                                found = true;
                                break;
                            }
                        r.check(found, [&] { return "3: no dominated bipartition on " + to_string(w) + " for " + print_hyperteam(x) + " / " + print_hyperteam(y); });
                    }
                }
        }
    }
    r.seconds = t.seconds();
    return r;
}

inline SuiteResult suite_cylindrical_extension(const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"cylindrical-extension"};
    for (std::size_t v = 0; v < c.varsets.size(); ++v)
        for (std::size_t i = 0; i < c.teams[v].size(); ++i) {
            auto& x = c.teams[v][i];
            Hyperteam cyl = cylindrify(x, "z");
            VarSet w = x.var_set();
            for (int k = 0; k < 2; ++k) {
                if (k) w.insert("z");
                Hyperteam other = dualize(extend(c.duals[v][i], "z", w));
                r.check(equiv(cyl, other), [&] { return "W=" + to_string(w) + " X=" + print_hyperteam(x); });
            }
        }
    r.seconds = t.seconds();
    return r;
}

inline SuiteResult suite_team_partitioning(const HyperteamCorpus& c, const SuiteConfig& cfg) {
    detail::Timer t;
    SuiteResult r{"team-partitioning"};
    std::size_t skipped = 0;
    for (std::size_t v = 0; v < c.varsets.size(); ++v)
        for (std::size_t i = 0; i < c.teams[v].size(); ++i) {
            auto& x = c.teams[v][i];
            auto& d = c.duals[v][i];
            if (d.teams.size() > cfg.partition_dual_cap) {
                ++skipped;
                continue;
            }
            // All (dual(X1), dual(X2)) over bipartitions of dual(X).
            std::vector<std::pair<Hyperteam, Hyperteam>> parts;
            for (auto& [x1, x2] : bipartitions(d)) parts.push_back({dualize(x1), dualize(x2)});
            // item 1
            for (auto& [d1, d2] : parts)
                for (auto& y1 : d1.teams)
                    for (auto& y2 : d2.teams) {
                        Bits u = y1 | y2;
                        bool found = std::any_of(x.teams.begin(), x.teams.end(), [&](const Bits& tt) { return tt.is_subset_of(u); });
                        r.check(found, [&] { return "1: X=" + print_hyperteam(x); });
                    }
            // item 2
            for (auto& tt : x.teams) {
                std::vector<std::size_t> pts;
                for (auto p = tt.find_first(); p != Bits::npos; p = tt.find_next(p)) pts.push_back(p);
                for (std::size_t m = 0; m < (std::size_t(1) << pts.size()); ++m) {
                    Bits t1(tt.size()), t2(tt.size());
                    for (std::size_t k = 0; k < pts.size(); ++k) ((m >> k) & 1 ? t1 : t2).set(pts[k]);
                    bool found = false;
                    for (auto& [d1, d2] : parts) {
                        bool a1 = std::any_of(d1.teams.begin(), d1.teams.end(), [&](const Bits& y) { return y.is_subset_of(t1); });
                        bool a2 = std::any_of(d2.teams.begin(), d2.teams.end(), [&](const Bits& y) { return y.is_subset_of(t2); });
                        if (a1 && a2) {
                            found = true;
                            break;
                        }
                    }
                    r.check(found, [&] { return "2: X=" + print_hyperteam(x); });
                }
            }
        }
    r.notes["skipped-over-cap"] = skipped;
    r.seconds = t.seconds();
    return r;
}

// Items 2 and 3 rely on a choice function existing, so they are checked on
// non-null hyperteams; item 1 on all of them.
inline SuiteResult suite_dualisation_two(const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"dualisation-ii"};
    std::size_t null_cases = 0;
    for (std::size_t v = 0; v < c.varsets.size(); ++v)
        for (std::size_t i = 0; i < c.teams[v].size(); ++i) {
            auto& x = c.teams[v][i];
            auto& d = c.duals[v][i];
            const std::size_t n = x.points();
            if (n > 4) continue;
            if (x.is_null()) ++null_cases;
            for (std::size_t m = 0; m < (std::size_t(1) << n); ++m) {
                Bits psi(n);
                for (std::size_t k = 0; k < n; ++k)
                    if ((m >> k) & 1) psi.set(k);
                auto some_inside = [&](const Hyperteam& h) {
                    return std::any_of(h.teams.begin(), h.teams.end(), [&](const Bits& tt) { return tt.is_subset_of(psi); });
                };
                auto all_inside = [&](const Hyperteam& h) {
                    return std::all_of(h.teams.begin(), h.teams.end(), [&](const Bits& tt) { return tt.is_subset_of(psi); });
                };
                auto all_meet = [&](const Hyperteam& h) {
                    return std::all_of(h.teams.begin(), h.teams.end(), [&](const Bits& tt) { return tt.intersects(psi); });
                };
                auto some_meet = [&](const Hyperteam& h) {
                    return std::any_of(h.teams.begin(), h.teams.end(), [&](const Bits& tt) { return tt.intersects(psi); });
                };
                auto where = [&] { return "X=" + print_hyperteam(x) + " vars " + to_string(x.var_set()) + " psi mask " + std::to_string(m); };
                r.check(some_inside(x) == all_meet(d), [&] { return "1: " + where(); });
                r.check(some_inside(d) == all_meet(x), [&] { return "1 (dual side): " + where(); });
                if (x.is_null()) continue;
                r.check(some_meet(x) == some_meet(d), [&] { return "2: " + where(); });
                r.check(all_inside(x) == all_inside(d), [&] { return "3: " + where(); });
            }
        }
    r.notes["null-hyperteams-item1-only"] = null_cases;
    r.seconds = t.seconds();
    return r;
}

// All-meta prenex sentences with at most two quantifiers.
inline std::vector<Formula> meta_corpus() {
    std::vector<Formula> out;
    auto one = std::vector<std::string>{"P(x)", "R(x,x)", "~(x = x) | P(x)"};
    auto two = std::vector<std::string>{"x = y", "R(x,y)", "~(x = y) | P(x)", "R(y,x) & P(y)"};
    for (std::string q : {"EE", "AA"})
        for (auto& m : one) out.push_back(parse_formula(q + " x . " + m, ParseMode::Meta));
    for (std::string q1 : {"EE", "AA"})
        for (std::string q2 : {"EE", "AA"})
            for (std::string c1 : {"[+{}]", "[+{y}]", "[-{}]"})
                for (std::string c2 : {"[+{}]", "[+{x}]", "[-{}]"})
                    for (auto& m : two)
                        out.push_back(parse_formula(q1 + c1 + " x . " + q2 + c2 + " y . " + m, ParseMode::Meta));
    return out;
}

inline SuiteResult suite_meta(const Structure& a, const HyperteamCorpus& c) {
    detail::Timer t;
    SuiteResult r{"meta-skolemisation"};
    std::size_t cyclic = 0, witnesses = 0;
    Hyperteam triv = trivial_hyperteam(a.size());
    for (auto& f : meta_corpus()) {
        auto cyclic_error = [](const Error& e) {
            if (e.code() != ErrorCode::CyclicFunctionAssignment) throw e;
        };
        bool truth = false, truth_cyclic = false, sk_cyclic = false;
        std::optional<Skolemisation> sk;
        try {
            truth = sat_meta(a, {}, triv, Flag::EA, f);
        } catch (const Error& e) {
            cyclic_error(e);
            truth_cyclic = true;
        }
        try {
            sk = skolemisation_search(a, f);
        } catch (const Error& e) {
            cyclic_error(e);
            sk_cyclic = true;
        }
        r.check(truth_cyclic == sk_cyclic, [&] { return "cycle detection disagrees on " + print(f); });
        if (truth_cyclic || sk_cyclic) {
            ++cyclic;
            continue;
        }
        witnesses += sk.has_value();
        r.check(sk.has_value() == truth, [&] { return print(f) + " sat_meta=" + std::to_string(truth); });
    }
    // With an empty function assignment the meta relation is the plain one.
    MetaEvaluator mev(a);
    AdifEvaluator ev(a);
    for (auto& f : law_pool())
        c.each(support_vars(f), [&](std::size_t v, std::size_t i) {
            auto& x = c.teams[v][i];
            for (Flag fl : {Flag::EA, Flag::AE})
                r.check(mev.sat({}, x, fl, f) == ev.sat(x, fl, f), [&] { return "meta/plain: " + print(f) + " " + detail::describe(x, fl); });
        });
    // Plain and meta readings of a single quantifier over a first-order matrix.
    auto matrices = detail::parse_all({"R(x,z)", "z = x | P(z)", "~(x = z)", "P(z)"});
    for (std::size_t i = 0; i < c.teams[1].size(); ++i) {
        auto& x = c.teams[1][i];
        for (QSym q : {QSym::Exists, QSym::Forall})
            for (auto& con : {Constraint::plus({}), Constraint::plus({"x"}), Constraint::except({"z"})})
                for (auto& m : matrices)
                    for (Flag fl : {Flag::EA, Flag::AE}) {
                        auto [p, mm] = quantifier_interchange_check(a, {}, x, fl, q, con, "z", m);
                        r.check(p == mm, [&] { return "interchange: " + print(m) + " " + detail::describe(x, fl); });
                    }
    }
    r.notes["cyclic-skipped"] = cyclic;
    r.notes["witnesses"] = witnesses;
    r.seconds = t.seconds();
    return r;
}

inline SuiteResult suite_bucket_soundness(const Structure& a, const SuiteConfig& cfg) {
    detail::Timer t;
    SuiteResult r{"bucket-soundness"};
    GameOptions go;
    go.max_states = cfg.max_states;
    std::size_t states = 0;
    for (auto& f : prenex_corpus()) {
        auto g = expand_to_parity(a, f, go);
        long n = check_bucket_soundness(g, cfg.bucket_depth);
        r.check(n >= 0, [&] { return print(f); });
        if (n > 0) states += static_cast<std::size_t>(n);
        // A stamped priority is even exactly when a universal variable cheated.
        for (auto& s : g.states) {
            if (s.entry_priority <= 0) continue;
            bool universal = false;
            for (std::size_t i = 0; i < g.prefix.size(); ++i)
                if (g.pr[i] == s.entry_priority) universal = !is_existential(g.prefix[i].sym);
            r.check((s.entry_priority % 2 == 0) == universal, [&] { return "priority parity in " + print(f); });
        }
    }
    r.notes["depth"] = static_cast<std::size_t>(cfg.bucket_depth);
    r.notes["states"] = states;
    r.seconds = t.seconds();
    return r;
}

// Zielonka against brute force on seeded random games.
inline SuiteResult suite_parity(const SuiteConfig& cfg, std::size_t games = 300) {
    detail::Timer t;
    SuiteResult r{"parity-solver"};
    std::mt19937 rng(cfg.seed);
    for (std::size_t k = 0; k < games; ++k) {
        ParityGame g;
        int n = 1 + static_cast<int>(rng() % 7);
        for (int v = 0; v < n; ++v) g.add_state(static_cast<int>(rng() % 2), static_cast<int>(rng() % 5));
        for (int v = 0; v < n; ++v) {
            int d = 1 + static_cast<int>(rng() % 2);
            for (int e = 0; e < d; ++e) {
                int w = static_cast<int>(rng() % static_cast<unsigned>(n));
                if (std::find(g.succ[v].begin(), g.succ[v].end(), w) == g.succ[v].end()) g.succ[v].push_back(w);
            }
        }
        auto s = solve_parity(g);
        auto b = solve_parity_brute(g);
        r.check(s.winner == b, [&] { return "winner regions differ on random game #" + std::to_string(k); });
        r.check(verify_strategy(g, s, 0) && verify_strategy(g, s, 1),
                [&] { return "strategy fails on random game #" + std::to_string(k); });
    }
    r.seconds = t.seconds();
    return r;
}

inline std::vector<SuiteResult> appendix(const Structure& a, const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    if (cfg.max_teams == 0) {
        for (auto n : {"monotonicity", "cylindrical-extension", "team-partitioning", "dualisation-ii", "meta-skolemisation"})
            out.push_back(detail::vacuous_result(n));
    } else {
        HyperteamCorpus c(a.size(), cfg);
        out.push_back(suite_monotonicity(c));
        out.push_back(suite_cylindrical_extension(c));
        out.push_back(suite_team_partitioning(c, cfg));
        out.push_back(suite_dualisation_two(c));
        out.push_back(suite_meta(a, c));
    }
    out.push_back(suite_bucket_soundness(a, cfg));
    out.push_back(suite_parity(cfg));
    return out;
}

} // namespace adif
