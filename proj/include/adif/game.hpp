#pragma once

#include "errors.hpp"
#include "formula.hpp"
#include "hyperteam.hpp"
#include "meta.hpp"
#include "parity.hpp"
#include "semantics.hpp"
#include "structure.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace adif {

enum class Phase : std::uint8_t { Decision = 1, Challenge = 2 };

inline const char* phase_name(Phase p) { return p == Phase::Decision ? "I" : "II"; }

// Minimal strictly increasing priorities, odd for ∃ and even for ∀.
inline std::vector<int> priority_map(const Prefix& prefix) {
    std::vector<int> out;
    int prev = 0;
    for (auto& q : prefix) {
        int want = is_existential(q.sym) ? 1 : 0;
        int p = prev + 1;
        if (p % 2 != want) ++p;
        out.push_back(p);
        prev = p;
    }
    return out;
}

// A bucket is a consistent partial table key -> value; -1 marks a free entry.
using Bucket = std::vector<int>;

struct BucketUpdate {
    Bucket bucket;
    bool cheated;
};

inline BucketUpdate bucket_update(const Bucket& b, std::size_t key, int value) {
    if (b[key] >= 0 && b[key] != value) {
        Bucket fresh(b.size(), -1);
        fresh[key] = value;
        return {std::move(fresh), true};
    }
    Bucket next = b;
    next[key] = value;
    return {std::move(next), false};
}

struct GameState {
    int index = 0; // position in the prefix subformulae; n is the matrix
    Phase phase = Phase::Decision;
    std::vector<int> sigma;             // one value per prefix variable, -1 if unassigned
    std::vector<Bucket> buckets;        // one per prefix variable
    int entry_priority = 0;
};

struct IndependenceGame {
    Formula sentence;
    Prenex prenex;
    Prefix prefix;                   // constraints materialised over earlier variables
    std::vector<char> vacuous;       // x_i not free in its body
    std::vector<std::vector<int>> dom_vars; // D_i: indices of earlier variables the function of x_i reads
    std::vector<int> pr;
    int dom = 2;

    ParityGame game;
    std::vector<GameState> states;

    std::size_t key_of(const GameState& s, int var) const {
        std::size_t k = 0;
        const auto& d = dom_vars[var];
        for (std::size_t j = d.size(); j-- > 0;) k = k * static_cast<std::size_t>(dom) + static_cast<std::size_t>(s.sigma[d[j]]);
        return k;
    }

    std::string describe(const GameState& s, const Structure* a = nullptr) const {
        std::string asg = "{";
        bool first = true;
        for (std::size_t i = 0; i < s.sigma.size(); ++i) {
            if (s.sigma[i] < 0) continue;
            asg += (first ? "" : " ") + prefix[i].var + "=" + value_name(s.sigma[i], a);
            first = false;
        }
        asg += "}";
        return std::string(phase_name(s.phase)) + " " + std::to_string(s.index) + " " + asg + " " +
               std::to_string(game.priority[&s - states.data()]);
    }
};

struct GameOptions {
    std::size_t max_states = 5'000'000;
};

namespace detail {

inline std::string encode_state(const GameState& s) {
    std::string k;
    k.reserve(4 + s.sigma.size() + s.buckets.size() * 4);
    k += static_cast<char>(s.index);
    k += static_cast<char>(s.phase);
    k += static_cast<char>(s.entry_priority);
    for (int v : s.sigma) k += static_cast<char>(v);
    for (auto& b : s.buckets)
        for (int v : b) k += static_cast<char>(v);
    return k;
}

} // namespace detail

// Builds the independence game of a prenex sentence and expands it, bucket
// states included, into an explicit max-parity game.
inline IndependenceGame expand_to_parity(const Structure& a, const Formula& f, GameOptions opt = {}) {
    check_signature(f, a);
    IndependenceGame g;
    g.sentence = f;
    g.prenex = prenex_sentence(f);
    g.prefix = materialize_prefix(g.prenex.prefix, {});
    g.dom = a.size();
    g.pr = priority_map(g.prefix);
    const std::size_t n = g.prefix.size();
    auto psf = prefix_subformulae(f);
    for (std::size_t i = 0; i < n; ++i) g.vacuous.push_back(!free_vars(psf[i + 1]).contains(g.prefix[i].var));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> d;
        for (std::size_t j = 0; j < i; ++j)
            if (!g.vacuous[j] && g.prefix[i].con.vars.count(g.prefix[j].var)) d.push_back(static_cast<int>(j));
        g.dom_vars.push_back(d);
    }

    std::unordered_map<std::string, int> index;
    std::vector<int> frontier;
    auto intern = [&](GameState s, int prio) {
        std::string k = detail::encode_state(s);
        if (auto it = index.find(k); it != index.end()) return it->second;
        if (g.states.size() >= opt.max_states)
            fail(ErrorCode::StateSpaceBudgetExceeded, "expanded " + std::to_string(g.states.size()) + " states");
        int owner = 0;
        if (s.index < static_cast<int>(n) && !is_existential(g.prefix[s.index].sym)) owner = 1;
        int id = g.game.add_state(owner, prio);
        g.states.push_back(std::move(s));
        index.emplace(std::move(k), id);
        frontier.push_back(id);
        return id;
    };

    GameState init;
    init.sigma.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) init.buckets.emplace_back(ipow(g.dom, g.dom_vars[i].size()), -1);
    g.game.initial = intern(init, 0);

    auto enter = [&](const GameState& from, int var, std::vector<int> sigma, Phase phase) {
        GameState t;
        t.index = var + 1;
        t.phase = phase;
        t.sigma = std::move(sigma);
        t.buckets = from.buckets;
        int prio = 0;
        if (phase == Phase::Decision && !g.vacuous[var]) {
            auto up = bucket_update(from.buckets[var], g.key_of(t, var), t.sigma[var]);
            t.buckets[var] = std::move(up.bucket);
            if (up.cheated) prio = g.pr[var];
        }
        t.entry_priority = prio;
        return intern(std::move(t), prio);
    };

    while (!frontier.empty()) {
        int id = frontier.back();
        frontier.pop_back();
        GameState s = g.states[id];
        std::vector<int> succ;
        if (s.index == static_cast<int>(n)) {
            if (s.phase == Phase::Decision) {
                GameState t = s;
                t.index = 0;
                t.phase = Phase::Challenge;
                t.entry_priority = 0;
                succ.push_back(intern(std::move(t), 0));
            } else {
                Assignment asg;
                for (std::size_t i = 0; i < n; ++i)
                    if (s.sigma[i] >= 0) asg[g.prefix[i].var] = s.sigma[i];
                g.game.priority[id] = sat_fol(a, asg, g.prenex.matrix) ? 0 : 1;
                succ.push_back(id);
            }
        } else {
            const int i = s.index;
            if (g.vacuous[i]) {
                succ.push_back(enter(s, i, s.sigma, s.phase));
            } else if (s.phase == Phase::Decision) {
                for (int v = 0; v < g.dom; ++v) {
                    auto sigma = s.sigma;
                    sigma[i] = v;
                    succ.push_back(enter(s, i, std::move(sigma), Phase::Decision));
                }
            } else {
                succ.push_back(enter(s, i, s.sigma, Phase::Challenge));
                for (int v = 0; v < g.dom; ++v) {
                    if (v == s.sigma[i]) continue;
                    auto sigma = s.sigma;
                    for (std::size_t j = static_cast<std::size_t>(i); j < n; ++j) sigma[j] = -1;
                    sigma[i] = v;
                    succ.push_back(enter(s, i, std::move(sigma), Phase::Decision));
                }
            }
        }
        g.game.succ[id] = std::move(succ);
    }
    return g;
}

enum class Player { Eloise, Abelard };

inline const char* player_name(Player p) { return p == Player::Eloise ? "Eloise" : "Abelard"; }

struct PlayTrace {
    std::vector<int> states;
    int cycle_start = -1; // index into states where the repeated suffix starts; -1 for none
    bool terminal = false;
    int cycle_max_priority = -1;
};

// Follows fixed choices from the initial state until a state repeats.
inline PlayTrace play(const IndependenceGame& g, const std::function<int(int)>& choose) {
    PlayTrace t;
    std::unordered_map<int, int> seen;
    int v = g.game.initial;
    while (!seen.count(v)) {
        seen[v] = static_cast<int>(t.states.size());
        t.states.push_back(v);
        const auto& succ = g.game.succ[v];
        if (succ.size() == 1 && succ[0] == v) {
            t.terminal = true;
            return t;
        }
        v = choose(v);
    }
    t.cycle_start = seen[v];
    for (std::size_t i = static_cast<std::size_t>(t.cycle_start); i < t.states.size(); ++i)
        t.cycle_max_priority = std::max(t.cycle_max_priority, g.game.priority[t.states[i]]);
    return t;
}

struct GameResult {
    Player winner;
    IndependenceGame game;
    ParitySolution solution;
    PlayTrace trace; // winner's strategy against the loser's lowest-index moves

    std::string trace_text(const Structure* a = nullptr) const {
        std::string out;
        for (int v : trace.states) out += game.describe(game.states[v], a) + "\n";
        if (trace.terminal) out += "terminal\n";
        else
            out += "cycle " + std::to_string(trace.cycle_start) + " max-priority " + std::to_string(trace.cycle_max_priority) + "\n";
        out += std::string("verdict ") + player_name(winner) + "\n";
        return out;
    }
};

// Strategy of the solved game where the owner wins, else the lowest-index move.
inline int default_choice(const IndependenceGame& g, const ParitySolution& s, int v) {
    if (s.strategy[v] >= 0) return s.strategy[v];
    return *std::min_element(g.game.succ[v].begin(), g.game.succ[v].end());
}

inline GameResult game_winner(const Structure& a, const Formula& f, GameOptions opt = {}) {
    GameResult r{Player::Eloise, expand_to_parity(a, f, opt), {}, {}};
    r.solution = solve_parity(r.game.game);
    r.winner = r.solution.winner[r.game.game.initial] == 0 ? Player::Eloise : Player::Abelard;
    r.trace = play(r.game, [&](int v) { return default_choice(r.game, r.solution, v); });
    return r;
}

// Appendix-style bucket soundness: in every reachable state up to `depth`
// moves, every choice of one function per bucket reproduces the stored
// assignment. Returns the number of states checked, or -1 on a violation.
inline long check_bucket_soundness(const IndependenceGame& g, int depth) {
    const std::size_t n = g.prefix.size();
    std::vector<int> dist(g.states.size(), -1);
    std::vector<int> order{g.game.initial};
    dist[g.game.initial] = 0;
    for (std::size_t h = 0; h < order.size(); ++h) {
        int v = order[h];
        if (dist[v] >= depth) continue;
        for (int w : g.game.succ[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                order.push_back(w);
            }
    }
    long checked = 0;
    for (int v : order) {
        const GameState& s = g.states[v];
        // All functions consistent with each bucket.
        std::vector<std::vector<std::vector<int>>> options(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Bucket& b = s.buckets[i];
            std::vector<int> table(b.size(), 0);
            while (true) {
                bool ok = true;
                for (std::size_t k = 0; k < b.size(); ++k) ok = ok && (b[k] < 0 || b[k] == table[k]);
                if (ok) options[i].push_back(table);
                std::size_t j = 0;
                while (j < table.size() && ++table[j] == g.dom) table[j++] = 0;
                if (j == table.size()) break;
            }
            if (options[i].empty()) return -1; // buckets are never empty
        }
        std::vector<std::size_t> pick(n, 0);
        while (true) {
            GameState probe = s;
            for (std::size_t i = 0; i < n; ++i) {
                if (s.sigma[i] < 0 || g.vacuous[i]) continue;
                int value = options[i][pick[i]][g.key_of(probe, static_cast<int>(i))];
                if (value != s.sigma[i]) return -1;
            }
            std::size_t j = 0;
            while (j < n && ++pick[j] == options[j].size()) pick[j++] = 0;
            if (j == n) break;
        }
        ++checked;
    }
    return checked;
}

} // namespace adif
