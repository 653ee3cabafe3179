#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <vector>

namespace adif {

// Max-parity game. Player 0 (Eloise) wins a play when the largest priority
// seen infinitely often is even.
struct ParityGame {
    std::vector<int> owner;
    std::vector<int> priority;
    std::vector<std::vector<int>> succ;
    int initial = 0;

    int size() const { return static_cast<int>(owner.size()); }

    int add_state(int own, int prio) {
        owner.push_back(own);
        priority.push_back(prio);
        succ.emplace_back();
        return size() - 1;
    }
};

struct ParitySolution {
    std::vector<int> winner;   // 0 or 1 for each state
    std::vector<int> strategy; // successor for the owner where the owner wins, -1 elsewhere
};

namespace detail {

class Zielonka {
public:
    explicit Zielonka(const ParityGame& g) : g_(g), n_(g.size()), pred_(n_), strat_(n_, -1) {
        for (int v = 0; v < n_; ++v)
            for (int w : g.succ[v]) pred_[w].push_back(v);
        for (auto& p : pred_) {
            std::sort(p.begin(), p.end());
            p.erase(std::unique(p.begin(), p.end()), p.end());
        }
    }

    ParitySolution run() {
        std::vector<char> all(n_, 1);
        std::vector<char> w0(n_, 0), w1(n_, 0);
        solve(all, w0, w1);
        ParitySolution out{std::vector<int>(n_), std::vector<int>(n_, -1)};
        for (int v = 0; v < n_; ++v) {
            out.winner[v] = w0[v] ? 0 : 1;
            if (out.winner[v] == g_.owner[v]) out.strategy[v] = strat_[v];
        }
        return out;
    }

private:
    const ParityGame& g_;
    int n_;
    std::vector<std::vector<int>> pred_;
    std::vector<int> strat_;

    // Attractor of `target` for player p inside `game`; sets p's strategy on the
    // attracted vertices to the lowest-index successor that makes progress.
    std::vector<char> attractor(const std::vector<char>& game, const std::vector<char>& target, int p) {
        std::vector<char> in(n_, 0);
        std::vector<int> rank(n_, -1), count(n_, 0);
        std::deque<int> queue;
        int next_rank = 0;
        for (int v = 0; v < n_; ++v) {
            if (!game[v]) continue;
            for (int w : g_.succ[v])
                if (game[w]) ++count[v];
            if (target[v]) {
                in[v] = 1;
                rank[v] = next_rank++;
                queue.push_back(v);
            }
        }
        while (!queue.empty()) {
            int w = queue.front();
            queue.pop_front();
            for (int u : pred_[w]) {
                if (!game[u] || in[u]) continue;
                if (g_.owner[u] == p || --count[u] == 0) {
                    in[u] = 1;
                    rank[u] = next_rank++;
                    queue.push_back(u);
                }
            }
        }
        for (int v = 0; v < n_; ++v) {
            if (!in[v] || target[v] || g_.owner[v] != p) continue;
            int best = -1;
            for (int w : g_.succ[v])
                if (game[w] && in[w] && rank[w] < rank[v] && (best < 0 || w < best)) best = w;
            strat_[v] = best;
        }
        return in;
    }

    int lowest_successor_in(int v, const std::vector<char>& set) const {
        int best = -1;
        for (int w : g_.succ[v])
            if (set[w] && (best < 0 || w < best)) best = w;
        return best;
    }

    void solve(const std::vector<char>& game, std::vector<char>& w0, std::vector<char>& w1) {
        int top = -1;
        for (int v = 0; v < n_; ++v)
            if (game[v]) top = std::max(top, g_.priority[v]);
        if (top < 0) return;
        const int p = top % 2;
        std::vector<char> target(n_, 0);
        for (int v = 0; v < n_; ++v) target[v] = game[v] && g_.priority[v] == top;
        std::vector<char> a = attractor(game, target, p);
        std::vector<char> rest(n_, 0);
        for (int v = 0; v < n_; ++v) rest[v] = game[v] && !a[v];
        std::vector<char> r0(n_, 0), r1(n_, 0);
        solve(rest, r0, r1);
        std::vector<char>& rp = p == 0 ? r0 : r1;
        std::vector<char>& ro = p == 0 ? r1 : r0;
        bool opponent_empty = std::none_of(ro.begin(), ro.end(), [](char c) { return c != 0; });
        std::vector<char>& wp = p == 0 ? w0 : w1;
        std::vector<char>& wo = p == 0 ? w1 : w0;
        if (opponent_empty) {
            for (int v = 0; v < n_; ++v) {
                if (!game[v]) continue;
                wp[v] = 1;
                if (target[v] && g_.owner[v] == p) strat_[v] = lowest_successor_in(v, game);
            }
            (void)rp;
            return;
        }
        std::vector<char> b = attractor(game, ro, 1 - p);
        // The opponent's strategy on ro came from the subgame; re-solve outside b.
        std::vector<char> rest2(n_, 0);
        for (int v = 0; v < n_; ++v) rest2[v] = game[v] && !b[v];
        std::vector<char> s0(n_, 0), s1(n_, 0);
        solve(rest2, s0, s1);
        std::vector<char>& sp = p == 0 ? s0 : s1;
        std::vector<char>& so = p == 0 ? s1 : s0;
        for (int v = 0; v < n_; ++v) {
            if (!game[v]) continue;
            if (b[v] || so[v]) wo[v] = 1;
            else if (sp[v]) wp[v] = 1;
        }
    }
};

} // namespace detail

inline ParitySolution solve_parity(const ParityGame& g) { return detail::Zielonka(g).run(); }

// Brute force over all positional strategy pairs; only for tiny games.
inline std::vector<int> solve_parity_brute(const ParityGame& g) {
    const int n = g.size();
    std::vector<int> choice(n, 0);
    // Winner of the unique play from v under fixed choices.
    auto play_winner = [&](int v) {
        std::vector<int> seen(n, -1);
        std::vector<int> path;
        while (seen[v] < 0) {
            seen[v] = static_cast<int>(path.size());
            path.push_back(v);
            v = g.succ[v][choice[v]];
        }
        int top = -1;
        for (std::size_t i = static_cast<std::size_t>(seen[v]); i < path.size(); ++i) top = std::max(top, g.priority[path[i]]);
        return top % 2;
    };
    std::vector<int> p0, p1;
    for (int v = 0; v < n; ++v) (g.owner[v] == 0 ? p0 : p1).push_back(v);
    auto next = [&](const std::vector<int>& vs) {
        for (int v : vs) {
            if (++choice[v] < static_cast<int>(g.succ[v].size())) return true;
            choice[v] = 0;
        }
        return false;
    };
    std::vector<int> result(n);
    for (int start = 0; start < n; ++start) {
        // Eloise wins iff some strategy of hers beats every strategy of Abelard.
        std::fill(choice.begin(), choice.end(), 0);
        bool eloise = false;
        do {
            bool all = true;
            for (int v : p1) choice[v] = 0;
            do {
                if (play_winner(start) != 0) {
                    all = false;
                    break;
                }
            } while (next(p1));
            if (all) {
                eloise = true;
                break;
            }
        } while (next(p0));
        result[start] = eloise ? 0 : 1;
    }
    return result;
}

// Checks that `strategy` wins for `player` from every state of its region:
// in the graph where the player's moves are fixed, no reachable cycle has a
// top priority of the wrong parity and no play leaves the region.
inline bool verify_strategy(const ParityGame& g, const ParitySolution& s, int player) {
    const int n = g.size();
    std::vector<std::vector<int>> edges(n);
    for (int v = 0; v < n; ++v) {
        if (s.winner[v] != player) continue;
        if (g.owner[v] == player) {
            if (s.strategy[v] < 0) return false;
            edges[v] = {s.strategy[v]};
        } else {
            edges[v] = g.succ[v];
        }
        for (int w : edges[v])
            if (s.winner[w] != player) return false;
    }
    // For each bad priority q, look for a cycle through a q-state using only states of priority <= q.
    for (int q = 0; q < 64; ++q) {
        if (q % 2 == player) continue;
        bool any = false;
        for (int v = 0; v < n; ++v) any = any || (s.winner[v] == player && g.priority[v] == q);
        if (!any) continue;
        for (int v = 0; v < n; ++v) {
            if (s.winner[v] != player || g.priority[v] != q) continue;
            std::vector<char> seen(n, 0);
            std::vector<int> stack{v};
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (int w : edges[u]) {
                    if (g.priority[w] > q) continue;
                    if (w == v) return false;
                    if (!seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
        }
    }
    return true;
}

} // namespace adif
