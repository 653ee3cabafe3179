#pragma once

#include "adif/game.hpp"

namespace adif::testing {

// Eloise follows the solved strategy. Abelard answers every x with a different y
// in the decision phase and never challenges in the second phase.
inline PlayTrace play_against_contrary_abelard(const GameResult& r) {
    const IndependenceGame& g = r.game;
    return play(g, [&](int v) {
        const GameState& s = g.states[v];
        const auto& succ = g.game.succ[v];
        if (g.game.owner[v] == 0) return default_choice(g, r.solution, v);
        for (int w : succ) {
            const GameState& t = g.states[w];
            if (s.phase == Phase::Decision && t.sigma[s.index] != t.sigma[0]) return w;
            if (s.phase == Phase::Challenge && t.phase == Phase::Challenge) return w;
        }
        return succ.front();
    });
}

} // namespace adif::testing
