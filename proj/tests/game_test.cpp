#include "adif/game.hpp"
#include "adif/parity.hpp"
#include "adif/parser.hpp"
#include "adif/suites.hpp"
#include "phi7_play.hpp"

#include <doctest.h>

#include <random>

using namespace adif;

namespace {

Formula p(const std::string& s) { return parse_formula(s); }

const char* phi3 = "A x . E[+{}] y . x = y";
const char* phi4 = "E x . A[+{}] y . ~(x = y)";
const char* phi7 = "E x . A[+{}] y . E[+{x}] z . (x = y) & (y = z)";

Prefix prefix_of(const std::string& s) { return split_prenex(p(s)).prefix; }

} // namespace

TEST_CASE("priorities") {
    CHECK(priority_map(prefix_of(phi7)) == std::vector<int>{1, 2, 3});
    CHECK(priority_map(prefix_of("A x . true")) == std::vector<int>{2});
    CHECK(priority_map(prefix_of("A x . A y . x = y")) == std::vector<int>{2, 4});
}

TEST_CASE("bucket updates") {
    Bucket fresh(2, -1);
    auto a = bucket_update(fresh, 0, 1);
    CHECK(a.bucket == Bucket{1, -1});
    CHECK_FALSE(a.cheated);
    auto b = bucket_update(a.bucket, 1, 0);
    CHECK(b.bucket == Bucket{1, 0});
    CHECK_FALSE(b.cheated);
    auto c = bucket_update(a.bucket, 0, 0);
    CHECK(c.bucket == Bucket{0, -1});
    CHECK(c.cheated);
}

TEST_CASE("arena moves") {
    auto a = binary_structure();
    auto g = expand_to_parity(a, p(phi4));
    const auto& init = g.game.succ[g.game.initial];
    REQUIRE(init.size() == 2);
    CHECK(g.states[init[0]].sigma[0] != g.states[init[1]].sigma[0]);
    for (std::size_t v = 0; v < g.states.size(); ++v) {
        const GameState& s = g.states[v];
        if (s.phase != Phase::Challenge || s.index >= static_cast<int>(g.prefix.size())) continue;
        int confirm = 0, challenge = 0;
        for (int w : g.game.succ[v]) {
            const GameState& t = g.states[w];
            if (t.phase == Phase::Challenge) {
                ++confirm;
                CHECK(t.sigma == s.sigma);
            } else {
                ++challenge;
                CHECK(t.sigma[s.index] != s.sigma[s.index]);
                for (std::size_t j = s.index + 1; j < t.sigma.size(); ++j) CHECK(t.sigma[j] == -1);
            }
        }
        CHECK(confirm == 1);
        CHECK(challenge == 1);
    }
}

TEST_CASE("game winners") {
    auto a = binary_structure();
    CHECK(game_winner(a, p(phi7)).winner == Player::Eloise);
    CHECK(game_winner(a, p(phi4)).winner == Player::Eloise);
    CHECK(game_winner(a, p(phi3)).winner == Player::Abelard);
    CHECK(game_winner(a, p("A x . true")).winner == Player::Eloise);
    CHECK(game_winner(a, p(phi7)).game.states.size() == 215);
}

TEST_CASE("game on the golden sentence against a contrary Abelard") {
    auto a = binary_structure();
    auto r = game_winner(a, p(phi7));
    auto t = testing::play_against_contrary_abelard(r);
    CHECK_FALSE(t.terminal);
    REQUIRE(t.cycle_start >= 0);
    CHECK(t.cycle_max_priority == 2);
    bool eloise_cheat = false, abelard_cheat = false;
    for (std::size_t i = static_cast<std::size_t>(t.cycle_start); i < t.states.size(); ++i) {
        int prio = r.game.game.priority[t.states[i]];
        eloise_cheat = eloise_cheat || prio == 1;
        abelard_cheat = abelard_cheat || prio == 2;
    }
    CHECK(eloise_cheat);
    CHECK(abelard_cheat);
}

TEST_CASE("trace format") {
    auto a = binary_structure();
    auto r = game_winner(a, p(phi4));
    std::string text = r.trace_text(&a);
    CHECK(text.rfind("I 0 {} 0\n", 0) == 0);
    CHECK(text.find("verdict Eloise\n") != std::string::npos);
}

TEST_CASE("state budget") {
    GameOptions tight;
    tight.max_states = 10;
    try {
        expand_to_parity(binary_structure(), p(phi7), tight);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::StateSpaceBudgetExceeded);
    }
}

TEST_CASE("bucket soundness on the golden sentence") {
    auto g = expand_to_parity(binary_structure(), p(phi7));
    CHECK(check_bucket_soundness(g, 12) > 0);
}

TEST_CASE("non-prenex input is rejected") {
    try {
        game_winner(binary_structure(), p("E x . (x = x & A y . x = y)"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotPrenex);
    }
}

TEST_CASE("parity solver") {
    ParityGame even;
    even.add_state(0, 0);
    even.succ[0] = {0};
    CHECK(solve_parity(even).winner[0] == 0);
    ParityGame odd;
    odd.add_state(1, 1);
    odd.succ[0] = {0};
    CHECK(solve_parity(odd).winner[0] == 1);

    std::mt19937 rng(7);
    for (int round = 0; round < 200; ++round) {
        ParityGame g;
        int n = 1 + static_cast<int>(rng() % 8);
        for (int v = 0; v < n; ++v) g.add_state(static_cast<int>(rng() % 2), static_cast<int>(rng() % 5));
        for (int v = 0; v < n; ++v) {
            int k = 1 + static_cast<int>(rng() % 3);
            for (int e = 0; e < k; ++e) g.succ[v].push_back(static_cast<int>(rng() % n));
            std::sort(g.succ[v].begin(), g.succ[v].end());
            g.succ[v].erase(std::unique(g.succ[v].begin(), g.succ[v].end()), g.succ[v].end());
        }
        auto s = solve_parity(g);
        CHECK(s.winner == solve_parity_brute(g));
        CHECK(verify_strategy(g, s, 0));
        CHECK(verify_strategy(g, s, 1));
    }
}
