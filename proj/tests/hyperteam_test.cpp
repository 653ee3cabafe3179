#include "adif/hyperteam.hpp"
#include "adif/parser.hpp"

#include <doctest.h>

using namespace adif;

namespace {

using Rows = std::vector<std::vector<std::vector<int>>>;

Hyperteam ht(std::vector<std::string> vars, const Rows& teams) { return make_hyperteam(2, std::move(vars), teams); }

// The 3-team hyperteam of the dualisation example with concrete assignments over x, y, z.
const std::vector<int> a11{0, 0, 0}, a12{0, 0, 1}, a21{0, 1, 0}, a22{0, 1, 1}, a3{1, 1, 1};

} // namespace

TEST_CASE("classification") {
    CHECK(empty_hyperteam(2).is_empty());
    CHECK(null_hyperteam(2, {"x"}).is_null());
    CHECK(trivial_hyperteam(2).is_trivial());
    CHECK(trivial_hyperteam(2).is_proper());
    CHECK_FALSE(null_hyperteam(2).is_proper());
}

TEST_CASE("restrict") {
    Hyperteam x = ht({"x", "y"}, {{{0, 1}, {1, 0}}, {{0, 0}}});
    CHECK(restrict_to(x, {"x", "y"}) == x);
    Hyperteam one = ht({"x", "y"}, {{{0, 1}, {0, 0}}});
    CHECK(restrict_to(one, {"x"}) == ht({"x"}, {{{0}}}));
    CHECK(restrict_to(x, {}) == trivial_hyperteam(2));
}

TEST_CASE("refinement") {
    Hyperteam big = ht({"x"}, {{{0}, {1}}}), small = ht({"x"}, {{{0}}});
    CHECK(refines(big, small));
    CHECK_FALSE(refines(small, big));
    Hyperteam x = ht({"x", "y"}, {{{0, 1}, {1, 0}}, {{0, 0}}});
    for (VarSet w : {VarSet{}, VarSet{"x"}, VarSet{"x", "y"}}) CHECK(refines(x, x, w));
    Hyperteam y = ht({"x", "y"}, {{{1, 1}}});
    CHECK(equiv_w(x, y, {}));
    CHECK_FALSE(equiv_w(x, y, {"x"}));
    CHECK(equal_w(ht({"x", "y"}, {{{0, 0}, {0, 1}}}), ht({"x", "y"}, {{{0, 1}}}), {"x"}));
}

TEST_CASE("dualisation worked example") {
    Hyperteam x = ht({"x", "y", "z"}, {{a11, a12}, {a21, a22}, {a3}});
    Hyperteam expected = ht({"x", "y", "z"}, {{a11, a21, a3}, {a11, a22, a3}, {a12, a21, a3}, {a12, a22, a3}});
    for (DualMode m : {DualMode::Auto, DualMode::Product, DualMode::Transversal}) CHECK(dualize(x, m) == expected);
    CHECK(dualize(x).teams.size() == 4);
}

TEST_CASE("dualisation boundary cases") {
    CHECK(dualize(trivial_hyperteam(2)) == trivial_hyperteam(2));
    CHECK(dualize(empty_hyperteam(2, {"x"})) == null_hyperteam(2, {"x"}));
    CHECK(dualize(null_hyperteam(2, {"x"})).is_empty());
    Hyperteam with_null = ht({"x"}, {{{0}}, {}});
    CHECK(dualize(with_null).is_empty());
}

TEST_CASE("product and transversal duals agree") {
    for (auto& x : enumerate_hyperteams(2, {"x", "y"}, 3, 3)) {
        CHECK(dualize(x, DualMode::Product) == dualize(x, DualMode::Transversal));
        CHECK(equal_sets(dualize(x, DualMode::Minimal), reduce(dualize(x, DualMode::Product))));
    }
}

TEST_CASE("extension") {
    Hyperteam x = extend(trivial_hyperteam(2), "x", VarSet{});
    CHECK(x == ht({"x"}, {{{0}}, {{1}}}));
    // ext_∅({{z:0, z:1}}, x)
    Hyperteam z = ht({"z"}, {{{0}, {1}}});
    Hyperteam zx = extend(z, "x", VarSet{});
    CHECK(zx == ht({"z", "x"}, {{{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}}));
    // Its dual has the four teams given by the four choice functions.
    Hyperteam d = dualize(zx);
    CHECK(d == ht({"z", "x"}, {{{0, 0}, {0, 1}}, {{0, 0}, {1, 1}}, {{1, 0}, {0, 1}}, {{1, 0}, {1, 1}}}));
    // Extending that with the four functions of z gives twelve distinct teams.
    CHECK(extend(d, "y", VarSet{"z"}).teams.size() == 12);
    CHECK(extend(empty_hyperteam(2), "x", VarSet{}).is_empty());
    try {
        extend(x, "x", VarSet{});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::VariableAlreadyBound);
    }
}

TEST_CASE("prefix extension of the trivial hyperteam") {
    Prefix ex{{QSym::Exists, Constraint::plus({}), "x"}};
    CHECK(extend_prefix(trivial_hyperteam(2), ex, Flag::EA) == ht({"x"}, {{{0}}, {{1}}}));
    Prefix all{{QSym::Forall, Constraint::plus({}), "y"}};
    CHECK(extend_prefix(trivial_hyperteam(2), all, Flag::EA) == ht({"y"}, {{{0}, {1}}}));
    Hyperteam x = ht({"x"}, {{{0}}, {{0}, {1}}});
    CHECK(extend_prefix(x, {}, Flag::AE) == x);
}

TEST_CASE("bipartitions") {
    Hyperteam x = ht({"x"}, {{{0}}, {{1}}});
    auto parts = bipartitions(x);
    CHECK(parts.size() == 4);
    Hyperteam t1 = ht({"x"}, {{{0}}}), t2 = ht({"x"}, {{{1}}});
    bool a = false, b = false;
    for (auto& [p, q] : parts) {
        a = a || (p == t1 && q == t2);
        b = b || (p == t2 && q == t1);
    }
    CHECK(a);
    CHECK(b);
    auto none = bipartitions(empty_hyperteam(2));
    REQUIRE(none.size() == 1);
    CHECK(none[0].first.is_empty());
    CHECK(none[0].second.is_empty());
}

TEST_CASE("cylindrification") {
    CHECK(cylindrify(trivial_hyperteam(2), "x") == ht({"x"}, {{{0}, {1}}}));
    CHECK(cylindrify(empty_hyperteam(2), "x").is_empty());
    for (auto& x : enumerate_hyperteams(2, {"y"}, 3, 2)) {
        Hyperteam viadual = dualize(extend(dualize(x), "x", x.var_set()));
        CHECK(equiv(cylindrify(x, "x"), viadual));
    }
}

TEST_CASE("uniform functions") {
    CHECK(enumerate_uniform_functions({}, {"x"}, 2).size() == 2);
    CHECK(enumerate_uniform_functions({"x"}, {"x"}, 2).size() == 4);
    CHECK(enumerate_uniform_functions({"x", "y", "w"}, {"x", "y"}, 2).size() == 16);
    auto fs = enumerate_uniform_functions({"x"}, {"x"}, 2);
    CHECK(fs.front().table == std::vector<int>{0, 0});
    CHECK(fs.back().table == std::vector<int>{1, 1});
}

TEST_CASE("function assignments") {
    Hyperteam x = ht({"x"}, {{{0}, {1}}});
    CHECK(apply_function_assignment(x, {}) == x);
    FunctionAssignment zero{{"x", constant_function(2, 0)}};
    CHECK(apply_function_assignment(trivial_hyperteam(2), zero) == ht({"x"}, {{{0}}}));
    UniformFunction identity{2, {"x"}, {0, 1}};
    FunctionAssignment theta{{"z", identity}};
    CHECK(apply_function_assignment(x, theta) == ht({"x", "z"}, {{{0, 0}, {1, 1}}}));
}

TEST_CASE("reduce") {
    Hyperteam x = ht({"x"}, {{{0}}, {{0}, {1}}});
    CHECK(reduce(x) == ht({"x"}, {{{0}}}));
    Hyperteam anti = ht({"x"}, {{{0}}, {{1}}});
    CHECK(reduce(anti) == anti);
    CHECK(reduce(null_hyperteam(2, {"x"})).is_null());
    CHECK(reduce(empty_hyperteam(2)).is_empty());
    CHECK(reduce(trivial_hyperteam(2)).is_trivial());
    for (auto& h : enumerate_hyperteams(2, {"x", "y"}, 3, 3)) CHECK(equiv(reduce(h), h));
}

namespace {

bool team_subset(const Hyperteam& a, const Hyperteam& b) {
    for (auto& t : a.teams)
        if (std::find(b.teams.begin(), b.teams.end(), t) == b.teams.end()) return false;
    return true;
}

} // namespace

TEST_CASE("double dualisation") {
    for (auto vars : {std::vector<std::string>{"x"}, std::vector<std::string>{"x", "y"}})
        for (auto& h : enumerate_hyperteams(2, vars, 3, 3)) {
            Hyperteam dd = dualize(dualize(h));
            for (VarSet w : {VarSet{}, VarSet{"x"}, h.var_set()}) CHECK(equiv_w(dd, h, w));
            if (!h.is_proper()) continue;
            // Only the ⊆-minimal teams are guaranteed to survive.
            CHECK(team_subset(reduce(h), dd));
            if (reduce(h) == h) CHECK(team_subset(h, dd));
        }
}

TEST_CASE("double dualisation drops non-minimal teams") {
    Hyperteam x = ht({"x"}, {{{0}}, {{1}}, {{0}, {1}}});
    CHECK(x.is_proper());
    CHECK(dualize(x) == ht({"x"}, {{{0}, {1}}}));
    CHECK(dualize(dualize(x)) == ht({"x"}, {{{0}}, {{1}}}));
    CHECK_FALSE(team_subset(x, dualize(dualize(x))));
}
