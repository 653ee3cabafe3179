#include "adif/meta.hpp"
#include "adif/parser.hpp"
#include "adif/suites.hpp"

#include <doctest.h>

using namespace adif;

namespace {

Formula p(const std::string& s) { return parse_formula(s); }
Formula m(const std::string& s) { return parse_formula(s, ParseMode::Meta); }

const char* phi7 = "E x . A[+{}] y . E[+{x}] z . (x = y) & (y = z)";

} // namespace

TEST_CASE("meta coincides with plain evaluation under the empty function assignment") {
    auto a = laws_structure();
    MetaEvaluator mev(a);
    AdifEvaluator ev(a);
    for (auto& x : enumerate_hyperteams(2, {"x", "y"}, 2, 2))
        for (auto& f : law_pool())
            for (Flag fl : {Flag::EA, Flag::AE}) CHECK(mev.sat({}, x, fl, f) == ev.sat(x, fl, f));
}

TEST_CASE("Herbrand-Skolem form of the golden sentence") {
    auto a = binary_structure();
    Formula hs = herbrand_skolem_form(prenex_sentence(p(phi7)));
    CHECK(print(hs) == "EE[+{x}] z . AA[+{}] y . EE[+{}] x . (x = y) & (y = z)");
    CHECK(sat_meta(a, {}, trivial_hyperteam(2), Flag::EA, hs));
    auto sk = skolemisation_search(a, hs);
    REQUIRE(sk);
    std::string dump = sk->dump(&a);
    CHECK(dump.find("F_z(x=0) = 0\n") != std::string::npos);
    CHECK(dump.find("F_z(x=1) = 1\n") != std::string::npos);
}

TEST_CASE("universal meta quantifier over true") {
    auto a = binary_structure();
    CHECK(sat_meta(a, {}, trivial_hyperteam(2), Flag::EA, m("AA[+{}] x . true")));
    CHECK(sat_meta(a, {}, trivial_hyperteam(2), Flag::AE, m("AA[+{}] x . true")));
}

TEST_CASE("model checking") {
    auto a = binary_structure();
    CHECK(model_check(a, p("E x . A[+{}] y . ~(x = y)")));
    CHECK_FALSE(model_check(a, p("A x . E[+{}] y . x = y")));
    CHECK(model_check(a, p(phi7)));
    try {
        model_check(a, p("E x . (x = x | A y . x = y)"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotPrenex);
    }
    try {
        model_check(a, p("A x . E[-{x}] y . x = y"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotASentence);
    }
}

TEST_CASE("model checking agrees with compositional truth on the prenex corpus") {
    auto a = laws_structure();
    for (auto& f : prenex_corpus()) CHECK(model_check(a, f) == is_true_sentence(a, f));
}

TEST_CASE("Skolemisation search") {
    auto a = binary_structure();
    Formula hs3 = herbrand_skolem_form(prenex_sentence(p("A x . E[+{}] y . x = y")));
    CHECK_FALSE(skolemisation_search(a, hs3));
    auto all = skolemisation_search(a, m("AA[+{}] x . AA[+{x}] y . (x = y | ~(x = y))"));
    REQUIRE(all);
    CHECK(all->dump().empty());
    CHECK_FALSE(skolemisation_search(a, m("AA[+{}] x . AA[+{}] y . x = y")));
    try {
        skolemisation_search(a, m("EE x . (x = x | AA y . x = y)"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotMetaPrenex);
    }
}

TEST_CASE("quantifier interchange") {
    auto a = laws_structure();
    auto triv = trivial_hyperteam(2);
    auto [e1, e2] = quantifier_interchange_check(a, {}, triv, Flag::EA, QSym::Exists, Constraint::plus({}), "x", p("x = x"));
    CHECK(e1);
    CHECK(e2);
    // P holds of 1 only, so the universal reading fails both ways.
    auto [f1, f2] = quantifier_interchange_check(a, {}, triv, Flag::EA, QSym::Forall, Constraint::plus({}), "x", p("P(x)"));
    CHECK_FALSE(f1);
    CHECK_FALSE(f2);
    for (auto& x : enumerate_hyperteams(2, {"x"}, 3, 2))
        for (QSym q : {QSym::Exists, QSym::Forall})
            for (Flag fl : {Flag::EA, Flag::AE}) {
                auto [u, v] = quantifier_interchange_check(a, {}, x, fl, q, Constraint::plus({"x"}), "z", p("R(x,z) | z = x"));
                CHECK(u == v);
            }
}

TEST_CASE("cyclic function assignments are rejected") {
    auto a = binary_structure();
    UniformFunction on_y{2, {"y"}, {0, 1}}, on_x{2, {"x"}, {1, 0}};
    FunctionAssignment theta{{"x", on_y}, {"y", on_x}};
    try {
        sat_meta(a, theta, trivial_hyperteam(2), Flag::EA, p("x = y"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CyclicFunctionAssignment);
    }
    // Two meta quantifiers that read each other.
    Formula f = m("EE[+{y}] x . EE[+{x}] y . x = y");
    for (auto run : {std::function<void()>([&] { sat_meta(a, {}, trivial_hyperteam(2), Flag::EA, f); }),
                     std::function<void()>([&] { skolemisation_search(a, f); })}) {
        try {
            run();
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::CyclicFunctionAssignment);
        }
    }
}

TEST_CASE("function assignments extend the hyperteam before atoms") {
    auto a = binary_structure();
    UniformFunction identity{2, {"x"}, {0, 1}};
    FunctionAssignment theta{{"z", identity}};
    Hyperteam x = make_hyperteam(2, {"x"}, {{{0}, {1}}});
    CHECK(sat_meta(a, theta, x, Flag::EA, p("x = z")));
    CHECK_FALSE(sat_meta(a, theta, x, Flag::EA, p("~(x = z)")));
}
