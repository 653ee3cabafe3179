#include "adif/parser.hpp"
#include "adif/semantics.hpp"
#include "adif/suites.hpp"

#include <doctest.h>

using namespace adif;

namespace {

Formula p(const std::string& s) { return parse_formula(s); }

const char* phi3 = "A x . E[+{}] y . x = y";
const char* phi4 = "E x . A[+{}] y . ~(x = y)";
const char* phi5 = "A x . E[-{x}] y . x = y";
const char* phi6 = "E x . A[-{x}] y . ~(x = y)";
const char* phi7 = "E x . A[+{}] y . E[+{x}] z . (x = y) & (y = z)";

Hyperteam z01() { return make_hyperteam(2, {"z"}, {{{0}, {1}}}); }

} // namespace

TEST_CASE("Tarskian oracle") {
    auto a = binary_structure();
    CHECK(sat_fol(a, {{"x", 0}, {"y", 0}}, p("x = y")));
    CHECK_FALSE(sat_fol(a, {{"x", 0}, {"y", 1}}, p("x = y")));
    CHECK(sat_fol(a, {}, p("A x . E y . x = y")));
    try {
        sat_fol(a, {{"x", 0}}, p("x = y"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnboundVariable);
    }
}

TEST_CASE("golden sentences on the binary structure") {
    auto a = binary_structure();
    auto triv = trivial_hyperteam(2);
    CHECK(sat_adif(a, triv, Flag::EA, p(phi4)));
    CHECK_FALSE(sat_adif(a, triv, Flag::EA, p(phi3)));
    CHECK(sat_adif(a, triv, Flag::EA, p(phi7)));
    CHECK(is_true_sentence(a, p(phi4)));
    CHECK_FALSE(is_true_sentence(a, p(phi3)));
    CHECK(is_true_sentence(a, p("true")));
    CHECK(is_true_sentence(a, p(phi7)));
}

TEST_CASE("pseudo sentences against {{z:0, z:1}}") {
    auto a = binary_structure();
    CHECK(sat_adif(a, z01(), Flag::AE, p(phi5)));
    CHECK_FALSE(sat_adif(a, z01(), Flag::EA, p(phi6)));
    // Negation swaps the flag, so the two verdicts are tied together.
    CHECK(sat_adif(a, z01(), Flag::AE, p(phi5)) == !sat_adif(a, z01(), Flag::EA, neg(p(phi5))));
    // The sentences keep their values on this hyperteam.
    for (Flag fl : {Flag::EA, Flag::AE}) {
        CHECK_FALSE(sat_adif(a, z01(), fl, p(phi3)));
        CHECK(sat_adif(a, z01(), fl, p(phi4)));
    }
    try {
        is_true_sentence(a, p(phi5));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotASentence);
    }
}

TEST_CASE("empty and null hyperteams") {
    auto a = laws_structure();
    for (auto& f : law_pool()) {
        CHECK_FALSE(sat_adif(a, empty_hyperteam(2, {"x", "y"}), Flag::EA, f));
        CHECK_FALSE(sat_adif(a, null_hyperteam(2, {"x", "y"}), Flag::AE, f));
        CHECK(sat_adif(a, empty_hyperteam(2, {"x", "y"}), Flag::AE, f));
        CHECK(sat_adif(a, null_hyperteam(2, {"x", "y"}), Flag::EA, f));
    }
}

TEST_CASE("support violation") {
    auto a = binary_structure();
    try {
        sat_adif(a, trivial_hyperteam(2), Flag::EA, p("x = y"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SupportViolation);
    }
}

TEST_CASE("DIF examples") {
    auto a = binary_structure();
    Team root = trivial_hyperteam(2).team(0);
    CHECK_FALSE(sat_dif(a, root, DifFlag::Forall, p("A[-{}] x . E[+{}] y . x = y")));
    CHECK(sat_dif(a, root, DifFlag::Exists, p("E[-{}] x . A[+{}] y . ~(x = y)")));
    Structure s = laws_structure();
    Team none{2, {"x"}, Bits(2)};
    CHECK(sat_dif(s, none, DifFlag::Forall, p("P(x)")));
    try {
        sat_dif(a, root, DifFlag::Forall, p("~(E[+{}] x . x = x)"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FragmentViolation);
    }
}

TEST_CASE("IF sentences are undetermined under DIF but not under ADIF") {
    auto u = undetermined_pair(binary_structure());
    CHECK_FALSE(u.phi3_true);
    CHECK_FALSE(u.phi3_false);
    CHECK_FALSE(u.phi4_true);
    CHECK_FALSE(u.phi4_false);
    CHECK(u.as_expected());
}

TEST_CASE("bounded equivalence checking") {
    auto a = laws_structure();
    auto v = VarSet{"x", "y"};
    CHECK(check_equivalence(a, p("R(x,y) & true"), p("R(x,y)"), v).holds);
    CHECK(check_equivalence(a, p("P(x) | R(x,y)"), p("R(x,y) | P(x)"), v).holds);
    auto b = binary_structure();
    auto d = check_equivalence(b, p(phi3), p(phi5), {"z"});
    REQUIRE_FALSE(d.holds);
    REQUIRE(d.counterexample);
    CHECK(d.counterexample->var_set() == VarSet{"z"});
    CHECK(check_implication(a, p("P(x) & P(y)"), p("P(x)"), v).holds);
}

TEST_CASE("evaluator variants agree") {
    auto a = laws_structure();
    SatOptions literal;
    literal.prune = false;
    literal.memo = false;
    SatOptions reducing;
    reducing.reduce = true;
    AdifEvaluator base(a), lit(a, literal), red(a, reducing);
    std::vector<Formula> pool = law_pool();
    for (auto& f : fol_pool()) pool.push_back(f);
    for (auto& x : enumerate_hyperteams(2, {"x", "y"}, 2, 2))
        for (auto& f : pool)
            for (Flag fl : {Flag::EA, Flag::AE}) {
                bool s = base.sat(x, fl, f);
                // Without pruning the split search enumerates all bipartitions of
                // the duals, which quantifiers make too large.
                if (is_quantifier_free(f)) CHECK(s == lit.sat(x, fl, f));
                CHECK(s == red.sat(x, fl, f));
                CHECK(s == base.sat(x, fl, to_nnf(f)));
            }
}
