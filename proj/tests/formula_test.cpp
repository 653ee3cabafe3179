#include "adif/formula.hpp"
#include "adif/parser.hpp"

#include <doctest.h>

using namespace adif;

namespace {

Formula p(const std::string& s) { return parse_formula(s); }

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::Io;
}

} // namespace

TEST_CASE("parse: undecorated quantifier takes the support default") {
    auto f = p("E x . A[+{}] y . ~(x = y)");
    REQUIRE(f->kind == Kind::Exists);
    CHECK(f->var == "x");
    CHECK(f->con == Constraint::plus({}));
    auto g = f->lhs;
    REQUIRE(g->kind == Kind::Forall);
    CHECK(g->con == Constraint::plus({}));
    CHECK(g->lhs->kind == Kind::Not);
    CHECK(g->lhs->lhs->kind == Kind::Equal);
}

TEST_CASE("parse: constants and minus constraints") {
    CHECK(p("true")->kind == Kind::True);
    CHECK(p("false")->kind == Kind::False);
    auto f = p("A[-{x}] y . R(x,y)");
    REQUIRE(f->kind == Kind::Forall);
    CHECK(f->con == Constraint::except({"x"}));
    CHECK(f->lhs->kind == Kind::Atom);
    CHECK(f->lhs->rel == "R");
    CHECK(f->lhs->args == std::vector<std::string>{"x", "y"});
}

TEST_CASE("parse: precedence and quantifier scope") {
    auto f = p("~P(x) & Q(x) | R(x)");
    REQUIRE(f->kind == Kind::Or);
    REQUIRE(f->lhs->kind == Kind::And);
    CHECK(f->lhs->lhs->kind == Kind::Not);
    auto g = p("E x . P(x) | Q(x)");
    REQUIRE(g->kind == Kind::Exists);
    CHECK(g->lhs->kind == Kind::Or);
}

TEST_CASE("parse: errors") {
    CHECK(code_of([] { p("E x ."); }) == ErrorCode::Syntax);
    CHECK(code_of([] { p("P(x) &"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { p("E x . E x . P(x)"); }) == ErrorCode::PrefixViolation);
    CHECK(code_of([] { p("EE x . P(x)"); }) == ErrorCode::Syntax);
    CHECK_NOTHROW(parse_formula("EE x . P(x)", ParseMode::Meta));
    try {
        p("P(x) & & Q(x)");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 1, column") != std::string::npos);
    }
}

TEST_CASE("print/parse round trip") {
    for (auto s : {"true", "E x . A[+{}] y . ~(x = y)", "A[-{x}] y . R(x,y)", "(P(x) | Q(y)) & ~R(x,y)",
                   "E x . A[+{}] y . E[+{x}] z . (x = y) & (y = z)", "~(E[-{}] z . P(z)) | x = y",
                   "A x . (P(x) & E[+{x}] y . R(x,y))"}) {
        auto f = p(s);
        CHECK(same(parse_formula(print(f)), f));
    }
    auto m = parse_formula("EE[+{x}] z . AA[+{}] y . EE[+{}] x . x = y", ParseMode::Meta);
    CHECK(same(parse_formula(print(m), ParseMode::Meta), m));
}

TEST_CASE("support variables") {
    CHECK(support_vars(p("A[+{}] x . E[+{z}] y . x = y")).empty());
    CHECK(support_vars(parse_formula("R(x,y) & S(y,z)")) == VarSet{"x", "y", "z"});
    CHECK(support_vars(p("true")).empty());
}

TEST_CASE("free variables") {
    CHECK(free_vars(p("A[+{}] x . E[+{z}] y . x = y")) == VarSetExpr::finite({"z"}));
    CHECK(free_vars(p("A x . E[-{x}] y . x = y")) == VarSetExpr::cofinite_of({"x"}));
    CHECK(free_vars(p("R(x)")) == VarSetExpr::finite({"x"}));
    // The first-order fragment has free = sup.
    auto f = p("E x . (R(x,y) & A z . ~R(z,x))");
    CHECK(free_vars(f) == VarSetExpr::finite(support_vars(f)));
}

TEST_CASE("dependency contexts") {
    DependencyContext iota{{"y", VarSetExpr::finite({"x"})}, {"z", VarSetExpr::finite({"y"})}};
    auto star = transitive_closure(iota);
    CHECK(star.at("y") == VarSetExpr::finite({"x"}));
    CHECK(star.at("z") == VarSetExpr::finite({"x", "y"}));
    CHECK(is_acyclic(iota));
    CHECK_FALSE(is_acyclic(DependencyContext{{"x", VarSetExpr::finite({"x"})}}));
    CHECK(transitive_closure({}).empty());
    CHECK(is_acyclic(DependencyContext{}));
}

TEST_CASE("negation normal form") {
    CHECK(same(to_nnf(p("~(P(x) | Q(x))")), p("~P(x) & ~Q(x)")));
    CHECK(same(to_nnf(p("~E[+{y}] x . R(x,y)")), p("A[+{y}] x . ~R(x,y)")));
    CHECK(same(to_nnf(p("~~R(x)")), p("R(x)")));
    auto f = p("~(E x . A[-{x}] y . ~(R(x,y) & P(y)))");
    auto n = to_nnf(f);
    CHECK(free_vars(n) == free_vars(f));
    CHECK(support_vars(n) == support_vars(f));
}

TEST_CASE("prenex split and prefix validation") {
    auto phi7 = p("E x . A[+{}] y . E[+{x}] z . (x = y) & (y = z)");
    auto s = split_prenex(phi7);
    CHECK(s.prefix.size() == 3);
    CHECK(s.matrix_quantifier_free);
    CHECK(same(s.matrix, p("(x = y) & (y = z)")));
    auto r = split_prenex(p("R(x)"));
    CHECK(r.prefix.empty());
    auto q = split_prenex(p("E x . (R(x) | A y . S(y))"));
    CHECK(q.prefix.size() == 1);
    CHECK_FALSE(q.matrix_quantifier_free);
    Prefix self{{QSym::Exists, Constraint::plus({"x"}), "x"}};
    CHECK(code_of([&] { validate_prefix(self); }) == ErrorCode::PrefixViolation);
}

TEST_CASE("Herbrand-Skolem prefix") {
    auto s = split_prenex(p("E x . A[+{}] y . E[+{x}] z . (x = y) & (y = z)"));
    Prefix h = hs_prefix(s.prefix);
    REQUIRE(h.size() == 3);
    CHECK(h[0] == Quant{QSym::MetaExists, Constraint::plus({"x"}), "z"});
    CHECK(h[1] == Quant{QSym::MetaForall, Constraint::plus({}), "y"});
    CHECK(h[2] == Quant{QSym::MetaExists, Constraint::plus({}), "x"});
    CHECK(hs_prefix({}).empty());
    Prefix one{{QSym::Forall, Constraint::except({"x"}), "y"}};
    CHECK(hs_prefix(one) == Prefix{{QSym::MetaForall, Constraint::except({"x"}), "y"}});
}

TEST_CASE("prefix subformulae") {
    auto phi4 = p("E x . A[+{}] y . ~(x = y)");
    auto psf = prefix_subformulae(phi4);
    REQUIRE(psf.size() == 3);
    CHECK(same(psf[1], p("A[+{}] y . ~(x = y)")));
    CHECK(same(psf[2], p("~(x = y)")));
    CHECK(prefix_subformulae(p("R(x)")).size() == 1);
    CHECK(prefix_subformulae(p("E x . A[+{}] y . E[+{x}] z . (x = y) & (y = z)")).size() == 4);
}
