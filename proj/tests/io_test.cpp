#include "adif/io.hpp"
#include "adif/parser.hpp"
#include "adif/semantics.hpp"

#include <doctest.h>

using namespace adif;

namespace {

std::string data(const std::string& name) { return std::string(ADIF_DATA_DIR) + "/" + name; }

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

TEST_CASE("structure files") {
    Structure b = parse_structure("domain 0 1\n");
    CHECK(b.size() == 2);
    CHECK(b.relations.empty());
    Structure s = load_structure(data("laws.struct"));
    CHECK(s.holds("P", {1}));
    CHECK_FALSE(s.holds("P", {0}));
    CHECK(s.holds("R", {0, 1}));
    CHECK(load_structure(data("binary.struct")).size() == 2);
    CHECK(code_of([] { parse_structure("domain 0 1\nrelation P/1 { (0,1) }"); }) == ErrorCode::Arity);
    CHECK(code_of([] { parse_structure("domain 0 1\nrelation P/1 { (2) }"); }) == ErrorCode::UnknownValue);
    CHECK(code_of([] { parse_structure("relation P/1 { }"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { parse_structure("# nothing\n"); }) == ErrorCode::EmptyDomain);
    CHECK(code_of([] { parse_structure("domain\n"); }) == ErrorCode::EmptyDomain);
    CHECK(code_of([] { parse_structure("domain 0 1\ndomain 0\n"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { parse_structure("domain 0 0\n"); }) == ErrorCode::Syntax);
    CHECK(code_of([] { load_structure(data("missing.struct")); }) == ErrorCode::Io);
    CHECK(code_of([&] { check_signature(parse_formula("R(x)"), s); }) == ErrorCode::Arity);
    CHECK(code_of([&] { check_signature(parse_formula("Q(x)"), s); }) == ErrorCode::Arity);
}

TEST_CASE("hyperteam files") {
    Structure b = binary_structure();
    Hyperteam z = load_hyperteam(data("z01.ht"), b);
    CHECK(z == make_hyperteam(2, {"z"}, {{{0}, {1}}}));
    CHECK(parse_hyperteam("", b).is_empty());
    CHECK(parse_hyperteam("{ }", b).is_null());
    CHECK(parse_hyperteam("{ {} }", b).is_trivial());
    Hyperteam declared = parse_hyperteam("vars x y\n{ }", b);
    CHECK(declared.is_null());
    CHECK(declared.var_set() == VarSet{"x", "y"});
    CHECK(parse_hyperteam("{ {x=0 y=1} } { {y=0 x=0} }", b) == make_hyperteam(2, {"x", "y"}, {{{0, 1}}, {{0, 0}}}));
    CHECK(code_of([&] { parse_hyperteam("{ {x=0} {y=1} }", b); }) == ErrorCode::Precondition);
    CHECK(code_of([&] { parse_hyperteam("{ {x=2} }", b); }) == ErrorCode::UnknownValue);
    CHECK(code_of([&] { parse_hyperteam("{ {x=0 x=1} }", b); }) == ErrorCode::Syntax);
    CHECK(code_of([&] { parse_hyperteam("{ {x=0}", b); }) == ErrorCode::Syntax);
}

TEST_CASE("worked dual example from file") {
    Hyperteam x = load_hyperteam(data("dual-example.ht"), binary_structure());
    CHECK(x.teams.size() == 3);
    CHECK(dualize(x).teams.size() == 4);
}

TEST_CASE("formula files") {
    auto a = binary_structure();
    Hyperteam z = load_hyperteam(data("z01.ht"), a);
    CHECK(sat_adif(a, z, Flag::AE, parse_formula(read_file(data("phi5.adif")))));
    CHECK_FALSE(sat_adif(a, z, Flag::EA, parse_formula(read_file(data("phi6.adif")))));
    CHECK(sat_adif(a, trivial_hyperteam(2), Flag::EA, parse_formula(read_file(data("phi7.adif")))));
}
