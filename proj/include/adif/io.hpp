#pragma once

#include "errors.hpp"
#include "hyperteam.hpp"
#include "structure.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace adif {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline std::string strip_comments(const std::string& text) {
    std::string out;
    bool comment = false;
    for (char c : text) {
        if (c == '#') comment = true;
        if (c == '\n') comment = false;
        if (!comment) out += c;
    }
    return out;
}

// Splits into words, treating the characters in `singles` as one-character tokens.
inline std::vector<std::string> words(const std::string& text, const std::string& singles) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
    };
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (singles.find(c) != std::string::npos) {
            flush();
            out.emplace_back(1, c);
        } else {
            cur += c;
        }
    }
    flush();
    return out;
}

} // namespace detail

// domain v1 v2 ...
// relation NAME/ARITY { (a,b) (c,d) }
inline Structure parse_structure(const std::string& text) {
    auto toks = detail::words(detail::strip_comments(text), "{}(),/\n");
    Structure s;
    bool have_domain = false;
    std::size_t i = 0;
    auto expect = [&](const std::string& t) {
        if (i >= toks.size() || toks[i] != t)
            fail(ErrorCode::Syntax, "structure: expected '" + t + "'" + (i < toks.size() ? " before '" + toks[i] + "'" : ""));
        ++i;
    };
    // words() drops newlines as whitespace, so the domain line is read up to the first keyword.
    while (i < toks.size()) {
        if (toks[i] == "domain") {
            if (have_domain) fail(ErrorCode::Syntax, "structure: duplicate domain line");
            have_domain = true;
            ++i;
            while (i < toks.size() && toks[i] != "relation" && toks[i] != "domain") {
                if (toks[i].size() == 1 && std::string("{}(),/").find(toks[i][0]) != std::string::npos)
                    fail(ErrorCode::Syntax, "structure: unexpected '" + toks[i] + "' in domain");
                s.domain.push_back(toks[i++]);
            }
            s.validate();
        } else if (toks[i] == "relation") {
            if (!have_domain) fail(ErrorCode::Syntax, "structure: relation before domain");
            ++i;
            if (i >= toks.size()) fail(ErrorCode::Syntax, "structure: missing relation name");
            std::string name = toks[i++];
            expect("/");
            if (i >= toks.size()) fail(ErrorCode::Syntax, "structure: missing arity");
            int arity = 0;
            try {
                arity = std::stoi(toks[i++]);
            } catch (...) {
                fail(ErrorCode::Syntax, "structure: bad arity for " + name);
            }
            if (arity < 0) fail(ErrorCode::Syntax, "structure: negative arity for " + name);
            if (s.relations.count(name)) fail(ErrorCode::Syntax, "structure: relation " + name + " declared twice");
            expect("{");
            std::set<std::vector<int>> tuples;
            while (i < toks.size() && toks[i] != "}") {
                expect("(");
                std::vector<int> tuple;
                while (i < toks.size() && toks[i] != ")") {
                    if (toks[i] == ",") {
                        ++i;
                        continue;
                    }
                    tuple.push_back(s.value_index(toks[i++]));
                }
                expect(")");
                tuples.insert(tuple);
            }
            expect("}");
            s.add_relation(name, arity, std::move(tuples));
        } else {
            fail(ErrorCode::Syntax, "structure: unexpected '" + toks[i] + "'");
        }
    }
    if (!have_domain) fail(ErrorCode::EmptyDomain, "structure: no domain line");
    return s;
}

inline Structure load_structure(const std::string& path) { return parse_structure(read_file(path)); }

// Teams in braces, assignments in braces, bindings var=value:
//   { {x=0 y=1} {x=1 y=0} } { {x=0 y=0} }
// An optional leading `vars x y` line fixes the variable order, which is
// needed when no assignment names the variables (e.g. the null hyperteam).
inline Hyperteam parse_hyperteam(const std::string& text, const Structure& a) {
    auto toks = detail::words(detail::strip_comments(text), "{}=");
    std::size_t i = 0;
    std::vector<std::string> vars;
    bool declared = false;
    if (i < toks.size() && toks[i] == "vars") {
        declared = true;
        ++i;
        while (i < toks.size() && toks[i] != "{") {
            if (toks[i] == "=" || toks[i] == "}") fail(ErrorCode::Syntax, "hyperteam: bad vars header");
            vars.push_back(toks[i++]);
        }
        if (VarSet(vars.begin(), vars.end()).size() != vars.size())
            fail(ErrorCode::Syntax, "hyperteam: repeated variable in vars header");
    }
    auto expect = [&](const std::string& t) {
        if (i >= toks.size() || toks[i] != t) fail(ErrorCode::Syntax, "hyperteam: expected '" + t + "'");
        ++i;
    };
    std::vector<std::vector<Assignment>> teams;
    bool have_vars = declared;
    while (i < toks.size()) {
        expect("{");
        std::vector<Assignment> team;
        while (i < toks.size() && toks[i] != "}") {
            expect("{");
            Assignment s;
            std::vector<std::string> order;
            while (i < toks.size() && toks[i] != "}") {
                std::string x = toks[i++];
                if (x == "{" || x == "=") fail(ErrorCode::Syntax, "hyperteam: expected a variable");
                expect("=");
                if (i >= toks.size()) fail(ErrorCode::Syntax, "hyperteam: missing value for " + x);
                if (s.count(x)) fail(ErrorCode::Syntax, "hyperteam: variable " + x + " bound twice");
                s[x] = a.value_index(toks[i++]);
                order.push_back(x);
            }
            expect("}");
            if (!have_vars) {
                vars = order;
                have_vars = true;
            }
            if (VarSet(order.begin(), order.end()) != VarSet(vars.begin(), vars.end()))
                fail(ErrorCode::Precondition, "hyperteam: assignments over different variable sets");
            team.push_back(std::move(s));
        }
        expect("}");
        teams.push_back(std::move(team));
    }
    std::vector<std::vector<std::vector<int>>> rows;
    for (auto& t : teams) {
        std::vector<std::vector<int>> r;
        for (auto& s : t) {
            std::vector<int> row;
            for (auto& x : vars) row.push_back(s.at(x));
            r.push_back(std::move(row));
        }
        rows.push_back(std::move(r));
    }
    return make_hyperteam(a.size(), vars, rows);
}

inline Hyperteam load_hyperteam(const std::string& path, const Structure& a) { return parse_hyperteam(read_file(path), a); }

} // namespace adif
