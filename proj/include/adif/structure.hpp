#pragma once

#include "errors.hpp"
#include "formula.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace adif {

struct Relation {
    int arity = 0;
    std::set<std::vector<int>> tuples;
};

// Finite relational structure. Values are referred to by their index in
// `domain`; equality is interpreted on every structure without being listed.
struct Structure {
    std::vector<std::string> domain;
    std::map<std::string, Relation> relations;

    int size() const { return static_cast<int>(domain.size()); }

    int value_index(const std::string& v) const {
        for (int i = 0; i < size(); ++i)
            if (domain[i] == v) return i;
        fail(ErrorCode::UnknownValue, "value '" + v + "' is not in the domain");
    }

    const Relation& relation(const std::string& name, size_t arity) const {
        auto it = relations.find(name);
        if (it == relations.end()) fail(ErrorCode::Arity, "relation " + name + " is not interpreted in the structure");
        if (static_cast<size_t>(it->second.arity) != arity)
            fail(ErrorCode::Arity, "relation " + name + " has arity " + std::to_string(it->second.arity) +
                                       ", used with " + std::to_string(arity) + " arguments");
        return it->second;
    }

    bool holds(const std::string& name, const std::vector<int>& tuple) const {
        return relation(name, tuple.size()).tuples.count(tuple) != 0;
    }

    void add_relation(const std::string& name, int arity, std::set<std::vector<int>> tuples) {
        for (auto& t : tuples) {
            if (static_cast<int>(t.size()) != arity)
                fail(ErrorCode::Arity, "tuple of length " + std::to_string(t.size()) + " in relation " + name + "/" +
                                           std::to_string(arity));
            for (int v : t)
                if (v < 0 || v >= size()) fail(ErrorCode::UnknownValue, "tuple entry outside the domain in " + name);
        }
        relations[name] = Relation{arity, std::move(tuples)};
    }

    void validate() const {
        if (domain.empty()) fail(ErrorCode::EmptyDomain, "structure domain is empty");
        std::set<std::string> seen(domain.begin(), domain.end());
        if (seen.size() != domain.size()) fail(ErrorCode::Syntax, "domain values must be distinct");
    }
};

inline Structure structure_with_domain(std::vector<std::string> values) {
    Structure s;
    s.domain = std::move(values);
    s.validate();
    return s;
}

// ({0,1}, =)
inline Structure binary_structure() { return structure_with_domain({"0", "1"}); }

// Checks every atom of the formula against the signature of the structure.
inline void check_signature(const Formula& f, const Structure& a) {
    if (f->kind == Kind::Atom) a.relation(f->rel, f->args.size());
    if (f->lhs) check_signature(f->lhs, a);
    if (f->rhs) check_signature(f->rhs, a);
}

} // namespace adif
