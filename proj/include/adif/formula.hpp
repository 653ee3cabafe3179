#pragma once

#include "errors.hpp"
#include "varset.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace adif {

enum class Kind { False, True, Atom, Equal, Not, And, Or, Exists, Forall, MetaExists, MetaForall };

struct Constraint {
    bool minus = false; // false: +W, true: -W
    VarSet vars;

    static Constraint plus(VarSet w) { return {false, std::move(w)}; }
    static Constraint except(VarSet w) { return {true, std::move(w)}; }

    VarSetExpr denot() const {
        return minus ? VarSetExpr::cofinite_of(vars) : VarSetExpr::finite(vars);
    }
    bool operator==(const Constraint& o) const { return minus == o.minus && vars == o.vars; }
    bool operator!=(const Constraint& o) const { return !(*this == o); }
    std::string str() const { return std::string("[") + (minus ? "-" : "+") + to_string(vars) + "]"; }
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Kind kind;
    std::string rel;               // Atom
    std::vector<std::string> args; // Atom, Equal (two entries)
    Constraint con;                // quantifiers
    std::string var;               // quantifiers
    Formula lhs;                   // Not, And, Or, quantifier body
    Formula rhs;                   // And, Or
};

inline bool is_quantifier(Kind k) {
    return k == Kind::Exists || k == Kind::Forall || k == Kind::MetaExists || k == Kind::MetaForall;
}
inline bool is_meta_quantifier(Kind k) { return k == Kind::MetaExists || k == Kind::MetaForall; }
inline bool is_plain_quantifier(Kind k) { return k == Kind::Exists || k == Kind::Forall; }
inline bool is_literal_atom(Kind k) { return k == Kind::Atom || k == Kind::Equal; }

// ---- constructors ---------------------------------------------------------

inline Formula mk_false() { return std::make_shared<Node>(Node{Kind::False}); }
inline Formula mk_true() { return std::make_shared<Node>(Node{Kind::True}); }

inline Formula atom(std::string rel, std::vector<std::string> args) {
    Node n{Kind::Atom};
    n.rel = std::move(rel);
    n.args = std::move(args);
    return std::make_shared<Node>(std::move(n));
}

inline Formula eq(std::string x, std::string y) {
    Node n{Kind::Equal};
    n.args = {std::move(x), std::move(y)};
    return std::make_shared<Node>(std::move(n));
}

inline Formula neg(Formula f) {
    Node n{Kind::Not};
    n.lhs = std::move(f);
    return std::make_shared<Node>(std::move(n));
}

inline Formula binary(Kind k, Formula a, Formula b) {
    Node n{k};
    n.lhs = std::move(a);
    n.rhs = std::move(b);
    return std::make_shared<Node>(std::move(n));
}
inline Formula conj(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
inline Formula disj(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }

inline Formula quant(Kind k, Constraint c, std::string x, Formula body) {
    Node n{k};
    n.con = std::move(c);
    n.var = std::move(x);
    n.lhs = std::move(body);
    return std::make_shared<Node>(std::move(n));
}

// ---- support variables ----------------------------------------------------

inline void collect_sup(const Formula& f, VarSet& out) {
    switch (f->kind) {
    case Kind::False:
    case Kind::True: return;
    case Kind::Atom:
    case Kind::Equal: out.insert(f->args.begin(), f->args.end()); return;
    case Kind::Not: collect_sup(f->lhs, out); return;
    case Kind::And:
    case Kind::Or:
        collect_sup(f->lhs, out);
        collect_sup(f->rhs, out);
        return;
    default: {
        VarSet inner;
        collect_sup(f->lhs, inner);
        inner.erase(f->var);
        out.insert(inner.begin(), inner.end());
    }
    }
}

inline VarSet support_vars(const Formula& f) {
    VarSet out;
    collect_sup(f, out);
    return out;
}

// The undecorated quantifier Qx.phi stands for Q[+W]x.phi with W = sup(phi)\{x}.
inline Constraint default_constraint(const std::string& x, const Formula& body) {
    VarSet w = support_vars(body);
    w.erase(x);
    return Constraint::plus(std::move(w));
}

inline Formula exists(std::string x, Formula body) {
    auto c = default_constraint(x, body);
    return quant(Kind::Exists, std::move(c), std::move(x), std::move(body));
}
inline Formula forall(std::string x, Formula body) {
    auto c = default_constraint(x, body);
    return quant(Kind::Forall, std::move(c), std::move(x), std::move(body));
}
inline Formula exists(Constraint c, std::string x, Formula body) {
    return quant(Kind::Exists, std::move(c), std::move(x), std::move(body));
}
inline Formula forall(Constraint c, std::string x, Formula body) {
    return quant(Kind::Forall, std::move(c), std::move(x), std::move(body));
}

// ---- structural helpers ---------------------------------------------------

inline bool same(const Formula& a, const Formula& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
    case Kind::False:
    case Kind::True: return true;
    case Kind::Atom: return a->rel == b->rel && a->args == b->args;
    case Kind::Equal: return a->args == b->args;
    case Kind::Not: return same(a->lhs, b->lhs);
    case Kind::And:
    case Kind::Or: return same(a->lhs, b->lhs) && same(a->rhs, b->rhs);
    default: return a->var == b->var && a->con == b->con && same(a->lhs, b->lhs);
    }
}

inline bool has_meta(const Formula& f) {
    if (is_meta_quantifier(f->kind)) return true;
    if (f->lhs && has_meta(f->lhs)) return true;
    return f->rhs && has_meta(f->rhs);
}

inline bool is_quantifier_free(const Formula& f) {
    if (is_quantifier(f->kind)) return false;
    if (f->lhs && !is_quantifier_free(f->lhs)) return false;
    return !f->rhs || is_quantifier_free(f->rhs);
}

// First-order fragment: plain quantifiers carrying exactly their default decoration.
inline bool is_fol(const Formula& f) {
    if (is_meta_quantifier(f->kind)) return false;
    if (is_plain_quantifier(f->kind) && f->con != default_constraint(f->var, f->lhs)) return false;
    if (f->lhs && !is_fol(f->lhs)) return false;
    return !f->rhs || is_fol(f->rhs);
}

inline void collect_bound(const Formula& f, VarSet& out) {
    if (is_quantifier(f->kind)) out.insert(f->var);
    if (f->lhs) collect_bound(f->lhs, out);
    if (f->rhs) collect_bound(f->rhs, out);
}

inline VarSet bound_vars(const Formula& f) {
    VarSet out;
    collect_bound(f, out);
    return out;
}

// Every variable name mentioned anywhere, constraint sets included.
inline void collect_mentioned(const Formula& f, VarSet& out) {
    if (is_literal_atom(f->kind)) out.insert(f->args.begin(), f->args.end());
    if (is_quantifier(f->kind)) {
        out.insert(f->var);
        out.insert(f->con.vars.begin(), f->con.vars.end());
    }
    if (f->lhs) collect_mentioned(f->lhs, out);
    if (f->rhs) collect_mentioned(f->rhs, out);
}

inline VarSet mentioned_vars(const Formula& f) {
    VarSet out;
    collect_mentioned(f, out);
    return out;
}

// ---- printing -------------------------------------------------------------

inline std::string print(const Formula& f);

namespace detail {

inline std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
    return out;
}

inline std::string quant_symbol(Kind k) {
    switch (k) {
    case Kind::Exists: return "E";
    case Kind::Forall: return "A";
    case Kind::MetaExists: return "EE";
    default: return "AA";
    }
}

inline std::string constraint_text(const Constraint& c) {
    std::string out = std::string("[") + (c.minus ? "-" : "+") + "{";
    bool first = true;
    for (auto& v : c.vars) {
        out += (first ? "" : ",") + v;
        first = false;
    }
    return out + "}]";
}

inline std::string paren(const Formula& f) { return "(" + print(f) + ")"; }

} // namespace detail

inline std::string print(const Formula& f) {
    using detail::paren;
    switch (f->kind) {
    case Kind::False: return "false";
    case Kind::True: return "true";
    case Kind::Atom: return f->rel + "(" + detail::join(f->args) + ")";
    case Kind::Equal: return f->args[0] + " = " + f->args[1];
    case Kind::Not: {
        auto k = f->lhs->kind;
        bool bare = k == Kind::False || k == Kind::True || k == Kind::Atom || k == Kind::Not;
        return "~" + (bare ? print(f->lhs) : paren(f->lhs));
    }
    case Kind::And: {
        auto l = f->lhs->kind, r = f->rhs->kind;
        std::string ls = (l == Kind::Or || is_quantifier(l) || l == Kind::Equal) ? paren(f->lhs) : print(f->lhs);
        std::string rs = (r == Kind::Or || r == Kind::And || is_quantifier(r) || r == Kind::Equal) ? paren(f->rhs)
                                                                                                   : print(f->rhs);
        return ls + " & " + rs;
    }
    case Kind::Or: {
        auto l = f->lhs->kind, r = f->rhs->kind;
        std::string ls = (is_quantifier(l) || l == Kind::Equal) ? paren(f->lhs) : print(f->lhs);
        std::string rs = (r == Kind::Or || is_quantifier(r) || r == Kind::Equal) ? paren(f->rhs) : print(f->rhs);
        return ls + " | " + rs;
    }
    default: {
        std::string out = detail::quant_symbol(f->kind);
        if (f->con != default_constraint(f->var, f->lhs)) out += detail::constraint_text(f->con);
        return out + " " + f->var + " . " + print(f->lhs);
    }
    }
}

// ---- free and dependence variables ---------------------------------------

using DependencyContext = std::map<std::string, VarSetExpr>;

// Least fixpoint: iota*(x) contains iota(x) and iota(y) for every y in iota*(x) within the domain.
inline DependencyContext transitive_closure(const DependencyContext& iota) {
    DependencyContext out;
    for (auto& [x, base] : iota) {
        VarSetExpr s = base;
        std::set<std::string> used;
        bool grew = true;
        while (grew) {
            grew = false;
            for (auto& [y, ys] : iota) {
                if (used.count(y) || !s.contains(y)) continue;
                used.insert(y);
                s = s.unite(ys);
                grew = true;
            }
        }
        out[x] = s;
    }
    return out;
}

inline bool is_acyclic(const DependencyContext& iota) {
    auto star = transitive_closure(iota);
    for (auto& [x, s] : star)
        if (s.contains(x)) return false;
    return true;
}

inline VarSetExpr free_vars(const Formula& f, const DependencyContext& iota);

inline VarSetExpr dep_vars(const Formula& f, const DependencyContext& iota) {
    switch (f->kind) {
    case Kind::False:
    case Kind::True:
    case Kind::Atom:
    case Kind::Equal: return VarSetExpr::empty();
    case Kind::Not: return dep_vars(f->lhs, iota);
    case Kind::And:
    case Kind::Or: return dep_vars(f->lhs, iota).unite(dep_vars(f->rhs, iota));
    case Kind::Exists:
    case Kind::Forall: {
        DependencyContext inner = iota;
        inner.erase(f->var);
        auto d = dep_vars(f->lhs, inner);
        if (free_vars(f->lhs, inner).contains(f->var)) return d.minus(f->var).unite(f->con.denot());
        return d;
    }
    default: {
        DependencyContext inner = iota;
        inner[f->var] = f->con.denot();
        return dep_vars(f->lhs, inner);
    }
    }
}

inline VarSetExpr free_vars(const Formula& f, const DependencyContext& iota) {
    switch (f->kind) {
    case Kind::False:
    case Kind::True: return VarSetExpr::empty();
    case Kind::Atom:
    case Kind::Equal: {
        VarSetExpr out = VarSetExpr::finite(VarSet(f->args.begin(), f->args.end()));
        bool any = false;
        for (auto& a : f->args) any = any || iota.count(a);
        if (!any) return out;
        auto star = transitive_closure(iota);
        for (auto& a : f->args)
            if (auto it = star.find(a); it != star.end()) out = out.unite(it->second);
        return out;
    }
    case Kind::Not: return free_vars(f->lhs, iota);
    case Kind::And:
    case Kind::Or: return free_vars(f->lhs, iota).unite(free_vars(f->rhs, iota));
    case Kind::Exists:
    case Kind::Forall: {
        DependencyContext inner = iota;
        inner.erase(f->var);
        auto fr = free_vars(f->lhs, inner);
        if (fr.contains(f->var)) return fr.minus(f->var).unite(f->con.denot());
        return fr;
    }
    default: {
        DependencyContext inner = iota;
        inner[f->var] = f->con.denot();
        auto fr = free_vars(f->lhs, inner);
        if (dep_vars(f->lhs, inner).contains(f->var)) return fr;
        return fr.minus(f->var);
    }
    }
}

inline VarSetExpr free_vars(const Formula& f) { return free_vars(f, {}); }

// ---- negation normal form -------------------------------------------------

inline Formula to_nnf(const Formula& f, bool negate = false) {
    switch (f->kind) {
    case Kind::False: return negate ? mk_true() : f;
    case Kind::True: return negate ? mk_false() : f;
    case Kind::Atom:
    case Kind::Equal: return negate ? neg(f) : f;
    case Kind::Not: return to_nnf(f->lhs, !negate);
    case Kind::And: {
        auto a = to_nnf(f->lhs, negate), b = to_nnf(f->rhs, negate);
        return negate ? disj(a, b) : conj(a, b);
    }
    case Kind::Or: {
        auto a = to_nnf(f->lhs, negate), b = to_nnf(f->rhs, negate);
        return negate ? conj(a, b) : disj(a, b);
    }
    case Kind::Exists:
    case Kind::Forall: {
        Kind k = f->kind;
        if (negate) k = (k == Kind::Exists) ? Kind::Forall : Kind::Exists;
        return quant(k, f->con, f->var, to_nnf(f->lhs, negate));
    }
    default: fail(ErrorCode::FragmentViolation, "to_nnf expects a plain ADIF formula");
    }
}

// ---- prefixes -------------------------------------------------------------

enum class QSym { Exists, Forall, MetaExists, MetaForall };

inline Kind kind_of(QSym q) {
    switch (q) {
    case QSym::Exists: return Kind::Exists;
    case QSym::Forall: return Kind::Forall;
    case QSym::MetaExists: return Kind::MetaExists;
    default: return Kind::MetaForall;
    }
}

inline QSym sym_of(Kind k) {
    switch (k) {
    case Kind::Exists: return QSym::Exists;
    case Kind::Forall: return QSym::Forall;
    case Kind::MetaExists: return QSym::MetaExists;
    case Kind::MetaForall: return QSym::MetaForall;
    default: fail(ErrorCode::Precondition, "not a quantifier");
    }
}

inline bool is_existential(QSym q) { return q == QSym::Exists || q == QSym::MetaExists; }
inline bool is_meta(QSym q) { return q == QSym::MetaExists || q == QSym::MetaForall; }

struct Quant {
    QSym sym;
    Constraint con;
    std::string var;

    bool operator==(const Quant& o) const { return sym == o.sym && con == o.con && var == o.var; }
};

using Prefix = std::vector<Quant>;

struct Prenex {
    Prefix prefix;
    Formula matrix;
    bool matrix_quantifier_free = false;
};

inline std::string print_prefix(const Prefix& p) {
    std::string out;
    for (auto& q : p) out += detail::quant_symbol(kind_of(q.sym)) + detail::constraint_text(q.con) + " " + q.var + " . ";
    return out;
}

inline Formula attach_prefix(const Prefix& p, Formula matrix) {
    for (auto it = p.rbegin(); it != p.rend(); ++it) matrix = quant(kind_of(it->sym), it->con, it->var, matrix);
    return matrix;
}

// Checks the standing assumptions on prefixes: single quantification, no
// self-reference in +W, no later variable listed in an earlier +W.
inline void validate_prefix(const Prefix& p) {
    VarSet seen;
    for (size_t i = 0; i < p.size(); ++i) {
        auto& q = p[i];
        if (seen.count(q.var)) fail(ErrorCode::PrefixViolation, "variable " + q.var + " is quantified twice");
        seen.insert(q.var);
        if (!q.con.minus && q.con.vars.count(q.var))
            fail(ErrorCode::PrefixViolation, "variable " + q.var + " occurs in its own constraint");
        // Meta prefixes legitimately name later variables (hsp reverses the order).
        if (!q.con.minus && !is_meta(q.sym))
            for (size_t j = i + 1; j < p.size(); ++j)
                if (q.con.vars.count(p[j].var))
                    fail(ErrorCode::PrefixViolation,
                         "variable " + p[j].var + " is quantified in the scope of a constraint naming it");
    }
}

inline Prenex split_prenex(const Formula& f) {
    Prenex out;
    Formula cur = f;
    while (is_quantifier(cur->kind)) {
        out.prefix.push_back(Quant{sym_of(cur->kind), cur->con, cur->var});
        cur = cur->lhs;
    }
    validate_prefix(out.prefix);
    VarSet inner = bound_vars(cur);
    for (auto& q : out.prefix)
        if (inner.count(q.var)) fail(ErrorCode::PrefixViolation, "variable " + q.var + " is requantified in the matrix");
    out.matrix = cur;
    out.matrix_quantifier_free = is_quantifier_free(cur);
    return out;
}

inline Prefix hs_prefix(const Prefix& p) {
    Prefix out;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        if (is_meta(it->sym)) fail(ErrorCode::Precondition, "hs_prefix expects plain quantifiers only");
        out.push_back(Quant{it->sym == QSym::Exists ? QSym::MetaExists : QSym::MetaForall, it->con, it->var});
    }
    return out;
}

// Rewrites every -W into the finite +W' it can effectively mean: the base
// variables and the earlier prefix variables, minus W and the bound variable.
inline Prefix materialize_prefix(const Prefix& p, const VarSet& base) {
    Prefix out;
    VarSet avail = base;
    for (auto& q : p) {
        Quant r = q;
        if (q.con.minus) {
            VarSet w = set_minus(avail, q.con.vars);
            w.erase(q.var);
            r.con = Constraint::plus(std::move(w));
        }
        out.push_back(std::move(r));
        avail.insert(q.var);
    }
    return out;
}

inline std::vector<Formula> prefix_subformulae(const Formula& f) {
    std::vector<Formula> out{f};
    Formula cur = f;
    while (is_quantifier(cur->kind)) {
        cur = cur->lhs;
        out.push_back(cur);
    }
    return out;
}

} // namespace adif
