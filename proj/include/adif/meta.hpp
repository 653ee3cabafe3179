#pragma once

#include "errors.hpp"
#include "formula.hpp"
#include "hyperteam.hpp"
#include "semantics.hpp"
#include "structure.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace adif {

// Variables a table actually reads: changing them changes some value.
inline VarSet essential_vars(const UniformFunction& f) {
    VarSet out;
    const std::size_t n = f.table.size();
    for (std::size_t i = 0; i < f.vars.size(); ++i) {
        std::size_t weight = ipow(f.dom, i);
        for (std::size_t c = 0; c < n && !out.count(f.vars[i]); ++c) {
            int v = static_cast<int>((c / weight) % static_cast<std::size_t>(f.dom));
            if (v == 0) continue;
            if (f.table[c] != f.table[c - static_cast<std::size_t>(v) * weight]) out.insert(f.vars[i]);
        }
    }
    return out;
}

inline bool is_acyclic(const FunctionAssignment& theta) {
    DependencyContext iota;
    for (auto& [v, f] : theta) iota[v] = VarSetExpr::finite(essential_vars(f));
    return is_acyclic(iota);
}

// Declared dependencies of the meta quantifiers in f, over a finite universe.
inline void collect_meta_deps(const Formula& f, const VarSet& universe, DependencyContext& iota) {
    if (is_meta_quantifier(f->kind)) {
        VarSet u = universe;
        u.erase(f->var);
        iota[f->var] = VarSetExpr::finite(denotation_in(f->con, u));
    }
    if (f->lhs) collect_meta_deps(f->lhs, universe, iota);
    if (f->rhs) collect_meta_deps(f->rhs, universe, iota);
}

// Θ together with the declared dependencies of f's meta quantifiers must be acyclic.
inline void check_meta_acyclic(const FunctionAssignment& theta, const Hyperteam& x, const Formula& f) {
    VarSet universe = set_union(x.var_set(), bound_vars(f));
    DependencyContext iota;
    for (auto& [v, g] : theta) {
        universe.insert(v);
        iota[v] = VarSetExpr::finite(essential_vars(g));
    }
    collect_meta_deps(f, universe, iota);
    if (!is_acyclic(iota)) fail(ErrorCode::CyclicFunctionAssignment, "meta quantifiers depend on each other cyclically");
}

inline std::string print_function(const std::string& var, const UniformFunction& f, const Structure* s = nullptr) {
    std::vector<std::string> lines;
    for (std::size_t c = 0; c < f.table.size(); ++c) {
        auto vals = decode(c, f.dom, f.vars.size());
        std::string arg;
        for (std::size_t i = 0; i < f.vars.size(); ++i) arg += (i ? "," : "") + f.vars[i] + "=" + value_name(vals[i], s);
        lines.push_back("F_" + var + "(" + arg + ") = " + value_name(f.table[c], s));
    }
    std::string out;
    for (auto& l : lines) out += l + "\n";
    return out;
}

class MetaEvaluator {
public:
    explicit MetaEvaluator(const Structure& a, SatOptions opt = {}) : a_(a), opt_(opt) {}

    bool sat(const FunctionAssignment& theta, const Hyperteam& x, Flag flag, const Formula& f) {
        check_signature(f, a_);
        if (x.dom != a_.size()) fail(ErrorCode::Precondition, "hyperteam and structure domains differ");
        VarSet need = support_vars(f);
        for (auto& [v, g] : theta) {
            need.erase(v);
            if (g.dom != a_.size()) fail(ErrorCode::Precondition, "function table over a different domain");
        }
        if (!subset_of(need, x.var_set()))
            fail(ErrorCode::SupportViolation, "hyperteam variables " + to_string(x.var_set()) + " do not cover " + to_string(need));
        if (!is_acyclic(theta)) fail(ErrorCode::CyclicFunctionAssignment, "function assignment has a dependency cycle");
        check_meta_acyclic(theta, x, f);
        if (memo_.size() > opt_.memo_limit) {
            memo_.clear();
            roots_.clear();
        }
        roots_.push_back(f);
        return eval(theta, x, flag, f);
    }

private:
    const Structure& a_;
    SatOptions opt_;
    std::unordered_map<std::string, bool> memo_;
    std::vector<Formula> roots_;

    Hyperteam dual(const Hyperteam& x) const { return opt_.reduce ? dualize(x, DualMode::Minimal) : dualize(x); }

    static std::string theta_key(const FunctionAssignment& theta) {
        std::string k;
        for (auto& [v, f] : theta) {
            k += v + '(';
            for (auto& d : f.vars) k += d + ',';
            k += ')';
            for (int t : f.table) k += static_cast<char>('0' + t);
            k += ';';
        }
        return k;
    }

    bool eval(const FunctionAssignment& theta, const Hyperteam& in, Flag flag, const Formula& f) {
        if (!opt_.memo) return compute(theta, opt_.reduce ? reduce(in) : in, flag, f);
        const Node* node = f.get();
        std::string key(reinterpret_cast<const char*>(&node), sizeof node);
        key += flag == Flag::EA ? 'E' : 'A';
        key += theta_key(theta);
        key += '#';
        key += in.key();
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool r = compute(theta, opt_.reduce ? reduce(in) : in, flag, f);
        memo_.emplace(std::move(key), r);
        return r;
    }

    bool compute(const FunctionAssignment& theta, const Hyperteam& x, Flag flag, const Formula& f) {
        switch (f->kind) {
        case Kind::False: return flag == Flag::EA ? x.is_null() : x.is_empty();
        case Kind::True: return flag == Flag::EA ? !x.is_empty() : !x.is_null();
        case Kind::Atom:
        case Kind::Equal: {
            Hyperteam y = apply_function_assignment(x, theta);
            Bits good = atom_points(a_, f, y.vars);
            if (flag == Flag::EA)
                return std::any_of(y.teams.begin(), y.teams.end(), [&](const Bits& t) { return t.is_subset_of(good); });
            return std::all_of(y.teams.begin(), y.teams.end(), [&](const Bits& t) { return t.intersects(good); });
        }
        case Kind::Not: return !eval(theta, x, adif::dual(flag), f->lhs);
        case Kind::And:
            if (flag == Flag::AE) return eval(theta, dual(x), Flag::EA, f);
            return !find_split(x, [&](const Hyperteam& y) { return !eval(theta, y, Flag::EA, f->lhs); },
                               [&](const Hyperteam& y) { return !eval(theta, y, Flag::EA, f->rhs); }, opt_.prune);
        case Kind::Or:
            if (flag == Flag::EA) return eval(theta, dual(x), Flag::AE, f);
            return find_split(x, [&](const Hyperteam& y) { return eval(theta, y, Flag::AE, f->lhs); },
                              [&](const Hyperteam& y) { return eval(theta, y, Flag::AE, f->rhs); }, opt_.prune);
        case Kind::Exists:
        case Kind::Forall: {
            if (!coherent(sym_of(f->kind), flag)) return eval(theta, dual(x), adif::dual(flag), f);
            Hyperteam base = x.var_index(f->var) >= 0 ? restrict_to(x, set_minus(x.var_set(), {f->var})) : x;
            return eval(theta, extend(base, f->var, denotation_in(f->con, base.var_set())), flag, f->lhs);
        }
        default: {
            // Tables range over every variable that can be assigned when the
            // function is finally applied at an atom.
            VarSet universe = x.var_set();
            for (auto& [v, g] : theta) universe.insert(v);
            VarSet inner = bound_vars(f->lhs);
            universe.insert(inner.begin(), inner.end());
            universe.erase(f->var);
            VarSet d = denotation_in(f->con, universe);
            bool want = f->kind == Kind::MetaExists;
            FunctionAssignment next = theta;
            bool found = any_uniform_function(d, d, a_.size(), [&](const UniformFunction& g) {
                next[f->var] = g;
                return eval(next, x, flag, f->lhs) == want;
            });
            return want ? found : !found;
        }
        }
    }
};

inline bool sat_meta(const Structure& a, const FunctionAssignment& theta, const Hyperteam& x, Flag flag, const Formula& f,
                     SatOptions opt = {}) {
    MetaEvaluator ev(a, opt);
    return ev.sat(theta, x, flag, f);
}

// Prenex ADIF sentence with quantifier-free matrix, split and checked.
inline Prenex prenex_sentence(const Formula& f) {
    if (has_meta(f)) fail(ErrorCode::NotPrenex, "meta quantifiers are not allowed here");
    Prenex p = split_prenex(f);
    if (!p.matrix_quantifier_free) fail(ErrorCode::NotPrenex, "matrix contains quantifiers");
    auto fr = free_vars(f);
    if (!fr.is_empty()) fail(ErrorCode::NotASentence, "free variables " + fr.str());
    return p;
}

// The meta sentence hsp(℘)ψ with every -W made explicit over the earlier prefix variables.
inline Formula herbrand_skolem_form(const Prenex& p) {
    return attach_prefix(hs_prefix(materialize_prefix(p.prefix, {})), p.matrix);
}

inline bool model_check(const Structure& a, const Formula& f, SatOptions opt = {}) {
    Prenex p = prenex_sentence(f);
    return sat_meta(a, {}, trivial_hyperteam(a.size()), Flag::EA, herbrand_skolem_form(p), opt);
}

// Both readings of Q x . φ: plain quantifier and meta quantifier.
inline std::pair<bool, bool> quantifier_interchange_check(const Structure& a, const FunctionAssignment& theta,
                                                          const Hyperteam& x, Flag flag, QSym q, const Constraint& con,
                                                          const std::string& var, const Formula& matrix) {
    if (is_meta(q)) fail(ErrorCode::Precondition, "expected a plain quantifier symbol");
    if (!is_fol(matrix)) fail(ErrorCode::Precondition, "matrix must be first order");
    if (con.denot().contains(var)) fail(ErrorCode::Precondition, "quantified variable lies in its own constraint");
    for (auto& [v, g] : theta)
        if (con.denot().contains(v)) fail(ErrorCode::Precondition, "function assignment meets the constraint set");
    if (x.var_index(var) >= 0) fail(ErrorCode::Precondition, "quantified variable already in the hyperteam");
    Formula plain = quant(kind_of(q), con, var, matrix);
    Formula meta = quant(q == QSym::Exists ? Kind::MetaExists : Kind::MetaForall, con, var, matrix);
    MetaEvaluator ev(a);
    return {ev.sat(theta, x, flag, plain), ev.sat(theta, x, flag, meta)};
}

// ---- Skolemisation ------------------------------------------------------------

struct Skolemisation {
    // For every existential variable: history of earlier functions -> chosen function.
    std::map<std::string, std::map<std::vector<UniformFunction>, UniformFunction>> tables;
    std::vector<std::string> order; // prefix variables, outermost first

    std::string dump(const Structure* s = nullptr) const {
        std::vector<std::string> lines;
        for (auto& [var, entries] : tables)
            for (auto& [hist, g] : entries) {
                std::string given;
                for (std::size_t j = 0; j < hist.size(); ++j) {
                    given += (j ? " " : "") + std::string("F_") + order[j] + "=[";
                    for (std::size_t k = 0; k < hist[j].table.size(); ++k)
                        given += (k ? "," : "") + value_name(hist[j].table[k], s);
                    given += "]";
                }
                std::string text = print_function(var, g, s);
                std::size_t pos = 0;
                while (pos < text.size()) {
                    auto nl = text.find('\n', pos);
                    std::string line = text.substr(pos, nl - pos);
                    if (!given.empty()) line += " given " + given;
                    lines.push_back(line);
                    pos = nl + 1;
                }
            }
        std::sort(lines.begin(), lines.end());
        std::string out;
        for (auto& l : lines) out += l + "\n";
        return out;
    }
};

namespace detail {

struct MetaPrefixItem {
    bool existential;
    std::string var;
    VarSet domain; // table variables
};

inline std::vector<MetaPrefixItem> meta_prefix_items(const Prenex& p, const Hyperteam& x) {
    std::vector<MetaPrefixItem> out;
    for (std::size_t i = 0; i < p.prefix.size(); ++i) {
        auto& q = p.prefix[i];
        if (!is_meta(q.sym)) fail(ErrorCode::NotMetaPrenex, "prefix contains a plain quantifier");
        VarSet universe = x.var_set();
        for (auto& r : p.prefix) universe.insert(r.var);
        universe.erase(q.var);
        out.push_back({q.sym == QSym::MetaExists, q.var, denotation_in(q.con, universe)});
    }
    return out;
}

} // namespace detail

// Looks for a Skolemisation of a meta-prenex sentence whose every Skolem
// extension satisfies the matrix. The witness is re-verified by enumerating
// all universal choices before it is returned.
inline std::optional<Skolemisation> skolemisation_search(const Structure& a, const Formula& f, Flag flag = Flag::EA) {
    Prenex p = split_prenex(f);
    if (p.prefix.empty() && has_meta(p.matrix)) fail(ErrorCode::NotMetaPrenex, "not in meta prenex form");
    if (!is_fol(p.matrix)) fail(ErrorCode::NotMetaPrenex, "matrix must be first order");
    Hyperteam x = trivial_hyperteam(a.size());
    auto items = detail::meta_prefix_items(p, x);
    check_meta_acyclic({}, x, f);
    MetaEvaluator ev(a);
    Skolemisation sk;
    for (auto& it : items) sk.order.push_back(it.var);

    std::vector<UniformFunction> hist;
    FunctionAssignment theta;
    std::function<bool(std::size_t)> solve = [&](std::size_t i) -> bool {
        if (i == items.size()) return ev.sat(theta, x, flag, p.matrix);
        auto& it = items[i];
        if (!it.existential) {
            return !any_uniform_function(it.domain, it.domain, a.size(), [&](const UniformFunction& g) {
                theta[it.var] = g;
                hist.push_back(g);
                bool ok = solve(i + 1);
                hist.pop_back();
                return !ok;
            });
        }
        auto snapshot = sk.tables;
        bool found = any_uniform_function(it.domain, it.domain, a.size(), [&](const UniformFunction& g) {
            theta[it.var] = g;
            hist.push_back(g);
            bool ok = solve(i + 1);
            hist.pop_back();
            if (ok) {
                std::vector<UniformFunction> key(hist.begin(), hist.end());
                sk.tables[it.var][key] = g;
            } else {
                sk.tables = snapshot;
            }
            return ok;
        });
        theta.erase(it.var);
        return found;
    };
    if (!solve(0)) return std::nullopt;

    // Independent check: every Skolem extension satisfies the matrix.
    FunctionAssignment ext;
    std::vector<UniformFunction> h;
    std::function<bool(std::size_t)> verify = [&](std::size_t i) -> bool {
        if (i == items.size()) return ev.sat(ext, x, flag, p.matrix);
        auto& it = items[i];
        if (it.existential) {
            auto& tab = sk.tables[it.var];
            auto found = tab.find(h);
            if (found == tab.end()) return false;
            ext[it.var] = found->second;
            h.push_back(found->second);
            bool ok = verify(i + 1);
            h.pop_back();
            return ok;
        }
        return !any_uniform_function(it.domain, it.domain, a.size(), [&](const UniformFunction& g) {
            ext[it.var] = g;
            h.push_back(g);
            bool ok = verify(i + 1);
            h.pop_back();
            return !ok;
        });
    };
    if (!verify(0)) fail(ErrorCode::Precondition, "internal error: Skolemisation failed verification");
    return sk;
}

} // namespace adif
