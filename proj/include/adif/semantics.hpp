#pragma once

#include "errors.hpp"
#include "formula.hpp"
#include "hyperteam.hpp"
#include "structure.hpp"

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace adif {

// ---- atoms ------------------------------------------------------------------

inline bool atom_holds(const Structure& a, const Formula& f, const std::vector<int>& args) {
    if (f->kind == Kind::Equal) return args[0] == args[1];
    return a.holds(f->rel, args);
}

// Assignments over `vars` satisfying a literal atom.
inline Bits atom_points(const Structure& a, const Formula& f, const std::vector<std::string>& vars) {
    std::vector<int> idx;
    for (auto& v : f->args) {
        int i = index_in(vars, v);
        if (i < 0) fail(ErrorCode::SupportViolation, "variable " + v + " is not assigned");
        idx.push_back(i);
    }
    const std::size_t n = ipow(a.size(), vars.size());
    Bits out(n);
    std::vector<int> args(idx.size());
    for (std::size_t c = 0; c < n; ++c) {
        auto vals = decode(c, a.size(), vars.size());
        for (std::size_t j = 0; j < idx.size(); ++j) args[j] = vals[idx[j]];
        if (atom_holds(a, f, args)) out.set(c);
    }
    return out;
}

// ---- Tarskian oracle --------------------------------------------------------

namespace detail {

inline bool fol(const Structure& a, Assignment& s, const Formula& f) {
    switch (f->kind) {
    case Kind::False: return false;
    case Kind::True: return true;
    case Kind::Atom:
    case Kind::Equal: {
        std::vector<int> args;
        for (auto& v : f->args) {
            auto it = s.find(v);
            if (it == s.end()) fail(ErrorCode::UnboundVariable, "variable " + v + " is unassigned");
            args.push_back(it->second);
        }
        return atom_holds(a, f, args);
    }
    case Kind::Not: return !fol(a, s, f->lhs);
    case Kind::And: return fol(a, s, f->lhs) && fol(a, s, f->rhs);
    case Kind::Or: return fol(a, s, f->lhs) || fol(a, s, f->rhs);
    default: {
        std::optional<int> saved;
        if (auto it = s.find(f->var); it != s.end()) saved = it->second;
        bool want = f->kind == Kind::Exists;
        bool result = !want;
        for (int v = 0; v < a.size(); ++v) {
            s[f->var] = v;
            if (fol(a, s, f->lhs) == want) {
                result = want;
                break;
            }
        }
        if (saved) s[f->var] = *saved;
        else s.erase(f->var);
        return result;
    }
    }
}

} // namespace detail

inline bool sat_fol(const Structure& a, const Assignment& s, const Formula& f) {
    if (!is_fol(f)) fail(ErrorCode::FragmentViolation, "formula is outside the first-order fragment");
    Assignment copy = s;
    return detail::fol(a, copy, f);
}

// ---- ADIF hyperteam semantics ---------------------------------------------

// Is there a bipartition (X1, X2) of x with p1(X1) and p2(X2)? Both predicates
// are closed under taking sub-hyperteams, so a partial split that already
// violates one of them can be abandoned.
inline bool find_split(const Hyperteam& x, const std::function<bool(const Hyperteam&)>& p1,
                   const std::function<bool(const Hyperteam&)>& p2, bool prune) {
    if (!prune)
        return any_bipartition(x, [&](const Hyperteam& y1, const Hyperteam& y2) { return p1(y1) && p2(y2); });
    const std::size_t n = x.teams.size();
    Hyperteam none{x.dom, x.vars, {}};
    if (!p1(none) || !p2(none)) return false;
    std::vector<char> can1(n), can2(n);
    for (std::size_t i = 0; i < n; ++i) {
        Hyperteam one{x.dom, x.vars, {x.teams[i]}};
        can1[i] = p1(one);
        can2[i] = p2(one);
        if (!can1[i] && !can2[i]) return false;
    }
    // Teams with a forced side first.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return (can1[a] && can2[a]) < (can1[b] && can2[b]);
    });
    std::vector<Bits> s1, s2;
    std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
        if (k == n) return true;
        std::size_t i = order[k];
        for (int side = 0; side < 2; ++side) {
            auto& s = side == 0 ? s1 : s2;
            if (!(side == 0 ? can1[i] : can2[i])) continue;
            s.push_back(x.teams[i]);
            bool ok = true;
            if (s.size() > 1) {
                Hyperteam y = from_teams(x.dom, x.vars, s);
                ok = side == 0 ? p1(y) : p2(y);
            }
            if (ok && rec(k + 1)) return true;
            s.pop_back();
        }
        return false;
    };
    return rec(0);
}

struct SatOptions {
    bool reduce = false; // keep hyperteams ⊆-minimal and dualise to minimal transversals
    bool prune = true;   // search bipartitions with downward-closure pruning
    bool memo = true;
    std::size_t memo_limit = std::size_t(1) << 20; // entries kept before the table is flushed
};

class AdifEvaluator {
public:
    explicit AdifEvaluator(const Structure& a, SatOptions opt = {}) : a_(a), opt_(opt) {}

    bool sat(const Hyperteam& x, Flag flag, const Formula& f) {
        if (has_meta(f)) fail(ErrorCode::FragmentViolation, "meta quantifiers need the meta evaluator");
        check_signature(f, a_);
        VarSet sup = support_vars(f);
        if (!subset_of(sup, x.var_set()))
            fail(ErrorCode::SupportViolation, "hyperteam variables " + to_string(x.var_set()) + " do not cover " + to_string(sup));
        if (x.dom != a_.size()) fail(ErrorCode::Precondition, "hyperteam and structure domains differ");
        if (memo_.size() > opt_.memo_limit) {
            memo_.clear();
            roots_.clear();
        }
        roots_.push_back(f);
        return eval(x, flag, f);
    }

    Hyperteam dual(const Hyperteam& x) const {
        return opt_.reduce ? dualize(x, DualMode::Minimal) : dualize(x);
    }

    std::size_t memo_size() const { return memo_.size(); }

private:
    const Structure& a_;
    SatOptions opt_;
    std::unordered_map<std::string, bool> memo_;
    std::vector<Formula> roots_; // keeps memo keys (node addresses) valid

    bool eval(const Hyperteam& in, Flag flag, const Formula& f) {
        if (!opt_.memo) return compute(opt_.reduce ? reduce(in) : in, flag, f);
        const Node* node = f.get();
        std::string key(reinterpret_cast<const char*>(&node), sizeof node);
        key += flag == Flag::EA ? 'E' : 'A';
        key += in.key();
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool r = compute(opt_.reduce ? reduce(in) : in, flag, f);
        memo_.emplace(std::move(key), r);
        return r;
    }

    bool compute(const Hyperteam& x, Flag flag, const Formula& f) {
        switch (f->kind) {
        case Kind::False: return flag == Flag::EA ? x.is_null() : x.is_empty();
        case Kind::True: return flag == Flag::EA ? !x.is_empty() : !x.is_null();
        case Kind::Atom:
        case Kind::Equal: {
            Bits good = atom_points(a_, f, x.vars);
            if (flag == Flag::EA)
                return std::any_of(x.teams.begin(), x.teams.end(), [&](const Bits& t) { return t.is_subset_of(good); });
            return std::all_of(x.teams.begin(), x.teams.end(), [&](const Bits& t) { return t.intersects(good); });
        }
        case Kind::Not: return !eval(x, adif::dual(flag), f->lhs);
        case Kind::And:
            if (flag == Flag::AE) return eval(dual(x), Flag::EA, f);
            return !find_split(x, [&](const Hyperteam& y) { return !eval(y, Flag::EA, f->lhs); },
                               [&](const Hyperteam& y) { return !eval(y, Flag::EA, f->rhs); }, opt_.prune);
        case Kind::Or:
            if (flag == Flag::EA) return eval(dual(x), Flag::AE, f);
            return find_split(x, [&](const Hyperteam& y) { return eval(y, Flag::AE, f->lhs); },
                              [&](const Hyperteam& y) { return eval(y, Flag::AE, f->rhs); }, opt_.prune);
        case Kind::Exists:
        case Kind::Forall: {
            if (!coherent(sym_of(f->kind), flag)) return eval(dual(x), adif::dual(flag), f);
            Hyperteam base = x.var_index(f->var) >= 0 ? restrict_to(x, set_minus(x.var_set(), {f->var})) : x;
            return eval(extend(base, f->var, denotation_in(f->con, base.var_set())), flag, f->lhs);
        }
        default: fail(ErrorCode::FragmentViolation, "meta quantifier in plain ADIF evaluation");
        }
    }

};

inline bool sat_adif(const Structure& a, const Hyperteam& x, Flag flag, const Formula& f, SatOptions opt = {}) {
    AdifEvaluator ev(a, opt);
    return ev.sat(x, flag, f);
}

inline bool is_true_sentence(const Structure& a, const Formula& f, SatOptions opt = {}) {
    auto fr = free_vars(f);
    if (!fr.is_empty()) fail(ErrorCode::NotASentence, "free variables " + fr.str());
    return sat_adif(a, trivial_hyperteam(a.size()), Flag::EA, f, opt);
}

// ---- DIF team semantics -----------------------------------------------------

enum class DifFlag { Exists, Forall };

inline const char* dif_flag_name(DifFlag b) { return b == DifFlag::Exists ? "E" : "A"; }

// Checks membership in the ∃-DIF fragment (for the ∀ relation) or the ∀-DIF fragment.
inline void check_dif_fragment(const Formula& f, DifFlag beta) {
    switch (f->kind) {
    case Kind::Atom:
    case Kind::Equal: return;
    case Kind::Not:
        if (!is_literal_atom(f->lhs->kind)) fail(ErrorCode::FragmentViolation, "negation must be in front of an atom");
        return;
    case Kind::And:
    case Kind::Or:
        check_dif_fragment(f->lhs, beta);
        check_dif_fragment(f->rhs, beta);
        return;
    case Kind::Exists:
    case Kind::Forall: {
        // The quantifier coherent with beta may only be -∅.
        Kind fixed = beta == DifFlag::Forall ? Kind::Forall : Kind::Exists;
        if (f->kind == fixed && f->con != Constraint::except({}))
            fail(ErrorCode::FragmentViolation, std::string(beta == DifFlag::Forall ? "universal" : "existential") +
                                                   " quantifiers must carry -{} in this fragment");
        check_dif_fragment(f->lhs, beta);
        return;
    }
    default: fail(ErrorCode::FragmentViolation, "constants and meta quantifiers are not DIF");
    }
}

namespace detail {

inline bool dif(const Structure& a, const Team& t, DifFlag beta, const Formula& f) {
    switch (f->kind) {
    case Kind::Atom:
    case Kind::Equal:
    case Kind::Not: {
        bool positive = f->kind != Kind::Not;
        const Formula& at = positive ? f : f->lhs;
        Bits good = atom_points(a, at, t.vars);
        if (!positive) good.flip();
        return beta == DifFlag::Forall ? t.bits.is_subset_of(good) : t.bits.intersects(good);
    }
    case Kind::And:
    case Kind::Or: {
        bool split = (f->kind == Kind::Or) == (beta == DifFlag::Forall);
        if (!split) {
            bool l = dif(a, t, beta, f->lhs);
            if (f->kind == Kind::And ? !l : l) return l;
            return dif(a, t, beta, f->rhs);
        }
        // Forall/Or: some split satisfies both. Exists/And: every split satisfies one.
        std::vector<std::size_t> pts;
        for (auto p = t.bits.find_first(); p != Bits::npos; p = t.bits.find_next(p)) pts.push_back(p);
        if (pts.size() > 24) fail(ErrorCode::Precondition, "team too large for partition enumeration");
        for (std::uint64_t m = 0; m < (std::uint64_t(1) << pts.size()); ++m) {
            Team t1{t.dom, t.vars, Bits(t.bits.size())}, t2 = t1;
            for (std::size_t i = 0; i < pts.size(); ++i) ((m >> i) & 1 ? t1 : t2).bits.set(pts[i]);
            if (beta == DifFlag::Forall) {
                if (dif(a, t1, beta, f->lhs) && dif(a, t2, beta, f->rhs)) return true;
            } else {
                if (!dif(a, t1, beta, f->lhs) && !dif(a, t2, beta, f->rhs)) return false;
            }
        }
        return beta != DifFlag::Forall;
    }
    default: {
        Team base = index_in(t.vars, f->var) >= 0 ? restrict_to(t, set_minus(t.var_set(), {f->var})) : t;
        bool coherent_q = (f->kind == Kind::Forall) == (beta == DifFlag::Forall);
        if (coherent_q) return dif(a, cylindrify(base, f->var), beta, f->lhs);
        VarSet w = denotation_in(f->con, base.var_set());
        for (auto& e : extend_team(base, f->var, w)) {
            bool r = dif(a, e, beta, f->lhs);
            if (beta == DifFlag::Forall && r) return true;
            if (beta == DifFlag::Exists && !r) return false;
        }
        return beta == DifFlag::Exists;
    }
    }
}

} // namespace detail

inline bool sat_dif(const Structure& a, const Team& t, DifFlag beta, const Formula& f) {
    check_dif_fragment(f, beta);
    check_signature(f, a);
    VarSet sup = support_vars(f);
    if (!subset_of(sup, t.var_set()))
        fail(ErrorCode::SupportViolation, "team variables do not cover " + to_string(sup));
    return detail::dif(a, t, beta, f);
}

// ---- bounded equivalence / implication ---------------------------------------

struct EquivBounds {
    std::size_t max_teams = 3;
    std::size_t max_assignments = 3;
};

struct EquivVerdict {
    bool holds = true;
    std::size_t checked = 0;
    std::optional<Hyperteam> counterexample;
    Flag flag = Flag::EA;
    bool lhs = false, rhs = false;
};

// Compares sat(X, α, φ1) with sat(X, α, φ2) over every bounded hyperteam X on V.
// `implication_only` asks only for φ1 ⇒ φ2.
inline EquivVerdict compare_formulas(const Structure& a, const Formula& f1, const Formula& f2, const VarSet& v,
                                     EquivBounds b = {}, bool implication_only = false, SatOptions opt = {}) {
    VarSet need = set_union(support_vars(f1), support_vars(f2));
    if (!subset_of(need, v)) fail(ErrorCode::SupportViolation, "V must contain " + to_string(need));
    AdifEvaluator ev(a, opt);
    EquivVerdict out;
    for (auto& x : enumerate_hyperteams(a.size(), std::vector<std::string>(v.begin(), v.end()), b.max_teams, b.max_assignments))
        for (Flag fl : {Flag::EA, Flag::AE}) {
            ++out.checked;
            bool l = ev.sat(x, fl, f1), r = ev.sat(x, fl, f2);
            if (implication_only ? (l && !r) : (l != r)) {
                out.holds = false;
                out.counterexample = x;
                out.flag = fl;
                out.lhs = l;
                out.rhs = r;
                return out;
            }
        }
    return out;
}

inline EquivVerdict check_equivalence(const Structure& a, const Formula& f1, const Formula& f2, const VarSet& v,
                                      EquivBounds b = {}) {
    return compare_formulas(a, f1, f2, v, b, false);
}

inline EquivVerdict check_implication(const Structure& a, const Formula& f1, const Formula& f2, const VarSet& v,
                                      EquivBounds b = {}) {
    return compare_formulas(a, f1, f2, v, b, true);
}

} // namespace adif
