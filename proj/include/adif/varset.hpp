#pragma once

#include <algorithm>
#include <iterator>
#include <set>
#include <string>

namespace adif {

using VarSet = std::set<std::string>;

inline VarSet set_union(const VarSet& a, const VarSet& b) {
    VarSet r = a;
    r.insert(b.begin(), b.end());
    return r;
}

inline VarSet set_minus(const VarSet& a, const VarSet& b) {
    VarSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
    return r;
}

inline VarSet set_inter(const VarSet& a, const VarSet& b) {
    VarSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
    return r;
}

inline bool subset_of(const VarSet& a, const VarSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline std::string to_string(const VarSet& s) {
    std::string out = "{";
    bool first = true;
    for (auto& v : s) {
        if (!first) out += ",";
        out += v;
        first = false;
    }
    return out + "}";
}

// A set of variables that is either finite or co-finite. Var is infinite,
// so the complement of a finite set is kept symbolically.
struct VarSetExpr {
    bool cofinite = false;
    VarSet vars; // members when finite, excluded variables when co-finite

    static VarSetExpr finite(VarSet s) { return {false, std::move(s)}; }
    static VarSetExpr cofinite_of(VarSet s) { return {true, std::move(s)}; }
    static VarSetExpr empty() { return {}; }
    static VarSetExpr all() { return {true, {}}; }

    bool contains(const std::string& x) const {
        return cofinite ? vars.count(x) == 0 : vars.count(x) != 0;
    }
    bool is_empty() const { return !cofinite && vars.empty(); }
    bool is_finite() const { return !cofinite; }

    VarSetExpr complement() const { return {!cofinite, vars}; }

    VarSetExpr unite(const VarSetExpr& o) const {
        if (!cofinite && !o.cofinite) return finite(set_union(vars, o.vars));
        if (cofinite && o.cofinite) return cofinite_of(set_inter(vars, o.vars));
        if (cofinite) return cofinite_of(set_minus(vars, o.vars));
        return cofinite_of(set_minus(o.vars, vars));
    }

    VarSetExpr intersect(const VarSetExpr& o) const {
        if (!cofinite && !o.cofinite) return finite(set_inter(vars, o.vars));
        if (cofinite && o.cofinite) return cofinite_of(set_union(vars, o.vars));
        if (cofinite) return finite(set_minus(o.vars, vars));
        return finite(set_minus(vars, o.vars));
    }

    VarSetExpr minus(const VarSetExpr& o) const { return intersect(o.complement()); }
    VarSetExpr minus(const std::string& x) const { return minus(finite({x})); }
    VarSetExpr unite(const VarSet& s) const { return unite(finite(s)); }

    // Finite view against a universe of variables that can actually matter.
    VarSet materialize(const VarSet& universe) const {
        return cofinite ? set_minus(universe, vars) : set_inter(vars, universe);
    }

    bool operator==(const VarSetExpr& o) const { return cofinite == o.cofinite && vars == o.vars; }
    bool operator!=(const VarSetExpr& o) const { return !(*this == o); }

    std::string str() const {
        return cofinite ? "Var\\" + to_string(vars) : to_string(vars);
    }
};

} // namespace adif
