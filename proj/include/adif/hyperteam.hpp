#pragma once

#include "errors.hpp"
#include "formula.hpp"
#include "structure.hpp"
#include "varset.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace adif {

using Bits = boost::dynamic_bitset<std::uint64_t>;
using Assignment = std::map<std::string, int>;

enum class Flag { EA, AE };

inline Flag dual(Flag f) { return f == Flag::EA ? Flag::AE : Flag::EA; }
inline const char* flag_name(Flag f) { return f == Flag::EA ? "EA" : "AE"; }

// Largest number of assignments a single variable layout may have.
inline constexpr std::size_t kMaxPoints = std::size_t(1) << 22;

inline std::size_t ipow(int base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        r *= static_cast<std::size_t>(base);
        if (r > kMaxPoints) fail(ErrorCode::Precondition, "too many assignments for explicit representation");
    }
    return r;
}

// Assignments over an ordered variable list are coded in mixed radix:
// the value of the i-th variable has weight dom^i.
inline int value_at(std::size_t code, int dom, std::size_t i) {
    for (std::size_t k = 0; k < i; ++k) code /= static_cast<std::size_t>(dom);
    return static_cast<int>(code % static_cast<std::size_t>(dom));
}

inline std::vector<int> decode(std::size_t code, int dom, std::size_t n) {
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<int>(code % static_cast<std::size_t>(dom));
        code /= static_cast<std::size_t>(dom);
    }
    return out;
}

inline std::size_t encode(const std::vector<int>& values, int dom) {
    std::size_t code = 0;
    for (std::size_t i = values.size(); i-- > 0;) code = code * static_cast<std::size_t>(dom) + static_cast<std::size_t>(values[i]);
    return code;
}

inline int index_in(const std::vector<std::string>& vars, const std::string& x) {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == x) return static_cast<int>(i);
    return -1;
}

struct Team {
    int dom = 2;
    std::vector<std::string> vars;
    Bits bits;

    std::size_t points() const { return ipow(dom, vars.size()); }
    bool empty() const { return bits.none(); }
    std::size_t size() const { return bits.count(); }
    VarSet var_set() const { return VarSet(vars.begin(), vars.end()); }
};

struct Hyperteam {
    int dom = 2;
    std::vector<std::string> vars;
    std::vector<Bits> teams; // sorted and duplicate-free

    std::size_t points() const { return ipow(dom, vars.size()); }
    VarSet var_set() const { return VarSet(vars.begin(), vars.end()); }
    int var_index(const std::string& x) const { return index_in(vars, x); }

    bool is_empty() const { return teams.empty(); }
    bool is_null() const {
        return std::any_of(teams.begin(), teams.end(), [](const Bits& b) { return b.none(); });
    }
    bool is_trivial() const { return vars.empty() && teams.size() == 1 && teams[0].test(0); }
    bool is_proper() const { return !is_empty() && !is_null(); }

    void canonicalize() {
        std::sort(teams.begin(), teams.end());
        teams.erase(std::unique(teams.begin(), teams.end()), teams.end());
    }

    Team team(std::size_t i) const { return Team{dom, vars, teams[i]}; }

    std::string key() const {
        std::string k;
        for (auto& v : vars) k += v + ',';
        k += '|';
        for (auto& t : teams) {
            std::vector<std::uint64_t> blocks;
            boost::to_block_range(t, std::back_inserter(blocks));
            for (auto b : blocks) k.append(reinterpret_cast<const char*>(&b), sizeof b);
            k += '/';
        }
        return k;
    }

    // Structural identity; variable order matters. Use equal_w for set semantics.
    bool operator==(const Hyperteam& o) const { return dom == o.dom && vars == o.vars && teams == o.teams; }
};

inline Hyperteam empty_hyperteam(int dom, std::vector<std::string> vars = {}) {
    ipow(dom, vars.size());
    return Hyperteam{dom, std::move(vars), {}};
}

inline Hyperteam null_hyperteam(int dom, std::vector<std::string> vars = {}) {
    Hyperteam h{dom, std::move(vars), {}};
    h.teams.push_back(Bits(h.points()));
    return h;
}

inline Hyperteam trivial_hyperteam(int dom) {
    Hyperteam h{dom, {}, {Bits(1)}};
    h.teams[0].set(0);
    return h;
}

inline Team make_team(int dom, std::vector<std::string> vars, const std::vector<std::vector<int>>& rows) {
    Team t{dom, std::move(vars), {}};
    t.bits.resize(t.points());
    for (auto& r : rows) {
        if (r.size() != t.vars.size()) fail(ErrorCode::Precondition, "assignment does not match team variables");
        for (int v : r)
            if (v < 0 || v >= dom) fail(ErrorCode::UnknownValue, "value outside the domain");
        t.bits.set(encode(r, dom));
    }
    return t;
}

// Each team is a list of rows, each row giving values for `vars` in order.
inline Hyperteam make_hyperteam(int dom, std::vector<std::string> vars,
                                const std::vector<std::vector<std::vector<int>>>& teams) {
    Hyperteam h{dom, vars, {}};
    for (auto& rows : teams) h.teams.push_back(make_team(dom, vars, rows).bits);
    h.canonicalize();
    return h;
}

inline Hyperteam from_teams(int dom, std::vector<std::string> vars, std::vector<Bits> teams) {
    Hyperteam h{dom, std::move(vars), std::move(teams)};
    h.canonicalize();
    return h;
}

inline Assignment assignment_of(const std::vector<std::string>& vars, int dom, std::size_t code) {
    Assignment a;
    auto vals = decode(code, dom, vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = vals[i];
    return a;
}

inline std::vector<Assignment> team_assignments(const Team& t) {
    std::vector<Assignment> out;
    for (auto i = t.bits.find_first(); i != Bits::npos; i = t.bits.find_next(i)) out.push_back(assignment_of(t.vars, t.dom, i));
    return out;
}

// Maps every code over `from` to the code of its restriction to `to` (to ⊆ from).
inline std::vector<std::size_t> projection_map(const std::vector<std::string>& from, const std::vector<std::string>& to,
                                               int dom) {
    std::vector<int> idx;
    for (auto& v : to) {
        int i = index_in(from, v);
        if (i < 0) fail(ErrorCode::Precondition, "projection onto unknown variable " + v);
        idx.push_back(i);
    }
    std::size_t n = ipow(dom, from.size());
    std::vector<std::size_t> out(n);
    for (std::size_t c = 0; c < n; ++c) {
        auto vals = decode(c, dom, from.size());
        std::size_t k = 0;
        for (std::size_t j = idx.size(); j-- > 0;) k = k * static_cast<std::size_t>(dom) + static_cast<std::size_t>(vals[idx[j]]);
        out[c] = k;
    }
    return out;
}

inline Bits project_bits(const Bits& b, const std::vector<std::size_t>& map, std::size_t target_points) {
    Bits out(target_points);
    for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i)) out.set(map[i]);
    return out;
}

// Restriction onto an explicit variable order.
inline Hyperteam project(const Hyperteam& x, const std::vector<std::string>& order) {
    if (order == x.vars) return x;
    auto map = projection_map(x.vars, order, x.dom);
    Hyperteam out{x.dom, order, {}};
    std::size_t n = out.points();
    for (auto& t : x.teams) out.teams.push_back(project_bits(t, map, n));
    out.canonicalize();
    return out;
}

inline Team project(const Team& t, const std::vector<std::string>& order) {
    if (order == t.vars) return t;
    auto map = projection_map(t.vars, order, t.dom);
    Team out{t.dom, order, {}};
    out.bits = project_bits(t.bits, map, out.points());
    return out;
}

inline std::vector<std::string> ordered_subset(const std::vector<std::string>& vars, const VarSet& keep) {
    std::vector<std::string> out;
    for (auto& v : vars)
        if (keep.count(v)) out.push_back(v);
    return out;
}

inline Hyperteam restrict_to(const Hyperteam& x, const VarSet& w) { return project(x, ordered_subset(x.vars, w)); }
inline Team restrict_to(const Team& t, const VarSet& w) { return project(t, ordered_subset(t.vars, w)); }

// Brings two hyperteams onto the common sorted variable list W ∩ var.
inline std::pair<Hyperteam, Hyperteam> align(const Hyperteam& a, const Hyperteam& b, const VarSet& w) {
    VarSet wa = set_inter(w, a.var_set()), wb = set_inter(w, b.var_set());
    if (wa != wb) fail(ErrorCode::Precondition, "hyperteams restricted to W have different variables");
    std::vector<std::string> order(wa.begin(), wa.end());
    return {project(a, order), project(b, order)};
}

inline bool refines_aligned(const Hyperteam& a, const Hyperteam& b) {
    for (auto& t1 : a.teams) {
        bool found = false;
        for (auto& t2 : b.teams)
            if (t2.is_subset_of(t1)) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

inline bool refines(const Hyperteam& a, const Hyperteam& b, const VarSet& w) {
    auto [pa, pb] = align(a, b, w);
    return refines_aligned(pa, pb);
}

inline bool refines(const Hyperteam& a, const Hyperteam& b) {
    if (a.var_set() != b.var_set()) fail(ErrorCode::Precondition, "refinement needs equal variable sets");
    return refines(a, b, a.var_set());
}

inline bool equiv_w(const Hyperteam& a, const Hyperteam& b, const VarSet& w) {
    auto [pa, pb] = align(a, b, w);
    return refines_aligned(pa, pb) && refines_aligned(pb, pa);
}

inline bool equiv(const Hyperteam& a, const Hyperteam& b) { return equiv_w(a, b, set_union(a.var_set(), b.var_set())); }

inline bool equal_w(const Hyperteam& a, const Hyperteam& b, const VarSet& w) {
    auto [pa, pb] = align(a, b, w);
    return pa.teams == pb.teams;
}

inline bool equal_sets(const Hyperteam& a, const Hyperteam& b) {
    if (a.dom != b.dom || a.var_set() != b.var_set()) return false;
    return equal_w(a, b, a.var_set());
}

// Keeps the ⊆-minimal teams only.
inline Hyperteam reduce(const Hyperteam& x) {
    std::vector<Bits> sorted = x.teams;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Bits& a, const Bits& b) { return a.count() < b.count(); });
    std::vector<Bits> kept;
    for (auto& t : sorted) {
        bool dominated = false;
        for (auto& k : kept)
            if (k.is_subset_of(t)) {
                dominated = true;
                break;
            }
        if (!dominated) kept.push_back(t);
    }
    return from_teams(x.dom, x.vars, std::move(kept));
}

// ---- dualisation ----------------------------------------------------------

enum class DualMode {
    Auto,       // cheapest of Product and Transversal
    Product,    // literal enumeration of choice functions
    Transversal, // exact image set via transversals plus a matching test
    Minimal,    // only the ⊆-minimal images (equivalent, not equal)
};

namespace detail {

inline void dual_product(const std::vector<Bits>& teams, std::size_t i, Bits& acc, std::set<Bits>& out) {
    if (i == teams.size()) {
        out.insert(acc);
        return;
    }
    const Bits& t = teams[i];
    for (auto p = t.find_first(); p != Bits::npos; p = t.find_next(p)) {
        bool had = acc.test(p);
        acc.set(p);
        dual_product(teams, i + 1, acc, out);
        if (!had) acc.reset(p);
    }
}

inline bool augment(int s, const std::vector<std::vector<int>>& adj, std::vector<int>& match_team, std::vector<char>& seen) {
    for (int t : adj[s]) {
        if (seen[t]) continue;
        seen[t] = 1;
        if (match_team[t] < 0 || augment(match_team[t], adj, match_team, seen)) {
            match_team[t] = s;
            return true;
        }
    }
    return false;
}

// S is the image of a choice function iff every team meets S and the points of S
// can be matched injectively to teams containing them.
inline std::vector<Bits> dual_transversal(const Hyperteam& x) {
    Bits uni(x.points());
    for (auto& t : x.teams) uni |= t;
    std::vector<std::size_t> pts;
    for (auto p = uni.find_first(); p != Bits::npos; p = uni.find_next(p)) pts.push_back(p);
    const std::size_t u = pts.size();
    std::vector<std::uint32_t> masks;
    for (auto& t : x.teams) {
        std::uint32_t m = 0;
        for (std::size_t j = 0; j < u; ++j)
            if (t.test(pts[j])) m |= (1u << j);
        masks.push_back(m);
    }
    std::vector<Bits> out;
    for (std::uint64_t s = 1; s < (std::uint64_t(1) << u); ++s) {
        auto sm = static_cast<std::uint32_t>(s);
        if (static_cast<std::size_t>(std::popcount(sm)) > masks.size()) continue;
        bool hits = std::all_of(masks.begin(), masks.end(), [&](std::uint32_t m) { return (m & sm) != 0; });
        if (!hits) continue;
        std::vector<int> members;
        for (std::size_t j = 0; j < u; ++j)
            if (sm & (1u << j)) members.push_back(static_cast<int>(j));
        std::vector<std::vector<int>> adj(members.size());
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t t = 0; t < masks.size(); ++t)
                if (masks[t] & (1u << members[a])) adj[a].push_back(static_cast<int>(t));
        std::vector<int> match_team(masks.size(), -1);
        bool ok = true;
        for (std::size_t a = 0; a < members.size() && ok; ++a) {
            std::vector<char> seen(masks.size(), 0);
            ok = augment(static_cast<int>(a), adj, match_team, seen);
        }
        if (!ok) continue;
        Bits b(x.points());
        for (int j : members) b.set(pts[j]);
        out.push_back(std::move(b));
    }
    return out;
}

// Minimal transversals by incremental refinement over the teams.
inline std::vector<Bits> dual_minimal(const Hyperteam& x) {
    std::vector<Bits> cur{Bits(x.points())};
    for (auto& t : x.teams) {
        std::set<Bits> next;
        for (auto& s : cur) {
            if (s.intersects(t)) {
                next.insert(s);
                continue;
            }
            for (auto p = t.find_first(); p != Bits::npos; p = t.find_next(p)) {
                Bits n = s;
                n.set(p);
                next.insert(std::move(n));
            }
        }
        Hyperteam tmp{x.dom, x.vars, std::vector<Bits>(next.begin(), next.end())};
        cur = reduce(tmp).teams;
    }
    return cur;
}

} // namespace detail

inline Hyperteam dualize(const Hyperteam& x, DualMode mode = DualMode::Auto) {
    Hyperteam out{x.dom, x.vars, {}};
    if (x.is_empty()) {
        out.teams.push_back(Bits(x.points()));
        return out;
    }
    if (x.is_null()) return out;
    if (mode == DualMode::Minimal) {
        out.teams = detail::dual_minimal(x);
        out.canonicalize();
        return out;
    }
    if (mode == DualMode::Auto) {
        double product = 1;
        for (auto& t : x.teams) product *= static_cast<double>(t.count());
        Bits uni(x.points());
        for (auto& t : x.teams) uni |= t;
        std::size_t u = uni.count();
        double trans = u <= 24 ? std::ldexp(1.0, static_cast<int>(u)) * static_cast<double>(x.teams.size()) : 1e300;
        mode = (u <= 24 && trans < product) ? DualMode::Transversal : DualMode::Product;
    }
    if (mode == DualMode::Transversal) {
        Bits uni(x.points());
        for (auto& t : x.teams) uni |= t;
        if (uni.count() > 30) fail(ErrorCode::Precondition, "transversal dualisation needs at most 30 points");
        out.teams = detail::dual_transversal(x);
    } else {
        std::set<Bits> images;
        Bits acc(x.points());
        detail::dual_product(x.teams, 0, acc, images);
        out.teams.assign(images.begin(), images.end());
    }
    out.canonicalize();
    return out;
}

// ---- extension ------------------------------------------------------------

namespace detail {

inline std::vector<int> indices_of(const std::vector<std::string>& vars, const VarSet& w) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (w.count(vars[i])) idx.push_back(static_cast<int>(i));
    return idx;
}

inline std::size_t key_of(std::size_t code, int dom, std::size_t n, const std::vector<int>& idx) {
    auto vals = decode(code, dom, n);
    std::size_t k = 0;
    for (std::size_t j = idx.size(); j-- > 0;) k = k * static_cast<std::size_t>(dom) + static_cast<std::size_t>(vals[idx[j]]);
    return k;
}

// All W-uniform extensions of one team, as bitsets over vars ++ [x].
inline void extend_team(const Bits& team, int dom, std::size_t n, const std::vector<int>& idx, std::size_t new_points,
                        std::vector<Bits>& out) {
    std::vector<std::size_t> codes;
    std::vector<std::size_t> keys;
    std::map<std::size_t, std::size_t> slot;
    for (auto c = team.find_first(); c != Bits::npos; c = team.find_next(c)) {
        std::size_t k = key_of(c, dom, n, idx);
        auto [it, inserted] = slot.emplace(k, slot.size());
        codes.push_back(c);
        keys.push_back(it->second);
    }
    const std::size_t weight = ipow(dom, n);
    std::vector<int> choice(slot.size(), 0);
    while (true) {
        Bits b(new_points);
        for (std::size_t i = 0; i < codes.size(); ++i) b.set(codes[i] + static_cast<std::size_t>(choice[keys[i]]) * weight);
        out.push_back(std::move(b));
        std::size_t j = 0;
        while (j < choice.size() && ++choice[j] == dom) choice[j++] = 0;
        if (j == choice.size()) break;
    }
}

} // namespace detail

// ext_W(X, x): every team extended by every W-uniform function for x.
inline Hyperteam extend(const Hyperteam& x, const std::string& var, const VarSet& w) {
    if (x.var_index(var) >= 0) fail(ErrorCode::VariableAlreadyBound, "variable " + var + " is already in the hyperteam");
    Hyperteam out{x.dom, x.vars, {}};
    out.vars.push_back(var);
    std::size_t np = out.points();
    auto idx = detail::indices_of(x.vars, w);
    for (auto& t : x.teams) detail::extend_team(t, x.dom, x.vars.size(), idx, np, out.teams);
    out.canonicalize();
    return out;
}

inline Hyperteam extend(const Hyperteam& x, const std::string& var, const VarSetExpr& w) {
    return extend(x, var, w.materialize(x.var_set()));
}

inline std::vector<Team> extend_team(const Team& t, const std::string& var, const VarSet& w) {
    if (index_in(t.vars, var) >= 0) fail(ErrorCode::VariableAlreadyBound, "variable " + var + " is already in the team");
    std::vector<std::string> vars = t.vars;
    vars.push_back(var);
    std::vector<Bits> bits;
    detail::extend_team(t.bits, t.dom, t.vars.size(), detail::indices_of(t.vars, w), ipow(t.dom, vars.size()), bits);
    std::sort(bits.begin(), bits.end());
    bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
    std::vector<Team> out;
    for (auto& b : bits) out.push_back(Team{t.dom, vars, b});
    return out;
}

inline Team cylindrify(const Team& t, const std::string& var) {
    if (index_in(t.vars, var) >= 0) fail(ErrorCode::VariableAlreadyBound, "variable " + var + " is already in the team");
    Team out{t.dom, t.vars, {}};
    out.vars.push_back(var);
    out.bits.resize(out.points());
    std::size_t weight = ipow(t.dom, t.vars.size());
    for (auto c = t.bits.find_first(); c != Bits::npos; c = t.bits.find_next(c))
        for (int a = 0; a < t.dom; ++a) out.bits.set(c + static_cast<std::size_t>(a) * weight);
    return out;
}

inline Hyperteam cylindrify(const Hyperteam& x, const std::string& var) {
    if (x.var_index(var) >= 0) fail(ErrorCode::VariableAlreadyBound, "variable " + var + " is already in the hyperteam");
    Hyperteam out{x.dom, x.vars, {}};
    out.vars.push_back(var);
    for (std::size_t i = 0; i < x.teams.size(); ++i) out.teams.push_back(cylindrify(x.team(i), var).bits);
    out.canonicalize();
    return out;
}

// ---- bipartitions -----------------------------------------------------------

// Calls f(X1, X2) for every ordered bipartition, in bitmask order; stops when f returns true.
inline bool any_bipartition(const Hyperteam& x, const std::function<bool(const Hyperteam&, const Hyperteam&)>& f) {
    const std::size_t n = x.teams.size();
    if (n > 24) fail(ErrorCode::Precondition, "too many teams for bipartition enumeration");
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m) {
        Hyperteam a{x.dom, x.vars, {}}, b{x.dom, x.vars, {}};
        for (std::size_t i = 0; i < n; ++i) ((m >> i) & 1 ? a : b).teams.push_back(x.teams[i]);
        if (f(a, b)) return true;
    }
    return false;
}

inline std::vector<std::pair<Hyperteam, Hyperteam>> bipartitions(const Hyperteam& x) {
    std::vector<std::pair<Hyperteam, Hyperteam>> out;
    any_bipartition(x, [&](const Hyperteam& a, const Hyperteam& b) {
        out.emplace_back(a, b);
        return false;
    });
    return out;
}

// ---- uniform functions and function assignments ---------------------------

struct UniformFunction {
    int dom = 2;
    std::vector<std::string> vars; // sorted dependency variables
    std::vector<int> table;        // indexed by the mixed-radix code over vars

    int at(const Assignment& a) const {
        std::vector<int> vals;
        for (auto& v : vars) {
            auto it = a.find(v);
            if (it == a.end()) fail(ErrorCode::Precondition, "function argument " + v + " is unassigned");
            vals.push_back(it->second);
        }
        return table[encode(vals, dom)];
    }

    bool operator==(const UniformFunction& o) const { return dom == o.dom && vars == o.vars && table == o.table; }
    bool operator<(const UniformFunction& o) const {
        return std::tie(dom, vars, table) < std::tie(o.dom, o.vars, o.table);
    }
};

using FunctionAssignment = std::map<std::string, UniformFunction>;

inline UniformFunction constant_function(int dom, int value) { return UniformFunction{dom, {}, {value}}; }

// Visits the |A|^(|A|^|W∩base|) functions in lexicographic table order; stops when f returns true.
inline bool any_uniform_function(const VarSet& w, const VarSet& base, int dom,
                                 const std::function<bool(const UniformFunction&)>& f) {
    VarSet d = set_inter(w, base);
    UniformFunction g{dom, std::vector<std::string>(d.begin(), d.end()), {}};
    g.table.assign(ipow(dom, g.vars.size()), 0);
    while (true) {
        if (f(g)) return true;
        std::size_t j = g.table.size();
        while (j > 0) {
            if (++g.table[j - 1] < dom) break;
            g.table[j - 1] = 0;
            --j;
        }
        if (j == 0) return false;
    }
}

inline std::vector<UniformFunction> enumerate_uniform_functions(const VarSet& w, const VarSet& base, int dom) {
    std::vector<UniformFunction> out;
    any_uniform_function(w, base, dom, [&](const UniformFunction& g) {
        out.push_back(g);
        return false;
    });
    return out;
}

// ext(X, Θ): cylindrify over the unassigned variables of dom Θ, then keep the
// assignments that agree with Θ on each of them.
inline Hyperteam apply_function_assignment(const Hyperteam& x, const FunctionAssignment& theta) {
    std::vector<std::string> fresh;
    for (auto& [v, f] : theta)
        if (x.var_index(v) < 0) fresh.push_back(v);
    if (fresh.empty()) return x;
    Hyperteam out{x.dom, x.vars, {}};
    out.vars.insert(out.vars.end(), fresh.begin(), fresh.end());
    std::size_t np = out.points();
    struct Check {
        int var;
        const UniformFunction* f;
        std::vector<int> args;
    };
    std::vector<Check> checks;
    for (auto& v : fresh) {
        const UniformFunction& f = theta.at(v);
        Check c{index_in(out.vars, v), &f, {}};
        for (auto& a : f.vars) {
            int i = index_in(out.vars, a);
            if (i < 0) fail(ErrorCode::Precondition, "function for " + v + " depends on unassigned variable " + a);
            c.args.push_back(i);
        }
        checks.push_back(std::move(c));
    }
    const std::size_t base = x.points();
    const std::size_t combos = ipow(x.dom, fresh.size());
    for (auto& t : x.teams) {
        Bits b(np);
        for (auto c = t.find_first(); c != Bits::npos; c = t.find_next(c))
            for (std::size_t e = 0; e < combos; ++e) {
                std::size_t code = c + e * base;
                auto vals = decode(code, x.dom, out.vars.size());
                bool ok = true;
                for (auto& ch : checks) {
                    std::vector<int> args;
                    for (int i : ch.args) args.push_back(vals[i]);
                    if (ch.f->table[encode(args, x.dom)] != vals[ch.var]) {
                        ok = false;
                        break;
                    }
                }
                if (ok) b.set(code);
            }
        out.teams.push_back(std::move(b));
    }
    out.canonicalize();
    return out;
}

// ---- prefix extension -------------------------------------------------------

inline VarSet denotation_in(const Constraint& c, const VarSet& vars) { return c.denot().materialize(vars); }

inline bool coherent(QSym q, Flag a) {
    return (q == QSym::Exists && a == Flag::EA) || (q == QSym::Forall && a == Flag::AE);
}

inline Hyperteam extend_prefix(Hyperteam x, const Prefix& prefix, Flag a, DualMode mode = DualMode::Auto) {
    for (auto& q : prefix) {
        if (is_meta(q.sym)) fail(ErrorCode::Precondition, "extend_prefix expects plain quantifiers");
        VarSet w = denotation_in(q.con, x.var_set());
        if (coherent(q.sym, a)) x = extend(x, q.var, w);
        else x = dualize(extend(dualize(x, mode), q.var, w), mode);
    }
    return x;
}

// ---- enumeration of small instances -----------------------------------------

// All teams over `vars` with at most max_size assignments (the empty team included).
inline std::vector<Bits> enumerate_teams(int dom, const std::vector<std::string>& vars, std::size_t max_size) {
    const std::size_t n = ipow(dom, vars.size());
    if (n > 20) fail(ErrorCode::Precondition, "team enumeration needs at most 20 assignments");
    std::vector<Bits> out;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m) {
        if (static_cast<std::size_t>(std::popcount(m)) > max_size) continue;
        Bits b(n);
        for (std::size_t i = 0; i < n; ++i)
            if ((m >> i) & 1) b.set(i);
        out.push_back(std::move(b));
    }
    std::sort(out.begin(), out.end(), [](const Bits& a, const Bits& b) {
        return a.count() != b.count() ? a.count() < b.count() : a < b;
    });
    return out;
}

// All hyperteams with at most max_teams teams drawn from enumerate_teams (the empty hyperteam included).
inline std::vector<Hyperteam> enumerate_hyperteams(int dom, const std::vector<std::string>& vars, std::size_t max_teams,
                                                   std::size_t max_size) {
    auto teams = enumerate_teams(dom, vars, max_size);
    std::vector<Hyperteam> out;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        std::vector<Bits> chosen;
        for (auto i : pick) chosen.push_back(teams[i]);
        out.push_back(from_teams(dom, vars, std::move(chosen)));
        if (pick.size() == max_teams) return;
        for (std::size_t i = start; i < teams.size(); ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

// ---- printing ---------------------------------------------------------------

inline std::string value_name(int v, const Structure* s) { return s ? s->domain.at(v) : std::to_string(v); }

inline std::string print_team(const Team& t, const Structure* s = nullptr) {
    std::string out = "{";
    for (auto c = t.bits.find_first(); c != Bits::npos; c = t.bits.find_next(c)) {
        auto vals = decode(c, t.dom, t.vars.size());
        out += " {";
        for (std::size_t i = 0; i < t.vars.size(); ++i) out += (i ? " " : "") + t.vars[i] + "=" + value_name(vals[i], s);
        out += "}";
    }
    return out + " }";
}

inline std::string print_hyperteam(const Hyperteam& x, const Structure* s = nullptr) {
    std::string out;
    for (std::size_t i = 0; i < x.teams.size(); ++i) out += (i ? " " : "") + print_team(x.team(i), s);
    return out;
}

} // namespace adif
