#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wim/errors.hpp"
#include "wim/suffstat.hpp"

namespace wim {

// A fiber move: the vector a - b of a pure-difference binomial p^a - p^b.
// Always orthogonal to the columns of A_B; positive and negative parts have
// disjoint supports. Sign is normalized so the first nonzero entry (row-major)
// is positive.
struct Move {
    std::vector<int> delta;

    int degree() const {
        int d = 0;
        for (int x : delta)
            if (x > 0) d += x;
        return d;
    }
    friend auto operator<=>(const Move&, const Move&) = default;
};

struct BasisOptions {
    int degree_cap = 20;              // max binomial degree during elimination
    std::vector<int> variable_order;  // optional permutation of 0..IJ-1
};

namespace groebner {

using Exp = std::vector<int>;  // monomial exponent vector

inline int total_deg(const Exp& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

// Degree-reverse-lexicographic order. `scan` lists the variables from
// cheapest to most expensive; a monomial with a smaller exponent on an
// earlier scan variable is larger (ties broken upward).
struct DegRevLex {
    std::vector<int> scan;

    static DegRevLex rotated(const std::vector<int>& perm, int round) {
        const int n = static_cast<int>(perm.size());
        DegRevLex ord;
        ord.scan.resize(n);
        for (int t = 0; t < n; ++t) ord.scan[t] = perm[(round - t + n) % n];
        return ord;
    }

    bool greater(const Exp& a, const Exp& b) const {
        int da = total_deg(a), db = total_deg(b);
        if (da != db) return da > db;
        for (int v : scan) {
            int d = a[v] - b[v];
            if (d != 0) return d < 0;
        }
        return false;
    }
};

// Pure-difference binomial x^lead - x^tail with lead > tail in the ambient
// order. All Buchberger arithmetic stays in this form.
struct Binomial {
    Exp lead, tail;
};

inline std::optional<Binomial> orient(Exp a, Exp b, const DegRevLex& ord) {
    if (a == b) return std::nullopt;
    if (ord.greater(b, a)) std::swap(a, b);
    return Binomial{std::move(a), std::move(b)};
}

inline bool divides(const Exp& a, const Exp& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

// Normal form of a monomial: rewrite x^m -> x^{m - lead + tail} while some
// lead divides it. Terminates because tail < lead in a well-founded order.
inline Exp reduce_monomial(Exp m, const std::vector<Binomial>& basis) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Binomial& g : basis) {
            if (divides(g.lead, m)) {
                for (size_t i = 0; i < m.size(); ++i) m[i] += g.tail[i] - g.lead[i];
                changed = true;
            }
        }
    }
    return m;
}

inline std::optional<Binomial> normal_form(const Binomial& f, const std::vector<Binomial>& basis,
                                           const DegRevLex& ord) {
    Exp a = reduce_monomial(f.lead, basis);
    Exp b = reduce_monomial(f.tail, basis);
    return orient(std::move(a), std::move(b), ord);
}

// Buchberger completion. S-pairs are selected by smallest lcm degree, then
// lexicographically smallest lcm (normal strategy); pairs with coprime
// leading terms are skipped.
inline std::vector<Binomial> buchberger(std::vector<Binomial> gens, const DegRevLex& ord,
                                        int degree_cap) {
    std::vector<Binomial> basis;

    struct PendingPair {
        int deg;
        Exp lcm;
        int i, j;
        bool operator>(const PendingPair& o) const {
            if (deg != o.deg) return deg > o.deg;
            if (lcm != o.lcm) return lcm > o.lcm;
            return std::pair{i, j} > std::pair{o.i, o.j};
        }
    };
    std::priority_queue<PendingPair, std::vector<PendingPair>, std::greater<>> pairs;

    auto add_element = [&](Binomial g) {
        if (total_deg(g.lead) > degree_cap)
            throw resource_limit("basis generator degree exceeds cap " +
                                 std::to_string(degree_cap));
        const int idx = static_cast<int>(basis.size());
        basis.push_back(std::move(g));
        for (int i = 0; i < idx; ++i) {
            bool coprime = true;
            Exp lcm(basis[idx].lead.size());
            for (size_t t = 0; t < lcm.size(); ++t) {
                lcm[t] = std::max(basis[i].lead[t], basis[idx].lead[t]);
                if (basis[i].lead[t] > 0 && basis[idx].lead[t] > 0) coprime = false;
            }
            if (!coprime) pairs.push({total_deg(lcm), std::move(lcm), i, idx});
        }
    };

    for (Binomial& g : gens) {
        auto nf = normal_form(g, basis, ord);
        if (nf) add_element(std::move(*nf));
    }
    while (!pairs.empty()) {
        PendingPair p = pairs.top();
        pairs.pop();
        const Binomial& f = basis[p.i];
        const Binomial& g = basis[p.j];
        Exp splus = p.lcm, sminus = p.lcm;
        for (size_t t = 0; t < p.lcm.size(); ++t) {
            splus[t] += g.tail[t] - g.lead[t];
            sminus[t] += f.tail[t] - f.lead[t];
        }
        auto s = orient(std::move(splus), std::move(sminus), ord);
        if (!s) continue;
        auto nf = normal_form(*s, basis, ord);
        if (nf) add_element(std::move(*nf));
    }
    return basis;
}

// Is the binomial with the given move vector in the ideal generated by `gb`
// (a Groebner basis)? Holds iff both monomials share a normal form.
inline bool binomial_in_ideal(const std::vector<int>& move, const std::vector<Binomial>& gb) {
    Exp plus(move.size(), 0), minus(move.size(), 0);
    for (size_t i = 0; i < move.size(); ++i) {
        if (move[i] > 0) plus[i] = move[i];
        if (move[i] < 0) minus[i] = -move[i];
    }
    return reduce_monomial(plus, gb) == reduce_monomial(minus, gb);
}

}  // namespace groebner

namespace detail {

inline std::vector<int> sign_normalized(std::vector<int> v) {
    for (int x : v) {
        if (x > 0) break;
        if (x < 0) {
            for (int& y : v) y = -y;
            break;
        }
    }
    return v;
}

// Drop generators lying in the ideal generated by the ones kept so far,
// scanning in ascending degree. For a graded binomial ideal this yields a
// minimal generating set, so the move count is canonical.
inline std::vector<Move> prune_redundant(std::vector<std::vector<int>> moves, int n,
                                         int degree_cap) {
    std::sort(moves.begin(), moves.end(), [](const auto& a, const auto& b) {
        int da = 0, db = 0;
        for (int x : a) da += std::max(x, 0);
        for (int x : b) db += std::max(x, 0);
        return std::tie(da, a) < std::tie(db, b);
    });
    moves.erase(std::unique(moves.begin(), moves.end()), moves.end());

    std::vector<int> identity(n);
    for (int i = 0; i < n; ++i) identity[i] = i;
    const auto ord = groebner::DegRevLex::rotated(identity, n - 1);

    std::vector<Move> kept;
    std::vector<groebner::Binomial> members, gb;
    for (const auto& v : moves) {
        if (!gb.empty() && groebner::binomial_in_ideal(v, gb)) continue;
        kept.push_back(Move{v});
        groebner::Exp plus(n, 0), minus(n, 0);
        for (int i = 0; i < n; ++i) {
            if (v[i] > 0) plus[i] = v[i];
            if (v[i] < 0) minus[i] = -v[i];
        }
        members.push_back(groebner::Binomial{std::move(plus), std::move(minus)});
        gb = groebner::buchberger(members, ord, degree_cap);
    }
    return kept;
}

}  // namespace detail

// Markov basis of A_B: moves whose binomials generate the toric ideal
// { p^a - p^b : A_B^t a = A_B^t b }. Pipeline: integer kernel of A_B seeds
// the lattice ideal; Hosten-Sturmfels saturation (one degrevlex Groebner
// basis per variable, that variable cheapest, then divide the variable out);
// finally redundant generators are pruned.
inline std::vector<Move> compute_basis(const SuffStatMatrix& a, const BasisOptions& opts = {}) {
    const int n = a.shape.cell_count();

    std::vector<int> cover(n, 0);
    for (const auto& col : a.columns)
        for (int idx : col.support) cover[idx] = 1;
    for (int idx = 0; idx < n; ++idx)
        if (!cover[idx])
            throw internal_error("cell " + cell_str(a.shape.cell_at(idx)) +
                                 " not covered by any generator column");

    std::vector<int> perm = opts.variable_order;
    if (perm.empty()) {
        perm.resize(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
    } else {
        std::vector<int> seen(n, 0);
        for (int v : perm)
            if (v < 0 || v >= n || seen[v]++)
                throw input_error("variable order must be a permutation of 0.." +
                                  std::to_string(n - 1));
        if (static_cast<int>(perm.size()) != n)
            throw input_error("variable order must list all " + std::to_string(n) +
                              " variables");
    }

    const auto kernel = integer_kernel(a.matrix());
    if (kernel.empty()) return {};

    std::vector<groebner::Binomial> gens;
    for (const auto& v : kernel) {
        groebner::Exp plus(n, 0), minus(n, 0);
        for (int i = 0; i < n; ++i) {
            if (v[i] > 0) plus[i] = static_cast<int>(v[i]);
            if (v[i] < 0) minus[i] = static_cast<int>(-v[i]);
        }
        gens.push_back({std::move(plus), std::move(minus)});
    }

    for (int round = 0; round < n; ++round) {
        const auto ord = groebner::DegRevLex::rotated(perm, round);
        std::vector<groebner::Binomial> oriented;
        for (const auto& g : gens) {
            auto o = groebner::orient(g.lead, g.tail, ord);
            if (o) oriented.push_back(std::move(*o));
        }
        auto gb = groebner::buchberger(std::move(oriented), ord, opts.degree_cap);
        const int var = perm[round];
        for (auto& g : gb) {
            int k = std::min(g.lead[var], g.tail[var]);
            g.lead[var] -= k;
            g.tail[var] -= k;
        }
        gens = std::move(gb);
    }

    std::vector<std::vector<int>> raw;
    for (const auto& g : gens) {
        std::vector<int> v(n);
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            v[i] = g.lead[i] - g.tail[i];
            nonzero = nonzero || v[i] != 0;
        }
        if (nonzero) raw.push_back(detail::sign_normalized(std::move(v)));
    }
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());

    auto basis = detail::prune_redundant(std::move(raw), n, opts.degree_cap);

    for (const auto& mv : basis) {
        for (const auto& col : a.columns) {
            long long dot = 0;
            for (int idx : col.support) dot += mv.delta[idx];
            if (dot != 0) throw internal_error("computed move not orthogonal to A_B");
        }
    }
    return basis;
}

struct ConnectivityOptions {
    long long node_budget = 1'000'000;  // cap on tables per total and per fiber
};

struct ConnectivityReport {
    bool connected = true;
    long long fibers_checked = 0;
    long long tables_checked = 0;
    // populated when connected == false:
    std::vector<int> failing_table;
    long long failing_fiber_size = 0;
    long long failing_reached = 0;

    explicit operator bool() const { return connected; }
};

// Brute-force Markov-basis oracle: for every table with total 1..n_max,
// enumerate its full fiber { h' >= 0 : A^t h' = A^t h } and check it is
// connected under +/- moves.
inline ConnectivityReport verify_connectivity(const std::vector<Move>& basis,
                                              const SuffStatMatrix& a, int n_max,
                                              const ConnectivityOptions& opts = {}) {
    const int n = a.shape.cell_count();
    if (n > 16) throw input_error("connectivity oracle supports at most 16 cells");
    if (n_max > 12) throw input_error("connectivity oracle supports totals up to 12");

    ConnectivityReport report;
    for (int total = 1; total <= n_max; ++total) {
        // Group all tables of this total by their sufficient statistic.
        std::unordered_map<std::string, std::vector<std::string>> fibers;
        std::vector<int> h(n, 0);
        long long enumerated = 0;
        auto visit = [&](auto&& self, int cell, int remaining) -> void {
            if (cell == n - 1) {
                h[cell] = remaining;
                if (++enumerated > opts.node_budget)
                    throw resource_limit("fiber enumeration exceeds node budget " +
                                         std::to_string(opts.node_budget));
                std::string key;
                key.reserve(a.columns.size());
                for (const auto& col : a.columns) {
                    int t = 0;
                    for (int idx : col.support) t += h[idx];
                    key.push_back(static_cast<char>(t));
                }
                std::string packed(h.begin(), h.end());
                fibers[key].push_back(std::move(packed));
                h[cell] = 0;
                return;
            }
            for (int v = 0; v <= remaining; ++v) {
                h[cell] = v;
                self(self, cell + 1, remaining - v);
            }
            h[cell] = 0;
        };
        visit(visit, 0, total);

        for (auto& [key, tables] : fibers) {
            ++report.fibers_checked;
            report.tables_checked += static_cast<long long>(tables.size());
            if (static_cast<long long>(tables.size()) > opts.node_budget)
                throw resource_limit("fiber size exceeds node budget " +
                                     std::to_string(opts.node_budget));
            if (tables.size() == 1) continue;
            std::unordered_set<std::string> unseen(tables.begin(), tables.end());
            std::vector<std::string> queue{tables.front()};
            unseen.erase(tables.front());
            long long reached = 1;
            std::string cand(n, '\0');
            while (!queue.empty() && !unseen.empty()) {
                std::string cur = std::move(queue.back());
                queue.pop_back();
                for (const Move& mv : basis) {
                    for (int sign : {1, -1}) {
                        bool ok = true;
                        for (int i = 0; i < n && ok; ++i) {
                            int val = static_cast<unsigned char>(cur[i]) + sign * mv.delta[i];
                            if (val < 0) ok = false;
                            cand[i] = static_cast<char>(val);
                        }
                        if (ok && unseen.erase(cand)) {
                            ++reached;
                            queue.push_back(cand);
                        }
                    }
                }
            }
            if (!unseen.empty()) {
                report.connected = false;
                const std::string& ex = *unseen.begin();
                report.failing_table.assign(ex.begin(), ex.end());
                report.failing_fiber_size = static_cast<long long>(tables.size());
                report.failing_reached = reached;
                return report;
            }
        }
    }
    return report;
}

}  // namespace wim
