#pragma once

// Brute-force reference computations for the tests. Deliberately shares no
// code with the library: plain coordinate vectors, std::set, union-find per
// configuration, and Boost rationals summed configuration by configuration.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "percolab/lattice.hpp"
#include "percolab/polynomial.hpp"

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using Point = std::vector<int>;
using Pair = std::pair<Point, Point>;

inline Q q(long num, long den = 1)
{
    return Q(num) / Q(den);
}

inline Q from_gmp(const percolab::Rational& r)
{
    return Q(boost::multiprecision::cpp_int(r.get_num().get_str())) /
           Q(boost::multiprecision::cpp_int(r.get_den().get_str()));
}

inline percolab::Rational to_gmp(const Q& r)
{
    return percolab::Rational(boost::multiprecision::numerator(r).str() + "/" +
                              boost::multiprecision::denominator(r).str());
}

inline int sup_norm(const Point& x)
{
    int m = 0;
    for (int c : x) {
        m = std::max(m, c < 0 ? -c : c);
    }
    return m;
}

inline std::set<Point> box(int dim, int n)
{
    std::set<Point> out;
    Point x(static_cast<std::size_t>(dim), -n);
    while (true) {
        out.insert(x);
        int i = 0;
        while (i < dim && x[static_cast<std::size_t>(i)] == n) {
            x[static_cast<std::size_t>(i)] = -n;
            ++i;
        }
        if (i == dim) {
            break;
        }
        ++x[static_cast<std::size_t>(i)];
    }
    return out;
}

inline std::vector<Point> neighbours(const Point& x)
{
    std::vector<Point> out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (int s : {-1, 1}) {
            Point y = x;
            y[i] += s;
            out.push_back(y);
        }
    }
    return out;
}

/// Edges with both endpoints in s, each listed once with first < second.
inline std::vector<Pair> edges_inside(const std::set<Point>& s)
{
    std::vector<Pair> out;
    for (const auto& x : s) {
        for (const auto& y : neighbours(x)) {
            if (x < y && s.count(y)) {
                out.emplace_back(x, y);
            }
        }
    }
    return out;
}

/// (inner, outer) pairs of the edge boundary.
inline std::vector<Pair> boundary_pairs(const std::set<Point>& s)
{
    std::vector<Pair> out;
    for (const auto& x : s) {
        for (const auto& y : neighbours(x)) {
            if (!s.count(y)) {
                out.emplace_back(x, y);
            }
        }
    }
    return out;
}

class Components {
public:
    explicit Components(std::size_t n) : parent_(n)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t a)
    {
        while (parent_[a] != a) {
            a = parent_[a] = parent_[parent_[a]];
        }
        return a;
    }
    void join(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

/// Calls f(mask, components, point index) for every configuration of the
/// edges inside s.
template <class F>
void for_each_config(const std::set<Point>& s, F&& f)
{
    const std::vector<Point> pts(s.begin(), s.end());
    auto index = [&](const Point& x) {
        return static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), x) - pts.begin());
    };
    const auto es = edges_inside(s);
    const std::uint64_t total = std::uint64_t{1} << es.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        Components c(pts.size());
        for (std::size_t e = 0; e < es.size(); ++e) {
            if (mask >> e & 1) {
                c.join(index(es[e].first), index(es[e].second));
            }
        }
        f(mask, es.size(), c, index);
    }
}

inline Q weight(std::uint64_t mask, std::size_t m, const Q& p)
{
    Q w = 1;
    for (std::size_t e = 0; e < m; ++e) {
        w *= (mask >> e & 1) ? p : Q(1) - p;
    }
    return w;
}

/// P_p[0 <-> x inside s].
inline Q connect(const std::set<Point>& s, const Point& x, const Q& p)
{
    const Point origin(x.size(), 0);
    Q total = 0;
    for_each_config(s, [&](std::uint64_t mask, std::size_t m, Components& c, auto&& index) {
        if (c.find(index(origin)) == c.find(index(x))) {
            total += weight(mask, m, p);
        }
    });
    return total;
}

/// phi_p(s) summed edge by edge.
inline Q phi(const std::set<Point>& s, const Q& p)
{
    Q total = 0;
    for (const auto& [inner, outer] : boundary_pairs(s)) {
        total += connect(s, inner, p);
    }
    return p * total;
}

/// P_p[0 <-> boundary of the box of radius n], enumerating the box's edges.
inline Q reach(int dim, int n, const Q& p)
{
    const auto b = box(dim, n);
    const Point origin(static_cast<std::size_t>(dim), 0);
    if (n == 0) {
        return 1;
    }
    Q total = 0;
    for_each_config(b, [&](std::uint64_t mask, std::size_t m, Components& c, auto&& index) {
        const std::size_t root = c.find(index(origin));
        for (const auto& x : b) {
            if (sup_norm(x) == n && c.find(index(x)) == root) {
                total += weight(mask, m, p);
                return;
            }
        }
    });
    return total;
}

/// Horner evaluation of a library polynomial in Boost arithmetic.
inline Q eval(const percolab::RationalPolynomial& poly, const Q& p)
{
    Q acc = 0;
    const auto& c = poly.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * p + from_gmp(*it);
    }
    return acc;
}

/// sum_k counts[k] p^k (1-p)^(m-k).
inline Q from_counts(const std::vector<std::uint64_t>& counts, const Q& p)
{
    const std::size_t m = counts.size() - 1;
    Q total = 0;
    for (std::size_t k = 0; k <= m; ++k) {
        if (counts[k] == 0) {
            continue;
        }
        Q term = Q(counts[k]);
        for (std::size_t j = 0; j < k; ++j) {
            term *= p;
        }
        for (std::size_t j = k; j < m; ++j) {
            term *= Q(1) - p;
        }
        total += term;
    }
    return total;
}

inline std::size_t popcount(std::uint64_t mask)
{
    std::size_t c = 0;
    for (; mask; mask &= mask - 1) {
        ++c;
    }
    return c;
}

/// phi_p(s) from one pass: per configuration, the number of boundary pairs
/// whose inner end is joined to the origin.
inline Q phi_fast(const std::set<Point>& s, const Q& p)
{
    const auto pairs = boundary_pairs(s);
    const Point origin(s.begin()->size(), 0);
    std::vector<std::uint64_t> counts(edges_inside(s).size() + 1, 0);
    for_each_config(s, [&](std::uint64_t mask, std::size_t, Components& c, auto&& index) {
        const std::size_t root = c.find(index(origin));
        for (const auto& pr : pairs) {
            if (c.find(index(pr.first)) == root) {
                ++counts[popcount(mask)];
            }
        }
    });
    return p * from_counts(counts, p);
}

/// Sum over edges e of the box of P_p[e is pivotal for 0 <-> boundary],
/// found by toggling e in every configuration.
inline Q pivotal_sum(int dim, int n, const Q& p)
{
    const auto b = box(dim, n);
    const std::vector<Point> pts(b.begin(), b.end());
    auto index = [&](const Point& x) {
        return static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), x) - pts.begin());
    };
    const auto es = edges_inside(b);
    const Point origin(static_cast<std::size_t>(dim), 0);
    auto reaches = [&](std::uint64_t mask) {
        Components c(pts.size());
        for (std::size_t e = 0; e < es.size(); ++e) {
            if (mask >> e & 1) {
                c.join(index(es[e].first), index(es[e].second));
            }
        }
        const std::size_t root = c.find(index(origin));
        for (const auto& x : pts) {
            if (sup_norm(x) == n && c.find(index(x)) == root) {
                return true;
            }
        }
        return false;
    };
    std::vector<std::uint64_t> counts(es.size() + 1, 0);
    const std::uint64_t total = std::uint64_t{1} << es.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (std::size_t e = 0; e < es.size(); ++e) {
            const std::uint64_t bit = std::uint64_t{1} << e;
            if (reaches(mask | bit) != reaches(mask & ~bit)) {
                ++counts[popcount(mask)];
            }
        }
    }
    return from_counts(counts, p);
}

/// Minimum of phi_p over all subsets of the box containing the origin.
inline Q inf_phi(int dim, int n, const Q& p)
{
    const auto b = box(dim, n);
    std::vector<Point> others;
    const Point origin(static_cast<std::size_t>(dim), 0);
    for (const auto& x : b) {
        if (x != origin) {
            others.push_back(x);
        }
    }
    Q best = -1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << others.size()); ++mask) {
        std::set<Point> s{origin};
        for (std::size_t i = 0; i < others.size(); ++i) {
            if (mask >> i & 1) {
                s.insert(others[i]);
            }
        }
        const Q v = phi_fast(s, p);
        if (best < 0 || v < best) {
            best = v;
        }
    }
    return best;
}

inline std::set<Point> unit_square()
{
    return {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
}

inline percolab::VertexSet to_library(const std::set<Point>& s)
{
    std::vector<percolab::Vertex> vs;
    for (const auto& x : s) {
        vs.emplace_back(std::vector<percolab::Coord>(x.begin(), x.end()));
    }
    return percolab::VertexSet(static_cast<int>(s.begin()->size()), std::move(vs));
}

}  // namespace oracle
