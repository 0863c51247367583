#pragma once

// Exact enumeration over every open/closed configuration of the edges of a
// small region. All results are exact polynomials in p (or exact rationals
// at a rational p); nothing here touches floating point.
//
// The event {0 <-> boundary of the box of radius n} only depends on edges
// inside the box: an open path starting at the origin has to visit a vertex
// of sup-norm n before it can use an edge leaving the box, and at that point
// the event has already happened. reach_poly and everything built on it
// therefore enumerate the internal edges of the box only.

#include <cstdint>
#include <span>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/polynomial.hpp"

namespace percolab {

/// Caps on exhaustive work. Enumerations that would exceed them throw
/// BudgetExceeded before starting.
struct EnumerationBudget {
    std::uint64_t max_configs = std::uint64_t{1} << 22;
    std::uint64_t max_subsets = std::uint64_t{1} << 20;
};

/// Hard engine limits regardless of budget: 2^36 configurations, 64 vertices.
inline constexpr int kMaxEnumerableEdges = 36;
inline constexpr int kMaxRegionVertices = 64;

/// P_p[0 <-> x using open edges with both endpoints in s]. Throws
/// ConfigError when x is not in s.
RationalPolynomial connect_poly(const VertexSet& s, const Vertex& x, const EnumerationBudget& budget = {});

/// P_p[0 <-> boundary of the box of radius n].
RationalPolynomial reach_poly(int dim, int n, const EnumerationBudget& budget = {});

/// phi_p(s) = p * sum over boundary edges {x,y} of P_p[0 <-> x inside s].
RationalPolynomial phi_exact(const VertexSet& s, const EnumerationBudget& budget = {});

/// Probability that edge e is pivotal for {0 <-> boundary of the box}.
/// e must be an internal edge of the box.
RationalPolynomial pivotal_poly(int dim, int n, const Edge& e, const EnumerationBudget& budget = {});

struct PivotalReport {
    std::vector<Edge> edges;
    std::vector<RationalPolynomial> per_edge;
    RationalPolynomial total;
};

/// Pivotality polynomials for every internal edge of the box. Each edge is
/// evaluated by forcing it open and closed in every configuration of the
/// remaining edges.
PivotalReport pivotal_report(int dim, int n, const EnumerationBudget& budget = {});

/// d/dp reach_poly minus the total pivotality; the zero polynomial when
/// Russo's formula holds.
RationalPolynomial russo_residual(int dim, int n, const EnumerationBudget& budget = {});

struct BlockingRow {
    VertexSet set;
    /// P_p[B = set], B = vertices of the box not connected to its boundary.
    Rational probability;
    /// Sum over boundary edges {x,y} of the set of P_p[0 <-> x inside set, B = set].
    Rational pivotal_mass;
    /// The same sum computed as P_p[0 <-> x inside set] * P_p[B = set].
    Rational factorized_mass;
    /// Per inner vertex x, joint probability == product of the marginals.
    bool factorizes = true;
};

struct BlockingDecomposition {
    Rational p;
    /// One row per subset of the box containing the origin, in order of the
    /// subset bitmask over the box's lexicographic vertex order.
    std::vector<BlockingRow> rows;
    /// Sum of pivotal_mass over rows.
    Rational reassembled;
    /// (1 - p) * d/dp P_p[0 <-> boundary].
    Rational expected;
    /// Sum of row probabilities, and 1 - P_p[0 <-> boundary]; they agree.
    Rational blocking_mass;
    Rational non_reach;

    bool factorization_holds() const;
    bool identity_holds() const { return reassembled == expected && blocking_mass == non_reach; }
};

/// Exact decomposition of the derivative of the reach probability over the
/// values of the blocking set B. Costs one pass over the box configurations;
/// the number of subsets containing the origin is capped by max_subsets.
BlockingDecomposition blocking_decomposition(int dim, int n, const Rational& p,
                                             const EnumerationBudget& budget = {});
std::vector<BlockingDecomposition> blocking_decomposition(int dim, int n, std::span<const Rational> ps,
                                                          const EnumerationBudget& budget = {});

struct LemmaCheck {
    Rational p;
    /// d/dp P_p[0 <-> boundary].
    Rational lhs;
    /// inf_S phi_p(S) * (1 - P_p[0 <-> boundary]) / (p (1 - p)).
    Rational rhs;
    Rational inf_phi;
    VertexSet minimizer;

    bool holds() const { return lhs >= rhs; }
};

/// Both sides of the differential inequality at rational p in (0,1), for a
/// box of radius n >= 1. The infimum runs over all subsets of the box that
/// contain the origin, connected or not.
LemmaCheck lemma_check(int dim, int n, const Rational& p, const EnumerationBudget& budget = {});
std::vector<LemmaCheck> lemma_check(int dim, int n, std::span<const Rational> ps,
                                    const EnumerationBudget& budget = {});

}  // namespace percolab
