#pragma once

// Seeded Monte Carlo estimators built on lazy exploration of the origin's
// open cluster. Every estimate is a pure function of (p, trials, seed);
// `workers` only changes scheduling.

#include <cstdint>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/rng.hpp"
#include "percolab/stats.hpp"

namespace percolab {

struct SampleSpec {
    double p = 0.5;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct RevealedEdge {
    std::uint64_t code = 0;
    bool open = false;
};

struct ClusterTrace {
    /// Discovery order; starts at the origin.
    std::vector<Vertex> cluster;
    bool reached_boundary = false;
    std::uint64_t edges_revealed = 0;
    /// Filled only when requested.
    std::vector<RevealedEdge> revealed;
};

/// Breadth-first exploration of the origin's cluster inside the box of
/// radius n >= 1. Stops as soon as a vertex of sup-norm n is discovered or
/// the frontier empties. Each edge is looked at most once.
ClusterTrace explore_cluster(int dim, double p, int n, const TrialStream& stream, bool record_edges = false);

/// Fraction of trials in which the origin's cluster reaches the boundary of
/// the box of radius n. Trial t uses TrialStream(seed, t).
BernoulliEstimate estimate_reach(int dim, int n, const SampleSpec& spec);

/// Fraction of trials in which 0 and x are joined by open edges inside s.
BernoulliEstimate estimate_connect(const VertexSet& s, const Vertex& x, const SampleSpec& spec);

/// p times the average number of boundary edges of s whose inner endpoint is
/// in the origin's cluster inside s; unbiased for phi_p(s).
MeanEstimate estimate_phi(const VertexSet& s, const SampleSpec& spec);

}  // namespace percolab
