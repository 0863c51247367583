#include "percolab/exact.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>

#include "percolab/errors.hpp"

namespace percolab {

namespace {

using Mask = std::uint64_t;

constexpr Mask bit(int i) { return Mask{1} << i; }

std::string count_label(std::uint64_t value)
{
    if (std::has_single_bit(value)) {
        return "2^" + std::to_string(std::countr_zero(value));
    }
    return std::to_string(value);
}

void require_configs(std::size_t edges, const EnumerationBudget& budget)
{
    const std::string need = "2^" + std::to_string(edges) + " configurations";
    if (edges > static_cast<std::size_t>(kMaxEnumerableEdges)) {
        throw BudgetExceeded("exact enumeration over " + std::to_string(edges) + " edges needs " + need +
                             ", beyond the engine limit of 2^" + std::to_string(kMaxEnumerableEdges));
    }
    if ((Mask{1} << edges) > budget.max_configs) {
        throw BudgetExceeded("exact enumeration over " + std::to_string(edges) + " edges needs " + need +
                             " but the budget allows " + count_label(budget.max_configs) +
                             "; raise --max-configs to 2^" + std::to_string(edges));
    }
}

void require_subsets(std::size_t vertices, const EnumerationBudget& budget)
{
    // subsets containing the origin
    const std::size_t free = vertices - 1;
    if (free >= 63 || (Mask{1} << free) > budget.max_subsets) {
        throw BudgetExceeded("subset enumeration needs 2^" + std::to_string(free) +
                             " subsets but the budget allows " + count_label(budget.max_subsets) +
                             "; raise --max-subsets to 2^" + std::to_string(free));
    }
}

/// A vertex set with local indices, ready for bit-parallel flood fills.
struct Region {
    const VertexSet* set = nullptr;
    int origin = 0;
    std::vector<std::pair<int, int>> edges;
    /// adjacency through internal edges, all edges open
    std::vector<Mask> full_adjacency;

    std::size_t vertex_count() const { return full_adjacency.size(); }
    Mask all() const { return vertex_count() == 64 ? ~Mask{0} : bit(static_cast<int>(vertex_count())) - 1; }
    int index(const Vertex& v) const { return static_cast<int>(set->index_of(v)); }
};

Region make_region(const VertexSet& s)
{
    if (s.size() > static_cast<std::size_t>(kMaxRegionVertices)) {
        throw BudgetExceeded("exact enumeration supports at most " + std::to_string(kMaxRegionVertices) +
                             " vertices, got " + std::to_string(s.size()));
    }
    Region r;
    r.set = &s;
    r.origin = r.index(Vertex::origin(s.dim()));
    r.full_adjacency.assign(s.size(), 0);
    for (const auto& e : s.internal_edges()) {
        int a = r.index(e.lower());
        int b = r.index(e.upper());
        r.edges.emplace_back(a, b);
        r.full_adjacency[a] |= bit(b);
        r.full_adjacency[b] |= bit(a);
    }
    return r;
}

/// Scratch for one configuration: per-vertex adjacency through open edges.
class Config {
public:
    explicit Config(const Region& r) : region_(&r), adjacency_(r.vertex_count()) {}

    void load(Mask open)
    {
        std::fill(adjacency_.begin(), adjacency_.end(), 0);
        while (open) {
            int e = std::countr_zero(open);
            open &= open - 1;
            auto [a, b] = region_->edges[static_cast<std::size_t>(e)];
            adjacency_[a] |= bit(b);
            adjacency_[b] |= bit(a);
        }
    }

    /// Vertices reachable from `seeds` through open edges, staying in `allowed`.
    Mask flood(Mask seeds, Mask allowed) const
    {
        Mask seen = seeds & allowed;
        Mask frontier = seen;
        while (frontier) {
            Mask next = 0;
            while (frontier) {
                int v = std::countr_zero(frontier);
                frontier &= frontier - 1;
                next |= adjacency_[v];
            }
            next &= allowed & ~seen;
            seen |= next;
            frontier = next;
        }
        return seen;
    }

private:
    const Region* region_;
    std::vector<Mask> adjacency_;
};

/// Runs visit(mask, config, acc) over every configuration of the region's
/// edges. acc is a zeroed counter vector of the given size; shard results are
/// summed in shard order.
template <class Visit>
std::vector<std::uint64_t> accumulate_configs(const Region& r, std::size_t acc_size, Visit visit)
{
    const Mask total = Mask{1} << r.edges.size();
    unsigned shards = 1;
    if (total >= (Mask{1} << 16)) {
        shards = std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
    }
    std::vector<std::vector<std::uint64_t>> partial(shards, std::vector<std::uint64_t>(acc_size, 0));
    auto run = [&](unsigned shard) {
        Config config(r);
        const Mask begin = total / shards * shard;
        const Mask end = shard + 1 == shards ? total : total / shards * (shard + 1);
        auto& acc = partial[shard];
        for (Mask mask = begin; mask < end; ++mask) {
            visit(mask, config, acc);
        }
    };
    if (shards == 1) {
        run(0);
    } else {
        std::vector<std::thread> workers;
        for (unsigned s = 0; s < shards; ++s) {
            workers.emplace_back(run, s);
        }
        for (auto& w : workers) {
            w.join();
        }
    }
    std::vector<std::uint64_t> out(acc_size, 0);
    for (const auto& part : partial) {
        for (std::size_t i = 0; i < acc_size; ++i) {
            out[i] += part[i];
        }
    }
    return out;
}

RationalPolynomial counts_to_poly(std::span<const std::uint64_t> counts)
{
    static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
    std::vector<Integer> big;
    big.reserve(counts.size());
    for (auto c : counts) {
        big.emplace_back(static_cast<unsigned long>(c));
    }
    return RationalPolynomial::from_config_counts(big);
}

/// Evaluates sum_k counts[k] p^k (1-p)^(m-k) at a rational p.
class ConfigWeights {
public:
    ConfigWeights(const Rational& p, std::size_t edges) : weights_(edges + 1)
    {
        const Rational q = 1 - p;
        for (std::size_t k = 0; k <= edges; ++k) {
            weights_[k] = pow(p, static_cast<unsigned>(k)) * pow(q, static_cast<unsigned>(edges - k));
        }
    }

    Rational operator()(std::span<const std::uint64_t> counts) const
    {
        Rational acc = 0;
        for (std::size_t k = 0; k < weights_.size(); ++k) {
            if (counts[k] != 0) {
                acc += weights_[k] * static_cast<unsigned long>(counts[k]);
            }
        }
        return acc;
    }

private:
    std::vector<Rational> weights_;
};

Mask box_boundary_mask(const Box& box, const Region& r)
{
    Mask m = 0;
    for (const auto& v : box.boundary_vertices()) {
        m |= bit(r.index(v));
    }
    return m;
}

void check_unit_interval(const Rational& p)
{
    if (p < 0 || p > 1) {
        throw ConfigError("p must lie in [0,1], got " + fraction_string(p));
    }
}

}  // namespace

RationalPolynomial connect_poly(const VertexSet& s, const Vertex& x, const EnumerationBudget& budget)
{
    if (!s.contains(x)) {
        throw ConfigError("target vertex " + to_string(x) + " is not in the set");
    }
    if (x.is_origin()) {
        return RationalPolynomial::constant(1);
    }
    require_configs(s.internal_edges().size(), budget);
    const Region r = make_region(s);
    const std::size_t m = r.edges.size();
    const Mask target = bit(r.index(x));
    auto counts = accumulate_configs(r, m + 1, [&](Mask mask, Config& c, std::vector<std::uint64_t>& acc) {
        c.load(mask);
        if (c.flood(bit(r.origin), r.all()) & target) {
            ++acc[static_cast<std::size_t>(std::popcount(mask))];
        }
    });
    return counts_to_poly(counts);
}

RationalPolynomial reach_poly(int dim, int n, const EnumerationBudget& budget)
{
    const Box box = make_box(dim, n);
    require_configs(box.set().internal_edges().size(), budget);
    const Region r = make_region(box.set());
    const std::size_t m = r.edges.size();
    const Mask target = box_boundary_mask(box, r);
    auto counts = accumulate_configs(r, m + 1, [&](Mask mask, Config& c, std::vector<std::uint64_t>& acc) {
        c.load(mask);
        if (c.flood(bit(r.origin), r.all()) & target) {
            ++acc[static_cast<std::size_t>(std::popcount(mask))];
        }
    });
    return counts_to_poly(counts);
}

RationalPolynomial phi_exact(const VertexSet& s, const EnumerationBudget& budget)
{
    require_configs(s.internal_edges().size(), budget);
    const Region r = make_region(s);
    const std::size_t m = r.edges.size();
    std::vector<std::uint64_t> out_degree(s.size(), 0);
    for (const auto& be : s.boundary_edges()) {
        ++out_degree[static_cast<std::size_t>(r.index(be.inner))];
    }
    auto counts = accumulate_configs(r, m + 1, [&](Mask mask, Config& c, std::vector<std::uint64_t>& acc) {
        c.load(mask);
        Mask cluster = c.flood(bit(r.origin), r.all());
        std::uint64_t total = 0;
        while (cluster) {
            total += out_degree[static_cast<std::size_t>(std::countr_zero(cluster))];
            cluster &= cluster - 1;
        }
        acc[static_cast<std::size_t>(std::popcount(mask))] += total;
    });
    return counts_to_poly(counts) * RationalPolynomial::monomial(1, 1);
}

namespace {

/// counts[e * (m+1) + k]: configurations with k open edges in which edge e
/// is pivotal. Only edges flagged in `which` are evaluated.
std::vector<std::uint64_t> pivotal_counts(const Box& box, const Region& r, const std::vector<bool>& which)
{
    const std::size_t m = r.edges.size();
    const Mask target = box_boundary_mask(box, r);
    return accumulate_configs(r, m * (m + 1), [&](Mask mask, Config& c, std::vector<std::uint64_t>& acc) {
        const auto k = static_cast<std::size_t>(std::popcount(mask));
        for (std::size_t e = 0; e < m; ++e) {
            if (!which[e]) {
                continue;
            }
            c.load(mask | bit(static_cast<int>(e)));
            if (!(c.flood(bit(r.origin), r.all()) & target)) {
                continue;
            }
            c.load(mask & ~bit(static_cast<int>(e)));
            if (c.flood(bit(r.origin), r.all()) & target) {
                continue;
            }
            ++acc[e * (m + 1) + k];
        }
    });
}

}  // namespace

RationalPolynomial pivotal_poly(int dim, int n, const Edge& e, const EnumerationBudget& budget)
{
    const Box box = make_box(dim, n);
    const auto& edges = box.set().internal_edges();
    auto it = std::find(edges.begin(), edges.end(), e);
    if (it == edges.end()) {
        throw ConfigError("edge " + to_string(e) + " is not internal to the box of radius " + std::to_string(n));
    }
    require_configs(edges.size(), budget);
    const Region r = make_region(box.set());
    const auto index = static_cast<std::size_t>(it - edges.begin());
    std::vector<bool> which(edges.size(), false);
    which[index] = true;
    auto counts = pivotal_counts(box, r, which);
    const std::size_t m = edges.size();
    return counts_to_poly(std::span(counts).subspan(index * (m + 1), m + 1));
}

PivotalReport pivotal_report(int dim, int n, const EnumerationBudget& budget)
{
    const Box box = make_box(dim, n);
    require_configs(box.set().internal_edges().size(), budget);
    const Region r = make_region(box.set());
    const std::size_t m = r.edges.size();
    auto counts = pivotal_counts(box, r, std::vector<bool>(m, true));
    PivotalReport report;
    report.edges = box.set().internal_edges();
    for (std::size_t e = 0; e < m; ++e) {
        report.per_edge.push_back(counts_to_poly(std::span(counts).subspan(e * (m + 1), m + 1)));
        report.total += report.per_edge.back();
    }
    return report;
}

RationalPolynomial russo_residual(int dim, int n, const EnumerationBudget& budget)
{
    const RationalPolynomial reach = reach_poly(dim, n, budget);
    const PivotalReport pivotal = pivotal_report(dim, n, budget);
    return reach.derivative() - pivotal.total;
}

bool BlockingDecomposition::factorization_holds() const
{
    return std::all_of(rows.begin(), rows.end(), [](const BlockingRow& row) { return row.factorizes; });
}

std::vector<BlockingDecomposition> blocking_decomposition(int dim, int n, std::span<const Rational> ps,
                                                          const EnumerationBudget& budget)
{
    for (const auto& p : ps) {
        check_unit_interval(p);
    }
    const Box box = make_box(dim, n);
    const VertexSet& lambda = box.set();
    require_subsets(lambda.size(), budget);
    require_configs(lambda.internal_edges().size(), budget);
    const Region r = make_region(lambda);
    const std::size_t m = r.edges.size();
    const std::size_t nv = r.vertex_count();
    const std::size_t stride = m + 1;
    const Mask target = box_boundary_mask(box, r);

    // Single pass collecting, per blocking set S that contains the origin,
    // the configuration counts of {B = S} and of {0 <-> v inside S, B = S}
    // for every v. Sharding is not used here: the table is keyed by S.
    struct Cell {
        std::vector<std::uint64_t> probability;
        std::vector<std::uint64_t> joint;  // joint[v * stride + k]
    };
    std::unordered_map<Mask, Cell> cells;
    std::vector<std::uint64_t> reach_counts(stride, 0);
    {
        Config c(r);
        const Mask total = Mask{1} << m;
        for (Mask mask = 0; mask < total; ++mask) {
            c.load(mask);
            const auto k = static_cast<std::size_t>(std::popcount(mask));
            const Mask blocking = r.all() & ~c.flood(target, r.all());
            if (!(blocking & bit(r.origin))) {
                ++reach_counts[k];
                continue;
            }
            auto [it, fresh] = cells.try_emplace(blocking);
            if (fresh) {
                it->second.probability.assign(stride, 0);
                it->second.joint.assign(nv * stride, 0);
            }
            ++it->second.probability[k];
            Mask cluster = c.flood(bit(r.origin), blocking);
            while (cluster) {
                auto v = static_cast<std::size_t>(std::countr_zero(cluster));
                cluster &= cluster - 1;
                ++it->second.joint[v * stride + k];
            }
        }
    }

    // Connection polynomials inside each realised blocking set.
    struct Realised {
        VertexSet set;
        std::vector<std::pair<std::size_t, RationalPolynomial>> connect;  // (region index, poly)
        std::vector<std::size_t> edge_counts;                             // boundary edges at that vertex
    };
    std::unordered_map<Mask, Realised> realised;
    for (const auto& [mask, cell] : cells) {
        std::vector<Vertex> members;
        for (std::size_t v = 0; v < nv; ++v) {
            if (mask & bit(static_cast<int>(v))) {
                members.push_back(lambda.vertices()[v]);
            }
        }
        VertexSet set(dim, std::move(members));
        Realised info{set, {}, {}};
        std::vector<std::size_t> per_vertex(nv, 0);
        for (const auto& be : set.boundary_edges()) {
            ++per_vertex[static_cast<std::size_t>(r.index(be.inner))];
        }
        for (std::size_t v = 0; v < nv; ++v) {
            if (per_vertex[v] != 0) {
                info.connect.emplace_back(v, connect_poly(set, lambda.vertices()[v], budget));
                info.edge_counts.push_back(per_vertex[v]);
            }
        }
        realised.emplace(mask, std::move(info));
    }

    const RationalPolynomial reach = counts_to_poly(reach_counts);
    const RationalPolynomial reach_derivative = reach.derivative();
    const Mask origin_bit = bit(r.origin);
    const std::size_t free_count = nv - 1;

    std::vector<BlockingDecomposition> out;
    for (const auto& p : ps) {
        const ConfigWeights weigh(p, m);
        BlockingDecomposition result;
        result.p = p;
        result.expected = (1 - p) * reach_derivative(p);
        result.non_reach = 1 - reach(p);
        result.reassembled = 0;
        result.blocking_mass = 0;
        for (Mask sub = 0; sub < (Mask{1} << free_count); ++sub) {
            // spread the free bits around the origin bit
            const Mask low = sub & (origin_bit - 1);
            const Mask high = (sub & ~(origin_bit - 1)) << 1;
            const Mask subset = low | high | origin_bit;
            auto it = cells.find(subset);
            if (it == cells.end()) {
                std::vector<Vertex> members;
                for (std::size_t v = 0; v < nv; ++v) {
                    if (subset & bit(static_cast<int>(v))) {
                        members.push_back(lambda.vertices()[v]);
                    }
                }
                result.rows.push_back(BlockingRow{VertexSet(dim, std::move(members)), 0, 0, 0, true});
                continue;
            }
            const Cell& cell = it->second;
            const Realised& info = realised.at(subset);
            BlockingRow row{info.set, weigh(cell.probability), 0, 0, true};
            for (std::size_t i = 0; i < info.connect.size(); ++i) {
                const auto& [v, poly] = info.connect[i];
                const Rational joint = weigh(std::span(cell.joint).subspan(v * stride, stride));
                const Rational product = poly(p) * row.probability;
                const auto edges = static_cast<unsigned long>(info.edge_counts[i]);
                row.pivotal_mass += joint * edges;
                row.factorized_mass += product * edges;
                row.factorizes = row.factorizes && joint == product;
            }
            result.reassembled += row.pivotal_mass;
            result.blocking_mass += row.probability;
            result.rows.push_back(std::move(row));
        }
        out.push_back(std::move(result));
    }
    return out;
}

BlockingDecomposition blocking_decomposition(int dim, int n, const Rational& p, const EnumerationBudget& budget)
{
    return std::move(blocking_decomposition(dim, n, std::span(&p, 1), budget).front());
}

std::vector<LemmaCheck> lemma_check(int dim, int n, std::span<const Rational> ps, const EnumerationBudget& budget)
{
    if (n < 1) {
        throw ConfigError("the differential inequality is stated for n >= 1");
    }
    for (const auto& p : ps) {
        if (p <= 0 || p >= 1) {
            throw ConfigError("lemma check needs p strictly inside (0,1), got " + fraction_string(p));
        }
    }
    const Box box = make_box(dim, n);
    const VertexSet& lambda = box.set();
    require_subsets(lambda.size(), budget);
    const RationalPolynomial reach = reach_poly(dim, n, budget);
    const RationalPolynomial reach_derivative = reach.derivative();

    const std::size_t nv = lambda.size();
    const auto origin = static_cast<std::size_t>(lambda.index_of(Vertex::origin(dim)));
    std::vector<VertexSet> subsets;
    std::vector<RationalPolynomial> phis;
    for (Mask sub = 0; sub < (Mask{1} << (nv - 1)); ++sub) {
        std::vector<Vertex> members{lambda.vertices()[origin]};
        for (std::size_t i = 0, v = 0; v < nv; ++v) {
            if (v == origin) {
                continue;
            }
            if (sub & bit(static_cast<int>(i))) {
                members.push_back(lambda.vertices()[v]);
            }
            ++i;
        }
        subsets.emplace_back(dim, std::move(members));
        phis.push_back(phi_exact(subsets.back(), budget));
    }

    std::vector<LemmaCheck> out;
    for (const auto& p : ps) {
        std::size_t best = 0;
        Rational inf = phis[0](p);
        for (std::size_t i = 1; i < phis.size(); ++i) {
            Rational v = phis[i](p);
            if (v < inf) {
                inf = v;
                best = i;
            }
        }
        Rational lhs = reach_derivative(p);
        Rational rhs = inf * (1 - reach(p)) / (p * (1 - p));
        out.push_back(LemmaCheck{p, lhs, rhs, inf, subsets[best]});
    }
    return out;
}

LemmaCheck lemma_check(int dim, int n, const Rational& p, const EnumerationBudget& budget)
{
    return std::move(lemma_check(dim, n, std::span(&p, 1), budget).front());
}

}  // namespace percolab
