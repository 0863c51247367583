#include "percolab/estimator.hpp"

#include <algorithm>
#include <thread>

#include "percolab/errors.hpp"

namespace percolab {

namespace {

void validate(const SampleSpec& spec)
{
    if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
        throw ConfigError("p must lie in [0,1]");
    }
    if (spec.trials == 0) {
        throw ConfigError("trials must be positive");
    }
    if (spec.workers == 0) {
        throw ConfigError("workers must be positive");
    }
}

/// Splits [0, trials) into contiguous chunks, runs body(begin, end) for each
/// and sums the results in chunk order. Acc must hold integers only so the
/// total does not depend on the split.
template <class Acc, class Body>
Acc reduce_trials(const SampleSpec& spec, Body body)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(spec.workers, spec.trials));
    std::vector<Acc> partial(workers);
    auto chunk = [&](unsigned w) {
        const std::uint64_t begin = spec.trials * w / workers;
        const std::uint64_t end = spec.trials * (w + 1) / workers;
        partial[w] = body(begin, end);
    };
    if (workers == 1) {
        chunk(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) {
            threads.emplace_back(chunk, w);
        }
        for (auto& t : threads) {
            t.join();
        }
    }
    Acc total{};
    for (const auto& part : partial) {
        total += part;
    }
    return total;
}

struct Count {
    std::uint64_t value = 0;
    Count& operator+=(const Count& o)
    {
        value += o.value;
        return *this;
    }
};

struct Moments {
    std::uint64_t sum = 0;
    std::uint64_t sum_squares = 0;
    Moments& operator+=(const Moments& o)
    {
        sum += o.sum;
        sum_squares += o.sum_squares;
        return *this;
    }
};

/// Flat-indexed box {-n..n}^d with per-edge codes, shared read-only by all
/// trials. Index order is lexicographic in the coordinates.
class BoxGeometry {
public:
    BoxGeometry(int dim, int n) : dim_(dim), n_(n)
    {
        if (dim < 1) {
            throw ConfigError("dimension must be at least 1");
        }
        if (n < 1) {
            throw ConfigError("exploration radius must be at least 1");
        }
        if (n > kMaxRadius) {
            throw ConfigError("exploration radius exceeds the supported maximum");
        }
        const auto side = static_cast<std::uint64_t>(2 * n + 1);
        stride_.assign(static_cast<std::size_t>(dim), 1);
        std::uint64_t count = 1;
        for (int axis = dim - 1; axis >= 0; --axis) {
            stride_[axis] = count;
            if (count > (std::uint64_t{1} << 31) / side) {
                throw ConfigError("box too large for Monte Carlo exploration");
            }
            count *= side;
        }
        boundary_.assign(count, 0);
        codes_.assign(count * static_cast<std::size_t>(dim), 0);
        Vertex v(std::vector<Coord>(static_cast<std::size_t>(dim), -n));
        for (std::uint64_t i = 0; i < count; ++i) {
            boundary_[i] = v.sup_norm() == n ? 1 : 0;
            for (int axis = 0; axis < dim; ++axis) {
                if (v.coords[axis] < n) {
                    codes_[i * dim + axis] = edge_code(v, axis);
                }
            }
            for (int axis = dim - 1; axis >= 0; --axis) {
                if (++v.coords[axis] <= n) {
                    break;
                }
                v.coords[axis] = -n;
            }
        }
        origin_ = static_cast<std::uint32_t>((count - 1) / 2);
    }

    int dim() const { return dim_; }
    std::size_t size() const { return boundary_.size(); }
    std::uint32_t origin() const { return origin_; }
    bool on_boundary(std::uint32_t v) const { return boundary_[v] != 0; }
    std::uint64_t stride(int axis) const { return stride_[axis]; }
    /// Code of the edge from v towards +axis.
    std::uint64_t up_code(std::uint32_t v, int axis) const { return codes_[static_cast<std::size_t>(v) * dim_ + axis]; }

    Vertex vertex(std::uint32_t index) const
    {
        std::vector<Coord> c(static_cast<std::size_t>(dim_));
        std::uint64_t rest = index;
        for (int axis = 0; axis < dim_; ++axis) {
            c[axis] = static_cast<Coord>(rest / stride_[axis]) - n_;
            rest %= stride_[axis];
        }
        return Vertex(std::move(c));
    }

private:
    int dim_;
    int n_;
    std::uint32_t origin_ = 0;
    std::vector<std::uint64_t> stride_;
    std::vector<std::uint8_t> boundary_;
    std::vector<std::uint64_t> codes_;
};

/// Per-thread scratch for box explorations; `visited` uses epoch stamps so
/// it never needs clearing between trials.
class BoxExplorer {
public:
    explicit BoxExplorer(const BoxGeometry& g) : geometry_(&g), stamp_(g.size(), 0) {}

    template <class OnEdge>
    bool run(double p, const TrialStream& stream, OnEdge on_edge)
    {
        const BoxGeometry& g = *geometry_;
        next_epoch();
        queue_.clear();
        queue_.push_back(g.origin());
        stamp_[g.origin()] = epoch_;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const std::uint32_t v = queue_[head];
            for (int axis = 0; axis < g.dim(); ++axis) {
                const auto stride = static_cast<std::uint32_t>(g.stride(axis));
                for (int dir = 0; dir < 2; ++dir) {
                    // expanded vertices are interior, so both neighbours exist
                    const std::uint32_t w = dir == 0 ? v - stride : v + stride;
                    if (stamp_[w] == epoch_) {
                        continue;
                    }
                    const std::uint64_t code = dir == 0 ? g.up_code(w, axis) : g.up_code(v, axis);
                    const bool open = stream.open(code, p);
                    on_edge(code, open);
                    if (!open) {
                        continue;
                    }
                    stamp_[w] = epoch_;
                    queue_.push_back(w);
                    if (g.on_boundary(w)) {
                        return true;
                    }
                }
            }
        }
        return false;
    }

    const std::vector<std::uint32_t>& discovered() const { return queue_; }

private:
    void next_epoch()
    {
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
    }

    const BoxGeometry* geometry_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<std::uint32_t> queue_;
};

/// A finite vertex set with index adjacency, for exploration restricted to
/// its internal edges.
class SetGeometry {
public:
    explicit SetGeometry(const VertexSet& s) : neighbours_(s.size()), out_degree_(s.size(), 0)
    {
        for (const auto& e : s.internal_edges()) {
            auto a = static_cast<std::uint32_t>(s.index_of(e.lower()));
            auto b = static_cast<std::uint32_t>(s.index_of(e.upper()));
            const std::uint64_t code = edge_code(e);
            neighbours_[a].push_back({b, code});
            neighbours_[b].push_back({a, code});
        }
        for (const auto& be : s.boundary_edges()) {
            ++out_degree_[static_cast<std::size_t>(s.index_of(be.inner))];
        }
        origin_ = static_cast<std::uint32_t>(s.index_of(Vertex::origin(s.dim())));
    }

    struct Link {
        std::uint32_t to;
        std::uint64_t code;
    };

    std::size_t size() const { return neighbours_.size(); }
    std::uint32_t origin() const { return origin_; }
    const std::vector<Link>& neighbours(std::uint32_t v) const { return neighbours_[v]; }
    std::uint64_t out_degree(std::uint32_t v) const { return out_degree_[v]; }

private:
    std::vector<std::vector<Link>> neighbours_;
    std::vector<std::uint64_t> out_degree_;
    std::uint32_t origin_ = 0;
};

class SetExplorer {
public:
    explicit SetExplorer(const SetGeometry& g) : geometry_(&g), stamp_(g.size(), 0) {}

    /// Explores the origin's cluster; stops early once `target` is found
    /// (pass -1 to explore everything).
    const std::vector<std::uint32_t>& run(double p, const TrialStream& stream, std::int64_t target)
    {
        const SetGeometry& g = *geometry_;
        next_epoch();
        queue_.clear();
        queue_.push_back(g.origin());
        stamp_[g.origin()] = epoch_;
        if (static_cast<std::int64_t>(g.origin()) == target) {
            return queue_;
        }
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            for (const auto& link : g.neighbours(queue_[head])) {
                if (stamp_[link.to] == epoch_ || !stream.open(link.code, p)) {
                    continue;
                }
                stamp_[link.to] = epoch_;
                queue_.push_back(link.to);
                if (static_cast<std::int64_t>(link.to) == target) {
                    return queue_;
                }
            }
        }
        return queue_;
    }

    bool contains(std::uint32_t v) const { return stamp_[v] == epoch_; }

private:
    void next_epoch()
    {
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
    }

    const SetGeometry* geometry_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<std::uint32_t> queue_;
};

}  // namespace

ClusterTrace explore_cluster(int dim, double p, int n, const TrialStream& stream, bool record_edges)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("p must lie in [0,1]");
    }
    const BoxGeometry geometry(dim, n);
    BoxExplorer explorer(geometry);
    ClusterTrace trace;
    trace.reached_boundary = explorer.run(p, stream, [&](std::uint64_t code, bool open) {
        ++trace.edges_revealed;
        if (record_edges) {
            trace.revealed.push_back({code, open});
        }
    });
    for (auto v : explorer.discovered()) {
        trace.cluster.push_back(geometry.vertex(v));
    }
    return trace;
}

BernoulliEstimate estimate_reach(int dim, int n, const SampleSpec& spec)
{
    validate(spec);
    const BoxGeometry geometry(dim, n);
    auto hits = reduce_trials<Count>(spec, [&](std::uint64_t begin, std::uint64_t end) {
        BoxExplorer explorer(geometry);
        Count c;
        for (std::uint64_t t = begin; t < end; ++t) {
            if (explorer.run(spec.p, TrialStream(spec.seed, t), [](std::uint64_t, bool) {})) {
                ++c.value;
            }
        }
        return c;
    });
    return make_bernoulli_estimate(hits.value, spec.trials);
}

BernoulliEstimate estimate_connect(const VertexSet& s, const Vertex& x, const SampleSpec& spec)
{
    validate(spec);
    const std::ptrdiff_t target = s.index_of(x);
    if (target < 0) {
        throw ConfigError("target vertex " + to_string(x) + " is not in the set");
    }
    const SetGeometry geometry(s);
    auto hits = reduce_trials<Count>(spec, [&](std::uint64_t begin, std::uint64_t end) {
        SetExplorer explorer(geometry);
        Count c;
        for (std::uint64_t t = begin; t < end; ++t) {
            explorer.run(spec.p, TrialStream(spec.seed, t), target);
            if (explorer.contains(static_cast<std::uint32_t>(target))) {
                ++c.value;
            }
        }
        return c;
    });
    return make_bernoulli_estimate(hits.value, spec.trials);
}

MeanEstimate estimate_phi(const VertexSet& s, const SampleSpec& spec)
{
    validate(spec);
    const SetGeometry geometry(s);
    auto moments = reduce_trials<Moments>(spec, [&](std::uint64_t begin, std::uint64_t end) {
        SetExplorer explorer(geometry);
        Moments m;
        for (std::uint64_t t = begin; t < end; ++t) {
            std::uint64_t count = 0;
            for (auto v : explorer.run(spec.p, TrialStream(spec.seed, t), -1)) {
                count += geometry.out_degree(v);
            }
            m.sum += count;
            m.sum_squares += count * count;
        }
        return m;
    });
    return make_mean_estimate(static_cast<double>(moments.sum), static_cast<double>(moments.sum_squares),
                              spec.trials, spec.p);
}

}  // namespace percolab
