#pragma once

// Geometry of the hypercubic lattice Z^d: vertices, nearest-neighbour edges,
// boxes {-n..n}^d and finite vertex sets with their edge boundaries.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace percolab {

using Coord = std::int32_t;

/// Largest box radius accepted; keeps every coordinate and index computation
/// far away from integer overflow.
inline constexpr int kMaxRadius = 1 << 20;

struct Vertex {
    std::vector<Coord> coords;

    Vertex() = default;
    explicit Vertex(std::vector<Coord> c) : coords(std::move(c)) {}

    static Vertex origin(int dim) { return Vertex(std::vector<Coord>(static_cast<std::size_t>(dim), 0)); }

    int dim() const { return static_cast<int>(coords.size()); }
    bool is_origin() const;
    /// max_i |x_i|, i.e. the smallest n with x in the box of radius n.
    Coord sup_norm() const;
    Vertex shifted(int axis, int step) const;

    auto operator<=>(const Vertex&) const = default;
    bool operator==(const Vertex&) const = default;
};

std::string to_string(const Vertex& v);

struct VertexHash {
    std::size_t operator()(const Vertex& v) const noexcept;
};

/// Nearest-neighbour edge, endpoints stored with lower < upper lexicographically.
class Edge {
public:
    Edge(Vertex a, Vertex b);

    const Vertex& lower() const { return lower_; }
    const Vertex& upper() const { return upper_; }
    /// Coordinate in which the endpoints differ.
    int axis() const { return axis_; }
    bool has_endpoint(const Vertex& v) const { return v == lower_ || v == upper_; }

    auto operator<=>(const Edge& o) const
    {
        if (auto c = lower_ <=> o.lower_; c != 0) {
            return c;
        }
        return upper_ <=> o.upper_;
    }
    bool operator==(const Edge& o) const { return lower_ == o.lower_ && upper_ == o.upper_; }

private:
    Vertex lower_;
    Vertex upper_;
    int axis_ = 0;
};

std::string to_string(const Edge& e);

/// Platform-stable 64-bit code of an edge, built from the lower endpoint's
/// coordinates and the axis. Used to key per-edge random variates.
std::uint64_t edge_code(const Vertex& lower, int axis);
inline std::uint64_t edge_code(const Edge& e) { return edge_code(e.lower(), e.axis()); }

/// An edge {x,y} of the edge boundary together with its endpoint x inside the set.
struct BoundaryEdge {
    Edge edge;
    Vertex inner;

    auto operator<=>(const BoundaryEdge& o) const { return edge <=> o.edge; }
    bool operator==(const BoundaryEdge& o) const { return edge == o.edge; }
};

/// A finite set of lattice vertices containing the origin.
///
/// Immutable once built. Iteration order is lexicographic; the internal and
/// boundary edge lists are computed at construction and sorted canonically.
class VertexSet {
public:
    /// Duplicates are merged. Throws ConfigError when the vertices disagree
    /// on dimension, dim < 1, or the origin is missing.
    VertexSet(int dim, std::vector<Vertex> vertices);

    int dim() const { return dim_; }
    std::size_t size() const { return vertices_.size(); }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    bool contains(const Vertex& v) const { return members_.contains(v); }
    /// Position of v in vertices(), or -1.
    std::ptrdiff_t index_of(const Vertex& v) const;

    const std::vector<Edge>& internal_edges() const { return internal_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }
    /// Smallest n with the set inside the box of radius n.
    Coord radius() const;

    bool operator==(const VertexSet& o) const { return dim_ == o.dim_ && vertices_ == o.vertices_; }

private:
    int dim_;
    std::vector<Vertex> vertices_;
    std::unordered_set<Vertex, VertexHash> members_;
    std::vector<Edge> internal_;
    std::vector<BoundaryEdge> boundary_;
};

/// The box {-n..n}^d.
class Box {
public:
    Box(int dim, int radius, VertexSet set) : dim_(dim), radius_(radius), set_(std::move(set)) {}

    int dim() const { return dim_; }
    int radius() const { return radius_; }
    const VertexSet& set() const { return set_; }
    bool contains(const Vertex& v) const { return v.dim() == dim_ && v.sup_norm() <= radius_; }
    bool on_boundary(const Vertex& v) const { return v.dim() == dim_ && v.sup_norm() == radius_; }
    /// The vertex boundary: vertices with sup-norm exactly n, lexicographic order.
    std::vector<Vertex> boundary_vertices() const;

private:
    int dim_;
    int radius_;
    VertexSet set_;
};

/// Builds {-n..n}^d. Rejects dim < 1, n < 0, and boxes too large to index.
Box make_box(int dim, int radius);

std::vector<BoundaryEdge> edge_boundary(const VertexSet& s);
std::vector<Edge> internal_edges(const VertexSet& s);

/// Parses the vertex-set text format: one vertex per line, whitespace
/// separated integer coordinates, '#' starts a comment. The origin must be
/// present and every line must have the same number of coordinates.
VertexSet parse_vertex_set(std::string_view text);
VertexSet read_vertex_set_file(const std::string& path);
std::string format_vertex_set(const VertexSet& s);

}  // namespace percolab
