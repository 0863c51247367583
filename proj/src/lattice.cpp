#include "percolab/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "percolab/errors.hpp"
#include "percolab/rng.hpp"

namespace percolab {

namespace {

// Boxes beyond this many vertices are not materialised as a VertexSet.
constexpr std::uint64_t kMaxBoxVertices = std::uint64_t{1} << 26;

}  // namespace

bool Vertex::is_origin() const
{
    return std::all_of(coords.begin(), coords.end(), [](Coord c) { return c == 0; });
}

Coord Vertex::sup_norm() const
{
    Coord m = 0;
    for (Coord c : coords) {
        m = std::max(m, static_cast<Coord>(std::abs(c)));
    }
    return m;
}

Vertex Vertex::shifted(int axis, int step) const
{
    Vertex out = *this;
    out.coords[static_cast<std::size_t>(axis)] += step;
    return out;
}

std::string to_string(const Vertex& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.coords.size(); ++i) {
        if (i) {
            s += ",";
        }
        s += std::to_string(v.coords[i]);
    }
    return s + ")";
}

std::size_t VertexHash::operator()(const Vertex& v) const noexcept
{
    std::uint64_t h = 0x51ed270b27a5f3c9ULL;
    for (Coord c : v.coords) {
        h = mix64(h ^ static_cast<std::uint32_t>(c));
    }
    return static_cast<std::size_t>(h);
}

Edge::Edge(Vertex a, Vertex b)
{
    if (a.dim() != b.dim() || a.dim() == 0) {
        throw ConfigError("edge endpoints must share a positive dimension");
    }
    int differing = 0;
    int axis = -1;
    for (int i = 0; i < a.dim(); ++i) {
        auto delta = static_cast<std::int64_t>(a.coords[i]) - b.coords[i];
        if (delta != 0) {
            ++differing;
            axis = i;
            if (delta != 1 && delta != -1) {
                differing = 2;
            }
        }
    }
    if (differing != 1) {
        throw ConfigError("not a nearest-neighbour edge: " + to_string(a) + " " + to_string(b));
    }
    if (b < a) {
        std::swap(a, b);
    }
    lower_ = std::move(a);
    upper_ = std::move(b);
    axis_ = axis;
}

std::string to_string(const Edge& e)
{
    return to_string(e.lower()) + "-" + to_string(e.upper());
}

std::uint64_t edge_code(const Vertex& lower, int axis)
{
    std::uint64_t h = 0x8bb84b93962eacc9ULL ^ static_cast<std::uint64_t>(lower.dim());
    for (Coord c : lower.coords) {
        h = mix64(h ^ static_cast<std::uint32_t>(c));
    }
    return mix64(h ^ (static_cast<std::uint64_t>(axis) << 40));
}

VertexSet::VertexSet(int dim, std::vector<Vertex> vertices) : dim_(dim), vertices_(std::move(vertices))
{
    if (dim < 1) {
        throw ConfigError("dimension must be at least 1");
    }
    for (const auto& v : vertices_) {
        if (v.dim() != dim) {
            throw ConfigError("vertex " + to_string(v) + " does not have dimension " + std::to_string(dim));
        }
        if (v.sup_norm() > kMaxRadius) {
            throw ConfigError("vertex " + to_string(v) + " lies outside the supported coordinate range");
        }
    }
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    members_.reserve(vertices_.size());
    members_.insert(vertices_.begin(), vertices_.end());
    if (!members_.contains(Vertex::origin(dim))) {
        throw ConfigError("vertex set must contain the origin");
    }

    // Vertices are visited in lexicographic order and each emits its edges
    // with a lexicographically larger neighbour, so edges come out sorted by
    // lower endpoint; a final sort fixes the order among equal lower endpoints.
    for (const auto& v : vertices_) {
        for (int axis = 0; axis < dim; ++axis) {
            for (int step : {-1, 1}) {
                Vertex w = v.shifted(axis, step);
                if (members_.contains(w)) {
                    if (step == 1) {
                        internal_.emplace_back(v, w);
                    }
                } else {
                    boundary_.push_back(BoundaryEdge{Edge(v, w), v});
                }
            }
        }
    }
    std::sort(internal_.begin(), internal_.end());
    std::sort(boundary_.begin(), boundary_.end());
}

std::ptrdiff_t VertexSet::index_of(const Vertex& v) const
{
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || *it != v) {
        return -1;
    }
    return it - vertices_.begin();
}

Coord VertexSet::radius() const
{
    Coord r = 0;
    for (const auto& v : vertices_) {
        r = std::max(r, v.sup_norm());
    }
    return r;
}

std::vector<Vertex> Box::boundary_vertices() const
{
    std::vector<Vertex> out;
    for (const auto& v : set_.vertices()) {
        if (v.sup_norm() == radius_) {
            out.push_back(v);
        }
    }
    return out;
}

Box make_box(int dim, int radius)
{
    if (dim < 1) {
        throw ConfigError("dimension must be at least 1");
    }
    if (radius < 0) {
        throw ConfigError("box radius must be non-negative");
    }
    if (radius > kMaxRadius) {
        throw ConfigError("box radius " + std::to_string(radius) + " exceeds the supported maximum");
    }
    const auto side = static_cast<std::uint64_t>(2 * radius + 1);
    std::uint64_t count = 1;
    for (int i = 0; i < dim; ++i) {
        if (count > kMaxBoxVertices / side) {
            throw ConfigError("box of radius " + std::to_string(radius) + " in dimension " + std::to_string(dim) +
                              " is too large to materialise");
        }
        count *= side;
    }

    std::vector<Vertex> vertices;
    vertices.reserve(count);
    std::vector<Coord> c(static_cast<std::size_t>(dim), -radius);
    for (std::uint64_t i = 0; i < count; ++i) {
        vertices.emplace_back(c);
        for (int axis = dim - 1; axis >= 0; --axis) {
            if (++c[axis] <= radius) {
                break;
            }
            c[axis] = -radius;
        }
    }
    return Box(dim, radius, VertexSet(dim, std::move(vertices)));
}

std::vector<BoundaryEdge> edge_boundary(const VertexSet& s)
{
    return s.boundary_edges();
}

std::vector<Edge> internal_edges(const VertexSet& s)
{
    return s.internal_edges();
}

VertexSet parse_vertex_set(std::string_view text)
{
    std::vector<Vertex> vertices;
    int dim = -1;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::vector<Coord> coords;
        std::string tok;
        while (fields >> tok) {
            char* end = nullptr;
            long long value = std::strtoll(tok.c_str(), &end, 10);
            if (end == tok.c_str() || *end != '\0' || value > kMaxRadius || value < -kMaxRadius) {
                throw ConfigError("line " + std::to_string(line_no) + ": bad coordinate '" + tok + "'");
            }
            coords.push_back(static_cast<Coord>(value));
        }
        if (coords.empty()) {
            continue;
        }
        if (dim < 0) {
            dim = static_cast<int>(coords.size());
        } else if (static_cast<int>(coords.size()) != dim) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                              " coordinates");
        }
        vertices.emplace_back(std::move(coords));
    }
    if (dim < 0) {
        throw ConfigError("vertex set file contains no vertices");
    }
    return VertexSet(dim, std::move(vertices));
}

VertexSet read_vertex_set_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open set file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_vertex_set(buf.str());
}

std::string format_vertex_set(const VertexSet& s)
{
    std::string out;
    for (const auto& v : s.vertices()) {
        for (std::size_t i = 0; i < v.coords.size(); ++i) {
            if (i) {
                out += ' ';
            }
            out += std::to_string(v.coords[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace percolab
