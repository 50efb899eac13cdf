#include "widthlab/spaces.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace widthlab {

namespace {

const std::map<std::string, GeneratorKind> kKinds = {
    {"grid", GeneratorKind::grid},
    {"torus_net", GeneratorKind::torus_net},
    {"sphere_net", GeneratorKind::sphere_net},
    {"k5", GeneratorKind::k5},
    {"tripod_product", GeneratorKind::tripod_product},
    {"tree_cross_interval", GeneratorKind::tree_cross_interval},
    {"clusters", GeneratorKind::clusters},
    {"strip", GeneratorKind::strip},
};

std::size_t count_param(const GeneratorSpec& spec, const std::string& key, double fallback) {
    double v = spec.get(key, fallback);
    if (!(v >= 1.0) || v != std::floor(v)) throw Error("generate: parameter " + key + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

double length_param(const GeneratorSpec& spec, const std::string& key, double fallback) {
    double v = spec.get(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw Error("generate: parameter " + key + " must be positive");
    return v;
}

std::size_t pieces_for(double len, double spacing) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / spacing - 1e-9)));
}

std::vector<double> layers_for_length(double length, double spacing) {
    std::vector<double> out;
    const auto k = static_cast<std::size_t>(std::floor(length / spacing + 1e-9));
    for (std::size_t i = 0; i <= k; ++i) out.push_back(static_cast<double>(i) * spacing);
    return out;
}

std::vector<WeightedEdge> k5_edges(double len) {
    std::vector<WeightedEdge> e;
    for (PointId a = 0; a < 5; ++a)
        for (PointId b = a + 1; b < 5; ++b) e.push_back({a, b, len});
    return e;
}

std::vector<WeightedEdge> tripod_edges(double len) { return {{0, 1, len}, {0, 2, len}, {0, 3, len}}; }

std::size_t subdivided_count(std::size_t vertices, const std::vector<WeightedEdge>& edges, double spacing) {
    std::size_t n = vertices;
    for (const auto& e : edges) n += pieces_for(e.len, spacing) - 1;
    return n;
}

struct TreeProduct {
    SubdividedGraph graph;
    std::size_t vertex_count = 0;
    std::vector<WeightedEdge> tree;
    std::vector<double> layers;
};

TreeProduct tree_product(const GeneratorSpec& spec) {
    TreeProduct t;
    const double spacing = length_param(spec, "spacing", spec.mesh_h);
    const double lspacing = length_param(spec, "layer_spacing", spacing);
    if (spec.kind == GeneratorKind::tripod_product) {
        t.vertex_count = 4;
        t.tree = tripod_edges(length_param(spec, "leg_len", 10.0));
        t.layers = layers_for_length(length_param(spec, "length", 1.0), lspacing);
    } else {
        t.tree = regular_tree_edges(static_cast<int>(count_param(spec, "depth", 3)), length_param(spec, "edge", 0.1),
                                    t.vertex_count);
        t.layers = layers_for_length(length_param(spec, "eps", 0.2), lspacing);
    }
    t.graph = subdivide(t.vertex_count, t.tree, spacing);
    return t;
}

}  // namespace

std::string to_string(GeneratorKind kind) {
    for (const auto& [name, k] : kKinds)
        if (k == kind) return name;
    return "unknown";
}

GeneratorKind parse_generator_kind(const std::string& name) {
    auto it = kKinds.find(name);
    if (it == kKinds.end()) throw Error("unknown generator kind '" + name + "'");
    return it->second;
}

double GeneratorSpec::get(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

SubdividedGraph subdivide(std::size_t vertex_count, const std::vector<WeightedEdge>& edges, double spacing) {
    if (!(spacing > 0.0)) throw Error("subdivide: spacing must be positive");
    SubdividedGraph g;
    g.point_count = vertex_count;
    g.edge_of.assign(vertex_count, -1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (!(e.len > 0.0)) throw Error("subdivide: edge lengths must be positive");
        const std::size_t k = pieces_for(e.len, spacing);
        const double step = e.len / static_cast<double>(k);
        PointId prev = e.u;
        for (std::size_t j = 1; j < k; ++j) {
            auto p = static_cast<PointId>(g.point_count++);
            g.edge_of.push_back(static_cast<long>(i));
            g.edges.push_back({prev, p, step});
            prev = p;
        }
        g.edges.push_back({prev, e.v, step});
    }
    return g;
}

std::vector<WeightedEdge> regular_tree_edges(int depth, double edge_len, std::size_t& vertex_count) {
    if (depth < 1) throw Error("regular_tree_edges: depth must be positive");
    std::vector<WeightedEdge> edges;
    std::vector<PointId> frontier{0};
    PointId next = 1;
    for (int level = 0; level < depth; ++level) {
        std::vector<PointId> grown;
        for (PointId v : frontier) {
            const int children = level == 0 ? 3 : 2;
            for (int c = 0; c < children; ++c) {
                edges.push_back({v, next, edge_len});
                grown.push_back(next++);
            }
        }
        frontier = std::move(grown);
    }
    vertex_count = next;
    return edges;
}

std::size_t predicted_size(const GeneratorSpec& spec) {
    switch (spec.kind) {
    case GeneratorKind::grid:
        return count_param(spec, "rows", 3) * count_param(spec, "cols", 3);
    case GeneratorKind::strip:
        return count_param(spec, "rows", 2) * count_param(spec, "cols", 100);
    case GeneratorKind::torus_net:
        return count_param(spec, "rows", 4) * count_param(spec, "cols", 50);
    case GeneratorKind::sphere_net:
        return count_param(spec, "rings", 8) * count_param(spec, "sectors", 16) + 2;
    case GeneratorKind::k5: {
        const double spacing = length_param(spec, "spacing", spec.mesh_h);
        return subdivided_count(5, k5_edges(length_param(spec, "edge_len", 10.0)), spacing) *
               count_param(spec, "layers", 1);
    }
    case GeneratorKind::tripod_product:
    case GeneratorKind::tree_cross_interval: {
        // counted without building the metric
        const double spacing = length_param(spec, "spacing", spec.mesh_h);
        const double lspacing = length_param(spec, "layer_spacing", spacing);
        std::size_t vertices = 4;
        std::vector<WeightedEdge> tree;
        double length = 0.0;
        if (spec.kind == GeneratorKind::tripod_product) {
            tree = tripod_edges(length_param(spec, "leg_len", 10.0));
            length = length_param(spec, "length", 1.0);
        } else {
            tree = regular_tree_edges(static_cast<int>(count_param(spec, "depth", 3)),
                                      length_param(spec, "edge", 0.1), vertices);
            length = length_param(spec, "eps", 0.2);
        }
        return subdivided_count(vertices, tree, spacing) * layers_for_length(length, lspacing).size();
    }
    case GeneratorKind::clusters:
        return count_param(spec, "count", 2) * count_param(spec, "size", 5);
    }
    return 0;
}

FiniteMetricSpace generate(const GeneratorSpec& spec) {
    if (!(spec.mesh_h > 0.0)) throw Error("generate: mesh_h must be positive");
    const std::size_t predicted = predicted_size(spec);
    if (predicted > spec.point_budget)
        throw Error("generate: " + to_string(spec.kind) + " would have " + std::to_string(predicted) +
                    " points, over the budget of " + std::to_string(spec.point_budget));

    switch (spec.kind) {
    case GeneratorKind::grid:
    case GeneratorKind::strip: {
        const bool strip = spec.kind == GeneratorKind::strip;
        const std::size_t rows = count_param(spec, "rows", strip ? 2 : 3);
        const std::size_t cols = count_param(spec, "cols", strip ? 100 : 3);
        const double spacing = length_param(spec, "spacing", spec.mesh_h);
        if (spec.get("graph", 0.0) != 0.0) {
            std::vector<WeightedEdge> edges;
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c) {
                    auto p = static_cast<PointId>(r * cols + c);
                    if (c + 1 < cols) edges.push_back({p, p + 1, spacing});
                    if (r + 1 < rows) edges.push_back({p, static_cast<PointId>(p + cols), spacing});
                }
            return FiniteMetricSpace::from_graph_vertices(rows * cols, edges, spec.mesh_h);
        }
        std::vector<std::array<double, 3>> coords;
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                coords.push_back({static_cast<double>(c) * spacing, static_cast<double>(r) * spacing, 0.0});
        return FiniteMetricSpace::from_coordinates(MetricKind::euclidean, std::move(coords), spec.mesh_h);
    }
    case GeneratorKind::torus_net: {
        const std::size_t rows = count_param(spec, "rows", 4);
        const std::size_t cols = count_param(spec, "cols", 50);
        const double spacing = length_param(spec, "spacing", spec.mesh_h);
        std::vector<WeightedEdge> edges;
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                auto p = static_cast<PointId>(r * cols + c);
                if (cols > 1) edges.push_back({p, static_cast<PointId>(r * cols + (c + 1) % cols), spacing});
                if (rows > 1) edges.push_back({p, static_cast<PointId>(((r + 1) % rows) * cols + c), spacing});
            }
        return FiniteMetricSpace::from_graph_vertices(rows * cols, edges, spec.mesh_h);
    }
    case GeneratorKind::sphere_net: {
        const std::size_t rings = count_param(spec, "rings", 8);
        const std::size_t sectors = count_param(spec, "sectors", 16);
        const double radius = length_param(spec, "radius", 1.0);
        const double dtheta = std::numbers::pi / static_cast<double>(rings + 1);
        const auto north = static_cast<PointId>(rings * sectors), south = north + 1;
        auto id = [&](std::size_t i, std::size_t j) { return static_cast<PointId>(i * sectors + j); };
        std::vector<WeightedEdge> edges;
        for (std::size_t i = 0; i < rings; ++i) {
            const double theta = dtheta * static_cast<double>(i + 1);
            const double arc = radius * std::sin(theta) * 2.0 * std::numbers::pi / static_cast<double>(sectors);
            for (std::size_t j = 0; j < sectors; ++j) {
                if (sectors > 1) edges.push_back({id(i, j), id(i, (j + 1) % sectors), arc});
                if (i + 1 < rings) edges.push_back({id(i, j), id(i + 1, j), radius * dtheta});
            }
        }
        for (std::size_t j = 0; j < sectors; ++j) {
            edges.push_back({north, id(0, j), radius * dtheta});
            edges.push_back({south, id(rings - 1, j), radius * dtheta});
        }
        return FiniteMetricSpace::from_graph_vertices(rings * sectors + 2, edges, spec.mesh_h);
    }
    case GeneratorKind::k5: {
        const double spacing = length_param(spec, "spacing", spec.mesh_h);
        const std::size_t layers = count_param(spec, "layers", 1);
        auto g = subdivide(5, k5_edges(length_param(spec, "edge_len", 10.0)), spacing);
        auto base = FiniteMetricSpace::from_graph_vertices(g.point_count, g.edges, spec.mesh_h);
        if (layers == 1) return base;
        const double lspacing = length_param(spec, "layer_spacing", spacing);
        std::vector<double> line;
        for (std::size_t i = 0; i < layers; ++i) line.push_back(static_cast<double>(i) * lspacing);
        return FiniteMetricSpace::product_with_line(base, line, spec.mesh_h);
    }
    case GeneratorKind::tripod_product:
    case GeneratorKind::tree_cross_interval: {
        TreeProduct t = tree_product(spec);
        auto base = FiniteMetricSpace::from_graph_vertices(t.graph.point_count, t.graph.edges, spec.mesh_h);
        return FiniteMetricSpace::product_with_line(base, t.layers, spec.mesh_h);
    }
    case GeneratorKind::clusters: {
        const std::size_t count = count_param(spec, "count", 2);
        const std::size_t size = count_param(spec, "size", 5);
        const double diam = spec.get("diam", 0.05);
        const double gap = length_param(spec, "gap", 100.0);
        const double jitter = spec.get("jitter", 0.0);
        if (diam < 0.0 || jitter < 0.0) throw Error("generate: diam and jitter must be nonnegative");
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::vector<std::array<double, 3>> coords;
        for (std::size_t c = 0; c < count; ++c) {
            const double cx = static_cast<double>(c) * gap + jitter * unit(rng);
            const double cy = jitter * unit(rng);
            for (std::size_t i = 0; i < size; ++i) {
                double offset = size == 1 ? 0.0 : diam * static_cast<double>(i) / static_cast<double>(size - 1);
                coords.push_back({cx + offset, cy, 0.0});
            }
        }
        return FiniteMetricSpace::from_coordinates(MetricKind::euclidean, std::move(coords), spec.mesh_h);
    }
    }
    throw Error("generate: unhandled kind");
}

WidthCertificate tree_projection_certificate(const GeneratorSpec& spec, const FiniteMetricSpace& space) {
    if (spec.kind != GeneratorKind::tree_cross_interval && spec.kind != GeneratorKind::tripod_product)
        throw Error("tree_projection_certificate: needs a tree product spec");
    TreeProduct t = tree_product(spec);
    const std::size_t layers = t.layers.size();
    if (space.size() != t.graph.point_count * layers)
        throw Error("tree_projection_certificate: space does not match spec");
    SimplicialComplex complex;
    std::vector<SimplexId> edge_ids;
    for (const auto& e : t.tree) edge_ids.push_back(complex.add_closed({e.u, e.v}));
    std::vector<SimplexId> assignment(space.size());
    for (PointId b = 0; b < t.graph.point_count; ++b) {
        SimplexId target = b < t.vertex_count ? *complex.find({b})
                                              : edge_ids[static_cast<std::size_t>(t.graph.edge_of[b])];
        for (std::size_t k = 0; k < layers; ++k) assignment[b * layers + k] = target;
    }
    double width = 0.0;
    for (const auto& e : t.tree) width = std::max(width, e.len);
    width = std::max(width, t.layers.back());
    return make_certificate(space, std::move(complex), std::move(assignment), width, 2);
}

}  // namespace widthlab
