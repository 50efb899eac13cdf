#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "widthlab/complex.hpp"
#include "widthlab/metric.hpp"

namespace widthlab {

enum class GeneratorKind { grid, torus_net, sphere_net, k5, tripod_product, tree_cross_interval, clusters, strip };

std::string to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(const std::string& name);

/// Kind-specific parameters live in `params`; missing ones take the defaults
/// listed in generate().
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::grid;
    std::map<std::string, double> params;
    double mesh_h = 1.0;
    std::uint64_t seed = 0;
    std::size_t point_budget = 5000;

    double get(const std::string& key, double fallback) const;
};

/// Parameters (defaults in brackets):
///   grid, strip      rows [3 / 2], cols [3 / 100], spacing [mesh_h], graph [0]
///                    graph=1 uses the 4-neighbour lattice path metric
///   torus_net        rows [4], cols [50], spacing [mesh_h]; lattice with wraparound,
///                    graph shortest paths
///   sphere_net       rings [8], sectors [16], radius [1]; latitude-longitude net,
///                    graph shortest paths
///   k5               edge_len [10], spacing [mesh_h], layers [1], layer_spacing [spacing]
///   tripod_product   leg_len [10], spacing [mesh_h], length [1] (the interval),
///                    layer_spacing [spacing]
///   tree_cross_interval  depth [3], edge [0.1], eps [0.2], spacing [mesh_h],
///                    layer_spacing [spacing]; 3-regular tree times [0, eps]
///   clusters         count [2], size [5], diam [0.05], gap [100], jitter [0]
/// Throws if the net would exceed point_budget.
FiniteMetricSpace generate(const GeneratorSpec& spec);

/// Number of points generate(spec) would produce.
std::size_t predicted_size(const GeneratorSpec& spec);

/// Projection of tree x [0, eps] onto the tree, as a certificate of width
/// max(edge, eps) on a 1-dimensional complex: tree vertices map to vertices,
/// subdivision points to the open edge containing them.
WidthCertificate tree_projection_certificate(const GeneratorSpec& spec, const FiniteMetricSpace& space);

/// Subdivides each edge into ceil(len / spacing) equal pieces. Interior points
/// are numbered after the vertices, in edge order. edge_of[p] is the edge index
/// of interior point p, or -1 for original vertices.
struct SubdividedGraph {
    std::size_t point_count = 0;
    std::vector<WeightedEdge> edges;
    std::vector<long> edge_of;
};
SubdividedGraph subdivide(std::size_t vertex_count, const std::vector<WeightedEdge>& edges, double spacing);

/// Edges of the 3-regular tree of the given depth: the root has three children,
/// every other internal vertex two. Vertex 0 is the root; ids are breadth first.
std::vector<WeightedEdge> regular_tree_edges(int depth, double edge_len, std::size_t& vertex_count);

}  // namespace widthlab
