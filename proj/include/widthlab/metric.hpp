#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace widthlab {

using PointId = std::uint32_t;

/// Sorted, duplicate-free list of point ids.
using PointSet = std::vector<PointId>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an input matrix is not a metric. Names the violating triple.
class MetricError : public Error {
public:
    MetricError(const std::string& what, std::array<PointId, 3> triple)
        : Error(what), triple_(triple) {}
    std::array<PointId, 3> triple() const { return triple_; }

private:
    std::array<PointId, 3> triple_;
};

/// Distinct points closer than mesh_slack * mesh_h produce a warning.
inline constexpr double kMeshSlack = 0.5;

struct WeightedEdge {
    PointId u = 0;
    PointId v = 0;
    double len = 0.0;
};

/// How distances are evaluated. Every point carries an optional index into a
/// shared base matrix plus up to three coordinates.
enum class MetricKind {
    matrix,       // d = M[a][b]
    euclidean,    // d = |x - y|_2
    chebyshev,    // d = |x - y|_inf
    flat_torus,   // Euclidean with per-axis wraparound
    product_max,  // d = max(M[a][b], |s - t|)
};

/// A finite metric space with mesh resolution h. Immutable after construction;
/// restrictions share the base matrix.
class FiniteMetricSpace {
public:
    static FiniteMetricSpace from_distance_matrix(const std::vector<std::vector<double>>& matrix,
                                                  double mesh_h);
    static FiniteMetricSpace from_weighted_graph(std::span<const WeightedEdge> edges,
                                                 double mesh_h);
    /// Shortest-path metric of a graph whose vertices are exactly the points
    /// (no subdivision). Used by generators that lay out their own nets.
    static FiniteMetricSpace from_graph_vertices(std::size_t vertex_count,
                                                 std::span<const WeightedEdge> edges,
                                                 double mesh_h);
    static FiniteMetricSpace from_coordinates(MetricKind kind,
                                              std::vector<std::array<double, 3>> coords,
                                              double mesh_h,
                                              std::array<double, 3> period = {0, 0, 0});
    /// max-combination of a base space (matrix-backed) and a line coordinate per point.
    static FiniteMetricSpace product_with_line(const FiniteMetricSpace& base,
                                               std::span<const double> line,
                                               double mesh_h);

    std::size_t size() const { return base_index_.size(); }
    double mesh_h() const { return mesh_h_; }
    MetricKind kind() const { return kind_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    double dist(PointId a, PointId b) const {
        switch (kind_) {
        case MetricKind::matrix:
            return (*matrix_)[base_index_[a] * base_n_ + base_index_[b]];
        case MetricKind::euclidean: return euclid(coords_[a], coords_[b]);
        case MetricKind::chebyshev: return cheb(coords_[a], coords_[b]);
        case MetricKind::flat_torus: return torus(coords_[a], coords_[b]);
        case MetricKind::product_max: {
            double m = (*matrix_)[base_index_[a] * base_n_ + base_index_[b]];
            double t = coords_[a][0] - coords_[b][0];
            t = t < 0 ? -t : t;
            return m > t ? m : t;
        }
        }
        return 0.0;
    }

    /// Subspace on the given ids; point k of the result is ids[k] here.
    FiniteMetricSpace restrict_to(const PointSet& ids) const;

    PointSet all_points() const;
    bool valid(PointId p) const { return p < size(); }

    const std::array<double, 3>& coords(PointId p) const { return coords_[p]; }
    std::array<double, 3> period() const { return period_; }

    /// Materialized distance matrix (row-major), for serialization.
    std::vector<double> dense_matrix() const;

private:
    static double euclid(const std::array<double, 3>& x, const std::array<double, 3>& y);
    static double cheb(const std::array<double, 3>& x, const std::array<double, 3>& y);
    double torus(const std::array<double, 3>& x, const std::array<double, 3>& y) const;
    void check_mesh();

    MetricKind kind_ = MetricKind::matrix;
    double mesh_h_ = 1.0;
    std::shared_ptr<const std::vector<double>> matrix_;
    std::size_t base_n_ = 0;
    std::vector<std::uint32_t> base_index_;
    std::vector<std::array<double, 3>> coords_;
    std::array<double, 3> period_{0, 0, 0};
    std::vector<std::string> warnings_;
};

struct Shell {
    PointId center = 0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    PointSet members;
};

/// Closed ball {p : d(x,p) <= r}.
PointSet ball(const FiniteMetricSpace& space, PointId x, double r);
/// Closed ball restricted to a subset.
PointSet ball_within(const FiniteMetricSpace& space, const PointSet& within, PointId x, double r);
/// Open ball {p : d(x,p) < r}.
PointSet open_ball(const FiniteMetricSpace& space, PointId x, double r);
/// {p : r_lo <= d(x,p) < r_hi}.
Shell shell(const FiniteMetricSpace& space, PointId x, double r_lo, double r_hi);

double diameter(const FiniteMetricSpace& space, std::span<const PointId> s);
/// max d(a,b) over a in A, b in B; 0 if either is empty.
double cross_diameter(const FiniteMetricSpace& space, std::span<const PointId> a,
                      std::span<const PointId> b);

/// Default connectivity scale: 2 * mesh_h.
inline double default_scale(const FiniteMetricSpace& space) { return 2.0 * space.mesh_h(); }

/// Adjacency lists of the relation d(p,q) < radius over the whole space.
/// Lists are sorted by id and exclude p itself.
class NeighborIndex {
public:
    NeighborIndex() = default;
    NeighborIndex(const FiniteMetricSpace& space, double radius, bool strict);

    double radius() const { return radius_; }
    bool strict() const { return strict_; }
    const std::vector<PointId>& of(PointId p) const { return lists_[p]; }
    std::size_t size() const { return lists_.size(); }

private:
    double radius_ = 0.0;
    bool strict_ = true;
    std::vector<std::vector<PointId>> lists_;
};

/// Equivalence classes of "d(p,q) < s", transitively closed. Classes are
/// sorted internally and ordered by their smallest id.
std::vector<PointSet> components_at_scale(const FiniteMetricSpace& space, const PointSet& s_set,
                                          double s);
/// Same, reusing a precomputed strict index of radius s.
std::vector<PointSet> components_at_scale(const NeighborIndex& index, const PointSet& s_set);

PointSet set_union(const PointSet& a, const PointSet& b);
PointSet set_difference(const PointSet& a, const PointSet& b);
PointSet set_intersection(const PointSet& a, const PointSet& b);
bool is_subset(const PointSet& a, const PointSet& b);
/// Sorts and dedups.
PointSet make_point_set(std::vector<PointId> ids);

}  // namespace widthlab
