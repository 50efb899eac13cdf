#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "widthlab/metric.hpp"

namespace widthlab {

using Vec2 = std::array<double, 2>;
using Polyline = std::vector<Vec2>;

/// Default snapping grid: coordinates are multiples of 2^-20.
inline constexpr double kSnapResolution = 1.0 / 1048576.0;

struct DrawnEdge {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    /// Vertex k of an m-segment polyline is the image of the point at
    /// parameter k/m along the metric edge from u to v.
    Polyline polyline;
};

/// A piecewise-linear map of metric K5 (edge length 10R) into the plane.
struct Drawing {
    double r = 1.0;
    std::vector<DrawnEdge> edges;  // exactly the 10 pairs of {0..4}

    double edge_len() const { return 10.0 * r; }
};

class DrawingError : public Error {
public:
    using Error::Error;
};

/// Checks the drawing is a K5 map with consistent vertex images and snaps
/// every coordinate to the grid. Throws DrawingError.
Drawing normalize_drawing(Drawing d, double resolution = kSnapResolution);

/// Point of the metric graph: edge index into Drawing::edges, parameter in [0,1] from u.
struct GraphPoint {
    std::uint32_t edge = 0;
    double t = 0.0;
};

/// Shortest-path distance on metric K5.
double graph_dist(const Drawing& d, GraphPoint p, GraphPoint q);
Vec2 image_of(const Drawing& d, GraphPoint p);

struct FiberWitness {
    GraphPoint p;
    GraphPoint q;
    double graph_dist = 0.0;
    double image_dist = 0.0;
    bool exact = false;  // found by exact segment intersection
};

struct AuditOptions {
    std::size_t samples_per_segment = 8;
    unsigned threads = 1;
};

struct AuditResult {
    std::optional<FiberWitness> witness;
    std::size_t exact_intersections = 0;
    std::size_t tolerance_pairs = 0;
    std::size_t samples = 0;
};

/// Searches for two graph points whose images are within collision_tol,
/// maximizing graph distance; ties go to the smaller (edge, t) of p, then q.
AuditResult audit_drawing(const Drawing& d, double collision_tol, const AuditOptions& opts = {});

struct SimpleArc {
    Polyline points;
    bool degenerate = false;  // endpoints coincide; the arc is a single point
};

/// Loop excision: walks the polyline and, whenever the next segment meets the
/// path built so far, cuts back to the earliest meeting point.
SimpleArc simplify_to_simple_arc(const Polyline& polyline);

/// True if no two non-adjacent segments meet and adjacent ones meet only at
/// their shared vertex. Exact on snapped coordinates.
bool is_simple(const Polyline& polyline);

/// Every exact intersection point of two polylines (segment pairs), in
/// (segment of a, segment of b) order; collinear overlaps contribute their endpoints.
std::vector<Vec2> polyline_intersections(const Polyline& a, const Polyline& b);

/// Sub-polyline of an edge image between parameters t0 < t1.
Polyline edge_piece(const Drawing& d, std::uint32_t edge, double t0, double t1);

struct TreeArc {
    std::uint32_t edge = 0;  // source edge
    double t0 = 0.0;         // source parameter range
    double t1 = 0.0;
    Polyline points;
};

struct DiagnosticCrossing {
    std::string kind;  // "tree-tree", "arc-arc", "arc-tree"
    std::string a;     // e.g. "T2", "b03"
    std::string b;
    Vec2 point{0, 0};
    std::optional<FiberWitness> preimages;  // graph points on the two source pieces
};

struct TreesDiagnostic {
    std::array<std::vector<TreeArc>, 5> trees;
    std::array<std::size_t, 5> endpoint_counts{};
    std::vector<std::pair<std::array<std::uint32_t, 2>, TreeArc>> connectors;  // beta_ij
    std::vector<DiagnosticCrossing> crossings;
    bool found = false;
};

/// Builds the five vertex trees inside the images of B(v, 2R) and the
/// connecting arcs between them, and lists where they meet.
TreesDiagnostic k5_trees_construction(const Drawing& d);

/// Sample drawings (each edge drawn with `segments` pieces).
Drawing pentagon_drawing(double r, std::size_t segments = 16);
Drawing collapsed_drawing(double r, std::size_t segments = 4);
Drawing perturbed_drawing(double r, std::uint64_t seed, std::size_t segments = 16, double noise = 0.15);

}  // namespace widthlab
