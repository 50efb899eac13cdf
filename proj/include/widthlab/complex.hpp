#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "widthlab/metric.hpp"

namespace widthlab {

using VertexId = std::uint32_t;
using SimplexId = std::uint32_t;
/// Sorted vertex list.
using Simplex = std::vector<VertexId>;

/// Finite abstract simplicial complex, closed under taking faces. Simplex ids
/// follow insertion order.
class SimplicialComplex {
public:
    /// Adds s and every face of s; returns the id of s.
    SimplexId add_closed(Simplex s);
    void add_vertex(VertexId v) { add_closed({v}); }

    std::optional<SimplexId> find(const Simplex& s) const;
    const Simplex& simplex(SimplexId id) const { return simplices_[id]; }
    std::size_t simplex_count() const { return simplices_.size(); }
    const std::vector<VertexId>& vertices() const { return vertices_; }
    bool has_vertex(VertexId v) const { return find({v}).has_value(); }
    /// Largest simplex size minus one; -1 when empty.
    int dim() const;
    /// Simplices that are not a proper face of another simplex, in id order.
    std::vector<SimplexId> maximal_simplices() const;
    bool is_downward_closed() const;
    VertexId next_free_vertex() const;

private:
    std::vector<Simplex> simplices_;
    std::map<Simplex, SimplexId> index_;
    std::vector<VertexId> vertices_;
};

/// All nonempty faces of s, including s.
std::vector<Simplex> faces_of(const Simplex& s);

/// Downward closure of the given simplices: the smallest subcomplex containing them.
std::vector<SimplexId> minimal_subcomplex_containing(const SimplicialComplex& complex,
                                                     const std::vector<SimplexId>& ids);

/// base plus s ∪ {apex} for every s in sub, plus the apex itself.
SimplicialComplex cone_attach(const SimplicialComplex& base, const std::vector<SimplexId>& sub, VertexId apex);

/// A point -> simplex assignment whose per-simplex fibers are claimed to have
/// diameter at most r.
struct WidthCertificate {
    SimplicialComplex complex;
    std::vector<SimplexId> assignment;  // indexed by point id
    double r = 0.0;
    int n = 1;  // built for UW_{n-1}
    std::vector<double> fiber_diams;    // per simplex, assigned points only
    double max_fiber = 0.0;
    /// Per simplex, diameter of the points assigned to any face of it.
    std::vector<double> closed_fiber_diams;
    double max_closed_fiber = 0.0;
};

/// Computes both fiber tables for an assignment.
WidthCertificate make_certificate(const FiniteMetricSpace& space, SimplicialComplex complex,
                                  std::vector<SimplexId> assignment, double r, int n);

struct CertificateReport {
    bool pass = false;
    double max_fiber = 0.0;
    double max_closed_fiber = 0.0;
    std::optional<SimplexId> worst_simplex;
    std::vector<std::string> problems;
    /// Sum of fiber sizes; equals the point count when fibers partition X.
    std::size_t assigned_points = 0;
};

/// Recomputes every fiber. Passes iff max fiber <= r, stored tables match the
/// recomputation, the complex is downward closed and has dim <= n-1. With
/// require_closed, closed-simplex fibers must also be <= r.
/// Throws if the assignment does not cover every point.
CertificateReport verify_certificate(const FiniteMetricSpace& space, const WidthCertificate& cert,
                                     bool require_closed = false);

/// Graphviz DOT of the 1-skeleton.
std::string to_dot(const SimplicialComplex& complex);

}  // namespace widthlab
