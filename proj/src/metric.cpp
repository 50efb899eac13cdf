#include "widthlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace widthlab {

namespace {

constexpr double kTriangleTol = 1e-9;

// Dijkstra from every vertex of a sparse graph.
std::vector<double> all_pairs_shortest_paths(std::size_t n,
                                             const std::vector<std::vector<std::pair<PointId, double>>>& adj) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> out(n * n, inf);
    using Item = std::pair<double, PointId>;
    for (PointId src = 0; src < n; ++src) {
        double* row = &out[static_cast<std::size_t>(src) * n];
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        row[src] = 0.0;
        pq.emplace(0.0, src);
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > row[u]) continue;
            for (auto [v, w] : adj[u]) {
                double nd = d + w;
                if (nd < row[v]) {
                    row[v] = nd;
                    pq.emplace(nd, v);
                }
            }
        }
    }
    // symmetrize exactly; shortest paths can differ in the last ulp by direction
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double m = std::min(out[i * n + j], out[j * n + i]);
            out[i * n + j] = out[j * n + i] = m;
        }
    return out;
}

}  // namespace

double FiniteMetricSpace::euclid(const std::array<double, 3>& x, const std::array<double, 3>& y) {
    double a = x[0] - y[0], b = x[1] - y[1], c = x[2] - y[2];
    return std::sqrt(a * a + b * b + c * c);
}

double FiniteMetricSpace::cheb(const std::array<double, 3>& x, const std::array<double, 3>& y) {
    return std::max({std::abs(x[0] - y[0]), std::abs(x[1] - y[1]), std::abs(x[2] - y[2])});
}

double FiniteMetricSpace::torus(const std::array<double, 3>& x, const std::array<double, 3>& y) const {
    double acc = 0.0;
    for (int k = 0; k < 3; ++k) {
        double t = std::abs(x[k] - y[k]);
        if (period_[k] > 0) t = std::min(t, period_[k] - t);
        acc += t * t;
    }
    return std::sqrt(acc);
}

void FiniteMetricSpace::check_mesh() {
    if (!(mesh_h_ > 0) || !std::isfinite(mesh_h_)) throw Error("mesh_h must be positive and finite");
    const std::size_t n = size();
    const double floor = kMeshSlack * mesh_h_;
    std::size_t close_pairs = 0;
    std::pair<PointId, PointId> first{0, 0};
    for (PointId i = 0; i < n; ++i)
        for (PointId j = i + 1; j < n; ++j)
            if (dist(i, j) < floor) {
                if (close_pairs == 0) first = {i, j};
                ++close_pairs;
            }
    if (close_pairs > 0) {
        std::ostringstream os;
        os << close_pairs << " point pair(s) closer than " << kMeshSlack << "*mesh_h, first ("
           << first.first << "," << first.second << ")";
        warnings_.push_back(os.str());
    }
}

FiniteMetricSpace FiniteMetricSpace::from_distance_matrix(const std::vector<std::vector<double>>& matrix,
                                                          double mesh_h) {
    const std::size_t n = matrix.size();
    if (n == 0) throw Error("distance matrix is empty");
    auto flat = std::make_shared<std::vector<double>>(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i].size() != n) throw Error("distance matrix is not square (row " + std::to_string(i) + ")");
        for (std::size_t j = 0; j < n; ++j) {
            double v = matrix[i][j];
            if (!std::isfinite(v) || v < 0) throw Error("distance matrix entry (" + std::to_string(i) + "," +
                                                        std::to_string(j) + ") is negative or not finite");
            (*flat)[i * n + j] = v;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i][i] != 0.0) throw Error("nonzero diagonal at " + std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j)
            if (matrix[i][j] != matrix[j][i])
                throw Error("distance matrix not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    const auto& m = *flat;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double direct = m[i * n + k];
                double via = m[i * n + j] + m[j * n + k];
                if (direct > via + kTriangleTol * std::max(1.0, direct)) {
                    std::ostringstream os;
                    os << "triangle inequality violated: d(" << i << "," << k << ")=" << direct << " > d(" << i
                       << "," << j << ")+d(" << j << "," << k << ")=" << via;
                    throw MetricError(os.str(), {static_cast<PointId>(i), static_cast<PointId>(j),
                                                 static_cast<PointId>(k)});
                }
            }
    FiniteMetricSpace s;
    s.kind_ = MetricKind::matrix;
    s.mesh_h_ = mesh_h;
    s.matrix_ = std::move(flat);
    s.base_n_ = n;
    s.base_index_.resize(n);
    std::iota(s.base_index_.begin(), s.base_index_.end(), 0u);
    s.coords_.assign(n, {0, 0, 0});
    s.check_mesh();
    return s;
}

FiniteMetricSpace FiniteMetricSpace::from_graph_vertices(std::size_t vertex_count,
                                                         std::span<const WeightedEdge> edges, double mesh_h) {
    if (vertex_count == 0) throw Error("graph has no vertices");
    std::vector<std::vector<std::pair<PointId, double>>> adj(vertex_count);
    for (const auto& e : edges) {
        if (e.u >= vertex_count || e.v >= vertex_count) throw Error("edge endpoint out of range");
        if (!(e.len > 0) || !std::isfinite(e.len)) throw Error("edge lengths must be positive");
        adj[e.u].emplace_back(e.v, e.len);
        adj[e.v].emplace_back(e.u, e.len);
    }
    auto flat = std::make_shared<std::vector<double>>(all_pairs_shortest_paths(vertex_count, adj));
    for (double d : *flat)
        if (!std::isfinite(d)) throw Error("graph is disconnected; infinite distances are unsupported");
    FiniteMetricSpace s;
    s.kind_ = MetricKind::matrix;
    s.mesh_h_ = mesh_h;
    s.matrix_ = std::move(flat);
    s.base_n_ = vertex_count;
    s.base_index_.resize(vertex_count);
    std::iota(s.base_index_.begin(), s.base_index_.end(), 0u);
    s.coords_.assign(vertex_count, {0, 0, 0});
    s.check_mesh();
    return s;
}

FiniteMetricSpace FiniteMetricSpace::from_weighted_graph(std::span<const WeightedEdge> edges, double mesh_h) {
    if (!(mesh_h > 0)) throw Error("mesh_h must be positive");
    if (edges.empty()) throw Error("graph has no edges");
    PointId vmax = 0;
    for (const auto& e : edges) vmax = std::max({vmax, e.u, e.v});
    const std::size_t vertices = static_cast<std::size_t>(vmax) + 1;
    // Each edge of length L is cut into ceil(L/h) equal pieces.
    std::vector<WeightedEdge> sub;
    std::size_t next = vertices;
    for (const auto& e : edges) {
        if (!(e.len > 0) || !std::isfinite(e.len)) throw Error("edge lengths must be positive");
        auto pieces = static_cast<std::size_t>(std::ceil(e.len / mesh_h - 1e-9));
        pieces = std::max<std::size_t>(pieces, 1);
        const double step = e.len / static_cast<double>(pieces);
        PointId prev = e.u;
        for (std::size_t k = 1; k < pieces; ++k) {
            auto mid = static_cast<PointId>(next++);
            sub.push_back({prev, mid, step});
            prev = mid;
        }
        sub.push_back({prev, e.v, step});
    }
    return from_graph_vertices(next, sub, mesh_h);
}

FiniteMetricSpace FiniteMetricSpace::from_coordinates(MetricKind kind, std::vector<std::array<double, 3>> coords,
                                                      double mesh_h, std::array<double, 3> period) {
    if (kind == MetricKind::matrix || kind == MetricKind::product_max)
        throw Error("from_coordinates needs a coordinate metric kind");
    if (coords.empty()) throw Error("no points");
    FiniteMetricSpace s;
    s.kind_ = kind;
    s.mesh_h_ = mesh_h;
    s.coords_ = std::move(coords);
    s.base_index_.assign(s.coords_.size(), 0);
    s.period_ = period;
    s.check_mesh();
    return s;
}

FiniteMetricSpace FiniteMetricSpace::product_with_line(const FiniteMetricSpace& base, std::span<const double> line,
                                                       double mesh_h) {
    if (base.kind_ != MetricKind::matrix) throw Error("product_with_line needs a matrix-backed base");
    if (line.empty()) throw Error("empty line factor");
    FiniteMetricSpace s;
    s.kind_ = MetricKind::product_max;
    s.mesh_h_ = mesh_h;
    s.matrix_ = base.matrix_;
    s.base_n_ = base.base_n_;
    for (PointId b = 0; b < base.size(); ++b)
        for (double t : line) {
            s.base_index_.push_back(base.base_index_[b]);
            s.coords_.push_back({t, 0, 0});
        }
    s.check_mesh();
    return s;
}

FiniteMetricSpace FiniteMetricSpace::restrict_to(const PointSet& ids) const {
    FiniteMetricSpace s;
    s.kind_ = kind_;
    s.mesh_h_ = mesh_h_;
    s.matrix_ = matrix_;
    s.base_n_ = base_n_;
    s.period_ = period_;
    s.base_index_.reserve(ids.size());
    s.coords_.reserve(ids.size());
    for (PointId p : ids) {
        if (!valid(p)) throw Error("restrict_to: invalid point id " + std::to_string(p));
        s.base_index_.push_back(base_index_[p]);
        s.coords_.push_back(coords_[p]);
    }
    return s;
}

PointSet FiniteMetricSpace::all_points() const {
    PointSet out(size());
    std::iota(out.begin(), out.end(), 0u);
    return out;
}

std::vector<double> FiniteMetricSpace::dense_matrix() const {
    const std::size_t n = size();
    std::vector<double> out(n * n);
    for (PointId i = 0; i < n; ++i)
        for (PointId j = 0; j < n; ++j) out[static_cast<std::size_t>(i) * n + j] = dist(i, j);
    return out;
}

PointSet ball(const FiniteMetricSpace& space, PointId x, double r) {
    if (!space.valid(x)) throw Error("ball: invalid center");
    PointSet out;
    for (PointId p = 0; p < space.size(); ++p)
        if (space.dist(x, p) <= r) out.push_back(p);
    return out;
}

PointSet ball_within(const FiniteMetricSpace& space, const PointSet& within, PointId x, double r) {
    PointSet out;
    for (PointId p : within)
        if (space.dist(x, p) <= r) out.push_back(p);
    return out;
}

PointSet open_ball(const FiniteMetricSpace& space, PointId x, double r) {
    if (!space.valid(x)) throw Error("open_ball: invalid center");
    PointSet out;
    for (PointId p = 0; p < space.size(); ++p)
        if (space.dist(x, p) < r) out.push_back(p);
    return out;
}

Shell shell(const FiniteMetricSpace& space, PointId x, double r_lo, double r_hi) {
    if (!space.valid(x)) throw Error("shell: invalid center");
    if (!(r_lo >= 0) || !(r_lo < r_hi)) throw Error("shell: need 0 <= r_lo < r_hi");
    Shell s{x, r_lo, r_hi, {}};
    for (PointId p = 0; p < space.size(); ++p) {
        double d = space.dist(x, p);
        if (d >= r_lo && d < r_hi) s.members.push_back(p);
    }
    return s;
}

double diameter(const FiniteMetricSpace& space, std::span<const PointId> s) {
    double best = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) best = std::max(best, space.dist(s[i], s[j]));
    return best;
}

double cross_diameter(const FiniteMetricSpace& space, std::span<const PointId> a, std::span<const PointId> b) {
    double best = 0.0;
    for (PointId p : a)
        for (PointId q : b) best = std::max(best, space.dist(p, q));
    return best;
}

NeighborIndex::NeighborIndex(const FiniteMetricSpace& space, double radius, bool strict)
    : radius_(radius), strict_(strict), lists_(space.size()) {
    const std::size_t n = space.size();
    for (PointId i = 0; i < n; ++i)
        for (PointId j = i + 1; j < n; ++j) {
            double d = space.dist(i, j);
            if (strict ? d < radius : d <= radius) {
                lists_[i].push_back(j);
                lists_[j].push_back(i);
            }
        }
}

std::vector<PointSet> components_at_scale(const NeighborIndex& index, const PointSet& s_set) {
    std::vector<char> in_set(index.size(), 0), seen(index.size(), 0);
    for (PointId p : s_set) in_set[p] = 1;
    std::vector<PointSet> out;
    std::vector<PointId> stack;
    for (PointId start : s_set) {
        if (seen[start]) continue;
        PointSet comp;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            PointId u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (PointId v : index.of(u))
                if (in_set[v] && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<PointSet> components_at_scale(const FiniteMetricSpace& space, const PointSet& s_set, double s) {
    if (!(s > 0)) throw Error("components_at_scale: scale must be positive");
    // Work on the subset only, so cost is quadratic in |S| rather than |X|.
    std::vector<char> seen(s_set.size(), 0);
    std::vector<PointSet> out;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < s_set.size(); ++start) {
        if (seen[start]) continue;
        PointSet comp;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            comp.push_back(s_set[u]);
            for (std::size_t v = 0; v < s_set.size(); ++v)
                if (!seen[v] && space.dist(s_set[u], s_set[v]) < s) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

PointSet set_union(const PointSet& a, const PointSet& b) {
    PointSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

PointSet set_difference(const PointSet& a, const PointSet& b) {
    PointSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

PointSet set_intersection(const PointSet& a, const PointSet& b) {
    PointSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const PointSet& a, const PointSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

PointSet make_point_set(std::vector<PointId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

}  // namespace widthlab
