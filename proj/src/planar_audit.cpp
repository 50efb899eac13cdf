#include "widthlab/planar_audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <thread>
#include <unordered_map>

namespace widthlab {

namespace {

using Q = boost::multiprecision::cpp_rational;

struct QP {
    Q x, y;
    bool operator==(const QP&) const = default;
};

QP to_q(const Vec2& v) { return {Q(v[0]), Q(v[1])}; }
Vec2 to_d(const QP& p) { return {p.x.convert_to<double>(), p.y.convert_to<double>()}; }

Q cross(const QP& a, const QP& b) { return a.x * b.y - a.y * b.x; }
Q dot(const QP& a, const QP& b) { return a.x * b.x + a.y * b.y; }
QP sub(const QP& a, const QP& b) { return {a.x - b.x, a.y - b.y}; }
QP lerp(const QP& a, const QP& b, const Q& t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }

struct Hit {
    Q t;  // on segment a
    Q u;  // on segment b
};

// All meeting parameters of segments [a0,a1] and [b0,b1]. Collinear overlaps
// give their two ends (one if the overlap is a point).
std::vector<Hit> intersect(const QP& a0, const QP& a1, const QP& b0, const QP& b1) {
    std::vector<Hit> out;
    const QP r = sub(a1, a0), s = sub(b1, b0), w = sub(b0, a0);
    const Q denom = cross(r, s);
    if (denom != 0) {
        Q t = cross(w, s) / denom, u = cross(w, r) / denom;
        if (t >= 0 && t <= 1 && u >= 0 && u <= 1) out.push_back({t, u});
        return out;
    }
    if (cross(w, r) != 0 || cross(w, s) != 0) return out;  // parallel, apart
    const Q rr = dot(r, r), ss = dot(s, s);
    if (rr == 0 && ss == 0) {
        if (a0 == b0) out.push_back({0, 0});
        return out;
    }
    if (rr == 0) {
        Q u = dot(sub(a0, b0), s) / ss;
        if (u >= 0 && u <= 1) out.push_back({0, u});
        return out;
    }
    Q tb0 = dot(w, r) / rr, tb1 = dot(sub(b1, a0), r) / rr;
    Q lo = std::max(Q(0), std::min(tb0, tb1)), hi = std::min(Q(1), std::max(tb0, tb1));
    if (lo > hi) return out;
    auto u_of = [&](const Q& t) { return ss == 0 ? Q(0) : dot(sub(lerp(a0, a1, t), b0), s) / ss; };
    out.push_back({lo, u_of(lo)});
    if (hi != lo) out.push_back({hi, u_of(hi)});
    return out;
}

bool boxes_meet(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    return std::max(a0[0], a1[0]) >= std::min(b0[0], b1[0]) && std::max(b0[0], b1[0]) >= std::min(a0[0], a1[0]) &&
           std::max(a0[1], a1[1]) >= std::min(b0[1], b1[1]) && std::max(b0[1], b1[1]) >= std::min(a0[1], a1[1]);
}

std::size_t segments_of(const DrawnEdge& e) { return e.polyline.size() - 1; }

const std::array<std::array<std::uint32_t, 2>, 10> kPairs = {{
    {0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4},
}};

// Position along a polyline: segment index and exact parameter.
struct Pos {
    std::size_t seg = 0;
    Q t;
    bool operator<(const Pos& o) const { return seg != o.seg ? seg < o.seg : t < o.t; }
};

struct ArcHit {
    Pos pos;  // along the first polyline
    QP point;
};

std::vector<ArcHit> hits_along(const Polyline& a, const Polyline& b) {
    std::vector<ArcHit> out;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        QP a0 = to_q(a[i]), a1 = to_q(a[i + 1]);
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
            if (!boxes_meet(a[i], a[i + 1], b[j], b[j + 1])) continue;
            for (const auto& h : intersect(a0, a1, to_q(b[j]), to_q(b[j + 1])))
                out.push_back({{i, h.t}, lerp(a0, a1, h.t)});
        }
    }
    return out;
}

// Piece of a polyline between two positions (from <= to).
Polyline between(const Polyline& p, const Pos& from, const QP& from_pt, const Pos& to, const QP& to_pt) {
    Polyline out{to_d(from_pt)};
    for (std::size_t k = from.seg + 1; k <= to.seg && k < p.size(); ++k)
        if (p[k] != out.back()) out.push_back(p[k]);
    Vec2 end = to_d(to_pt);
    if (end != out.back() || out.size() == 1) out.push_back(end);
    return out;
}

std::string tree_label(std::size_t v) { return "T" + std::to_string(v); }
std::string arc_label(const std::array<std::uint32_t, 2>& e) {
    return "b" + std::to_string(e[0]) + std::to_string(e[1]);
}

struct Candidate {
    FiberWitness w;
    bool valid = false;
};

bool key_less(const FiberWitness& a, const FiberWitness& b) {
    auto ka = std::make_tuple(a.p.edge, a.p.t, a.q.edge, a.q.t);
    auto kb = std::make_tuple(b.p.edge, b.p.t, b.q.edge, b.q.t);
    return ka < kb;
}

bool better(const FiberWitness& a, const Candidate& b) {
    if (!b.valid) return true;
    if (a.graph_dist != b.w.graph_dist) return a.graph_dist > b.w.graph_dist;
    return key_less(a, b.w);
}

FiberWitness make_witness(const Drawing& d, GraphPoint p, GraphPoint q, bool exact) {
    if (std::make_pair(q.edge, q.t) < std::make_pair(p.edge, p.t)) std::swap(p, q);
    FiberWitness w;
    w.p = p;
    w.q = q;
    w.graph_dist = graph_dist(d, p, q);
    Vec2 a = image_of(d, p), b = image_of(d, q);
    w.image_dist = std::hypot(a[0] - b[0], a[1] - b[1]);
    w.exact = exact;
    return w;
}

// Graph parameter of a planar point known to lie on the image of edge e
// between t0 and t1: the closest point of that piece.
GraphPoint preimage(const Drawing& d, std::uint32_t e, double t0, double t1, const Vec2& x) {
    const auto& poly = d.edges[e].polyline;
    const double m = static_cast<double>(segments_of(d.edges[e]));
    GraphPoint best{e, t0};
    double best_d = INFINITY;
    for (std::size_t k = 0; k + 1 < poly.size(); ++k) {
        double lo = static_cast<double>(k) / m, hi = static_cast<double>(k + 1) / m;
        if (hi < t0 || lo > t1) continue;
        const Vec2 &a = poly[k], &b = poly[k + 1];
        double vx = b[0] - a[0], vy = b[1] - a[1], len2 = vx * vx + vy * vy;
        double s = len2 == 0 ? 0.0 : std::clamp(((x[0] - a[0]) * vx + (x[1] - a[1]) * vy) / len2, 0.0, 1.0);
        double t = std::clamp((static_cast<double>(k) + s) / m, t0, t1);
        Vec2 img = image_of(d, {e, t});
        double dist = std::hypot(img[0] - x[0], img[1] - x[1]);
        if (dist < best_d) {
            best_d = dist;
            best = {e, t};
        }
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------

Drawing normalize_drawing(Drawing d, double resolution) {
    if (!(d.r > 0.0) || !std::isfinite(d.r)) throw DrawingError("drawing: R must be positive");
    if (!(resolution > 0.0)) throw DrawingError("drawing: snapping resolution must be positive");
    if (d.edges.size() != 10) throw DrawingError("drawing: K5 needs 10 edges, got " + std::to_string(d.edges.size()));
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    std::array<std::optional<Vec2>, 5> vertex;
    for (std::size_t i = 0; i < d.edges.size(); ++i) {
        auto& e = d.edges[i];
        if (e.u > 4 || e.v > 4 || e.u == e.v)
            throw DrawingError("drawing: edge " + std::to_string(i) + " has bad endpoints");
        if (!seen.insert(std::minmax(e.u, e.v)).second)
            throw DrawingError("drawing: edge " + std::to_string(i) + " repeats a vertex pair");
        if (e.polyline.size() < 2)
            throw DrawingError("drawing: edge " + std::to_string(i) + " polyline needs at least 2 vertices");
        for (auto& p : e.polyline)
            for (double& c : p) {
                if (!std::isfinite(c)) throw DrawingError("drawing: non-finite coordinate on edge " + std::to_string(i));
                c = std::round(c / resolution) * resolution;
            }
        for (auto [vid, pt] : {std::pair{e.u, e.polyline.front()}, std::pair{e.v, e.polyline.back()}}) {
            if (!vertex[vid]) vertex[vid] = pt;
            else if (*vertex[vid] != pt)
                throw DrawingError("drawing: edge " + std::to_string(i) + " disagrees on the image of vertex " +
                                   std::to_string(vid));
        }
    }
    return d;
}

double graph_dist(const Drawing& d, GraphPoint p, GraphPoint q) {
    const double len = d.edge_len();
    const auto& ep = d.edges.at(p.edge);
    const auto& eq = d.edges.at(q.edge);
    const std::array<std::pair<std::uint32_t, double>, 2> from{{{ep.u, p.t * len}, {ep.v, (1.0 - p.t) * len}}};
    const std::array<std::pair<std::uint32_t, double>, 2> to{{{eq.u, q.t * len}, {eq.v, (1.0 - q.t) * len}}};
    double best = INFINITY;
    for (auto [a, da] : from)
        for (auto [b, db] : to) best = std::min(best, da + (a == b ? 0.0 : len) + db);
    if (p.edge == q.edge) best = std::min(best, std::abs(p.t - q.t) * len);
    return best;
}

Vec2 image_of(const Drawing& d, GraphPoint p) {
    const auto& poly = d.edges.at(p.edge).polyline;
    const std::size_t m = poly.size() - 1;
    double x = std::clamp(p.t, 0.0, 1.0) * static_cast<double>(m);
    std::size_t k = std::min(static_cast<std::size_t>(x), m - 1);
    double s = x - static_cast<double>(k);
    return {poly[k][0] + s * (poly[k + 1][0] - poly[k][0]), poly[k][1] + s * (poly[k + 1][1] - poly[k][1])};
}

AuditResult audit_drawing(const Drawing& d, double collision_tol, const AuditOptions& opts) {
    if (!(collision_tol > 0.0)) throw DrawingError("audit: collision tolerance must be positive");
    if (opts.samples_per_segment == 0) throw DrawingError("audit: sampling rate must be positive");
    if (d.edges.size() != 10) throw DrawingError("audit: K5 needs 10 edges");

    struct Seg {
        std::uint32_t edge;
        std::size_t k;
        double m;
    };
    std::vector<Seg> segs;
    for (std::uint32_t e = 0; e < d.edges.size(); ++e) {
        if (d.edges[e].polyline.size() < 2) throw DrawingError("audit: polyline with fewer than 2 vertices");
        for (std::size_t k = 0; k < segments_of(d.edges[e]); ++k)
            segs.push_back({e, k, static_cast<double>(segments_of(d.edges[e]))});
    }
    auto point = [&](const Seg& s, std::size_t i) { return d.edges[s.edge].polyline[s.k + i]; };

    AuditResult res;
    Candidate best;
    auto offer = [&](const FiberWitness& w) {
        if (better(w, best)) best = {w, true};
    };

    // exact segment intersections
    for (std::size_t i = 0; i < segs.size(); ++i)
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            const Seg &a = segs[i], &b = segs[j];
            if (!boxes_meet(point(a, 0), point(a, 1), point(b, 0), point(b, 1))) continue;
            auto hits = intersect(to_q(point(a, 0)), to_q(point(a, 1)), to_q(point(b, 0)), to_q(point(b, 1)));
            if (hits.size() == 2) hits.push_back({(hits[0].t + hits[1].t) / 2, (hits[0].u + hits[1].u) / 2});
            for (const auto& h : hits) {
                ++res.exact_intersections;
                GraphPoint p{a.edge, (static_cast<double>(a.k) + h.t.convert_to<double>()) / a.m};
                GraphPoint q{b.edge, (static_cast<double>(b.k) + h.u.convert_to<double>()) / b.m};
                offer(make_witness(d, p, q, true));
            }
        }

    // tolerance collisions among samples
    std::vector<GraphPoint> samples;
    for (std::uint32_t e = 0; e < d.edges.size(); ++e) {
        const std::size_t total = segments_of(d.edges[e]) * opts.samples_per_segment;
        for (std::size_t i = 0; i <= total; ++i)
            samples.push_back({e, static_cast<double>(i) / static_cast<double>(total)});
    }
    res.samples = samples.size();
    std::vector<Vec2> img(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) img[i] = image_of(d, samples[i]);
    using Key = std::pair<long long, long long>;
    auto key_of = [&](const Vec2& v) {
        return Key{static_cast<long long>(std::floor(v[0] / collision_tol)),
                   static_cast<long long>(std::floor(v[1] / collision_tol))};
    };
    std::map<Key, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < samples.size(); ++i) buckets[key_of(img[i])].push_back(i);

    const unsigned threads = std::max(1u, opts.threads);
    std::vector<Candidate> local(threads);
    std::vector<std::size_t> pairs(threads, 0);
    auto worker = [&](unsigned w) {
        for (std::size_t i = w; i < samples.size(); i += threads) {
            Key k = key_of(img[i]);
            for (long long dx = -1; dx <= 1; ++dx)
                for (long long dy = -1; dy <= 1; ++dy) {
                    auto it = buckets.find({k.first + dx, k.second + dy});
                    if (it == buckets.end()) continue;
                    for (std::size_t j : it->second) {
                        if (j <= i) continue;
                        if (std::hypot(img[i][0] - img[j][0], img[i][1] - img[j][1]) > collision_tol) continue;
                        ++pairs[w];
                        FiberWitness cand = make_witness(d, samples[i], samples[j], false);
                        if (better(cand, local[w])) local[w] = {cand, true};
                    }
                }
        }
    };
    if (threads == 1) worker(0);
    else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }
    for (unsigned w = 0; w < threads; ++w) {
        res.tolerance_pairs += pairs[w];
        if (local[w].valid) offer(local[w].w);
    }
    if (best.valid) res.witness = best.w;
    return res;
}

SimpleArc simplify_to_simple_arc(const Polyline& polyline) {
    if (polyline.size() < 2) throw DrawingError("simplify_to_simple_arc: needs at least 2 vertices");
    std::vector<QP> out{to_q(polyline[0])};
    for (std::size_t k = 1; k < polyline.size(); ++k) {
        const QP target = to_q(polyline[k]);
        const QP cur = out.back();
        if (cur == target) continue;
        std::optional<Pos> earliest;
        QP where;
        const std::size_t last = out.size() >= 2 ? out.size() - 2 : 0;
        for (std::size_t j = 0; j + 1 < out.size(); ++j)
            for (const auto& h : intersect(out[j], out[j + 1], cur, target)) {
                if (j == last && h.t == 1 && h.u == 0) continue;  // the shared vertex
                Pos p{j, h.t};
                if (!earliest || p < *earliest) {
                    earliest = p;
                    where = lerp(out[j], out[j + 1], h.t);
                }
            }
        if (earliest) {
            out.resize(earliest->seg + 1);
            if (!(where == out.back())) out.push_back(where);
        }
        if (!(target == out.back())) out.push_back(target);
    }
    SimpleArc arc;
    for (const auto& p : out) arc.points.push_back(to_d(p));
    if (arc.points.size() == 1) {
        arc.points.push_back(arc.points.front());
        arc.degenerate = true;
    }
    return arc;
}

bool is_simple(const Polyline& polyline) {
    if (polyline.size() < 2) return false;
    std::vector<QP> q;
    for (const auto& p : polyline) q.push_back(to_q(p));
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        if (q[i] == q[i + 1]) return false;
        for (std::size_t j = i + 1; j + 1 < q.size(); ++j) {
            for (const auto& h : intersect(q[i], q[i + 1], q[j], q[j + 1]))
                if (!(j == i + 1 && h.t == 1 && h.u == 0)) return false;
        }
    }
    return true;
}

std::vector<Vec2> polyline_intersections(const Polyline& a, const Polyline& b) {
    std::vector<Vec2> out;
    for (const auto& h : hits_along(a, b)) out.push_back(to_d(h.point));
    return out;
}

Polyline edge_piece(const Drawing& d, std::uint32_t edge, double t0, double t1) {
    if (!(t0 <= t1)) throw DrawingError("edge_piece: t0 must not exceed t1");
    const auto& poly = d.edges.at(edge).polyline;
    const double m = static_cast<double>(poly.size() - 1);
    Polyline out{image_of(d, {edge, t0})};
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        double t = static_cast<double>(k) / m;
        if (t > t0 && t < t1) out.push_back(poly[k]);
    }
    out.push_back(image_of(d, {edge, t1}));
    return out;
}

TreesDiagnostic k5_trees_construction(const Drawing& d) {
    TreesDiagnostic diag;
    const double reach = 0.2;  // 2R along an edge of length 10R

    for (std::uint32_t v = 0; v < 5; ++v) {
        auto& tree = diag.trees[v];
        std::size_t starting_at_v = 0;
        for (std::uint32_t e = 0; e < d.edges.size(); ++e) {
            const auto& edge = d.edges[e];
            if (edge.u != v && edge.v != v) continue;
            Polyline piece = edge.u == v ? edge_piece(d, e, 0.0, reach) : edge_piece(d, e, 1.0 - reach, 1.0);
            if (edge.v == v) std::reverse(piece.begin(), piece.end());
            TreeArc arc{e, edge.u == v ? 0.0 : 1.0 - reach, edge.u == v ? reach : 1.0, {}};
            Polyline alpha = simplify_to_simple_arc(piece).points;
            if (tree.empty()) {
                arc.points = std::move(alpha);
                tree.push_back(std::move(arc));
                continue;
            }
            // cut at the last point of alpha already on the tree
            std::optional<ArcHit> last;
            for (const auto& t : tree)
                for (auto& h : hits_along(alpha, t.points))
                    if (!last || last->pos < h.pos) last = h;
            Pos end{alpha.size() - 2, Q(1)};
            if (!last) last = ArcHit{{0, Q(0)}, to_q(alpha.front())};
            arc.points = between(alpha, last->pos, last->point, end, to_q(alpha.back()));
            if (arc.points.front() == tree.front().points.front()) ++starting_at_v;
            tree.push_back(std::move(arc));
        }
        diag.endpoint_counts[v] = starting_at_v == 1 ? 4 : 5;
    }

    for (std::uint32_t e = 0; e < d.edges.size(); ++e) {
        const auto& edge = d.edges[e];
        Polyline alpha = simplify_to_simple_arc(edge_piece(d, e, reach, 1.0 - reach)).points;
        std::optional<ArcHit> leave;
        for (const auto& t : diag.trees[edge.u])
            for (auto& h : hits_along(alpha, t.points))
                if (!leave || leave->pos < h.pos) leave = h;
        if (!leave) leave = ArcHit{{0, Q(0)}, to_q(alpha.front())};
        std::optional<ArcHit> enter;
        for (const auto& t : diag.trees[edge.v])
            for (auto& h : hits_along(alpha, t.points))
                if (!(h.pos < leave->pos) && (!enter || h.pos < enter->pos)) enter = h;
        TreeArc arc{e, reach, 1.0 - reach, {}};
        if (enter) arc.points = between(alpha, leave->pos, leave->point, enter->pos, enter->point);
        else arc.points = alpha;
        diag.connectors.push_back({{edge.u, edge.v}, std::move(arc)});
    }

    // Crossings: keep, per labelled pair, the one whose preimages are farthest apart.
    auto record = [&](const std::string& kind, const std::string& la, const TreeArc& a, const std::string& lb,
                      const TreeArc& b) {
        for (const auto& x : polyline_intersections(a.points, b.points)) {
            GraphPoint p = preimage(d, a.edge, a.t0, a.t1, x), q = preimage(d, b.edge, b.t0, b.t1, x);
            FiberWitness w = make_witness(d, p, q, false);
            auto it = std::find_if(diag.crossings.begin(), diag.crossings.end(),
                                   [&](const DiagnosticCrossing& c) { return c.a == la && c.b == lb; });
            if (it == diag.crossings.end()) diag.crossings.push_back({kind, la, lb, x, w});
            else if (w.graph_dist > it->preimages->graph_dist) {
                it->point = x;
                it->preimages = w;
            }
        }
    };
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = a + 1; b < 5; ++b)
            for (const auto& ta : diag.trees[a])
                for (const auto& tb : diag.trees[b]) record("tree-tree", tree_label(a), ta, tree_label(b), tb);
    for (std::size_t i = 0; i < diag.connectors.size(); ++i) {
        const auto& [ei, ai] = diag.connectors[i];
        for (std::size_t j = i + 1; j < diag.connectors.size(); ++j) {
            const auto& [ej, aj] = diag.connectors[j];
            record("arc-arc", arc_label(ei), ai, arc_label(ej), aj);
        }
        for (std::uint32_t k = 0; k < 5; ++k) {
            if (k == ei[0] || k == ei[1]) continue;
            for (const auto& t : diag.trees[k]) record("arc-tree", arc_label(ei), ai, tree_label(k), t);
        }
    }
    // Connectors that share an endpoint tree meet there; only crossings away from it count.
    std::erase_if(diag.crossings, [](const DiagnosticCrossing& c) {
        return c.kind == "arc-arc" && c.preimages && c.preimages->graph_dist == 0.0;
    });
    diag.found = !diag.crossings.empty();
    return diag;
}

// ---------------------------------------------------------------------------

namespace {

Drawing straight_drawing(double r, const std::array<Vec2, 5>& pos, std::size_t segments,
                         const std::function<Vec2(std::size_t, std::size_t)>& bend) {
    Drawing d;
    d.r = r;
    for (std::size_t e = 0; e < kPairs.size(); ++e) {
        DrawnEdge edge{kPairs[e][0], kPairs[e][1], {}};
        const Vec2 &a = pos[edge.u], &b = pos[edge.v];
        for (std::size_t k = 0; k <= segments; ++k) {
            double s = static_cast<double>(k) / static_cast<double>(segments);
            Vec2 p{a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])};
            if (k > 0 && k < segments) {
                Vec2 off = bend(e, k);
                p[0] += off[0];
                p[1] += off[1];
            }
            edge.polyline.push_back(p);
        }
        d.edges.push_back(std::move(edge));
    }
    return normalize_drawing(std::move(d));
}

std::array<Vec2, 5> pentagon_positions() {
    std::array<Vec2, 5> pos;
    for (std::size_t i = 0; i < 5; ++i) {
        double a = std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(i) / 5.0;
        pos[i] = {std::cos(a), std::sin(a)};
    }
    return pos;
}

}  // namespace

Drawing pentagon_drawing(double r, std::size_t segments) {
    return straight_drawing(r, pentagon_positions(), segments, [](std::size_t, std::size_t) { return Vec2{0, 0}; });
}

Drawing collapsed_drawing(double r, std::size_t segments) {
    std::array<Vec2, 5> pos{};
    return straight_drawing(r, pos, segments, [](std::size_t, std::size_t) { return Vec2{0, 0}; });
}

Drawing perturbed_drawing(double r, std::uint64_t seed, std::size_t segments, double noise) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto pos = pentagon_positions();
    for (auto& p : pos) {
        p[0] += noise * unit(rng);
        p[1] += noise * unit(rng);
    }
    std::vector<Vec2> offsets(kPairs.size() * (segments + 1));
    for (auto& o : offsets) o = {0.5 * noise * unit(rng), 0.5 * noise * unit(rng)};
    return straight_drawing(r, pos, segments,
                            [&](std::size_t e, std::size_t k) { return offsets[e * (segments + 1) + k]; });
}

}  // namespace widthlab
