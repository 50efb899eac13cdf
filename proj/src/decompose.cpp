#include "widthlab/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace widthlab {

// ---------------------------------------------------------------------------
// Epsilon table

EpsilonTable EpsilonTable::standard(int n) {
    if (n < 1) throw Error("EpsilonTable: n must be positive");
    EpsilonTable t;
    t.values_.push_back(Rational(1, 100));
    for (int k = 2; k <= n; ++k) {
        boost::multiprecision::cpp_int denom = boost::multiprecision::pow(boost::multiprecision::cpp_int(1000), k + 1);
        t.values_.push_back(t.values_.back() / Rational(denom));
    }
    return t;
}

EpsilonTable EpsilonTable::chunked(int n) {
    if (n < 1) throw Error("EpsilonTable: n must be positive");
    EpsilonTable t;
    t.values_.push_back(Rational(1, 100));
    for (int k = 2; k <= n; ++k) {
        boost::multiprecision::cpp_int denom =
            10 * boost::multiprecision::pow(boost::multiprecision::cpp_int(1000), k + 1);
        t.values_.push_back(t.values_.back() / Rational(denom));
    }
    return t;
}

const Rational& EpsilonTable::exact(int k) const {
    if (k < 1 || k > size()) throw Error("EpsilonTable: index out of range");
    return values_[static_cast<std::size_t>(k - 1)];
}

std::string EpsilonTable::str(int k) const {
    const auto& v = exact(k);
    return boost::multiprecision::numerator(v).str() + "/" + boost::multiprecision::denominator(v).str();
}

// ---------------------------------------------------------------------------
// Hypothesis

double zeta_for(const FiniteMetricSpace& space, double r) { return std::max(r / 1000.0, space.mesh_h()); }

HypothesisReport check_hypothesis(const FiniteMetricSpace& space, double r, int n, double eps_scale, bool chunked) {
    if (n < 1) throw Error("check_hypothesis: n must be positive");
    if (!(r >= 100.0 * space.mesh_h())) {
        std::ostringstream os;
        os << "check_hypothesis: R = " << r << " is below 100*mesh_h = " << 100.0 * space.mesh_h();
        throw Error(os.str());
    }
    HypothesisReport rep;
    rep.r = r;
    rep.n = n;
    rep.zeta = zeta_for(space, r);
    rep.zeta_clamped = r / 1000.0 < space.mesh_h();
    const EpsilonTable table = chunked ? EpsilonTable::chunked(n) : EpsilonTable::standard(n);
    rep.threshold = table.at(n) * power(r, n) * eps_scale;

    NeighborIndex centers(space, rep.zeta, false);
    ContentOptions opts;
    opts.centers = &centers;
    rep.values.resize(space.size());
    for (PointId x = 0; x < space.size(); ++x) {
        double v = greedy_content(space, ball(space, x, r), n, rep.zeta, opts).value;
        rep.values[x] = v;
        if (x == 0 || v > rep.worst_value) {
            rep.worst_value = v;
            rep.worst_point = x;
        }
        if (v > rep.threshold) ++rep.violations;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

namespace {

void gate_hypothesis(const HypothesisReport& rep, const DecomposeOptions& opts, int level) {
    if (rep.pass || opts.force) return;
    std::ostringstream os;
    os << "hypothesis fails at level " << level << " (n=" << rep.n << ", R=" << rep.r << "): point "
       << rep.worst_point << " has ball content " << rep.worst_value << " > " << rep.threshold;
    throw HypothesisError(os.str(), rep, level);
}

CertificateReport gate_certificate(const FiniteMetricSpace& space, const WidthCertificate& cert) {
    CertificateReport rep = verify_certificate(space, cert, true);
    if (!rep.pass) {
        std::string msg = "refusing to emit certificate:";
        for (const auto& p : rep.problems) msg += " " + p + ";";
        throw VerificationError(msg, rep);
    }
    return rep;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Glues one cone per piece onto the separator's complex.
WidthCertificate assemble_cones(const FiniteMetricSpace& space, const NeighborIndex& adjacency, const PointSet& z,
                                const std::vector<PointSet>& pieces, const WidthCertificate* sub, double r, int n,
                                LevelStats& stats) {
    std::vector<long> zpos(space.size(), -1);
    for (std::size_t k = 0; k < z.size(); ++k) zpos[z[k]] = static_cast<long>(k);

    SimplicialComplex complex = sub ? sub->complex : SimplicialComplex{};
    std::vector<SimplexId> assignment(space.size(), 0);
    for (std::size_t k = 0; k < z.size(); ++k) assignment[z[k]] = sub->assignment[k];

    struct ConeRecord {
        std::size_t piece;
        std::vector<SimplexId> hit;
        std::vector<SimplexId> sigma;
        VertexId apex;
    };
    std::vector<ConeRecord> cones;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        std::vector<SimplexId> hit;
        for (PointId u : pieces[i])
            for (PointId v : adjacency.of(u))
                if (zpos[v] >= 0) hit.push_back(sub->assignment[static_cast<std::size_t>(zpos[v])]);
        std::sort(hit.begin(), hit.end());
        hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
        auto sigma = hit.empty() ? std::vector<SimplexId>{} : minimal_subcomplex_containing(sub->complex, hit);
        VertexId apex = complex.next_free_vertex();
        complex = cone_attach(complex, sigma, apex);
        SimplexId apex_id = *complex.find({apex});
        for (PointId u : pieces[i]) assignment[u] = apex_id;
        cones.push_back({i, std::move(hit), std::move(sigma), apex});
    }

    WidthCertificate cert = make_certificate(space, std::move(complex), std::move(assignment), r, n);

    // Each cone simplex's closed fiber sits inside (piece) ∪ (closed fiber of a
    // hit simplex), and the two are within scale_s of each other.
    const double s = adjacency.radius();
    for (const auto& cone : cones) {
        double piece_diam = diameter(space, pieces[cone.piece]);
        for (SimplexId face : cone.sigma) {
            const Simplex& fs = sub->complex.simplex(face);
            double sub_fiber = 0.0;
            for (SimplexId h : cone.hit) {
                const Simplex& hs = sub->complex.simplex(h);
                if (std::includes(hs.begin(), hs.end(), fs.begin(), fs.end()))
                    sub_fiber = std::max(sub_fiber, sub->closed_fiber_diams[h]);
            }
            Simplex cs = fs;
            cs.push_back(cone.apex);
            std::sort(cs.begin(), cs.end());
            SimplexId cid = *cert.complex.find(cs);
            double bound = piece_diam + sub_fiber + s;
            if (cert.closed_fiber_diams[cid] > bound * (1.0 + 1e-12)) stats.fiber_arithmetic_ok = false;
        }
    }
    return cert;
}

double default_delta(int n, double r) {
    const EpsilonTable t = EpsilonTable::standard(std::max(1, n - 1));
    return 0.5 * t.at(std::max(1, n - 1)) * power(r, n - 1) / power(1000.0, n);
}

// Shared tail of every n >= 2 variant: recursion on Z and cone assembly.
DecomposeResult finish_level(const FiniteMetricSpace& space, double r, int n, const PointSet& z,
                             const std::vector<PointSet>& pieces, LevelStats stats, HypothesisReport hyp,
                             const DecomposeOptions& opts, bool chunked) {
    const double s = resolved_scale(space, opts.separator);
    NeighborIndex adjacency(space, s, true);

    DecomposeResult out;
    std::optional<DecomposeResult> sub;
    if (!z.empty()) {
        FiniteMetricSpace zspace = space.restrict_to(z);
        DecomposeOptions sub_opts = opts;
        sub_opts.base_point = 0;
        if (!(r / 1000.0 >= 100.0 * zspace.mesh_h())) {
            // The next level has no room for shells: nothing can be certified there.
            HypothesisReport rep;
            rep.r = r / 1000.0;
            rep.n = n - 1;
            rep.pass = false;
            std::ostringstream os;
            os << "separator recursion: R/1000 = " << r / 1000.0 << " is below 100*mesh_h = "
               << 100.0 * zspace.mesh_h();
            throw HypothesisError(os.str(), rep, 1);
        }
        try {
            sub = chunked ? decompose_chunked(zspace, r / 1000.0, n - 1, sub_opts)
                          : decompose(zspace, r / 1000.0, n - 1, sub_opts);
        } catch (const HypothesisError& e) {
            throw HypothesisError(std::string("separator recursion: ") + e.what(), e.report(), e.level() + 1);
        }
    }
    stats.separator_size = z.size();
    stats.pieces = pieces.size();
    out.certificate =
        assemble_cones(space, adjacency, z, pieces, sub ? &sub->certificate : nullptr, r, n, stats);
    out.hypothesis = std::move(hyp);
    out.separator = z;
    out.levels.push_back(stats);
    if (sub)
        for (auto& l : sub->levels) out.levels.push_back(l);
    out.verification = gate_certificate(space, out.certificate);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// n = 1

DecomposeResult decompose_uw0(const FiniteMetricSpace& space, double r, const DecomposeOptions& opts) {
    if (!space.valid(opts.base_point)) throw Error("decompose_uw0: invalid base point");
    HypothesisReport hyp = check_hypothesis(space, r, 1, opts.eps_scale);
    gate_hypothesis(hyp, opts, 0);

    const double zeta = r / 50.0;  // twice R/100
    const PointId x0 = opts.base_point;
    double far = 0.0;
    for (PointId p = 0; p < space.size(); ++p) far = std::max(far, space.dist(x0, p));
    const auto annuli = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(far / (10.0 * r))));

    NeighborIndex centers(space, zeta, false);
    ContentOptions copts;
    copts.centers = &centers;
    std::vector<CoverBall> balls;
    for (std::size_t k = 1; k <= annuli; ++k) {
        const double lo = 10.0 * static_cast<double>(k - 1) * r, hi = 10.0 * static_cast<double>(k) * r;
        PointSet ring;
        for (PointId p = 0; p < space.size(); ++p) {
            double d = space.dist(x0, p);
            if (d >= lo && d <= hi) ring.push_back(p);
        }
        if (ring.empty()) continue;
        auto est = greedy_content(space, ring, 1, zeta, copts);
        balls.insert(balls.end(), est.cover.begin(), est.cover.end());
    }

    // Balls sharing a point are equivalent, and so are balls holding points
    // closer than the scale s: on a net that is what intersecting means. The
    // link length is capped at the ball radius cap R/50.
    UnionFind uf(balls.size());
    std::vector<long> first_ball(space.size(), -1);
    for (std::size_t b = 0; b < balls.size(); ++b)
        for (PointId p = 0; p < space.size(); ++p) {
            if (space.dist(balls[b].center, p) > balls[b].radius) continue;
            if (first_ball[p] < 0) first_ball[p] = static_cast<long>(b);
            else uf.unite(static_cast<std::size_t>(first_ball[p]), b);
        }
    NeighborIndex linked(space, std::min(resolved_scale(space, opts.separator), zeta), true);
    for (PointId p = 0; p < space.size(); ++p)
        for (PointId q : linked.of(p))
            if (first_ball[p] >= 0 && first_ball[q] >= 0)
                uf.unite(static_cast<std::size_t>(first_ball[p]), static_cast<std::size_t>(first_ball[q]));

    SimplicialComplex complex;
    std::vector<long> vertex_of_root(balls.size(), -1);
    std::vector<SimplexId> assignment(space.size(), 0);
    VertexId next = 0;
    for (PointId p = 0; p < space.size(); ++p) {
        if (first_ball[p] < 0) throw Error("decompose_uw0: internal error, point not covered");
        std::size_t root = uf.find(static_cast<std::size_t>(first_ball[p]));
        if (vertex_of_root[root] < 0) vertex_of_root[root] = next++;
        assignment[p] = complex.add_closed({static_cast<VertexId>(vertex_of_root[root])});
    }

    LevelStats stats;
    stats.n = 1;
    stats.r = r;
    stats.zeta = zeta;
    stats.points = space.size();
    stats.pieces = next;
    stats.hypothesis_pass = hyp.pass;
    stats.chunks = annuli;

    DecomposeResult out;
    out.certificate = make_certificate(space, std::move(complex), std::move(assignment), r, 1);
    stats.max_class_diameter = out.certificate.max_fiber;
    out.hypothesis = std::move(hyp);
    out.levels.push_back(stats);
    out.verification = gate_certificate(space, out.certificate);
    return out;
}

// ---------------------------------------------------------------------------
// n >= 2

DecomposeResult decompose(const FiniteMetricSpace& space, double r, int n, const DecomposeOptions& opts) {
    if (n < 1) throw Error("decompose: n must be positive");
    if (n == 1) return decompose_uw0(space, r, opts);
    HypothesisReport hyp = check_hypothesis(space, r, n, opts.eps_scale);
    gate_hypothesis(hyp, opts, 0);

    const double zeta = zeta_for(space, r);
    const double d = r / 4.0;
    const double delta = opts.delta.value_or(default_delta(n, r));
    SeparatorResult sep = minimal_separator(space, d, n, zeta, delta, opts.separator);

    LevelStats stats;
    stats.n = n;
    stats.r = r;
    stats.zeta = zeta;
    stats.d = d;
    stats.points = space.size();
    stats.separator_content = sep.content.value;
    stats.swaps_accepted = sep.swaps_accepted;
    stats.stable = sep.stable;
    stats.hypothesis_pass = hyp.pass;
    const EpsilonTable t = EpsilonTable::standard(n - 1);
    stats.localization = localized_smallness(space, sep.z, r / 1000.0, n - 1, zeta,
                                             t.at(n - 1) * power(r / 1000.0, n - 1));
    auto out = finish_level(space, r, n, sep.z, sep.pieces, stats, std::move(hyp), opts, false);
    return out;
}

DecomposeResult decompose_chunked(const FiniteMetricSpace& space, double r, int n, const DecomposeOptions& opts) {
    if (n < 1) throw Error("decompose_chunked: n must be positive");
    if (n == 1) return decompose_uw0(space, r, opts);
    if (!space.valid(opts.base_point)) throw Error("decompose_chunked: invalid base point");
    const PointId x0 = opts.base_point;
    double far = 0.0;
    for (PointId p = 0; p < space.size(); ++p) far = std::max(far, space.dist(x0, p));
    if (far <= 10.0 * r) return decompose(space, r, n, opts);  // a single annulus

    HypothesisReport hyp = check_hypothesis(space, r, n, opts.eps_scale, true);
    gate_hypothesis(hyp, opts, 0);

    const double zeta = zeta_for(space, r);
    const double d = r / 4.0;
    const double delta = opts.delta.value_or(default_delta(n, r));
    const double s = resolved_scale(space, opts.separator);
    const auto annuli = static_cast<std::size_t>(std::ceil(far / (10.0 * r)));

    // A_k = [10(k-1)R, 10kR], B_k = [10(k-1)R + 5R, 10kR + 5R]
    std::vector<PointSet> chunks;
    for (std::size_t k = 1; k <= annuli; ++k)
        for (double offset : {0.0, 5.0 * r}) {
            const double lo = 10.0 * static_cast<double>(k - 1) * r + offset, hi = lo + 10.0 * r;
            PointSet c;
            for (PointId p = 0; p < space.size(); ++p) {
                double dd = space.dist(x0, p);
                if (dd >= lo && dd <= hi) c.push_back(p);
            }
            if (!c.empty()) chunks.push_back(std::move(c));
        }

    LevelStats stats;
    stats.n = n;
    stats.r = r;
    stats.zeta = zeta;
    stats.d = d;
    stats.points = space.size();
    stats.hypothesis_pass = hyp.pass;
    stats.chunks = chunks.size();
    stats.stable = true;

    std::vector<PointId> united;
    for (const auto& chunk : chunks) {
        FiniteMetricSpace sub = space.restrict_to(chunk);
        SeparatorResult sep = minimal_separator(sub, d, n, zeta, delta, opts.separator);
        for (PointId p : sep.z) united.push_back(chunk[p]);
        stats.swaps_accepted += sep.swaps_accepted;
        stats.stable = stats.stable && sep.stable;
    }
    PointSet z = make_point_set(std::move(united));

    // Global re-verification of the union; the pieces are the W_ij.
    NeighborIndex adjacency(space, s, true);
    SeparationCheck check = is_separating(space, adjacency, z, d);
    if (!check.ok) {
        std::ostringstream os;
        os << "decompose_chunked: united separator leaves a component of diameter " << check.oversized_diam
           << " > D = " << d;
        throw Error(os.str());
    }
    stats.separator_content = greedy_content(space, z, n - 1, zeta).value;
    const EpsilonTable t = EpsilonTable::chunked(n - 1 > 0 ? n - 1 : 1);
    stats.localization = localized_smallness(space, z, r / 1000.0, n - 1, zeta,
                                             t.at(std::max(1, n - 1)) * power(r / 1000.0, n - 1));
    auto out = finish_level(space, r, n, z, check.pieces, stats, std::move(hyp), opts, true);
    out.separator_reverified = true;
    return out;
}

// ---------------------------------------------------------------------------
// Boundary condition

PointSet discrete_boundary(const FiniteMetricSpace& space, const PointSet& u, double scale_s) {
    std::vector<char> inside(space.size(), 0);
    for (PointId p : u) inside[p] = 1;
    PointSet out;
    for (PointId p : u)
        for (PointId q = 0; q < space.size(); ++q)
            if (!inside[q] && space.dist(p, q) < scale_s) {
                out.push_back(p);
                break;
            }
    return out;
}

Neighborhoods ball_neighborhoods(const FiniteMetricSpace& space, double radius) {
    Neighborhoods out;
    for (PointId x = 0; x < space.size(); ++x) out.emplace(x, ball(space, x, radius));
    return out;
}

BoundaryReport check_boundary_condition(const FiniteMetricSpace& space, double r, int n,
                                        const Neighborhoods& neighborhoods, std::optional<double> scale_s,
                                        double eps_scale) {
    if (n < 1) throw Error("check_boundary_condition: n must be positive");
    const double s = scale_s.value_or(default_scale(space));
    BoundaryReport rep;
    rep.r = r;
    rep.n = n;
    rep.threshold = EpsilonTable::standard(n).at(n) * power(r, n - 1) * eps_scale;
    rep.boundary_content.assign(space.size(), 0.0);
    rep.reach.assign(space.size(), 0.0);
    for (PointId x = 0; x < space.size(); ++x) {
        auto it = neighborhoods.find(x);
        if (it == neighborhoods.end()) throw Error("check_boundary_condition: no neighborhood for point " + std::to_string(x));
        const PointSet& u = it->second;
        if (!is_subset(ball(space, x, r), u))
            throw Error("check_boundary_condition: neighborhood of point " + std::to_string(x) +
                        " does not contain ball(x, R)");
        double reach = 0.0;
        for (PointId p : u) reach = std::max(reach, space.dist(x, p));
        rep.reach[x] = reach;
        if (reach > 10.0 * r) ++rep.containment_failures;
        PointSet bd = discrete_boundary(space, u, s);
        double c = bd.empty() ? 0.0 : greedy_content(space, bd, n - 1, kUnrestricted).value;
        rep.boundary_content[x] = c;
        if (c > rep.worst_content || x == 0) {
            rep.worst_content = c;
            rep.worst_point = x;
        }
        if (c > rep.threshold) ++rep.content_failures;
    }
    rep.pass = rep.containment_failures == 0 && rep.content_failures == 0;
    return rep;
}

DecomposeResult decompose_from_boundaries(const FiniteMetricSpace& space, double r, int n,
                                          const Neighborhoods& neighborhoods, const DecomposeOptions& opts) {
    if (n < 2) return decompose_uw0(space, r, opts);
    const double s = resolved_scale(space, opts.separator);
    BoundaryReport brep = check_boundary_condition(space, r, n, neighborhoods, s, opts.eps_scale);
    HypothesisReport hyp;
    hyp.r = r;
    hyp.n = n;
    hyp.threshold = brep.threshold;
    hyp.values = brep.boundary_content;
    hyp.pass = brep.pass;
    hyp.worst_point = brep.worst_point;
    hyp.worst_value = brep.worst_content;
    hyp.violations = brep.containment_failures + brep.content_failures;
    hyp.zeta = zeta_for(space, r);
    gate_hypothesis(hyp, opts, 0);

    // Seed: walk points by id; each free point contributes the boundary of its
    // neighborhood (relative to still-free points) and claims the interior.
    enum : char { free_pt = 0, claimed = 1, cut = 2 };
    std::vector<char> state(space.size(), free_pt);
    for (PointId x = 0; x < space.size(); ++x) {
        if (state[x] != free_pt) continue;
        PointSet u;
        for (PointId p : neighborhoods.at(x))
            if (state[p] == free_pt) u.push_back(p);
        PointSet bd = discrete_boundary(space, u, s);
        for (PointId p : bd) state[p] = cut;
        for (PointId p : u)
            if (state[p] == free_pt) state[p] = claimed;
    }
    PointSet z;
    for (PointId p = 0; p < space.size(); ++p)
        if (state[p] == cut) z.push_back(p);

    const double d = r / 4.0;
    const double zeta = zeta_for(space, r);
    NeighborIndex adjacency(space, s, true);
    SeparationCheck check = is_separating(space, adjacency, z, d);
    std::vector<PointId> extra;
    if (!check.ok) {
        // split oversized pieces with shells inside each piece
        for (const auto& piece : check.pieces) {
            if (diameter(space, piece) <= d) continue;
            FiniteMetricSpace sub = space.restrict_to(piece);
            SeparatorResult sep = initial_separator(sub, d, n, zeta, opts.separator);
            for (PointId p : sep.z) extra.push_back(piece[p]);
        }
        z = set_union(z, make_point_set(std::move(extra)));
        check = is_separating(space, adjacency, z, d);
        if (!check.ok) throw Error("decompose_from_boundaries: could not separate");
    }

    LevelStats stats;
    stats.n = n;
    stats.r = r;
    stats.zeta = zeta;
    stats.d = d;
    stats.points = space.size();
    stats.hypothesis_pass = hyp.pass;
    stats.separator_content = greedy_content(space, z, n - 1, zeta).value;
    return finish_level(space, r, n, z, check.pieces, stats, std::move(hyp), opts, false);
}

}  // namespace widthlab
