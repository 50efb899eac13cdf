#include "widthlab/separator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace widthlab {

namespace {

bool diameter_at_most(const FiniteMetricSpace& space, const PointSet& s, double d, double* measured) {
    double best = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            best = std::max(best, space.dist(s[i], s[j]));
            if (best > d) {
                *measured = diameter(space, s);
                return false;
            }
        }
    *measured = best;
    return true;
}

// Shared per-run state: adjacency at scale s, center lookup at zeta.
struct Context {
    const FiniteMetricSpace& space;
    double s;
    double width;
    int dim;  // content dimension n-1
    double zeta;
    ContentMethod method;
    NeighborIndex adjacency;
    std::unique_ptr<NeighborIndex> centers;

    Context(const FiniteMetricSpace& sp, const SeparatorConfig& cfg, int n, double z)
        : space(sp),
          s(resolved_scale(sp, cfg)),
          width(resolved_shell_width(sp, cfg)),
          dim(n - 1),
          zeta(z),
          method(sp.size() <= cfg.exhaustive_limit ? ContentMethod::exact : ContentMethod::greedy),
          adjacency(sp, s, true) {
        if (n < 1) throw Error("separator: n must be positive");
        if (zeta < sp.mesh_h()) throw InfeasibleError("separator: zeta below mesh_h");
        if (std::isfinite(zeta) && sp.size() > 64) centers = std::make_unique<NeighborIndex>(sp, zeta, false);
    }

    ContentOptions content_opts() const {
        ContentOptions o;
        o.centers = centers.get();
        o.exact_budget = 64;
        return o;
    }

    ContentEstimate content(const PointSet& z) const {
        return content_with(method, space, z, dim, zeta, content_opts());
    }
};

SeparatorResult package(const Context& ctx, PointSet z, std::vector<PointSet> pieces, double d) {
    SeparatorResult r;
    r.content = ctx.content(z);
    r.z = std::move(z);
    r.pieces = std::move(pieces);
    r.d = d;
    r.scale_s = ctx.s;
    return r;
}

SeparatorResult initial_with(const Context& ctx, double d) {
    const auto& space = ctx.space;
    if (!(d >= 4.0 * space.mesh_h()) || !(d >= 4.0 * ctx.width)) {
        std::ostringstream os;
        os << "initial_separator: space too coarse for D=" << d << " (need D >= 4*mesh_h and D >= 4*shell width "
           << ctx.width << ")";
        throw Error(os.str());
    }
    const PointSet all = space.all_points();
    double measured = 0.0;
    if (diameter_at_most(space, all, d, &measured)) {
        auto check = is_separating(space, ctx.adjacency, {}, d);
        return package(ctx, {}, std::move(check.pieces), d);
    }

    enum : char { free_pt = 0, claimed = 1, cut = 2 };
    std::vector<char> state(space.size(), free_pt);
    const double lo = d / 4.0, hi = d / 2.0;
    SliceOptions so;
    so.method = ctx.method;
    so.stop_at_zero = true;
    so.content = ctx.content_opts();
    for (PointId c = 0; c < space.size(); ++c) {
        if (state[c] != free_pt) continue;
        PointSet domain;
        for (PointId p = 0; p < space.size(); ++p)
            if (state[p] == free_pt) domain.push_back(p);
        so.domain = &domain;
        CheapSphere cs = cheapest_shell_in_range(space, c, lo, hi, ctx.width, ctx.dim, ctx.zeta, kUnrestricted, so);
        for (PointId p : cs.shell.members) state[p] = cut;
        for (PointId p : domain)
            if (state[p] == free_pt && space.dist(c, p) < cs.r) state[p] = claimed;
    }
    PointSet z;
    for (PointId p = 0; p < space.size(); ++p)
        if (state[p] == cut) z.push_back(p);
    auto check = is_separating(space, ctx.adjacency, z, d);
    if (!check.ok) throw Error("initial_separator: internal error, shell cover failed to separate");
    auto res = package(ctx, std::move(z), std::move(check.pieces), d);
    res.warnings.push_back("gap heuristic: initial separator");
    return res;
}

SwapOutcome swap_with(const Context& ctx, const SeparatorResult& current, PointId x, double big_r, double tolerance) {
    const auto& space = ctx.space;
    SwapOutcome out;
    out.result = current;
    const double lo = big_r / 100.0, hi = big_r / 50.0;
    if (hi - lo < ctx.width) {
        out.reason = "swap radius range thinner than one shell";
        return out;
    }
    // Nothing inside the largest possible ball: the swap can only add.
    bool touches = std::any_of(current.z.begin(), current.z.end(), [&](PointId p) { return space.dist(x, p) < hi; });
    if (!touches) {
        out.reason = "no separator points near center";
        return out;
    }
    SliceOptions so;
    so.method = ctx.method;
    so.stop_at_zero = true;
    so.content = ctx.content_opts();
    CheapSphere cs = cheapest_shell_in_range(space, x, lo, hi, ctx.width, ctx.dim, ctx.zeta, kUnrestricted, so);
    out.r = cs.r;

    PointSet removed;
    for (PointId p : current.z)
        if (space.dist(x, p) < cs.r) removed.push_back(p);
    PointSet next = set_union(set_difference(current.z, removed), cs.shell.members);
    if (next == current.z) {
        out.reason = "swap leaves the separator unchanged";
        return out;
    }
    auto check = is_separating(space, ctx.adjacency, next, current.d);
    if (!check.ok) {
        out.reason = "swap breaks separation";
        return out;
    }
    ContentEstimate c = ctx.content(next);
    if (!(c.value < current.content.value - tolerance)) {
        out.reason = "no content improvement";
        return out;
    }
    out.result.z = std::move(next);
    out.result.pieces = std::move(check.pieces);
    out.result.content = std::move(c);
    out.result.gap_bound.reset();
    out.improved = true;
    return out;
}

}  // namespace

double resolved_scale(const FiniteMetricSpace& space, const SeparatorConfig& cfg) {
    double s = cfg.scale_s.value_or(default_scale(space));
    if (!(s > 0)) throw Error("scale_s must be positive");
    return s;
}

double resolved_shell_width(const FiniteMetricSpace& space, const SeparatorConfig& cfg) {
    double w = cfg.shell_width.value_or(resolved_scale(space, cfg));
    if (!(w > 0)) throw Error("shell width must be positive");
    return w;
}

SeparationCheck is_separating(const FiniteMetricSpace& space, const NeighborIndex& adjacency, const PointSet& z,
                              double d) {
    SeparationCheck out;
    PointSet rest = set_difference(space.all_points(), z);
    out.pieces = components_at_scale(adjacency, rest);
    out.ok = true;
    for (const auto& piece : out.pieces) {
        double measured = 0.0;
        if (!diameter_at_most(space, piece, d, &measured)) {
            out.ok = false;
            out.oversized = piece;
            out.oversized_diam = measured;
            break;
        }
    }
    return out;
}

SeparationCheck is_separating(const FiniteMetricSpace& space, const PointSet& z, double d, double scale_s) {
    if (!(scale_s > 0)) throw Error("is_separating: scale must be positive");
    NeighborIndex adjacency(space, scale_s, true);
    return is_separating(space, adjacency, z, d);
}

SeparatorResult initial_separator(const FiniteMetricSpace& space, double d, int n, double zeta,
                                  const SeparatorConfig& cfg) {
    Context ctx(space, cfg, n, zeta);
    return initial_with(ctx, d);
}

SwapOutcome improve_separator(const FiniteMetricSpace& space, const SeparatorResult& current, PointId x, double big_r,
                              int n, double zeta, double tolerance, const SeparatorConfig& cfg) {
    if (!space.valid(x)) throw Error("improve_separator: invalid center");
    SeparatorConfig local = cfg;
    if (!local.scale_s) local.scale_s = current.scale_s;
    Context ctx(space, local, n, zeta);
    return swap_with(ctx, current, x, big_r, tolerance);
}

ExhaustiveSeparator exhaustive_min_separator(const FiniteMetricSpace& space, double d, int n, double zeta,
                                             double scale_s) {
    const std::size_t m = space.size();
    if (m > 20) throw BudgetError("exhaustive_min_separator: space too large");
    NeighborIndex adjacency(space, scale_s, true);
    ContentOptions opts;
    opts.exact_budget = 64;
    ExhaustiveSeparator best;
    bool have = false;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        PointSet z;
        for (PointId p = 0; p < m; ++p)
            if (mask >> p & 1) z.push_back(p);
        if (!is_separating(space, adjacency, z, d).ok) continue;
        double v = exact_content(space, z, n - 1, zeta, opts).value;
        if (!have || v < best.b) {
            have = true;
            best.b = v;
            best.z = std::move(z);
        }
    }
    if (!have) throw Error("exhaustive_min_separator: no separating subset");  // unreachable: Z = X separates
    return best;
}

SeparatorResult minimal_separator(const FiniteMetricSpace& space, double d, int n, double zeta, double delta,
                                  const SeparatorConfig& cfg) {
    if (!(delta > 0)) throw Error("minimal_separator: delta must be positive");
    Context ctx(space, cfg, n, zeta);
    SeparatorResult cur;
    if (space.size() <= cfg.exhaustive_limit && !(d >= 4.0 * ctx.width && d >= 4.0 * space.mesh_h())) {
        // Too coarse for shells; start from the trivial separator Z = X.
        auto check = is_separating(space, ctx.adjacency, space.all_points(), d);
        cur = package(ctx, space.all_points(), std::move(check.pieces), d);
    } else {
        cur = initial_with(ctx, d);
    }
    cur.warnings.clear();

    const double tolerance = delta / static_cast<double>(space.size());
    const double big_r = 4.0 * d;
    bool improved = !cur.z.empty();
    while (improved) {
        improved = false;
        for (PointId x = 0; x < space.size(); ++x) {
            if (cur.swaps_tried >= cfg.move_budget) {
                cur.budget_exhausted = true;
                break;
            }
            ++cur.swaps_tried;
            SwapOutcome sw = swap_with(ctx, cur, x, big_r, tolerance);
            if (sw.improved) {
                std::size_t tried = cur.swaps_tried, accepted = cur.swaps_accepted + 1;
                cur = std::move(sw.result);
                cur.swaps_tried = tried;
                cur.swaps_accepted = accepted;
                improved = true;
            }
            if (cur.z.empty()) break;
        }
        if (cur.budget_exhausted) break;
    }
    cur.stable = !cur.budget_exhausted;
    if (cur.budget_exhausted) cur.warnings.push_back("move budget exhausted before local stability");

    if (space.size() <= cfg.exhaustive_limit) {
        ExhaustiveSeparator ex = exhaustive_min_separator(space, d, n, zeta, ctx.s);
        double gap = cur.content.value - ex.b;
        if (gap > delta) {
            auto check = is_separating(space, ctx.adjacency, ex.z, d);
            std::size_t tried = cur.swaps_tried, accepted = cur.swaps_accepted;
            cur = package(ctx, ex.z, std::move(check.pieces), d);
            cur.swaps_tried = tried;
            cur.swaps_accepted = accepted;
            cur.stable = true;
            cur.polished = true;
            gap = cur.content.value - ex.b;
        }
        cur.gap_bound = gap;
    } else {
        cur.warnings.push_back("gap heuristic: locally delta-stable under swaps");
    }
    return cur;
}

LocalizationReport localized_smallness(const FiniteMetricSpace& space, const PointSet& z, double radius, int dim,
                                       double zeta, double threshold) {
    LocalizationReport rep;
    rep.threshold = threshold;
    if (z.empty()) return rep;
    ContentOptions opts;
    for (PointId x = 0; x < space.size(); ++x) {
        PointSet local;
        for (PointId p : z)
            if (space.dist(x, p) <= radius) local.push_back(p);
        if (local.empty()) continue;
        double v = greedy_content(space, local, dim, zeta, opts).value;
        if (v > rep.worst_value) {
            rep.worst_value = v;
            rep.worst_center = x;
        }
        if (v > threshold) {
            ++rep.violations;
            rep.pass = false;
        }
    }
    return rep;
}

}  // namespace widthlab
