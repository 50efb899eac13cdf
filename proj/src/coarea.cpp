#include "widthlab/coarea.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace widthlab {

namespace {

constexpr double kCompareTol = 1e-12;

long shell_index(double d, double r1, double width) { return static_cast<long>(std::floor((d - r1) / width)); }

}  // namespace

CoareaReport coarea_check(const FiniteMetricSpace& space, const PointSet& u, PointId x, double r1, double r2,
                          int n, double zeta, double shell_width, ContentMethod method, const ContentOptions& opts) {
    if (n < 2) throw Error("coarea_check: n must be at least 2");
    if (!(shell_width >= space.mesh_h())) throw Error("coarea_check: shell_width below mesh_h");
    if (!(r1 >= 0) || !(r2 >= r1)) throw Error("coarea_check: need 0 <= r1 <= r2");
    if (!space.valid(x)) throw Error("coarea_check: invalid center");
    for (PointId p : u) {
        double d = space.dist(x, p);
        if (d < r1 || d > r2) {
            std::ostringstream os;
            os << "coarea_check: point " << p << " at distance " << d << " lies outside the annulus [" << r1
               << ", " << r2 << "]";
            throw Error(os.str());
        }
    }

    CoareaReport rep;
    rep.shell_width = shell_width;
    rep.method = method;
    const auto shells = static_cast<std::size_t>(std::floor((r2 - r1) / shell_width)) + 1;
    std::vector<PointSet> members(shells);
    for (PointId p : u) members[static_cast<std::size_t>(shell_index(space.dist(x, p), r1, shell_width))].push_back(p);

    for (std::size_t k = 0; k < shells; ++k) {
        ShellSlice sl;
        sl.r_lo = r1 + static_cast<double>(k) * shell_width;
        sl.r_hi = sl.r_lo + shell_width;
        sl.members = std::move(members[k]);
        if (!sl.members.empty()) {
            sl.content = content_with(method, space, sl.members, n - 1, zeta, opts);
            rep.lhs += shell_width * sl.content.value;
        } else {
            sl.content.n = n - 1;
            sl.content.zeta = zeta;
            sl.content.mesh_floor = space.mesh_h();
            sl.content.method = method;
        }
        rep.shells.push_back(std::move(sl));
    }

    rep.witness = content_with(method, space, u, n, zeta, opts);
    rep.rhs = 2.0 * rep.witness.value;
    const double h = space.mesh_h();
    double tail = 0.0;
    for (const auto& b : rep.witness.cover) tail += power(std::max(b.radius, h), n - 1);
    rep.slack = 2.0 * shell_width * tail;
    rep.pass = rep.lhs <= (rep.rhs + rep.slack) * (1.0 + kCompareTol);

    // Shell-window fact: points of a ball of radius rho sit at radial distances
    // spanning at most 2*rho, so they meet at most 2*rho/w + 2 shells.
    for (const auto& b : rep.witness.cover) {
        long lo = 0, hi = -1;
        bool any = false;
        for (PointId p = 0; p < space.size(); ++p) {
            if (space.dist(b.center, p) > b.radius) continue;
            long k = shell_index(space.dist(x, p), r1, shell_width);
            if (!any) lo = hi = k;
            lo = std::min(lo, k);
            hi = std::max(hi, k);
            any = true;
        }
        double extent = any ? static_cast<double>(hi - lo + 1) * shell_width : 0.0;
        rep.window_extent.push_back(extent);
        if (extent > (2.0 * b.radius + 2.0 * shell_width) * (1.0 + kCompareTol)) rep.window_ok = false;
    }
    return rep;
}

CheapSphere cheapest_shell_in_range(const FiniteMetricSpace& space, PointId x, double lo, double hi,
                                    double shell_width, int content_dim, double zeta, double budget,
                                    const SliceOptions& opts) {
    if (!(shell_width > 0)) throw Error("shell width must be positive");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / shell_width));
    if (count == 0) {
        std::ostringstream os;
        os << "radius range [" << lo << ", " << hi << "] is thinner than one shell of width " << shell_width;
        throw Error(os.str());
    }
    std::vector<PointSet> members(count);
    auto place = [&](PointId p) {
        double d = space.dist(x, p);
        if (d < lo) return;
        auto k = static_cast<std::size_t>(std::floor((d - lo) / shell_width));
        if (k < count) members[k].push_back(p);
    };
    if (opts.domain) {
        for (PointId p : *opts.domain) place(p);
    } else {
        for (PointId p = 0; p < space.size(); ++p) place(p);
    }

    CheapSphere best;
    best.shells_total = count;
    bool have = false;
    for (std::size_t k = 0; k < count; ++k) {
        ContentEstimate est;
        if (members[k].empty()) {
            est.n = content_dim;
            est.zeta = zeta;
            est.mesh_floor = space.mesh_h();
            est.method = opts.method;
        } else {
            est = content_with(opts.method, space, members[k], content_dim, zeta, opts.content);
        }
        best.shell_values.push_back(est.value);
        if (!have || est.value < best.content.value) {
            have = true;
            best.r = lo + static_cast<double>(k) * shell_width;
            best.shell = Shell{x, best.r, best.r + shell_width, members[k]};
            best.content = std::move(est);
        }
        if (opts.stop_at_zero && best.content.value == 0.0) break;
    }
    best.found = best.content.value <= budget;
    return best;
}

CheapSphere find_cheap_sphere(const FiniteMetricSpace& space, PointId x, double big_r, int n, double zeta,
                              double budget, std::optional<double> shell_width, const SliceOptions& opts) {
    if (!(budget > 0)) throw Error("find_cheap_sphere: budget must be positive");
    if (n < 1) throw Error("find_cheap_sphere: n must be positive");
    const double w = shell_width.value_or(space.mesh_h());
    const double lo = big_r / 100.0, hi = big_r / 50.0;
    if (hi - lo < w) {
        std::ostringstream os;
        os << "find_cheap_sphere: [R/100, R/50] holds no shell of width " << w << "; need R >= " << 100.0 * w;
        throw Error(os.str());
    }
    return cheapest_shell_in_range(space, x, lo, hi, w, n - 1, zeta, budget, opts);
}

}  // namespace widthlab
