#include "widthlab/content.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <tuple>
#include <unordered_map>

namespace widthlab {

const char* to_string(ContentMethod m) { return m == ContentMethod::exact ? "exact" : "greedy"; }

double power(double r, int n) {
    double out = 1.0;
    for (int k = 0; k < n; ++k) out *= r;
    return out;
}

namespace {

void check_feasible(const FiniteMetricSpace& space, double zeta, int n) {
    if (n < 0) throw Error("content dimension must be nonnegative");
    if (zeta < space.mesh_h()) throw InfeasibleError("zeta below mesh_h: no admissible cover radius");
}

bool index_covers(const ContentOptions& opts, double zeta) {
    return std::isfinite(zeta) && opts.centers && !opts.centers->strict() && opts.centers->radius() >= zeta;
}

// Centers that can reach at least one target point with a radius <= zeta.
PointSet reachable_centers(const FiniteMetricSpace& space, const PointSet& target, double zeta,
                           const ContentOptions& opts) {
    if (std::isinf(zeta)) return space.all_points();
    if (index_covers(opts, zeta)) {
        std::vector<PointId> ids(target.begin(), target.end());
        for (PointId p : target)
            for (PointId q : opts.centers->of(p))
                if (space.dist(p, q) <= zeta) ids.push_back(q);
        return make_point_set(std::move(ids));
    }
    PointSet out;
    for (PointId c = 0; c < space.size(); ++c)
        for (PointId p : target)
            if (space.dist(c, p) <= zeta) {
                out.push_back(c);
                break;
            }
    return out;
}

struct Reach {
    double d;
    std::size_t idx;
};

// Target points reachable from c, sorted by distance then target index.
// With a neighbour index at zeta only the neighbours of c are examined;
// `slot` maps point ids to target indices (-1 outside the target).
std::vector<Reach> sorted_reach(const FiniteMetricSpace& space, const PointSet& target, PointId c, double zeta,
                                const ContentOptions& opts, const std::vector<long>& slot) {
    std::vector<Reach> out;
    if (index_covers(opts, zeta)) {
        auto visit = [&](PointId q) {
            double d = space.dist(c, q);
            if (slot[q] >= 0 && d <= zeta) out.push_back({d, static_cast<std::size_t>(slot[q])});
        };
        visit(c);
        for (PointId q : opts.centers->of(c)) visit(q);
    } else {
        for (std::size_t i = 0; i < target.size(); ++i) {
            double d = space.dist(c, target[i]);
            if (d <= zeta) out.push_back({d, i});
        }
    }
    std::sort(out.begin(), out.end(), [](const Reach& a, const Reach& b) {
        return a.d < b.d || (a.d == b.d && a.idx < b.idx);
    });
    return out;
}

std::vector<long> target_slots(const FiniteMetricSpace& space, const PointSet& target, const ContentOptions& opts,
                               double zeta) {
    if (!index_covers(opts, zeta)) return {};
    std::vector<long> slot(space.size(), -1);
    for (std::size_t i = 0; i < target.size(); ++i) slot[target[i]] = static_cast<long>(i);
    return slot;
}

ContentEstimate finish(std::vector<CoverBall> cover, int n, double zeta, double h, ContentMethod method) {
    ContentEstimate est;
    est.n = n;
    est.zeta = zeta;
    est.mesh_floor = h;
    est.method = method;
    est.is_upper_bound = true;
    double v = 0.0;
    for (const auto& b : cover) v += power(b.radius, n);
    est.cover = std::move(cover);
    est.value = v;
    return est;
}

}  // namespace

bool verify_cover(const FiniteMetricSpace& space, const PointSet& target, const ContentEstimate& estimate) {
    const double h = space.mesh_h();
    for (const auto& b : estimate.cover) {
        if (!space.valid(b.center)) return false;
        if (b.radius < h || b.radius > estimate.zeta) return false;
    }
    for (PointId p : target) {
        if (!space.valid(p)) return false;
        bool covered = std::any_of(estimate.cover.begin(), estimate.cover.end(),
                                   [&](const CoverBall& b) { return space.dist(b.center, p) <= b.radius; });
        if (!covered) return false;
    }
    return true;
}

std::vector<CandidateBall> candidate_family(const FiniteMetricSpace& space, const PointSet& target, int n,
                                            double zeta, const ContentOptions& opts) {
    check_feasible(space, zeta, n);
    const double h = space.mesh_h();
    std::vector<CandidateBall> out;
    const auto slot = target_slots(space, target, opts, zeta);
    for (PointId c : reachable_centers(space, target, zeta, opts)) {
        auto reach = sorted_reach(space, target, c, zeta, opts, slot);
        // radius h first (it may cover nothing when c is far from every target point)
        std::size_t k = 0;
        std::vector<std::size_t> covered;
        while (k < reach.size() && reach[k].d <= h) covered.push_back(reach[k++].idx);
        if (!covered.empty()) out.push_back({c, h, power(h, n), covered});
        while (k < reach.size()) {
            double r = reach[k].d;
            while (k < reach.size() && reach[k].d == r) covered.push_back(reach[k++].idx);
            out.push_back({c, r, power(r, n), covered});
        }
    }
    for (auto& cb : out) std::sort(cb.covers.begin(), cb.covers.end());
    return out;
}

ContentEstimate greedy_content(const FiniteMetricSpace& space, const PointSet& target, int n, double zeta,
                               const ContentOptions& opts) {
    check_feasible(space, zeta, n);
    const double h = space.mesh_h();
    if (target.empty()) return finish({}, n, zeta, h, ContentMethod::greedy);

    const PointSet centers = reachable_centers(space, target, zeta, opts);
    const auto slot = target_slots(space, target, opts, zeta);
    std::vector<std::vector<Reach>> reach(centers.size());
    for (std::size_t ci = 0; ci < centers.size(); ++ci)
        reach[ci] = sorted_reach(space, target, centers[ci], zeta, opts, slot);

    std::vector<char> covered(target.size(), 0);
    std::size_t remaining = target.size();

    struct Best {
        double ratio = -1.0;
        double radius = 0.0;
        std::size_t gain = 0;
    };
    // Best (ratio, radius) for one center given current coverage; ties keep the smaller radius.
    auto evaluate = [&](std::size_t ci) {
        Best best;
        const auto& list = reach[ci];
        std::size_t gain = 0, k = 0;
        while (k < list.size()) {
            double d = list[k].d;
            while (k < list.size() && list[k].d == d) gain += covered[list[k++].idx] ? 0 : 1;
            if (gain == 0) continue;
            double r = std::max(d, h);
            if (k < list.size() && list[k].d <= h) continue;  // all radii below h collapse to h
            double ratio = static_cast<double>(gain) / power(r, n);
            if (ratio > best.ratio) best = {ratio, r, gain};
        }
        return best;
    };

    // Heap order: larger ratio first, then lower center id, then smaller radius.
    struct Key {
        double ratio;
        std::size_t ci;
        double radius;
    };
    auto worse = [](const Key& a, const Key& b) {
        if (a.ratio != b.ratio) return a.ratio < b.ratio;
        if (a.ci != b.ci) return a.ci > b.ci;
        return a.radius > b.radius;
    };
    std::priority_queue<Key, std::vector<Key>, decltype(worse)> heap(worse);
    for (std::size_t ci = 0; ci < centers.size(); ++ci) {
        Best b = evaluate(ci);
        if (b.gain > 0) heap.push({b.ratio, ci, b.radius});
    }

    std::vector<CoverBall> cover;
    while (remaining > 0) {
        if (heap.empty()) throw Error("greedy_content: target point unreachable within zeta");
        Key top = heap.top();
        heap.pop();
        Best b = evaluate(top.ci);
        if (b.gain == 0) continue;
        Key fresh{b.ratio, top.ci, b.radius};
        if (!heap.empty() && worse(fresh, heap.top())) {
            heap.push(fresh);
            continue;
        }
        cover.push_back({centers[top.ci], b.radius});
        for (const auto& rc : reach[top.ci]) {
            if (rc.d > b.radius) break;
            if (!covered[rc.idx]) {
                covered[rc.idx] = 1;
                --remaining;
            }
        }
        Best again = evaluate(top.ci);
        if (again.gain > 0) heap.push({again.ratio, top.ci, again.radius});
    }
    return finish(std::move(cover), n, zeta, h, ContentMethod::greedy);
}

ContentEstimate exact_content(const FiniteMetricSpace& space, const PointSet& target, int n, double zeta,
                              const ContentOptions& opts) {
    check_feasible(space, zeta, n);
    const double h = space.mesh_h();
    if (target.empty()) return finish({}, n, zeta, h, ContentMethod::exact);
    if (target.size() > opts.exact_budget || target.size() > 63)
        throw BudgetError("exact_content: target has " + std::to_string(target.size()) +
                          " points, over the exact budget; use greedy_content");

    using Mask = std::uint64_t;
    struct Cand {
        Mask mask;
        double cost;
        PointId center;
        double radius;
    };
    // One candidate per coverage mask (cheapest, first generated on ties).
    std::vector<Cand> cands;
    {
        std::unordered_map<Mask, std::size_t> by_mask;
        for (const auto& cb : candidate_family(space, target, n, zeta, opts)) {
            Mask m = 0;
            for (std::size_t i : cb.covers) m |= Mask{1} << i;
            auto it = by_mask.find(m);
            if (it == by_mask.end()) {
                by_mask.emplace(m, cands.size());
                cands.push_back({m, cb.cost, cb.center, cb.radius});
            } else if (cb.cost < cands[it->second].cost) {
                cands[it->second] = {m, cb.cost, cb.center, cb.radius};
            }
        }
    }
    // Drop candidates dominated by a superset mask at no greater cost.
    std::vector<Cand> kept;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < cands.size() && !dominated; ++j) {
            if (i == j) continue;
            bool superset = (cands[i].mask & ~cands[j].mask) == 0;
            if (!superset) continue;
            if (cands[j].cost < cands[i].cost) dominated = true;
            else if (cands[j].cost == cands[i].cost && (cands[j].mask != cands[i].mask || j < i)) dominated = true;
        }
        if (!dominated) kept.push_back(cands[i]);
    }
    std::sort(kept.begin(), kept.end(), [](const Cand& a, const Cand& b) {
        return std::tie(a.cost, a.center, a.radius) < std::tie(b.cost, b.center, b.radius);
    });

    const std::size_t m = target.size();
    const Mask full = (m == 64) ? ~Mask{0} : ((Mask{1} << m) - 1);
    std::vector<std::vector<std::size_t>> covering(m);
    std::vector<double> cheapest(m, kUnrestricted);
    double min_per_point = kUnrestricted;
    for (std::size_t k = 0; k < kept.size(); ++k) {
        min_per_point = std::min(min_per_point, kept[k].cost / std::popcount(kept[k].mask));
        for (std::size_t i = 0; i < m; ++i)
            if (kept[k].mask >> i & 1) {
                covering[i].push_back(k);
                cheapest[i] = std::min(cheapest[i], kept[k].cost);
            }
    }
    for (std::size_t i = 0; i < m; ++i)
        if (covering[i].empty()) throw Error("exact_content: target point unreachable within zeta");

    // Upper bound from greedy.
    ContentEstimate seed = greedy_content(space, target, n, zeta, opts);
    double best = seed.value;
    std::vector<std::size_t> best_pick;
    bool have_exact_pick = false;
    std::vector<std::size_t> pick;

    auto lower_bound = [&](Mask covered) {
        Mask open = full & ~covered;
        double lb1 = min_per_point * std::popcount(open);
        double lb2 = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (open >> i & 1) lb2 = std::max(lb2, cheapest[i]);
        return std::max(lb1, lb2);
    };

    auto dfs = [&](auto&& self, Mask covered, double cost) -> void {
        if (covered == full) {
            if (cost < best || (!have_exact_pick && cost <= best)) {
                best = cost;
                best_pick = pick;
                have_exact_pick = true;
            }
            return;
        }
        if (cost + lower_bound(covered) > best) return;
        if (have_exact_pick && cost + lower_bound(covered) >= best) return;
        // branch on the uncovered point with the fewest options
        std::size_t pivot = m, fewest = SIZE_MAX;
        for (std::size_t i = 0; i < m; ++i)
            if (!(covered >> i & 1) && covering[i].size() < fewest) {
                fewest = covering[i].size();
                pivot = i;
            }
        for (std::size_t k : covering[pivot]) {
            pick.push_back(k);
            self(self, covered | kept[k].mask, cost + kept[k].cost);
            pick.pop_back();
        }
    };
    dfs(dfs, 0, 0.0);

    if (!have_exact_pick) {
        // greedy already optimal and the search never tied it; reuse its cover
        seed.method = ContentMethod::exact;
        return seed;
    }
    std::vector<CoverBall> cover;
    for (std::size_t k : best_pick) cover.push_back({kept[k].center, kept[k].radius});
    return finish(std::move(cover), n, zeta, h, ContentMethod::exact);
}

ContentEstimate auto_content(const FiniteMetricSpace& space, const PointSet& target, int n, double zeta,
                             const ContentOptions& opts) {
    if (target.size() <= opts.exact_budget) return exact_content(space, target, n, zeta, opts);
    return greedy_content(space, target, n, zeta, opts);
}

ContentEstimate content_with(ContentMethod method, const FiniteMetricSpace& space, const PointSet& target, int n,
                             double zeta, const ContentOptions& opts) {
    return method == ContentMethod::exact ? exact_content(space, target, n, zeta, opts)
                                          : greedy_content(space, target, n, zeta, opts);
}

double single_ball_bound(const FiniteMetricSpace& space, PointId x, double r, int n) {
    if (!space.valid(x)) throw Error("single_ball_bound: invalid center");
    if (!(r >= 0)) throw Error("single_ball_bound: negative radius");
    return power(std::max(r, space.mesh_h()), n);
}

}  // namespace widthlab
