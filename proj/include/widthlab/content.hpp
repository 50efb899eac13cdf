#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "widthlab/metric.hpp"

namespace widthlab {

inline constexpr double kUnrestricted = std::numeric_limits<double>::infinity();

enum class ContentMethod { exact, greedy };

const char* to_string(ContentMethod m);

struct CoverBall {
    PointId center = 0;
    double radius = 0.0;

    bool operator==(const CoverBall&) const = default;
};

/// A ball cover of some target set and its value sum(radius^n).
struct ContentEstimate {
    std::vector<CoverBall> cover;
    double value = 0.0;
    int n = 1;
    double zeta = kUnrestricted;
    double mesh_floor = 0.0;
    ContentMethod method = ContentMethod::greedy;
    bool is_upper_bound = true;
};

/// zeta below the mesh floor leaves no admissible radius.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Target too large for the exact solver.
class BudgetError : public Error {
public:
    using Error::Error;
};

struct ContentOptions {
    /// Largest target the exact solver accepts.
    std::size_t exact_budget = 16;
    /// Optional non-strict index with radius >= zeta; speeds up center lookup.
    const NeighborIndex* centers = nullptr;
};

/// r^n by repeated multiplication (exact for small integers); r^0 = 1.
double power(double r, int n);

bool verify_cover(const FiniteMetricSpace& space, const PointSet& target, const ContentEstimate& estimate);

ContentEstimate exact_content(const FiniteMetricSpace& space, const PointSet& target, int n, double zeta,
                              const ContentOptions& opts = {});

ContentEstimate greedy_content(const FiniteMetricSpace& space, const PointSet& target, int n, double zeta,
                               const ContentOptions& opts = {});

/// Exact when the target fits the exact budget, greedy otherwise.
ContentEstimate auto_content(const FiniteMetricSpace& space, const PointSet& target, int n, double zeta,
                             const ContentOptions& opts = {});

ContentEstimate content_with(ContentMethod method, const FiniteMetricSpace& space, const PointSet& target, int n,
                             double zeta, const ContentOptions& opts = {});

/// max(r, mesh_h)^n: the cost of covering anything inside ball(x, r) by that one ball.
double single_ball_bound(const FiniteMetricSpace& space, PointId x, double r, int n);

/// The finite candidate family: for every center within zeta of the target,
/// radii {max(d(c,p), h) : p in target, d(c,p) <= zeta} ∪ {h}.
struct CandidateBall {
    PointId center = 0;
    double radius = 0.0;
    double cost = 0.0;
    std::vector<std::size_t> covers;  // indices into the target
};
std::vector<CandidateBall> candidate_family(const FiniteMetricSpace& space, const PointSet& target, int n,
                                            double zeta, const ContentOptions& opts = {});

}  // namespace widthlab
