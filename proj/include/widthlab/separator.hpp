#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "widthlab/coarea.hpp"
#include "widthlab/content.hpp"
#include "widthlab/metric.hpp"

namespace widthlab {

struct SeparatorConfig {
    /// Connectivity scale s; pieces are classes of d < s. Defaults to 2*mesh_h.
    std::optional<double> scale_s;
    /// Width of the shells used as cuts. Defaults to scale_s, the thinnest
    /// shell that disconnects its inside from its outside at scale s.
    std::optional<double> shell_width;
    /// Spaces up to this size get an exhaustive b(D) and exact contents.
    std::size_t exhaustive_limit = 8;
    /// Maximum number of swap evaluations in minimal_separator.
    std::size_t move_budget = 200000;
};

struct SeparationCheck {
    bool ok = false;
    std::vector<PointSet> pieces;
    /// First component with diameter > D, when !ok.
    PointSet oversized;
    double oversized_diam = 0.0;
};

struct SeparatorResult {
    PointSet z;
    std::vector<PointSet> pieces;
    double d = 0.0;
    ContentEstimate content;  // of z, dimension n-1, cap zeta
    /// Certified content - b(D) when b(D) was computed exhaustively.
    std::optional<double> gap_bound;
    double scale_s = 0.0;
    bool stable = false;            // last sweep found no improving swap
    bool budget_exhausted = false;  // stopped on move_budget
    bool polished = false;          // replaced by the exhaustive optimum
    std::size_t swaps_accepted = 0;
    std::size_t swaps_tried = 0;
    std::vector<std::string> warnings;
};

/// Components of X \ Z at scale s, if all have diameter <= D.
SeparationCheck is_separating(const FiniteMetricSpace& space, const PointSet& z, double d, double scale_s);
SeparationCheck is_separating(const FiniteMetricSpace& space, const NeighborIndex& adjacency, const PointSet& z,
                              double d);

/// Resolved scale/shell width for a space.
double resolved_scale(const FiniteMetricSpace& space, const SeparatorConfig& cfg);
double resolved_shell_width(const FiniteMetricSpace& space, const SeparatorConfig& cfg);

/// Greedy-by-id cover of X with cheap shells at radii in [D/4, D/2).
SeparatorResult initial_separator(const FiniteMetricSpace& space, double d, int n, double zeta,
                                  const SeparatorConfig& cfg = {});

struct SwapOutcome {
    SeparatorResult result;
    bool improved = false;
    std::string reason;  // why the swap was rejected
    double r = 0.0;
};

/// One swap Z' = (Z \ B(x,r)) ∪ S(x,r) with r from the cheap-sphere search in
/// [R/100, R/50]; accepted if Z' still separates and content drops by more than tolerance.
SwapOutcome improve_separator(const FiniteMetricSpace& space, const SeparatorResult& current, PointId x,
                              double big_r, int n, double zeta, double tolerance = 0.0,
                              const SeparatorConfig& cfg = {});

/// Local search over swaps from initial_separator until a sweep improves by
/// no more than delta / |X|; exhaustive check on tiny spaces.
SeparatorResult minimal_separator(const FiniteMetricSpace& space, double d, int n, double zeta, double delta,
                                  const SeparatorConfig& cfg = {});

struct ExhaustiveSeparator {
    double b = 0.0;
    PointSet z;
};
/// Minimum exact content over every D-separating subset (2^|X| candidates).
ExhaustiveSeparator exhaustive_min_separator(const FiniteMetricSpace& space, double d, int n, double zeta,
                                             double scale_s);

struct LocalizationReport {
    bool pass = true;
    double threshold = 0.0;
    double worst_value = 0.0;
    PointId worst_center = 0;
    std::size_t violations = 0;
};
/// content_{dim}(Z ∩ ball(x, radius)) <= threshold for every x.
LocalizationReport localized_smallness(const FiniteMetricSpace& space, const PointSet& z, double radius, int dim,
                                       double zeta, double threshold);

}  // namespace widthlab
