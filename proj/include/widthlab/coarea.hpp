#pragma once

#include <optional>
#include <vector>

#include "widthlab/content.hpp"
#include "widthlab/metric.hpp"

namespace widthlab {

struct ShellSlice {
    double r_lo = 0.0;
    double r_hi = 0.0;
    PointSet members;
    ContentEstimate content;
};

/// Both sides of the discrete co-area inequality for one annulus.
struct CoareaReport {
    double lhs = 0.0;    // sum over shells of width * content_{n-1}(shell ∩ U)
    double rhs = 0.0;    // 2 * content_n(U)
    double slack = 0.0;  // 2 * width * sum max(r_i, h)^{n-1} over the witness cover of U
    double shell_width = 0.0;
    bool pass = false;
    ContentMethod method = ContentMethod::greedy;
    ContentEstimate witness;  // cover of U
    std::vector<ShellSlice> shells;
    /// Per witness ball: radial extent (shell count * width) of the shells it meets.
    std::vector<double> window_extent;
    /// Every witness ball meets shells spanning at most 2*radius + 2*width.
    bool window_ok = true;
};

/// Checks the co-area inequality on U inside the annulus r1 <= d(x,.) <= r2.
/// The annulus is tiled by floor((r2-r1)/width)+1 half-open shells starting at r1.
CoareaReport coarea_check(const FiniteMetricSpace& space, const PointSet& u, PointId x, double r1, double r2,
                          int n, double zeta, double shell_width, ContentMethod method = ContentMethod::greedy,
                          const ContentOptions& opts = {});

struct CheapSphere {
    double r = 0.0;
    Shell shell;
    ContentEstimate content;
    bool found = false;  // content.value <= budget
    /// Shells examined, in radius order, with their content values.
    std::vector<double> shell_values;
    std::size_t shells_total = 0;
};

struct SliceOptions {
    ContentMethod method = ContentMethod::greedy;
    /// Stop at the first empty shell (it is the minimizer). Skips the remaining shells.
    bool stop_at_zero = false;
    /// Restrict shell membership to this set (whole space when empty optional).
    const PointSet* domain = nullptr;
    ContentOptions content;
};

/// Cheapest shell [lo + k*w, lo + (k+1)*w) for k < floor((hi-lo)/w); content in
/// dimension content_dim with cap zeta. Ties go to the smaller radius.
CheapSphere cheapest_shell_in_range(const FiniteMetricSpace& space, PointId x, double lo, double hi,
                                    double shell_width, int content_dim, double zeta, double budget,
                                    const SliceOptions& opts = {});

/// Searches [R/100, R/50] around x for the shell of least (n-1)-content.
/// Throws if the range is thinner than one shell.
CheapSphere find_cheap_sphere(const FiniteMetricSpace& space, PointId x, double big_r, int n, double zeta,
                              double budget, std::optional<double> shell_width = std::nullopt,
                              const SliceOptions& opts = {});

}  // namespace widthlab
