#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "widthlab/complex.hpp"
#include "widthlab/content.hpp"
#include "widthlab/metric.hpp"
#include "widthlab/separator.hpp"

namespace widthlab {

using Rational = boost::multiprecision::cpp_rational;

/// eps_1 = 1/100, eps_k = eps_{k-1} / 1000^{k+1}; the chunked variant divides
/// by an extra factor of 10 per level.
class EpsilonTable {
public:
    static EpsilonTable standard(int n);
    static EpsilonTable chunked(int n);

    int size() const { return static_cast<int>(values_.size()); }
    /// eps_k for 1 <= k <= size().
    const Rational& exact(int k) const;
    double at(int k) const { return exact(k).convert_to<double>(); }
    /// "num/den"
    std::string str(int k) const;

private:
    std::vector<Rational> values_;
};

/// Per-point check of content(ball(x,R)) <= eps_n R^n.
struct HypothesisReport {
    double r = 0.0;
    int n = 1;
    double zeta = 0.0;
    bool zeta_clamped = false;  // R/1000 fell below mesh_h
    double threshold = 0.0;
    std::vector<double> values;  // per point
    bool pass = true;
    PointId worst_point = 0;
    double worst_value = 0.0;
    std::size_t violations = 0;
};

class HypothesisError : public Error {
public:
    HypothesisError(const std::string& what, HypothesisReport report, int level = 0)
        : Error(what), report_(std::move(report)), level_(level) {}
    const HypothesisReport& report() const { return report_; }
    int level() const { return level_; }

private:
    HypothesisReport report_;
    int level_;
};

/// Raised instead of returning a certificate that fails verification.
class VerificationError : public Error {
public:
    VerificationError(const std::string& what, CertificateReport report)
        : Error(what), report_(std::move(report)) {}
    const CertificateReport& report() const { return report_; }

private:
    CertificateReport report_;
};

/// Cover-radius cap used at scale R: R/1000, raised to mesh_h if smaller.
double zeta_for(const FiniteMetricSpace& space, double r);

HypothesisReport check_hypothesis(const FiniteMetricSpace& space, double r, int n, double eps_scale = 1.0,
                                  bool chunked = false);

struct DecomposeOptions {
    bool force = false;
    SeparatorConfig separator;
    std::optional<double> delta;
    PointId base_point = 0;
    /// Multiplies eps_n in the hypothesis check (sweeps); 1 is the true constant.
    double eps_scale = 1.0;
};

struct LevelStats {
    int n = 1;
    double r = 0.0;
    double zeta = 0.0;
    double d = 0.0;
    std::size_t points = 0;
    std::size_t separator_size = 0;
    std::size_t pieces = 0;
    double separator_content = 0.0;
    std::size_t swaps_accepted = 0;
    bool stable = true;
    bool hypothesis_pass = true;
    std::optional<LocalizationReport> localization;
    std::size_t chunks = 0;
    bool fiber_arithmetic_ok = true;
    double max_class_diameter = 0.0;  // n = 1 levels
};

struct DecomposeResult {
    WidthCertificate certificate;
    HypothesisReport hypothesis;
    CertificateReport verification;
    std::vector<LevelStats> levels;  // top level first
    /// Union separator of the top level (chunked runs re-verify it globally).
    PointSet separator;
    bool separator_reverified = false;
};

/// UW_0 clustering: cover the annuli 10(k-1)R <= d(x0,.) <= 10kR with cheap
/// covers of radius <= R/50, merge balls that share a point, one vertex per class.
DecomposeResult decompose_uw0(const FiniteMetricSpace& space, double r, const DecomposeOptions& opts = {});

/// Separator + recursion on the separator at R/1000 + one cone per piece.
DecomposeResult decompose(const FiniteMetricSpace& space, double r, int n, const DecomposeOptions& opts = {});

/// Same contract, with separators computed per annulus chunk A_k and offset
/// chunk B_k and united.
DecomposeResult decompose_chunked(const FiniteMetricSpace& space, double r, int n,
                                  const DecomposeOptions& opts = {});

using Neighborhoods = std::map<PointId, PointSet>;

struct BoundaryReport {
    double r = 0.0;
    int n = 1;
    double threshold = 0.0;  // eps_n R^{n-1}
    bool pass = true;
    std::size_t containment_failures = 0;  // U not inside ball(x, 10R)
    std::size_t content_failures = 0;      // boundary content above threshold
    PointId worst_point = 0;
    double worst_content = 0.0;
    std::vector<double> boundary_content;  // per point
    std::vector<double> reach;             // per point: max d(x, u) over U
};

/// Points of U within scale s of X \ U.
PointSet discrete_boundary(const FiniteMetricSpace& space, const PointSet& u, double scale_s);

/// ball(x, radius) for every x.
Neighborhoods ball_neighborhoods(const FiniteMetricSpace& space, double radius);

BoundaryReport check_boundary_condition(const FiniteMetricSpace& space, double r, int n,
                                        const Neighborhoods& neighborhoods, std::optional<double> scale_s = {},
                                        double eps_scale = 1.0);

/// Decomposition whose separator is seeded from the supplied boundaries
/// instead of the co-area slicer; oversized pieces are split further by shells.
DecomposeResult decompose_from_boundaries(const FiniteMetricSpace& space, double r, int n,
                                          const Neighborhoods& neighborhoods, const DecomposeOptions& opts = {});

}  // namespace widthlab
