#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "widthlab/coarea.hpp"
#include "widthlab/complex.hpp"
#include "widthlab/content.hpp"
#include "widthlab/decompose.hpp"
#include "widthlab/metric.hpp"
#include "widthlab/planar_audit.hpp"
#include "widthlab/separator.hpp"
#include "widthlab/spaces.hpp"

namespace widthlab {

using json = nlohmann::ordered_json;

/// Malformed input; `field` points at the offending entry (JSON pointer or CSV row/column).
class InputError : public Error {
public:
    InputError(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Lengths that may be infinite are written as null.
json length_to_json(double v);
double length_from_json(const json& j);

json to_json(const PointSet& s);
json to_json(const ContentEstimate& e);
json to_json(const CoareaReport& r);
json to_json(const CheapSphere& c);
json to_json(const SeparatorResult& r);
json to_json(const SimplicialComplex& c);
json to_json(const WidthCertificate& c);
json to_json(const CertificateReport& r);
json to_json(const HypothesisReport& r, bool with_values = false);
json to_json(const LocalizationReport& r);
json to_json(const LevelStats& s);
json to_json(const DecomposeResult& r);
json to_json(const BoundaryReport& r);
json to_json(const EpsilonTable& t);
json to_json(const GeneratorSpec& s);
json to_json(const Drawing& d);
json to_json(const FiberWitness& w);
json to_json(const AuditResult& r);
json to_json(const TreesDiagnostic& d);

GeneratorSpec generator_spec_from_json(const json& j);
WidthCertificate certificate_from_json(const json& j);
Drawing drawing_from_json(const json& j);
PointSet point_set_from_json(const json& j, std::size_t space_size);

/// Space file:
///   {"mesh_h", "generator": GeneratorSpec}                      regenerated on load
///   {"mesh_h", "metric": "euclidean"|"chebyshev"|"flat_torus", "coords": [[x,y,z]...], "period": [...]}
///   {"mesh_h", "metric": "matrix", "matrix": [[...]]}
///   {"mesh_h", "edges": [{"u","v","len"}]}                      weighted graph, subdivided
json space_to_json(const FiniteMetricSpace& space);
FiniteMetricSpace space_from_json(const json& j, double default_mesh_h);

/// CSV distance matrix (row-major, no header).
FiniteMetricSpace space_from_csv(const std::string& text, double mesh_h);

/// Reads a space from .csv or .json.
FiniteMetricSpace read_space(const std::string& path, double default_mesh_h);

std::string read_file(const std::string& path);
json read_json_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// FNV-1a 64-bit, lower-case hex.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace widthlab
