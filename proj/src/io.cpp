#include "widthlab/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace widthlab {

namespace {

template <typename T>
T field(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw InputError(where + "/" + key, "missing");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(where + "/" + key, std::string("wrong type (") + e.what() + ")");
    }
}

std::string metric_name(MetricKind k) {
    switch (k) {
    case MetricKind::matrix: return "matrix";
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::chebyshev: return "chebyshev";
    case MetricKind::flat_torus: return "flat_torus";
    case MetricKind::product_max: return "product_max";
    }
    return "matrix";
}

json simplex_list(const SimplicialComplex& c, const std::vector<SimplexId>& ids) {
    json out = json::array();
    for (SimplexId id : ids) out.push_back(c.simplex(id));
    return out;
}

}  // namespace

json length_to_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double length_from_json(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    if (j.is_string() && (j == "inf" || j == "infinity")) return std::numeric_limits<double>::infinity();
    if (!j.is_number()) throw InputError("length", "expected a number or null");
    return j.get<double>();
}

json to_json(const PointSet& s) { return json(std::vector<PointId>(s.begin(), s.end())); }

json to_json(const ContentEstimate& e) {
    json cover = json::array();
    for (const auto& b : e.cover) cover.push_back({{"center", b.center}, {"radius", b.radius}});
    return {{"cover", cover},
            {"value", e.value},
            {"n", e.n},
            {"zeta", length_to_json(e.zeta)},
            {"mesh_floor", e.mesh_floor},
            {"method", to_string(e.method)},
            {"is_upper_bound", e.is_upper_bound}};
}

json to_json(const CoareaReport& r) {
    json shells = json::array();
    for (const auto& s : r.shells)
        shells.push_back({{"r_lo", s.r_lo}, {"r_hi", s.r_hi}, {"members", to_json(s.members)}, {"content", s.content.value}});
    return {{"lhs", r.lhs},
            {"rhs", r.rhs},
            {"slack", r.slack},
            {"shell_width", r.shell_width},
            {"pass", r.pass},
            {"method", to_string(r.method)},
            {"witness", to_json(r.witness)},
            {"shells", shells},
            {"window_extent", r.window_extent},
            {"window_ok", r.window_ok}};
}

json to_json(const CheapSphere& c) {
    return {{"r", c.r},
            {"shell", {{"center", c.shell.center}, {"r_lo", c.shell.r_lo}, {"r_hi", c.shell.r_hi}, {"members", to_json(c.shell.members)}}},
            {"content", to_json(c.content)},
            {"found", c.found},
            {"shell_values", c.shell_values},
            {"shells_total", c.shells_total}};
}

json to_json(const SeparatorResult& r) {
    json pieces = json::array();
    for (const auto& p : r.pieces) pieces.push_back(to_json(p));
    return {{"Z", to_json(r.z)},
            {"pieces", pieces},
            {"D", r.d},
            {"content", to_json(r.content)},
            {"gap_bound", r.gap_bound ? json(*r.gap_bound) : json("heuristic")},
            {"scale_s", r.scale_s},
            {"stable", r.stable},
            {"budget_exhausted", r.budget_exhausted},
            {"polished", r.polished},
            {"swaps_accepted", r.swaps_accepted},
            {"swaps_tried", r.swaps_tried},
            {"warnings", r.warnings}};
}

json to_json(const SimplicialComplex& c) {
    std::vector<SimplexId> all(c.simplex_count());
    for (SimplexId i = 0; i < all.size(); ++i) all[i] = i;
    return {{"vertices", c.vertices()},
            {"maximal_simplices", simplex_list(c, c.maximal_simplices())},
            {"simplices", simplex_list(c, all)}};
}

json to_json(const WidthCertificate& c) {
    return {{"r", c.r},
            {"n", c.n},
            {"complex", to_json(c.complex)},
            {"assignment", c.assignment},
            {"fiber_diams", c.fiber_diams},
            {"max_fiber", c.max_fiber},
            {"closed_fiber_diams", c.closed_fiber_diams},
            {"max_closed_fiber", c.max_closed_fiber}};
}

json to_json(const CertificateReport& r) {
    return {{"pass", r.pass},
            {"max_fiber", r.max_fiber},
            {"max_closed_fiber", r.max_closed_fiber},
            {"worst_simplex", r.worst_simplex ? json(*r.worst_simplex) : json(nullptr)},
            {"problems", r.problems},
            {"assigned_points", r.assigned_points}};
}

json to_json(const HypothesisReport& r, bool with_values) {
    json j = {{"R", r.r},
              {"n", r.n},
              {"zeta", r.zeta},
              {"zeta_clamped", r.zeta_clamped},
              {"threshold", r.threshold},
              {"pass", r.pass},
              {"worst_point", r.worst_point},
              {"worst_value", r.worst_value},
              {"violations", r.violations}};
    if (with_values) j["values"] = r.values;
    return j;
}

json to_json(const LocalizationReport& r) {
    return {{"pass", r.pass},
            {"threshold", r.threshold},
            {"worst_value", r.worst_value},
            {"worst_center", r.worst_center},
            {"violations", r.violations}};
}

json to_json(const LevelStats& s) {
    return {{"n", s.n},
            {"R", s.r},
            {"zeta", s.zeta},
            {"D", s.d},
            {"points", s.points},
            {"separator_size", s.separator_size},
            {"pieces", s.pieces},
            {"separator_content", s.separator_content},
            {"swaps_accepted", s.swaps_accepted},
            {"stable", s.stable},
            {"hypothesis_pass", s.hypothesis_pass},
            {"localization", s.localization ? to_json(*s.localization) : json(nullptr)},
            {"chunks", s.chunks},
            {"fiber_arithmetic_ok", s.fiber_arithmetic_ok},
            {"max_class_diameter", s.max_class_diameter}};
}

json to_json(const DecomposeResult& r) {
    json levels = json::array();
    for (const auto& l : r.levels) levels.push_back(to_json(l));
    return {{"hypothesis", to_json(r.hypothesis)},
            {"levels", levels},
            {"separator", to_json(r.separator)},
            {"separator_reverified", r.separator_reverified},
            {"certificate", to_json(r.certificate)},
            {"verification", to_json(r.verification)}};
}

json to_json(const BoundaryReport& r) {
    return {{"R", r.r},
            {"n", r.n},
            {"threshold", r.threshold},
            {"pass", r.pass},
            {"containment_failures", r.containment_failures},
            {"content_failures", r.content_failures},
            {"worst_point", r.worst_point},
            {"worst_content", r.worst_content},
            {"boundary_content", r.boundary_content},
            {"reach", r.reach}};
}

json to_json(const EpsilonTable& t) {
    json out = json::array();
    for (int k = 1; k <= t.size(); ++k) out.push_back({{"k", k}, {"exact", t.str(k)}, {"value", t.at(k)}});
    return out;
}

json to_json(const GeneratorSpec& s) {
    json params = json::object();
    for (const auto& [k, v] : s.params) params[k] = v;
    return {{"kind", to_string(s.kind)},
            {"params", params},
            {"mesh_h", s.mesh_h},
            {"seed", s.seed},
            {"point_budget", s.point_budget}};
}

json to_json(const Drawing& d) {
    json edges = json::array();
    for (const auto& e : d.edges) {
        json poly = json::array();
        for (const auto& p : e.polyline) poly.push_back({p[0], p[1]});
        edges.push_back({{"u", e.u}, {"v", e.v}, {"polyline", poly}});
    }
    return {{"R", d.r}, {"edges", edges}};
}

json to_json(const FiberWitness& w) {
    return {{"p", {{"edge", w.p.edge}, {"t", w.p.t}}},
            {"q", {{"edge", w.q.edge}, {"t", w.q.t}}},
            {"graph_dist", w.graph_dist},
            {"image_dist", w.image_dist},
            {"exact", w.exact}};
}

json to_json(const AuditResult& r) {
    return {{"witness", r.witness ? to_json(*r.witness) : json(nullptr)},
            {"exact_intersections", r.exact_intersections},
            {"tolerance_pairs", r.tolerance_pairs},
            {"samples", r.samples}};
}

json to_json(const TreesDiagnostic& d) {
    auto arc_json = [](const TreeArc& a) {
        json pts = json::array();
        for (const auto& p : a.points) pts.push_back({p[0], p[1]});
        return json{{"edge", a.edge}, {"t0", a.t0}, {"t1", a.t1}, {"points", pts}};
    };
    json trees = json::array();
    for (std::size_t v = 0; v < 5; ++v) {
        json arcs = json::array();
        for (const auto& a : d.trees[v]) arcs.push_back(arc_json(a));
        trees.push_back({{"vertex", v}, {"endpoints", d.endpoint_counts[v]}, {"arcs", arcs}});
    }
    json connectors = json::array();
    for (const auto& [e, a] : d.connectors) connectors.push_back({{"between", e}, {"arc", arc_json(a)}});
    json crossings = json::array();
    for (const auto& c : d.crossings)
        crossings.push_back({{"kind", c.kind},
                             {"a", c.a},
                             {"b", c.b},
                             {"point", {c.point[0], c.point[1]}},
                             {"preimages", c.preimages ? to_json(*c.preimages) : json(nullptr)}});
    return {{"found", d.found}, {"trees", trees}, {"connectors", connectors}, {"crossings", crossings}};
}

GeneratorSpec generator_spec_from_json(const json& j) {
    GeneratorSpec s;
    try {
        s.kind = parse_generator_kind(field<std::string>(j, "kind", "generator"));
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError("generator/kind", e.what());
    }
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw InputError("generator/params", "expected an object");
        for (const auto& [k, v] : j["params"].items()) {
            if (!v.is_number()) throw InputError("generator/params/" + k, "expected a number");
            s.params[k] = v.get<double>();
        }
    }
    if (j.contains("mesh_h")) s.mesh_h = field<double>(j, "mesh_h", "generator");
    if (j.contains("seed")) s.seed = field<std::uint64_t>(j, "seed", "generator");
    if (j.contains("point_budget")) s.point_budget = field<std::size_t>(j, "point_budget", "generator");
    return s;
}

WidthCertificate certificate_from_json(const json& j) {
    WidthCertificate c;
    c.r = field<double>(j, "r", "certificate");
    c.n = field<int>(j, "n", "certificate");
    const json& cx = j.contains("complex") ? j["complex"] : throw InputError("certificate/complex", "missing");
    const std::string key = cx.contains("simplices") ? "simplices" : "maximal_simplices";
    auto list = field<std::vector<Simplex>>(cx, key, "certificate/complex");
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i].empty()) throw InputError("certificate/complex/" + key + "/" + std::to_string(i), "empty simplex");
        SimplexId id = c.complex.add_closed(list[i]);
        if (key == "simplices" && id != i)
            throw InputError("certificate/complex/simplices/" + std::to_string(i), "simplex listed before its faces");
    }
    c.assignment = field<std::vector<SimplexId>>(j, "assignment", "certificate");
    for (std::size_t p = 0; p < c.assignment.size(); ++p)
        if (c.assignment[p] >= c.complex.simplex_count())
            throw InputError("certificate/assignment/" + std::to_string(p), "unknown simplex id");
    c.fiber_diams = field<std::vector<double>>(j, "fiber_diams", "certificate");
    c.max_fiber = field<double>(j, "max_fiber", "certificate");
    if (j.contains("closed_fiber_diams")) c.closed_fiber_diams = field<std::vector<double>>(j, "closed_fiber_diams", "certificate");
    if (j.contains("max_closed_fiber")) c.max_closed_fiber = field<double>(j, "max_closed_fiber", "certificate");
    if (c.fiber_diams.size() != c.complex.simplex_count())
        throw InputError("certificate/fiber_diams", "length differs from the simplex count");
    if (!c.closed_fiber_diams.empty() && c.closed_fiber_diams.size() != c.complex.simplex_count())
        throw InputError("certificate/closed_fiber_diams", "length differs from the simplex count");
    return c;
}

Drawing drawing_from_json(const json& j) {
    Drawing d;
    d.r = field<double>(j, "R", "drawing");
    auto edges = field<json>(j, "edges", "drawing");
    if (!edges.is_array()) throw InputError("drawing/edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string where = "drawing/edges/" + std::to_string(i);
        DrawnEdge e;
        e.u = field<std::uint32_t>(edges[i], "u", where);
        e.v = field<std::uint32_t>(edges[i], "v", where);
        auto poly = field<std::vector<std::vector<double>>>(edges[i], "polyline", where);
        for (std::size_t k = 0; k < poly.size(); ++k) {
            if (poly[k].size() != 2) throw InputError(where + "/polyline/" + std::to_string(k), "expected [x, y]");
            e.polyline.push_back({poly[k][0], poly[k][1]});
        }
        d.edges.push_back(std::move(e));
    }
    try {
        return normalize_drawing(std::move(d));
    } catch (const DrawingError& e) {
        throw InputError("drawing", e.what());
    }
}

PointSet point_set_from_json(const json& j, std::size_t space_size) {
    if (!j.is_array()) throw InputError("set", "expected an array of point ids");
    std::vector<PointId> ids;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_unsigned()) throw InputError("set/" + std::to_string(i), "expected a point id");
        auto p = j[i].get<PointId>();
        if (p >= space_size) throw InputError("set/" + std::to_string(i), "point id out of range");
        ids.push_back(p);
    }
    return make_point_set(std::move(ids));
}

json space_to_json(const FiniteMetricSpace& space) {
    json j = {{"mesh_h", space.mesh_h()}, {"metric", metric_name(space.kind())}};
    switch (space.kind()) {
    case MetricKind::euclidean:
    case MetricKind::chebyshev:
    case MetricKind::flat_torus: {
        json coords = json::array();
        for (PointId p = 0; p < space.size(); ++p) coords.push_back(space.coords(p));
        j["coords"] = coords;
        if (space.kind() == MetricKind::flat_torus) j["period"] = space.period();
        break;
    }
    case MetricKind::matrix:
    case MetricKind::product_max: {
        j["metric"] = "matrix";
        auto dense = space.dense_matrix();
        json rows = json::array();
        for (std::size_t a = 0; a < space.size(); ++a)
            rows.push_back(std::vector<double>(dense.begin() + static_cast<long>(a * space.size()),
                                               dense.begin() + static_cast<long>((a + 1) * space.size())));
        j["matrix"] = rows;
        break;
    }
    }
    return j;
}

FiniteMetricSpace space_from_json(const json& j, double default_mesh_h) {
    if (!j.is_object()) throw InputError("space", "expected an object");
    double h = j.contains("mesh_h") ? field<double>(j, "mesh_h", "space") : default_mesh_h;
    try {
        if (j.contains("generator")) {
            GeneratorSpec spec = generator_spec_from_json(j["generator"]);
            if (j.contains("mesh_h")) spec.mesh_h = h;
            return generate(spec);
        }
        if (j.contains("edges")) {
            std::vector<WeightedEdge> edges;
            const auto& arr = j["edges"];
            if (!arr.is_array()) throw InputError("space/edges", "expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string where = "space/edges/" + std::to_string(i);
                edges.push_back({field<PointId>(arr[i], "u", where), field<PointId>(arr[i], "v", where),
                                 field<double>(arr[i], "len", where)});
            }
            return FiniteMetricSpace::from_weighted_graph(edges, h);
        }
        const auto metric = field<std::string>(j, "metric", "space");
        if (metric == "matrix") {
            auto m = field<std::vector<std::vector<double>>>(j, "matrix", "space");
            return FiniteMetricSpace::from_distance_matrix(m, h);
        }
        MetricKind kind;
        if (metric == "euclidean") kind = MetricKind::euclidean;
        else if (metric == "chebyshev") kind = MetricKind::chebyshev;
        else if (metric == "flat_torus") kind = MetricKind::flat_torus;
        else throw InputError("space/metric", "unknown metric '" + metric + "'");
        auto raw = field<std::vector<std::vector<double>>>(j, "coords", "space");
        std::vector<std::array<double, 3>> coords;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i].empty() || raw[i].size() > 3)
                throw InputError("space/coords/" + std::to_string(i), "expected 1 to 3 coordinates");
            std::array<double, 3> c{0, 0, 0};
            for (std::size_t k = 0; k < raw[i].size(); ++k) c[k] = raw[i][k];
            coords.push_back(c);
        }
        std::array<double, 3> period{0, 0, 0};
        if (j.contains("period")) {
            auto p = field<std::vector<double>>(j, "period", "space");
            for (std::size_t k = 0; k < p.size() && k < 3; ++k) period[k] = p[k];
        }
        return FiniteMetricSpace::from_coordinates(kind, std::move(coords), h, period);
    } catch (const InputError&) {
        throw;
    } catch (const MetricError& e) {
        throw InputError("space", e.what());
    }
}

FiniteMetricSpace space_from_csv(const std::string& text, double mesh_h) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(cells, cell, ',')) {
            ++col;
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw InputError("row " + std::to_string(lineno) + ", column " + std::to_string(col),
                                 "not a number: '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    try {
        return FiniteMetricSpace::from_distance_matrix(rows, mesh_h);
    } catch (const MetricError&) {
        throw;
    } catch (const Error& e) {
        throw InputError("matrix", e.what());
    }
}

FiniteMetricSpace read_space(const std::string& path, double default_mesh_h) {
    const std::string text = read_file(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return space_from_csv(text, default_mesh_h);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(path, std::string("invalid JSON: ") + e.what());
    }
    return space_from_json(j, default_mesh_h);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path, "cannot open");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json read_json_file(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw InputError(path, std::string("invalid JSON: ") + e.what());
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return out;
}

}  // namespace widthlab
