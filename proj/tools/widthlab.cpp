#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "widthlab/io.hpp"

using namespace widthlab;
namespace fs = std::filesystem;

namespace {

struct Flags {
    std::string input;
    std::optional<double> r;
    int n = 2;
    std::string zeta;
    std::optional<double> delta;
    double mesh_h = 1.0;
    std::optional<double> scale_s;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out_dir = "out";
    bool force = false;

    std::string set_file;
    std::string method = "auto";
    PointId x = 0;
    std::optional<double> r1, r2, shell_width, d;
    std::string certificate;
    bool closed = false;
    std::string drawing;
    std::string drawing_kind = "perturbed";
    std::size_t segments = 16;
    double tol = 1e-6;
    std::string spec;
    std::string kind;
    std::vector<std::string> params;
    std::vector<double> multipliers{0.5, 1, 2, 4};
    std::string neighborhoods;
    std::optional<double> nbhd_radius;
    bool run_decompose = false;
    PointId base_point = 0;
    std::size_t point_budget = 5000;
};

class Run {
public:
    Run(std::string sub, const Flags& f) : sub_(std::move(sub)), flags_(f), start_(std::chrono::steady_clock::now()) {
        const char* env = std::getenv("WIDTHLAB_OUT");
        dir_ = env && *env ? env : f.out_dir;
        fs::create_directories(dir_);
    }

    void digest(const std::string& path) {
        if (!path.empty()) inputs_[path] = fnv1a_hex(read_file(path));
    }
    void param(const std::string& key, json v) { params_[key] = std::move(v); }

    void write(const std::string& name, const std::string& content) {
        const std::string path = (fs::path(dir_) / name).string();
        write_file(path, content);
        outputs_.push_back(path);
    }
    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

    int finish(int code) {
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        json rec = {{"subcommand", sub_},
                    {"input_digests", inputs_},
                    {"parameters", params_},
                    {"outputs", outputs_},
                    {"pass", code == 0},
                    {"exit_code", code},
                    {"wall_time_s", wall}};
        write_file((fs::path(dir_) / "run.json").string(), rec.dump(2) + "\n");
        return code;
    }

    json inputs() const { return inputs_; }

private:
    std::string sub_;
    const Flags& flags_;
    std::chrono::steady_clock::time_point start_;
    std::string dir_;
    json inputs_ = json::object();
    json params_ = json::object();
    std::vector<std::string> outputs_;
};

double parse_zeta(const std::string& s, double fallback) {
    if (s.empty()) return fallback;
    if (s == "inf" || s == "infinity") return kUnrestricted;
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError("--zeta", "not a length: '" + s + "'");
    }
}

double need(const std::optional<double>& v, const std::string& flag) {
    if (!v) throw InputError(flag, "required");
    return *v;
}

FiniteMetricSpace load(const Flags& f, Run& run) {
    if (f.input.empty()) throw InputError("--input", "required");
    run.digest(f.input);
    return read_space(f.input, f.mesh_h);
}

PointSet load_set(const Flags& f, const FiniteMetricSpace& space, Run& run) {
    if (f.set_file.empty()) return space.all_points();
    run.digest(f.set_file);
    return point_set_from_json(read_json_file(f.set_file), space.size());
}

SeparatorConfig separator_config(const Flags& f) {
    SeparatorConfig cfg;
    cfg.scale_s = f.scale_s;
    cfg.shell_width = f.shell_width;
    return cfg;
}

ContentMethod method_of(const std::string& m, std::size_t target_size) {
    if (m == "exact") return ContentMethod::exact;
    if (m == "greedy") return ContentMethod::greedy;
    if (m == "auto") return target_size <= ContentOptions{}.exact_budget ? ContentMethod::exact : ContentMethod::greedy;
    throw InputError("--method", "expected exact, greedy or auto");
}

std::string levels_csv(const std::vector<LevelStats>& levels) {
    std::ostringstream os;
    os.precision(17);
    os << "level,n,R,zeta,D,points,separator_size,pieces,separator_content,swaps_accepted,stable,hypothesis_pass,"
          "localization_pass,chunks,fiber_arithmetic_ok,max_class_diameter\n";
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto& l = levels[i];
        os << i << ',' << l.n << ',' << l.r << ',' << l.zeta << ',' << l.d << ',' << l.points << ',' << l.separator_size
           << ',' << l.pieces << ',' << l.separator_content << ',' << l.swaps_accepted << ',' << l.stable << ','
           << l.hypothesis_pass << ',' << (l.localization ? (l.localization->pass ? "1" : "0") : "") << ','
           << l.chunks << ',' << l.fiber_arithmetic_ok << ',' << l.max_class_diameter << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------

int cmd_gen(const Flags& f, Run& run) {
    GeneratorSpec spec;
    if (!f.spec.empty()) {
        run.digest(f.spec);
        spec = generator_spec_from_json(read_json_file(f.spec));
    } else {
        if (f.kind.empty()) throw InputError("--kind", "required without --spec");
        spec.kind = parse_generator_kind(f.kind);
        spec.mesh_h = f.mesh_h;
        spec.seed = f.seed;
        spec.point_budget = f.point_budget;
        for (const auto& kv : f.params) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw InputError("--param", "expected key=value, got '" + kv + "'");
            try {
                spec.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            } catch (const std::exception&) {
                throw InputError("--param " + kv.substr(0, eq), "not a number");
            }
        }
    }
    FiniteMetricSpace space = generate(spec);
    json file = {{"mesh_h", spec.mesh_h}, {"generator", to_json(spec)}};
    run.write_json("space.json", file);
    json result = {{"generator", to_json(spec)},
                   {"points", space.size()},
                   {"diameter", diameter(space, space.all_points())},
                   {"warnings", space.warnings()},
                   {"space_digest", fnv1a_hex(file.dump(2) + "\n")}};
    run.write_json("gen.json", result);
    return 0;
}

int cmd_content(const Flags& f, Run& run) {
    auto space = load(f, run);
    auto target = load_set(f, space, run);
    double zeta = parse_zeta(f.zeta, kUnrestricted);
    ContentMethod m = method_of(f.method, target.size());
    run.param("n", f.n);
    run.param("zeta", length_to_json(zeta));
    run.param("method", to_string(m));
    auto est = content_with(m, space, target, f.n, zeta);
    bool ok = verify_cover(space, target, est);
    json result = {{"target_size", target.size()}, {"estimate", to_json(est)}, {"cover_verified", ok}};
    run.write_json("content.json", result);
    return ok ? 0 : 2;
}

int cmd_coarea(const Flags& f, Run& run) {
    auto space = load(f, run);
    double r1 = need(f.r1, "--r1"), r2 = need(f.r2, "--r2");
    if (!space.valid(f.x)) throw InputError("--x", "point id out of range");
    PointSet u;
    if (!f.set_file.empty()) u = load_set(f, space, run);
    else
        for (PointId p = 0; p < space.size(); ++p) {
            double dd = space.dist(f.x, p);
            if (dd >= r1 && dd <= r2) u.push_back(p);
        }
    double zeta = parse_zeta(f.zeta, kUnrestricted);
    double w = f.shell_width.value_or(space.mesh_h());
    ContentMethod m = method_of(f.method, u.size());
    for (auto [k, v] : {std::pair{"r1", r1}, {"r2", r2}, {"shell_width", w}}) run.param(k, v);
    run.param("x", f.x);
    run.param("n", f.n);
    run.param("zeta", length_to_json(zeta));
    auto rep = coarea_check(space, u, f.x, r1, r2, f.n, zeta, w, m);
    run.write_json("coarea.json", to_json(rep));
    return rep.pass && rep.window_ok ? 0 : 2;
}

int cmd_separate(const Flags& f, Run& run) {
    auto space = load(f, run);
    double d = f.d ? *f.d : need(f.r, "--D or --R") / 4.0;
    double zeta = parse_zeta(f.zeta, zeta_for(space, 4.0 * d));
    if (f.n < 2) throw InputError("--n", "separators need n >= 2");
    const EpsilonTable t = EpsilonTable::standard(f.n - 1);
    double delta = f.delta.value_or(0.5 * t.at(f.n - 1) * power(4.0 * d, f.n - 1) / power(1000.0, f.n));
    run.param("D", d);
    run.param("n", f.n);
    run.param("zeta", length_to_json(zeta));
    run.param("delta", delta);
    auto sep = minimal_separator(space, d, f.n, zeta, delta, separator_config(f));
    run.write_json("separator.json", to_json(sep));
    return 0;
}

json decompose_header(const Flags& f, Run& run, double r) {
    run.param("R", r);
    run.param("n", f.n);
    run.param("force", f.force);
    if (f.delta) run.param("delta", *f.delta);
    if (f.scale_s) run.param("scale_s", *f.scale_s);
    return {{"input_digests", run.inputs()},
            {"R", r},
            {"n", f.n},
            {"epsilon_table", to_json(EpsilonTable::standard(std::max(1, f.n)))}};
}

int finish_decompose(const Flags& f, Run& run, json result, const std::function<DecomposeResult()>& go,
                     const std::string& name) {
    try {
        DecomposeResult res = go();
        result["result"] = to_json(res);
        run.write_json(name + ".json", result);
        run.write_json("certificate.json", to_json(res.certificate));
        run.write(name + "_levels.csv", levels_csv(res.levels));
        // forced runs on violating inputs still report failure
        return res.hypothesis.pass && res.verification.pass ? 0 : 2;
    } catch (const HypothesisError& e) {
        result["error"] = e.what();
        result["failed_level"] = e.level();
        result["hypothesis"] = to_json(e.report());
        run.write_json(name + ".json", result);
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return 2;
    } catch (const VerificationError& e) {
        result["error"] = e.what();
        result["verification"] = to_json(e.report());
        run.write_json(name + ".json", result);
        std::cerr << "verification failed: " << e.what() << "\n";
        return 2;
    }
    (void)f;
}

DecomposeOptions decompose_options(const Flags& f) {
    DecomposeOptions o;
    o.force = f.force;
    o.separator = separator_config(f);
    o.delta = f.delta;
    o.base_point = f.base_point;
    return o;
}

int cmd_decompose(const Flags& f, Run& run, bool chunked) {
    auto space = load(f, run);
    double r = need(f.r, "--R");
    json head = decompose_header(f, run, r);
    auto opts = decompose_options(f);
    return finish_decompose(
        f, run, head,
        [&] { return chunked ? decompose_chunked(space, r, f.n, opts) : decompose(space, r, f.n, opts); },
        chunked ? "decompose_chunked" : "decompose");
}

int cmd_boundary(const Flags& f, Run& run) {
    auto space = load(f, run);
    double r = need(f.r, "--R");
    Neighborhoods nb;
    if (!f.neighborhoods.empty()) {
        run.digest(f.neighborhoods);
        json j = read_json_file(f.neighborhoods);
        if (!j.is_object()) throw InputError("neighborhoods", "expected an object of point id -> id array");
        for (const auto& [k, v] : j.items()) {
            PointId x;
            try {
                x = static_cast<PointId>(std::stoul(k));
            } catch (const std::exception&) {
                throw InputError("neighborhoods/" + k, "key is not a point id");
            }
            try {
                nb[x] = point_set_from_json(v, space.size());
            } catch (const InputError& e) {
                throw InputError("neighborhoods/" + k, e.what());
            }
        }
    } else {
        nb = ball_neighborhoods(space, f.nbhd_radius.value_or(2.0 * r));
    }
    run.param("R", r);
    run.param("n", f.n);
    auto rep = check_boundary_condition(space, r, f.n, nb, f.scale_s);
    json result = {{"report", to_json(rep)}};
    int code = rep.pass ? 0 : 2;
    if (f.run_decompose && (rep.pass || f.force)) {
        auto opts = decompose_options(f);
        auto res = decompose_from_boundaries(space, r, f.n, nb, opts);
        result["decomposition"] = to_json(res);
        run.write_json("certificate.json", to_json(res.certificate));
    }
    run.write_json("boundary.json", result);
    return code;
}

int cmd_verify(const Flags& f, Run& run) {
    auto space = load(f, run);
    if (f.certificate.empty()) throw InputError("--certificate", "required");
    run.digest(f.certificate);
    json j = read_json_file(f.certificate);
    if (j.contains("result") && j["result"].contains("certificate")) j = j["result"]["certificate"];
    else if (j.contains("certificate")) j = j["certificate"];
    WidthCertificate cert = certificate_from_json(j);
    if (f.r) cert.r = *f.r;
    run.param("closed", f.closed);
    auto rep = verify_certificate(space, cert, f.closed);
    run.write_json("verify.json", to_json(rep));
    return rep.pass ? 0 : 2;
}

int cmd_k5(const Flags& f, Run& run) {
    Drawing d;
    if (!f.drawing.empty()) {
        run.digest(f.drawing);
        d = drawing_from_json(read_json_file(f.drawing));
    } else {
        double r = f.r.value_or(1.0);
        if (f.drawing_kind == "pentagon") d = pentagon_drawing(r, f.segments);
        else if (f.drawing_kind == "collapsed") d = collapsed_drawing(r, f.segments);
        else if (f.drawing_kind == "perturbed") d = perturbed_drawing(r, f.seed, f.segments);
        else throw InputError("--drawing-kind", "expected pentagon, collapsed or perturbed");
        run.param("drawing_kind", f.drawing_kind);
        run.param("seed", f.seed);
    }
    run.param("tol", f.tol);
    AuditOptions opts;
    opts.threads = f.threads;
    auto res = audit_drawing(d, f.tol, opts);
    auto diag = k5_trees_construction(d);
    json result = {{"R", d.r}, {"audit", to_json(res)}, {"trees", to_json(diag)}, {"drawing", to_json(d)}};
    run.write_json("k5_audit.json", result);
    return res.witness && res.witness->graph_dist > d.r ? 0 : 2;
}

int cmd_sweep(const Flags& f, Run& run) {
    auto space = load(f, run);
    double r = need(f.r, "--R");
    run.param("R", r);
    run.param("n", f.n);
    run.param("multipliers", f.multipliers);
    std::ostringstream csv;
    csv.precision(17);
    csv << "multiplier,threshold,worst_value,hypothesis_pass,decomposed,verified,max_fiber,max_closed_fiber\n";
    json cells = json::array();
    bool false_certificate = false;
    for (double m : f.multipliers) {
        auto opts = decompose_options(f);
        opts.eps_scale = m;
        opts.force = false;
        auto hyp = check_hypothesis(space, r, f.n, m);
        bool decomposed = false, verified = false;
        double max_fiber = 0, max_closed = 0;
        if (hyp.pass) {
            try {
                auto res = decompose(space, r, f.n, opts);
                decomposed = true;
                // independent re-check of what the decomposer returned
                auto rep = verify_certificate(space, res.certificate, true);
                verified = rep.pass;
                false_certificate = false_certificate || !rep.pass;
                max_fiber = rep.max_fiber;
                max_closed = rep.max_closed_fiber;
            } catch (const HypothesisError&) {
            }
        }
        csv << m << ',' << hyp.threshold << ',' << hyp.worst_value << ',' << hyp.pass << ',' << decomposed << ','
            << verified << ',' << max_fiber << ',' << max_closed << '\n';
        cells.push_back({{"multiplier", m},
                         {"hypothesis", to_json(hyp)},
                         {"decomposed", decomposed},
                         {"verified", verified},
                         {"max_fiber", max_fiber},
                         {"max_closed_fiber", max_closed}});
    }
    run.write("sweep.csv", csv.str());
    run.write_json("sweep.json", {{"R", r}, {"n", f.n}, {"cells", cells}});
    return false_certificate ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"widthlab: Urysohn width certificates for finite metric spaces"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key = value config file; flags override it");
    Flags f;
    app.add_option("--input", f.input, "space file (.json or .csv distance matrix)");
    app.add_option("--R", f.r, "scale R");
    app.add_option("--n", f.n, "dimension n")->check(CLI::PositiveNumber);
    app.add_option("--zeta", f.zeta, "cover radius cap (number or inf)");
    app.add_option("--delta", f.delta, "separator minimality tolerance");
    app.add_option("--mesh-h", f.mesh_h, "mesh resolution for inputs without one")->check(CLI::PositiveNumber);
    app.add_option("--scale-s", f.scale_s, "connectivity scale");
    app.add_option("--seed", f.seed, "seed for generated inputs");
    app.add_option("--threads", f.threads, "thread cap")->check(CLI::PositiveNumber);
    app.add_option("--out-dir", f.out_dir, "output directory (WIDTHLAB_OUT overrides)");
    app.add_flag("--force", f.force, "run past a failed hypothesis check (exit code stays 2)");
    app.add_option("--set", f.set_file, "JSON array of point ids");
    app.add_option("--method", f.method, "content solver: exact, greedy, auto");
    app.add_option("--x", f.x, "center point id");
    app.add_option("--r1", f.r1, "inner radius");
    app.add_option("--r2", f.r2, "outer radius");
    app.add_option("--shell-width", f.shell_width, "shell width");
    app.add_option("--D", f.d, "piece diameter bound");
    app.add_option("--certificate", f.certificate, "certificate or decompose result JSON");
    app.add_flag("--closed", f.closed, "also bound fibers of closed simplices");
    app.add_option("--drawing", f.drawing, "drawing JSON");
    app.add_option("--drawing-kind", f.drawing_kind, "pentagon, collapsed or perturbed");
    app.add_option("--segments", f.segments, "segments per drawn edge")->check(CLI::PositiveNumber);
    app.add_option("--tol", f.tol, "collision tolerance")->check(CLI::PositiveNumber);
    app.add_option("--spec", f.spec, "generator spec JSON");
    app.add_option("--kind", f.kind, "generator kind");
    app.add_option("--param", f.params, "generator parameter key=value");
    app.add_option("--point-budget", f.point_budget, "generator point budget");
    app.add_option("--multipliers", f.multipliers, "eps multipliers for sweep")->delimiter(',');
    app.add_option("--neighborhoods", f.neighborhoods, "JSON object: point id -> neighborhood ids");
    app.add_option("--nbhd-radius", f.nbhd_radius, "ball radius for default neighborhoods (2R)");
    app.add_flag("--decompose", f.run_decompose, "boundary-check: also decompose from the boundaries");
    app.add_option("--base-point", f.base_point, "annulus base point");

    std::vector<std::pair<std::string, std::string>> subs = {
        {"gen", "generate a space file"},
        {"content", "Hausdorff content of a point set"},
        {"coarea-check", "check the discrete co-area inequality on an annulus"},
        {"separate", "minimal D-separating set"},
        {"decompose", "width certificate by separator recursion"},
        {"decompose-chunked", "width certificate with annulus chunks"},
        {"boundary-check", "boundary-content condition per point"},
        {"verify", "re-verify a certificate"},
        {"k5-audit", "large-fiber witness for a planar drawing of K5"},
        {"sweep", "decompose over a grid of epsilon multipliers"},
    };
    for (const auto& [name, help] : subs) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        Run run(sub, f);
        int code = 1;
        if (sub == "gen") code = cmd_gen(f, run);
        else if (sub == "content") code = cmd_content(f, run);
        else if (sub == "coarea-check") code = cmd_coarea(f, run);
        else if (sub == "separate") code = cmd_separate(f, run);
        else if (sub == "decompose") code = cmd_decompose(f, run, false);
        else if (sub == "decompose-chunked") code = cmd_decompose(f, run, true);
        else if (sub == "boundary-check") code = cmd_boundary(f, run);
        else if (sub == "verify") code = cmd_verify(f, run);
        else if (sub == "k5-audit") code = cmd_k5(f, run);
        else if (sub == "sweep") code = cmd_sweep(f, run);
        return run.finish(code);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const MetricError& e) {
        auto t = e.triple();
        std::cerr << "error: " << e.what() << " (points " << t[0] << ", " << t[1] << ", " << t[2] << ")\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
