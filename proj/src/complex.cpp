#include "widthlab/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace widthlab {

std::vector<Simplex> faces_of(const Simplex& s) {
    std::vector<Simplex> out;
    const std::size_t k = s.size();
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        Simplex f;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) f.push_back(s[i]);
        out.push_back(std::move(f));
    }
    return out;
}

SimplexId SimplicialComplex::add_closed(Simplex s) {
    if (s.empty()) throw Error("add_closed: empty simplex");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw Error("add_closed: repeated vertex");
    if (auto id = find(s)) return *id;
    // faces first, by increasing size, so ids respect the face order
    auto faces = faces_of(s);
    std::stable_sort(faces.begin(), faces.end(), [](const Simplex& a, const Simplex& b) { return a.size() < b.size(); });
    for (auto& f : faces) {
        if (index_.count(f)) continue;
        auto id = static_cast<SimplexId>(simplices_.size());
        if (f.size() == 1) vertices_.insert(std::lower_bound(vertices_.begin(), vertices_.end(), f[0]), f[0]);
        index_.emplace(f, id);
        simplices_.push_back(std::move(f));
    }
    return index_.at(s);
}

std::optional<SimplexId> SimplicialComplex::find(const Simplex& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int SimplicialComplex::dim() const {
    int d = -1;
    for (const auto& s : simplices_) d = std::max(d, static_cast<int>(s.size()) - 1);
    return d;
}

std::vector<SimplexId> SimplicialComplex::maximal_simplices() const {
    std::set<Simplex> proper;
    for (const auto& s : simplices_)
        for (auto& f : faces_of(s))
            if (f.size() < s.size()) proper.insert(std::move(f));
    std::vector<SimplexId> out;
    for (SimplexId id = 0; id < simplices_.size(); ++id)
        if (!proper.count(simplices_[id])) out.push_back(id);
    return out;
}

bool SimplicialComplex::is_downward_closed() const {
    for (const auto& s : simplices_)
        for (const auto& f : faces_of(s))
            if (!index_.count(f)) return false;
    return true;
}

VertexId SimplicialComplex::next_free_vertex() const { return vertices_.empty() ? 0 : vertices_.back() + 1; }

std::vector<SimplexId> minimal_subcomplex_containing(const SimplicialComplex& complex,
                                                     const std::vector<SimplexId>& ids) {
    std::set<SimplexId> out;
    for (SimplexId id : ids) {
        if (id >= complex.simplex_count()) throw Error("minimal_subcomplex_containing: invalid simplex id");
        for (const auto& f : faces_of(complex.simplex(id))) out.insert(*complex.find(f));
    }
    return {out.begin(), out.end()};
}

SimplicialComplex cone_attach(const SimplicialComplex& base, const std::vector<SimplexId>& sub, VertexId apex) {
    if (base.has_vertex(apex)) throw Error("cone_attach: apex id " + std::to_string(apex) + " already in use");
    const std::set<SimplexId> members(sub.begin(), sub.end());
    for (SimplexId id : sub) {
        if (id >= base.simplex_count()) throw Error("cone_attach: invalid simplex id");
        for (const auto& f : faces_of(base.simplex(id)))
            if (!members.count(*base.find(f))) throw Error("cone_attach: subcomplex is not downward closed");
    }
    SimplicialComplex out = base;
    out.add_vertex(apex);
    for (SimplexId id : sub) {
        Simplex s = base.simplex(id);
        s.push_back(apex);
        out.add_closed(std::move(s));
    }
    return out;
}

namespace {

std::vector<std::vector<PointId>> fibers_of(const SimplicialComplex& complex, const std::vector<SimplexId>& assignment) {
    std::vector<std::vector<PointId>> fibers(complex.simplex_count());
    for (PointId p = 0; p < assignment.size(); ++p) fibers[assignment[p]].push_back(p);
    return fibers;
}

struct FiberTables {
    std::vector<double> open;
    std::vector<double> closed;
};

FiberTables compute_fibers(const FiniteMetricSpace& space, const SimplicialComplex& complex,
                           const std::vector<SimplexId>& assignment) {
    auto fibers = fibers_of(complex, assignment);
    FiberTables t;
    t.open.resize(complex.simplex_count());
    for (SimplexId id = 0; id < complex.simplex_count(); ++id) t.open[id] = diameter(space, fibers[id]);
    std::map<std::pair<SimplexId, SimplexId>, double> cross;
    t.closed.resize(complex.simplex_count());
    for (SimplexId id = 0; id < complex.simplex_count(); ++id) {
        std::vector<SimplexId> faces;
        for (const auto& f : faces_of(complex.simplex(id))) {
            SimplexId fid = *complex.find(f);
            if (!fibers[fid].empty()) faces.push_back(fid);
        }
        double best = 0.0;
        for (std::size_t i = 0; i < faces.size(); ++i) {
            best = std::max(best, t.open[faces[i]]);
            for (std::size_t j = i + 1; j < faces.size(); ++j) {
                auto key = std::minmax(faces[i], faces[j]);
                auto it = cross.find(key);
                if (it == cross.end())
                    it = cross.emplace(key, cross_diameter(space, fibers[key.first], fibers[key.second])).first;
                best = std::max(best, it->second);
            }
        }
        t.closed[id] = best;
    }
    return t;
}

}  // namespace

WidthCertificate make_certificate(const FiniteMetricSpace& space, SimplicialComplex complex,
                                  std::vector<SimplexId> assignment, double r, int n) {
    if (assignment.size() != space.size()) throw Error("make_certificate: assignment must cover every point");
    for (SimplexId id : assignment)
        if (id >= complex.simplex_count()) throw Error("make_certificate: assignment names an unknown simplex");
    WidthCertificate cert;
    auto tables = compute_fibers(space, complex, assignment);
    cert.complex = std::move(complex);
    cert.assignment = std::move(assignment);
    cert.r = r;
    cert.n = n;
    cert.fiber_diams = std::move(tables.open);
    cert.closed_fiber_diams = std::move(tables.closed);
    for (double d : cert.fiber_diams) cert.max_fiber = std::max(cert.max_fiber, d);
    for (double d : cert.closed_fiber_diams) cert.max_closed_fiber = std::max(cert.max_closed_fiber, d);
    return cert;
}

CertificateReport verify_certificate(const FiniteMetricSpace& space, const WidthCertificate& cert,
                                     bool require_closed) {
    if (cert.assignment.size() != space.size())
        throw Error("verify_certificate: " + std::to_string(space.size() - std::min(space.size(), cert.assignment.size())) +
                    " point(s) unassigned");
    CertificateReport rep;
    for (PointId p = 0; p < cert.assignment.size(); ++p)
        if (cert.assignment[p] >= cert.complex.simplex_count())
            throw Error("verify_certificate: point " + std::to_string(p) + " assigned to an unknown simplex");
    rep.assigned_points = cert.assignment.size();

    if (!cert.complex.is_downward_closed()) rep.problems.push_back("complex is not downward closed");
    if (cert.complex.dim() > cert.n - 1)
        rep.problems.push_back("complex dimension " + std::to_string(cert.complex.dim()) + " exceeds n-1 = " +
                               std::to_string(cert.n - 1));

    auto tables = compute_fibers(space, cert.complex, cert.assignment);
    if (cert.fiber_diams != tables.open) rep.problems.push_back("stored fiber diameters do not match recomputation");
    if (!cert.closed_fiber_diams.empty() && cert.closed_fiber_diams != tables.closed)
        rep.problems.push_back("stored closed fiber diameters do not match recomputation");
    for (SimplexId id = 0; id < tables.open.size(); ++id) {
        if (!rep.worst_simplex || tables.open[id] > rep.max_fiber) {
            rep.max_fiber = tables.open[id];
            rep.worst_simplex = id;
        }
        rep.max_closed_fiber = std::max(rep.max_closed_fiber, tables.closed[id]);
    }
    double stored_max = 0.0;
    for (double d : cert.fiber_diams) stored_max = std::max(stored_max, d);
    if (stored_max != cert.max_fiber) rep.problems.push_back("stored max_fiber does not match fiber table");
    if (rep.max_fiber > cert.r) {
        std::ostringstream os;
        os << "simplex " << *rep.worst_simplex << " has fiber diameter " << rep.max_fiber << " > R = " << cert.r;
        rep.problems.push_back(os.str());
    }
    if (require_closed && rep.max_closed_fiber > cert.r) {
        std::ostringstream os;
        os << "closed fiber diameter " << rep.max_closed_fiber << " > R = " << cert.r;
        rep.problems.push_back(os.str());
    }
    rep.pass = rep.problems.empty();
    return rep;
}

std::string to_dot(const SimplicialComplex& complex) {
    std::ostringstream os;
    os << "graph complex {\n";
    for (VertexId v : complex.vertices()) os << "  v" << v << ";\n";
    for (SimplexId id = 0; id < complex.simplex_count(); ++id) {
        const auto& s = complex.simplex(id);
        if (s.size() == 2) os << "  v" << s[0] << " -- v" << s[1] << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace widthlab
