#include "mforge/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mforge::polytope {

namespace {

int rational_sign(const Rational& q) { return sgn(q); }

struct RationalVecLess {
    bool operator()(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
        for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
            int c = cmp(a[i], b[i]);
            if (c != 0) return c < 0;
        }
        return a.size() < b.size();
    }
};

// exact Gaussian elimination; nullopt when singular
std::optional<std::vector<Rational>> solve_rational(std::vector<std::vector<Rational>> a,
                                                    std::vector<Rational> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (a[i][k] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return std::nullopt;
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            Rational f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= a[i][j] * b[j];
        b[i] /= a[i][i];
    }
    return b;
}

// ---- Fourier-Motzkin feasibility for systems a.x >= b over the rationals --

struct Ineq {
    std::vector<Rational> a;
    Rational b;
};

// canonical scale for dedup: divide by the largest |coefficient|
void normalize_ineq(Ineq& q) {
    Rational scale = 0;
    for (const Rational& c : q.a) {
        Rational a = abs(c);
        if (a > scale) scale = a;
    }
    {
        Rational a = abs(q.b);
        if (a > scale) scale = a;
    }
    if (scale == 0) return;
    for (Rational& c : q.a) c /= scale;
    q.b /= scale;
}

struct IneqLess {
    RationalVecLess vl;
    bool operator()(const Ineq& x, const Ineq& y) const {
        int c = cmp(x.b, y.b);
        if (c != 0) return c < 0;
        return vl(x.a, y.a);
    }
};

// feasibility of {x : a_i . x >= b_i}; eliminates one variable at a time
bool fm_feasible(std::vector<Ineq> sys, int nvars) {
    for (int v = nvars - 1; v >= 0; --v) {
        std::vector<Ineq> pos, neg;
        std::set<Ineq, IneqLess> next;
        auto keep = [&](Ineq q) {
            bool allzero = true;
            for (const Rational& c : q.a)
                if (c != 0) {
                    allzero = false;
                    break;
                }
            if (allzero) {
                if (q.b > 0) return false;  // 0 >= b > 0, infeasible
                return true;                // trivially true, drop
            }
            normalize_ineq(q);
            next.insert(std::move(q));
            return true;
        };
        for (Ineq& q : sys) {
            int s = rational_sign(q.a[v]);
            if (s > 0)
                pos.push_back(std::move(q));
            else if (s < 0)
                neg.push_back(std::move(q));
            else if (!keep(std::move(q)))
                return false;
        }
        for (const Ineq& p : pos)
            for (const Ineq& m : neg) {
                // cancel variable v:  (-m_v) * p  +  (p_v) * m
                Ineq q;
                q.a.resize(p.a.size());
                Rational cp = -m.a[v];  // > 0
                Rational cm = p.a[v];   // > 0
                for (size_t j = 0; j < p.a.size(); ++j) q.a[j] = cp * p.a[j] + cm * m.a[j];
                q.a[v] = 0;
                q.b = cp * p.b + cm * m.b;
                if (!keep(std::move(q))) return false;
            }
        sys.assign(next.begin(), next.end());
    }
    for (const Ineq& q : sys)
        if (q.b > 0) return false;
    return true;
}

std::vector<Ineq> recession_system(const std::vector<Facet>& facets, int dim) {
    std::vector<Ineq> sys;
    sys.reserve(facets.size());
    for (const Facet& f : facets) {
        Ineq q;
        q.a.assign(f.u.begin(), f.u.end());
        q.b = 0;
        sys.push_back(std::move(q));
    }
    (void)dim;
    return sys;
}

// iterate over k-subsets of {0..d-1}
bool next_combination(std::vector<int>& idx, int d) {
    int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < d - k + i) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::string format_point(const std::vector<Rational>& p) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) os << ", ";
        os << p[i];
    }
    os << ")";
    return os.str();
}

}  // namespace

std::vector<double> Vertex::point_double() const {
    std::vector<double> p;
    p.reserve(point.size());
    for (const Rational& q : point) p.push_back(q.get_d());
    return p;
}

bool recession_cone_trivial_fm(const std::vector<Facet>& facets, int dim) {
    // nontrivial iff some x with cone constraints reaches x_i >= 1 or -x_i >= 1
    for (int i = 0; i < dim; ++i) {
        for (int s : {+1, -1}) {
            std::vector<Ineq> sys = recession_system(facets, dim);
            Ineq probe;
            probe.a.assign(dim, Rational(0));
            probe.a[i] = s;
            probe.b = 1;
            sys.push_back(std::move(probe));
            if (fm_feasible(std::move(sys), dim)) return false;
        }
    }
    return true;
}

bool recession_cone_trivial_rays(const std::vector<Facet>& facets, int dim) {
    const int d = static_cast<int>(facets.size());
    // lineality space: common kernel of all normals
    lattice::IntMatrix rows(d, dim);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < dim; ++i) rows(j, i) = facets[j].u[i];
    if (lattice::kernel_basis(rows).cols() > 0) return false;

    // candidate extreme rays: kernels of (dim-1)-subsets of normals
    auto ray_feasible = [&](const std::vector<lattice::Int>& v) {
        bool all_ge = true, all_le = true;
        for (int j = 0; j < d; ++j) {
            lattice::Int s = 0;
            for (int i = 0; i < dim; ++i) s += lattice::Int(facets[j].u[i]) * v[i];
            if (s > 0) all_le = false;
            if (s < 0) all_ge = false;
        }
        return all_ge || all_le;
    };

    std::vector<int> idx(dim - 1);
    for (int i = 0; i < dim - 1; ++i) idx[i] = i;
    if (dim - 1 > d) return true;
    do {
        lattice::IntMatrix sub(std::max(dim - 1, 0), dim);
        for (int r = 0; r < dim - 1; ++r)
            for (int i = 0; i < dim; ++i) sub(r, i) = facets[idx[r]].u[i];
        lattice::IntMatrix ker = lattice::kernel_basis(sub);
        if (ker.cols() != 1) continue;
        std::vector<lattice::Int> v(dim);
        for (int i = 0; i < dim; ++i) v[i] = ker(i, 0);
        if (ray_feasible(v)) return false;
    } while (next_combination(idx, d));
    return true;
}

LabelledPolytope::LabelledPolytope(int dim, std::vector<Facet> facets, std::string name)
    : dim_(dim), facets_(std::move(facets)), name_(std::move(name)) {
    validate_and_enumerate();
}

void LabelledPolytope::validate_and_enumerate() {
    if (dim_ < 1) throw ValidationError("dimension mismatch", "dim must be >= 1");
    const int d = facet_count();
    const int n = dim_;
    for (int j = 0; j < d; ++j) {
        if (static_cast<int>(facets_[j].u.size()) != n) {
            std::ostringstream os;
            os << "facet " << j << ": normal has " << facets_[j].u.size()
               << " entries, expected " << n;
            throw ValidationError("dimension mismatch", os.str());
        }
        bool zero = true;
        for (long c : facets_[j].u)
            if (c != 0) zero = false;
        if (zero) {
            std::ostringstream os;
            os << "facet " << j << ": zero normal";
            throw ValidationError("zero normal", os.str());
        }
    }
    if (d == 0) throw ValidationError("facet count", "no facets");

    // compactness first so a half-space reports "unbounded" rather than the
    // (implied) facet-count violation
    if (!recession_cone_trivial_fm(facets_, n))
        throw ValidationError("unbounded", "recession cone is nontrivial: polytope unbounded");

    if (d <= n) {
        std::ostringstream os;
        os << "polytope needs more than n facets (d = " << d << ", n = " << n << ")";
        throw ValidationError("facet count", os.str());
    }

    // exact vertex enumeration over n-subsets of facets
    std::map<std::vector<Rational>, std::vector<int>, RationalVecLess> found;
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    do {
        std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
        std::vector<Rational> b(n);
        for (int r = 0; r < n; ++r) {
            for (int i = 0; i < n; ++i) a[r][i] = facets_[idx[r]].u[i];
            b[r] = facets_[idx[r]].lambda;
        }
        auto x = solve_rational(std::move(a), std::move(b));
        if (!x) continue;
        bool feasible = true;
        for (int j = 0; j < d && feasible; ++j)
            if (ell_exact(j, *x) < 0) feasible = false;
        if (!feasible) continue;
        if (found.count(*x)) continue;
        std::vector<int> active;
        for (int j = 0; j < d; ++j)
            if (ell_exact(j, *x) == 0) active.push_back(j);
        found.emplace(std::move(*x), std::move(active));
    } while (next_combination(idx, d));

    if (found.empty())
        throw ValidationError("empty interior", "no vertices: the inequality system is infeasible");

    vertices_.clear();
    vertices_.reserve(found.size());
    for (auto& [pt, act] : found) vertices_.push_back(Vertex{pt, act});

    // full-dimensionality: ell_j at the vertex barycenter is positive exactly
    // when facet j is not an implicit equality on Delta
    std::vector<Rational> bary(n, Rational(0));
    for (const Vertex& v : vertices_)
        for (int i = 0; i < n; ++i) bary[i] += v.point[i];
    for (int i = 0; i < n; ++i) bary[i] /= Rational(static_cast<long>(vertices_.size()));
    for (int j = 0; j < d; ++j)
        if (ell_exact(j, bary) <= 0) {
            std::ostringstream os;
            os << "facet " << j << " holds with equality on all of Delta: interior empty";
            throw ValidationError("empty interior", os.str());
        }

    // facet redundancy via vertex active-set counts: genuine (n-1)-contact
    // puts a facet into >= n vertex active sets (>= 1 for n = 1). A facet
    // whose low count comes with a non-simple vertex is kept: that defect is
    // reported by classify_delzant as non-simplicity, not redundancy.
    const int need = (n >= 2) ? n : 1;
    for (int j = 0; j < d; ++j) {
        int count = 0;
        bool touches_nonsimple = false;
        for (const Vertex& v : vertices_) {
            if (std::binary_search(v.active.begin(), v.active.end(), j)) {
                ++count;
                if (static_cast<int>(v.active.size()) > n) touches_nonsimple = true;
            }
        }
        if (count >= need) continue;
        if (count > 0 && touches_nonsimple) continue;
        std::ostringstream os;
        os << "facet " << j << " is not active on any (n-1)-face";
        throw ValidationError("redundant facet", os.str());
    }
}

Rational LabelledPolytope::ell_exact(int j, const std::vector<Rational>& x) const {
    Rational s = -facets_[j].lambda;
    for (int i = 0; i < dim_; ++i) s += Rational(facets_[j].u[i]) * x[i];
    return s;
}

double LabelledPolytope::ell_at(int j, const std::vector<double>& x) const {
    double s = -facets_[j].lambda.get_d();
    for (int i = 0; i < dim_; ++i) s += static_cast<double>(facets_[j].u[i]) * x[i];
    return s;
}

double LabelledPolytope::lambda_sum() const {
    Rational s = 0;
    for (const Facet& f : facets_) s += f.lambda;
    return s.get_d();
}

std::vector<double> LabelledPolytope::vertex_barycenter() const {
    std::vector<double> b(dim_, 0.0);
    for (const Vertex& v : vertices_)
        for (int i = 0; i < dim_; ++i) b[i] += v.point[i].get_d();
    for (double& c : b) c /= static_cast<double>(vertices_.size());
    return b;
}

std::pair<std::vector<double>, std::vector<double>> LabelledPolytope::bounding_box() const {
    std::vector<double> lo(dim_), hi(dim_);
    for (int i = 0; i < dim_; ++i) {
        lo[i] = hi[i] = vertices_[0].point[i].get_d();
        for (const Vertex& v : vertices_) {
            double c = v.point[i].get_d();
            lo[i] = std::min(lo[i], c);
            hi[i] = std::max(hi[i], c);
        }
    }
    return {lo, hi};
}

bool LabelledPolytope::interior_contains(const std::vector<double>& x, double tol_boundary) const {
    if (static_cast<int>(x.size()) != dim_) return false;
    for (int j = 0; j < facet_count(); ++j)
        if (!(ell_at(j, x) > tol_boundary)) return false;
    return true;
}

const char* to_string(DelzantClass c) {
    switch (c) {
        case DelzantClass::Integral: return "Integral";
        case DelzantClass::Rational: return "Rational";
        default: return "Invalid";
    }
}

std::vector<Vertex> enumerate_vertices(const LabelledPolytope& p) { return p.vertices(); }

DelzantReport classify_delzant(const LabelledPolytope& p) {
    DelzantReport rep;
    rep.vertices = p.vertices();
    const int n = p.dim();
    bool integral = true;
    for (const Vertex& v : rep.vertices) {
        if (static_cast<int>(v.active.size()) != n) {
            rep.classification = DelzantClass::Invalid;
            rep.reason = "non-simple vertex at " + format_point(v.point) + ": " +
                         std::to_string(v.active.size()) + " active facets, expected " +
                         std::to_string(n);
            rep.vertex_orders.clear();
            return rep;
        }
        lattice::IntMatrix m(n, n);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) m(r, c) = p.facet(v.active[c]).u[r];
        lattice::Int order = lattice::abs_determinant(m);
        // a vertex's n active normals are independent, so order >= 1
        if (order != 1) integral = false;
        rep.vertex_orders.push_back(order);
    }
    rep.classification = integral ? DelzantClass::Integral : DelzantClass::Rational;
    return rep;
}

bool interior_contains(const LabelledPolytope& p, const std::vector<double>& x,
                       double tol_boundary) {
    return p.interior_contains(x, tol_boundary);
}

Rational nearest_rational(double v, long max_den) {
    if (!std::isfinite(v)) throw ValidationError("bad number", "lambda is not finite");
    Rational target(v);  // exact binary value
    target.canonicalize();
    if (target.get_den() <= max_den) return target;

    // continued-fraction convergents of the exact value, with a final
    // semiconvergent so the result is the true best approximation
    mpz_class p0 = 1, q0 = 0;
    mpz_class num = target.get_num(), den = target.get_den();
    mpz_class a = num / den;  // floor for positive den; fix sign below
    if (num < 0 && a * den != num) a -= 1;
    mpz_class p1 = a, q1 = 1;
    mpz_class rem = num - a * den;
    while (rem != 0) {
        num = den;
        den = rem;
        a = num / den;
        if (num < 0 && a * den != num) a -= 1;
        rem = num - a * den;
        mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) {
            mpz_class t = (mpz_class(max_den) - q0) / q1;
            mpz_class ps = t * p1 + p0, qs = t * q1 + q0;
            Rational best(p1, q1), semi(ps, qs);
            best.canonicalize();
            semi.canonicalize();
            if (qs > 0 && abs(semi - target) < abs(best - target)) return semi;
            return best;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    Rational exact(p1, q1);
    exact.canonicalize();
    return exact;
}

namespace {

std::pair<int, int> line_col(const std::string& text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

Rational parse_fraction_string(const std::string& s, int j) {
    size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) throw std::invalid_argument("no '/'");
        mpz_class p(s.substr(0, slash)), q(s.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("zero denominator");
        Rational r(p, q);
        r.canonicalize();
        return r;
    } catch (const std::exception&) {
        std::ostringstream os;
        os << "facet " << j << ": lambda string must be \"p/q\", got \"" << s << "\"";
        throw ValidationError("bad number", os.str());
    }
}

}  // namespace

ParseResult parse_polytope(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);  // rejects trailing garbage
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(e.what(), line, col);
    }

    if (!doc.is_object()) throw ValidationError("bad document", "top level must be an object");
    if (!doc.contains("dim") || !doc["dim"].is_number_integer())
        throw ValidationError("bad document", "missing integer \"dim\"");
    if (!doc.contains("facets") || !doc["facets"].is_array())
        throw ValidationError("bad document", "missing array \"facets\"");

    int dim = doc["dim"].get<int>();
    std::string name = doc.value("name", std::string());

    std::vector<Facet> facets;
    std::vector<std::string> warnings;
    int j = 0;
    for (const auto& fj : doc["facets"]) {
        if (!fj.is_object() || !fj.contains("u") || !fj.contains("lambda")) {
            std::ostringstream os;
            os << "facet " << j << ": expected object with \"u\" and \"lambda\"";
            throw ValidationError("bad document", os.str());
        }
        Facet f;
        if (!fj["u"].is_array()) {
            std::ostringstream os;
            os << "facet " << j << ": \"u\" must be an array of integers";
            throw ValidationError("bad document", os.str());
        }
        for (const auto& c : fj["u"]) {
            if (!c.is_number_integer()) {
                std::ostringstream os;
                os << "facet " << j << ": normal entries must be integers";
                throw ValidationError("bad document", os.str());
            }
            f.u.push_back(c.get<long>());
        }
        const auto& lj = fj["lambda"];
        if (lj.is_number_integer()) {
            f.lambda = Rational(static_cast<long>(lj.get<long long>()));
        } else if (lj.is_string()) {
            f.lambda = parse_fraction_string(lj.get<std::string>(), j);
        } else if (lj.is_number_float()) {
            double v = lj.get<double>();
            f.lambda = nearest_rational(v, 1000000000L);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            std::ostringstream os;
            os << "facet " << j << ": lambda " << buf << " snapped to rational " << f.lambda;
            warnings.push_back(os.str());
        } else {
            std::ostringstream os;
            os << "facet " << j << ": lambda must be an integer, \"p/q\" string, or float";
            throw ValidationError("bad document", os.str());
        }
        facets.push_back(std::move(f));
        ++j;
    }

    return ParseResult{LabelledPolytope(dim, std::move(facets), std::move(name)),
                       std::move(warnings)};
}

}  // namespace mforge::polytope
