#include "mforge/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "mforge/checks.hpp"
#include "mforge/json_writer.hpp"
#include "mforge/legendre.hpp"
#include "mforge/metric.hpp"
#include "mforge/quotient.hpp"

namespace mforge::cli {

using jsonw::JsonWriter;
using linalg::Vec;
using polytope::LabelledPolytope;
using polytope::ParseResult;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitUsage = 64;

struct Options {
    std::string file;
    std::vector<std::string> points;
    std::string y_arg;
    std::string z_arg;
    int resolution = 33;
    std::string format = "json";
    double tol_boundary = kTolBoundary;
    double tol_newton = kTolNewton;
    double tol_kn = kTolKn;
};

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};

void emit_error(std::ostream& err, const std::string& kind, const std::string& message,
                int line = 0, int col = 0) {
    JsonWriter w(err);
    w.begin_object();
    w.field("error", kind);
    w.field("message", message);
    if (line > 0) {
        w.field("line", static_cast<long>(line));
        w.field("column", static_cast<long>(col));
    }
    w.end_object();
    w.finish();
}

Vec parse_reals(const std::string& s, const char* what) {
    Vec out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": cannot parse real '" + tok + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string(what) + ": empty list");
    return out;
}

// "r1:t1,r2:t2,..." -> FlatPoint
flatmodel::FlatPoint parse_flat_point(const std::string& s) {
    Vec r, th;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t colon = tok.find(':');
        if (colon == std::string::npos)
            throw UsageError("--z entries must be r:theta, got '" + tok + "'");
        try {
            r.push_back(std::stod(tok.substr(0, colon)));
            th.push_back(std::stod(tok.substr(colon + 1)));
        } catch (const std::exception&) {
            throw UsageError("--z: cannot parse '" + tok + "'");
        }
    }
    if (r.empty()) throw UsageError("--z: empty list");
    return flatmodel::FlatPoint(r, th);
}

ParseResult load_polytope(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("io", "cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return polytope::parse_polytope(ss.str());
}

void write_vertex(JsonWriter& w, const polytope::Vertex& v) {
    w.begin_object();
    w.key("point");
    w.value(v.point_double());
    w.key("exact");
    w.begin_array();
    for (const auto& q : v.point) {
        std::ostringstream os;
        os << q;
        w.value(os.str());
    }
    w.end_array();
    w.key("active");
    w.begin_array();
    for (int j : v.active) w.value(static_cast<long>(j));
    w.end_array();
    w.end_object();
}

void write_warnings(JsonWriter& w, const std::vector<std::string>& warnings) {
    w.key("warnings");
    w.begin_array();
    for (const auto& s : warnings) w.value(s);
    w.end_array();
}

int cmd_validate(const ParseResult& pr, std::ostream& out) {
    const LabelledPolytope& p = pr.polytope;
    auto report = polytope::classify_delzant(p);

    JsonWriter w(out);
    w.begin_object();
    if (!p.name().empty()) w.field("name", p.name());
    w.field("dim", static_cast<long>(p.dim()));
    w.field("facet_count", static_cast<long>(p.facet_count()));
    w.field("classification", polytope::to_string(report.classification));
    if (report.classification == polytope::DelzantClass::Invalid)
        w.field("reason", report.reason);
    w.field("vertices", static_cast<long>(report.vertices.size()));
    w.key("orders");
    w.begin_array();
    for (const auto& o : report.vertex_orders) w.value(o);
    w.end_array();
    w.key("vertex_points");
    w.begin_array();
    for (const auto& v : report.vertices) write_vertex(w, v);
    w.end_array();
    write_warnings(w, pr.warnings);
    w.end_object();
    w.finish();
    return report.classification == polytope::DelzantClass::Invalid ? kExitInvalidInput
                                                                    : kExitOk;
}

int cmd_vertices(const ParseResult& pr, std::ostream& out) {
    JsonWriter w(out);
    w.begin_object();
    w.field("count", static_cast<long>(pr.polytope.vertices().size()));
    w.key("vertices");
    w.begin_array();
    for (const auto& v : pr.polytope.vertices()) write_vertex(w, v);
    w.end_array();
    w.end_object();
    w.finish();
    return kExitOk;
}

int cmd_delzant_data(const ParseResult& pr, std::ostream& out) {
    auto data = quotient::build_delzant_data(pr.polytope);
    JsonWriter w(out);
    w.begin_object();
    w.field("dim", static_cast<long>(pr.polytope.dim()));
    w.field("facet_count", static_cast<long>(pr.polytope.facet_count()));
    w.key("u_matrix");
    w.begin_array();
    for (int i = 0; i < data.u_matrix.rows(); ++i) {
        w.begin_array();
        for (int j = 0; j < data.u_matrix.cols(); ++j) w.value(data.u_matrix(i, j));
        w.end_array();
    }
    w.end_array();
    w.key("kernel_basis");  // list of basis column vectors of n ∩ Z^d
    w.begin_array();
    for (int k = 0; k < data.kernel.cols(); ++k) {
        w.begin_array();
        for (int j = 0; j < data.kernel.rows(); ++j) w.value(data.kernel(j, k));
        w.end_array();
    }
    w.end_array();
    w.field("c", data.c);
    w.field("sublattice_index", data.sublattice_index);
    w.key("nu_facets");
    w.begin_array();
    for (int j : data.nu_facets) w.value(static_cast<long>(j));
    w.end_array();
    w.end_object();
    w.finish();
    return kExitOk;
}

void write_sample(JsonWriter& w, const potential::PotentialSample& s,
                  const metric::MetricSample& m) {
    w.begin_object();
    w.field("x", s.x);
    w.field("ell", s.ell);
    w.field("G", s.g);
    w.field("y", s.y);
    w.field("F", s.f);
    w.field("hessG", s.hess_g);
    w.field("hessF", s.hess_f);
    w.key("metric");
    w.begin_object();
    w.field("g", m.g);
    w.field("omega", m.omega);
    w.field("J", m.j);
    w.end_object();
    w.end_object();
}

int cmd_eval(const ParseResult& pr, const Options& opt, std::ostream& out) {
    if (opt.points.empty()) throw UsageError("eval requires at least one --point");
    JsonWriter w(out);
    bool many = opt.points.size() > 1;
    if (many) w.begin_array();
    for (const auto& ps : opt.points) {
        Vec x = parse_reals(ps, "--point");
        if (static_cast<int>(x.size()) != pr.polytope.dim())
            throw UsageError("--point has wrong dimension");
        auto s = potential::guillemin_sample(pr.polytope, x, opt.tol_boundary);
        write_sample(w, s, metric::metric_at(s));
    }
    if (many) w.end_array();
    w.finish();
    return kExitOk;
}

int cmd_grid(const ParseResult& pr, const Options& opt, std::ostream& out) {
    const LabelledPolytope& p = pr.polytope;
    const int n = p.dim();
    const int res = opt.resolution;
    auto [lo, hi] = p.bounding_box();

    std::vector<Vec> rows;
    std::vector<int> idx(n, 0);
    for (;;) {
        Vec x(n);
        for (int i = 0; i < n; ++i)
            x[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(idx[i]) /
                               static_cast<double>(res - 1);
        if (p.interior_contains(x, opt.tol_boundary)) rows.push_back(x);
        // row-major: last axis fastest
        int axis = n - 1;
        while (axis >= 0 && ++idx[axis] == res) idx[axis--] = 0;
        if (axis < 0) break;
    }

    if (opt.format == "csv") {
        for (int i = 0; i < n; ++i) out << (i ? "," : "") << "x" << i;
        for (int j = 0; j < p.facet_count(); ++j) out << ",ell" << j;
        out << ",G,F";
        for (int i = 0; i < n; ++i) out << ",y" << i;
        out << "\n";
        for (const Vec& x : rows) {
            auto s = potential::guillemin_sample(p, x, opt.tol_boundary);
            bool first = true;
            auto emit = [&](double v) {
                out << (first ? "" : ",") << JsonWriter::format_double(v);
                first = false;
            };
            for (double v : s.x) emit(v);
            for (double v : s.ell) emit(v);
            emit(s.g);
            emit(s.f);
            for (double v : s.y) emit(v);
            out << "\n";
        }
        return kExitOk;
    }

    JsonWriter w(out);
    w.begin_object();
    w.field("resolution", static_cast<long>(res));
    w.field("count", static_cast<long>(rows.size()));
    w.key("rows");
    w.begin_array();
    for (const Vec& x : rows) {
        auto s = potential::guillemin_sample(p, x, opt.tol_boundary);
        w.begin_object();
        w.field("x", s.x);
        w.field("ell", s.ell);
        w.field("G", s.g);
        w.field("F", s.f);
        w.field("y", s.y);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    w.finish();
    return kExitOk;
}

int cmd_legendre_invert(const ParseResult& pr, const Options& opt, std::ostream& out) {
    if (opt.y_arg.empty()) throw UsageError("legendre-invert requires --y");
    Vec y = parse_reals(opt.y_arg, "--y");
    if (static_cast<int>(y.size()) != pr.polytope.dim())
        throw UsageError("--y has wrong dimension");
    legendre::InvertOptions iopt;
    iopt.tol_newton = opt.tol_newton;
    iopt.tol_boundary = opt.tol_boundary;
    auto solve = legendre::invert(pr.polytope, y, iopt);

    JsonWriter w(out);
    w.begin_object();
    w.field("y", solve.y_target);
    w.field("x", solve.x);
    w.field("iterations", static_cast<long>(solve.iterations));
    w.field("residual", solve.residual);
    w.field("converged", solve.converged);
    w.end_object();
    w.finish();
    return solve.converged ? kExitOk : kExitRuntime;
}

int cmd_project(const ParseResult& pr, const Options& opt, std::ostream& out) {
    if (opt.z_arg.empty()) throw UsageError("project requires --z");
    flatmodel::FlatPoint z = parse_flat_point(opt.z_arg);
    if (z.dim() != pr.polytope.facet_count())
        throw UsageError("--z must have one r:theta pair per facet");
    auto data = quotient::build_delzant_data(pr.polytope);
    quotient::KempfNessOptions kopt;
    kopt.tol_kn = opt.tol_kn;
    auto kn = quotient::kempf_ness_project(data, z, kopt);

    JsonWriter w(out);
    w.begin_object();
    w.key("z");
    w.begin_object();
    w.field("r", z.r);
    w.field("theta", z.theta);
    w.end_object();
    w.field("converged", kn.converged);
    w.field("iterations", static_cast<long>(kn.iterations));
    w.field("residual", kn.residual);
    w.field("xi", kn.xi);
    w.field("s", kn.s);
    w.field("t", kn.t);
    w.key("projected");
    w.begin_object();
    w.field("r", kn.projected.r);
    w.field("theta", kn.projected.theta);
    w.end_object();
    if (kn.converged) {
        w.field("x", kn.x);
        w.field("hatK", kn.hat_k);
        bool all_positive = true;
        for (double rj : z.r)
            if (!(rj > 0.0)) all_positive = false;
        if (all_positive) {
            auto dec = quotient::hatK_decomposition(data, z, kopt);
            w.key("decomposition");
            w.begin_object();
            w.field("hatK", dec.hat_k);
            w.field("bg_form", dec.bg_form);
            w.field("guillemin_diff", dec.guillemin_diff);
            w.field("lambda_integral", dec.lambda_integral);
            w.end_object();
        }
    }
    w.end_object();
    w.finish();
    return kn.converged ? kExitOk : kExitRuntime;
}

int cmd_check(const ParseResult& pr, const Options& opt, std::ostream& out) {
    checks::CheckOptions copt;
    copt.tol_boundary = opt.tol_boundary;
    copt.tol_newton = opt.tol_newton;
    copt.tol_kn = opt.tol_kn;
    if (const char* seed = std::getenv("MFORGE_SEED")) {
        try {
            copt.seed = std::stoull(seed);
        } catch (const std::exception&) {
            throw UsageError("MFORGE_SEED must be an integer");
        }
    }
    auto results = checks::run_checks(pr.polytope, copt);

    long failed = 0;
    JsonWriter w(out);
    w.begin_object();
    w.field("seed", static_cast<long>(copt.seed));
    w.key("results");
    w.begin_array();
    for (const auto& r : results) {
        if (!r.pass) ++failed;
        w.begin_object();
        w.field("module", r.module);
        w.field("invariant", r.invariant);
        w.field("pass", r.pass);
        w.field("defect", r.defect);
        w.field("tolerance", r.tolerance);
        if (!r.detail.empty()) w.field("detail", r.detail);
        w.end_object();
    }
    w.end_array();
    w.field("failed", failed);
    w.end_object();
    w.finish();
    return failed == 0 ? kExitOk : kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"toric Kaehler metrics from labelled polytopes", "mforge"};
    app.require_subcommand(1);

    Options opt;
    const std::vector<std::string> commands = {"validate",        "vertices", "delzant-data",
                                               "eval",            "grid",     "legendre-invert",
                                               "project",         "check"};
    for (const auto& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("file", opt.file, "polytope JSON file")->required();
        sub->add_option("--tol-boundary", opt.tol_boundary)->check(CLI::PositiveNumber);
        sub->add_option("--tol-newton", opt.tol_newton)->check(CLI::PositiveNumber);
        sub->add_option("--tol-kn", opt.tol_kn)->check(CLI::PositiveNumber);
        if (name == "eval") sub->add_option("--point", opt.points, "comma-separated reals");
        if (name == "grid") {
            sub->add_option("--resolution", opt.resolution)->check(CLI::Range(2, 100000));
            sub->add_option("--format", opt.format)
                ->check(CLI::IsMember({"json", "csv"}));
        }
        if (name == "legendre-invert") sub->add_option("--y", opt.y_arg);
        if (name == "project") sub->add_option("--z", opt.z_arg);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        emit_error(err, "usage", e.what());
        return kExitUsage;
    }

    try {
        ParseResult pr = load_polytope(opt.file);
        std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "validate") return cmd_validate(pr, out);
        if (cmd == "vertices") return cmd_vertices(pr, out);
        if (cmd == "delzant-data") return cmd_delzant_data(pr, out);
        if (cmd == "eval") return cmd_eval(pr, opt, out);
        if (cmd == "grid") return cmd_grid(pr, opt, out);
        if (cmd == "legendre-invert") return cmd_legendre_invert(pr, opt, out);
        if (cmd == "project") return cmd_project(pr, opt, out);
        if (cmd == "check") return cmd_check(pr, opt, out);
        emit_error(err, "usage", "unknown command " + cmd);
        return kExitUsage;
    } catch (const UsageError& e) {
        emit_error(err, "usage", e.what());
        return kExitUsage;
    } catch (const ParseError& e) {
        emit_error(err, "parse", e.what(), e.line, e.col);
        return kExitInvalidInput;
    } catch (const ValidationError& e) {
        emit_error(err, e.kind, e.what());
        return kExitInvalidInput;
    } catch (const NotDelzantError& e) {
        emit_error(err, "not-delzant", e.what());
        return kExitInvalidInput;
    } catch (const UnstableError& e) {
        emit_error(err, "unstable", e.what());
        return kExitRuntime;
    } catch (const Error& e) {
        emit_error(err, "runtime", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        emit_error(err, "internal", e.what());
        return kExitRuntime;
    }
}

}  // namespace mforge::cli
