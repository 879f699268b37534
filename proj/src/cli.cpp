#include "dpgeom/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "dpgeom/analysis.hpp"
#include "dpgeom/errors.hpp"
#include "dpgeom/harness.hpp"
#include "dpgeom/io.hpp"
#include "dpgeom/mechanisms.hpp"

namespace dpgeom::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"width", "mechanism", "compare",
                                            "bounds", "samplecomplexity", "reduce"};

struct Report {
    json result;
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;
};

std::string csv_cell(const json& v) {
    if (v.is_number_float()) return io::format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

std::uint64_t seed_of(const RunConfig& c) {
    if (!c.seed) throw InputError("--seed is required");
    return *c.seed;
}

std::string need(const std::string& path, const char* flag) {
    if (path.empty()) throw InputError(std::string(flag) + " is required for this command");
    return path;
}

ConvexBody load_body(const RunConfig& c) {
    return io::body_from_json(io::load_json_file(need(c.body, "--body")));
}

Workload load_workload(const RunConfig& c) {
    return io::workload_from_json(io::load_json_file(need(c.workload, "--workload")));
}

io::DatabaseFile load_db(const RunConfig& c) {
    return io::database_from_json(io::load_json_file(need(c.db, "--db")));
}

void check_common(const RunConfig& c) {
    if (!(c.eps > 0.0)) throw DomainError("--eps must be positive");
    if (!(c.delta > 0.0 && c.delta < 1.0)) throw DomainError("--delta must lie in (0, 1)");
    if (c.trials < 1) throw DomainError("--trials must be >= 1");
    if (c.samples < 2) throw DomainError("--samples must be >= 2");
    if (!(c.tol > 0.0)) throw DomainError("--tol must be positive");
    if (c.format != "json" && c.format != "csv") throw InputError("--format must be json or csv");
}

json body_summary(const ConvexBody& body) {
    return json{{"kind", to_string(body.kind())},
                {"dim", body.dim()},
                {"scale", body.scale()},
                {"vertex_count", body.vertex_count()},
                {"diameter", body.diameter()}};
}

json privacy_json(const PrivacyParams& p) {
    return json{{"eps", p.eps}, {"delta", p.delta}, {"sigma", p.sigma}, {"audited", false}};
}

Report cmd_width(const RunConfig& c) {
    const ConvexBody body = load_body(c);
    const auto seed = seed_of(c);
    Report r;
    const auto ell_star = gaussian_width(body, c.samples, seed);
    r.result["body"] = body_summary(body);
    r.result["ell_star"] = io::to_json(ell_star);
    r.header = {"quantity", "value", "stderr", "samples", "seed"};
    r.rows.push_back({"ell_star", ell_star.value, ell_star.std_error, ell_star.samples, ell_star.seed});
    try {
        const auto ell = gaussian_norm_mean(body, c.samples, seed);
        r.result["ell"] = io::to_json(ell);
        r.rows.push_back({"ell", ell.value, ell.std_error, ell.samples, ell.seed});
    } catch (const DomainError&) {
        r.result["ell"] = nullptr;
        r.result["ell_status"] = "infinite: body is not full-dimensional";
    }
    return r;
}

Report cmd_mechanism(const RunConfig& c) {
    check_common(c);
    const auto seed = seed_of(c);
    const auto params = PrivacyParams::make(c.eps, c.delta);
    const auto dbfile = load_db(c);
    Report r;
    r.result["mechanism"] = c.mech;

    Vector truth;
    std::function<Vector(std::uint64_t)> draw;
    bool query_form = false;
    PrivacyParams declared = params;
    std::optional<ConvexBody> body;
    std::optional<Workload> workload;

    if (c.mech == "gaussian" || c.mech == "projection") {
        if (!dbfile.points) throw InputError("--mech " + c.mech + " needs a point database");
        const PointDatabase db = *dbfile.points;
        truth = db.mean();
        if (c.mech == "gaussian") {
            const double bound = c.bound;
            draw = [db, params, bound](std::uint64_t s) {
                return gaussian_mechanism(db, params, bound, s).output;
            };
            r.result["noise_scale"] = params.sigma * bound / static_cast<double>(db.size());
        } else {
            body = load_body(c);
            const double tol = c.tol;
            const ConvexBody K = *body;
            draw = [K, db, params, tol](std::uint64_t s) {
                return projection_mechanism(K, db, params, s, tol).output;
            };
            r.result["noise_scale"] = params.sigma / static_cast<double>(db.size());
        }
    } else if (c.mech == "qr-from-meanpoint") {
        workload = load_workload(c);
        if (!dbfile.elements) throw InputError("--mech qr-from-meanpoint needs an element database");
        const ElementDatabase db = *dbfile.elements;
        truth = evaluate(*workload, db);
        query_form = true;
        MeanPointAlgorithm inner;
        if (c.inner == "exact")
            inner = exact_mean();
        else if (c.inner == "gaussian")
            inner = gaussian_algorithm(params, 1.0);
        else if (c.inner == "projection")
            inner = projection_algorithm(sensitivity_polytope(*workload, true), params, c.tol);
        else
            throw InputError("--inner must be exact, gaussian or projection");
        const Workload W = *workload;
        draw = [W, inner, db](std::uint64_t s) {
            return query_release_from_meanpoint(W, inner, db, s).answers;
        };
        r.result["constructed_entries"] = static_cast<long>(workload->queries()) * static_cast<long>(db.size());
    } else if (c.mech == "meanpoint-from-qr") {
        workload = load_workload(c);
        if (!dbfile.points) throw InputError("--mech meanpoint-from-qr needs a point database");
        const PointDatabase db = *dbfile.points;
        truth = db.mean();
        QueryReleaseAlgorithm inner;
        if (c.inner == "exact")
            inner = exact_answers(*workload);
        else if (c.inner == "gaussian")
            inner = gaussian_answers(*workload, params);
        else
            throw InputError("--inner must be exact or gaussian for meanpoint-from-qr");
        declared = composed(params, 2);
        const Workload W = *workload;
        draw = [W, inner, db](std::uint64_t s) { return meanpoint_from_query_release(W, inner, db, s); };
    } else {
        throw InputError("unknown --mech '" + c.mech + "'");
    }
    if (c.inner == "exact" && (c.mech == "qr-from-meanpoint" || c.mech == "meanpoint-from-qr"))
        r.result["declared_privacy"] = "none: exact inner algorithm";
    else
        r.result["declared_privacy"] = privacy_json(declared);

    const double m = static_cast<double>(truth.size());
    json outputs = json::array();
    json errors = json::array();
    double sum_sq = 0.0;
    r.header = {"trial", "error"};
    for (Index i = 0; i < truth.size(); ++i) r.header.push_back("output_" + std::to_string(i));
    for (long t = 0; t < c.trials; ++t) {
        const Vector out = draw(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
        double sq = (out - truth).squaredNorm();
        if (query_form) sq /= m;
        sum_sq += sq;
        const double err = std::sqrt(sq);
        outputs.push_back(io::to_json(out));
        errors.push_back(err);
        std::vector<json> row{t, err};
        for (Index i = 0; i < out.size(); ++i) row.push_back(out[i]);
        r.rows.push_back(std::move(row));
    }
    r.result["truth"] = io::to_json(truth);
    r.result["outputs"] = outputs;
    r.result["errors"] = errors;
    r.result["error_form"] = query_form ? "query: sqrt(mean_q (a_q - q(D))^2)" : "mean_point: ||out - mean||_2";
    r.result["rms_error"] = std::sqrt(sum_sq / static_cast<double>(c.trials));
    return r;
}

Report cmd_compare(const RunConfig& c) {
    check_common(c);
    const auto seed = seed_of(c);
    const auto grid = parse_grid(c.n_grid);
    const ConvexBody body = load_body(c);
    const auto params = PrivacyParams::make(c.eps, c.delta);
    const Adversary adversary = adversary_from_string(c.adversary);
    const auto ell_star = gaussian_width(body, c.samples, seed);
    const auto gauss = gaussian_algorithm(params, 1.0);
    const auto proj = projection_algorithm(body, params, c.tol);
    const double m = static_cast<double>(body.dim());

    Report r;
    r.header = {"n", "gauss_rms", "gauss_stderr", "proj_rms", "proj_stderr", "gauss_bound", "proj_bound"};
    json table = json::array();
    for (long n : grid) {
        const auto g = measure_error(body, gauss, n, c.trials, adversary, seed);
        const auto p = measure_error(body, proj, n, c.trials, adversary, seed);
        const double gauss_bound = params.sigma * std::sqrt(m) / static_cast<double>(n);
        const double proj_bound = std::sqrt(params.sigma * ell_star.value / static_cast<double>(n));
        r.rows.push_back({n, g.rms_error, g.std_error, p.rms_error, p.std_error, gauss_bound, proj_bound});
        table.push_back(json{{"n", n},
                             {"gauss_rms", g.rms_error},
                             {"gauss_stderr", g.std_error},
                             {"proj_rms", p.rms_error},
                             {"proj_stderr", p.std_error},
                             {"gauss_bound", gauss_bound},
                             {"proj_bound", proj_bound}});
    }
    r.result["body"] = body_summary(body);
    r.result["ell_star"] = io::to_json(ell_star);
    r.result["sigma"] = params.sigma;
    r.result["rows"] = table;
    const double regime = ell_star.value / std::sqrt(m);
    r.result["regime_ratio"] = regime;
    r.result["regime"] = regime >= kGaussianRegimeThreshold ? "gaussian-optimal" : "projection-favored";
    r.result["bounds"] = "gauss_bound = sigma sqrt(m)/n, proj_bound = sqrt(sigma l*/n), constants 1";
    r.result["sup_estimate"] = "lower_bound over adversary " + c.adversary;
    return r;
}

Report cmd_bounds(const RunConfig& c) {
    check_common(c);
    const auto seed = seed_of(c);
    Report r;
    BoundReport b;
    if (!c.body.empty()) {
        const ConvexBody body = load_body(c);
        b = bound_report(body, c.eps, c.delta, c.alpha, c.samples, seed);
        if (c.gelfand_k > 0) {
            const auto probe = gelfand_probe(body, c.gelfand_k, c.subspaces, derive_seed(seed, {7}));
            r.result["gelfand_probe"] = io::to_json(probe);
        }
    } else if (!c.workload.empty()) {
        b = query_release_bounds(load_workload(c), c.eps, c.delta, c.alpha, c.samples, seed);
    } else {
        throw InputError("bounds needs --body or --workload");
    }
    r.result["bounds"] = io::to_json(b);
    r.header = {"problem", "m", "alpha", "sigma", "ell_star", "ell_star_stderr", "gauss_upper",
                "proj_upper", "meanpt_lower", "qr_lower", "alpha_validity_threshold", "regime_ratio"};
    r.rows.push_back({to_string(b.problem), b.m, b.alpha, b.sigma, b.ell_star.value, b.ell_star.std_error,
                      b.gauss_upper, b.proj_upper, b.meanpt_lower, b.qr_lower, b.alpha_validity_threshold,
                      b.regime_ratio});
    return r;
}

Report cmd_samplecomplexity(const RunConfig& c) {
    check_common(c);
    const auto seed = seed_of(c);
    const ConvexBody body = load_body(c);
    const auto params = PrivacyParams::make(c.eps, c.delta);
    MeanPointAlgorithm alg;
    if (c.mech == "gaussian")
        alg = gaussian_algorithm(params, 1.0);
    else if (c.mech == "projection")
        alg = projection_algorithm(body, params, c.tol);
    else
        throw InputError("samplecomplexity supports --mech gaussian or projection");
    const auto sc = sample_complexity_search(body, alg, c.alpha, c.trials, adversary_from_string(c.adversary), seed);
    Report r;
    r.result["bounded"] = sc.bounded;
    r.result["n"] = sc.n;
    r.result["error_at_n"] = sc.error_at_n;
    r.result["error_below"] = sc.error_below;
    r.result["probes"] = sc.probes;
    r.result["gaussian_closed_form"] =
        std::ceil(params.sigma * body.diameter() * std::sqrt(static_cast<double>(body.dim())) / c.alpha);
    r.header = {"n", "error_at_n", "error_below", "probes", "bounded"};
    r.rows.push_back({sc.n, sc.error_at_n, sc.error_below, sc.probes, sc.bounded});
    return r;
}

Report cmd_reduce(const RunConfig& c) {
    const auto seed = seed_of(c);
    const Workload workload = load_workload(c);
    const auto dbfile = load_db(c);
    const double inv_root_m = 1.0 / std::sqrt(static_cast<double>(workload.queries()));
    Report r;
    if (dbfile.elements) {
        // Query release instance -> mean point instance D' in K'.
        const auto& db = *dbfile.elements;
        PointDatabase points{Matrix(workload.queries(), static_cast<Index>(db.size()))};
        for (std::size_t i = 0; i < db.size(); ++i) {
            if (db.elements[i] >= workload.universe_size()) throw InputError("reduce: universe index out of range");
            points.points.col(static_cast<Index>(i)) = workload.matrix().col(db.elements[i]) * inv_root_m;
        }
        r.result["direction"] = "query_release_to_mean_point";
        r.result["points"] = io::to_json(points)["points"];
        r.header = {"index", "element"};
        for (std::size_t i = 0; i < db.size(); ++i) r.rows.push_back({static_cast<long>(i), db.elements[i]});
        return r;
    }
    const auto& db = *dbfile.points;
    if (db.dim() != workload.queries()) throw InputError("reduce: point dimension differs from m");
    std::vector<SignedCombination> combos;
    json decompositions = json::array();
    for (Index i = 0; i < db.size(); ++i) {
        combos.push_back(caratheodory_decompose(workload, db.points.col(i)));
        decompositions.push_back(io::to_json(combos.back()));
    }
    const auto signed_dbs = sample_signed_databases(combos, seed);
    r.result["direction"] = "mean_point_to_query_release";
    r.result["decompositions"] = decompositions;
    r.result["d_plus"] = signed_dbs.plus.elements;
    r.result["d_minus"] = signed_dbs.minus.elements;
    r.result["declared_privacy_factor"] = 2;
    r.header = {"point", "term", "element", "weight"};
    for (std::size_t i = 0; i < combos.size(); ++i)
        for (std::size_t t = 0; t < combos[i].terms.size(); ++t)
            r.rows.push_back({static_cast<long>(i), static_cast<long>(t), combos[i].terms[t].element,
                              combos[i].terms[t].weight});
    return r;
}

std::string render(const RunConfig& c, const Report& r) {
    if (c.format == "csv") {
        std::ostringstream os;
        os << "# config: " << io::dump(to_json(c), 0);
        for (std::size_t i = 0; i < r.header.size(); ++i) os << (i ? "," : "") << r.header[i];
        os << "\n";
        for (const auto& row : r.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
            os << "\n";
        }
        return os.str();
    }
    json report;
    report["command"] = c.command;
    report["config"] = to_json(c);
    report["result"] = r.result;
    return io::dump(report);
}

RunConfig config_from_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open report '" + path + "'");
    std::string first;
    std::getline(in, first);
    const std::string prefix = "# config: ";
    try {
        if (first.rfind(prefix, 0) == 0) return config_from_json(json::parse(first.substr(prefix.size())));
        return config_from_json(io::load_json_file(path).at("config"));
    } catch (const json::exception& e) {
        throw InputError("report '" + path + "' has no usable config: " + e.what());
    }
}

}  // namespace

json to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["body"] = c.body;
    j["workload"] = c.workload;
    j["db"] = c.db;
    j["eps"] = c.eps;
    j["delta"] = c.delta;
    j["alpha"] = c.alpha;
    j["bound"] = c.bound;
    j["n"] = c.n;
    j["n_grid"] = c.n_grid;
    j["trials"] = c.trials;
    j["samples"] = c.samples;
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    j["tol"] = c.tol;
    j["mech"] = c.mech;
    j["inner"] = c.inner;
    j["adversary"] = c.adversary;
    j["gelfand_k"] = c.gelfand_k;
    j["subspaces"] = c.subspaces;
    j["out"] = c.out;
    j["format"] = c.format;
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.body = j.value("body", "");
    c.workload = j.value("workload", "");
    c.db = j.value("db", "");
    c.eps = j.value("eps", c.eps);
    c.delta = j.value("delta", c.delta);
    c.alpha = j.value("alpha", c.alpha);
    c.bound = j.value("bound", c.bound);
    c.n = j.value("n", c.n);
    c.n_grid = j.value("n_grid", "");
    c.trials = j.value("trials", c.trials);
    c.samples = j.value("samples", c.samples);
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    c.tol = j.value("tol", c.tol);
    c.mech = j.value("mech", c.mech);
    c.inner = j.value("inner", c.inner);
    c.adversary = j.value("adversary", c.adversary);
    c.gelfand_k = j.value("gelfand_k", c.gelfand_k);
    c.subspaces = j.value("subspaces", c.subspaces);
    c.out = j.value("out", "");
    c.format = j.value("format", c.format);
    return c;
}

std::vector<long> parse_grid(const std::string& spec) {
    long a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !is.eof())
        throw InputError("--n-grid must look like a:b:step, got '" + spec + "'");
    if (a < 1 || step < 1) throw InputError("--n-grid needs a >= 1 and step >= 1");
    std::vector<long> grid;
    for (long n = a; n <= b; n += step) grid.push_back(n);
    if (grid.empty()) throw InputError("--n-grid '" + spec + "' is empty");
    return grid;
}

std::string execute(const RunConfig& c) {
    Report r;
    if (c.command == "width")
        r = cmd_width(c);
    else if (c.command == "mechanism")
        r = cmd_mechanism(c);
    else if (c.command == "compare")
        r = cmd_compare(c);
    else if (c.command == "bounds")
        r = cmd_bounds(c);
    else if (c.command == "samplecomplexity")
        r = cmd_samplecomplexity(c);
    else if (c.command == "reduce")
        r = cmd_reduce(c);
    else
        throw InputError("unknown command '" + c.command + "'");
    return render(c, r);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    std::string from_report;
    std::uint64_t seed = 0;

    CLI::App app{"Private linear query release and mean point estimation over convex bodies"};
    app.add_option("command", c.command, "width | mechanism | compare | bounds | samplecomplexity | reduce")
        ->check(CLI::IsMember(kCommands));
    app.add_option("--body", c.body, "Body JSON file");
    app.add_option("--workload", c.workload, "Workload JSON file");
    app.add_option("--db", c.db, "Database JSON file");
    app.add_option("--eps", c.eps, "Privacy parameter epsilon");
    app.add_option("--delta", c.delta, "Privacy parameter delta");
    app.add_option("--alpha", c.alpha, "Target error");
    app.add_option("--bound", c.bound, "Norm bound on points for the Gaussian mechanism");
    app.add_option("--n", c.n, "Database size");
    app.add_option("--n-grid", c.n_grid, "Grid of database sizes a:b:step");
    app.add_option("--trials", c.trials, "Monte Carlo trials");
    app.add_option("--samples", c.samples, "Gaussian samples for width estimates");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (mandatory)");
    app.add_option("--tol", c.tol, "Projection duality-gap tolerance");
    app.add_option("--mech", c.mech, "gaussian | projection | qr-from-meanpoint | meanpoint-from-qr")
        ->check(CLI::IsMember({"gaussian", "projection", "qr-from-meanpoint", "meanpoint-from-qr"}));
    app.add_option("--inner", c.inner, "Inner algorithm of a reduction: exact | gaussian | projection");
    app.add_option("--adversary", c.adversary, "single-vertex | random-vertices | max-width-direction")
        ->check(CLI::IsMember({"single-vertex", "random-vertices", "max-width-direction"}));
    app.add_option("--gelfand-k", c.gelfand_k, "With bounds --body: probe Gelfand width of order k");
    app.add_option("--subspaces", c.subspaces, "Random subspaces per Gelfand probe");
    app.add_option("--out", c.out, "Report path (written atomically)");
    app.add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--from-report", from_report, "Re-run the configuration embedded in a report");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }

    try {
        if (!from_report.empty()) {
            c = config_from_report(from_report);
        } else {
            if (c.command.empty()) throw InputError("a command is required");
            if (seed_opt->count() == 0) throw InputError("--seed is required");
            c.seed = seed;
        }
        const std::string text = execute(c);
        if (c.out.empty())
            out << text;
        else
            io::write_atomic(c.out, text);
        return ok;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return domain_error;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
}

}  // namespace dpgeom::cli
