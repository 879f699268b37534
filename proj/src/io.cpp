#include "dpgeom/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dpgeom/errors.hpp"

namespace dpgeom::io {

namespace {

double number(const json& j, const char* what) {
    if (!j.is_number()) throw InputError(std::string(what) + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(std::string(what) + ": non-finite value");
    return v;
}

long integer(const json& j, const char* what) {
    if (!j.is_number_integer()) throw InputError(std::string(what) + ": expected an integer");
    return j.get<long>();
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw InputError(std::string("missing field '") + key + "'");
    return j.at(key);
}

// Rows of equal length -> matrix with one row per entry.
Matrix rows_matrix(const json& j, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + ": expected an array of rows");
    const Index rows = static_cast<Index>(j.size());
    if (rows == 0) return Matrix(0, 0);
    if (!j[0].is_array()) throw InputError(std::string(what) + ": expected an array of rows");
    const Index cols = static_cast<Index>(j[0].size());
    Matrix out(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw InputError(std::string(what) + ": ragged rows");
        for (Index c = 0; c < cols; ++c) out(r, c) = number(row[static_cast<std::size_t>(c)], what);
    }
    return out;
}

json matrix_rows(const Matrix& M) {
    json rows = json::array();
    for (Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

void dump_into(std::string& out, const json& j, int indent, int depth) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad;
                out += json(it.key()).dump();
                out += indent > 0 ? ": " : ":";
                dump_into(out, it.value(), indent, depth + 1);
            }
            out += nl;
            out += close_pad;
            out += "}";
            return;
        }
        case json::value_t::array: {
            // Arrays of scalars stay on one line.
            const bool flat = std::none_of(j.begin(), j.end(),
                                           [](const json& e) { return e.is_structured(); });
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += flat ? ", " : ",";
                if (!flat) {
                    out += nl;
                    out += pad;
                }
                first = false;
                dump_into(out, e, indent, depth + 1);
            }
            if (!flat) {
                out += nl;
                out += close_pad;
            }
            out += "]";
            return;
        }
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("'" + path.string() + "': " + e.what());
    }
}

ConvexBody body_from_json(const json& j) {
    const auto kind_field = field(j, "kind");
    if (!kind_field.is_string()) throw InputError("body: 'kind' must be a string");
    const BodyKind kind = body_kind_from_string(kind_field.get<std::string>());
    const double scale = j.contains("scale") ? number(j.at("scale"), "body.scale") : 1.0;
    if (kind == BodyKind::vpolytope) {
        const Matrix rows = rows_matrix(field(j, "vertices"), "body.vertices");
        if (rows.rows() == 0) throw InputError("body: vpolytope needs at least one vertex");
        if (j.contains("dim") && integer(j.at("dim"), "body.dim") != rows.cols())
            throw InputError("body: 'dim' does not match vertex length");
        return ConvexBody::vpolytope(rows.transpose(), scale);
    }
    const long dim = integer(field(j, "dim"), "body.dim");
    switch (kind) {
        case BodyKind::ball:
            return ConvexBody::ball(dim, scale);
        case BodyKind::scaled_cube:
            return ConvexBody::scaled_cube(dim, scale);
        default:
            return ConvexBody::cross_polytope(dim, scale);
    }
}

json to_json(const ConvexBody& body) {
    json j;
    j["kind"] = to_string(body.kind());
    j["dim"] = body.dim();
    j["scale"] = body.scale();
    if (body.kind() == BodyKind::vpolytope) j["vertices"] = matrix_rows(body.vertices().transpose());
    return j;
}

Workload workload_from_json(const json& j) {
    const Matrix matrix = rows_matrix(field(j, "matrix"), "workload.matrix");
    if (matrix.rows() == 0) throw InputError("workload: empty matrix");
    if (j.contains("m") && integer(j.at("m"), "workload.m") != matrix.rows())
        throw InputError("workload: 'm' does not match the matrix");
    if (j.contains("universe") && integer(j.at("universe"), "workload.universe") != matrix.cols())
        throw InputError("workload: 'universe' does not match the matrix");
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        for (const auto& l : j.at("labels")) {
            if (!l.is_string()) throw InputError("workload: labels must be strings");
            labels.push_back(l.get<std::string>());
        }
    }
    return Workload(matrix, std::move(labels));
}

json to_json(const Workload& workload) {
    json j;
    j["m"] = workload.queries();
    j["universe"] = workload.universe_size();
    j["matrix"] = matrix_rows(workload.matrix());
    if (!workload.labels().empty()) j["labels"] = workload.labels();
    return j;
}

DatabaseFile database_from_json(const json& j) {
    DatabaseFile out;
    if (j.is_object() && j.contains("elements")) {
        const json& e = j.at("elements");
        if (!e.is_array()) throw InputError("database: 'elements' must be an array");
        ElementDatabase db;
        for (const auto& v : e) {
            const long idx = integer(v, "database.elements");
            if (idx < 0) throw InputError("database: negative universe index");
            db.elements.push_back(idx);
        }
        out.elements = std::move(db);
    } else if (j.is_object() && j.contains("points")) {
        out.points = PointDatabase{rows_matrix(j.at("points"), "database.points").transpose()};
    } else {
        throw InputError("database: expected 'elements' or 'points'");
    }
    return out;
}

json to_json(const ElementDatabase& db) {
    json j;
    j["elements"] = db.elements;
    return j;
}

json to_json(const PointDatabase& db) {
    json j;
    j["points"] = matrix_rows(db.points.transpose());
    return j;
}

json to_json(const Vector& v) {
    json a = json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json to_json(const WidthEstimate& est) {
    return json{{"value", est.value}, {"stderr", est.std_error}, {"samples", est.samples}, {"seed", est.seed}};
}

json to_json(const ErrorEstimate& est) {
    return json{{"rms_error", est.rms_error},
                {"stderr", est.std_error},
                {"trials", est.trials},
                {"adversary", to_string(est.adversary)},
                {"worst_candidate", est.worst_candidate},
                {"sup_estimate", "lower_bound"}};
}

json to_json(const SignedCombination& combo) {
    json terms = json::array();
    for (const auto& t : combo.terms) terms.push_back(json{{"element", t.element}, {"weight", t.weight}});
    return json{{"terms", terms}, {"target", to_json(combo.target)}};
}

json to_json(const GelfandProbe& probe) {
    return json{{"k", probe.k},
                {"subspace_dim", probe.subspace.dim()},
                {"subspace", matrix_rows(probe.subspace.columns().transpose())},
                {"diameter", probe.diameter},
                {"ratio", probe.ratio},
                {"section_vertices", probe.section_vertices.cols()}};
}

json to_json(const BoundReport& r) {
    json j;
    j["problem"] = to_string(r.problem);
    j["m"] = r.m;
    j["alpha"] = r.alpha;
    j["eps"] = r.eps;
    j["delta"] = r.delta;
    j["sigma"] = r.sigma;
    j["ell_star"] = to_json(r.ell_star);
    j["gauss_upper"] = r.gauss_upper;
    j["proj_upper"] = r.proj_upper;
    j["meanpt_lower"] = r.meanpt_lower;
    j["qr_lower"] = r.qr_lower;
    j["alpha_validity_threshold"] = r.alpha_validity_threshold;
    j["lower_bound"] = r.lower_bound_asserted ? "asserted" : "not asserted";
    j["regime_ratio"] = r.regime_ratio;
    j["regime"] = r.gaussian_optimal ? "gaussian-optimal" : "projection-favored";
    j["metadata"] = json{{"constants", "unit"},
                         {"log_base", "e"},
                         {"bounds", "up-to-constants"},
                         {"seeds", json::array({r.ell_star.seed})}};
    return j;
}

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    // Keep a float marker so integral values read back as floats.
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

std::string dump(const json& j, int indent) {
    std::string out;
    dump_into(out, j, indent, 0);
    out += "\n";
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    const auto tmp = dir / ("." + path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw InputError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw InputError("cannot rename into '" + path.string() + "': " + ec.message());
}

}  // namespace dpgeom::io
