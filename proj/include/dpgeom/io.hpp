#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "dpgeom/analysis.hpp"
#include "dpgeom/geometry.hpp"
#include "dpgeom/harness.hpp"
#include "dpgeom/workload.hpp"

namespace dpgeom::io {

using json = nlohmann::json;

/// Parses a JSON file; malformed content raises InputError.
json load_json_file(const std::filesystem::path& path);

/// {"kind", "dim", "scale", "vertices": [[...], ...]} with one vertex per row.
ConvexBody body_from_json(const json& j);
json to_json(const ConvexBody& body);

/// {"m", "universe", "matrix": [[row], ...], "labels": [...]}.
Workload workload_from_json(const json& j);
json to_json(const Workload& workload);

/// {"elements": [indices]} or {"points": [[...], ...]}.
struct DatabaseFile {
    std::optional<ElementDatabase> elements;
    std::optional<PointDatabase> points;
};
DatabaseFile database_from_json(const json& j);
json to_json(const ElementDatabase& db);
json to_json(const PointDatabase& db);

json to_json(const Vector& v);
json to_json(const WidthEstimate& est);
json to_json(const ErrorEstimate& est);
json to_json(const SignedCombination& combo);
json to_json(const GelfandProbe& probe);

/// Every BoundReport field plus {"metadata": {"constants": "unit", "log_base": "e", "seeds": [...]}}.
json to_json(const BoundReport& report);

/// Shortest text for a double at 17 significant digits; non-finite values
/// become null.
std::string format_double(double x);

/// JSON text with every float written at 17 significant digits and keys in
/// sorted order, so equal documents give identical bytes.
std::string dump(const json& j, int indent = 2);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace dpgeom::io
