#pragma once

#include "sheafgauge/complex.hpp"
#include "sheafgauge/diagnostics.hpp"
#include "sheafgauge/operators.hpp"
#include "sheafgauge/sheaf.hpp"
#include "sheafgauge/spectral.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sheafgauge {

using Json = nlohmann::json;

/** Version stamped into every serialized payload. */
inline constexpr int kSchemaVersion = 1;

/** Parses JSON text; syntax errors raise InputError naming the byte offset. */
Json parse_json(const std::string& text, const std::string& what);
/** Throws SchemaError unless payload["schema_version"] equals kSchemaVersion. */
void require_schema(const Json& payload, const std::string& what);

/** {"vertices": N, "edges": [[u, v], ...]} with integer entries only. */
Graph graph_from_json(const Json& j);
Json graph_to_json(const Graph& g);

/** {"features": {"0": [[row], ...], ...}} with one row-major matrix per vertex. */
FeatureMap features_from_json(const Json& j);
Json features_to_json(const FeatureMap& features);

/** Row-major matrix with explicit shape: {"shape": [r, c], "data": [...]}. */
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& what);

Json sheaf_to_json(const CellSheaf& sheaf);
CellSheaf sheaf_from_json(const Json& j);

/** Operator dump: degree, shape, provenance, label and row-major entries. */
Json operator_to_json(const SheafLaplacian& op);
Json operator_to_json(const Matrix& m, int degree, const std::string& provenance, const std::string& label);

/** +inf and NaN become null. */
Json number_or_null(double x);

Json to_json(const LocalWitnessMap& map);
Json to_json(const DiagnosticsReport& report);
Json to_json(const SeparationReport& report);
Json to_json(const ExistenceResult& result);
Json to_json(const MagnitudeResult& result);
Json to_json(const LocalizationResult& result);
Json to_json(const RelativityResult& result);
Json to_json(const EnsembleResult& result);
Json to_json(const ConeEquivalenceReport& report);
Json to_json(const ExactnessReport& report);
Json to_json(const ConeReductionReport& report);
Json to_json(const BlockDecompositionReport& report);
Json to_json(const SheafValidationReport& report);

/** Shortest decimal text that reads back to the same double. */
std::string format_double(double x);

/** cell_id,degree,delta,score */
std::string witness_csv(const LocalWitnessMap& map);
/** delta,dim */
std::string profile_csv(const Spectrum& s, const std::vector<double>& grid);
/** channel,index,eigenvalue for every channel of the report. */
std::string spectra_csv(const DiagnosticsReport& report);

/** Pretty JSON text with a trailing newline. */
std::string dump_json(const Json& j);

std::string read_text_file(const std::filesystem::path& path);
/** Writes to a sibling temporary file and renames it over the target. */
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace sheafgauge
