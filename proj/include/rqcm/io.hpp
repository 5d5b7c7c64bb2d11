#pragma once

// CSV / JSON formats consumed by the plotting scripts.
//
// Every CSV starts with "# key: value" lines (schema first), then one header
// row. Every JSON document is an object with "schema" and "meta" members.
// Floating-point values are written with 17 significant digits so that files
// round-trip exactly.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rqcm/extend.hpp"
#include "rqcm/freeprob.hpp"
#include "rqcm/linalg.hpp"
#include "rqcm/spectra.hpp"
#include "rqcm/stats.hpp"

namespace rqcm::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Ordered key/value provenance (invocation, flags, version, ...).
using Meta = std::vector<std::pair<std::string, std::string>>;

/// "rqcm.<kind>/<version>"
std::string schema_id(const std::string& kind);

std::string format_double(double x);

struct MatrixInfo {
  int n = 0;  ///< modes
  double sigma = 0.0;
  bool normalized = false;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::optional<double> shift;
};

struct MatrixRecord {
  MatrixInfo info;
  SymmetricMatrix matrix;
  Meta meta;
};

void write_csv_header(std::ostream& os, const std::string& kind, const Meta& meta);

void write_matrix_csv(std::ostream& os, const SymmetricMatrix& s, const MatrixInfo& info,
                      const Meta& meta = {});
Json matrix_to_json(const SymmetricMatrix& s, const MatrixInfo& info, const Meta& meta = {});
/// Throws std::runtime_error on a malformed or incompatible document.
MatrixRecord read_matrix_csv(std::istream& is);
MatrixRecord matrix_from_json(const Json& j);

void write_spectrum_csv(std::ostream& os, const SpectralSample& s, const Meta& meta = {});
Json spectrum_to_json(const SpectralSample& s, const Meta& meta = {});

void write_curve_csv(std::ostream& os, const freeprob::DensityCurve& c, const Meta& meta = {});
Json curve_to_json(const freeprob::DensityCurve& c, const Meta& meta = {});

void write_histogram_csv(std::ostream& os, const stats::Histogram& h, const Meta& meta = {});
Json histogram_to_json(const stats::Histogram& h, const Meta& meta = {});
/// Parses the CSV written by write_histogram_csv.
stats::Histogram read_histogram_csv(std::istream& is, Meta* meta = nullptr);

Json sweep_config_to_json(const stats::SweepConfig& c);
Json sweep_summary_to_json(const stats::SweepSummary& s, const Meta& meta = {});
/// One line of the per-sample log.
Json sample_record_to_json(const stats::SampleRecord& r, const stats::SweepConfig& c);

struct ReportContext {
  RngSeed seed;
  int n = 0;
  ModeBipartition partition;
  double sigma = 0.0;
};
Json extendability_to_json(const extend::ExtendabilityReport& r, const ReportContext& ctx);

/// Reads "# key: value" lines until the first non-comment line, which is
/// returned through `header` (empty at end of input).
Meta read_csv_meta(std::istream& is, std::string* header);

}  // namespace rqcm::io
