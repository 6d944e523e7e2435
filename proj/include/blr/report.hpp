#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "blr/diagnostics.hpp"
#include "blr/io.hpp"
#include "blr/selection.hpp"

namespace blr {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Noise specification as it appears in configs; the full matrix lives in a
/// CSV next to the config rather than inline.
struct NoiseConfig {
  NoiseModel::Kind kind = NoiseModel::Kind::iid;
  double iid_sigma2 = 1.0;
  Vector diag;
  std::string full_path;

  NoiseModel resolve() const;
};

/// Per-column affine map of the inputs onto [-1,1], recorded so predictions
/// can reuse the training transform.
struct RescaleMap {
  Vector lo;
  Vector hi;
  Matrix apply(const ConstMatrixRef& x) const;
};

RescaleMap fit_rescale(const ConstMatrixRef& x);

/// Everything a run needs; parsed from JSON config and overridden by flags.
struct RunConfig {
  FitMethod method = FitMethod::ols;
  BasisFamily family = BasisFamily::legendre;
  std::optional<int> max_degree;
  std::optional<std::vector<std::vector<int>>> indices;
  int d = 0;  // 0 = infer from the data file
  bool header = false;
  bool rescale = false;
  NoiseConfig noise;
  std::optional<PriorSpec> prior;
  PriorPolicy policy;
  double tie_epsilon = 1e-9;
  int max_sweeps = 1;
  int replicates = 200;
  std::uint64_t seed = 0;
  // gen command
  std::optional<std::vector<double>> coefficients;
  double sigma = 0.0;
  int n = 0;
  // paths
  std::string data_path;
  std::string out_path;
  std::string model_path;
  bool timestamp = true;

  /// Enforces the config invariants: exactly one basis specification and a
  /// method-compatible prior.
  void validate_for(const std::string& command) const;
  /// Builds the index set (explicit list or family+max_degree enumeration).
  IndexSet make_index_set(int data_dim) const;
};

/// One report schema for every subcommand; absent sections are omitted.
struct FitReport {
  int schema_version = kSchemaVersion;
  std::string command;
  RunConfig config;
  std::optional<IndexSet> index_set;
  std::optional<PosteriorSummary> posterior;
  std::optional<EvidenceReport> evidence;
  std::optional<GammaParams> gamma;
  std::optional<SelectionTrace> selection;
  std::optional<BootstrapSummary> bootstrap;
  std::optional<Prediction> prediction;
  std::optional<RescaleMap> rescale_map;
  std::vector<std::string> warnings;
  std::optional<std::string> timestamp;
};

Json to_json(const Vector& v);
Json to_json(const ConstMatrixRef& m);
Json to_json(const IndexSet& set);
Json to_json(const PriorSpec& prior);
Json to_json(const NoiseConfig& noise);
Json to_json(const PosteriorSummary& s);
Json to_json(const EvidenceReport& e);
Json to_json(const GammaParams& g);
Json to_json(const SelectionTrace& t);
Json to_json(const BootstrapSummary& b);
Json to_json(const Prediction& p);
Json to_json(const RescaleMap& r);
Json to_json(const RunConfig& c);
Json to_json(const FitReport& r);

Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
IndexSet index_set_from_json(const Json& j);
PriorSpec prior_from_json(const Json& j);
NoiseConfig noise_config_from_json(const Json& j);
RunConfig config_from_json(const Json& j);
FitReport report_from_json(const Json& j);

/// Serializes with sorted keys and a trailing newline; byte-stable for equal
/// reports.
std::string emit(const FitReport& report);
FitReport parse_report(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace blr
