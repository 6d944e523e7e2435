#include "blr/report.hpp"

#include <fstream>
#include <sstream>

namespace blr {

NoiseModel NoiseConfig::resolve() const {
  switch (kind) {
    case NoiseModel::Kind::iid: return NoiseModel::iid(iid_sigma2);
    case NoiseModel::Kind::diagonal: return NoiseModel::diagonal(diag);
    case NoiseModel::Kind::full:
      return NoiseModel::full(SpdMatrix(read_csv_matrix(full_path)));
  }
  throw InvalidArgument("unknown noise kind");
}

Matrix RescaleMap::apply(const ConstMatrixRef& x) const {
  if (x.cols() != lo.size())
    throw DimensionMismatch("rescale map covers " + std::to_string(lo.size()) +
                            " columns, input has " + std::to_string(x.cols()));
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double span = hi[c] - lo[c];
    if (span > 0.0)
      out.col(c) = 2.0 * (x.col(c).array() - lo[c]) / span - 1.0;
    else
      out.col(c).setZero();  // constant column
  }
  return out;
}

RescaleMap fit_rescale(const ConstMatrixRef& x) {
  RescaleMap map;
  map.lo = x.colwise().minCoeff();
  map.hi = x.colwise().maxCoeff();
  return map;
}

void RunConfig::validate_for(const std::string& command) const {
  if (command == "gen") {
    if (!indices.has_value() || !coefficients.has_value())
      throw InvalidArgument("gen needs explicit indices and coefficients");
    return;
  }
  if (command == "select") {
    // the candidate pool always comes from (family, max_degree)
    if (indices.has_value())
      throw InvalidArgument("select enumerates candidates from --max-degree; "
                            "an explicit index list is not accepted");
    return;
  }
  const bool has_list = indices.has_value();
  const bool has_degree = max_degree.has_value();
  if (has_list == has_degree)
    throw InvalidArgument("exactly one of an explicit index list or "
                          "(family, max_degree) must be given");
  if (command == "predict") return;

  // method/prior compatibility
  switch (method) {
    case FitMethod::ols:
      if (prior.has_value() && !std::holds_alternative<UniformPrior>(*prior))
        throw InvalidArgument("ols accepts no informative prior");
      break;
    case FitMethod::gls:
      if (prior.has_value() && !std::holds_alternative<UniformPrior>(*prior))
        throw InvalidArgument("gls accepts a uniform prior only");
      break;
    case FitMethod::ridge:
      if (prior.has_value() && !std::holds_alternative<GaussianPrior>(*prior))
        throw InvalidArgument("ridge requires a gaussian prior");
      break;
    case FitMethod::lasso:
      if (!prior.has_value() || !std::holds_alternative<LaplacePrior>(*prior))
        throw InvalidArgument("lasso requires a laplace prior");
      break;
  }
}

IndexSet RunConfig::make_index_set(int data_dim) const {
  if (indices.has_value()) {
    std::vector<MultiIndex> mis;
    mis.reserve(indices->size());
    for (const auto& exps : *indices) mis.emplace_back(exps);
    IndexSet set(std::move(mis), family);
    if (set.dim() != data_dim)
      throw InvalidArgument("index list dimension " + std::to_string(set.dim()) +
                            " does not match data d=" + std::to_string(data_dim));
    return set;
  }
  if (!max_degree.has_value())
    throw InvalidArgument("no basis specification: give indices or max_degree");
  return enumerate_total_degree(data_dim, *max_degree, family);
}

// ---------------------------------------------------------------------------
// JSON serialization

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json to_json(const ConstMatrixRef& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector vector_from_json(const Json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& e : j) v[i++] = e.get<double>();
  return v;
}

Matrix matrix_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw DataError("ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

Json to_json(const IndexSet& set) {
  Json idx = Json::array();
  for (const auto& mi : set) idx.push_back(mi.exponents());
  return Json{{"family", family_name(set.family())}, {"indices", std::move(idx)}};
}

IndexSet index_set_from_json(const Json& j) {
  std::vector<MultiIndex> mis;
  for (const auto& e : j.at("indices"))
    mis.emplace_back(e.get<std::vector<int>>());
  return IndexSet(std::move(mis), family_from_name(j.at("family").get<std::string>()));
}

Json to_json(const PriorSpec& prior) {
  if (const auto* u = std::get_if<UniformPrior>(&prior)) {
    Json body = Json::object();
    if (u->has_bounds()) {
      body["lower"] = to_json(*u->lower);
      body["upper"] = to_json(*u->upper);
    }
    return Json{{"uniform", std::move(body)}};
  }
  if (const auto* g = std::get_if<GaussianPrior>(&prior)) {
    return Json{{"gaussian", Json{{"mean", to_json(g->mean)},
                                  {"cov", to_json(ConstMatrixRef(g->cov.values()))}}}};
  }
  const auto& l = std::get<LaplacePrior>(prior);
  return Json{{"laplace", Json{{"mean", to_json(l.mean)}, {"rate", to_json(l.rate)}}}};
}

PriorSpec prior_from_json(const Json& j) {
  if (j.contains("uniform")) {
    const Json& body = j.at("uniform");
    UniformPrior u;
    if (body.contains("lower")) {
      u.lower = vector_from_json(body.at("lower"));
      u.upper = vector_from_json(body.at("upper"));
    }
    return u;
  }
  if (j.contains("gaussian")) {
    const Json& body = j.at("gaussian");
    GaussianPrior g;
    g.mean = vector_from_json(body.at("mean"));
    if (body.contains("cov_diag"))
      g.cov = SpdMatrix::from_diagonal(vector_from_json(body.at("cov_diag")));
    else
      g.cov = SpdMatrix(matrix_from_json(body.at("cov")));
    return g;
  }
  if (j.contains("laplace")) {
    const Json& body = j.at("laplace");
    return LaplacePrior{vector_from_json(body.at("mean")),
                        vector_from_json(body.at("rate"))};
  }
  throw DataError("prior must be one of uniform/gaussian/laplace");
}

Json to_json(const NoiseConfig& noise) {
  switch (noise.kind) {
    case NoiseModel::Kind::iid: return Json{{"iid", noise.iid_sigma2}};
    case NoiseModel::Kind::diagonal: return Json{{"diag", to_json(noise.diag)}};
    case NoiseModel::Kind::full: return Json{{"full_path", noise.full_path}};
  }
  throw InvalidArgument("unknown noise kind");
}

NoiseConfig noise_config_from_json(const Json& j) {
  NoiseConfig cfg;
  if (j.contains("iid")) {
    cfg.kind = NoiseModel::Kind::iid;
    cfg.iid_sigma2 = j.at("iid").get<double>();
  } else if (j.contains("diag")) {
    cfg.kind = NoiseModel::Kind::diagonal;
    cfg.diag = vector_from_json(j.at("diag"));
  } else if (j.contains("full_path")) {
    cfg.kind = NoiseModel::Kind::full;
    cfg.full_path = j.at("full_path").get<std::string>();
  } else {
    throw DataError("noise must be one of iid/diag/full_path");
  }
  return cfg;
}

Json to_json(const PosteriorSummary& s) {
  Json j{{"method", s.method},
         {"mean", to_json(s.mean)},
         {"converged", s.converged},
         {"iterations", s.iterations},
         {"warnings", s.warnings}};
  if (s.covariance.has_value())
    j["covariance"] = to_json(ConstMatrixRef(s.covariance->values()));
  if (s.log_det_cov.has_value()) j["log_det_cov"] = *s.log_det_cov;
  if (s.sigma2_mle.has_value()) j["sigma2_mle"] = *s.sigma2_mle;
  if (s.sign_vector.has_value()) {
    Json sv = Json::array();
    for (Eigen::Index i = 0; i < s.sign_vector->size(); ++i)
      sv.push_back((*s.sign_vector)[i]);
    j["sign_vector"] = std::move(sv);
  }
  if (s.mean_in_bounds.has_value()) j["mean_in_bounds"] = *s.mean_in_bounds;
  return j;
}

namespace {

PosteriorSummary posterior_from_json(const Json& j) {
  PosteriorSummary s;
  s.method = j.at("method").get<std::string>();
  s.mean = vector_from_json(j.at("mean"));
  s.converged = j.at("converged").get<bool>();
  s.iterations = j.at("iterations").get<int>();
  s.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (j.contains("covariance"))
    s.covariance = SpdMatrix(matrix_from_json(j.at("covariance")));
  if (j.contains("log_det_cov")) s.log_det_cov = j.at("log_det_cov").get<double>();
  if (j.contains("sigma2_mle")) s.sigma2_mle = j.at("sigma2_mle").get<double>();
  if (j.contains("sign_vector")) {
    const auto& sv = j.at("sign_vector");
    IntVector v(static_cast<Eigen::Index>(sv.size()));
    Eigen::Index i = 0;
    for (const auto& e : sv) v[i++] = e.get<int>();
    s.sign_vector = v;
  }
  if (j.contains("mean_in_bounds"))
    s.mean_in_bounds = j.at("mean_in_bounds").get<bool>();
  return s;
}

}  // namespace

Json to_json(const EvidenceReport& e) {
  return Json{{"log_evidence", e.log_evidence},
              {"kic", e.kic},
              {"log_likelihood_at_map", e.log_likelihood_at_map},
              {"log_prior_at_map", e.log_prior_at_map},
              {"p", e.p}};
}

Json to_json(const GammaParams& g) {
  return Json{{"shape", g.shape}, {"scale", g.scale}, {"precision_mode", g.mode()}};
}

Json to_json(const SelectionTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json step{{"candidate", s.candidate.exponents()},
              {"accepted", s.accepted},
              {"p_after", s.p_after},
              {"note", s.note}};
    step["kic"] = s.kic_with_candidate.has_value() ? Json(*s.kic_with_candidate)
                                                   : Json(nullptr);
    steps.push_back(std::move(step));
  }
  return Json{{"initial_kic", t.initial_kic},
              {"steps", std::move(steps)},
              {"final_set", to_json(t.final_set)},
              {"final_kic", t.final_kic},
              {"sweeps", t.sweeps}};
}

Json to_json(const BootstrapSummary& b) {
  return Json{{"replicates", b.replicates},
              {"completed", b.completed},
              {"skipped", b.skipped},
              {"coefficient_means", to_json(b.coefficient_means)},
              {"coefficient_stddevs", to_json(b.coefficient_stddevs)},
              {"seed", b.seed},
              {"rng_algorithm", b.rng_algorithm}};
}

Json to_json(const Prediction& p) {
  return Json{{"mean", to_json(p.mean)},
              {"model_variance", to_json(p.model_variance)},
              {"noise_variance", to_json(p.noise_variance)}};
}

Json to_json(const RescaleMap& r) {
  return Json{{"min", to_json(r.lo)}, {"max", to_json(r.hi)}};
}

Json to_json(const RunConfig& c) {
  Json j{{"method", method_name(c.method)},
         {"family", family_name(c.family)},
         {"d", c.d},
         {"header", c.header},
         {"rescale", c.rescale},
         {"noise", to_json(c.noise)},
         {"policy", Json{{"sigma0_sq", c.policy.sigma0_sq}, {"gamma", c.policy.gamma}}},
         {"selection", Json{{"tie_epsilon", c.tie_epsilon}, {"max_sweeps", c.max_sweeps}}},
         {"bootstrap", Json{{"replicates", c.replicates}}},
         {"seed", c.seed},
         {"timestamp", c.timestamp}};
  if (c.max_degree.has_value()) j["max_degree"] = *c.max_degree;
  if (c.indices.has_value()) j["indices"] = *c.indices;
  if (c.prior.has_value()) j["prior"] = to_json(*c.prior);
  if (c.coefficients.has_value())
    j["gen"] = Json{{"coefficients", *c.coefficients}, {"sigma", c.sigma}, {"n", c.n}};
  if (!c.data_path.empty()) j["data"] = c.data_path;
  if (!c.out_path.empty()) j["out"] = c.out_path;
  if (!c.model_path.empty()) j["model"] = c.model_path;
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  if (j.contains("method"))
    c.method = method_from_name(j.at("method").get<std::string>());
  if (j.contains("family"))
    c.family = family_from_name(j.at("family").get<std::string>());
  if (j.contains("max_degree")) c.max_degree = j.at("max_degree").get<int>();
  if (j.contains("indices"))
    c.indices = j.at("indices").get<std::vector<std::vector<int>>>();
  if (j.contains("d")) c.d = j.at("d").get<int>();
  if (j.contains("header")) c.header = j.at("header").get<bool>();
  if (j.contains("rescale")) c.rescale = j.at("rescale").get<bool>();
  if (j.contains("noise")) c.noise = noise_config_from_json(j.at("noise"));
  if (j.contains("prior")) c.prior = prior_from_json(j.at("prior"));
  if (j.contains("policy")) {
    const Json& p = j.at("policy");
    if (p.contains("sigma0_sq")) c.policy.sigma0_sq = p.at("sigma0_sq").get<double>();
    if (p.contains("gamma")) c.policy.gamma = p.at("gamma").get<double>();
  }
  if (j.contains("selection")) {
    const Json& s = j.at("selection");
    if (s.contains("tie_epsilon")) c.tie_epsilon = s.at("tie_epsilon").get<double>();
    if (s.contains("max_sweeps")) c.max_sweeps = s.at("max_sweeps").get<int>();
  }
  if (j.contains("bootstrap")) {
    const Json& b = j.at("bootstrap");
    if (b.contains("replicates")) c.replicates = b.at("replicates").get<int>();
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("gen")) {
    const Json& g = j.at("gen");
    c.coefficients = g.at("coefficients").get<std::vector<double>>();
    if (g.contains("sigma")) c.sigma = g.at("sigma").get<double>();
    if (g.contains("n")) c.n = g.at("n").get<int>();
  }
  if (j.contains("data")) c.data_path = j.at("data").get<std::string>();
  if (j.contains("out")) c.out_path = j.at("out").get<std::string>();
  if (j.contains("model")) c.model_path = j.at("model").get<std::string>();
  if (j.contains("timestamp")) c.timestamp = j.at("timestamp").get<bool>();
  return c;
}

Json to_json(const FitReport& r) {
  Json j{{"schema_version", r.schema_version},
         {"command", r.command},
         {"config", to_json(r.config)},
         {"warnings", r.warnings}};
  if (r.index_set.has_value()) j["index_set"] = to_json(*r.index_set);
  if (r.posterior.has_value()) j["posterior"] = to_json(*r.posterior);
  if (r.evidence.has_value()) j["evidence"] = to_json(*r.evidence);
  if (r.gamma.has_value()) j["gamma"] = to_json(*r.gamma);
  if (r.selection.has_value()) j["selection"] = to_json(*r.selection);
  if (r.bootstrap.has_value()) j["bootstrap"] = to_json(*r.bootstrap);
  if (r.prediction.has_value()) j["prediction"] = to_json(*r.prediction);
  if (r.rescale_map.has_value()) j["rescale_map"] = to_json(*r.rescale_map);
  if (r.timestamp.has_value()) j["timestamp"] = *r.timestamp;
  return j;
}

FitReport report_from_json(const Json& j) {
  FitReport r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion)
    throw DataError("unsupported schema_version " +
                    std::to_string(r.schema_version));
  r.command = j.at("command").get<std::string>();
  r.config = config_from_json(j.at("config"));
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (j.contains("index_set")) r.index_set = index_set_from_json(j.at("index_set"));
  if (j.contains("posterior")) r.posterior = posterior_from_json(j.at("posterior"));
  if (j.contains("evidence")) {
    const Json& e = j.at("evidence");
    r.evidence = EvidenceReport{e.at("log_evidence").get<double>(),
                                e.at("kic").get<double>(),
                                e.at("log_likelihood_at_map").get<double>(),
                                e.at("log_prior_at_map").get<double>(),
                                e.at("p").get<int>()};
  }
  if (j.contains("gamma")) {
    const Json& g = j.at("gamma");
    r.gamma = GammaParams{g.at("shape").get<double>(), g.at("scale").get<double>()};
  }
  if (j.contains("selection")) {
    const Json& t = j.at("selection");
    SelectionTrace trace;
    trace.initial_kic = t.at("initial_kic").get<double>();
    trace.final_kic = t.at("final_kic").get<double>();
    trace.sweeps = t.at("sweeps").get<int>();
    trace.final_set = index_set_from_json(t.at("final_set"));
    for (const auto& s : t.at("steps")) {
      SelectionStep step{MultiIndex(s.at("candidate").get<std::vector<int>>()),
                         std::nullopt, s.at("accepted").get<bool>(),
                         s.at("p_after").get<int>(),
                         s.at("note").get<std::string>()};
      if (!s.at("kic").is_null()) step.kic_with_candidate = s.at("kic").get<double>();
      trace.steps.push_back(std::move(step));
    }
    r.selection = std::move(trace);
  }
  if (j.contains("bootstrap")) {
    const Json& b = j.at("bootstrap");
    BootstrapSummary s;
    s.replicates = b.at("replicates").get<int>();
    s.completed = b.at("completed").get<int>();
    s.skipped = b.at("skipped").get<int>();
    s.coefficient_means = vector_from_json(b.at("coefficient_means"));
    s.coefficient_stddevs = vector_from_json(b.at("coefficient_stddevs"));
    s.seed = b.at("seed").get<std::uint64_t>();
    s.rng_algorithm = b.at("rng_algorithm").get<std::string>();
    r.bootstrap = std::move(s);
  }
  if (j.contains("prediction")) {
    const Json& p = j.at("prediction");
    r.prediction = Prediction{vector_from_json(p.at("mean")),
                              vector_from_json(p.at("model_variance")),
                              vector_from_json(p.at("noise_variance"))};
  }
  if (j.contains("rescale_map")) {
    const Json& m = j.at("rescale_map");
    r.rescale_map = RescaleMap{vector_from_json(m.at("min")),
                               vector_from_json(m.at("max"))};
  }
  if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
  return r;
}

std::string emit(const FitReport& report) { return to_json(report).dump(2) + "\n"; }

FitReport parse_report(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("invalid report JSON: ") + e.what());
  }
  return report_from_json(j);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
  if (!out) throw DataError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace blr
