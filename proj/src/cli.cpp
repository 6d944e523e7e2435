#include "blr/cli.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blr/report.hpp"
#include "blr/rng.hpp"

namespace blr {

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::vector<int>> parse_index_list(const std::string& text) {
  std::vector<std::vector<int>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t semi = text.find(';', start);
    const std::string group =
        text.substr(start, semi == std::string::npos ? std::string::npos
                                                     : semi - start);
    std::vector<int> exps;
    std::size_t gs = 0;
    while (gs <= group.size()) {
      const std::size_t comma = group.find(',', gs);
      const std::string tok =
          group.substr(gs, comma == std::string::npos ? std::string::npos
                                                      : comma - gs);
      try {
        exps.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw InvalidArgument("cannot parse index list entry '" + tok + "'");
      }
      if (comma == std::string::npos) break;
      gs = comma + 1;
    }
    out.push_back(std::move(exps));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok =
        text.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start);
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse numeric list entry '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Raw flag values; only options the user actually passed override the config.
struct CliValues {
  std::string config_path, data, out, model, method, family, indices, coeffs;
  int max_degree = 0, d = 0, sweeps = 1, replicates = 200, n = 100;
  double noise_iid = 1.0, tie_epsilon = 1e-9, sigma0_sq = 1.0, gamma = 2.0,
         sigma = 0.0;
  std::uint64_t seed = 0;
  std::string noise_full;
  bool header = false, rescale = false, no_timestamp = false;
};

RunConfig merge_config(const CliValues& v, const CLI::App& cmd) {
  RunConfig cfg;
  if (!v.config_path.empty()) {
    Json j;
    try {
      j = Json::parse(read_text_file(v.config_path));
    } catch (const Json::parse_error& e) {
      throw DataError(std::string("invalid config JSON: ") + e.what());
    }
    cfg = config_from_json(j);
  }
  const auto passed = [&cmd](const std::string& name) {
    const CLI::Option* opt = cmd.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (passed("--data")) cfg.data_path = v.data;
  if (passed("--out")) cfg.out_path = v.out;
  if (passed("--model")) cfg.model_path = v.model;
  if (passed("--method")) cfg.method = method_from_name(v.method);
  if (passed("--family")) cfg.family = family_from_name(v.family);
  if (passed("--max-degree")) cfg.max_degree = v.max_degree;
  if (passed("--indices")) cfg.indices = parse_index_list(v.indices);
  if (passed("--coeffs")) cfg.coefficients = parse_double_list(v.coeffs);
  if (passed("--d")) cfg.d = v.d;
  if (passed("--header")) cfg.header = v.header;
  if (passed("--rescale")) cfg.rescale = v.rescale;
  if (passed("--noise-iid")) {
    cfg.noise = NoiseConfig{};
    cfg.noise.iid_sigma2 = v.noise_iid;
  }
  if (passed("--noise-full")) {
    cfg.noise.kind = NoiseModel::Kind::full;
    cfg.noise.full_path = v.noise_full;
  }
  if (passed("--sweeps")) cfg.max_sweeps = v.sweeps;
  if (passed("--tie-epsilon")) cfg.tie_epsilon = v.tie_epsilon;
  if (passed("--sigma0-sq")) cfg.policy.sigma0_sq = v.sigma0_sq;
  if (passed("--gamma")) cfg.policy.gamma = v.gamma;
  if (passed("--replicates")) cfg.replicates = v.replicates;
  if (passed("--seed")) cfg.seed = v.seed;
  if (passed("--sigma")) cfg.sigma = v.sigma;
  if (passed("--n")) cfg.n = v.n;
  if (passed("--no-timestamp")) cfg.timestamp = !v.no_timestamp;
  return cfg;
}

void deliver(const FitReport& report, const std::string& out_path) {
  const std::string text = emit(report);
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

Dataset load_data(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw DataError("no input data file (--data)");
  return read_dataset(cfg.data_path, CsvOptions{cfg.d, cfg.header});
}

FitReport base_report(const std::string& command, const RunConfig& cfg) {
  FitReport rep;
  rep.command = command;
  rep.config = cfg;
  if (cfg.timestamp) rep.timestamp = utc_timestamp();
  return rep;
}

void collect_warnings(FitReport& rep) {
  if (rep.posterior.has_value())
    for (const auto& w : rep.posterior->warnings) rep.warnings.push_back(w);
  if (rep.bootstrap.has_value() && rep.bootstrap->skipped > 0)
    rep.warnings.push_back(warning::kSkippedReplicates);
}

int run_fit(const RunConfig& cfg) {
  cfg.validate_for("fit");
  Dataset data = load_data(cfg);
  FitReport rep = base_report("fit", cfg);
  if (cfg.rescale) {
    rep.rescale_map = fit_rescale(data.x);
    data.x = rep.rescale_map->apply(data.x);
  }
  const IndexSet set = cfg.make_index_set(data.d());
  rep.index_set = set;
  const Matrix psi = evaluate_design_values(data.x, set);

  switch (cfg.method) {
    case FitMethod::ols: {
      rep.posterior = fit_ols(psi, data.y);
      const Vector r = data.y - psi * rep.posterior->mean;
      const double rss = r.squaredNorm();
      if (rss > 0.0) rep.gamma = precision_posterior(rss, data.n());
      break;
    }
    case FitMethod::gls: {
      const NoiseModel noise = cfg.noise.resolve();
      std::optional<UniformPrior> bounds;
      if (cfg.prior.has_value())
        bounds = std::get<UniformPrior>(*cfg.prior);
      rep.posterior = fit_gls(psi, data.y, noise, bounds);
      break;
    }
    case FitMethod::ridge: {
      const NoiseModel noise = cfg.noise.resolve();
      const GaussianPrior prior =
          cfg.prior.has_value() ? std::get<GaussianPrior>(*cfg.prior)
                                : degree_weighted_prior(set, cfg.policy);
      rep.posterior = fit_ridge(psi, data.y, noise, prior);
      rep.evidence = evidence_from_fit(*rep.posterior, psi, data.y, noise, prior);
      break;
    }
    case FitMethod::lasso: {
      const NoiseModel noise = cfg.noise.resolve();
      const LaplacePrior prior = std::get<LaplacePrior>(*cfg.prior);
      rep.posterior = fit_laplace_map(psi, data.y, noise, prior);
      rep.evidence = evidence_from_fit(*rep.posterior, psi, data.y, noise, prior);
      break;
    }
  }
  collect_warnings(rep);
  deliver(rep, cfg.out_path);
  return 0;
}

int run_select(const RunConfig& cfg) {
  cfg.validate_for("select");
  Dataset data = load_data(cfg);
  FitReport rep = base_report("select", cfg);
  if (cfg.rescale) {
    rep.rescale_map = fit_rescale(data.x);
    data.x = rep.rescale_map->apply(data.x);
  }
  const int degree = cfg.max_degree.value_or(3);
  const IndexSet candidates =
      enumerate_total_degree(data.d(), degree, cfg.family);
  const NoiseModel noise = cfg.noise.resolve();

  SelectionOptions options;
  options.policy = cfg.policy;
  options.tie_epsilon = cfg.tie_epsilon;
  options.max_sweeps = cfg.max_sweeps;
  auto [final_set, trace] = stepwise_select(data, candidates, noise, options);

  rep.index_set = final_set;
  rep.selection = std::move(trace);
  const Matrix psi = evaluate_design_values(data.x, final_set);
  const GaussianPrior prior = degree_weighted_prior(final_set, cfg.policy);
  rep.posterior = fit_ridge(psi, data.y, noise, prior);
  rep.evidence = evidence_from_fit(*rep.posterior, psi, data.y, noise, prior);
  collect_warnings(rep);
  deliver(rep, cfg.out_path);
  return 0;
}

int run_predict(const RunConfig& cfg) {
  if (cfg.model_path.empty()) throw DataError("predict needs --model");
  if (cfg.data_path.empty()) throw DataError("no input data file (--data)");
  const FitReport model = parse_report(read_text_file(cfg.model_path));
  if (!model.posterior.has_value() || !model.index_set.has_value())
    throw DataError("model report has no posterior/index_set");

  Matrix x = read_csv_matrix(cfg.data_path);
  FitReport rep = base_report("predict", cfg);
  if (model.rescale_map.has_value()) {
    rep.rescale_map = model.rescale_map;
    x = model.rescale_map->apply(x);
  }
  const Matrix psi = evaluate_design_values(x, *model.index_set);

  std::optional<NoiseModel> noise;
  if (model.config.noise.kind == NoiseModel::Kind::iid)
    noise = NoiseModel::iid(model.config.noise.iid_sigma2);
  else
    rep.warnings.push_back(warning::kNoiseNotTransferable);
  if (!model.posterior->covariance.has_value())
    rep.warnings.push_back(warning::kNoModelVariance);

  rep.prediction = predict(*model.posterior, psi, noise);
  rep.index_set = model.index_set;
  deliver(rep, cfg.out_path);
  return 0;
}

int run_bootstrap(const RunConfig& cfg) {
  cfg.validate_for("bootstrap");
  const Dataset data = load_data(cfg);
  FitReport rep = base_report("bootstrap", cfg);
  const IndexSet set = cfg.make_index_set(data.d());
  rep.index_set = set;

  const NoiseModel noise = cfg.noise.resolve();
  std::optional<PriorSpec> prior = cfg.prior;
  if (cfg.method == FitMethod::ridge && !prior.has_value())
    prior = degree_weighted_prior(set, cfg.policy);
  rep.bootstrap = bootstrap_coefficients(data, set, noise, prior, cfg.method,
                                         cfg.replicates, cfg.seed);
  collect_warnings(rep);
  deliver(rep, cfg.out_path);
  return 0;
}

int run_gen(const RunConfig& cfg) {
  cfg.validate_for("gen");
  if (cfg.out_path.empty()) throw DataError("gen needs --out for the CSV");

  std::vector<MultiIndex> mis;
  for (const auto& exps : *cfg.indices) mis.emplace_back(exps);
  SyntheticSpec spec;
  spec.set = IndexSet(std::move(mis), cfg.family);
  spec.coefficients = Eigen::Map<const Vector>(cfg.coefficients->data(),
                                               static_cast<Eigen::Index>(
                                                   cfg.coefficients->size()));
  spec.sigma = cfg.sigma;
  spec.n = cfg.n;
  spec.seed = cfg.seed;

  const Dataset data = generate_synthetic(spec);
  write_dataset(cfg.out_path, data);

  Json truth{{"schema_version", kSchemaVersion},
             {"index_set", to_json(spec.set)},
             {"coefficients", *cfg.coefficients},
             {"sigma", spec.sigma},
             {"n", spec.n},
             {"seed", spec.seed},
             {"rng_algorithm", kRngAlgorithm}};
  write_text_file(cfg.out_path + ".truth.json", truth.dump(2) + "\n");
  return 0;
}

void add_common_options(CLI::App* cmd, CliValues& v) {
  cmd->add_option("--config", v.config_path, "JSON config file");
  cmd->add_option("--data", v.data, "input CSV");
  cmd->add_option("--out", v.out, "output report path (default stdout)");
  cmd->add_option("--seed", v.seed, "random seed");
  cmd->add_option("--d", v.d, "number of input columns (default: columns-1)");
  cmd->add_flag("--header", v.header, "input CSV has a header row");
  cmd->add_option("--family", v.family, "basis family: monomial|legendre|hermite");
  cmd->add_option("--max-degree", v.max_degree, "total-degree bound for the basis");
  cmd->add_option("--indices", v.indices, "explicit multi-indices, e.g. '0,0;1,0'");
  cmd->add_flag("--rescale", v.rescale, "affinely rescale inputs to [-1,1]");
  cmd->add_option("--noise-iid", v.noise_iid, "iid noise variance sigma^2");
  cmd->add_option("--noise-full", v.noise_full, "CSV with a full noise covariance");
  cmd->add_flag("--no-timestamp", v.no_timestamp, "omit the timestamp field");
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Bayesian linear regression with KIC model selection"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  CliValues v;
  CLI::App* fit = app.add_subcommand("fit", "fit one model on one index set");
  add_common_options(fit, v);
  fit->add_option("--method", v.method, "gls|ols|ridge|lasso");

  CLI::App* select = app.add_subcommand("select", "stepwise KIC basis selection");
  add_common_options(select, v);
  select->add_option("--sweeps", v.sweeps, "max candidate sweeps (default 1)");
  select->add_option("--tie-epsilon", v.tie_epsilon, "KIC acceptance threshold");
  select->add_option("--sigma0-sq", v.sigma0_sq, "prior policy base variance");
  select->add_option("--gamma", v.gamma, "prior policy degree decay");

  CLI::App* predict = app.add_subcommand("predict", "predict at new points");
  add_common_options(predict, v);
  predict->add_option("--model", v.model, "fit/select report to predict from");

  CLI::App* bootstrap =
      app.add_subcommand("bootstrap", "pairs bootstrap of the coefficients");
  add_common_options(bootstrap, v);
  bootstrap->add_option("--method", v.method, "gls|ols|ridge|lasso");
  bootstrap->add_option("--replicates", v.replicates, "number of replicates");

  CLI::App* gen = app.add_subcommand("gen", "generate synthetic data");
  add_common_options(gen, v);
  gen->add_option("--coeffs", v.coeffs, "ground-truth coefficients, e.g. '1,0.5'");
  gen->add_option("--sigma", v.sigma, "noise standard deviation");
  gen->add_option("--n", v.n, "number of rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  CLI::App* cmd = app.get_subcommands().front();
  std::string out_path;
  try {
    const RunConfig cfg = merge_config(v, *cmd);
    out_path = cfg.out_path;
    if (cmd == fit) return run_fit(cfg);
    if (cmd == select) return run_select(cfg);
    if (cmd == predict) return run_predict(cfg);
    if (cmd == bootstrap) return run_bootstrap(cfg);
    if (cmd == gen) return run_gen(cfg);
    return 1;
  } catch (const Error& e) {
    const bool numerical = dynamic_cast<const NotPositiveDefinite*>(&e) ||
                           dynamic_cast<const NoSignFixedPoint*>(&e);
    std::string kind = numerical
                           ? (dynamic_cast<const NotPositiveDefinite*>(&e)
                                  ? "NotPositiveDefinite"
                                  : "NoSignFixedPoint")
                           : "DataError";
    Json err{{"schema_version", kSchemaVersion},
             {"error", Json{{"kind", kind}, {"message", e.what()}}}};
    if (const auto* nsf = dynamic_cast<const NoSignFixedPoint*>(&e))
      err["error"]["trace"] = nsf->trace;
    std::cerr << "error: " << e.what() << "\n";
    if (!out_path.empty()) {
      try {
        write_text_file(out_path, err.dump(2) + "\n");
      } catch (...) {
      }
    }
    return numerical ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace blr
