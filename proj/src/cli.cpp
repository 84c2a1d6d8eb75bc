#include "corcon/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "corcon/compress.hpp"
#include "corcon/corcondia.hpp"
#include "corcon/decomp.hpp"
#include "corcon/harness.hpp"
#include "corcon/io.hpp"
#include "corcon/synth.hpp"

namespace corcon {

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void add_fit_options(CLI::App* cmd, FitConfig& fit) {
  cmd->add_option("--max-iter", fit.max_iterations, "ALS/HOOI iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", fit.rel_tolerance, "Relative residual-change stopping threshold")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--restarts", fit.restarts, "Random CP-ALS initializations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

std::optional<Dims> to_dims(const std::vector<std::size_t>& v) {
  if (v.empty()) return std::nullopt;
  return Dims{v[0], v[1], v[2]};
}

unsigned resolve_threads(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kThreadsEnvVar)) {
    try {
      const long n = std::stol(env);
      if (n >= 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    throw ValidationError(std::string(kThreadsEnvVar) + " must be a nonnegative integer");
  }
  return 1;
}

struct Options {
  // synth
  SynthSpec synth;
  std::string synth_dist = "gaussian";
  std::vector<std::size_t> synth_dims;
  std::string output;

  // shared
  std::string input;
  std::vector<std::size_t> csv_dims;
  std::uint64_t seed = 0;
  FitConfig fit;

  // decompose
  std::size_t rank = 0;
  std::vector<std::size_t> tucker_dims;

  // corcondia
  std::vector<std::size_t> ranks{1, 2, 3, 4, 5};

  // compress
  std::string scheme = "orthonormal";
  double ratio = 0.5;
  std::string modes = "1,2";

  // experiment
  std::size_t exp_rank = 3;
  std::vector<std::string> schemes{"gaussian", "orthonormal", "tucker"};
  std::vector<double> ratios{0.5, 0.4, 0.3, 0.2, 0.1, 0.08, 0.04};
  std::size_t gaussian_samples = 1000;
  std::size_t orthonormal_samples = 1000;
  std::size_t tucker_samples = 10;
  std::optional<unsigned> threads;
  std::string json_out;
  std::string csv_out;
};

DenseTensor3 load_input(const Options& o) { return read_tensor(o.input, to_dims(o.csv_dims)); }

int run_synth(const Options& o, std::ostream& out) {
  SynthSpec spec = o.synth;
  spec.dims = *to_dims(o.synth_dims);
  spec.factor_distribution = parse_distribution(o.synth_dist);
  spec.seed = o.seed;
  const DenseTensor3 x = synth_tensor(spec);
  write_tensor(x, o.output);
  out << "wrote " << to_string(x.dims()) << " tensor to " << o.output << "\n";
  return 0;
}

int run_decompose(const Options& o, std::ostream& out) {
  const DenseTensor3 x = load_input(o);
  FitConfig fit = o.fit;
  fit.seed = o.seed;
  if (!o.tucker_dims.empty()) {
    const TuckerModel model = tucker3(x, *to_dims(o.tucker_dims), fit);
    write_file_atomic(o.output + "_A.csv", matrix_to_csv(model.a));
    write_file_atomic(o.output + "_B.csv", matrix_to_csv(model.b));
    write_file_atomic(o.output + "_C.csv", matrix_to_csv(model.c));
    write_tensor(model.core, o.output + "_core.tns");
    out << "tucker3 core " << to_string(model.core.dims()) << " fit " << fixed6(*model.fit)
        << " iterations " << model.iterations << (model.converged ? "" : " (not converged)")
        << "\n";
    return 0;
  }
  if (o.rank == 0) throw ValidationError("decompose needs --rank or --tucker-dims");
  const CpModel model = cp_als(x, o.rank, fit);
  write_file_atomic(o.output + "_A.csv", matrix_to_csv(model.a));
  write_file_atomic(o.output + "_B.csv", matrix_to_csv(model.b));
  write_file_atomic(o.output + "_C.csv", matrix_to_csv(model.c));
  out << "parafac rank " << o.rank << " fit " << fixed6(model.fit) << " iterations "
      << model.iterations << (model.converged ? "" : " (not converged)") << "\n";
  return 0;
}

int run_corcondia(const Options& o, std::ostream& out) {
  const DenseTensor3 x = load_input(o);
  FitConfig fit = o.fit;
  fit.seed = o.seed;
  const auto reports = corcondia_sweep(x, o.ranks, fit);
  out << "rank corcondia\n";
  for (const CorcondiaReport& r : reports) {
    out << r.rank << " " << fixed6(r.value) << (r.rank_deficient ? " rank-deficient" : "") << "\n";
  }
  return 0;
}

int run_compress(const Options& o, std::ostream& out) {
  const DenseTensor3 x = load_input(o);
  const Scheme scheme = parse_scheme(o.scheme);
  const ModeSet modes = parse_modes(o.modes);
  const Dims target = ratio_to_dims(x.dims(), RatioSpec{o.ratio, modes});
  CompressionOperator op = [&] {
    switch (scheme) {
      case Scheme::gaussian:
        return gaussian_operator(x.dims(), target, o.seed, modes);
      case Scheme::orthonormal:
        return orthonormal_operator(x.dims(), target, o.seed, modes);
      case Scheme::tucker:
        break;
    }
    FitConfig fit = o.fit;
    fit.seed = o.seed;
    return tucker_operator(x, target, fit);
  }();
  const DenseTensor3 y = compress(x, op);
  write_tensor(y, o.output);
  out << "wrote " << to_string(y.dims()) << " " << to_string(scheme) << " compression to "
      << o.output << "\n";
  return 0;
}

int run_experiment_cmd(const Options& o, std::ostream& out) {
  const DenseTensor3 x = load_input(o);
  ExperimentConfig cfg;
  cfg.rank = o.exp_rank;
  cfg.schemes.clear();
  for (const std::string& s : o.schemes) cfg.schemes.push_back(parse_scheme(s));
  cfg.ratios = o.ratios;
  cfg.samples_per_cell = {{Scheme::gaussian, o.gaussian_samples},
                          {Scheme::orthonormal, o.orthonormal_samples},
                          {Scheme::tucker, o.tucker_samples}};
  cfg.compressed_modes = parse_modes(o.modes);
  cfg.master_seed = o.seed;
  cfg.fit = o.fit;

  const ExperimentResult result = run_experiment(x, cfg, resolve_threads(o.threads));
  if (!o.json_out.empty()) write_file_atomic(o.json_out, to_json(result).dump(2) + "\n");
  if (!o.csv_out.empty()) write_file_atomic(o.csv_out, stats_csv(result));
  out << "baseline corcondia at rank " << cfg.rank << ": " << fixed6(result.baseline.value) << "\n";
  out << stats_csv(result);
  return 0;
}

// Files hold bare keys; route them to the subcommand that owns them.
class SubcommandConfig : public CLI::ConfigTOML {
 public:
  explicit SubcommandConfig(std::string name) : name_(std::move(name)) {}
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::vector<CLI::ConfigItem> items = CLI::ConfigTOML::from_config(input);
    for (CLI::ConfigItem& item : items) {
      if (item.parents.empty()) item.parents.push_back(name_);
    }
    return items;
  }

 private:
  std::string name_;
};

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Core consistency of compressed 3-mode tensors", "corcon"};
  app.require_subcommand(1);
  Options o;

  auto* synth = app.add_subcommand("synth", "Generate a low-rank tensor with Gaussian noise");
  synth->add_option("--dims", o.synth_dims, "Sizes I J K")->required()->expected(3);
  synth->add_option("--rank", o.synth.rank, "Number of trilinear components")->required();
  synth->add_option("--noise", o.synth.noise_level, "Relative Frobenius noise level")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--dist", o.synth_dist, "Factor distribution")
      ->capture_default_str()
      ->check(CLI::IsMember({"uniform", "gaussian"}));
  synth->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  synth->add_option("-o,--output", o.output, "Output tensor file")->required();

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("-i,--input", o.input, "Input tensor file")->required();
    cmd->add_option("--csv-dims", o.csv_dims, "Dims of a csv triplet input")->expected(3);
  };

  auto* decompose = app.add_subcommand("decompose", "Fit PARAFAC or TUCKER3 and write factors");
  add_input(decompose);
  auto* rank_opt = decompose->add_option("--rank", o.rank, "PARAFAC components");
  decompose->add_option("--tucker-dims", o.tucker_dims, "TUCKER3 core sizes P Q R")
      ->expected(3)
      ->excludes(rank_opt);
  decompose->add_option("-o,--output-prefix", o.output, "Prefix for factor/core files")
      ->required();
  decompose->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  add_fit_options(decompose, o.fit);

  auto* corc = app.add_subcommand("corcondia", "Core consistency sweep over component counts");
  add_input(corc);
  corc->add_option("--ranks", o.ranks, "Component counts")->delimiter(',')->capture_default_str();
  corc->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  add_fit_options(corc, o.fit);

  auto* comp = app.add_subcommand("compress", "Compress a tensor with a random or Tucker operator");
  add_input(comp);
  comp->add_option("--scheme", o.scheme, "gaussian, orthonormal or tucker")
      ->capture_default_str()
      ->check(CLI::IsMember({"gaussian", "orthonormal", "tucker"}, CLI::ignore_case));
  comp->add_option("--ratio", o.ratio, "Fraction of each compressed mode kept")
      ->capture_default_str();
  comp->add_option("--modes", o.modes, "Compressed modes, e.g. 1,2")->capture_default_str();
  comp->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  comp->add_option("-o,--output", o.output, "Output tensor file")->required();
  add_fit_options(comp, o.fit);

  auto* exp = app.add_subcommand("experiment", "Monte Carlo CORCONDIA experiment");
  exp->fallthrough();
  exp->footer("--config FILE reads key=value lines named after the long flags, e.g.\n"
              "rank=3, ratios=[0.5, 0.2], schemes=[\"tucker\"]. Flags override the file.");
  app.config_formatter(std::make_shared<SubcommandConfig>("experiment"));
  app.set_config("--config", "", "experiment: key=value file mirroring the flags");
  add_input(exp);
  exp->add_option("--rank", o.exp_rank, "Fixed PARAFAC component count")->capture_default_str();
  exp->add_option("--schemes", o.schemes, "Compression schemes")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember({"gaussian", "orthonormal", "tucker"}, CLI::ignore_case));
  exp->add_option("--ratios", o.ratios, "Compression ratios in (0, 1]")->delimiter(',')->capture_default_str();
  exp->add_option("--gaussian-samples", o.gaussian_samples, "Samples per Gaussian cell")->capture_default_str();
  exp->add_option("--orthonormal-samples", o.orthonormal_samples, "Samples per orthonormal cell")->capture_default_str();
  exp->add_option("--tucker-samples", o.tucker_samples, "Samples per Tucker cell")->capture_default_str();
  exp->add_option("--modes", o.modes, "Compressed modes, e.g. 1,2")->capture_default_str();
  exp->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  exp->add_option("--threads", o.threads,
                  std::string("Worker threads (0 = all cores; default $") + kThreadsEnvVar +
                      " or 1)");
  exp->add_option("--json", o.json_out, "Result JSON path");
  exp->add_option("--csv", o.csv_out, "Per-cell statistics CSV path");
  add_fit_options(exp, o.fit);

  std::vector<const char*> argv{"corcon"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e, out, err);
    err << "corcon: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*synth) return run_synth(o, out);
    if (*decompose) return run_decompose(o, out);
    if (*corc) return run_corcondia(o, out);
    if (*comp) return run_compress(o, out);
    return run_experiment_cmd(o, out);
  } catch (const ValidationError& e) {
    err << "corcon: " << e.what() << "\n";
    return kUsageError;
  } catch (const ShapeError& e) {
    err << "corcon: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "corcon: " << e.what() << "\n";
    return kRuntimeError;
  }
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int n = 1; n < argc; ++n) args.emplace_back(argv[n]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace corcon
