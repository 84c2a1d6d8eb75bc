// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corcon/cli.hpp"
#include "corcon/compress.hpp"
#include "corcon/corcondia.hpp"
#include "corcon/decomp.hpp"
#include "corcon/harness.hpp"
#include "corcon/stats.hpp"
#include "corcon/synth.hpp"
#include "oracles.hpp"

using namespace corcon;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome ratio_arithmetic() {
  const Dims got = ratio_to_dims({268, 44, 7}, RatioSpec{0.5, {true, true, false}});
  return {got == Dims{134, 22, 7}, "(268,44,7) at 0.5 over modes 1,2 -> " + to_string(got)};
}

Outcome exact_model() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SynthSpec spec;
    spec.seed = seed;
    FitConfig cfg;
    cfg.seed = seed;
    for (const CorcondiaReport& r : corcondia_sweep(synth_tensor(spec), {1, 2, 3}, cfg)) {
      worst = std::max(worst, std::abs(r.value - 100.0));
    }
  }
  return {worst <= 1e-6, "max |CORCONDIA - 100| over R=1..3, 5 tensors: " + fmt("%.3e", worst)};
}

Outcome claim_one() {
  const Dims dims{30, 20, 10};
  const Dims target{8, 6, 5};
  const Eigen::Index r = 3;
  double worst_core = 0.0;
  double worst_value = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const CompressionOperator op = orthonormal_operator(dims, target, seed);
    const Matrix p = oracle::random_matrix(rng, 8, r);
    const Matrix q = oracle::random_matrix(rng, 6, r);
    const Matrix s = oracle::random_matrix(rng, 5, r);
    const DenseTensor3 x = reconstruct_cp(op.u.transpose() * p, op.v.transpose() * q,
                                          op.w.transpose() * s);
    const DenseTensor3 xc = compress(x, op);

    // Factors inside the rowspaces but away from the exact model.
    const Matrix pp = p + 0.3 * oracle::random_matrix(rng, 8, r);
    const Matrix qq = q + 0.3 * oracle::random_matrix(rng, 6, r);
    const Matrix ss = s + 0.3 * oracle::random_matrix(rng, 5, r);
    const Matrix a = op.u.transpose() * pp;
    const Matrix b = op.v.transpose() * qq;
    const Matrix c = op.w.transpose() * ss;
    const CorcondiaReport full = corcondia(x, a, b, c);
    const CorcondiaReport small = corcondia(xc, op.u * a, op.v * b, op.w * c);
    worst_core = std::max(worst_core, oracle::max_abs_diff(small.core, full.core));
    worst_value = std::max(worst_value, std::abs(small.value - full.value));

    FitConfig cfg;
    cfg.seed = seed;
    const double fitted_full = corcondia(x, cp_als(x, 3, cfg)).value;
    const double fitted_small = corcondia(xc, cp_als(xc, 3, cfg)).value;
    worst_value = std::max(worst_value, std::abs(fitted_full - fitted_small));
  }
  return {worst_core <= 1e-8 && worst_value <= 1e-6,
          "20 seeds: max |G' - G| " + fmt("%.3e", worst_core) + ", max |dCORCONDIA| " +
              fmt("%.3e", worst_value)};
}

Outcome claim_two() {
  const Dims dims{268, 44, 7};
  std::vector<Dims> targets{{3, 3, 3}};
  for (double ratio : {0.08, 0.2, 0.5}) {
    Dims t = ratio_to_dims(dims, RatioSpec{ratio, kAllModes});
    for (std::size_t& d : t) d = std::max<std::size_t>(d, 3);
    targets.push_back(t);
  }
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SynthSpec spec;
    spec.seed = 500 + seed;
    const DenseTensor3 x = synth_tensor(spec);
    for (const Dims& t : targets) {
      const DenseTensor3 core = compress(x, tucker_operator(x, t));
      FitConfig cfg;
      cfg.seed = seed;
      worst = std::max(worst, std::abs(corcondia(core, cp_als(core, 3, cfg)).value - 100.0));
    }
  }
  return {worst <= 1e-6, "10 seeds x targets (3,3,3)..(134,22,3): max |CORCONDIA - 100| " +
                             fmt("%.3e", worst)};
}

Outcome noisy_protocol() {
  SynthSpec spec;
  spec.noise_level = 0.05;
  ExperimentConfig cfg;
  cfg.ratios = {0.5, 0.2, 0.08};
  cfg.samples_per_cell = {{Scheme::gaussian, 100}, {Scheme::orthonormal, 100}, {Scheme::tucker, 5}};

  bool tucker_ok = true;
  int variance_wins = 0;
  double worst_gap = -1e300;
  std::string variances;
  for (std::uint64_t master = 0; master < 5; ++master) {
    spec.seed = 900 + master;
    cfg.master_seed = master;
    const ExperimentResult res = run_experiment(synth_tensor(spec), cfg, 0);
    auto cell = [&](Scheme scheme, double ratio) -> const CellResult& {
      return *std::find_if(res.cells.begin(), res.cells.end(), [&](const CellResult& c) {
        return c.scheme == scheme && c.ratio == ratio;
      });
    };
    for (double ratio : cfg.ratios) {
      const double gap = cell(Scheme::orthonormal, ratio).stats.smoothed_mean -
                         cell(Scheme::tucker, ratio).stats.smoothed_mean;
      worst_gap = std::max(worst_gap, gap);
      if (gap > 5.0) tucker_ok = false;
    }
    const double vo = sample_variance(cell(Scheme::orthonormal, 0.5).clamped_samples);
    const double vg = sample_variance(cell(Scheme::gaussian, 0.5).clamped_samples);
    if (vo <= vg) ++variance_wins;
    variances += " " + fmt("%.3g", vo) + "/" + fmt("%.3g", vg);
  }
  return {tucker_ok && variance_wins >= 4,
          "(a) max orthonormal - tucker smoothed mean " + fmt("%.3f", worst_gap) +
              "; (b) var orth <= var gauss at 0.5 in " + std::to_string(variance_wins) +
              "/5 seeds (orth/gauss:" + variances + ")"};
}

Outcome core_oracle() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> rank_dist(1, 3);
  std::uniform_int_distribution<int> dim_dist(3, 9);
  double worst = 0.0;
  for (int n = 0; n < 50; ++n) {
    const Eigen::Index r = rank_dist(rng);
    const Dims dims{static_cast<std::size_t>(dim_dist(rng)), static_cast<std::size_t>(dim_dist(rng)),
                    static_cast<std::size_t>(dim_dist(rng))};
    const DenseTensor3 x = oracle::random_tensor(rng, dims);
    const Matrix a = oracle::random_matrix(rng, static_cast<Eigen::Index>(dims[0]), r);
    const Matrix b = oracle::random_matrix(rng, static_cast<Eigen::Index>(dims[1]), r);
    const Matrix c = oracle::random_matrix(rng, static_cast<Eigen::Index>(dims[2]), r);
    worst = std::max(worst, oracle::max_abs_diff(corcondia_core(x, a, b, c),
                                                 oracle::normal_equations_core(x, a, b, c)));
  }
  return {worst <= 1e-8, "50 instances: max |G - G_oracle| " + fmt("%.3e", worst)};
}

Outcome penrose() {
  std::mt19937_64 rng(91);
  std::uniform_int_distribution<int> dim_dist(1, 12);
  double worst = 0.0;
  int deficient = 0;
  for (int n = 0; n < 100; ++n) {
    const Eigen::Index rows = dim_dist(rng);
    const Eigen::Index cols = dim_dist(rng);
    Matrix m;
    if (n % 2 == 1 && std::min(rows, cols) > 1) {
      const Eigen::Index rank = std::uniform_int_distribution<Eigen::Index>(
          1, std::min(rows, cols) - 1)(rng);
      m = oracle::random_low_rank(rng, rows, cols, rank);
      ++deficient;
    } else {
      m = oracle::random_matrix(rng, rows, cols);
    }
    const Matrix p = pseudoinverse(m);
    const double mn = m.cwiseAbs().maxCoeff();
    const double pn = p.cwiseAbs().maxCoeff();
    const Matrix mp = m * p;
    const Matrix pm = p * m;
    worst = std::max({worst, (m * p * m - m).cwiseAbs().maxCoeff() / mn,
                      (p * m * p - p).cwiseAbs().maxCoeff() / pn,
                      (mp - mp.transpose()).cwiseAbs().maxCoeff(),
                      (pm - pm.transpose()).cwiseAbs().maxCoeff()});
  }
  return {worst <= 1e-10, "100 matrices (" + std::to_string(deficient) +
                              " rank deficient): max relative violation " + fmt("%.3e", worst)};
}

Outcome thread_determinism() {
  const fs::path dir = fs::temp_directory_path() / "corcon_acceptance";
  fs::create_directories(dir);
  const std::string x = (dir / "x.tns").string();
  std::ostringstream out, err;
  if (cli_main({"synth", "--dims", "40", "20", "6", "--rank", "3", "--noise", "0.05", "--seed",
                "5", "-o", x},
               out, err) != 0) {
    return {false, "synth failed: " + err.str()};
  }
  auto experiment = [&](const std::string& threads) {
    const std::string json = (dir / ("t" + threads + ".json")).string();
    const int code = cli_main({"experiment", "-i", x, "--ratios", "0.5,0.2",
                               "--gaussian-samples", "10", "--orthonormal-samples", "10",
                               "--tucker-samples", "2", "--seed", "11", "--threads", threads,
                               "--json", json},
                              out, err);
    return code == 0 ? slurp(json) : std::string();
  };
  const std::string one = experiment("1");
  const std::string four = experiment("4");
  fs::remove_all(dir);
  if (one.empty() || four.empty()) return {false, "experiment failed: " + err.str()};

  const auto j1 = nlohmann::json::parse(one);
  const auto j4 = nlohmann::json::parse(four);
  bool same = j1["cells"].size() == j4["cells"].size();
  std::size_t samples = 0;
  for (std::size_t n = 0; same && n < j1["cells"].size(); ++n) {
    same = j1["cells"][n]["raw_samples"].dump() == j4["cells"][n]["raw_samples"].dump();
    samples += j1["cells"][n]["raw_samples"].size();
  }
  return {same && one == four, "threads 1 vs 4: " + std::to_string(samples) +
                                   " raw samples " + (same ? "identical" : "differ") +
                                   ", JSON " + (one == four ? "byte-identical" : "differs")};
}

Outcome clamping() {
  const std::vector<double> raw{-5.0, 50.0, 100.0};
  const std::vector<double> clamped = clamp_negatives(raw);
  const SummaryStats got = summarize(clamped);
  const std::vector<double> reference{0.0, 50.0, 100.0};
  const SummaryStats want = summarize(reference);
  const bool pass = clamped == reference && got.min == 0.0 && got.min == want.min &&
                    got.q1 == want.q1 && got.median == want.median && got.q3 == want.q3 &&
                    got.max == want.max && got.smoothed_mean == want.smoothed_mean;
  return {pass, "clamp [-5,50,100] -> min " + fmt("%g", got.min) + ", median " +
                    fmt("%g", got.median) + ", mean " + fmt("%g", got.smoothed_mean)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"ratio arithmetic", ratio_arithmetic},
      {"exact-model CORCONDIA", exact_model},
      {"orthonormal compression in the rowspaces", claim_one},
      {"Tucker compression of exact tensors", claim_two},
      {"noisy Monte Carlo protocol", noisy_protocol},
      {"core against normal equations", core_oracle},
      {"Penrose conditions", penrose},
      {"thread-count determinism", thread_determinism},
      {"negative clamping", clamping},
  };
  int failures = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[n].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", n + 1, criteria[n].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
