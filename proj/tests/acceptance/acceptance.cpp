/* Copyright 2026 The trajarea Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "trajarea/abt.hpp"
#include "trajarea/gbtm.hpp"
#include "trajarea/pipeline.hpp"
#include "trajarea/selection.hpp"
#include "trajarea/simulate.hpp"

using namespace trajarea;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v, int digits = 6) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, v);
  return buffer;
}

double relative(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

int failures = 0;

void criterion(int number, const std::string& name, double budget_s,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("threw: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (seconds > budget_s) {
    out.require(false, "runtime " + num(seconds, 3) + " s over " +
                           num(budget_s) + " s budget");
  }
  if (!out.pass) ++failures;
  std::printf("%s criterion %d: %s [%.2f s]%s%s\n", out.pass ? "PASS" : "FAIL",
              number, name.c_str(), seconds, out.detail.empty() ? "" : " -- ",
              out.detail.c_str());
  std::fflush(stdout);
}

const TimeGrid kGrid = TimeGrid::uniform(0.0, 16.0, 2.0);

std::vector<double> random_cubic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {10.0 * u(rng), 1.0 * u(rng), 0.06 * u(rng), 0.004 * u(rng)};
}

Outcome quadrature() {
  Outcome out;
  double worst_exact = 0.0;
  const auto constant_a = [](double) { return 7.25; };
  const auto constant_b = [](double) { return -1.5; };
  for (std::size_t n : {1u, 10u, 1000u}) {
    worst_exact = std::max(
        worst_exact,
        relative(trapezoid_area(constant_a, constant_b, 0.0, 16.0, n), 140.0));
  }
  // |t - 1| on [0, 2]: the kink sits on node 500 of 1000.
  const auto v_a = [](double t) { return t; };
  const auto v_b = [](double) { return 1.0; };
  worst_exact = std::max(
      worst_exact, relative(trapezoid_area(v_a, v_b, 0.0, 2.0, 1000), 1.0));
  // Piecewise-linear individual path against a constant group curve, kinks
  // at grid points.
  const std::vector<double> y{5, 7, 6, 4.5, 4, 9, 8, 12, 5};
  const LongitudinalDataset data(kGrid, {{"p", y}});
  FittedModel flat;
  flat.grid = kGrid;
  flat.degree = 0;
  flat.mixing_proportions = {1.0};
  flat.coefficients = {{4.0}};
  const auto indiv = individual_to_group_abt(data, "p", flat, 0);
  for (std::size_t i = 0; i < kGrid.intervals(); ++i) {
    const double exact = (y[i] - 4.0) + (y[i + 1] - 4.0);
    worst_exact = std::max(worst_exact, relative(indiv.interval_areas[i], exact));
  }
  out.require(worst_exact <= 1e-12,
              "exact-case relative error " + num(worst_exact));

  std::mt19937_64 rng(101);
  double worst_cubic = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_cubic(rng);
    const auto b = random_cubic(rng);
    const auto areas = interval_areas(Polynomial{a}, Polynomial{b}, kGrid, 1000);
    const double got = std::accumulate(areas.begin(), areas.end(), 0.0);
    const double exact =
        oracle::abs_integral(oracle::difference(a, b), kGrid.front(), kGrid.back());
    worst_cubic = std::max(worst_cubic, relative(got, exact));
  }
  out.require(worst_cubic < 1e-6, "cubic relative error " + num(worst_cubic));
  out.detail = "max rel err exact " + num(worst_exact, 3) + ", cubic " +
               num(worst_cubic, 3) + (out.detail.empty() ? "" : "; " + out.detail);
  return out;
}

Outcome abt_algebra() {
  Outcome out;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = fixtures::random_polynomial(rng);
    const auto b = fixtures::random_polynomial(rng);
    const auto ab = interval_areas(a, b, kGrid, 1000);
    const auto ba = interval_areas(b, a, kGrid, 1000);
    const auto aa = interval_areas(a, a, kGrid, 1000);
    const double c = scale(rng);
    const auto ca = [&](double t) { return c * a(t); };
    const auto cb = [&](double t) { return c * b(t); };
    const auto scaled = interval_areas(ca, cb, kGrid, 1000);
    FittedModel model;
    model.grid = kGrid;
    auto ca_coef = a.coefficients;
    auto cb_coef = b.coefficients;
    const std::size_t width = std::max(ca_coef.size(), cb_coef.size());
    ca_coef.resize(width, 0.0);
    cb_coef.resize(width, 0.0);
    model.degree = static_cast<int>(width) - 1;
    model.coefficients = {ca_coef, cb_coef};
    model.mixing_proportions = {0.5, 0.5};
    const double total = group_pair_abt(model, 0, 1).total;
    double sum = 0.0;
    for (std::size_t i = 0; i < ab.size(); ++i) {
      const double floor = std::max(1.0, ab[i]);
      worst = std::max(worst, std::abs(ab[i] - ba[i]) / floor);
      worst = std::max(worst, std::abs(aa[i]));
      worst = std::max(worst, std::abs(scaled[i] - c * ab[i]) / std::max(1.0, c * ab[i]));
      // Splitting an interval at its midpoint with half the segments on each
      // side reuses the same nodes.
      const double mid = 0.5 * (kGrid[i] + kGrid[i + 1]);
      const double halves = trapezoid_area(a, b, kGrid[i], mid, 500) +
                            trapezoid_area(a, b, mid, kGrid[i + 1], 500);
      worst = std::max(worst, std::abs(halves - ab[i]) / floor);
      sum += ab[i];
    }
    worst = std::max(worst, std::abs(sum - total) / std::max(1.0, total));
  }
  out.require(worst <= 1e-9, "worst deviation " + num(worst));
  if (out.pass) out.detail = "worst deviation " + num(worst, 3);
  return out;
}

Outcome em_recovery() {
  Outcome out;
  const auto spec = fixtures::two_constant_groups(200, 0.5, 1);
  const auto sim = generate_dataset(spec);
  FitConfig config;
  config.seed = 1;
  const auto fit = fit_em(sim.dataset, 2, 0, config);
  const auto& m = fit.model;
  const double dp0 = std::abs(m.mixing_proportions[0] - 0.5);
  const double dp1 = std::abs(m.mixing_proportions[1] - 0.5);
  const double db0 = std::abs(m.coefficients[0][0] - 2.0);
  const double db1 = std::abs(m.coefficients[1][0] - 18.0);
  out.require(dp0 <= 0.05 && dp1 <= 0.05,
              "mixing proportions " + num(m.mixing_proportions[0]) + ", " +
                  num(m.mixing_proportions[1]));
  out.require(db0 <= 0.2 && db1 <= 0.2, "intercepts " +
                                            num(m.coefficients[0][0]) + ", " +
                                            num(m.coefficients[1][0]));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < sim.dataset.size(); ++i) {
    correct += fit.posterior.modal()[i] == sim.group_index[i];
  }
  const double accuracy =
      static_cast<double>(correct) / static_cast<double>(sim.dataset.size());
  out.require(accuracy >= 0.99, "modal accuracy " + num(accuracy));
  double worst_drop = 0.0;
  for (const auto& start : fit.starts) {
    for (std::size_t j = 1; j < start.trace.size(); ++j) {
      worst_drop =
          std::max(worst_drop, start.trace[j - 1] - start.trace[j]);
    }
  }
  out.require(worst_drop <= 1e-9, "log-likelihood drop " + num(worst_drop));
  if (out.pass) {
    out.detail = "pi " + num(m.mixing_proportions[0], 4) + "/" +
                 num(m.mixing_proportions[1], 4) + ", intercepts " +
                 num(m.coefficients[0][0], 5) + "/" +
                 num(m.coefficients[1][0], 5) + ", accuracy " +
                 num(accuracy, 4) + ", worst ll drop " + num(worst_drop, 3);
  }
  return out;
}

Outcome oracle_equivalence() {
  Outcome out;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> score(0.0, 21.0);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> level(2.0, 19.0);
  std::uniform_real_distribution<double> sd(0.8, 5.0);
  std::uniform_real_distribution<double> weight(0.1, 0.9);
  const std::vector<double> times{0.0, 4.0, 8.0};
  const TimeGrid grid(times);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    oracle::Matrix scores(5, std::vector<double>(3));
    std::vector<Individual> people;
    for (std::size_t i = 0; i < 5; ++i) {
      for (auto& s : scores[i]) s = score(rng);
      people.push_back({std::to_string(i + 1), scores[i]});
    }
    const LongitudinalDataset data(grid, people);
    FittedModel model;
    model.grid = grid;
    model.degree = static_cast<int>(trial % 3);
    for (int k = 0; k < 2; ++k) {
      std::vector<double> c{level(rng)};
      for (int j = 1; j <= model.degree; ++j) c.push_back(coef(rng) / j);
      model.coefficients.push_back(c);
    }
    const auto mean = [&](const std::vector<double>& c) {
      double s = 0.0;
      for (double t : times) s += oracle::poly(c, t);
      return s;
    };
    if (mean(model.coefficients[0]) > mean(model.coefficients[1])) {
      std::swap(model.coefficients[0], model.coefficients[1]);
    }
    const double w = weight(rng);
    model.mixing_proportions = {w, 1.0 - w};
    model.sigma = sd(rng);

    const double ll = log_likelihood(model, data);
    const double ll_ref = oracle::log_likelihood(
        times, scores, model.mixing_proportions, model.coefficients,
        model.sigma);
    worst = std::max(worst, relative(ll, ll_ref));

    const auto post = posterior_probabilities(model, data);
    const auto post_ref = oracle::posterior(
        times, scores, model.mixing_proportions, model.coefficients,
        model.sigma);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t k = 0; k < 2; ++k) {
        worst = std::max(worst, std::abs(post(i, k) - post_ref[i][k]));
      }
    }

    const std::size_t n_params = parameter_count(2, model.degree);
    worst = std::max(worst, relative(bic(ll, n_params, 5),
                                     oracle::bic(ll, n_params, 5)));
    worst = std::max(worst, relative(sabic(ll, n_params, 5),
                                     oracle::sabic(ll, n_params, 5)));

    const auto appa_ref = oracle::appa(post_ref);
    const bool any_empty =
        std::any_of(appa_ref.begin(), appa_ref.end(),
                    [](double v) { return std::isnan(v); });
    if (!any_empty) {
      const auto a = appa(post);
      for (std::size_t k = 0; k < 2; ++k) {
        worst = std::max(worst, std::abs(a.per_group[k] - appa_ref[k]));
      }
      worst = std::max(
          worst, std::abs(a.model_level -
                          std::min(appa_ref[0], appa_ref[1])));
    }
    worst = std::max(worst, std::abs(smallest_group_pct(post) -
                                     oracle::smallest_group_pct(post_ref)));
  }
  out.require(worst <= 1e-9, "worst deviation " + num(worst));
  if (out.pass) out.detail = "worst deviation " + num(worst, 3);
  return out;
}

// Shared by criteria 5 to 7.
struct DefaultRun {
  ScenarioSpec spec = default_scenario();
  SimulatedData sim = generate_dataset(spec);
  ScanResult scan = scan_models(sim.dataset, options());

  ScanOptions options() const {
    ScanOptions o;
    o.fit.seed = spec.seed;
    o.fit.n_starts = 10;
    return o;
  }
};

const DefaultRun& default_run() {
  static const DefaultRun run;
  return run;
}

Outcome default_scan() {
  Outcome out;
  const auto& run = default_run();
  const auto& scan = run.scan;
  const std::vector<std::size_t> expected{2, 3, 4, 5};
  std::string cands;
  for (auto k : scan.candidate_set) cands += std::to_string(k) + " ";
  out.require(scan.candidate_set == expected, "candidates " + cands);
  std::string bics;
  double min_appa = 1.0;
  double min_pct = 100.0;
  for (std::size_t i = 0; i < scan.rows.size(); ++i) {
    const auto& row = scan.rows[i];
    out.require(!row.failed, "K=" + std::to_string(row.groups) + " failed");
    if (row.failed || row.excluded_by_size_rule) continue;
    bics += num(row.bic, 7) + " ";
    min_appa = std::min(min_appa, row.appa_model);
    min_pct = std::min(min_pct, row.smallest_group_pct);
    if (i > 0 && row.groups <= 5) {
      out.require(row.bic < scan.rows[i - 1].bic,
                  "BIC not decreasing at K=" + std::to_string(row.groups));
    }
  }
  out.require(min_appa >= 0.95, "APPA " + num(min_appa));
  out.require(min_pct >= 5.0, "smallest group " + num(min_pct));
  if (out.pass) {
    out.detail = "candidates " + cands + "| BIC " + bics + "| min APPA " +
                 num(min_appa, 4) + ", min group " + num(min_pct, 3) + "%";
  }
  return out;
}

// Fitted group nearest (sum of squared differences on the grid) to each
// generating curve.
std::vector<std::size_t> match_groups(const FittedModel& model,
                                      const ScenarioSpec& spec) {
  std::vector<std::size_t> match;
  for (const auto& g : spec.groups) {
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t k = 0; k < model.groups(); ++k) {
      double d = 0.0;
      for (double t : model.grid.times()) {
        const double diff =
            oracle::poly(model.coefficients[k], t) - g.mean_curve(t);
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    match.push_back(best);
  }
  return match;
}

struct LowPair {
  std::size_t a = 0;
  std::size_t b = 0;
  bool bijective = false;
};

LowPair low_pair(const FittedModel& model, const ScenarioSpec& spec) {
  auto match = match_groups(model, spec);
  LowPair p;
  p.a = std::min(match[kDefaultLowPair.first], match[kDefaultLowPair.second]);
  p.b = std::max(match[kDefaultLowPair.first], match[kDefaultLowPair.second]);
  std::sort(match.begin(), match.end());
  p.bijective = std::adjacent_find(match.begin(), match.end()) == match.end();
  return p;
}

Outcome low_pair_distribution() {
  Outcome out;
  const auto& run = default_run();
  const auto* fit = run.scan.fit_for(5);
  out.require(fit != nullptr, "no 5-group fit");
  if (!fit) return out;
  const auto start = std::chrono::steady_clock::now();
  const auto pair = low_pair(fit->model, run.spec);
  out.require(pair.bijective, "fitted groups do not match generating curves");
  const auto dist = pairwise_distributions(fit->model);
  out.require(dist.pairs.size() == 10, "pair count");
  const PairDistribution* low = nullptr;
  double other_mean = INFINITY;
  double other_sd = INFINITY;
  for (const auto& p : dist.pairs) {
    if (p.group_a == pair.a && p.group_b == pair.b) {
      low = &p;
    } else {
      other_mean = std::min(other_mean, p.mean);
      other_sd = std::min(other_sd, p.sd);
    }
  }
  out.require(low != nullptr, "low pair missing");
  if (!low) return out;
  out.require(low->mean < other_mean, "mean " + num(low->mean) +
                                          " not below " + num(other_mean));
  out.require(low->sd < other_sd,
              "sd " + num(low->sd) + " not below " + num(other_sd));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  out.require(seconds < 10.0, "post-fit time " + num(seconds));
  if (out.pass) {
    out.detail = "pair G" + std::to_string(pair.a + 1) + "-G" +
                 std::to_string(pair.b + 1) + " mean " + num(low->mean, 4) +
                 " (next " + num(other_mean, 4) + "), sd " + num(low->sd, 3) +
                 " (next " + num(other_sd, 3) + ")";
  }
  return out;
}

Outcome low_pair_magnitude() {
  Outcome out;
  const auto& run = default_run();
  const auto* fit = run.scan.fit_for(5);
  out.require(fit != nullptr, "no 5-group fit");
  if (!fit) return out;
  const auto pair = low_pair(fit->model, run.spec);
  const auto& ga = run.spec.groups[kDefaultLowPair.first].mean_curve;
  const auto& gb = run.spec.groups[kDefaultLowPair.second].mean_curve;
  const double analytic = oracle::abs_integral(
      oracle::difference(ga.coefficients, gb.coefficients),
      run.spec.grid.front(), run.spec.grid.back());
  const double total = group_pair_abt(fit->model, pair.a, pair.b).total;
  const double ratio = total / analytic;
  out.require(ratio >= 0.5 && ratio <= 1.5,
              "total " + num(total) + " vs analytic " + num(analytic));
  if (out.pass) {
    out.detail = "total " + num(total, 5) + " vs analytic " +
                 num(analytic, 5) + " (ratio " + num(ratio, 4) + ")";
  }
  return out;
}

Outcome determinism() {
  Outcome out;
  const auto root = fs::temp_directory_path() /
                    ("trajarea_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::vector<fs::path> dirs;
  for (unsigned threads : {1u, 4u}) {
    const auto dir = root / ("threads_" + std::to_string(threads));
    fs::create_directories(dir);
    PipelineConfig config;
    config.out_dir = dir;
    config.seed = 1;
    config.scan.fit.threads = threads;
    run_pipeline(config);
    dirs.push_back(dir);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    const auto name = entry.path().filename();
    // Holds wall-clock timestamps.
    if (name == "run_metadata.json") continue;
    const auto other = dirs[1] / name;
    out.require(fs::exists(other), name.string() + " missing in second run");
    if (!fs::exists(other)) continue;
    out.require(fixtures::read_file(entry.path()) == fixtures::read_file(other),
                name.string() + " differs");
    ++compared;
  }
  std::size_t second = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dirs[1])) {
    ++second;
  }
  out.require(second == compared + 1, "file inventories differ");
  out.require(compared > 0, "no outputs");
  fs::remove_all(root);
  if (out.pass) {
    out.detail = std::to_string(compared) +
                 " files byte-identical across 1 and 4 threads";
  }
  return out;
}

}  // namespace

int main() {
  criterion(1, "quadrature exactness", 1.0, quadrature);
  criterion(2, "ABT algebra on 1000 random polynomial pairs", 5.0, abt_algebra);
  criterion(3, "EM recovery on two constant groups", 10.0, em_recovery);
  criterion(4, "oracle equivalence on N=5, K=2, 3 time points", 1.0,
            oracle_equivalence);
  criterion(5, "default scenario scan", 300.0, default_scan);
  criterion(6, "low pair has the narrowest ABT distribution", 300.0,
            low_pair_distribution);
  criterion(7, "low pair total ABT within 50% of analytic", 300.0,
            low_pair_magnitude);
  criterion(8, "pipeline determinism across thread counts", 600.0,
            determinism);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
