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

#include "trajarea/gbtm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <thread>

#include <Eigen/Dense>

#include "trajarea/error.hpp"
#include "trajarea/rng.hpp"

namespace trajarea {
namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;  // log(sqrt(2 pi))
// A group whose responsibilities sum below this has collapsed.
constexpr double kMinGroupWeight = 1e-8;

void require_degree(int degree) {
  if (degree < 0 || degree > kMaxDegree) {
    throw InvalidArgument("polynomial degree must be in [0, 3], got " +
                          std::to_string(degree));
  }
}

void require_same_grid(const FittedModel& model,
                       const LongitudinalDataset& data) {
  if (!(model.grid == data.grid())) {
    throw GridMismatchError("model grid differs from dataset grid");
  }
}

/// Group means on the grid, K x T row-major.
std::vector<double> group_means(const TimeGrid& grid,
                                const std::vector<std::vector<double>>& coef) {
  std::vector<double> means(coef.size() * grid.size());
  for (std::size_t k = 0; k < coef.size(); ++k) {
    const Polynomial curve{coef[k]};
    for (std::size_t t = 0; t < grid.size(); ++t) {
      means[k * grid.size() + t] = curve(grid[t]);
    }
  }
  return means;
}

/// Fills `log_joint` (N x K) with log pi_k + sum_t log N(y_it; mu_kt, sigma)
/// and returns per-individual log-sum-exp in `row_ll`.
void log_joint_matrix(const LongitudinalDataset& data,
                      std::span<const double> log_pi,
                      std::span<const double> means, double sigma,
                      std::vector<double>& log_joint,
                      std::vector<double>& row_ll) {
  const std::size_t n = data.size();
  const std::size_t groups = log_pi.size();
  const std::size_t times = data.grid().size();
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  const double norm =
      -static_cast<double>(times) * (kLogSqrtTwoPi + std::log(sigma));
  log_joint.assign(n * groups, 0.0);
  row_ll.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& y = data[i].scores;
    double* row = log_joint.data() + i * groups;
    double row_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < groups; ++k) {
      double ss = 0.0;
      const double* mu = means.data() + k * times;
      for (std::size_t t = 0; t < times; ++t) {
        const double r = y[t] - mu[t];
        ss += r * r;
      }
      row[k] = log_pi[k] + norm - ss * inv_two_var;
      row_max = std::max(row_max, row[k]);
    }
    if (!std::isfinite(row_max)) {
      row_ll[i] = row_max;
      continue;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < groups; ++k) acc += std::exp(row[k] - row_max);
    row_ll[i] = row_max + std::log(acc);
  }
}

std::vector<double> log_weights(const std::vector<double>& pi) {
  std::vector<double> out(pi.size());
  std::transform(pi.begin(), pi.end(), out.begin(),
                 [](double p) { return std::log(p); });
  return out;
}

/// Reorders groups by ascending grid mean (stable).
void relabel(FittedModel& model) {
  std::vector<std::size_t> order(model.groups());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> level(model.groups());
  for (std::size_t k = 0; k < level.size(); ++k) level[k] = model.grid_mean(k);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return level[a] < level[b];
  });
  std::vector<double> pi(order.size());
  std::vector<std::vector<double>> coef(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    pi[k] = model.mixing_proportions[order[k]];
    coef[k] = std::move(model.coefficients[order[k]]);
  }
  model.mixing_proportions = std::move(pi);
  model.coefficients = std::move(coef);
}

/// Precomputed least-squares operator for the fixed within-person design.
struct Design {
  Eigen::MatrixXd solver;  // (X^T X)^{-1} X^T, p x T
  bool full_rank = false;
};

Design make_design(const TimeGrid& grid, int degree) {
  const auto times = static_cast<Eigen::Index>(grid.size());
  const Eigen::Index p = degree + 1;
  Eigen::MatrixXd x(times, p);
  for (Eigen::Index t = 0; t < times; ++t) {
    const auto row = design_row(grid[static_cast<std::size_t>(t)], degree);
    for (Eigen::Index j = 0; j < p; ++j) {
      x(t, j) = row[static_cast<std::size_t>(j)];
    }
  }
  Design design;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  design.full_rank = qr.rank() == p;
  if (design.full_rank) {
    design.solver = qr.solve(Eigen::MatrixXd::Identity(times, times));
  }
  return design;
}

/// One EM run. `resp` is N x K row-major and is overwritten.
SingleFit run_em(const LongitudinalDataset& data, std::size_t groups,
                 int degree, const FitConfig& config, const Design& design,
                 std::vector<double> resp) {
  const std::size_t n = data.size();
  const std::size_t times = data.grid().size();
  const auto p = static_cast<std::size_t>(degree + 1);

  SingleFit out;
  StartReport& report = out.report;

  std::vector<double> pi(groups);
  std::vector<std::vector<double>> coef(groups, std::vector<double>(p));
  std::vector<double> means;
  std::vector<double> log_joint;
  std::vector<double> row_ll;
  double sigma = 1.0;
  double previous = -std::numeric_limits<double>::infinity();
  const double floor_var = config.sigma_floor * config.sigma_floor;

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    // M-step. The stacked weighted normal equations
    //   (sum_i r_ik X'X) b = X' sum_i r_ik y_i
    // reduce to b = (X'X)^{-1} X' ybar_k because every individual shares X.
    for (std::size_t k = 0; k < groups; ++k) {
      double weight = 0.0;
      Eigen::VectorXd weighted_sum = Eigen::VectorXd::Zero(
          static_cast<Eigen::Index>(times));
      for (std::size_t i = 0; i < n; ++i) {
        const double r = resp[i * groups + k];
        weight += r;
        const auto& y = data[i].scores;
        for (std::size_t t = 0; t < times; ++t) {
          weighted_sum[static_cast<Eigen::Index>(t)] += r * y[t];
        }
      }
      if (!(weight >= kMinGroupWeight)) {
        report.failed = true;
        report.failure = "group " + std::to_string(k + 1) +
                         " collapsed (weighted design is rank-deficient)";
        report.iterations = iter;
        return out;
      }
      pi[k] = weight / static_cast<double>(n);
      const Eigen::VectorXd beta = design.solver * (weighted_sum / weight);
      for (std::size_t j = 0; j < p; ++j) {
        coef[k][j] = beta[static_cast<Eigen::Index>(j)];
      }
    }
    means = group_means(data.grid(), coef);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& y = data[i].scores;
      for (std::size_t k = 0; k < groups; ++k) {
        const double r = resp[i * groups + k];
        if (r == 0.0) continue;
        const double* mu = means.data() + k * times;
        double ss = 0.0;
        for (std::size_t t = 0; t < times; ++t) {
          const double e = y[t] - mu[t];
          ss += e * e;
        }
        rss += r * ss;
      }
    }
    const double var = std::max(rss / static_cast<double>(n * times),
                                floor_var);
    sigma = std::sqrt(var);

    // E-step.
    const auto log_pi = log_weights(pi);
    log_joint_matrix(data, log_pi, means, sigma, log_joint, row_ll);
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ll += row_ll[i];
      for (std::size_t k = 0; k < groups; ++k) {
        resp[i * groups + k] = std::exp(log_joint[i * groups + k] - row_ll[i]);
      }
    }
    if (!std::isfinite(ll)) {
      report.failed = true;
      report.failure = "log-likelihood is not finite";
      report.iterations = iter;
      return out;
    }
    report.trace.push_back(ll);
    report.iterations = iter;
    report.log_likelihood = ll;
    if (std::isfinite(previous) &&
        ll - previous < config.rel_tol * std::abs(previous)) {
      report.converged = true;
      break;
    }
    previous = ll;
  }

  FittedModel& model = out.model;
  model.grid = data.grid();
  model.degree = degree;
  model.mixing_proportions = std::move(pi);
  model.coefficients = std::move(coef);
  model.sigma = sigma;
  model.n_individuals = n;
  model.converged = report.converged;
  model.iterations = report.iterations;
  model.seed = config.seed;
  relabel(model);
  model.log_likelihood = log_likelihood(model, data);
  return out;
}

std::vector<double> random_responsibilities(std::size_t n, std::size_t groups,
                                            Engine engine) {
  std::exponential_distribution<double> draw(1.0);
  std::vector<double> resp(n * groups);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < groups; ++k) {
      resp[i * groups + k] = draw(engine);
      total += resp[i * groups + k];
    }
    for (std::size_t k = 0; k < groups; ++k) resp[i * groups + k] /= total;
  }
  return resp;
}

void check_fit_inputs(const LongitudinalDataset& data, std::size_t groups,
                      int degree, const FitConfig& config) {
  require_degree(degree);
  config.validate();
  if (groups < 1) throw FitPreconditionError("number of groups must be >= 1");
  if (data.size() <= groups) {
    throw FitPreconditionError(
        "need more individuals than groups (N = " +
        std::to_string(data.size()) + ", K = " + std::to_string(groups) + ")");
  }
}

}  // namespace

std::vector<double> design_row(double t, int degree) {
  require_degree(degree);
  std::vector<double> row(static_cast<std::size_t>(degree + 1));
  double power = 1.0;
  for (auto& x : row) {
    x = power;
    power *= t;
  }
  return row;
}

Polynomial FittedModel::trajectory(std::size_t group) const {
  if (group >= groups()) {
    throw InvalidArgument("group index " + std::to_string(group + 1) +
                          " out of range (K = " + std::to_string(groups()) +
                          ")");
  }
  return Polynomial{coefficients[group]};
}

double FittedModel::grid_mean(std::size_t group) const {
  const Polynomial curve = trajectory(group);
  double sum = 0.0;
  for (double t : grid.times()) sum += curve(t);
  return sum / static_cast<double>(grid.size());
}

void FittedModel::validate() const {
  if (degree < 0 || degree > kMaxDegree) {
    throw SchemaError("model degree must be in [0, 3]");
  }
  if (mixing_proportions.empty()) throw SchemaError("model has no groups");
  if (coefficients.size() != mixing_proportions.size()) {
    throw SchemaError("model needs one coefficient vector per group");
  }
  double total = 0.0;
  for (double p : mixing_proportions) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw SchemaError("mixing proportions must be positive");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw SchemaError("mixing proportions must sum to 1");
  }
  for (const auto& c : coefficients) {
    if (c.size() != static_cast<std::size_t>(degree + 1)) {
      throw SchemaError("coefficient vector length must be degree + 1");
    }
    for (double v : c) {
      if (!std::isfinite(v)) throw SchemaError("non-finite coefficient");
    }
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw SchemaError("sigma must be positive and finite");
  }
  if (!std::isfinite(log_likelihood)) {
    throw SchemaError("log_likelihood must be finite");
  }
  for (std::size_t k = 1; k < groups(); ++k) {
    if (grid_mean(k) < grid_mean(k - 1)) {
      throw SchemaError("groups must be ordered by ascending grid mean");
    }
  }
}

PosteriorMatrix::PosteriorMatrix(std::vector<std::string> ids,
                                 std::size_t groups, std::vector<double> probs)
    : ids_(std::move(ids)), groups_(groups), probs_(std::move(probs)) {
  if (groups_ == 0 || probs_.size() != ids_.size() * groups_) {
    throw InvalidArgument("posterior matrix shape mismatch");
  }
  modal_.resize(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < groups_; ++k) {
      if (probs_[i * groups_ + k] > probs_[i * groups_ + best]) best = k;
    }
    modal_[i] = best;
  }
}

void FitConfig::validate() const {
  if (n_starts < 1) throw InvalidArgument("n_starts must be >= 1");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  if (!(rel_tol > 0.0)) throw InvalidArgument("rel_tol must be > 0");
  if (!(sigma_floor > 0.0)) throw InvalidArgument("sigma_floor must be > 0");
}

double log_likelihood(const FittedModel& model,
                      const LongitudinalDataset& data) {
  require_same_grid(model, data);
  const auto means = group_means(model.grid, model.coefficients);
  std::vector<double> log_joint;
  std::vector<double> row_ll;
  log_joint_matrix(data, log_weights(model.mixing_proportions), means,
                   model.sigma, log_joint, row_ll);
  return std::accumulate(row_ll.begin(), row_ll.end(), 0.0);
}

PosteriorMatrix posterior_probabilities(const FittedModel& model,
                                        const LongitudinalDataset& data) {
  require_same_grid(model, data);
  const std::size_t groups = model.groups();
  const auto means = group_means(model.grid, model.coefficients);
  std::vector<double> log_joint;
  std::vector<double> row_ll;
  log_joint_matrix(data, log_weights(model.mixing_proportions), means,
                   model.sigma, log_joint, row_ll);
  std::vector<std::string> ids;
  ids.reserve(data.size());
  std::vector<double> probs(data.size() * groups);
  for (std::size_t i = 0; i < data.size(); ++i) {
    ids.push_back(data[i].id);
    const double* row = log_joint.data() + i * groups;
    double max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < groups; ++k) max = std::max(max, row[k]);
    double total = 0.0;
    for (std::size_t k = 0; k < groups; ++k) {
      probs[i * groups + k] = std::exp(row[k] - max);
      total += probs[i * groups + k];
    }
    for (std::size_t k = 0; k < groups; ++k) probs[i * groups + k] /= total;
  }
  return PosteriorMatrix(std::move(ids), groups, std::move(probs));
}

SingleFit fit_from_responsibilities(const LongitudinalDataset& data,
                                    std::size_t groups, int degree,
                                    const FitConfig& config,
                                    std::vector<double> responsibilities) {
  check_fit_inputs(data, groups, degree, config);
  if (responsibilities.size() != data.size() * groups) {
    throw InvalidArgument("initial responsibilities must be N x K");
  }
  const Design design = make_design(data.grid(), degree);
  if (!design.full_rank) {
    SingleFit out;
    out.report.failed = true;
    out.report.failure = "design matrix is rank-deficient for this grid";
    return out;
  }
  return run_em(data, groups, degree, config, design,
                std::move(responsibilities));
}

FitResult fit_em(const LongitudinalDataset& data, std::size_t groups,
                 int degree, const FitConfig& config) {
  check_fit_inputs(data, groups, degree, config);
  const Design design = make_design(data.grid(), degree);
  if (!design.full_rank) {
    throw DegenerateFitError("degenerate fit: " +
                             std::to_string(data.grid().size()) +
                             " time points cannot identify a degree-" +
                             std::to_string(degree) + " polynomial");
  }

  const auto starts = static_cast<std::size_t>(config.n_starts);
  std::vector<SingleFit> runs(starts);
  const auto run_start = [&](std::size_t s) {
    auto resp = random_responsibilities(data.size(), groups,
                                        make_stream(config.seed, s));
    runs[s] = run_em(data, groups, degree, config, design, std::move(resp));
  };

  unsigned workers = config.threads == 0 ? std::thread::hardware_concurrency()
                                         : config.threads;
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(starts));
  if (workers == 1) {
    for (std::size_t s = 0; s < starts; ++s) run_start(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t s = next++; s < starts; s = next++) run_start(s);
      });
    }
  }

  std::optional<std::size_t> best;
  for (std::size_t s = 0; s < starts; ++s) {
    if (runs[s].report.failed) continue;
    if (!best || runs[s].model.log_likelihood >
                     runs[*best].model.log_likelihood) {
      best = s;
    }
  }
  if (!best) {
    throw DegenerateFitError("degenerate fit: all " + std::to_string(starts) +
                             " starts collapsed (K = " +
                             std::to_string(groups) + ")");
  }

  FitResult result{runs[*best].model,
                   posterior_probabilities(runs[*best].model, data),
                   {},
                   *best};
  result.starts.reserve(starts);
  for (auto& run : runs) result.starts.push_back(std::move(run.report));
  return result;
}

}  // namespace trajarea
