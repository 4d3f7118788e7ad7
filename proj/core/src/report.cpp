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

#include "trajarea/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <unistd.h>

#include "trajarea/error.hpp"
#include "trajarea/model_io.hpp"

namespace trajarea {

std::string format_real(double value, int significant_digits) {
  if (std::isnan(value)) return "";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", significant_digits, value);
  return buffer;
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + path.parent_path().string() +
                    ": " + ec.message());
    }
  }
  auto temp = path;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + temp.string());
    out << contents;
    out.flush();
    if (!out) {
      std::filesystem::remove(temp, ec);
      throw IoError("write failed for " + temp.string());
    }
  }
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

namespace {

std::size_t widest_k(const ScanResult& scan) {
  std::size_t widest = 0;
  for (const auto& row : scan.rows) widest = std::max(widest, row.groups);
  return widest;
}

std::string status_of(const FitDiagnostics& row) {
  if (row.failed) return "failed";
  return row.excluded_by_size_rule ? "excluded" : "candidate";
}

std::string pair_label(const PairDistribution& pair) {
  return std::to_string(pair.group_a + 1) + "-" +
         std::to_string(pair.group_b + 1);
}

}  // namespace

std::string format_scan_csv(const ScanResult& scan) {
  const std::size_t widest = widest_k(scan);
  std::ostringstream out;
  out << "K,smallest_group_pct,bic,sabic,appa_model";
  for (std::size_t g = 1; g <= widest; ++g) out << ",appa_g" << g;
  out << ",excluded\n";
  for (const auto& row : scan.rows) {
    out << row.groups;
    if (row.failed) {
      out << ",,,,";
      for (std::size_t g = 0; g < widest; ++g) out << ',';
      out << ",failed\n";
      continue;
    }
    out << ',' << format_real(row.smallest_group_pct) << ','
        << format_real(row.bic) << ',' << format_real(row.sabic) << ','
        << format_real(row.appa_model);
    for (std::size_t g = 0; g < widest; ++g) {
      out << ',';
      if (g < row.appa_per_group.size()) {
        out << format_real(row.appa_per_group[g]);
      }
    }
    out << ',' << (row.excluded_by_size_rule ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string format_fit_indices_csv(const ScanResult& scan,
                                   int significant_digits) {
  const std::size_t widest = widest_k(scan);
  const auto num = [&](double v) { return format_real(v, significant_digits); };
  std::ostringstream out;
  out << "K,n_params,log_likelihood,smallest_group_pct,bic,sabic,appa_model";
  for (std::size_t g = 1; g <= widest; ++g) out << ",appa_g" << g;
  out << ",status\n";
  for (const auto& row : scan.rows) {
    out << row.groups << ',' << row.n_params;
    if (row.failed) {
      out << ",,,,,";
    } else {
      out << ',' << num(row.log_likelihood) << ','
          << num(row.smallest_group_pct) << ',' << num(row.bic) << ','
          << num(row.sabic) << ',' << num(row.appa_model);
    }
    for (std::size_t g = 0; g < widest; ++g) {
      out << ',';
      if (!row.failed && g < row.appa_per_group.size()) {
        out << num(row.appa_per_group[g]);
      }
    }
    out << ',' << status_of(row) << '\n';
  }
  return out.str();
}

std::string format_fit_indices_text(const ScanResult& scan) {
  std::ostringstream out;
  out << std::left << std::setw(4) << "K" << std::right << std::setw(12)
      << "smallest %" << std::setw(14) << "BIC" << std::setw(14) << "SABIC"
      << std::setw(10) << "APPA" << "  status\n";
  for (const auto& row : scan.rows) {
    out << std::left << std::setw(4) << row.groups << std::right;
    if (row.failed) {
      out << std::setw(12) << "-" << std::setw(14) << "-" << std::setw(14)
          << "-" << std::setw(10) << "-" << "  failed: " << row.failure
          << '\n';
      continue;
    }
    const auto appa_text = std::isnan(row.appa_model)
                               ? std::string("-")
                               : format_real(row.appa_model, 6);
    out << std::setw(12) << format_real(row.smallest_group_pct, 6)
        << std::setw(14) << format_real(row.bic, 6) << std::setw(14)
        << format_real(row.sabic, 6) << std::setw(10) << appa_text << "  "
        << status_of(row) << '\n';
  }
  if (scan.candidate_set.empty()) {
    out << "warning: no model satisfies the 5% minimum group size rule\n";
  } else if (scan.recommended_by_bic) {
    out << "lowest BIC among candidates: K = " << *scan.recommended_by_bic
        << '\n';
  }
  return out.str();
}

std::string format_curves_csv(const FittedModel& model, std::size_t points) {
  if (points < 2) throw InvalidArgument("curve sampling needs >= 2 points");
  const double t0 = model.grid.front();
  const double span = model.grid.back() - t0;
  std::ostringstream out;
  out << "group,t,value\n";
  for (std::size_t g = 0; g < model.groups(); ++g) {
    const Polynomial curve = model.trajectory(g);
    for (std::size_t j = 0; j < points; ++j) {
      const double t =
          j + 1 == points
              ? model.grid.back()
              : t0 + span * (static_cast<double>(j) /
                             static_cast<double>(points - 1));
      out << g + 1 << ',' << format_real(t) << ',' << format_real(curve(t))
          << '\n';
    }
  }
  return out.str();
}

std::string format_abt_csv(const AbtResult& result) {
  std::ostringstream out;
  out << "interval_start,interval_end,area\n";
  for (std::size_t i = 0; i < result.interval_areas.size(); ++i) {
    out << format_real(result.grid[i]) << ',' << format_real(result.grid[i + 1])
        << ',' << format_real(result.interval_areas[i]) << '\n';
  }
  out << "total,," << format_real(result.total) << '\n';
  return out.str();
}

std::string format_distribution_csv(const AbtDistribution& dist) {
  std::ostringstream out;
  out << "pair,interval,area\n";
  for (const auto& pair : dist.pairs) {
    for (std::size_t i = 0; i < pair.values.size(); ++i) {
      out << pair_label(pair) << ',' << i + 1 << ','
          << format_real(pair.values[i]) << '\n';
    }
  }
  return out.str();
}

std::string format_distribution_summary_csv(const AbtDistribution& dist) {
  std::ostringstream out;
  out << "pair,mean,sd,min,max\n";
  for (const auto& pair : dist.pairs) {
    out << pair_label(pair) << ',' << format_real(pair.mean) << ','
        << format_real(pair.sd) << ',' << format_real(pair.min) << ','
        << format_real(pair.max) << '\n';
  }
  return out.str();
}

std::string format_histogram_csv(const AbtDistribution& dist) {
  std::ostringstream out;
  out << "pair,bin,lower,upper,count\n";
  for (const auto& pair : dist.pairs) {
    for (std::size_t b = 0; b < pair.counts.size(); ++b) {
      out << pair_label(pair) << ',' << b + 1 << ','
          << format_real(dist.bin_edges[b]) << ','
          << format_real(dist.bin_edges[b + 1]) << ',' << pair.counts[b]
          << '\n';
    }
  }
  return out.str();
}

std::string format_individual_abt_csv(const LongitudinalDataset& data,
                                     const FitResult& fit,
                                     std::size_t segments) {
  std::ostringstream out;
  out << "id,group,total\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t g = fit.posterior.modal()[i];
    const auto abt =
        individual_to_group_abt(data, data[i].id, fit.model, g, segments);
    out << data[i].id << ',' << g + 1 << ',' << format_real(abt.total) << '\n';
  }
  return out.str();
}

ReportBundle write_report(const LongitudinalDataset& data,
                          const ScanResult& scan,
                          const ReportOptions& options) {
  ReportBundle bundle;
  bundle.has_candidates = !scan.candidate_set.empty();
  const auto emit = [&](const std::string& name, const std::string& text) {
    const auto path = options.out_dir / name;
    atomic_write(path, text);
    bundle.files.push_back(path);
  };

  // Render everything first so a formatting error leaves no files behind.
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("scan.csv", format_scan_csv(scan));
  files.emplace_back("fit_indices.csv", format_fit_indices_csv(scan, 6));
  files.emplace_back("fit_indices_raw.csv", format_fit_indices_csv(scan, 17));
  files.emplace_back("fit_indices.txt", format_fit_indices_text(scan));
  for (std::size_t k : scan.candidate_set) {
    const FitResult* fit = scan.fit_for(k);
    if (fit == nullptr) continue;
    const std::string tag = "_K" + std::to_string(k);
    files.emplace_back("model" + tag + ".json", format_model(fit->model));
    files.emplace_back("curves" + tag + ".csv",
                       format_curves_csv(fit->model, options.curve_points));
    files.emplace_back("abt_individuals" + tag + ".csv",
                       format_individual_abt_csv(data, *fit,
                                                 options.segments));
    if (fit->model.groups() < 2) continue;
    const auto dist = pairwise_distributions(fit->model, options.segments);
    files.emplace_back("abt_intervals" + tag + ".csv",
                       format_distribution_csv(dist));
    files.emplace_back("abt_summary" + tag + ".csv",
                       format_distribution_summary_csv(dist));
    files.emplace_back("abt_histogram" + tag + ".csv",
                       format_histogram_csv(dist));
  }
  for (const auto& [name, text] : files) emit(name, text);
  return bundle;
}

}  // namespace trajarea
