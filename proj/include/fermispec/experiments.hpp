#pragma once

#include <span>
#include <string>
#include <vector>

namespace fermispec {

/// One (N, h, cut) point of a sweep, holding the plotted quantities.
struct SweepRow {
  int n_sites = 0;
  double field = 0.0;
  int cut = 0;
  double entropy_bits = 0.0;
  double lambda[4] = {0, 0, 0, 0};
  double overlap[4] = {0, 0, 0, 0};
  double s[3] = {0, 0, 0};
  double nu_min = 1.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // sum of squared residuals
  std::string domain;
};

/// Ordinary least squares y = intercept + slope * x.
FitResult fit_linear(std::span<const double> x, std::span<const double> y,
                     std::string domain);

/// Worker cap for sweeps: FERMISPEC_THREADS when set, else hardware width.
int worker_count();

/// Full pipeline for one point; region is sites 1..cut.
SweepRow single_point(int n_sites, double field, int cut);

/// One row per h, computed concurrently, output in grid order.
std::vector<SweepRow> field_sweep(int n_sites, std::span<const double> h_grid,
                                  int cut);

struct ScalingResult {
  std::vector<SweepRow> rows;
  FitResult fit;  // S against log2(N)
};

/// Half-chain entropy against log2(N); slope estimates c/6.
ScalingResult scaling_run(std::span<const int> n_list, double field);

/// Least-squares fit of ln(lambda_n) against n over the `count` largest
/// weights. Throws std::runtime_error if a weight underflows to zero.
FitResult decay_fit(int n_sites, double field, int cut, int count);

struct ErrorGrowthRow {
  int n_sites = 0;
  double delta_o = 0.0;  // 1 - sum_{n<=chi_o} O_n
  double delta_s = 0.0;  // S - sum_{n<=chi_s} s_n
};

struct ErrorGrowthResult {
  std::vector<ErrorGrowthRow> rows;
  FitResult fit_overlap;  // over N > 100 only
  FitResult fit_entropy;
};

ErrorGrowthResult error_growth(std::span<const int> n_list, double field,
                               int chi_o, int chi_s);

}  // namespace fermispec
