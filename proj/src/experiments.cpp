#include "fermispec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fermispec/csv.hpp"
#include "fermispec/freefermion.hpp"
#include "fermispec/model.hpp"
#include "fermispec/spectrum.hpp"

namespace fermispec {

namespace {

// Runs body(0..count-1) on the worker pool; per-index exceptions are
// captured so every row either completes or reports its own failure.
std::vector<std::exception_ptr> run_indexed(
    int count, const std::function<void(int)>& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto guarded = [&](int i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) guarded(i);
    return errors;
  }
  std::atomic<int> cursor{0};
  const auto drain = [&] {
    while (true) {
      const int i = cursor.fetch_add(1);
      if (i >= count) break;
      guarded(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 0; w + 1 < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto& t : pool) t.join();
  return errors;
}

// Rethrows the first failure in input order, prefixing the offending point
// while keeping the exception type (validation stays validation).
void rethrow_first(const std::vector<std::exception_ptr>& errors,
                   const std::function<std::string(int)>& describe) {
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    const std::string label = describe(static_cast<int>(i));
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(label + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(label + ": " + e.what());
    }
  }
}

EntanglementSpectrum edge_region_modes(int n_sites, double field, int cut) {
  const ChainSpec spec{n_sites, field};
  validate(spec);
  if (cut < 1 || cut >= n_sites) {
    throw std::invalid_argument("cut must satisfy 1 <= cut < n_sites");
  }
  const auto ham = build_majorana_hamiltonian(spec);
  const auto gs = ground_state_correlation(ham);
  const auto reduced = reduce(gs.correlation, SiteRange{1, cut});
  return canonical_form(reduced);
}

}  // namespace

FitResult fit_linear(std::span<const double> x, std::span<const double> y,
                     std::string domain) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("x and y must have equal length");
  }
  const size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit needs at least two points");
  double xm = 0.0, ym = 0.0;
  for (size_t i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (sxx <= 0.0) throw std::invalid_argument("x values are degenerate");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  fit.domain = std::move(domain);
  double ssr = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  fit.residual = ssr;
  return fit;
}

int worker_count() {
  if (const char* env = std::getenv("FERMISPEC_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 1 && parsed <= 256) {
      return static_cast<int>(parsed);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SweepRow single_point(int n_sites, double field, int cut) {
  const auto modes = edge_region_modes(n_sites, field, cut);
  SweepRow row;
  row.n_sites = n_sites;
  row.field = field;
  row.cut = cut;
  row.entropy_bits = entropy(modes);
  const auto top = top_k_weights(modes, 4);
  const auto contribs = entropy_contributions(top, 3);
  for (int i = 0; i < 4; ++i) {
    row.lambda[i] = i < static_cast<int>(top.size()) ? top[i].weight : 0.0;
    row.overlap[i] = std::sqrt(row.lambda[i]);
  }
  for (int i = 0; i < 3; ++i) {
    row.s[i] = i < static_cast<int>(contribs.size()) ? contribs[i] : 0.0;
  }
  row.nu_min = modes.nus.front();
  return row;
}

std::vector<SweepRow> field_sweep(int n_sites, std::span<const double> h_grid,
                                  int cut) {
  if (h_grid.empty()) throw std::invalid_argument("field grid must be nonempty");
  for (size_t i = 1; i < h_grid.size(); ++i) {
    if (!(h_grid[i] > h_grid[i - 1])) {
      throw std::invalid_argument("field grid must be strictly ascending");
    }
  }
  std::vector<SweepRow> rows(h_grid.size());
  const auto errors = run_indexed(
      static_cast<int>(h_grid.size()),
      [&](int i) { rows[i] = single_point(n_sites, h_grid[i], cut); });
  rethrow_first(errors,
                [&](int i) { return "h=" + format_double(h_grid[i]); });
  return rows;
}

ScalingResult scaling_run(std::span<const int> n_list, double field) {
  if (n_list.empty()) throw std::invalid_argument("size list must be nonempty");
  for (int n : n_list) {
    if (n < 8 || n % 2 != 0) {
      throw std::invalid_argument(
          "scaling sizes must be even and at least 8, got " +
          std::to_string(n));
    }
  }
  ScalingResult result;
  result.rows.resize(n_list.size());
  const auto errors = run_indexed(
      static_cast<int>(n_list.size()), [&](int i) {
        result.rows[i] = single_point(n_list[i], field, n_list[i] / 2);
      });
  rethrow_first(errors,
                [&](int i) { return "n_sites=" + std::to_string(n_list[i]); });
  std::vector<double> x, y;
  x.reserve(n_list.size());
  y.reserve(n_list.size());
  for (const auto& row : result.rows) {
    x.push_back(std::log2(static_cast<double>(row.n_sites)));
    y.push_back(row.entropy_bits);
  }
  result.fit = fit_linear(x, y, "entropy_bits vs log2(n_sites)");
  return result;
}

FitResult decay_fit(int n_sites, double field, int cut, int count) {
  if (count < 2) throw std::invalid_argument("decay fit needs at least two terms");
  const auto modes = edge_region_modes(n_sites, field, cut);
  const auto top = top_k_weights(modes, count);
  if (static_cast<int>(top.size()) < count) {
    throw std::runtime_error("fewer than " + std::to_string(count) +
                             " nonzero weights available");
  }
  std::vector<double> x, y;
  x.reserve(count);
  y.reserve(count);
  for (int i = 0; i < count; ++i) {
    if (top[i].weight <= 0.0) {
      throw std::runtime_error("weight " + std::to_string(i + 1) +
                               " underflowed to zero");
    }
    x.push_back(static_cast<double>(i + 1));
    y.push_back(std::log(top[i].weight));
  }
  return fit_linear(x, y, "ln lambda_n vs n");
}

ErrorGrowthResult error_growth(std::span<const int> n_list, double field,
                               int chi_o, int chi_s) {
  if (n_list.empty()) throw std::invalid_argument("size list must be nonempty");
  if (chi_o < 1 || chi_s < 1) {
    throw std::invalid_argument("truncation ranks must be positive");
  }
  int beyond = 0;
  for (int n : n_list) {
    if (n > 100) ++beyond;
  }
  if (beyond < 2) {
    throw std::invalid_argument(
        "size list must contain at least two entries above 100");
  }
  ErrorGrowthResult result;
  result.rows.resize(n_list.size());
  const int k = std::max(chi_o, chi_s);
  const auto errors = run_indexed(
      static_cast<int>(n_list.size()), [&](int i) {
        const int n = n_list[i];
        const auto modes = edge_region_modes(n, field, n / 2);
        const auto top = top_k_weights(modes, k);
        double overlap_sum = 0.0;
        for (int j = 0; j < chi_o && j < static_cast<int>(top.size()); ++j) {
          overlap_sum += std::sqrt(top[j].weight);
        }
        const auto contribs = entropy_contributions(top, chi_s);
        double entropy_sum = 0.0;
        for (double s : contribs) entropy_sum += s;
        result.rows[i] = ErrorGrowthRow{n, 1.0 - overlap_sum,
                                        entropy(modes) - entropy_sum};
      });
  rethrow_first(errors,
                [&](int i) { return "n_sites=" + std::to_string(n_list[i]); });
  std::vector<double> x, yo, ys;
  for (const auto& row : result.rows) {
    if (row.n_sites <= 100) continue;
    x.push_back(static_cast<double>(row.n_sites));
    yo.push_back(row.delta_o);
    ys.push_back(row.delta_s);
  }
  result.fit_overlap = fit_linear(x, yo, "delta_o vs n_sites beyond 100");
  result.fit_entropy = fit_linear(x, ys, "delta_s vs n_sites beyond 100");
  return result;
}

}  // namespace fermispec
