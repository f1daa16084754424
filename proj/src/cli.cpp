#include "fermispec/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fermispec/csv.hpp"
#include "fermispec/experiments.hpp"
#include "fermispec/freefermion.hpp"
#include "fermispec/model.hpp"
#include "fermispec/oracle.hpp"
#include "fermispec/spectrum.hpp"

namespace fermispec {

namespace {

constexpr double kChiEffDelta = 1e-4;

const char* kSweepHeader =
    "n_sites,field,cut,entropy_bits,"
    "lambda_1,lambda_2,lambda_3,lambda_4,"
    "overlap_1,overlap_2,overlap_3,overlap_4,"
    "s_1,s_2,s_3,nu_min";

std::string sweep_line(const SweepRow& row) {
  std::string line = std::to_string(row.n_sites) + ',' +
                     format_double(row.field) + ',' + std::to_string(row.cut) +
                     ',' + format_double(row.entropy_bits);
  for (double v : row.lambda) line += ',' + format_double(v);
  for (double v : row.overlap) line += ',' + format_double(v);
  for (double v : row.s) line += ',' + format_double(v);
  line += ',' + format_double(row.nu_min);
  return line;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string text = std::string(kSweepHeader) + '\n';
  for (const auto& row : rows) text += sweep_line(row) + '\n';
  return text;
}

std::string fit_csv(const FitResult& fit) {
  return "slope,intercept,residual,domain\n" + format_double(fit.slope) + ',' +
         format_double(fit.intercept) + ',' + format_double(fit.residual) +
         ',' + fit.domain + '\n';
}

std::string fit_summary(const FitResult& fit) {
  return "fit " + fit.domain + ": slope=" + format_double(fit.slope) +
         " intercept=" + format_double(fit.intercept) +
         " residual=" + format_double(fit.residual);
}

std::vector<double> make_grid(double lo, double hi, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
  if (!(hi >= lo)) throw std::invalid_argument("h-max must not be below h-min");
  std::vector<double> grid;
  grid.reserve(steps);
  if (steps == 1) {
    grid.push_back(lo);
    return grid;
  }
  for (int i = 0; i < steps; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) /
                            static_cast<double>(steps - 1));
  }
  return grid;
}

int effective_cut(const RunConfig& config) {
  return config.cut > 0 ? config.cut : config.n_sites / 2;
}

std::filesystem::path output_path(const RunConfig& config,
                                  const std::string& fallback) {
  return config.output.empty() ? std::filesystem::path(fallback)
                               : std::filesystem::path(config.output);
}

void write_outputs(const std::filesystem::path& csv_path,
                   const std::string& csv_text, bool emit_plot,
                   const std::string& plot_lines) {
  write_text_atomic(csv_path, csv_text);
  std::cout << "wrote " << csv_path.string() << '\n';
  if (!emit_plot) return;
  std::filesystem::path plot_path = csv_path;
  plot_path.replace_extension(".gp");
  const std::string script = "set datafile separator ','\n" + plot_lines;
  write_text_atomic(plot_path, script);
  std::cout << "wrote " << plot_path.string() << '\n';
}

EntanglementSpectrum region_modes(int n_sites, double field, int cut) {
  const ChainSpec spec{n_sites, field};
  validate(spec);
  if (cut < 1 || cut >= n_sites) {
    throw std::invalid_argument("cut must satisfy 1 <= cut < n_sites");
  }
  const auto ham = build_majorana_hamiltonian(spec);
  const auto gs = ground_state_correlation(ham);
  return canonical_form(reduce(gs.correlation, SiteRange{1, cut}));
}

int run_sweep_field(const RunConfig& config) {
  const auto grid = make_grid(config.h_min, config.h_max, config.steps);
  const auto rows = field_sweep(config.n_sites, grid, effective_cut(config));
  const auto path = output_path(config, "sweep-field.csv");
  const std::string plot =
      "set xlabel 'field'\nset ylabel 'entropy (bits)'\n"
      "plot '" + path.filename().string() +
      "' using 2:4 with linespoints title 'entropy_bits'\n";
  write_outputs(path, sweep_csv(rows), config.emit_plot, plot);
  return 0;
}

int run_spectrum(const RunConfig& config) {
  const int cut = effective_cut(config);
  const auto modes = region_modes(config.n_sites, config.field, cut);
  const auto summary =
      summarize(modes, config.top_k, config.chi_prime, kChiEffDelta);
  std::string text = "n,lambda_n,s_n,overlap_n\n";
  for (size_t i = 0; i < summary.top_terms.size(); ++i) {
    text += std::to_string(i + 1) + ',' +
            format_double(summary.top_terms[i].weight) + ',' +
            format_double(summary.entropy_contribs[i]) + ',' +
            format_double(summary.overlaps[i]) + '\n';
  }
  const auto path = output_path(config, "spectrum.csv");
  const std::string plot =
      "set logscale y\nset xlabel 'n'\n"
      "plot '" + path.filename().string() +
      "' using 1:2 with linespoints title 'lambda_n'\n";
  write_outputs(path, text, config.emit_plot, plot);
  std::cout << "entropy_bits=" << format_double(summary.entropy_bits)
            << " chi_eff=" << summary.chi_eff
            << " epsilon(chi'=" << config.chi_prime
            << ")=" << format_double(summary.epsilon)
            << " overlap=" << format_double(std::sqrt(1.0 - summary.epsilon))
            << '\n';
  return 0;
}

int run_scaling(const RunConfig& config) {
  const auto result = scaling_run(config.n_list, config.field);
  const auto path = output_path(config, "scaling.csv");
  const std::string plot =
      "set xlabel 'log2(n_sites)'\nset ylabel 'entropy (bits)'\n"
      "plot '" + path.filename().string() +
      "' using (log($1)/log(2)):4 with linespoints title 'entropy_bits'\n";
  write_outputs(path, sweep_csv(result.rows), config.emit_plot, plot);
  std::cout << fit_summary(result.fit) << '\n';
  return 0;
}

int run_decay_fit(const RunConfig& config) {
  const auto fit = decay_fit(config.n_sites, config.field,
                             effective_cut(config), config.top_k);
  const auto path = output_path(config, "decay-fit.csv");
  write_outputs(path, fit_csv(fit), false, "");
  std::cout << fit_summary(fit) << '\n';
  return 0;
}

int run_error_growth(const RunConfig& config) {
  const auto result = error_growth(config.n_list, config.field,
                                   config.chi_overlap, config.chi_entropy);
  std::string text = "n_sites,delta_o,delta_s\n";
  for (const auto& row : result.rows) {
    text += std::to_string(row.n_sites) + ',' + format_double(row.delta_o) +
            ',' + format_double(row.delta_s) + '\n';
  }
  const auto path = output_path(config, "error-growth.csv");
  const std::string plot =
      "set xlabel 'n_sites'\n"
      "plot '" + path.filename().string() +
      "' using 1:2 with linespoints title 'delta_o', '' using 1:3 with "
      "linespoints title 'delta_s'\n";
  write_outputs(path, text, config.emit_plot, plot);
  std::cout << fit_summary(result.fit_overlap) << '\n';
  std::cout << fit_summary(result.fit_entropy) << '\n';
  return 0;
}

int run_overlaps(const RunConfig& config) {
  const auto grid = make_grid(config.h_min, config.h_max, config.steps);
  const auto rows = field_sweep(config.n_sites, grid, effective_cut(config));
  std::string text = "field,overlap_1,overlap_2,overlap_3,overlap_4\n";
  for (const auto& row : rows) {
    text += format_double(row.field);
    for (double v : row.overlap) text += ',' + format_double(v);
    text += '\n';
  }
  const auto path = output_path(config, "overlaps.csv");
  const std::string plot =
      "set xlabel 'field'\nset ylabel 'overlap'\n"
      "plot '" + path.filename().string() +
      "' using 1:2 with linespoints title 'overlap_1', "
      "'' using 1:3 with linespoints title 'overlap_2', "
      "'' using 1:4 with linespoints title 'overlap_3', "
      "'' using 1:5 with linespoints title 'overlap_4'\n";
  write_outputs(path, text, config.emit_plot, plot);
  return 0;
}

int run_oracle_compare(const RunConfig& config) {
  const int cut = effective_cut(config);
  const auto state = dense_ground_state(ChainSpec{config.n_sites, config.field});
  const auto exact = oracle_schmidt(state, cut);
  const auto modes = region_modes(config.n_sites, config.field, cut);
  const auto top = top_k_weights(modes, 16);
  const double entropy_diff = std::abs(entropy(modes) - exact.entropy_bits);

  std::string text = "n,lambda_ff,lambda_oracle,abs_diff\n";
  double max_diff = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double ff = i < static_cast<int>(top.size()) ? top[i].weight : 0.0;
    const double ex =
        i < static_cast<int>(exact.values.size()) ? exact.values[i] : 0.0;
    const double diff = std::abs(ff - ex);
    max_diff = std::max(max_diff, diff);
    text += std::to_string(i + 1) + ',' + format_double(ff) + ',' +
            format_double(ex) + ',' + format_double(diff) + '\n';
  }
  const auto path = output_path(config, "oracle-compare.csv");
  write_outputs(path, text, false, "");
  std::cout << "max |lambda_ff - lambda_oracle| = " << format_double(max_diff)
            << '\n'
            << "|entropy_ff - entropy_oracle| = " << format_double(entropy_diff)
            << '\n';
  const bool pass = max_diff < 1e-10 && entropy_diff < 1e-10;
  std::cout << (pass ? "agreement within 1e-10" : "DISAGREEMENT beyond 1e-10")
            << '\n';
  return pass ? 0 : 1;
}

}  // namespace

int run(std::vector<std::string> args) {
  RunConfig config;
  CLI::App app{"Entanglement structure of the open transverse-field Ising chain"};
  app.require_subcommand(1);
  // The single-letter flags --n and --h need the short -h help alias gone.
  app.set_help_flag("--help", "print help and exit");

  auto add_common = [&config](CLI::App* sub) {
    sub->set_help_flag("--help", "print help and exit");
    sub->add_option("--out", config.output, "output CSV path");
  };

  auto* sweep = app.add_subcommand(
      "sweep-field", "entropy and leading weights across a field grid");
  sweep->add_option("--n", config.n_sites, "chain length")->required();
  sweep->add_option("--h-min", config.h_min, "grid start")
      ->capture_default_str();
  sweep->add_option("--h-max", config.h_max, "grid end")->capture_default_str();
  sweep->add_option("--steps", config.steps, "number of grid points")
      ->required();
  sweep->add_option("--cut", config.cut, "region size (default n/2)");
  sweep->add_flag("--emit-plot", config.emit_plot,
                  "also write a gnuplot script");
  add_common(sweep);

  auto* spectrum_cmd = app.add_subcommand(
      "spectrum", "leading reduced-density-matrix weights at one point");
  spectrum_cmd->add_option("--n", config.n_sites, "chain length")->required();
  spectrum_cmd->add_option("--h", config.field, "field")->capture_default_str();
  spectrum_cmd->add_option("--cut", config.cut, "region size (default n/2)");
  spectrum_cmd->add_option("--k", config.top_k, "number of terms")
      ->capture_default_str();
  spectrum_cmd
      ->add_option("--chi-prime", config.chi_prime,
                   "truncation rank for the reported epsilon")
      ->capture_default_str();
  spectrum_cmd->add_flag("--emit-plot", config.emit_plot,
                         "also write a gnuplot script");
  add_common(spectrum_cmd);

  auto* scaling = app.add_subcommand(
      "scaling", "half-chain entropy against log2 of the size");
  scaling->add_option("--n-list", config.n_list, "chain lengths")
      ->required()
      ->delimiter(',');
  scaling->add_option("--h", config.field, "field")->capture_default_str();
  scaling->add_flag("--emit-plot", config.emit_plot,
                    "also write a gnuplot script");
  add_common(scaling);

  auto* decay = app.add_subcommand(
      "decay-fit", "least-squares slope of ln lambda_n against n");
  decay->add_option("--n", config.n_sites, "chain length")->required();
  decay->add_option("--h", config.field, "field")->capture_default_str();
  decay->add_option("--cut", config.cut, "region size (default n/2)");
  decay->add_option("--k", config.top_k, "number of leading weights")
      ->capture_default_str();
  add_common(decay);

  auto* growth = app.add_subcommand(
      "error-growth", "truncation errors delta_o and delta_s against size");
  growth->add_option("--n-list", config.n_list, "chain lengths")
      ->required()
      ->delimiter(',');
  growth->add_option("--h", config.field, "field")->capture_default_str();
  growth->add_option("--chi-o", config.chi_overlap, "overlap truncation rank")
      ->capture_default_str();
  growth->add_option("--chi-s", config.chi_entropy, "entropy truncation rank")
      ->capture_default_str();
  growth->add_flag("--emit-plot", config.emit_plot,
                   "also write a gnuplot script");
  add_common(growth);

  auto* over = app.add_subcommand(
      "overlaps", "leading overlaps O_n across a field grid");
  over->add_option("--n", config.n_sites, "chain length")->required();
  over->add_option("--h-min", config.h_min, "grid start")
      ->capture_default_str();
  over->add_option("--h-max", config.h_max, "grid end")->capture_default_str();
  over->add_option("--steps", config.steps, "number of grid points")
      ->required();
  over->add_option("--cut", config.cut, "region size (default n/2)");
  over->add_flag("--emit-plot", config.emit_plot,
                 "also write a gnuplot script");
  add_common(over);

  auto* compare = app.add_subcommand(
      "oracle-compare",
      "cross-check the correlation-matrix weights against brute force");
  compare->add_option("--n", config.n_sites, "chain length (at most 12)")
      ->required();
  compare->add_option("--h", config.field, "field")->capture_default_str();
  compare->add_option("--cut", config.cut, "region size (default n/2)");
  add_common(compare);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sweep->parsed()) {
      config.subcommand = "sweep-field";
      return run_sweep_field(config);
    }
    if (spectrum_cmd->parsed()) {
      config.subcommand = "spectrum";
      return run_spectrum(config);
    }
    if (scaling->parsed()) {
      config.subcommand = "scaling";
      return run_scaling(config);
    }
    if (decay->parsed()) {
      config.subcommand = "decay-fit";
      return run_decay_fit(config);
    }
    if (growth->parsed()) {
      config.subcommand = "error-growth";
      return run_error_growth(config);
    }
    if (over->parsed()) {
      config.subcommand = "overlaps";
      return run_overlaps(config);
    }
    if (compare->parsed()) {
      config.subcommand = "oracle-compare";
      return run_oracle_compare(config);
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fermispec
