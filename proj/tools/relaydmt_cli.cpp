// Command-line front end: analytic DMT curves, outage simulation, SNR
// sweeps with slope fits, lemma verification suites, and canned figure
// datasets. Artifacts embed their resolved configuration so every output
// can be regenerated from its own header.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "relaydmt/experiment.hpp"

namespace {

using relaydmt::ExperimentConfig;

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

struct CliOverrides {
  std::string config_path;
  std::string out_path;
  std::string topology_path;
  std::string scheme;
  std::string figure;
  std::vector<std::string> labels;
  std::vector<double> snr_grid_db;
  double r = -1.0;
  long long trials = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = -1;
  int m = -1, n = -1, p = -1, slots = -1, relays = -1, rounds = -1;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment configuration");
  cmd->add_option("--out", o.out_path, "output file (stdout when omitted)");
  cmd->add_option("--seed", o.seed, "master seed")->each([&o](const std::string&) {
    o.seed_set = true;
  });
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per SNR point");
  cmd->add_option("--threads", o.threads, "worker threads");
  cmd->add_option("--scheme", o.scheme, "scheme name (point_to_point, rs_two_hop, ...)");
  cmd->add_option("--label", o.labels, "curve label (repeatable)");
  cmd->add_option("--snr-db", o.snr_grid_db, "SNR grid in dB (repeatable)");
  cmd->add_option("--rate", o.r, "multiplexing gain r");
  cmd->add_option("--topology", o.topology_path, "topology JSON file");
  cmd->add_option("-m", o.m, "source antennas");
  cmd->add_option("-n", o.n, "destination antennas");
  cmd->add_option("-p", o.p, "relay antennas");
  cmd->add_option("--slots", o.slots, "path count L");
  cmd->add_option("--relays", o.relays, "parallel relay count K");
  cmd->add_option("--rounds", o.rounds, "rounds per relay B");
}

ExperimentConfig resolve(const CliOverrides& o, const std::string& job) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + o.config_path);
    nlohmann::json j;
    in >> j;
    cfg = relaydmt::config_from_json(j);
  }
  cfg.job = job;
  if (!o.out_path.empty()) cfg.out_path = o.out_path;
  if (!o.topology_path.empty()) cfg.topology_path = o.topology_path;
  if (!o.scheme.empty()) cfg.scheme.scheme = relaydmt::scheme_from_string(o.scheme);
  if (!o.figure.empty()) cfg.figure = o.figure;
  if (!o.labels.empty()) cfg.labels = o.labels;
  if (!o.snr_grid_db.empty()) cfg.snr_grid_db = o.snr_grid_db;
  if (o.r >= 0.0) cfg.r = o.r;
  if (o.trials > 0) cfg.trials = o.trials;
  if (o.seed_set) cfg.master_seed = o.seed;
  if (o.threads > 0) cfg.threads = o.threads;
  if (o.m > 0) cfg.scheme.m = o.m;
  if (o.n > 0) cfg.scheme.n = o.n;
  if (o.p > 0) cfg.scheme.p = o.p;
  if (o.slots > 0) cfg.scheme.slots = o.slots;
  if (o.relays > 0) cfg.scheme.relays = o.relays;
  if (o.rounds > 0) cfg.scheme.rounds = o.rounds;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diversity-multiplexing tradeoff curves and outage simulation "
               "for amplify-and-forward relay networks"};
  app.require_subcommand(1);

  CliOverrides curve_opts, simulate_opts, sweep_opts, verify_opts, figure_opts;
  CLI::App* curve = app.add_subcommand("curve", "emit analytic DMT curves as CSV");
  add_common_options(curve, curve_opts);
  CLI::App* simulate = app.add_subcommand("simulate", "single outage point as CSV");
  add_common_options(simulate, simulate_opts);
  CLI::App* sweep = app.add_subcommand("sweep", "SNR sweep CSV plus slope-fit JSON summary");
  add_common_options(sweep, sweep_opts);
  std::string summary_path;
  sweep->add_option("--summary", summary_path, "slope-fit JSON output path");
  CLI::App* verify = app.add_subcommand("verify", "run lemma verification suites");
  add_common_options(verify, verify_opts);
  CLI::App* figure = app.add_subcommand("figure", "emit a canned figure dataset as CSV");
  add_common_options(figure, figure_opts);
  figure->add_option("--name", figure_opts.figure, "figure name: fig3 | fig4");

  CLI11_PARSE(app, argc, argv);

  try {
    if (curve->parsed()) {
      ExperimentConfig cfg = resolve(curve_opts, "curve");
      write_output(relaydmt::run_curve(cfg), cfg.out_path);
    } else if (figure->parsed()) {
      ExperimentConfig cfg = resolve(figure_opts, "figure");
      write_output(relaydmt::run_curve(cfg), cfg.out_path);
    } else if (simulate->parsed()) {
      ExperimentConfig cfg = resolve(simulate_opts, "simulate");
      write_output(relaydmt::run_simulate(cfg), cfg.out_path);
    } else if (sweep->parsed()) {
      ExperimentConfig cfg = resolve(sweep_opts, "sweep");
      relaydmt::SweepArtifacts art = relaydmt::run_sweep(cfg);
      write_output(art.csv, cfg.out_path);
      std::string summary_text = art.summary.dump(2) + "\n";
      if (!summary_path.empty()) {
        write_output(summary_text, summary_path);
      } else if (!cfg.out_path.empty()) {
        std::cout << summary_text;
      }
    } else if (verify->parsed()) {
      ExperimentConfig cfg = resolve(verify_opts, "verify");
      nlohmann::json report = relaydmt::run_verify(cfg);
      write_output(report.dump(2) + "\n", cfg.out_path);
      return report.at("pass").get<bool>() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
