#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "relaydmt/dmt.hpp"
#include "relaydmt/montecarlo.hpp"
#include "relaydmt/verify.hpp"

namespace relaydmt {

using nlohmann::json;

/// One CLI job: analytic curves, a single outage point, an SNR sweep with
/// slope fit, the verification suites, or a canned figure dataset.
struct ExperimentConfig {
  std::string job = "curve";
  std::vector<std::string> labels;  // requested curve labels
  std::string figure;               // fig3 | fig4 for the figure job
  SchemeConfig scheme;
  ProductPenaltyReading reading = ProductPenaltyReading::HalvedFloor;
  std::vector<double> snr_grid_db;
  double r = 0.5;
  long long trials = 10000;
  std::uint64_t master_seed = 1;
  int threads = 1;
  std::string out_path;
  std::string topology_path;
  long long verify_samples = 20000;
  bool lemma3_mutate = false;  // negative-control hook for the lemma3 suite
};

inline std::string scheme_to_string(Scheme s) {
  switch (s) {
    case Scheme::PointToPoint: return "point_to_point";
    case Scheme::TraditionalAf: return "traditional_af";
    case Scheme::RsTwoHop: return "rs_two_hop";
    case Scheme::RsMultiHop: return "rs_multi_hop";
    case Scheme::RsParallel: return "rs_parallel";
    case Scheme::Naf: return "naf";
    case Scheme::ModifiedNaf: return "modified_naf";
  }
  throw std::logic_error("scheme_to_string: unknown scheme");
}

inline Scheme scheme_from_string(const std::string& s) {
  if (s == "point_to_point") return Scheme::PointToPoint;
  if (s == "traditional_af") return Scheme::TraditionalAf;
  if (s == "rs_two_hop") return Scheme::RsTwoHop;
  if (s == "rs_multi_hop") return Scheme::RsMultiHop;
  if (s == "rs_parallel") return Scheme::RsParallel;
  if (s == "naf") return Scheme::Naf;
  if (s == "modified_naf") return Scheme::ModifiedNaf;
  throw std::invalid_argument("unknown scheme: " + s);
}

inline json config_to_json(const ExperimentConfig& c) {
  json j;
  j["job"] = c.job;
  j["labels"] = c.labels;
  j["figure"] = c.figure;
  j["scheme"] = scheme_to_string(c.scheme.scheme);
  j["m"] = c.scheme.m;
  j["n"] = c.scheme.n;
  j["p"] = c.scheme.p;
  j["slots"] = c.scheme.slots;
  j["relays"] = c.scheme.relays;
  j["rounds"] = c.scheme.rounds;
  j["hop_antennas"] = c.scheme.hop_antennas;
  j["alpha_policy"] = c.scheme.alpha_policy == AlphaPolicy::Unit ? "unit" : "power_normalized";
  j["with_unitary"] = c.scheme.with_unitary;
  j["reading"] = c.reading == ProductPenaltyReading::FloorOnly ? "floor_only" : "halved_floor";
  j["snr_grid_db"] = c.snr_grid_db;
  j["r"] = c.r;
  j["trials"] = c.trials;
  j["seed"] = c.master_seed;
  // thread count is deliberately omitted: results are independent of it,
  // so it is an execution detail rather than part of the experiment
  j["topology"] = c.topology_path;
  j["verify_samples"] = c.verify_samples;
  j["lemma3_mutate"] = c.lemma3_mutate;
  return j;
}

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("job")) c.job = j.at("job").get<std::string>();
  if (j.contains("labels")) c.labels = j.at("labels").get<std::vector<std::string>>();
  if (j.contains("figure")) c.figure = j.at("figure").get<std::string>();
  if (j.contains("scheme")) c.scheme.scheme = scheme_from_string(j.at("scheme").get<std::string>());
  if (j.contains("m")) c.scheme.m = j.at("m").get<int>();
  if (j.contains("n")) c.scheme.n = j.at("n").get<int>();
  if (j.contains("p")) c.scheme.p = j.at("p").get<int>();
  if (j.contains("slots")) c.scheme.slots = j.at("slots").get<int>();
  if (j.contains("relays")) c.scheme.relays = j.at("relays").get<int>();
  if (j.contains("rounds")) c.scheme.rounds = j.at("rounds").get<int>();
  if (j.contains("hop_antennas")) {
    c.scheme.hop_antennas = j.at("hop_antennas").get<std::vector<int>>();
  }
  if (j.contains("alpha_policy")) {
    c.scheme.alpha_policy = j.at("alpha_policy").get<std::string>() == "unit"
                                ? AlphaPolicy::Unit
                                : AlphaPolicy::PowerNormalized;
  }
  if (j.contains("with_unitary")) c.scheme.with_unitary = j.at("with_unitary").get<bool>();
  if (j.contains("reading")) {
    c.reading = j.at("reading").get<std::string>() == "floor_only" ? ProductPenaltyReading::FloorOnly
                                                                   : ProductPenaltyReading::HalvedFloor;
  }
  if (j.contains("snr_grid_db")) c.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
  if (j.contains("r")) c.r = j.at("r").get<double>();
  if (j.contains("trials")) c.trials = j.at("trials").get<long long>();
  if (j.contains("seed")) c.master_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("topology")) c.topology_path = j.at("topology").get<std::string>();
  if (j.contains("verify_samples")) c.verify_samples = j.at("verify_samples").get<long long>();
  if (j.contains("lemma3_mutate")) c.lemma3_mutate = j.at("lemma3_mutate").get<bool>();
  return c;
}

inline void validate_config(const ExperimentConfig& c) {
  if (c.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (c.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  for (std::size_t i = 0; i + 1 < c.snr_grid_db.size(); ++i) {
    if (c.snr_grid_db[i + 1] <= c.snr_grid_db[i]) {
      throw std::invalid_argument("config: snr_grid_db must be strictly increasing");
    }
  }
  c.scheme.validate();
}

/// Topology file: {"nodes": [antenna counts...], "edges": [[from,to]...]};
/// node 0 is the source, the last node the destination.
inline NetworkTopology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("topology file not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("topology parse error in " + path + ": " + e.what());
  }
  NetworkTopology t;
  t.antennas = j.at("nodes").get<std::vector<int>>();
  t.node_count = static_cast<int>(t.antennas.size());
  for (const auto& e : j.at("edges")) {
    t.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  validate(t);
  return t;
}

namespace detail {

/// Fixed decimal formatting keeps artifacts byte-stable across runs.
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline DmtCurve scale_diversity(const DmtCurve& c, double k) {
  std::vector<std::pair<double, double>> v;
  for (const auto& [r, d] : c.vertices) v.emplace_back(r, k * d);
  return make_dmt_curve(std::move(v));
}

/// r -> c(s * r): rate axis compressed by factor s.
inline DmtCurve compress_rate(const DmtCurve& c, double s) {
  std::vector<std::pair<double, double>> v;
  for (const auto& [r, d] : c.vertices) v.emplace_back(r / s, d);
  return make_dmt_curve(std::move(v));
}

}  // namespace detail

/// Analytic curve for one label under the given configuration. Labels name
/// the scheme whose achievable DMT is requested.
inline DmtCurve curve_for_label(const std::string& label, const ExperimentConfig& c) {
  const SchemeConfig& s = c.scheme;
  if (label == "point_to_point") return dmt_point_to_point(s.m, s.n);
  if (label == "product_channel") return dmt_product(s.m, s.p, s.n, c.reading);
  if (label == "rs_two_hop") return dmt_multi_hop({s.m, s.p, s.n}).curve;
  if (label == "rs_multi_hop") return dmt_multi_hop(s.hop_antennas).curve;
  if (label == "rs_parallel") return dmt_rs_parallel(s.m, s.n, s.p, s.relays, s.rounds).curve;
  if (label == "naf") return dmt_naf_baseline(s.m, s.n, s.p, c.reading);
  if (label == "modified_naf") return dmt_modified_naf(s.m, s.n, s.p);
  if (label == "rs_general_network") return dmt_general_network(load_topology(c.topology_path));
  if (label == "cut_set_upper_bound") {
    return dmt_upper_bound_general(load_topology(c.topology_path));
  }
  throw std::invalid_argument("unknown curve label: " + label);
}

namespace detail {

inline void append_curve_rows(std::ostringstream& out, const std::string& label,
                              const DmtCurve& curve) {
  std::vector<double> bp = curve.breakpoints();
  std::set<double> rs(bp.begin(), bp.end());
  for (int k = 0; k <= 100; ++k) rs.insert(curve.r_max() * k / 100.0);
  for (double r : rs) {
    // clamped: r_max * k / 100 can land one ulp past the domain edge
    out << label << ',' << fmt(r) << ',' << fmt(curve.eval_clamped(r)) << '\n';
  }
}

}  // namespace detail

/// Curve CSV: a `#` header with the resolved config, then (label, r, d)
/// rows sampled at each curve's vertices plus a 101-point uniform grid.
inline std::string run_curve(const ExperimentConfig& cfg) {
  validate_config(cfg);
  std::vector<std::pair<std::string, DmtCurve>> curves;
  if (cfg.job == "figure" || !cfg.figure.empty()) {
    if (cfg.figure == "fig3") {
      // Two parallel 3-antenna relays: optimal sequential-scheme curve,
      // both product-channel baselines, and the cut-set upper bound.
      DmtCurve d33 = dmt_point_to_point(3, 3);
      DmtCurve opt = dmt_min_sum_curve(d33, d33);
      DmtCurve prod2 = detail::scale_diversity(dmt_product(3, 3, 3, cfg.reading), 2.0);
      curves.emplace_back("rs_optimal", opt);
      curves.emplace_back("two_relay_product", prod2);
      curves.emplace_back("two_relay_product_half_rate", detail::compress_rate(prod2, 2.0));
      curves.emplace_back("cut_set_upper_bound", opt);
    } else if (cfg.figure == "fig4") {
      curves.emplace_back("naf", dmt_naf_baseline(3, 3, 3, cfg.reading));
      curves.emplace_back("modified_naf", dmt_modified_naf(3, 3, 3));
    } else {
      throw std::invalid_argument("unknown figure: " + cfg.figure);
    }
  } else {
    if (cfg.labels.empty()) throw std::invalid_argument("curve job: no labels requested");
    for (const std::string& label : cfg.labels) {
      curves.emplace_back(label, curve_for_label(label, cfg));
    }
  }
  std::ostringstream out;
  out << "# " << config_to_json(cfg).dump() << '\n';
  out << "label,r,d\n";
  for (const auto& [label, curve] : curves) detail::append_curve_rows(out, label, curve);
  return out.str();
}

/// Analytic diversity prediction for the configured simulation scheme.
inline double analytic_diversity(const ExperimentConfig& cfg) {
  const SchemeConfig& s = cfg.scheme;
  switch (s.scheme) {
    case Scheme::PointToPoint:
      return dmt_point_to_point(s.m, s.n).eval_clamped(cfg.r);
    case Scheme::TraditionalAf:
      return dmt_product(s.m, s.p, s.n, cfg.reading).eval_clamped(cfg.r);
    case Scheme::RsTwoHop:
      return dmt_multi_hop({s.m, s.p, s.n}).curve.eval_clamped(cfg.r);
    case Scheme::RsMultiHop:
      return dmt_multi_hop(s.hop_antennas).curve.eval_clamped(cfg.r);
    case Scheme::RsParallel:
      return dmt_rs_parallel(s.m, s.n, s.p, s.relays, s.rounds).curve.eval_clamped(cfg.r);
    case Scheme::Naf:
      return dmt_naf_baseline(s.m, s.n, s.p, cfg.reading).eval_clamped(cfg.r);
    case Scheme::ModifiedNaf:
      return dmt_modified_naf(s.m, s.n, s.p).eval_clamped(cfg.r);
  }
  throw std::logic_error("analytic_diversity: unknown scheme");
}

inline std::vector<double> snr_grid_linear(const std::vector<double>& grid_db) {
  std::vector<double> out;
  out.reserve(grid_db.size());
  for (double db : grid_db) out.push_back(std::pow(10.0, db / 10.0));
  return out;
}

struct SweepArtifacts {
  std::string csv;
  json summary;
};

/// Sweep CSV plus a JSON summary holding the slope fit and the analytic
/// prediction; slope is flagged unavailable instead of erroring when too
/// few points have enough failures.
inline SweepArtifacts run_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.snr_grid_db.empty()) throw std::invalid_argument("sweep job: empty SNR grid");
  std::vector<double> grid = snr_grid_linear(cfg.snr_grid_db);
  std::vector<OutageEstimate> sweep =
      snr_sweep(cfg.scheme, cfg.r, grid, cfg.trials, cfg.master_seed, cfg.threads);
  std::string label = scheme_to_string(cfg.scheme.scheme);
  std::ostringstream out;
  out << "# " << config_to_json(cfg).dump() << '\n';
  out << "label,snr_db,p_linear,rate_r,trials,failures,p_hat,ci_low,ci_high\n";
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const OutageEstimate& e = sweep[i];
    out << label << ',' << detail::fmt(cfg.snr_grid_db[i]) << ',' << detail::fmt(e.power)
        << ',' << detail::fmt(e.r) << ',' << e.trials << ',' << e.failures << ','
        << detail::fmt(e.p_hat) << ',' << detail::fmt(e.ci_low) << ','
        << detail::fmt(e.ci_high) << '\n';
  }
  json summary;
  summary["schema_version"] = 1;
  summary["config"] = config_to_json(cfg);
  summary["analytic_diversity"] = analytic_diversity(cfg);
  json pts = json::array();
  try {
    SlopeFit fit = fit_diversity_slope(sweep);
    for (const auto& [x, y] : fit.points) pts.push_back({{"log10_p", x}, {"neg_log10_p_hat", y}});
    summary["slope"] = {{"available", true},
                        {"value", fit.slope},
                        {"stderr", fit.stderr_},
                        {"points", pts},
                        {"points_used", fit.points_used},
                        {"points_dropped", fit.points_dropped}};
  } catch (const std::exception& e) {
    summary["slope"] = {{"available", false}, {"reason", e.what()}};
  }
  return SweepArtifacts{out.str(), summary};
}

/// Single-point simulation: one CSV row at the first grid entry.
inline std::string run_simulate(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.snr_grid_db.empty()) throw std::invalid_argument("simulate job: need one SNR point");
  ExperimentConfig one = cfg;
  one.snr_grid_db = {cfg.snr_grid_db.front()};
  return run_sweep(one).csv;
}

namespace detail {

inline json report_to_json(const BoundCheckReport& rep) {
  return json{{"name", rep.name},
              {"samples", rep.samples},
              {"violations", rep.violations},
              {"worst_margin", rep.worst_margin},
              {"pass", rep.pass},
              {"conditioning_failures", rep.conditioning_failures}};
}

}  // namespace detail

/// All verification suites in one JSON report; "pass" aggregates them.
inline json run_verify(const ExperimentConfig& cfg) {
  validate_config(cfg);
  Rng rng(cfg.master_seed);
  json suites;
  bool all_pass = true;

  {
    // eigenvalue lower bound for composite channels, all small dimensions
    BoundCheckReport rep;
    rep.name = "lemma3";
    rep.worst_margin = std::numeric_limits<double>::infinity();
    long long per_combo = std::max<long long>(2, cfg.verify_samples / 256);
    for (int m = 1; m <= 4; ++m) {
      for (int n = 1; n <= 4; ++n) {
        for (int p = 1; p <= 4; ++p) {
          for (int i = 1; i <= 4; ++i) {
            for (long long s = 0; s < per_combo; ++s) {
              ComplexMatrix h = sample_gaussian_channel(p, m, rng);
              ComplexMatrix g = sample_gaussian_channel(n, p, rng);
              ComplexMatrix theta = sample_haar_unitary(p, rng);
              ComplexMatrix lhs_theta = cfg.lemma3_mutate ? theta.transpose() : theta;
              double margin = detail::lemma3_margin_pair(g, h, lhs_theta, theta, i);
              rep.worst_margin = std::min(rep.worst_margin, margin);
              ++rep.samples;
              double lhs_scale =
                  1.0 + std::abs(detail::eigenvalue_or_zero(ordered_eigenvalues(g * lhs_theta * h), i));
              if (margin < -1e-9 * lhs_scale) ++rep.violations;
            }
          }
        }
      }
    }
    rep.pass = rep.violations == 0;
    all_pass = all_pass && rep.pass;
    suites["lemma3"] = detail::report_to_json(rep);
  }

  {
    // smallest-eigenvalue distribution of the random frame product
    json lemma4 = json::array();
    bool pass = true;
    long long n_samples = std::max<long long>(1000, cfg.verify_samples);
    for (int p = 2; p <= 4; ++p) {
      for (int i = 1; i <= p; ++i) {
        json entry;
        entry["p"] = p;
        entry["i"] = i;
        if (i == 1) {
          std::vector<double> xs = lambda_min_samples(p, 1, n_samples, rng);
          double ks = 0.0;
          for (std::size_t k = 0; k < xs.size(); ++k) {
            double model = 1.0 - std::pow(1.0 - xs[k], p - 1);
            double lo = static_cast<double>(k) / xs.size();
            double hi = static_cast<double>(k + 1) / xs.size();
            ks = std::max({ks, std::abs(model - lo), std::abs(model - hi)});
          }
          double threshold = std::max(0.005, 2.0 / std::sqrt(static_cast<double>(n_samples)));
          entry["ks"] = ks;
          entry["pass"] = ks < threshold;
        } else {
          EmpiricalCdf cdf = lambda_min_tail(p, i, n_samples, rng);
          double eta = lambda_min_tail_coefficient(p, i);
          bool ok = true;
          double worst = std::numeric_limits<double>::infinity();
          for (std::size_t k = 0; k < cdf.grid.size(); ++k) {
            double bound = eta * std::pow(cdf.grid[k], 1.0 / i);
            worst = std::min(worst, bound - cdf.cdf[k]);
            if (cdf.cdf[k] > bound) ok = false;
          }
          entry["eta"] = eta;
          entry["worst_margin"] = worst;
          entry["pass"] = ok;
        }
        pass = pass && entry["pass"].get<bool>();
        lemma4.push_back(entry);
      }
    }
    suites["lemma4"] = {{"entries", lemma4}, {"pass", pass}, {"samples", n_samples}};
    all_pass = all_pass && pass;
  }

  {
    BoundCheckReport rep = check_chi_square_tail(1, 1, 0.5, 1e4, cfg.verify_samples, rng);
    all_pass = all_pass && rep.pass;
    suites["chi_square_tail"] = detail::report_to_json(rep);
  }

  {
    BoundCheckReport rep =
        check_alpha_high_snr(1, 1, {1e2, 1e3, 1e4, 1e5, 1e6}, cfg.verify_samples, rng);
    all_pass = all_pass && rep.pass;
    suites["alpha_high_snr"] = detail::report_to_json(rep);
  }

  {
    BoundCheckReport rep = check_mi_sandwich(cfg.verify_samples, 1e3, 7.0, {2, 2, 2}, rng);
    all_pass = all_pass && rep.pass;
    suites["mi_sandwich"] = detail::report_to_json(rep);
  }

  json report;
  report["schema_version"] = 1;
  report["config"] = config_to_json(cfg);
  report["suites"] = suites;
  report["pass"] = all_pass;
  return report;
}

}  // namespace relaydmt
