// decobound: device-independent decoherence bounds from CHSH statistics.
//
// Subcommands:
//   region    quantum and no-signalling Dec bounds over a CHSH-value grid
//   channels  parametric (beta, Dec) curves for noise channels
//   optomech  gravitational-decoherence curves and falsification summary
//   simulate  finite-round CHSH protocol with a Hoeffding confidence radius
//   certify   self-test battery (SDP certificates, oracles, LP thresholds)
//
// Exit codes: 0 success, 2 I/O, 3 config schema, 4 certification failure,
// 5 numeric non-convergence.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "decobound/bell_sim.hpp"
#include "decobound/config.hpp"
#include "decobound/entropy.hpp"
#include "decobound/io.hpp"
#include "decobound/nosignalling.hpp"
#include "decobound/optomech.hpp"
#include "decobound/quantum.hpp"
#include "decobound/quantum_bound.hpp"

namespace {

using nlohmann::ordered_json;
using namespace decobound;

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;
constexpr int kExitCertify = 4;
constexpr int kExitNonConvergence = 5;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write output file: " + path);
  return out;
}

// foo.csv -> foo-summary.csv
std::string derived_path(const std::string& path, const std::string& tag) {
  size_t dot = path.find_last_of('.');
  size_t slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + "-" + tag;
  return path.substr(0, dot) + "-" + tag + path.substr(dot);
}

Config effective_config(const std::string& cli_path) {
  if (!cli_path.empty()) return load_config(cli_path);
  if (const char* env = std::getenv("DECOBOUND_CONFIG"))
    if (*env) return load_config(env);
  return Config{};
}

double dec_bound_clamped(double beta) {
  if (beta <= 2.0) return 1.0;
  return dec_bound_quantum(std::min(beta, kTwoSqrtTwo));
}

void cmd_region(const Config& cfg, const std::string& out_path,
                const std::string& format, int grid_n) {
  const int n = grid_n > 0 ? grid_n : cfg.region_grid;
  if (n < 2) throw ConfigError("grids.region", "must be >= 2");

  struct Row {
    double beta, lambda, dec, delta, gpt;
  };
  std::vector<Row> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    double beta = 2.0 + 2.0 * static_cast<double>(i) / (n - 1);
    double lambda = lambda_from_beta(beta);
    double dec = beta <= kTwoSqrtTwo + 1e-9
                     ? dec_bound_clamped(beta)
                     : std::numeric_limits<double>::quiet_NaN();
    double delta = delta_of_lambda(lambda);
    rows.push_back({beta, lambda, dec, delta, std::exp2(-delta * delta)});
  }

  std::ofstream out = open_output(out_path);
  if (format == "json") {
    ordered_json doc;
    doc["subcommand"] = "region";
    doc["points"] = ordered_json::array();
    for (const Row& r : rows) {
      ordered_json p;
      p["beta"] = r.beta;
      p["lambda"] = r.lambda;
      if (std::isnan(r.dec))
        p["dec_bound_quantum"] = nullptr;
      else
        p["dec_bound_quantum"] = r.dec;
      p["delta"] = r.delta;
      p["gpt_dec_bound"] = r.gpt;
      doc["points"].push_back(p);
    }
    out << doc.dump(2) << "\n";
  } else {
    CsvWriter csv(out, {"beta", "lambda", "dec_bound_quantum", "delta",
                        "gpt_dec_bound"});
    for (const Row& r : rows)
      csv.write_row({format_number(r.beta), format_number(r.lambda),
                     format_number(r.dec), format_number(r.delta),
                     format_number(r.gpt)});
  }
}

void cmd_channels(const Config& cfg, const std::string& out_path,
                  const std::string& format, int grid_n) {
  const int n = grid_n > 0 ? grid_n : cfg.channels_grid;
  if (n < 2) throw ConfigError("grids.channels", "must be >= 2");
  const TwoQubitState epr = canonical_entangled_state();
  const ChshMeasurementSet meas = standard_chsh_measurements();

  struct Row {
    std::string channel;
    double noise, beta, dec;
  };
  std::vector<Row> rows;
  for (int i = 0; i < n; ++i) {
    double noise = static_cast<double>(i) / (n - 1);
    TwoQubitState depol = depolarizing(epr, noise);
    rows.push_back({"depolarizing-standard", noise, chsh_value(depol, meas),
                    dec_quantum(twirl(depol))});
  }
  for (int i = 0; i < n; ++i) {
    double noise = static_cast<double>(i) / (n - 1);
    TwoQubitState deph = dephasing(epr, 1.0 - noise, Axis::z);
    rows.push_back({"dephasing-standard", noise, chsh_value(deph, meas),
                    dec_quantum(twirl(deph))});
  }
  for (int i = 0; i < n; ++i) {
    double noise = static_cast<double>(i) / (n - 1);
    TwoQubitState deph = dephasing(epr, 1.0 - noise, Axis::z);
    rows.push_back({"dephasing-optimal", noise, beta_max(deph),
                    dec_quantum(twirl(deph))});
  }

  std::ofstream out = open_output(out_path);
  if (format == "json") {
    ordered_json doc;
    doc["subcommand"] = "channels";
    doc["points"] = ordered_json::array();
    for (const Row& r : rows)
      doc["points"].push_back({{"channel", r.channel},
                               {"noise", r.noise},
                               {"beta", r.beta},
                               {"dec", r.dec}});
    out << doc.dump(2) << "\n";
  } else {
    CsvWriter csv(out, {"channel", "noise", "beta", "dec"});
    for (const Row& r : rows)
      csv.write_row({r.channel, format_number(r.noise), format_number(r.beta),
                     format_number(r.dec)});
  }
}

void cmd_optomech(const Config& cfg, const std::string& out_path,
                  const std::string& format) {
  struct Case {
    std::string material;
    double temperature;
    OptomechParams params;
    DecoherenceCurve curve;
    OptimalTime best;
  };
  std::vector<Case> cases;
  for (const auto& [name, density] : cfg.materials) {
    for (double temp : cfg.temperatures) {
      Case c{name, temp, cfg.optomech_params(density, temp), {}, {}};
      std::vector<double> times(cfg.time_samples);
      double period = c.params.period();
      for (int i = 0; i < cfg.time_samples; ++i)
        times[i] = period * static_cast<double>(i) / (cfg.time_samples - 1);
      c.curve = decoherence_curve(c.params, times, cfg.constants,
                                  cfg.curve_inversion);
      c.best = optimal_time(c.params, 0.0, period, 4097, cfg.constants);
      cases.push_back(std::move(c));
    }
  }

  if (format == "json") {
    std::ofstream out = open_output(out_path);
    ordered_json doc;
    doc["subcommand"] = "optomech";
    doc["cases"] = ordered_json::array();
    for (const Case& c : cases) {
      ordered_json jc;
      jc["material"] = c.material;
      jc["temperature"] = c.temperature;
      jc["summary"] = {{"t_max", c.best.t_max},
                       {"gap", c.best.gap},
                       {"falsifiable", c.best.falsifiable},
                       {"beta_fals", beta_fals_of_dec(dec_of_t(
                                         c.params, c.best.t_max, true,
                                         cfg.constants))},
                       {"beta_mech", beta_mech(c.params, c.best.t_max, false,
                                               cfg.constants)}};
      jc["rows"] = ordered_json::array();
      for (size_t i = 0; i < c.curve.times.size(); ++i) {
        jc["rows"].push_back({c.curve.times[i], c.curve.dec_grav[i],
                              c.curve.dec_heat[i], c.curve.beta_mech[i],
                              std::isnan(c.curve.beta_fals[i])
                                  ? ordered_json(nullptr)
                                  : ordered_json(c.curve.beta_fals[i]),
                              std::isnan(c.curve.gap[i])
                                  ? ordered_json(nullptr)
                                  : ordered_json(c.curve.gap[i])});
      }
      doc["cases"].push_back(jc);
    }
    out << doc.dump(2) << "\n";
    return;
  }

  std::ofstream out = open_output(out_path);
  CsvWriter csv(out, {"material", "temperature", "time", "dec_grav",
                      "dec_heat", "beta_mech", "beta_fals", "gap"});
  for (const Case& c : cases)
    for (size_t i = 0; i < c.curve.times.size(); ++i)
      csv.write_row({c.material, format_number(c.temperature),
                     format_number(c.curve.times[i]),
                     format_number(c.curve.dec_grav[i]),
                     format_number(c.curve.dec_heat[i]),
                     format_number(c.curve.beta_mech[i]),
                     format_number(c.curve.beta_fals[i]),
                     format_number(c.curve.gap[i])});

  std::ofstream sum = open_output(derived_path(out_path, "summary"));
  CsvWriter sumcsv(sum, {"material", "temperature", "t_max", "gap",
                         "beta_fals_at_tmax", "beta_mech_at_tmax"});
  for (const Case& c : cases)
    sumcsv.write_row(
        {c.material, format_number(c.temperature), format_number(c.best.t_max),
         format_number(c.best.gap),
         format_number(beta_fals_of_dec(
             dec_of_t(c.params, c.best.t_max, true, cfg.constants))),
         format_number(beta_mech(c.params, c.best.t_max, false, cfg.constants))});
}

TwoQubitState simulate_state(const Config& cfg) {
  TwoQubitState state = canonical_entangled_state();
  switch (cfg.simulate_channel) {
    case SimChannel::depolarizing:
      return depolarizing(state, cfg.simulate_noise);
    case SimChannel::dephasing:
      return dephasing(state, 1.0 - cfg.simulate_noise, Axis::z);
    case SimChannel::none:
      return state;
  }
  return state;
}

void cmd_simulate(const Config& cfg, const std::string& out_path,
                  const std::string& format, std::int64_t seed_override) {
  const std::uint64_t seed = seed_override >= 0
                                 ? static_cast<std::uint64_t>(seed_override)
                                 : cfg.simulate_seed;
  TwoQubitState state = simulate_state(cfg);
  RunSummary run = run_protocol(state, standard_chsh_measurements(),
                                cfg.simulate_rounds, seed);
  const BetaEstimate& est = run.estimate;

  double beta_lo = std::clamp(est.beta_hat - est.confidence_radius, -4.0, 4.0);
  double dec_at_estimate = dec_bound_clamped(est.beta_hat);
  double dec_conservative = dec_bound_clamped(beta_lo);
  double lambda_hat = lambda_from_beta(est.beta_hat);
  double lambda_lo = lambda_from_beta(beta_lo);
  double gpt_conservative = gpt_dec_bound(lambda_lo);

  if (format == "json") {
    std::ofstream out = open_output(out_path);
    ordered_json doc;
    doc["subcommand"] = "simulate";
    doc["seed"] = seed;
    doc["estimate"] = {{"beta_hat", est.beta_hat},
                       {"n_rounds", est.n_rounds},
                       {"confidence_radius", est.confidence_radius},
                       {"confidence_level", est.confidence_level}};
    doc["bounds"] = {{"lambda_hat", lambda_hat},
                     {"lambda_conservative", lambda_lo},
                     {"dec_bound_at_estimate", dec_at_estimate},
                     {"dec_bound_conservative", dec_conservative},
                     {"gpt_dec_bound_conservative", gpt_conservative}};
    doc["counts"] = ordered_json::array();
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            doc["counts"].push_back(
                {{"x", x},
                 {"y", y},
                 {"a", a},
                 {"b", b},
                 {"count", run.counts[2 * x + y][2 * a + b]}});
    out << doc.dump(2) << "\n";
    return;
  }

  std::ofstream out = open_output(out_path);
  CsvWriter csv(out, {"beta_hat", "n_rounds", "confidence_radius",
                      "confidence_level", "lambda_hat",
                      "dec_bound_at_estimate", "dec_bound_conservative",
                      "gpt_dec_bound_conservative"});
  csv.write_row({format_number(est.beta_hat), std::to_string(est.n_rounds),
                 format_number(est.confidence_radius),
                 format_number(est.confidence_level), format_number(lambda_hat),
                 format_number(dec_at_estimate), format_number(dec_conservative),
                 format_number(gpt_conservative)});

  std::ofstream counts = open_output(derived_path(out_path, "counts"));
  CsvWriter ccsv(counts, {"x", "y", "a", "b", "count"});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          ccsv.write_row({std::to_string(x), std::to_string(y),
                          std::to_string(a), std::to_string(b),
                          std::to_string(run.counts[2 * x + y][2 * a + b])});
}

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

std::array<double, 4> random_bell_probs(std::mt19937_64& gen) {
  auto uniform = [&gen]() {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  std::array<double, 4> p{};
  double sum = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - uniform());
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

void renormalize(std::array<double, 4>& p) {
  double s = p[0] + p[1] + p[2] + p[3];
  for (double& v : p) v /= s;
}

bool run_certify(const Config& cfg, std::ostream& report_out) {
  std::vector<CheckResult> checks;
  char buf[160];

  {  // SDP certificate battery, including boundary cases with zero entries.
    std::mt19937_64 gen(cfg.certify_seed);
    int failures = 0;
    double worst = 0.0;
    for (int i = 0; i < cfg.certificate_states; ++i) {
      std::array<double, 4> p = random_bell_probs(gen);
      if (i % 5 == 3) {
        p[i % 4] = 0.0;
        renormalize(p);
      }
      if (i % 10 == 7) {
        p[0] = p[1] = 0.0;
        renormalize(p);
      }
      CertificateReport rep = sdp_certificates_check(p);
      worst = std::max(worst, rep.max_residual);
      if (!rep.passed) ++failures;
    }
    std::snprintf(buf, sizeof(buf), "%d states, %d failures, worst residual %.3g",
                  cfg.certificate_states, failures, worst);
    checks.push_back({"sdp-certificates", failures == 0, buf});
  }

  {  // Numeric max-entropy oracle against the closed form.
    std::mt19937_64 gen(cfg.certify_seed + 1);
    double worst = 0.0;
    bool ok = true;
    std::string detail;
    try {
      for (int i = 0; i < cfg.oracle_states; ++i) {
        std::array<double, 4> p = random_bell_probs(gen);
        BellDiagonalState bds(p);
        double numeric = hmax_numeric_oracle(bds.to_state());
        double closed = hmax_bell_diagonal(bds);
        worst = std::max(worst, std::abs(numeric - closed));
      }
      ok = worst <= 1e-6;
      std::snprintf(buf, sizeof(buf), "%d states, worst |numeric - closed| = %.3g",
                    cfg.oracle_states, worst);
      detail = buf;
    } catch (const NonConvergenceError& e) {
      ok = false;
      detail = e.what();
    }
    checks.push_back({"hmax-oracle", ok, detail});
  }

  {  // LP threshold and setting-choice invariance.
    double d75 = delta_of_lambda(0.75);
    double d76 = delta_of_lambda(0.76);
    double d90 = delta_of_lambda(0.90);
    double d90y = delta_of_lambda(0.90, DeltaLpOptions{0, 1});
    double d90z = delta_of_lambda(0.90, DeltaLpOptions{1, 0});
    bool ok = std::abs(d75) <= 1e-9 && d76 > 1e-6 &&
              std::abs(d90 - 0.3) <= 1e-8 && std::abs(d90y - d90) <= 1e-9 &&
              std::abs(d90z - d90) <= 1e-9;
    std::snprintf(buf, sizeof(buf),
                  "delta(0.75)=%.3g delta(0.76)=%.6g delta(0.9)=%.10g "
                  "(y1 %.3g, z1 %.3g off)",
                  d75, d76, d90, std::abs(d90y - d90), std::abs(d90z - d90));
    checks.push_back({"lp-threshold", ok, buf});
  }

  {  // Classical relations used by the GPT bound proof.
    std::mt19937_64 gen(cfg.certify_seed + 2);
    auto uniform = [&gen]() {
      return static_cast<double>(gen() >> 11) * 0x1.0p-53;
    };
    bool ok = true;
    for (int i = 0; i < 500 && ok; ++i) {
      int len = 2 + static_cast<int>(gen() % 7);
      std::vector<double> p(len), q(len);
      double sp = 0, sq = 0;
      for (int j = 0; j < len; ++j) {
        p[j] = -std::log(1.0 - uniform());
        q[j] = -std::log(1.0 - uniform());
        sp += p[j];
        sq += q[j];
      }
      for (int j = 0; j < len; ++j) {
        p[j] /= sp;
        q[j] /= sq;
      }
      double b = classical_fidelity(p, q);
      double d = tv_distance(p, q);
      ok = 2.0 * (1.0 - b) >= d * d - 1e-12;
    }
    for (double x = 1e-3; x <= 1.0 && ok; x += 1e-3)
      ok = -std::log2(x * x) >= 2.0 * (1.0 - x) - 1e-12;
    checks.push_back({"classical-relations",  ok,
                      "2(1-b) >= d^2 on 500 pairs; -log(x^2) >= 2(1-x) on grid"});
  }

  {  // Bound endpoints and inversion round trip.
    double d0 = dec_bound_quantum(kTwoSqrtTwo);
    double f0 = f_of_v(kTwoSqrtTwo);
    double rt = beta_fals(dec_bound_quantum(2.5));
    bool ok = std::abs(d0 - 0.25) <= 1e-9 && std::abs(f0 - 1.0) <= 1e-9 &&
              std::abs(rt - 2.5) <= 1e-9;
    std::snprintf(buf, sizeof(buf),
                  "dec(2sqrt2)=%.12g f(2sqrt2)=%.12g round-trip beta=%.12g",
                  d0, f0, rt);
    checks.push_back({"bound-endpoints", ok, buf});
  }

  bool all = true;
  ordered_json doc;
  doc["subcommand"] = "certify";
  doc["checks"] = ordered_json::array();
  for (const CheckResult& c : checks) {
    all = all && c.passed;
    doc["checks"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  doc["passed"] = all;
  report_out << doc.dump(2) << "\n";
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"device-independent decoherence bounds from CHSH statistics"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "config file (default: $DECOBOUND_CONFIG or built-ins)");

  std::string region_out = "region.csv", region_fmt = "csv";
  int region_grid = 0;
  CLI::App* region = app.add_subcommand("region", "Dec bounds vs CHSH value");
  region->add_option("--out", region_out, "output path");
  region->add_option("--format", region_fmt, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  region->add_option("--grid", region_grid, "number of beta samples");

  std::string channels_out = "channels.csv", channels_fmt = "csv";
  int channels_grid = 0;
  CLI::App* channels =
      app.add_subcommand("channels", "parametric channel curves");
  channels->add_option("--out", channels_out, "output path");
  channels->add_option("--format", channels_fmt, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  channels->add_option("--grid", channels_grid, "noise samples per channel");

  std::string optomech_out = "optomech.csv", optomech_fmt = "csv";
  CLI::App* optomech =
      app.add_subcommand("optomech", "gravitational-decoherence model curves");
  optomech->add_option("--out", optomech_out, "output path");
  optomech->add_option("--format", optomech_fmt, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string simulate_out = "simulate.csv", simulate_fmt = "csv";
  std::int64_t simulate_seed = -1;
  CLI::App* simulate =
      app.add_subcommand("simulate", "finite-round CHSH simulation");
  simulate->add_option("--out", simulate_out, "output path");
  simulate->add_option("--format", simulate_fmt, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--seed", simulate_seed, "override the config seed");

  std::string certify_out;
  CLI::App* certify =
      app.add_subcommand("certify", "run the certificate/oracle battery");
  certify->add_option("--out", certify_out, "report path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg = effective_config(config_path);
    if (region->parsed()) {
      cmd_region(cfg, region_out, region_fmt, region_grid);
    } else if (channels->parsed()) {
      cmd_channels(cfg, channels_out, channels_fmt, channels_grid);
    } else if (optomech->parsed()) {
      cmd_optomech(cfg, optomech_out, optomech_fmt);
    } else if (simulate->parsed()) {
      cmd_simulate(cfg, simulate_out, simulate_fmt, simulate_seed);
    } else if (certify->parsed()) {
      bool ok;
      if (certify_out.empty()) {
        ok = run_certify(cfg, std::cout);
      } else {
        std::ofstream out = open_output(certify_out);
        ok = run_certify(cfg, out);
      }
      if (!ok) return kExitCertify;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NonConvergenceError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}
