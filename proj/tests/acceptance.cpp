// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Each criterion carries a wall-clock budget that is checked as part of the
// pass condition.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "decobound/bell_sim.hpp"
#include "decobound/entropy.hpp"
#include "decobound/nosignalling.hpp"
#include "decobound/optomech.hpp"
#include "decobound/quantum.hpp"
#include "decobound/quantum_bound.hpp"

using namespace decobound;

namespace {

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<bool(std::string&)> body;
};

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::array<double, 4> random_bell_probs(std::mt19937_64& gen) {
  std::array<double, 4> p{};
  double sum = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - uniform01(gen));
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

double dec_bound_clamped(double beta) {
  if (beta <= 2.0) return 1.0;
  return dec_bound_quantum(std::min(beta, kTwoSqrtTwo));
}

bool criterion_endpoints(std::string& detail) {
  double d_ts = dec_bound_quantum(kTwoSqrtTwo);
  double d_mid = dec_bound_quantum(1.0);
  double d_cls = dec_bound_quantum(2.0);
  double f_ts = f_of_v(kTwoSqrtTwo);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "dec(2sqrt2)=%.12g dec(1)=%g dec(2)=%g f(2sqrt2)=%.12g",
                d_ts, d_mid, d_cls, f_ts);
  detail = buf;
  return std::abs(d_ts - 0.25) <= 1e-9 && d_mid == 1.0 && d_cls == 1.0 &&
         std::abs(f_ts - 1.0) <= 1e-9;
}

bool criterion_tightness(std::string& detail) {
  double worst_beta = 0.0, worst_dec = 0.0;
  for (int i = 1; i <= 20; ++i) {
    double beta = 2.0 + (kTwoSqrtTwo - 2.0) * static_cast<double>(i) / 20.0;
    BellDiagonalState s = extremal_bell_state(beta);
    worst_beta = std::max(worst_beta, std::abs(beta_max(s) - beta));
    worst_dec =
        std::max(worst_dec, std::abs(dec_quantum(s) - dec_bound_quantum(beta)));
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "worst |beta_max-beta|=%.3g, worst |dec-bound|=%.3g",
                worst_beta, worst_dec);
  detail = buf;
  return worst_beta <= 1e-9 && worst_dec <= 1e-7;
}

bool criterion_converse(std::string& detail) {
  std::mt19937_64 gen(1003);
  double worst = -1.0;
  for (int i = 0; i < 200; ++i) {
    BellDiagonalState s(random_bell_probs(gen));
    double excess =
        dec_quantum(s) - dec_bound_clamped(std::min(beta_max(s), kTwoSqrtTwo));
    worst = std::max(worst, excess);
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "200 states, worst excess %.3g", worst);
  detail = buf;
  return worst <= 1e-9;
}

bool criterion_entropy_oracles(std::string& detail) {
  std::mt19937_64 gen(1004);
  double worst_oracle = 0.0;
  for (int i = 0; i < 50; ++i) {
    BellDiagonalState s(random_bell_probs(gen));
    worst_oracle = std::max(
        worst_oracle,
        std::abs(hmax_numeric_oracle(s.to_state()) - hmax_bell_diagonal(s)));
  }
  std::mt19937_64 gen2(1005);
  int cert_failures = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::array<double, 4> p = random_bell_probs(gen2);
    if (i % 5 == 3) {
      p[i % 4] = 0.0;
      double s = p[0] + p[1] + p[2] + p[3];
      for (double& v : p) v /= s;
    }
    if (i % 10 == 7) {
      p[0] = p[1] = 0.0;
      double s = p[2] + p[3];
      p[2] /= s;
      p[3] /= s;
    }
    CertificateReport rep = sdp_certificates_check(p);
    if (!rep.passed) ++cert_failures;
    worst_gap = std::max({worst_gap,
                          std::abs(rep.primal_value - rep.expected_value),
                          std::abs(rep.dual_value - rep.expected_value)});
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "oracle worst %.3g (50 states); certificates: %d failures, "
                "worst value gap %.3g (100 states)",
                worst_oracle, cert_failures, worst_gap);
  detail = buf;
  return worst_oracle <= 1e-6 && cert_failures == 0 && worst_gap <= 1e-10;
}

bool criterion_lp_threshold(std::string& detail) {
  bool ok = true;
  for (double lam : {0.5, 0.7, 0.75})
    ok = ok && std::abs(delta_of_lambda(lam)) <= 1e-9;
  double d76 = delta_of_lambda(0.76);
  ok = ok && d76 > 1e-6;
  std::vector<double> vals;
  for (int i = 0; i <= 32; ++i) vals.push_back(delta_of_lambda(i / 32.0));
  for (size_t i = 1; i < vals.size(); ++i)
    ok = ok && vals[i] >= vals[i - 1] - 1e-9;
  for (size_t i = 1; i + 1 < vals.size(); ++i)
    ok = ok && vals[i] <= 0.5 * (vals[i - 1] + vals[i + 1]) + 1e-8;
  char buf[120];
  std::snprintf(buf, sizeof(buf),
                "delta(0.75)=%.3g delta(0.76)=%.6g delta(1)=%.10g, 33-point grid",
                delta_of_lambda(0.75), d76, vals.back());
  detail = buf;
  return ok;
}

bool criterion_cross_theory(std::string& detail) {
  double worst = -1.0;
  for (int i = 1; i < 64; ++i) {
    double beta = 2.0 + (kTwoSqrtTwo - 2.0) * static_cast<double>(i) / 64.0;
    double gpt = gpt_dec_bound(lambda_from_beta(beta));
    double qm = dec_bound_quantum(beta);
    worst = std::max(worst, qm - gpt);
  }
  char buf[100];
  std::snprintf(buf, sizeof(buf), "63 grid points, worst qm-gpt excess %.3g", worst);
  detail = buf;
  return worst <= 1e-9;
}

bool criterion_optomech(std::string& detail) {
  OptomechParams al{1.0, 1.0, 1e-10, 1e-9, 2700.0};
  OptomechParams re{1.0, 1.0, 1e-10, 1e-9, 21020.0};
  bool ok = true;

  for (const OptomechParams& p : {al, re}) {
    ok = ok && std::abs(p.period() - 2.0 * M_PI) <= 1e-9;
    for (int i = 0; i < 64; ++i) {
      double t = p.period() * i / 64.0;
      ok = ok && std::abs(dec_of_t(p, t + p.period(), true) -
                          dec_of_t(p, t, true)) <= 1e-12;
      ok = ok && std::abs(beta_mech(p, t + p.period()) - beta_mech(p, t)) <=
                     1e-12;
    }
    ok = ok && std::abs(dec_of_t(p, 0.0, true) - 0.25) <= 1e-12;
    ok = ok && std::abs(beta_mech(p, 0.0) - kTwoSqrtTwo) <= 1e-12;
    ok = ok && std::abs(dec_of_t(p, p.period(), true) - 0.25) <= 1e-9;
    ok = ok && std::abs(beta_mech(p, p.period()) - kTwoSqrtTwo) <= 1e-9;
  }

  OptimalTime best_al = optimal_time(al);
  OptimalTime best_re = optimal_time(re);
  bool gap_al_ok = std::abs(best_al.gap - 0.1) <= 0.05;
  bool gap_re_ok = std::abs(best_re.gap - 0.2) <= 0.05;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "gap(aluminum)=%.6f vs 0.1+-0.05 [%s], gap(rhenium)=%.6f vs "
                "0.2+-0.05 [%s]",
                best_al.gap, gap_al_ok ? "ok" : "out of window", best_re.gap,
                gap_re_ok ? "ok" : "out of window");
  detail = buf;
  return ok && gap_al_ok && gap_re_ok;
}

bool criterion_classical_relations(std::string& detail) {
  std::mt19937_64 gen(1008);
  bool ok = true;
  for (int i = 0; i < 500; ++i) {
    int len = 2 + static_cast<int>(gen() % 7);
    std::vector<double> p(len), q(len);
    double sp = 0, sq = 0;
    for (int j = 0; j < len; ++j) {
      p[j] = -std::log(1.0 - uniform01(gen));
      q[j] = -std::log(1.0 - uniform01(gen));
      sp += p[j];
      sq += q[j];
    }
    for (int j = 0; j < len; ++j) {
      p[j] /= sp;
      q[j] /= sq;
    }
    double b = classical_fidelity(p, q);
    double d = tv_distance(p, q);
    ok = ok && 2.0 * (1.0 - b) >= d * d - 1e-12;
  }
  for (double x = 1e-3; x <= 1.0; x += 1e-3)
    ok = ok && -std::log2(x * x) >= 2.0 * (1.0 - x) - 1e-12;
  detail = "500 distribution pairs and the 1e-3 log-inequality grid";
  return ok;
}

bool criterion_monte_carlo(std::string& detail) {
  TwoQubitState epr = canonical_entangled_state();
  ChshMeasurementSet m = standard_chsh_measurements();
  const std::int64_t n = 1000000;
  int within = 0;
  double mean_bound = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    BetaEstimate est = simulate(epr, m, n, seed);
    if (std::abs(est.beta_hat - kTwoSqrtTwo) <= est.confidence_radius)
      ++within;
    mean_bound += dec_bound_clamped(est.beta_hat);
  }
  mean_bound /= 100.0;
  char buf[140];
  std::snprintf(buf, sizeof(buf),
                "%d/100 runs within the radius; mean Dec bound at the "
                "estimate %.6f",
                within, mean_bound);
  detail = buf;
  return within >= 99 && std::abs(mean_bound - 0.25) <= 0.02;
}

int run_command(const std::string& cmd) { return std::system(cmd.c_str()); }

bool files_identical(const std::string& a, const std::string& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str() && !sa.str().empty();
}

bool criterion_determinism(std::string& detail) {
#ifndef DECOBOUND_CLI_PATH
  detail = "CLI path not compiled in";
  return false;
#else
  std::string cli = DECOBOUND_CLI_PATH;
  char tmpl[] = "/tmp/decobound-acceptance-XXXXXX";
  char* dir_c = mkdtemp(tmpl);
  if (!dir_c) {
    detail = "mkdtemp failed";
    return false;
  }
  std::string dir = dir_c;
  {
    std::ofstream cfg(dir + "/test.cfg");
    cfg << "[optomech]\ntime_samples = 65\n"
        << "[grids]\nregion = 9\nchannels = 9\n"
        << "[simulate]\nrounds = 20000\nseed = 11\n"
        << "[certify]\ncertificate_states = 5\noracle_states = 2\nseed = 3\n";
  }
  struct Run {
    std::string name, args, outs;
  };
  std::vector<Run> runs = {
      {"region", "region --grid 9", "region.csv"},
      {"region-json", "region --grid 9 --format json", "region.json"},
      {"channels", "channels --grid 9", "channels.csv"},
      {"optomech", "optomech", "optomech.csv optomech-summary.csv"},
      {"optomech-json", "optomech --format json", "optomech.json"},
      {"simulate", "simulate", "simulate.csv simulate-counts.csv"},
      {"simulate-json", "simulate --format json", "simulate.json"},
      {"certify", "certify", "certify.json"},
  };
  bool ok = true;
  std::string bad;
  for (const Run& r : runs) {
    for (int rep = 1; rep <= 2; ++rep) {
      std::string rep_dir = dir + "/" + std::to_string(rep);
      run_command("mkdir -p " + rep_dir);
      std::stringstream names(r.outs);
      std::string first;
      names >> first;
      int rc = run_command(cli + " --config " + dir + "/test.cfg " + r.args +
                           " --out " + rep_dir + "/" + first +
                           " >/dev/null 2>&1");
      if (rc != 0) {
        ok = false;
        bad = r.name + " (exit " + std::to_string(rc) + ")";
      }
    }
    std::stringstream names(r.outs);
    std::string f;
    while (names >> f) {
      if (!files_identical(dir + "/1/" + f, dir + "/2/" + f)) {
        ok = false;
        bad = r.name + " (" + f + " differs)";
      }
    }
    if (!ok) break;
  }
  detail = ok ? "8 subcommand runs, byte-identical outputs"
              : "mismatch in " + bad;
  return ok;
#endif
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "quantum bound endpoints", 0.001, criterion_endpoints},
      {2, "tightness of the bound curve", 1.0, criterion_tightness},
      {3, "converse: random states obey the bound", 1.0, criterion_converse},
      {4, "entropy oracle and SDP certificates", 30.0, criterion_entropy_oracles},
      {5, "LP threshold at lambda = 3/4", 10.0, criterion_lp_threshold},
      {6, "no-signalling bound dominates the quantum bound", 10.0,
       criterion_cross_theory},
      {7, "optomech reproduction", 5.0, criterion_optomech},
      {8, "classical fidelity/TV relations", 1.0, criterion_classical_relations},
      {9, "Monte-Carlo pipeline", 60.0, criterion_monte_carlo},
      {10, "CLI determinism", 120.0, criterion_determinism},
  };

  int failures = 0;
  for (Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    double elapsed = 0.0;
    try {
      auto start = std::chrono::steady_clock::now();
      ok = c.body(detail);
      elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
      if (elapsed > c.budget_seconds) {
        ok = false;
        detail += " [over time budget]";
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("[%2d] %s  %s (%.3fs, budget %gs): %s\n", c.id,
                ok ? "PASS" : "FAIL", c.name.c_str(), elapsed,
                c.budget_seconds, detail.c_str());
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
