// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances and brackets are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "core/bench.hpp"
#include "core/canonical.hpp"
#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/lbe.hpp"
#include "core/reference.hpp"
#include "core/simulate.hpp"

using namespace lbex;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

std::string repo(const std::string& rel) { return std::string(LBEX_REPO_DIR) + "/" + rel; }

std::string scratch(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("lbex_acceptance_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

struct Check {
    std::string detail;
    bool ok = true;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

void criterion(int number, const std::string& title, double time_limit_s,
               const std::function<void(Check&)>& body) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.ok = false;
        check.detail += std::string(check.detail.empty() ? "" : "; ") + "exception: " + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit_s > 0.0 && elapsed >= time_limit_s) {
        check.ok = false;
        check.detail += (check.detail.empty() ? "" : "; ") + std::string("over time limit ") +
                        std::to_string(time_limit_s) + " s";
    }
    if (!check.ok) ++g_failures;
    std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", check.ok ? "PASS" : "FAIL", number,
                title.c_str(), elapsed, check.detail.empty() ? "" : " -- ",
                check.detail.c_str());
    std::fflush(stdout);
}

std::shared_ptr<const PolynomialModel> load_model(const std::string& rel) {
    return std::make_shared<const PolynomialModel>(parse_model_file(repo(rel)));
}

std::map<Regressor, mpq_class> random_rational_point(const PolynomialModel& model,
                                                     std::mt19937_64& rng) {
    std::map<Regressor, mpq_class> point;
    std::uniform_int_distribution<long> num(-500, 500);
    std::uniform_int_distribution<long> den(1, 64);
    for (const Term& t : model.terms) {
        for (const Regressor& r : t.regressors) {
            if (!point.count(r)) {
                mpq_class q(num(rng), den(rng));
                q.canonicalize();
                point[r] = q;
            }
        }
    }
    return point;
}

void spin_for(double seconds) {
    using clock = std::chrono::steady_clock;
    const auto until = clock::now() + std::chrono::duration<double>(seconds);
    while (clock::now() < until) {
    }
}

}  // namespace

int main() {
    // 1. Extension equivalence: the published F/G pairs canonicalize to the
    //    same exact polynomial and agree exactly on random rational inputs.
    criterion(1, "extension equivalence (symbolic + 100 exact rational samples)", 1.0,
              [](Check& check) {
                  auto duffing = load_model("models/duffing_ueda.model");
                  EvaluationPlan df = canonical_plan(duffing, "F");
                  EvaluationPlan dg = rewrite_grouping(df, 5, "(c*(y0*y0))*y0");
                  check.expect(equivalent(df, dg), "duffing F/G not equivalent");

                  auto chua = load_model("models/chua.model");
                  EvaluationPlan cg = canonical_plan(chua, "G");
                  EvaluationPlan cf = rewrite_grouping(cg, 5, "(c*(y0*y0))*y1");
                  check.expect(equivalent(cf, cg), "chua F/G not equivalent");

                  std::mt19937_64 rng(20260811);
                  for (int i = 0; i < 50; ++i) {
                      auto p1 = random_rational_point(*duffing, rng);
                      check.expect(evaluate_exact(df, p1) == evaluate_exact(dg, p1),
                                   "duffing rational sample disagrees");
                      auto p2 = random_rational_point(*chua, rng);
                      check.expect(evaluate_exact(cf, p2) == evaluate_exact(cg, p2),
                                   "chua rational sample disagrees");
                  }
              });

    // 2. The LBE bound: the triangle-inequality identity on 1e5 random
    //    triples with zero tolerance, plus a real verification run for Chua.
    criterion(2, "LBE theorem: 1e5 random triples + chua/256-bit over 400 iterations", 10.0,
              [](Check& check) {
                  std::mt19937_64 rng(424242);
                  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
                  std::uniform_int_distribution<int> exponent(-120, 120);
                  long violations = 0;
                  for (long i = 0; i < 100000; ++i) {
                      const double r = std::ldexp(mantissa(rng), exponent(rng));
                      const double a = std::ldexp(mantissa(rng), exponent(rng));
                      const double b = std::ldexp(mantissa(rng), exponent(rng));
                      if (std::max(std::fabs(r - a), std::fabs(r - b)) <
                          std::fabs(a - b) / 2.0) {
                          ++violations;
                      }
                  }
                  check.expect(violations == 0,
                               std::to_string(violations) + " random-triple violations");

                  auto chua = load_model("models/chua.model");
                  InitialConditions init{{1, 1, 1, 1}, InputSignal::none()};
                  EvaluationPlan g = canonical_plan(chua, "G");
                  EvaluationPlan f = rewrite_grouping(g, 5, "(c*(y0*y0))*y1");
                  f.label = "F";
                  PseudoOrbit fo = simulate(*chua, f, init, 400);
                  PseudoOrbit go = simulate(*chua, g, init, 400);
                  ReferenceOrbit ref = simulate_reference(*chua, init, 400, 256);
                  const long trusted = trusted_prefix(*chua, init, 400, 256);
                  check.expect(trusted >= 400, "trust window below 400: " +
                                                   std::to_string(trusted));
                  VerificationReport report = verify_theorem(ref, trusted, fo, go, 400);
                  check.expect(report.violations == 0,
                               std::to_string(report.violations) + " margin violations");
              });

    // 3. Horizon brackets for the bundled experiments at epsilon = 0.001.
    criterion(3, "reliability horizons: duffing in [1000,20000], chua in [100,2000]", 5.0,
              [](Check& check) {
                  ExperimentSpec duffing =
                      load_experiment_file(repo("experiments/duffing_ueda.exp"));
                  InitialConditions dinit{duffing.seed, duffing.input};
                  PseudoOrbit da =
                      simulate(*duffing.model, duffing.plans[0], dinit, duffing.iterations);
                  PseudoOrbit db =
                      simulate(*duffing.model, duffing.plans[1], dinit, duffing.iterations);
                  HorizonReport dh = reliability_horizon(da, db, 0.001);
                  check.expect(dh.horizon.has_value(), "duffing horizon not found");
                  if (dh.horizon) {
                      check.expect(*dh.horizon >= 1000 && *dh.horizon <= 20000,
                                   "duffing horizon " + std::to_string(*dh.horizon) +
                                       " outside [1000, 20000]");
                  }

                  ExperimentSpec chua = load_experiment_file(repo("experiments/chua.exp"));
                  InitialConditions cinit{chua.seed, chua.input};
                  PseudoOrbit ca = simulate(*chua.model, chua.plans[0], cinit, chua.iterations);
                  PseudoOrbit cb = simulate(*chua.model, chua.plans[1], cinit, chua.iterations);
                  HorizonReport ch = reliability_horizon(ca, cb, 0.001);
                  check.expect(ch.horizon.has_value(), "chua horizon not found");
                  if (ch.horizon) {
                      check.expect(*ch.horizon >= 100 && *ch.horizon <= 2000,
                                   "chua horizon " + std::to_string(*ch.horizon) +
                                       " outside [100, 2000]");
                  }
              });

    // 4. Chaotic divergence shape: positive pre-horizon LBE growth for both
    //    systems; identically zero LBE and zero slope for the identity model.
    criterion(4, "LBE growth: positive for duffing/chua, zero for identity", 5.0,
              [](Check& check) {
                  for (const char* name : {"experiments/duffing_ueda.exp", "experiments/chua.exp"}) {
                      ExperimentSpec spec = load_experiment_file(repo(name));
                      InitialConditions init{spec.seed, spec.input};
                      PseudoOrbit a = simulate(*spec.model, spec.plans[0], init, spec.iterations);
                      PseudoOrbit b = simulate(*spec.model, spec.plans[1], init, spec.iterations);
                      LbeSeries lbe = lower_bound_error(a, b);
                      HorizonReport horizon = reliability_horizon(a, b, 0.001);
                      const long hi =
                          horizon.horizon ? *horizon.horizon : static_cast<long>(lbe.values.size());
                      const double slope = lbe_growth_rate(lbe, 0, hi);
                      check.expect(slope > 0.0, std::string(name) + ": slope " +
                                                    std::to_string(slope) + " not > 0");
                  }

                  auto identity = load_model("models/identity.model");
                  InitialConditions init{{0.5}, InputSignal::none()};
                  PseudoOrbit a = simulate(*identity, canonical_plan(identity, "F"), init, 500);
                  PseudoOrbit b = simulate(*identity, canonical_plan(identity, "G"), init, 500);
                  LbeSeries lbe = lower_bound_error(a, b);
                  double max_lbe = 0.0;
                  for (double v : lbe.values) max_lbe = std::max(max_lbe, v);
                  check.expect(max_lbe == 0.0, "identity LBE not identically zero");
                  check.expect(lbe_growth_rate(lbe, 0, 500) == 0.0,
                               "identity growth rate not zero");
              });

    // 5. Determinism: consecutive runs of each bundled experiment produce
    //    bit-identical orbit CSVs (checksum equality).
    criterion(5, "determinism: re-running bundled experiments reproduces orbit CSVs", 0.0,
              [](Check& check) {
                  for (const char* name : {"experiments/duffing_ueda.exp", "experiments/chua.exp",
                                           "experiments/logistic.exp"}) {
                      ExperimentSpec spec = load_experiment_file(repo(name));
                      spec.output_dir = scratch(spec.name + "_run1");
                      ExperimentResult first = run_experiment(spec, RunKind::Simulate);
                      spec.output_dir = scratch(spec.name + "_run2");
                      ExperimentResult second = run_experiment(spec, RunKind::Simulate);
                      check.expect(first.outputs.size() == second.outputs.size(),
                                   "output count differs");
                      for (size_t i = 0; i < first.outputs.size(); ++i) {
                          check.expect(first.outputs[i].fnv1a64 == second.outputs[i].fnv1a64,
                                       spec.name + ": checksum mismatch on " +
                                           fs::path(first.outputs[i].path).filename().string());
                      }
                  }
              });

    // 6. Benchmark harness on synthetic injected durations.
    criterion(6, "benchmark harness: 1/2/4 ratios within 20%, exact std/mean recomputation", 0.0,
              [](Check& check) {
                  const double unit = 0.020;
                  std::vector<TimingStats> stats;
                  for (int factor : {1, 2, 4}) {
                      stats.push_back(time_task("unit" + std::to_string(factor),
                                                [&] { spin_for(unit * factor); }, 5));
                  }
                  std::vector<RatioRow> rows = compare_stats(stats);
                  const double targets[3] = {1.0, 2.0, 4.0};
                  for (int i = 0; i < 3; ++i) {
                      const double rel = std::fabs(rows[i].mean_ratio - targets[i]) / targets[i];
                      check.expect(rel <= 0.20, "ratio " + std::to_string(rows[i].mean_ratio) +
                                                    " not within 20% of " +
                                                    std::to_string(targets[i]));
                  }

                  TimingStats constant = stats_from_samples("const", {0.5, 0.5, 0.5});
                  check.expect(constant.std_s == 0.0, "constant-sample std not exactly 0");

                  for (const TimingStats& s : stats) {
                      double mean = 0.0;
                      for (double v : s.samples) mean += v;
                      mean /= static_cast<double>(s.samples.size());
                      double ss = 0.0;
                      for (double v : s.samples) ss += (v - mean) * (v - mean);
                      const double sd = std::sqrt(ss / static_cast<double>(s.samples.size() - 1));
                      check.expect(std::fabs(mean - s.mean_s) <= 1e-15 * std::fabs(mean) &&
                                       std::fabs(sd - s.std_s) <= 1e-12 * std::max(sd, 1e-12),
                                   "stored mean/std do not match recomputation");
                  }
              });

    // 7. Trivial-orbit suite: zero dynamics stay zero everywhere and the
    //    spec validator rejects identical plans.
    criterion(7, "trivial orbits: zero seed/input => zero orbit/LBE/no horizon; "
                 "identical plans rejected", 0.0,
              [](Check& check) {
                  auto duffing = load_model("models/duffing_ueda.model");
                  InitialConditions init{
                      {0.0, 0.0, 0.0},
                      InputSignal::cosine(Decimal::parse("0"), AngleStep{{}, 60})};
                  EvaluationPlan f = canonical_plan(duffing, "F");
                  EvaluationPlan g = rewrite_grouping(f, 5, "(c*(y0*y0))*y0");
                  g.label = "G";
                  PseudoOrbit a = simulate(*duffing, f, init, 1000);
                  PseudoOrbit b = simulate(*duffing, g, init, 1000);
                  for (double v : a.values) check.expect(v == 0.0, "orbit value not zero");
                  LbeSeries lbe = lower_bound_error(a, b);
                  for (double v : lbe.values) check.expect(v == 0.0, "LBE not zero");
                  HorizonReport horizon = reliability_horizon(a, b, 0.001);
                  check.expect(!horizon.horizon.has_value(), "horizon unexpectedly found");
                  check.expect(horizon.triggered_by == HorizonTrigger::OrbitEnd,
                               "trigger is not orbit-end");

                  bool rejected = false;
                  try {
                      load_experiment_text("model models/chua.model\nextension F = canonical\n"
                                           "extension G = canonical\nseed 1 1 1 1\n"
                                           "iterations 10\n",
                                           repo(""), "inline");
                  } catch (const Error& e) {
                      rejected = e.kind() == ErrorKind::Validation;
                  }
                  check.expect(rejected, "identical plans were not rejected at validation");
              });

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
