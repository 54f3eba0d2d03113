// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nhcz/io.hpp"
#include "nhcz/verify.hpp"
#include "oracles.hpp"

using namespace nhcz;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t seed = 20240611;

struct Instance {
  std::string name;
  DiscreteMeasure mu;
};

DiscreteMeasure normalized(GeneratorSpec spec) { return normalize_ahlfors(generate(spec)); }

DiscreteMeasure segment(Index n) {
  GeneratorSpec spec;
  spec.shape = Shape::segment;
  spec.count = n;
  return normalized(spec);
}

DiscreteMeasure circle(Index n) {
  GeneratorSpec spec;
  spec.shape = Shape::circle;
  spec.count = n;
  return normalized(spec);
}

DiscreteMeasure cantor(int depth) {
  GeneratorSpec spec;
  spec.shape = Shape::cantor;
  spec.cantor_ratio = 0.25;
  spec.cantor_depth = depth;
  return normalized(spec);
}

DiscreteMeasure comb(Index n) {
  GeneratorSpec spec;
  spec.shape = Shape::comb;
  spec.count = n;
  spec.seed = seed;
  return normalized(spec);
}

// The three families at the "N = 2000" scale; cantor depth 6 has 4096 atoms.
std::vector<Instance> families() {
  return {{"segment-2000", segment(2000)}, {"circle-2000", circle(2000)}, {"cantor-d6", cantor(6)}};
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    body(out);
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = elapsed(start);
  if (!out.passed) ++failures;
  std::cout << (out.passed ? "[PASS] " : "[FAIL] ") << id << ". " << name << ":" << out.detail.str()
            << " (" << num(secs) << " s)" << std::endl;
}

void hard_report(Outcome& out, const Instance& inst, const CheckReport& rep) {
  out.detail << " " << inst.name << " " << num(rep.statistic) << "/" << num(rep.bound)
             << " v=" << rep.violations << ";";
  out.require(rep.passed && rep.violations == 0 && rep.statistic <= rep.bound,
              rep.check + " on " + inst.name);
}

bool close_rel(double a, double b, double rel) {
  if (a == b) return true;  // also covers matching infinities
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

/// 50 atoms and 50 points of the bounding box, all with fixed seeds.
std::vector<Point> random_points(const DiscreteMeasure& mu, std::uint64_t stream) {
  Rng rng = trial_rng(seed, stream, 0);
  double x0 = mu.point(0).real(), x1 = x0, y0 = mu.point(0).imag(), y1 = y0;
  for (Index i = 0; i < mu.size(); ++i) {
    x0 = std::min(x0, mu.point(i).real());
    x1 = std::max(x1, mu.point(i).real());
    y0 = std::min(y0, mu.point(i).imag());
    y1 = std::max(y1, mu.point(i).imag());
  }
  const double pad = 0.1 * std::max(x1 - x0, y1 - y0);
  std::vector<Point> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(mu.point(uniform_index(rng, mu.size())));
  for (int i = 0; i < 50; ++i)
    pts.emplace_back(uniform(rng, x0 - pad, x1 + pad), uniform(rng, y0 - pad, y1 + pad));
  return pts;
}

std::string report_bytes(const CheckReport& rep) { return report_json(rep).dump(2); }

std::string report_bytes(const FitReport& f) {
  Json doc{{"report", report_json(f.report)}, {"fit", fit_json(f.fit)}};
  if (f.second) doc["second_fit"] = fit_json(*f.second);
  return doc.dump(2);
}

/// Every verify check on one context, serialized.
std::vector<std::string> all_reports(const DiscreteMeasure& mu, int jobs) {
  VerifyContext ctx = make_context(mu, KernelSpec::cauchy(), seed, jobs, "circle-400");
  const DiscreteMeasure nu = probe_measure(mu, 100, seed);
  const std::vector<Point> pts = probe_points(mu, 100, seed);
  const RealField phi = random_density(mu, seed);
  std::vector<std::string> out;
  out.push_back(report_bytes(check_obvious(ctx, 100)));
  out.push_back(report_bytes(check_truncation81(ctx, 100)));
  out.push_back(report_bytes(check_key_lemma(ctx, 2)));
  out.push_back(report_bytes(check_sublemma(ctx, 100)));
  out.push_back(report_bytes(check_maximal_bounds(ctx, 20)));
  out.push_back(report_bytes(check_mass_function(ctx, nu, {1.0, 10.0, 100.0})));
  out.push_back(report_bytes(check_weak_type_T(ctx, nu)));
  out.push_back(report_bytes(check_weak_type_Tsharp(ctx, nu)));
  out.push_back(report_bytes(check_theorem2(ctx, phi, 2.0, pts)));
  out.push_back(report_bytes(check_star(ctx, cz_disks(nu, mu, 4.0 / mu.weights().sum()), pts)));
  out.push_back(report_bytes(check_cotlar(ctx, phi, 0.5, pts)));
  out.push_back(report_bytes(check_cotlar(ctx, phi, 0.5, pts, true)));
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = "\"" NHCZ_CLI_PATH "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct SweepRow {
  Index n = 0;
  double weak_T = 0.0, weak_Tsharp = 0.0, theorem2 = 0.0, cotlar = 0.0, cotlar_linear = 0.0,
         star = 0.0, star_l2 = 0.0;
};

/// Evenly spaced atoms, the sample the command line uses for the star check.
std::vector<Point> atom_sample(const DiscreteMeasure& mu, Index count) {
  std::vector<Point> out;
  for (Index i = 0; i < count; ++i) out.push_back(mu.point(i * mu.size() / count));
  return out;
}

SweepRow sweep_row(Index n) {
  const DiscreteMeasure mu = segment(n);
  const VerifyContext ctx = make_context(mu, KernelSpec::cauchy(), seed, 1, "segment");
  const DiscreteMeasure nu = probe_measure(mu, 200, seed);
  const std::vector<Point> pts = probe_points(mu, 200, seed);
  const RealField phi = random_density(mu, seed);
  SweepRow row;
  row.n = n;
  row.weak_T = check_weak_type_T(ctx, nu).statistic;
  row.weak_Tsharp = check_weak_type_Tsharp(ctx, nu).statistic;
  row.theorem2 = check_theorem2(ctx, phi, 2.0, pts).report.statistic;
  const FitReport cot = check_cotlar(ctx, phi, 0.5, pts);
  row.cotlar = cot.report.statistic;
  row.cotlar_linear = cot.second->A + cot.second->B;
  const double t = 4.0 * total_variation(nu) / mu.weights().sum();
  const CheckReport star = check_star(ctx, cz_disks(nu, mu, t), atom_sample(mu, 200));
  row.star = star.statistic;
  row.star_l2 = star.metric("l2_constant");
  return row;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Instance> fam = families();

  criterion(1, "obvious lemma, 1000 dipoles per family, bound 2 C0 (1 + 1/eps)", [&](Outcome& out) {
    const auto t0 = std::chrono::steady_clock::now();
    for (const Instance& inst : fam) {
      const VerifyContext ctx = make_context(inst.mu, KernelSpec::cauchy(), seed, 1, inst.name);
      hard_report(out, inst, check_obvious(ctx, 1000));
    }
    const double secs = elapsed(t0);
    out.require(secs < 30.0, "runtime " + num(secs) + " s >= 30 s");
  });

  criterion(2, "truncation, 500 (x, r, F) per family, bound 81 C0, minimal k", [&](Outcome& out) {
    const auto t0 = std::chrono::steady_clock::now();
    for (const Instance& inst : fam) {
      const VerifyContext ctx = make_context(inst.mu, KernelSpec::cauchy(), seed, 1, inst.name);
      const CheckReport rep = check_truncation81(ctx, 500);
      hard_report(out, inst, rep);
      out.require(rep.metric("stop_not_minimal") == 0.0, "minimality on " + inst.name);
    }
    const double secs = elapsed(t0);
    out.require(secs < 30.0, "runtime " + num(secs) + " s >= 30 s");
  });

  criterion(3, "key lemma, segment N in {500, 1000, 2000}, 81 C0 + 2 A1 + 3||T||", [&](Outcome& out) {
    for (Index n : {500, 1000, 2000}) {
      const Instance inst{"segment-" + std::to_string(n), segment(n)};
      VerifyContext ctx = make_context(inst.mu, KernelSpec::cauchy(), seed, 1, inst.name);
      const CheckReport rep = check_key_lemma(ctx, 5);
      hard_report(out, inst, rep);
      out.require(rep.bound == ctx.key_lemma_constant(), "bound formula on " + inst.name);
    }
  });

  criterion(4, "sublemma, 1000 (phi, B) at p in {0.25, 0.5, 0.75}, saturating family", [&](Outcome& out) {
    const std::vector<double> ps{0.25, 0.5, 0.75};
    for (const Instance& inst : {fam[0], fam[2]}) {
      const VerifyContext ctx = make_context(inst.mu, KernelSpec::cauchy(), seed, 1, inst.name);
      const CheckReport rep = check_sublemma(ctx, 1000, ps);
      hard_report(out, inst, rep);
      for (std::size_t j = 0; j < ps.size(); ++j) {
        const double frac = rep.metric("saturating_fraction_p" + std::to_string(j));
        out.detail << " p=" << ps[j] << " frac=" << num(frac) << ";";
        out.require(frac >= (1.0 - ps[j]) * (1.0 - 1e-12), "sharpness at p=" + num(ps[j]));
      }
    }
  });

  criterion(5, "mass function, int m dmu <= 10 C0 ||nu|| over a t grid", [&](Outcome& out) {
    for (const Instance& inst : fam) {
      const VerifyContext ctx = make_context(inst.mu, KernelSpec::cauchy(), seed, 1, inst.name);
      const DiscreteMeasure nu = probe_measure(inst.mu, 200, seed);
      const double t_min = total_variation(nu) / inst.mu.weights().sum();
      std::vector<double> grid;
      const double span = 10.0 * static_cast<double>(inst.mu.size());
      for (int k = 0; k < 24; ++k) grid.push_back(t_min * std::pow(span, k / 23.0));
      const CheckReport rep = check_mass_function(ctx, nu, grid);
      hard_report(out, inst, rep);
      out.require(rep.trials > rep.skipped, "every decomposition exhausted on " + inst.name);
    }
  });

  criterion(6, "maximal L2 norms, 200 phi per family, bound 100", [&](Outcome& out) {
    for (const Instance& inst : fam) {
      const VerifyContext ctx = make_context(inst.mu, KernelSpec::cauchy(), seed, 1, inst.name);
      const CheckReport rep = check_maximal_bounds(ctx, 200);
      hard_report(out, inst, rep);
      out.detail << " M=" << num(rep.metric("max_ratio_M"))
                 << " M~=" << num(rep.metric("max_ratio_Mtilde")) << ";";
    }
  });

  criterion(7, "oracle equivalence at 1e-12, opnorm within 1e-6 of dense SVD", [&](Outcome& out) {
    const KernelSpec k = KernelSpec::cauchy();
    const std::vector<Instance> small{{"segment-500", segment(500)},
                                      {"circle-500", circle(500)},
                                      {"cantor-d4", cantor(4)},
                                      {"comb-500", comb(500)}};
    Index compared = 0;
    for (std::size_t s = 0; s < small.size(); ++s) {
      const DiscreteMeasure& mu = small[s].mu;
      const RealField phi = random_density(mu, seed + s);
      const RealField abs_phi = phi.cwiseAbs();
      Index mismatches = 0;
      for (const Point& x : random_points(mu, 70 + s)) {
        const CenterIndex idx(mu, x);
        const auto check = [&](double lib, double ref) {
          ++compared;
          if (!close_rel(lib, ref, 1e-12)) ++mismatches;
        };
        check(apply_Tsharp(k, mu, idx, phi), oracle::tsharp(k, mu, phi, x));
        check(hl_maximal(idx, abs_phi), oracle::hl(mu, phi, x));
        for (double beta : {1.0, 2.0}) {
          check(radial_maximal(idx, abs_phi, beta), oracle::radial(mu, phi, x, beta));
          check(restricted_maximal(idx, abs_phi, beta).value, oracle::restricted(mu, phi, x, beta));
        }
      }
      out.detail << " " << small[s].name << " mismatches=" << mismatches << ";";
      out.require(mismatches == 0, "oracle mismatch on " + small[s].name);
    }
    out.detail << " values=" << compared << ";";
    const std::vector<Instance> tiny{{"segment-200", segment(200)},
                                     {"circle-200", circle(200)},
                                     {"cantor-d3", cantor(3)},
                                     {"comb-150", comb(150)}};
    for (const Instance& inst : tiny) {
      const OperatorNormEstimate est = opnorm_l2(k, inst.mu);
      const double dense = oracle::opnorm(k, inst.mu);
      out.detail << " " << inst.name << " |opnorm-svd|=" << num(std::abs(est.value - dense)) << ";";
      out.require(est.converged && std::abs(est.value - dense) <= 1e-6, "opnorm on " + inst.name);
    }
  });

  criterion(8, "fitted constants vary < 2x over segment N in {500, 1000, 2000, 4000}", [&](Outcome& out) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<SweepRow> rows;
    for (Index n : {500, 1000, 2000, 4000}) rows.push_back(sweep_row(n));
    const std::vector<std::pair<std::string, double SweepRow::*>> columns{
        {"weak-T", &SweepRow::weak_T},       {"weak-Tsharp", &SweepRow::weak_Tsharp},
        {"theorem2", &SweepRow::theorem2},   {"cotlar", &SweepRow::cotlar},
        {"cotlar-linear", &SweepRow::cotlar_linear}, {"star-A5", &SweepRow::star}};
    for (const auto& [name, field] : columns) {
      double lo = rows.front().*field, hi = lo;
      out.detail << " " << name << " [";
      for (const SweepRow& r : rows) {
        lo = std::min(lo, r.*field);
        hi = std::max(hi, r.*field);
        out.detail << (&r == &rows.front() ? "" : " ") << num(r.*field);
      }
      const double ratio = lo > 0.0 ? hi / lo : (hi == 0.0 ? 1.0 : INFINITY);
      out.detail << "] x" << num(ratio) << ";";
      out.require(ratio < 2.0, name + " ratio " + num(ratio));
    }
    // Reported only: t int |sigma|^2 dmu / ||nu|| at t = 4 ||nu|| / mu(X) is not a fitted constant.
    out.detail << " star-l2 [";
    for (const SweepRow& r : rows) out.detail << (&r == &rows.front() ? "" : " ") << num(r.star_l2);
    out.detail << "];";
    const double secs = elapsed(t0);
    out.require(secs < 600.0, "sweep runtime " + num(secs) + " s");
  });

  criterion(9, "cantor depth 3..5: empirical weak constant growth vs assembled bound", [&](Outcome& out) {
    std::vector<double> norms, empirical, bounds;
    for (int depth : {3, 4, 5}) {
      const DiscreteMeasure mu = cantor(depth);
      VerifyContext ctx = make_context(mu, KernelSpec::cauchy(), seed, 1, "cantor");
      ctx.ensure_opnorm();
      const CheckReport rep = check_weak_type_T(ctx, probe_measure(mu, 200, seed));
      norms.push_back(*ctx.opnorm);
      empirical.push_back(rep.metric("exact_sup"));
      bounds.push_back(rep.bound);
      out.detail << " d=" << depth << " ||T||=" << num(*ctx.opnorm) << " emp=" << num(empirical.back())
                 << " bound=" << num(bounds.back()) << ";";
      out.require(rep.passed && empirical.back() <= bounds.back(), "weak bound at depth " + std::to_string(depth));
    }
    for (std::size_t i = 1; i < norms.size(); ++i) {
      out.require(norms[i] > norms[i - 1], "||T|| not increasing with depth");
      const double emp_growth = empirical[i] / empirical[0];
      const double bound_growth = bounds[i] / bounds[0];
      const double ratio = emp_growth / bound_growth;
      out.detail << " growth d" << i + 3 << "/d3 emp=" << num(emp_growth)
                 << " bound=" << num(bound_growth) << " ratio=" << num(ratio) << ";";
      out.require(ratio <= 2.0, "growth ratio " + num(ratio));
    }
  });

  criterion(10, "byte-identical reports on repetition and under --jobs 4", [&](Outcome& out) {
    const DiscreteMeasure mu = circle(400);
    const std::vector<std::string> a = all_reports(mu, 1), b = all_reports(mu, 1),
                                   c = all_reports(mu, 4);
    Index differ = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i] || a[i] != c[i]) ++differ;
    out.detail << " library checks=" << a.size() << " differing=" << differ << ";";
    out.require(differ == 0, "library reports differ");

    const fs::path dir = fs::temp_directory_path() / "nhcz_acceptance";
    fs::create_directories(dir);
    const std::string m = (dir / "m.json").string();
    out.require(run_cli("gen --shape circle --n 300 --out \"" + m + "\"") == 0, "cli gen");
    const std::string m_norm = (dir / "mn.json").string();
    out.require(run_cli("normalize --measure \"" + m + "\" --out \"" + m_norm + "\"") == 0,
                "cli normalize");
    Index cli_differ = 0, runs = 0;
    for (const std::string check : {"obvious", "trunc81", "key-lemma", "sublemma", "maximal", "weak-T",
                                    "weak-Tsharp", "theorem2", "star", "cotlar"}) {
      std::vector<std::string> bytes;
      for (const std::string jobs : {"1", "1", "4"}) {
        const std::string report = (dir / (check + "_" + jobs + ".json")).string();
        run_cli("verify --check " + check + " --measure \"" + m_norm +
                "\" --trials 40 --seed 7 --jobs " + jobs + " --report \"" + report + "\"");
        bytes.push_back(fs::exists(report) ? read_file(report) : std::string());
        fs::remove(report);
      }
      ++runs;
      if (bytes[0].empty() || bytes[0] != bytes[1] || bytes[0] != bytes[2]) ++cli_differ;
    }
    fs::remove_all(dir);
    out.detail << " cli checks=" << runs << " differing=" << cli_differ << ";";
    out.require(cli_differ == 0, "cli reports differ");
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << " in " << num(elapsed(start)) << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
