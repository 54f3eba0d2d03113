// nhcz: generate instances, evaluate operators, and run the inequality checks.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "nhcz/io.hpp"
#include "nhcz/maximal.hpp"
#include "nhcz/transform.hpp"
#include "nhcz/verify.hpp"

using namespace nhcz;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_input = 2;

struct Options {
  // shared
  std::string measure;
  std::string kernel = "cauchy";
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 1;

  // gen
  std::string shape = "segment";
  Index n = 100;
  double cantor_ratio = 0.25;
  int cantor_depth = 3;

  // eval
  std::string op = "T";
  std::string points;
  std::string phi;
  double r = 0.0;
  double beta = 1.0;

  // opnorm
  double tol = 1e-12;
  int max_iter = 5000;

  // decompose / verify
  std::string nu;
  double t = 0.0;
  std::string check;
  Index trials = 0;
  double p = 0.5;
  bool restricted = false;
  bool assembled = false;
  bool timing = false;
  std::string report;
  std::string csv;
};

std::uint64_t effective_seed(std::uint64_t seed) {
  if (const char* env = std::getenv("NHCZ_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("NHCZ_SEED is not an unsigned integer: ") + env);
    }
  }
  return seed;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_file(path, text);
}

std::vector<Point> points_or_atoms(const Options& o, const DiscreteMeasure& mu) {
  return o.points.empty() ? mu.points() : read_points(o.points);
}

RealField density_or_ones(const Options& o, const DiscreteMeasure& mu) {
  if (o.phi.empty()) return RealField::Ones(mu.size());
  const Json j = Json::parse(read_file(o.phi));
  if (!j.is_array() || static_cast<Index>(j.size()) != mu.size())
    throw Error("--phi must be a JSON array with one value per atom");
  RealField phi(mu.size());
  for (Index i = 0; i < mu.size(); ++i) phi[i] = j[static_cast<std::size_t>(i)].get<double>();
  return phi;
}

std::string csv_header_point() { return "re,im"; }

std::string csv_point(Point p) { return format_number(p.real()) + "," + format_number(p.imag()); }

int run_gen(const Options& o) {
  GeneratorSpec spec;
  spec.shape = parse_shape(o.shape);
  spec.count = o.n;
  spec.seed = effective_seed(o.seed);
  spec.cantor_ratio = o.cantor_ratio;
  spec.cantor_depth = o.cantor_depth;
  const DiscreteMeasure mu = generate(spec);
  emit(o.out, measure_to_json(mu));
  std::cerr << spec.describe() << ": " << mu.size() << " atoms\n";
  return exit_pass;
}

int run_normalize(const Options& o) {
  const DiscreteMeasure mu = read_measure(o.measure);
  const AhlforsConstant a = ahlfors_constant(mu, o.jobs);
  emit(o.out, measure_to_json(normalize_ahlfors(mu, o.jobs)));
  std::cerr << "C0 = " << format_number(a.c0) << "\n";
  return exit_pass;
}

int run_eval(const Options& o) {
  const DiscreteMeasure mu = read_measure(o.measure);
  const KernelSpec k = parse_kernel(o.kernel);
  const std::vector<Point> pts = points_or_atoms(o, mu);
  const RealField phi = density_or_ones(o, mu);
  std::ostringstream out;
  if (o.op == "T") {
    const ComplexField v = transform_field(k, mu, phi, pts, o.jobs);
    out << csv_header_point() << ",value_re,value_im\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const KernelValue z = v[static_cast<Index>(i)];
      out << csv_point(pts[i]) << "," << format_number(z.real()) << "," << format_number(z.imag())
          << "\n";
    }
  } else {
    RealField v;
    const RealField abs_phi = phi.cwiseAbs();
    if (o.op == "Tr") {
      if (!(o.r > 0.0)) throw Error("--r must be positive for Tr");
      v = truncated_field(k, mu, phi, pts, o.r, o.jobs);
    } else if (o.op == "Tsharp") {
      v = tsharp_field(k, mu, phi, pts, o.jobs);
    } else if (o.op == "M") {
      v = hl_maximal_field(mu, abs_phi, pts, o.jobs);
    } else if (o.op == "Mprime") {
      v = radial_maximal_field(mu, abs_phi, pts, o.beta, o.jobs);
    } else if (o.op == "Mtilde") {
      v = restricted_maximal_field(mu, abs_phi, pts, o.beta, o.jobs);
    } else {
      throw Error("unknown --op " + o.op);
    }
    out << csv_header_point() << ",value\n";
    for (std::size_t i = 0; i < pts.size(); ++i)
      out << csv_point(pts[i]) << "," << format_number(v[static_cast<Index>(i)]) << "\n";
  }
  emit(o.out, out.str());
  return exit_pass;
}

int run_opnorm(const Options& o) {
  const DiscreteMeasure mu = read_measure(o.measure);
  const OperatorNormEstimate est = opnorm_l2(parse_kernel(o.kernel), mu, o.tol, o.max_iter, o.jobs);
  const Json j{{"opnorm", est.value},
               {"iterations", est.iterations},
               {"residual", est.residual},
               {"converged", est.converged}};
  emit(o.out, j.dump(2) + "\n");
  return est.converged ? exit_pass : exit_fail;
}

DiscreteMeasure nu_or_probe(const Options& o, const DiscreteMeasure& mu, std::uint64_t seed) {
  return o.nu.empty() ? probe_measure(mu, 200, seed) : read_measure(o.nu);
}

double threshold_or_default(const Options& o, const DiscreteMeasure& nu, const DiscreteMeasure& mu) {
  if (o.t > 0.0) return o.t;
  // Disks then take about a quarter of the mass of mu.
  return 4.0 * total_variation(nu) / mu.total_mass();
}

int run_decompose(const Options& o) {
  const DiscreteMeasure mu = read_measure(o.measure);
  const DiscreteMeasure nu = nu_or_probe(o, mu, effective_seed(o.seed));
  const CZDecomposition dec = cz_disks(nu, mu, threshold_or_default(o, nu, mu));
  emit(o.out, decomposition_json(dec).dump(2) + "\n");
  return exit_pass;
}

/// Every atom when there are at most `count`, otherwise `count` atoms at a fixed stride.
std::vector<Point> atom_sample(const DiscreteMeasure& mu, Index count) {
  if (mu.size() <= count) return mu.points();
  std::vector<Point> out;
  for (Index i = 0; i < count; ++i) out.push_back(mu.point(i * mu.size() / count));
  return out;
}

std::string fit_csv(const FitReport& f) {
  std::ostringstream out;
  out << csv_header_point() << ",lhs,term1,term2\n";
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const Index k = static_cast<Index>(i);
    out << csv_point(f.points[i]) << "," << format_number(f.lhs[k]) << ","
        << format_number(f.term1[k]) << "," << format_number(f.term2[k]) << "\n";
  }
  return out.str();
}

int run_verify(const Options& o) {
  const std::uint64_t seed = effective_seed(o.seed);
  const DiscreteMeasure mu = read_measure(o.measure);
  const std::string instance = std::filesystem::path(o.measure).filename().string();
  VerifyContext ctx = make_context(mu, parse_kernel(o.kernel), seed, o.jobs, instance);
  auto trials_or = [&](Index fallback) { return o.trials > 0 ? o.trials : fallback; };

  CheckReport rep;
  std::optional<FitReport> fit;
  if (o.check == "obvious") {
    rep = check_obvious(ctx, trials_or(1000));
  } else if (o.check == "trunc81") {
    rep = check_truncation81(ctx, trials_or(500));
  } else if (o.check == "key-lemma") {
    rep = check_key_lemma(ctx, trials_or(5));
  } else if (o.check == "sublemma") {
    rep = check_sublemma(ctx, trials_or(1000));
  } else if (o.check == "maximal") {
    rep = check_maximal_bounds(ctx, trials_or(200));
  } else if (o.check == "weak-T" || o.check == "weak-Tsharp") {
    if (o.assembled) ctx.ensure_opnorm();
    const DiscreteMeasure nu = nu_or_probe(o, mu, seed);
    rep = o.check == "weak-T" ? check_weak_type_T(ctx, nu) : check_weak_type_Tsharp(ctx, nu);
  } else if (o.check == "theorem2") {
    const double beta = o.beta > 1.0 ? o.beta : 2.0;
    fit = check_theorem2(ctx, random_density(mu, seed), beta, probe_points(mu, trials_or(200), seed));
    rep = fit->report;
  } else if (o.check == "star") {
    const DiscreteMeasure nu = nu_or_probe(o, mu, seed);
    const CZDecomposition dec = cz_disks(nu, mu, threshold_or_default(o, nu, mu));
    rep = check_star(ctx, dec, atom_sample(mu, trials_or(200)));
  } else if (o.check == "cotlar") {
    fit = check_cotlar(ctx, random_density(mu, seed), o.p, probe_points(mu, trials_or(200), seed),
                       o.restricted);
    rep = fit->report;
  } else {
    throw Error("unknown --check " + o.check);
  }

  Json config{{"subcommand", "verify"},
              {"check", o.check},
              {"measure", instance},
              {"kernel", o.kernel},
              {"trials", o.trials},
              {"seed", seed},
              {"beta", o.beta},
              {"p", o.p},
              {"t", o.t},
              {"nu", o.nu.empty() ? "probe" : std::filesystem::path(o.nu).filename().string()},
              {"restricted", o.restricted},
              {"assembled", o.assembled}};
  Json doc{{"config", std::move(config)}, {"report", report_json(rep, o.timing)}};
  if (fit) {
    doc["fit"] = fit_json(fit->fit);
    if (fit->second) doc["second_fit"] = fit_json(*fit->second);
  }
  if (!o.report.empty()) write_file(o.report, doc.dump(2) + "\n");
  if (!o.csv.empty() && fit) write_file(o.csv, fit_csv(*fit));

  std::cout << rep.check << " " << rep.instance << ": " << rep.statistic_kind << " = "
            << format_number(rep.statistic);
  if (rep.has_bound) std::cout << " (bound " << format_number(rep.bound) << ")";
  std::cout << " violations=" << rep.violations << " " << (rep.passed ? "PASS" : "FAIL") << "\n";
  return rep.passed ? exit_pass : exit_fail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular integrals, maximal functions and their inequalities on discrete measures"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--jobs", o.jobs, "Worker threads (1 is the reference)")->check(CLI::Range(1, 256));
    sub->add_option("--seed", o.seed, "Master seed (NHCZ_SEED overrides)");
  };

  auto* gen = app.add_subcommand("gen", "Generate a test measure");
  gen->add_option("--shape", o.shape, "segment|circle|cantor|comb")->required();
  gen->add_option("--n", o.n, "Atom count (segment, circle, comb)")->check(CLI::PositiveNumber);
  gen->add_option("--cantor-ratio", o.cantor_ratio, "Cantor contraction ratio");
  gen->add_option("--cantor-depth", o.cantor_depth, "Cantor depth");
  gen->add_option("--out", o.out, "Output file (stdout when omitted)");
  add_common(gen);

  auto* norm = app.add_subcommand("normalize", "Rescale a measure to Ahlfors constant 1");
  norm->add_option("--measure", o.measure)->required();
  norm->add_option("--out", o.out);
  add_common(norm);

  auto* eval = app.add_subcommand("eval", "Evaluate an operator at points (CSV)");
  eval->add_option("--op", o.op, "T|Tr|Tsharp|M|Mprime|Mtilde")
      ->check(CLI::IsMember({"T", "Tr", "Tsharp", "M", "Mprime", "Mtilde"}));
  eval->add_option("--kernel", o.kernel);
  eval->add_option("--measure", o.measure)->required();
  eval->add_option("--points", o.points, "Points JSON (defaults to the atoms)");
  eval->add_option("--phi", o.phi, "Density JSON array (defaults to 1)");
  eval->add_option("--r", o.r, "Truncation radius for Tr");
  eval->add_option("--beta", o.beta, "Power for Mprime and Mtilde")->check(CLI::Range(1.0, 1e6));
  eval->add_option("--out", o.out);
  add_common(eval);

  auto* opn = app.add_subcommand("opnorm", "Estimate ||T|| on L^2(mu)");
  opn->add_option("--measure", o.measure)->required();
  opn->add_option("--kernel", o.kernel);
  opn->add_option("--tol", o.tol);
  opn->add_option("--max-iter", o.max_iter)->check(CLI::PositiveNumber);
  opn->add_option("--out", o.out);
  add_common(opn);

  auto* dec = app.add_subcommand("decompose", "Build the disk decomposition of nu at level t");
  dec->add_option("--measure", o.measure)->required();
  dec->add_option("--nu", o.nu, "Measure JSON for nu (probe measure when omitted)");
  dec->add_option("--t", o.t, "Threshold");
  dec->add_option("--out", o.out);
  add_common(dec);

  auto* ver = app.add_subcommand("verify", "Run one inequality check");
  ver->add_option("--check", o.check)
      ->required()
      ->check(CLI::IsMember({"obvious", "trunc81", "key-lemma", "theorem2", "weak-T", "weak-Tsharp",
                             "star", "cotlar", "sublemma", "maximal"}));
  ver->add_option("--measure", o.measure)->required();
  ver->add_option("--kernel", o.kernel);
  ver->add_option("--trials", o.trials, "Trials, sets or points (check-specific default)");
  ver->add_option("--beta", o.beta, "Theorem 2 power (default 2)");
  ver->add_option("--p", o.p, "Cotlar exponent in (0,1)");
  ver->add_option("--t", o.t, "Threshold for star");
  ver->add_option("--nu", o.nu, "Measure JSON for nu (probe measure when omitted)");
  ver->add_flag("--restricted", o.restricted, "Cotlar with the doubling-disk maximal function");
  ver->add_flag("--assembled", o.assembled, "Weak-type checks against the assembled constant");
  ver->add_flag("--timing", o.timing, "Include runtime in the report");
  ver->add_option("--report", o.report, "Report JSON path");
  ver->add_option("--csv", o.csv, "Per-point CSV for fitted checks");
  add_common(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return exit_input;
  }

  try {
    if (gen->parsed()) return run_gen(o);
    if (norm->parsed()) return run_normalize(o);
    if (eval->parsed()) return run_eval(o);
    if (opn->parsed()) return run_opnorm(o);
    if (dec->parsed()) return run_decompose(o);
    if (ver->parsed()) return run_verify(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
