#ifndef NHCZ_VERIFY_HPP
#define NHCZ_VERIFY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nhcz/decomposition.hpp"
#include "nhcz/kernel.hpp"
#include "nhcz/maximal.hpp"
#include "nhcz/measure.hpp"
#include "nhcz/transform.hpp"

namespace nhcz {

// Executable forms of the inequalities. Checks whose proofs assemble explicit
// constants are hard assertions (zero violations allowed). Checks whose
// constants are only known to exist report fitted constants instead.

struct Witness {
  /// Trial, set or point index that attains the statistic; -1 when none.
  Index trial = -1;
  /// Evaluation point index within the trial, when the trial has several.
  Index point_index = -1;
  Point point{};
  /// Radius (r, rho or t) attached to the witness.
  double radius = 0.0;
  double value = 0.0;
};

struct CheckReport {
  std::string check;
  std::string instance;
  Index atoms = 0;
  std::uint64_t seed = 0;
  std::string kernel;

  Index trials = 0;
  Index skipped = 0;
  Index violations = 0;

  std::string statistic_kind;
  double statistic = 0.0;
  Witness witness;

  bool has_bound = false;
  std::string bound_formula;
  double bound = 0.0;

  bool passed = false;
  double runtime_seconds = 0.0;
  /// Auxiliary statistics in a fixed order.
  std::vector<std::pair<std::string, double>> metrics;

  double metric(const std::string& name) const;
};

struct ConstantFit {
  double A = 0.0;
  double B = 0.0;
  /// max over points of (lhs - A term1 - B term2)^+.
  double residual = 0.0;
  Index sentinel_count = 0;
  Index points = 0;
  /// More than 5% of the points were sentinels.
  bool flagged = false;
};

/// 0 and 121 values 10^(k/20), k = -60..60.
std::vector<double> default_fit_grid();

/// For each B on the grid, A(B) = max (lhs - B term2) / term1 (clamped at 0;
/// points with term1 = 0 must satisfy lhs <= B term2). Returns the pair
/// minimizing A + B, smallest B on ties. Points with a non-finite term are
/// sentinels: excluded and counted.
ConstantFit fit_constants(const RealField& lhs, const RealField& term1, const RealField& term2,
                          const std::vector<double>& grid = default_fit_grid());

/// Everything a check needs besides its own inputs.
struct VerifyContext {
  DiscreteMeasure mu;
  KernelSpec kernel;
  double c0 = 1.0;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string instance;
  /// ||T||_{L^2(mu)}; filled on demand by checks that need it.
  std::optional<double> opnorm;

  double obvious_constant() const;  // A1 = holder_const C0 (1 + 1/eps)
  double truncation_constant() const;  // 81 size_const C0
  double key_lemma_constant() const;  // 81 S C0 + 2 A1 + 3 ||T||
  /// Weak-type constant assembled from the proof of the weak (1,1) bound for T.
  double assembled_weak_constant() const;
  double ensure_opnorm();
};

VerifyContext make_context(DiscreteMeasure mu, KernelSpec kernel, std::uint64_t seed, int jobs = 1,
                           std::string instance = {});

// Instance helpers (all seeded, deterministic).

/// Midpoints between random atoms and their nearest neighbours, deduplicated, in canonical order.
std::vector<Point> probe_points(const DiscreteMeasure& mu, Index count, std::uint64_t seed);

/// Positive atoms of total mass 1 at probe points.
DiscreteMeasure probe_measure(const DiscreteMeasure& mu, Index atoms, std::uint64_t seed);

/// Indicator of a union of 1 to 3 random closed balls centered at atoms.
RealField random_set(const DiscreteMeasure& mu, Rng& rng);

/// Uniform density in [-1, 1] at every atom.
RealField random_density(const DiscreteMeasure& mu, std::uint64_t seed);

/// 32 log-spaced thresholds across the positive range of |field|.
std::vector<double> default_t_grid(const RealField& abs_field, int count = 32);

// Hard checks.

CheckReport check_obvious(const VerifyContext& ctx, Index trials);
CheckReport check_truncation81(const VerifyContext& ctx, Index trials);
CheckReport check_key_lemma(VerifyContext& ctx, Index sets);
CheckReport check_sublemma(const VerifyContext& ctx, Index trials,
                           const std::vector<double>& p_list = {0.25, 0.5, 0.75});
CheckReport check_maximal_bounds(const VerifyContext& ctx, Index trials);
/// int m dmu <= 10 C0 ||nu|| for every non-exhausted decomposition on a t grid.
CheckReport check_mass_function(const VerifyContext& ctx, const DiscreteMeasure& nu,
                                const std::vector<double>& t_grid);

/// Recomputes the statistic of a hard check at its witness.
double replay_witness(VerifyContext& ctx, const CheckReport& report);

// Empirical-constant checks.

struct FitReport {
  CheckReport report;
  ConstantFit fit;
  /// Second fit, when the check has two inequality forms.
  std::optional<ConstantFit> second;
  /// Per-point columns behind the first fit, in the order of `points`.
  std::vector<Point> points;
  RealField lhs, term1, term2;
};

/// max_t t mu{|T nu| > t} / ||nu|| over the grid (default grid when empty).
CheckReport check_weak_type_T(const VerifyContext& ctx, const DiscreteMeasure& nu,
                              std::vector<double> t_grid = {});
CheckReport check_weak_type_Tsharp(const VerifyContext& ctx, const DiscreteMeasure& nu,
                                   std::vector<double> t_grid = {});

FitReport check_theorem2(const VerifyContext& ctx, const RealField& phi, double beta,
                         const std::vector<Point>& points);

/// (a) fitted A5 in sigma# <= M~ sigma + A5 + (2/t) m at points outside E;
/// (b) t int |sigma|^2 dmu.
CheckReport check_star(const VerifyContext& ctx, const CZDecomposition& dec,
                       const std::vector<Point>& points);

/// Both Cotlar forms: T# <= A_p (M |T phi|^p)^(1/p) + B_p M phi and
/// T# <= A M T phi + B M phi. With `restricted`, the maximal function applied
/// to T phi runs over doubling disks only.
FitReport check_cotlar(const VerifyContext& ctx, const RealField& phi, double p,
                       const std::vector<Point>& points, bool restricted = false);

/// sum_{j=1..k} 3^((j+2-k) gamma) against its closed-form bound 3^(2 gamma) / (1 - 3^-gamma).
std::pair<double, double> geometric_tail(double gamma, int k);

}  // namespace nhcz

#endif  // NHCZ_VERIFY_HPP
