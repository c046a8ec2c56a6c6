#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rankpromo/core.hpp"
#include "rankpromo/ranking.hpp"
#include "rankpromo/visits.hpp"

namespace rankpromo {

/// Popularity-to-visit-rate map, usable at any x in [0,1].
using VisitRateFn = std::function<double(double)>;

/// Numeric representation of F(x): a sampled table on a log grid over (0,1],
/// a fitted quadratic in log-log space, and a separately stored F(0).
/// Evaluation interpolates the table (log-log); the fit is the symbolic form
/// used for reporting and for the table/fit agreement invariant.
struct VisitFunction {
  std::vector<double> grid;   // ascending x values, last one is 1
  std::vector<double> table;  // F at grid points
  double alpha = 0.0;         // log F = alpha*(log x)^2 + beta*log x + gamma
  double beta = 0.0;
  double gamma = 0.0;
  double f_zero = 0.0;        // F(0)
  bool converged = true;
  int iterations = 0;

  double operator()(double x) const;
  double fit_eval(double x) const;
  double max_fit_residual() const;  // max relative |table - fit| on the grid

  /// Standard 50-point log grid on (0,1].
  static std::vector<double> default_grid(int points = 50, double x_min = 1e-9);

  static VisitFunction constant(double f0);
  /// Degenerate "random ranking" closed form: F(x) = v / n.
  static VisitFunction random_ranking(double v, long n);
  /// Degenerate "proportional traffic" closed form: F(x) = v * x / phi,
  /// with F(0) = 0.
  static VisitFunction proportional(double v, double phi);

  /// Columns: x, F_table, F_fit. The first row is x = 0 with F(0) twice.
  void write_csv(std::ostream& os) const;
};

/// Steady-state distribution of awareness levels a_i = i/m for pages of one
/// quality value.
struct AwarenessDistribution {
  std::vector<double> probs;  // size m + 1
  double quality = 0.0;

  long m() const { return static_cast<long>(probs.size()) - 1; }
};

/// Closed-form steady state (Theorem-1 style product formula), entries
/// i = 0..m-1; the terminal entry is the complement mass. Throws
/// std::domain_error if the complement is negative beyond tolerance.
AwarenessDistribution awareness_closed_form(double q, const VisitRateFn& F, double lambda, long m);

/// Exact stationary distribution of the awareness birth/death chain with
/// step-up rate F(q*a_i)*(1-a_i) and death rate lambda back to zero.
/// Normalized to sum 1; used as the independent oracle.
AwarenessDistribution awareness_markov(double q, const VisitRateFn& F, double lambda, long m);

/// Expected number of zero-awareness pages: n * lambda / (lambda + F(0)).
double estimate_z(long n, double lambda, double f_zero);

/// Expected visit rate of one zero-awareness page under selective promotion
/// with pool size ~z: (1/z) * sum_{i=k}^{min(n,k+ceil(z/r)-1)} r * f2(i).
double f_zero_selective(int k, double r, double z, const RankVisitModel& f2);

/// Expected-rank machinery (F1 and its selective variant) for a community
/// whose steady-state awareness is induced by a given F.
class ExpectedRankModel {
 public:
  ExpectedRankModel(const std::vector<double>& qualities, const VisitRateFn& F,
                    double lambda, long m);

  /// F1(x): one plus the expected number of pages with popularity above x.
  double f1_nonrandomized(double x) const;

  /// F1'(x) for selective promotion; valid for x > 0. With r = 1 the
  /// displacement is unbounded and capped at z.
  double f1_selective(double x, int k, double r, double z) const;

  const std::vector<AwarenessDistribution>& distributions() const { return dists_; }

 private:
  std::vector<double> qualities_;
  long m_;
  std::vector<AwarenessDistribution> dists_;          // one per page
  std::vector<std::vector<double>> tail_;             // tail_[p][i] = sum_{j>=i} probs[j]
};

enum class SolverMode { deterministic, selective, random_ranking, proportional };

struct SolverOptions {
  SolverMode mode = SolverMode::deterministic;
  int k = 1;
  double r = 0.0;
  double damping = 0.5;     // new = damping*rhs + (1-damping)*old; 1.0 = plain iteration
  double tolerance = 1e-4;  // max relative change on the grid
  int max_iterations = 100;
  int grid_points = 50;
  double grid_min = 1e-9;
  double endpoint_weight = 10.0;  // extra fit weight on the extreme grid points
};

/// Fixed-point solve of F(x) = f2(F1_rule(x)) on the grid, with the F(0)
/// channel coupled through estimate_z / f_zero_selective. The degenerate
/// modes return their closed forms directly.
VisitFunction solve_visit_function(const std::vector<double>& qualities, double v,
                                   double lambda, long m, const SolverOptions& options);

/// Convenience wrapper taking community + ranking config (rule none or
/// selective; uniform has no analytic form here).
VisitFunction solve_visit_function(const CommunityConfig& community,
                                   const RankingConfig& ranking);

/// Analytic quality-per-click. Throws std::domain_error on zero denominator.
double qpc_analytic(const std::vector<double>& qualities, const VisitRateFn& F,
                    double lambda, long m);

/// Expected days for a surviving page of quality q to reach awareness
/// ceil(threshold*m)/m: summed sojourn times of the pure-birth chain.
/// Returns +infinity when some required F(q*a_i) is zero.
double tbp_analytic(double q, const VisitRateFn& F, double lambda, long m,
                    double threshold = 0.99);

}  // namespace rankpromo
