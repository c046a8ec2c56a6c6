#include "rankpromo/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rankpromo {

namespace {

constexpr double kTiny = 1e-300;

double loglerp(double x, double x0, double y0, double x1, double y1) {
  if (y0 <= 0.0 || y1 <= 0.0) {  // degenerate table values, fall back to linear
    double t = (x - x0) / (x1 - x0);
    return y0 + t * (y1 - y0);
  }
  double t = (std::log(x) - std::log(x0)) / (std::log(x1) - std::log(x0));
  return std::exp(std::log(y0) + t * (std::log(y1) - std::log(y0)));
}

/// Weighted least-squares fit of y = a*x^2 + b*x + c via 3x3 normal equations.
void quad_fit(const std::vector<double>& x, const std::vector<double>& y,
              const std::vector<double>& w, double& a, double& b, double& c) {
  double s[5] = {0, 0, 0, 0, 0};  // sum w * x^p
  double t[3] = {0, 0, 0};        // sum w * y * x^p
  for (std::size_t i = 0; i < x.size(); ++i) {
    double xp = 1.0;
    for (int p = 0; p <= 4; ++p) {
      s[p] += w[i] * xp;
      if (p <= 2) t[p] += w[i] * y[i] * xp;
      xp *= x[i];
    }
  }
  double A[3][4] = {{s[4], s[3], s[2], t[2]},
                    {s[3], s[2], s[1], t[1]},
                    {s[2], s[1], s[0], t[0]}};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::abs(A[row][col]) > std::abs(A[pivot][col])) pivot = row;
    std::swap(A[col], A[pivot]);
    for (int row = 0; row < 3; ++row) {
      if (row == col || A[col][col] == 0.0) continue;
      double f = A[row][col] / A[col][col];
      for (int k = col; k < 4; ++k) A[row][k] -= f * A[col][k];
    }
  }
  a = A[0][0] != 0.0 ? A[0][3] / A[0][0] : 0.0;
  b = A[1][1] != 0.0 ? A[1][3] / A[1][1] : 0.0;
  c = A[2][2] != 0.0 ? A[2][3] / A[2][2] : 0.0;
}

void fit_loglog(VisitFunction& f, double endpoint_weight) {
  std::vector<double> lx, ly, w;
  lx.reserve(f.grid.size());
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    if (f.table[i] <= 0.0) continue;
    lx.push_back(std::log(f.grid[i]));
    ly.push_back(std::log(f.table[i]));
    w.push_back(i == 0 || i + 1 == f.grid.size() ? endpoint_weight : 1.0);
  }
  if (lx.size() < 3) {
    f.alpha = f.beta = 0.0;
    f.gamma = ly.empty() ? std::log(kTiny) : ly.back();
    return;
  }
  quad_fit(lx, ly, w, f.alpha, f.beta, f.gamma);
}

/// The F(0) channel is a one-dimensional fixed point coupled through z;
/// damped iteration on it converges too slowly to share the outer loop, so
/// solve it by bisection on g(f0) = f_zero_selective(z(f0)) - f0, which is
/// decreasing in f0 (g is increasing in z's argument but bounded).
double solve_f_zero_channel(int k, double r, long n, double lambda, const RankVisitModel& f2) {
  auto excess = [&](double f0) {
    double z = estimate_z(n, lambda, f0);
    return f_zero_selective(k, r, z, f2) - f0;
  };
  double lo = 0.0;
  double hi = 2.0 * f2.f2(1) + lambda;
  if (excess(hi) >= 0.0) return hi;  // unreachable for sane inputs
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double VisitFunction::operator()(double x) const {
  if (x <= 0.0) return f_zero;
  if (grid.empty()) return f_zero;
  if (x <= grid.front()) {
    // Below the grid, interpolate linearly down to the stored F(0).
    return f_zero + (table.front() - f_zero) * (x / grid.front());
  }
  if (x >= grid.back()) return table.back();
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  std::size_t lo = hi - 1;
  return loglerp(x, grid[lo], table[lo], grid[hi], table[hi]);
}

double VisitFunction::fit_eval(double x) const {
  if (x <= 0.0) return f_zero;
  double lx = std::log(x);
  return std::exp(alpha * lx * lx + beta * lx + gamma);
}

double VisitFunction::max_fit_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double denom = std::max(std::abs(table[i]), kTiny);
    worst = std::max(worst, std::abs(table[i] - fit_eval(grid[i])) / denom);
  }
  return worst;
}

std::vector<double> VisitFunction::default_grid(int points, double x_min) {
  std::vector<double> g(static_cast<std::size_t>(points));
  double lmin = std::log(x_min);
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = std::exp(lmin * (1.0 - static_cast<double>(i) / (points - 1)));
  g.back() = 1.0;
  return g;
}

VisitFunction VisitFunction::constant(double f0) {
  VisitFunction f;
  f.grid = default_grid();
  f.table.assign(f.grid.size(), f0);
  f.alpha = f.beta = 0.0;
  f.gamma = f0 > 0.0 ? std::log(f0) : std::log(kTiny);
  f.f_zero = f0;
  return f;
}

VisitFunction VisitFunction::random_ranking(double v, long n) {
  return constant(v / static_cast<double>(n));
}

VisitFunction VisitFunction::proportional(double v, double phi) {
  if (phi <= 0.0) throw std::invalid_argument("VisitFunction::proportional: phi must be positive");
  VisitFunction f;
  f.grid = default_grid();
  f.table.resize(f.grid.size());
  for (std::size_t i = 0; i < f.grid.size(); ++i) f.table[i] = v * f.grid[i] / phi;
  f.alpha = 0.0;
  f.beta = 1.0;
  f.gamma = std::log(v / phi);
  f.f_zero = 0.0;
  return f;
}

void VisitFunction::write_csv(std::ostream& os) const {
  os << "x,F_table,F_fit\n";
  os << 0.0 << ',' << f_zero << ',' << f_zero << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i)
    os << grid[i] << ',' << table[i] << ',' << fit_eval(grid[i]) << '\n';
}

AwarenessDistribution awareness_closed_form(double q, const VisitRateFn& F, double lambda, long m) {
  if (q <= 0.0 || q > 1.0) throw std::invalid_argument("awareness_closed_form: q must be in (0,1]");
  if (m < 1) throw std::invalid_argument("awareness_closed_form: m must be >= 1");
  if (lambda <= 0.0) throw std::invalid_argument("awareness_closed_form: lambda must be positive");

  AwarenessDistribution dist;
  dist.quality = q;
  dist.probs.assign(static_cast<std::size_t>(m) + 1, 0.0);

  double f0 = F(0.0);
  double log_base = std::log(lambda) - std::log(lambda + f0);
  double log_prod = 0.0;  // running sum of log F(q*a_{j-1}) - log(lambda + F(q*a_j))
  bool dead = false;      // a zero numerator kills all later entries
  double partial = 0.0;
  for (long i = 0; i < m; ++i) {
    double a_i = static_cast<double>(i) / static_cast<double>(m);
    if (i > 0) {
      double a_prev = static_cast<double>(i - 1) / static_cast<double>(m);
      double num = F(q * a_prev);
      if (num <= 0.0) dead = true;
      if (!dead) log_prod += std::log(num) - std::log(lambda + F(q * a_i));
    }
    double p = dead && i > 0 ? 0.0 : std::exp(log_base + log_prod - std::log1p(-a_i));
    dist.probs[static_cast<std::size_t>(i)] = p;
    partial += p;
  }
  double terminal = 1.0 - partial;
  if (terminal < -1e-6)
    throw std::domain_error("awareness_closed_form: negative terminal mass; F is not a valid visit function here");
  dist.probs[static_cast<std::size_t>(m)] = std::max(terminal, 0.0);
  return dist;
}

AwarenessDistribution awareness_markov(double q, const VisitRateFn& F, double lambda, long m) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("awareness_markov: q must be in [0,1]");
  if (m < 1) throw std::invalid_argument("awareness_markov: m must be >= 1");
  if (lambda <= 0.0) throw std::invalid_argument("awareness_markov: lambda must be positive");

  // Balance equations: f_0*(lambda + p_0) = lambda, f_i*(lambda + p_i) =
  // f_{i-1}*p_{i-1}. They are homogeneous in the step length, so subdividing
  // the day leaves the stationary distribution unchanged; solve the rate
  // form directly, in log space to avoid overflow on long chains.
  std::vector<double> up(static_cast<std::size_t>(m) + 1, 0.0);
  for (long i = 0; i <= m; ++i) {
    double a_i = static_cast<double>(i) / static_cast<double>(m);
    up[static_cast<std::size_t>(i)] = std::max(0.0, F(q * a_i) * (1.0 - a_i));
  }

  std::vector<double> logf(static_cast<std::size_t>(m) + 1,
                           -std::numeric_limits<double>::infinity());
  logf[0] = std::log(lambda) - std::log(lambda + up[0]);
  for (long i = 1; i <= m; ++i) {
    double p_prev = up[static_cast<std::size_t>(i - 1)];
    if (p_prev <= 0.0 || !std::isfinite(logf[static_cast<std::size_t>(i - 1)])) break;
    logf[static_cast<std::size_t>(i)] = logf[static_cast<std::size_t>(i - 1)] +
                                        std::log(p_prev) -
                                        std::log(lambda + up[static_cast<std::size_t>(i)]);
  }

  double peak = *std::max_element(logf.begin(), logf.end());
  AwarenessDistribution dist;
  dist.quality = q;
  dist.probs.resize(static_cast<std::size_t>(m) + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    dist.probs[i] = std::isfinite(logf[i]) ? std::exp(logf[i] - peak) : 0.0;
    sum += dist.probs[i];
  }
  for (double& p : dist.probs) p /= sum;
  return dist;
}

double estimate_z(long n, double lambda, double f_zero) {
  return static_cast<double>(n) * lambda / (lambda + f_zero);
}

double f_zero_selective(int k, double r, double z, const RankVisitModel& f2) {
  if (z <= 0.0) throw std::invalid_argument("f_zero_selective: z must be positive");
  if (r <= 0.0) return 0.0;
  long hi = std::min(f2.n(), static_cast<long>(k) + static_cast<long>(std::ceil(z / r)) - 1);
  double sum = 0.0;
  for (long i = k; i <= hi; ++i) sum += r * f2.f2(i);
  return sum / z;
}

ExpectedRankModel::ExpectedRankModel(const std::vector<double>& qualities, const VisitRateFn& F,
                                     double lambda, long m)
    : qualities_(qualities), m_(m) {
  dists_.reserve(qualities.size());
  tail_.reserve(qualities.size());
  for (std::size_t p = 0; p < qualities.size(); ++p) {
    // Qualities are typically sorted; reuse the previous distribution on ties.
    if (p > 0 && qualities[p] == qualities[p - 1]) {
      dists_.push_back(dists_.back());
      tail_.push_back(tail_.back());
      continue;
    }
    // The exact chain solution: the printed closed form loses mass once
    // F(q*a) stops dominating lambda, which low-quality pages always hit.
    dists_.push_back(awareness_markov(qualities[p], F, lambda, m));
    const auto& probs = dists_.back().probs;
    std::vector<double> tail(probs.size() + 1, 0.0);
    for (long i = static_cast<long>(probs.size()) - 1; i >= 0; --i)
      tail[static_cast<std::size_t>(i)] = tail[static_cast<std::size_t>(i) + 1] +
                                          probs[static_cast<std::size_t>(i)];
    tail_.push_back(std::move(tail));
  }
}

double ExpectedRankModel::f1_nonrandomized(double x) const {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("f1_nonrandomized: x must be in [0,1]");
  double rank = 1.0;
  for (std::size_t p = 0; p < qualities_.size(); ++p) {
    double q = qualities_[p];
    if (q <= x) continue;  // this page can never surpass x
    long idx = 1 + static_cast<long>(std::floor(static_cast<double>(m_) * x / q));
    if (idx > m_) continue;
    rank += tail_[p][static_cast<std::size_t>(idx)];
  }
  return rank;
}

double ExpectedRankModel::f1_selective(double x, int k, double r, double z) const {
  double base = f1_nonrandomized(x);
  if (base < static_cast<double>(k)) return base;
  if (r >= 1.0) return base + z;  // unbounded displacement, capped at the pool size
  double displaced = r * (base - static_cast<double>(k) + 1.0) / (1.0 - r);
  return base + std::min(displaced, z);
}

VisitFunction solve_visit_function(const std::vector<double>& qualities, double v,
                                   double lambda, long m, const SolverOptions& options) {
  const long n = static_cast<long>(qualities.size());
  if (n == 0) throw std::invalid_argument("solve_visit_function: empty community");

  if (options.mode == SolverMode::random_ranking) return VisitFunction::random_ranking(v, n);
  if (options.mode == SolverMode::proportional) {
    // phi is the popularity mass of the fully-aware community, the limit in
    // which proportional traffic is well defined.
    double phi = 0.0;
    for (double q : qualities) phi += q;
    return VisitFunction::proportional(v, phi);
  }

  bool selective = options.mode == SolverMode::selective && options.r > 0.0;
  RankVisitModel f2(n, v);

  VisitFunction F;
  F.grid = VisitFunction::default_grid(options.grid_points, options.grid_min);
  F.table = F.grid;  // initial guess F(x) = x
  F.f_zero = v / static_cast<double>(n);
  fit_loglog(F, options.endpoint_weight);

  F.converged = false;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    VisitRateFn fn = [&F](double x) { return F(x); };
    ExpectedRankModel erm(qualities, fn, lambda, m);
    double z = estimate_z(n, lambda, F.f_zero);

    std::vector<double> rhs(F.grid.size());
    for (std::size_t i = 0; i < F.grid.size(); ++i) {
      double rank = selective ? erm.f1_selective(F.grid[i], options.k, options.r, z)
                              : erm.f1_nonrandomized(F.grid[i]);
      rhs[i] = f2.f2_real(rank);
    }
    double rhs_f0 = selective ? solve_f_zero_channel(options.k, options.r, n, lambda, f2)
                              : f2.f2_real(erm.f1_nonrandomized(0.0));

    double d = options.damping;
    double delta = 0.0;
    for (std::size_t i = 0; i < F.table.size(); ++i) {
      double next = d * rhs[i] + (1.0 - d) * F.table[i];
      delta = std::max(delta, std::abs(next - F.table[i]) / std::max(next, kTiny));
      F.table[i] = next;
    }
    double next_f0 = d * rhs_f0 + (1.0 - d) * F.f_zero;
    delta = std::max(delta, std::abs(next_f0 - F.f_zero) / std::max(next_f0, kTiny));
    F.f_zero = next_f0;
    F.iterations = iter;

    fit_loglog(F, options.endpoint_weight);
    if (delta < options.tolerance) {
      F.converged = true;
      break;
    }
  }
  return F;
}

VisitFunction solve_visit_function(const CommunityConfig& community, const RankingConfig& ranking) {
  community.validate();
  ranking.validate(community.n);
  if (ranking.rule == PromotionRule::uniform)
    throw std::invalid_argument("solve_visit_function: no analytic form for uniform promotion");
  SolverOptions options;
  options.mode = ranking.rule == PromotionRule::selective && ranking.r > 0.0
                     ? SolverMode::selective
                     : SolverMode::deterministic;
  options.k = ranking.k;
  options.r = ranking.r;
  return solve_visit_function(make_quality_vector(community), community.monitored_visits(),
                              community.retirement_rate(), community.m, options);
}

double qpc_analytic(const std::vector<double>& qualities, const VisitRateFn& F,
                    double lambda, long m) {
  double num = 0.0;
  double den = 0.0;
  double prev_q = -1.0;
  AwarenessDistribution dist;
  for (double q : qualities) {
    if (q != prev_q) {
      dist = awareness_markov(q, F, lambda, m);
      prev_q = q;
    }
    for (long i = 0; i <= m; ++i) {
      double a_i = static_cast<double>(i) / static_cast<double>(m);
      double flow = dist.probs[static_cast<std::size_t>(i)] * F(a_i * q);
      num += flow * q;
      den += flow;
    }
  }
  if (den <= 0.0) throw std::domain_error("qpc_analytic: no visits anywhere");
  return num / den;
}

double tbp_analytic(double q, const VisitRateFn& F, double /*lambda*/, long m, double threshold) {
  if (q <= 0.0) throw std::invalid_argument("tbp_analytic: q must be positive");
  long target = static_cast<long>(std::ceil(threshold * static_cast<double>(m)));
  double days = 0.0;
  for (long i = 0; i < target; ++i) {
    double a_i = static_cast<double>(i) / static_cast<double>(m);
    double rate = F(q * a_i) * (1.0 - a_i);
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    days += 1.0 / rate;
  }
  return days;
}

}  // namespace rankpromo
