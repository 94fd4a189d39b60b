#include "ritk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <stdexcept>

namespace ritk {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi");
  const double ulo = std::log10(lo), uhi = std::log10(hi);
  const int n = std::max(2, static_cast<int>(std::ceil((uhi - ulo) * per_decade)) + 1);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = std::pow(10.0, ulo + (uhi - ulo) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
  (void)m;
  (void)f;
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol * (std::abs(left + right) + 1e-300))
    return left + right + delta / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double integrate_log(const std::function<double(double)>& f, double a, double b,
                     double tol) {
  if (!(a > 0.0)) throw std::invalid_argument("integrate_log: need a > 0");
  if (b <= a) return 0.0;
  auto g = [&f](double u) {
    const double t = std::exp(u);
    return f(t) * t;
  };
  const double ua = std::log(a), ub = std::log(b);
  double total = 0.0;
  const double step = std::log(10.0);
  for (double u = ua; u < ub; u += step) {
    const double uhi = std::min(u + step, ub);
    total += adaptive_simpson(g, u, uhi, tol);
  }
  return total;
}

LogAccumulator::LogAccumulator(std::function<double(double)> g, double tol)
    : g_(std::move(g)), tol_(tol), j_lo_(0), j_hi_(0), below_(0.0) {
  decade_[0] = decade_mass(0);
  extend_down();
  rebuild_cum();
}

double LogAccumulator::decade_mass(int j) const {
  const double lo = std::pow(10.0, j), hi = std::pow(10.0, j + 1);
  return integrate_log(g_, lo, hi, tol_ * 1e-2);
}

void LogAccumulator::extend_down() const {
  // Walk decades downward until the running geometric-tail bound is small
  // relative to the accumulated mass (or an absolute floor is hit).
  double total = 0.0;
  for (auto& [j, m] : decade_) total += m;
  int j = j_lo_;
  double prev = decade_.at(j);
  while (j > -300) {
    --j;
    const double m = decade_mass(j);
    decade_[j] = m;
    total += m;
    const double ratio = prev > 0 ? m / prev : 0.0;
    prev = m;
    if (m <= 0.0) {
      below_ = 0.0;
      break;
    }
    if (ratio < 0.9 && j < j_lo_ - 2) {
      // geometric tail below this decade
      const double r = std::min(ratio, 0.9);
      below_ = m * r / (1.0 - r);
      if (below_ <= tol_ * std::max(total, 1e-300)) break;
    }
    if (j <= -280) {
      below_ = 0.0;
      break;
    }
  }
  j_lo_ = j;
}

void LogAccumulator::extend_up(int j) const {
  while (j_hi_ < j && j_hi_ < 300) {
    decade_[j_hi_ + 1] = 0.0;  // placeholder to keep the map contiguous
    decade_[j_hi_ + 1] = decade_mass(j_hi_ + 1);
    ++j_hi_;
  }
  rebuild_cum();
}

void LogAccumulator::rebuild_cum() const {
  cum_at_.clear();
  double acc = below_;
  cum_at_[j_lo_] = acc;
  for (int j = j_lo_; j <= j_hi_; ++j) {
    acc += decade_.at(j);
    cum_at_[j + 1] = acc;
  }
}

double LogAccumulator::prefix(double t) const {
  if (!(t > 0.0)) return 0.0;
  const double lt = std::log10(t);
  const int j = static_cast<int>(std::floor(lt));
  if (j > j_hi_) extend_up(j);
  if (cum_at_.empty()) rebuild_cum();
  if (j < j_lo_) {
    // below the resolved range: proportional share of the tail estimate
    return below_;
  }
  const int jc = std::min(j, j_hi_);
  double base = cum_at_.at(jc);
  const double lo = std::pow(10.0, jc);
  if (t > lo) base += integrate_log(g_, lo, t, tol_ * 1e-2);
  return base;
}

double LogAccumulator::inverse_prefix(double target, double hint_hi) const {
  if (target <= 0.0) return 0.0;
  double hi = std::pow(10.0, j_hi_ + 1);
  while (prefix(hi) < target && hi < hint_hi) hi *= 10.0;
  if (prefix(hi) < target) return hi;
  double lo = std::pow(10.0, j_lo_);
  if (prefix(lo) >= target) {
    // target inside the unresolved low tail; refine by direct bisection anyway
    lo = 1e-300;
  }
  return bisect_nondecreasing([this](double t) { return prefix(t); }, target, lo, hi);
}

namespace {

// log of int over the decade [10^a10, 10^{a10+1}] of g, via midpoint panels
// on log(g(e^u)) + u.
double decade_log_mass(const std::function<double(double)>& log_g, double a10) {
  constexpr int kPanels = 24;
  const double ua = a10 * std::log(10.0), ub = (a10 + 1.0) * std::log(10.0);
  const double du = (ub - ua) / kPanels;
  double peak = -kInf;
  double vals[kPanels];
  for (int i = 0; i < kPanels; ++i) {
    const double u = ua + (i + 0.5) * du;
    vals[i] = log_g(u) + u;
    peak = std::max(peak, vals[i]);
  }
  if (peak == -kInf) return -kInf;
  double s = 0.0;
  for (double v : vals) s += std::exp(v - peak);
  return peak + std::log(s * du);
}

// ell[j] = log mass of the j-th decade, walking away from the anchor.
IntegralVerdict classify_log_decades(const std::vector<double>& ell) {
  const int n = static_cast<int>(ell.size());
  const int w = std::max(4, n / 4);
  double dsum = 0.0;
  int dcnt = 0;
  for (int i = n - w + 1; i < n; ++i) {
    if (std::isfinite(ell[i]) && std::isfinite(ell[i - 1])) {
      dsum += ell[i] - ell[i - 1];
      ++dcnt;
    }
  }
  if (dcnt == 0) return IntegralVerdict::Convergent;  // mass vanishes
  const double d = dsum / dcnt;                       // mean log ratio
  if (d < std::log(0.9)) return IntegralVerdict::Convergent;
  if (d > std::log(1.1)) return IntegralVerdict::Divergent;

  // slowly varying masses: mass_j ~ j^{-sigma}; convergent iff sigma > 1
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int j = n / 2; j < n; ++j) {
    if (!std::isfinite(ell[j])) continue;
    const double x = std::log(static_cast<double>(j + 1));
    sx += x;
    sy += ell[j];
    sxx += x * x;
    sxy += x * ell[j];
    ++m;
  }
  if (m < 3) return IntegralVerdict::Convergent;
  const double denom = m * sxx - sx * sx;
  if (denom == 0) return IntegralVerdict::Divergent;
  const double sigma = -(m * sxy - sx * sy) / denom;
  return sigma > 1.02 ? IntegralVerdict::Convergent : IntegralVerdict::Divergent;
}

}  // namespace

IntegralVerdict classify_integral_at_zero(const std::function<double(double)>& log_g,
                                          int decades) {
  std::vector<double> ell(decades);
  for (int j = 0; j < decades; ++j) ell[j] = decade_log_mass(log_g, -j - 1.0);
  return classify_log_decades(ell);
}

IntegralVerdict classify_integral_at_infinity(const std::function<double(double)>& log_g,
                                              int decades) {
  std::vector<double> ell(decades);
  for (int j = 0; j < decades; ++j) ell[j] = decade_log_mass(log_g, j);
  return classify_log_decades(ell);
}

ExponentFit fit_power_log_exponents(const std::function<double(double)>& logv,
                                    double ulo, double uhi, int samples) {
  // regressors: u, log u, 1, 1/u, log(u)/u -- the last two absorb the
  // leading asymptotic corrections of power-log compositions
  constexpr int k = 5;
  std::vector<std::array<double, k>> X(samples);
  std::vector<double> y(samples);
  for (int i = 0; i < samples; ++i) {
    const double u = ulo + (uhi - ulo) * i / (samples - 1);
    X[i] = {u, std::log(u), 1.0, 1.0 / u, std::log(u) / u};
    y[i] = logv(u);
  }
  // least squares by modified Gram-Schmidt QR (the basis is too collinear
  // for normal equations in double precision)
  double R[k][k] = {};
  double qty[k] = {};
  for (int c = 0; c < k; ++c) {
    for (int pass = 0; pass < 2; ++pass) {  // reorthogonalize once
      for (int p = 0; p < c; ++p) {
        double dot = 0.0;
        for (int i = 0; i < samples; ++i) dot += X[i][p] * X[i][c];
        R[p][c] += dot;
        for (int i = 0; i < samples; ++i) X[i][c] -= dot * X[i][p];
      }
    }
    double nrm = 0.0;
    for (int i = 0; i < samples; ++i) nrm += X[i][c] * X[i][c];
    nrm = std::sqrt(nrm);
    R[c][c] = nrm;
    if (nrm > 0.0)
      for (int i = 0; i < samples; ++i) X[i][c] /= nrm;
    for (int i = 0; i < samples; ++i) qty[c] += X[i][c] * y[i];
  }
  double coef[k];
  for (int c = k - 1; c >= 0; --c) {
    double s = qty[c];
    for (int p = c + 1; p < k; ++p) s -= R[c][p] * coef[p];
    coef[c] = R[c][c] > 0.0 ? s / R[c][c] : 0.0;
  }
  return {coef[0], coef[1]};
}

double power_integral(double gamma, double lo, double hi) {
  if (hi <= lo) return 0.0;
  if (std::abs(gamma + 1.0) < 1e-14) return std::log(hi / lo);
  if (lo == 0.0) {
    if (gamma <= -1.0) return kInf;
    return std::pow(hi, gamma + 1.0) / (gamma + 1.0);
  }
  return (std::pow(hi, gamma + 1.0) - std::pow(lo, gamma + 1.0)) / (gamma + 1.0);
}

double logweight_integral(double gamma, double c1, double c2, double lo, double hi) {
  if (hi <= lo) return 0.0;
  if (c1 == 0.0 && c2 == 0.0) return power_integral(gamma, lo, hi);
  if (!(gamma > -1.0)) throw std::invalid_argument("logweight_integral: need gamma > -1");
  const double g1 = gamma + 1.0;
  // v = s^{gamma+1}: integral = (1/g1) int W(v^{1/g1}) dv, W = log factors
  auto W = [c1, c2, g1](double v) {
    const double s_log = std::log(v) / g1;  // log s
    const double l1 = 1.0 + std::max(0.0, -s_log);
    const double l2 = 1.0 + std::max(0.0, std::log(l1));
    return std::pow(l1, c1) * std::pow(l2, c2);
  };
  const double vhi = std::pow(hi, g1);
  double vlo = lo > 0.0 ? std::pow(lo, g1) : 0.0;
  double total = 0.0;
  if (vlo > 0.0 && vhi / vlo < 1e4) return integrate_log(W, vlo, vhi, 1e-11) / g1;
  // walk decades down from vhi; the weight is slowly varying so the masses
  // decay geometrically and the remainder below is negligible quickly
  double top = vhi;
  for (int j = 0; j < 400 && top > 1e-300; ++j) {
    const double bot = std::max(vlo, top / 10.0);
    total += integrate_log(W, bot, top, 1e-11);
    if (bot == vlo) break;
    if (total > 0.0 && W(bot) * bot < 1e-13 * total) break;
    top = bot;
  }
  return total / g1;
}

double bisect_nondecreasing(const std::function<double(double)>& F, double target,
                            double lo, double hi, double rel_tol) {
  if (F(lo) >= target) return lo;
  if (F(hi) < target) return hi;
  for (int it = 0; it < 200; ++it) {
    // geometric mean in log domain (lo * hi can overflow)
    const double mid = (lo > 0 && hi / lo > 4.0)
                           ? std::exp(0.5 * (std::log(lo) + std::log(hi)))
                           : 0.5 * (lo + hi);
    if (F(mid) >= target)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= rel_tol * std::max(std::abs(hi), 1e-300)) break;
  }
  return hi;
}

}  // namespace ritk
