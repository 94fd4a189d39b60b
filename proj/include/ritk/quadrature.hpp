#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <vector>

namespace ritk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Surrogate for the half-line (0, inf): measures are truncated at kLmax and
// evaluators probe no finer than kSmin.
inline constexpr double kLmax = 1e8;
inline constexpr double kSmin = 1e-8;
inline constexpr int kPtsPerDecade = 50;

/// Log-spaced grid with kPtsPerDecade points per decade, endpoints included.
std::vector<double> log_grid(double lo, double hi, int per_decade = kPtsPerDecade);

/// Adaptive Simpson on [a, b] to relative tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 40);

/// Integrates f over [a, b] with 0 < a < b via the substitution t = e^u,
/// one adaptive panel per decade.
double integrate_log(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-10);

/// Lazily extended cumulative integral Phi(t) = int_0^t g, for g >= 0 defined
/// on (0, inf).  Decades [10^j, 10^{j+1}] are integrated on demand; the mass
/// below the lowest computed decade is bounded by a geometric-tail estimate
/// and extension stops once it is negligible.
class LogAccumulator {
 public:
  explicit LogAccumulator(std::function<double(double)> g, double tol = 1e-8);

  double prefix(double t) const;          // int_0^t g
  double between(double a, double b) const { return prefix(b) - prefix(a); }
  /// Smallest t with prefix(t) >= target (monotone bisection).  Returns the
  /// current upper extension bound if the target is never reached below it.
  double inverse_prefix(double target, double hint_hi = 1e200) const;

 private:
  void extend_down() const;
  void extend_up(int j) const;
  double decade_mass(int j) const;

  std::function<double(double)> g_;
  double tol_;
  mutable std::map<int, double> decade_;     // j -> int over [10^j, 10^(j+1)]
  mutable std::map<int, double> cum_at_;     // j -> int_0^{10^j}
  mutable int j_lo_, j_hi_;                  // computed decade range
  mutable double below_;                     // estimated mass below 10^{j_lo}
  void rebuild_cum() const;
};

enum class IntegralVerdict { Convergent, Divergent };

/// Classifies convergence of int_0^1 g(t) dt from per-decade partial masses.
/// The integrand is supplied in log form, log_g(u) = log g(e^u), so steep
/// power singularities never overflow.  Geometric decay of decade masses
/// means convergence; growth means divergence; for slowly varying masses the
/// polynomial decay rate in the decade index decides.
IntegralVerdict classify_integral_at_zero(const std::function<double(double)>& log_g,
                                          int decades = 60);

/// Same for int_1^inf g(t) dt, walking decades upward.
IntegralVerdict classify_integral_at_infinity(const std::function<double(double)>& log_g,
                                              int decades = 60);

struct ExponentFit {
  double slope;    // coefficient of log t
  double log_exp;  // coefficient of log log t
};

/// Least-squares fit of logv(u) ~ slope*u + log_exp*log(u) + c + d/u over
/// u in [ulo, uhi] (u = log t).  The 1/u regressor absorbs the leading
/// asymptotic correction of power-log functions.
ExponentFit fit_power_log_exponents(const std::function<double(double)>& logv,
                                    double ulo, double uhi, int samples = 200);

/// int_lo^hi r^gamma dr, exact (log for gamma = -1).
double power_integral(double gamma, double lo, double hi);

/// int_lo^hi s^gamma (1+log_+(1/s))^c1 (1+log_+(1+log_+(1/s)))^c2 ds for
/// gamma > -1; lo = 0 allowed (singular end handled by the power
/// substitution v = s^{gamma+1}).
double logweight_integral(double gamma, double c1, double c2, double lo, double hi);

/// Smallest x in [lo, hi] with F(x) >= target, for nondecreasing F.
double bisect_nondecreasing(const std::function<double(double)>& F, double target,
                            double lo, double hi, double rel_tol = 1e-12);

}  // namespace ritk
