#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "ritk/quadrature.hpp"

namespace ritk {

/// Nonnegative piecewise-constant function on (0, L].  The i-th value lives
/// on (breaks[i-1], breaks[i]] with breaks[-1] = 0; the function is 0 past
/// the last breakpoint.
struct StepProfile {
  std::vector<double> breaks;  // strictly increasing, last <= L
  std::vector<double> values;  // one per interval, >= 0
  double L = 1.0;
  bool rearranged = false;

  double operator()(double s) const;
  double support() const { return breaks.empty() ? 0.0 : breaks.back(); }
  double total_integral() const;
  double max_value() const;
  bool is_nonincreasing() const;
  void validate() const;  // throws std::invalid_argument on broken invariants

  static StepProfile constant(double c, double length, double L);
  static StepProfile zero(double L) { return {{}, {}, L, true}; }
};

/// Unordered (value, measure) pairs; the input form before rearrangement.
struct SampleCloud {
  std::vector<std::pair<double, double>> points;  // (value >= 0, measure > 0)
  double total_measure() const;
};

/// Decreasing rearrangement: sorts by value, merges ties, keeps measures.
StepProfile rearrange(const SampleCloud& cloud, double L);
/// Rearranges an existing profile (values with their block lengths).
StepProfile rearrange(const StepProfile& f);

/// Exact evaluator for f**(s) = (1/s) int_0^s f*(r) dr on step inputs.
class DoubleStar {
 public:
  explicit DoubleStar(const StepProfile& fstar);
  double operator()(double s) const;
  /// int_0^s f*(r) dr, exact.
  double head(double s) const;
  double L() const { return L_; }

 private:
  std::vector<double> breaks_, values_, cum_;
  double L_;
};

/// int_0^L f g, blockwise on the merged partition.
double pairing(const StepProfile& f, const StepProfile& g);

/// int_s^L r^gamma f(r) dr with per-block power-rule antiderivatives.
/// Returns 0 for s >= L; throws for s <= 0.
double tail_weighted_integral(const StepProfile& f, double gamma, double s);

/// int_0^s f(r) dr, exact.
double head_integral(const StepProfile& f, double s);

/// int_0^tau u^{-kn} (int_u^L r^{kn-1} f(r) dr) du for 0 < kn < 1, exact:
/// on each block the inner tail is a power in u, and u^{-kn} u^{kn} is
/// constant, so every piece has a power-rule antiderivative.
double head_weighted_tail_integral(const StepProfile& f, double kn, double tau);

/// int_lo^hi r^gamma f(r) dr, exact per block.
double weighted_integral(const StepProfile& f, double gamma, double lo, double hi);

// Text format: header "L=<value>" then "<breakpoint> <value>" lines,
// 17 significant digits, round-trips bit-identically.
void write_profile(const StepProfile& f, std::ostream& os);
StepProfile read_profile(std::istream& is);

/// Measure of {f > t}.
double distribution(const StepProfile& f, double t);

/// Samples a positive function g on a log grid over (lo, hi] into a step
/// profile; each block takes the value of g at its geometric midpoint.
StepProfile discretize(const std::function<double(double)>& g, double lo, double hi,
                       double L, int per_decade = kPtsPerDecade);

}  // namespace ritk
