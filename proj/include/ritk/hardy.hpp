#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ritk/norms.hpp"

namespace ritk {

/// Tail-weighted Hardy operator (Hf)(s) = int_s^L r^{k/n-1} f(r) dr,
/// evaluated block-exactly.  Nonincreasing whenever f >= 0.
class HardyTail {
 public:
  HardyTail(StepProfile f, double n, double k);

  double operator()(double s) const;

  /// Log-grid step discretization of the (continuous) output, flagged
  /// rearranged when nonincreasing.
  StepProfile discretized(int per_decade = kPtsPerDecade) const;

  double domain_length() const { return f_.L; }

 private:
  StepProfile f_;
  double gamma_;  // k/n - 1
};

enum class HardyVerdict { Bounded, Diverging };

struct HardyNormEstimate {
  double constant = 0.0;  // sup of ||Hf||_Y / ||f||_X over the family
  StepProfile worst;      // witness attaining the sup
  HardyVerdict verdict = HardyVerdict::Bounded;
};

/// Empirical operator norm of the Hardy operator from X to Y over an
/// adversarial family of power-log profiles f(s) =
/// s^{-a} (1+log_+(1/s))^{-beta} (1+log_+log_+(1/s))^{-delta} chi_(tau,sigma)
/// on parameter grids, plus random step profiles.  The verdict is Diverging
/// when the ratio grows monotonically by more than 1e3 along a parameter ray
/// of at least six members (or an infinite ratio shows up).
/// weight_exponent overrides the default k/n - 1 (perturbation studies).
HardyNormEstimate estimate_hardy_norm(const NormSpec& X, const NormSpec& Y, double n,
                                      double k, int random_members = 100,
                                      uint64_t seed = 1,
                                      std::optional<double> weight_exponent = {});

struct TransferReport {
  bool hypothesis_holds = false;
  double hypothesis_margin = 0.0;  // max over probes of LHS/RHS
  double realized_ratio = 0.0;     // ||g||_Y / ||f||_X (0/0 -> 0)
  HardyVerdict hardy_verdict = HardyVerdict::Bounded;
  double hardy_constant = 0.0;
};

/// Transference check: verifies the domination hypothesis
///   int_0^t s^{-k/n} g*(s) ds <= c int_0^t s^{-k/n} int_{s/c}^L r^{k/n-1} f*(r) dr ds
/// at the probe t-grid (block-exact on both sides), then reports the Hardy
/// verdict for (X, Y) and the realized norm ratio.  An empty probe grid
/// defaults to a log grid spanning the domain.
TransferReport transfer_check(const StepProfile& f, const StepProfile& g,
                              const NormSpec& X, const NormSpec& Y, double n, double k,
                              double c, std::vector<double> probes = {});

/// Max relative deviation over the t-grid between the two sides of
///   int_0^t F* + t^{1-a/n} int_t^L s^{a/n-1} F*
///     = (n-a)/n int_0^t s^{-a/n} int_s^L r^{a/n-1} F*(r) dr ds.
/// Both sides are block-exact, so the deviation measures rounding only.
double fubini_identity_check(const StepProfile& F, double alpha, double n,
                             const std::vector<double>& tgrid);

}  // namespace ritk
