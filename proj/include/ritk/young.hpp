#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ritk/quadrature.hpp"

namespace ritk {

/// Convex nondecreasing A with A(0) = 0, represented through its value and
/// left-continuous density a (A(t) = int_0^t a).
class YoungFunction {
 public:
  virtual ~YoungFunction() = default;
  virtual double value(double t) const = 0;
  virtual double density(double t) const = 0;
  /// log A(e^u); overflow-safe for the power-log families.
  virtual double log_value(double u) const;
  /// Threshold past which A = infinity (infinity for ordinary functions).
  virtual double cap() const { return kInf; }
  virtual std::string describe() const = 0;

  double operator()(double t) const { return value(t); }
  /// Right-continuous generalized inverse of the density:
  /// inf { t : a(t) > r }.
  double density_inverse(double r, double hi = 1e250) const;
};

using YoungPtr = std::shared_ptr<const YoungFunction>;

/// t^p (log(b + t))^r.  For r != 0 the offset b is the smallest of
/// {e, e^2, ...} making the sampled density nondecreasing.
YoungPtr make_power_log(double p, double r, std::optional<double> b = std::nullopt);

/// t^p (log(b + log(b + t)))^r.
YoungPtr make_power_loglog(double p, double r, std::optional<double> b = std::nullopt);

/// e^t - 1 (used as a fast-growth test function).
YoungPtr make_exponential();

/// Density tabulated on an increasing grid of (t, a(t)) nodes; values between
/// nodes are power-interpolated in log-log coordinates, A accumulates the
/// interpolant exactly per segment.
YoungPtr make_tabulated(std::vector<std::pair<double, double>> density_nodes);

/// Wraps a base function with A(t) = infinity for t > threshold.
YoungPtr make_capped(YoungPtr base, double threshold);

/// Whether int_0^1 (t/A(t))^{k/(n-k)} dt converges.
bool check_zero_integrability(const YoungFunction& A, double n, double k);

/// Whether int_1^inf (t/A(t))^{k/(n-k)} dt converges.
bool check_infinity_integrability(const YoungFunction& A, double n, double k);

class ConjugateResult {
 public:
  ConjugateResult(YoungPtr base, double n, double k);

  double H(double t) const;
  double H_inverse(double y) const;
  /// The Sobolev-conjugate Young function A_{n/k} = A o H^{-1}.
  YoungPtr conjugate() const { return conjugate_; }
  /// False when A_{n/k} = infinity past sup H.
  bool finite_everywhere() const { return finite_everywhere_; }
  double sup_H() const { return sup_H_; }

 private:
  YoungPtr base_;
  double n_, k_;
  std::shared_ptr<LogAccumulator> phi_;  // int_0^t (tau/A(tau))^{k/(n-k)}
  bool finite_everywhere_;
  double sup_H_;
  YoungPtr conjugate_;
};

/// Requires check_zero_integrability; throws std::invalid_argument otherwise.
ConjugateResult sobolev_conjugate(YoungPtr A, double n, double k);

/// The reduced conjugate computed from the double-integral representation of
/// the inverse reduced density on a log grid; returned as a tabulated-density
/// Young function.
YoungPtr reduced_conjugate(const YoungFunction& A, double n, double k);

struct EquivalenceResult {
  bool equivalent;
  double constant;  // smallest c <= 64 with A(t/c) <= B(t) <= A(ct)
};

enum class Regime { Global, NearZero, NearInfinity };

EquivalenceResult equivalent(const YoungFunction& A, const YoungFunction& B,
                             Regime regime);

}  // namespace ritk
