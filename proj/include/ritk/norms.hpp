#pragma once

#include <optional>
#include <string>

#include "ritk/step_profile.hpp"
#include "ritk/young.hpp"

namespace ritk {

/// Tagged description of one rearrangement-invariant norm on (0, L).
struct NormSpec {
  enum class Tag {
    Lebesgue,                  // p (p = inf allowed)
    LorentzStar,               // (int s^{q/p-1} f*^q)^{1/q}
    LorentzDoubleStar,         // same with f**
    LorentzZygmundStar,        // extra (1+log_+(1/s))^r factor on f*
    LorentzZygmundDoubleStar,  // ... on f**
    GeneralizedLZ,             // extra (1+log_+(1+log_+(1/s)))^rho, f* form
    Orlicz,                    // Luxemburg norm of the Young function
    OrliczLorentz,             // || r^{-1/q} f*(r) ||_{L^A}
    SumL1Linf,                 // L^1 + L^inf: int_0^1 f*
    IntersectionLinfOL,        // max(L^inf, OrliczLorentz)
  };

  Tag tag = Tag::Lebesgue;
  double p = 1.0, q = 1.0, r = 0.0, rho = 0.0;
  YoungPtr young;  // Orlicz / OrliczLorentz / IntersectionLinfOL
  double L = kLmax;

  /// LorentzStar with q > p is only a quasi-norm; triangle-inequality
  /// guarantees do not apply.
  bool is_quasi_norm() const;
  void validate() const;  // throws std::invalid_argument
  std::string describe() const;

  static NormSpec lebesgue(double p, double L = kLmax);
  static NormSpec lorentz_star(double p, double q, double L = kLmax);
  static NormSpec lorentz_double_star(double p, double q, double L = kLmax);
  static NormSpec lorentz_zygmund(double p, double q, double r, bool double_star,
                                  double L = kLmax);
  static NormSpec generalized_lz(double p, double q, double r, double rho,
                                 double L = kLmax);
  static NormSpec orlicz(YoungPtr A, double L = kLmax);
  /// Requires q > 1 and the integrability of A(t)/t^{1+q} near infinity
  /// (otherwise the functional is not a function norm); throws when violated.
  static NormSpec orlicz_lorentz(YoungPtr A, double q, double L = kLmax);
  static NormSpec sum_l1_linf(double L = kLmax);
  static NormSpec intersection_linf_ol(YoungPtr A, double q, double L = kLmax);
};

/// Evaluates the spec's norm of f; rearranges internally when f is not
/// flagged rearranged.  +infinity is a legal return value.
double ri_norm(const StepProfile& f, const NormSpec& spec);

/// inf { lambda : int_0^L A(f/lambda) <= 1 }, modular evaluated block-exactly.
double luxemburg(const StepProfile& f, const YoungFunction& A, double L);

/// Closed-form associate spec where one exists (Lebesgue p <-> p',
/// LorentzStar (p,q) -> (p',q') for p in (1,inf), Lorentz-Zygmund star
/// (p,q,r) -> (p',q',-r)); nullopt otherwise.
std::optional<NormSpec> dual_spec(const NormSpec& spec);

struct AssociateEstimate {
  double lower = 0.0;       // certified lower bound for the associate norm
  StepProfile certificate;  // maximizer g with spec-norm 1 after scaling
};

/// Maximizes the pairing over a structured family of power-log profiles
/// g(s) = s^{-a} (1+log_+(1/s))^{-beta} chi_(0,tau) on a parameter grid.
AssociateEstimate associate_norm_estimate(const StepProfile& f, const NormSpec& spec);

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;  // lower x covering factor of the dual family
};

/// Optimal-target norm of f for domain space X and reduction order k on
/// dimension n, via duality: sup of int f g over g with
/// ||s^{k/n} g**(s)||_{X'} <= 1.  Ball membership is certified through a
/// per-block step majorant of s^{k/n} g**, so the lower end is a genuine
/// lower bound.  Requires kernel_weight_admissible on the L_max surrogate.
NormBracket optimal_target_norm(const StepProfile& f, const NormSpec& X, double n,
                                double k);

/// Finiteness of ||(1+r)^{k/n-1}||_{X'} under the L_max surrogate with a
/// tail-growth stabilization check.
bool kernel_weight_admissible(const NormSpec& X, double n, double k);

}  // namespace ritk
