#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ritk/step_profile.hpp"

namespace ritk {

/// Colex-ordered multi-indices beta with |beta| = k on d variables, plus the
/// multinomial multiplicities k!/beta! that mediate the identification of
/// symmetric k-tensors with their independent components.
class MultiIndexSet {
 public:
  MultiIndexSet(int d, int k);
  int count() const { return static_cast<int>(idx_.size()); }  // C(d+k-1, k)
  const std::vector<int>& operator[](int i) const { return idx_[i]; }
  double multiplicity(int i) const { return mult_[i]; }

 private:
  std::vector<std::vector<int>> idx_;
  std::vector<double> mult_;
};

/// Real field on the unit torus grid: d in {2,3}, M points per axis (power of
/// two <= 128), m components.  Values are component-major, x-fastest.
struct GridField {
  int d = 2;
  int M = 32;
  int m = 1;
  std::vector<double> values;

  double spacing() const { return 1.0 / M; }
  size_t points() const;  // M^d
  size_t index(int x, int y, int z = 0) const;
  double& at(int c, int x, int y, int z = 0);
  double at(int c, int x, int y, int z = 0) const;
  void validate() const;  // throws std::invalid_argument
  bool is_mean_zero(double rel_tol = 1e-12) const;
  double l2_norm() const;  // grid L2: sqrt(h^d sum |F|^2)
  GridField component(int c) const;

  static GridField zeros(int d, int M, int m);
};

GridField operator+(const GridField& a, const GridField& b);
GridField operator-(const GridField& a, const GridField& b);
GridField operator*(double s, const GridField& a);

/// Riesz potential: multiplier (2pi |xi|)^{-alpha} on integer frequencies,
/// zero mode annihilated.  Requires 0 < alpha < d and mean-zero input.
GridField riesz_potential(const GridField& F, double alpha);

/// k-th order divergence of a symmetric k-tensor field (N(d,k) components):
/// spectral sum of mu_beta (2 pi i xi)^beta F_beta.  Scalar output.
GridField divergence_k(const GridField& F, int k);

/// Spectral Helmholtz operator: per frequency the rank-one contraction
/// -(xi^beta/|xi|^k) sum_gamma mu_gamma (xi^gamma/|xi|^k) F_gamma.
GridField helmholtz_k(const GridField& F, int k);

/// P_k F = F + helmholtz_k(F, k); fixes div_k-free fields, kills gradients.
GridField projector_pk(const GridField& F, int k);

/// nabla^k of a scalar field (N components, beta-derivatives); for m > 1 only
/// k = 1 is supported and the full gradient (m x d components) is returned.
GridField grad_k(const GridField& u, int k);

/// (nabla u + nabla u^T)/2 of a d-vector field, stored as d*d components.
GridField symmetric_gradient(const GridField& u);

/// Trace-free part of the symmetric gradient; requires d >= 3.
GridField deviatoric_symmetric_gradient(const GridField& u);

/// Relative spectral residual of div_k F (0 for the zero field).
double divk_residual(const GridField& F, int k);

/// Random band-limited mean-zero field: Gaussian modes with the top third of
/// the spectrum zeroed.
GridField random_band_limited(uint64_t seed, int d, int M, int m);

/// P_k of a random band-limited field; certified div_k residual < 1e-10.
GridField make_divk_free(uint64_t seed, int d, int M, int k);

/// Convolution with a normalized smooth bump of radius 1/h_index.
GridField mollify(const GridField& F, int h_index);

/// Max relative excess of int_0^s (F_h)* over int_0^s F* across probe points
/// (0 when the averaging contraction holds exactly).
double mollify_contraction_gap(const GridField& F, int h_index, int probes = 50);

/// Decreasing rearrangement of |F| (pointwise Euclidean magnitude across
/// components) as a step profile on (0, 1].
StepProfile field_rearrangement(const GridField& F);

/// For G = riesz_potential(F, alpha): max over the t-grid of
///   int_0^t s^{-alpha/d} G*(s) ds  /  int_0^t s^{-alpha/d} int_s^1 r^{alpha/d-1} F*(r) dr ds.
/// Requires the div_k certificate on F.  Returns 0 for the zero field.
double rearrangement_inequality_check(const GridField& F, double alpha, int k,
                                      const std::vector<double>& tgrid);

/// Binary grid file (fixed little-endian header + raw doubles) with a JSON
/// metadata sidecar at path + ".json".
void write_field(const GridField& F, const std::string& path);
GridField read_field(const std::string& path);

}  // namespace ritk
