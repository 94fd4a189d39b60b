#pragma once

#include <string>
#include <vector>

#include "ritk/grid_field.hpp"
#include "ritk/norms.hpp"

namespace ritk {

/// Sampled K-functional along a t-grid.
struct KProfile {
  std::vector<double> t;   // positive, increasing
  std::vector<double> K;   // K(f, t_i)
  std::string couple;
  void validate() const;   // monotone + concave (sampled), throws on violation
};

/// Truncation-family oracle for K(f, t; L^1, L^{p,q}): minimizes
/// ||f0||_1 + t ||f - f0||_{p,q} over f0 = (f - c)_+ chi_(0,tau), grid-searched
/// over block cuts and refined in the level c.
double k_bruteforce(const StepProfile& f, double t, double p, double q);

/// Holmstedt's closed formula for the same couple:
/// int_0^{t^{p'}} f* + t (int_{t^{p'}}^L s^{q/p-1} f*^q)^{1/q}, block-exact
/// (sup form when q = inf).  Requires p in (1, inf).
double k_holmstedt(const StepProfile& f, double p, double q, double t);

/// K-functional for the couple (L^{n/(n-a),1}, L^inf):
/// int_0^{t^{n/(n-a)}} s^{-a/n} g*(s) ds.
double k_riesz_couple(const StepProfile& g, double alpha, double n, double t);

/// Holmstedt K-profile along a t-grid.
KProfile k_profile(const StepProfile& f, double p, double q,
                   const std::vector<double>& tgrid);

/// One bad piece of a Calderon-Zygmund decomposition: zero-mean on its cube.
struct CzPiece {
  GridField K;            // full-grid field supported on the cube
  int x0 = 0, y0 = 0, z0 = 0, size = 0;  // cube corner and side in cells
};

struct CzDecomposition {
  GridField H;                  // |H| <= 2^d lambda (when the root average is)
  std::vector<CzPiece> pieces;  // F = H + sum K_i exactly
};

/// Dyadic stopping-time decomposition of a scalar field at height lambda,
/// rooted at the full torus; cube averages of |F| drive the stopping.
CzDecomposition cz_decompose(const GridField& F, double lambda);

struct ConstrainedSplit {
  GridField f1;         // L^1 part, div_k-free
  GridField fpq;        // L^{p,q} part, div_k-free
  double cost = 0.0;    // ||f1||_1 + t ||fpq||_{p,q} via field rearrangements
  double holmstedt = 0.0;  // unconstrained K of |F| rearranged
  double ratio = 0.0;      // cost / holmstedt (0 for the zero field)
};

/// Divergence-constrained K-splitting: Calderon-Zygmund at lambda = t^{-p'}
/// per component, then the projector P_k applied to both parts so each stays
/// div_k-free.  Requires div_k residual < 1e-8 and mean-zero components.
ConstrainedSplit constrained_k_split(const GridField& F, double t, double p, double q,
                                     int k);

}  // namespace ritk
