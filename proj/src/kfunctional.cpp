#include "ritk/kfunctional.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace ritk {

void KProfile::validate() const {
  if (t.size() != K.size()) throw std::invalid_argument("KProfile: size mismatch");
  for (size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || (i > 0 && t[i] <= t[i - 1]))
      throw std::invalid_argument("KProfile: t-grid must be positive increasing");
    if (!(K[i] >= 0.0)) throw std::invalid_argument("KProfile: negative value");
  }
  const double scale = K.empty() ? 0.0 : *std::max_element(K.begin(), K.end());
  for (size_t i = 1; i < K.size(); ++i)
    if (K[i] < K[i - 1] - 1e-9 * scale)
      throw std::invalid_argument("KProfile: K must be nondecreasing in t");
  for (size_t i = 2; i < K.size(); ++i) {
    const double s1 = (K[i - 1] - K[i - 2]) / (t[i - 1] - t[i - 2]);
    const double s2 = (K[i] - K[i - 1]) / (t[i] - t[i - 1]);
    if (s2 > s1 + 1e-7 * (std::abs(s1) + scale))
      throw std::invalid_argument("KProfile: K must be concave in t");
  }
}

namespace {

// splits f at level c and cut tau: f0 = (f - c)_+ chi_(0,tau], f1 = f - f0
void truncation_split(const StepProfile& f, double c, double tau, StepProfile& f0,
                      StepProfile& f1) {
  f0 = StepProfile::zero(f.L);
  f1 = StepProfile::zero(f.L);
  f1.rearranged = false;
  auto push = [](StepProfile& g, double brk, double val) {
    if (!g.values.empty() && g.values.back() == val)
      g.breaks.back() = brk;
    else {
      g.breaks.push_back(brk);
      g.values.push_back(val);
    }
  };
  double prev = 0.0;
  for (size_t i = 0; i < f.breaks.size(); ++i) {
    const double hi = f.breaks[i], v = f.values[i];
    if (prev < tau) {
      const double cut = std::min(hi, tau);
      push(f0, cut, std::max(v - c, 0.0));
      push(f1, cut, std::min(v, c));
      if (hi > tau) push(f1, hi, v);
    } else {
      push(f1, hi, v);
    }
    prev = hi;
  }
}

}  // namespace

double k_bruteforce(const StepProfile& f, double t, double p, double q) {
  const StepProfile fr = f.rearranged ? f : rearrange(f);
  if (fr.breaks.empty()) return 0.0;
  const NormSpec target = NormSpec::lorentz_star(p, q, fr.L);

  auto objective = [&](double c, double tau) {
    StepProfile f0, f1;
    truncation_split(fr, c, tau, f0, f1);
    return f0.total_integral() + t * ri_norm(f1, target);
  };

  std::vector<double> levels{0.0};
  for (double v : fr.values) levels.push_back(v);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (size_t i = levels.size() - 1; i > 0; --i)
    levels.push_back(0.5 * (levels[i] + levels[i - 1]));
  std::sort(levels.begin(), levels.end());

  std::vector<double> cuts{0.0};
  cuts.insert(cuts.end(), fr.breaks.begin(), fr.breaks.end());

  double best = kInf, best_c = 0.0, best_tau = 0.0;
  for (double c : levels)
    for (double tau : cuts) {
      const double val = objective(c, tau);
      if (val < best) {
        best = val;
        best_c = c;
        best_tau = tau;
      }
    }

  // refine the level between its grid neighbors (the cut is already optimal
  // at a block boundary: the objective is linear in tau inside a block)
  auto it = std::lower_bound(levels.begin(), levels.end(), best_c);
  double lo = it == levels.begin() ? 0.0 : *(it - 1);
  double hi = (it + 1) == levels.end() ? best_c : *(it + 1);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double v1 = objective(x1, best_tau), v2 = objective(x2, best_tau);
  for (int i = 0; i < 60; ++i) {
    if (v1 <= v2) {
      b = x2;
      x2 = x1;
      v2 = v1;
      x1 = b - gr * (b - a);
      v1 = objective(x1, best_tau);
    } else {
      a = x1;
      x1 = x2;
      v1 = v2;
      x2 = a + gr * (b - a);
      v2 = objective(x2, best_tau);
    }
  }
  return std::min({best, v1, v2});
}

double k_holmstedt(const StepProfile& f, double p, double q, double t) {
  if (!(p > 1.0) || p == kInf)
    throw std::invalid_argument("k_holmstedt: need p in (1, inf)");
  const StepProfile fr = f.rearranged ? f : rearrange(f);
  const double pp = p / (p - 1.0);
  const double s0 = std::pow(t, pp);
  double out = head_integral(fr, std::min(s0, fr.L));
  if (s0 >= fr.support()) return out;
  if (q == kInf) {
    double m = 0.0;
    double prev = 0.0;
    for (size_t i = 0; i < fr.breaks.size(); ++i) {
      if (fr.breaks[i] > s0 && fr.values[i] > 0.0)
        m = std::max(m, fr.values[i] * std::pow(fr.breaks[i], 1.0 / p));
      prev = fr.breaks[i];
    }
    return out + t * m;
  }
  double acc = 0.0, prev = 0.0;
  for (size_t i = 0; i < fr.breaks.size(); ++i) {
    const double lo = std::max(prev, s0), hi = fr.breaks[i];
    if (hi > lo && fr.values[i] > 0.0)
      acc += std::pow(fr.values[i], q) * power_integral(q / p - 1.0, lo, hi);
    prev = hi;
  }
  return out + t * std::pow(acc, 1.0 / q);
}

double k_riesz_couple(const StepProfile& g, double alpha, double n, double t) {
  if (!(alpha > 0.0) || !(alpha < n))
    throw std::invalid_argument("k_riesz_couple: need 0 < alpha < n");
  const StepProfile gr = g.rearranged ? g : rearrange(g);
  const double cut = std::pow(t, n / (n - alpha));
  return weighted_integral(gr, -alpha / n, 0.0, std::min(cut, gr.L));
}

KProfile k_profile(const StepProfile& f, double p, double q,
                   const std::vector<double>& tgrid) {
  KProfile out;
  out.couple = "(L1, L(" + std::to_string(p) + "," + std::to_string(q) + "))";
  for (double t : tgrid) {
    out.t.push_back(t);
    out.K.push_back(k_holmstedt(f, p, q, t));
  }
  return out;
}

CzDecomposition cz_decompose(const GridField& F, double lambda) {
  if (F.m != 1) throw std::invalid_argument("cz_decompose: scalar field expected");
  if (!(lambda > 0.0)) throw std::domain_error("cz_decompose: lambda must be positive");
  F.validate();
  const int M = F.M, Mz = F.d == 3 ? F.M : 1;

  CzDecomposition out;
  out.H = F;

  auto cube_stats = [&](int x0, int y0, int z0, int size, double& mean,
                        double& abs_mean) {
    double s = 0.0, sa = 0.0;
    const int sz = F.d == 3 ? size : 1;
    for (int z = z0; z < z0 + sz; ++z)
      for (int y = y0; y < y0 + size; ++y)
        for (int x = x0; x < x0 + size; ++x) {
          const double v = F.at(0, x, y, z);
          s += v;
          sa += std::abs(v);
        }
    const double cnt = static_cast<double>(size) * size * (F.d == 3 ? size : 1);
    mean = s / cnt;
    abs_mean = sa / cnt;
  };

  auto make_bad = [&](int x0, int y0, int z0, int size, double mean) {
    CzPiece piece;
    piece.K = GridField::zeros(F.d, F.M, 1);
    piece.x0 = x0;
    piece.y0 = y0;
    piece.z0 = z0;
    piece.size = size;
    const int sz = F.d == 3 ? size : 1;
    for (int z = z0; z < z0 + sz; ++z)
      for (int y = y0; y < y0 + size; ++y)
        for (int x = x0; x < x0 + size; ++x) {
          piece.K.at(0, x, y, z) = F.at(0, x, y, z) - mean;
          out.H.at(0, x, y, z) = mean;
        }
    out.pieces.push_back(std::move(piece));
  };

  std::function<void(int, int, int, int)> subdivide = [&](int x0, int y0, int z0,
                                                          int size) {
    if (size == 1) return;  // good cell: H keeps F there
    const int half = size / 2;
    const int zsteps = F.d == 3 ? 2 : 1;
    for (int dz = 0; dz < zsteps; ++dz)
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          const int cx = x0 + dx * half, cy = y0 + dy * half, cz = z0 + dz * half;
          double mean, abs_mean;
          cube_stats(cx, cy, cz, half, mean, abs_mean);
          if (abs_mean > lambda)
            make_bad(cx, cy, cz, half, mean);
          else
            subdivide(cx, cy, cz, half);
        }
  };

  double mean, abs_mean;
  cube_stats(0, 0, 0, M, mean, abs_mean);
  if (abs_mean > lambda)
    make_bad(0, 0, 0, M, mean);
  else
    subdivide(0, 0, 0, M);
  (void)Mz;
  return out;
}

ConstrainedSplit constrained_k_split(const GridField& F, double t, double p, double q,
                                     int k) {
  if (!(t > 0.0)) throw std::invalid_argument("constrained_k_split: t must be positive");
  if (divk_residual(F, k) > 1e-8)
    throw std::invalid_argument("constrained_k_split: input is not div_k-free");
  if (!F.is_mean_zero(1e-8))
    throw std::invalid_argument("constrained_k_split: components must be mean-zero");

  ConstrainedSplit out;
  const double pp = p / (p - 1.0);
  const double lambda = std::pow(t, -pp);
  GridField H = GridField::zeros(F.d, F.M, F.m);
  const size_t n = F.points();
  for (int c = 0; c < F.m; ++c) {
    const CzDecomposition cz = cz_decompose(F.component(c), lambda);
    std::copy(cz.H.values.begin(), cz.H.values.end(), H.values.begin() + c * n);
  }
  const GridField K = F - H;
  out.f1 = projector_pk(K, k);
  out.fpq = projector_pk(H, k);

  const StepProfile f1s = field_rearrangement(out.f1);
  const StepProfile fpqs = field_rearrangement(out.fpq);
  out.cost = f1s.total_integral() + t * ri_norm(fpqs, NormSpec::lorentz_star(p, q, 1.0));
  out.holmstedt = k_holmstedt(field_rearrangement(F), p, q, t);
  out.ratio = out.holmstedt > 0.0 ? out.cost / out.holmstedt : 0.0;
  return out;
}

}  // namespace ritk
