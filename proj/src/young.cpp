#include "ritk/young.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ritk {

double YoungFunction::log_value(double u) const {
  const double v = value(std::exp(u));
  if (v == kInf) return kInf;
  return v > 0.0 ? std::log(v) : -kInf;
}

double YoungFunction::density_inverse(double r, double hi) const {
  if (!(r >= 0.0)) throw std::invalid_argument("density_inverse: r must be >= 0");
  double lo = 1e-280;
  if (!(density(hi) > r)) return hi;
  if (density(lo) > r) return lo;
  for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-13; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (density(mid) > r)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

namespace {

// log(b + t) evaluated from u = log t without overflow.
double stable_log_shift(double b, double u) {
  if (u > 40.0) return u + std::log1p(b * std::exp(-u));
  return std::log(b + std::exp(u));
}

class PowerLog final : public YoungFunction {
 public:
  PowerLog(double p, double r, double b) : p_(p), r_(r), b_(b) {}

  double value(double t) const override {
    if (!(t > 0.0)) return 0.0;
    return std::pow(t, p_) * std::pow(std::log(b_ + t), r_);
  }
  double density(double t) const override {
    if (!(t > 0.0)) return 0.0;
    const double l = std::log(b_ + t);
    return std::pow(t, p_ - 1.0) * std::pow(l, r_ - 1.0) *
           (p_ * l + r_ * t / (b_ + t));
  }
  double log_value(double u) const override {
    return p_ * u + r_ * std::log(stable_log_shift(b_, u));
  }
  std::string describe() const override {
    char buf[96];
    std::snprintf(buf, sizeof buf, "t^%g (log(%g+t))^%g", p_, b_, r_);
    return buf;
  }

 private:
  double p_, r_, b_;
};

class PowerLogLog final : public YoungFunction {
 public:
  PowerLogLog(double p, double r, double b) : p_(p), r_(r), b_(b) {}

  double value(double t) const override {
    if (!(t > 0.0)) return 0.0;
    return std::pow(t, p_) * std::pow(ll(t), r_);
  }
  double density(double t) const override {
    if (!(t > 0.0)) return 0.0;
    const double l1 = std::log(b_ + t), l2 = std::log(b_ + l1);
    return std::pow(t, p_ - 1.0) * std::pow(l2, r_ - 1.0) *
           (p_ * l2 + r_ * t / ((b_ + l1) * (b_ + t)));
  }
  double log_value(double u) const override {
    const double l1 = stable_log_shift(b_, u);
    return p_ * u + r_ * std::log(std::log(b_ + l1));
  }
  std::string describe() const override {
    char buf[96];
    std::snprintf(buf, sizeof buf, "t^%g (loglog)^%g b=%g", p_, r_, b_);
    return buf;
  }

 private:
  double ll(double t) const { return std::log(b_ + std::log(b_ + t)); }
  double p_, r_, b_;
};

class Exponential final : public YoungFunction {
 public:
  double value(double t) const override { return t > 0.0 ? std::expm1(t) : 0.0; }
  double density(double t) const override { return t > 0.0 ? std::exp(t) : 1.0; }
  double log_value(double u) const override {
    const double t = std::exp(u);
    if (t < 1e-8) return u;  // expm1(t) ~ t
    if (t > 40.0) return t;
    return std::log(std::expm1(t));
  }
  std::string describe() const override { return "exp(t) - 1"; }
};

// Density tabulated at nodes, power-interpolated in log-log coordinates.
class Tabulated final : public YoungFunction {
 public:
  explicit Tabulated(std::vector<std::pair<double, double>> nodes)
      : t_(nodes.size()), a_(nodes.size()) {
    if (nodes.size() < 2)
      throw std::invalid_argument("tabulated density: need at least 2 nodes");
    for (size_t i = 0; i < nodes.size(); ++i) {
      t_[i] = nodes[i].first;
      a_[i] = nodes[i].second;
      if (!(t_[i] > 0.0) || !std::isfinite(t_[i]) || !(a_[i] > 0.0) ||
          !std::isfinite(a_[i]))
        throw std::invalid_argument("tabulated density: nodes must be positive finite");
      if (i > 0) {
        if (!(t_[i] > t_[i - 1]))
          throw std::invalid_argument("tabulated density: arguments must increase");
        if (a_[i] < a_[i - 1] * (1.0 - 1e-9))
          throw std::invalid_argument("tabulated density: density must be nondecreasing");
        a_[i] = std::max(a_[i], a_[i - 1]);
      }
    }
    const size_t m = t_.size();
    q_.resize(m - 1);
    for (size_t i = 0; i + 1 < m; ++i)
      q_[i] = a_[i + 1] == a_[i]
                  ? 0.0
                  : std::log(a_[i + 1] / a_[i]) / std::log(t_[i + 1] / t_[i]);
    // prefix values A(t_i); below the first node the first segment's power
    // law is extended down to zero
    prefix_.resize(m);
    prefix_[0] = a_[0] * t_[0] / (q_.front() + 1.0);
    for (size_t i = 0; i + 1 < m; ++i)
      prefix_[i + 1] = prefix_[i] + seg_mass(i, t_[i + 1]);
  }

  double density(double t) const override {
    if (!(t > 0.0)) return 0.0;
    if (t <= t_.front()) return a_.front() * std::pow(t / t_.front(), q_.front());
    if (t >= t_.back()) return a_.back() * std::pow(t / t_.back(), q_.back());
    const size_t i = seg_index(t);
    return a_[i] * std::pow(t / t_[i], q_[i]);
  }

  double value(double t) const override {
    if (!(t > 0.0)) return 0.0;
    if (t <= t_.front())
      return a_.front() * t_.front() / (q_.front() + 1.0) *
             std::pow(t / t_.front(), q_.front() + 1.0);
    if (t >= t_.back()) {
      const double q = q_.back();
      return prefix_.back() +
             a_.back() * t_.back() / (q + 1.0) *
                 (std::pow(t / t_.back(), q + 1.0) - 1.0);
    }
    const size_t i = seg_index(t);
    return prefix_[i] + seg_mass(i, t);
  }

  double log_value(double u) const override {
    const double lt_back = std::log(t_.back());
    if (u <= lt_back) {
      const double v = value(std::exp(u));
      return v > 0.0 ? std::log(v) : -kInf;
    }
    const double q = q_.back();
    const double lead = std::log(a_.back() * t_.back() / (q + 1.0)) +
                        (q + 1.0) * (u - lt_back);
    const double c = prefix_.back() - a_.back() * t_.back() / (q + 1.0);
    if (lead > 700.0) return lead;
    return lead + std::log1p(c * std::exp(-lead));
  }

  std::string describe() const override {
    char buf[64];
    std::snprintf(buf, sizeof buf, "tabulated density, %zu nodes", t_.size());
    return buf;
  }

 private:
  size_t seg_index(double t) const {
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    return static_cast<size_t>(it - t_.begin()) - 1;
  }
  // int_{t_i}^{x} a_i (tau/t_i)^{q_i} dtau for x in the i-th segment
  double seg_mass(size_t i, double x) const {
    const double q = q_[i];
    return a_[i] * t_[i] / (q + 1.0) * (std::pow(x / t_[i], q + 1.0) - 1.0);
  }

  std::vector<double> t_, a_, q_, prefix_;
};

class Capped final : public YoungFunction {
 public:
  Capped(YoungPtr base, double threshold) : base_(std::move(base)), thr_(threshold) {
    if (!(thr_ > 0.0)) throw std::invalid_argument("capped: threshold must be positive");
  }
  double value(double t) const override { return t > thr_ ? kInf : base_->value(t); }
  double density(double t) const override {
    return t > thr_ ? kInf : base_->density(t);
  }
  double log_value(double u) const override {
    return u > std::log(thr_) ? kInf : base_->log_value(u);
  }
  double cap() const override { return thr_; }
  std::string describe() const override {
    char buf[64];
    std::snprintf(buf, sizeof buf, "capped at %g: ", thr_);
    return buf + base_->describe();
  }

 private:
  YoungPtr base_;
  double thr_;
};

// Smallest b in {e, e^2, ...} for which the sampled density is positive and
// nondecreasing on a wide log grid (i.e. the function is convex in practice).
double pick_offset(const std::function<YoungPtr(double)>& make) {
  for (int m = 1; m <= 12; ++m) {
    const double b = std::exp(static_cast<double>(m));
    const auto cand = make(b);
    const auto grid = log_grid(1e-9, 1e9, 5);
    bool ok = true;
    double prev = 0.0;
    for (double t : grid) {
      const double a = cand->density(t);
      if (!(a > 0.0) || a < prev * (1.0 - 1e-12)) {
        ok = false;
        break;
      }
      prev = std::max(prev, a);
    }
    if (ok) return b;
  }
  return std::exp(12.0);
}

}  // namespace

YoungPtr make_power_log(double p, double r, std::optional<double> b) {
  if (!(p >= 1.0)) throw std::invalid_argument("make_power_log: need p >= 1");
  if (r == 0.0) return std::make_shared<PowerLog>(p, 0.0, std::exp(1.0));
  const double off =
      b ? *b : pick_offset([&](double bb) { return std::make_shared<PowerLog>(p, r, bb); });
  return std::make_shared<PowerLog>(p, r, off);
}

YoungPtr make_power_loglog(double p, double r, std::optional<double> b) {
  if (!(p >= 1.0)) throw std::invalid_argument("make_power_loglog: need p >= 1");
  if (r == 0.0) return std::make_shared<PowerLogLog>(p, 0.0, std::exp(1.0));
  const double off = b ? *b : pick_offset([&](double bb) {
    return std::make_shared<PowerLogLog>(p, r, bb);
  });
  return std::make_shared<PowerLogLog>(p, r, off);
}

YoungPtr make_exponential() { return std::make_shared<Exponential>(); }

YoungPtr make_tabulated(std::vector<std::pair<double, double>> density_nodes) {
  return std::make_shared<Tabulated>(std::move(density_nodes));
}

YoungPtr make_capped(YoungPtr base, double threshold) {
  return std::make_shared<Capped>(std::move(base), threshold);
}

namespace {

void require_orders(double n, double k) {
  if (!(k > 0.0) || !(n > k))
    throw std::invalid_argument("need 0 < k < n");
}

}  // namespace

bool check_zero_integrability(const YoungFunction& A, double n, double k) {
  require_orders(n, k);
  const double kappa = k / (n - k);
  auto log_g = [&A, kappa](double u) {
    const double la = A.log_value(u);
    if (la == kInf) return -kInf;
    return kappa * (u - la);
  };
  return classify_integral_at_zero(log_g) == IntegralVerdict::Convergent;
}

bool check_infinity_integrability(const YoungFunction& A, double n, double k) {
  require_orders(n, k);
  const double kappa = k / (n - k);
  auto log_g = [&A, kappa](double u) {
    const double la = A.log_value(u);
    if (la == kInf) return -kInf;
    return kappa * (u - la);
  };
  return classify_integral_at_infinity(log_g) == IntegralVerdict::Convergent;
}

namespace {

class SobolevConjugate final : public YoungFunction {
 public:
  SobolevConjugate(YoungPtr base, std::shared_ptr<LogAccumulator> phi, double n,
                   double k, double sup_h, bool finite)
      : base_(std::move(base)),
        phi_(std::move(phi)),
        n_(n),
        k_(k),
        sup_h_(sup_h),
        finite_(finite) {}

  double h_inverse(double t) const {
    if (!(t > 0.0)) return 0.0;
    const double ltarget = std::log(t) * n_ / (n_ - k_);
    if (ltarget > 700.0)
      throw std::domain_error("conjugate: argument too large to invert");
    return phi_->inverse_prefix(std::exp(ltarget), 1e290);
  }

  double value(double t) const override {
    if (!(t > 0.0)) return 0.0;
    if (!finite_ && t >= sup_h_ * (1.0 - 1e-12)) return kInf;
    return base_->value(h_inverse(t));
  }
  double density(double t) const override {
    if (!(t > 0.0)) return 0.0;
    if (!finite_ && t >= sup_h_ * (1.0 - 1e-12)) return kInf;
    const double s = h_inverse(t);
    const double kappa = k_ / (n_ - k_);
    const double lg = kappa * (std::log(s) - base_->log_value(std::log(s)));
    const double hp = (n_ - k_) / n_ * std::pow(phi_->prefix(s), -k_ / n_) *
                      std::exp(lg);
    return base_->density(s) / hp;
  }
  double log_value(double u) const override {
    if (!finite_ && u >= std::log(sup_h_ * (1.0 - 1e-12))) return kInf;
    const double s = h_inverse(std::exp(u));
    return base_->log_value(std::log(s));
  }
  double cap() const override { return finite_ ? kInf : sup_h_; }
  std::string describe() const override {
    char buf[96];
    std::snprintf(buf, sizeof buf, "conjugate(n=%g, k=%g) of ", n_, k_);
    return buf + base_->describe();
  }

 private:
  YoungPtr base_;
  std::shared_ptr<LogAccumulator> phi_;
  double n_, k_, sup_h_;
  bool finite_;
};

}  // namespace

ConjugateResult::ConjugateResult(YoungPtr base, double n, double k)
    : base_(std::move(base)), n_(n), k_(k) {
  require_orders(n, k);
  const double kappa = k / (n - k);
  phi_ = std::make_shared<LogAccumulator>([base = base_, kappa](double tau) {
    const double la = base->log_value(std::log(tau));
    if (la == kInf) return 0.0;
    return std::exp(kappa * (std::log(tau) - la));
  });
  finite_everywhere_ = !check_infinity_integrability(*base_, n, k);
  if (finite_everywhere_) {
    sup_H_ = kInf;
  } else {
    // walk upward until the total mass of (tau/A)^kappa stalls
    double t = 1.0, total = phi_->prefix(t);
    for (int i = 0; i < 40; ++i) {
      const double p = phi_->prefix(t * 100.0);
      t *= 100.0;
      if (p - total <= 1e-11 * p && i > 1) {
        total = p;
        break;
      }
      total = p;
    }
    sup_H_ = std::pow(total, (n - k) / n);
  }
  conjugate_ = std::make_shared<SobolevConjugate>(base_, phi_, n_, k_, sup_H_,
                                                  finite_everywhere_);
}

double ConjugateResult::H(double t) const {
  if (!(t > 0.0)) return 0.0;
  return std::pow(phi_->prefix(t), (n_ - k_) / n_);
}

double ConjugateResult::H_inverse(double y) const {
  if (!(y > 0.0)) return 0.0;
  if (!finite_everywhere_ && y >= sup_H_) return kInf;
  return phi_->inverse_prefix(std::pow(y, n_ / (n_ - k_)), 1e290);
}

ConjugateResult sobolev_conjugate(YoungPtr A, double n, double k) {
  require_orders(n, k);
  if (!check_zero_integrability(*A, n, k))
    throw std::invalid_argument(
        "sobolev_conjugate: (t/A(t))^{k/(n-k)} must be integrable near zero");
  return ConjugateResult(std::move(A), n, k);
}

YoungPtr reduced_conjugate(const YoungFunction& A, double n, double k) {
  require_orders(n, k);
  const double kappa = k / (n - k);  // inner density exponent
  const double nu = n / k;           // outer weight on Psi
  const double mu = n / (n - k);     // outer weight on the density
  LogAccumulator psi(
      [&A, kappa](double rho) { return std::pow(A.density(rho), -kappa); });
  auto w = [&A, &psi, nu, mu](double t) {
    return std::pow(psi.prefix(t), -nu) * std::pow(A.density(t), -mu);
  };

  const auto T = log_grid(1e-8, 1e45, 10);

  // tail of the outer integral beyond the last grid node, decade by decade
  double tail = 0.0;
  {
    double lo = T.back();
    for (int j = 0; j < 120; ++j) {
      const double hi = lo * 10.0;
      const double m = integrate_log(w, lo, hi, 1e-9);
      tail += m;
      if (!(m > 1e-11 * tail)) break;
      lo = hi;
    }
  }

  // chain the outer integral downward through the grid: J[i] = int_{T_i}^inf w
  std::vector<double> J(T.size());
  J.back() = tail;
  for (size_t i = T.size() - 1; i > 0; --i)
    J[i - 1] = J[i] + integrate_log(w, T[i - 1], T[i], 1e-9);

  // node at (argument, density) = (J^{-k/(n-k)}, a(T_i))
  std::vector<std::pair<double, double>> nodes;
  double prev_x = 0.0, prev_r = 0.0;
  for (size_t i = 0; i < T.size(); ++i) {
    if (!(J[i] > 0.0) || !std::isfinite(J[i])) continue;
    const double x = std::pow(J[i], -kappa);
    double r = A.density(T[i]);
    if (!(x > prev_x * (1.0 + 1e-10)) || !std::isfinite(x)) continue;
    if (!(r > 0.0) || !std::isfinite(r)) continue;
    r = std::max(r, prev_r);
    nodes.emplace_back(x, r);
    prev_x = x;
    prev_r = r;
  }
  if (nodes.size() < 2)
    throw std::domain_error("reduced_conjugate: degenerate node set");
  return make_tabulated(std::move(nodes));
}

EquivalenceResult equivalent(const YoungFunction& A, const YoungFunction& B,
                             Regime regime) {
  double lo = 1e-6, hi = 1e6;
  if (regime == Regime::NearZero) {
    lo = 1e-9;
    hi = 1e-2;
  } else if (regime == Regime::NearInfinity) {
    lo = 1e2;
    hi = 1e9;
  }
  const auto grid = log_grid(lo, hi, 10);
  auto holds = [&](double c) {
    const double lc = std::log(c), tol = 1e-9;
    for (double t : grid) {
      const double u = std::log(t);
      const double bv = B.log_value(u);
      const double a_lo = A.log_value(u - lc), a_hi = A.log_value(u + lc);
      if (bv == kInf) {
        if (a_hi != kInf) return false;
        continue;
      }
      if (a_lo == kInf) return false;
      if (!(a_lo <= bv + tol) || !(bv <= a_hi + tol)) return false;
    }
    return true;
  };
  if (!holds(64.0)) return {false, kInf};
  double clo = 0.0, chi = std::log(64.0);  // bisect on log c
  if (holds(1.0)) return {true, 1.0};
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (clo + chi);
    if (holds(std::exp(mid)))
      chi = mid;
    else
      clo = mid;
  }
  return {true, std::exp(chi)};
}

}  // namespace ritk
