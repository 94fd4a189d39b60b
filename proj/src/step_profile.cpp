#include "ritk/step_profile.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ritk {

double StepProfile::operator()(double s) const {
  if (s <= 0.0 || breaks.empty() || s > breaks.back()) return 0.0;
  const auto it = std::lower_bound(breaks.begin(), breaks.end(), s);
  return values[static_cast<size_t>(it - breaks.begin())];
}

double StepProfile::total_integral() const {
  double acc = 0.0, prev = 0.0;
  for (size_t i = 0; i < breaks.size(); ++i) {
    acc += values[i] * (breaks[i] - prev);
    prev = breaks[i];
  }
  return acc;
}

double StepProfile::max_value() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

bool StepProfile::is_nonincreasing() const {
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1]) return false;
  return true;
}

void StepProfile::validate() const {
  if (breaks.size() != values.size())
    throw std::invalid_argument("StepProfile: breaks/values size mismatch");
  if (!(L > 0.0)) throw std::invalid_argument("StepProfile: L must be positive");
  double prev = 0.0;
  for (size_t i = 0; i < breaks.size(); ++i) {
    if (!(breaks[i] > prev)) throw std::invalid_argument("StepProfile: breaks not increasing");
    if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
      throw std::invalid_argument("StepProfile: values must be finite and >= 0");
    prev = breaks[i];
  }
  if (!breaks.empty() && breaks.back() > L * (1.0 + 1e-15))
    throw std::invalid_argument("StepProfile: last breakpoint exceeds L");
  if (rearranged && !is_nonincreasing())
    throw std::invalid_argument("StepProfile: rearranged profile must be nonincreasing");
}

StepProfile StepProfile::constant(double c, double length, double L) {
  StepProfile f{{length}, {c}, L, true};
  return f;
}

double SampleCloud::total_measure() const {
  double m = 0.0;
  for (auto& [v, mu] : points) m += mu;
  return m;
}

StepProfile rearrange(const SampleCloud& cloud, double L) {
  const double total = cloud.total_measure();
  if (total > L * (1.0 + 1e-12))
    throw std::invalid_argument("rearrange: total measure exceeds L");
  auto pts = cloud.points;
  for (auto& [v, mu] : pts) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("rearrange: bad value");
    if (!(mu > 0.0)) throw std::invalid_argument("rearrange: nonpositive measure");
  }
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  StepProfile out;
  out.L = L;
  out.rearranged = true;
  double acc = 0.0;
  for (auto& [v, mu] : pts) {
    if (v == 0.0) break;  // trailing zeros are the implicit tail
    acc = std::min(acc + mu, L);
    // blocks whose width vanishes at the current magnitude are dropped
    if (!out.breaks.empty() && acc <= out.breaks.back()) continue;
    if (!out.values.empty() && out.values.back() == v)
      out.breaks.back() = acc;  // merge ties
    else {
      out.breaks.push_back(acc);
      out.values.push_back(v);
    }
  }
  return out;
}

StepProfile rearrange(const StepProfile& f) {
  SampleCloud c;
  double prev = 0.0;
  for (size_t i = 0; i < f.breaks.size(); ++i) {
    if (f.values[i] > 0.0) c.points.emplace_back(f.values[i], f.breaks[i] - prev);
    prev = f.breaks[i];
  }
  return rearrange(c, f.L);
}

DoubleStar::DoubleStar(const StepProfile& fstar)
    : breaks_(fstar.breaks), values_(fstar.values), L_(fstar.L) {
  if (!fstar.rearranged || !fstar.is_nonincreasing())
    throw std::invalid_argument("DoubleStar: input must be rearranged");
  cum_.resize(breaks_.size() + 1, 0.0);
  double prev = 0.0;
  for (size_t i = 0; i < breaks_.size(); ++i) {
    cum_[i + 1] = cum_[i] + values_[i] * (breaks_[i] - prev);
    prev = breaks_[i];
  }
}

double DoubleStar::head(double s) const {
  if (s <= 0.0 || breaks_.empty()) return 0.0;
  if (s >= breaks_.back()) return cum_.back();
  const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), s);
  const size_t i = static_cast<size_t>(it - breaks_.begin());
  const double lo = i == 0 ? 0.0 : breaks_[i - 1];
  return cum_[i] + values_[i] * (s - lo);
}

double DoubleStar::operator()(double s) const {
  if (!(s > 0.0)) throw std::domain_error("DoubleStar: s must be positive");
  return head(s) / s;
}

double pairing(const StepProfile& f, const StepProfile& g) {
  if (std::abs(f.L - g.L) > 1e-12 * std::max(f.L, g.L))
    throw std::invalid_argument("pairing: incompatible domain lengths");
  double acc = 0.0;
  size_t i = 0, j = 0;
  double pos = 0.0;
  while (i < f.breaks.size() && j < g.breaks.size()) {
    const double next = std::min(f.breaks[i], g.breaks[j]);
    acc += f.values[i] * g.values[j] * (next - pos);
    pos = next;
    if (f.breaks[i] == next) ++i;
    if (j < g.breaks.size() && g.breaks[j] == next) ++j;
  }
  return acc;
}

namespace {

// int_lo^hi r^gamma dr
double power_block(double gamma, double lo, double hi) {
  if (hi <= lo) return 0.0;
  if (std::abs(gamma + 1.0) < 1e-14) return std::log(hi / lo);
  return (std::pow(hi, gamma + 1.0) - std::pow(lo, gamma + 1.0)) / (gamma + 1.0);
}

}  // namespace

double weighted_integral(const StepProfile& f, double gamma, double lo, double hi) {
  double acc = 0.0;
  double prev = 0.0;
  for (size_t i = 0; i < f.breaks.size(); ++i) {
    const double a = std::max(prev, lo), b = std::min(f.breaks[i], hi);
    if (b > a && f.values[i] != 0.0) acc += f.values[i] * power_block(gamma, a, b);
    prev = f.breaks[i];
    if (prev >= hi) break;
  }
  return acc;
}

double tail_weighted_integral(const StepProfile& f, double gamma, double s) {
  if (s >= f.L) return 0.0;
  if (!(s > 0.0)) throw std::domain_error("tail_weighted_integral: s must be positive");
  return weighted_integral(f, gamma, s, f.L);
}

double head_integral(const StepProfile& f, double s) {
  if (s <= 0.0) return 0.0;
  return weighted_integral(f, 0.0, 0.0, std::min(s, f.L));
}

double head_weighted_tail_integral(const StepProfile& f, double kn, double tau) {
  if (!(kn > 0.0) || !(kn < 1.0))
    throw std::invalid_argument("head_weighted_tail_integral: need 0 < kn < 1");
  if (!(tau > 0.0) || f.breaks.empty()) return 0.0;
  const size_t nb = f.breaks.size();
  auto P = [kn](double x) { return std::pow(x, kn) / kn; };
  std::vector<double> tail_at_hi(nb, 0.0);
  for (size_t i = nb - 1; i-- > 0;)
    tail_at_hi[i] =
        tail_at_hi[i + 1] + f.values[i + 1] * (P(f.breaks[i + 1]) - P(f.breaks[i]));
  double acc = 0.0, prev = 0.0;
  for (size_t i = 0; i < nb && prev < tau; ++i) {
    const double hi = f.breaks[i], v = f.values[i];
    const double b = std::min(hi, tau);
    if (b > prev) {
      acc += (v * P(hi) + tail_at_hi[i]) * power_block(-kn, prev, b);
      if (v != 0.0) acc -= v / kn * (b - prev);
    }
    prev = hi;
  }
  return acc;  // the inner tail vanishes past the support
}

void write_profile(const StepProfile& f, std::ostream& os) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "L=%.17g\n", f.L);
  os << buf;
  for (size_t i = 0; i < f.breaks.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", f.breaks[i], f.values[i]);
    os << buf;
  }
}

StepProfile read_profile(std::istream& is) {
  StepProfile f;
  std::string line;
  if (!std::getline(is, line) || line.rfind("L=", 0) != 0)
    throw std::invalid_argument("read_profile: missing L= header");
  f.L = std::stod(line.substr(2));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double b, v;
    if (!(ls >> b >> v)) throw std::invalid_argument("read_profile: bad line: " + line);
    f.breaks.push_back(b);
    f.values.push_back(v);
  }
  f.rearranged = f.is_nonincreasing();
  f.validate();
  return f;
}

double distribution(const StepProfile& f, double t) {
  double m = 0.0, prev = 0.0;
  for (size_t i = 0; i < f.breaks.size(); ++i) {
    if (f.values[i] > t) m += f.breaks[i] - prev;
    prev = f.breaks[i];
  }
  return m;
}

StepProfile discretize(const std::function<double(double)>& g, double lo, double hi,
                       double L, int per_decade) {
  const auto grid = log_grid(lo, hi, per_decade);
  StepProfile f;
  f.L = L;
  // first block covers (0, grid[1]] so the discretization has full head mass
  for (size_t i = 1; i < grid.size(); ++i) {
    const double mid = std::sqrt(grid[i - 1] * grid[i]);
    const double v = std::max(0.0, g(mid));
    if (!f.values.empty() && f.values.back() == v)
      f.breaks.back() = grid[i];
    else {
      f.breaks.push_back(grid[i]);
      f.values.push_back(v);
    }
  }
  f.rearranged = f.is_nonincreasing();
  return f;
}

}  // namespace ritk
