#include "ritk/grid_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <functional>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace ritk {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 6.283185307179586476925286766559;

int int_pow(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

MultiIndexSet::MultiIndexSet(int d, int k) {
  if (d < 1 || k < 0) throw std::invalid_argument("MultiIndexSet: bad (d, k)");
  std::vector<int> beta(d, 0);
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == d - 1) {
      beta[pos] = rem;
      idx_.push_back(beta);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      beta[pos] = v;
      rec(pos + 1, rem - v);
    }
  };
  rec(0, k);
  std::sort(idx_.begin(), idx_.end(), [](const auto& a, const auto& b) {
    for (size_t j = a.size(); j-- > 0;)
      if (a[j] != b[j]) return a[j] < b[j];
    return false;
  });
  for (const auto& b : idx_) {
    double mu = 1.0;
    int used = 0;
    for (int bj : b)
      for (int t = 1; t <= bj; ++t) mu *= static_cast<double>(++used) / t;
    mult_.push_back(mu);
  }
}

size_t GridField::points() const { return static_cast<size_t>(int_pow(M, d)); }

size_t GridField::index(int x, int y, int z) const {
  return (static_cast<size_t>(z) * M + y) * M + x;
}

double& GridField::at(int c, int x, int y, int z) {
  return values[c * points() + index(x, y, z)];
}

double GridField::at(int c, int x, int y, int z) const {
  return values[c * points() + index(x, y, z)];
}

void GridField::validate() const {
  if (d != 2 && d != 3) throw std::invalid_argument("GridField: d must be 2 or 3");
  if (M < 2 || M > 128 || (M & (M - 1)) != 0)
    throw std::invalid_argument("GridField: M must be a power of two in [2, 128]");
  if (m < 1) throw std::invalid_argument("GridField: need at least one component");
  if (values.size() != m * points())
    throw std::invalid_argument("GridField: value count mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("GridField: non-finite value");
}

bool GridField::is_mean_zero(double rel_tol) const {
  const size_t n = points();
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return true;
  for (int c = 0; c < m; ++c) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += values[c * n + i];
    if (std::abs(s) / n > rel_tol * scale) return false;
  }
  return true;
}

double GridField::l2_norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s * std::pow(spacing(), d));
}

GridField GridField::component(int c) const {
  if (c < 0 || c >= m) throw std::invalid_argument("GridField: component out of range");
  GridField out = zeros(d, M, 1);
  std::copy(values.begin() + c * points(), values.begin() + (c + 1) * points(),
            out.values.begin());
  return out;
}

GridField GridField::zeros(int d, int M, int m) {
  GridField f;
  f.d = d;
  f.M = M;
  f.m = m;
  f.values.assign(static_cast<size_t>(m) * int_pow(M, d), 0.0);
  return f;
}

namespace {

void check_same_shape(const GridField& a, const GridField& b) {
  if (a.d != b.d || a.M != b.M || a.m != b.m)
    throw std::invalid_argument("GridField: shape mismatch");
}

}  // namespace

GridField operator+(const GridField& a, const GridField& b) {
  check_same_shape(a, b);
  GridField out = a;
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
  return out;
}

GridField operator-(const GridField& a, const GridField& b) {
  check_same_shape(a, b);
  GridField out = a;
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
  return out;
}

GridField operator*(double s, const GridField& a) {
  GridField out = a;
  for (double& v : out.values) v *= s;
  return out;
}

namespace {

struct SpectralField {
  int d = 2, M = 0, m = 0;
  std::vector<cd> c;  // component-major, same point layout as GridField
  size_t points() const { return static_cast<size_t>(int_pow(M, d)); }
};

void run_fft(cd* data, int d, int M, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan = d == 2 ? fftw_plan_dft_2d(M, M, p, p, sign, FFTW_ESTIMATE)
                          : fftw_plan_dft_3d(M, M, M, p, p, sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

SpectralField forward(const GridField& F) {
  F.validate();
  SpectralField S{F.d, F.M, F.m, {}};
  const size_t n = F.points();
  S.c.resize(F.values.size());
  for (size_t i = 0; i < F.values.size(); ++i) S.c[i] = F.values[i];
  for (int c = 0; c < F.m; ++c) run_fft(S.c.data() + c * n, F.d, F.M, FFTW_FORWARD);
  return S;
}

GridField backward(SpectralField S) {
  const size_t n = S.points();
  for (int c = 0; c < S.m; ++c) run_fft(S.c.data() + c * n, S.d, S.M, FFTW_BACKWARD);
  GridField F = GridField::zeros(S.d, S.M, S.m);
  const double scale = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < S.c.size(); ++i) F.values[i] = S.c[i].real() * scale;
  return F;
}

// visits every grid frequency; xi components are the signed integers
template <class Fn>
void for_each_frequency(int d, int M, Fn&& fn) {
  auto f = [M](int i) { return i <= M / 2 ? i : i - M; };
  const int Mz = d == 3 ? M : 1;
  size_t idx = 0;
  for (int iz = 0; iz < Mz; ++iz)
    for (int iy = 0; iy < M; ++iy)
      for (int ix = 0; ix < M; ++ix, ++idx) {
        int xi[3] = {f(ix), f(iy), d == 3 ? f(iz) : 0};
        fn(idx, xi);
      }
}

double xi_pow(const int* xi, const std::vector<int>& beta) {
  double r = 1.0;
  for (size_t j = 0; j < beta.size(); ++j)
    for (int t = 0; t < beta[j]; ++t) r *= xi[j];
  return r;
}

double xi_norm(const int* xi, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) s += static_cast<double>(xi[j]) * xi[j];
  return std::sqrt(s);
}

cd i_pow_2pi(int k) {  // (2 pi i)^k
  static const cd table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return std::pow(kTwoPi, k) * table[k & 3];
}

// The Nyquist bin M/2 is its own negative mod M, so odd-degree derivative
// multipliers break Hermitian symmetry there; those modes are dealiased to 0.
bool at_nyquist(const int* xi, int d, int M) {
  for (int j = 0; j < d; ++j)
    if (xi[j] == M / 2) return true;
  return false;
}

}  // namespace

GridField riesz_potential(const GridField& F, double alpha) {
  if (!(alpha > 0.0) || !(alpha < F.d))
    throw std::invalid_argument("riesz_potential: need 0 < alpha < d");
  if (!F.is_mean_zero(1e-10))
    throw std::invalid_argument("riesz_potential: input must be mean-zero");
  SpectralField S = forward(F);
  const size_t n = S.points();
  for_each_frequency(F.d, F.M, [&](size_t idx, const int* xi) {
    const double r = xi_norm(xi, F.d);
    const double mult = r == 0.0 ? 0.0 : std::pow(kTwoPi * r, -alpha);
    for (int c = 0; c < F.m; ++c) S.c[c * n + idx] *= mult;
  });
  return backward(std::move(S));
}

GridField divergence_k(const GridField& F, int k) {
  const MultiIndexSet mis(F.d, k);
  if (F.m != mis.count())
    throw std::invalid_argument("divergence_k: component count must be N(d, k)");
  SpectralField S = forward(F);
  const size_t n = S.points();
  SpectralField out{F.d, F.M, 1, std::vector<cd>(n)};
  const cd fac = i_pow_2pi(k);
  for_each_frequency(F.d, F.M, [&](size_t idx, const int* xi) {
    if (at_nyquist(xi, F.d, F.M)) {
      out.c[idx] = 0.0;
      return;
    }
    cd acc = 0.0;
    for (int i = 0; i < mis.count(); ++i)
      acc += mis.multiplicity(i) * xi_pow(xi, mis[i]) * S.c[i * n + idx];
    out.c[idx] = fac * acc;
  });
  return backward(std::move(out));
}

GridField helmholtz_k(const GridField& F, int k) {
  const MultiIndexSet mis(F.d, k);
  if (F.m != mis.count())
    throw std::invalid_argument("helmholtz_k: component count must be N(d, k)");
  SpectralField S = forward(F);
  const size_t n = S.points();
  for_each_frequency(F.d, F.M, [&](size_t idx, const int* xi) {
    const double r = xi_norm(xi, F.d);
    if (r == 0.0) {  // constants are divergence-free: P_k fixes them
      for (int i = 0; i < mis.count(); ++i) S.c[i * n + idx] = 0.0;
      return;
    }
    if (at_nyquist(xi, F.d, F.M)) {  // dealiased: P_k annihilates these modes
      for (int i = 0; i < mis.count(); ++i) S.c[i * n + idx] = -S.c[i * n + idx];
      return;
    }
    const double rk = std::pow(r, k);
    cd contraction = 0.0;
    std::vector<double> q(mis.count());
    for (int i = 0; i < mis.count(); ++i) {
      q[i] = xi_pow(xi, mis[i]) / rk;
      contraction += mis.multiplicity(i) * q[i] * S.c[i * n + idx];
    }
    for (int i = 0; i < mis.count(); ++i) S.c[i * n + idx] = -q[i] * contraction;
  });
  return backward(std::move(S));
}

GridField projector_pk(const GridField& F, int k) { return F + helmholtz_k(F, k); }

GridField grad_k(const GridField& u, int k) {
  if (k < 1) throw std::invalid_argument("grad_k: k must be >= 1");
  if (u.m > 1 && k != 1)
    throw std::invalid_argument("grad_k: vector input only supported for k = 1");
  SpectralField S = forward(u);
  const size_t n = S.points();
  if (u.m == 1) {
    const MultiIndexSet mis(u.d, k);
    SpectralField out{u.d, u.M, mis.count(), std::vector<cd>(mis.count() * n)};
    const cd fac = i_pow_2pi(k);
    for_each_frequency(u.d, u.M, [&](size_t idx, const int* xi) {
      const bool ny = at_nyquist(xi, u.d, u.M);
      for (int i = 0; i < mis.count(); ++i)
        out.c[i * n + idx] = ny ? 0.0 : fac * xi_pow(xi, mis[i]) * S.c[idx];
    });
    return backward(std::move(out));
  }
  // full first gradient of a vector field, component (c, j) at c*d + j
  SpectralField out{u.d, u.M, u.m * u.d, std::vector<cd>(u.m * u.d * n)};
  const cd fac = i_pow_2pi(1);
  for_each_frequency(u.d, u.M, [&](size_t idx, const int* xi) {
    const bool ny = at_nyquist(xi, u.d, u.M);
    for (int c = 0; c < u.m; ++c)
      for (int j = 0; j < u.d; ++j)
        out.c[(c * u.d + j) * n + idx] =
            ny ? 0.0 : fac * static_cast<double>(xi[j]) * S.c[c * n + idx];
  });
  return backward(std::move(out));
}

GridField symmetric_gradient(const GridField& u) {
  if (u.m != u.d)
    throw std::invalid_argument("symmetric_gradient: input must be a d-vector field");
  const GridField G = grad_k(u, 1);  // (c, j) layout
  GridField E = GridField::zeros(u.d, u.M, u.d * u.d);
  const size_t n = E.points();
  for (int i = 0; i < u.d; ++i)
    for (int j = 0; j < u.d; ++j)
      for (size_t p = 0; p < n; ++p)
        E.values[(i * u.d + j) * n + p] = 0.5 * (G.values[(i * u.d + j) * n + p] +
                                                 G.values[(j * u.d + i) * n + p]);
  return E;
}

GridField deviatoric_symmetric_gradient(const GridField& u) {
  if (u.d < 3)
    throw std::invalid_argument(
        "deviatoric_symmetric_gradient: unsupported for d = 2 (needs d >= 3)");
  GridField E = symmetric_gradient(u);
  const size_t n = E.points();
  for (size_t p = 0; p < n; ++p) {
    double tr = 0.0;
    for (int i = 0; i < u.d; ++i) tr += E.values[(i * u.d + i) * n + p];
    tr /= u.d;
    for (int i = 0; i < u.d; ++i) E.values[(i * u.d + i) * n + p] -= tr;
  }
  return E;
}

double divk_residual(const GridField& F, int k) {
  const MultiIndexSet mis(F.d, k);
  if (F.m != mis.count())
    throw std::invalid_argument("divk_residual: component count must be N(d, k)");
  SpectralField S = forward(F);
  const size_t n = S.points();
  double num = 0.0, den = 0.0;
  for_each_frequency(F.d, F.M, [&](size_t idx, const int* xi) {
    if (at_nyquist(xi, F.d, F.M)) return;  // modes the operators dealias
    cd acc = 0.0;
    double mag = 0.0;
    for (int i = 0; i < mis.count(); ++i) {
      const double w = mis.multiplicity(i) * xi_pow(xi, mis[i]);
      acc += w * S.c[i * n + idx];
      mag += std::abs(w) * std::abs(S.c[i * n + idx]);
    }
    num += std::norm(acc);
    den += mag * mag;
  });
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

GridField random_band_limited(uint64_t seed, int d, int M, int m) {
  GridField F = GridField::zeros(d, M, m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : F.values) v = gauss(rng);
  SpectralField S = forward(F);
  const size_t n = S.points();
  const int cut = M / 3;
  for_each_frequency(d, M, [&](size_t idx, const int* xi) {
    bool kill = xi[0] == 0 && xi[1] == 0 && xi[2] == 0;
    for (int j = 0; j < d; ++j)
      if (std::abs(xi[j]) > cut) kill = true;
    if (kill)
      for (int c = 0; c < m; ++c) S.c[c * n + idx] = 0.0;
  });
  return backward(std::move(S));
}

GridField make_divk_free(uint64_t seed, int d, int M, int k) {
  const MultiIndexSet mis(d, k);
  const GridField F = projector_pk(random_band_limited(seed, d, M, mis.count()), k);
  if (divk_residual(F, k) > 1e-10)
    throw std::runtime_error("make_divk_free: residual certificate failed");
  return F;
}

GridField mollify(const GridField& F, int h_index) {
  if (h_index < 1) throw std::invalid_argument("mollify: h_index must be >= 1");
  F.validate();
  const double R = 1.0 / h_index;
  GridField kernel = GridField::zeros(F.d, F.M, 1);
  const double h = F.spacing();
  const int Mz = F.d == 3 ? F.M : 1;
  double sum = 0.0;
  for (int iz = 0; iz < Mz; ++iz)
    for (int iy = 0; iy < F.M; ++iy)
      for (int ix = 0; ix < F.M; ++ix) {
        auto dist = [&](int i) {
          const double x = i * h;
          return std::min(x, 1.0 - x);
        };
        double r2 = dist(ix) * dist(ix) + dist(iy) * dist(iy);
        if (F.d == 3) r2 += dist(iz) * dist(iz);
        const double t = r2 / (R * R);
        if (t < 1.0) {
          const double v = std::exp(-1.0 / (1.0 - t));
          kernel.at(0, ix, iy, iz) = v;
          sum += v;
        }
      }
  if (sum == 0.0) return F;  // bump narrower than one cell: identity
  for (double& v : kernel.values) v /= sum * std::pow(h, F.d);
  SpectralField Ks = forward(kernel), S = forward(F);
  const size_t n = S.points();
  const double hd = std::pow(h, F.d);
  for (size_t i = 0; i < n; ++i) {
    const cd mult = Ks.c[i] * hd;
    for (int c = 0; c < F.m; ++c) S.c[c * n + i] *= mult;
  }
  return backward(std::move(S));
}

double mollify_contraction_gap(const GridField& F, int h_index, int probes) {
  const StepProfile fs = field_rearrangement(F);
  const StepProfile fh = field_rearrangement(mollify(F, h_index));
  const DoubleStar base(fs), smooth(fh);
  double gap = 0.0;
  for (int j = 1; j <= probes; ++j) {
    const double s = std::exp(std::log(1e-6) * (1.0 - static_cast<double>(j) / probes));
    const double a = base.head(s), b = smooth.head(s);
    gap = std::max(gap, (b - a) / std::max(a, 1e-300));
  }
  return std::max(gap, 0.0);
}

StepProfile field_rearrangement(const GridField& F) {
  F.validate();
  const size_t n = F.points();
  SampleCloud cloud;
  cloud.points.reserve(n);
  const double hd = std::pow(F.spacing(), F.d);
  for (size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < F.m; ++c) s += F.values[c * n + i] * F.values[c * n + i];
    cloud.points.emplace_back(std::sqrt(s), hd);
  }
  return rearrange(cloud, 1.0);
}

double rearrangement_inequality_check(const GridField& F, double alpha, int k,
                                      const std::vector<double>& tgrid) {
  if (divk_residual(F, k) > 1e-8)
    throw std::invalid_argument("rearrangement_inequality_check: input not div_k-free");
  const StepProfile fs = field_rearrangement(F);
  if (fs.max_value() == 0.0) return 0.0;
  const StepProfile gs = field_rearrangement(riesz_potential(F, alpha));
  const double ad = alpha / F.d;
  double worst = 0.0;
  for (double t : tgrid) {
    if (!(t > 0.0) || t > 1.0) continue;
    const double lhs = weighted_integral(gs, -ad, 0.0, t);
    const double rhs = head_weighted_tail_integral(fs, ad, t);
    if (lhs == 0.0) continue;
    worst = std::max(worst, rhs > 0.0 ? lhs / rhs : kInf);
  }
  return worst;
}

void write_field(const GridField& F, const std::string& path) {
  F.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  const char magic[8] = {'R', 'I', 'T', 'K', 'G', 'R', 'D', '1'};
  os.write(magic, 8);
  const int32_t hdr[3] = {F.d, F.M, F.m};
  const uint32_t flags = F.is_mean_zero() ? 1u : 0u;
  os.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
  os.write(reinterpret_cast<const char*>(&flags), sizeof flags);
  os.write(reinterpret_cast<const char*>(F.values.data()),
           static_cast<std::streamsize>(F.values.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write_field: short write on " + path);
  nlohmann::json meta{{"format_version", 1}, {"kind", "grid-field"}, {"d", F.d},
                      {"M", F.M},           {"m", F.m},             {"mean_zero", flags == 1}};
  std::ofstream js(path + ".json");
  js << meta.dump(2) << "\n";
}

GridField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, "RITKGRD1", 8) != 0)
    throw std::runtime_error("read_field: bad magic in " + path);
  int32_t hdr[3];
  uint32_t flags;
  is.read(reinterpret_cast<char*>(hdr), sizeof hdr);
  is.read(reinterpret_cast<char*>(&flags), sizeof flags);
  GridField F = GridField::zeros(hdr[0], hdr[1], hdr[2]);
  is.read(reinterpret_cast<char*>(F.values.data()),
          static_cast<std::streamsize>(F.values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("read_field: truncated file " + path);
  F.validate();
  return F;
}

}  // namespace ritk
