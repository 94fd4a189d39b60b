#include "ritk/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ritk/grid_field.hpp"
#include "ritk/hardy.hpp"
#include "ritk/kfunctional.hpp"

namespace ritk {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok)
      throw std::invalid_argument("config: unknown key \"" + it.key() + "\" in " +
                                  where);
  }
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

// smooth bump of the given half-width centered in the torus, mean removed
GridField bump_scalar(int d, int M, double width, double cx, double cy, double cz) {
  GridField u = GridField::zeros(d, M, 1);
  const double h = 1.0 / M;
  const int Mz = d == 3 ? M : 1;
  auto tdist = [](double a, double b) {
    double t = std::abs(a - b);
    return std::min(t, 1.0 - t);
  };
  for (int z = 0; z < Mz; ++z)
    for (int y = 0; y < M; ++y)
      for (int x = 0; x < M; ++x) {
        double r2 = tdist(x * h, cx) * tdist(x * h, cx) +
                    tdist(y * h, cy) * tdist(y * h, cy);
        if (d == 3) r2 += tdist(z * h, cz) * tdist(z * h, cz);
        r2 /= width * width;
        u.at(0, x, y, z) = r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
      }
  return u;
}

GridField bump_vector(int d, int M, double width) {
  GridField u = GridField::zeros(d, M, d);
  const size_t n = u.points();
  for (int c = 0; c < d; ++c) {
    const GridField b =
        bump_scalar(d, M, width, 0.35 + 0.15 * c, 0.55 - 0.1 * c, 0.5);
    std::copy(b.values.begin(), b.values.end(), u.values.begin() + c * n);
  }
  return u;
}

NormSpec with_length(NormSpec s, double L) {
  s.L = L;
  return s;
}

}  // namespace

std::string config_hash(const json& config) {
  const std::string dump = config.dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_csv(const std::vector<ReportRecord>& rows) {
  std::string out = "format_version,id,config_hash,inputs,metrics,verdict,pass\n";
  for (const auto& r : rows) {
    std::string metrics;
    for (const auto& [k, v] : r.metrics) {
      if (!metrics.empty()) metrics += ';';
      metrics += k + "=" + fmt(v);
    }
    out += std::to_string(kCsvFormatVersion) + "," + csv_escape(r.id) + "," +
           r.config_hash + "," + csv_escape(r.inputs) + "," + csv_escape(metrics) +
           "," + r.verdict + "," + (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

json to_json(const std::vector<ReportRecord>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json m = json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    arr.push_back({{"format_version", kCsvFormatVersion},
                   {"id", r.id},
                   {"config_hash", r.config_hash},
                   {"inputs", r.inputs},
                   {"metrics", m},
                   {"verdict", r.verdict},
                   {"pass", r.pass}});
  }
  return arr;
}

YoungPtr young_from_json(const json& j) {
  check_keys(j, {"variant", "p", "r", "b", "grid"}, "young descriptor");
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "tabulated") {
    std::vector<std::pair<double, double>> nodes;
    for (const auto& row : j.at("grid"))
      nodes.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    return make_tabulated(std::move(nodes));
  }
  if (variant == "exponential") return make_exponential();
  if (variant != "power_log" && variant != "power_loglog")
    throw std::invalid_argument("config: unknown young variant \"" + variant + "\"");
  const double p = j.at("p").get<double>();
  const double r = j.value("r", 0.0);
  std::optional<double> b;
  if (j.contains("b")) b = j.at("b").get<double>();
  if (variant == "power_log") return make_power_log(p, r, b);
  return make_power_loglog(p, r, b);
}

namespace {

// numeric or the string "inf"
double index_value(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInf;
    throw std::invalid_argument(std::string("config: bad index value for ") + key);
  }
  return v.get<double>();
}

}  // namespace

NormSpec norm_spec_from_json(const json& j) {
  check_keys(j, {"kind", "p", "q", "r", "rho", "L", "young"}, "norm spec");
  const std::string kind = j.at("kind").get<std::string>();
  const double L = j.value("L", kLmax);
  const double p = index_value(j, "p", 1.0), q = index_value(j, "q", 1.0),
               r = j.value("r", 0.0);
  if (kind == "lebesgue") return NormSpec::lebesgue(p, L);
  if (kind == "lorentz") return NormSpec::lorentz_star(p, q, L);
  if (kind == "lorentz_double_star") return NormSpec::lorentz_double_star(p, q, L);
  if (kind == "lorentz_zygmund") return NormSpec::lorentz_zygmund(p, q, r, false, L);
  if (kind == "lorentz_zygmund_double_star")
    return NormSpec::lorentz_zygmund(p, q, r, true, L);
  if (kind == "generalized_lz")
    return NormSpec::generalized_lz(p, q, r, j.at("rho").get<double>(), L);
  if (kind == "orlicz") return NormSpec::orlicz(young_from_json(j.at("young")), L);
  if (kind == "orlicz_lorentz")
    return NormSpec::orlicz_lorentz(young_from_json(j.at("young")), q, L);
  if (kind == "sum_l1_linf") return NormSpec::sum_l1_linf(L);
  if (kind == "intersection_linf_ol")
    return NormSpec::intersection_linf_ol(young_from_json(j.at("young")), q, L);
  throw std::invalid_argument("config: unknown norm kind \"" + kind + "\"");
}

std::vector<ReportRecord> run_conjugate_table(const json& config, uint64_t) {
  std::vector<ReportRecord> rows;
  const std::string hash = config_hash(config);
  int idx = 0;
  for (const auto& entry : config) {
    check_keys(entry, {"young", "n", "k"}, "conjugates entry");
    Stopwatch sw;
    ReportRecord rec;
    rec.id = "conjugate/" + std::to_string(idx++);
    rec.config_hash = hash;
    const double n = entry.at("n").get<double>(), k = entry.at("k").get<double>();
    const json& yj = entry.at("young");
    rec.inputs = yj.dump() + " n=" + fmt(n) + " k=" + fmt(k);

    double p = yj.value("p", 0.0), r = yj.value("r", 0.0);
    const bool power_log = yj.value("variant", "") == "power_log";
    YoungPtr A = young_from_json(yj);
    auto cj = sobolev_conjugate(A, n, k);
    if (!cj.finite_everywhere()) {
      rec.verdict = "double-exponential-regime";
      rec.metrics.emplace_back("sup_H", cj.sup_H());
      rec.wall_ms = sw.ms();
      rows.push_back(std::move(rec));
      continue;
    }
    const YoungPtr B = cj.conjugate();
    const double ulo = r == 0.0 ? std::log(10.0) : std::log(1e20);
    const double uhi = r == 0.0 ? std::log(1e6) : 400.0;
    const ExponentFit cf = fit_power_log_exponents(
        [&](double u) { return B->log_value(u); }, ulo, uhi, 200);
    rec.metrics.emplace_back("conj_slope", cf.slope);
    rec.metrics.emplace_back("conj_logexp", cf.log_exp);

    const YoungPtr R = reduced_conjugate(*A, n, k);
    const ExponentFit rf = fit_power_log_exponents(
        [&](double u) { return R->log_value(u); }, 55.0, 95.0, 150);
    rec.metrics.emplace_back("reduced_slope", rf.slope);
    rec.metrics.emplace_back("reduced_logexp", rf.log_exp);

    rec.pass = true;
    if (power_log && k * p < n) {
      const double slope_exp = n * p / (n - k * p);
      const double logexp_exp = r * n / (n - k * p);
      rec.metrics.emplace_back("conj_slope_expected", slope_exp);
      rec.metrics.emplace_back("conj_logexp_expected", logexp_exp);
      rec.metrics.emplace_back("reduced_slope_expected", p);
      rec.metrics.emplace_back("reduced_logexp_expected", r);
      const double slope_tol = r == 0.0 ? 1e-3 : 5e-3;
      rec.pass = std::abs(cf.slope - slope_exp) <= slope_tol &&
                 std::abs(cf.log_exp - logexp_exp) <= 5e-3 &&
                 std::abs(rf.slope - p) <= 5e-3 && std::abs(rf.log_exp - r) <= 5e-3;
    }
    rec.verdict = rec.pass ? "pass" : "fail";
    rec.wall_ms = sw.ms();
    rows.push_back(std::move(rec));
  }
  return rows;
}

std::vector<ReportRecord> run_reduction_study(const json& config, uint64_t seed) {
  std::vector<ReportRecord> rows;
  const std::string hash = config_hash(config);
  int idx = 0;
  for (const auto& entry : config) {
    check_keys(entry, {"domain", "target", "n", "k", "weight_exponent", "expect"},
               "reductions entry");
    Stopwatch sw;
    ReportRecord rec;
    rec.id = "reduction/" + std::to_string(idx++);
    rec.config_hash = hash;
    const double n = entry.at("n").get<double>(), k = entry.at("k").get<double>();
    NormSpec X = norm_spec_from_json(entry.at("domain"));
    NormSpec Y = norm_spec_from_json(entry.at("target"));
    rec.inputs = X.describe() + " -> " + Y.describe() + " n=" + fmt(n) +
                 " k=" + fmt(k);
    std::optional<double> wexp;
    if (entry.contains("weight_exponent"))
      wexp = entry.at("weight_exponent").get<double>();

    const HardyNormEstimate est = estimate_hardy_norm(X, Y, n, k, 60, seed, wexp);
    const bool diverging = est.verdict == HardyVerdict::Diverging;
    rec.metrics.emplace_back("hardy_constant", est.constant);
    rec.metrics.emplace_back("hardy_diverging", diverging ? 1.0 : 0.0);

    // grid cross-check: bump of fixed 6-cell radius concentrates physically
    // as M doubles, at constant resolution (no discretization drift)
    const int d = static_cast<int>(n), kk = static_cast<int>(k);
    if ((d == 2 || d == 3) && k == kk) {
      const NormSpec Xg = with_length(X, 1.0), Yg = with_length(Y, 1.0);
      double first = 0.0, last = 0.0;
      int w = 0;
      for (int M : {16, 32, 64}) {
        const GridField u = bump_scalar(d, M, 6.0 / M, 0.5, 0.5, 0.5);
        const GridField Du = grad_k(u, kk);
        const double ratio = ri_norm(field_rearrangement(u), Yg) /
                             ri_norm(field_rearrangement(Du), Xg);
        rec.metrics.emplace_back("grid_ratio_w" + std::to_string(++w), ratio);
        if (w == 1) first = ratio;
        last = ratio;
      }
      rec.metrics.emplace_back("grid_growth", first > 0.0 ? last / first : 0.0);
      if (kk == 1) {  // symmetric-gradient variant, same concentration ray
        double sfirst = 0.0, slast = 0.0;
        for (int M : {16, 64}) {
          const GridField u = bump_vector(d, M, 6.0 / M);
          const GridField E = symmetric_gradient(u);
          const double ratio = ri_norm(field_rearrangement(u), Yg) /
                               ri_norm(field_rearrangement(E), Xg);
          if (sfirst == 0.0) sfirst = ratio;
          slast = ratio;
        }
        rec.metrics.emplace_back("grid_ratio_sym", slast);
        rec.metrics.emplace_back("grid_growth_sym",
                                 sfirst > 0.0 ? slast / sfirst : 0.0);
      }
    }

    rec.verdict = diverging ? "diverging" : "bounded";
    rec.pass = true;
    if (entry.contains("expect"))
      rec.pass = rec.verdict == entry.at("expect").get<std::string>();
    rec.wall_ms = sw.ms();
    rows.push_back(std::move(rec));
  }
  return rows;
}

std::vector<ReportRecord> run_field_study(const json& config, uint64_t seed) {
  std::vector<ReportRecord> rows;
  const std::string hash = config_hash(config);
  int idx = 0;
  for (const auto& entry : config) {
    check_keys(entry, {"seed", "d", "M", "alpha", "k"}, "fields entry");
    Stopwatch sw;
    ReportRecord rec;
    rec.id = "field/" + std::to_string(idx++);
    rec.config_hash = hash;
    const uint64_t s = entry.value("seed", 0ull) + seed;
    const int d = entry.at("d").get<int>(), M = entry.at("M").get<int>();
    const int k = entry.at("k").get<int>();
    const double alpha = entry.at("alpha").get<double>();
    rec.inputs = "seed=" + std::to_string(s) + " d=" + std::to_string(d) +
                 " M=" + std::to_string(M) + " alpha=" + fmt(alpha) +
                 " k=" + std::to_string(k);

    const GridField F = make_divk_free(s, d, M, k);
    const auto tgrid = log_grid(1e-3, 1.0, 2);
    const double constant = rearrangement_inequality_check(F, alpha, k, tgrid);
    const double gap = mollify_contraction_gap(F, 4);
    const double fubini = fubini_identity_check(field_rearrangement(F), alpha, d,
                                                tgrid);
    rec.metrics.emplace_back("rearrangement_constant", constant);
    rec.metrics.emplace_back("contraction_gap", gap);
    rec.metrics.emplace_back("fubini_deviation", fubini);
    rec.pass = std::isfinite(constant) && gap <= 1e-9 && fubini < 1e-6;
    rec.verdict = rec.pass ? "pass" : "fail";
    rec.wall_ms = sw.ms();
    rows.push_back(std::move(rec));
  }
  return rows;
}

std::vector<ReportRecord> run_kfunctional_study(const json& config, uint64_t seed) {
  std::vector<ReportRecord> rows;
  const std::string hash = config_hash(config);
  int idx = 0;
  for (const auto& entry : config) {
    Stopwatch sw;
    ReportRecord rec;
    rec.id = "kfunct/" + std::to_string(idx++);
    rec.config_hash = hash;
    const double p = entry.at("p").get<double>();
    const double qv = entry.at("q").is_string() ? kInf : entry.at("q").get<double>();

    if (entry.contains("profiles")) {  // free couple: oracle vs closed formula
      check_keys(entry, {"profiles", "p", "q", "seed"}, "kfunctionals entry");
      const int count = entry.at("profiles").get<int>();
      std::mt19937_64 rng(entry.value("seed", 0ull) + seed);
      std::uniform_real_distribution<double> val(0.05, 5.0), wid(-8.0, -2.5);
      rec.inputs = "profiles=" + std::to_string(count) + " p=" + fmt(p) +
                   " q=" + fmt(qv);
      double lo = kInf, hi = 0.0;
      for (int i = 0; i < count; ++i) {
        SampleCloud c;
        const int nb = 2 + static_cast<int>(rng() % 8);
        for (int j = 0; j < nb; ++j)
          c.points.emplace_back(val(rng), std::exp(wid(rng)));
        const StepProfile f = rearrange(c, 1.0);
        for (double t : {0.01, 0.1, 0.5, 2.0}) {
          const double kh = k_holmstedt(f, p, qv, t);
          if (!(kh > 0.0)) continue;
          const double ratio = k_bruteforce(f, t, p, qv) / kh;
          lo = std::min(lo, ratio);
          hi = std::max(hi, ratio);
        }
      }
      rec.metrics.emplace_back("ratio_min", lo);
      rec.metrics.emplace_back("ratio_max", hi);
      rec.pass = lo >= 0.25 && hi <= 4.0;
    } else {  // divergence-constrained splitting
      check_keys(entry, {"seed", "d", "M", "k", "p", "q", "t"}, "kfunctionals entry");
      const uint64_t s = entry.value("seed", 0ull) + seed;
      const int d = entry.at("d").get<int>(), M = entry.at("M").get<int>();
      const int k = entry.at("k").get<int>();
      rec.inputs = "seed=" + std::to_string(s) + " d=" + std::to_string(d) +
                   " M=" + std::to_string(M) + " k=" + std::to_string(k) +
                   " p=" + fmt(p) + " q=" + fmt(qv);
      const GridField F = make_divk_free(s, d, M, k);
      double worst = 0.0;
      for (const auto& tj : entry.at("t")) {
        const ConstrainedSplit sp = constrained_k_split(F, tj.get<double>(), p, qv, k);
        worst = std::max(worst, sp.ratio);
      }
      rec.metrics.emplace_back("constrained_constant", worst);
      rec.pass = worst <= 50.0;
    }
    rec.verdict = rec.pass ? "pass" : "fail";
    rec.wall_ms = sw.ms();
    rows.push_back(std::move(rec));
  }
  return rows;
}

std::vector<ReportRecord> run_report(const json& config, uint64_t seed) {
  check_keys(config, {"conjugates", "reductions", "fields", "kfunctionals"},
             "config root");
  std::vector<ReportRecord> rows;
  auto append = [&rows](std::vector<ReportRecord> v) {
    for (auto& r : v) rows.push_back(std::move(r));
  };
  const std::string hash = config_hash(config);
  if (config.contains("conjugates"))
    append(run_conjugate_table(config.at("conjugates"), seed));
  if (config.contains("reductions"))
    append(run_reduction_study(config.at("reductions"), seed));
  if (config.contains("fields")) append(run_field_study(config.at("fields"), seed));
  if (config.contains("kfunctionals"))
    append(run_kfunctional_study(config.at("kfunctionals"), seed));
  for (auto& r : rows) r.config_hash = hash;  // hash of the full document
  return rows;
}

json default_report_config() {
  return json{
      {"conjugates",
       {{{"young", {{"variant", "power_log"}, {"p", 1.0}, {"r", 0.0}}},
         {"n", 3},
         {"k", 1}},
        {{"young", {{"variant", "power_log"}, {"p", 2.0}, {"r", 0.0}}},
         {"n", 5},
         {"k", 2}},
        {{"young", {{"variant", "power_log"}, {"p", 1.0}, {"r", 1.0}}},
         {"n", 3},
         {"k", 1}},
        {{"young", {{"variant", "power_log"}, {"p", 1.0}, {"r", 2.0}}},
         {"n", 3},
         {"k", 1}}}},
      {"reductions",
       {{{"domain", {{"kind", "lebesgue"}, {"p", 1.0}, {"L", 1.0}}},
         {"target", {{"kind", "lorentz"}, {"p", 1.5}, {"q", 1.0}, {"L", 1.0}}},
         {"n", 3},
         {"k", 1},
         {"expect", "bounded"}},
        {{"domain",
          {{"kind", "lorentz_zygmund"},
           {"p", 1.0},
           {"q", 1.0},
           {"r", 1.0},
           {"L", 1.0}}},
         {"target",
          {{"kind", "lorentz_zygmund"},
           {"p", 1.5},
           {"q", 1.5},
           {"r", 1.0},
           {"L", 1.0}}},
         {"n", 3},
         {"k", 1},
         {"expect", "bounded"}},
        {{"domain", {{"kind", "lebesgue"}, {"p", 1.0}, {"L", 1.0}}},
         {"target", {{"kind", "lebesgue"}, {"p", 2.0}, {"L", 1.0}}},
         {"n", 3},
         {"k", 1},
         {"expect", "diverging"}}}},
      {"fields",
       {{{"seed", 1}, {"d", 2}, {"M", 32}, {"alpha", 1.0}, {"k", 1}},
        {{"seed", 2}, {"d", 2}, {"M", 32}, {"alpha", 1.0}, {"k", 2}},
        {{"seed", 3}, {"d", 3}, {"M", 16}, {"alpha", 1.0}, {"k", 1}}}},
      {"kfunctionals",
       {{{"profiles", 25}, {"p", 2.0}, {"q", 1.0}, {"seed", 5}},
        {{"seed", 1},
         {"d", 2},
         {"M", 32},
         {"k", 1},
         {"p", 2.0},
         {"q", 1.0},
         {"t", {0.05, 0.2, 1.0}}}}}};
}

}  // namespace ritk
