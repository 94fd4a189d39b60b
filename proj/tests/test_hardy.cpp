#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ritk/hardy.hpp"

using namespace ritk;

namespace {

StepProfile chi(double tau, double L) {
  StepProfile f;
  f.L = L;
  f.breaks = {tau};
  f.values = {1.0};
  f.rearranged = true;
  return f;
}

StepProfile random_profile(std::mt19937_64& rng, double L) {
  std::uniform_real_distribution<double> val(0.05, 5.0), wid(-8.0, -1.5);
  SampleCloud c;
  const int nb = 2 + static_cast<int>(rng() % 8);
  for (int j = 0; j < nb; ++j) c.points.emplace_back(val(rng), L * std::exp(wid(rng)));
  return rearrange(c, L);
}

}  // namespace

TEST_CASE("HardyTail closed form on a characteristic function") {
  // n=3, k=1: (Hf)(s) = int_s^tau r^{-2/3} dr = 3 (tau^{1/3} - s^{1/3})
  const double tau = 0.5;
  HardyTail H(chi(tau, 1.0), 3.0, 1.0);
  for (double s : {0.01, 0.1, 0.3}) {
    const double want = 3.0 * (std::cbrt(tau) - std::cbrt(s));
    CHECK(H(s) == doctest::Approx(want).epsilon(1e-13));
  }
  CHECK(H(0.7) == 0.0);
  CHECK(H(1.5) == 0.0);
}

TEST_CASE("HardyTail is nonincreasing and discretizes cleanly") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    HardyTail H(random_profile(rng, 1.0), 3.0, 1.0);
    double prev = kInf;
    for (double s : log_grid(1e-8, 1.0, 4)) {
      CHECK(H(s) <= prev * (1.0 + 1e-12));
      prev = H(s);
    }
    const StepProfile d = H.discretized(10);
    CHECK(d.is_nonincreasing());
    CHECK(d.rearranged);
  }
}

TEST_CASE("HardyTail rejects bad orders") {
  CHECK_THROWS_AS(HardyTail(chi(0.5, 1.0), 3.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(HardyTail(chi(0.5, 1.0), 3.0, 3.0), std::invalid_argument);
}

TEST_CASE("bounded verdict: L^1 -> L^{3/2,1} on (0,1), n=3, k=1") {
  const NormSpec X = NormSpec::lebesgue(1.0, 1.0);
  const NormSpec Y = NormSpec::lorentz_star(1.5, 1.0, 1.0);
  const HardyNormEstimate est = estimate_hardy_norm(X, Y, 3.0, 1.0, 40);
  CHECK(est.verdict == HardyVerdict::Bounded);
  CHECK(est.constant > 0.0);
  CHECK(est.constant < 10.0);
}

TEST_CASE("bounded verdict: Zygmund domain to its Zygmund target") {
  // L^1(logL)^1 -> L^{3/2}(logL)^{3/2}, i.e. LZ(1,1,1) -> LZ(3/2,3/2,1)
  const NormSpec X = NormSpec::lorentz_zygmund(1.0, 1.0, 1.0, false, 1.0);
  const NormSpec Y = NormSpec::lorentz_zygmund(1.5, 1.5, 1.0, false, 1.0);
  const HardyNormEstimate est = estimate_hardy_norm(X, Y, 3.0, 1.0, 40);
  CHECK(est.verdict == HardyVerdict::Bounded);
  CHECK(est.constant < 50.0);
}

TEST_CASE("diverging verdict: L^1 -> L^2 on (0,1)") {
  const NormSpec X = NormSpec::lebesgue(1.0, 1.0);
  const NormSpec Y = NormSpec::lebesgue(2.0, 1.0);
  const HardyNormEstimate est = estimate_hardy_norm(X, Y, 3.0, 1.0, 40);
  CHECK(est.verdict == HardyVerdict::Diverging);
  CHECK(est.constant > 1e3);
}

TEST_CASE("diverging verdict under a perturbed weight") {
  // strengthening the kernel exponent past the critical value breaks the
  // L^1 -> L^{3/2,1} boundedness
  const NormSpec X = NormSpec::lebesgue(1.0, 1.0);
  const NormSpec Y = NormSpec::lorentz_star(1.5, 1.0, 1.0);
  const HardyNormEstimate est =
      estimate_hardy_norm(X, Y, 3.0, 1.0, 40, 1, 1.0 / 3.0 - 1.0 - 0.15);
  CHECK(est.verdict == HardyVerdict::Diverging);
}

TEST_CASE("estimate_hardy_norm input validation") {
  const NormSpec X = NormSpec::lebesgue(1.0, 1.0);
  const NormSpec Y = NormSpec::lebesgue(2.0, 2.0);
  CHECK_THROWS_AS(estimate_hardy_norm(X, Y, 3.0, 1.0, 5), std::invalid_argument);
  const NormSpec Y2 = NormSpec::lebesgue(2.0, 1.0);
  CHECK_THROWS_AS(estimate_hardy_norm(X, Y2, 3.0, 5.0, 5), std::invalid_argument);
}

TEST_CASE("transfer check: identical profiles satisfy the hypothesis") {
  std::mt19937_64 rng(17);
  const NormSpec X = NormSpec::lebesgue(1.0, 1.0);
  const NormSpec Y = NormSpec::lorentz_star(1.5, 1.0, 1.0);
  for (int i = 0; i < 5; ++i) {
    const StepProfile f = random_profile(rng, 1.0);
    // g = H f discretized is dominated pointwise in the hypothesis sense
    HardyTail H(f, 3.0, 1.0);
    const StepProfile g = H.discretized(12);
    const TransferReport rep = transfer_check(f, g, X, Y, 3.0, 1.0, 2.0);
    CHECK(rep.hypothesis_holds);
    CHECK(rep.hypothesis_margin <= 1.0 + 1e-9);
    CHECK(rep.hardy_verdict == HardyVerdict::Bounded);
    CHECK(rep.realized_ratio <= rep.hardy_constant * 1.5 + 1e-9);
  }
}

TEST_CASE("transfer check: violated hypothesis short-circuits") {
  const StepProfile f = chi(1e-6, 1.0);
  StepProfile g = chi(0.9, 1.0);
  g.values[0] = 50.0;  // far too big for the tail of f
  const NormSpec X = NormSpec::lebesgue(1.0, 1.0);
  const NormSpec Y = NormSpec::lorentz_star(1.5, 1.0, 1.0);
  const TransferReport rep = transfer_check(f, g, X, Y, 3.0, 1.0, 1.0);
  CHECK_FALSE(rep.hypothesis_holds);
  CHECK(rep.hypothesis_margin > 1.0);
  CHECK(rep.hardy_constant == 0.0);  // not evaluated
  CHECK_THROWS_AS(transfer_check(f, g, X, Y, 3.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("fubini identity holds block-exactly") {
  std::mt19937_64 rng(23);
  const auto tg = log_grid(1e-6, 1.0, 3);
  for (int i = 0; i < 50; ++i) {
    const StepProfile F = random_profile(rng, 1.0);
    for (double alpha : {0.5, 1.0, 2.0})
      CHECK(fubini_identity_check(F, alpha, 3.0, tg) < 1e-10);
  }
  CHECK_THROWS_AS(fubini_identity_check(random_profile(rng, 1.0), 3.0, 3.0, tg),
                  std::invalid_argument);
}
