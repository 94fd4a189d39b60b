#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ritk/young.hpp"

using namespace ritk;

namespace {

ExponentFit fit_conjugate(const YoungFunction& A, double tlo, double thi) {
  auto logv = [&](double u) { return A.log_value(u); };
  return fit_power_log_exponents(logv, std::log(tlo), std::log(thi));
}

}  // namespace

TEST_CASE("power conjugates have the expected slope") {
  struct Row {
    double p, n, k;
  };
  for (const Row row : {Row{1, 2, 1}, Row{1, 3, 1}, Row{2, 5, 2}, Row{1, 4, 3}}) {
    const auto A = make_power_log(row.p, 0.0);
    const ConjugateResult cr = sobolev_conjugate(A, row.n, row.k);
    REQUIRE(cr.finite_everywhere());
    const double want = row.n * row.p / (row.n - row.k * row.p);
    const ExponentFit fit = fit_conjugate(*cr.conjugate(), 10.0, 1e6);
    CHECK(fit.slope == doctest::Approx(want).epsilon(1e-3));
  }
}

TEST_CASE("H is increasing and H_inverse inverts it") {
  const auto A = make_power_log(1.5, 1.0);
  const ConjugateResult cr = sobolev_conjugate(A, 3.0, 1.0);
  double prev = 0.0;
  for (double t : {0.1, 1.0, 10.0, 100.0, 1e4}) {
    const double h = cr.H(t);
    CHECK(h > prev);
    prev = h;
    CHECK(cr.H_inverse(h) == doctest::Approx(t).epsilon(1e-6));
  }
}

TEST_CASE("conjugate composition identity A_{n/k}(H(t)) = A(t)") {
  const auto A = make_power_log(1.0, 1.0);
  const ConjugateResult cr = sobolev_conjugate(A, 3.0, 1.0);
  for (double t : {0.5, 2.0, 50.0, 1e3}) {
    const double lhs = cr.conjugate()->value(cr.H(t));
    CHECK(lhs == doctest::Approx(A->value(t)).epsilon(1e-5));
  }
}

TEST_CASE("Zygmund ladder log-exponents") {
  const double n = 3, k = 1;
  for (double r : {0.0, 1.0, 2.0}) {
    const auto A = make_power_log(1.0, r);
    const ConjugateResult cr = sobolev_conjugate(A, n, k);
    const ExponentFit fit = fit_conjugate(*cr.conjugate(), std::exp(std::log(1e20)),
                                          std::exp(400.0));
    CHECK(fit.slope == doctest::Approx(1.5).epsilon(5e-3));
    CHECK(fit.log_exp == doctest::Approx(n * r / (n - k)).epsilon(5e-3));
  }
}

TEST_CASE("reduced conjugate asymptotics match the base exponents") {
  const double n = 3, k = 1;
  for (double r : {0.0, 1.0, 2.0}) {
    const auto A = make_power_log(1.0, r);
    const auto Ahat = reduced_conjugate(*A, n, k);
    auto logv = [&](double u) { return Ahat->log_value(u); };
    const ExponentFit fit = fit_power_log_exponents(logv, 55.0, 95.0);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(fit.log_exp == doctest::Approx(r).epsilon(5e-3));
  }
}

TEST_CASE("reduced conjugate is dominated by a fixed multiple of the base") {
  const auto A = make_power_log(1.2, 1.0);
  const auto Ahat = reduced_conjugate(*A, 4.0, 1.0);
  // A-hat(t) <= c A(c t) for a modest c across many decades
  const double c = 64.0;
  for (double u = -8.0; u <= 40.0; u += 2.0) {
    const double t = std::exp(u);
    CHECK(Ahat->value(t) <= c * A->value(c * t) * (1.0 + 1e-9));
  }
}

TEST_CASE("zero / infinity integrability classifiers") {
  // A = t^p: int_0 (t/A)^{k/(n-k)} = int_0 t^{(1-p)k/(n-k)} converges iff
  // (p-1)k/(n-k) < 1.
  CHECK(check_zero_integrability(*make_power_log(1.0, 0.0), 3, 1));
  CHECK(check_zero_integrability(*make_power_log(2.0, 0.0), 3, 1));
  CHECK_FALSE(check_zero_integrability(*make_power_log(4.0, 0.0), 3, 1));
  // near infinity the same exponent with opposite sign decides
  CHECK(check_infinity_integrability(*make_power_log(4.0, 0.0), 3, 1));
  CHECK_FALSE(check_infinity_integrability(*make_power_log(1.0, 0.0), 3, 1));
  // borderline p = n/k at infinity: t^3 diverges, t^3 log^{r} with r large
  // enough (r (k/(n-k)) > 1) converges
  CHECK_FALSE(check_infinity_integrability(*make_power_log(3.0, 0.0), 3, 1));
  CHECK(check_infinity_integrability(*make_power_log(3.0, 3.0), 3, 1));
}

TEST_CASE("sobolev_conjugate rejects non-integrable bases") {
  const auto A = make_power_log(4.0, 0.0);  // fails zero integrability at n=3,k=1
  CHECK_THROWS_AS(sobolev_conjugate(A, 3.0, 1.0), std::invalid_argument);
}

TEST_CASE("supercritical growth yields a capped conjugate") {
  // integrable tail of (t/A)^{k/(n-k)}: H saturates and the conjugate is
  // infinite past sup H
  const auto A = make_exponential();
  const ConjugateResult cr = sobolev_conjugate(A, 3.0, 1.0);
  CHECK_FALSE(cr.finite_everywhere());
  CHECK(std::isfinite(cr.sup_H()));
  CHECK(cr.conjugate()->cap() <= cr.sup_H() * (1.0 + 1e-9));
  CHECK(std::isfinite(cr.conjugate()->value(cr.sup_H() * 0.5)));
  CHECK(cr.conjugate()->value(cr.sup_H() * 2.0) == kInf);
}

TEST_CASE("exponential Young function basics") {
  const auto E = make_exponential();
  CHECK(E->value(1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  CHECK(E->density(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  // density inverse of e^t at r: log r
  CHECK(E->density_inverse(std::exp(3.0)) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("tabulated density reproduces a power function") {
  std::vector<std::pair<double, double>> nodes;
  for (double u = -6.0; u <= 12.0; u += 0.5)
    nodes.emplace_back(std::exp(u), 2.0 * std::exp(u));  // a(t) = 2t -> A = t^2
  const auto T = make_tabulated(nodes);
  for (double t : {0.01, 0.5, 3.0, 100.0})
    CHECK(T->value(t) == doctest::Approx(t * t).epsilon(1e-6));
}

TEST_CASE("equivalence detector") {
  const auto A = make_power_log(2.0, 0.0);
  const auto B = make_tabulated([] {
    std::vector<std::pair<double, double>> nodes;
    for (double u = -8.0; u <= 20.0; u += 0.25)
      nodes.emplace_back(std::exp(u), 6.0 * std::exp(u));  // A scaled by 3
    return nodes;
  }());
  const EquivalenceResult eq = equivalent(*A, *B, Regime::Global);
  CHECK(eq.equivalent);
  CHECK(eq.constant <= 8.0);
  // t^2 vs t^3-ish growth cannot be globally equivalent
  const auto C = make_power_log(3.0, 0.0);
  CHECK_FALSE(equivalent(*A, *C, Regime::Global).equivalent);
}

TEST_CASE("make_capped cuts off the value") {
  const auto A = make_capped(make_power_log(2.0, 0.0), 10.0);
  CHECK(std::isfinite(A->value(9.0)));
  CHECK(A->value(11.0) == kInf);
  CHECK(A->cap() == doctest::Approx(10.0));
}
