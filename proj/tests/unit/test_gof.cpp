#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "steinfit/gof.hpp"
#include "steinfit/rng.hpp"

using namespace steinfit;

namespace {

const double kB1 = 2.0 - 5.0 * std::exp(-1.0);
const auto identity = [](double x) { return x; };

SortedSample sorted(std::vector<double> v) { return SortedSample(std::move(v)); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_CASE("B examples") {
  auto one = sorted({1.0});
  CHECK(std::abs(burr_B_closed(one, 1, 1, 1) - kB1) < 1e-14);
  CHECK(std::abs(burr_B_quadrature(one, 1, 1, 1) - kB1) < 1e-14);
  // Frozen from an independent high-precision quadrature.
  auto two = sorted({1.0, 2.0});
  CHECK(rel(burr_B_closed(two, 1, 1, 1), 0.3385879239317034) < 1e-13);
  CHECK(rel(burr_B_quadrature(two, 1, 1, 1), 0.3385879239317034) < 1e-13);
}

TEST_CASE("B piecewise integration agrees with adaptive quadrature") {
  auto two = sorted({1.0, 2.0});
  auto A = [](double x) { return burr_A1(x, 1, 1); };
  auto T = [&](double t) { return (A(1) * std::min(1.0, t) + A(2) * std::min(2.0, t)) / 2; };
  CHECK(std::abs(generic_L2(T, two, 1.0) - burr_B_quadrature(two, 1, 1, 1)) < 1e-10);
}

TEST_CASE("B decreases in a for the single-point sample") {
  auto one = sorted({1.0});
  const double b1 = burr_B_quadrature(one, 1, 1, 1), b3 = burr_B_quadrature(one, 1, 1, 3),
               b5 = burr_B_quadrature(one, 1, 1, 5);
  CHECK(b1 > b3);
  CHECK(b3 > b5);
  CHECK(rel(burr_B_closed(one, 1, 1, 3), b3) < 1e-12);
  CHECK(rel(burr_B_closed(one, 1, 1, 5), b5) < 1e-12);
}

TEST_CASE("B closed form equals the oracle on random instances") {
  RngStream rng(101, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 50);
    std::vector<double> x(n);
    for (auto& v : x) v = std::exp(-3 + 6 * rng.uniform());
    const double k = 0.2 + 4 * rng.uniform(), c = 0.2 + 4 * rng.uniform();
    const double a = 0.1 + 5 * rng.uniform();
    auto s = sorted(x);
    const double q = burr_B_quadrature(s, k, c, a);
    INFO("n=" << n << " k=" << k << " c=" << c << " a=" << a);
    CHECK(q >= 0.0);
    CHECK(rel(burr_B_closed(s, k, c, a), q) < 1e-8);
  }
}

TEST_CASE("B is zero when the deviation vanishes") {
  // With A1 = 0 at the only point T = 0, so B = n * integral_X^inf e^{-at} > 0;
  // a deviation-free synthetic case is T = F, checked through generic_L2.
  auto s = sorted({0.5, 1.5});
  auto F = [&](double t) { return (t >= 0.5 ? 0.5 : 0.0) + (t >= 1.5 ? 0.5 : 0.0); };
  CHECK(generic_L2(F, s, 1.0) == 0.0);
}

TEST_CASE("min form and gamma statistic reproduce the B example") {
  auto one = sorted({1.0});
  CHECK(std::abs(min_form_L2(one, [](double) { return -1.0; }, 1.0) - kB1) < 1e-14);
  CHECK(std::abs(gamma_G(one, 1.0, 1.0, 1.0) - kB1) < 1e-14);
}

TEST_CASE("exact L2 forms agree with adaptive quadrature") {
  RngStream rng(102, 0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(1 + rep);
    for (auto& v : x) v = 0.1 + 3 * rng.uniform();
    auto s = sorted(x);
    const double k = 0.5 + 3 * rng.uniform(), a = 0.3 + 3 * rng.uniform();
    auto sc = [&](double y) { return (k - 1) / y - 1; };
    auto T = [&](double t) { return empirical_T_min(s.values(), sc, t); };
    CHECK(rel(min_form_L2(s, sc, a), generic_L2(T, s, a)) < 1e-9);

    std::vector<double> z(2 + rep);
    for (auto& v : z) v = -2 + 4 * rng.uniform();
    auto zs = sorted(z);
    auto Tz = [&](double t) { return empirical_T_zero_bias(zs.values(), t); };
    CHECK(rel(zero_bias_L2(zs, a), generic_L2(Tz, zs, a, -kInf)) < 1e-9);
  }
}

TEST_CASE("normal statistic is location-scale invariant") {
  auto s = sorted({-0.3, 0.1, 0.7, 1.9, 2.2, 3.0});
  const auto m = 1.2716666666666667, v = 1.4;
  const double g = normal_G(s, m, v, 1.0);
  std::vector<double> y;
  for (double x : s) y.push_back(5 + 3 * x);
  CHECK(rel(normal_G(sorted(y), 5 + 3 * m, 9 * v, 1.0), g) < 1e-12);
}

TEST_CASE("generic L2 scales linearly with n") {
  auto s1 = sorted({1.0});
  auto s2 = sorted({1.0, 1.0});
  auto T = [](double t) { return std::min(1.0, t); };
  CHECK(rel(generic_L2(T, s2, 1.0), 2 * generic_L2(T, s1, 1.0)) < 1e-12);
}

TEST_CASE("classical statistics golden values") {
  auto q = sorted({0.25, 0.75});
  CHECK(std::abs(ks(q, identity) - 0.25) < 1e-12);
  CHECK(std::abs(cvm(q, identity) - 1.0 / 24) < 1e-12);
  CHECK(std::abs(watson(q, identity) - 1.0 / 24) < 1e-12);
  CHECK(std::abs(ad(q, identity) - (-2 - 0.5 * (2 * std::log(0.25) + 6 * std::log(0.75)))) <
        1e-12);

  auto h = sorted({0.5});
  CHECK(std::abs(ks(h, identity) - 0.5) < 1e-12);
  CHECK(std::abs(cvm(h, identity) - 1.0 / 12) < 1e-12);
  CHECK(std::abs(ad(h, identity) - (2 * std::log(2.0) - 1)) < 1e-12);
  CHECK(std::abs(watson(h, identity) - 1.0 / 12) < 1e-12);

  auto e = sorted({0.2, 0.4, 0.6, 0.8, 1.0});
  auto exact = [](double x) { return x; };
  CHECK(std::abs(ks(e, exact) - 0.2) < 1e-12);
  CHECK(std::abs(ks(e, exact, true) - 0.2 * std::sqrt(5.0)) < 1e-12);

  auto mid = sorted({0.125, 0.375, 0.625, 0.875});
  CHECK(std::abs(cvm(mid, identity) - 1.0 / 48) < 1e-12);
}

TEST_CASE("AD clamps boundary transforms") {
  auto s = sorted({0.0, 1.0});
  auto r = ad_detail(s, identity);
  CHECK(r.clamped == 2);
  CHECK(std::isfinite(r.value));
  CHECK(r.value > 10);
}

TEST_CASE("Watson is below Cramer-von Mises when the PIT mean is off centre") {
  auto s = sorted({0.1, 0.2, 0.3});
  CHECK(watson(s, identity) < cvm(s, identity));
  CHECK(watson(s, identity) >= 0.0);
}

TEST_CASE("EDF statistics are PIT invariant and permutation invariant") {
  RngStream rng(103, 0);
  const auto d = dist::gamma(2.5, 1.3);
  auto F = [&](double x) { return cdf(d, x); };
  std::vector<double> x(30);
  for (auto& v : x) v = quantile(d, rng.uniform());
  auto s = sorted(x);
  std::vector<double> u;
  for (double v : s) u.push_back(F(v));
  auto su = sorted(u);
  CHECK(std::abs(ks(s, F) - ks(su, identity)) < 1e-12);
  CHECK(std::abs(cvm(s, F) - cvm(su, identity)) < 1e-12);
  CHECK(std::abs(ad(s, F) - ad(su, identity)) < 1e-12);
  CHECK(std::abs(watson(s, F) - watson(su, identity)) < 1e-12);
  CHECK(ad(s, F) >= -30.0);
  std::reverse(x.begin(), x.end());
  CHECK(cvm(sorted(x), F) == cvm(s, F));
}

TEST_CASE("statistic ids parse and label") {
  CHECK(StatisticId::parse("B_0.25")->label() == "B_0.25");
  CHECK(StatisticId::parse("burr_B(3)")->label() == "B_3");
  CHECK(StatisticId::parse("ks")->label() == "KS");
  CHECK(StatisticId::parse("KS_sqrt")->ks_sqrt_n);
  CHECK(StatisticId::parse("cvm")->label() == "CM");
  CHECK(StatisticId::parse("G_1")->kind == StatisticId::Kind::generic_L2);
  CHECK(StatisticId::parse("watson")->label() == "WA");
  CHECK_FALSE(StatisticId::parse("B_-1").has_value());
  CHECK_FALSE(StatisticId::parse("B_").has_value());
  CHECK_FALSE(StatisticId::parse("chi2").has_value());
}
