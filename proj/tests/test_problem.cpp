#include <cmath>
#include <vector>

#include <doctest.h>

#include "kerncollab/problem.hpp"
#include "kerncollab/rng.hpp"

using namespace kerncollab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("branin: hand-arithmetic oracle values") {
  // classical minimizer (u, v) = (pi, 2.275): the inner square vanishes
  const double x = (5.0 + kPi) / 15.0, y = 2.275 / 15.0;
  const double expected =
      -(-(10.0 - 10.0 / (8.0 * kPi)) - 44.81) / 51.95;
  CHECK(branin(x, y) == doctest::Approx(expected).epsilon(1e-12));

  // (0,0): substitute u = -5, v = 0 into an independently written expansion
  const double core =
      0.0 - 5.1 * 25.0 / (4.0 * kPi * kPi) - 25.0 / kPi - 6.0;
  const double at_origin =
      -(core * core + (10.0 - 10.0 / (8.0 * kPi)) * std::cos(-5.0) - 44.81) /
      51.95;
  CHECK(branin(0.0, 0.0) == doctest::Approx(at_origin).epsilon(1e-12));

  CHECK(std::abs(branin(0.37, 0.61) - branin(0.37 + 1e-9, 0.61)) < 1e-6);
}

TEST_CASE("sobester: zeros, symmetry, substitution") {
  CHECK(std::abs(sobester(1.0 / 3.0, 1.0 / 3.0)) < 1e-13);
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(), b = rng.uniform();
    CHECK(sobester(a, b) == sobester(b, a));
  }
  CHECK(sobester(0.0, 0.0) ==
        doctest::Approx(2.0 * 4.0 * std::sin(-4.0)).epsilon(1e-12));
}

TEST_CASE("benchmark family: exponents apply to raw coordinates") {
  const BenchmarkFamily f{BenchmarkBase::Branin, 2, 3};
  const double x = 0.6, y = 0.8;
  CHECK(f(x, y) == doctest::Approx(branin(x * x, y * y * y)).epsilon(1e-14));
  const BenchmarkFamily s{BenchmarkBase::Sobester, 1, 2};
  CHECK(s(x, y) == doctest::Approx(sobester(x, y * y)).epsilon(1e-14));
  Point bad(3);
  bad.setZero();
  CHECK_THROWS_AS(f(bad), std::invalid_argument);
}

TEST_CASE("uniform_grid: layout and endpoints") {
  const PointList single = uniform_grid(1, 2);
  REQUIRE(single.size() == 1);
  CHECK(single[0](0) == 0.5);
  CHECK(single[0](1) == 0.5);

  const PointList g = uniform_grid(3, 2);
  REQUIRE(g.size() == 9);
  // first coordinate varies fastest
  CHECK(g[0](0) == 0.0);
  CHECK(g[1](0) == 0.5);
  CHECK(g[2](0) == 1.0);
  CHECK(g[0](1) == 0.0);
  CHECK(g[3](1) == 0.5);
  CHECK(g[8](0) == 1.0);
  CHECK(g[8](1) == 1.0);
  CHECK_THROWS_AS(uniform_grid(0, 2), std::invalid_argument);
}

TEST_CASE("make_instance: mixing identity, optima, determinism") {
  const ProblemInstance inst =
      make_instance(42, 8, 6, BenchmarkBase::Branin, 0.01);
  REQUIRE(inst.num_clients == 8);
  REQUIRE(inst.grid.size() == 36);

  for (int i = 0; i < 8; ++i) {
    const double a = inst.alpha[static_cast<size_t>(i)];
    CHECK(a >= 0.1);
    CHECK(a <= 0.9);
    for (size_t j = 0; j < inst.grid.size(); ++j) {
      const Point& x = inst.grid[j];
      double g = 0.0;
      for (int l = 0; l < 8; ++l) g += inst.h_value(l, x);
      g /= 8.0;
      const double f = a * inst.h_value(i, x) + (1.0 - a) * g;
      CHECK(std::abs(inst.f_grid(i, static_cast<Eigen::Index>(j)) - f) <=
            1e-12);
      CHECK(inst.gap(i, static_cast<int>(j)) >= -1e-12);
    }
    // exhaustive-scan confirmation of the stored optimum
    int best = 0;
    for (int j = 1; j < 36; ++j)
      if (inst.f_grid(i, j) > inst.f_grid(i, best)) best = j;
    CHECK(inst.opt_index[static_cast<size_t>(i)] == best);
    CHECK(inst.opt_value[static_cast<size_t>(i)] == inst.f_grid(i, best));
  }

  const ProblemInstance again =
      make_instance(42, 8, 6, BenchmarkBase::Branin, 0.01);
  CHECK((again.f_grid - inst.f_grid).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 8; ++i) {
    CHECK(again.alpha[static_cast<size_t>(i)] ==
          inst.alpha[static_cast<size_t>(i)]);
    CHECK(again.h[static_cast<size_t>(i)].exp_x ==
          inst.h[static_cast<size_t>(i)].exp_x);
    CHECK(again.h[static_cast<size_t>(i)].exp_y ==
          inst.h[static_cast<size_t>(i)].exp_y);
  }

  // K = 1: personalized reward collapses onto the lone observation function
  const ProblemInstance solo =
      make_instance(7, 1, 5, BenchmarkBase::Sobester, 0.0);
  for (size_t j = 0; j < solo.grid.size(); ++j)
    CHECK(solo.f_grid(0, static_cast<Eigen::Index>(j)) ==
          doctest::Approx(solo.h_value(0, solo.grid[j])).epsilon(1e-14));
}

TEST_CASE("default_instance: paper-scale draw statistics") {
  const ProblemInstance inst = default_instance(9);
  CHECK(inst.num_clients == 50);
  CHECK(inst.grid.size() == 900);
  CHECK(inst.noise_var == 0.01);

  // family members uniform over the 9 composites (chi^2, df = 8, p > 0.001)
  std::vector<long> counts(9, 0);
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    const ProblemInstance one =
        make_instance(static_cast<uint64_t>(s), 1, 2, BenchmarkBase::Branin,
                      0.0);
    const int member = (one.h[0].exp_x - 1) * 3 + (one.h[0].exp_y - 1);
    ++counts[static_cast<size_t>(member)];
  }
  const double expected = n / 9.0;
  double chi2 = 0.0;
  for (const long c : counts)
    chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 26.125);  // 0.001 upper quantile at 8 degrees of freedom
}

TEST_CASE("observe: noise model") {
  const ProblemInstance clean =
      make_instance(3, 2, 4, BenchmarkBase::Branin, 0.0);
  Rng rng(10);
  const Point& x = clean.grid[5];
  CHECK(observe(clean, 0, x, rng) == clean.h_value(0, x));

  const ProblemInstance noisy =
      make_instance(3, 2, 4, BenchmarkBase::Branin, 0.01);
  const int n = 100000;
  double sum = 0.0;
  Rng r1(11);
  for (int i = 0; i < n; ++i) sum += observe(noisy, 0, x, r1);
  CHECK(std::abs(sum / n - noisy.h_value(0, x)) <=
        4.0 * 0.1 / std::sqrt(static_cast<double>(n)));

  // two clients at the same point draw independently
  Rng ra(12), rb(13);
  const int m = 10000;
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  for (int i = 0; i < m; ++i) {
    const double a = observe(noisy, 0, x, ra) - noisy.h_value(0, x);
    const double b = observe(noisy, 1, x, rb) - noisy.h_value(1, x);
    sa += a;
    sb += b;
    sab += a * b;
    saa += a * a;
    sbb += b * b;
  }
  const double cov = sab / m - (sa / m) * (sb / m);
  const double corr = cov / std::sqrt((saa / m - sa / m * (sa / m)) *
                                      (sbb / m - sb / m * (sb / m)));
  CHECK(std::abs(corr) < 0.05);
}

TEST_CASE("cumulative_regret: hand sums and naive-loop oracle") {
  const ProblemInstance inst =
      make_instance(21, 3, 4, BenchmarkBase::Sobester, 0.0);

  // all-optimal traces give zero regret
  std::vector<std::vector<int>> opt(3);
  for (int i = 0; i < 3; ++i)
    opt[static_cast<size_t>(i)].assign(
        10, inst.opt_index[static_cast<size_t>(i)]);
  CHECK(cumulative_regret(inst, opt) == doctest::Approx(0.0).epsilon(1e-12));

  // K = 1 hand sum of two gaps
  const ProblemInstance solo =
      make_instance(22, 1, 4, BenchmarkBase::Branin, 0.0);
  const std::vector<std::vector<int>> two{{3, 7}};
  CHECK(cumulative_regret(solo, two) ==
        doctest::Approx(solo.gap(0, 3) + solo.gap(0, 7)).epsilon(1e-12));

  // random traces against a naive double loop
  Rng rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::vector<int>> trace(3);
    const int horizon = 1 + rng.uniform_int(15);
    double naive = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int t = 0; t < horizon; ++t) {
        const int j = rng.uniform_int(16);
        trace[static_cast<size_t>(i)].push_back(j);
        naive += inst.opt_value[static_cast<size_t>(i)] -
                 inst.f_value(i, inst.grid[static_cast<size_t>(j)]);
      }
    CHECK(cumulative_regret(inst, trace) ==
          doctest::Approx(naive).epsilon(1e-10));
  }

  std::vector<std::vector<int>> ragged{{1, 2}, {1}, {1, 2}};
  CHECK_THROWS_AS(cumulative_regret(inst, ragged), std::invalid_argument);
  CHECK_THROWS_AS(cumulative_regret(inst, {{0}}), std::invalid_argument);
}
