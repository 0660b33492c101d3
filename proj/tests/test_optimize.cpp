#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "aoi/aloha_analytic.hpp"
#include "aoi/optimize.hpp"

using namespace aoi;

TEST_CASE("sf_sweep: heterogeneous three-node profile") {
  const SweepResult r = sf_sweep(ChannelProfile({0.1, 0.5, 0.9}), 30);
  REQUIRE(r.ages.size() == 30);
  REQUIRE(r.breakdowns.size() == 30);
  CHECK(r.best_s == 7);
  CHECK_FALSE(r.monotone_decreasing);
  CHECK(r.ages[6] == doctest::Approx(8.6893315021709014).epsilon(1e-13));
  for (double a : r.ages) CHECK(a >= r.ages[6]);
}

TEST_CASE("sf_sweep: perfect channels make the cap irrelevant") {
  const SweepResult r = sf_sweep(ChannelProfile({1, 1, 1}), 10);
  for (double a : r.ages) CHECK(a == 2.5);
  CHECK(r.best_s == 1);
  CHECK_FALSE(r.monotone_decreasing);
}

TEST_CASE("sf_sweep: homogeneous profile decreases to the largest cap") {
  const SweepResult r = sf_sweep(ChannelProfile(std::vector<double>(5, 0.3)), 50);
  CHECK(r.monotone_decreasing);
  CHECK(r.best_s == 50);
}

TEST_CASE("sf_sweep rejects a non-positive cap") {
  CHECK_THROWS_AS(sf_sweep(ChannelProfile({0.5}), 0), Error);
}

TEST_CASE("tau_exact_two: spot values") {
  const TauSolution a = tau_exact_two(0.5, 0.5);
  CHECK(a.taus == std::vector<double>{0.5, 0.5});
  CHECK(a.method == TauMethod::kExactTwo);

  const TauSolution b = tau_exact_two(0.125, 1.0);
  CHECK(b.taus[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(b.taus[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(b.foc_max_residual < 1e-12);
  CHECK(b.achieved_age ==
        doctest::Approx(
            aloha_age(AlohaConfig(ChannelProfile({0.125, 1.0}), b.taus)).network.slots())
            .epsilon(1e-15));
}

TEST_CASE("tau_approx: spot values") {
  const TauSolution a = tau_approx(ChannelProfile({0.25, 1.0}));
  // p^-1/2 = (2, 1).
  CHECK(a.taus[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(a.taus[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(a.method == TauMethod::kApprox);

  const TauSolution u = tau_approx(ChannelProfile(std::vector<double>(4, 0.7)));
  for (double t : u.taus) CHECK(t == doctest::Approx(0.25).epsilon(1e-15));

  try {
    tau_approx(ChannelProfile({0.5}));
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingleNode);
  }
}

TEST_CASE("method names") {
  CHECK(to_string(TauMethod::kExactTwo) == "exact2");
  CHECK(to_string(TauMethod::kApprox) == "approx");
  CHECK(to_string(TauMethod::kNumeric) == "numeric");
}

TEST_CASE("tau_numeric: homogeneous profile gives 1/M") {
  for (std::size_t m : {2u, 5u, 40u}) {
    const TauSolution s = tau_numeric(ChannelProfile(std::vector<double>(m, 0.4)));
    for (double t : s.taus) {
      CHECK(t == doctest::Approx(1.0 / static_cast<double>(m)).epsilon(1e-9));
    }
    CHECK(s.method == TauMethod::kNumeric);
  }
}

TEST_CASE("tau_numeric matches the two-node closed form on a grid") {
  for (int a = 1; a <= 10; ++a) {
    for (int b = 1; b <= 10; ++b) {
      const double p1 = 0.1 * a;
      const double p2 = 0.1 * b;
      const TauSolution exact = tau_exact_two(p1, p2);
      const TauSolution num = tau_numeric(ChannelProfile({p1, p2}));
      CHECK(std::abs(num.taus[0] - exact.taus[0]) <= 1e-8);
      CHECK(std::abs(num.taus[1] - exact.taus[1]) <= 1e-8);
    }
  }
}

TEST_CASE("tau_numeric never does worse than the approximation") {
  std::uniform_real_distribution<double> pd(0.05, 1.0);
  std::uniform_int_distribution<int> nodes(2, 30);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 gen(seed);
    std::vector<double> p(static_cast<std::size_t>(nodes(gen)));
    for (auto& x : p) x = pd(gen);
    const ChannelProfile profile(p);
    const TauSolution num = tau_numeric(profile);
    const TauSolution approx = tau_approx(profile);
    CHECK(num.achieved_age <= approx.achieved_age * (1 + 1e-12));
    CHECK(num.foc_max_residual < 1e-8);
    double total = 0.0;
    for (double t : num.taus) {
      CHECK(t > 0.0);
      CHECK(t < 1.0);
      total += t;
    }
    CHECK(total <= 1.0 + 1e-9);
  }
}

TEST_CASE("tau_numeric reports its residual consistently") {
  const ChannelProfile profile({0.2, 0.45, 0.8, 0.95});
  const TauSolution s = tau_numeric(profile);
  const FocResidual f = foc_residual(AlohaConfig(profile, s.taus));
  CHECK(s.foc_max_residual == doctest::Approx(f.max_norm).epsilon(1e-12));
  CHECK(s.achieved_age ==
        doctest::Approx(aloha_age(AlohaConfig(profile, s.taus)).network.slots())
            .epsilon(1e-15));
  CHECK(s.iterations >= 1);
}

TEST_CASE("tau_numeric signals non-convergence with the last iterate") {
  const ChannelProfile profile({0.1, 0.5, 0.9});
  TauSolverOptions opt;
  opt.max_iter = 1;
  opt.tol = 1e-15;
  try {
    tau_numeric(profile, opt);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.code() == ErrorCode::kNoConvergence);
    CHECK(kind_of(e.code()) == ErrorKind::kNumerical);
    CHECK(e.last_iterate().taus.size() == 3);
  }
}

TEST_CASE("tau_numeric accepts and validates a starting point") {
  const ChannelProfile profile({0.3, 0.6, 0.9});
  TauSolverOptions opt;
  opt.initial = std::vector<double>(3, 1.0 / 3.0);
  const TauSolution a = tau_numeric(profile, opt);
  const TauSolution b = tau_numeric(profile);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.taus[i] == doctest::Approx(b.taus[i]).epsilon(1e-8));
  }
  opt.initial = std::vector<double>(2, 0.5);
  CHECK_THROWS_AS(tau_numeric(profile, opt), Error);
}
