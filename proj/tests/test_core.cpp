#include <doctest.h>

#include <random>
#include <vector>

#include "aoi/core.hpp"

using namespace aoi;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected aoi::Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("age_from_moments: deterministic and geometric renewal processes") {
  CHECK(age_from_moments({1.0, 1.0}) == 1.5);
  CHECK(age_from_moments({2.0, 4.0}) == 2.0);

  // Z = 2N with N ~ geometric(1/2): E[N] = 2, E[N^2] = (2 - q)/q^2 = 6.
  const double q = 0.5;
  const double en = 1.0 / q;
  const double en2 = (2.0 - q) / (q * q);
  const InterUpdateMoments z{2.0 * en, 4.0 * en2};
  CHECK(z.mean == 4.0);
  CHECK(z.second_moment == 24.0);
  CHECK(age_from_moments(z) == 4.0);
}

TEST_CASE("age_from_moments rejects a non-positive mean") {
  CHECK(code_of([] { age_from_moments({0.0, 1.0}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { age_from_moments({-1.0, 1.0}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("geometric inter-update times give age 1/q + 1/2") {
  for (double q : {0.01, 0.1, 0.25, 0.5, 0.9, 1.0}) {
    const InterUpdateMoments m{1.0 / q, (2.0 - q) / (q * q)};
    CHECK(age_from_moments(m) == doctest::Approx(1.0 / q + 0.5).epsilon(1e-14));
  }
}

TEST_CASE("age is at least mean/2 + 1 for any valid moments") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mean_dist(1.0, 100.0);
  std::uniform_real_distribution<double> extra(0.0, 1000.0);
  for (int k = 0; k < 2000; ++k) {
    const double mean = mean_dist(gen);
    const InterUpdateMoments m{mean, mean * mean + extra(gen)};
    CHECK(m.variance() >= 0.0);
    const double age = age_from_moments(m);
    CHECK(age >= mean / 2.0 + 1.0);
    CHECK(age >= 1.5);
  }
}

TEST_CASE("network_age averages and propagates unbounded ages") {
  const std::vector<double> two{2.0, 4.0};
  CHECK(network_age(two).network.slots() == 3.0);

  const std::vector<double> one{1.5};
  CHECK(network_age(one).network.slots() == 1.5);

  const std::vector<Age> starved{Age::finite(2.0), Age::unbounded()};
  const AgeReport r = network_age(starved);
  CHECK(r.network.is_unbounded());
  CHECK(r.per_node[0] == Age::finite(2.0));
  CHECK(r.per_node[1].is_unbounded());

  CHECK(code_of([] { network_age(std::vector<double>{}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("unbounded age sentinel is distinct from every finite value") {
  const Age inf = Age::unbounded();
  CHECK(inf.is_unbounded());
  CHECK_FALSE(inf.is_finite());
  CHECK_FALSE(inf == Age::finite(1e308));
  CHECK(Age::finite(3.0).is_finite());
}

TEST_CASE("ChannelProfile validation uses distinct error codes") {
  CHECK(code_of([] { ChannelProfile({}); }) == ErrorCode::kEmptyProfile);
  CHECK(code_of([] { ChannelProfile({0.5, 0.0}); }) ==
        ErrorCode::kProbabilityNotPositive);
  CHECK(code_of([] { ChannelProfile({-0.1}); }) ==
        ErrorCode::kProbabilityNotPositive);
  CHECK(code_of([] { ChannelProfile({1.0000001}); }) ==
        ErrorCode::kProbabilityAboveOne);
  CHECK(code_of([] { ChannelProfile({std::nan("")}); }) ==
        ErrorCode::kProbabilityNotPositive);

  const ChannelProfile p({0.1, 0.5, 0.9, 1.0});
  CHECK(p.size() == 4);
  CHECK(p.p_min() == 0.1);
  CHECK(p.p_max() == 1.0);
  CHECK(p.rho() == doctest::Approx(10.0));
  CHECK(code_of([&] { p.check_node(4); }) == ErrorCode::kNodeIndex);
}

TEST_CASE("protocol configurations validate their parameters") {
  const ChannelProfile p({0.5, 0.5});
  CHECK(code_of([&] { SfConfig(p, 0); }) == ErrorCode::kInvalidTurnCap);
  CHECK(SfConfig(p, 1).turn_cap == 1);

  CHECK(code_of([&] { AlohaConfig(p, {0.5}); }) == ErrorCode::kLengthMismatch);
  CHECK(code_of([&] { AlohaConfig(p, {0.5, 1.5}); }) ==
        ErrorCode::kInvalidAttempt);
  CHECK(code_of([&] { AlohaConfig(p, {-0.1, 0.5}); }) ==
        ErrorCode::kInvalidAttempt);
  CHECK_NOTHROW(AlohaConfig(p, {0.0, 1.0}));
}

TEST_CASE("error kinds map to exit-code classes") {
  CHECK(kind_of(ErrorCode::kProbabilityAboveOne) == ErrorKind::kValidation);
  CHECK(kind_of(ErrorCode::kNoConvergence) == ErrorKind::kNumerical);
  CHECK(kind_of(ErrorCode::kBoundViolation) == ErrorKind::kNumerical);
  CHECK(kind_of(ErrorCode::kIo) == ErrorKind::kIo);
}
