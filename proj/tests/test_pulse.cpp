#include <cmath>

#include "doctest.h"
#include "spcalc/pulse.hpp"

using namespace spcalc;

namespace {
const GridSpec kPul = GridSpec::pulse(1, kPi, 16, 8.0, 32);
}

TEST_CASE("gaussian bump profile passes all orders") {
  ProfileCheckReport rep = pulse_profile_check(make_profile("gauss", {}, kPul), kPul, 3);
  CHECK(rep.pass);
  for (const auto& e : rep.entries) CHECK(e.growth <= 1.5);
}

TEST_CASE("constant profile fails at order zero") {
  ProfileCheckReport rep = pulse_profile_check(make_profile("const", {}, kPul), kPul, 2);
  CHECK_FALSE(rep.pass);
  CHECK(rep.failed_dx == 0);
  CHECK(rep.failed_dtheta == 0);
}

TEST_CASE("sech profile passes on the truncated box") {
  ProfileCheckReport rep =
      pulse_profile_check(make_profile("sechcos", {}, kPul), kPul, 3);
  CHECK(rep.pass);
}

TEST_CASE("profile check refuses wavetrain grids") {
  GridSpec w = GridSpec::wavetrain(1, kPi, 8, 3);
  CHECK_THROWS_AS(pulse_profile_check(make_profile("xonly", {}, w), w, 1), Error);
}

TEST_CASE("theta weight shape stays bounded") {
  double sup = theta_weight_shape_sup(kPul);
  CHECK(sup > 0.5);
  CHECK(sup <= 4.0);
}

TEST_CASE("profile pair shape obeys the bracket envelope") {
  double sup = profile_pair_shape_sup(make_profile("gauss", {}, kPul),
                                      make_profile("gaussw", {}, kPul), kPul);
  CHECK(sup > 0.0);
  CHECK(sup <= 4.0);
}
