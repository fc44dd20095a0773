#include <doctest.h>

#include <cmath>

#include "core/geometry.hpp"

using namespace prox3d;

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(4.0) == doctest::Approx(-2.2831853071795862));
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));  // -pi is excluded
  CHECK(wrap_angle(2.0 * kPi) == doctest::Approx(0.0));
  CHECK(wrap_angle(-3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(7.0 * kPi + 0.25) == doctest::Approx(kPi + 0.25 - 2.0 * kPi));
}

TEST_CASE("intrinsics validation") {
  CHECK_THROWS_AS(CameraIntrinsics(0.0, 710.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CameraIntrinsics(720.0, -1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_NOTHROW(CameraIntrinsics(720.0, 710.0, 280.0, 80.0));
}

TEST_CASE("back projection applies K inverse") {
  const CameraIntrinsics k(720.0, 710.0, 280.0, 80.0);
  const NormalizedPoint n = back_project({640.0, 300.0}, k);
  CHECK(n.x == doctest::Approx(0.5));
  CHECK(n.y == doctest::Approx(22.0 / 71.0));
}

TEST_CASE("project / back_project round trip") {
  const CameraIntrinsics k(720.0, 720.0, 620.0, 190.0);
  const CartesianLocation p{-1.3, 0.4, 7.5};
  const PixelPoint px = project(p, k);
  const NormalizedPoint n = back_project(px, k);
  CHECK(n.x * p.z == doctest::Approx(p.x));
  CHECK(n.y * p.z == doctest::Approx(p.y));
}

TEST_CASE("project rejects points behind the camera") {
  const CameraIntrinsics k(720.0, 720.0, 620.0, 190.0);
  CHECK_THROWS_AS(project({0.0, 0.0, 0.0}, k), std::domain_error);
  CHECK_THROWS_AS(project({1.0, 1.0, -2.0}, k), std::domain_error);
}

TEST_CASE("spherical coordinates of a known point") {
  const SphericalLocation s = spherical_from_cartesian({1.0, -1.0, 2.0});
  CHECK(s.d == doctest::Approx(2.449489742783178));
  CHECK(s.beta == doctest::Approx(0.4636476090008061));
  CHECK(s.psi == doctest::Approx(1.1502619915109313));
}

TEST_CASE("spherical axes: beta from +z toward +x, psi from -y") {
  // straight ahead at eye height
  auto ahead = spherical_from_cartesian({0.0, 0.0, 5.0});
  CHECK(ahead.beta == doctest::Approx(0.0));
  CHECK(ahead.psi == doctest::Approx(kPi / 2.0));
  // to the right
  CHECK(spherical_from_cartesian({3.0, 0.0, 3.0}).beta == doctest::Approx(kPi / 4.0));
  // below the optical axis (y down) means psi > pi/2
  CHECK(spherical_from_cartesian({0.0, 1.0, 1.0}).psi ==
        doctest::Approx(3.0 * kPi / 4.0));
  CHECK_THROWS_AS(spherical_from_cartesian({0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("cartesian / spherical round trip") {
  const CartesianLocation points[] = {
      {1.0, -1.0, 2.0}, {-4.0, 2.5, 11.0}, {0.3, 0.0, 0.2}, {-0.1, -3.0, 9.0}};
  for (const auto& p : points) {
    const CartesianLocation q = cartesian_from_spherical(spherical_from_cartesian(p));
    CHECK(q.x == doctest::Approx(p.x));
    CHECK(q.y == doctest::Approx(p.y));
    CHECK(q.z == doctest::Approx(p.z));
  }
  const CartesianLocation up = cartesian_from_spherical({2.0, 0.0, kPi / 2.0});
  CHECK(up.x == doctest::Approx(0.0));
  CHECK(up.y == doctest::Approx(0.0));
  CHECK(up.z == doctest::Approx(2.0));
}

TEST_CASE("viewpoint is orientation plus azimuth, wrapped") {
  CHECK(viewpoint_from_orientation(3.0, 1.0) == doctest::Approx(-2.2831853071795862));
  CHECK(orientation_from_viewpoint(-2.2831853071795862, 1.0) == doctest::Approx(3.0));
  // round trip at random-ish angles
  for (double theta : {-3.1, -1.0, 0.0, 0.7, 2.9}) {
    for (double beta : {-0.8, 0.0, 1.2}) {
      const double alpha = viewpoint_from_orientation(theta, beta);
      CHECK(orientation_from_viewpoint(alpha, beta) == doctest::Approx(theta));
    }
  }
}

TEST_CASE("decode_orientation renormalizes and rejects (0,0)") {
  CHECK(decode_orientation(0.6, 0.8, 0.0) == doctest::Approx(0.6435011087932844));
  CHECK(decode_orientation(1.8, 2.4, 0.0) == doctest::Approx(0.6435011087932844));
  CHECK(decode_orientation(0.0, 1.0, 0.25) == doctest::Approx(-0.25));
  CHECK_THROWS_AS(decode_orientation(0.0, 0.0, 0.0), std::domain_error);
}
