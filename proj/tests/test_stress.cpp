#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fowt/stress.hpp"

using namespace fowt;

namespace {

// Constant-load series helper.
LoadTimeSeries constant_loads(double nz, double mx_t, double my_t, double fx = 0.0,
                              double fy = 0.0, double fz = 0.0, double mx_b = 0.0,
                              double my_b = 0.0, double mz_b = 0.0, std::size_t n = 4) {
  LoadTimeSeries l;
  l.dt = 0.05;
  l.tower_nz.assign(n, nz);
  l.tower_mx.assign(n, mx_t);
  l.tower_my.assign(n, my_t);
  l.blade_fx.assign(n, fx);
  l.blade_fy.assign(n, fy);
  l.blade_fz.assign(n, fz);
  l.blade_mx.assign(n, mx_b);
  l.blade_my.assign(n, my_b);
  l.blade_mz.assign(n, mz_b);
  return l;
}

const SectionGeometry kTower = SectionGeometry::annulus(6.5, 0.027);

}  // namespace

TEST_CASE("tower annulus geometry is internally consistent") {
  const double d_o = 6.5, t = 0.027;
  const double d_i = d_o - 2.0 * t;
  CHECK(std::abs(kTower.area - kPi * (d_o * d_o - d_i * d_i) / 4.0) <=
        1e-12 * kTower.area);
  CHECK(std::abs(kTower.ix - kPi * (std::pow(d_o, 4) - std::pow(d_i, 4)) / 64.0) <=
        1e-12 * kTower.ix);
  CHECK(kTower.ix == kTower.iy);
  CHECK(kTower.radius == d_o / 2.0);
  CHECK_THROWS_AS(SectionGeometry::annulus(6.5, 3.3), std::invalid_argument);
}

TEST_CASE("pure axial load gives Nz/A at every angle") {
  const auto loads = constant_loads(-1.0e7, 0.0, 0.0);
  for (double alpha : {0.0, 0.7, kPi / 2.0, 2.1, kPi}) {
    const auto s = tower_axial_stress(loads, kTower, alpha);
    for (double v : s.samples) {
      CHECK_THAT(v, Catch::Matchers::WithinRel(-1.0e7 / kTower.area, 1e-12));
    }
  }
}

TEST_CASE("at the quadrature angle only the roll moment contributes") {
  const auto loads = constant_loads(-1.0e7, 3.0e7, 5.0e7);
  const auto s = tower_axial_stress(loads, kTower, kPi / 2.0);
  const double expect = -1.0e7 / kTower.area - 3.0e7 / kTower.ix * kTower.radius;
  CHECK_THAT(s.samples[0], Catch::Matchers::WithinRel(expect, 1e-12));
}

TEST_CASE("hand evaluation at the lee side") {
  // N_z = -1e7 N, M_y = 5e7 N*m, M_x = 0, alpha = pi, Table 1 annulus.
  const auto loads = constant_loads(-1.0e7, 0.0, 5.0e7);
  const auto s = tower_axial_stress(loads, kTower, kPi);
  const double a_hand = 0.5490592896605466;    // pi*(6.5^2 - 6.446^2)/4
  const double i_hand = 2.8757294632414347;    // pi*(6.5^4 - 6.446^4)/64
  const double expect = -1.0e7 / a_hand - 5.0e7 / i_hand * 3.25;
  CHECK_THAT(s.samples[0], Catch::Matchers::WithinRel(expect, 1e-9));
  CHECK_THAT(s.samples[0], Catch::Matchers::WithinRel(-74720371.0385881, 1e-9));
}

TEST_CASE("node 4 sees no pitch-moment contribution") {
  const auto with_my = constant_loads(-1.0e7, 2.0e7, 5.0e7);
  const auto without_my = constant_loads(-1.0e7, 2.0e7, 0.0);
  const auto a = tower_node_stresses(with_my, kTower);
  const auto b = tower_node_stresses(without_my, kTower);
  CHECK(std::abs(a[3].samples[0] - b[3].samples[0]) <=
        1e-12 * std::abs(a[3].samples[0]));
}

TEST_CASE("compressive axial force plus thrust moment peaks at node 7") {
  const auto loads = constant_loads(-1.0e7, 1.0e6, 5.0e7);
  const auto nodes = tower_node_stresses(loads, kTower);
  std::size_t argmax = 0;
  double best = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    double m = 0.0;
    for (double v : nodes[k].samples) m += v;
    m = std::abs(m / static_cast<double>(nodes[k].samples.size()));
    if (m > best) {
      best = m;
      argmax = k;
    }
  }
  CHECK(argmax == 6);  // node 7
  // Lee side dominates the wave-facing side.
  CHECK(std::abs(nodes[6].samples[0]) >= std::abs(nodes[0].samples[0]));
}

TEST_CASE("stress around the circumference is a single sinusoid") {
  const auto loads = constant_loads(-1.0e7, 2.3e7, 4.1e7, 0, 0, 0, 0, 0, 0, 1);
  const double axial = loads.tower_nz[0] / kTower.area;

  // Least-squares fit of c1*cos(alpha) - c2*sin(alpha) over the node grid.
  double scc = 0, sss = 0, scs = 0, sc = 0, ss = 0;
  std::vector<double> y(kTowerNodeCount);
  for (std::size_t k = 0; k < kTowerNodeCount; ++k) {
    const double alpha = tower_node_angle(k);
    y[k] = tower_axial_stress(loads, kTower, alpha).samples[0] - axial;
    const double c = std::cos(alpha), s = -std::sin(alpha);
    scc += c * c;
    sss += s * s;
    scs += c * s;
    sc += c * y[k];
    ss += s * y[k];
  }
  const double det = scc * sss - scs * scs;
  const double c1 = (sc * sss - ss * scs) / det;
  const double c2 = (ss * scc - sc * scs) / det;
  const double amplitude = std::hypot(c1, c2);
  double residual = 0.0;
  for (std::size_t k = 0; k < kTowerNodeCount; ++k) {
    const double alpha = tower_node_angle(k);
    const double fit = c1 * std::cos(alpha) - c2 * std::sin(alpha);
    residual = std::max(residual, std::abs(y[k] - fit));
  }
  CHECK(residual <= 1e-9 * amplitude);
}

TEST_CASE("tower stress is linear in the section loads") {
  const auto l1 = constant_loads(-3.0e6, 1.0e7, 2.0e7);
  const auto l2 = constant_loads(5.0e6, -4.0e6, 7.0e6);
  auto sum = l1;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    sum.tower_nz[i] += l2.tower_nz[i];
    sum.tower_mx[i] += l2.tower_mx[i];
    sum.tower_my[i] += l2.tower_my[i];
  }
  for (double alpha : {0.3, 1.4, 2.8}) {
    const auto s1 = tower_axial_stress(l1, kTower, alpha);
    const auto s2 = tower_axial_stress(l2, kTower, alpha);
    const auto s12 = tower_axial_stress(sum, kTower, alpha);
    for (std::size_t i = 0; i < s12.samples.size(); ++i) {
      CHECK(std::abs(s12.samples[i] - (s1.samples[i] + s2.samples[i])) <=
            1e-12 * std::abs(s12.samples[i]));
    }
  }
}

TEST_CASE("blade axial stress from the resultant moment") {
  SectionGeometry g;
  g.area = 2.0;
  g.w_n = 1.0;
  g.w_p = 2.0;

  auto pure_axial = constant_loads(0, 0, 0, 0, 0, 6.0, 0.0, 0.0, 0.0);
  CHECK_THAT(blade_axial_stress(pure_axial, g).samples[0],
             Catch::Matchers::WithinRel(3.0, 1e-12));

  auto three_four = constant_loads(0, 0, 0, 0, 0, 0.0, 3.0, 4.0, 0.0);
  CHECK_THAT(blade_axial_stress(three_four, g).samples[0],
             Catch::Matchers::WithinRel(5.0, 1e-12));

  auto negated = constant_loads(0, 0, 0, 0, 0, 0.0, -3.0, -4.0, 0.0);
  CHECK(blade_axial_stress(three_four, g).samples[0] ==
        blade_axial_stress(negated, g).samples[0]);
}

TEST_CASE("blade resultant is invariant under in-plane rotation") {
  SectionGeometry g;
  g.area = 1.0;
  g.w_n = 0.5;
  const double mx = 2.0e6, my = 3.5e6;
  const auto base = constant_loads(0, 0, 0, 0, 0, 0.0, mx, my, 0.0);
  const double ref = blade_axial_stress(base, g).samples[0];
  for (double phi : {0.4, 1.1, 2.9}) {
    const double rx = mx * std::cos(phi) - my * std::sin(phi);
    const double ry = mx * std::sin(phi) + my * std::cos(phi);
    const auto rotated = constant_loads(0, 0, 0, 0, 0, 0.0, rx, ry, 0.0);
    CHECK_THAT(blade_axial_stress(rotated, g).samples[0],
               Catch::Matchers::WithinRel(ref, 1e-12));
  }
}

TEST_CASE("blade shear stress hand checks") {
  SectionGeometry g;
  g.area = 2.0;
  g.w_p = 4.0;

  auto zero = constant_loads(0, 0, 0, 0.0, 0.0, 0, 0, 0, 0.0);
  CHECK(blade_shear_stress(zero, g).samples[0] == 0.0);

  auto six_eight = constant_loads(0, 0, 0, 6.0, 8.0, 0, 0, 0, 0.0);
  CHECK_THAT(blade_shear_stress(six_eight, g).samples[0],
             Catch::Matchers::WithinRel(5.0, 1e-12));

  // The torsion term keeps its sign as printed.
  auto neg_mz = constant_loads(0, 0, 0, 0.0, 0.0, 0, 0, 0, -8.0);
  CHECK_THAT(blade_shear_stress(neg_mz, g).samples[0],
             Catch::Matchers::WithinRel(-2.0, 1e-12));
}

TEST_CASE("equivalent stress combines axial and shear") {
  StressTimeSeries sigma0{0.05, {4.0, -2.0, 0.0}};
  StressTimeSeries tau0{0.05, {3.0, 0.0, 1.0}};
  const auto eq = blade_equivalent_stress(sigma0, tau0);
  CHECK_THAT(eq.samples[0], Catch::Matchers::WithinRel(std::sqrt(43.0), 1e-12));
  CHECK_THAT(eq.samples[1], Catch::Matchers::WithinRel(2.0, 1e-12));
  CHECK_THAT(eq.samples[2], Catch::Matchers::WithinRel(std::sqrt(3.0), 1e-12));

  StressTimeSeries short_tau{0.05, {1.0}};
  CHECK_THROWS_AS(blade_equivalent_stress(sigma0, short_tau), std::invalid_argument);
}
