#include "doctest.h"

#include <cmath>
#include <numbers>

#include "lhom/coefficient.hpp"
#include "lhom/ensembles.hpp"
#include "oracles.hpp"

using namespace lhom;

namespace {

SiteField random_site_field(const TorusLattice& lat, std::uint64_t seed) {
  const CounterRng rng({seed, 0});
  SiteField u(lat.num_sites());
  for (Index x = 0; x < u.size(); ++x) u(x) = rng.uniform(7, x) * 2.0 - 1.0;
  return u;
}

EdgeField random_edge_field(const TorusLattice& lat, std::uint64_t seed) {
  const CounterRng rng({seed, 1});
  EdgeField g(lat.num_edges());
  for (Index e = 0; e < g.size(); ++e) g(e) = rng.uniform(9, e) * 2.0 - 1.0;
  return g;
}

}  // namespace

TEST_CASE("torus lattice geometry") {
  const TorusLattice lat(3, 4);
  CHECK(lat.num_sites() == 64);
  CHECK(lat.num_edges() == 192);
  for (Index x = 0; x < lat.num_sites(); ++x) {
    CHECK(lat.site_index(lat.coords(x)) == x);
    for (int i = 0; i < 3; ++i) {
      CHECK(lat.backward(lat.forward(x, i), i) == x);
    }
  }
  CHECK(lat.site_index(std::vector<int>{1, 0, 0}) == 1);
  CHECK(lat.site_index(std::vector<int>{0, 1, 0}) == 4);
  CHECK(lat.site_index(std::vector<int>{-1, 4, 5}) == 3 + 0 + 16);
  CHECK(lat.edge(lat.edge_index({5, 2})) == Edge{5, 2});
  CHECK_THROWS_AS(TorusLattice(0, 4), InvalidArgument);
  CHECK_THROWS_AS(TorusLattice(2, 1), InvalidArgument);
}

TEST_CASE("gradient of a constant vanishes") {
  const TorusLattice lat(2, 5);
  const SiteField u = SiteField::Constant(lat.num_sites(), 3.25);
  CHECK(gradient(lat, u).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gradient on a 1-D ring") {
  const TorusLattice lat(1, 3);
  SiteField u(3);
  u << 0, 1, 0;
  const EdgeField g = gradient(lat, u);
  CHECK(g(0) == 1.0);
  CHECK(g(1) == -1.0);
  CHECK(g(2) == 0.0);
}

TEST_CASE("gradient of an affine sample wraps by -L xi_i") {
  const int L = 4;
  const TorusLattice lat(2, L);
  const double xi[2] = {0.3, -0.7};
  SiteField u(lat.num_sites());
  for (Index s = 0; s < u.size(); ++s) {
    const auto x = oracle::coords(s, 2, L);
    u(s) = xi[0] * x[0] + xi[1] * x[1];
  }
  const EdgeField g = gradient(lat, u);
  // scalar loop oracle
  for (long s = 0; s < oracle::power(L, 2); ++s) {
    const auto x = oracle::coords(s, 2, L);
    for (int i = 0; i < 2; ++i) {
      const double expected = x[i] == L - 1 ? xi[i] - L * xi[i] : xi[i];
      CHECK(g(s * 2 + i) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("divergence_star examples") {
  const TorusLattice lat(2, 4);
  CHECK(divergence_star(lat, EdgeField::Zero(lat.num_edges())).cwiseAbs().maxCoeff() == 0.0);

  const SiteField spike = delta(lat, 0);
  const SiteField out = divergence_star(lat, gradient(lat, spike));
  SiteField expected = SiteField::Zero(lat.num_sites());
  expected(0) = 4.0;
  for (const auto& n : std::vector<std::vector<int>>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
    expected(lat.site_index(n)) = -1.0;
  }
  CHECK((out - expected).cwiseAbs().maxCoeff() == 0.0);

  const TorusLattice big(2, 8);
  const EdgeField g = random_edge_field(big, 3);
  CHECK(std::abs(divergence_star(big, g).sum()) <= 1e-12 * g.cwiseAbs().sum());
}

TEST_CASE("size mismatches are rejected") {
  const TorusLattice lat(2, 4);
  CHECK_THROWS_AS(gradient(lat, SiteField::Zero(5)), SizeError);
  CHECK_THROWS_AS(divergence_star(lat, EdgeField::Zero(16)), SizeError);
  const CoefficientField a = CoefficientField::constant(lat, 1.0);
  CHECK_THROWS_AS(apply_operator(a, SiteField::Zero(3)), SizeError);
  CHECK_THROWS_AS(dirichlet_energy(a, EdgeField::Zero(3)), SizeError);
}

TEST_CASE("apply_operator examples") {
  const TorusLattice lat(2, 4);
  const CoefficientField one = CoefficientField::constant(lat, 1.0);
  const SiteField spike = delta(lat, 0);
  const SiteField lap = apply_operator(one, spike);
  CHECK(lap(0) == 4.0);
  CHECK(lap(lat.site_index(std::vector<int>{1, 0})) == -1.0);
  CHECK(lap(lat.site_index(std::vector<int>{0, 3})) == -1.0);
  CHECK(lap(lat.site_index(std::vector<int>{1, 1})) == 0.0);

  const CoefficientField a = sample(EnsembleSpec::bernoulli(0.25, 1.0, 0.5), lat, {1, 0});
  CHECK(apply_operator(a, SiteField::Constant(lat.num_sites(), -2.0)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("unit operator has the Fourier eigen-relation") {
  const int L = 8;
  const TorusLattice lat(2, L);
  const CoefficientField one = CoefficientField::constant(lat, 1.0);
  for (const auto& k : std::vector<std::vector<int>>{{1, 0}, {2, 3}, {4, 4}, {7, 1}}) {
    SiteField u(lat.num_sites());
    for (Index s = 0; s < u.size(); ++s) {
      const auto x = oracle::coords(s, 2, L);
      u(s) = std::cos(2.0 * std::numbers::pi * (k[0] * x[0] + k[1] * x[1]) / L);
    }
    const double sigma = oracle::symbol(k, L);
    CHECK((apply_operator(one, u) - sigma * u).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("dirichlet_energy") {
  const TorusLattice lat(2, 6);
  const EdgeField zero = EdgeField::Zero(lat.num_edges());
  const CoefficientField a = sample(EnsembleSpec::bernoulli(0.25, 1.0, 0.5), lat, {4, 2});
  CHECK(dirichlet_energy(a, zero) == 0.0);

  const EdgeField g = random_edge_field(lat, 5);
  const CoefficientField flat = CoefficientField::constant(lat, 0.3);
  CHECK(dirichlet_energy(flat, g) == doctest::Approx(0.3 * g.squaredNorm()).epsilon(1e-14));

  const EdgeField grad = gradient(lat, random_site_field(lat, 8));
  double expected = 0.0;
  for (Index e = 0; e < grad.size(); ++e) expected += a(e) * grad(e) * grad(e);
  CHECK(dirichlet_energy(a, grad) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(dirichlet_energy(a, grad) >= a.lambda() * grad.squaredNorm());
}

TEST_CASE("summation by parts, symmetry and coercivity hold for random fields") {
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 3;
    const TorusLattice lat(d, 3 + trial % 4);
    const SiteField u = random_site_field(lat, 100 + trial);
    const SiteField v = random_site_field(lat, 200 + trial);
    const EdgeField g = random_edge_field(lat, 300 + trial);
    const CoefficientField a =
        sample(EnsembleSpec::iid_uniform(0.1), lat, {static_cast<std::uint64_t>(trial), 0});

    const double lhs = gradient(lat, u).dot(g);
    const double rhs = u.dot(divergence_star(lat, g));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));

    CHECK(std::abs(divergence_star(lat, g).sum()) <= 1e-12 * g.cwiseAbs().sum());

    const double uv = v.dot(apply_operator(a, u));
    const double vu = u.dot(apply_operator(a, v));
    CHECK(uv == doctest::Approx(vu).epsilon(1e-12).scale(1.0));

    CHECK(u.dot(apply_operator(a, u)) >= a.lambda() * gradient(lat, u).squaredNorm() * (1 - 1e-12));
  }
}

TEST_CASE("coefficient field range checks") {
  const TorusLattice lat(2, 3);
  CHECK_THROWS_AS(CoefficientField::constant(lat, 1.2, 0.5), InvalidArgument);
  CHECK_THROWS_AS(CoefficientField::constant(lat, 0.2, 0.5), InvalidArgument);
  CHECK_THROWS_AS(CoefficientField::constant(lat, 0.5, 0.0), InvalidArgument);
  CHECK_NOTHROW(CoefficientField::constant(lat, 1.0, 1.0));
}
