#include "doctest.h"

#include <cmath>

#include "lhom/ensembles.hpp"
#include "lhom/homogenize.hpp"
#include "lhom/solver.hpp"
#include "oracles.hpp"

using namespace lhom;

namespace {

SiteField meanfree_rhs(const TorusLattice& lat, std::uint64_t seed) {
  const CounterRng rng({seed, 0});
  SiteField f(lat.num_sites());
  for (Index x = 0; x < f.size(); ++x) f(x) = rng.uniform(3, x) - 0.5;
  f.array() -= f.mean();
  return f;
}

}  // namespace

TEST_CASE("solve options validation") {
  SolveOptions o;
  CHECK_NOTHROW(o.check());
  o.rel_tol = 1e-5;
  CHECK_THROWS_AS(o.check(), InvalidArgument);
  o.rel_tol = 0.0;
  CHECK_THROWS_AS(o.check(), InvalidArgument);
  o.rel_tol = 1e-10;
  CHECK(o.iteration_cap(0.25) > o.iteration_cap(1.0));
}

TEST_CASE("solve_meanfree solves the equation") {
  for (int trial = 0; trial < 6; ++trial) {
    const TorusLattice lat(1 + trial % 3, trial % 3 == 2 ? 6 : 12);
    const CoefficientField a =
        sample(EnsembleSpec::bernoulli(0.1, 1.0, 0.5), lat, {static_cast<std::uint64_t>(trial), 0});
    const SiteField f = meanfree_rhs(lat, 50 + trial);
    SolveStats st;
    const SiteField u = solve_meanfree(a, f, {}, &st);
    CHECK(std::abs(u.sum()) <= 1e-10 * u.cwiseAbs().sum());
    CHECK((apply_operator(a, u) - f).norm() <= 1e-10 * f.norm());
    CHECK(st.residual <= 1e-10);
    CHECK(st.iterations > 0);
  }
}

TEST_CASE("solve_meanfree rejects a right-hand side with nonzero mean") {
  const TorusLattice lat(2, 4);
  const CoefficientField a = CoefficientField::constant(lat, 1.0);
  CHECK_THROWS_AS(solve_meanfree(a, SiteField::Ones(lat.num_sites())), InvalidArgument);
  CHECK(solve_meanfree(a, SiteField::Zero(lat.num_sites())).norm() == 0.0);
}

TEST_CASE("an impossible iteration cap surfaces a solver error") {
  const TorusLattice lat(2, 16);
  const CoefficientField a = sample(EnsembleSpec::bernoulli(0.01, 1.0, 0.5), lat, {1, 0});
  SolveOptions o;
  o.max_iter = 1;
  try {
    solve_meanfree(a, meanfree_rhs(lat, 1), o);
    FAIL("expected SolveError");
  } catch (const SolveError& e) {
    CHECK(e.iterations() == 1);
    CHECK(e.residual() > 1e-10);
  }
}

TEST_CASE("corrector of a constant field vanishes") {
  const TorusLattice lat(2, 8);
  for (double c : {1.0, 0.4}) {
    const CoefficientField a = CoefficientField::constant(lat, c, 0.25);
    const std::vector<double> xi = {0.6, 0.8};
    const Corrector phi = solve_corrector(a, xi);
    CHECK(phi.phi.cwiseAbs().maxCoeff() == 0.0);
    CHECK(phi.residual == 0.0);
  }
}

TEST_CASE("corrector is pinned and solves the cell problem") {
  const TorusLattice lat(2, 16);
  const CoefficientField a = sample(EnsembleSpec::iid_uniform(0.2), lat, {3, 0});
  const std::vector<double> xi = {1.0, 0.0};
  const Corrector phi = solve_corrector(a, xi);
  CHECK(phi.phi(0) == 0.0);
  const EdgeField flux = a.values().cwiseProduct(corrected_gradient(a, phi));
  const SiteField div = divergence_star(lat, flux);
  CHECK(div.norm() <= 1e-9 * a.values().cwiseProduct(constant_edge_field(lat, xi)).norm());
  CHECK(phi.residual <= 1e-10);
}

TEST_CASE("corrector is linear in xi") {
  const TorusLattice lat(2, 12);
  const CoefficientField a = sample(EnsembleSpec::bernoulli(0.25, 1.0, 0.5), lat, {8, 0});
  const std::vector<double> e1 = {1.0, 0.0}, e2 = {0.0, 1.0};
  const std::vector<double> mix = {0.6, -0.8};
  const Corrector p1 = solve_corrector(a, e1), p2 = solve_corrector(a, e2);
  const Corrector pm = solve_corrector(a, mix);
  const SiteField combo = 0.6 * p1.phi - 0.8 * p2.phi;
  CHECK((pm.phi - combo).cwiseAbs().maxCoeff() <= 1e-8 * combo.cwiseAbs().maxCoeff());
}

TEST_CASE("corrector rejects |xi| > 1 and wrong dimension") {
  const TorusLattice lat(2, 4);
  const CoefficientField a = CoefficientField::constant(lat, 1.0);
  const std::vector<double> big = {1.0, 1.0};
  const std::vector<double> wrong = {1.0};
  CHECK_THROWS_AS(solve_corrector(a, big), InvalidArgument);
  CHECK_THROWS_AS(solve_corrector(a, wrong), SizeError);
}

TEST_CASE("corrector energy is bounded by the affine energy") {
  const TorusLattice lat(3, 6);
  const CoefficientField a = sample(EnsembleSpec::iid_uniform(0.1), lat, {12, 5});
  const std::vector<double> xi = {0.0, 0.0, 1.0};
  const Corrector phi = solve_corrector(a, xi);
  const double corrected = dirichlet_energy(a, corrected_gradient(a, phi));
  const double affine = dirichlet_energy(a, constant_edge_field(lat, xi));
  CHECK(corrected <= affine * (1 + 1e-12));
  CHECK(corrected >= a.lambda() * lat.num_sites() * (1 - 1e-12));
}

TEST_CASE("solves are deterministic") {
  const TorusLattice lat(2, 16);
  const CoefficientField a = sample(EnsembleSpec::bernoulli(0.25, 1.0, 0.5), lat, {2, 2});
  const std::vector<double> xi = {1.0, 0.0};
  const Corrector p = solve_corrector(a, xi);
  const Corrector q = solve_corrector(a, xi);
  CHECK(p.phi == q.phi);
  CHECK(p.iterations == q.iterations);
}

TEST_CASE("the preconditioner inverts the unit Laplacian exactly") {
  const TorusLattice lat(2, 8);
  const CoefficientField one = CoefficientField::constant(lat, 1.0);
  LaplacianPreconditioner pc(lat);
  const SiteField f = meanfree_rhs(lat, 4);
  SiteField z;
  pc.apply(f, z);
  CHECK((apply_operator(one, z) - f).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(z.sum()) <= 1e-12);

  SolveStats st;
  solve_meanfree(one, f, {}, &st);
  CHECK(st.iterations <= 2);
}

TEST_CASE("preconditioner symbol matches the Fourier oracle") {
  const int L = 6;
  const TorusLattice lat(2, L);
  LaplacianPreconditioner pc(lat);
  const auto& s = pc.symbol();
  REQUIRE(s.size() == 36);
  for (long m = 0; m < 36; ++m) {
    CHECK(s[m] == doctest::Approx(oracle::symbol(oracle::coords(m, 2, L), L)).epsilon(1e-14));
  }
}

TEST_CASE("operator condition probe") {
  const TorusLattice lat(2, 8);
  const SpectrumEstimate unit = unit_laplacian_range(lat);
  CHECK(unit.lambda_min == doctest::Approx(4 * std::pow(std::sin(M_PI / 8), 2)));
  CHECK(unit.lambda_max == doctest::Approx(8.0));

  const SpectrumEstimate one = operator_condition_probe(CoefficientField::constant(lat, 1.0));
  CHECK(one.lambda_max == doctest::Approx(unit.lambda_max).epsilon(1e-6));
  CHECK(one.lambda_min == doctest::Approx(unit.lambda_min).epsilon(1e-6));

  const CoefficientField a = sample(EnsembleSpec::bernoulli(0.25, 1.0, 0.5), lat, {6, 0});
  const SpectrumEstimate est = operator_condition_probe(a);
  CHECK(est.lambda_max <= unit.lambda_max * (1 + 1e-9));
  CHECK(est.lambda_min >= a.lambda() * unit.lambda_min * (1 - 1e-9));
  CHECK(est.lambda_min <= est.lambda_max);
}

TEST_CASE("operator spectrum scales with a constant conductance") {
  const TorusLattice lat(2, 8);
  const SpectrumEstimate one = operator_condition_probe(CoefficientField::constant(lat, 1.0));
  const SpectrumEstimate low = operator_condition_probe(CoefficientField::constant(lat, 0.25, 0.25));
  CHECK(low.lambda_min == doctest::Approx(0.25 * one.lambda_min).epsilon(1e-8));
  CHECK(low.lambda_max == doctest::Approx(0.25 * one.lambda_max).epsilon(1e-8));
}
