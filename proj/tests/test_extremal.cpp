#include <cmath>

#include "doctest.h"
#include "qudex/extremal.hpp"
#include "qudex/models.hpp"

using namespace qudex;

namespace {

ExtremalProblem qutrit_problem(double c2, double c3) {
  Matrix H = bec_hamiltonian(BecParams{0.5, -1.0, 0.7, 1.0});
  Vector c(2);
  c << c2, c3;
  return ExtremalProblem{H, build_basis(3), PurityConstants{c}};
}

}  // namespace

TEST_CASE("qubit closed form at pure constants recovers both levels") {
  double h0 = 1.0, h1 = std::sqrt(2.0), h2 = std::exp(1.0), h3 = std::acos(-1.0);
  Matrix H = qubit_hamiltonian(h0, h1, h2, h3);
  double h = std::sqrt(h1 * h1 + h2 * h2 + h3 * h3);
  auto sols = qubit_closed_form(H, 0.0);
  REQUIRE(sols.size() == 2);
  CHECK(sols[0].energy == doctest::Approx((h0 - h) / 2).epsilon(1e-12));
  CHECK(sols[1].energy == doctest::Approx((h0 + h) / 2).epsilon(1e-12));
  for (const auto& s : sols) {
    CHECK(s.residual < 1e-10);
    CHECK(s.entropy < 1e-12);
    CHECK(s.classification == SolutionClass::isolated);
    CHECK(s.lambda_c.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  // multiplier closes the gradient: Lambda = -sign * h/delta with delta = 1
  CHECK(sols[0].multipliers(0) == doctest::Approx(h).epsilon(1e-12));
  CHECK(sols[1].multipliers(0) == doctest::Approx(-h).epsilon(1e-12));
}

TEST_CASE("qubit closed form at the maximally mixed radius") {
  Matrix H = qubit_hamiltonian(1.0, 0.3, -0.2, 0.9);
  auto sols = qubit_closed_form(H, 0.25);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].classification == SolutionClass::degenerate_family);
  CHECK(sols[0].lambda_c.cwiseAbs().maxCoeff() == 0.0);
  CHECK(sols[0].energy == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(sols[0].entropy == doctest::Approx(std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("qubit solver agrees with the closed form across the radius grid") {
  Matrix H = qubit_hamiltonian(1.0, std::sqrt(2.0), std::exp(1.0), std::acos(-1.0));
  GeneratorBasis b = build_basis(2);
  for (double c2 : {0.02, 0.1, 0.2, 0.24}) {
    ExtremalProblem prob{H, b, PurityConstants{Vector::Constant(1, c2)}};
    SolveReport rep = solve_extremal(prob);
    auto closed = qubit_closed_form(H, c2);
    REQUIRE(rep.solutions.size() == closed.size());
    for (size_t k = 0; k < closed.size(); ++k) {
      CHECK(std::abs(rep.solutions[k].energy - closed[k].energy) < 1e-8);
      CHECK((rep.solutions[k].lambda_c - closed[k].lambda_c).cwiseAbs().maxCoeff() <
            1e-8);
    }
  }
}

TEST_CASE("gradient components at the fully mixed point equal h_q/2") {
  // Every constraint gradient vanishes at lambda = 0, so no multiplier choice
  // can cancel a generic objective gradient there; the residual floor is
  // max |h_q| / 2.
  ExtremalProblem prob = qutrit_problem(1.0 / 3.0, 1.0 / 27.0);
  CoefficientForm hf = expand(prob.hamiltonian, prob.basis);
  Vector r = stationarity_residual(prob, Vector::Zero(8), Vector::Zero(2));
  CHECK(r.head(8).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.5 * hf.coeffs.cwiseAbs().maxCoeff()).epsilon(1e-12));
  Vector big(2);
  big << 3.0, -7.0;
  Vector r2 = stationarity_residual(prob, Vector::Zero(8), big);
  CHECK(r2.head(8).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.5 * hf.coeffs.cwiseAbs().maxCoeff()).epsilon(1e-12));
}

TEST_CASE("qutrit pure extremals match the eigensolver") {
  ExtremalProblem prob = qutrit_problem(0.0, 0.0);
  SolveReport rep = solve_extremal(prob);
  REQUIRE(rep.solutions.size() == 3);
  CHECK(rep.expected_count == 3);
  EigenDecomposition ed = eigh(prob.hamiltonian);
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(rep.solutions[k].energy - ed.eigenvalues(k)) < 1e-8);
    CHECK(rep.solutions[k].residual <= 1e-8);
    CHECK(rep.solutions[k].entropy < 1e-6);
    CHECK(rep.solutions[k].classification == SolutionClass::isolated);
  }
}

TEST_CASE("qutrit mixed constants produce six distinct branches") {
  ExtremalProblem prob = qutrit_problem(29.0 / 100.0, 1.0 / 50.0);
  SolveReport rep = solve_extremal(prob);
  REQUIRE(rep.solutions.size() == 6);
  CHECK(rep.expected_count == 6);
  // frozen energy references for a=0.5, b=-1, c=0.7
  const double ref[6] = {-1.087057061, -0.993540532, -0.746947686,
                         -0.540061367, -0.372881573, -0.259511781};
  for (int k = 0; k < 6; ++k) {
    CHECK(rep.solutions[k].energy == doctest::Approx(ref[k]).epsilon(5e-9));
    CHECK(rep.solutions[k].residual <= 1e-8);
    CHECK(rep.solutions[k].entropy > 0.0);
  }
}

TEST_CASE("tied target spectrum splits into three branches") {
  ExtremalProblem prob = qutrit_problem(0.3125, 0.03125);  // (1/2, 1/4, 1/4)
  SolveReport rep = solve_extremal(prob);
  REQUIRE(rep.solutions.size() == 3);
  CHECK(rep.expected_count == 3);
  const double ref[3] = {-0.917002373494, -0.683211052487, -0.399786574019};
  const double s_tie = -0.5 * std::log(0.5) - 0.5 * std::log(0.25);
  for (int k = 0; k < 3; ++k) {
    CHECK(rep.solutions[k].energy == doctest::Approx(ref[k]).epsilon(5e-9));
    CHECK(rep.solutions[k].residual <= 1e-8);
    CHECK(rep.solutions[k].entropy == doctest::Approx(s_tie).epsilon(1e-6));
  }
}

TEST_CASE("maximally mixed constants collapse to the flagged identity state") {
  ExtremalProblem prob = qutrit_problem(1.0 / 3.0, 1.0 / 27.0);
  SolveReport rep = solve_extremal(prob);
  REQUIRE(rep.solutions.size() == 1);
  const ExtremalSolution& s = rep.solutions[0];
  CHECK(s.classification == SolutionClass::degenerate_family);
  CHECK(s.lambda_c.cwiseAbs().maxCoeff() == 0.0);
  // <H> at I/3 is h0/3 = 2b/3
  CHECK(s.energy == doctest::Approx(-2.0 / 3.0).epsilon(1e-13));
  CHECK(s.entropy == doctest::Approx(std::log(3.0)).epsilon(1e-13));
}

TEST_CASE("solutions arrive energy-sorted and deduplicated") {
  ExtremalProblem prob = qutrit_problem(29.0 / 100.0, 1.0 / 50.0);
  SolveReport rep = solve_extremal(prob);
  for (size_t k = 0; k + 1 < rep.solutions.size(); ++k) {
    CHECK(rep.solutions[k].energy < rep.solutions[k + 1].energy);
    double dl = (rep.solutions[k].lambda_c - rep.solutions[k + 1].lambda_c)
                    .cwiseAbs()
                    .maxCoeff();
    CHECK(dl > 1e-6);
  }
}

TEST_CASE("identical seeds reproduce identical output") {
  ExtremalProblem prob = qutrit_problem(0.0, 0.0);
  SolveReport a = solve_extremal(prob, SolveOptions{42, 0, true});
  SolveReport b = solve_extremal(prob, SolveOptions{42, 0, true});
  REQUIRE(a.solutions.size() == b.solutions.size());
  for (size_t k = 0; k < a.solutions.size(); ++k) {
    CHECK(a.solutions[k].energy == b.solutions[k].energy);
    CHECK((a.solutions[k].lambda_c - b.solutions[k].lambda_c).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("infeasible constants are rejected up front") {
  Matrix H = qubit_hamiltonian(0.0, 1.0, 0.0, 0.0);
  ExtremalProblem prob{H, build_basis(2), PurityConstants{Vector::Constant(1, 0.3)}};
  CHECK_THROWS_AS(solve_extremal(prob), std::invalid_argument);

  ExtremalProblem p3 = qutrit_problem(0.4, 0.01);
  CHECK_THROWS_AS(solve_extremal(p3), std::invalid_argument);
}

TEST_CASE("objective and constraint gradient are consistent") {
  ExtremalProblem prob = qutrit_problem(0.1, 0.01);
  GeneratorBasis& b = prob.basis;
  Vector lam = Vector::Zero(8);
  lam(6) = 0.4;
  Vector L = Vector::Zero(2);
  // with zero multipliers the objective is the plain energy
  CoefficientForm hf = expand(prob.hamiltonian, b);
  double e = hf.h0 / 3.0 + 0.5 * hf.coeffs.dot(lam);
  CHECK(objective(prob, lam, L) == doctest::Approx(e).epsilon(1e-13));

  Vector g = constraint_gradient(b, lam, 2);
  CHECK(g.size() == 8);
  CHECK_THROWS_AS(constraint_gradient(b, lam, 5), std::invalid_argument);
}
