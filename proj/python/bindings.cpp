#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qudex/density.hpp"
#include "qudex/extremal.hpp"
#include "qudex/inequalities.hpp"
#include "qudex/matrix.hpp"
#include "qudex/models.hpp"
#include "qudex/su_basis.hpp"

namespace py = pybind11;
using namespace qudex;

namespace {

py::dict solution_dict(const ExtremalSolution& s) {
  py::dict d;
  d["lambda"] = s.lambda_c;
  d["multipliers"] = s.multipliers;
  d["energy"] = s.energy;
  d["residual"] = s.residual;
  d["entropy"] = s.entropy;
  d["classification"] = s.classification == SolutionClass::isolated
                            ? "isolated"
                            : "degenerate_family";
  return d;
}

py::dict report_dict(const InequalityReport& r) {
  py::dict d;
  d["energy"] = r.energy;
  d["entropy"] = r.entropy;
  d["bound"] = r.bound;
  d["slack"] = r.slack;
  d["diff_bound"] = r.diff_bound;
  d["diff_slack"] = r.diff_slack;
  d["eq40_lhs"] = r.eq40_lhs;
  d["eq40_rhs"] = r.eq40_rhs;
  d["passes"] = r.passes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qudex, m) {
  m.doc() = "Coherence-vector spectrum extraction and entropy-energy bounds";

  m.def("basis", [](int d) {
    GeneratorBasis b = build_basis(d);
    return b.generators;
  },
      py::arg("dim"),
      "Orthogonal traceless Hermitian generators in symmetric, antisymmetric, "
      "diagonal order; Tr(g_a g_b) = 2 delta_ab.");

  m.def("expand", [](const Matrix& M) {
    GeneratorBasis b = build_basis(static_cast<int>(M.rows()));
    CoefficientForm cf = expand(M, b);
    return py::make_tuple(cf.h0, cf.coeffs);
  },
      py::arg("matrix"),
      "Return (trace, coefficient vector) of a Hermitian matrix in the "
      "generator basis.");

  m.def("reconstruct", [](double h0, const Vector& coeffs, int d) {
    GeneratorBasis b = build_basis(d);
    return reconstruct(CoefficientForm{h0, coeffs}, b);
  },
      py::arg("h0"), py::arg("coeffs"), py::arg("dim"));

  m.def("bloch_to_density", [](const Vector& lam, int d) {
    return bloch_to_density(lam, build_basis(d));
  },
      py::arg("lam"), py::arg("dim"),
      "Unit-trace matrix I/d + coefficients/2 . generators (positivity not "
      "enforced).");

  m.def("eigh", [](const Matrix& M) {
    EigenDecomposition ed = eigh(M);
    return py::make_tuple(ed.eigenvalues, ed.eigenvectors);
  },
      py::arg("matrix"),
      "Ascending eigenvalues and orthonormal eigenvectors of a Hermitian "
      "matrix.");

  m.def("char_coeffs", &char_coeffs, py::arg("rho"),
        "Characteristic-polynomial coefficients a_2 .. a_d via trace powers.");
  m.def("purity_moments", &purity_moments, py::arg("rho"), py::arg("n_max"),
        "Tr rho^n for n = 1 .. n_max.");
  m.def("is_admissible", &is_admissible, py::arg("rho"));

  m.def("is_feasible", [](const Vector& c, int d) {
    FeasibilityResult r = is_feasible(PurityConstants{c}, d, build_basis(d));
    py::dict out;
    out["feasible"] = r.feasible;
    out["spectrum"] = r.spectrum;
    out["witness_lambda"] = r.witness.lambda;
    return out;
  },
      py::arg("constants"), py::arg("dim"),
      "Whether constants a_2 .. a_d come from a density matrix; includes the "
      "spectrum and a diagonal witness when they do.");

  m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"));
  m.def("relative_entropy", &relative_entropy, py::arg("rho"), py::arg("sigma"));

  m.def("solve_extremal", [](const Matrix& H, const Vector& constants,
                             uint64_t seed) {
    const int d = static_cast<int>(H.rows());
    ExtremalProblem prob{H, build_basis(d), PurityConstants{constants}};
    SolveOptions opt;
    opt.seed = seed;
    SolveReport rep = solve_extremal(prob, opt);
    py::list sols;
    for (const auto& s : rep.solutions) sols.append(solution_dict(s));
    py::dict out;
    out["solutions"] = sols;
    out["expected_count"] = rep.expected_count;
    out["starts_used"] = rep.starts_used;
    out["best_residual"] = rep.best_residual;
    return out;
  },
      py::arg("hamiltonian"), py::arg("constants"), py::arg("seed") = 1,
      "All stationary points of the energy over states with the given "
      "characteristic constants.");

  m.def("qubit_closed_form", [](const Matrix& H, double c2) {
    py::list out;
    for (const auto& s : qubit_closed_form(H, c2)) out.append(solution_dict(s));
    return out;
  },
      py::arg("hamiltonian"), py::arg("c2"));

  m.def("gibbs_like", &gibbs_like, py::arg("hamiltonian"),
        "exp(H) / Tr exp(H).");
  m.def("partition", &partition, py::arg("hamiltonian"), py::arg("beta"),
        "Tr exp(-beta H).");
  m.def("check_bounds", [](const Matrix& rho, const Matrix& H) {
    return report_dict(check_bounds(rho, H));
  },
      py::arg("rho"), py::arg("hamiltonian"),
      "Entropy-energy inequality report for one state/Hamiltonian pair.");
  m.def("eq40_terms", &eq40_terms, py::arg("rho"), py::arg("hamiltonian"));
  m.def("qubit_F_closed", &qubit_F_closed, py::arg("h"), py::arg("delta"));
  m.def("observable_bound", &observable_bound, py::arg("rho"),
        py::arg("observable"),
        "ln Tr exp(A) - <A> - S(rho), nonnegative for admissible states.");

  m.def("qubit_hamiltonian", &qubit_hamiltonian, py::arg("h0"), py::arg("h1"),
        py::arg("h2"), py::arg("h3"));
  m.def("spin_matrices", [](double j) {
    SpinMatrices s = spin_matrices(j);
    return py::make_tuple(s.Jx, s.Jy, s.Jz);
  },
      py::arg("j"));
  m.def("bec_hamiltonian", [](double a, double b, double c, double j) {
    return bec_hamiltonian(BecParams{a, b, c, j});
  },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("j") = 1.0,
      "a Jz + b Jz^2 + c Jx for a spin-j system.");
}
