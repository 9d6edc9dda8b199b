"""Coherence-vector spectrum extraction and entropy-energy bounds."""

try:
    from . import _qudex as _impl  # installed layout: extension inside the package
except ImportError:
    import _qudex as _impl  # build-tree layout: extension on PYTHONPATH

basis = _impl.basis
bec_hamiltonian = _impl.bec_hamiltonian
bloch_to_density = _impl.bloch_to_density
char_coeffs = _impl.char_coeffs
check_bounds = _impl.check_bounds
eigh = _impl.eigh
eq40_terms = _impl.eq40_terms
expand = _impl.expand
gibbs_like = _impl.gibbs_like
is_admissible = _impl.is_admissible
is_feasible = _impl.is_feasible
observable_bound = _impl.observable_bound
partition = _impl.partition
purity_moments = _impl.purity_moments
qubit_F_closed = _impl.qubit_F_closed
qubit_closed_form = _impl.qubit_closed_form
qubit_hamiltonian = _impl.qubit_hamiltonian
reconstruct = _impl.reconstruct
relative_entropy = _impl.relative_entropy
solve_extremal = _impl.solve_extremal
spin_matrices = _impl.spin_matrices
von_neumann_entropy = _impl.von_neumann_entropy

__all__ = [
    "basis",
    "bec_hamiltonian",
    "bloch_to_density",
    "char_coeffs",
    "check_bounds",
    "eigh",
    "eq40_terms",
    "expand",
    "gibbs_like",
    "is_admissible",
    "is_feasible",
    "observable_bound",
    "partition",
    "purity_moments",
    "qubit_F_closed",
    "qubit_closed_form",
    "qubit_hamiltonian",
    "reconstruct",
    "relative_entropy",
    "solve_extremal",
    "spin_matrices",
    "von_neumann_entropy",
]
