"""Sparse ladder, number, and transfer operators for the deformed d-mode
oscillator algebra.

The algebra is generated by a_i, a_i(dagger), N_i subject to

    [a_i, a_i+] = 1 + kappa*(N_1 + ... + N_d + N_i),
    [N_i, a_j]  = -delta_ij a_j,        [N_i, a_j+] = +delta_ij a_j+,
    [a_i, a_j]  = [a_i+, a_j+] = 0      (i != j),

closed for i != j by grade-preserving transfer generators (:func:`x_op`).
On the number eigenbasis N_i carries the shifted eigenvalue n_i + nu, and
annihilation of the ground state forces nu = 1 - 1/kappa.  The squared
lowering amplitude then factorizes,

    f_i^2(n) = (sum(n) + d*nu) * (kappa*(n_i + nu) + 1 - kappa)
             = (sum(n) + d*nu) * kappa*n_i,

because kappa*(n_i + nu) + 1 - kappa collapses exactly to kappa*n_i at
nu = 1 - 1/kappa (and kappa*(n_i + nu) + 1 to kappa*(n_i + 1)).  The
collapsed factors are what the builders evaluate: states with n_i = 0 then
annihilate exactly, and adjoint-paired entries share bit-identical
radicands.

For kappa below d/(d+1) some radicands turn negative and the representation
stops being unitary.  Builders refuse such parameters by default; with
``force=True`` they store the principal square root (imaginary on negative
radicands) and flag the operator invalid.  The defining relations remain
machine-checkable in that mode for kappa > 0 because the sign-carrying
factor is shared between the two roots of every product the relations form.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sparse

from .errors import DomainError, NonUnitaryRepresentationError, SingularParameterError
from .fock import DEFAULT_STATE_CAP, FockBasis, MultiIndex, enumerate_basis

__all__ = [
    "AlgebraParams",
    "make_params",
    "structure_f_squared",
    "StructureFunction",
    "solve_recurrence",
    "factorizing_gauge",
    "zero_gauge",
    "SparseOperator",
    "annihilator",
    "creator",
    "number_op",
    "x_op",
    "quadratures",
]


@dataclass(frozen=True)
class AlgebraParams:
    """Deformation parameters: real kappa != 0, mode count d, and the derived
    number-operator shift nu = 1 - 1/kappa."""

    kappa: float
    d: int
    nu: float = field(init=False)

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"mode count must be >= 1, got {self.d}")
        if self.kappa == 0:
            raise SingularParameterError(
                "kappa = 0 leaves the number-operator shift nu = 1 - 1/kappa undefined; "
                "closed-form energies at kappa = 0 are available without AlgebraParams"
            )
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "nu", 1.0 - 1.0 / self.kappa)


def make_params(kappa: float, d: int) -> AlgebraParams:
    """Validate (kappa, d) and attach the derived shift nu = 1 - 1/kappa."""
    return AlgebraParams(kappa, d)


def _check_mode(params: AlgebraParams, basis: FockBasis, i: int) -> None:
    if basis.d != params.d:
        raise DomainError(f"basis has d={basis.d} modes but params carry d={params.d}")
    if not 0 <= i < params.d:
        raise DomainError(f"mode index {i} out of range [0, {params.d})")


def structure_f_squared(params: AlgebraParams, i: int, m: MultiIndex) -> float:
    """Squared lowering amplitude f_i^2(m) = (sum(m) + d*nu) * kappa*m_i.

    Exactly zero whenever m_i = 0; may be negative for kappa < d/(d+1),
    in which case the representation is non-unitary (the sign is audited
    by the verification module).
    """
    if not 0 <= i < params.d:
        raise DomainError(f"mode index {i} out of range [0, {params.d})")
    return (sum(m) + params.d * params.nu) * (params.kappa * m[i])


# ---------------------------------------------------------------------------
# structure-function recurrence


def factorizing_gauge(kappa: float) -> Callable[[int, MultiIndex], float]:
    """Additive gauge g_i(rest) = (1 - kappa) * sum(rest_k + nu).

    This is the unique choice under which the general solution of the
    structure-function recurrence factorizes into
    (sum(n) + d*nu) * kappa*n_i, i.e. f_i^2 vanishes on the n_i = 0 slice
    and the table reproduces :func:`structure_f_squared`.
    """
    if kappa == 0:
        raise SingularParameterError("the factorizing gauge needs nu = 1 - 1/kappa, so kappa != 0")
    nu = 1.0 - 1.0 / kappa
    scale = 1.0 - kappa

    def gauge(i: int, rest: MultiIndex) -> float:
        return scale * sum(x + nu for x in rest)

    return gauge


def zero_gauge(i: int, rest: MultiIndex) -> float:
    """The trivial gauge g_i = 0."""
    return 0.0


@dataclass(frozen=True)
class StructureFunction:
    """Squared ladder amplitudes tabulated mode by mode over a truncation.

    ``values`` maps (mode, occupation tuple) to f_i^2; ``gauge`` records the
    additive functions g_i the table was built with.
    """

    kappa: float
    d: int
    nu: float
    n_max: int
    values: dict[tuple[int, MultiIndex], float] = field(repr=False)
    gauge: Callable[[int, MultiIndex], float] = field(repr=False, compare=False)

    def __call__(self, i: int, m: MultiIndex) -> float:
        return self.values[(i, tuple(m))]

    def max_recurrence_residual(self) -> float:
        """Largest violation of the defining step

            f_i^2(n + e_i) - f_i^2(n) = 1 + kappa*(2*(n_i+nu) + sum_{k!=i}(n_k+nu))

        over every tabulated pair, relative to max(1, |step|).
        """
        worst = 0.0
        for (i, state), value in self.values.items():
            lifted = state[:i] + (state[i] + 1,) + state[i + 1 :]
            upper = self.values.get((i, lifted))
            if upper is None:
                continue
            rest = sum(x + self.nu for k, x in enumerate(state) if k != i)
            step = 1.0 + self.kappa * (2.0 * (state[i] + self.nu) + rest)
            residual = abs(upper - value - step) / max(1.0, abs(step))
            worst = max(worst, residual)
        return worst


def solve_recurrence(
    kappa: float,
    d: int,
    n_max: int,
    gauge: Callable[[int, MultiIndex], float] | None = None,
) -> StructureFunction:
    """Tabulate f_i^2 by iterating the defining recurrence grade by grade.

    The n_i = 0 slice carries the boundary value of the general solution,

        kappa*nu^2 + kappa*nu*R + (1 - kappa)*nu + g_i(rest),

    with R the sum of the complementary shifted occupations, and successive
    n_i values add the recurrence step.  ``gauge`` supplies g_i as a
    callable (mode, complementary occupations) -> float; the default is the
    factorizing gauge.  Iterating the recurrence rather than evaluating the
    closed form keeps this an independent route against
    :func:`structure_f_squared`.
    """
    if kappa == 0:
        raise SingularParameterError("the recurrence coefficients need nu = 1 - 1/kappa, so kappa != 0")
    kappa = float(kappa)
    nu = 1.0 - 1.0 / kappa
    if gauge is None:
        gauge = factorizing_gauge(kappa)
    basis = enumerate_basis(d, n_max)
    values: dict[tuple[int, MultiIndex], float] = {}
    for i in range(d):
        for state in basis.states:  # graded order: state - e_i precedes state
            rest = state[:i] + state[i + 1 :]
            shifted_rest = sum(x + nu for x in rest)
            if state[i] == 0:
                values[(i, state)] = (
                    kappa * nu * nu + kappa * nu * shifted_rest + (1.0 - kappa) * nu + gauge(i, rest)
                )
            else:
                lower = state[:i] + (state[i] - 1,) + state[i + 1 :]
                step = 1.0 + kappa * (2.0 * (state[i] - 1 + nu) + shifted_rest)
                values[(i, state)] = values[(i, lower)] + step
    return StructureFunction(kappa=kappa, d=d, nu=nu, n_max=n_max, values=values, gauge=gauge)


# ---------------------------------------------------------------------------
# sparse operator carrier


def _combine_shift_add(a: int | None, b: int | None) -> int | None:
    return a if a == b else None


def _combine_shift_mul(a: int | None, b: int | None) -> int | None:
    if a is None or b is None:
        return None
    return a + b


@dataclass(frozen=True)
class SparseOperator:
    """A complex sparse matrix over a Fock basis, tagged with its grade shift.

    ``quanta_shift`` is the change in total quanta the operator effects:
    every stored entry connects a column state of total T to a row state of
    total T + quanta_shift.  None marks a mixed-shift combination (for
    example a quadrature, which both raises and lowers).  ``invalid`` marks
    matrices built by force through a negative squared amplitude; they store
    principal square roots and belong to a non-unitary representation.
    """

    dim: int
    matrix: sparse.csr_array = field(repr=False)
    quanta_shift: int | None
    invalid: bool = False

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_entries(
        cls,
        dim: int,
        entries,
        quanta_shift: int | None,
        invalid: bool = False,
    ) -> "SparseOperator":
        """Build from an iterable of (row, col, value) triplets."""
        entries = list(entries)
        if entries:
            rows, cols, vals = zip(*entries)
        else:
            rows, cols, vals = (), (), ()
        mat = sparse.coo_array(
            (np.asarray(vals, dtype=complex), (np.asarray(rows, dtype=int), np.asarray(cols, dtype=int))),
            shape=(dim, dim),
        ).tocsr()
        mat.sum_duplicates()
        return cls(dim=dim, matrix=mat, quanta_shift=quanta_shift, invalid=invalid)

    @classmethod
    def identity(cls, dim: int) -> "SparseOperator":
        return cls(dim=dim, matrix=sparse.csr_array(sparse.eye(dim, dtype=complex)), quanta_shift=0)

    @classmethod
    def zeros(cls, dim: int) -> "SparseOperator":
        return cls(dim=dim, matrix=sparse.csr_array((dim, dim), dtype=complex), quanta_shift=0)

    # -- algebra -----------------------------------------------------------

    def _require_same_dim(self, other: "SparseOperator") -> None:
        if self.dim != other.dim:
            raise DomainError(f"operator dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        self._require_same_dim(other)
        return SparseOperator(
            dim=self.dim,
            matrix=sparse.csr_array(self.matrix + other.matrix),
            quanta_shift=_combine_shift_add(self.quanta_shift, other.quanta_shift),
            invalid=self.invalid or other.invalid,
        )

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        self._require_same_dim(other)
        return SparseOperator(
            dim=self.dim,
            matrix=sparse.csr_array(self.matrix - other.matrix),
            quanta_shift=_combine_shift_add(self.quanta_shift, other.quanta_shift),
            invalid=self.invalid or other.invalid,
        )

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        self._require_same_dim(other)
        return SparseOperator(
            dim=self.dim,
            matrix=sparse.csr_array(self.matrix @ other.matrix),
            quanta_shift=_combine_shift_mul(self.quanta_shift, other.quanta_shift),
            invalid=self.invalid or other.invalid,
        )

    def __mul__(self, scalar) -> "SparseOperator":
        return SparseOperator(
            dim=self.dim,
            matrix=sparse.csr_array(self.matrix * complex(scalar)),
            quanta_shift=self.quanta_shift,
            invalid=self.invalid,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "SparseOperator":
        return self * -1.0

    def adjoint(self) -> "SparseOperator":
        """Conjugate transpose; the grade shift flips sign."""
        shift = None if self.quanta_shift is None else -self.quanta_shift
        return SparseOperator(
            dim=self.dim,
            matrix=sparse.csr_array(self.matrix.conj().T.tocsr()),
            quanta_shift=shift,
            invalid=self.invalid,
        )

    # -- inspection --------------------------------------------------------

    def max_abs(self) -> float:
        """Largest entry magnitude (0 for an empty matrix)."""
        if self.matrix.nnz == 0:
            return 0.0
        return float(np.abs(self.matrix.data).max())

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal()

    def entries(self) -> list[tuple[int, int, complex]]:
        """Stored nonzero entries as (row, col, value), sorted by (row, col)."""
        coo = sparse.coo_array(self.matrix)
        triplets = [
            (int(r), int(c), complex(v))
            for r, c, v in zip(coo.row, coo.col, coo.data)
            if v != 0
        ]
        triplets.sort(key=lambda t: (t[0], t[1]))
        return triplets

    def pruned(self, threshold: float) -> "SparseOperator":
        """Drop entries with magnitude strictly below ``threshold``."""
        coo = sparse.coo_array(self.matrix)
        keep = np.abs(coo.data) >= threshold
        mat = sparse.coo_array(
            (coo.data[keep], (coo.row[keep], coo.col[keep])), shape=self.matrix.shape
        ).tocsr()
        return SparseOperator(
            dim=self.dim, matrix=mat, quanta_shift=self.quanta_shift, invalid=self.invalid
        )

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


# ---------------------------------------------------------------------------
# operator builders


def _principal_sqrt(radicand: float) -> complex:
    if radicand >= 0.0:
        return complex(math.sqrt(radicand))
    return 1j * math.sqrt(-radicand)


def annihilator(params: AlgebraParams, basis: FockBasis, i: int, *, force: bool = False) -> SparseOperator:
    """Lowering operator for mode i: sqrt(f_i^2(n)) from |n> to |n - e_i>.

    Columns with n_i = 0 are zero.  A negative radicand anywhere raises
    NonUnitaryRepresentationError unless ``force`` is set, in which case the
    principal square root is stored and the operator is flagged invalid.
    """
    _check_mode(params, basis, i)
    dnu = params.d * params.nu
    entries = []
    offending = []
    for col, state in enumerate(basis.states):
        n_i = state[i]
        if n_i == 0:
            continue
        radicand = (sum(state) + dnu) * (params.kappa * n_i)
        if radicand < 0.0:
            offending.append((i, state, radicand))
        row = basis.index_of[state[:i] + (n_i - 1,) + state[i + 1 :]]
        entries.append((row, col, _principal_sqrt(radicand)))
    if offending and not force:
        raise NonUnitaryRepresentationError(params.kappa, params.d, offending)
    return SparseOperator.from_entries(len(basis), entries, -1, invalid=bool(offending))


def creator(params: AlgebraParams, basis: FockBasis, i: int, *, force: bool = False) -> SparseOperator:
    """Raising operator for mode i: sqrt((sum(n)+d*nu+1) * kappa*(n_i+1)) from
    |n> to |n + e_i>.

    Raises that would leave the truncation are dropped (a boundary effect;
    relation checks restrict to the interior).  On the unitary parameter
    range this equals adjoint(annihilator) entry for entry.
    """
    _check_mode(params, basis, i)
    dnu = params.d * params.nu
    entries = []
    offending = []
    for col, state in enumerate(basis.states):
        target = state[:i] + (state[i] + 1,) + state[i + 1 :]
        row = basis.index_of.get(target)
        if row is None:
            continue
        # sum(target) is the integer sum(state) + 1, so the radicand is
        # bit-identical to the annihilator's at the adjoint-paired entry.
        radicand = (sum(target) + dnu) * (params.kappa * (state[i] + 1))
        if radicand < 0.0:
            offending.append((i, state, radicand))
        entries.append((row, col, _principal_sqrt(radicand)))
    if offending and not force:
        raise NonUnitaryRepresentationError(params.kappa, params.d, offending)
    return SparseOperator.from_entries(len(basis), entries, +1, invalid=bool(offending))


def number_op(params: AlgebraParams, basis: FockBasis, i: int) -> SparseOperator:
    """Number operator for mode i: diagonal with eigenvalue n_i + nu."""
    _check_mode(params, basis, i)
    entries = [(q, q, state[i] + params.nu) for q, state in enumerate(basis.states)]
    return SparseOperator.from_entries(len(basis), entries, 0)


def x_op(params: AlgebraParams, basis: FockBasis, i: int, j: int) -> SparseOperator:
    """Transfer generator moving one quantum from mode j to mode i.

    Maps |n> to sqrt(kappa*(n_i+1) * kappa*n_j) |n + e_i - e_j> (the factors
    are kappa*(n_i+nu)+1 and kappa*(n_j+nu)+1-kappa in unreduced form) and
    is zero on columns with n_j = 0.  Grade-preserving, and real for every
    real kappa since the radicand carries kappa squared.
    """
    _check_mode(params, basis, i)
    _check_mode(params, basis, j)
    if i == j:
        raise DomainError("transfer generator needs two distinct modes")
    entries = []
    for col, state in enumerate(basis.states):
        if state[j] == 0:
            continue
        amp = math.sqrt((params.kappa * (state[i] + 1)) * (params.kappa * state[j]))
        lifted = list(state)
        lifted[i] += 1
        lifted[j] -= 1
        entries.append((basis.index_of[tuple(lifted)], col, amp))
    return SparseOperator.from_entries(len(basis), entries, 0)


def quadratures(
    params: AlgebraParams, basis: FockBasis, i: int, *, force: bool = False
) -> tuple[SparseOperator, SparseOperator]:
    """Hermitian quadrature pair for mode i.

    Convention: X_i = (a_i + a_i+)/2 and P_i = (a_i - a_i+)/(2j).  The
    normalization is fixed by requiring X_i^2 + P_i^2 = (a_i a_i+ + a_i+ a_i)/2,
    the combination the deformed harmonic Hamiltonian is built from.
    """
    low = annihilator(params, basis, i, force=force)
    high = creator(params, basis, i, force=force)
    x_quad = 0.5 * (low + high)
    p_quad = -0.5j * (low - high)
    return x_quad, p_quad
