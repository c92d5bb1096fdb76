"""Dense complex-matrix realization of the involutive observable algebra.

Elements are immutable d x d complex matrices (2 <= d <= 64 covers every
experiment shipped here).  Hermitian elements are the observables.  All
downstream modules consume the arithmetic, spectra and norms defined here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotObservableError, NumericalError

# Tolerance policy, an order above double-precision eigensolver error.
# Scaled tolerances are applied as tau * (1 + scale of the operand).
TAU_HERM = 1e-10
TAU_SPEC = 1e-8
TAU_UNIT = 1e-10
TAU_DIAG = 1e-9
TAU_NORM = 1e-9

# Exact-degeneracy threshold: only eigenvalues this close get their basis
# canonically re-mixed (keeps U*AU diagonal within TAU_DIAG).
_TAU_MIX = 1e-12

MAX_DIM = 64


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Immutable d x d complex matrix; Hermitian instances are observables."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=np.complex128, order="C")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] != self.dim:
            raise DimensionError(f"dim {self.dim} does not match shape {m.shape}")
        if not (1 <= self.dim <= MAX_DIM):
            raise DimensionError(f"dim must be in [1, {MAX_DIM}], got {self.dim}")
        if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
            raise ValueError("matrix entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(self.dim, self.entries.conj().T)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return add(self, other)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return add(self, scale(-1.0, other))

    def __neg__(self) -> "AlgebraElement":
        return scale(-1.0, self)

    def __matmul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)

    def __mul__(self, c: complex) -> "AlgebraElement":
        return scale(c, self)

    __rmul__ = __mul__

    def __repr__(self):
        return f"AlgebraElement(dim={self.dim})"


def element(entries) -> AlgebraElement:
    """Wrap an array-like square matrix as an algebra element."""
    m = np.asarray(entries, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return AlgebraElement(m.shape[0], m)


def identity(dim: int) -> AlgebraElement:
    return AlgebraElement(dim, np.eye(dim, dtype=np.complex128))


def zero(dim: int) -> AlgebraElement:
    return AlgebraElement(dim, np.zeros((dim, dim), dtype=np.complex128))


def _check_same_dim(r: AlgebraElement, s: AlgebraElement):
    if r.dim != s.dim:
        raise DimensionError(f"dimension mismatch: {r.dim} vs {s.dim}")


def add(r: AlgebraElement, s: AlgebraElement) -> AlgebraElement:
    _check_same_dim(r, s)
    return AlgebraElement(r.dim, r.entries + s.entries)


def multiply(r: AlgebraElement, s: AlgebraElement) -> AlgebraElement:
    _check_same_dim(r, s)
    return AlgebraElement(r.dim, r.entries @ s.entries)


def scale(c: complex, r: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(r.dim, complex(c) * r.entries)


def adjoint(r: AlgebraElement) -> AlgebraElement:
    return r.adjoint()


def is_hermitian(r: AlgebraElement, tol: float | None = None) -> bool:
    """True iff the max-entry deviation |R - R*| is within ``tol``.

    Default tolerance is TAU_HERM * (1 + max |entry|).
    """
    if tol is None:
        tol = TAU_HERM * (1.0 + float(np.max(np.abs(r.entries), initial=0.0)))
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    return float(np.max(np.abs(r.entries - r.entries.conj().T), initial=0.0)) <= tol


def operator_norm(r: AlgebraElement) -> float:
    """Largest singular value, computed as sqrt(lambda_max(R*R))."""
    gram = r.entries.conj().T @ r.entries
    try:
        lams = np.linalg.eigvalsh(gram)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    return float(np.sqrt(max(float(lams[-1]), 0.0)))


def commutator_norm(a: AlgebraElement, b: AlgebraElement) -> float:
    """Operator norm of AB - BA."""
    _check_same_dim(a, b)
    return operator_norm(AlgebraElement(a.dim, a.entries @ b.entries - b.entries @ a.entries))


def _phase_fix(col: np.ndarray) -> np.ndarray:
    for x in col:
        if abs(x) > 1e-8:
            return col * (x.conjugate() / abs(x))
    return col


def _canonical_subspace_basis(block: np.ndarray) -> np.ndarray:
    """Canonical orthonormal basis of span(block columns).

    Column-pivoted modified Gram-Schmidt on the subspace projector, so the
    result depends only on the subspace, not on the eigensolver's arbitrary
    choice of vectors inside it.
    """
    d, r = block.shape
    proj = block @ block.conj().T
    cols = proj.copy()
    basis = np.zeros((d, r), dtype=np.complex128)
    for step in range(r):
        norms = np.linalg.norm(cols, axis=0)
        j = int(np.argmax(norms))
        if norms[j] < 1e-8:
            raise NumericalError("projector rank deficient during canonicalization")
        v = cols[:, j] / norms[j]
        for _ in range(2):
            v = v - basis[:, :step] @ (basis[:, :step].conj().T @ v)
            v = v / np.linalg.norm(v)
        basis[:, step] = v
        cols -= np.outer(v, v.conj() @ cols)
    return basis


def _order_key(col: np.ndarray):
    # Descending lexicographic by rounded component magnitude.
    return tuple(-np.round(np.abs(col), 8))


def _canonicalize_columns(basis: np.ndarray) -> np.ndarray:
    fixed = np.column_stack([_phase_fix(basis[:, j]) for j in range(basis.shape[1])])
    order = sorted(range(fixed.shape[1]), key=lambda j: _order_key(fixed[:, j]))
    return fixed[:, order]


def _cluster_bounds(values: np.ndarray, tol: float) -> list[tuple[int, int]]:
    """[start, stop) runs of ascending ``values`` with internal gaps <= tol."""
    bounds = []
    start = 0
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > tol:
            bounds.append((start, i))
            start = i
    bounds.append((start, len(values)))
    return bounds


def eigenbasis(a: AlgebraElement) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic eigendecomposition of a Hermitian element.

    Returns (U, lam) with eigenvalues ascending and U unitary.  Phases are
    fixed (first significant component real positive) and exactly degenerate
    eigenspaces get a canonical basis, so repeated calls agree bitwise.
    """
    if not is_hermitian(a):
        raise NotObservableError("eigenbasis requires a Hermitian element")
    herm = 0.5 * (a.entries + a.entries.conj().T)
    try:
        lam, vecs = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    scale_ = 1.0 + float(np.max(np.abs(lam), initial=0.0))
    out = np.array(vecs, dtype=np.complex128)
    for start, stop in _cluster_bounds(lam, _TAU_MIX * scale_):
        if stop - start > 1:
            out[:, start:stop] = _canonical_subspace_basis(out[:, start:stop])
        out[:, start:stop] = _canonicalize_columns(out[:, start:stop])
    return out, lam


@dataclass(frozen=True)
class Spectrum:
    """Clustered eigenvalues of an observable: ascending values + multiplicities."""

    values: np.ndarray
    multiplicities: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        object.__setattr__(
            self, "multiplicities", np.asarray(self.multiplicities, dtype=np.int64)
        )

    def contains(self, x: float, tol: float) -> bool:
        return bool(np.any(np.abs(self.values - x) <= tol))


def spectrum(a: AlgebraElement) -> Spectrum:
    """Spectrum of a Hermitian element, degeneracy-clustered at TAU_SPEC."""
    _, lam = eigenbasis(a)
    scale_ = 1.0 + float(np.max(np.abs(lam), initial=0.0))
    values = []
    mults = []
    for start, stop in _cluster_bounds(lam, TAU_SPEC * scale_):
        values.append(float(np.mean(lam[start:stop])))
        mults.append(stop - start)
    return Spectrum(np.array(values), np.array(mults, dtype=np.int64))


@dataclass(frozen=True)
class Postulate1Report:
    """Certificate for the square-root and faithfulness axioms of one element."""

    root: AlgebraElement
    residual: float
    tol: float
    root_spectrum_nonnegative: bool
    faithfulness_verified: bool

    @property
    def passed(self) -> bool:
        return (
            self.residual <= self.tol
            and self.root_spectrum_nonnegative
            and self.faithfulness_verified
        )


def verify_postulate1(r: AlgebraElement, tol: float = 1e-9) -> Postulate1Report:
    """Certify that R*R has a Hermitian (positive) square root A with
    ||A^2 - R*R|| <= tol, and that ||R*R|| small forces ||R|| small.
    """
    gram = r.entries.conj().T @ r.entries
    gram_el = AlgebraElement(r.dim, gram)
    u, lam = eigenbasis(gram_el)
    clamped = np.where(lam < 0.0, 0.0, lam)
    root = AlgebraElement(r.dim, (u * np.sqrt(clamped)) @ u.conj().T)
    residual = operator_norm(
        AlgebraElement(r.dim, root.entries @ root.entries - gram)
    )
    # For matrices ||R||^2 = ||R*R||, so ||R*R|| <= t gives ||R|| <= sqrt(d t)
    # with room to spare; checked numerically rather than assumed.
    norm_rr = operator_norm(gram_el)
    faithful = operator_norm(r) ** 2 <= r.dim * max(norm_rr, tol)
    return Postulate1Report(
        root=root,
        residual=residual,
        tol=tol,
        root_spectrum_nonnegative=bool(np.all(clamped >= 0.0)),
        faithfulness_verified=bool(faithful),
    )
