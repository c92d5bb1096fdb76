"""Measurement contexts: maximal commutative subalgebras as ordered bases.

A context is an ordered orthonormal basis (the columns of a unitary U); the
subalgebra it carries is "all matrices diagonal in U", and a character is the
selection of one basis index.  Degenerate observables belong to many maximal
contexts; ``context_from_observable`` returns one canonical choice and
``joint_context`` lets callers realize any other.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .algebra import (
    TAU_DIAG,
    TAU_SPEC,
    TAU_UNIT,
    AlgebraElement,
    _canonical_subspace_basis,
    _canonicalize_columns,
    _cluster_bounds,
)
from .errors import (
    DimensionError,
    IncompatibleObservablesError,
    NotInContextError,
    NotObservableError,
    NumericalError,
)

# Default membership tolerance: above eigensolver noise, below model gaps.
MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Context:
    """Ordered orthonormal basis with a canonical fingerprint.

    ``id`` is the hex digest of the basis rounded to 1e-8; ``key`` is the
    64-bit stream key derived from the same digest, used by the samplers.
    """

    dim: int
    basis: np.ndarray
    id: str = field(init=False)
    key: int = field(init=False)

    def __post_init__(self):
        u = np.array(self.basis, dtype=np.complex128)
        if u.ndim != 2 or u.shape != (self.dim, self.dim):
            raise DimensionError(f"basis must be {self.dim}x{self.dim}, got {u.shape}")
        gram = u.conj().T @ u
        if float(np.max(np.abs(gram - np.eye(self.dim)))) > 10 * TAU_UNIT:
            raise ValueError("basis columns are not orthonormal")
        u.setflags(write=False)
        object.__setattr__(self, "basis", u)
        digest = _fingerprint(u)
        object.__setattr__(self, "id", digest)
        object.__setattr__(self, "key", int(digest[:16], 16))

    def __eq__(self, other):
        return isinstance(other, Context) and self.id == other.id

    def __hash__(self):
        return hash(self.id)

    def __repr__(self):
        return f"Context(dim={self.dim}, id={self.id[:12]}...)"


def _fingerprint(u: np.ndarray) -> str:
    # Round to the 1e-8 grid and kill negative zeros so that equal bases
    # fingerprint equally regardless of sign-of-zero noise.
    re = np.round(u.real, 8) + 0.0
    im = np.round(u.imag, 8) + 0.0
    h = hashlib.sha256()
    h.update(struct.pack("<q", u.shape[0]))
    h.update(np.ascontiguousarray(re).tobytes())
    h.update(np.ascontiguousarray(im).tobytes())
    return h.hexdigest()


def context_from_basis(u) -> Context:
    """Context from an explicit unitary basis (columns = ordered basis)."""
    u = np.asarray(u, dtype=np.complex128)
    return Context(u.shape[0], u)


def computational_context(dim: int) -> Context:
    return Context(dim, np.eye(dim, dtype=np.complex128))


def context_from_observable(a: AlgebraElement) -> Context:
    """Canonical context in which ``a`` is diagonal.

    Nondegenerate observables fix the context up to phases (fixed
    deterministically); degenerate eigenspaces are completed canonically.
    """
    u, _ = algebra.eigenbasis(a)
    return Context(a.dim, u)


def contains(ctx: Context, a: AlgebraElement, tol: float = MEMBERSHIP_TOL) -> bool:
    """True iff ``a`` is diagonal in ``ctx``: off-diagonal Frobenius mass of
    U*AU within tol * (1 + ||a||)."""
    if a.dim != ctx.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs context {ctx.dim}")
    rotated = ctx.basis.conj().T @ a.entries @ ctx.basis
    off = rotated - np.diag(np.diag(rotated))
    return float(np.linalg.norm(off)) <= tol * (1.0 + algebra.operator_norm(a))


def compatible(a: AlgebraElement, b: AlgebraElement, tol: float = MEMBERSHIP_TOL) -> bool:
    """True iff the observables commute within scaled tolerance."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    bound = tol * (1.0 + algebra.operator_norm(a)) * (1.0 + algebra.operator_norm(b))
    return algebra.commutator_norm(a, b) <= bound


def tensor_context(c1: Context, c2: Context) -> Context:
    """Composite-system context U1 (x) U2, index ordering k = k1*d2 + k2."""
    return Context(c1.dim * c2.dim, np.kron(c1.basis, c2.basis))


def joint_context(observables: list[AlgebraElement], tol: float = MEMBERSHIP_TOL) -> Context:
    """Common eigenbasis of mutually compatible observables.

    Sequential diagonalization: diagonalize the first observable, recurse on
    each degenerate block with the next, canonical completion at the end.
    Ordering is lexicographic by eigenvalue tuple, ascending.
    """
    if not observables:
        raise ValueError("joint_context requires at least one observable")
    dim = observables[0].dim
    for i, obs in enumerate(observables):
        if obs.dim != dim:
            raise DimensionError(f"observable {i} has dim {obs.dim}, expected {dim}")
        if not algebra.is_hermitian(obs):
            raise NotObservableError(f"observable {i} is not Hermitian")
    for i in range(len(observables)):
        for j in range(i + 1, len(observables)):
            if not compatible(observables[i], observables[j], tol):
                raise IncompatibleObservablesError(
                    f"observables {i} and {j} do not commute "
                    f"(commutator norm {algebra.commutator_norm(observables[i], observables[j]):.3e})"
                )

    def refine(block: np.ndarray, remaining: list[AlgebraElement]) -> np.ndarray:
        if not remaining:
            if block.shape[1] > 1:
                block = _canonical_subspace_basis(block)
            return _canonicalize_columns(block)
        sub = block.conj().T @ remaining[0].entries @ block
        sub = 0.5 * (sub + sub.conj().T)
        try:
            lam, vecs = np.linalg.eigh(sub)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"eigensolver failed: {exc}") from exc
        rotated = block @ vecs
        scale = 1.0 + float(np.max(np.abs(lam), initial=0.0))
        pieces = [
            refine(rotated[:, start:stop], remaining[1:])
            for start, stop in _cluster_bounds(lam, TAU_SPEC * scale)
        ]
        return np.hstack(pieces)

    basis = refine(np.eye(dim, dtype=np.complex128), list(observables))
    ctx = Context(dim, basis)
    for i, obs in enumerate(observables):
        if not contains(ctx, obs, tol):
            raise NumericalError(f"joint diagonalization left observable {i} non-diagonal")
    return ctx


def context_diagonal(ctx: Context, a: AlgebraElement, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    """Real diagonal of U*AU for a member observable (all character values)."""
    if not contains(ctx, a, tol):
        raise NotInContextError("observable is not diagonal in this context")
    rotated = ctx.basis.conj().T @ a.entries @ ctx.basis
    diag = np.diag(rotated)
    bound = TAU_DIAG * (1.0 + algebra.operator_norm(a))
    if float(np.max(np.abs(diag.imag), initial=0.0)) > bound:
        raise NumericalError("diagonal of U*AU has non-negligible imaginary part")
    return diag.real.copy()


def character_value(ctx: Context, k: int, a: AlgebraElement, tol: float = MEMBERSHIP_TOL) -> float:
    """Value of the k-th character of the context on a member observable."""
    if not 0 <= k < ctx.dim:
        raise IndexError(f"basis index {k} out of range for dim {ctx.dim}")
    return float(context_diagonal(ctx, a, tol)[k])


def context_to_dict(ctx: Context) -> dict:
    """JSON-ready export: {"dim", "basis_re", "basis_im", "id"}."""
    return {
        "dim": ctx.dim,
        "basis_re": ctx.basis.real.tolist(),
        "basis_im": ctx.basis.imag.tolist(),
        "id": ctx.id,
    }
