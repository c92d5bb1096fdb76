"""Norm and Hilbert-space reconstruction from a quantum state.

The state norm ||R||^2 = sup over density operators of Tr(rho R*R) collapses,
in finite dimension, to the largest eigenvalue of R*R; the reconstruction
builds the sesquilinear form <R, S> = Tr(rho R*S) on the span of the matrix
units, quotients its null directions, and represents the algebra by left
multiplication on the quotient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from .algebra import AlgebraElement
from .ensemble import QuantumState
from .errors import DimensionError, NumericalError

_NULL_REL_TOL = 1e-10


def cstar_norm(r: AlgebraElement) -> float:
    """sqrt(lambda_max(R*R)): the supremum of Tr(rho R*R) over all states."""
    return algebra.operator_norm(r)


@dataclass(frozen=True, eq=False)
class GnsRepresentation:
    """Hilbert-space carrier generated by a quantum state.

    ``basis_map`` expresses the orthonormal quotient basis in matrix-unit
    coordinates (d^2 x m); ``omega`` is the cyclic vector (class of the
    identity); ``rep`` maps an element to its m x m operator.
    """

    dim: int
    carrier_dim: int
    basis_map: np.ndarray
    omega: np.ndarray
    gram: np.ndarray

    def rep(self, a: AlgebraElement) -> np.ndarray:
        """Operator of left multiplication by ``a`` on the quotient basis."""
        if a.dim != self.dim:
            raise DimensionError(f"element dim {a.dim} vs representation dim {self.dim}")
        left = np.kron(a.entries, np.eye(self.dim))
        return self.basis_map.conj().T @ self.gram @ (left @ self.basis_map)

    def class_vector(self, a: AlgebraElement) -> np.ndarray:
        """Quotient-space coordinates of the class of ``a``."""
        vec = a.entries.reshape(-1)
        return self.basis_map.conj().T @ (self.gram @ vec)


def gns_construct(rho: QuantumState) -> GnsRepresentation:
    """Build the representation generated by ``rho``.

    The Gram matrix of the matrix units E_ij under <R, S> = Tr(rho R*S) is
    kron(I, rho^T) in row-major vec ordering; null directions (eigenvalues
    <= 1e-10 of the largest) are quotiented, survivors are orthonormalized,
    and the cyclic vector is the class of the identity.
    """
    d = rho.dim
    gram = np.kron(np.eye(d), rho.rho.T)
    gram = 0.5 * (gram + gram.conj().T)
    try:
        lam, vecs = np.linalg.eigh(gram)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Gram eigendecomposition failed: {exc}") from exc
    top = float(lam.max())
    if top <= 0.0:
        raise NumericalError("Gram matrix has no positive part")
    keep = lam > _NULL_REL_TOL * top
    lam_kept = lam[keep]
    vec_kept = vecs[:, keep]
    # 1/sqrt(gamma) scaling orthonormalizes the survivors under the form;
    # phase fixing keeps the construction deterministic.
    basis = np.column_stack(
        [
            algebra._phase_fix(vec_kept[:, j]) / np.sqrt(lam_kept[j])
            for j in range(vec_kept.shape[1])
        ]
    )
    omega = basis.conj().T @ (gram @ np.eye(d, dtype=np.complex128).reshape(-1))
    norm_sq = float(np.vdot(omega, omega).real)
    if abs(norm_sq - 1.0) > 1e-10:
        raise NumericalError(f"cyclic vector norm^2 is {norm_sq!r}, expected 1")
    return GnsRepresentation(
        dim=d,
        carrier_dim=int(basis.shape[1]),
        basis_map=basis,
        omega=omega,
        gram=gram,
    )


@dataclass(frozen=True)
class GnsCheck:
    name: str
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


@dataclass(frozen=True)
class GnsReport:
    carrier_dim: int
    checks: tuple[GnsCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "carrier_dim": self.carrier_dim,
            "checks": [
                {"name": c.name, "max_residual": c.max_residual, "pass": c.passed}
                for c in self.checks
            ],
        }


def _matrix_units(d: int) -> list[AlgebraElement]:
    units = []
    for i in range(d):
        for j in range(d):
            m = np.zeros((d, d), dtype=np.complex128)
            m[i, j] = 1.0
            units.append(AlgebraElement(d, m))
    return units


def _random_elements(d: int, count: int, seed: int) -> list[AlgebraElement]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        out.append(AlgebraElement(d, g))
    return out


def verify_gns(
    g: GnsRepresentation,
    rho: QuantumState,
    sample_elements: list[AlgebraElement] | None = None,
    seed: int = 0,
    tol: float = 1e-8,
) -> GnsReport:
    """Certify the representation on sampled elements.

    Checks multiplicativity, adjoint preservation, state reproduction through
    the cyclic vector, cyclicity of the orbit, and norm contractivity.  Check
    failures are reported, not raised.
    """
    elements = sample_elements if sample_elements else _random_elements(g.dim, 20, seed)

    hom = 0.0
    star = 0.0
    state = 0.0
    contract = 0.0
    for i, r in enumerate(elements):
        rep_r = g.rep(r)
        star = max(star, float(np.max(np.abs(g.rep(r.adjoint()) - rep_r.conj().T))))
        reproduced = complex(np.vdot(g.omega, rep_r @ g.omega))
        state = max(state, abs(reproduced - complex(np.trace(rho.rho @ r.entries))))
        rep_norm = float(np.linalg.svd(rep_r, compute_uv=False)[0])
        contract = max(contract, rep_norm - algebra.operator_norm(r))
        s = elements[(i + 1) % len(elements)]
        hom = max(
            hom,
            float(np.max(np.abs(g.rep(algebra.multiply(r, s)) - rep_r @ g.rep(s)))),
        )

    orbit = np.column_stack([g.rep(e) @ g.omega for e in _matrix_units(g.dim)])
    svals = np.linalg.svd(orbit, compute_uv=False)
    orbit_rank = int(np.sum(svals > _NULL_REL_TOL * max(float(svals[0]), 1.0)))

    checks = (
        GnsCheck("homomorphism", hom, tol),
        GnsCheck("star_preservation", star, tol),
        GnsCheck("state_reproduction", state, tol),
        GnsCheck("cyclicity", float(abs(orbit_rank - g.carrier_dim)), 0.0),
        GnsCheck("contractivity", max(contract, 0.0), tol),
    )
    return GnsReport(carrier_dim=g.carrier_dim, checks=checks)
