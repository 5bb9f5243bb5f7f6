"""Small dense complex-matrix arithmetic and explicitly enumerated
finite matrix groups.

All matrices are numpy arrays with dtype complex128, row-major.  A
tolerance is an ordinary nonnegative float; ``DEFAULT_EPS`` is used
when none is given.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ClosureBoundExceeded,
    DimensionMismatch,
    NotSquare,
    NotUnitary,
)

DEFAULT_EPS = 1e-9


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionMismatch("matrix has non-finite entries")
    return a


def max_norm(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_unitary(u, eps: float = DEFAULT_EPS) -> bool:
    """True iff ``u u* = 1`` entrywise within ``eps`` (max-norm)."""
    u = as_matrix(u)
    n, m = u.shape
    if n != m:
        raise NotSquare(f"matrix is {n}x{m}")
    return max_norm(u @ u.conj().T - np.eye(n)) <= eps


def require_unitary(u, eps: float = DEFAULT_EPS, what: str = "matrix") -> np.ndarray:
    u = as_matrix(u)
    if not is_unitary(u, eps):
        raise NotUnitary(f"{what} is not unitary within {eps}")
    return u


def kron_power(u, r: int) -> np.ndarray:
    """r-fold Kronecker power; ``r = 0`` gives the 1x1 identity."""
    if r < 0:
        raise ValueError("Kronecker power needs r >= 0")
    out = np.eye(1, dtype=complex)
    u = np.asarray(u, dtype=complex)
    for _ in range(r):
        out = np.kron(out, u)
    return out


def nullspace(a, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Orthonormal basis of the numerical kernel, returned as columns.

    Singular values at most ``eps * max(1, sigma_max)`` count as zero.
    """
    a = as_matrix(a)
    if a.size == 0:
        return np.eye(a.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(a)
    smax = float(s[0]) if s.size else 0.0
    rank = int(np.sum(s > eps * max(1.0, smax)))
    return vh[rank:].conj().T


class FiniteMatrixGroup:
    """An explicitly enumerated subgroup of U(d).

    Elements are deduplicated by entrywise max-norm distance <= eps;
    groups whose elements are closer than eps cannot be represented.
    """

    def __init__(self, dimension, elements, generators=None, eps=DEFAULT_EPS):
        self.dimension = int(dimension)
        self.eps = float(eps)
        self.elements = [require_unitary(e, eps, "group element") for e in elements]
        for e in self.elements:
            if e.shape != (self.dimension, self.dimension):
                raise DimensionMismatch("group element of wrong dimension")
        self.generators = (
            [as_matrix(g) for g in generators] if generators is not None else list(self.elements)
        )
        if self.find(np.eye(self.dimension)) < 0:
            raise ValueError("group does not contain the identity")

    def __len__(self):
        return len(self.elements)

    def find(self, u, eps: float | None = None) -> int:
        """Index of the element within eps of ``u``, or -1."""
        u = as_matrix(u)
        if u.shape != (self.dimension, self.dimension):
            raise DimensionMismatch(
                f"matrix is {u.shape}, group has dimension {self.dimension}"
            )
        tol = self.eps if eps is None else eps
        for i, e in enumerate(self.elements):
            if max_norm(u - e) <= tol:
                return i
        return -1

    def contains(self, u, eps: float | None = None) -> bool:
        return self.find(u, eps) >= 0

    def residual(self, u) -> float:
        """Max-norm distance from ``u`` to the nearest element."""
        u = as_matrix(u)
        return min(max_norm(u - e) for e in self.elements)

    def same_coset(self, u, v, eps: float | None = None) -> bool:
        """True iff ``u v*`` lies in the group."""
        return self.contains(as_matrix(u) @ as_matrix(v).conj().T, eps)

    def normalizes(self, u, eps: float | None = None) -> bool:
        """True iff ``u g u*`` stays in the group for every generator g."""
        u = as_matrix(u)
        return all(self.contains(u @ g @ u.conj().T, eps) for g in self.generators)


def group_closure(generators, bound: int, eps: float = DEFAULT_EPS) -> FiniteMatrixGroup:
    """BFS closure of unitary generators under products.

    Raises ClosureBoundExceeded when more than ``bound`` distinct
    elements appear, which signals an infinite or too-large group.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    gens = [require_unitary(g, eps, "generator") for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    d = gens[0].shape[0]
    for g in gens:
        if g.shape != (d, d):
            raise DimensionMismatch("generators of mixed dimension")

    elements = [np.eye(d, dtype=complex)]

    def find(u):
        for i, e in enumerate(elements):
            if max_norm(u - e) <= eps:
                return i
        return -1

    frontier = [elements[0]]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if find(y) < 0:
                    elements.append(y)
                    new.append(y)
                    if len(elements) > bound:
                        raise ClosureBoundExceeded(
                            f"closure exceeded bound {bound}"
                        )
        frontier = new
    return FiniteMatrixGroup(d, elements, generators=gens, eps=eps)


def contains(group: FiniteMatrixGroup, u, eps: float | None = None) -> bool:
    return group.contains(u, eps)


def same_coset(group: FiniteMatrixGroup, u, v, eps: float | None = None) -> bool:
    return group.same_coset(u, v, eps)


def scalar_phase_group(dimension: int, n: int, eps: float = DEFAULT_EPS) -> FiniteMatrixGroup:
    """The n-th roots of unity times the identity, as a finite group."""
    if n < 1:
        raise ValueError("need n >= 1")
    eye = np.eye(dimension, dtype=complex)
    els = [np.exp(2j * np.pi * k / n) * eye for k in range(n)]
    return FiniteMatrixGroup(dimension, els, generators=[els[1 % n]], eps=eps)


# Symbolic fibers for the two continuous cases the library supports.
# SpecialFiber is SU(d) sitting inside U(d): cosets are labelled by the
# determinant.  ScalarFiber is the full circle of unit scalars: cosets
# are rays, i.e. points of PU(d).


@dataclass(frozen=True)
class SpecialFiber:
    dimension: int


@dataclass(frozen=True)
class ScalarFiber:
    dimension: int


def fiber_dimension(fiber) -> int:
    if isinstance(fiber, FiniteMatrixGroup):
        return fiber.dimension
    return fiber.dimension


def fiber_residual(fiber, m) -> float:
    """Max-norm-flavoured distance of ``m`` from the fiber."""
    m = as_matrix(m)
    d = fiber_dimension(fiber)
    if m.shape != (d, d):
        raise DimensionMismatch("matrix dimension does not match fiber")
    if isinstance(fiber, FiniteMatrixGroup):
        return fiber.residual(m)
    unit = max_norm(m @ m.conj().T - np.eye(d))
    if isinstance(fiber, SpecialFiber):
        return max(unit, abs(np.linalg.det(m) - 1.0))
    # scalar fiber: m must be a unit scalar times the identity
    lam = np.trace(m) / d
    return max(unit, max_norm(m - lam * np.eye(d)), abs(abs(lam) - 1.0))


def fiber_contains(fiber, m, eps: float = DEFAULT_EPS) -> bool:
    return fiber_residual(fiber, m) <= eps


def fiber_same_coset(fiber, u, v, eps: float = DEFAULT_EPS) -> bool:
    return fiber_contains(fiber, as_matrix(u) @ as_matrix(v).conj().T, eps)


def fiber_normalizes(fiber, u, eps: float = DEFAULT_EPS) -> bool:
    """Whether ``u`` normalizes the fiber.  SU(d) and scalar fibers are
    normalized by all of U(d)."""
    if isinstance(fiber, FiniteMatrixGroup):
        return fiber.normalizes(u, eps)
    return True
