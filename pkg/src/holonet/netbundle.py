"""Unitary cocycles over the 1-simplices of a poset: validation, path
transport, holonomy extraction, reconstruction from holonomy,
equivalence testing, sections and morphisms, first Chern class,
quotient-valued holonomy, and gauge-reduction checks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidCocycle,
    NotInNormalizer,
    NotUnitary,
    RelationNotInFiber,
)
from .poset import (
    FORWARD,
    Path,
    PathFrame,
    Pi1Presentation,
    Poset,
    Simplex1,
    loop_of_generator,
    pi1_presentation,
)
from .unitary import (
    DEFAULT_EPS,
    FiniteMatrixGroup,
    as_matrix,
    fiber_normalizes,
    fiber_residual,
    is_unitary,
    max_norm,
    nullspace,
)


class Cocycle:
    """Assignment of a unitary to every 1-simplex; entries not listed
    default to the identity (the constant net)."""

    def __init__(self, poset: Poset, dimension: int, assignment=None):
        self.poset = poset
        self.dimension = int(dimension)
        self.assignment = {}
        simplices = set(poset.simplices1())
        for b, m in (assignment or {}).items():
            if b not in simplices:
                raise DimensionMismatch(f"{b} is not a 1-simplex of the poset")
            m = as_matrix(m)
            if m.shape != (self.dimension, self.dimension):
                raise DimensionMismatch(
                    f"value at {b} has shape {m.shape}, expected "
                    f"({self.dimension}, {self.dimension})"
                )
            self.assignment[b] = m

    def value(self, b: Simplex1) -> np.ndarray:
        m = self.assignment.get(b)
        return np.eye(self.dimension, dtype=complex) if m is None else m


@dataclass
class CocycleReport:
    """Violations of the 1-cocycle law, one entry per bad 2-simplex."""

    violations: list
    eps: float

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def max_residual(self) -> float:
        return max((r for _, r in self.violations), default=0.0)


def validate_cocycle(cocycle: Cocycle, eps: float = DEFAULT_EPS) -> CocycleReport:
    """Check ``z(f0) z(f2) = z(f1)`` on every 2-simplex.

    Assigned values must be unitary within eps; otherwise NotUnitary is
    raised before any law checking.
    """
    for b, m in cocycle.assignment.items():
        if not is_unitary(m, eps):
            raise NotUnitary(f"value at {b} is not unitary within {eps}")
    violations = []
    for c in cocycle.poset.simplices2():
        lhs = cocycle.value(c.f0) @ cocycle.value(c.f2)
        residual = max_norm(lhs - cocycle.value(c.f1))
        if residual > eps:
            violations.append((c, residual))
    return CocycleReport(violations, eps)


def _transport(value, path: Path, dimension: int) -> np.ndarray:
    out = np.eye(dimension, dtype=complex)
    for simplex, orientation in path.steps:
        m = value(simplex)
        if orientation != FORWARD:
            m = m.conj().T
        out = m @ out
    return out


def transport(cocycle: Cocycle, path: Path) -> np.ndarray:
    """Ordered product of cocycle values along a path; reverse steps
    contribute adjoints."""
    simplices = set(cocycle.poset.simplices1())
    for simplex, _ in path.steps:
        if simplex not in simplices:
            raise DimensionMismatch(f"{simplex} is not a 1-simplex of the poset")
    return _transport(cocycle.value, path, cocycle.dimension)


class HolonomyRep:
    """Images of the surviving presentation generators under holonomy."""

    def __init__(self, presentation: Pi1Presentation, images, dimension: int):
        self.presentation = presentation
        self.dimension = int(dimension)
        self.images = {}
        for g in presentation.alive:
            if g not in images:
                raise DimensionMismatch(f"missing image for generator {g}")
            m = as_matrix(images[g])
            if m.shape != (self.dimension, self.dimension):
                raise DimensionMismatch(f"image of generator {g} has shape {m.shape}")
            self.images[g] = m

    def image(self, g: int) -> np.ndarray:
        return self.images[g]

    def evaluate(self, word) -> np.ndarray:
        """Evaluate a word over the alive generators."""
        out = np.eye(self.dimension, dtype=complex)
        for letter in word:
            m = self.images[abs(letter)]
            out = out @ (m if letter > 0 else m.conj().T)
        return out

    def relation_residuals(self):
        eye = np.eye(self.dimension)
        return [max_norm(self.evaluate(w) - eye) for w in self.presentation.relators]

    def max_relation_residual(self) -> float:
        return max(self.relation_residuals(), default=0.0)

    def is_valid(self, eps: float = DEFAULT_EPS) -> bool:
        return self.max_relation_residual() <= eps and all(
            is_unitary(m, eps) for m in self.images.values()
        )


def holonomy(cocycle: Cocycle, frame: PathFrame, eps: float = DEFAULT_EPS) -> HolonomyRep:
    """Holonomy representation of a valid cocycle along a path frame."""
    report = validate_cocycle(cocycle, eps)
    if not report.ok:
        raise InvalidCocycle(
            f"cocycle violates the 1-cocycle law on {len(report.violations)} "
            "2-simplices",
            report,
        )
    pres = pi1_presentation(cocycle.poset, frame.base)
    images = {
        g: transport(cocycle, loop_of_generator(pres, frame, g))
        for g in pres.alive
    }
    return HolonomyRep(pres, images, cocycle.dimension)


def reconstruct(rep: HolonomyRep, frame: PathFrame) -> Cocycle:
    """Cocycle whose holonomy along the same frame is ``rep``.

    Each 1-simplex is sent to the representation evaluated on its loop
    word; spanning-tree and degenerate simplices get the identity.
    """
    pres = rep.presentation
    assignment = {}
    for b in pres.poset.simplices1():
        word = pres.loop_word(frame, b)
        if word:
            assignment[b] = rep.evaluate(word)
    return Cocycle(pres.poset, rep.dimension, assignment)


def _check_same_presentation(rep: HolonomyRep, other: HolonomyRep):
    p, q = rep.presentation, other.presentation
    if p.poset != q.poset or p.base != q.base or p.alive != q.alive \
            or p.relators != q.relators:
        raise DimensionMismatch("representations live over different presentations")


def _intertwiner_basis_matrices(rep: HolonomyRep, other: HolonomyRep,
                                eps: float = DEFAULT_EPS):
    """Orthonormal basis of {t : t rep(g) = other(g) t for all g}."""
    d, e = rep.dimension, other.dimension
    if not rep.presentation.alive:
        vecs = np.eye(e * d, dtype=complex)
        return [vecs[:, j].reshape(e, d) for j in range(e * d)]
    rows = []
    for g in rep.presentation.alive:
        a, b = rep.image(g), other.image(g)
        rows.append(np.kron(np.eye(e), a.T) - np.kron(b, np.eye(d)))
    kernel = nullspace(np.vstack(rows), eps)
    return [kernel[:, j].reshape(e, d) for j in range(kernel.shape[1])]


@dataclass
class EquivalenceResult:
    """Outcome of a unitary-equivalence search.

    ``witness`` conjugates the first representation onto the second when
    present.  ``certified_distinct`` is set only when inequivalence is
    proved (empty intertwiner space, or distinct spectra over a single
    generator); otherwise absence of a witness just means the sampling
    strategy found none.
    """

    witness: np.ndarray | None
    certified_distinct: bool
    detail: str

    def __bool__(self):
        return self.witness is not None


def _spectra_differ(a, b, eps) -> bool:
    eva = sorted(np.linalg.eigvals(a), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    evb = sorted(np.linalg.eigvals(b), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    used = [False] * len(evb)
    for z in eva:
        best, arg = None, None
        for j, w in enumerate(evb):
            if used[j]:
                continue
            dist = abs(z - w)
            if best is None or dist < best:
                best, arg = dist, j
        if best is None or best > eps:
            return True
        used[arg] = True
    return False


def equivalent(rep: HolonomyRep, other: HolonomyRep, eps: float = DEFAULT_EPS,
               trials: int = 32, seed: int = 0) -> EquivalenceResult:
    """Search for a unitary g with g rep(p) g* = other(p) for all p.

    Sound: any returned witness has been verified within 10*eps.
    Complete when the joint intertwiner space contains an invertible
    element reachable by random sampling; certified negatives come from
    an empty intertwiner space or, over a single generator, from
    distinct eigenvalue multisets.
    """
    _check_same_presentation(rep, other)
    if rep.dimension != other.dimension:
        raise DimensionMismatch("representations of different dimension")
    d = rep.dimension
    tol = 10 * eps

    def verified(w):
        return all(
            max_norm(w @ rep.image(g) @ w.conj().T - other.image(g)) <= tol
            for g in rep.presentation.alive
        )

    eye = np.eye(d, dtype=complex)
    if verified(eye):
        return EquivalenceResult(eye, False, "identity witness")

    basis = _intertwiner_basis_matrices(rep, other, eps)
    if not basis:
        return EquivalenceResult(None, True, "intertwiner space is zero")
    if len(rep.presentation.alive) == 1:
        (g,) = rep.presentation.alive
        if _spectra_differ(rep.image(g), other.image(g), 100 * eps):
            return EquivalenceResult(None, True, "generator spectra differ")

    rng = np.random.default_rng(seed)
    for _ in range(trials):
        coeffs = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
        t = sum(c * b for c, b in zip(coeffs, basis))
        if np.linalg.cond(t) >= 1e6:
            continue
        u, _, vh = np.linalg.svd(t)
        w = u @ vh
        if verified(w):
            return EquivalenceResult(w, False, "sampled witness")
    return EquivalenceResult(None, False, "no witness found")


def chern_c1(rep: HolonomyRep) -> dict:
    """det of each generator image; a homomorphism pi1 -> T."""
    return {g: complex(np.linalg.det(m)) for g, m in rep.images.items()}


def sections_dim(rep: HolonomyRep) -> int:
    """Dimension of the joint fixed space of all generator images."""
    d = rep.dimension
    if not rep.presentation.alive:
        return d
    rows = [rep.image(g) - np.eye(d) for g in rep.presentation.alive]
    return nullspace(np.vstack(rows)).shape[1]


def morphism_dim(rep: HolonomyRep, other: HolonomyRep, eps: float = DEFAULT_EPS) -> int:
    """Dimension of the space of intertwiners from rep to other."""
    _check_same_presentation(rep, other)
    return len(_intertwiner_basis_matrices(rep, other, eps))


class QuotientHolonomyRep:
    """Holonomy with values taken modulo a fiber group.

    Images are coset representatives; every relation word evaluates into
    the fiber rather than to the identity.
    """

    def __init__(self, presentation: Pi1Presentation, images, dimension: int, fiber):
        self.presentation = presentation
        self.dimension = int(dimension)
        self.fiber = fiber
        self.images = {g: as_matrix(images[g]) for g in presentation.alive}

    def image(self, g: int) -> np.ndarray:
        return self.images[g]

    def evaluate(self, word) -> np.ndarray:
        out = np.eye(self.dimension, dtype=complex)
        for letter in word:
            m = self.images[abs(letter)]
            out = out @ (m if letter > 0 else m.conj().T)
        return out

    def relation_fiber_residuals(self):
        return [
            fiber_residual(self.fiber, self.evaluate(w))
            for w in self.presentation.relators
        ]

    def coset_invariant(self, g: int):
        """det of the representative for a determinant-based fiber."""
        from .unitary import SpecialFiber

        if isinstance(self.fiber, SpecialFiber):
            return complex(np.linalg.det(self.images[g]))
        return None


def quotient_holonomy(rep: HolonomyRep, fiber, eps: float = DEFAULT_EPS) -> QuotientHolonomyRep:
    """Reinterpret a holonomy representation modulo a fiber group.

    Every image must normalize the fiber and every relation word must
    evaluate into it.
    """
    for g, m in rep.images.items():
        if not fiber_normalizes(fiber, m, eps):
            raise NotInNormalizer(f"image of generator {g} does not normalize the fiber")
    qrep = QuotientHolonomyRep(rep.presentation, rep.images, rep.dimension, fiber)
    for w, r in zip(rep.presentation.relators, qrep.relation_fiber_residuals()):
        if r > eps:
            raise RelationNotInFiber(
                f"relation word {w} evaluates {r:.3g} away from the fiber"
            )
    return qrep


def gauge_reduction_check(values, group: FiniteMatrixGroup,
                          eps: float | None = None) -> bool:
    """True iff every value conjugates the group into itself.

    ``values`` may be a Cocycle, a HolonomyRep, a QuotientHolonomyRep,
    or any iterable of matrices.
    """
    if isinstance(values, Cocycle):
        mats = list(values.assignment.values())
    elif isinstance(values, (HolonomyRep, QuotientHolonomyRep)):
        mats = list(values.images.values())
    else:
        mats = [as_matrix(m) for m in values]
    for m in mats:
        if m.shape != (group.dimension, group.dimension):
            raise DimensionMismatch("value dimension does not match group")
        if not group.normalizes(m, eps):
            return False
    return True
