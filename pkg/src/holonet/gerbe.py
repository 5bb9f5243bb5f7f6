"""Non-abelian cochains with coboundary in a fiber group, the crossed
module identity they satisfy, and flattening back to strict cocycles.

A gerbe cochain assigns a normalizer-valued unitary to every 1-simplex;
its coboundary du(c) = u(f0) u(f2) u(f1)* lands in the fiber instead of
being the identity.  Flattening looks for a vertex gauge v and a fiber
correction g making v(d0) g u v(d1)* a strict cocycle; this succeeds
exactly when the induced quotient holonomy lifts through the normalizer,
which is how the search is run.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotInNormalizer, NotUnitary, SearchSpaceTooLarge
from .netbundle import (
    Cocycle,
    HolonomyRep,
    QuotientHolonomyRep,
    _transport,
    reconstruct,
    transport,
    validate_cocycle,
)
from .poset import PathFrame, Poset, Simplex1, loop_of_generator, path_frame, pi1_presentation
from .unitary import (
    DEFAULT_EPS,
    FiniteMatrixGroup,
    SpecialFiber,
    as_matrix,
    fiber_residual,
    is_unitary,
    max_norm,
)


class GerbeCochain:
    """A normalizer-valued assignment on 1-simplices with coboundary in
    the fiber.  Unlisted entries default to the identity."""

    def __init__(self, poset: Poset, dimension: int, fiber, values=None):
        self.poset = poset
        self.dimension = int(dimension)
        self.fiber = fiber
        self.values = {}
        simplices = set(poset.simplices1())
        for b, m in (values or {}).items():
            if b not in simplices:
                raise DimensionMismatch(f"{b} is not a 1-simplex of the poset")
            m = as_matrix(m)
            if m.shape != (self.dimension, self.dimension):
                raise DimensionMismatch(f"value at {b} has shape {m.shape}")
            self.values[b] = m

    def value(self, b: Simplex1) -> np.ndarray:
        m = self.values.get(b)
        return np.eye(self.dimension, dtype=complex) if m is None else m

    def coboundary(self, c) -> np.ndarray:
        return self.value(c.f0) @ self.value(c.f2) @ self.value(c.f1).conj().T

    def transport(self, path) -> np.ndarray:
        return _transport(self.value, path, self.dimension)


def _fiber_probes(fiber):
    """Group elements on which conjugation identities are evaluated."""
    if isinstance(fiber, FiniteMatrixGroup):
        return fiber.generators
    # SU(d): a fixed pair of determinant-one probes
    d = fiber.dimension
    if d == 1:
        return [np.eye(1, dtype=complex)]
    phases = np.ones(d, dtype=complex)
    phases[0], phases[1] = np.exp(0.4j), np.exp(-0.4j)
    rot = np.eye(d, dtype=complex)
    rot[0, 0] = rot[1, 1] = np.cos(1.0)
    rot[0, 1], rot[1, 0] = -np.sin(1.0), np.sin(1.0)
    return [np.diag(phases), rot]


@dataclass
class GerbeReport:
    """Per-simplex residuals for the three gerbe conditions."""

    normalizer_violations: list  # (simplex1, residual)
    coboundary_violations: list  # (simplex2, residual)
    crossed_module_residual: float
    eps: float

    @property
    def ok(self) -> bool:
        return not self.normalizer_violations and not self.coboundary_violations


def validate_gerbe(cochain: GerbeCochain, eps: float = DEFAULT_EPS) -> GerbeReport:
    """Check normalizer membership of the values, coboundaries in the
    fiber, and the crossed module identity
    ad(du(c)) o ad(u(f1)) = ad(u(f0)) o ad(u(f2)) on fiber probes.
    """
    for b, m in cochain.values.items():
        if not is_unitary(m, eps):
            raise NotUnitary(f"value at {b} is not unitary within {eps}")
    fiber = cochain.fiber
    probes = _fiber_probes(fiber)
    normalizer_violations = []
    if isinstance(fiber, FiniteMatrixGroup):
        for b, m in sorted(cochain.values.items()):
            worst = max(
                (fiber.residual(m @ g @ m.conj().T) for g in fiber.generators),
                default=0.0,
            )
            if worst > eps:
                normalizer_violations.append((b, worst))
    coboundary_violations = []
    crossed = 0.0
    for c in cochain.poset.simplices2():
        delta = cochain.coboundary(c)
        residual = fiber_residual(fiber, delta)
        if residual > eps:
            coboundary_violations.append((c, residual))
        u0, u1, u2 = cochain.value(c.f0), cochain.value(c.f1), cochain.value(c.f2)
        for g in probes:
            lhs = delta @ (u1 @ g @ u1.conj().T) @ delta.conj().T
            rhs = u0 @ (u2 @ g @ u2.conj().T) @ u0.conj().T
            crossed = max(crossed, max_norm(lhs - rhs))
    return GerbeReport(normalizer_violations, coboundary_violations, crossed, eps)


def gerbe_from_section(qrep: QuotientHolonomyRep, frame: PathFrame,
                       eps: float = DEFAULT_EPS) -> GerbeCochain:
    """Cochain of the quotient data along a path frame.

    Every 1-simplex is sent to the representative evaluation of its loop
    word; relation words land in the fiber, so coboundaries do too.
    """
    pres = qrep.presentation
    if frame.base != pres.base:
        raise DimensionMismatch("frame base does not match presentation base")
    values = {}
    for b in pres.poset.simplices1():
        word = pres.loop_word(frame, b)
        if word:
            values[b] = qrep.evaluate(word)
    fiber = qrep.fiber
    if isinstance(fiber, FiniteMatrixGroup):
        for b, m in values.items():
            if not fiber.normalizes(m, eps):
                raise NotInNormalizer(f"value at {b} does not normalize the fiber")
    return GerbeCochain(pres.poset, qrep.dimension, fiber, values)


@dataclass
class FlatteningPair:
    """Vertex gauge and fiber correction certifying a flattening.

    The strict cocycle satisfies
    z(b) = vertex_gauge(d0 b) fiber_correction(b) u(b) vertex_gauge(d1 b)*
    for every 1-simplex b.
    """

    vertex_gauge: dict
    fiber_correction: dict
    cocycle: Cocycle


def flatten(cochain: GerbeCochain, base: str | None = None,
            eps: float = DEFAULT_EPS, budget: int = 1_000_000):
    """Search for a flattening of the gerbe cochain.

    The quotient holonomy of the cochain is computed on a path frame and
    lifted: through the determinant section for the SU(d) fiber, by
    exhaustive coset search for a finite fiber.  A successful lift is
    reconstructed into a strict cocycle z, and the pair (v, g) is read
    off by transporting both cochains along the frame.  Returns None
    when the lift search exhausts its space, mirroring the one-to-one
    correspondence between flattenings and lifts.
    """
    from .lifting import LiftProblem, lift_search, lift_via_det_section

    poset = cochain.poset
    base = min(poset.elements) if base is None else base
    frame = path_frame(poset, base)
    pres = pi1_presentation(poset, base)
    fiber = cochain.fiber

    holonomy_images = {
        g: cochain.transport(loop_of_generator(pres, frame, g))
        for g in pres.alive
    }
    if isinstance(fiber, SpecialFiber):
        problem = LiftProblem.from_presentation(
            pres,
            {g: complex(np.linalg.det(m)) for g, m in holonomy_images.items()},
            fiber,
        )
        result = lift_via_det_section(problem, eps)
    elif isinstance(fiber, FiniteMatrixGroup):
        problem = LiftProblem.from_presentation(pres, holonomy_images, fiber)
        result = lift_search(problem, eps, budget)
    else:
        raise SearchSpaceTooLarge("flattening needs a finite or SU(d) fiber")
    if not result.lifted:
        return None

    lifted_images = dict(zip(pres.alive, result.images))
    rep = HolonomyRep(pres, lifted_images, cochain.dimension)
    strict = reconstruct(rep, frame)
    report = validate_cocycle(strict, max(eps, 1e2 * np.finfo(float).eps))
    if not report.ok:
        return None

    vertex_gauge = {}
    for o in poset.elements:
        route = frame.routes[o]
        vertex_gauge[o] = transport(strict, route).conj().T @ cochain.transport(route)
    fiber_correction = {}
    slack = 100 * eps
    for b in poset.simplices1():
        g = (
            vertex_gauge[b.d0].conj().T
            @ strict.value(b)
            @ vertex_gauge[b.d1]
            @ cochain.value(b).conj().T
        )
        if fiber_residual(fiber, g) > slack:
            return None
        if max_norm(g - np.eye(cochain.dimension)) > eps:
            fiber_correction[b] = g
    return FlatteningPair(vertex_gauge, fiber_correction, strict)
