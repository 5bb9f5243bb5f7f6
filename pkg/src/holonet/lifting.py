"""Lifting quotient-valued holonomies through the normalizer.

A lift problem carries a finite presentation, one coset representative
per generator, and a fiber.  The determinant section handles the SU(d)
fiber exactly; finite fibers (enumerated groups, or sampled scalar
phases) go through exhaustive backtracking, so a failed search really
does rule out every lift with the given generator cosets.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, RelationNotInFiber, SearchSpaceTooLarge
from .poset import Pi1Presentation, free_reduce
from .unitary import (
    DEFAULT_EPS,
    FiniteMatrixGroup,
    SpecialFiber,
    as_matrix,
    fiber_residual,
    max_norm,
)

# Full defect sweeps are only attempted below this many assignments.
DEFECT_SWEEP_CAP = 65536


@dataclass(frozen=True)
class ScalarPhasesFiber:
    """The n-th roots of unity times the identity: a finite sampling of
    the scalar fiber used to discretize projective lifting problems."""

    dimension: int
    n: int

    @property
    def elements(self):
        eye = np.eye(self.dimension, dtype=complex)
        return [np.exp(2j * np.pi * k / self.n) * eye for k in range(self.n)]


class LiftProblem:
    """A finite presentation with quotient images and a fiber.

    ``relators`` are words (tuples of signed 1-based indices) over
    ``num_generators`` generators.  For the determinant-section fiber the
    images are unit complex scalars; otherwise they are unitary coset
    representatives.
    """

    def __init__(self, num_generators, relators, images, fiber):
        self.num_generators = int(num_generators)
        self.relators = tuple(free_reduce(tuple(w)) for w in relators)
        self.fiber = fiber
        if len(images) != self.num_generators:
            raise DimensionMismatch(
                f"{len(images)} images for {self.num_generators} generators"
            )
        for w in self.relators:
            for letter in w:
                if not 1 <= abs(letter) <= self.num_generators:
                    raise DimensionMismatch(f"relator letter {letter} out of range")
        if isinstance(fiber, SpecialFiber):
            self.images = [complex(z) for z in images]
            self.dimension = fiber.dimension
        else:
            self.images = [as_matrix(m) for m in images]
            self.dimension = fiber.dimension
            for m in self.images:
                if m.shape != (self.dimension, self.dimension):
                    raise DimensionMismatch("image dimension does not match fiber")

    @classmethod
    def from_presentation(cls, presentation: Pi1Presentation, images, fiber):
        """Renumber the alive generators of a poset presentation to 1..k.

        ``images`` is keyed by the original alive indices.
        """
        pos = {g: j + 1 for j, g in enumerate(presentation.alive)}
        relators = [
            tuple(
                pos[abs(letter)] * (1 if letter > 0 else -1) for letter in w
            )
            for w in presentation.relators
        ]
        return cls(
            len(presentation.alive),
            relators,
            [images[g] for g in presentation.alive],
            fiber,
        )

    def validate(self, eps: float = DEFAULT_EPS):
        """Check the quotient data is well defined: every relation word
        evaluates into the fiber."""
        if isinstance(self.fiber, SpecialFiber):
            for w in self.relators:
                z = _evaluate_scalar(self.images, w)
                if abs(z - 1.0) > eps:
                    raise RelationNotInFiber(f"relator {w} has determinant defect {z}")
            return
        check = self.fiber
        if isinstance(check, ScalarPhasesFiber):
            from .unitary import ScalarFiber

            # the sampled phases stand in for the full scalar circle
            check = ScalarFiber(self.dimension)
        for w in self.relators:
            r = fiber_residual(check, _evaluate(self.images, w, self.dimension))
            if r > eps:
                raise RelationNotInFiber(
                    f"relator {w} evaluates {r:.3g} away from the fiber"
                )


@dataclass
class LiftResult:
    status: str  # "lifted" | "no-lift-in-search-space"
    images: list | None = None
    defects: dict | None = None  # relator index -> list of distinct defects
    defects_complete: bool = False

    @property
    def lifted(self) -> bool:
        return self.status == "lifted"


def _evaluate(images, word, dimension) -> np.ndarray:
    out = np.eye(dimension, dtype=complex)
    for letter in word:
        m = images[abs(letter) - 1]
        out = out @ (m if letter > 0 else m.conj().T)
    return out


def _evaluate_scalar(images, word) -> complex:
    out = 1.0 + 0j
    for letter in word:
        z = images[abs(letter) - 1]
        out *= z if letter > 0 else z.conjugate()
    return out


def lift_via_det_section(problem: LiftProblem, eps: float = DEFAULT_EPS) -> LiftResult:
    """Lift through the determinant with the section z -> diag(z, 1, ..., 1).

    The section is a group morphism, so the lift always exists and the
    relations hold to scalar rounding.
    """
    if not isinstance(problem.fiber, SpecialFiber):
        raise DimensionMismatch("determinant section applies to the SU(d) fiber only")
    problem.validate(eps)
    d = problem.dimension
    images = []
    for z in problem.images:
        m = np.eye(d, dtype=complex)
        m[0, 0] = z
        images.append(m)
    return LiftResult("lifted", images=images)


def relator_defect(problem: LiftProblem, candidate_images) -> dict:
    """Evaluate every relator in the candidate images.

    The identity means the relator is satisfied.
    """
    mats = [as_matrix(m) for m in candidate_images]
    for m in mats:
        if m.shape != (problem.dimension, problem.dimension):
            raise DimensionMismatch("candidate image of wrong dimension")
    return {
        i: _evaluate(mats, w, problem.dimension)
        for i, w in enumerate(problem.relators)
    }


def _candidates(problem: LiftProblem):
    if isinstance(problem.fiber, ScalarPhasesFiber):
        fiber_elements = problem.fiber.elements
    elif isinstance(problem.fiber, FiniteMatrixGroup):
        fiber_elements = problem.fiber.elements
    else:
        raise SearchSpaceTooLarge(
            "search needs a finite fiber; use the determinant section for SU(d)"
        )
    return [[img @ h for h in fiber_elements] for img in problem.images]


def lift_search(problem: LiftProblem, eps: float = DEFAULT_EPS,
                budget: int = 1_000_000) -> LiftResult:
    """Exhaustive backtracking over per-generator coset candidates.

    Success returns the first lifted assignment in candidate order.
    Exhaustive failure means no lift exists with these generator cosets
    and this fiber; when the space is small enough the result also
    carries the set of distinct defects seen per relator.
    """
    problem.validate(eps)
    k = problem.num_generators
    if k == 0:
        return LiftResult("lifted", images=[])
    candidates = _candidates(problem)
    space = 1
    for cand in candidates:
        space *= len(cand)
        if space > budget:
            raise SearchSpaceTooLarge(
                f"search space exceeds budget {budget}"
            )

    ready = {depth: [] for depth in range(1, k + 1)}
    for i, w in enumerate(problem.relators):
        if w:
            ready[max(abs(letter) for letter in w)].append(i)
    eye = np.eye(problem.dimension)

    chosen = [None] * k

    def search(depth):
        for cand in candidates[depth - 1]:
            chosen[depth - 1] = cand
            bad = False
            for i in ready[depth]:
                defect = _evaluate(chosen, problem.relators[i], problem.dimension)
                if max_norm(defect - eye) > eps:
                    bad = True
                    break
            if bad:
                continue
            if depth == k or search(depth + 1):
                return True
        chosen[depth - 1] = None
        return False

    if search(1):
        return LiftResult("lifted", images=list(chosen))

    defects, complete = None, False
    if space <= DEFECT_SWEEP_CAP:
        defects = {i: [] for i in range(len(problem.relators))}
        for combo in itertools.product(*candidates):
            for i, w in enumerate(problem.relators):
                defect = _evaluate(list(combo), w, problem.dimension)
                if all(max_norm(defect - seen) > 10 * eps for seen in defects[i]):
                    defects[i].append(defect)
        complete = True
    return LiftResult("no-lift-in-search-space", defects=defects,
                      defects_complete=complete)
