"""Intertwiner categories of tensor powers of a finite matrix group's
defining representation, tensor flip symmetries, conjugate solutions,
and normalizer / dual-group membership tests.

Intertwiner spaces are computed by group averaging (an exact orthogonal
projection for a finite unitary group) or by stacked generator
nullspaces; both routes agree and the choice is made on size.  Flip
operators are carried as index permutations, so the coherence identities
can be checked exactly at sizes where dense matrices would not fit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotSubgroup, SizeCapExceeded
from .unitary import (
    DEFAULT_EPS,
    FiniteMatrixGroup,
    as_matrix,
    kron_power,
    max_norm,
    nullspace,
    require_unitary,
)

SIZE_CAP = 4096
AVERAGING_WORK_CAP = 200_000


@dataclass
class IntertwinerSpace:
    """Orthonormal basis (Hilbert-Schmidt) of maps t: (C^d)^r -> (C^d)^s
    with kron(u, s) t = t kron(u, r) for every group element u."""

    group: FiniteMatrixGroup
    r: int
    s: int
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def project(self, t) -> np.ndarray:
        t = as_matrix(t)
        out = np.zeros_like(t)
        for b in self.basis:
            out = out + np.sum(b.conj() * t) * b
        return out

    def residual(self, t) -> float:
        """Max-norm distance of t from the span of the basis."""
        t = as_matrix(t)
        return max_norm(t - self.project(t))


def _check_cap(d: int, total_power: int, cap: int = SIZE_CAP) -> int:
    size = d ** total_power
    if size > cap:
        raise SizeCapExceeded(f"d^{total_power} = {size} exceeds cap {cap}")
    return size


def _averaging_projector(group: FiniteMatrixGroup, r: int, s: int) -> np.ndarray:
    d = group.dimension
    n = d ** r * d ** s
    p = np.zeros((n, n), dtype=complex)
    for g in group.elements:
        p += np.kron(kron_power(g, s), kron_power(g, r).conj())
    return p / len(group)


def intertwiner_basis(group: FiniteMatrixGroup, r: int, s: int,
                      eps: float = DEFAULT_EPS, cap: int = SIZE_CAP,
                      method: str = "auto") -> IntertwinerSpace:
    """Basis of the (r, s) intertwiner space of the defining representation.

    ``method`` is "averaging", "nullspace" or "auto" (size-based choice).
    """
    if r < 0 or s < 0:
        raise ValueError("powers must be nonnegative")
    d = group.dimension
    _check_cap(d, r + s, cap)
    if method == "auto":
        method = "averaging" if len(group) * d ** (r + s) <= AVERAGING_WORK_CAP \
            else "nullspace"
    if method == "averaging":
        p = _averaging_projector(group, r, s)
        vals, vecs = np.linalg.eigh(p)
        cols = vecs[:, vals > 0.5]
    elif method == "nullspace":
        rows = []
        for g in group.generators:
            a, b = kron_power(g, s), kron_power(g, r)
            rows.append(np.kron(a, np.eye(d ** r)) - np.kron(np.eye(d ** s), b.T))
        cols = nullspace(np.vstack(rows), eps)
    else:
        raise ValueError(f"unknown method {method!r}")
    basis = [cols[:, j].reshape(d ** s, d ** r) for j in range(cols.shape[1])]
    return IntertwinerSpace(group, r, s, basis)


def flip_permutation(d: int, r: int, s: int) -> np.ndarray:
    """Index permutation of the flip: e_j maps to e_perm[j].

    Flat indices are big-endian in the tensor factors, so the flip
    exchanging the first r with the last s factors sends the index
    ``left * d**s + right`` to ``right * d**r + left``.
    """
    n = d ** (r + s)
    j = np.arange(n)
    left, right = j // d ** s, j % d ** s
    return right * d ** r + left


def _perm_kron_left(perm: np.ndarray, m: int) -> np.ndarray:
    """Permutation of kron(P, I_m)."""
    return (perm[:, None] * m + np.arange(m)[None, :]).ravel()


def _perm_kron_right(m: int, perm: np.ndarray) -> np.ndarray:
    """Permutation of kron(I_m, P)."""
    n = len(perm)
    return (np.arange(m)[:, None] * n + perm[None, :]).ravel()


@dataclass
class SymmetryOperator:
    """The unitary flipping the first r tensor factors past the last s,
    held as an index permutation with the dense matrix on demand."""

    d: int
    r: int
    s: int
    perm: np.ndarray

    @property
    def size(self) -> int:
        return self.d ** (self.r + self.s)

    @property
    def matrix(self) -> np.ndarray:
        if self.size > SIZE_CAP:
            raise SizeCapExceeded(
                f"dense flip of size {self.size} exceeds cap {SIZE_CAP}"
            )
        m = np.zeros((self.size, self.size))
        m[self.perm, np.arange(self.size)] = 1.0
        return m

    def apply_left(self, x) -> np.ndarray:
        """E @ x via row scatter."""
        x = np.asarray(x, dtype=complex)
        out = np.empty_like(x)
        out[self.perm] = x
        return out

    def apply_right(self, x) -> np.ndarray:
        """x @ E via column gather."""
        x = np.asarray(x, dtype=complex)
        return x[:, self.perm]


def flip_symmetry(d: int, r: int, s: int, cap: int = SIZE_CAP) -> SymmetryOperator:
    """The block flip between the r-fold and s-fold tensor powers."""
    if r < 0 or s < 0:
        raise ValueError("powers must be nonnegative")
    _check_cap(d, r + s, cap)
    return SymmetryOperator(d, r, s, flip_permutation(d, r, s))


@dataclass
class SymmetryReport:
    flip_involution_exact: bool
    unit_exact: bool
    tensor_law_exact: bool
    naturality_residual: float
    rmax: int
    d: int

    @property
    def ok(self) -> bool:
        return (self.flip_involution_exact and self.unit_exact
                and self.tensor_law_exact)


def check_symmetry_axioms(d: int, rmax: int, eps: float = DEFAULT_EPS,
                          seed: int = 0, group: FiniteMatrixGroup | None = None,
                          dense_cap: int = SIZE_CAP) -> SymmetryReport:
    """Verify the flip coherence identities and naturality.

    The involution, unit and tensor-composition identities are checked
    exactly on the index permutations for all powers up to rmax.
    Naturality is checked on random linear maps (and on random group
    intertwiners when a group is supplied), with the max residual
    reported.
    """
    involution = unit = tensor = True
    for r in range(rmax + 1):
        for s in range(rmax + 1):
            p_rs = flip_permutation(d, r, s)
            p_sr = flip_permutation(d, s, r)
            if not np.array_equal(p_rs[p_sr], np.arange(len(p_rs))):
                involution = False
            if (r == 0 or s == 0) and not np.array_equal(p_rs, np.arange(len(p_rs))):
                unit = False
    for r in range(rmax + 1):
        for s in range(rmax + 1):
            for t in range(rmax + 1):
                whole = flip_permutation(d, r + s, t)
                left = _perm_kron_left(flip_permutation(d, r, t), d ** s)
                right = _perm_kron_right(d ** r, flip_permutation(d, s, t))
                if not np.array_equal(whole, left[right]):
                    tensor = False

    rng = np.random.default_rng(seed)
    residual = 0.0

    def random_map(rows, cols):
        return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))

    pairs = [(r1, s1, r2, s2)
             for r1 in range(rmax + 1) for s1 in range(rmax + 1)
             for r2 in range(rmax + 1) for s2 in range(rmax + 1)
             if d ** (r1 + r2) <= dense_cap and d ** (s1 + s2) <= dense_cap]
    for r1, s1, r2, s2 in pairs:
        t1 = random_map(d ** s1, d ** r1)
        t2 = random_map(d ** s2, d ** r2)
        if group is not None:
            sp1 = intertwiner_basis(group, r1, s1)
            sp2 = intertwiner_basis(group, r2, s2)
            if sp1.basis:
                t1 = sp1.project(t1)
            if sp2.basis:
                t2 = sp2.project(t2)
        flip_in = flip_symmetry(d, r1, r2)
        flip_out = flip_symmetry(d, s1, s2)
        lhs = flip_in.apply_right(np.kron(t2, t1))
        rhs = flip_out.apply_left(np.kron(t1, t2))
        residual = max(residual, max_norm(lhs - rhs))
    return SymmetryReport(involution, unit, tensor, residual, rmax, d)


@dataclass
class ConjugateReport:
    left_residual: float
    right_residual: float
    invariance_residual: float

    def ok(self, eps: float = DEFAULT_EPS) -> bool:
        return max(self.left_residual, self.right_residual,
                   self.invariance_residual) <= eps


def conjugate_solution(d: int, group: FiniteMatrixGroup | None = None):
    """Canonical solution of the conjugate equations for the defining
    representation and its entrywise conjugate.

    Returns the pairing vector R = sum_i e_i (x) e_i as a d^2-by-1
    matrix, and a report with the two contraction residuals and (when a
    group is given) the worst invariance residual of (conj g (x) g) R = R
    over the generators.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    r_vec = np.eye(d, dtype=complex).reshape(d * d, 1)
    eye = np.eye(d, dtype=complex)
    left = np.kron(r_vec.conj().T, eye) @ np.kron(eye, r_vec)
    right = np.kron(r_vec.conj().T, eye) @ np.kron(eye, r_vec)
    left_res = max_norm(left - eye)
    right_res = max_norm(right - eye)
    inv_res = 0.0
    if group is not None:
        if group.dimension != d:
            raise DimensionMismatch("group dimension does not match d")
        for g in group.generators:
            inv_res = max(inv_res, max_norm(np.kron(g.conj(), g) @ r_vec - r_vec))
    return r_vec, ConjugateReport(left_res, right_res, inv_res)


def _spaces_upto(group: FiniteMatrixGroup, rmax: int, eps: float, cap: int):
    spaces = {}
    d = group.dimension
    for r in range(rmax + 1):
        for s in range(rmax + 1):
            if d ** (r + s) <= cap:
                spaces[(r, s)] = intertwiner_basis(group, r, s, eps, cap)
    return spaces


@dataclass
class NormalizerVerdict:
    """Outcome of a normalizer test, truthy iff the unitary normalizes.

    ``evidence`` maps (r, s) to the worst residual of conjugated basis
    intertwiners against the same intertwiner space; rmax records how far
    the cross-check went.
    """

    member: bool
    evidence: dict
    rmax: int

    def __bool__(self):
        return self.member

    @property
    def max_evidence_residual(self) -> float:
        return max(self.evidence.values(), default=0.0)


def normalizer_membership(group: FiniteMatrixGroup, u, rmax: int = 3,
                          eps: float = DEFAULT_EPS,
                          cap: int = SIZE_CAP) -> NormalizerVerdict:
    """Exact normalizer test with an intertwiner-preservation cross-check.

    Membership is decided by u g u* staying in the group for every
    generator g.  The evidence records, for each (r, s) up to rmax, how
    well conjugation by tensor powers of u maps the intertwiner space
    into itself; when the primary test passes these residuals vanish up
    to rounding.
    """
    u = require_unitary(u, eps)
    if u.shape != (group.dimension, group.dimension):
        raise DimensionMismatch("unitary dimension does not match group")
    member = group.normalizes(u, eps)
    evidence = {}
    for (r, s), space in _spaces_upto(group, rmax, eps, cap).items():
        ur = kron_power(u, r)
        us = kron_power(u, s)
        worst = 0.0
        for t in space.basis:
            worst = max(worst, space.residual(us @ t @ ur.conj().T))
        evidence[(r, s)] = worst
    return NormalizerVerdict(member, evidence, rmax)


def tannaka_dual_membership(group: FiniteMatrixGroup, u, rmax: int = 3,
                            eps: float = DEFAULT_EPS, cap: int = SIZE_CAP,
                            _spaces=None) -> bool:
    """True iff tensor powers of u commute with every intertwiner of the
    group up to rmax: kron(u, s) t = t kron(u, r) for all basis t."""
    u = require_unitary(u, eps)
    if u.shape != (group.dimension, group.dimension):
        raise DimensionMismatch("unitary dimension does not match group")
    spaces = _spaces if _spaces is not None else _spaces_upto(group, rmax, eps, cap)
    powers = {k: kron_power(u, k) for k in range(rmax + 1)}
    for (r, s), space in spaces.items():
        for t in space.basis:
            if max_norm(powers[s] @ t - t @ powers[r]) > eps:
                return False
    return True


def dual_recover_in_ambient(group: FiniteMatrixGroup, ambient: FiniteMatrixGroup,
                            rmax: int = 3, eps: float = DEFAULT_EPS,
                            cap: int = SIZE_CAP) -> FiniteMatrixGroup:
    """Members of the ambient group fixed by all intertwiners of ``group``.

    This is the ambient trace of the Tannaka dual: always a subgroup of
    the ambient containing ``group``.
    """
    if group.dimension != ambient.dimension:
        raise DimensionMismatch("group and ambient live in different dimensions")
    for e in group.elements:
        if not ambient.contains(e):
            raise NotSubgroup("group is not contained in the ambient group")
    spaces = _spaces_upto(group, rmax, eps, cap)
    members = [
        e for e in ambient.elements
        if tannaka_dual_membership(group, e, rmax, eps, cap, _spaces=spaces)
    ]
    return FiniteMatrixGroup(group.dimension, members, generators=members,
                             eps=group.eps)
