"""Shared fixtures: corpus posets, random unitaries, standard matrices,
and an integer Smith-normal-form oracle for abelianizations."""
from __future__ import annotations

import numpy as np

from holonet.poset import close_order

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.diag([1.0, -1.0]).astype(complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def singleton():
    return close_order("a", [])


def chain2():
    return close_order("ab", [("a", "b")])


def vee():
    return close_order("abc", [("a", "c"), ("b", "c")])


def diamond():
    return close_order("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])


def pseudocircle():
    return close_order("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def theta():
    # two minimal and three maximal elements: wedge of two circles
    return close_order("abcde", [(x, y) for x in "ab" for y in "cde"])


def projective_plane():
    """Face poset of the regular cell structure on the projective plane
    obtained from the octahedron by identifying antipodes: 3 vertices,
    6 edges, 4 faces.  Every edge lies on exactly two faces, every
    vertex link is a 4-cycle and the Euler characteristic is 1, so the
    underlying surface is the projective plane."""
    edges = {
        "ab+": ("a", "b"), "ab-": ("a", "b"),
        "ac+": ("a", "c"), "ac-": ("a", "c"),
        "bc+": ("b", "c"), "bc-": ("b", "c"),
    }
    faces = {
        "F1": ("ab+", "ac+", "bc+"),
        "F2": ("ab+", "ac-", "bc-"),
        "F3": ("ab-", "ac+", "bc-"),
        "F4": ("ab-", "ac-", "bc+"),
    }
    covers = []
    for e, (u, v) in edges.items():
        covers += [(u, e), (v, e)]
    for f, es in faces.items():
        covers += [(e, f) for e in es]
    return close_order(list("abc") + list(edges) + list(faces), covers)


FREE_CORPUS = [
    ("singleton", singleton, 0),
    ("chain2", chain2, 0),
    ("vee", vee, 0),
    ("pseudocircle", pseudocircle, 1),
    ("theta", theta, 2),
]


def random_unitary(d, rng):
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(m)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_special_unitary(d, rng):
    u = random_unitary(d, rng)
    return u / np.linalg.det(u) ** (1.0 / d)


def smith_invariants(rows):
    """Nonzero diagonal of the Smith normal form of an integer matrix,
    given as a list of rows.  Returns [] for the zero matrix."""
    if not rows:
        return []
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0])
    invariants = []
    top = 0
    while top < min(nrows, ncols):
        # find a nonzero pivot
        pivot = None
        for i in range(top, nrows):
            for j in range(top, ncols):
                if m[i][j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        m[top], m[i] = m[i], m[top]
        for row in m:
            row[top], row[j] = row[j], row[top]
        # clear row and column by euclidean steps
        while True:
            moved = False
            for i in range(top + 1, nrows):
                if m[i][top] != 0:
                    q = m[i][top] // m[top][top]
                    for j in range(ncols):
                        m[i][j] -= q * m[top][j]
                    if m[i][top] != 0:
                        m[top], m[i] = m[i], m[top]
                    moved = True
            for j in range(top + 1, ncols):
                if m[top][j] != 0:
                    q = m[top][j] // m[top][top]
                    for row in m:
                        row[j] -= q * row[top]
                    if m[top][j] != 0:
                        for row in m:
                            row[top], row[j] = row[j], row[top]
                    moved = True
            if not moved:
                break
        invariants.append(abs(m[top][top]))
        top += 1
    return [v for v in invariants if v != 0]


def abelian_invariants(presentation):
    """(free_rank, torsion) of the abelianized presentation."""
    rows = presentation.abelian_matrix()
    inv = smith_invariants(rows)
    torsion = [v for v in inv if v > 1]
    rank = presentation.num_generators - len(inv)
    return rank, torsion
