"""Finite posets, their low-degree simplicial sets, paths, path frames,
and a finite presentation of the fundamental group.

A 1-simplex is a triple ``(d0, d1; support)`` with both faces below the
support; it is read as a line from ``d1`` to ``d0``.  A 2-simplex is a
triple of 1-simplices ``(f0, f1, f2)`` under a common support with the
face identities

    d0(f0) = d0(f1),   d1(f0) = d0(f2),   d1(f1) = d1(f2),

so f2 runs x -> y, f0 runs y -> z and f1 runs x -> z.  Every unitary
cocycle must satisfy ``z(f0) z(f2) = z(f1)`` on each such triple, which
is why the fundamental group is presented here with one generator per
1-simplex and one relation per 2-simplex (plus degeneracy and
spanning-tree relations).
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    CycleDetected,
    Disconnected,
    NotComposable,
    UnknownGenerator,
    WordNotReducible,
)

FORWARD = 1
REVERSE = -1


class Simplex1(NamedTuple):
    d0: str
    d1: str
    support: str

    @property
    def degenerate(self) -> bool:
        return self.d0 == self.d1 == self.support


class Simplex2(NamedTuple):
    f0: Simplex1
    f1: Simplex1
    f2: Simplex1
    support: str


def step_start(simplex: Simplex1, orientation: int) -> str:
    return simplex.d1 if orientation == FORWARD else simplex.d0


def step_end(simplex: Simplex1, orientation: int) -> str:
    return simplex.d0 if orientation == FORWARD else simplex.d1


@dataclass(frozen=True)
class Path:
    """A composable sequence of oriented 1-simplices.

    ``steps`` are listed in traversal order; an empty path is anchored
    at ``start``.
    """

    start: str
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        at = self.start
        for simplex, orientation in self.steps:
            if step_start(simplex, orientation) != at:
                raise NotComposable(
                    f"step {simplex} with orientation {orientation} "
                    f"does not start at {at}"
                )
            at = step_end(simplex, orientation)

    @property
    def end(self) -> str:
        if not self.steps:
            return self.start
        simplex, orientation = self.steps[-1]
        return step_end(simplex, orientation)

    def __len__(self):
        return len(self.steps)


def compose(first: Path, second: Path) -> Path:
    """``first * second``: the path running ``second`` and then ``first``."""
    if second.end != first.start:
        raise NotComposable(
            f"cannot compose: second ends at {second.end}, "
            f"first starts at {first.start}"
        )
    return Path(second.start, second.steps + first.steps)


def reverse(path: Path) -> Path:
    steps = tuple((s, -o) for s, o in reversed(path.steps))
    return Path(path.end, steps)


class Poset:
    """A finite poset stored as the full order relation.

    Construct with :func:`close_order`; the constructor validates the
    order axioms and pathwise connectedness of the comparability graph.
    """

    def __init__(self, elements: Iterable[str], leq: Iterable[tuple]):
        self.elements = tuple(sorted(set(elements)))
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._leq = frozenset(leq)
        self._validate()
        self._below = {
            s: tuple(x for x in self.elements if (x, s) in self._leq)
            for s in self.elements
        }
        self._s1 = None
        self._s2 = None
        self._frames = {}
        self._presentations = {}

    def _validate(self):
        els, rel = self.elements, self._leq
        for a, b in rel:
            if a not in self._index or b not in self._index:
                raise KeyError(f"relation mentions unknown element {(a, b)}")
        for a in els:
            if (a, a) not in rel:
                raise CycleDetected(f"relation is not reflexive at {a}")
        for a, b in rel:
            if a != b and (b, a) in rel:
                raise CycleDetected(f"{a} and {b} are in a cycle")
        for a, b in rel:
            for c in els:
                if (b, c) in rel and (a, c) not in rel:
                    raise CycleDetected(f"relation is not transitive at {(a, b, c)}")
        # pathwise connectedness of the comparability graph
        if els:
            seen = {els[0]}
            queue = deque([els[0]])
            while queue:
                x = queue.popleft()
                for y in self.comparables(x):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            if len(seen) != len(els):
                raise Disconnected(
                    f"comparability graph has {len(els) - len(seen)} "
                    "unreachable elements"
                )

    def __eq__(self, other):
        return (
            isinstance(other, Poset)
            and self.elements == other.elements
            and self._leq == other._leq
        )

    def __hash__(self):
        return hash((self.elements, self._leq))

    def __len__(self):
        return len(self.elements)

    def leq(self, a, b) -> bool:
        return (a, b) in self._leq

    def comparable(self, a, b) -> bool:
        return (a, b) in self._leq or (b, a) in self._leq

    def comparables(self, a):
        return [b for b in self.elements if b != a and self.comparable(a, b)]

    def below(self, s):
        return self._below[s]

    def simplices1(self):
        """All triples (d0, d1; s) with both faces below s, in canonical order."""
        if self._s1 is None:
            out = []
            for s in self.elements:
                for d0 in self._below[s]:
                    for d1 in self._below[s]:
                        out.append(Simplex1(d0, d1, s))
            self._s1 = tuple(out)
        return self._s1

    def simplices2(self):
        """All face-compatible triples of 1-simplices under a common support."""
        if self._s2 is None:
            out = []
            s1 = self.simplices1()
            for s in self.elements:
                below = self._below[s]
                bset = set(below)
                by_ends = defaultdict(list)
                for b in s1:
                    if b.support in bset:
                        by_ends[(b.d1, b.d0)].append(b)
                for x in below:
                    for y in below:
                        f2s = by_ends.get((x, y))
                        if not f2s:
                            continue
                        for z in below:
                            f0s = by_ends.get((y, z))
                            f1s = by_ends.get((x, z))
                            if not f0s or not f1s:
                                continue
                            for f0 in f0s:
                                for f1 in f1s:
                                    for f2 in f2s:
                                        out.append(Simplex2(f0, f1, f2, s))
            self._s2 = tuple(out)
        return self._s2


def close_order(elements: Iterable[str], cover_pairs: Iterable[tuple]) -> Poset:
    """Build a poset from cover pairs ``(lower, upper)``.

    Takes the reflexive-transitive closure and rejects inputs whose
    closure violates antisymmetry or leaves the comparability graph
    disconnected.
    """
    els = sorted(set(elements))
    index = set(els)
    up = {a: set() for a in els}
    for a, b in cover_pairs:
        if a not in index or b not in index:
            raise KeyError(f"cover pair {(a, b)} mentions unknown element")
        up[a].add(b)

    reach = {a: _reachable(up, a) for a in els}
    leq = set()
    for a in els:
        for b in reach[a]:
            if b != a and a in reach[b]:
                raise CycleDetected(f"{a} and {b} lie on a directed cycle")
            leq.add((a, b))
    return Poset(els, leq)


def _reachable(up, start):
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in up[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


@dataclass(frozen=True)
class PathFrame:
    """A base element together with one path o -> base for every o."""

    base: str
    routes: Mapping[str, Path]
    tree: frozenset = frozenset()


def path_frame(poset: Poset, base: str) -> PathFrame:
    """Breadth-first path frame over the comparability graph.

    Routes are built from 1-simplices of the form (o', o; o') and their
    reverses; ties are broken lexicographically so the frame is stable
    across runs.
    """
    if base not in poset.elements:
        raise KeyError(f"base {base!r} is not an element")
    if base in poset._frames:
        return poset._frames[base]
    routes = {base: Path(base)}
    tree = set()
    queue = deque([base])
    while queue:
        c = queue.popleft()
        for n in sorted(poset.comparables(c)):
            if n in routes:
                continue
            if poset.leq(n, c):
                simplex = Simplex1(c, n, c)
                step = (simplex, FORWARD)
            else:
                simplex = Simplex1(n, c, n)
                step = (simplex, REVERSE)
            routes[n] = compose(routes[c], Path(n, (step,)))
            tree.add(simplex)
            queue.append(n)
    frame = PathFrame(base, routes, frozenset(tree))
    poset._frames[base] = frame
    return frame


# ---------------------------------------------------------------------------
# words: tuples of nonzero signed 1-based generator indices, multiplied
# left to right.


def free_reduce(word) -> tuple:
    out = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def invert_word(word) -> tuple:
    return tuple(-letter for letter in reversed(word))


def cyclic_reduce(word) -> tuple:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def canonical_relator(word) -> tuple:
    """Least rotation of the cyclically reduced word or its inverse."""
    w = cyclic_reduce(word)
    if not w:
        return w
    best = None
    for u in (w, invert_word(w)):
        for i in range(len(u)):
            cand = u[i:] + u[:i]
            if best is None or cand < best:
                best = cand
    return best


def _tietze(num_gens: int, relators, killed):
    """Bounded Tietze simplification.

    Only two moves are used: killing a generator forced trivial (by a
    length-1 relator or by fiat) and eliminating a generator through a
    length-2 relator on two distinct generators.  Substituted words are
    freely and cyclically reduced, so relator length never grows.

    Returns (alive, relators, log) where ``log`` records eliminations in
    order as ``(generator, replacement word)``.
    """
    relset = set()
    for w in relators:
        c = canonical_relator(w)
        if c:
            relset.add(c)
    alive = set(range(1, num_gens + 1))
    log = []

    def eliminate(g, repl):
        alive.discard(g)
        log.append((g, repl))
        new = set()
        for w in relset:
            if any(abs(letter) == g for letter in w):
                out = []
                for letter in w:
                    if abs(letter) == g:
                        out.extend(repl if letter > 0 else invert_word(repl))
                    else:
                        out.append(letter)
                w = canonical_relator(tuple(out))
            if w:
                new.add(w)
        return new

    for g in killed:
        if g in alive:
            relset = eliminate(g, ())

    changed = True
    while changed:
        changed = False
        for w in sorted(relset, key=lambda w: (len(w), w)):
            if len(w) == 1:
                relset = eliminate(abs(w[0]), ())
                changed = True
                break
            if len(w) == 2 and abs(w[0]) != abs(w[1]):
                a, b = w
                if abs(a) > abs(b):
                    victim, other = a, b
                else:
                    victim, other = b, a
                # cyclic word (a, b): M(victim) M(other) = 1
                repl = (-other,) if victim > 0 else (other,)
                relset = eliminate(abs(victim), repl)
                changed = True
                break
    return alive, relset, log


@dataclass(frozen=True)
class Pi1Presentation:
    """Finite presentation of the fundamental group at a base element.

    Generators are the 1-simplices of the poset (1-based indices into
    ``gens``); ``alive`` lists the indices surviving simplification and
    ``relators`` are words over the alive indices.  ``rewrite`` expands
    any original generator into a word over the alive ones.
    """

    poset: Poset
    base: str
    gens: tuple
    alive: tuple
    relators: tuple
    rewrite: Mapping[int, tuple] = field(repr=False)

    @property
    def num_generators(self) -> int:
        return len(self.alive)

    @property
    def num_relations(self) -> int:
        return len(self.relators)

    def generator_simplices(self):
        return [self.gens[i - 1] for i in self.alive]

    def index_of(self, simplex: Simplex1) -> int:
        try:
            return self._gen_index()[simplex]
        except KeyError:
            raise UnknownGenerator(f"{simplex} is not a 1-simplex of the poset")

    def _gen_index(self):
        cache = getattr(self, "_idx_cache", None)
        if cache is None:
            cache = {b: i + 1 for i, b in enumerate(self.gens)}
            object.__setattr__(self, "_idx_cache", cache)
        return cache

    def expand(self, word) -> tuple:
        """Rewrite a word over original generators into alive generators."""
        out = []
        for letter in word:
            g = abs(letter)
            if g not in self.rewrite:
                raise WordNotReducible(f"generator {g} escaped the elimination log")
            repl = self.rewrite[g]
            out.extend(repl if letter > 0 else invert_word(repl))
        return free_reduce(out)

    def word_of_path(self, path: Path) -> tuple:
        """The path as a word over original generators, in product order."""
        idx = self._gen_index()
        letters = []
        for simplex, orientation in reversed(path.steps):
            if simplex not in idx:
                raise UnknownGenerator(f"{simplex} is not a 1-simplex of the poset")
            letters.append(orientation * idx[simplex])
        return tuple(letters)

    def loop_word(self, frame: PathFrame, generator) -> tuple:
        """Expanded word of the closed loop attached to a generator."""
        return self.expand(self.word_of_path(loop_of_generator(self, frame, generator)))

    def abelian_matrix(self):
        """Exponent-sum matrix of the relators (rows) in the alive
        generators (columns); integer entries."""
        pos = {g: j for j, g in enumerate(self.alive)}
        rows = []
        for w in self.relators:
            row = [0] * len(self.alive)
            for letter in w:
                row[pos[abs(letter)]] += 1 if letter > 0 else -1
            rows.append(row)
        return rows


def pi1_presentation(poset: Poset, base: str) -> Pi1Presentation:
    """Present the fundamental group of the poset at ``base``.

    Generators: all 1-simplices.  Relations: ``g(f0) g(f2) = g(f1)`` for
    every 2-simplex, triviality of the fully degenerate 1-simplices, and
    triviality of the BFS spanning-tree simplices.  The result is then
    simplified by bounded Tietze moves.
    """
    if base in poset._presentations:
        return poset._presentations[base]
    frame = path_frame(poset, base)
    gens = poset.simplices1()
    index = {b: i + 1 for i, b in enumerate(gens)}
    relators = []
    for c in poset.simplices2():
        relators.append((index[c.f0], index[c.f2], -index[c.f1]))
    killed = sorted(
        {index[b] for b in gens if b.degenerate}
        | {index[b] for b in frame.tree}
    )
    alive, relset, log = _tietze(len(gens), relators, killed)

    rewrite = {g: (g,) for g in alive}
    for g, repl in reversed(log):
        out = []
        for letter in repl:
            word = rewrite[abs(letter)]
            out.extend(word if letter > 0 else invert_word(word))
        rewrite[g] = free_reduce(out)

    pres = Pi1Presentation(
        poset=poset,
        base=base,
        gens=gens,
        alive=tuple(sorted(alive)),
        relators=tuple(sorted(relset)),
        rewrite=rewrite,
    )
    poset._presentations[base] = pres
    return pres


def loop_of_generator(presentation: Pi1Presentation, frame: PathFrame, generator) -> Path:
    """The closed path route(d0 b) * b * route(d1 b)^-1 at the base."""
    if isinstance(generator, Simplex1):
        simplex = generator
        if simplex not in presentation._gen_index():
            raise UnknownGenerator(f"{simplex} is not a 1-simplex of the poset")
    else:
        g = int(generator)
        if not 1 <= g <= len(presentation.gens):
            raise UnknownGenerator(f"generator index {generator} out of range")
        simplex = presentation.gens[g - 1]
    if frame.base != presentation.base:
        raise UnknownGenerator(
            f"frame base {frame.base!r} does not match presentation base "
            f"{presentation.base!r}"
        )
    middle = Path(simplex.d1, ((simplex, FORWARD),))
    out = compose(middle, reverse(frame.routes[simplex.d1]))
    return compose(frame.routes[simplex.d0], out)
