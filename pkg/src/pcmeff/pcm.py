"""Pairwise comparison matrices, canonical perturbed forms and structure classification.

A pairwise comparison matrix (PCM) is a positive square matrix with
a_ij * a_ji = 1.  A PCM is consistent when a_ik * a_kj = a_ij for every
triple; a consistent PCM is generated by a base vector x through
a_ij = x_{j-1} / x_{i-1} (with x_0 = 1, indices 1-based as in the ratio
scale convention).  This module builds those canonical forms, applies one-
or two-entry multiplicative perturbations to them, and solves the inverse
problem: given an arbitrary PCM, find the minimal set of entry edits (0, 1
or 2 upper-triangle cells plus reciprocals) that restores consistency.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    InvalidCaseError,
    NonPositiveEntryError,
    NotSquareError,
    ReciprocityViolationError,
)

RECIPROCITY_TOL = 1e-12
DEFAULT_CONSISTENCY_TOL = 1e-9


class Pcm:
    """Validated positive reciprocal matrix.

    The entry array is stored read-only; validation rejects rather than
    repairs, so a reciprocity violation in the input surfaces as an error
    instead of being silently overwritten.
    """

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotSquareError(f"expected a square matrix, got shape {a.shape}")
        n = a.shape[0]
        if n < 2:
            raise NotSquareError(f"matrix order must be at least 2, got {n}")
        for i in range(n):
            for j in range(n):
                v = a[i, j]
                if not np.isfinite(v) or v <= 0.0:
                    raise NonPositiveEntryError(i, j, float(v))
        for i in range(n):
            for j in range(i, n):
                prod = a[i, j] * a[j, i]
                if abs(prod - 1.0) > RECIPROCITY_TOL * max(1.0, abs(prod)):
                    raise ReciprocityViolationError(i, j, float(prod))
        a.setflags(write=False)
        self._a = a

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Read-only view of the matrix."""
        return self._a

    def __getitem__(self, idx):
        return self._a[idx]

    def __eq__(self, other):
        return isinstance(other, Pcm) and np.array_equal(self._a, other._a)

    def __repr__(self):
        return f"Pcm(n={self.n})"


def make_pcm(entries) -> Pcm:
    """Validate an array of ratios into a :class:`Pcm`."""
    return Pcm(entries)


class PerturbationKind(str, Enum):
    """How far a PCM is from consistency, measured in entry edits.

    ``CASE1``: the two perturbed cells share a row (canonically (1,2) and
    (1,3), 1-based).  ``CASE2A``/``CASE2B``: the perturbed cells lie in
    disjoint rows (canonically (1,2) and (3,4)); the 4x4 situation is kept
    separate from order >= 5 because its spectral structure differs.
    """

    CONSISTENT = "consistent"
    SIMPLE = "simple"
    CASE1 = "case1"
    CASE2A = "case2a"
    CASE2B = "case2b"
    OTHER = "other"


DOUBLE_KINDS = (PerturbationKind.CASE1, PerturbationKind.CASE2A, PerturbationKind.CASE2B)


@dataclass(frozen=True)
class PerturbationStructure:
    """Consistent base plus multiplicative perturbation parameters.

    ``base`` holds x_1..x_{n-1} in canonical labeling (gauge x_0 = 1, the
    first alternative is the numeraire).  ``positions`` are the perturbed
    upper-triangle cells in the *original* matrix indices (0-based);
    ``permutation`` maps canonical index -> original index so that
    relabeling by it puts the perturbations into the canonical cells.
    ``alternatives`` lists any other minimal position sets a classified
    matrix admits (the primary one is the lexicographically smallest).
    """

    kind: PerturbationKind
    n: int
    base: tuple[float, ...] | None = None
    delta: float | None = None
    gamma: float | None = None
    positions: tuple[tuple[int, int], ...] = ()
    permutation: tuple[int, ...] | None = None
    alternatives: tuple[tuple[tuple[int, int], ...], ...] = ()


def consistent_pcm(base) -> Pcm:
    """Build the consistent PCM generated by base ratios x_1..x_{n-1}."""
    x = np.asarray(base, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise InvalidCaseError("base must be a vector of at least one positive ratio")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise InvalidCaseError("base ratios must be positive finite reals")
    y = np.concatenate(([1.0], x))
    return Pcm(y[None, :] / y[:, None])


def _perturbed_cells(kind: PerturbationKind) -> tuple[tuple[int, int], ...]:
    if kind == PerturbationKind.SIMPLE:
        return ((0, 1),)
    if kind == PerturbationKind.CASE1:
        return ((0, 1), (0, 2))
    return ((0, 1), (2, 3))


def apply_perturbation(structure: PerturbationStructure) -> Pcm:
    """Build the canonical perturbed matrix described by ``structure``.

    delta multiplies cell (0, 1); gamma multiplies (0, 2) when both
    perturbations share the first row, or (2, 3) when they are disjoint.
    Reciprocal cells are updated accordingly.
    """
    kind = structure.kind
    if kind not in (PerturbationKind.SIMPLE,) + DOUBLE_KINDS:
        raise InvalidCaseError(f"cannot apply perturbation for kind {kind.value!r}")
    if structure.base is None:
        raise InvalidCaseError("structure must carry a base vector")
    n = len(structure.base) + 1
    if kind == PerturbationKind.SIMPLE:
        if n < 3:
            raise InvalidCaseError("simple perturbation needs order >= 3")
        if structure.delta is None:
            raise InvalidCaseError("simple perturbation needs delta")
    else:
        if structure.delta is None or structure.gamma is None:
            raise InvalidCaseError("double perturbation needs delta and gamma")
        if n < 4:
            raise InvalidCaseError("double perturbation needs order >= 4")
        if kind == PerturbationKind.CASE2A and n != 4:
            raise InvalidCaseError(f"disjoint-row 4x4 form requires n = 4, got {n}")
        if kind == PerturbationKind.CASE2B and n < 5:
            raise InvalidCaseError(f"disjoint-row general form requires n >= 5, got {n}")

    a = np.array(consistent_pcm(structure.base).entries)
    factors = [structure.delta]
    if kind != PerturbationKind.SIMPLE:
        factors.append(structure.gamma)
    for (i, j), f in zip(_perturbed_cells(kind), factors):
        a[i, j] *= f
        a[j, i] = 1.0 / a[i, j]
    return Pcm(a)


def is_consistent(m: Pcm, tol: float = DEFAULT_CONSISTENCY_TOL) -> bool:
    """Check cardinal transitivity a_ik * a_kj = a_ij for all triples."""
    a = m.entries
    prod = a[:, :, None] * a[None, :, :]    # prod[i, k, j] = a_ik * a_kj
    return bool(np.all(np.abs(prod - a[:, None, :]) <= tol * a[:, None, :]))


def _upper_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _consistent_completion(a: np.ndarray, removed: tuple[tuple[int, int], ...], tol: float):
    """Try to complete the matrix consistently ignoring the ``removed`` cells.

    Treats the remaining upper-triangle cells as ratio constraints
    t_j / t_i = a_ij on node potentials t.  Potentials are propagated over
    a BFS spanning forest and every remaining cell is checked against them.
    Returns the potential vector, or None when no consistent completion
    exists.  (With at most two cells removed the constraint graph stays
    connected for n >= 4; a disconnected forest would make the completion
    non-unique, which cannot occur here because smaller removals are tried
    first.)
    """
    n = a.shape[0]
    removed_set = set(removed)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in _upper_pairs(n):
        if (i, j) not in removed_set:
            adj[i].append(j)
            adj[j].append(i)

    t = np.zeros(n)
    for root in range(n):
        if t[root] != 0.0:
            continue
        t[root] = 1.0
        queue = [root]
        while queue:
            u = queue.pop(0)
            for v in adj[u]:
                if t[v] == 0.0:
                    t[v] = t[u] * a[u, v]
                    queue.append(v)

    for i, j in _upper_pairs(n):
        if (i, j) in removed_set:
            continue
        expected = t[j] / t[i]
        if abs(a[i, j] - expected) > tol * a[i, j]:
            return None
    return t


def _canonical_permutation(n: int, positions: tuple[tuple[int, int], ...]) -> tuple[int, ...]:
    """Relabeling that moves the perturbed cells into their canonical spots."""
    if len(positions) == 0:
        return tuple(range(n))
    if len(positions) == 1:
        i, j = positions[0]
        head = [i, j]
    else:
        (i1, j1), (i2, j2) = positions
        nodes1, nodes2 = {i1, j1}, {i2, j2}
        shared = nodes1 & nodes2
        if shared:
            v = min(shared)
            others = sorted((nodes1 | nodes2) - {v})
            head = [v, others[0], others[1]]
        else:
            head = [i1, j1, i2, j2]
    rest = [k for k in range(n) if k not in head]
    return tuple(head + rest)


def classify_perturbation(m: Pcm, tol: float = DEFAULT_CONSISTENCY_TOL) -> PerturbationStructure:
    """Find the minimal perturbation structure of an arbitrary PCM.

    Searches subsets of upper-triangle cells of size 0, 1, 2 (in that
    order, so the reported edit count is minimal) for one whose removal
    leaves a consistently completable matrix.  Among equal-size repairs the
    lexicographically smallest position set is the primary one; the others
    are reported in ``alternatives``.  The recovered base is expressed in
    canonical labeling with the first relabeled alternative as numeraire.
    """
    a = m.entries
    n = m.n
    if n < 3:
        # order 2 is vacuously consistent (no triples)
        return PerturbationStructure(
            kind=PerturbationKind.CONSISTENT,
            n=n,
            base=tuple(a[0, 1:].tolist()),
            permutation=tuple(range(n)),
        )

    pairs = _upper_pairs(n)
    for size in (0, 1, 2):
        hits = []
        for removed in itertools.combinations(pairs, size):
            t = _consistent_completion(a, removed, tol)
            if t is not None:
                hits.append((removed, t))
        if hits:
            break
    else:
        return PerturbationStructure(kind=PerturbationKind.OTHER, n=n)

    hits.sort(key=lambda h: h[0])
    positions, t = hits[0]
    alternatives = tuple(h[0] for h in hits[1:])
    perm = _canonical_permutation(n, positions)
    tp = t[list(perm)]
    base = tuple((tp[1:] / tp[0]).tolist())

    def ratio(ci: int, cj: int) -> float:
        oi, oj = perm[ci], perm[cj]
        return float(a[oi, oj] * t[oi] / t[oj])

    if size == 0:
        kind = PerturbationKind.CONSISTENT
        delta = gamma = None
    elif size == 1:
        kind = PerturbationKind.SIMPLE
        delta, gamma = ratio(0, 1), None
    else:
        (i1, j1), (i2, j2) = positions
        if {i1, j1} & {i2, j2}:
            kind = PerturbationKind.CASE1
            delta, gamma = ratio(0, 1), ratio(0, 2)
        else:
            kind = PerturbationKind.CASE2A if n == 4 else PerturbationKind.CASE2B
            delta, gamma = ratio(0, 1), ratio(2, 3)

    return PerturbationStructure(
        kind=kind,
        n=n,
        base=base,
        delta=delta,
        gamma=gamma,
        positions=positions,
        permutation=perm,
        alternatives=alternatives,
    )


def reconstruct(structure: PerturbationStructure) -> Pcm:
    """Rebuild the matrix a classification describes, in original indices.

    For a structure returned by :func:`classify_perturbation` this inverts
    the canonical relabeling, so the result reproduces the classified
    matrix entry by entry (up to the classification tolerance).
    """
    if structure.kind == PerturbationKind.OTHER:
        raise InvalidCaseError("cannot reconstruct an unstructured matrix")
    if structure.kind == PerturbationKind.CONSISTENT:
        canonical = consistent_pcm(structure.base)
    else:
        canonical = apply_perturbation(structure)
    perm = structure.permutation or tuple(range(structure.n))
    a = np.empty_like(canonical.entries)
    idx = np.asarray(perm)
    a[np.ix_(idx, idx)] = canonical.entries
    return Pcm(a)
