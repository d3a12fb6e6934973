"""Exact search for almost k-covers of a given size over grid-spanned hyperplanes."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from itertools import combinations, islice
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceeded
from .cover import (
    CoverFamily,
    GridSpec,
    Hyperplane,
    appendix_cover,
    construct_layered_cover,
    construct_two_cover,
    lower_bound,
    verify_almost_cover,
)

log = logging.getLogger(__name__)

EXACT = "exact"
UPPER_ONLY = "upper-only"


@dataclass
class CandidateSet:
    grid: GridSpec
    excluded: Tuple[int, ...]
    planes: List[Hyperplane]
    points: List[Tuple[int, ...]]  # grid points other than ``excluded``, lex order
    incidence: List[Tuple[int, ...]]  # per plane: indices into ``points``

    def __len__(self) -> int:
        return len(self.planes)


def _det(mats: np.ndarray) -> np.ndarray:
    """Exact integer determinants of a batch of square matrices (Laplace expansion)."""
    d = mats.shape[-1]
    if d == 0:
        return np.ones(mats.shape[0], dtype=np.int64)
    if d == 1:
        return mats[:, 0, 0]
    if d == 2:
        return mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    out = np.zeros(mats.shape[0], dtype=np.int64)
    for j in range(d):
        minor = np.delete(np.delete(mats, 0, axis=1), j, axis=2)
        out += (-1) ** j * mats[:, 0, j] * _det(minor)
    return out


def _spanned_planes(pts: np.ndarray, chunk: int = 200_000) -> np.ndarray:
    """Normalized (coeffs, rhs) rows of all hyperplanes spanned by n of the given points."""
    k, n = pts.shape
    found = []
    it = combinations(range(k), n)
    while True:
        idx = np.array(list(islice(it, chunk)), dtype=np.int64)
        if idx.size == 0:
            break
        sel = pts[idx]  # (B, n, n)
        diffs = sel[:, 1:, :] - sel[:, :1, :]  # (B, n-1, n)
        normal = np.stack(
            [(-1) ** j * _det(np.delete(diffs, j, axis=2)) for j in range(n)], axis=1
        )
        keep = np.any(normal != 0, axis=1)
        normal = normal[keep]
        rhs = np.einsum("bi,bi->b", normal, sel[keep, 0, :])
        rows = np.concatenate([normal, rhs[:, None]], axis=1)
        g = np.gcd.reduce(np.abs(rows), axis=1)
        rows = rows // g[:, None]
        first = normal[np.arange(len(normal)), np.argmax(normal != 0, axis=1)]
        rows = rows * np.where(first < 0, -1, 1)[:, None]
        found.append(np.unique(rows, axis=0))
    if not found:
        return np.zeros((0, n + 1), dtype=np.int64)
    return np.unique(np.concatenate(found), axis=0)


def enumerate_candidates(g: GridSpec, excluded: Sequence[int] | None = None) -> CandidateSet:
    """Hyperplanes spanned by n affinely independent grid points, avoiding ``excluded``.

    Ordered by (sum of |coefficients|, coefficients, rhs).
    """
    excluded = tuple(excluded) if excluded is not None else g.origin()
    if not g.contains(excluded):
        raise ValueError(f"excluded point {excluded} not in grid")
    points = [p for p in g.points() if p != excluded]
    if g.n == 1:
        planes = [Hyperplane((1,), j) for j in range(g.m + 1) if j != excluded[0]]
    else:
        rows = _spanned_planes(np.array(list(g.points()), dtype=np.int64))
        planes = [Hyperplane(tuple(int(c) for c in r[:-1]), int(r[-1])) for r in rows]
        planes = [h for h in planes if not h.contains(excluded)]
    planes = sorted(set(planes), key=Hyperplane.sort_key)
    P = np.array(points, dtype=np.int64)
    incidence = []
    for h in planes:
        on = np.nonzero(P @ np.array(h.coeffs, dtype=np.int64) == h.rhs)[0]
        incidence.append(tuple(int(i) for i in on))
    return CandidateSet(g, excluded, planes, points, incidence)


class _Search:
    def __init__(self, cands: CandidateSet, k: int, size: int, prune: bool, max_nodes: Optional[int]):
        self.c = cands
        self.k = k
        self.size = size
        self.prune = prune
        self.max_nodes = max_nodes
        self.nodes = 0
        npts = len(cands.points)
        self.deficit = [k] * npts
        self.total = k * npts
        self.count = [0] * len(cands.planes)
        self.forbidden = [0] * len(cands.planes)  # nesting depth counter
        self.through: List[List[int]] = [[] for _ in range(npts)]
        for ci, inc in enumerate(cands.incidence):
            for p in inc:
                self.through[p].append(ci)
        # number of still-deficient points on each plane; the histogram counts only
        # usable planes (not forbidden, below the multiplicity cap) so the best
        # available gain is found without scanning every candidate
        self.gain = [len(inc) for inc in cands.incidence]
        self.hist = [0] * (npts + 1)
        for gv in self.gain:
            self.hist[gv] += 1
        self.top = max(self.gain, default=0)
        self.chosen: List[int] = []
        self.undo: List[List[int]] = []

    def _usable(self, ci: int) -> bool:
        return not self.forbidden[ci] and self.count[ci] < self.k

    def _hist_drop(self, ci: int):
        self.hist[self.gain[ci]] -= 1

    def _hist_restore(self, ci: int):
        gv = self.gain[ci]
        self.hist[gv] += 1
        if gv > self.top:
            self.top = gv

    def _forbid(self, ci: int):
        if self._usable(ci):
            self._hist_drop(ci)
        self.forbidden[ci] += 1

    def _allow(self, ci: int):
        self.forbidden[ci] -= 1
        if self._usable(ci):
            self._hist_restore(ci)

    def _add(self, ci: int):
        if self.count[ci] == self.k - 1 and not self.forbidden[ci]:
            self._hist_drop(ci)
        self.count[ci] += 1
        self.chosen.append(ci)
        touched = []
        for p in self.c.incidence[ci]:
            if self.deficit[p] > 0:
                self.deficit[p] -= 1
                self.total -= 1
                touched.append(p)
                if self.deficit[p] == 0:
                    gain, hist = self.gain, self.hist
                    for cj in self.through[p]:
                        if self._usable(cj):
                            hist[gain[cj]] -= 1
                            hist[gain[cj] - 1] += 1
                        gain[cj] -= 1
        self.undo.append(touched)

    def _remove(self, ci: int):
        self.chosen.pop()
        for p in self.undo.pop():
            if self.deficit[p] == 0:
                gain, hist = self.gain, self.hist
                for cj in self.through[p]:
                    if self._usable(cj):
                        hist[gain[cj]] -= 1
                        hist[gain[cj] + 1] += 1
                        if gain[cj] + 1 > self.top:
                            self.top = gain[cj] + 1
                    gain[cj] += 1
            self.deficit[p] += 1
            self.total += 1
        self.count[ci] -= 1
        if self.count[ci] == self.k - 1 and not self.forbidden[ci]:
            self._hist_restore(ci)

    def run(self) -> Optional[List[int]]:
        if self.total == 0:
            return self._pad([])
        if not self.c.points:
            return None
        return self._dfs(self.size)

    def _pad(self, chosen: List[int]) -> Optional[List[int]]:
        have = len(chosen)
        counts = {}
        for ci in chosen:
            counts[ci] = counts.get(ci, 0) + 1
        out = list(chosen)
        for ci in range(len(self.c.planes)):
            while have < self.size and counts.get(ci, 0) < self.k:
                out.append(ci)
                counts[ci] = counts.get(ci, 0) + 1
                have += 1
        return out if have == self.size else None

    def _dfs(self, budget: int) -> Optional[List[int]]:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded(
                f"search exceeded {self.max_nodes} nodes", self.nodes,
                {"size": self.size, "k": self.k, "depth": len(self.chosen)},
            )
        if self.total == 0:
            return self._pad(self.chosen)
        if budget == 0:
            return None
        # most deficient point, ties broken by grid order
        p = max(range(len(self.deficit)), key=lambda i: (self.deficit[i], -i))
        if self.prune:
            if self.deficit[p] > budget:
                return None
            # no usable plane adds more than the largest gain
            while self.top and not self.hist[self.top]:
                self.top -= 1
            if self.top == 0 or budget * self.top < self.total:
                return None
        options = [ci for ci in self.through[p] if not self.forbidden[ci] and self.count[ci] < self.k]
        if self.prune and sum(self.k - self.count[ci] for ci in options) < self.deficit[p]:
            return None
        banned = []
        try:
            for ci in options:
                self._add(ci)
                found = self._dfs(budget - 1)
                self._remove(ci)
                if found is not None:
                    return found
                # solutions through p using ci are exhausted
                self._forbid(ci)
                banned.append(ci)
        finally:
            for ci in reversed(banned):
                self._allow(ci)
        return None


def find_cover(
    g: GridSpec,
    k: int,
    size: int,
    excluded: Sequence[int] | None = None,
    *,
    candidates: Optional[CandidateSet] = None,
    prune: bool = True,
    max_nodes: Optional[int] = None,
) -> Optional[CoverFamily]:
    """Exhaustive branch and bound for an almost k-cover of total multiplicity ``size``.

    Returns ``None`` when no such family exists among the candidate planes.
    Each plane is used at most ``k`` times.  A cover found below ``size`` is
    padded with further candidate planes in candidate order.
    """
    excluded = tuple(excluded) if excluded is not None else g.origin()
    cands = candidates if candidates is not None else enumerate_candidates(g, excluded)
    fam, _ = _find(cands, k, size, prune, max_nodes)
    return fam


def _find(cands: CandidateSet, k: int, size: int, prune: bool = True,
          max_nodes: Optional[int] = None) -> Tuple[Optional[CoverFamily], int]:
    if k < 1 or size < 0:
        raise ValueError("need k >= 1 and size >= 0")
    s = _Search(cands, k, size, prune, max_nodes)
    chosen = s.run()
    log.debug("search m=%d n=%d k=%d size=%d nodes=%d found=%s",
              cands.grid.m, cands.grid.n, k, size, s.nodes, chosen is not None)
    if chosen is None:
        return None, s.nodes
    fam = CoverFamily([(cands.planes[ci], 1) for ci in chosen])
    # the verifier, not the searcher, decides
    if not verify_almost_cover(cands.grid, k, fam, cands.excluded).satisfied:
        raise AssertionError(f"search returned an invalid family {fam}")
    return fam, s.nodes


@dataclass
class Certificate:
    m: int
    n: int
    k: int
    value: int
    lower: int
    lower_tag: str
    witness: CoverFamily
    status: str
    source: str
    nodes: int = 0
    tried: List[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "k": self.k,
            "value": self.value,
            "lower": self.lower,
            "lower_tag": self.lower_tag,
            "status": self.status,
            "source": self.source,
            "nodes": self.nodes,
            "tried": self.tried,
            "witness": self.witness.to_text().splitlines(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _fallback_witness(g: GridSpec, k: int) -> CoverFamily:
    if k == 2 and g.n >= 2:
        return construct_two_cover(g)
    return construct_layered_cover(g, k)


def certify(
    m: int,
    n: int,
    k: int,
    *,
    max_nodes: Optional[int] = None,
    witness: Optional[CoverFamily] = None,
    use_appendix: bool = False,
) -> Certificate:
    """Pair a proven lower bound with a verified cover.

    Searches sizes from the lower bound upward until a cover is found or the
    explicit construction size is reached.  With ``witness`` (or
    ``use_appendix`` for the tabulated m=2, k=3 covers) the search is
    skipped and the supplied family is verified instead.
    """
    g = GridSpec(m, n)
    lo, tag = lower_bound(m, n, k)
    if use_appendix and witness is None:
        if m != 2 or k != 3 or n not in (2, 3, 4):
            raise ValueError("tabulated covers exist only for m=2, k=3, n in {2,3,4}")
        witness = appendix_cover(n)
    if witness is not None:
        rep = verify_almost_cover(g, k, witness)
        if not rep.satisfied:
            raise ValueError(f"supplied witness is not an almost {k}-cover (deficient: {rep.deficient[:3]})")
        source = "appendix" if use_appendix else "supplied"
        status = EXACT if witness.size() == lo else UPPER_ONLY
        return Certificate(m, n, k, witness.size(), lo, tag, witness, status, source)

    fallback = _fallback_witness(g, k)
    cands = enumerate_candidates(g)
    nodes = 0
    tried = []
    for size in range(lo, max(lo + 1, fallback.size())):
        tried.append(size)
        remaining = None if max_nodes is None else max_nodes - nodes
        try:
            fam, used = _find(cands, k, size, max_nodes=remaining)
        except BudgetExceeded as exc:
            exc.partial.update({"lower": lo, "lower_tag": tag, "upper": fallback.size(), "tried": tried})
            exc.nodes += nodes
            raise
        nodes += used
        if fam is not None:
            status = EXACT if size == lo else UPPER_ONLY
            return Certificate(m, n, k, size, lo, tag, fam, status, "search", nodes, tried)
    assert verify_almost_cover(g, k, fallback).satisfied
    status = EXACT if fallback.size() == lo else UPPER_ONLY
    return Certificate(m, n, k, fallback.size(), lo, tag, fallback, status, "construction", nodes, tried)
