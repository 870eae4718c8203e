"""Fuzzy quantifiers and quantifier/summarizer selection.

A quantifier is a piecewise-linear membership function over the agreement
ratio ``r`` in ``[0, 1]``, stored as a list of ``(r, mu)`` vertices so that
new vocabularies can be defined in JSON without touching code.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from temposum.errors import EmptyQuery, OutOfRange

Vertex = tuple[float, float]


@dataclass(frozen=True)
class Quantifier:
    name: str
    vertices: tuple[Vertex, ...]
    # position in the "implied amount" order; larger means more
    rank: int

    def __post_init__(self):
        verts = tuple((float(r), float(mu)) for r, mu in self.vertices)
        if not verts:
            raise ValueError(f"quantifier {self.name!r} has no vertices")
        for (r0, _), (r1, _) in zip(verts, verts[1:]):
            if r1 < r0:
                raise ValueError(f"quantifier {self.name!r}: r-coordinates must be nondecreasing")
        for r, mu in verts:
            if not 0.0 <= mu <= 1.0:
                raise ValueError(f"quantifier {self.name!r}: mu={mu} outside [0, 1]")
        object.__setattr__(self, "vertices", verts)

    def __call__(self, r: float) -> float:
        return membership(self, r)

    def to_dict(self) -> dict:
        return {"name": self.name, "vertices": [list(v) for v in self.vertices], "rank": self.rank}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Quantifier":
        return cls(d["name"], tuple(tuple(v) for v in d["vertices"]), int(d["rank"]))


# "most of the" uses the closed-form trapezoid (plateau to 0.9); the drawn
# variant with the plateau running to 0.99 is MOST_OF_THE_DRAWN.
_QUANTIFIER_VERTICES: list[tuple[str, tuple[Vertex, ...]]] = [
    ("none of the", ((0.0, 1.0), (0.01, 0.0))),
    ("almost none of the", ((0.0, 0.0), (0.01, 1.0), (0.2, 1.0), (0.3, 0.0))),
    ("some of the", ((0.1, 0.0), (0.3, 1.0), (0.4, 1.0), (0.5, 0.0))),
    ("half of the", ((0.4, 0.0), (0.5, 1.0), (0.6, 0.0))),
    ("more than half of the", ((0.5, 0.0), (0.6, 1.0), (0.75, 1.0), (1.0, 0.0))),
    ("most of the", ((0.5, 0.0), (0.75, 1.0), (0.9, 1.0), (1.0, 0.0))),
    ("all of the", ((0.99, 0.0), (1.0, 1.0))),
]

MOST_OF_THE_DRAWN = Quantifier("most of the", ((0.5, 0.0), (0.75, 1.0), (0.99, 1.0), (1.0, 0.0)), 5)


def default_quantifiers() -> list[Quantifier]:
    return [Quantifier(name, verts, rank) for rank, (name, verts) in enumerate(_QUANTIFIER_VERTICES)]


def membership(q: Quantifier, r: float) -> float:
    """Evaluate the membership degree of ratio `r` in quantifier `q`.

    Outside the span of the vertex list the degree is 0.  Where several
    vertices share an r-coordinate (a vertical step) the largest degree wins.
    """
    if not 0.0 <= r <= 1.0:
        raise OutOfRange(f"agreement ratio {r!r} outside [0, 1]")
    verts = q.vertices
    if r < verts[0][0] or r > verts[-1][0]:
        return 0.0
    at_vertex = [mu for x, mu in verts if x == r]
    if at_vertex:
        return max(at_vertex)
    for (x0, y0), (x1, y1) in zip(verts, verts[1:]):
        if x0 < r < x1:
            return y0 + (y1 - y0) * (r - x0) / (x1 - x0)
    return 0.0


def agreement_ratio(values: Iterable, predicate: Callable[[object], bool]) -> float:
    """Fraction of `values` for which the (crisp) summarizer predicate holds."""
    values = list(values)
    if not values:
        raise EmptyQuery("agreement ratio over an empty query subset")
    hits = sum(1 for v in values if predicate(v))
    return hits / len(values)


@dataclass(frozen=True)
class CandidatePair:
    summarizer: object
    quantifier: Quantifier
    r: float
    truth: float
    runners_up: tuple = field(default=(), compare=False)


def best_quantifier(r: float, quantifiers: Sequence[Quantifier]) -> tuple[Quantifier, float]:
    best, best_mu = None, -1.0
    for q in quantifiers:
        mu = membership(q, r)
        if mu > best_mu or (mu == best_mu and q.rank > best.rank):
            best, best_mu = q, mu
    return best, best_mu


def best_pair(r_by_summarizer: Mapping, quantifiers: Sequence[Quantifier] | None = None) -> CandidatePair:
    """Pick the summarizer/quantifier pair with the highest truth value.

    Ties go to the quantifier implying the larger amount, then to the
    summarizer that comes first in `r_by_summarizer`.
    """
    if not r_by_summarizer:
        raise EmptyQuery("no candidate summarizers")
    if quantifiers is None:
        quantifiers = default_quantifiers()
    candidates = []
    for summarizer, r in r_by_summarizer.items():
        q, mu = best_quantifier(r, quantifiers)
        candidates.append(CandidatePair(summarizer, q, r, mu))
    # stable sort keeps summarizer order as the last tie-break
    ranked = sorted(candidates, key=lambda c: (-c.truth, -c.quantifier.rank))
    winner = ranked[0]
    return CandidatePair(winner.summarizer, winner.quantifier, winner.r, winner.truth, tuple(ranked[1:4]))
