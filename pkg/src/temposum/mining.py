"""Pattern discovery over symbolic sequences.

Two miners live here: Squeezer clustering of fixed-length window tuples, and
contiguous frequent-sequence mining with prefix -> suffix rules.

Event tokens are plain strings: ``"c"`` for one attribute, ``"c-e"`` for a
joint multivariate event and ``"Saturday:c"`` when events carry weekdays.
"""
from __future__ import annotations

import math
from collections import Counter
from itertools import chain
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from temposum.errors import LengthMismatch, TooFewTuples


@dataclass(frozen=True)
class WindowTuple:
    window_index: int
    symbols: tuple[str, ...]

    def __len__(self):
        return len(self.symbols)


@dataclass(frozen=True)
class Cluster:
    members: tuple[int, ...]
    threshold: float


def _symbols(t):
    return t.symbols if isinstance(t, WindowTuple) else tuple(t)


def similarity(t1, t2) -> int:
    """Number of positions at which two equal-length tuples carry the same symbol."""
    a, b = _symbols(t1), _symbols(t2)
    if len(a) != len(b):
        raise LengthMismatch(f"tuples of length {len(a)} and {len(b)}")
    return sum(1 for x, y in zip(a, b) if x == y)


def similarity_matrix(tuples: Sequence) -> np.ndarray:
    """All pairwise similarities at once (symmetric, diagonal = tuple length)."""
    rows = [_symbols(t) for t in tuples]
    if len({len(r) for r in rows}) > 1:
        raise LengthMismatch("tuples differ in length")
    codes: dict[Hashable, int] = {}
    arr = np.array([[codes.setdefault(s, len(codes)) for s in r] for r in rows], dtype=np.int64)
    if arr.size == 0:
        return np.zeros((len(rows), len(rows)), dtype=np.int64)
    return (arr[:, None, :] == arr[None, :, :]).sum(axis=2)


def sampling_repeats(f: float) -> int:
    if not 0 < f <= 1:
        raise ValueError("sample fraction must be in (0, 1]")
    # guard against 1/f landing a hair above an integer
    return max(1, math.ceil(1.0 / f - 1e-9))


@dataclass(frozen=True)
class ThresholdEstimate:
    s: float
    a: float
    repeat_means: tuple[float, ...]
    sample_size: int

    @property
    def repeats(self) -> int:
        return len(self.repeat_means)


def threshold_details(tuples: Sequence, f: float = 0.2, seed: int = 42) -> ThresholdEstimate:
    n = len(tuples)
    if n < 2:
        raise TooFewTuples(f"need at least 2 window tuples, have {n}")
    k = min(n, max(2, math.ceil(f * n - 1e-9)))
    sims = similarity_matrix(tuples)
    rng = np.random.default_rng(seed)
    means = []
    iu = np.triu_indices(k, 1)
    for _ in range(sampling_repeats(f)):
        idx = np.sort(rng.choice(n, size=k, replace=False))
        means.append(float(sims[np.ix_(idx, idx)][iu].mean()))
    a = float(np.mean(means))
    return ThresholdEstimate(a + 1.0, a, tuple(means), k)


def estimate_threshold(tuples: Sequence, f: float = 0.2, seed: int = 42) -> float:
    """Squeezer threshold ``s = a + 1``, `a` being the mean within-sample pairwise similarity."""
    return threshold_details(tuples, f, seed).s


def squeezer(tuples: Sequence[WindowTuple], s: float) -> list[Cluster]:
    """One pass over tuples in window order.

    A tuple joins the cluster with the highest mean similarity to its members
    when that mean reaches `s`; otherwise it starts a new cluster.  Ties go
    to the older cluster.
    """
    if not tuples:
        raise ValueError("nothing to cluster")
    ordered = sorted(tuples, key=lambda t: t.window_index)
    members: list[list[int]] = []
    positions: list[list[int]] = []  # member rows of `ordered`, per cluster
    sims = similarity_matrix(ordered)
    for i, t in enumerate(ordered):
        best, best_score = None, -1.0
        for c, pos in enumerate(positions):
            score = sims[i, pos].mean()
            if score > best_score:
                best, best_score = c, score
        if best is not None and best_score >= s:
            positions[best].append(i)
            members[best].append(t.window_index)
        else:
            positions.append([i])
            members.append([t.window_index])
    return [Cluster(tuple(m), s) for m in members]


def pair_with_followers(cluster: Cluster | Iterable[int], tw_symbols, exclude: Iterable[int] = ()):
    """(letter of w, letter of w+1) for each member window w that has a successor.

    `tw_symbols` is a window-level SymbolicSeries or a mapping from window
    ordinal to letter.
    """
    members = cluster.members if isinstance(cluster, Cluster) else tuple(cluster)
    if hasattr(tw_symbols, "symbols"):
        letters = {s.index: s.letter for s in tw_symbols.symbols}
    else:
        letters = dict(tw_symbols)
    skip = set(exclude)
    return [(letters[w], letters[w + 1]) for w in sorted(members)
            if w not in skip and w in letters and w + 1 in letters]


# --- frequent contiguous sequences ------------------------------------------

class FrequentPatterns(dict):
    """pattern -> count for the frequent patterns.

    ``counts`` holds the counts of every contiguous pattern up to the length
    cap (frequent or not) and ``positions`` the number of admissible start
    positions per pattern length, so rules can be formed without rescanning.
    """

    def __init__(self, frequent, counts, positions):
        super().__init__(frequent)
        self.counts = counts
        self.positions = positions

    def support(self, pattern) -> float:
        return self.counts.get(pattern, 0) / self.positions[len(pattern)]


def count_contiguous(segments: Sequence[Sequence], max_len: int) -> tuple[Counter, dict[int, int]]:
    """Occurrence counts of every contiguous pattern up to `max_len`, plus start positions per length."""
    segs = [tuple(s) for s in segments]
    sizes = [len(s) for s in segs]
    positions = {}
    for length in range(1, max_len + 1):
        total = sum(n - length + 1 for n in sizes if n >= length)
        if total == 0:
            break
        positions[length] = total
    # zip of n shifted copies yields every length-n window as a tuple
    counts = Counter(chain.from_iterable(zip(*(s[k:] for k in range(n))) for n in positions for s in segs))
    return counts, positions


def mine_frequent_segments(segments: Sequence[Sequence], max_len: int, min_support: float) -> FrequentPatterns:
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    counts, positions = count_contiguous(segments, max_len)
    frequent = {p: c for p, c in counts.items() if c / positions[len(p)] >= min_support}
    return FrequentPatterns(frequent, counts, positions)


def mine_frequent(sequence: Sequence, max_len: int, min_support: float) -> FrequentPatterns:
    """Every contiguous pattern of length 1..max_len with support >= `min_support`.

    Support is count / (len(sequence) - len(pattern) + 1).  Patterns are
    tuples of tokens (a str input is split into characters).
    """
    seq = tuple(sequence)
    n = len(seq)
    if n < 1:
        raise ValueError("empty sequence")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    positions = {length: n - length + 1 for length in range(1, min(max_len, n) + 1)}
    counts = Counter(chain.from_iterable(zip(*(seq[k:] for k in range(length))) for length in positions))
    frequent = {p: c for p, c in counts.items() if c / positions[len(p)] >= min_support}
    return FrequentPatterns(frequent, counts, positions)


class SequenceRule(NamedTuple):
    prefix: tuple
    suffix: tuple
    support_count: int
    prefix_count: int
    confidence: float
    day_annotated: bool = False
    support: float | None = None
    # attribute indices the prefix constrains; None means the same as the suffix
    prefix_attributes: tuple[int, ...] | None = None

    @property
    def length(self) -> int:
        return len(self.prefix) + len(self.suffix)


def _sort_rules(rules):
    return sorted(rules, key=lambda r: (-r.confidence, -r.support_count, r.prefix, r.suffix))


def rules_from_patterns(patterns: Mapping, min_confidence: float, day_annotated: bool = False,
                        counts: Mapping | None = None) -> list[SequenceRule]:
    """Split each frequent pattern at every position into prefix -> suffix.

    confidence = count(prefix + suffix) / count(prefix).  Prefix counts come
    from `counts`, else from ``patterns.counts`` (see FrequentPatterns), else
    from `patterns` itself.
    """
    if counts is None:
        counts = getattr(patterns, "counts", patterns)
    positions = getattr(patterns, "positions", None)
    rules = []
    for pattern, n in patterns.items():
        if len(pattern) < 2:
            continue
        pattern = tuple(pattern)
        for k in range(1, len(pattern)):
            prefix, suffix = pattern[:k], pattern[k:]
            if prefix not in counts:
                raise KeyError(f"no count for prefix {prefix!r}; pass the full pattern counts")
            pc = counts[prefix]
            conf = n / pc
            if conf >= min_confidence:
                support = n / positions[len(pattern)] if positions else None
                rules.append(SequenceRule(prefix, suffix, n, pc, conf, day_annotated, support))
    return _sort_rules(rules)


def mine_projected_rules(rows: Sequence[Sequence[Sequence[str]]], prefix_attributes: Sequence[int],
                         max_len: int, min_support: float, min_confidence: float,
                         weekdays: Sequence[Sequence[str]] | None = None) -> list[SequenceRule]:
    """Rules whose prefix constrains only some attributes of a multivariate sequence.

    `rows` is a list of segments; each segment is a list of per-step letter
    tuples (one letter per attribute).  The prefix is matched on
    `prefix_attributes` only, the suffix on every attribute.  Support of a
    rule is the count of (projected prefix, full suffix) occurrences over
    the admissible start positions for its total length.
    """
    prefix_attributes = tuple(prefix_attributes)

    def token(step, day, attrs):
        body = "-".join(step[a] for a in attrs)
        return f"{day}:{body}" if day is not None else body

    n_attr = len(rows[0][0]) if rows and rows[0] else 0
    all_attrs = tuple(range(n_attr))
    proj_segments, full_segments = [], []
    for s, seg in enumerate(rows):
        days = weekdays[s] if weekdays is not None else [None] * len(seg)
        proj_segments.append([token(step, d, prefix_attributes) for step, d in zip(seg, days)])
        full_segments.append([token(step, d, all_attrs) for step, d in zip(seg, days)])

    prefix_counts, _ = count_contiguous(proj_segments, max(1, max_len - 1))
    mixed: Counter = Counter()
    positions: dict[int, int] = {}
    for proj, full in zip(proj_segments, full_segments):
        n = len(proj)
        for length in range(2, max_len + 1):
            starts = n - length + 1
            if starts <= 0:
                break
            positions[length] = positions.get(length, 0) + starts
            for i in range(starts):
                for k in range(1, length):
                    mixed[(tuple(proj[i:i + k]), tuple(full[i + k:i + length]))] += 1
    rules = []
    for (prefix, suffix), n in mixed.items():
        length = len(prefix) + len(suffix)
        support = n / positions[length]
        if support < min_support:
            continue
        pc = prefix_counts[prefix]
        conf = n / pc
        if conf >= min_confidence:
            rules.append(SequenceRule(prefix, suffix, n, pc, conf, weekdays is not None, support,
                                      prefix_attributes))
    return _sort_rules(rules)
