"""Independent reference implementations used as test oracles."""
from __future__ import annotations

from fractions import Fraction


def brute_force_rules(seq: str, max_len: int, min_support: float, min_confidence: float):
    """Enumerate every contiguous substring by slicing; rules from every split point.

    Returns (frequent, rules) where frequent maps pattern str -> count and rules
    is a set of (prefix, suffix, count, prefix_count, Fraction confidence).
    """
    n = len(seq)
    counts: dict[str, int] = {}
    for i in range(n):
        for j in range(i + 1, min(n, i + max_len) + 1):
            sub = seq[i:j]
            counts[sub] = counts.get(sub, 0) + 1
    frequent = {p: c for p, c in counts.items() if c / (n - len(p) + 1) >= min_support}
    rules = set()
    for p, c in frequent.items():
        for k in range(1, len(p)):
            pc = counts[p[:k]]
            conf = Fraction(c, pc)
            if c / pc >= min_confidence:
                rules.add((p[:k], p[k:], c, pc, conf))
    return frequent, rules


def positional_matches(a, b) -> int:
    return sum(x == y for x, y in zip(a, b))
