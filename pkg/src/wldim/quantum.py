"""Quantum queries, star queries and dominating-set counting."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator

from .errors import OutOfScope, ParseError, WldimError
from .graph import Graph, complement
from .query import ConjunctiveQuery, count_answers, is_query_isomorphic, minimize, parse_query
from .width import semantic_extension_width


@dataclass(frozen=True)
class QuantumQuery:
    terms: tuple  # (Fraction, ConjunctiveQuery)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "QuantumQuery") -> "QuantumQuery":
        return normalize_quantum(list(self.terms) + list(other.terms))


def normalize_quantum(raw: Iterable) -> QuantumQuery:
    """Minimise every constituent, merge isomorphic ones, drop zero terms."""
    merged = []
    for coeff, q in raw:
        coeff = Fraction(coeff)
        if not q.H.is_connected():
            raise OutOfScope("quantum constituents must be connected")
        if q.k == 0:
            raise OutOfScope("quantum constituents need at least one free variable")
        core = minimize(q)
        for slot in merged:
            if is_query_isomorphic(slot[1], core):
                slot[0] += coeff
                break
        else:
            merged.append([coeff, core])
    return QuantumQuery(tuple((c, q) for c, q in merged if c != 0))


def eval_quantum(Q: QuantumQuery, g: Graph) -> Fraction:
    return sum((c * count_answers(q, g) for c, q in Q.terms), Fraction(0))


def hsew(Q: QuantumQuery) -> int:
    if not Q.terms:
        raise WldimError("hsew of the empty quantum query is undefined")
    return max(semantic_extension_width(q) for _, q in Q.terms)


def parse_quantum(text: str) -> list:
    """Lines ``coeff | query``; ``#`` starts a comment line."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "|" not in line:
            raise ParseError("expected 'coeff | query'", lineno)
        coeff, body = line.split("|", 1)
        try:
            c = Fraction(coeff.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad coefficient {coeff.strip()!r}", lineno) from None
        try:
            q = parse_query(body)
        except ParseError as e:
            raise ParseError(str(e), lineno) from None
        out.append((c, q))
    return out


# ---------------------------------------------------------------------------
# stars and dominating sets


def star_query(k: int) -> ConjunctiveQuery:
    """Free leaves ``x1..xk`` (vertices ``0..k-1``) around an existential centre ``y``."""
    if k < 1:
        raise ValueError("k must be positive")
    names = tuple(f"x{i + 1}" for i in range(k)) + ("y",)
    return ConjunctiveQuery(Graph(k + 1, tuple((i, k) for i in range(k))), tuple(range(k)), names)


def set_partitions(k: int) -> Iterator[list]:
    """All set partitions of ``range(k)`` as lists of blocks."""
    if k == 0:
        yield []
        return
    for part in set_partitions(k - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [k - 1]] + part[i + 1 :]
        yield part + [[k - 1]]


def injective_coefficients(k: int) -> dict:
    """``c_m`` with ``|Inj(S_k)| = sum_m c_m |Ans(S_m)|``: Moebius values of
    the partition lattice summed by number of blocks."""
    coeff = {}
    for part in set_partitions(k):
        mu = 1
        for block in part:
            b = len(block)
            mu *= (-1) ** (b - 1) * factorial(b - 1)
        coeff[len(part)] = coeff.get(len(part), 0) + mu
    return coeff


def count_injective_star(k: int, g: Graph) -> int:
    """Injective assignments of ``x1..xk`` whose images share a neighbour."""
    return sum(c * count_answers(star_query(m), g) for m, c in injective_coefficients(k).items())


def count_dominating_sets(k: int, g: Graph) -> int:
    """Size-``k`` dominating sets: all ``k``-sets minus those with a common
    non-neighbour outside, i.e. injective star answers in the complement."""
    inj = count_injective_star(k, complement(g))
    bad, rem = divmod(inj, factorial(k))
    if rem:
        raise WldimError("injective count not divisible by k!")  # pragma: no cover
    return comb(g.n, k) - bad
