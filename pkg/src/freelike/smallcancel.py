"""Symmetrized presentations, C'(lambda) verification, and Dehn's algorithm.

A :class:`Presentation` carries its base relators plus the symmetrized
closure (all cyclic shifts of the relators and of their inverses).  Once
``verify_c_prime(Fraction(1, 6))`` succeeds, half-relator subword search
(:func:`greendlinger_find`) and the word problem (:func:`dehn_trivial`)
are available.

Presentations are immutable; verification returns a new value carrying
``verified_lambda``, so a verified flag can never go stale.
"""

from __future__ import annotations

import bisect
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from freelike import _kernels
from freelike.errors import CPrimeViolation, UnverifiedPresentationError
from freelike.words import Word, _invert_bytes, _reduce_bytes, cyclic_reduce

__all__ = [
    "Presentation",
    "symmetrize",
    "ladder_relators",
    "CPrimeCheck",
    "check_c_prime",
    "ScReport",
    "check_girth_conditions",
    "GreendlingerMatch",
    "greendlinger_find",
    "dehn_trivial",
    "eq_in_group",
    "IndependenceReport",
    "independent_relators",
    "ShortWordScan",
    "scan_short_words",
    "parse_presentation",
    "format_presentation",
    "DEFAULT_COEFFICIENTS",
]

DEFAULT_COEFFICIENTS = tuple(range(2, 101, 2))

_A = 1  # byte code of the positive first generator
_B = 3  # byte code of the positive second generator


def _lcp(a: bytes, b: bytes) -> int:
    """Length of the longest common prefix, via O(log n) slice compares."""
    n = min(len(a), len(b))
    if n == 0 or a[0] != b[0]:
        return 0
    if a[:n] == b[:n]:
        return n
    lo, hi = 1, n - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if a[:mid] == b[:mid]:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _rotations(data: bytes) -> Iterable[bytes]:
    doubled = data + data
    n = len(data)
    return (doubled[i : i + n] for i in range(n))


def symmetrize(base: Sequence[Word]) -> frozenset[Word]:
    """Smallest set containing ``base`` closed under cyclic shift and inversion."""
    if not base:
        return frozenset()
    rank = base[0].rank
    out: set[Word] = set()
    for r in base:
        if r.rank != rank:
            raise ValueError("relators must share one rank")
        if not r:
            raise ValueError("relators must be nonempty")
        if not r.is_cyclically_reduced():
            raise ValueError(f"relator {r} is not cyclically reduced")
        for d in (r.data, _invert_bytes(r.data)):
            for rot in _rotations(d):
                out.add(Word._make(rot, rank))
    return frozenset(out)


class Presentation:
    """Alphabet rank plus base relators; symmetrized closure computed lazily."""

    __slots__ = ("rank", "relators", "_verified", "_cache")

    def __init__(self, rank: int, relators: Sequence[Word] = ()):
        relators = tuple(relators)
        for r in relators:
            if not isinstance(r, Word) or r.rank != rank:
                raise ValueError(f"relator {r!r} does not match rank {rank}")
            if not r:
                raise ValueError("relators must be nonempty")
            if not r.is_cyclically_reduced():
                raise ValueError(f"relator {r} is not cyclically reduced")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "relators", relators)
        object.__setattr__(self, "_verified", None)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("Presentation is immutable")

    def __repr__(self):
        lam = f", verified C'({self._verified})" if self._verified else ""
        return f"<Presentation rank={self.rank}, {len(self.relators)} relators{lam}>"

    @property
    def verified_lambda(self) -> Fraction | None:
        return self._verified

    @property
    def min_relator_length(self) -> int | None:
        if not self.relators:
            return None
        return min(len(r) for r in self.relators)

    # -- lazy derived structures -------------------------------------------

    def _symmetrized_with_orbits(self):
        """Closure datas with provenance: data -> orbit id of its base relator."""
        cached = self._cache.get("orbits")
        if cached is not None:
            return cached
        parent = list(range(len(self.relators)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        data_base: dict[bytes, int] = {}
        for bi, r in enumerate(self.relators):
            for d in (r.data, _invert_bytes(r.data)):
                for rot in _rotations(d):
                    prev = data_base.get(rot)
                    if prev is None:
                        data_base[rot] = bi
                    else:
                        ra, rb = find(prev), find(bi)
                        if ra != rb:
                            parent[max(ra, rb)] = min(ra, rb)
        orbit_of = {d: find(bi) for d, bi in data_base.items()}
        groups: dict[int, list[int]] = {}
        for bi in range(len(self.relators)):
            groups.setdefault(find(bi), []).append(bi)
        result = (orbit_of, groups)
        self._cache["orbits"] = result
        return result

    @property
    def symmetrized(self) -> frozenset[Word]:
        cached = self._cache.get("symmetrized")
        if cached is None:
            orbit_of, _ = self._symmetrized_with_orbits()
            cached = frozenset(Word._make(d, self.rank) for d in orbit_of)
            self._cache["symmetrized"] = cached
        return cached

    @property
    def _sorted_datas(self) -> list[bytes]:
        cached = self._cache.get("sorted")
        if cached is None:
            orbit_of, _ = self._symmetrized_with_orbits()
            cached = sorted(orbit_of)
            self._cache["sorted"] = cached
        return cached

    @property
    def _length_classes(self) -> list[tuple[int, list[bytes]]]:
        """(length, sorted datas of that length), ascending length."""
        cached = self._cache.get("classes")
        if cached is None:
            by_len: dict[int, list[bytes]] = {}
            for d in self._sorted_datas:  # already lex-sorted; sublists stay sorted
                by_len.setdefault(len(d), []).append(d)
            cached = sorted(by_len.items())
            self._cache["classes"] = cached
        return cached

    # -- verification --------------------------------------------------------

    def verify_c_prime(self, lam: Fraction | str | int) -> "Presentation":
        """Check C'(lam); return a new presentation carrying verified_lambda.

        Raises :class:`CPrimeViolation` on failure.
        """
        res = check_c_prime(self, lam)
        if not res.ok:
            r, rp, l = res.violation  # type: ignore[misc]
            raise CPrimeViolation(r, rp, l, res.lam)
        new = Presentation(self.rank, self.relators)
        object.__setattr__(new, "_verified", res.lam)
        object.__setattr__(new, "_cache", self._cache)
        return new

    def require_verified(self, bound: Fraction = Fraction(1, 6)) -> None:
        if self._verified is None or self._verified > bound:
            raise UnverifiedPresentationError(
                f"operation needs C'(lambda) verified with lambda <= {bound}; "
                f"call verify_c_prime first"
            )

    # -- half-relator prefix search ------------------------------------------

    def _half_match(self, suffix: bytes) -> tuple[int, bytes] | None:
        """Longest V = suffix[:d] that is a prefix of a relator r with 2d > |r|.

        Returns (d, relator data), relator chosen shortlex-least among those
        achieving d.  None if no relator qualifies.
        """
        best_d = 0
        best_lst: list[bytes] | None = None
        for length, lst in self._length_classes:  # ascending: shortlex ties go short
            half = length // 2 + 1
            if len(suffix) < half:
                continue
            i = bisect.bisect_left(lst, suffix)
            d = _lcp(suffix, lst[i]) if i < len(lst) else 0
            if i > 0:
                d = max(d, _lcp(suffix, lst[i - 1]))
            if 2 * d > length and d > best_d:
                best_d, best_lst = d, lst
        if best_lst is None:
            return None
        v = suffix[:best_d]
        j = bisect.bisect_left(best_lst, v)
        relator = best_lst[j]
        assert relator[:best_d] == v
        return best_d, relator


def ladder_relators(
    j_values: Iterable[int],
    coefficients: Sequence[int] = DEFAULT_COEFFICIENTS,
) -> list[Word]:
    """Base relators ``a b^(c1*j) a b^(c2*j) ... a b^(cB*j)`` for each j.

    Coefficients must be positive even integers, strictly increasing
    (default 2, 4, ..., 100).  Each relator is positive and cyclically
    reduced, of length ``B + j * sum(coefficients)``.
    """
    coefficients = tuple(coefficients)
    if not coefficients:
        raise ValueError("need at least one coefficient")
    if any(c <= 0 or c % 2 for c in coefficients):
        raise ValueError("coefficients must be positive even integers")
    if any(b <= a for a, b in zip(coefficients, coefficients[1:])):
        raise ValueError("coefficients must be strictly increasing")
    out = []
    for j in sorted(set(j_values)):
        if j < 1:
            raise ValueError("j values must be >= 1")
        letters: list[int] = []
        for c in coefficients:
            letters.append(1)
            letters.extend([2] * (c * j))
        out.append(Word(letters, 2))
    return out


@dataclass(frozen=True)
class CPrimeCheck:
    ok: bool
    lam: Fraction
    violation: tuple[Word, Word, int] | None = None

    def to_dict(self) -> dict:
        d: dict = {"ok": self.ok, "lambda": str(self.lam)}
        if self.violation:
            r, rp, l = self.violation
            d["violation"] = {"r": str(r), "r_prime": str(rp), "lcp": l}
        return d


def check_c_prime(p: Presentation, lam: Fraction | str | int) -> CPrimeCheck:
    """Does every pair of distinct symmetrized relators share a prefix
    shorter than lam * min(|r|, |r'|)?  (Strict inequality.)

    In the lex-sorted symmetrized set any violating pair implies a violating
    *adjacent* pair, so adjacent pairs suffice; the first one is reported.
    """
    lam = Fraction(lam)
    if not 0 < lam <= 1:
        raise ValueError(f"lambda must be in (0, 1], got {lam}")
    datas = p._sorted_datas
    for a, b in zip(datas, datas[1:]):
        l = _lcp(a, b)
        m = min(len(a), len(b))
        if l * lam.denominator >= lam.numerator * m:
            return CPrimeCheck(
                False, lam, (Word._make(a, p.rank), Word._make(b, p.rank), l)
            )
    return CPrimeCheck(True, lam)


@dataclass(frozen=True)
class ScReport:
    """Outcome of the four girth-family conditions plus positivity."""

    closed_under_shifts: bool
    c_prime_ok: bool
    c_prime_violation: tuple[Word, Word, int] | None
    forbidden_prefix_ok: bool
    forbidden_word: Word | None
    min_length_ok: bool
    short_word: Word | None
    positive_ok: bool
    nonpositive_word: Word | None

    @property
    def all_ok(self) -> bool:
        return (
            self.closed_under_shifts
            and self.c_prime_ok
            and self.forbidden_prefix_ok
            and self.min_length_ok
            and self.positive_ok
        )

    def to_dict(self) -> dict:
        d: dict = {
            "closed_under_shifts": self.closed_under_shifts,
            "c_prime_ok": self.c_prime_ok,
            "forbidden_prefix_ok": self.forbidden_prefix_ok,
            "min_length_ok": self.min_length_ok,
            "positive_ok": self.positive_ok,
            "all_ok": self.all_ok,
        }
        if self.c_prime_violation:
            r, rp, l = self.c_prime_violation
            d["c_prime_violation"] = {"r": str(r), "r_prime": str(rp), "lcp": l}
        if self.forbidden_word is not None:
            d["forbidden_word"] = str(self.forbidden_word)
        if self.short_word is not None:
            d["short_word"] = str(self.short_word)
        if self.nonpositive_word is not None:
            d["nonpositive_word"] = str(self.nonpositive_word)
        return d


def check_girth_conditions(p: Presentation) -> ScReport:
    """Evaluate the conditions that make the girth argument work:

    (a) the positive shift-closure is shift-closed, (b) the symmetrized set
    satisfies C'(1/6), (c) no shift-closure member starts with a^2, abab or
    baba, (d) every relator has length >= 6; plus positivity of the base
    relators.
    """
    nonpositive = next((r for r in p.relators if not r.is_positive()), None)

    closure: set[bytes] = set()
    for r in p.relators:
        closure.update(_rotations(r.data))
    # Shift-by-one closure implies full shift closure by induction.
    closed = all(d[1:] + d[:1] in closure for d in closure)

    res = check_c_prime(p, Fraction(1, 6))

    forbidden = None
    for d in sorted(closure):
        if d[:2] == bytes((_A, _A)) or d[:4] in (
            bytes((_A, _B, _A, _B)),
            bytes((_B, _A, _B, _A)),
        ):
            forbidden = Word._make(d, p.rank)
            break

    short = next((r for r in p.relators if len(r) < 6), None)

    return ScReport(
        closed_under_shifts=closed,
        c_prime_ok=res.ok,
        c_prime_violation=res.violation,
        forbidden_prefix_ok=forbidden is None,
        forbidden_word=forbidden,
        min_length_ok=short is None,
        short_word=short,
        positive_ok=nonpositive is None,
        nonpositive_word=nonpositive,
    )


@dataclass(frozen=True)
class GreendlingerMatch:
    position: int
    subword: Word
    relator: Word

    def to_dict(self) -> dict:
        return {
            "position": self.position,
            "subword_length": len(self.subword),
            "relator": str(self.relator),
            "relator_length": len(self.relator),
        }


def greendlinger_find(
    u: Word, p: Presentation, cyclic: bool = False
) -> GreendlingerMatch | None:
    """Leftmost, then longest, subword V of ``u`` that is a prefix of a
    symmetrized relator r with |V| > |r|/2; ties broken by shortlex-least r.

    With ``cyclic=True`` the word is read cyclically (subwords may wrap);
    the input must then be cyclically reduced.
    """
    p.require_verified()
    data = u.data
    n = len(data)
    min_len = p.min_relator_length
    if min_len is None or n == 0 or 2 * n <= min_len:
        return None
    space = data + data if cyclic else data
    for i in range(n):
        if cyclic:
            suffix = space[i : i + n]
        else:
            if 2 * (n - i) <= min_len:
                break
            suffix = data[i:]
        m = p._half_match(suffix)
        if m is not None:
            d, relator = m
            return GreendlingerMatch(
                position=i,
                subword=Word._make(suffix[:d], p.rank),
                relator=Word._make(relator, p.rank),
            )
    return None


def dehn_trivial(w: Word, p: Presentation, trace: list | None = None) -> bool:
    """Decide whether ``w`` represents the identity, by Dehn's algorithm.

    Cyclically reduce; while some subword of the cyclic word covers more
    than half of a relator, replace it by the inverse of the relator's
    complement (strictly shorter) and re-reduce.  Trivial iff the empty
    word is reached.  Requires verified C'(1/6).
    """
    p.require_verified()
    if w.rank != p.rank:
        raise ValueError("word rank does not match presentation rank")
    if not p.relators:
        return not w
    min_len: int = p.min_relator_length  # type: ignore[assignment]
    _, core = cyclic_reduce(w)
    data = core.data
    while data:
        if 2 * len(data) <= min_len:
            return False  # too short to contain half of any relator
        m = greendlinger_find(Word._make(data, p.rank), p, cyclic=True)
        if m is None:
            return False
        i, d = m.position, len(m.subword)
        complement = m.relator.data[d:]
        rotated = data[i:] + data[:i]
        new = _reduce_bytes(_invert_bytes(complement) + rotated[d:])
        _, new_core = cyclic_reduce(Word._make(new, p.rank))
        assert len(new_core) < len(data), "Dehn step must shrink the word"
        if trace is not None:
            trace.append(
                {
                    "position": i,
                    "subword_length": d,
                    "relator_length": len(m.relator),
                    "length_after": len(new_core),
                }
            )
        data = new_core.data
    return True


def eq_in_group(u: Word, v: Word, p: Presentation) -> bool:
    """u == v in the presented group (triviality of u * v^-1)."""
    if u.rank != v.rank:
        raise ValueError("rank mismatch")
    return dehn_trivial(u * ~v, p)


@dataclass(frozen=True)
class IndependenceReport:
    independent: bool
    orbit_count: int
    witness: tuple[Word, Word, int] | None = None

    def to_dict(self) -> dict:
        d: dict = {"independent": self.independent, "orbit_count": self.orbit_count}
        if self.witness:
            r, rp, overlap = self.witness
            d["witness"] = {"relator": str(r), "other": str(rp), "overlap": overlap}
        return d


def independent_relators(p: Presentation) -> IndependenceReport:
    """Do the relator orbits overlap by more than half a relator?

    Base relators are partitioned into orbits under cyclic shift and
    inversion; one representative per orbit is scanned (as a cyclic word)
    for a subword that is a prefix of length > |r'|/2 of a symmetrized
    relator r' from a *different* orbit.  No such subword means no orbit's
    relation is a Dehn consequence of the others — provided C'(1/6) holds;
    the scan itself is purely syntactic and runs on any presentation.
    """
    orbit_of, groups = p._symmetrized_with_orbits()
    reps = [(oid, p.relators[members[0]]) for oid, members in sorted(groups.items())]
    for oid, rep in reps:
        doubled = rep.data + rep.data
        n = len(rep.data)
        for r_data in p._sorted_datas:
            if orbit_of[r_data] == oid:
                continue
            half = len(r_data) // 2 + 1
            if half > n:
                continue
            pos = doubled.find(r_data[: half])
            if 0 <= pos < n:
                overlap = _lcp(doubled[pos:], r_data)
                return IndependenceReport(
                    False,
                    len(groups),
                    (rep, Word._make(r_data, p.rank), overlap),
                )
    return IndependenceReport(True, len(groups))


@dataclass(frozen=True)
class ShortWordScan:
    max_len: int
    words_scanned: int
    words_checked_by_dehn: int
    trivial_words: tuple[Word, ...]

    def to_dict(self) -> dict:
        return {
            "max_len": self.max_len,
            "words_scanned": self.words_scanned,
            "words_checked_by_dehn": self.words_checked_by_dehn,
            "trivial_words": [str(w) for w in self.trivial_words],
        }


def scan_short_words(
    p: Presentation,
    max_len: int,
    workers: int = 1,
    collect_limit: int = 1_000_000,
) -> ShortWordScan:
    """Exhaustively test every nonempty reduced word of length <= max_len.

    Words whose doubled length does not exceed the minimum relator length
    cannot contain more than half of a relator, hence are nontrivial; the
    kernel settles those inline and only longer words reach full
    :func:`dehn_trivial`.  The result is independent of ``workers``.
    """
    p.require_verified()
    guard = p.min_relator_length
    if guard is None:
        guard = 2 * max_len + 1  # free group: nothing is ever undecided
    nsym = 2 * p.rank

    def run(first: int):
        return _kernels.scan_reduced_subtree(p.rank, max_len, guard, first, collect_limit)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run, range(nsym)))
    else:
        results = [run(first) for first in range(nsym)]

    total = sum(cnt for cnt, _ in results)
    trivial = []
    checked = 0
    for _, undecided in results:  # merged in first-letter order: deterministic
        for data in undecided:
            checked += 1
            w = Word._make(data, p.rank)
            if dehn_trivial(w, p):
                trivial.append(w)
    return ShortWordScan(max_len, total, checked, tuple(trivial))


# ---------------------------------------------------------------------------
# Presentation text format: "rank: m" line, one relator per line, # comments.
# ---------------------------------------------------------------------------


def parse_presentation(text: str) -> Presentation:
    rank = None
    relators = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("rank:"):
            rank = int(line.split(":", 1)[1])
            continue
        if rank is None:
            raise ValueError(f"line {lineno}: relator before 'rank:' header")
        from freelike.words import parse_word

        relators.append(parse_word(line, rank))
    if rank is None:
        raise ValueError("missing 'rank:' header")
    return Presentation(rank, relators)


def format_presentation(p: Presentation) -> str:
    lines = [f"rank: {p.rank}"]
    lines.extend(str(r) for r in p.relators)
    return "\n".join(lines) + "\n"
