"""Girth certificates, bounded free-subgroup scans, almost identities, and
mod-n girth witnesses for k-element generating sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from freelike.errors import BudgetExceeded
from freelike.oracle import GroupOracle
from freelike.words import (
    Word,
    commute_in_free,
    concat,
    enumerate_words,
    exp_sum,
    invert,
    primitive_root,
    substitute,
)

__all__ = [
    "GeneratingSet",
    "high_girth_generators",
    "GirthCertificate",
    "girth_scan",
    "free_subgroup_scan",
    "build_almost_identity",
    "almost_identity_for_girth_bound",
    "ModNWitness",
    "girth_witness_mod_n",
    "FreeLikeEvidence",
]

DEFAULT_SCAN_BUDGET = 10_000_000
ALMOST_IDENTITY_MAX_WORDS = 24
ALMOST_IDENTITY_MAX_LETTERS = 10**6


@dataclass(frozen=True)
class GeneratingSet:
    """k >= 2 nonempty reduced words over a common ambient alphabet."""

    words: tuple[Word, ...]
    label: str = ""

    def __post_init__(self):
        if len(self.words) < 2:
            raise ValueError("a generating set needs k >= 2 words")
        if any(not w for w in self.words):
            raise ValueError("generating words must be nonempty")
        if len({w.rank for w in self.words}) != 1:
            raise ValueError("generating words must share one rank")

    @property
    def k(self) -> int:
        return len(self.words)

    @property
    def ambient_rank(self) -> int:
        return self.words[0].rank

    def to_dict(self) -> dict:
        return {"words": [str(w) for w in self.words], "label": self.label}


def high_girth_generators(k: int, n: int) -> GeneratingSet:
    """The spread generating set {a, b a^n, b a^(2n), ..., b a^((k-1)n)}.

    Requires n congruent to 2 mod 4 (so fourth powers of the first word
    stay clear of the relator shapes used downstream).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if n < 2 or n % 4 != 2:
        raise ValueError(f"n must be congruent to 2 mod 4, got {n}")
    words = [Word([1], 2)]
    for i in range(1, k):
        words.append(Word([2] + [1] * (i * n), 2))
    return GeneratingSet(tuple(words), label=f"spread(k={k}, n={n})")


@dataclass(frozen=True)
class GirthCertificate:
    """Either a shortest relation of length <= L, or evidence of none."""

    generating_set: GeneratingSet
    scanned_up_to: int
    shortest_relation: tuple[Word, int] | None
    words_examined: int

    @property
    def girth_at_least(self) -> int | None:
        return None if self.shortest_relation else self.scanned_up_to + 1

    def to_dict(self) -> dict:
        d: dict = {
            "generating_set": self.generating_set.to_dict(),
            "scanned_up_to": self.scanned_up_to,
            "words_examined": self.words_examined,
            "relation_found": self.shortest_relation is not None,
        }
        if self.shortest_relation:
            w, length = self.shortest_relation
            d["shortest_relation"] = {"word": str(w), "length": length}
        else:
            d["girth_at_least"] = self.scanned_up_to + 1
        return d


def _scan_words(
    o: GroupOracle,
    gens: GeneratingSet,
    max_len: int,
    budget: int,
) -> GirthCertificate:
    examined = 0
    for u in enumerate_words(gens.k, max_len, mode="canonical"):
        examined += 1
        if examined > budget:
            raise BudgetExceeded(f"girth scan examined more than {budget} words")
        if o.is_trivial(substitute(u, gens.words)):
            return GirthCertificate(gens, len(u), (u, len(u)), examined)
    return GirthCertificate(gens, max_len, None, examined)


def girth_scan(
    o: GroupOracle,
    z: GeneratingSet,
    max_len: int,
    budget: int = DEFAULT_SCAN_BUDGET,
) -> GirthCertificate:
    """Scan canonical cyclically-reduced orbit representatives of length
    1..max_len (ascending, lexicographic within a length) for the shortest
    relation among the generators.

    No hit certifies girth > max_len for Cayley(G, z).
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if z.ambient_rank != o.rank:
        raise ValueError("generating set rank does not match oracle")
    return _scan_words(o, z, max_len, budget)


def free_subgroup_scan(
    o: GroupOracle,
    pair: tuple[Word, Word],
    max_len: int,
    budget: int = DEFAULT_SCAN_BUDGET,
) -> GirthCertificate:
    """Girth scan specialized to a two-word subgroup; a certificate means
    no relation of length <= max_len among the pair."""
    return girth_scan(
        o,
        GeneratingSet((pair[0], pair[1]), label="subgroup pair"),
        max_len,
        budget,
    )


def build_almost_identity(ws: Sequence[Word]) -> Word:
    """Fold a list of nontrivial words into one word that is nontrivial in
    the free group yet evaluates to 1 wherever any input does.

    u_1 = w_1; afterwards u_i is either a common power (when u_{i-1} and
    w_i commute in the free group: both are powers of one primitive root z,
    u = z^p, w = z^q, and u_i = u^(|q|/gcd) = w^(+/- p/gcd)) or the
    commutator [u_{i-1}, w_i].
    """
    ws = list(ws)
    if not ws:
        raise ValueError("need at least one word")
    if any(not w for w in ws):
        raise ValueError("input words must be nontrivial")
    if len(ws) > ALMOST_IDENTITY_MAX_WORDS:
        raise BudgetExceeded(
            f"almost-identity construction capped at {ALMOST_IDENTITY_MAX_WORDS} words"
        )
    u = ws[0]
    for w in ws[1:]:
        if commute_in_free(u, w):
            z, p = primitive_root(u)
            _, qa = primitive_root(w)
            # w is z^q with q = +/- qa; fix the sign by direct comparison.
            q = qa if z ** qa == w else -qa
            assert z ** q == w
            g = math.gcd(p, abs(q))
            u = u ** (abs(q) // g)  # minimal positive exponent
        else:
            u = concat(concat(concat(invert(u), invert(w)), u), w)
        if len(u) > ALMOST_IDENTITY_MAX_LETTERS:
            raise BudgetExceeded("almost-identity word exceeded the length cap")
    assert u, "construction preserves nontriviality in the free group"
    return u


def almost_identity_for_girth_bound(k: int, max_word_len: int) -> Word:
    """Fold *all* nontrivial reduced words of length <= max_word_len in k
    variables (canonical enumeration order) into one almost identity."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if max_word_len < 1:
        raise ValueError("max_word_len must be >= 1")
    ws = list(enumerate_words(k, max_word_len, mode="all"))
    return build_almost_identity(ws)


@dataclass(frozen=True)
class ModNWitness:
    """Either x_i^n as a girth-<=-n witness, or proof of non-generation."""

    n: int
    generating: bool
    index: int | None = None  # 0-based position of the witness word
    witness: Word | None = None  # x_i^n over the ambient alphabet
    image_order: int | None = None  # order of the proper image subgroup
    image_index: int | None = None

    def to_dict(self) -> dict:
        d: dict = {"n": self.n, "generating_image": self.generating}
        if self.generating:
            d["index"] = self.index
            d["witness"] = str(self.witness)
            d["relation_length_in_tuple_letters"] = self.n
        else:
            d["image_subgroup_order"] = self.image_order
            d["image_subgroup_index"] = self.image_index
        return d


def _gcd_many(values) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g


def girth_witness_mod_n(tuple_words: Sequence[Word], n: int) -> ModNWitness:
    """Exponent-sum argument in the quotient where n-th powers of words with
    some exponent sum not divisible by n are killed.

    Compute each word's (a-sum, b-sum) mod n.  If the vectors generate all
    of (Z/n)^2, the first word with a nonzero vector satisfies x^n = 1
    there, giving a relation of length n in tuple letters (girth <= n)
    whenever the tuple generates.  A proper image subgroup proves the tuple
    does not generate.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not tuple_words:
        raise ValueError("tuple must be nonempty")
    if any(w.rank != 2 for w in tuple_words):
        raise ValueError("tuple words must be over the rank-2 alphabet {a, b}")
    vecs = [(exp_sum(w, 0) % n, exp_sum(w, 1) % n) for w in tuple_words]
    # Columns [vecs..., n*e1, n*e2] span Z^2 iff the gcd of all 2x2 minors is 1.
    minors = [n * n]
    for x, y in vecs:
        minors.append(n * x)
        minors.append(n * y)
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            minors.append(vecs[i][0] * vecs[j][1] - vecs[i][1] * vecs[j][0])
    index = _gcd_many(abs(m) for m in minors)
    if index == 1:
        for i, (x, y) in enumerate(vecs):
            if x % n or y % n:
                return ModNWitness(
                    n, True, index=i, witness=tuple_words[i] ** n
                )
        raise AssertionError("full image requires some nonzero vector")
    return ModNWitness(
        n, False, image_order=(n * n) // index, image_index=index
    )


@dataclass(frozen=True)
class FreeLikeEvidence:
    """Per-n evidence bundle: girth certificate, bounded free-subgroup
    certificate, and a Cheeger upper bound on a Cayley ball."""

    k: int
    n: int
    girth_certificate: GirthCertificate
    free_subgroup_certificate: GirthCertificate
    free_subgroup_scan_bound: int
    cheeger_upper_bound: Fraction
    notes: str = ""

    def __post_init__(self):
        if self.n % 4 != 2:
            raise ValueError("n must be congruent to 2 mod 4")
        if not 0 < self.cheeger_upper_bound <= 1:
            raise ValueError("Cheeger upper bound must lie in (0, 1]")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "girth": self.girth_certificate.to_dict(),
            "free_subgroup": self.free_subgroup_certificate.to_dict(),
            "free_subgroup_scan_bound": self.free_subgroup_scan_bound,
            "cheeger_upper_bound": str(self.cheeger_upper_bound),
            "notes": self.notes,
        }
