"""Free-group words over a ranked alphabet.

A word is a freely reduced sequence of signed letters.  Letter ``s`` (a
nonzero int) stands for generator ``|s| - 1`` with sign ``sign(s)``, so
generator 0 is ``a`` (as ``+1``) and its inverse ``A`` (as ``-1``).
Internally letters are packed one per byte with code ``2*index + (1 if
positive else 0)``; byte order therefore coincides with the canonical
letter order (index, sign) with the inverse sorting before the positive
letter, and inversion of a letter is ``code ^ 1``.

All values are immutable; every operation returns a new :class:`Word`.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Word",
    "reduce",
    "concat",
    "invert",
    "substitute",
    "cyclic_reduce",
    "cyclic_shifts",
    "exp_sum",
    "primitive_root",
    "commute_in_free",
    "canonical_form",
    "is_canonical",
    "enumerate_words",
    "parse_word",
    "format_word",
    "MAX_RANK",
]

_ALPHA = "abcdefghijklmnopqrstuvwxyz"
MAX_RANK = 120  # letter codes must fit a byte


def _encode(letter: int, rank: int) -> int:
    if letter == 0:
        raise ValueError("letter 0 is not a generator (use +/-1..rank)")
    idx = abs(letter) - 1
    if idx >= rank:
        raise ValueError(f"letter {letter} exceeds rank {rank}")
    return 2 * idx + (1 if letter > 0 else 0)


def _decode(code: int) -> int:
    idx = code >> 1
    return idx + 1 if code & 1 else -(idx + 1)


def _reduce_bytes(codes: Iterable[int]) -> bytes:
    out = bytearray()
    for c in codes:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return bytes(out)


def _invert_bytes(data: bytes) -> bytes:
    return bytes(b ^ 1 for b in reversed(data))


class Word:
    """An immutable freely reduced word of a given alphabet rank."""

    __slots__ = ("data", "rank")

    data: bytes
    rank: int

    def __init__(self, letters: Sequence[int] = (), rank: int = 1):
        if not 1 <= rank <= MAX_RANK:
            raise ValueError(f"rank must be in 1..{MAX_RANK}, got {rank}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(
            self, "data", _reduce_bytes(_encode(s, rank) for s in letters)
        )

    @classmethod
    def _make(cls, data: bytes, rank: int) -> "Word":
        """Wrap already-reduced letter codes without rescanning."""
        w = object.__new__(cls)
        object.__setattr__(w, "data", data)
        object.__setattr__(w, "rank", rank)
        return w

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(_decode(b) for b in self.data)

    def __len__(self) -> int:
        return len(self.data)

    def __bool__(self) -> bool:
        return bool(self.data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.rank == other.rank
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.rank, self.data))

    def __lt__(self, other: "Word") -> bool:
        """Shortlex: by length, then by canonical letter order."""
        if not isinstance(other, Word):
            return NotImplemented
        return (len(self.data), self.data) < (len(other.data), other.data)

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else invert(self)
        out = Word._make(b"", self.rank)
        for _ in range(abs(n)):
            out = concat(out, base)
        return out

    def conjugate(self, g: "Word") -> "Word":
        """g * self * g^-1."""
        return concat(concat(g, self), invert(g))

    def is_cyclically_reduced(self) -> bool:
        d = self.data
        return len(d) < 2 or d[0] != d[-1] ^ 1

    def is_positive(self) -> bool:
        return all(b & 1 for b in self.data)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r}, rank={self.rank})"


def reduce(letters: Sequence[int], rank: int) -> Word:
    """Freely reduce a raw signed-letter sequence; idempotent."""
    return Word(letters, rank)


def concat(u: Word, v: Word) -> Word:
    if u.rank != v.rank:
        raise ValueError(f"rank mismatch: {u.rank} != {v.rank}")
    out = bytearray(u.data)
    for c in v.data:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return Word._make(bytes(out), u.rank)


def invert(w: Word) -> Word:
    return Word._make(_invert_bytes(w.data), w.rank)


def substitute(u: Word, images: Sequence[Word]) -> Word:
    """Replace letter x_i^{+/-1} of ``u`` by ``images[i]^{+/-1}`` and reduce.

    ``u`` must have rank ``len(images)``; all images must share one rank.
    """
    if u.rank != len(images):
        raise ValueError(f"word rank {u.rank} != number of images {len(images)}")
    if not images:
        raise ValueError("need at least one image")
    m = images[0].rank
    if any(img.rank != m for img in images):
        raise ValueError("images must share one rank")
    out = bytearray()
    for c in u.data:
        img = images[c >> 1].data
        if not c & 1:
            img = _invert_bytes(img)
        for b in img:
            if out and out[-1] == b ^ 1:
                out.pop()
            else:
                out.append(b)
    return Word._make(bytes(out), m)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w = conjugator * core * conjugator^-1`` with cyclically reduced core."""
    d = w.data
    i, j = 0, len(d)
    while j - i >= 2 and d[i] == d[j - 1] ^ 1:
        i += 1
        j -= 1
    return Word._make(d[:i], w.rank), Word._make(d[i:j], w.rank)


def cyclic_shifts(w: Word) -> list[Word]:
    """All rotations of a cyclically reduced word, deduplicated.

    The result size divides ``len(w)``.
    """
    if not w.is_cyclically_reduced():
        raise ValueError(f"word {w} is not cyclically reduced")
    d = w.data
    doubled = d + d
    seen: set[bytes] = set()
    out: list[Word] = []
    for i in range(max(len(d), 1)):
        rot = doubled[i : i + len(d)]
        if rot not in seen:
            seen.add(rot)
            out.append(Word._make(rot, w.rank))
    return out


def exp_sum(w: Word, generator_index: int) -> int:
    """Signed number of occurrences of one generator."""
    if not 0 <= generator_index < w.rank:
        raise ValueError(f"generator index {generator_index} out of range")
    pos = 2 * generator_index + 1
    neg = 2 * generator_index
    return sum(1 if b == pos else -1 if b == neg else 0 for b in w.data)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def primitive_root(w: Word) -> tuple[Word, int]:
    """Shortest ``z`` and maximal ``e >= 1`` with ``w == z**e``.

    Non-cyclically-reduced input is conjugated to its core first; the
    period test is only valid on cyclic words.
    """
    if not w:
        raise ValueError("empty word has no primitive root")
    conj, core = cyclic_reduce(w)
    d = core.data
    n = len(d)
    for per in _divisors(n):
        if d[:per] * (n // per) == d:
            root_core = d[:per]
            exponent = n // per
            break
    # Conjugating back never creates cancellation: the core's last letter
    # equals the root's last letter.
    root = conj.data + root_core + _invert_bytes(conj.data)
    return Word._make(root, w.rank), exponent


def commute_in_free(u: Word, w: Word) -> bool:
    """True iff ``uw == wu`` after reduction (equivalently: common root)."""
    if not u or not w:
        raise ValueError("commutation test needs nonempty words")
    return concat(u, w) == concat(w, u)


def _orbit_min(data: bytes) -> bytes:
    n = len(data)
    doubled = data + data
    inv = _invert_bytes(data)
    inv2 = inv + inv
    best = data
    for s in range(n):
        for cand_src in (doubled, inv2):
            cand = cand_src[s : s + n]
            if cand < best:
                best = cand
    return best


def canonical_form(w: Word) -> Word:
    """Least word among all cyclic shifts of ``w`` and of ``~w``.

    Requires cyclically reduced input; used to pick one representative per
    {cyclic shift, inversion} orbit.
    """
    if not w.is_cyclically_reduced():
        raise ValueError(f"word {w} is not cyclically reduced")
    if not w:
        return w
    return Word._make(_orbit_min(w.data), w.rank)


def is_canonical(w: Word) -> bool:
    return w.is_cyclically_reduced() and (not w or w.data == _orbit_min(w.data))


def _reduced_of_length(rank: int, length: int) -> Iterator[bytes]:
    nsym = 2 * rank
    buf = bytearray(length)

    def rec(pos: int) -> Iterator[bytes]:
        banned = buf[pos - 1] ^ 1 if pos else -1
        for c in range(nsym):
            if c == banned:
                continue
            buf[pos] = c
            if pos + 1 == length:
                yield bytes(buf)
            else:
                yield from rec(pos + 1)

    yield from rec(0)


def enumerate_words(rank: int, max_length: int, mode: str = "all") -> Iterator[Word]:
    """Stream nontrivial reduced words of length <= max_length.

    ``mode="all"``: every freely reduced word exactly once, by ascending
    length and lexicographic order within a length.

    ``mode="canonical"``: one representative per {cyclic shift, inversion}
    orbit of cyclically reduced words, same ordering.
    """
    if rank < 1 or max_length < 1:
        raise ValueError("rank and max_length must be >= 1")
    if mode not in ("all", "canonical"):
        raise ValueError(f"unknown mode {mode!r}")
    for length in range(1, max_length + 1):
        for data in _reduced_of_length(rank, length):
            if mode == "canonical":
                if length >= 2 and data[0] == data[-1] ^ 1:
                    continue  # not cyclically reduced
                if data != _orbit_min(data):
                    continue
            yield Word._make(data, rank)


# ---------------------------------------------------------------------------
# Text format: generators a..z, inverse as uppercase or ^-k, powers allowed.
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*([a-zA-Z])(\d*)(?:\^(-?\d+))?")


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse the word text format; round-trips with :func:`format_word`.

    ``a`` .. ``z`` name generators 0..25, uppercase is the inverse, powers
    use a caret (``b^4``, ``a^-3``).  Generators past ``z`` (or for rank-k
    variable words) are written ``x1``, ``x2``, ... with ``X1`` or ``x1^-1``
    for inverses.  ``1`` (or nothing) is the empty word.
    """
    stripped = text.strip()
    letters: list[int] = []
    if stripped not in ("", "1"):
        pos = 0
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m:
                raise ValueError(f"cannot parse word at {stripped[pos:]!r}")
            ch, digits, expo = m.groups()
            if digits:
                if ch not in "xX":
                    raise ValueError(f"digits only follow x/X variables: {m.group(0)!r}")
                idx = int(digits) - 1
                if idx < 0:
                    raise ValueError("variable indices start at x1")
                sign = 1 if ch == "x" else -1
            else:
                idx = _ALPHA.index(ch.lower())
                sign = 1 if ch.islower() else -1
            e = int(expo) if expo is not None else 1
            letters.extend([sign * (idx + 1) if e > 0 else -sign * (idx + 1)] * abs(e))
            pos = m.end()
    if rank is None:
        rank = max((abs(s) for s in letters), default=1)
    return Word(letters, rank)


def format_word(w: Word) -> str:
    if not w.data:
        return "1"
    parts: list[str] = []
    d = w.data
    i = 0
    while i < len(d):
        j = i
        while j < len(d) and d[j] == d[i]:
            j += 1
        count = j - i
        idx = d[i] >> 1
        e = count if d[i] & 1 else -count
        if idx < 26:
            ch = _ALPHA[idx]
            if e == 1:
                parts.append(ch)
            elif e == -1:
                parts.append(ch.upper())
            else:
                parts.append(f"{ch}^{e}")
        else:
            parts.append(f"x{idx + 1}" if e == 1 else f"x{idx + 1}^{e}")
        i = j
    return "".join(parts)
