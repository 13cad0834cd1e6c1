"""Pure-Python fallbacks for the compiled hot loops in ``_speedups``.

Same signatures and bit-identical results, selected by ``freelike._kernels``
when the extension is unavailable (or FREELIKE_PURE=1).  Orders of magnitude
slower on large inputs; see benchmarks/bench_backends.py.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"


def scan_reduced_subtree(
    rank: int,
    max_len: int,
    guard_len: int,
    first_letter: int,
    collect_limit: int = 1_000_000,
) -> tuple[int, list[bytes]]:
    """DFS over freely reduced words starting with one fixed first letter.

    Returns ``(count, undecided)``: ``count`` is the number of words visited
    (lengths 1..max_len); ``undecided`` lists, in DFS order, the letter-code
    byte strings of words with ``2*len > guard_len`` — the only ones that
    could contain more than half of a relator of length >= guard_len.
    """
    nsym = 2 * rank
    if not 0 <= first_letter < nsym:
        raise ValueError("first_letter out of range")
    if max_len < 1 or max_len > 64:
        raise ValueError("max_len must be in 1..64")
    undecided: list[bytes] = []
    letter = bytearray(max_len)
    nxt = [0] * (max_len + 1)
    letter[0] = first_letter
    count = 1
    if 2 > guard_len:
        undecided.append(bytes(letter[:1]))
    if max_len == 1:
        return count, undecided
    depth = 1
    nxt[1] = 0
    while depth >= 1:
        if depth == max_len:
            depth -= 1
            continue
        c = nxt[depth]
        if c >= nsym:
            depth -= 1
            continue
        nxt[depth] = c + 1
        if c == letter[depth - 1] ^ 1:
            continue
        letter[depth] = c
        depth += 1
        count += 1
        if 2 * depth > guard_len:
            if len(undecided) >= collect_limit:
                raise MemoryError("undecided word collection exceeded limit")
            undecided.append(bytes(letter[:depth]))
        nxt[depth] = 0
    return count, undecided


def _find(parent: list[int] | np.ndarray, x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def crossing_from_uniforms(
    eu: np.ndarray,
    ev: np.ndarray,
    uniforms: np.ndarray,
    p: float,
    n: int,
    root: int,
    target_mask: np.ndarray,
) -> bool:
    """Does the root reach the target through edges with uniform < p?"""
    parent = list(range(n))
    open_idx = np.nonzero(uniforms < p)[0]
    for i in open_idx:
        ra, rb = _find(parent, int(eu[i])), _find(parent, int(ev[i]))
        if ra != rb:
            parent[rb] = ra
    rr = _find(parent, root)
    for v in np.nonzero(target_mask)[0]:
        if _find(parent, int(v)) == rr:
            return True
    return False


def component_labels(
    n: int, eu: np.ndarray, ev: np.ndarray, open_mask: np.ndarray
) -> np.ndarray:
    """Label vertices by the minimum vertex index of their open component."""
    parent = list(range(n))
    for i in np.nonzero(open_mask)[0]:
        ra, rb = _find(parent, int(eu[i])), _find(parent, int(ev[i]))
        if ra != rb:
            parent[rb] = ra
    labels = np.empty(n, dtype=np.int64)
    best: dict[int, int] = {}
    roots = [0] * n
    for v in range(n):
        r = _find(parent, v)
        roots[v] = r
        if r not in best:
            best[r] = v
    for v in range(n):
        labels[v] = best[roots[v]]
    return labels
