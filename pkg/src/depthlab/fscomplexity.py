"""Size-bounded machine complexity.

Enumerates every transducer with a description of at most k bits and asks,
for a target string x, for the shortest input some machine in that set
maps to x. The per-machine search is a breadth-first shortest path over
(state, matched-prefix-length) nodes, so it is exact and terminates even
when emissions are empty.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .codec import decode_fst, encode_fst
from .errors import ValidationError
from .fst import BITS, FstSpec, fst_run

INFINITE = math.inf
ENUM_CEILING = 14


@dataclass(frozen=True)
class FstUniverse:
    """All machines with a description of length <= k, deduplicated.

    Entries are (shortest description, machine), ordered by description
    length then description bits.
    """

    k: int
    entries: tuple[tuple[str, FstSpec], ...]

    @property
    def machines(self) -> list[FstSpec]:
        return [spec for _, spec in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Witness:
    description: str
    input_bits: str
    machine_index: int


@dataclass(frozen=True)
class ComplexityResult:
    """Minimum input length (math.inf when no machine can emit the target)."""

    value: float
    witness: Optional[Witness]


def enum_fsts(k: int, ceiling: int = ENUM_CEILING) -> FstUniverse:
    """Decode every bit string of length <= k and keep what parses.

    Refuses k beyond `ceiling`: the candidate count doubles per extra bit.
    """
    if k > ceiling:
        raise ValidationError(
            f"enumeration bound {k} exceeds ceiling {ceiling} "
            f"(2^{k + 1} - 1 candidate descriptions)"
        )
    seen: dict[tuple, tuple[str, FstSpec]] = {}
    for length in range(k + 1):
        for val in range(1 << length):
            desc = format(val, f"0{length}b") if length else ""
            spec = decode_fst(desc)
            if spec is None:
                continue
            key = spec.canonical_key()
            if key not in seen:
                seen[key] = (desc, spec)
    entries = sorted(seen.values(), key=lambda e: (len(e[0]), e[0]))
    return FstUniverse(k, tuple(entries))


def min_input_for_output(T: FstSpec, x: str) -> Optional[tuple[int, str]]:
    """Shortest input y with T(y) = x, together with the lex-least such y.

    Breadth-first search over (state, matched length): one unit-cost edge
    per input bit, allowed only when the step's emission extends x at the
    match point. Returns None when no input works.
    """
    n = len(x)
    start = (T.start, 0)
    if n == 0:
        return (0, "")
    parent: dict[tuple[int, int], tuple[tuple[int, int], str]] = {}
    dist = {start: 0}
    queue = deque([start])
    goal = None
    while queue:
        node = queue.popleft()
        q, pos = node
        for b in BITS:  # bit order makes the first-found path lex-least
            e = T.out[(q, b)]
            end = pos + len(e)
            if end > n or x[pos:end] != e:
                continue
            nxt = (T.next[(q, b)], end)
            if nxt in dist:
                continue
            dist[nxt] = dist[node] + 1
            parent[nxt] = (node, b)
            if end == n:
                goal = nxt
                break
            queue.append(nxt)
        if goal:
            break
    if goal is None:
        return None
    path = []
    node = goal
    while node != start:
        node, b = parent[node]
        path.append(b)
    return (dist[goal], "".join(reversed(path)))


def brute_force_min_input(
    T: FstSpec, x: str, max_len: int
) -> Optional[str]:
    """Independent oracle: try every input of length <= max_len in order."""
    for length in range(max_len + 1):
        for y in product(BITS, repeat=length):
            s = "".join(y)
            if fst_run(T, s).output == x:
                return s
    return None


def kfs_over_set(
    x: str,
    machines: Sequence[FstSpec],
    descriptions: Optional[Sequence[str]] = None,
) -> ComplexityResult:
    """Exact minimum input length over an explicit machine list.

    Ties resolve to the earliest machine in the list (callers pass lists
    ordered by description), and within a machine to the lex-least input.
    """
    if not machines:
        raise ValidationError("machine list must be nonempty")
    best: Optional[tuple[int, str, int]] = None
    for idx, T in enumerate(machines):
        found = min_input_for_output(T, x)
        if found is None:
            continue
        length, y = found
        if best is None or length < best[0]:
            best = (length, y, idx)
    if best is None:
        return ComplexityResult(INFINITE, None)
    length, y, idx = best
    desc = descriptions[idx] if descriptions else encode_fst(machines[idx])
    return ComplexityResult(length, Witness(desc, y, idx))


def kfs_complexity(x: str, k: int, ceiling: int = ENUM_CEILING) -> ComplexityResult:
    """Minimum input length over every machine described in <= k bits."""
    universe = enum_fsts(k, ceiling=ceiling)
    if not universe.entries:
        return ComplexityResult(INFINITE, None)
    descs = [d for d, _ in universe.entries]
    return kfs_over_set(x, universe.machines, descs)


def pad_blocks(p: str, b: int) -> str:
    """Frame p for streaming: 0 before every full b-bit block, then a 1
    marker, then the leftover bits doubled.

    With |p| = n*b + r the result has length n*(b+1) + 2r + 1, so the
    overhead fades as b grows.
    """
    if b < 1:
        raise ValidationError("block size must be >= 1")
    n = len(p) // b
    pieces = []
    for i in range(n):
        pieces.append("0" + p[i * b : (i + 1) * b])
    pieces.append("1")
    for c in p[n * b :]:
        pieces.append(c + c)
    return "".join(pieces)


def unpad_blocks(s: str, b: int) -> str:
    """Inverse of pad_blocks; raises ValueError on framing violations."""
    if b < 1:
        raise ValidationError("block size must be >= 1")
    i = 0
    pieces = []
    while True:
        if i >= len(s):
            raise ValueError(f"missing tail marker at bit {i}")
        flag = s[i]
        i += 1
        if flag == "1":
            break
        block = s[i : i + b]
        if len(block) < b:
            raise ValueError(f"truncated block at bit {i}")
        pieces.append(block)
        i += b
    tail = s[i:]
    if len(tail) % 2:
        raise ValueError(f"odd doubled tail starting at bit {i}")
    for j in range(0, len(tail), 2):
        if tail[j] != tail[j + 1]:
            raise ValueError(f"bad doubling at bit {i + j}")
        pieces.append(tail[j])
    return "".join(pieces)


def build_pad_combiner(A: FstSpec, B: FstSpec, b: int) -> FstSpec:
    """Machine mapping pad_blocks(p, b) + "10" + q to A(p)B(q).

    It tracks the framing of the padded section, feeds the recovered bits
    of p to a simulation of A, switches on the 10 pair that cannot occur
    inside a doubled tail, and then feeds the rest to B. Inputs that break
    the framing fall into a silent sink.
    """
    if b < 1:
        raise ValidationError("block size must be >= 1")
    # State encoding: ("F", a, j) frame position j (0 = expecting a frame
    # bit) while A sits in state a; ("D", a, pending) inside the doubled
    # tail; ("G", s) feeding B; ("X",) sink.
    index: dict[tuple, int] = {}
    order: list[tuple] = []

    def ref(state: tuple) -> int:
        if state not in index:
            index[state] = len(order) + 1
            order.append(state)
        return index[state]

    next_map: dict[tuple[int, str], int] = {}
    out_map: dict[tuple[int, str], str] = {}
    ref(("F", A.start, 0))
    i = 0
    while i < len(order):
        state = order[i]
        idx = index[state]
        i += 1
        for bit in BITS:
            if state[0] == "F":
                _, a, j = state
                if j == 0:
                    tgt, em = (("F", a, 1) if bit == "0" else ("D", a, "")), ""
                else:
                    a2 = A.next[(a, bit)]
                    em = A.out[(a, bit)]
                    tgt = ("F", a2, 0 if j == b else j + 1)
            elif state[0] == "D":
                _, a, pending = state
                if pending == "":
                    tgt, em = ("D", a, bit), ""
                elif pending == bit:
                    tgt, em = ("D", A.next[(a, bit)], ""), A.out[(a, bit)]
                elif pending == "1":  # the 10 separator
                    tgt, em = ("G", B.start), ""
                else:  # 01 never occurs in a doubled tail
                    tgt, em = ("X",), ""
            elif state[0] == "G":
                _, s = state
                tgt, em = ("G", B.next[(s, bit)]), B.out[(s, bit)]
            else:
                tgt, em = ("X",), ""
            next_map[(idx, bit)] = ref(tgt)
            out_map[(idx, bit)] = em
    return FstSpec(len(order), 1, next_map, out_map)
