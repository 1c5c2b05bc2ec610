"""Finite-state transducers over the binary alphabet.

A transducer has states 1..m, a start state, and total transition/output
maps on (state, bit). Running one on an input concatenates the per-step
emissions. Everything here is a pure function over immutable specs, so
concurrent use needs no coordination.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Optional

from .errors import ValidationError

BITS = ("0", "1")

# Cap used by spec generators and enumeration-style tooling so machine
# spaces stay finite; hand-built machines may exceed it.
MAX_EMISSION_DEFAULT = 8


def _check_bits(s: str, what: str) -> None:
    if s.strip("01") != "":
        raise ValidationError(f"{what} must be a string over 0/1, got {s!r}")


@dataclass(frozen=True)
class FstSpec:
    """A finite-state transducer: states 1..num_states, total on (state, bit).

    `next` maps (state, bit) -> state; `out` maps (state, bit) -> emitted
    bits (possibly empty).
    """

    num_states: int
    start: int
    next: Mapping[tuple[int, str], int]
    out: Mapping[tuple[int, str], str]

    def __post_init__(self) -> None:
        m = self.num_states
        if m < 1:
            raise ValidationError("num_states must be >= 1")
        if not 1 <= self.start <= m:
            raise ValidationError(f"start state {self.start} not in 1..{m}")
        keys = {(q, b) for q in range(1, m + 1) for b in BITS}
        if set(self.next) != keys or set(self.out) != keys:
            raise ValidationError("next/out must be total on states x bits")
        for key, tgt in self.next.items():
            if not 1 <= tgt <= m:
                raise ValidationError(f"next{key} -> {tgt} out of range 1..{m}")
        for key, e in self.out.items():
            _check_bits(e, f"out{key}")

    def canonical_key(self):
        """Hashable value identity, independent of dict insertion order."""
        return (
            self.num_states,
            self.start,
            tuple(sorted(self.next.items())),
            tuple(sorted(self.out.items())),
        )

    def max_emission(self) -> int:
        return max(len(e) for e in self.out.values())


@dataclass(frozen=True)
class RunResult:
    output: str
    final_state: int


def fst_run(T: FstSpec, x: str, start: Optional[int] = None) -> RunResult:
    """Run T on x: output is the concatenation of per-step emissions."""
    q = T.start if start is None else start
    pieces = []
    for b in x:
        pieces.append(T.out[(q, b)])
        q = T.next[(q, b)]
    return RunResult("".join(pieces), q)


def il_check(T: FstSpec, L: int) -> Optional[tuple[str, str]]:
    """Bounded information-losslessness check.

    Returns None when x -> (output, final state) is injective over all
    inputs with |x| <= L, else the first colliding pair found in
    breadth-first order.
    """
    if L < 1:
        raise ValidationError("L must be >= 1")
    seen: dict[tuple[str, int], str] = {("", T.start): ""}
    frontier = [("", T.start, "")]
    for _ in range(L):
        nxt = []
        for x, q, outp in frontier:
            for b in BITS:
                x2 = x + b
                out2 = outp + T.out[(q, b)]
                q2 = T.next[(q, b)]
                key = (out2, q2)
                if key in seen:
                    return (seen[key], x2)
                seen[key] = x2
                nxt.append((x2, q2, out2))
        frontier = nxt
    return None


def fst_compose(A: FstSpec, B: FstSpec) -> FstSpec:
    """Machine computing x -> A(B(x)).

    Product states are (state of A after consuming B's emission so far,
    state of B); unreachable products are pruned and states renumbered in
    discovery order.
    """
    start = (A.start, B.start)
    index = {start: 1}
    order = [start]
    next_map: dict[tuple[int, str], int] = {}
    out_map: dict[tuple[int, str], str] = {}
    i = 0
    while i < len(order):
        qa, qb = order[i]
        i += 1
        for b in BITS:
            e = B.out[(qb, b)]
            ra = fst_run(A, e, start=qa)
            pair = (ra.final_state, B.next[(qb, b)])
            if pair not in index:
                index[pair] = len(order) + 1
                order.append(pair)
            next_map[(index[(qa, qb)], b)] = index[pair]
            out_map[(index[(qa, qb)], b)] = ra.output
    return FstSpec(len(order), 1, next_map, out_map)


def shift_start(T: FstSpec, w: str) -> FstSpec:
    """T with its start state moved to wherever T lands after reading w."""
    return replace(T, start=fst_run(T, w).final_state)


def verify_inverse_pair(
    T: FstSpec, Tinv: FstSpec, c: int, L: int
) -> Optional[str]:
    """Check that Tinv undoes T up to c trailing bits, for all |x| <= L.

    Passing means x[:|x|-c] is a prefix of Tinv(T(x)) which is a prefix of
    x. Returns None on pass, else the first failing input.
    """
    if c < 0 or L < 1:
        raise ValidationError("need c >= 0 and L >= 1")
    frontier = [""]
    for _ in range(L + 1):
        for x in frontier:
            y = fst_run(Tinv, fst_run(T, x).output).output
            want = x[: max(len(x) - c, 0)]
            if not (y.startswith(want) and x.startswith(y)):
                return x
        frontier = [x + b for x in frontier for b in BITS]
        if len(frontier[0]) > L:
            break
    return None


# Common machines, also exposed as CLI builtins.

def identity_fst() -> FstSpec:
    return FstSpec(1, 1, {(1, "0"): 1, (1, "1"): 1}, {(1, "0"): "0", (1, "1"): "1"})


def repeater_fst(r: str) -> FstSpec:
    """Single state, emits r on every input bit: T(x) = r^|x|."""
    _check_bits(r, "repeater emission")
    return FstSpec(1, 1, {(1, "0"): 1, (1, "1"): 1}, {(1, "0"): r, (1, "1"): r})


def silent_fst() -> FstSpec:
    return repeater_fst("")


# Textual machine format: header "fst m start", then one line per entry
# "q b -> q' emission" with "-" standing for the empty emission.

def format_fst(T: FstSpec) -> str:
    lines = [f"fst {T.num_states} {T.start}"]
    for q in range(1, T.num_states + 1):
        for b in BITS:
            e = T.out[(q, b)] or "-"
            lines.append(f"{q} {b} -> {T.next[(q, b)]} {e}")
    return "\n".join(lines) + "\n"


def parse_fst(text: str) -> FstSpec:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError("empty transducer description")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "fst":
        raise ValidationError(f"bad fst header: {lines[0]!r}")
    try:
        m, start = int(head[1]), int(head[2])
    except ValueError as exc:
        raise ValidationError(f"bad fst header: {lines[0]!r}") from exc
    next_map: dict[tuple[int, str], int] = {}
    out_map: dict[tuple[int, str], str] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 5 or parts[2] != "->":
            raise ValidationError(f"bad fst line: {ln!r}")
        q, b, tgt, e = int(parts[0]), parts[1], int(parts[3]), parts[4]
        if b not in BITS:
            raise ValidationError(f"bad input bit in line: {ln!r}")
        if (q, b) in next_map:
            raise ValidationError(f"duplicate entry for ({q}, {b})")
        next_map[(q, b)] = tgt
        out_map[(q, b)] = "" if e == "-" else e
    return FstSpec(m, start, next_map, out_map)
