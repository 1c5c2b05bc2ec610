"""Bounded pushdown compressors with binary or unary stacks.

A spec carries partial transition/output maps keyed by (state, input
symbol, stack top), where the input symbol may be the empty string for a
move that consumes no input. Such moves never emit, and at most
`lambda_budget` of them may run back to back; validation checks this
statically so runs are total on defined transitions. The stack is a
top-first string whose last character is always the bottom marker.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import StuckError, ValidationError
from .fst import BITS, FstSpec, _check_bits

Z0 = "z"
LAMBDA = ""

TransKey = tuple[int, str, str]  # (state, input bit or LAMBDA, stack top)


@dataclass(frozen=True)
class PdcSpec:
    """A pushdown compressor.

    trans maps (state, input, top) -> (state, push string); the push
    replaces the consumed top, so an empty push is a pop. emit gives the
    bits written on the same keys (missing keys emit nothing).
    """

    num_states: int
    start: int
    stack_kind: str  # "binary" or "unary"
    trans: Mapping[TransKey, tuple[int, str]]
    emit: Mapping[TransKey, str]
    lambda_budget: int

    def __post_init__(self) -> None:
        if self.num_states < 1:
            raise ValidationError("num_states must be >= 1")
        if not 1 <= self.start <= self.num_states:
            raise ValidationError("start state out of range")
        if self.stack_kind not in ("binary", "unary"):
            raise ValidationError(f"unknown stack kind {self.stack_kind!r}")
        if self.lambda_budget < 0:
            raise ValidationError("lambda_budget must be >= 0")

    def stack_symbols(self) -> str:
        return "01" if self.stack_kind == "binary" else "0"

    def canonical_key(self):
        return (
            self.num_states,
            self.start,
            self.stack_kind,
            self.lambda_budget,
            tuple(sorted(self.trans.items())),
            tuple(sorted((k, v) for k, v in self.emit.items() if v)),
        )


@dataclass(frozen=True)
class PdcRun:
    output: str
    final_state: int
    final_stack: str  # top first, ends with the bottom marker


def pdc_validate(C: PdcSpec) -> list[str]:
    """All invariant violations, each naming the offending key; [] passes.

    Checks key well-formedness, determinism per (state, top), bottom-marker
    preservation, silence of input-free moves, unary stack discipline, and
    that no chain of input-free moves can exceed the budget (a cycle in
    the move graph counts as unbounded).
    """
    problems = []
    syms = C.stack_symbols()
    tops = syms + Z0
    for key, (tgt, push) in C.trans.items():
        q, inp, top = key
        if not 1 <= q <= C.num_states:
            problems.append(f"state out of range in {key}")
        if inp not in (LAMBDA, "0", "1"):
            problems.append(f"bad input symbol in {key}")
        if top not in tops:
            problems.append(f"bad stack top in {key}")
        if not 1 <= tgt <= C.num_states:
            problems.append(f"target state out of range in {key}")
        if top == Z0:
            if not push.endswith(Z0) or Z0 in push[:-1]:
                problems.append(f"bottom marker not preserved in {key}")
            body = push[:-1]
        else:
            body = push
            if Z0 in push:
                problems.append(f"bottom marker pushed mid-stack in {key}")
        if any(c not in syms for c in body):
            problems.append(f"push alphabet violation in {key}")
    for key, bits in C.emit.items():
        if key not in C.trans:
            problems.append(f"emission on undefined transition {key}")
        try:
            _check_bits(bits, f"emission {key}")
        except ValidationError as exc:
            problems.append(str(exc))
        if key[1] == LAMBDA and bits:
            problems.append(f"input-free move must not emit: {key}")
    by_pair: dict[tuple[int, str], set[str]] = {}
    for q, inp, top in C.trans:
        by_pair.setdefault((q, top), set()).add(inp)
    for pair, inputs in sorted(by_pair.items()):
        if LAMBDA in inputs and len(inputs) > 1:
            problems.append(f"both input-free and bit moves on {pair}")

    # Longest chain of input-free moves over (state, top) nodes. A pure
    # pop leaves the next top unknown, so it fans out to every symbol.
    edges: dict[tuple[int, str], list[tuple[int, str]]] = {}
    for (q, inp, top), (tgt, push) in C.trans.items():
        if inp != LAMBDA:
            continue
        if push:
            succ = [(tgt, push[0])]
        else:
            succ = [(tgt, t) for t in tops]
        edges[(q, top)] = succ
    depth: dict[tuple[int, str], int] = {}
    on_stack: set[tuple[int, str]] = set()

    def longest(node) -> int:
        if node in depth:
            return depth[node]
        if node in on_stack:
            return C.lambda_budget + 1  # cycle: unbounded succession
        if node not in edges:
            depth[node] = 0
            return 0
        on_stack.add(node)
        best = 1 + max(longest(s) for s in edges[node])
        on_stack.discard(node)
        depth[node] = min(best, C.lambda_budget + 1)
        return depth[node]

    worst = max((longest(n) for n in list(edges)), default=0)
    if worst > C.lambda_budget:
        problems.append(
            f"input-free moves can chain beyond budget {C.lambda_budget}"
        )
    return problems


def validate_strict(C: PdcSpec) -> PdcSpec:
    problems = pdc_validate(C)
    if problems:
        raise ValidationError("; ".join(problems))
    return C


def _closure(C: PdcSpec, q: int, stack: str) -> tuple[int, str]:
    steps = 0
    while (q, LAMBDA, stack[0]) in C.trans:
        tgt, push = C.trans[(q, LAMBDA, stack[0])]
        stack = push + stack[1:]
        q = tgt
        steps += 1
        if steps > C.lambda_budget:
            raise ValidationError(
                "input-free moves exceeded the budget at run time; "
                "run pdc_validate on this machine"
            )
    return q, stack


def pdc_run(
    C: PdcSpec,
    x: str,
    state: Optional[int] = None,
    stack: Optional[str] = None,
) -> PdcRun:
    """Run C on x, optionally from an explicit mid-run configuration.

    Input-free moves are applied exhaustively before the first bit and
    after every bit. A missing bit transition raises StuckError naming the
    position.
    """
    q = C.start if state is None else state
    st = Z0 if stack is None else stack
    out: list[str] = []
    q, st = _closure(C, q, st)
    for i, b in enumerate(x):
        key = (q, b, st[0])
        if key not in C.trans:
            raise StuckError(i, q, st[0], "".join(out))
        tgt, push = C.trans[key]
        out.append(C.emit.get(key, ""))
        st = push + st[1:]
        q = tgt
        q, st = _closure(C, q, st)
    return PdcRun("".join(out), q, st)


def pdc_il_check(C: PdcSpec, L: int) -> Optional[tuple[str, str]]:
    """Bounded losslessness: None when x -> (output, final state) is
    injective for all |x| <= L, else the first colliding pair found.

    Inputs that strand the machine are skipped; they identify themselves.
    """
    if L < 1:
        raise ValidationError("L must be >= 1")
    q0, st0 = _closure(C, C.start, Z0)
    seen: dict[tuple[str, int], str] = {("", q0): ""}
    frontier = [("", q0, st0, "")]
    for _ in range(L):
        nxt = []
        for x, q, st, outp in frontier:
            for b in BITS:
                key = (q, b, st[0])
                if key not in C.trans:
                    continue
                tgt, push = C.trans[key]
                out2 = outp + C.emit.get(key, "")
                q2, st2 = _closure(C, tgt, push + st[1:])
                x2 = x + b
                sig = (out2, q2)
                if sig in seen:
                    return (seen[sig], x2)
                seen[sig] = x2
                nxt.append((x2, q2, st2, out2))
        frontier = nxt
    return None


def identity_pdc() -> PdcSpec:
    """Unary-stack machine that copies its input and ignores the stack."""
    trans = {(1, b, Z0): (1, Z0) for b in BITS}
    emit = {(1, b, Z0): b for b in BITS}
    return PdcSpec(1, 1, "unary", trans, emit, 0)


def _max_pops_per_closure(C: PdcSpec) -> int:
    """Most symbols any single run of input-free moves can pop.

    Longest pop-weighted path in the (state, top) move graph; the graph is
    acyclic on validated specs.
    """
    tops = C.stack_symbols() + Z0
    edges: dict[tuple[int, str], list[tuple[int, tuple[int, str]]]] = {}
    for (q, inp, top), (tgt, push) in C.trans.items():
        if inp != LAMBDA:
            continue
        if push:
            succ = [(0, (tgt, push[0]))]
        else:
            succ = [(1, (tgt, t)) for t in tops]
        edges[(q, top)] = succ
    memo: dict[tuple[int, str], int] = {}

    def pops(node) -> int:
        if node not in memo:
            memo[node] = max(
                (w + pops(s) for w, s in edges.get(node, [])), default=0
            )
        return memo[node]

    return max((pops(n) for n in list(edges)), default=0)


_OK, _STUCK, _UNDERFLOW = "ok", "stuck", "underflow"


def compose_pdc_fst(
    C: PdcSpec, T: FstSpec, state_ceiling: int = 200_000
) -> PdcSpec:
    """A compressor N with N(x) = C(T(x)) for every x.

    Product states are (state of C, state of T, buffered stack prefix).
    Each bit move replays C over T's emission for that bit on the buffered
    region of the stack; when the replay would need symbols below the
    known region, N instead pops one more symbol into its buffer with an
    input-free move. The buffer never needs to exceed (1 + worst pops per
    closure) symbols per emitted bit, so filling terminates. Unary stacks
    stay unary. Raises when the reachable product exceeds state_ceiling.
    """
    validate_strict(C)
    d = T.max_emission()
    # Worst pops per replay: one closure before the first bit (only the
    # start state can be unclosed, but unreachable product states are
    # built from arbitrary configurations) plus, per emitted bit, one
    # bit-move pop and one closure.
    pclose = _max_pops_per_closure(C)
    cap = pclose * (d + 1) + d
    syms = C.stack_symbols()
    has_lambda_from = {q for (q, inp, _t) in C.trans if inp == LAMBDA}

    def replay(qc: int, partial: str, e: str, exact: bool):
        """Run C on e over a partial stack. When exact, the partial stack
        is the whole stack (ends with the bottom marker); otherwise the
        run reports an underflow as soon as the outcome could depend on
        symbols below the known region."""
        q, st = qc, partial
        out: list[str] = []

        def close():
            nonlocal q, st
            steps = 0
            while st and (q, LAMBDA, st[0]) in C.trans:
                tgt, push = C.trans[(q, LAMBDA, st[0])]
                st = push + st[1:]
                q = tgt
                steps += 1
                if steps > C.lambda_budget:
                    raise ValidationError("budget overrun while composing")
            # An empty partial stack only blocks the closure if q has any
            # input-free move at all; otherwise q is closed regardless of
            # what lies below.
            if not exact and not st and q in has_lambda_from:
                return False
            return True

        if not close():
            return (_UNDERFLOW, None, None, None)
        for b in e:
            if not st:
                return (_UNDERFLOW, None, None, None)
            key = (q, b, st[0])
            if key not in C.trans:
                return (_STUCK, None, None, None)
            tgt, push = C.trans[key]
            out.append(C.emit.get(key, ""))
            st = push + st[1:]
            q = tgt
            if not close():
                return (_UNDERFLOW, None, None, None)
        return (_OK, q, st, "".join(out))

    index: dict[tuple[int, int, str], int] = {}
    order: list[tuple[int, int, str]] = []

    def ref(key: tuple[int, int, str]) -> int:
        if key not in index:
            if len(order) >= state_ceiling:
                raise ValidationError(
                    f"composition exceeds state ceiling {state_ceiling}"
                )
            index[key] = len(order) + 1
            order.append(key)
        return index[key]

    trans: dict[TransKey, tuple[int, str]] = {}
    emit: dict[TransKey, str] = {}
    start = ref((C.start, T.start, ""))
    i = 0
    while i < len(order):
        qc, qt, buf = order[i]
        idx = index[(qc, qt, buf)]
        i += 1
        moves = {b: (T.out[(qt, b)], T.next[(qt, b)]) for b in BITS}
        for b, (e, qt2) in moves.items():
            got = replay(qc, buf + Z0, e, exact=True)
            if got[0] == _OK:
                _, qc2, st2, outbits = got
                trans[(idx, b, Z0)] = (ref((qc2, qt2, "")), st2)
                if outbits:
                    emit[(idx, b, Z0)] = outbits
        for a in syms:
            results = {
                b: replay(qc, buf + a, e, exact=False)
                for b, (e, _) in moves.items()
            }
            if any(r[0] == _UNDERFLOW for r in results.values()):
                if len(buf) >= cap:
                    raise AssertionError("buffer bound violated in composition")
                trans[(idx, LAMBDA, a)] = (ref((qc, qt, buf + a)), "")
                continue
            for b, got in results.items():
                if got[0] != _OK:
                    continue
                _, qc2, st2, outbits = got
                trans[(idx, b, a)] = (ref((qc2, moves[b][1], "")), st2)
                if outbits:
                    emit[(idx, b, a)] = outbits
    return validate_strict(
        PdcSpec(len(order), start, C.stack_kind, trans, emit, cap)
    )


def build_half_compressor(k: int, v: int, m: int = 0) -> PdcSpec:
    """The palindrome-zone compressor (binary stack).

    After skipping an m-bit prefix verbatim, it copies its input while
    pushing it and scanning k-bit groups for an all-ones flag; on the
    flag it pops the k flag bits and then checks the following input
    against the stack in reverse, emitting a single 0 per v matched bits.
    A mismatch emits 1^(3m+i) 0 x and falls into an absorbing copy state
    (always the highest-numbered state).

    Output on R 1^k reverse(R) with flag-free R and m = 0 is
    R 1^k 0^(|R|/v) when v divides |R|.
    """
    if k <= 8:
        raise ValidationError("need k > 8")
    if m < 0:
        raise ValidationError("need m >= 0")
    w = k
    while w < v:
        w *= k
    if w != v:
        raise ValidationError("v must be a positive power of k")

    names: list[tuple] = []
    names.append(("count", 0))
    names.extend(("count", i) for i in range(1, m + 1))
    names.append(("scan",))
    names.extend(("flag1", i) for i in range(1, k + 1))
    names.extend(("flag0", i) for i in range(1, k + 1))
    names.extend(("pop", i) for i in range(k + 1))
    names.extend(("match", i) for i in range(1, v + 2))
    names.append(("error",))
    idx = {name: i + 1 for i, name in enumerate(names)}
    tops = ("0", "1", Z0)

    trans: dict[TransKey, tuple[int, str]] = {}
    emit: dict[TransKey, str] = {}

    def keep(top: str) -> str:
        # Re-push the consumed top: the stack is left unchanged.
        return top

    for a in tops:
        for i in range(m):
            for b in BITS:
                trans[(idx[("count", i)], b, a)] = (idx[("count", i + 1)], keep(a))
                emit[(idx[("count", i)], b, a)] = b
        trans[(idx[("count", m)], LAMBDA, a)] = (idx[("scan",)], keep(a))
        for b in BITS:
            fam = ("flag1", 1) if b == "1" else ("flag0", 1)
            trans[(idx[("scan",)], b, a)] = (idx[fam], b + a)
            emit[(idx[("scan",)], b, a)] = b
        for i in range(1, k):
            for b in BITS:
                trans[(idx[("flag0", i)], b, a)] = (idx[("flag0", i + 1)], b + a)
                emit[(idx[("flag0", i)], b, a)] = b
                fam = ("flag1", i + 1) if b == "1" else ("flag0", i + 1)
                trans[(idx[("flag1", i)], b, a)] = (idx[fam], b + a)
                emit[(idx[("flag1", i)], b, a)] = b
        trans[(idx[("flag0", k)], LAMBDA, a)] = (idx[("scan",)], keep(a))
        trans[(idx[("flag1", k)], LAMBDA, a)] = (idx[("pop", 0)], keep(a))
        trans[(idx[("pop", k)], LAMBDA, a)] = (idx[("match", 1)], keep(a))
        trans[(idx[("match", v + 1)], LAMBDA, a)] = (idx[("match", 1)], keep(a))
        for b in BITS:
            trans[(idx[("error",)], b, a)] = (idx[("error",)], keep(a))
            emit[(idx[("error",)], b, a)] = b
    for i in range(k):  # flag removal pops one pushed bit per step
        for a in ("0", "1"):
            trans[(idx[("pop", i)], LAMBDA, a)] = (idx[("pop", i + 1)], "")
    for i in range(1, v + 1):
        for a in ("0", "1"):
            for b in BITS:
                if b == a:
                    trans[(idx[("match", i)], b, a)] = (idx[("match", i + 1)], "")
                    if i == v:
                        emit[(idx[("match", i)], b, a)] = "0"
                else:
                    trans[(idx[("match", i)], b, a)] = (idx[("error",)], keep(a))
                    emit[(idx[("match", i)], b, a)] = "1" * (3 * m + i) + "0" + b
        for b in BITS:
            fam = ("flag1", 1) if b == "1" else ("flag0", 1)
            trans[(idx[("match", i)], b, Z0)] = (idx[fam], b + Z0)
            emit[(idx[("match", i)], b, Z0)] = b

    return validate_strict(
        PdcSpec(len(names), idx[("count", 0)], "binary", trans, emit, k + 2)
    )


# Textual format: header "pdc m start kind budget", then lines
# "q b top -> q' push emission" with "-" for an input-free move, an empty
# push, or an empty emission; the bottom marker is written "z".

def format_pdc(C: PdcSpec) -> str:
    lines = [f"pdc {C.num_states} {C.start} {C.stack_kind} {C.lambda_budget}"]
    for key in sorted(C.trans):
        q, inp, top = key
        tgt, push = C.trans[key]
        lines.append(
            f"{q} {inp or '-'} {top} -> {tgt} {push or '-'} "
            f"{C.emit.get(key, '') or '-'}"
        )
    return "\n".join(lines) + "\n"


def parse_pdc(text: str) -> PdcSpec:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError("empty compressor description")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "pdc":
        raise ValidationError(f"bad pdc header: {lines[0]!r}")
    try:
        m, start, budget = int(head[1]), int(head[2]), int(head[4])
    except ValueError as exc:
        raise ValidationError(f"bad pdc header: {lines[0]!r}") from exc
    kind = head[3]
    trans: dict[TransKey, tuple[int, str]] = {}
    emit: dict[TransKey, str] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 7 or parts[3] != "->":
            raise ValidationError(f"bad pdc line: {ln!r}")
        q, inp, top, tgt, push, em = (
            int(parts[0]),
            LAMBDA if parts[1] == "-" else parts[1],
            parts[2],
            int(parts[4]),
            "" if parts[5] == "-" else parts[5],
            "" if parts[6] == "-" else parts[6],
        )
        key = (q, inp, top)
        if key in trans:
            raise ValidationError(f"duplicate entry for {key}")
        trans[key] = (tgt, push)
        if em:
            emit[key] = em
    return validate_strict(PdcSpec(m, start, kind, trans, emit, budget))
