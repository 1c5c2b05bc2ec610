import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from depthlab import FstSpec, PdcSpec, pdc_validate  # noqa: E402
from depthlab.fst import MAX_EMISSION_DEFAULT  # noqa: E402
from depthlab.pushdown import LAMBDA, Z0  # noqa: E402

BITS = ("0", "1")


def random_fst(rng: random.Random, max_states: int = 3, max_emit: int = 2) -> FstSpec:
    assert max_emit <= MAX_EMISSION_DEFAULT
    m = rng.randint(1, max_states)
    next_map, out_map = {}, {}
    for q in range(1, m + 1):
        for b in BITS:
            next_map[(q, b)] = rng.randint(1, m)
            out_map[(q, b)] = "".join(
                rng.choice(BITS) for _ in range(rng.randint(0, max_emit))
            )
    return FstSpec(m, rng.randint(1, m), next_map, out_map)


def random_pdc(
    rng: random.Random,
    kind: str = "binary",
    max_states: int = 3,
    lambda_prob: float = 0.2,
) -> PdcSpec:
    """A valid, total compressor: every (state, top) has either one
    input-free move or both bit moves, and input-free moves only jump to
    strictly higher states so chains stay within the budget."""
    m = rng.randint(1, max_states)
    syms = "01" if kind == "binary" else "0"
    tops = syms + Z0
    trans, emit = {}, {}
    for q in range(1, m + 1):
        for top in tops:
            lam = q < m and top != Z0 and rng.random() < lambda_prob
            if lam:
                tgt = rng.randint(q + 1, m)
                push = rng.choice(["", top, rng.choice(syms) + top])
                trans[(q, LAMBDA, top)] = (tgt, push)
                continue
            for b in BITS:
                tgt = rng.randint(1, m)
                if top == Z0:
                    push = rng.choice(
                        [Z0, rng.choice(syms) + Z0, rng.choice(syms) * 2 + Z0]
                    )
                else:
                    push = rng.choice(
                        ["", top, rng.choice(syms) + top, rng.choice(syms) * 2]
                    )
                trans[(q, b, top)] = (tgt, push)
                e = "".join(rng.choice(BITS) for _ in range(rng.randint(0, 2)))
                if e:
                    emit[(q, b, top)] = e
    spec = PdcSpec(m, rng.randint(1, m), kind, trans, emit, m + 1)
    assert pdc_validate(spec) == [], pdc_validate(spec)
    return spec
