import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_fst
from depthlab import (
    FstSpec,
    ValidationError,
    format_fst,
    fst_compose,
    fst_run,
    identity_fst,
    il_check,
    parse_fst,
    repeater_fst,
    shift_start,
    silent_fst,
    verify_inverse_pair,
)

bitstrings = st.text(alphabet="01", max_size=12)


def all_inputs(max_len):
    for L in range(max_len + 1):
        for xs in product("01", repeat=L):
            yield "".join(xs)


def test_identity_run():
    r = fst_run(identity_fst(), "0110")
    assert (r.output, r.final_state) == ("0110", 1)


def test_repeater_run():
    r = fst_run(repeater_fst("10"), "00")
    assert (r.output, r.final_state) == ("1010", 1)


def test_empty_input():
    T = random_fst(random.Random(3))
    r = fst_run(T, "")
    assert (r.output, r.final_state) == ("", T.start)


def test_spec_validation():
    with pytest.raises(ValidationError):
        FstSpec(1, 2, {(1, "0"): 1, (1, "1"): 1}, {(1, "0"): "", (1, "1"): ""})
    with pytest.raises(ValidationError):
        FstSpec(2, 1, {(1, "0"): 1, (1, "1"): 1}, {(1, "0"): "", (1, "1"): ""})
    with pytest.raises(ValidationError):
        FstSpec(1, 1, {(1, "0"): 1, (1, "1"): 1}, {(1, "0"): "x", (1, "1"): ""})


def test_il_identity_passes():
    assert il_check(identity_fst(), 8) is None


def test_il_silent_fails():
    pair = il_check(silent_fst(), 1)
    assert pair is not None


def test_il_repeater_fails():
    pair = il_check(repeater_fst("10"), 2)
    assert pair is not None


def test_il_counterexample_actually_collides():
    rng = random.Random(11)
    for _ in range(60):
        T = random_fst(rng)
        pair = il_check(T, 6)
        if pair is None:
            seen = {}
            for x in all_inputs(6):
                r = fst_run(T, x)
                key = (r.output, r.final_state)
                assert key not in seen
                seen[key] = x
        else:
            x, y = pair
            assert x != y
            rx, ry = fst_run(T, x), fst_run(T, y)
            assert (rx.output, rx.final_state) == (ry.output, ry.final_state)


def test_compose_identity_identity():
    AB = fst_compose(identity_fst(), identity_fst())
    for x in all_inputs(10):
        assert fst_run(AB, x).output == x


@pytest.mark.parametrize("order", ["id-outer", "id-inner"])
def test_compose_with_repeater(order):
    tr = repeater_fst("10")
    if order == "id-outer":
        AB = fst_compose(identity_fst(), tr)
    else:
        AB = fst_compose(tr, identity_fst())
    for x in all_inputs(6):
        assert fst_run(AB, x).output == "10" * len(x)


def test_compose_matches_direct_simulation():
    rng = random.Random(5)
    for _ in range(25):
        A, B = random_fst(rng), random_fst(rng)
        AB = fst_compose(A, B)
        assert AB.num_states <= A.num_states * B.num_states
        for x in all_inputs(8):
            want = fst_run(A, fst_run(B, x).output).output
            assert fst_run(AB, x).output == want


def test_shift_start_identity_cases():
    T = random_fst(random.Random(9), max_states=3)
    assert shift_start(T, "") == T
    assert shift_start(identity_fst(), "0110") == identity_fst()


def test_shift_start_decomposition():
    rng = random.Random(1)
    for _ in range(10):
        T = random_fst(rng, max_states=3)
        for w in ("011", "0", "110101"):
            Tw = shift_start(T, w)
            head = fst_run(T, w).output
            for y in all_inputs(8):
                assert fst_run(T, w + y).output == head + fst_run(Tw, y).output


def test_inverse_pair_identity():
    assert verify_inverse_pair(identity_fst(), identity_fst(), 0, 8) is None


def test_inverse_pair_counterexample():
    always0 = repeater_fst("0")
    bad = verify_inverse_pair(identity_fst(), always0, 0, 2)
    assert bad == "1"


def test_inverse_pair_doubler_halver():
    doubler = FstSpec(
        1, 1, {(1, "0"): 1, (1, "1"): 1}, {(1, "0"): "00", (1, "1"): "11"}
    )
    halver = FstSpec(
        2,
        1,
        {(1, "0"): 2, (1, "1"): 2, (2, "0"): 1, (2, "1"): 1},
        {(1, "0"): "", (1, "1"): "", (2, "0"): "0", (2, "1"): "1"},
    )
    assert verify_inverse_pair(doubler, halver, 1, 8) is None


@settings(max_examples=120)
@given(bitstrings, bitstrings)
def test_prefix_monotonicity(x, y):
    T = random_fst(random.Random(len(x) + 31 * len(y)))
    assert fst_run(T, x + y).output.startswith(fst_run(T, x).output)


@settings(max_examples=80)
@given(bitstrings)
def test_output_length_bound(x):
    T = random_fst(random.Random(len(x) + 17))
    assert len(fst_run(T, x).output) <= len(x) * max(
        1, T.max_emission()
    )


def test_text_format_roundtrip():
    rng = random.Random(2)
    for _ in range(30):
        T = random_fst(rng, max_states=4)
        assert parse_fst(format_fst(T)) == T


def test_text_format_rejects_garbage():
    with pytest.raises(ValidationError):
        parse_fst("")
    with pytest.raises(ValidationError):
        parse_fst("fsa 1 1")
    with pytest.raises(ValidationError):
        parse_fst("fst 1 1\n1 0 -> 1")
    with pytest.raises(ValidationError):
        parse_fst("fst 1 1\n1 0 -> 1 -\n1 1 -> 1 -\n1 0 -> 1 0")
