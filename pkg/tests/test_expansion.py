import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from boxball import (
    CapacityProfile,
    EmptySequence,
    EulerState,
    expand,
    extract_blocks,
    geometry,
    positions_to_state,
    segment_to_box,
    unit_profile,
)
from boxball.difftest import DiffBounds, random_case
from boxball.expansion import BinarySeq, BlockDecomposition, bits_from_positions

UNIT = unit_profile()


def test_expand_right_then_left_justified():
    p = CapacityProfile(capacities=(2, 3))
    seq = expand(EulerState(counts=[1, 2], profile=p))
    assert seq.bits.tolist() == [0, 1, 1, 1, 0]
    assert seq.segment_start == 0


def test_expand_merges_across_boxes():
    p = CapacityProfile(capacities=(3, 5))
    seq = expand(EulerState(counts=[3, 2], profile=p))
    assert seq.bits.tolist() == [1, 1, 1, 1, 1, 0, 0, 0]


def test_expand_identity_on_unit_capacities():
    st = EulerState(counts=[1, 0, 1, 1, 0, 1], profile=UNIT)
    assert expand(st).bits.tolist() == [1, 0, 1, 1, 0, 1]


def test_expand_preserves_per_box_sums():
    for i in range(300):
        rng = np.random.default_rng([31337, i])
        st, _ = random_case(rng, DiffBounds(window=20, max_delta=5, steps=1))
        seq = expand(st)
        bounds = geometry(st.profile).bounds_view(st.window_start, len(st.counts))
        start = bounds[0]
        sums = [
            int(seq.bits[a - start : b - start].sum())
            for a, b in zip(bounds[:-1], bounds[1:])
        ]
        assert sums == st.counts.tolist()


def test_extract_blocks_examples():
    p = CapacityProfile(capacities=(2, 3))
    blocks = extract_blocks(BinarySeq(bits=[0, 1, 1, 1, 0], segment_start=0, profile=p))
    assert (blocks.N, blocks.Q, blocks.E, blocks.X0) == (1, (3,), (), 1)
    assert blocks.K == (2,)
    assert blocks.Lam == (3,)

    blocks = extract_blocks(BinarySeq(bits=[1, 1, 0, 1], segment_start=0, profile=UNIT))
    assert (blocks.N, blocks.Q, blocks.E, blocks.X0) == (2, (2, 1), (1,), 0)
    assert blocks.K == (1, 1)
    assert blocks.Lam == (1, 1)


def test_extract_blocks_empty():
    with pytest.raises(EmptySequence):
        extract_blocks(BinarySeq(bits=[0, 0, 0], segment_start=0, profile=UNIT))


def test_segment_to_box_examples():
    g = geometry(CapacityProfile(capacities=(3, 5, 3, 5)))
    assert segment_to_box(g, 4) == 1
    assert segment_to_box(g, 0) == 0
    gu = geometry(UNIT)
    assert all(segment_to_box(gu, k) == k for k in range(10))


def test_positions_to_state_examples():
    blocks = BlockDecomposition(Q=(3, 1), E=(2,), X0=0, K=(1, 1), Lam=(1, 1))
    st = positions_to_state(blocks, UNIT)
    assert st.counts.tolist() == [1, 1, 1, 0, 0, 1]

    p = CapacityProfile(capacities=(2, 3))
    blocks = BlockDecomposition(Q=(3,), E=(), X0=1, K=(2,), Lam=(3,))
    assert positions_to_state(blocks, p).counts.tolist() == [1, 2]


def test_round_trip_on_random_states():
    from boxball import same_occupancy

    for i in range(300):
        rng = np.random.default_rng([777, i])
        st, _ = random_case(rng, DiffBounds(window=20, max_delta=5, steps=1))
        blocks = extract_blocks(expand(st))
        back = positions_to_state(blocks, st.profile, time=st.time)
        assert same_occupancy(back, st)


@st.composite
def nonzero_states(draw):
    caps = draw(st.lists(st.integers(1, 5), min_size=1, max_size=12))
    counts = [draw(st.integers(0, c)) for c in caps]
    if sum(counts) == 0:
        counts[draw(st.integers(0, len(caps) - 1))] = 1
    return EulerState(counts=counts, profile=CapacityProfile(capacities=caps))


@given(nonzero_states())
def test_round_trip_property(state):
    from boxball import same_occupancy

    blocks = extract_blocks(expand(state))
    assert same_occupancy(positions_to_state(blocks, state.profile), state)


def test_block_decomposition_validation():
    with pytest.raises(ValueError):
        BlockDecomposition(Q=(0,), E=(), X0=0, K=(1,), Lam=(1,))
    with pytest.raises(ValueError):
        BlockDecomposition(Q=(1, 1), E=(0,), X0=0, K=(1, 1), Lam=(1, 1))
    with pytest.raises(ValueError):
        BlockDecomposition(Q=(1,), E=(), X0=0, K=(), Lam=(1,))


def test_bits_from_positions():
    bits = bits_from_positions((2, 1), (2,), 1, 0, 8)
    assert bits.tolist() == [0, 1, 1, 0, 0, 1, 0, 0]
    with pytest.raises(ValueError):
        bits_from_positions((2,), (), 7, 0, 8)


def test_binary_seq_validation():
    with pytest.raises(ValueError):
        BinarySeq(bits=[0, 2], segment_start=0, profile=UNIT)
