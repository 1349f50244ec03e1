import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from stochord.arrangement import check_arrangement_leq, check_pair_equal_a, pair
from stochord.majorization import sort_components
from stochord.rc_order import (
    ChainConstructionError,
    ElementaryMove,
    MoveKind,
    RcChain,
    RcMode,
    chain_from_json,
    chain_to_json,
    check_necessary,
    construct_chain_opposite,
    decide_wrc,
    is_opposite_ordered,
    verify_rc_chain,
    verify_rc_move,
)
from stochord.verdicts import Status

STRICT, WEAK = RcMode.STRICT, RcMode.WEAK


class TestVerifyRcMove:
    def test_majorize_x_needs_reverse_paired_target(self):
        # moving up the chain spreads coordinates; target has x increasing
        # while y decreases at (0,1), so the coupling is legal
        a = pair((1.5, 2.5), (9.0, 2.0))
        b = pair((1.0, 3.0), (9.0, 2.0))
        assert verify_rc_move(a, b, ElementaryMove(MoveKind.MAJORIZE_X, 0, 1), STRICT)

    def test_majorize_x_rejected_when_similarly_ordered(self):
        a = pair((1.5, 2.5), (2.0, 9.0))
        b = pair((1.0, 3.0), (2.0, 9.0))
        assert not verify_rc_move(a, b, ElementaryMove(MoveKind.MAJORIZE_X, 0, 1), STRICT)

    def test_move_must_preserve_other_vector(self):
        a = pair((1.5, 2.5), (9.0, 2.0))
        b = pair((1.0, 3.0), (9.0, 3.0))
        assert not verify_rc_move(a, b, ElementaryMove(MoveKind.MAJORIZE_X, 0, 1), STRICT)

    def test_move_must_fix_off_coordinates(self):
        a = pair((1.5, 2.5, 5.0), (9.0, 2.0, 1.0))
        b = pair((1.0, 3.0, 6.0), (9.0, 2.0, 1.0))
        assert not verify_rc_move(a, b, ElementaryMove(MoveKind.MAJORIZE_X, 0, 1), STRICT)

    def test_contraction_is_not_a_majorization_move(self):
        # the chain may only spread coordinates, never pull them together
        a = pair((1.0, 3.0), (9.0, 2.0))
        b = pair((1.5, 2.5), (9.0, 2.0))
        assert not verify_rc_move(a, b, ElementaryMove(MoveKind.MAJORIZE_X, 0, 1), STRICT)

    def test_weak_moves_rejected_in_strict_mode(self):
        a = pair((1.0, 2.0), (3.0, 4.0))
        b = pair((1.5, 2.5), (3.0, 4.0))
        m = ElementaryMove(MoveKind.RAISE_X)
        assert verify_rc_move(a, b, m, WEAK)
        assert not verify_rc_move(a, b, m, STRICT)

    def test_lower_y_componentwise(self):
        a = pair((1.0, 2.0), (3.0, 4.0))
        b = pair((1.0, 2.0), (2.5, 4.0))
        assert verify_rc_move(a, b, ElementaryMove(MoveKind.LOWER_Y), WEAK)
        assert not verify_rc_move(b, a, ElementaryMove(MoveKind.LOWER_Y), WEAK)

    def test_coupled_move_requires_positions(self):
        with pytest.raises(ValueError):
            ElementaryMove(MoveKind.MAJORIZE_X)
        with pytest.raises(ValueError):
            ElementaryMove(MoveKind.MAJORIZE_Y, 1, 1)


class TestCheckNecessary:
    def test_strict_needs_full_majorization_both(self):
        p1 = pair((1.0, 3.0), (5.0, 5.0))
        p2 = pair((0.0, 4.0), (4.0, 6.0))
        assert check_necessary(p1, p2, STRICT) == (True, None)
        ok, viol = check_necessary(p2, p1, STRICT)
        assert not ok and viol["vector"] == "x"

    def test_weak_directions(self):
        # x may shrink (below-weak), y may grow (above-weak)
        p1 = pair((1.0, 1.0), (6.0, 6.0))
        p2 = pair((1.0, 2.0), (5.0, 6.0))
        assert check_necessary(p1, p2, WEAK)[0]
        assert not check_necessary(p2, p1, WEAK)[0]


class TestDecideWrc:
    def test_equal_pairs_hold_with_empty_chain(self):
        p = pair((1.0, 2.0), (3.0, 4.0))
        q = pair((2.0, 1.0), (4.0, 3.0))  # common permutation
        v = decide_wrc(p, q, STRICT)
        assert v.status is Status.HOLDS and len(v.witness.moves) == 0

    def test_necessary_violation_refutes(self):
        p1 = pair((0.0, 4.0), (3.0, 3.0))
        p2 = pair((1.0, 3.0), (3.0, 3.0))
        v = decide_wrc(p1, p2, STRICT)
        assert v.status is Status.REFUTED and v.violation["vector"] == "x"

    def test_arrangement_ordered_pairs_are_ordered_strictly(self):
        """Exhaustive embedding of the arrangement order, n = 3."""
        x = (1.0, 2.0, 3.0)
        ys = (10.0, 20.0, 30.0)
        for perm1 in itertools.permutations(ys):
            for perm2 in itertools.permutations(ys):
                p1, p2 = pair(x, perm1), pair(x, perm2)
                if check_arrangement_leq(p2, p1).status is not Status.HOLDS:
                    continue
                # p1 arrangement-larger => p1 below p2 in the coupled order
                v = decide_wrc(p1, p2, STRICT)
                assert v.status is Status.HOLDS
                assert verify_rc_chain(v.witness)

    def test_strict_implies_weak(self):
        p1 = pair((0.4, 0.6, 0.5), (2.0, 3.0, 4.0))
        p2 = pair((0.7, 0.3, 0.5), (1.0, 3.0, 5.0))
        assert decide_wrc(p1, p2, STRICT).status is Status.HOLDS
        assert decide_wrc(p1, p2, WEAK).status is Status.HOLDS

    def test_witness_chain_endpoints(self):
        p1 = pair((0.4, 0.6, 0.5), (2.0, 3.0, 4.0))
        p2 = pair((0.7, 0.3, 0.5), (1.0, 3.0, 5.0))
        v = decide_wrc(p1, p2, STRICT)
        chain = v.witness
        assert check_pair_equal_a(chain.pairs[0], p1)
        assert check_pair_equal_a(chain.pairs[-1], p2)
        assert verify_rc_chain(chain)

    def test_componentwise_weak_dominance(self):
        p1 = pair((1.0, 2.0), (0.9, 0.8))
        p2 = pair((1.5, 2.5), (0.7, 0.6))
        assert decide_wrc(p1, p2, WEAK).status is Status.HOLDS
        assert decide_wrc(p1, p2, STRICT).status is Status.REFUTED

    def test_budget_exhaustion_reports_unknown(self):
        p1 = pair((1.0, 2.0, 3.0), (1.0, 1.0, 1.0))
        p2 = pair((0.9, 1.9, 4.2), (1.0, 1.0, 1.0))
        v = decide_wrc(p1, p2, WEAK, budget=1)
        assert v.status in (Status.UNKNOWN, Status.HOLDS)


class TestOppositeOrderedConstruction:
    def test_is_opposite_ordered(self):
        assert is_opposite_ordered(pair((1, 2, 3), (9, 5, 2)))
        assert is_opposite_ordered(pair((2, 1, 3), (5, 9, 2)))  # permuted copy
        assert not is_opposite_ordered(pair((1, 2, 3), (5, 9, 2)))

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_construction_verifies_on_random_weak_instances(self, data):
        n = data.draw(st.integers(2, 5))
        x2 = sort_components(
            tuple(data.draw(st.floats(0.3, 3.0)) for _ in range(n)), "inc"
        )
        y2 = sort_components(
            tuple(data.draw(st.floats(0.5, 4.0)) for _ in range(n)), "dec"
        )
        p2 = pair(x2, y2)
        # build p1 by Robin Hood moves plus slack, guaranteeing the weak order
        x1 = [sum(x2) / n - data.draw(st.floats(0, 0.2))] * n
        y1 = [max(y2) + data.draw(st.floats(0, 0.3))] * n
        p1 = pair(tuple(x1), tuple(y1))
        ok, _ = check_necessary(p1, p2, WEAK)
        assert ok
        chain = construct_chain_opposite(p1, p2, WEAK)
        assert verify_rc_chain(chain)
        assert check_pair_equal_a(chain.pairs[0], p1)
        assert check_pair_equal_a(chain.pairs[-1], p2)

    def test_construction_requires_opposite_ordered_target(self):
        p1 = pair((1.0, 1.0), (4.0, 4.0))
        p2 = pair((1.0, 2.0), (3.0, 4.0))  # similarly ordered
        with pytest.raises(ChainConstructionError):
            construct_chain_opposite(p1, p2, WEAK)


class TestSerialization:
    def test_round_trip(self):
        p1 = pair((0.4, 0.6, 0.5), (2.0, 3.0, 4.0))
        p2 = pair((0.7, 0.3, 0.5), (1.0, 3.0, 5.0))
        chain = decide_wrc(p1, p2, STRICT).witness
        text = chain_to_json(chain)
        back = chain_from_json(text)
        assert back == chain
        assert verify_rc_chain(back)

    def test_chain_shape_validated(self):
        p = pair((1.0,), (2.0,))
        with pytest.raises(ValueError):
            RcChain((p, p), (), STRICT)
