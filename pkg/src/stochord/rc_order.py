"""The reverse-coupled majorization order on vector pairs.

The order is generated by two-coordinate majorization moves on one vector of
the pair, allowed only at coordinate positions where the other vector is
oppositely ordered (the product of the coordinate differences on the target
pair is nonpositive).  The weak variant adds componentwise raises of ``x``
and lowers of ``y``, plus weak two-coordinate majorization moves.

Pairs in a chain are concrete representatives; chain endpoints are compared
to the queried pairs up to common permutation.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from stochord.arrangement import (
    PairClass,
    canonical_form,
    check_arrangement_leq,
    check_pair_equal_a,
    _multisets_match,
)
from stochord.majorization import (
    MajorizationMode,
    Vector,
    check_majorization,
    component_tolerance,
    sort_components,
    t_transform_chain,
)
from stochord.verdicts import OrderVerdict, Status


class RcMode(Enum):
    STRICT = "strict"
    WEAK = "weak"


class MoveKind(Enum):
    MAJORIZE_X = "majorize_x"
    MAJORIZE_Y = "majorize_y"
    WEAK_MAJORIZE_X = "weak_majorize_x"
    WEAK_MAJORIZE_Y = "weak_majorize_y"
    RAISE_X = "raise_x"
    LOWER_Y = "lower_y"


_COUPLED = {
    MoveKind.MAJORIZE_X,
    MoveKind.MAJORIZE_Y,
    MoveKind.WEAK_MAJORIZE_X,
    MoveKind.WEAK_MAJORIZE_Y,
}
_WEAK_ONLY = {
    MoveKind.WEAK_MAJORIZE_X,
    MoveKind.WEAK_MAJORIZE_Y,
    MoveKind.RAISE_X,
    MoveKind.LOWER_Y,
}


@dataclass(frozen=True)
class ElementaryMove:
    kind: MoveKind
    i: Optional[int] = None
    j: Optional[int] = None

    def __post_init__(self):
        if self.kind in _COUPLED:
            if self.i is None or self.j is None or not 0 <= self.i < self.j:
                raise ValueError(f"coupled move needs positions 0 <= i < j, got {self}")


@dataclass(frozen=True)
class RcChain:
    pairs: tuple[PairClass, ...]
    moves: tuple[ElementaryMove, ...]
    mode: RcMode

    def __post_init__(self):
        if len(self.pairs) != len(self.moves) + 1:
            raise ValueError("chain needs exactly one more pair than moves")


class ChainConstructionError(ValueError):
    def __init__(self, condition: str):
        super().__init__(f"chain precondition violated: {condition}")
        self.condition = condition


def _vec_equal(a: Vector, b: Vector, tol: float) -> bool:
    return len(a) == len(b) and all(abs(u - v) <= tol for u, v in zip(a, b))


def _equal_off(a: Vector, b: Vector, i: int, j: int, tol: float) -> bool:
    return all(abs(u - v) <= tol for k, (u, v) in enumerate(zip(a, b)) if k not in (i, j))


def _reverse_pair_ok(b: PairClass, i: int, j: int, tol: float) -> bool:
    # Evaluated on the target pair, as the generating relation is stated.
    return (b.y[j] - b.y[i]) * (b.x[j] - b.x[i]) <= tol


def verify_rc_move(a: PairClass, b: PairClass, m: ElementaryMove, mode: RcMode) -> bool:
    if a.n != b.n:
        return False
    if mode is RcMode.STRICT and m.kind in _WEAK_ONLY:
        return False
    tol = component_tolerance(a.x, a.y, b.x, b.y)

    if m.kind is MoveKind.RAISE_X:
        return _vec_equal(a.y, b.y, tol) and all(u <= v + tol for u, v in zip(a.x, b.x))
    if m.kind is MoveKind.LOWER_Y:
        return _vec_equal(a.x, b.x, tol) and all(u >= v - tol for u, v in zip(a.y, b.y))

    i, j = m.i, m.j
    if j >= a.n or not _reverse_pair_ok(b, i, j, tol):
        return False
    if m.kind in (MoveKind.MAJORIZE_X, MoveKind.WEAK_MAJORIZE_X):
        if not (_vec_equal(a.y, b.y, tol) and _equal_off(a.x, b.x, i, j, tol)):
            return False
        want = (
            MajorizationMode.FULL
            if m.kind is MoveKind.MAJORIZE_X
            else MajorizationMode.BELOW
        )
        ok, _ = check_majorization((a.x[i], a.x[j]), (b.x[i], b.x[j]), want)
        return ok
    if m.kind in (MoveKind.MAJORIZE_Y, MoveKind.WEAK_MAJORIZE_Y):
        if not (_vec_equal(a.x, b.x, tol) and _equal_off(a.y, b.y, i, j, tol)):
            return False
        want = (
            MajorizationMode.FULL
            if m.kind is MoveKind.MAJORIZE_Y
            else MajorizationMode.ABOVE
        )
        ok, _ = check_majorization((a.y[i], a.y[j]), (b.y[i], b.y[j]), want)
        return ok
    return False


def verify_rc_chain(chain: RcChain) -> bool:
    if not chain.pairs:
        return False
    return all(
        verify_rc_move(chain.pairs[s], chain.pairs[s + 1], chain.moves[s], chain.mode)
        for s in range(len(chain.moves))
    )


def check_necessary(
    p1: PairClass, p2: PairClass, mode: RcMode
) -> tuple[bool, Optional[dict]]:
    """Necessary conditions: the order implies (weak) majorization coordinatewise.

    Strict mode requires x1 and y1 majorized by x2 and y2; weak mode requires
    weak majorization from below on x and from above on y.
    """
    if p1.n != p2.n:
        raise ValueError(f"length mismatch: {p1.n} vs {p2.n}")
    x_mode = MajorizationMode.FULL if mode is RcMode.STRICT else MajorizationMode.BELOW
    y_mode = MajorizationMode.FULL if mode is RcMode.STRICT else MajorizationMode.ABOVE
    ok, k = check_majorization(p1.x, p2.x, x_mode)
    if not ok:
        return False, {"vector": "x", "prefix": k, "mode": x_mode.value}
    ok, k = check_majorization(p1.y, p2.y, y_mode)
    if not ok:
        return False, {"vector": "y", "prefix": k, "mode": y_mode.value}
    return True, None


def is_opposite_ordered(p: PairClass) -> bool:
    """True iff ``p`` equals, up to common permutation, a representative with
    x increasing and y decreasing."""
    tol = component_tolerance(p.x, p.y)
    return _is_dec(_opposite_y(p), tol)


def _opposite_y(p: PairClass) -> Vector:
    """Best-effort y arrangement decreasing while x is sorted increasing:
    sort pairs by (x asc, y desc)."""
    order = sorted(range(p.n), key=lambda i: (p.x[i], -p.y[i]))
    return tuple(p.y[i] for i in order)


def _sorted_rep(p: PairClass) -> PairClass:
    return canonical_form(p)


def construct_chain_opposite(p1: PairClass, p2: PairClass, mode: RcMode) -> RcChain:
    """Constructive chain for an opposite-ordered target.

    Requires ``p2`` equal (up to common permutation) to a representative with
    x increasing and y decreasing; strict mode requires full majorization on
    both coordinates, weak mode the weak variants.  The chain raises x /
    lowers y to equalize totals (weak mode), sorts y decreasing by swaps, then
    walks transfer chains on y and on x; opposite sortedness keeps every
    coupled move legal.
    """
    if p1.n != p2.n:
        raise ChainConstructionError("length mismatch")
    tol = component_tolerance(p1.x, p1.y, p2.x, p2.y)

    x2s = sort_components(p2.x, "inc")
    y2s = _opposite_y(p2)
    if not _is_dec(y2s, tol):
        raise ChainConstructionError("target pair is not opposite ordered")

    ok, viol = check_necessary(p1, p2, mode)
    if not ok:
        raise ChainConstructionError(f"necessary condition failed: {viol}")

    rep1 = _sorted_rep(p1)
    x1, y1 = rep1.x, rep1.y
    n = p1.n

    pairs: list[PairClass] = [rep1]
    moves: list[ElementaryMove] = []

    def push(move: ElementaryMove, target: PairClass) -> None:
        pairs.append(target)
        moves.append(move)

    # Weak mode: lift the x total into place at the top coordinate, and plan a
    # final componentwise lowering of y from an inflated copy of the target.
    x_cur = x1
    dx = sum(x2s) - sum(x1)
    if mode is RcMode.WEAK and dx > 0:
        x_cur = _raise_to_majorized(x1, x2s)
        push(ElementaryMove(MoveKind.RAISE_X), PairClass(x_cur, y1))
    y_top = y2s
    dy = sum(y1) - sum(y2s)
    if mode is RcMode.WEAK and dy > 0:
        # inflating the largest component maximizes every top-k prefix sum,
        # so majorization over y1 holds whenever it can
        y_top = (y2s[0] + dy,) + y2s[1:]

    ok, k = check_majorization(x_cur, x2s, MajorizationMode.FULL)
    if not ok:
        raise ChainConstructionError(f"x not majorized after lift (prefix {k})")
    ok, k = check_majorization(y1, y_top, MajorizationMode.FULL)
    if not ok:
        raise ChainConstructionError(f"y not majorized after lift (prefix {k})")

    # Sort y decreasing with inversion-creating swaps; x increasing makes the
    # reverse-pair product nonpositive at every step.
    y_cur = list(pairs[-1].y)
    for pos in range(n):
        top = max(range(pos, n), key=lambda k: y_cur[k])
        if top != pos and y_cur[top] > y_cur[pos] + tol:
            y_cur[pos], y_cur[top] = y_cur[top], y_cur[pos]
            push(
                ElementaryMove(MoveKind.MAJORIZE_Y, pos, top),
                PairClass(x_cur, tuple(y_cur)),
            )

    # Transfer chain on y (run on the reversed, increasing copies).
    y_chain = t_transform_chain(tuple(reversed(y_cur)), tuple(reversed(y_top)))
    for (i, j, _eps), nxt in zip(y_chain.steps, y_chain.vectors[1:]):
        target_y = tuple(reversed(nxt))
        push(
            ElementaryMove(MoveKind.MAJORIZE_Y, n - 1 - j, n - 1 - i),
            PairClass(x_cur, target_y),
        )

    # Transfer chain on x against the decreasing y.
    x_chain = t_transform_chain(x_cur, x2s)
    for (i, j, _eps), nxt in zip(x_chain.steps, x_chain.vectors[1:]):
        push(ElementaryMove(MoveKind.MAJORIZE_X, i, j), PairClass(nxt, pairs[-1].y))

    if mode is RcMode.WEAK and dy > 0:
        push(ElementaryMove(MoveKind.LOWER_Y), PairClass(x2s, y2s))

    return RcChain(tuple(pairs), tuple(moves), mode)


def _is_dec(v: Vector, tol: float) -> bool:
    return all(b <= a + tol for a, b in zip(v, v[1:]))


def _raise_to_majorized(x: Vector, y: Vector) -> Vector:
    """Componentwise raise of sorted-increasing ``x`` onto a vector with
    ``y``'s total that stays majorized by ``y``.

    Fills top coordinates first, capped so every top-k sum stays within
    ``y``'s; feasible whenever ``x`` is weakly majorized from below by ``y``.
    Raising the whole deficit at one coordinate can overshoot majorization,
    so the increment is spread instead.
    """
    n = len(x)
    u = list(x)
    remaining = sum(y) - sum(x)
    for k in range(n - 1, -1, -1):
        allowed = sum(y[k:]) - sum(u[k + 1 :]) - x[k]
        inc = min(remaining, allowed)
        if inc > 0:
            u[k] = x[k] + inc
            remaining -= inc
    return tuple(sorted(u))


# ---------------------------------------------------------------------------
# Bounded decision procedure


def _swap_chain_from_arrangement(
    p1: PairClass, p2: PairClass, mode: RcMode, budget: int
) -> Optional[RcChain]:
    """Route through the arrangement order when only the arrangement differs.

    ``p1 >=_a p2`` embeds into the order: replay the arrangement witness
    backwards as y-swap moves on a common x-sorted representative.
    """
    verdict = check_arrangement_leq(p2, p1, budget=budget)
    if not verdict.holds:
        return None
    c2 = canonical_form(p2)
    states = [list(c2.y)]
    for mv in verdict.witness:
        y = list(states[-1])
        y[mv.i], y[mv.j] = y[mv.j], y[mv.i]
        states.append(y)
    pairs = [PairClass(c2.x, tuple(y)) for y in reversed(states)]
    moves = [
        ElementaryMove(MoveKind.MAJORIZE_Y, mv.i, mv.j)
        for mv in reversed(verdict.witness)
    ]
    return RcChain(tuple(pairs), tuple(moves), mode)


def _two_coord_targets(a: float, b: float, goal_values: Vector, tol: float):
    """Candidate spreads of (a, b) preserving the sum, aligned so that one
    coordinate lands on a goal component value."""
    out = []
    s = a + b
    for g in set(goal_values):
        for cand in ((g, s - g), (s - g, g)):
            if abs(cand[0] - a) > tol or abs(cand[1] - b) > tol:
                out.append(cand)
    return out


def _round_key(p: PairClass) -> tuple:
    c = canonical_form(p)
    return tuple(round(v, 9) for v in c.x + c.y)


def _distance(p: PairClass, target: PairClass) -> float:
    dx = sum(
        abs(u - v)
        for u, v in zip(sort_components(p.x, "inc"), sort_components(target.x, "inc"))
    )
    dy = sum(
        abs(u - v)
        for u, v in zip(sort_components(p.y, "inc"), sort_components(target.y, "inc"))
    )
    return dx + dy


def _successors(p: PairClass, target: PairClass, mode: RcMode):
    n = p.n
    tol = component_tolerance(p.x, p.y, target.x, target.y)
    for i in range(n):
        for j in range(i + 1, n):
            # swaps (majorization between permuted coordinate pairs)
            for kind, vec in ((MoveKind.MAJORIZE_X, "x"), (MoveKind.MAJORIZE_Y, "y")):
                src = getattr(p, vec)
                if abs(src[i] - src[j]) <= tol:
                    continue
                new = list(src)
                new[i], new[j] = new[j], new[i]
                yield _apply(p, vec, new), ElementaryMove(kind, i, j)
            # sum-preserving transfers aligned with target component values
            for kind, vec, goal in (
                (MoveKind.MAJORIZE_X, "x", target.x),
                (MoveKind.MAJORIZE_Y, "y", target.y),
            ):
                src = getattr(p, vec)
                for ci, cj in _two_coord_targets(src[i], src[j], goal, tol):
                    new = list(src)
                    new[i], new[j] = ci, cj
                    yield _apply(p, vec, new), ElementaryMove(kind, i, j)
    if mode is RcMode.WEAK:
        raised = _componentwise_raise(p.x, target.x, tol)
        if raised is not None:
            yield _apply(p, "x", list(raised)), ElementaryMove(MoveKind.RAISE_X)
        aligned = _aligned_raise(p, target, tol)
        if aligned is not None:
            yield _apply(p, "x", list(aligned)), ElementaryMove(MoveKind.RAISE_X)
        lowered_aligned = _aligned_lower(p, target, tol)
        if lowered_aligned is not None:
            yield _apply(p, "y", list(lowered_aligned)), ElementaryMove(MoveKind.LOWER_Y)
        dx = sum(target.x) - sum(p.x)
        if dx > tol * n:
            # raise toward a vector with the target total that stays majorized
            # by the target's components, distributing ranks back in place
            order = sorted(range(n), key=lambda k: p.x[k])
            u = _raise_to_majorized(
                tuple(p.x[k] for k in order), sort_components(target.x, "inc")
            )
            new = list(p.x)
            for rank, idx in enumerate(order):
                new[idx] = u[rank]
            if all(a <= b + tol for a, b in zip(p.x, new)):
                yield _apply(p, "x", new), ElementaryMove(MoveKind.RAISE_X)
        lowered = _componentwise_lower(p.y, target.y, tol)
        if lowered is not None:
            yield _apply(p, "y", list(lowered)), ElementaryMove(MoveKind.LOWER_Y)


def _apply(p: PairClass, vec: str, new: list[float]) -> PairClass:
    if vec == "x":
        return PairClass(tuple(new), p.y)
    return PairClass(p.x, tuple(new))


def _aligned_raise(p: PairClass, target: PairClass, tol: float) -> Optional[Vector]:
    """Raise x onto the target's x through the pairing with equal y values.

    Matches positions by sorting both pairs by (y, x); within each block of
    equal y values this pairs x components ascending, the assignment most
    likely to keep the raise componentwise.
    """
    if not _multisets_match(p.y, target.y, tol):
        return None
    n = p.n
    order_p = sorted(range(n), key=lambda k: (p.y[k], p.x[k]))
    order_t = sorted(range(n), key=lambda k: (target.y[k], target.x[k]))
    new = list(p.x)
    changed = False
    for ip, it in zip(order_p, order_t):
        if abs(p.y[ip] - target.y[it]) > tol:
            return None
        tx = target.x[it]
        if tx < p.x[ip] - tol:
            return None
        if tx > p.x[ip] + tol:
            changed = True
        new[ip] = tx
    return tuple(new) if changed else None


def _aligned_lower(p: PairClass, target: PairClass, tol: float) -> Optional[Vector]:
    """Lower y onto the target's y through the pairing with equal x values."""
    if not _multisets_match(p.x, target.x, tol):
        return None
    n = p.n
    order_p = sorted(range(n), key=lambda k: (p.x[k], p.y[k]))
    order_t = sorted(range(n), key=lambda k: (target.x[k], target.y[k]))
    new = list(p.y)
    changed = False
    for ip, it in zip(order_p, order_t):
        if abs(p.x[ip] - target.x[it]) > tol:
            return None
        ty = target.y[it]
        if ty > p.y[ip] + tol:
            return None
        if ty < p.y[ip] - tol:
            changed = True
        new[ip] = ty
    return tuple(new) if changed else None


def _componentwise_raise(x: Vector, target_x: Vector, tol: float) -> Optional[Vector]:
    """Match sorted orders; if the target multiset sits componentwise above the
    current x under that matching, return the rearranged raised vector."""
    order = sorted(range(len(x)), key=lambda k: x[k])
    tsorted = sort_components(target_x, "inc")
    out = list(x)
    changed = False
    for rank, idx in enumerate(order):
        t = tsorted[rank]
        if t < x[idx] - tol:
            return None
        if t > x[idx] + tol:
            changed = True
        out[idx] = t
    return tuple(out) if changed else None


def _componentwise_lower(y: Vector, target_y: Vector, tol: float) -> Optional[Vector]:
    """Match sorted orders; if the target multiset sits componentwise below the
    current y under that matching, return the rearranged lowered vector."""
    order = sorted(range(len(y)), key=lambda k: y[k])
    tsorted = sort_components(target_y, "inc")
    out = list(y)
    changed = False
    for rank, idx in enumerate(order):
        t = tsorted[rank]
        if t > y[idx] + tol:
            return None
        if t < y[idx] - tol:
            changed = True
        out[idx] = t
    return tuple(out) if changed else None


DEFAULT_SEARCH_BUDGET = 4000


def decide_wrc(
    p1: PairClass,
    p2: PairClass,
    mode: RcMode = RcMode.WEAK,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> OrderVerdict:
    """Three-valued decision for the (weak) reverse-coupled order.

    Pipeline: necessary conditions, the constructive opposite-ordered
    criterion, the arrangement-only route, then a bounded best-first search
    over discretized elementary moves.  A Holds verdict always carries a chain
    accepted by :func:`verify_rc_chain`; the order has no known complete
    decision procedure, so exhausted budgets yield Unknown.
    """
    if p1.n != p2.n:
        raise ValueError(f"length mismatch: {p1.n} vs {p2.n}")
    ok, viol = check_necessary(p1, p2, mode)
    if not ok:
        return OrderVerdict(Status.REFUTED, violation=viol)
    if check_pair_equal_a(p1, p2):
        return OrderVerdict(
            Status.HOLDS, witness=RcChain((canonical_form(p1),), (), mode)
        )

    if is_opposite_ordered(p2):
        try:
            chain = construct_chain_opposite(p1, p2, mode)
        except ChainConstructionError:
            chain = None
        if chain is not None and verify_rc_chain(chain):
            return OrderVerdict(Status.HOLDS, witness=chain)

    tol = component_tolerance(p1.x, p1.y, p2.x, p2.y)
    if _multisets_match(p1.x, p2.x, tol) and _multisets_match(p1.y, p2.y, tol):
        chain = _swap_chain_from_arrangement(p1, p2, mode, budget)
        if chain is not None and verify_rc_chain(chain):
            return OrderVerdict(Status.HOLDS, witness=chain)

    return _search(p1, p2, mode, budget)


def _search(p1: PairClass, p2: PairClass, mode: RcMode, budget: int) -> OrderVerdict:
    start = canonical_form(p1)
    seen = {_round_key(start)}
    counter = 0
    heap = [(_distance(start, p2), 0, start, [start], [])]
    expanded = 0
    while heap:
        _, _, cur, pairs, moves = heapq.heappop(heap)
        expanded += 1
        if expanded > budget:
            break
        for nxt, move in _successors(cur, p2, mode):
            if not verify_rc_move(cur, nxt, move, mode):
                continue
            key = _round_key(nxt)
            if key in seen:
                continue
            ok, _ = check_necessary(nxt, p2, mode)
            if not ok:
                continue
            seen.add(key)
            npairs, nmoves = pairs + [nxt], moves + [move]
            if check_pair_equal_a(nxt, p2):
                chain = RcChain(tuple(npairs), tuple(nmoves), mode)
                if verify_rc_chain(chain):
                    return OrderVerdict(Status.HOLDS, witness=chain)
            counter += 1
            heapq.heappush(
                heap, (_distance(nxt, p2), counter, nxt, npairs, nmoves)
            )
    return OrderVerdict(Status.UNKNOWN, detail={"reason": "search budget exhausted"})


# ---------------------------------------------------------------------------
# Witness serialization


def chain_to_json(chain: RcChain) -> str:
    records = []
    for idx, p in enumerate(chain.pairs):
        rec = {"pair": {"x": list(p.x), "y": list(p.y)}}
        if idx > 0:
            m = chain.moves[idx - 1]
            rec["move"] = {"kind": m.kind.value, "i": m.i, "j": m.j}
        else:
            rec["move"] = None
        records.append(rec)
    return json.dumps({"mode": chain.mode.value, "chain": records}, indent=2)


def chain_from_json(text: str) -> RcChain:
    data = json.loads(text)
    mode = RcMode(data["mode"])
    pairs = []
    moves = []
    for idx, rec in enumerate(data["chain"]):
        pairs.append(
            PairClass(tuple(rec["pair"]["x"]), tuple(rec["pair"]["y"]))
        )
        if idx > 0:
            m = rec["move"]
            moves.append(ElementaryMove(MoveKind(m["kind"]), m["i"], m["j"]))
    return RcChain(tuple(pairs), tuple(moves), mode)
