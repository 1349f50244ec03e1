"""Vector majorization predicates and constructive epsilon-transfer chains.

Vectors are plain tuples of finite floats.  All comparisons use an absolute
tolerance of 1e-12 scaled by the largest absolute component involved, so
user-scale parameters compare stably without accumulating sums.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

Vector = tuple[float, ...]

BASE_TOL = 1e-12


class MajorizationMode(Enum):
    BELOW = "below"  # prefix sums of the k largest: sum_k x <= sum_k y
    ABOVE = "above"  # prefix sums of the k smallest: sum_k x >= sum_k y
    FULL = "full"    # BELOW and ABOVE, equivalently BELOW plus equal totals


@dataclass(frozen=True)
class TChain:
    """Chain of increasing-sorted vectors linked by single epsilon transfers.

    ``steps[s] = (i, j, eps)`` moves ``eps`` from coordinate ``i`` to
    coordinate ``j`` (``i < j``) of ``vectors[s]`` to produce
    ``vectors[s + 1]``.
    """

    vectors: tuple[Vector, ...]
    steps: tuple[tuple[int, int, float], ...]


def component_tolerance(*vectors: Vector) -> float:
    scale = max((abs(c) for v in vectors for c in v), default=0.0)
    return BASE_TOL * max(1.0, scale)


def as_vector(components) -> Vector:
    v = tuple(float(c) for c in components)
    if not v:
        raise ValueError("vector must have at least one component")
    if any(not math.isfinite(c) for c in v):
        raise ValueError(f"vector components must be finite, got {v}")
    return v


def sort_components(v: Vector, direction: str = "inc") -> Vector:
    if direction not in ("inc", "dec"):
        raise ValueError(f"direction must be 'inc' or 'dec', got {direction!r}")
    return tuple(sorted(v, reverse=(direction == "dec")))


def is_sorted(v: Vector, direction: str = "inc", tol: float | None = None) -> bool:
    if tol is None:
        tol = component_tolerance(v)
    pairs = zip(v, v[1:])
    if direction == "inc":
        return all(b >= a - tol for a, b in pairs)
    return all(b <= a + tol for a, b in pairs)


def _require_same_length(x: Vector, y: Vector) -> None:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")


def check_majorization(
    x: Vector, y: Vector, mode: MajorizationMode
) -> tuple[bool, int | None]:
    """Decide whether ``x`` is (weakly) majorized by ``y``.

    Returns ``(True, None)`` on success, otherwise ``(False, k)`` where ``k``
    is the first violated prefix length (1-based); ``k = 0`` flags a total-sum
    mismatch in FULL mode.
    """
    _require_same_length(x, y)
    tol = component_tolerance(x, y) * len(x)

    if mode in (MajorizationMode.BELOW, MajorizationMode.FULL):
        xs, ys = sort_components(x, "dec"), sort_components(y, "dec")
        cx = cy = 0.0
        for k, (a, b) in enumerate(zip(xs, ys), start=1):
            cx += a
            cy += b
            if cx > cy + tol:
                return False, k
        if mode is MajorizationMode.FULL and abs(cx - cy) > tol:
            return False, 0
        return True, None

    xs, ys = sort_components(x, "inc"), sort_components(y, "inc")
    cx = cy = 0.0
    for k, (a, b) in enumerate(zip(xs, ys), start=1):
        cx += a
        cy += b
        if cx < cy - tol:
            return False, k
    return True, None


def verify_t_step(a: Vector, b: Vector) -> bool:
    """True iff ``b`` arises from ``a`` by one transfer of ``eps >= 0`` from a
    coordinate ``i`` to a coordinate ``j > i``."""
    _require_same_length(a, b)
    tol = component_tolerance(a, b)
    diffs = [k for k, (u, v) in enumerate(zip(a, b)) if abs(u - v) > tol]
    if not diffs:
        return True  # degenerate eps = 0 transfer
    if len(diffs) != 2:
        return False
    i, j = diffs
    eps_i = a[i] - b[i]
    eps_j = b[j] - a[j]
    return eps_i > 0 and abs(eps_i - eps_j) <= tol


def t_transform_chain(x: Vector, y: Vector) -> TChain:
    """Constructive chain ``x = phi_1 < ... < phi_k = y`` of at most ``n``
    increasing-sorted vectors, consecutive ones linked by one transfer from a
    lower to a higher coordinate.

    Requires ``x`` and ``y`` sorted increasing and ``x`` majorized by ``y``.
    """
    _require_same_length(x, y)
    tol = component_tolerance(x, y)
    if not is_sorted(x, "inc", tol) or not is_sorted(y, "inc", tol):
        raise ValueError("t_transform_chain requires increasing-sorted inputs")
    ok, k = check_majorization(x, y, MajorizationMode.FULL)
    if not ok:
        raise ValueError(f"x is not majorized by y (violated prefix {k})")

    current = list(x)
    vectors = [tuple(current)]
    steps: list[tuple[int, int, float]] = []
    n = len(x)
    for _ in range(n):
        # First surplus donates to the last deficit; both exist while the
        # vectors differ, and each transfer pins at least one coordinate.
        i = next((m for m in range(n) if current[m] > y[m] + tol), None)
        if i is None:
            break
        j = max(m for m in range(n) if current[m] < y[m] - tol)
        eps = min(current[i] - y[i], y[j] - current[j])
        current[i] -= eps
        current[j] += eps
        vectors.append(tuple(current))
        steps.append((i, j, eps))
    residual = max(abs(c - t) for c, t in zip(current, y))
    if residual > tol * len(x):
        raise RuntimeError(f"transfer chain did not converge, residual {residual}")
    # Snap the endpoint so tolerance slack does not leak into callers.
    vectors[-1] = y
    return TChain(vectors=tuple(vectors), steps=tuple(steps))
