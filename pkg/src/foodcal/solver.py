"""Exact reachable-sum computation and plan search over a day's three meal windows.

Sums are tracked as bitmasks in arbitrary-precision integers: bit ``s`` of a
mask is set iff a total of ``s`` kcal is attainable. The window DP indexes
masks by exact item count so the min/max items-per-window bounds stay exact,
and seeding one window's DP with another's result mask yields the Minkowski
sum of their reachable sets. No pruning ever drops an attainable sum.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .catalog import FoodItem
from .errors import NoValidPlanError

DEFAULT_MIN_ITEMS = 1
DEFAULT_MAX_ITEMS = 3
DEFAULT_MAX_QUANTITY = 10

# Quantity bound for the fast pre-check in feasible(); reachable sets grow
# monotonically in max_quantity, so a hit at a smaller bound already proves
# feasibility and only misses fall through to the full check.
_QUICK_QUANTITY_BOUND = 4


@dataclass(frozen=True)
class SelectionConstraints:
    min_items_per_window: int = DEFAULT_MIN_ITEMS
    max_items_per_window: int = DEFAULT_MAX_ITEMS
    max_quantity_per_item: int = DEFAULT_MAX_QUANTITY

    def __post_init__(self) -> None:
        if not 1 <= self.min_items_per_window <= self.max_items_per_window <= 6:
            raise ValueError(
                "need 1 <= min_items_per_window <= max_items_per_window <= 6, got "
                f"{self.min_items_per_window}..{self.max_items_per_window}"
            )
        if self.max_quantity_per_item < 1:
            raise ValueError("max_quantity_per_item must be >= 1")


@dataclass(frozen=True)
class Pick:
    item_id: str
    quantity: int


@dataclass(frozen=True)
class WindowChoice:
    """Picks for one meal window; picks are kept sorted by item id."""

    picks: tuple[Pick, ...]
    total_kcal: int


@dataclass(frozen=True)
class DayPlan:
    breakfast: WindowChoice
    lunch: WindowChoice
    dinner: WindowChoice
    day_total_kcal: int

    @property
    def windows(self) -> tuple[WindowChoice, WindowChoice, WindowChoice]:
        return (self.breakfast, self.lunch, self.dinner)

    @property
    def total_items(self) -> int:
        return sum(len(w.picks) for w in self.windows)


@dataclass(frozen=True)
class ReachableSet:
    achievable: frozenset[int]
    bound: int


def make_window_choice(pool: Sequence[FoodItem], picks: Iterable[tuple[str, int]]) -> WindowChoice:
    """Build a WindowChoice from (item_id, quantity) pairs against a pool."""
    by_id = {item.id: item for item in pool}
    ordered = tuple(Pick(item_id=item_id, quantity=qty) for item_id, qty in sorted(picks))
    total = sum(by_id[p.item_id].kcal_per_unit * p.quantity for p in ordered)
    return WindowChoice(picks=ordered, total_kcal=total)


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _reverse_window(mask: int, t: int) -> int:
    """Bit i of the result equals bit (t - i) of mask, for 0 <= i <= t.

    Reduces "does any split s + (t - s) exist with A[s] and B[t - s]" to a
    single AND: the witnesses are exactly the set bits of
    ``A & _reverse_window(B, t)``.
    """
    if t < 0:
        return 0
    low = mask & ((1 << (t + 1)) - 1)
    return int(format(low, f"0{t + 1}b")[::-1], 2)


def _lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _count_dp(
    kcals: Sequence[int],
    max_count: int,
    max_qty: int,
    cap_mask: int | None = None,
    seed_mask: int = 1,
) -> list[int]:
    """dp[c] = bitmask of sums formed by exactly c distinct items, each at
    quantity 1..max_qty, added on top of any sum present in seed_mask."""
    dp = [0] * (max_count + 1)
    dp[0] = seed_mask
    for k in kcals:
        shifts = [q * k for q in range(1, max_qty + 1)]
        for c in range(max_count, 0, -1):
            src = dp[c - 1]
            if not src:
                continue
            acc = dp[c]
            for sh in shifts:
                acc |= src << sh
            if cap_mask is not None:
                acc &= cap_mask
            dp[c] = acc
    return dp


def _window_mask(
    kcals: Sequence[int],
    c: SelectionConstraints,
    cap_mask: int | None = None,
    seed_mask: int = 1,
    max_qty: int | None = None,
) -> int:
    qty = c.max_quantity_per_item if max_qty is None else max_qty
    dp = _count_dp(kcals, c.max_items_per_window, qty, cap_mask, seed_mask)
    mask = 0
    for count in range(c.min_items_per_window, c.max_items_per_window + 1):
        mask |= dp[count]
    return mask


def _day_mask(
    windows: Sequence[Sequence[FoodItem]],
    c: SelectionConstraints,
    cap: int | None,
    max_qty: int | None = None,
) -> int:
    cap_mask = (1 << (cap + 1)) - 1 if cap is not None else None
    mask = 1
    for pool in windows:
        kcals = [item.kcal_per_unit for item in pool]
        mask = _window_mask(kcals, c, cap_mask, seed_mask=mask, max_qty=max_qty)
        if not mask:
            return 0
    return mask


def window_reachable(pool: Sequence[FoodItem], constraints: SelectionConstraints) -> ReachableSet:
    """Exact set of window totals attainable under the constraints."""
    kcals = [item.kcal_per_unit for item in pool]
    c = constraints
    bound = c.max_items_per_window * c.max_quantity_per_item * max(kcals, default=0)
    mask = _window_mask(kcals, c)
    return ReachableSet(achievable=frozenset(_iter_bits(mask)), bound=bound)


def day_reachable(
    windows: Sequence[Sequence[FoodItem]],
    constraints: SelectionConstraints,
    cap: int,
) -> ReachableSet:
    """Minkowski sum of the three window reachable sets, truncated at cap."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    _require_three(windows)
    mask = _day_mask(windows, constraints, cap)
    return ReachableSet(achievable=frozenset(_iter_bits(mask)), bound=cap)


def feasible(
    windows: Sequence[Sequence[FoodItem]],
    constraints: SelectionConstraints,
    target: int,
    tol: int,
) -> bool:
    """True iff some legal day plan lands within [target - tol, target + tol]."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    if target < 0:
        raise ValueError("target must be >= 0")
    _require_three(windows)
    cap = target + tol
    lo = max(0, target - tol)
    band = ((1 << (cap - lo + 1)) - 1) << lo
    if constraints.max_quantity_per_item > _QUICK_QUANTITY_BOUND:
        quick = _day_mask(windows, constraints, cap, max_qty=_QUICK_QUANTITY_BOUND)
        if quick & band:
            return True
    return bool(_day_mask(windows, constraints, cap) & band)


def best_plan(
    windows: Sequence[Sequence[FoodItem]],
    constraints: SelectionConstraints,
    target: int,
) -> DayPlan:
    """Deterministic optimal plan for one gender's day.

    Optimality order (total, so identical inputs give identical plans):
    1. smallest |day total - target|
    2. fewest total items
    3. smallest item-id sequence, breakfast block first
    4. smallest breakfast sum, then smallest lunch sum
    5. smallest quantity vector in item-id order
    """
    if target < 0:
        raise ValueError("target must be >= 0")
    _require_three(windows)
    c = constraints
    for pool in windows:
        if len(pool) < c.min_items_per_window:
            raise NoValidPlanError(
                f"window pool of {len(pool)} items cannot satisfy "
                f"min {c.min_items_per_window} items"
            )

    kcals_per_window = [[item.kcal_per_unit for item in pool] for pool in windows]
    count_masks = [
        _count_dp(kcals, c.max_items_per_window, c.max_quantity_per_item)
        for kcals in kcals_per_window
    ]

    # Day DP additionally tracking the total item count across windows.
    max_total_items = 3 * c.max_items_per_window
    day = [0] * (max_total_items + 1)
    day[0] = 1
    for kcals in kcals_per_window:
        nxt = [0] * (max_total_items + 1)
        for have in range(max_total_items + 1):
            if not day[have]:
                continue
            dp = _count_dp(
                kcals, c.max_items_per_window, c.max_quantity_per_item,
                seed_mask=day[have],
            )
            for cnt in range(c.min_items_per_window, c.max_items_per_window + 1):
                if have + cnt <= max_total_items:
                    nxt[have + cnt] |= dp[cnt]
        day = nxt

    full = 0
    for mask in day:
        full |= mask
    if not full:
        raise NoValidPlanError("no legal day plan exists under the constraints")

    # Nearest achievable totals on both sides of the target.
    candidates: list[int] = []
    best_dev: int | None = None
    below = full & ((1 << (target + 1)) - 1)
    if below:
        v = below.bit_length() - 1
        best_dev = target - v
        candidates.append(v)
    above = full >> target
    if above:
        v = target + _lowest_bit(above)
        dev = v - target
        if best_dev is None or dev < best_dev:
            best_dev, candidates = dev, [v]
        elif dev == best_dev and v not in candidates:
            candidates.append(v)

    def min_items_for(total: int) -> int | None:
        for n in range(3 * c.min_items_per_window, max_total_items + 1):
            if day[n] & (1 << total):
                return n
        return None

    per_total = {t: min_items_for(t) for t in candidates}
    n_star = min(n for n in per_total.values() if n is not None)
    finalists = sorted(t for t, n in per_total.items() if n == n_star)

    best_key: tuple | None = None
    best_picks: list[list[Pick]] | None = None
    for total in finalists:
        for triple in _count_triples(c, n_star):
            built = _build_plan_for(windows, count_masks, c, total, triple)
            if built is None:
                continue
            picks, s1, s2 = built
            ids_seq = tuple(p.item_id for w in picks for p in w)
            key = (ids_seq, s1, s2, total)
            if best_key is None or key < best_key:
                best_key, best_picks = key, picks
    assert best_picks is not None, "finalist totals are achievable by construction"

    choices = []
    for pool, picks in zip(windows, best_picks):
        kcal_by_id = {item.id: item.kcal_per_unit for item in pool}
        total_kcal = sum(p.quantity * kcal_by_id[p.item_id] for p in picks)
        choices.append(WindowChoice(picks=tuple(picks), total_kcal=total_kcal))
    return DayPlan(
        breakfast=choices[0], lunch=choices[1], dinner=choices[2],
        day_total_kcal=sum(ch.total_kcal for ch in choices),
    )


def _require_three(windows: Sequence[Sequence[FoodItem]]) -> None:
    if len(windows) != 3:
        raise ValueError(f"expected 3 windows, got {len(windows)}")


def _count_triples(c: SelectionConstraints, total_items: int) -> list[tuple[int, int, int]]:
    lo, hi = c.min_items_per_window, c.max_items_per_window
    return [
        (c1, c2, c3)
        for c1 in range(lo, hi + 1)
        for c2 in range(lo, hi + 1)
        for c3 in range(lo, hi + 1)
        if c1 + c2 + c3 == total_items
    ]


def _subset_sum_mask(kcals: Sequence[int], max_qty: int) -> int:
    """Sums using every listed item at quantity 1..max_qty."""
    mask = 1
    for k in kcals:
        acc = 0
        for q in range(1, max_qty + 1):
            acc |= mask << (q * k)
        mask = acc
    return mask


def _minkowski(a: int, b: int) -> int:
    """Set of sums x + y for x in a, y in b (iterates the sparser mask)."""
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    for s in _iter_bits(a):
        out |= b << s
    return out


def _lex_min_quantities(
    kcals: Sequence[int], total: int, max_qty: int
) -> tuple[int, ...] | None:
    """Lexicographically smallest quantity vector with sum(q * k) == total."""
    n = len(kcals)
    suffix = [0] * (n + 1)
    suffix[n] = 1
    for i in range(n - 1, -1, -1):
        suffix[i] = _subset_sum_mask(kcals[i:], max_qty)
    if total < 0 or not (suffix[0] >> total) & 1:
        return None
    quantities: list[int] = []
    remaining = total
    for i in range(n):
        for q in range(1, max_qty + 1):
            rest = remaining - q * kcals[i]
            if rest < 0:
                break
            if (suffix[i + 1] >> rest) & 1:
                quantities.append(q)
                remaining = rest
                break
        else:
            return None
    return tuple(quantities)


def _build_plan_for(
    windows: Sequence[Sequence[FoodItem]],
    count_masks: Sequence[Sequence[int]],
    c: SelectionConstraints,
    total: int,
    triple: tuple[int, int, int],
) -> tuple[list[list[Pick]], int, int] | None:
    """Greedy id-lexicographic subset choice per window for one (total, counts).

    Returns (per-window picks, breakfast sum, lunch sum) or None when the
    count split cannot reach the total.
    """
    c1, c2, c3 = triple
    w1m, w2m, w3m = count_masks[0][c1], count_masks[1][c2], count_masks[2][c3]
    if not (w1m and w2m and w3m):
        return None
    qty = c.max_quantity_per_item

    m23 = 0
    for s2 in _iter_bits(w2m):
        if s2 > total:
            break
        m23 |= w3m << s2
    rev23 = _reverse_window(m23, total)
    if not (w1m & rev23):
        return None
    rev3 = _reverse_window(w3m, total)

    pool1, pool2, pool3 = windows

    def subsets(pool: Sequence[FoodItem], size: int):
        order = sorted(range(len(pool)), key=lambda i: pool[i].id)
        yield from itertools.combinations(order, size)

    for combo1 in subsets(pool1, c1):
        a1 = _subset_sum_mask([pool1[i].kcal_per_unit for i in combo1], qty)
        if not (a1 & rev23):
            continue
        for combo2 in subsets(pool2, c2):
            a2 = _subset_sum_mask([pool2[i].kcal_per_unit for i in combo2], qty)
            p12 = _minkowski(a1, a2)
            if not (p12 & rev3):
                continue
            for combo3 in subsets(pool3, c3):
                a3 = _subset_sum_mask([pool3[i].kcal_per_unit for i in combo3], qty)
                if not (p12 & _reverse_window(a3, total)):
                    continue
                s1 = _lowest_bit(a1 & _reverse_window(_minkowski(a2, a3), total))
                s2 = _lowest_bit(a2 & _reverse_window(a3, total - s1))
                s3 = total - s1 - s2
                picks: list[list[Pick]] = []
                for combo, pool, s in (
                    (combo1, pool1, s1), (combo2, pool2, s2), (combo3, pool3, s3),
                ):
                    ks = [pool[i].kcal_per_unit for i in combo]
                    qs = _lex_min_quantities(ks, s, qty)
                    assert qs is not None, "sum was certified reachable for this subset"
                    picks.append(
                        [Pick(item_id=pool[i].id, quantity=q) for i, q in zip(combo, qs)]
                    )
                return picks, s1, s2
    return None
