"""Weight data for pointed curves of genus g: validity, chamber signatures,
equivalences, reduction and forgetful criteria.

A weight datum is a genus g >= 0 together with rational weights
a_1, ..., a_n, each in [0, 1], subject to 2g - 2 + sum(a_i) > 0 (strict);
for n = 0 this forces g >= 2. All arithmetic is exact: weights are
:class:`fractions.Fraction` and decimal strings are rejected at the parser.

The *chamber signature* of a datum is the family of index sets
S (|S| >= 2) whose weights sum to at most 1. Two data with equal signatures
define the same moduli problem (fine equivalence); in genus 0 the coarse
space only sees the sets of size >= 3 (coarse equivalence).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

from hassett import kernels
from hassett.linear import Constraint, LinearSystem, solve_feasibility

__all__ = [
    "InvalidWeightDataError",
    "WeightData",
    "ValidationReport",
    "parse_rational",
    "format_rational",
    "validate",
    "require_valid",
    "chamber_signature",
    "fine_equivalent",
    "coarse_equivalent_genus0",
    "reduction_exists",
    "reduction_exists_up_to_equivalence",
    "chamber_reduction_exists",
    "forgetful_defined",
]

ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


class InvalidWeightDataError(ValueError):
    """Raised when an operation requires a valid weight datum."""


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or integer strings into an exact rational.

    Decimal notation is rejected on purpose: ``Fraction("0.55")`` would
    silently accept it and exactness is the whole point of the engine.
    """
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(
            f"not an exact rational: {text!r} (use p/q or integer form)"
        )
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(q: Fraction) -> str:
    """Inverse of :func:`parse_rational`: ``1/3``, ``1``, ``0``."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class WeightData:
    """A genus together with an ordered tuple of marking weights.

    Construction does not validate; :func:`validate` reports problems and
    operations that need validity call :func:`require_valid`.
    """

    genus: int
    weights: tuple[Fraction, ...]

    @classmethod
    def from_strings(cls, genus: int, weights: list[str] | tuple[str, ...]) -> "WeightData":
        return cls(genus, tuple(parse_rational(w) for w in weights))

    @classmethod
    def from_json_dict(cls, obj: object) -> "WeightData":
        if not isinstance(obj, dict):
            raise ValueError("weight datum must be a JSON object")
        try:
            genus = obj["genus"]
            raw = obj["weights"]
        except KeyError as exc:
            raise ValueError(f"weight datum is missing key {exc}") from exc
        if not isinstance(genus, int) or isinstance(genus, bool):
            raise ValueError("genus must be an integer")
        if not isinstance(raw, list) or not all(isinstance(w, str) for w in raw):
            raise ValueError("weights must be a list of rational strings")
        return cls(genus, tuple(parse_rational(w) for w in raw))

    def to_json_dict(self) -> dict:
        return {
            "genus": self.genus,
            "weights": [format_rational(w) for w in self.weights],
        }

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def positive_indices(self) -> tuple[int, ...]:
        """1-based indices of the strictly positive weights."""
        return tuple(i for i, w in enumerate(self.weights, start=1) if w > 0)

    def zero_indices(self) -> tuple[int, ...]:
        """1-based indices of the zero weights."""
        return tuple(i for i, w in enumerate(self.weights, start=1) if w == 0)

    def scaled(self) -> tuple[list[int], int]:
        """Integer weights and the cap D with a_i = s_i / D.

        Subset conditions sum(S) <= 1 become integer conditions
        sum(s_i) <= D, which is what the kernels consume.
        """
        d = lcm(*(w.denominator for w in self.weights)) if self.weights else 1
        return [int(w * d) for w in self.weights], d


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`: hard violations plus wall annotations.

    ``walls`` lists the index sets (size >= 2) whose weights sum to exactly
    1; the datum sits on those chamber walls without violating anything.
    """

    ok: bool
    violations: tuple[str, ...]
    walls: tuple[frozenset[int], ...]


def validate(w: WeightData) -> ValidationReport:
    """Check the defining inequalities of a weight datum."""
    problems: list[str] = []
    if w.genus < 0:
        problems.append(f"genus must be nonnegative, got {w.genus}")
    for i, a in enumerate(w.weights, start=1):
        if not (0 <= a <= 1):
            problems.append(f"weight {i} = {format_rational(a)} is outside [0, 1]")
    if w.genus >= 0:
        slack = 2 * w.genus - 2 + w.total
        if slack <= 0:
            problems.append(
                f"2g - 2 + sum(weights) = {format_rational(slack)} must be positive"
            )
        if w.n == 0 and w.genus < 2:
            problems.append("a datum with no markings needs genus >= 2")
    walls: tuple[frozenset[int], ...] = ()
    if not problems:
        walls = _wall_subsets(w)
    return ValidationReport(not problems, tuple(problems), walls)


def require_valid(w: WeightData) -> None:
    report = validate(w)
    if not report.ok:
        raise InvalidWeightDataError("; ".join(report.violations))


def _wall_subsets(w: WeightData) -> tuple[frozenset[int], ...]:
    if w.n < 2:
        return ()
    scaled, cap = w.scaled()
    positives = [i for i, v in enumerate(scaled) if v > 0]
    zeros = [i for i, v in enumerate(scaled) if v == 0]
    masks = kernels.enumerate_small_subsets([scaled[i] for i in positives], cap)
    walls = []
    for mask in masks:
        members = [positives[k] for k in range(len(positives)) if mask >> k & 1]
        if sum(scaled[i] for i in members) == cap:
            walls.append(frozenset(i + 1 for i in members))
    # one positive weight equal to 1 is itself a wall once padded by a zero
    if zeros:
        for i in positives:
            if scaled[i] == cap:
                walls.append(frozenset([i + 1, zeros[0] + 1]))
    return tuple(sorted(walls, key=lambda s: (len(s), sorted(s))))


def chamber_signature(w: WeightData) -> frozenset[frozenset[int]]:
    """All index sets S (|S| >= 2, 1-based) with sum of weights <= 1.

    The result is downward closed in the size->=2 range and determines the
    moduli problem. Data with fewer than two markings have empty signature.
    """
    require_valid(w)
    if w.n < 2:
        return frozenset()
    scaled, cap = w.scaled()
    positives = [i for i, v in enumerate(scaled) if v > 0]
    zeros = [i for i, v in enumerate(scaled) if v == 0]
    small: set[frozenset[int]] = set()

    pos_masks = kernels.enumerate_small_subsets([scaled[i] for i in positives], cap)
    pos_sets = [
        frozenset(positives[k] + 1 for k in range(len(positives)) if mask >> k & 1)
        for mask in pos_masks
    ]
    zero_set = [i + 1 for i in zeros]
    if not zeros:
        return frozenset(pos_sets)

    # every augmentation of a small-or-singleton-or-empty positive part by
    # zero-weight markings keeps the sum, so pad combinatorially
    base_parts: list[frozenset[int]] = list(pos_sets)
    base_parts.append(frozenset())
    base_parts.extend(
        frozenset([i + 1]) for i in positives if scaled[i] <= cap
    )
    for part in base_parts:
        need = max(0, 2 - len(part))
        for extra in range(need, len(zero_set) + 1):
            for zs in combinations(zero_set, extra):
                small.add(part | frozenset(zs))
    return frozenset(s for s in small if len(s) >= 2)


def _check_comparable(w1: WeightData, w2: WeightData) -> None:
    if w1.genus != w2.genus:
        raise ValueError(
            f"genus mismatch: {w1.genus} vs {w2.genus} "
            "(data of different genus are never comparable)"
        )
    if w1.n != w2.n:
        raise ValueError(f"marking count mismatch: {w1.n} vs {w2.n}")


def fine_equivalent(w1: WeightData, w2: WeightData) -> bool:
    """Equal chamber signatures: the two data define the same moduli problem."""
    _check_comparable(w1, w2)
    return chamber_signature(w1) == chamber_signature(w2)


def coarse_equivalent_genus0(w1: WeightData, w2: WeightData) -> bool:
    """Equal signatures on sets of size >= 3; genus 0 only.

    Pair conditions move marked points onto each other without changing the
    underlying coarse space, so only the larger sets matter for it.
    """
    if w1.genus != 0 or w2.genus != 0:
        raise ValueError("coarse equivalence is a genus-0 notion")
    _check_comparable(w1, w2)
    big1 = {s for s in chamber_signature(w1) if len(s) >= 3}
    big2 = {s for s in chamber_signature(w2) if len(s) >= 3}
    return big1 == big2


def reduction_exists(a: WeightData, b: WeightData) -> bool:
    """Pointwise a_i >= b_i: the contraction morphism from a's space to b's."""
    _check_comparable(a, b)
    require_valid(a)
    require_valid(b)
    return all(x >= y for x, y in zip(a.weights, b.weights))


def _signature_antichains(
    sig: frozenset[frozenset[int]], n: int, min_size: int
) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    """Maximal small sets and minimal big sets of sizes >= min_size.

    Together with nonnegativity these two antichains pin the full signature:
    subsets of small sets stay small, supersets of big sets stay big.
    """
    universe = range(1, n + 1)
    smalls = {s for s in sig if len(s) >= min_size}
    maximal = [
        s
        for s in smalls
        if not any(x not in s and s | {x} in smalls for x in universe)
    ]
    minimal: list[frozenset[int]] = []
    for size in range(min_size, n + 1):
        for combo in combinations(universe, size):
            s = frozenset(combo)
            if s in smalls:
                continue
            if size == min_size or all(s - {x} in smalls for x in s):
                minimal.append(s)
    return maximal, minimal


def _blocked_feasibility(
    num_vars: int,
    cons: list[Constraint],
    var_class,
) -> tuple[Fraction, ...] | None:
    """Exact feasibility with variables tied inside equal-key classes.

    ``var_class[v]`` is a hashable key; variables sharing a key are
    replaced by one block variable and duplicate rows are merged.  This
    is sound whenever the constraint set is invariant under every
    permutation of variables that preserves the keys: the solution set
    is convex, so averaging any solution over those permutations yields
    a block-uniform solution, and the reduced system is feasible exactly
    when the full one is.  Callers guarantee that invariance.
    """
    keys: dict = {}
    for key in var_class:
        keys.setdefault(key, len(keys))
    index = [keys[k] for k in var_class]
    m = len(keys)
    reduced: dict[tuple, Constraint] = {}
    for row in cons:
        coeffs = [Fraction(0)] * m
        for v, c in enumerate(row.coeffs):
            coeffs[index[v]] += c
        key = (tuple(coeffs), row.rel, row.bound)
        reduced.setdefault(key, Constraint(tuple(coeffs), row.rel, row.bound))
    sol = solve_feasibility(LinearSystem(m, tuple(reduced.values())))
    if sol is None:
        return None
    return tuple(sol[index[v]] for v in range(num_vars))


def reduction_exists_up_to_equivalence(
    a: WeightData, b: WeightData, mode: str = "fine"
) -> tuple[Fraction, ...] | None:
    """A datum b' equivalent to b (per mode) with a >= b' pointwise, or None.

    Marking labels are fixed: slot i of b' compares against slot i of both
    inputs. Callers wanting relabelings permute b themselves. The witness is
    found by exact linear feasibility over the chamber conditions of b's
    signature (its maximal-small and minimal-big antichains), re-verified by
    substitution before returning.
    """
    if mode not in ("fine", "coarse"):
        raise ValueError(f"unknown mode {mode!r}")
    _check_comparable(a, b)
    require_valid(a)
    require_valid(b)
    if mode == "coarse" and a.genus != 0:
        raise ValueError("coarse equivalence is a genus-0 notion")
    n = a.n
    min_size = 2 if mode == "fine" else 3
    maximal, minimal = _signature_antichains(chamber_signature(b), n, min_size)

    def indicator(s: frozenset[int], sign: int) -> tuple[Fraction, ...]:
        return tuple(
            Fraction(sign if i in s else 0) for i in range(1, n + 1)
        )

    cons: list[Constraint] = []
    for i in range(n):
        unit = tuple(Fraction(1 if j == i else 0) for j in range(n))
        neg = tuple(-u for u in unit)
        cons.append(Constraint(neg, "<=", Fraction(0)))
        cons.append(Constraint(unit, "<=", min(a.weights[i], ONE)))
    cons.append(
        Constraint(
            tuple(Fraction(-1) for _ in range(n)),
            "<",
            Fraction(2 * a.genus - 2),
        )
    )
    for s in maximal:
        cons.append(Constraint(indicator(s, 1), "<=", ONE))
    for s in minimal:
        cons.append(Constraint(indicator(s, -1), "<", -ONE))
    # Slots with equal (a_i, b_i) weight pairs are interchangeable in
    # every row above, so the search may tie them (see _blocked_feasibility).
    var_class = [(a.weights[i], b.weights[i]) for i in range(n)]
    witness = _blocked_feasibility(n, cons, var_class)
    if witness is None:
        return None
    b_prime = WeightData(a.genus, witness)
    equivalent = (
        fine_equivalent(b_prime, b)
        if mode == "fine"
        else coarse_equivalent_genus0(b_prime, b)
    )
    if not equivalent or not reduction_exists(a, b_prime):
        raise RuntimeError("reduction witness failed re-verification")
    return witness


def chamber_reduction_exists(
    a: WeightData, b: WeightData, mode: str = "fine"
) -> tuple[WeightData, WeightData] | None:
    """A pair (x, y) with x equivalent to a, y to b, and x >= y pointwise.

    Unlike :func:`reduction_exists_up_to_equivalence`, BOTH sides range over
    their full equivalence chambers, so the answer depends only on the
    chambers of the inputs: replacing either datum by an equivalent one
    cannot change the result. One joint exact feasibility system in 2n
    variables decides it; the witness pair is re-verified by substitution
    before returning. Returns None when no such pair exists.
    """
    if mode not in ("fine", "coarse"):
        raise ValueError(f"unknown mode {mode!r}")
    _check_comparable(a, b)
    require_valid(a)
    require_valid(b)
    if mode == "coarse" and a.genus != 0:
        raise ValueError("coarse equivalence is a genus-0 notion")
    n = a.n
    min_size = 2 if mode == "fine" else 3
    cons: list[Constraint] = []

    def chamber_rows(w: WeightData, offset: int) -> None:
        maximal, minimal = _signature_antichains(
            chamber_signature(w), n, min_size
        )
        for i in range(n):
            unit = [Fraction(0)] * (2 * n)
            unit[offset + i] = Fraction(1)
            cons.append(Constraint(tuple(-u for u in unit), "<=", Fraction(0)))
            cons.append(Constraint(tuple(unit), "<=", ONE))
        validity = [Fraction(0)] * (2 * n)
        for i in range(n):
            validity[offset + i] = Fraction(-1)
        cons.append(Constraint(tuple(validity), "<", Fraction(2 * w.genus - 2)))
        for s in maximal:
            row = [Fraction(0)] * (2 * n)
            for i in s:
                row[offset + i - 1] = Fraction(1)
            cons.append(Constraint(tuple(row), "<=", ONE))
        for s in minimal:
            row = [Fraction(0)] * (2 * n)
            for i in s:
                row[offset + i - 1] = Fraction(-1)
            cons.append(Constraint(tuple(row), "<", -ONE))

    chamber_rows(a, 0)
    chamber_rows(b, n)
    for i in range(n):
        row = [Fraction(0)] * (2 * n)
        row[n + i] = Fraction(1)
        row[i] = Fraction(-1)
        cons.append(Constraint(tuple(row), "<=", Fraction(0)))
    # Simultaneously permuting slots with equal (a_i, b_i) weight pairs
    # on both halves maps every row above to another, so the search may
    # tie such slots (see _blocked_feasibility).
    var_class = [("x", a.weights[i], b.weights[i]) for i in range(n)]
    var_class += [("y", a.weights[i], b.weights[i]) for i in range(n)]
    witness = _blocked_feasibility(2 * n, cons, var_class)
    if witness is None:
        return None
    x = WeightData(a.genus, witness[:n])
    y = WeightData(b.genus, witness[n:])
    same = fine_equivalent if mode == "fine" else coarse_equivalent_genus0
    if not (same(x, a) and same(y, b) and reduction_exists(x, y)):
        raise RuntimeError("chamber reduction witness failed re-verification")
    return x, y


def forgetful_defined(w: WeightData, keep: frozenset[int] | set[int]) -> bool:
    """Whether dropping the markings outside ``keep`` leaves a valid datum.

    The criterion is 2g - 2 + sum of the kept weights > 0; with it the
    forgetful morphism onto the smaller space exists.
    """
    require_valid(w)
    kept = frozenset(keep)
    if not kept <= set(range(1, w.n + 1)):
        raise ValueError(f"keep set {sorted(kept)} is not a subset of 1..{w.n}")
    total = sum((w.weights[i - 1] for i in kept), Fraction(0))
    return 2 * w.genus - 2 + total > 0
