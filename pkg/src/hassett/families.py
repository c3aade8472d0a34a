"""Named families of genus-zero weight data and their blow-up schedules.

Three classical ways of building the moduli space of n-pointed rational
curves by iterated blow-ups give rise to three one- or two-parameter
families of weight data, one datum per intermediate space:

* **Kapranov's iterated construction** (``kapranov:r=..,s=..``): blow up
  points of projective space one group at a time.  The intermediate
  space after finishing size-(s + r - 2) centers of step r is the
  moduli space with n - r - 1 light weights 1/(n-r-1), one weight
  s/(n-r-1), and r full weights.
* **The symmetric variant** (``sym:k=..``): blow up all points, then all
  lines, then all planes spanned by n - 1 general points of P^{n-3}.
  After step k the space carries n - 1 equal light weights 1/(n-k-2)
  and one full weight.
* **Keel's product construction** (``keel:h=..``): blow up loci inside
  (P^1)^{n-3} — first diagonal slices through three fixed fibers, then
  the small diagonals themselves.  The intermediate spaces carry three
  heavy markings (pairwise sums above one) and n - 3 light ones, with
  the exchange thresholds moving as h grows.

Each family is described by an exact linear condition system on the
weights, a canonical rational representative satisfying it, a
classifier inverting the construction up to chamber equivalence, and
the combinatorial schedule of blow-up centers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .linear import Constraint, LinearSystem, evaluate, solve_feasibility
from .weights import (
    ONE,
    WeightData,
    chamber_reduction_exists,
    chamber_signature,
    coarse_equivalent_genus0,
    reduction_exists,
    require_valid,
)

FAMILY_KAPRANOV = "kapranov"
FAMILY_SYM = "sym"
FAMILY_KEEL = "keel"

SCHEDULE_SCHEMA = "blowup-schedule/1"

#: Constructions accepted by :func:`blowup_schedule`.
CONSTRUCTIONS = ("kblu", "kblusym", "con2")


class InfeasibleFamilyError(ValueError):
    """The condition system of a family admits no valid weight datum.

    Raised instead of returning a fabricated point: an infeasible system
    signals an inconsistent parameter reading and must surface.
    """


@dataclass(frozen=True)
class FamilySpec:
    """One member of a named family: the family tag, n, and parameters.

    ``params`` is ``(r, s)`` for Kapranov, ``(k,)`` for the symmetric
    variant, and ``(h,)`` for Keel.
    """

    family: str
    n: int
    params: tuple[int, ...]

    @property
    def r(self) -> int:
        if self.family != FAMILY_KAPRANOV:
            raise AttributeError(f"{self.family} family has no parameter r")
        return self.params[0]

    @property
    def s(self) -> int:
        if self.family != FAMILY_KAPRANOV:
            raise AttributeError(f"{self.family} family has no parameter s")
        return self.params[1]

    @property
    def k(self) -> int:
        if self.family != FAMILY_SYM:
            raise AttributeError(f"{self.family} family has no parameter k")
        return self.params[0]

    @property
    def h(self) -> int:
        if self.family != FAMILY_KEEL:
            raise AttributeError(f"{self.family} family has no parameter h")
        return self.params[0]

    def notation(self) -> str:
        if self.family == FAMILY_KAPRANOV:
            return f"kapranov:r={self.r},s={self.s},n={self.n}"
        if self.family == FAMILY_SYM:
            return f"sym:k={self.k},n={self.n}"
        return f"keel:h={self.h},n={self.n}"

    def to_json_dict(self) -> dict:
        out: dict = {"family": self.family, "n": self.n}
        if self.family == FAMILY_KAPRANOV:
            out["r"], out["s"] = self.params
        elif self.family == FAMILY_SYM:
            out["k"] = self.params[0]
        else:
            out["h"] = self.params[0]
        out["notation"] = self.notation()
        return out

    @classmethod
    def from_notation(cls, text: str) -> "FamilySpec":
        """Inverse of :meth:`notation`, with full range validation.

        Accepts ``kapranov:r=1,s=2,n=5``, ``sym:k=1,n=6``,
        ``keel:h=2,n=6``; raises ``ValueError`` otherwise.
        """
        shapes = {
            FAMILY_KAPRANOV: (("r", "s", "n"), kapranov_spec),
            FAMILY_SYM: (("k", "n"), sym_spec),
            FAMILY_KEEL: (("h", "n"), keel_spec),
        }
        head, sep, tail = text.strip().partition(":")
        if not sep or head not in shapes:
            raise ValueError(f"not a family notation: {text!r}")
        keys, build = shapes[head]
        parts = tail.split(",")
        if len(parts) != len(keys):
            raise ValueError(f"{head} notation needs {','.join(keys)}: {text!r}")
        values = []
        for key, part in zip(keys, parts):
            name, eq, digits = part.partition("=")
            if name != key or not eq or not digits.lstrip("-").isdigit():
                raise ValueError(f"expected {key}=<integer>, got {part!r}")
            values.append(int(digits))
        return build(*values)


def kapranov_spec(r: int, s: int, n: int) -> FamilySpec:
    if n < 4:
        raise ValueError(f"Kapranov family needs n >= 4, got {n}")
    if not (1 <= r <= n - 3):
        raise ValueError(f"parameter r={r} outside 1..{n - 3} for n={n}")
    if not (1 <= s <= n - r - 2):
        raise ValueError(f"parameter s={s} outside 1..{n - r - 2} for r={r}, n={n}")
    return FamilySpec(FAMILY_KAPRANOV, n, (r, s))


def sym_spec(k: int, n: int) -> FamilySpec:
    if n < 5:
        raise ValueError(f"symmetric Kapranov family needs n >= 5, got {n}")
    if not (1 <= k <= n - 4):
        raise ValueError(f"parameter k={k} outside 1..{n - 4} for n={n}")
    return FamilySpec(FAMILY_SYM, n, (k,))


def keel_spec(h: int, n: int) -> FamilySpec:
    if n < 5:
        raise ValueError(f"Keel family needs n >= 5, got {n}")
    if not (0 <= h <= 2 * n - 9):
        raise ValueError(f"parameter h={h} outside 0..{2 * n - 9} for n={n}")
    return FamilySpec(FAMILY_KEEL, n, (h,))


def family_grid(n: int):
    """All family members at a given n, in classification order.

    Kapranov members come first (r ascending, then s, matching the step
    order of the iterated construction), then the symmetric variant,
    then Keel.
    """
    for r in range(1, n - 2):
        for s in range(1, n - r - 1):
            yield kapranov_spec(r, s, n)
    for k in range(1, max(1, n - 3)):
        yield sym_spec(k, n)
    for h in range(0, max(0, 2 * n - 8)):
        yield keel_spec(h, n)


# ---------------------------------------------------------------------------
# Weights and condition systems
# ---------------------------------------------------------------------------


def kapranov_weights(r: int, s: int, n: int) -> WeightData:
    """The weight datum of the Kapranov family member (r, s) at n markings.

    n - r - 1 copies of 1/(n-r-1), then s/(n-r-1), then r copies of 1.
    """
    kapranov_spec(r, s, n)
    light = Fraction(1, n - r - 1)
    weights = (light,) * (n - r - 1) + (s * light,) + (ONE,) * r
    return WeightData(0, weights)


def _sum_le_one(indices, n: int) -> Constraint:
    coeffs = tuple(Fraction(1 if i + 1 in indices else 0) for i in range(n))
    return Constraint(coeffs, "<=", ONE)


def _sum_gt_one(indices, n: int) -> Constraint:
    coeffs = tuple(Fraction(-1 if i + 1 in indices else 0) for i in range(n))
    return Constraint(coeffs, "<", -ONE)


@lru_cache(maxsize=None)
def family_conditions(spec: FamilySpec) -> LinearSystem:
    """The construction's exact inequality system on the n weights.

    Only the inequalities of the construction itself appear; the generic
    box and validity rows (0 < a_i <= 1, total above two) are appended
    separately by the feasibility search.
    """
    n = spec.n
    cons: list[Constraint] = []
    if spec.family == FAMILY_KAPRANOV:
        rep = kapranov_weights(spec.r, spec.s, n)
        for i, value in enumerate(rep.weights):
            unit = tuple(Fraction(1 if j == i else 0) for j in range(n))
            cons.append(Constraint(unit, "=", value))
        return LinearSystem(n, tuple(cons))
    if spec.family == FAMILY_SYM:
        k = spec.k
        for i in range(1, n):
            cons.append(_sum_gt_one({i, n}, n))
        for size in range(2, n - k - 1):
            for subset in combinations(range(1, n), size):
                cons.append(_sum_le_one(set(subset), n))
        for size in range(n - k - 1, n - 1):
            for subset in combinations(range(1, n), size):
                cons.append(_sum_gt_one(set(subset), n))
        return LinearSystem(n, tuple(cons))
    h = spec.h
    lights = range(4, n + 1)
    for pair in combinations((1, 2, 3), 2):
        cons.append(_sum_gt_one(set(pair), n))
    if h <= n - 4:
        # Heavy-anchored phase: thresholds on one heavy plus light packets.
        min_size = 2 if h == 0 else 1
        for i in (1, 2, 3):
            for size in range(min_size, n - h - 2):
                for packet in combinations(lights, size):
                    cons.append(_sum_le_one({i, *packet}, n))
            for size in range(n - h - 2, n - 2):
                for packet in combinations(lights, size):
                    cons.append(_sum_gt_one({i, *packet}, n))
    else:
        # Pure-light phase: thresholds on light packets alone.
        cut = 2 * n - h - 7
        for size in range(1, cut + 1):
            for packet in combinations(lights, size):
                cons.append(_sum_le_one(set(packet), n))
        for size in range(cut + 1, n - 2):
            for packet in combinations(lights, size):
                cons.append(_sum_gt_one(set(packet), n))
    return LinearSystem(n, tuple(cons))


@lru_cache(maxsize=None)
def representative_weights(spec: FamilySpec) -> WeightData:
    """Canonical rational representative of the family member.

    Closed forms, chosen strictly inside the condition region wherever
    the region has interior (threshold equalities are kept only where
    the conditions force them).  Every returned datum is re-checked
    against :func:`family_conditions` by exact substitution.
    """
    n = spec.n
    if spec.family == FAMILY_KAPRANOV:
        rep = kapranov_weights(spec.r, spec.s, n)
    elif spec.family == FAMILY_SYM:
        light = Fraction(1, n - spec.k - 2)
        rep = WeightData(0, (light,) * (n - 1) + (ONE,))
    else:
        h = spec.h
        if h <= n - 4:
            # Heavy-anchored phase: one heavy plus up to k lights stays
            # at or below one, one more light pushes past it.
            k = n - h - 3
            light = Fraction(1, 2 * k + 2)
            heavy = Fraction(2 * k + 3, 4 * k + 4)
            rep = WeightData(0, (heavy,) * 3 + (light,) * (n - 3))
        elif h == n - 3:
            # Exchange point: two full weights, one doubled light.
            light = Fraction(1, n - 3)
            rep = WeightData(
                0, (ONE, ONE) + (light,) * (n - 3) + (2 * light,)
            )
        else:
            # Pure-light phase: packets of up to 2n-h-7 lights stay
            # small, larger ones grow big.
            cut = 2 * n - h - 7
            light = Fraction(2, 2 * cut + 1)
            rep = WeightData(0, (ONE, ONE) + (light,) * (n - 2))
    require_valid(rep)
    if not evaluate(family_conditions(spec), rep.weights):
        raise RuntimeError(
            f"representative for {spec.notation()} violates its conditions"
        )
    return rep


def _box_and_validity_rows(n: int) -> list[Constraint]:
    rows: list[Constraint] = []
    for i in range(n):
        unit = tuple(Fraction(1 if j == i else 0) for j in range(n))
        rows.append(Constraint(tuple(-u for u in unit), "<", Fraction(0)))
        rows.append(Constraint(unit, "<=", ONE))
    rows.append(
        Constraint(tuple(Fraction(-1) for _ in range(n)), "<", Fraction(-2))
    )
    return rows


def _slot_blocks(spec: FamilySpec) -> tuple[tuple[int, ...], ...]:
    """Slot groups under which the family's condition system is symmetric."""
    n = spec.n
    if spec.family == FAMILY_KAPRANOV:
        r = spec.r
        return (
            tuple(range(1, n - r)),
            (n - r,),
            tuple(range(n - r + 1, n + 1)),
        )
    if spec.family == FAMILY_SYM:
        return (tuple(range(1, n)), (n,))
    return ((1, 2, 3), tuple(range(4, n + 1)))


def feasible_representative(spec: FamilySpec) -> WeightData:
    """A representative found by exact linear feasibility, not closed form.

    Cross-check route for :func:`representative_weights`: solves the
    condition system plus the weight box and validity rows, then
    re-checks the point against the full system by substitution.

    The search runs in one variable per symmetric slot block: the
    condition system is invariant under permuting slots within each
    block, and its solution region is convex, so averaging any solution
    over the block symmetries yields a block-uniform one — the reduced
    system is solvable exactly when the full one is.  (The full system
    is still solved directly if the reduced one comes back infeasible.)
    Raises :class:`InfeasibleFamilyError` when no solution exists.
    """
    system = family_conditions(spec)
    n = spec.n
    full_rows = list(system.constraints) + _box_and_validity_rows(n)
    blocks = _slot_blocks(spec)
    block_of = {}
    for b, block in enumerate(blocks):
        for slot in block:
            block_of[slot] = b
    reduced: dict[tuple, Constraint] = {}
    for row in full_rows:
        coeffs = [Fraction(0)] * len(blocks)
        for slot in range(1, n + 1):
            coeffs[block_of[slot]] += row.coeffs[slot - 1]
        key = (tuple(coeffs), row.rel, row.bound)
        reduced.setdefault(key, Constraint(tuple(coeffs), row.rel, row.bound))
    point = solve_feasibility(
        LinearSystem(len(blocks), tuple(reduced.values()))
    )
    if point is not None:
        weights = tuple(point[block_of[slot]] for slot in range(1, n + 1))
    else:
        direct = solve_feasibility(LinearSystem(n, tuple(full_rows)))
        if direct is None:
            raise InfeasibleFamilyError(
                f"condition system for {spec.notation()} is infeasible"
            )
        weights = direct
    w = WeightData(0, weights)
    require_valid(w)
    if not evaluate(system, w.weights):
        raise RuntimeError(
            f"feasibility witness for {spec.notation()} failed re-checking"
        )
    return w


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def signature_relabeling(
    target: frozenset[frozenset[int]],
    source: frozenset[frozenset[int]],
    n: int,
) -> tuple[int, ...] | None:
    """A slot permutation carrying one chamber signature onto another.

    Returns a 1-based tuple ``sigma`` with ``sigma[j-1]`` the image of
    slot j, such that mapping every set of ``source`` through it yields
    exactly ``target`` — or None if no such permutation exists.  The
    search is pruned by per-slot membership fingerprints (how many sets
    of each size contain the slot), which relabeling cannot change.
    """
    if len(target) != len(source):
        return None
    if Counter(len(s) for s in target) != Counter(len(s) for s in source):
        return None

    def fingerprints(sig) -> list[tuple[int, ...]]:
        table = []
        for slot in range(1, n + 1):
            counts = [0] * (n + 1)
            for s in sig:
                if slot in s:
                    counts[len(s)] += 1
            table.append(tuple(counts))
        return table

    fp_target = fingerprints(target)
    fp_source = fingerprints(source)
    if Counter(fp_target) != Counter(fp_source):
        return None
    candidates = [
        [i for i in range(n) if fp_target[i] == fp_source[j]]
        for j in range(n)
    ]
    order = sorted(range(n), key=lambda j: len(candidates[j]))
    assignment = [0] * n
    used = [False] * n

    def backtrack(pos: int) -> bool:
        if pos == n:
            mapped = frozenset(
                frozenset(assignment[x - 1] for x in s) for s in source
            )
            return mapped == target
        j = order[pos]
        for i in candidates[j]:
            if used[i]:
                continue
            used[i] = True
            assignment[j] = i + 1
            if backtrack(pos + 1):
                return True
            used[i] = False
        return False

    if backtrack(0):
        return tuple(assignment)
    return None


def classify_with_relabeling(
    w: WeightData,
) -> tuple[FamilySpec, tuple[int, ...]] | None:
    """The family member chamber-equivalent to w, with the slot map.

    Two passes over the family grid: first positional fine equivalence
    (slot j against slot j), then fine equivalence up to relabeling.
    A datum matching one family positionally and an earlier one only up
    to relabeling is reported under the positional match, so canonical
    representatives always classify as themselves.  The returned
    permutation maps representative slots to slots of w (identity for
    positional matches).
    """
    if w.genus != 0:
        raise ValueError("classification is defined for genus 0 only")
    require_valid(w)
    n = w.n
    sig_w = chamber_signature(w)
    specs = list(family_grid(n))
    reps = [chamber_signature(representative_weights(spec)) for spec in specs]
    for spec, sig_rep in zip(specs, reps):
        if sig_rep == sig_w:
            return spec, tuple(range(1, n + 1))
    for spec, sig_rep in zip(specs, reps):
        sigma = signature_relabeling(sig_w, sig_rep, n)
        if sigma is not None:
            return spec, sigma
    return None


def classify(w: WeightData) -> FamilySpec | None:
    """The unique family member whose representative is fine-equivalent
    to w (positionally or after slot relabeling), or None."""
    found = classify_with_relabeling(w)
    return None if found is None else found[0]


# ---------------------------------------------------------------------------
# The factors-through-a-point predicate
# ---------------------------------------------------------------------------


def _kapranov_point_target(n: int, unit_slot: int) -> WeightData:
    """The minimal Kapranov datum (projective space) with the full weight
    at the given slot."""
    light = Fraction(1, n - 2)
    weights = tuple(
        ONE if i == unit_slot else light for i in range(1, n + 1)
    )
    return WeightData(0, weights)


def factors_kapranov(w: WeightData) -> bool:
    """Whether w's space sits on a chain from the n-pointed space down to
    projective space: some slot i admits reduction morphisms
    classical -> w -> (full weight at i, all others light).

    Both reduction checks range over whole coarse chambers, so the
    answer depends only on the coarse chamber of w and is in particular
    invariant under fine equivalence.
    """
    if w.genus != 0:
        raise ValueError("the factorization predicate is defined for genus 0")
    if w.n < 5:
        raise ValueError(f"needs at least five markings, got {w.n}")
    require_valid(w)
    n = w.n
    classical = WeightData(0, (ONE,) * n)
    if chamber_reduction_exists(classical, w, "coarse") is None:
        return False
    for slot in range(1, n + 1):
        target = _kapranov_point_target(n, slot)
        if chamber_reduction_exists(w, target, "coarse") is not None:
            return True
    return False


# ---------------------------------------------------------------------------
# Blow-up schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlowupStep:
    """One step: its 1-based index and the ordered list of centers.

    A center is either a tuple of point labels (the span of those
    points) or a single text label naming a locus.
    """

    index: int
    centers: tuple[tuple[str, ...] | str, ...]


@dataclass(frozen=True)
class BlowupSchedule:
    construction: str
    n: int
    ambient: str
    steps: tuple[BlowupStep, ...]

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEDULE_SCHEMA,
            "construction": self.construction,
            "n": self.n,
            "ambient": self.ambient,
            "steps": [
                {
                    "step": step.index,
                    "centers": [
                        c if isinstance(c, str) else list(c)
                        for c in step.centers
                    ],
                }
                for step in self.steps
            ],
        }


def _labels(indices) -> tuple[str, ...]:
    return tuple(f"p{i}" for i in sorted(indices))


def _kblu_steps(n: int) -> tuple[BlowupStep, ...]:
    steps: list[BlowupStep] = []
    first: list[tuple[str, ...]] = []
    for size in range(1, n - 3):
        for subset in combinations(range(1, n - 1), size):
            first.append(_labels(subset))
    steps.append(BlowupStep(1, tuple(first)))
    for r in range(2, n - 2):
        chain = tuple(range(n - r + 1, n))
        centers: list[tuple[str, ...]] = []
        for extra in range(0, n - 2 - r):
            for subset in combinations(range(1, n - r), extra):
                centers.append(_labels(chain + subset))
        steps.append(BlowupStep(r, tuple(centers)))
    return tuple(steps)


def _kblusym_steps(n: int) -> tuple[BlowupStep, ...]:
    steps = []
    for k in range(1, n - 3):
        centers = tuple(
            _labels(subset) for subset in combinations(range(1, n), k)
        )
        steps.append(BlowupStep(k, centers))
    return tuple(steps)


def _con2_steps(n: int) -> tuple[BlowupStep, ...]:
    steps = []
    for h in range(1, 2 * n - 8):
        if h <= n - 4:
            locus = f"Δ_{h} ∩ (F_0∪F_1∪F_∞)"
        else:
            locus = f"Δ_{h - n + 4}"
        steps.append(BlowupStep(h, (locus,)))
    return tuple(steps)


def blowup_schedule(construction: str, n: int) -> BlowupSchedule:
    """The ordered centers of one of the three constructions.

    Within every step, point-span centers are listed smallest first
    (points, then lines, then planes), lexicographically within a size,
    so the order refines inclusion.
    """
    if n < 5:
        raise ValueError(f"blow-up schedules need n >= 5, got {n}")
    if construction == "kblu":
        return BlowupSchedule("kblu", n, "P^{n-3}", _kblu_steps(n))
    if construction == "kblusym":
        return BlowupSchedule("kblusym", n, "P^{n-3}", _kblusym_steps(n))
    if construction == "con2":
        return BlowupSchedule("con2", n, "(P^1)^{n-3}", _con2_steps(n))
    raise ValueError(
        f"unknown construction {construction!r}; expected one of {CONSTRUCTIONS}"
    )


# ---------------------------------------------------------------------------
# Machine verification of the Keel-to-Kapranov reduction chain
# ---------------------------------------------------------------------------


def verify_keel_factorization(n: int) -> dict:
    """Check that every late Keel member reduces onto the two-full-weight
    Kapranov space, and that the exchange member h = n - 3 is fine-
    equivalent (up to slot relabeling) to the Kapranov member (2, 2).

    For each h from n - 4 through 2n - 9 the check searches whole coarse
    chambers on both sides for a pointwise-dominating pair, then
    re-validates the witness pair by direct substitution: coarse
    signatures must match the inputs and the domination must hold
    slotwise.  Returns a report dict; never raises on a failed check.
    """
    if n < 5:
        raise ValueError(f"verification needs n >= 5, got {n}")
    light = Fraction(1, n - 3)
    target = WeightData(0, (ONE, ONE) + (light,) * (n - 2))
    lo, hi = n - 4, 2 * n - 9
    checks: list[dict] = []
    all_pass = True
    for h in range(lo, hi + 1):
        rep = representative_weights(keel_spec(h, n))
        pair = chamber_reduction_exists(rep, target, "coarse")
        entry: dict = {"h": h, "reduces": pair is not None}
        if pair is not None:
            x, y = pair
            revalidated = (
                coarse_equivalent_genus0(x, rep)
                and coarse_equivalent_genus0(y, target)
                and reduction_exists(x, y)
            )
            entry["witness_source"] = [str(q) for q in x.weights]
            entry["witness_target"] = [str(q) for q in y.weights]
            entry["revalidated"] = revalidated
            all_pass = all_pass and revalidated
        else:
            all_pass = False
        if h == n - 3:
            sigma = signature_relabeling(
                chamber_signature(rep),
                chamber_signature(kapranov_weights(2, 2, n)),
                n,
            )
            entry["fine_equivalent_to_kapranov_2_2"] = sigma is not None
            if sigma is not None:
                entry["relabeling"] = list(sigma)
            all_pass = all_pass and sigma is not None
        checks.append(entry)
    report = {
        "n": n,
        "family": "keel",
        "target": [str(q) for q in target.weights],
        "range": [lo, hi],
        "checks": checks,
        "all_pass": all_pass,
    }
    if hi == lo:
        report["note"] = (
            "empty second phase: the exchange point h = n - 3 lies outside "
            "0..2n-9, so only h = n - 4 is checked"
        )
    return report
