"""Fuzzy incomplete lower/upper approximations and interleaved missing-value estimation.

The imputation pipeline alternates between a pass over lower approximations
and a pass over upper approximations.  After every accepted estimate all
classes and approximations are rebuilt from scratch and scanning restarts at
the smallest attribute subset, so the result never depends on stale state.
"""

from __future__ import annotations

import enum
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace

from .dataset import ClassPartition, FuzzyObject, attribute_regions, partition_by_class
from .errors import AllZeroMembership, ConfigError, NoCertainDonor
from .membership import MembershipFunctionSet, fuzzify, recover_value
from .partitions import (
    IncompleteEquivalenceClass,
    RegionCombination,
    TaggedMember,
    all_subsets,
    build_classes,
)

log = logging.getLogger(__name__)

EPS = 1e-12


class Kind(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


class Phase(enum.Enum):
    LOWER_PASS = "lower"
    UPPER_PASS = "upper"


@dataclass(frozen=True)
class Approximation:
    kind: Kind
    class_label: str
    subset: tuple[str, ...]
    target: frozenset[int]
    entries: tuple[IncompleteEquivalenceClass, ...]

    def __len__(self):
        return len(self.entries)

    def shown_members(self, eq: IncompleteEquivalenceClass) -> tuple[TaggedMember, ...]:
        """Certain members plus the uncertain members that belong to the target class."""
        return tuple(m for m in eq.members if m.certain or m.obj_id in self.target)

    def uncertain_placements(self) -> dict[int, list[IncompleteEquivalenceClass]]:
        """Uncertain target-class objects mapped to the entries they sit in."""
        out: dict[int, list[IncompleteEquivalenceClass]] = {}
        for eq in self.entries:
            for m in eq.members:
                if not m.certain and m.obj_id in self.target:
                    out.setdefault(m.obj_id, []).append(eq)
        return dict(sorted(out.items()))


@dataclass(frozen=True)
class ImputationRecord:
    obj_id: int
    attribute: str
    value: float
    source: RegionCombination
    phase: Phase
    donor_values: tuple[float, ...] = ()

    def log_line(self) -> str:
        return f"{self.obj_id},{self.attribute},{self.value!r},{self.phase.value},{self.source}"


def _subset_of(classes, subset):
    if subset is not None:
        return tuple(subset)
    return classes[0].combination.attributes if classes else ()


def lower_approximation(
    classes: Sequence[IncompleteEquivalenceClass], partition: ClassPartition, subset=None
) -> Approximation:
    x = partition.ids
    entries = tuple(
        eq for eq in classes
        if eq.certain_ids and eq.certain_ids <= x and eq.ids & x
    )
    return Approximation(Kind.LOWER, partition.class_label, _subset_of(classes, subset), x, entries)


def upper_approximation(
    classes: Sequence[IncompleteEquivalenceClass], partition: ClassPartition, subset=None
) -> Approximation:
    x = partition.ids
    entries = tuple(
        eq for eq in classes
        if eq.certain_ids & x and not eq.certain_ids <= x
    )
    return Approximation(Kind.UPPER, partition.class_label, _subset_of(classes, subset), x, entries)


def donor_value(obj: FuzzyObject, attribute: str, mfs: MembershipFunctionSet | None) -> float:
    """Crisp value of a donor, recovered from its degrees if only those are known."""
    v = obj.value(attribute)
    if v is not None:
        return v
    if mfs is None:
        raise ConfigError(f"object {obj.id}: crisp value of {attribute!r} unknown and no membership functions given")
    return recover_value(obj.terms[attribute], mfs[attribute])


def _donors(eq, attribute, objects, mfs, restrict=None):
    region = eq.combination.region_of(attribute)
    out = []
    for m in eq.certain_members:
        if restrict is not None and m.obj_id not in restrict:
            continue
        donor = objects[m.obj_id]
        f = donor.terms[attribute].degree(region)
        if f > 0.0:
            out.append((donor_value(donor, attribute, mfs), f))
    return out


def _weighted_mean(donors, obj_id, attribute):
    if not donors:
        raise NoCertainDonor(f"object {obj_id}: no certain donor for {attribute!r}")
    total = sum(f for _, f in donors)
    return sum(v * f for v, f in donors) / total


def estimate_value_lower(
    obj_id: int,
    attribute: str,
    eq: IncompleteEquivalenceClass,
    objects: Mapping[int, FuzzyObject],
    mfs: MembershipFunctionSet | None = None,
) -> float:
    """Membership-weighted mean of the certain members' values in the class's region."""
    return _weighted_mean(_donors(eq, attribute, objects, mfs), obj_id, attribute)


def estimate_value_upper(
    obj_id: int,
    attribute: str,
    eq: IncompleteEquivalenceClass,
    partition: ClassPartition,
    objects: Mapping[int, FuzzyObject],
    mfs: MembershipFunctionSet | None = None,
) -> float:
    """As `estimate_value_lower`, with donors restricted to the object's class."""
    return _weighted_mean(_donors(eq, attribute, objects, mfs, partition.ids), obj_id, attribute)


def plausibility_of_class(eq: IncompleteEquivalenceClass, partition: ClassPartition) -> float:
    certain = eq.certain_members
    total = sum(m.degree for m in certain)
    if total == 0.0:
        return 0.0
    return sum(m.degree for m in certain if m.obj_id in partition.ids) / total


def resolve_uncertain(
    obj_id: int, candidates: Sequence[IncompleteEquivalenceClass], partition: ClassPartition
) -> IncompleteEquivalenceClass:
    """Pick the class used to estimate an object placed in several upper entries.

    Highest plausibility wins; then the most certain members; remaining ties
    go to the first candidate, so callers pass candidates in canonical order.
    """
    best, best_key = None, None
    for eq in candidates:
        key = (plausibility_of_class(eq, partition), len(eq.certain_members))
        if best is None or key[0] > best_key[0] + EPS or (
            abs(key[0] - best_key[0]) <= EPS and key[1] > best_key[1]
        ):
            best, best_key = eq, key
    if best is None:
        raise ValueError(f"object {obj_id}: no candidate classes")
    return best


@dataclass
class PipelineResult:
    objects: list[FuzzyObject]
    records: list[ImputationRecord]
    unresolved: dict[int, tuple[str, ...]]
    regions: dict[str, tuple[str, ...]]
    partitions: list[ClassPartition]
    passes: int
    classes: dict[tuple[str, ...], list[IncompleteEquivalenceClass]] = field(default_factory=dict)


@dataclass(frozen=True)
class _Step:
    obj_id: int
    eq: IncompleteEquivalenceClass
    phase: Phase
    restrict: frozenset[int] | None


class _State:
    def __init__(self, objects, partitions, mfs, regions):
        self.objects = {o.id: o for o in objects}
        self.order = [o.id for o in objects]
        self.partitions = partitions
        self.mfs = mfs
        self.regions = regions
        self.attributes = objects[0].attributes if objects else ()

    def current(self):
        return [self.objects[i] for i in self.order]

    def classes(self, subset):
        return build_classes(self.current(), subset, self.regions)

    def missing_in(self, obj_id, subset):
        obj = self.objects[obj_id]
        return [a for a in subset if obj.is_missing(a)]

    def scan(self, phase):
        for subset in all_subsets(self.attributes):
            classes = self.classes(subset)
            for part in self.partitions:
                lower = lower_approximation(classes, part, subset)
                upper = upper_approximation(classes, part, subset)
                assert not set(map(id, lower.entries)) & set(map(id, upper.entries))
                approx = lower if phase is Phase.LOWER_PASS else upper
                for oid, eqs in approx.uncertain_placements().items():
                    if phase is Phase.LOWER_PASS:
                        # only an unambiguous placement is resolved here
                        if len(eqs) == 1:
                            return _Step(oid, eqs[0], phase, None)
                        continue
                    eq = eqs[0] if len(eqs) == 1 else resolve_uncertain(oid, eqs, part)
                    attrs = self.missing_in(oid, subset)
                    if all(_donors(eq, a, self.objects, self.mfs, part.ids) for a in attrs):
                        return _Step(oid, eq, phase, part.ids)
                    log.debug("object %s: no in-class donor in %s", oid, eq.combination)
        return None

    def apply(self, step):
        obj = self.objects[step.obj_id]
        terms, values = dict(obj.terms), dict(obj.values)
        records = []
        for attr in self.missing_in(step.obj_id, step.eq.combination.attributes):
            donors = _donors(step.eq, attr, self.objects, self.mfs, step.restrict)
            v = _weighted_mean(donors, step.obj_id, attr)
            try:
                terms[attr] = fuzzify(v, self.mfs[attr], attr)
            except AllZeroMembership as exc:
                raise AllZeroMembership(attr, v, object_id=step.obj_id) from exc
            values[attr] = v
            records.append(ImputationRecord(step.obj_id, attr, v, step.eq.combination, step.phase,
                                            tuple(d for d, _ in donors)))
            log.debug("object %s: %s := %r (%s pass, %s)", step.obj_id, attr, v,
                      step.phase.value, step.eq.combination)
        self.objects[step.obj_id] = replace(obj, terms=terms, values=values)
        return records


def run_imputation_pipeline(
    objects: Sequence[FuzzyObject],
    partitions: Sequence[ClassPartition] | None = None,
    mfs: MembershipFunctionSet | None = None,
    regions: Mapping[str, Sequence[str]] | None = None,
) -> PipelineResult:
    """Estimate missing values while building approximations.

    Values that cannot be estimated stay missing and are listed in
    ``PipelineResult.unresolved``; their placements never count as certain.
    """
    objects = list(objects)
    if partitions is None:
        partitions = partition_by_class(objects)
    if regions is None:
        regions = attribute_regions(objects, mfs)
    regions = {a: tuple(r) for a, r in regions.items()}
    missing = sum(len(o.missing_attributes()) for o in objects)
    if missing and mfs is None:
        raise ConfigError("imputing missing values requires membership functions")

    state = _State(objects, list(partitions), mfs, regions)
    records: list[ImputationRecord] = []
    passes = 0
    while True:
        passes += 1
        step = state.scan(Phase.LOWER_PASS) or state.scan(Phase.UPPER_PASS)
        if step is None:
            break
        records.extend(state.apply(step))

    final = state.current()
    unresolved = {o.id: o.missing_attributes() for o in final if o.missing_attributes()}
    if unresolved:
        log.warning("%d object(s) keep missing values after imputation", len(unresolved))
    classes = {b: build_classes(final, b, regions) for b in all_subsets(state.attributes)}
    return PipelineResult(final, records, unresolved, regions, list(partitions), passes, classes)
