"""Fuzzy incomplete equivalence classes over single attributes and attribute subsets."""

from __future__ import annotations

import enum
import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .dataset import FuzzyObject


class Tag(enum.Enum):
    CERTAIN = "c"
    UNCERTAIN = "u"


@dataclass(frozen=True, order=True)
class RegionCombination:
    pairs: tuple[tuple[str, str], ...]

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.pairs)

    @property
    def regions(self) -> tuple[str, ...]:
        return tuple(r for _, r in self.pairs)

    def region_of(self, attribute: str) -> str:
        return dict(self.pairs)[attribute]

    def as_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.pairs)

    def __str__(self):
        return "&".join(f"{a}={r}" for a, r in self.pairs)

    @classmethod
    def parse(cls, text: str) -> "RegionCombination":
        pairs = []
        for part in text.split("&"):
            attr, sep, region = part.partition("=")
            if not sep or not attr.strip() or not region.strip():
                raise ValueError(f"bad condition {part!r}")
            pairs.append((attr.strip(), region.strip()))
        return cls(tuple(pairs))


@dataclass(frozen=True)
class TaggedMember:
    """Object placed in a class; uncertain members carry degree 1.0 until imputed."""

    obj_id: int
    tag: Tag
    degree: float

    @property
    def certain(self) -> bool:
        return self.tag is Tag.CERTAIN


@dataclass(frozen=True)
class IncompleteEquivalenceClass:
    combination: RegionCombination
    members: tuple[TaggedMember, ...]

    @property
    def certain_members(self) -> tuple[TaggedMember, ...]:
        return tuple(m for m in self.members if m.certain)

    @property
    def certain_ids(self) -> frozenset[int]:
        return frozenset(m.obj_id for m in self.members if m.certain)

    @property
    def uncertain_ids(self) -> frozenset[int]:
        return frozenset(m.obj_id for m in self.members if not m.certain)

    @property
    def ids(self) -> frozenset[int]:
        return frozenset(m.obj_id for m in self.members)

    @property
    def mu(self) -> float | None:
        """Minimum degree over certain members; None when there are none."""
        degrees = [m.degree for m in self.members if m.certain]
        return min(degrees) if degrees else None

    def member(self, obj_id: int) -> TaggedMember | None:
        for m in self.members:
            if m.obj_id == obj_id:
                return m
        return None


def elementary_sets(
    objects: Sequence[FuzzyObject], attribute: str, regions: Sequence[str]
) -> list[IncompleteEquivalenceClass]:
    """Single-attribute classes, one per region that received any member."""
    buckets: dict[str, list[TaggedMember]] = {r: [] for r in regions}
    for obj in objects:
        fv = obj.terms[attribute]
        if fv is None:
            for r in regions:
                buckets[r].append(TaggedMember(obj.id, Tag.UNCERTAIN, 1.0))
        else:
            for r, d in fv.items():
                buckets[r].append(TaggedMember(obj.id, Tag.CERTAIN, d))
    return [
        IncompleteEquivalenceClass(RegionCombination(((attribute, r),)), tuple(ms))
        for r, ms in buckets.items()
        if ms
    ]


def combine(per_attribute: Sequence[Sequence[IncompleteEquivalenceClass]]) -> list[IncompleteEquivalenceClass]:
    """Intersect single-attribute classes into classes over the union of attributes.

    A member is certain only if it is certain in every component, and its
    degree is the minimum of its component degrees.
    """
    out = []
    for parts in itertools.product(*per_attribute):
        tables = [{m.obj_id: m for m in p.members} for p in parts]
        common = sorted(set.intersection(*(set(t) for t in tables)))
        if not common:
            continue
        members = []
        for oid in common:
            comps = [t[oid] for t in tables]
            tag = Tag.CERTAIN if all(c.certain for c in comps) else Tag.UNCERTAIN
            members.append(TaggedMember(oid, tag, min(c.degree for c in comps)))
        combo = RegionCombination(tuple(pair for p in parts for pair in p.combination.pairs))
        out.append(IncompleteEquivalenceClass(combo, tuple(members)))
    return out


def enumerate_subsets(attributes: Sequence[str], q: int) -> list[tuple[str, ...]]:
    if not 1 <= q <= len(attributes):
        raise ValueError(f"subset size {q} outside 1..{len(attributes)}")
    return list(itertools.combinations(attributes, q))


def all_subsets(attributes: Sequence[str]) -> list[tuple[str, ...]]:
    return [b for q in range(1, len(attributes) + 1) for b in enumerate_subsets(attributes, q)]


def build_classes(
    objects: Sequence[FuzzyObject], subset: Sequence[str], regions: Mapping[str, Sequence[str]]
) -> list[IncompleteEquivalenceClass]:
    """Classes for an attribute subset, rebuilt from scratch."""
    return combine([elementary_sets(objects, a, regions[a]) for a in subset])


def format_class(eq: IncompleteEquivalenceClass) -> str:
    mu = "none" if eq.mu is None else f"{eq.mu:.6f}"
    members = ",".join(f"{m.obj_id}:{m.tag.value}:{m.degree:.6f}" for m in eq.members)
    return (f"B={{{','.join(eq.combination.attributes)}}} R={{{','.join(eq.combination.regions)}}} "
            f"mu={mu} members=[{members}]")
