"""Piecewise-linear membership functions and fuzzification of quantitative values."""

from __future__ import annotations

import bisect
import io
import os
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass

from .errors import AllZeroMembership, ParseError


@dataclass(frozen=True)
class MembershipFunction:
    """One linguistic region of an attribute, given by (x, degree) breakpoints.

    Outside the breakpoint range the boundary degree is held constant, so a
    region whose first point has degree 1 is an open left shoulder.
    """

    region_label: str
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "points", tuple((float(x), float(y)) for x, y in self.points)
        )

    @property
    def xs(self) -> tuple[float, ...]:
        return tuple(p[0] for p in self.points)

    def problems(self) -> list[str]:
        out = []
        if len(self.points) < 2:
            out.append(f"region {self.region_label!r} needs at least 2 points")
        xs = self.xs
        if any(b <= a for a, b in zip(xs, xs[1:])):
            out.append(f"region {self.region_label!r} x values are not strictly increasing")
        if any(not 0.0 <= y <= 1.0 for _, y in self.points):
            out.append(f"region {self.region_label!r} has a degree outside [0, 1]")
        return out

    def __call__(self, x: float) -> float:
        return evaluate_membership(self, x)


def evaluate_membership(mf: MembershipFunction, x: float) -> float:
    pts = mf.points
    if x <= pts[0][0]:
        return pts[0][1]
    if x >= pts[-1][0]:
        return pts[-1][1]
    i = bisect.bisect_right(mf.xs, x)
    (x0, y0), (x1, y1) = pts[i - 1], pts[i]
    if x == x0:
        return y0
    # weighted form keeps the endpoint degrees exact
    t = (x - x0) / (x1 - x0)
    return y0 * (1.0 - t) + y1 * t


class FuzzyValue(Mapping):
    """Fuzzy set over the regions of one attribute; zero degrees are not stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[str, float] | Sequence[tuple[str, float]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        kept = {}
        for label, degree in items:
            degree = float(degree)
            if not 0.0 <= degree <= 1.0:
                raise ValueError(f"degree {degree} for region {label!r} outside [0, 1]")
            if label in kept:
                raise ValueError(f"region {label!r} given twice")
            if degree > 0.0:
                kept[label] = degree
        self._terms = kept

    def __getitem__(self, label: str) -> float:
        return self._terms[label]

    def __iter__(self) -> Iterator[str]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self, label: str) -> float:
        return self._terms.get(label, 0.0)

    def __eq__(self, other):
        if isinstance(other, FuzzyValue):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        return f"FuzzyValue({self._terms!r})"

    def __str__(self):
        return "+".join(f"{label}:{d:g}" for label, d in self._terms.items())


class MembershipFunctionSet(Mapping):
    """Ordered membership functions per attribute.

    Duplicate region labels are tolerated here so that `validate_mf_set`
    can report them; the engine assumes a validated set.
    """

    def __init__(self, functions: Mapping[str, Sequence[MembershipFunction]] = ()):
        items = functions.items() if isinstance(functions, Mapping) else functions
        self._functions = {attr: tuple(mfs) for attr, mfs in items}

    def __getitem__(self, attribute: str) -> tuple[MembershipFunction, ...]:
        return self._functions[attribute]

    def __iter__(self):
        return iter(self._functions)

    def __len__(self):
        return len(self._functions)

    def regions(self, attribute: str) -> tuple[str, ...]:
        return tuple(mf.region_label for mf in self._functions[attribute])

    def __repr__(self):
        return f"MembershipFunctionSet({self._functions!r})"


def fuzzify(value: float, attribute_mfs: Sequence[MembershipFunction], attribute: str = "?") -> FuzzyValue:
    if not attribute_mfs:
        raise ValueError(f"no membership functions for attribute {attribute!r}")
    fv = FuzzyValue((mf.region_label, evaluate_membership(mf, value)) for mf in attribute_mfs)
    if not fv:
        raise AllZeroMembership(attribute, value)
    return fv


def recover_value(fuzzy: Mapping[str, float], attribute_mfs: Sequence[MembershipFunction]) -> float:
    """Find the quantitative value whose fuzzification is closest to `fuzzy`.

    Used when only degrees were supplied (pre-fuzzified input) but a crisp
    donor value is needed. Minimises the squared degree error over each linear
    piece between the union of all breakpoints; ties resolve to the smallest x,
    and an open plateau resolves to its finite boundary.
    """
    breaks = sorted({x for mf in attribute_mfs for x in mf.xs})
    targets = [fuzzy.get(mf.region_label, 0.0) for mf in attribute_mfs]

    def residual(x):
        return sum((evaluate_membership(mf, x) - t) ** 2 for mf, t in zip(attribute_mfs, targets))

    candidates = [breaks[0], breaks[-1]]
    for a, b in zip(breaks, breaks[1:]):
        e = [evaluate_membership(mf, a) - t for mf, t in zip(attribute_mfs, targets)]
        g = [evaluate_membership(mf, b) - evaluate_membership(mf, a) for mf in attribute_mfs]
        gg = sum(v * v for v in g)
        u = 0.0 if gg == 0.0 else min(1.0, max(0.0, -sum(p * q for p, q in zip(e, g)) / gg))
        candidates.append(b if u == 1.0 else a + u * (b - a))
    best = min(residual(x) for x in candidates)
    return min(x for x in candidates if residual(x) <= best + 1e-12)


def validate_mf_set(mfs: MembershipFunctionSet, attributes: Sequence[str]) -> list[str]:
    """Return a list of problems; an empty list means the set is usable."""
    report = []
    for attr in attributes:
        if attr not in mfs or not mfs[attr]:
            report.append(f"missing membership functions for attribute {attr!r}")
    for attr in mfs:
        seen = set()
        for mf in mfs[attr]:
            if mf.region_label in seen:
                report.append(f"attribute {attr!r}: duplicate region {mf.region_label!r}")
            seen.add(mf.region_label)
            report.extend(f"attribute {attr!r}: {p}" for p in mf.problems())
    return report


def parse_mf_config(text: str) -> MembershipFunctionSet:
    """Parse ``attribute,region,x1:y1;x2:y2;...`` lines."""
    functions: dict[str, list[MembershipFunction]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 3 or not fields[0] or not fields[1]:
            raise ParseError("expected 'attribute,region,x:y;...'", row=lineno)
        attr, region, spec = fields
        points = []
        for pair in spec.split(";"):
            try:
                x, y = pair.split(":")
                points.append((_parse_decimal(x), _parse_decimal(y)))
            except ValueError:
                raise ParseError(f"bad point {pair!r}", row=lineno, column=region) from None
        functions.setdefault(attr, []).append(MembershipFunction(region, tuple(points)))
    return MembershipFunctionSet(functions)


def load_mf_config(source) -> MembershipFunctionSet:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8", newline="") as fh:
            return parse_mf_config(fh.read())
    text = source.read()
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return parse_mf_config(text)


def dump_mf_config(mfs: MembershipFunctionSet) -> str:
    buf = io.StringIO()
    for attr in mfs:
        for mf in mfs[attr]:
            pts = ";".join(f"{x:g}:{y:g}" for x, y in mf.points)
            buf.write(f"{attr},{mf.region_label},{pts}\n")
    return buf.getvalue()


def _parse_decimal(text: str) -> float:
    text = text.strip()
    # float() also accepts nan/inf/underscores, none of which are allowed
    if not text or any(c not in "0123456789.+-eE" for c in text):
        raise ValueError(text)
    return float(text)
