"""Loading incomplete quantitative datasets, class partitioning and fuzzification.

A missing attribute value is represented by ``None`` throughout the package.
"""

from __future__ import annotations

import csv
import io
import os
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .errors import AllZeroMembership, MissingClassLabel, ParseError, SchemaError
from .membership import FuzzyValue, MembershipFunctionSet, _parse_decimal, fuzzify

MISSING_MARKERS = ("*", "")


@dataclass(frozen=True)
class RawObject:
    id: int
    values: Mapping[str, float | None]
    class_label: str

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(self.values)


@dataclass(frozen=True)
class FuzzyObject:
    """An object after fuzzification.

    ``terms`` holds a FuzzyValue per attribute, or None when missing.
    ``values`` keeps the crisp values where known; it is None for every cell
    of a pre-fuzzified table and for missing cells.
    """

    id: int
    terms: Mapping[str, FuzzyValue | None]
    class_label: str | None
    values: Mapping[str, float | None] = field(default_factory=dict)

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(self.terms)

    def is_missing(self, attribute: str) -> bool:
        return self.terms[attribute] is None

    def missing_attributes(self) -> tuple[str, ...]:
        return tuple(a for a, t in self.terms.items() if t is None)

    def value(self, attribute: str) -> float | None:
        return self.values.get(attribute)


@dataclass(frozen=True)
class ClassPartition:
    class_label: str
    ids: frozenset[int]

    def __contains__(self, obj_id) -> bool:
        return obj_id in self.ids

    def __len__(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class Table:
    """A loaded dataset together with its header."""

    attributes: tuple[str, ...]
    class_name: str
    objects: tuple


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8", newline="") as fh:
            return fh.read()
    text = source.read()
    return text.decode("utf-8") if isinstance(text, bytes) else text


def _read_rows(source, class_column):
    rows = [r for r in csv.reader(io.StringIO(_open_text(source))) if any(c.strip() for c in r)]
    if not rows:
        raise SchemaError("no header row")
    header = [c.strip() for c in rows[0]]
    if class_column is None:
        class_idx = len(header) - 1
    elif class_column in header:
        class_idx = header.index(class_column)
    else:
        raise SchemaError(f"class column {class_column!r} not in header")
    attributes = tuple(h for i, h in enumerate(header) if i != class_idx)
    if not attributes:
        raise SchemaError("dataset needs at least one attribute column")
    if len(set(header)) != len(header):
        raise SchemaError("duplicate column names in header")
    body = []
    for rowno, row in enumerate(rows[1:], start=1):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, got {len(row)}", row=rowno)
        cells = [c.strip() for c in row]
        body.append((rowno, cells[class_idx], [c for i, c in enumerate(cells) if i != class_idx]))
    return attributes, header[class_idx], body


def _class_label(cell, rowno, class_name, require_class):
    if cell in MISSING_MARKERS:
        if require_class:
            raise MissingClassLabel("class label is missing", row=rowno, column=class_name)
        return None
    return cell


def load_table(source, class_column: str | None = None, require_class: bool = True) -> Table:
    """Read a raw quantitative CSV; ids follow row order starting at 1."""
    attributes, class_name, body = _read_rows(source, class_column)
    objects = []
    for rowno, label, cells in body:
        values = {}
        for attr, cell in zip(attributes, cells):
            if cell in MISSING_MARKERS:
                values[attr] = None
                continue
            try:
                values[attr] = _parse_decimal(cell)
            except ValueError:
                raise ParseError(f"not a decimal number: {cell!r}", row=rowno, column=attr) from None
        objects.append(RawObject(rowno, values, _class_label(label, rowno, class_name, require_class)))
    return Table(attributes, class_name, tuple(objects))


def load_dataset(source, class_column: str | None = None) -> list[RawObject]:
    return list(load_table(source, class_column).objects)


def parse_fuzzy_cell(cell: str) -> FuzzyValue:
    """Parse ``N:0.1+H:0.75``."""
    terms = []
    for part in cell.split("+"):
        label, sep, degree = part.partition(":")
        if not sep or not label.strip():
            raise ValueError(part)
        terms.append((label.strip(), _parse_decimal(degree)))
    return FuzzyValue(terms)


def load_prefuzzified_table(source, class_column: str | None = None, require_class: bool = True) -> Table:
    """Read a table whose cells are fuzzy sets written as ``region:degree`` pairs."""
    attributes, class_name, body = _read_rows(source, class_column)
    objects = []
    for rowno, label, cells in body:
        terms = {}
        for attr, cell in zip(attributes, cells):
            if cell in MISSING_MARKERS:
                terms[attr] = None
                continue
            try:
                fv = parse_fuzzy_cell(cell)
            except ValueError:
                raise ParseError(f"not a fuzzy set: {cell!r}", row=rowno, column=attr) from None
            if not fv:
                raise AllZeroMembership(attr, cell, object_id=rowno)
            terms[attr] = fv
        objects.append(
            FuzzyObject(rowno, terms, _class_label(label, rowno, class_name, require_class),
                        {a: None for a in attributes})
        )
    return Table(attributes, class_name, tuple(objects))


def partition_by_class(objects: Sequence) -> list[ClassPartition]:
    """Group object ids by class label, in order of first appearance."""
    groups: dict[str, set[int]] = {}
    for obj in objects:
        groups.setdefault(obj.class_label, set()).add(obj.id)
    return [ClassPartition(label, frozenset(ids)) for label, ids in groups.items()]


def fuzzify_object(obj: RawObject, mfs: MembershipFunctionSet) -> FuzzyObject:
    terms = {}
    for attr, v in obj.values.items():
        if v is None:
            terms[attr] = None
            continue
        try:
            terms[attr] = fuzzify(v, mfs[attr], attr)
        except AllZeroMembership as exc:
            raise AllZeroMembership(attr, v, object_id=obj.id) from exc
    return FuzzyObject(obj.id, terms, obj.class_label, dict(obj.values))


def fuzzify_dataset(objects: Sequence[RawObject], mfs: MembershipFunctionSet) -> list[FuzzyObject]:
    return [fuzzify_object(obj, mfs) for obj in objects]


def attribute_regions(
    objects: Sequence[FuzzyObject], mfs: MembershipFunctionSet | None = None
) -> dict[str, tuple[str, ...]]:
    """Region labels per attribute, in membership-function order when known.

    Without membership functions the order of first appearance in the data is used.
    """
    if not objects:
        return {}
    attributes = objects[0].attributes
    out = {}
    for attr in attributes:
        if mfs is not None and attr in mfs:
            out[attr] = mfs.regions(attr)
            unknown = {r for o in objects if o.terms[attr] for r in o.terms[attr]} - set(out[attr])
            if unknown:
                raise SchemaError(f"attribute {attr!r} uses regions {sorted(unknown)} "
                                  "that have no membership function")
        else:
            seen: dict[str, None] = {}
            for o in objects:
                for r in o.terms[attr] or ():
                    seen.setdefault(r)
            out[attr] = tuple(seen)
    return out


def format_number(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def write_table(objects: Sequence[FuzzyObject], attributes: Sequence[str], class_name: str,
                fh, prefuzzified: bool = False) -> None:
    """Write objects as raw CSV (crisp values) or pre-fuzzified CSV (degrees)."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow([*attributes, class_name])
    for obj in objects:
        row = []
        for attr in attributes:
            if prefuzzified:
                fv = obj.terms[attr]
                row.append("*" if fv is None else "+".join(f"{r}:{d!r}" for r, d in fv.items()))
            else:
                v = obj.value(attr)
                row.append("*" if v is None else format_number(v))
        row.append("*" if obj.class_label is None else obj.class_label)
        w.writerow(row)
