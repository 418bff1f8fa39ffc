"""Beta-approximations, certain/possible rule derivation, pruning and classification."""

from __future__ import annotations

import csv
import enum
import io
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .dataset import ClassPartition, FuzzyObject
from .errors import EmptyClass, InvalidBeta, NoMatch, ParseError
from .partitions import IncompleteEquivalenceClass, RegionCombination, all_subsets, build_classes

# tolerance for threshold and dominance comparisons on accumulated float sums
EPS = 1e-9


class RuleKind(enum.Enum):
    CERTAIN = "certain"
    POSSIBLE = "possible"


@dataclass(frozen=True)
class FuzzyRule:
    kind: RuleKind
    conditions: RegionCombination
    consequent: str
    plausibility: float
    effectiveness: float

    @property
    def key(self):
        return (self.kind, self.conditions, self.consequent)

    def text(self, class_name: str = "class") -> str:
        conds = " AND ".join(f"{a} = {r}" for a, r in self.conditions.pairs)
        return (f"IF {conds} THEN {class_name} = {self.consequent} [{self.kind.value}] "
                f"plausibility={self.plausibility:.2f} effectiveness={self.effectiveness:.2f}")


class BetaEntry(NamedTuple):
    eq: IncompleteEquivalenceClass
    mu: float
    misclassification: float


def validate_beta(beta: float) -> float:
    beta = float(beta)
    if not 0.0 <= beta < 0.5:
        raise InvalidBeta(f"beta must lie in [0, 0.5), got {beta}")
    return beta


def misclassification(eq: IncompleteEquivalenceClass, partition: ClassPartition) -> float:
    """One minus the membership-weighted share of the class inside the partition.

    Only certain members count, so leftover uncertain placements are ignored.
    """
    if not eq.members:
        raise EmptyClass(f"class {eq.combination} has no members")
    certain = eq.certain_members
    if not certain:
        raise EmptyClass(f"class {eq.combination} has no certain members")
    total = sum(m.degree for m in certain)
    inside = sum(m.degree for m in certain if m.obj_id in partition.ids)
    return 1.0 - inside / total


def _scored(classes, partition):
    for eq in classes:
        if eq.certain_members:
            yield eq, misclassification(eq, partition)


def beta_lower(classes: Sequence[IncompleteEquivalenceClass], partition: ClassPartition, beta: float) -> list[BetaEntry]:
    beta = validate_beta(beta)
    return [BetaEntry(eq, eq.mu, c) for eq, c in _scored(classes, partition) if c <= beta + EPS]


def beta_upper(classes: Sequence[IncompleteEquivalenceClass], partition: ClassPartition, beta: float) -> list[BetaEntry]:
    beta = validate_beta(beta)
    return [
        BetaEntry(eq, eq.mu, c) for eq, c in _scored(classes, partition)
        if beta + EPS < c <= 1.0 - beta + EPS
    ]


def derive_rules(lower: Sequence[BetaEntry], upper: Sequence[BetaEntry], partition: ClassPartition) -> list[FuzzyRule]:
    rules = [FuzzyRule(RuleKind.CERTAIN, e.eq.combination, partition.class_label, 1.0 - e.misclassification, e.mu)
             for e in lower]
    rules += [FuzzyRule(RuleKind.POSSIBLE, e.eq.combination, partition.class_label, 1.0 - e.misclassification, e.mu)
              for e in upper]
    return rules


def is_more_specific(r1: FuzzyRule, r2: FuzzyRule) -> bool:
    return r1.consequent == r2.consequent and r1.conditions.as_set() > r2.conditions.as_set()


def _dominates(general: FuzzyRule, rule: FuzzyRule, both_measures: bool) -> bool:
    if not is_more_specific(rule, general):
        return False
    if general.effectiveness < rule.effectiveness - EPS:
        return False
    return not both_measures or general.plausibility >= rule.plausibility - EPS


def prune(rules: Sequence[FuzzyRule], possible_against_certain: bool = False) -> list[FuzzyRule]:
    """Keep only maximally general rules.

    A certain rule goes when a more general certain rule has at least its
    effectiveness.  A possible rule goes when a more general possible rule has
    at least its effectiveness and plausibility; with
    ``possible_against_certain`` certain rules may also remove it.
    """
    certain = [r for r in rules if r.kind is RuleKind.CERTAIN]
    possible = [r for r in rules if r.kind is RuleKind.POSSIBLE]
    judges = possible + certain if possible_against_certain else possible
    kept = []
    for r in rules:
        if r.kind is RuleKind.CERTAIN:
            removed = any(_dominates(g, r, False) for g in certain if g is not r)
        else:
            removed = any(_dominates(g, r, True) for g in judges if g is not r)
        if not removed:
            kept.append(r)
    return kept


def mine_rules(
    objects: Sequence[FuzzyObject],
    partitions: Sequence[ClassPartition],
    regions: Mapping[str, Sequence[str]],
    beta: float,
    *,
    pruned: bool = True,
    possible_against_certain: bool = False,
) -> list[FuzzyRule]:
    """Derive rules for every class and attribute subset; certain rules come first."""
    beta = validate_beta(beta)
    attributes = objects[0].attributes if objects else ()
    classes = {b: build_classes(objects, b, regions) for b in all_subsets(attributes)}
    rules = []
    for part in partitions:
        for b in classes:
            rules += derive_rules(beta_lower(classes[b], part, beta), beta_upper(classes[b], part, beta), part)
    rules = sorted(rules, key=lambda r: r.kind is RuleKind.POSSIBLE)
    return prune(rules, possible_against_certain) if pruned else rules


def _match_degree(obj: FuzzyObject, rule: FuzzyRule) -> float:
    degrees = []
    for attr, region in rule.conditions.pairs:
        fv = obj.terms.get(attr)
        degrees.append(0.0 if fv is None else fv.degree(region))
    return min(degrees)


def classify(obj: FuzzyObject, rules: Sequence[FuzzyRule]) -> tuple[str, float]:
    """Predict a class from the best-scoring matching rule.

    Score is match degree times plausibility; possible rules are consulted
    only when no certain rule matches.  Ties go to higher effectiveness, then
    to the earlier rule.
    """
    for kind in (RuleKind.CERTAIN, RuleKind.POSSIBLE):
        best = None
        for pos, rule in enumerate(r for r in rules if r.kind is kind):
            match = _match_degree(obj, rule)
            if match <= 0.0:
                continue
            key = (match * rule.plausibility, rule.effectiveness, -pos)
            if best is None or key > best[0]:
                best = (key, rule)
        if best is not None:
            return best[1].consequent, best[0][0]
    raise NoMatch(f"object {obj.id} matches no rule")


RULES_CSV_HEADER = ["kind", "conditions", "consequent", "plausibility", "effectiveness"]


def format_rules_text(rules: Sequence[FuzzyRule], class_name: str) -> str:
    return "".join(r.text(class_name) + "\n" for r in rules)


def format_rules_csv(rules: Sequence[FuzzyRule]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RULES_CSV_HEADER)
    for r in rules:
        w.writerow([r.kind.value, str(r.conditions), r.consequent,
                    f"{r.plausibility:.6f}", f"{r.effectiveness:.6f}"])
    return buf.getvalue()


def parse_rules_csv(text: str) -> list[FuzzyRule]:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        return []
    if [c.strip() for c in rows[0]] != RULES_CSV_HEADER:
        raise ParseError("rules file header must be " + ",".join(RULES_CSV_HEADER), row=0)
    rules = []
    for rowno, row in enumerate(rows[1:], start=1):
        if len(row) != 5:
            raise ParseError("expected 5 fields", row=rowno)
        kind, conds, consequent, plaus, eff = (c.strip() for c in row)
        try:
            rules.append(FuzzyRule(RuleKind(kind), RegionCombination.parse(conds), consequent,
                                   float(plaus), float(eff)))
        except ValueError as exc:
            raise ParseError(f"bad rule: {exc}", row=rowno) from None
    return rules
