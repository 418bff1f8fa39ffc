import pytest
from hypothesis import given, settings

from fuzzyvprs.approximation import (
    Kind,
    Phase,
    estimate_value_lower,
    estimate_value_upper,
    lower_approximation,
    plausibility_of_class,
    resolve_uncertain,
    run_imputation_pipeline,
    upper_approximation,
)
from fuzzyvprs.dataset import ClassPartition, FuzzyObject, RawObject, fuzzify_dataset, partition_by_class
from fuzzyvprs.errors import ConfigError, NoCertainDonor
from fuzzyvprs.membership import FuzzyValue
from fuzzyvprs.partitions import (
    IncompleteEquivalenceClass,
    RegionCombination,
    Tag,
    TaggedMember,
    build_classes,
    elementary_sets,
)
from strategies import complete_datasets, incomplete_datasets, shoulder_mfs

X_L = ClassPartition("L", frozenset({4, 7}))
X_N = ClassPartition("N", frozenset({1, 3}))
X_H = ClassPartition("H", frozenset({2, 5, 6}))


def _shown(approx):
    return [
        ({(m.obj_id, m.tag.value) for m in approx.shown_members(eq)}, eq.mu)
        for eq in approx.entries
    ]


@pytest.fixture
def sp(fuzzy_objects, mfs):
    return elementary_sets(fuzzy_objects, "SP", mfs.regions("SP"))


@pytest.fixture
def dp(fuzzy_objects, mfs):
    return elementary_sets(fuzzy_objects, "DP", mfs.regions("DP"))


def test_lower_before_imputation(sp, dp):
    assert _shown(lower_approximation(sp, X_H)) == [({(2, "c"), (6, "c"), (5, "u")}, 0.5)]
    assert lower_approximation(dp, X_H).entries == ()
    assert _shown(lower_approximation(sp, X_L)) == [({(4, "c"), (7, "c")}, 0.5)]
    assert _shown(lower_approximation(dp, X_L)) == [({(4, "c"), (7, "u")}, 1.0)]
    assert lower_approximation(sp, X_N).entries == ()
    assert lower_approximation(dp, X_N).entries == ()


def test_upper_after_imputation(raw_objects, mfs):
    result = run_imputation_pipeline(raw_objects, mfs=mfs)
    upper = upper_approximation(result.classes[("SP",)], X_N)
    assert upper.kind is Kind.UPPER
    assert [eq.combination.regions for eq in upper.entries] == [("N",)]
    assert upper.entries[0].certain_ids == {1, 2, 3, 5, 6, 7}


def test_upper_empty_when_target_is_everything(sp):
    everything = ClassPartition("all", frozenset(range(1, 8)))
    assert upper_approximation(sp, everything).entries == ()


@settings(max_examples=150, deadline=None)
@given(complete_datasets())
def test_approximations_match_set_definitions(data):
    objects, regions = data
    attrs = objects[0].attributes
    for subset in [attrs[:1], attrs]:
        classes = build_classes(objects, subset, regions)
        for part in partition_by_class(objects):
            x = set(part.ids)
            lower = lower_approximation(classes, part)
            upper = upper_approximation(classes, part)
            want_lower = [eq for eq in classes if set(eq.certain_ids) and set(eq.certain_ids) <= x]
            want_upper = [eq for eq in classes if set(eq.certain_ids) & x and not set(eq.certain_ids) <= x]
            assert list(lower.entries) == want_lower
            assert list(upper.entries) == want_upper
            assert not {e.combination for e in lower.entries} & {e.combination for e in upper.entries}


def _objects(values, degrees, labels, attr="A"):
    """Build fuzzy objects with one attribute and the same region R for all."""
    out = []
    for i, (v, d, lab) in enumerate(zip(values, degrees, labels), start=1):
        terms = {attr: None if v is None else FuzzyValue({"R": d})}
        out.append(FuzzyObject(i, terms, lab, {attr: v}))
    return {o.id: o for o in out}


def _class(objects):
    members = tuple(
        TaggedMember(o.id, Tag.UNCERTAIN, 1.0) if o.terms["A"] is None
        else TaggedMember(o.id, Tag.CERTAIN, o.terms["A"]["R"])
        for o in objects.values()
    )
    return IncompleteEquivalenceClass(RegionCombination((("A", "R"),)), members)


def test_estimate_lower_worked_example(fuzzy_objects, raw_objects, sp, dp):
    objects = {o.id: o for o in raw_objects}
    h = next(eq for eq in sp if eq.combination.regions == ("H",))
    assert estimate_value_lower(5, "SP", h, objects) == 153.0
    low = next(eq for eq in dp if eq.combination.regions == ("L",))
    assert estimate_value_lower(7, "DP", low, objects) == 68.0


def test_estimate_single_donor():
    objects = _objects([42.5, None], [0.37, None], ["x", "x"])
    assert estimate_value_lower(2, "A", _class(objects), objects) == 42.5


def test_estimate_upper_restricts_donors():
    objects = _objects([10.0, 99.0, None], [0.5, 0.9, None], ["x", "y", "x"])
    part = ClassPartition("x", frozenset({1, 3}))
    assert estimate_value_upper(3, "A", _class(objects), part, objects) == 10.0
    objects = _objects([10.0, 20.0, None], [0.5, 0.5, None], ["x", "x", "x"])
    part = ClassPartition("x", frozenset({1, 2, 3}))
    assert estimate_value_upper(3, "A", _class(objects), part, objects) == 15.0


def test_estimate_upper_synthetic_hand_oracle():
    # class x = {1, 2, 4, 6}; donors in x with certain degree: 1 (20, .4), 2 (30, .6), 4 (50, .2)
    # (20*.4 + 30*.6 + 50*.2) / (.4 + .6 + .2) = 36 / 1.2 = 30
    objects = _objects([20.0, 30.0, 80.0, 50.0, 90.0, None],
                       [0.4, 0.6, 0.9, 0.2, 0.8, None],
                       ["x", "x", "y", "x", "y", "x"])
    part = ClassPartition("x", frozenset({1, 2, 4, 6}))
    assert estimate_value_upper(6, "A", _class(objects), part, objects) == pytest.approx(30.0)


def test_no_certain_donor():
    objects = _objects([None, None], [None, None], ["x", "x"])
    with pytest.raises(NoCertainDonor):
        estimate_value_lower(1, "A", _class(objects), objects)
    objects = _objects([5.0, None], [0.5, None], ["y", "x"])
    with pytest.raises(NoCertainDonor):
        estimate_value_upper(2, "A", _class(objects), ClassPartition("x", frozenset({2})), objects)


def test_plausibility():
    part = ClassPartition("N", frozenset({1, 3}))
    combo = RegionCombination((("A", "R"),))
    inside = IncompleteEquivalenceClass(combo, (TaggedMember(1, Tag.CERTAIN, 0.4), TaggedMember(3, Tag.CERTAIN, 0.2)))
    outside = IncompleteEquivalenceClass(combo, (TaggedMember(2, Tag.CERTAIN, 0.4),))
    mixed = IncompleteEquivalenceClass(combo, (TaggedMember(1, Tag.CERTAIN, 0.9), TaggedMember(6, Tag.CERTAIN, 0.3),
                                               TaggedMember(3, Tag.UNCERTAIN, 1.0)))
    assert plausibility_of_class(inside, part) == 1.0
    assert plausibility_of_class(outside, part) == 0.0
    assert plausibility_of_class(mixed, part) == pytest.approx(0.75)


def _eq(region, members):
    return IncompleteEquivalenceClass(
        RegionCombination((("A", region),)),
        tuple(TaggedMember(i, Tag.CERTAIN, d) for i, d in members) + (TaggedMember(9, Tag.UNCERTAIN, 1.0),),
    )


def test_resolve_uncertain_rules():
    part = ClassPartition("x", frozenset({1, 2, 3, 9}))
    a = _eq("R0", [(1, 0.8), (4, 0.2)])  # 0.8
    b = _eq("R1", [(2, 0.5), (5, 0.5)])  # 0.5
    assert resolve_uncertain(9, [b, a], part) is a
    c = _eq("R2", [(1, 0.5), (2, 0.5), (3, 0.5), (5, 0.5), (6, 0.5), (7, 0.5)])  # 0.5, 6 certain
    d = _eq("R3", [(2, 0.5), (5, 0.5)])  # 0.5, 2 certain
    assert resolve_uncertain(9, [d, c], part) is c
    e = _eq("R4", [(2, 0.5), (5, 0.5)])
    assert resolve_uncertain(9, [d, e], part) is d
    assert resolve_uncertain(9, [e, d], part) is e


def test_pipeline_worked_example(raw_objects, mfs):
    result = run_imputation_pipeline(raw_objects, mfs=mfs)
    recs = [(r.obj_id, r.attribute, r.value, r.phase, str(r.source)) for r in result.records]
    assert recs == [(5, "SP", 153.0, Phase.LOWER_PASS, "SP=H"), (7, "DP", 68.0, Phase.LOWER_PASS, "DP=L")]
    objs = {o.id: o for o in result.objects}
    assert dict(objs[5].terms["SP"]) == {"N": pytest.approx(0.2), "H": pytest.approx(0.65)}
    assert dict(objs[7].terms["DP"]) == {"L": 1.0}
    assert result.unresolved == {}
    for classes in result.classes.values():
        assert all(m.certain for eq in classes for m in eq.members)


def test_pipeline_prefuzzified_recovers_donors(fuzzy_objects, mfs):
    result = run_imputation_pipeline(fuzzy_objects, mfs=mfs)
    values = {(r.obj_id, r.attribute): r.value for r in result.records}
    assert values[(5, "SP")] == pytest.approx(153.0, abs=1e-9)
    assert values[(7, "DP")] == pytest.approx(68.0, abs=1e-9)


def test_pipeline_complete_is_identity():
    mfs = shoulder_mfs(("A", "B"), 3)
    raw = [RawObject(i, {"A": float(10 * i), "B": float(90 - 7 * i)}, "xy"[i % 2]) for i in range(1, 6)]
    objects = fuzzify_dataset(raw, mfs)
    result = run_imputation_pipeline(objects, mfs=mfs)
    assert result.records == [] and result.objects == objects and result.passes == 1


def test_pipeline_requires_mfs_for_missing(fuzzy_objects):
    with pytest.raises(ConfigError):
        run_imputation_pipeline(fuzzy_objects)


def test_unresolved_object_without_donors():
    mfs = shoulder_mfs(("A", "B"), 2)
    raw = [RawObject(1, {"A": 10.0, "B": 20.0}, "x"), RawObject(2, {"A": 80.0, "B": 70.0}, "x"),
           RawObject(3, {"A": None, "B": None}, "lonely")]
    result = run_imputation_pipeline(fuzzify_dataset(raw, mfs), mfs=mfs)
    assert result.unresolved == {3: ("A", "B")}
    assert result.records == []


def test_upper_pass_uses_plausibility():
    # object 4 (class x) is missing A; regions R0 and R1 both hold x and y objects,
    # so only the upper pass can place it; R0 has the larger in-class share
    mfs = shoulder_mfs(("A", "B"), 2)
    raw = [
        RawObject(1, {"A": 0.0, "B": 0.0}, "x"),
        RawObject(2, {"A": 10.0, "B": 0.0}, "y"),
        RawObject(3, {"A": 100.0, "B": 0.0}, "y"),
        RawObject(4, {"A": None, "B": 0.0}, "x"),
        RawObject(5, {"A": 90.0, "B": 0.0}, "x"),
    ]
    result = run_imputation_pipeline(fuzzify_dataset(raw, mfs), mfs=mfs)
    (rec,) = result.records
    assert rec.phase is Phase.UPPER_PASS and rec.obj_id == 4
    # R0 plausibility for x: (1.0 + 0.1) / (1.0 + 0.9 + 0.1) = 0.55 ; R1: (0.9) / (0.1 + 1.0 + 0.9) = 0.45
    assert str(rec.source) == "A=R0"
    # in-class donors of R0: object 1 (0, 1.0) and object 5 (90, 0.1)
    assert rec.value == pytest.approx((0 * 1.0 + 90 * 0.1) / 1.1)


@settings(max_examples=200, deadline=None)
@given(incomplete_datasets())
def test_pipeline_properties(data):
    objects, mfs = data
    result = run_imputation_pipeline(objects, mfs=mfs)
    missing = sum(len(o.missing_attributes()) for o in objects)
    assert result.passes <= missing + 1
    for rec in result.records:
        assert min(rec.donor_values) - 1e-9 <= rec.value <= max(rec.donor_values) + 1e-9
    # backtracking is a full rebuild: recomputing from the final objects gives the same classes
    for subset, classes in result.classes.items():
        assert build_classes(result.objects, subset, result.regions) == classes
    still = {o.id: o.missing_attributes() for o in result.objects if o.missing_attributes()}
    assert still == result.unresolved
    assert [(o.id, o.class_label) for o in result.objects] == [(o.id, o.class_label) for o in objects]
