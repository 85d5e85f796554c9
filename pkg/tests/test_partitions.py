import pytest
from hypothesis import given, settings

from _oracles import brute_force_count, growth_oracle
from _strategies import solid_partitions
from dt4.errors import NotSU4, UnsupportedGroup
from dt4.exactalg import COEFF, LaurentPoly
from dt4.partitions import (
    GroupAction,
    SignRule,
    SolidPartition,
    character,
    color_counts,
    enumerate_colored,
    enumerate_solid_partitions,
    profiles,
    sign_exponent,
)

ORIGIN = (0, 0, 0, 0)


def sp(*boxes):
    return SolidPartition(boxes)


@pytest.fixture(scope="module")
def oracle_counts():
    return growth_oracle(8)


@pytest.mark.parametrize("n", range(5))
def test_counts_match_brute_force(n):
    assert sum(1 for _ in enumerate_solid_partitions(n)) == brute_force_count(n)


@pytest.mark.parametrize("n", range(9))
def test_counts_match_growth_oracle(n, oracle_counts):
    assert sum(1 for _ in enumerate_solid_partitions(n)) == oracle_counts[n]


def test_spec_counts():
    assert [sum(1 for _ in enumerate_solid_partitions(n)) for n in (0, 1, 2, 3, 6)] == [1, 1, 4, 10, 140]


def test_enumeration_is_canonical_and_valid():
    for n in range(6):
        parts = list(enumerate_solid_partitions(n))
        assert len({p.boxes for p in parts}) == len(parts)
        assert all(p.is_valid() and len(p) == n for p in parts)
        assert [p.boxes for p in parts] == sorted(p.boxes for p in parts)


def test_cache_round_trip(tmp_path):
    first = list(enumerate_solid_partitions(5, tmp_path))
    files = list(tmp_path.rglob("n5.txt"))
    assert files
    again = list(enumerate_solid_partitions(5, tmp_path))
    assert [p.boxes for p in again] == [p.boxes for p in first]


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("DT4_CACHE", str(tmp_path))
    list(enumerate_solid_partitions(3))
    assert list(tmp_path.rglob("n3.txt"))


def test_line_format():
    p = sp(ORIGIN, (1, 0, 0, 0))
    assert p.to_line() == "0,0,0,0;1,0,0,0"
    assert SolidPartition.from_line(p.to_line()) == p
    assert SolidPartition.from_line("") == sp()


# colourings -------------------------------------------------------------------

def test_z2_colour_of_box():
    assert color_counts(sp(ORIGIN, (1, 0, 0, 0)), GroupAction.zr(2)) == (1, 1)


def test_z3_age2_colour():
    assert color_counts(sp(ORIGIN, (0, 0, 1, 0)), GroupAction.z3age2()) == (1, 1, 0)


def test_empty_partition_has_zero_profile():
    for g in (GroupAction.zr(3), GroupAction.z2z2()):
        assert sum(color_counts(sp(), g)) == 0


def test_enumerate_colored_z2_split_profile():
    got = {p.boxes for p in enumerate_colored((1, 1), GroupAction.zr(2))}
    assert got == {(ORIGIN, (0, 1, 0, 0)), (ORIGIN, (1, 0, 0, 0))}


def test_enumerate_colored_needs_r0():
    assert list(enumerate_colored((0, 2), GroupAction.zr(2))) == []


def test_enumerate_colored_z2z2_single_box():
    got = list(enumerate_colored((1, 0, 0, 0), GroupAction.z2z2()))
    assert [p.boxes for p in got] == [(ORIGIN,)]


@pytest.mark.parametrize("spec", ["zr:2", "zr:3", "z2z2", "z3age2"])
def test_colored_buckets_partition_the_size_n_set(spec):
    g = GroupAction.parse(spec)
    for n in range(5):
        everything = sorted(p.boxes for p in enumerate_solid_partitions(n))
        bucketed = sorted(p.boxes for prof in profiles(g, n) for p in enumerate_colored(prof, g))
        assert bucketed == everything


# group specs --------------------------------------------------------------

def test_builtin_group_specs():
    assert GroupAction.parse("zr:4").weights == ((1, -1, 0, 0),)
    assert GroupAction.parse("z2z2").weights == ((0, 1, 1, 0), (1, 0, 1, 0))
    assert GroupAction.parse("z3age2").orders == (3,)
    assert GroupAction.parse("custom:orders=5;W=1,2,3,4").weights == ((1, 2, 3, 4),)
    assert GroupAction.parse("z2z2").series_names == ("q00", "q10", "q01", "q11")
    assert GroupAction.parse("trivial").series_names == ("q",)


def test_bad_group_specs():
    with pytest.raises(UnsupportedGroup):
        GroupAction.parse("so3")
    with pytest.raises(NotSU4):
        GroupAction.parse("custom:orders=3;W=1,0,0,0")


# characters and signs -----------------------------------------------------------

def test_character():
    assert character(sp()).is_zero()
    assert character(sp(ORIGIN)) == LaurentPoly.const(COEFF, 1)
    assert character(sp(ORIGIN, (0, 0, 0, 1))) == LaurentPoly.parse(COEFF, "1 + t1^-1*t2^-1*t3^-1")


@pytest.mark.parametrize("boxes, action, expected", [
    ((ORIGIN,), None, 1),
    ((ORIGIN, (0, 0, 0, 1)), None, 3),
    ((ORIGIN, (1, 0, 0, 0)), GroupAction.zr(2), 1),
    ((), None, 0),
])
def test_sign_exponent(boxes, action, expected):
    assert sign_exponent(sp(*boxes), action) == expected


def test_sign_rule_terms():
    pi = sp(ORIGIN, (0, 0, 0, 1))
    assert SignRule("size").exponent(pi) == 2
    assert SignRule("size+diag+1").exponent(pi) == 4
    with pytest.raises(ValueError):
        SignRule("size+banana")


# properties ---------------------------------------------------------------

@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(solid_partitions())
def test_generated_partitions_are_enumerated(pi):
    assert pi.is_valid()
    assert any(p == pi for p in enumerate_solid_partitions(len(pi)))


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(solid_partitions())
def test_colour_counts_sum_to_size(pi):
    for g in (GroupAction.zr(2), GroupAction.zr(4), GroupAction.z2z2(), GroupAction.z3age2()):
        counts = color_counts(pi, g)
        assert sum(counts) == len(pi) and min(counts) >= 0
        assert len(pi) == 0 or counts[0] >= 1


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(solid_partitions())
def test_character_counts_boxes(pi):
    """Z_pi at t = 1 counts boxes (every coefficient +1 before reduction)."""
    Z = character(pi)
    assert sum(Z.terms.values()) == len(pi)
