from fractions import Fraction

import pytest

from dt4.errors import ChartNotCalabiYau, NotSU4, UnsupportedGroup
from dt4.exactalg import COEFF, BracketProduct, LaurentPoly, RationalFn, bracket, q_expand
from dt4.formulas import (
    ExpArgument,
    GroupElementSpec,
    age,
    build_orbifold_argument,
    gv_invariant,
    gv_lookup,
    is_age_at_most_one,
    limits_suite,
    macmahon,
    nekrasov_F,
    pt_argument,
    pt_consistency,
    pt_irreducible_series,
    root_system,
    verify_crc,
    verify_orbifold_conjecture,
)
from dt4.formulas.arguments import Z2Z2_CHARTS, check_chart, series_table, zr_charts
from dt4.formulas.gv import edge_factor
from dt4.formulas.limits import insertion_free_closed_form
from dt4.partitions import GroupAction
from dt4.vertex import COH, dt_partition_function

IDENTITY = ("t1", "t2", "t3", "t4")


def bp(num, den, sign=1, vt=COEFF):
    return BracketProduct.build(vt, sign, None, [vt.mono(s) for s in num], [vt.mono(s) for s in den])


def rf(num, den, sign=1):
    return bp(num, den, sign).to_rational()


# Nekrasov factor and the orbifold arguments ------------------------------------

def test_nekrasov_identity_chart_is_F():
    vt = series_table(("q",))
    F = nekrasov_F(IDENTITY, "q", vt)
    want = bp(["t1 t2", "t2 t3", "t1 t3", "y"], ["t1", "t2", "t3", "t4", "y^1/2 q", "y^1/2 q^-1"], vt=vt)
    assert F.key() == want.key()
    s = q_expand(F, 1)
    assert s.coeff((1,)).equals(rf(["y", "t1 t2", "t1 t3", "t2 t3"], ["t1", "t2", "t3", "t4"], -1))


def test_chart_must_be_calabi_yau():
    with pytest.raises(ChartNotCalabiYau):
        nekrasov_F(("t1", "t2", "t3", "t3"), "q")
    assert zr_charts(3)[0] == ("t1^3 t2^0", "t2^1 t1^-2", "t3", "t4")
    for chart in Z2Z2_CHARTS:
        check_chart(COEFF, chart)


def test_zr1_argument_is_F_alone():
    arg = build_orbifold_argument("zr:1")
    F = ExpArgument(arg.vt, [nekrasov_F(IDENTITY, "q0", arg.vt)])
    assert arg.expand(4).equals(F.expand(4))


def test_zr2_argument_shape():
    arg = build_orbifold_argument("zr:2")
    assert arg.names == ("q0", "q1") and len(arg) == 4  # two charts, q1 and q1^-1


def test_z2z2_argument_shape():
    arg = build_orbifold_argument("z2z2")
    # four charts, six ratio families (Q and Q^-1 each) and eight unit terms
    assert len(arg) == 4 + 6 + 8


def test_unsupported_group_has_no_closed_form():
    with pytest.raises(UnsupportedGroup):
        build_orbifold_argument("z3age2")


@pytest.mark.parametrize("chart", zr_charts(2) + Z2Z2_CHARTS[:2])
def test_degree_zero_chart_lemma(chart):
    """Exp(F at a chart) is the C^4 series with the chart weights substituted."""
    vt = series_table(("q",))
    ws = check_chart(COEFF, chart)
    mapping = dict(zip(("t1", "t2", "t3"), ws[:3]))
    dt = dt_partition_function(None, 3)
    closed = ExpArgument(vt, [nekrasov_F(chart, "q", vt)]).exp(3)
    for n in range(4):
        assert dt.coeff((n,)).substitute(mapping).equals(closed.coeff((n,)))


def test_t3t4_bracket_identity():
    assert bracket(COEFF.mono("t3 t4")) == -bracket(COEFF.mono("t1 t2"))


# GV data ---------------------------------------------------------------------

def test_gv_tables():
    assert gv_invariant("zr:3", "beta1+beta2").equals(rf(["t3 t4", "y"], ["t3", "t4"]))
    assert gv_invariant("z2z2", "beta01+beta10").equals(rf(["t1 t2 t3^-1", "y"], ["t3^2", "t4"]))
    entry = gv_lookup("zr:2", "2beta1")
    assert entry.value.is_zero() and entry.tag == "not a positive root"


def test_positive_classes():
    for r in (2, 3, 4, 5):
        assert len(root_system(f"zr:{r}").positive_classes) == r * (r - 1) // 2
    assert len(root_system("z2z2").positive_classes) == 7
    a5 = root_system("a5")
    assert len(a5.positive_classes) == 4 and "hypothesis" in a5.notes


def test_pt_argument_zr2_single_term():
    arg = pt_argument("zr:2")
    assert len(arg) == 1
    value = root_system("zr:2").value(root_system("zr:2").positive_classes[0], COEFF, at_t4=True)
    assert value.to_rational().equals(rf(["t3 t4"], ["t3"]))


@pytest.mark.parametrize("group", ["zr:2", "zr:3", "zr:4", "z2z2"])
def test_pt_consistency(group):
    rep = pt_consistency(group, order=3)
    assert rep.passed, rep.first_failure()


def test_pt_irreducible_series():
    series, info = pt_irreducible_series(2, order=4)
    assert series.coeff((0,)).is_zero()
    assert series.coeff((1,)).equals(rf(["y", "t1 t2"], ["t3", "t4"], -1))
    assert all(c["status"] == "pass" for c in info["checks"])


def test_edge_term_is_a_bracket_product():
    e = edge_factor()
    assert not e.is_zero and e.rank() == 0


# verifiers -------------------------------------------------------------------

@pytest.mark.parametrize("group, D", [("zr:1", 2), ("trivial", 3), ("zr:2", 3), ("zr:3", 3), ("z2z2", 3)])
def test_orbifold_conjecture_exact(group, D):
    rep = verify_orbifold_conjecture(group, D)
    assert rep.passed, rep.first_failure()


def test_orbifold_conjecture_modular():
    rep = verify_orbifold_conjecture("zr:2", 4, mode="modular", seed=5)
    assert rep.passed


def test_flipped_sign_rule_fails_low():
    rep = verify_orbifold_conjecture("zr:2", 2, sign_rule="r0")
    bad = rep.first_failure()
    assert bad is not None and sum(bad.exponent) <= 2


@pytest.mark.parametrize("group, k", [("zr:2", 1), ("zr:3", 3), ("zr:4", 6), ("z2z2", 7)])
def test_crc(group, k):
    rep = verify_crc(group)
    assert rep.passed and len(rep.sign_vector) == k
    flips = [c for c in rep.checks if c.name.startswith("flip")]
    assert len(flips) == k


def test_crc_trivial_for_zr1():
    rep = verify_crc("zr:1")
    assert rep.passed and rep.sign_vector == []


# limits ----------------------------------------------------------------------

def test_macmahon_coefficients():
    M = macmahon(4)
    assert M.coeff((1, 2)).equals(RationalFn.const(COH, 2))
    assert M.coeff((1, 1)).equals(RationalFn.const(COH, 1))
    assert M.coeff((2, 2)).equals(RationalFn.const(COH, 1))


def test_insertion_free_zr1_first_coefficient():
    s = insertion_free_closed_form("zr:1", 1)
    num = LaurentPoly.parse(COH, "-l1 - l2") * LaurentPoly.parse(COH, "l1 + l3") * LaurentPoly.parse(COH, "l2 + l3")
    want = RationalFn.make(num, [LaurentPoly.parse(COH, v) for v in ("l1", "l2", "l3", "-l1 - l2 - l3")])
    assert s.coeff((1,)).equals(want)


@pytest.mark.parametrize("group", ["zr:2", "z2z2"])
def test_limits_suite(group):
    rep = limits_suite(group, 2)
    assert rep.passed, rep.first_failure()


# ages ------------------------------------------------------------------------

def test_age_examples():
    assert age(GroupElementSpec(3, (1, 1, 1, 0))) == 1
    assert age(GroupElementSpec(2, (1, 1, 1, 1))) == 2
    assert age(GroupElementSpec(5, (0, 0, 0, 0))) == 0
    with pytest.raises(NotSU4):
        age(GroupElementSpec(3, (1, 0, 0, 0)))


def test_age_at_most_one():
    for spec in ("zr:2", "zr:5", "z2z2"):
        assert is_age_at_most_one(GroupAction.parse(spec)).ok
    rep = is_age_at_most_one(GroupAction.z3age2())
    assert not rep.ok and age(rep.witness) == 2
    assert sorted(rep.ages.values()) == [0, 1, 2]
    assert Fraction(2) in rep.ages.values()
