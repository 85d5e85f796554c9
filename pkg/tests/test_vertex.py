import pytest
from hypothesis import given, settings

from _strategies import kclasses, solid_partitions
from dt4.errors import RankMismatch
from dt4.exactalg import COEFF, BracketProduct, LaurentPoly, RationalFn, sample_points
from dt4.formulas.limits import m_degree
from dt4.formulas.verify import modular_points
from dt4.partitions import GroupAction, SolidPartition
from dt4.vertex import (
    COH,
    Zero,
    b_series_check,
    cohomological_map,
    contribution,
    dimensional_reduce,
    dt_partition_function,
    g_fixed_part,
    insertion_free_contribution,
    partitions_up_to,
    tangent_class,
    vertex_class,
)

ORIGIN = (0, 0, 0, 0)
Z2 = GroupAction.zr(2)
GROUPS = [None, GroupAction.zr(2), GroupAction.zr(3), GroupAction.z2z2(), GroupAction.z3age2()]


def P(text):
    return LaurentPoly.parse(COEFF, text)


def C(text):
    return RationalFn(LaurentPoly.parse(COH, text))


def bp(num, den, sign=1):
    return BracketProduct.build(COEFF, sign, None, [COEFF.mono(s) for s in num], [COEFF.mono(s) for s in den])


def sp(*boxes):
    return SolidPartition(boxes)


SINGLE_BOX = bp(["y", "t1 t2", "t1 t3", "t2 t3"], ["t1", "t2", "t3", "t4"])


# vertex classes ---------------------------------------------------------------

def test_vertex_class_single_box():
    v = P("t1^-1 + t2^-1 + t3^-1 - t1^-1*t2^-1 - t1^-1*t3^-1 - t2^-1*t3^-1 + t1^-1*t2^-1*t3^-1")
    assert vertex_class(sp(ORIGIN), None) == v
    assert vertex_class(sp(ORIGIN)) == v - P("y")
    assert vertex_class(sp()).is_zero()


def test_g_fixed_part_examples():
    assert g_fixed_part(P("t1 - t2"), Z2).is_zero()
    want = P("-y + t3^-1 - t1^-1*t2^-1 + t1^-1*t2^-1*t3^-1")
    assert g_fixed_part(vertex_class(sp(ORIGIN)), Z2) == want
    assert g_fixed_part(want, Z2) == want


def test_contribution_examples():
    c = contribution(sp(ORIGIN))
    assert c.sign == -1 and c.value.to_rational().equals(SINGLE_BOX.to_rational())
    c = contribution(sp(ORIGIN), Z2)
    assert c.sign == -1 and c.value.to_rational().equals(bp(["y", "t1 t2"], ["t3", "t4"]).to_rational())
    c = contribution(sp())
    assert c.sign == 1 and c.value.to_rational().equals(RationalFn.const(COEFF, 1))


def test_partition_function_low_orders():
    assert dt_partition_function(None, 0).terms.keys() == {(0,)}
    s = dt_partition_function(None, 1)
    assert s.coeff((1,)).equals((-SINGLE_BOX).to_rational())
    assert dt_partition_function(Z2, 2).coeff((0, 1)).is_zero()


@pytest.mark.property
@pytest.mark.parametrize("workers", [2, 3])
def test_worker_count_does_not_change_result(workers):
    from dt4.exactalg.serialize import dumps, series_to_json
    one = dt_partition_function(Z2, 3)
    many = dt_partition_function(Z2, 3, workers=workers)
    assert dumps(series_to_json(one)) == dumps(series_to_json(many))
    pts = modular_points(7, 1)
    a = dt_partition_function(GroupAction.z2z2(), 3, mode="modular", points=pts)
    b = dt_partition_function(GroupAction.z2z2(), 3, mode="modular", points=pts, workers=workers)
    assert [s.terms for s in a] == [s.terms for s in b]


def test_zr_series_is_symmetric_in_t1_t2():
    swap = {"t1": COEFF.mono("t2"), "t2": COEFF.mono("t1")}
    for g in (GroupAction.zr(2), GroupAction.zr(3)):
        s = dt_partition_function(g, 3)
        for a, c in s.items():
            assert c.equals(c.substitute(swap)), a


# cohomological images ----------------------------------------------------------

def test_cohomological_map_examples():
    assert cohomological_map(bp(["y", "t1 t2"], ["t3", "t4"])).equals(
        RationalFn.make(LaurentPoly.parse(COH, "m*l1 + m*l2"),
                        [LaurentPoly.parse(COH, "l3"), LaurentPoly.parse(COH, "-l1 - l2 - l3")]))
    assert cohomological_map(BracketProduct.one(COEFF)).equals(C("1"))
    got = cohomological_map(contribution(sp(ORIGIN)))
    num = LaurentPoly.parse(COH, "-m") * LaurentPoly.parse(COH, "l1 + l2") \
        * LaurentPoly.parse(COH, "l1 + l3") * LaurentPoly.parse(COH, "l2 + l3")
    want = RationalFn.make(num, [LaurentPoly.parse(COH, s) for s in ("l1", "l2", "l3", "-l1 - l2 - l3")])
    assert got.equals(want)


def test_cohomological_map_needs_rank_zero():
    with pytest.raises(RankMismatch):
        cohomological_map(bp(["t1"], []))


def test_insertion_free_examples():
    got = insertion_free_contribution(sp(ORIGIN))
    num = LaurentPoly.parse(COH, "-l1 - l2") * LaurentPoly.parse(COH, "l1 + l3") * LaurentPoly.parse(COH, "l2 + l3")
    want = RationalFn.make(num, [LaurentPoly.parse(COH, s) for s in ("l1", "l2", "l3", "-l1 - l2 - l3")])
    assert got.equals(want)
    assert insertion_free_contribution(sp()).equals(C("1"))
    d_coh, _ = m_degree(cohomological_map(contribution(sp(ORIGIN))))
    d_free, _ = m_degree(got)
    assert d_coh - d_free == 1


@pytest.mark.parametrize("action", GROUPS, ids=lambda g: getattr(g, "name", "trivial"))
def test_b_series_leading_term_is_cohomological_map(action):
    for pi in partitions_up_to(3):
        c = contribution(pi, action)
        if c.value.is_zero:
            continue
        lead, _ = b_series_check(c.signed())
        assert lead.equals(cohomological_map(c)), pi


@pytest.mark.parametrize("action", GROUPS, ids=lambda g: getattr(g, "name", "trivial"))
def test_insertion_free_is_top_m_coefficient(action):
    for pi in partitions_up_to(3):
        c = contribution(pi, action)
        free = insertion_free_contribution(pi, action)
        if c.value.is_zero:
            assert free.is_zero()
            continue
        deg, lead = m_degree(cohomological_map(c))
        assert deg == c.profile[0] and lead.equals(free), pi


# dimensional reduction --------------------------------------------------------

def test_dimensional_reduce_examples():
    assert isinstance(dimensional_reduce(sp(ORIGIN, (0, 0, 0, 1))), Zero)
    c = dimensional_reduce(sp(ORIGIN))
    assert c.value.to_rational().equals(bp(["t1 t2", "t1 t3", "t2 t3"], ["t1", "t2", "t3"]).to_rational())
    assert c.sign == 1
    e = dimensional_reduce(sp())
    assert e.sign == 1 and e.value.to_rational().equals(RationalFn.const(COEFF, 1))


@pytest.mark.parametrize("action", GROUPS[:4], ids=lambda g: getattr(g, "name", "trivial"))
def test_boxes_off_the_threefold_vanish(action):
    for pi in partitions_up_to(4):
        r = dimensional_reduce(pi, action)
        assert isinstance(r, Zero) == any(b[3] for b in pi), pi


# properties ---------------------------------------------------------------

@pytest.mark.property
@settings(max_examples=60, deadline=None)
@given(solid_partitions(max_size=4))
def test_square_root_reconstructs_tangent_class(pi):
    v = vertex_class(pi, None)
    assert v + v.bar() == tangent_class(pi)


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(kclasses(max_terms=5))
def test_g_fixed_idempotent_and_commutes_with_bar(V):
    for g in GROUPS[1:]:
        F = g_fixed_part(V, g)
        assert g_fixed_part(F, g) == F
        assert g_fixed_part(V.bar(), g) == F.bar()


def _unreduced_vertex(pi, action):
    """v~ built in the free ring on t1..t4, y; G-fixed part taken there."""
    def mono(e):
        return LaurentPoly(COEFF, {COEFF.pack(e): 1}, reduce=False)
    one = LaurentPoly.const(COEFF, 1)
    Z = LaurentPoly(COEFF, {COEFF.pack(tuple(4 * x for x in b) + (0,)): 1 for b in pi}, reduce=False)
    Zb = LaurentPoly(COEFF, {COEFF.pack(tuple(-4 * x for x in b) + (0,)): 1 for b in pi}, reduce=False)
    P = one
    for i in range(3):
        P = P * (one - mono(tuple(-4 * (j == i) for j in range(4)) + (0,)))
    V = Z - P * Z * Zb - Zb * mono((0, 0, 0, 0, 4))
    if action is not None:
        up = COEFF.unpack
        V = LaurentPoly(COEFF, {k: c for k, c in V.terms.items()
                                if not any(action.exponent_weight([e // 4 for e in up(k)]))}, reduce=False)
    return V


@pytest.mark.property
@settings(max_examples=40, deadline=None)
@given(solid_partitions(max_size=4))
def test_representative_independence(pi):
    """[-v~] evaluated from an unreduced representative agrees with the canonical value."""
    pts = [p for p, _ in zip(sample_points(("t1", "t2", "t3", "y"), 3, 1), range(2))]
    for g in (None, Z2, GroupAction.z2z2()):
        V = _unreduced_vertex(pi, g)
        assert V.reduced() == g_fixed_part(vertex_class(pi), g)
        c = contribution(pi, g)
        if c.value.is_zero:
            continue
        # monomials that are 1 on the CY torus must cancel in net; [1] factors drop out
        trivial = {k: m for k, m in V.terms.items() if not any(COEFF.reduce_exps(COEFF.unpack(k)))}
        assert sum(trivial.values()) == 0
        rest = {k: m for k, m in V.terms.items() if k not in trivial}
        raw = BracketProduct(COEFF, 1, None,
                             [(COEFF.unpack(k), -m) for k, m in rest.items() if m < 0],
                             [(COEFF.unpack(k), m) for k, m in rest.items() if m > 0])
        for pt in pts:
            assert raw.evaluate(pt) == c.value.evaluate(pt)
