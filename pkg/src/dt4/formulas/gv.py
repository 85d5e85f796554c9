"""Positive-root curve classes, their genus-zero K-theoretic GV values, and
the stable-pair plethystic arguments built from them."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import IdentityFailed, UnsupportedGroup
from ..exactalg.brackets import BracketProduct, bracket_class
from ..exactalg.laurent import COEFF, LaurentPoly, Monomial, VarTable
from ..exactalg.rational import RationalFn
from ..exactalg.series import TruncatedSeries, plethystic_exp, q_expand
from ..partitions import GroupAction
from .arguments import ExpArgument, group_of, series_table

_CLASS_TERM = re.compile(r"\s*(\d*)\s*\*?\s*beta_?(\w+)\s*")


@dataclass(frozen=True)
class GVClass:
    name: str
    vector: tuple      # coefficients on the basis classes
    exponent: tuple    # exponent vector over the group's series names (Q^beta -> q)
    num: tuple         # bracket arguments (monomial specs) of the value
    den: tuple


@dataclass
class RootSystemData:
    group: str
    basis: tuple                      # names of the basis classes beta_b
    series_names: tuple
    positive_classes: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def lookup(self, cls) -> GVClass | None:
        vec = cls if isinstance(cls, tuple) else parse_class(cls, self.basis)
        for c in self.positive_classes:
            if c.vector == vec:
                return c
        return None

    def value(self, c: GVClass, vt: VarTable = COEFF, sign: int = 1, at_t4: bool = False) -> BracketProduct:
        """P_{1,beta} as a bracket product in ``vt``; with ``at_t4`` specialized at y = t4."""
        y = "t4" if at_t4 else "y"
        num = [vt.mono(s.replace("y", y)) for s in c.num]
        den = [vt.mono(s.replace("y", y)) for s in c.den]
        return BracketProduct.build(vt, sign, None, num, den)


def parse_class(spec: str, basis: tuple) -> tuple:
    """'beta01+beta10', '2beta1', 'beta_1 + beta_2' -> coefficient vector on ``basis``."""
    vec = [0] * len(basis)
    for part in spec.split("+"):
        m = _CLASS_TERM.fullmatch(part)
        if not m or m.group(2) not in basis:
            raise KeyError(f"cannot parse curve class {spec!r}")
        vec[basis.index(m.group(2))] += int(m.group(1) or 1)
    return tuple(vec)


def class_name(vec, basis) -> str:
    parts = []
    for k, b in zip(vec, basis):
        if k:
            parts.append(("" if k == 1 else str(k)) + "beta" + b)
    return "+".join(parts) or "0"


def root_system(group) -> RootSystemData:
    """Positive classes and tabulated GV values for zr:r and z2z2 (a5 as data)."""
    if group == "a5":
        return _A5
    action = group_of(group)
    names = action.series_names
    if action.name == "z2z2":
        basis = ("01", "10", "11")
        data = RootSystemData("z2z2", basis, names)
        table = [
            ((0, 1, 0), (), ()),
            ((1, 0, 0), (), ()),
            ((0, 0, 1), (), ()),
            ((1, 1, 1), (), ()),
            ((1, 1, 0), ("t1 t2 t3^-1",), ("t3^2",)),
            ((0, 1, 1), ("t1 t2^-1 t3",), ("t2^2",)),
            ((1, 0, 1), ("t1^-1 t2 t3",), ("t1^2",)),
        ]
        for vec, num, den in table:
            exp = [0] * len(names)
            for k, b in zip(vec, basis):
                exp[names.index("q" + b)] += k
            data.positive_classes.append(GVClass(
                class_name(vec, basis), vec, tuple(exp), num + ("y",), den + ("t4",)))
        return data
    if action.name == "trivial" or action.name.startswith("zr:"):
        r = action.orders[0] if action.orders else 1
        basis = tuple(str(i) for i in range(1, r))
        data = RootSystemData(action.name, basis, names)
        for i in range(1, r):
            for j in range(i, r):
                vec = tuple(1 if i <= k <= j else 0 for k in range(1, r))
                exp = (0,) + vec
                data.positive_classes.append(GVClass(
                    class_name(vec, basis), vec, exp, ("t3 t4", "y"), ("t3", "t4")))
        return data
    raise UnsupportedGroup(f"no root-system data for {action.name!r}")


# The icosahedral case is shipped as data: a single torus weight t on the
# 3-fold, values conditional on the vanishing of the torus-fixed Ext^1.
_A5 = RootSystemData(
    "a5", ("1", "2", "3", "4"), (),
    [
        GVClass("3beta1+5beta2+4beta3+3beta4", (3, 5, 4, 3), (), ("y",), ("t4",)),
        GVClass("2beta1+4beta2+4beta3+2beta4", (2, 4, 4, 2), (), ("t", "y"), ("t^2", "t4")),
        GVClass("2beta1+4beta2+3beta3+2beta4", (2, 4, 3, 2), (), ("t^2", "y"), ("t", "t4")),
        GVClass("beta1+2beta2+2beta3+beta4", (1, 2, 2, 1), (), ("t^2", "t^2", "y"), ("t", "t", "t4")),
    ],
    {"hypothesis": "torus-fixed part of Ext^1_Y(O_C, O_C) vanishes for the positive-root curves",
     "variables": "t (torus weight on Y), t4, y"},
)

A5_VARS = VarTable(("t", "t4", "y"))


@dataclass(frozen=True)
class GVEntry:
    value: RationalFn
    tag: str


def gv_lookup(group, cls) -> GVEntry:
    data = root_system(group)
    c = data.lookup(cls)
    vt = A5_VARS if data.group == "a5" else COEFF
    if c is None:
        return GVEntry(RationalFn.const(vt, 0), "not a positive root")
    return GVEntry(data.value(c, vt).to_rational(), "positive root")


def gv_invariant(group, cls) -> RationalFn:
    """Tabulated P_{1,beta}(y) with sign +; zero off the positive roots."""
    return gv_lookup(group, cls).value


def pt_term(data: RootSystemData, c: GVClass, vt: VarTable, sign: int = 1, invert: bool = False) -> BracketProduct:
    """-sign * P_{1,beta}(t4) [y] Q^beta / ([t4][y^1/2 q][y^1/2 q^-1]) with q the product of all series variables."""
    value = data.value(c, vt, sign=-sign, at_t4=True)
    exps = [0] * vt.n
    for name, k in zip(data.series_names, c.exponent):
        exps[vt.index[name]] = 4 * (-k if invert else k)
    q = vt.mono(" ".join(data.series_names))
    h = vt.mono("y^1/2")
    rest = BracketProduct.build(vt, 1, Monomial(vt, exps), [vt.mono("y")], [vt.mono("t4"), h * q, h / q])
    return value * rest


def pt_argument(group, signs=None, invert: bool = False, vt: VarTable | None = None) -> ExpArgument:
    """Sum over positive classes of the stable-pair terms; ``invert`` uses Q^-beta."""
    data = root_system(group)
    vt = vt or series_table(data.series_names)
    signs = signs or [1] * len(data.positive_classes)
    return ExpArgument(vt, [pt_term(data, c, vt, s, invert) for c, s in zip(data.positive_classes, signs)])


# the irreducible-class identity ------------------------------------------------

_PT_VT = series_table(("q",))


def one_leg_vertex(order: int, mapping) -> TruncatedSeries:
    """Exp([y t1]/[t1] q) after substituting the chart coordinates ``mapping``."""
    vt = _PT_VT
    arg = BracketProduct.build(vt, 1, vt.mono("q"), [vt.mono("y t1")], [vt.mono("t1")])
    arg = arg.substitute({k: vt.mono(v) for k, v in mapping.items()})
    return plethystic_exp(q_expand(arg, order, COEFF), order)


_SUB1 = {"t1": "t1^-1 t2", "t2": "t1^2"}
_SUB2 = {"t1": "t1 t2^-1", "t2": "t2^2"}


def edge_factor() -> BracketProduct:
    """-[-e~] after the first chart substitution, e~ = t3^-1 - t1^-1 t2^-1 + t1^-1 t2^-1 t3^-1 - y."""
    e = LaurentPoly.parse(COEFF, "t3^-1 - t1^-1*t2^-1 + t1^-1*t2^-1*t3^-1 - y")
    e = e.substitute({k: COEFF.mono(v) for k, v in _SUB1.items()})
    return -bracket_class(e, negate=True)


def pt_irreducible_target(order: int) -> TruncatedSeries:
    vt = _PT_VT
    h = vt.mono("y^1/2")
    q = vt.mono("q")
    bp = BracketProduct.build(vt, 1, None, [vt.mono("t1 t2"), vt.mono("y")],
                              [vt.mono("t3"), vt.mono("t4"), h * q, h / q])
    return q_expand(bp, order, COEFF)


def pt_irreducible_series(r: int, order: int = 4):
    """Two substituted one-leg vertices times q * (-1) * [-e~]; checked against the closed form.

    Returns (series, report dict); raises IdentityFailed at the first differing coefficient.
    The computation does not depend on r beyond r >= 2 (every irreducible class
    has the same local geometry).
    """
    if r < 2:
        raise ValueError("needs r >= 2")
    V = one_leg_vertex(order, _SUB1) * one_leg_vertex(order, _SUB2)
    edge = edge_factor().to_rational()
    shift = TruncatedSeries(("q",), order, {(1,): edge}, V.zero)
    series = V * shift
    target = pt_irreducible_target(order)
    checked = []
    for n in range(order + 1):
        a, b = series.coeff((n,)), target.coeff((n,))
        ok = (a.equals(b) if hasattr(a, "equals") else a == b)
        checked.append({"exponent": [n], "status": "pass" if ok else "fail"})
        if not ok:
            raise IdentityFailed(f"coefficient of q^{n} differs", exponent=(n,))
    return series, {"r": r, "order": order, "checks": checked}


def pt_consistency(group, order: int = 4) -> "Report":
    """Per positive class: the PT expansion vanishes at q^0 and equals P_{1,beta}(t4)[y]/[t4] at q^1;
    for Z_r (r >= 2) additionally the irreducible-class series identity to ``order``."""
    from .report import Report, stopwatch

    action = group_of(group)
    data = root_system(action)
    vt = series_table(data.series_names)
    report = Report("pt", {"group": action.name, "order": order})
    qall = tuple(1 for _ in data.series_names)
    for c in data.positive_classes:
        with stopwatch() as t:
            s = q_expand(pt_term(data, c, vt), sum(c.exponent) + len(qall), COEFF)
            zero_term = s.coeff(c.exponent)
            one_term = s.coeff(tuple(a + b for a, b in zip(c.exponent, qall)))
            expected = (data.value(c, COEFF, at_t4=True)
                        * BracketProduct.build(COEFF, 1, None, [COEFF.mono("y")], [COEFF.mono("t4")])).to_rational()
        report.add(f"{c.name} n=0", c.exponent, zero_term.is_zero(), t[0])
        report.add(f"{c.name} n=1", c.exponent, one_term.equals(expected), t[0])
    r = action.orders[0] if action.orders and action.name != "z2z2" else 0
    if r >= 2:
        with stopwatch() as t:
            try:
                _, rep = pt_irreducible_series(r, order)
                ok, detail = True, ""
            except IdentityFailed as exc:
                ok, detail = False, str(exc)
        report.add("irreducible series", None, ok, t[0], detail)
    return report
