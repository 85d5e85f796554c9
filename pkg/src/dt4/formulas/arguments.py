"""Closed-form plethystic arguments: Nekrasov factors over toric charts,
their orbifold and coloured sums, and the 3-fold (y = t4) variants."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ChartNotCalabiYau, UnsupportedGroup
from ..exactalg.brackets import BracketProduct
from ..exactalg.laurent import COEFF, Monomial, VarTable
from ..exactalg.rational import RationalFn, sum_many
from ..exactalg.series import TruncatedSeries, expand_argument, plethystic_exp
from ..partitions import GroupAction


@dataclass
class ExpArgument:
    """A formal sum of bracket products in coefficient and series variables."""

    vt: VarTable
    terms: list = field(default_factory=list)

    def __add__(self, other: "ExpArgument") -> "ExpArgument":
        if other.vt is not self.vt:
            raise ValueError("arguments live in different variable tables")
        return ExpArgument(self.vt, self.terms + other.terms)

    def __neg__(self) -> "ExpArgument":
        return ExpArgument(self.vt, [-t for t in self.terms])

    def __len__(self):
        return len(self.terms)

    @property
    def names(self) -> tuple:
        return self.vt.series_names

    def expand(self, order: int) -> TruncatedSeries:
        if not self.terms:
            return TruncatedSeries(self.names, order, {}, RationalFn.const(COEFF, 0))
        return expand_argument(self.terms, order, COEFF)

    def exp(self, order: int, point=None) -> TruncatedSeries:
        return plethystic_exp(self.expand(order), order, point=point)

    def to_rational(self) -> RationalFn:
        """The whole sum as one rational function, series variables treated as Laurent variables."""
        return sum_many([t.to_rational() for t in self.terms if not t.is_zero], self.vt)

    def evaluate(self, point) -> int:
        return sum(t.evaluate(point) for t in self.terms) % point.p

    def map_series(self, fn) -> "ExpArgument":
        """Apply ``fn`` (exps -> exps) to every bracket argument and prefactor."""
        return ExpArgument(self.vt, [t._remap(fn, self.vt) for t in self.terms])


def series_table(names) -> VarTable:
    return COEFF.with_series(tuple(names))


def _mono(vt: VarTable, m) -> Monomial:
    if isinstance(m, Monomial):
        return m if m.vt is vt else Monomial(vt, tuple(m.exps) + (0,) * (vt.n - len(m.exps)))
    if isinstance(m, str):
        return vt.mono(m)
    return Monomial(vt, tuple(m) + (0,) * (vt.n - len(m)))


def check_chart(vt: VarTable, chart) -> tuple:
    ws = tuple(_mono(vt, w) for w in chart)
    prod = ws[0]
    for w in ws[1:]:
        prod = prod * w
    if not prod.is_trivial():
        raise ChartNotCalabiYau(f"chart weights multiply to {prod}, not 1")
    return ws


def nekrasov_F(chart, q, vt: VarTable | None = None, sign: int = 1) -> BracketProduct:
    """[w1w2][w2w3][w1w3]/([w1][w2][w3][w4]) * [y]/([y^1/2 q][y^1/2 q^-1])."""
    vt = vt or series_table(("q",))
    w1, w2, w3, w4 = check_chart(vt, chart)
    q = _mono(vt, q)
    h = vt.mono("y^1/2")
    return BracketProduct.build(
        vt, sign, None,
        num=[w1 * w2, w2 * w3, w1 * w3, vt.mono("y")],
        den=[w1, w2, w3, w4, h * q, h / q],
    )


def nekrasov_F3(chart, q, vt: VarTable | None = None, sign: int = 1) -> BracketProduct:
    """3-fold factor [w1w2][w2w3][w1w3]/([w1][w2][w3]) / ([k^1/2 q][k^1/2 q^-1]), k = w1w2w3."""
    vt = vt or series_table(("q",))
    w1, w2, w3 = (_mono(vt, w) for w in chart[:3])
    kappa = w1 * w2 * w3
    h = Monomial(vt, [e // 2 for e in kappa.exps], reduce=False)
    q = _mono(vt, q)
    return BracketProduct.build(
        vt, sign, None,
        num=[w1 * w2, w2 * w3, w1 * w3],
        den=[w1, w2, w3, h * q, h / q],
    )


# charts ------------------------------------------------------------------

def zr_charts(r: int) -> list:
    """Toric charts of the resolution of C^2/Z_r (times C^2), k = 0..r-1."""
    out = []
    for k in range(r):
        out.append((f"t1^{r - k} t2^{-k}", f"t2^{k + 1} t1^{-r + k + 1}", "t3", "t4"))
    return out


Z2Z2_CHARTS = [
    ("t1^2", "t2^2", "t3 t1^-1 t2^-1", "t4"),
    ("t1^2", "t2 t1^-1 t3^-1", "t3^2", "t4"),
    ("t1 t2^-1 t3^-1", "t2^2", "t3^2", "t4"),
    ("t2 t3 t1^-1", "t1 t3 t2^-1", "t1 t2 t3^-1", "t4"),
]

# Z2xZ2 coloured families: (coefficient bracket ratio (num, den) or None, q-monomials)
Z2Z2_FAMILIES = [
    (("t1 t2 t3^-1", "t3^2"), ["q10 q01", "q10^-1 q01^-1"]),
    (("t1 t2^-1 t3", "t2^2"), ["q10 q11", "q10^-1 q11^-1"]),
    (("t1^-1 t2 t3", "t1^2"), ["q01 q11", "q01^-1 q11^-1"]),
    (None, ["q10", "q01", "q11", "q10 q01 q11",
            "q10^-1", "q01^-1", "q11^-1", "q10^-1 q01^-1 q11^-1"]),
]


def qprod(names, i: int, j: int) -> str:
    """q_[i,j] = q_i ... q_j as a monomial spec."""
    return " ".join(names[k] for k in range(i, j + 1))


def group_of(group) -> GroupAction:
    if isinstance(group, GroupAction):
        return group
    return GroupAction.parse(group)


def _kind(action: GroupAction) -> str:
    if action.name == "z2z2":
        return "z2z2"
    if action.name == "trivial" or (action.name.startswith("zr:")):
        return "zr"
    raise UnsupportedGroup(f"no closed formula for group {action.name!r}")


def _order(action: GroupAction) -> int:
    return action.orders[0] if action.orders else 1


def degree_zero_argument(group, three_d: bool = False, vt: VarTable | None = None) -> ExpArgument:
    """Sum of chart Nekrasov factors in the single variable q_(.) = product of all q's."""
    action = group_of(group)
    kind = _kind(action)
    names = action.series_names
    vt = vt or series_table(names)
    qall = " ".join(names)
    charts = zr_charts(_order(action)) if kind == "zr" else Z2Z2_CHARTS
    F = nekrasov_F3 if three_d else nekrasov_F
    return ExpArgument(vt, [F(ch, qall, vt) for ch in charts])


def colour_argument(group, three_d: bool = False, vt: VarTable | None = None) -> ExpArgument:
    action = group_of(group)
    kind = _kind(action)
    names = action.series_names
    vt = vt or series_table(names)
    qall = vt.mono(" ".join(names))
    if three_d:
        kappa = vt.mono("t1 t2 t3")
        h = Monomial(vt, [e // 2 for e in kappa.exps], reduce=False)
        common_num, common_den = [], [h * qall, h / qall]
    else:
        h = vt.mono("y^1/2")
        common_num, common_den = [vt.mono("y")], [vt.mono("t4"), h * qall, h / qall]
    terms = []
    if kind == "zr":
        r = _order(action)
        for i in range(1, r):
            for j in range(i, r):
                m = vt.mono(qprod(names, i, j))
                for pre in (m, m.inverse()):
                    terms.append(BracketProduct.build(
                        vt, 1, pre,
                        num=[vt.mono("t1 t2")] + common_num,
                        den=[vt.mono("t3")] + common_den,
                    ))
    else:
        for ratio, monos in Z2Z2_FAMILIES:
            num, den = ([vt.mono(ratio[0])], [vt.mono(ratio[1])]) if ratio else ([], [])
            for spec in monos:
                terms.append(BracketProduct.build(
                    vt, 1, vt.mono(spec), num=num + common_num, den=den + common_den))
    return ExpArgument(vt, terms)


def build_orbifold_argument(group, three_d: bool = False) -> ExpArgument:
    """F_r + F^col_r (Z_r) or F_{2,2} + F^col_{2,2} (Z2xZ2); ``three_d`` gives the y = t4 variants."""
    action = group_of(group)
    vt = series_table(action.series_names)
    return degree_zero_argument(action, three_d, vt) + colour_argument(action, three_d, vt)
