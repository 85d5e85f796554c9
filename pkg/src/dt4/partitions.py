"""Solid partitions, abelian group colourings and sign exponents.

Canonical order: partitions of a given size are produced in lexicographic
order of their sorted box lists (a convention; any fixed order would do).
"""

from __future__ import annotations

import itertools
import math
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from .errors import NotSU4, UnsupportedGroup
from .exactalg.laurent import COEFF, LaurentPoly

Box = tuple  # (i, j, k, l)

_UNIT = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


@dataclass(frozen=True)
class SolidPartition:
    boxes: tuple

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(sorted(tuple(b) for b in self.boxes)))

    def __len__(self):
        return len(self.boxes)

    def __iter__(self):
        return iter(self.boxes)

    def __contains__(self, box):
        return tuple(box) in self.boxes

    def is_valid(self) -> bool:
        s = set(self.boxes)
        if len(s) != len(self.boxes) or any(min(b) < 0 for b in s):
            return False
        return all(_preds_present(b, s) for b in s)

    def to_line(self) -> str:
        return ";".join(",".join(map(str, b)) for b in self.boxes)

    @classmethod
    def from_line(cls, line: str) -> "SolidPartition":
        line = line.strip()
        if not line:
            return cls(())
        return cls(tuple(tuple(int(x) for x in part.split(",")) for part in line.split(";")))

    def __repr__(self):
        return f"SolidPartition({self.to_line() or 'empty'})"


def _preds_present(b, s) -> bool:
    for i in range(4):
        if b[i] > 0:
            p = list(b)
            p[i] -= 1
            if tuple(p) not in s:
                return False
    return True


def _candidates(n: int) -> list:
    """Boxes that can occur in a size-n partition: the hook product bounds them."""
    out = []
    for b in itertools.product(range(n), repeat=4):
        if (b[0] + 1) * (b[1] + 1) * (b[2] + 1) * (b[3] + 1) <= n:
            out.append(b)
    return sorted(out)


def _dfs(n: int, color_of=None, target=None) -> Iterator[tuple]:
    cands = _candidates(n)
    members: set = set()
    stack: list = []
    counts = list(target) if target is not None else None

    def rec(start):
        if len(stack) == n:
            yield tuple(stack)
            return
        for idx in range(start, len(cands)):
            b = cands[idx]
            if not _preds_present(b, members):
                continue
            if counts is not None:
                c = color_of(b)
                if counts[c] == 0:
                    continue
                counts[c] -= 1
            members.add(b)
            stack.append(b)
            yield from rec(idx + 1)
            stack.pop()
            members.discard(b)
            if counts is not None:
                counts[c] += 1

    if n == 0:
        yield ()
        return
    yield from rec(0)


def cache_dir(explicit: str | os.PathLike | None = None) -> Path | None:
    if explicit:
        return Path(explicit)
    env = os.environ.get("DT4_CACHE")
    return Path(env) if env else None


def _cache_file(root: Path, n: int) -> Path:
    return root / "partitions" / f"n{n}.txt"


def _read_cache(path: Path, n: int):
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError:
        return None
    m = re.fullmatch(r"# n=(\d+) count=(\d+)", lines[0]) if lines else None
    if not m or int(m.group(1)) != n:
        return None
    body = lines[1:]
    if len(body) != int(m.group(2)):
        return None  # truncated file: recompute
    return [SolidPartition.from_line(line) for line in body]


def _write_cache(path: Path, n: int, parts: list):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    text = f"# n={n} count={len(parts)}\n" + "".join(p.to_line() + "\n" for p in parts)
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


def enumerate_solid_partitions(n: int, cache: str | os.PathLike | None = None) -> Iterator[SolidPartition]:
    """All solid partitions of size n in canonical (lexicographic) order."""
    if n < 0:
        raise ValueError("size must be non-negative")
    root = cache_dir(cache)
    if root is None:
        for boxes in _dfs(n):
            yield SolidPartition(boxes)
        return
    path = _cache_file(root, n)
    parts = _read_cache(path, n)
    if parts is None:
        parts = [SolidPartition(b) for b in _dfs(n)]
        _write_cache(path, n, parts)
    yield from parts


# group actions ------------------------------------------------------------

@dataclass(frozen=True)
class GroupAction:
    """Diagonal abelian action: generator a acts on coordinate i by weight W[a][i] mod orders[a]."""

    orders: tuple
    weights: tuple
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(r) for r in self.orders))
        object.__setattr__(self, "weights", tuple(tuple(int(w) for w in row) for row in self.weights))
        if len(self.orders) != len(self.weights) or any(len(r) != 4 for r in self.weights):
            raise UnsupportedGroup("weight matrix must have one row of 4 entries per generator")
        if any(r < 1 for r in self.orders):
            raise UnsupportedGroup("group orders must be positive")
        for r, row in zip(self.orders, self.weights):
            if sum(row) % r:
                raise NotSU4(f"weights {row} mod {r} do not sum to 0")

    # builtins
    @classmethod
    def trivial(cls) -> "GroupAction":
        return cls((), (), "trivial")

    @classmethod
    def zr(cls, r: int) -> "GroupAction":
        return cls((r,), ((1, -1, 0, 0),), f"zr:{r}")

    @classmethod
    def z2z2(cls) -> "GroupAction":
        return cls((2, 2), ((0, 1, 1, 0), (1, 0, 1, 0)), "z2z2")

    @classmethod
    def z3age2(cls) -> "GroupAction":
        return cls((3,), ((1, 1, 1, 0),), "z3age2")

    @classmethod
    def parse(cls, spec: str) -> "GroupAction":
        spec = spec.strip()
        if spec == "trivial":
            return cls.trivial()
        if spec == "z2z2":
            return cls.z2z2()
        if spec == "z3age2":
            return cls.z3age2()
        m = re.fullmatch(r"zr:(\d+)", spec)
        if m:
            r = int(m.group(1))
            if r < 1:
                raise UnsupportedGroup("zr:R needs R >= 1")
            return cls.zr(r)
        m = re.fullmatch(r"custom:orders=([\d,]+);W=([-\d,/|]+)", spec)
        if m:
            orders = tuple(int(x) for x in m.group(1).split(","))
            rows = tuple(tuple(int(x) for x in row.split(",")) for row in re.split(r"[/|]", m.group(2)))
            return cls(orders, rows, spec)
        raise UnsupportedGroup(f"unknown group spec {spec!r}")

    @property
    def is_trivial(self) -> bool:
        return all(r == 1 for r in self.orders)

    def weight(self, box) -> tuple:
        return tuple(sum(w * x for w, x in zip(row, box)) % r for r, row in zip(self.orders, self.weights))

    def exponent_weight(self, exps) -> tuple:
        """G-weight of a monomial given by integer exponents on (t1, t2, t3, t4, ...)."""
        return tuple(sum(w * x for w, x in zip(row, exps[:4])) % r for r, row in zip(self.orders, self.weights))

    @property
    def characters(self) -> list:
        return list(itertools.product(*(range(r) for r in self.orders)))

    def char_index(self, ch) -> int:
        idx = 0
        for r, c in zip(self.orders, ch):
            idx = idx * r + c
        return idx

    @property
    def series_names(self) -> tuple:
        chars = self.characters
        if not self.orders:
            return ("q",)
        sep = "" if max(self.orders) <= 10 else "_"
        return tuple("q" + sep.join(str(c) for c in reversed(ch)) for ch in chars)

    def elements(self) -> list:
        """All group elements as (order, exponent tuple (a1..a4) in units of 1/order)."""
        if not self.orders:
            return [(1, (0, 0, 0, 0))]
        n = math.lcm(*self.orders)
        seen = {}
        for ks in itertools.product(*(range(r) for r in self.orders)):
            a = tuple(
                sum(k * row[i] * (n // r) for k, r, row in zip(ks, self.orders, self.weights)) % n
                for i in range(4)
            )
            seen.setdefault(a, None)
        return [(n, a) for a in seen]


def color_of(box, action: GroupAction) -> int:
    return action.char_index(action.weight(box))


def color_counts(pi: SolidPartition, action: GroupAction) -> tuple:
    counts = [0] * len(action.characters)
    for b in pi:
        counts[color_of(b, action)] += 1
    return tuple(counts)


def enumerate_colored(profile: Sequence[int], action: GroupAction) -> Iterator[SolidPartition]:
    """Size-n partitions whose colour counts equal ``profile``, in canonical order."""
    profile = tuple(profile)
    if len(profile) != len(action.characters):
        raise ValueError(f"profile needs {len(action.characters)} entries")
    n = sum(profile)
    if n and profile[0] == 0:
        return
    for boxes in _dfs(n, lambda b: color_of(b, action), profile):
        yield SolidPartition(boxes)


def profiles(action: GroupAction, n: int) -> list:
    """All colour-count vectors of total n, sorted."""
    k = len(action.characters)
    out = []
    for cut in itertools.combinations(range(n + k - 1), k - 1):
        prev, vec = -1, []
        for c in cut + (n + k - 1,):
            vec.append(c - prev - 1)
            prev = c
        out.append(tuple(vec))
    return sorted(out)


def character(pi: SolidPartition) -> LaurentPoly:
    """Z_pi = sum over boxes of t1^i t2^j t3^k t4^l, CY-reduced."""
    return LaurentPoly.from_terms(COEFF, [((4 * i, 4 * j, 4 * k, 4 * l, 0), 1) for i, j, k, l in pi])


# sign rules ---------------------------------------------------------------

def diagonal_count(pi: SolidPartition) -> int:
    return sum(1 for a, b, c, d in pi if a == b == c and a < d)


@dataclass(frozen=True)
class SignRule:
    """Sign exponent as a '+'-joined sum of terms: size, r0, diag, or integers.

    ``default`` means r0+diag, which is size+diag for the trivial group.
    """

    spec: str = "default"

    def __post_init__(self):
        for t in self.terms:
            if t not in ("size", "r0", "diag") and not re.fullmatch(r"-?\d+", t):
                raise ValueError(f"unknown sign-rule term {t!r}")

    @property
    def terms(self) -> tuple:
        s = "r0+diag" if self.spec in ("default", "") else self.spec
        return tuple(t.strip() for t in s.split("+") if t.strip())

    def exponent(self, pi: SolidPartition, action: GroupAction | None = None) -> int:
        total = 0
        for t in self.terms:
            if t == "size":
                total += len(pi)
            elif t == "r0":
                total += len(pi) if action is None else color_counts(pi, action)[0]
            elif t == "diag":
                total += diagonal_count(pi)
            else:
                total += int(t)
        return total


def sign_exponent(pi: SolidPartition, action: GroupAction | None = None, rule: SignRule | str = "default") -> int:
    if isinstance(rule, str):
        rule = SignRule(rule)
    return rule.exponent(pi, action)
