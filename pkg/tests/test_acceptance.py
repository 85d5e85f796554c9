"""End-to-end acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line (collected again in
the terminal summary by conftest.py).  A criterion fails when any of its checks
fails or when it overruns its runtime budget.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

from __future__ import annotations

import os
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from _oracles import brute_force_count, growth_oracle
from dt4.formulas import pt_consistency, verify_crc, verify_orbifold_conjecture
from dt4.formulas.limits import cohomological_check, dimred_check, insertion_free_check
from dt4.partitions import GroupAction, enumerate_solid_partitions
from dt4.vertex import b_series_check, cohomological_map, contribution, partitions_up_to

pytestmark = pytest.mark.acceptance

RESULTS: list = []   # (number, title, ok, seconds, note), read by conftest


class Criterion:
    def __init__(self, number, title, budget_s):
        self.number, self.title, self.budget = number, title, budget_s
        self.failures: list = []
        self.notes: list = []

    def check(self, ok: bool, what: str):
        if not ok:
            self.failures.append(what)

    def report(self, rep, what: str):
        bad = rep.first_failure()
        self.check(rep.passed, f"{what}: first failure {bad.name} at {bad.exponent}" if bad else what)
        self.notes.append(f"{what}: {len(rep.checks)} checks")


@contextmanager
def criterion(number: int, title: str, budget_s: float):
    c = Criterion(number, title, budget_s)
    t0 = time.perf_counter()
    yield c
    elapsed = time.perf_counter() - t0
    c.check(elapsed <= budget_s, f"runtime {elapsed:.1f}s over budget {budget_s:.0f}s")
    ok = not c.failures
    note = "; ".join(c.failures) if c.failures else "; ".join(c.notes)
    RESULTS.append((number, title, ok, elapsed, note))
    print(f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'} [{elapsed:7.1f}s] {title} -- {note}")
    assert ok, f"criterion {number}: {note}"


def test_c01_nekrasov_c4():
    with criterion(1, "C^4 partition function = Exp(F) to q^4", 300) as c:
        c.report(verify_orbifold_conjecture("trivial", 3, "exact"), "exact D=3")
        c.report(verify_orbifold_conjecture("trivial", 4, "modular"), "modular D=4")


def test_c02_z2_orbifold():
    with criterion(2, "Z_2 orbifold conjecture", 1800) as c:
        c.report(verify_orbifold_conjecture("zr:2", 5, "modular"), "modular D=5")
        c.report(verify_orbifold_conjecture("zr:2", 3, "exact"), "exact D=3")


def test_c03_z3_orbifold():
    with criterion(3, "Z_3 orbifold conjecture to degree 4", 3600) as c:
        c.report(verify_orbifold_conjecture("zr:3", 4, "modular"), "modular D=4")
        c.report(verify_orbifold_conjecture("zr:3", 4, "exact"), "exact D=4")


def test_c04_z2z2_orbifold():
    with criterion(4, "Z_2xZ_2 orbifold conjecture to degree 4", 3600) as c:
        c.report(verify_orbifold_conjecture("z2z2", 4, "modular"), "modular D=4")
        c.report(verify_orbifold_conjecture("z2z2", 4, "exact"), "exact D=4")


def test_c05_sign_rule_sensitivity():
    with criterion(5, "dropping the diagonal sign term breaks criterion 1 by q^2", 300) as c:
        for mode, D in (("exact", 2), ("modular", 4)):
            rep = verify_orbifold_conjecture("trivial", D, mode, sign_rule="size")
            bad = rep.first_failure()
            c.check(bad is not None, f"{mode}: no failure with the diagonal term removed")
            if bad is not None:
                c.check(sum(bad.exponent) <= 2, f"{mode}: first failure only at {bad.exponent}")
                c.notes.append(f"{mode} D={D} first fails at q^{sum(bad.exponent)}")


def test_c06_crc():
    with criterion(6, "crepant resolution identity with sign vector", 60) as c:
        for g in ("zr:2", "zr:3", "zr:4", "z2z2"):
            rep = verify_crc(g)
            c.report(rep, g)
            c.check(rep.sign_vector is not None, f"{g}: no sign vector reported")
            flips = [x for x in rep.checks if x.name.startswith("flip")]
            c.check(len(flips) == len(rep.sign_vector or ()), f"{g}: missing single-flip checks")
            c.notes[-1] += f" signs={rep.sign_vector}"


def test_c07_pt_consistency():
    with criterion(7, "PT expansion at n=0,1 and irreducible-class identity", 300) as c:
        for g in ("zr:2", "zr:3", "zr:4", "z2z2"):
            c.report(pt_consistency(g, order=4), g)


def test_c08_dimensional_reduction():
    with criterion(8, "y=t4 reduction matches F^3D; off-threefold boxes vanish", 300) as c:
        for g in ("zr:2", "z2z2"):
            c.report(dimred_check(g, 3), g)


def test_c09_cohomological_limit():
    with criterion(9, "cohomological limit (fixed points and MacMahon form)", 600) as c:
        n = 0
        for spec in ("trivial", "zr:2", "zr:3", "zr:4", "z2z2", "z3age2"):
            g = None if spec == "trivial" else GroupAction.parse(spec)
            for pi in partitions_up_to(3):
                ctr = contribution(pi, g)
                if ctr.value.is_zero:
                    continue
                lead, _ = b_series_check(ctr.signed())
                c.check(lead.equals(cohomological_map(ctr)), f"{spec}: b-series at {pi.to_line()}")
                n += 1
        c.notes.append(f"{n} fixed points")
        c.report(cohomological_check("zr:2", 3), "zr:2 series D=3")


def test_c10_insertion_free_limit():
    with criterion(10, "insertion-free limit (m-degree and closed forms)", 600) as c:
        for g in ("trivial", "zr:2", "zr:3", "zr:4", "z2z2"):
            c.report(insertion_free_check(g, 3), g)


def test_c11_partition_counts():
    with criterion(11, "solid partition counts n=0..8 vs independent oracles", 300) as c:
        oracle = growth_oracle(8)
        got = [sum(1 for _ in enumerate_solid_partitions(n)) for n in range(9)]
        c.check(got == oracle, f"enumerator {got} vs oracle {oracle}")
        for n in range(5):
            c.check(got[n] == brute_force_count(n), f"n={n} vs brute force")
        c.notes.append(f"counts {got}")


def test_c12_property_suites():
    with criterion(12, "property suites (exactalg, partitions, vertex)", 300) as c:
        root = Path(__file__).resolve().parent
        env = dict(os.environ, PYTHONHASHSEED="0")
        proc = subprocess.run(
            [sys.executable, "-m", "pytest", "-q", "-m", "property", "-p", "no:cacheprovider",
             str(root / "test_exactalg.py"), str(root / "test_partitions.py"), str(root / "test_vertex.py")],
            capture_output=True, text=True, env=env, cwd=root.parent, check=False,
        )
        tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
        c.check(proc.returncode == 0, f"property run: {tail}")
        c.notes.append(tail)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
