import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, title, ok, seconds, note in sorted(results):
        tr.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'} [{seconds:7.1f}s] {title} -- {note}")
    passed = sum(1 for r in results if r[2])
    tr.write_line(f"{passed}/{len(results)} acceptance criteria passed")
