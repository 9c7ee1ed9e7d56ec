import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

# filled by test_acceptance; one (criterion, ok, detail) per criterion run
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {k:2d}. {name}: {detail}")
