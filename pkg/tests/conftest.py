import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            m = _CRITERION.search(nodeid)
            if m and getattr(report, "when", "call") == "call":
                lines.append((int(m.group(1)), m.group(2), "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for num, name, verdict in sorted(lines):
            terminalreporter.write_line(f"criterion {num} ({name.replace('_', ' ')}): {verdict}")
