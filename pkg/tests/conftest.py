import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from acceptance_log import RESULTS  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        ok, secs, limit, note = RESULTS[num]
        line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {secs:.2f}s (limit {limit}s)"
        if note:
            line += f" - {note}"
        terminalreporter.write_line(line)
