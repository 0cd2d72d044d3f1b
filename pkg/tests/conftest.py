import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_acceptance_results: list[tuple[str, str]] = []


def record_acceptance(name: str, passed: bool, note: str = "") -> None:
    """Collect a per-criterion verdict for the end-of-run summary."""
    suffix = f" ({note})" if note else ""
    _acceptance_results.append((name, ("PASS" if passed else "FAIL") + suffix))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, verdict in _acceptance_results:
        terminalreporter.write_line(f"{verdict:>4}  {name}")
