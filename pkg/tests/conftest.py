def pytest_terminal_summary(terminalreporter):
    # surface the acceptance verdicts even under captured output
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "GATE_LINES", None) if module else None
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)
