import sys


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance-criterion report lines after the run."""
    for name, module in sys.modules.items():
        if name.rsplit(".", 1)[-1] == "test_acceptance":
            lines = getattr(module, "REPORT_LINES", None)
            if lines:
                terminalreporter.section("acceptance criteria")
                for line in lines:
                    terminalreporter.line(line)
            return
