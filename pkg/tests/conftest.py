import sys


def pytest_terminal_summary(terminalreporter):
    for name, mod in list(sys.modules.items()):
        if name.rsplit(".", 1)[-1] == "test_acceptance" and getattr(mod, "RESULTS", None):
            terminalreporter.section("acceptance criteria")
            for key in sorted(mod.RESULTS):
                terminalreporter.write_line(mod.RESULTS[key])
