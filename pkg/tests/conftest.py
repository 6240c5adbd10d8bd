def pytest_terminal_summary(terminalreporter):
    # repeat the acceptance lines at the end of the run, in criterion order
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
