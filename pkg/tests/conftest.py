import pytest

# Lines appended by the acceptance suite, echoed after the run so they show
# up even when output capture is on.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def corpus3():
    from situskit.fostruct import binary_corpus

    return [M for M in binary_corpus(3) if len(M) == 3]
