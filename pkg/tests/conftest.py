import pytest

from reebreal.zoo import random_corpus

CORPUS_SEED = 2024
CORPUS_SIZE = 250

# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def corpus():
    return random_corpus(CORPUS_SEED, CORPUS_SIZE)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
