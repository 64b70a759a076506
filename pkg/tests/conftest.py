import itertools
import sys

from hypothesis import strategies as st

from raagkit.graphs import SimpleGraph


@st.composite
def graphs(draw, min_size=1, max_size=5):
    n = draw(st.integers(min_size, max_size))
    names = "abcdefgh"[:n]
    pairs = list(itertools.combinations(names, 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimpleGraph(names, [p for p, keep in zip(pairs, mask) if keep])



def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module and module.SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in module.SUMMARY:
            terminalreporter.write_line(line)
