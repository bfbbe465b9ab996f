import itertools
import sys

import pytest

from qlaguerre import _kernels
from qlaguerre.marked import MarkedPM
from qlaguerre.matchings import Matching

FIG1 = Matching.from_edges(7, [(1, 4), (2, 6), (3, 2), (5, 1), (7, 3)])
FIG4 = MarkedPM.build((2, 3, 2), (2, 1, 4, 7, 3, 6, 5), {2, 4, 7})
FIG5 = MarkedPM.build((3, 2), (3, 4, 2, 1, 5), {2, 4})
FIG6 = MarkedPM.build((3, 4), (2, 1, 6, 5, 7, 4, 3), {3, 5, 6, 7})
FIG7 = MarkedPM.build((2, 5), (2, 3, 1, 7, 5, 4, 6), {2, 3, 4, 6})


def brute_cr(s):
    """Permutation crossings counted straight from the two inequalities (s is 1-based)."""
    n = len(s)
    total = 0
    for i, j in itertools.combinations(range(1, n + 1), 2):
        a, b = s[i - 1], s[j - 1]
        total += (i < j <= a < b) or (a < b < i < j)
    return total


@pytest.fixture(params=_kernels.available_backends())
def kernels(request):
    return _kernels.get_kernels(request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
