import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from symlie.core import AlgebraContext  # noqa: E402


@pytest.fixture
def xyz5():
    return AlgebraContext.of([("x", 0), ("y", 0), ("z", 0)], 5)


@pytest.fixture
def graded4():
    # a, b, e are odd, x is even
    return AlgebraContext.of([("a", -1), ("b", -1), ("x", 0), ("e", 1)], 4)
