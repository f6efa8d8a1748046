import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import pytest  # noqa: E402

from numkernel import EvalBudget  # noqa: E402


@pytest.fixture
def budget():
    return EvalBudget()


@pytest.fixture
def sign_budget():
    return EvalBudget.for_signs()
