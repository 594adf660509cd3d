import warnings

import numpy as np
import pytest
from hypothesis import settings

from marginpursuit.data import Dataset, SplitSpec, balanced_subsample, two_gaussians

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")


def random_dataset(rng, n, d):
    X = rng.normal(size=(n, d))
    y = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    return Dataset(X, y)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def gaussian_split():
    """The seeded desk-scale fixture: 200 training points in 5 dimensions."""
    full = two_gaussians(1000, 5, separation=5.0, seed=7)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return balanced_subsample(full, SplitSpec(200, seed=7))


_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    num, title = mark.kwargs["criterion"], mark.kwargs["title"]
    prev = _ACCEPTANCE.get(num, (title, True, ""))
    detail = getattr(item, "acceptance_detail", "")
    _ACCEPTANCE[num] = (title, prev[1] and rep.passed, detail or prev[2])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[num]
        line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
