"""Session-wide fixtures.

The matrix groups take seconds to build and their per-group caches
(hyperplane actions, transversality table, collection workspaces) pay
off across test files, so they are shared at session scope.
"""

import pytest

from bct.reflection_groups import build_imprimitive, packaged_group


@pytest.fixture(scope="session")
def g25():
    return packaged_group("g25")


@pytest.fixture(scope="session")
def g26():
    return packaged_group("g26")


@pytest.fixture(scope="session")
def gmpn():
    """Cached builder for monomial groups: gmpn(m, p, n) -> Group."""
    cache = {}

    def build(m, p, n):
        key = (m, p, n)
        if key not in cache:
            cache[key] = build_imprimitive(m, p, n)
        return cache[key]

    return build
