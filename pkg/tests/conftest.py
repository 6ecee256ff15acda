import pytest

from hopfmod.builtins import builtin_algebra


@pytest.fixture(scope="session")
def get_alg():
    """Shared algebra instances so per-algebra caches survive across tests."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = builtin_algebra(name)
        return cache[name]

    return get
