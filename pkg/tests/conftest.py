import pytest
from hypothesis import HealthCheck, settings

from boxball import _kernels

settings.register_profile(
    "exact",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # jit compilation must not land inside a timed or hypothesis-managed test
    _kernels.warmup()
