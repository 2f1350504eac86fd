import pytest

VARIANTS = ("standard", "alt")


@pytest.fixture(params=VARIANTS)
def variant(request):
    """Every representation-dependent check runs under two valid Clifford representations."""
    return request.param
