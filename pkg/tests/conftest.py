import pytest

from detfactor.ring import Thresholds, make_context


def miller_rabin(n: int) -> bool:
    """Deterministic for n < 3.3e24 with these bases; independent of the package."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def brute_factor(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


@pytest.fixture
def ctx1009():
    return make_context(1009)


@pytest.fixture
def eager():
    """Thresholds that push every routine onto its fast path even for tiny inputs."""
    return Thresholds(schoolbook_degree=0, multipoint_min_points=1, drill_tree_size=0)
