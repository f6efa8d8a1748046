import threading
from fractions import Fraction
from numbers import Integral

from .errors import DomainError

_bernoulli_cache: dict[int, Fraction] = {}
_bernoulli_lock = threading.Lock()

_sigma_tables: dict[int, list[int]] = {}
_sigma_lock = threading.Lock()


def is_int(value) -> bool:
    return isinstance(value, Integral) and not isinstance(value, bool)


def _akiyama_tanigawa(n: int) -> Fraction:
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number B_k for even k >= 2 (B_2 = 1/6, B_4 = -1/30)."""
    if not is_int(k) or k < 2 or k % 2:
        raise DomainError(f"bernoulli expects an even integer >= 2, got {k!r}")
    k = int(k)
    value = _bernoulli_cache.get(k)
    if value is None:
        with _bernoulli_lock:
            value = _bernoulli_cache.get(k)
            if value is None:
                value = _bernoulli_cache[k] = _akiyama_tanigawa(k)
    return value


def eisenstein_coefficient(k: int) -> Fraction:
    """-2k/B_k, the factor in front of sum sigma_{k-1}(n) q^n in E_k."""
    return Fraction(-2 * k) / bernoulli(k)


def sigma_table(e: int, n_max: int) -> list[int]:
    """Return a list whose n-th entry is sigma_e(n) for 1 <= n <= n_max (entry 0 is 0)."""
    table = _sigma_tables.get(e)
    if table is not None and len(table) > n_max:
        return table
    with _sigma_lock:
        table = _sigma_tables.get(e)
        if table is not None and len(table) > n_max:
            return table
        size = max(n_max, 2 * (len(table) - 1) if table else 64)
        fresh = [0] * (size + 1)
        for d in range(1, size + 1):
            power = d**e
            for multiple in range(d, size + 1, d):
                fresh[multiple] += power
        _sigma_tables[e] = fresh
        return fresh


def divisor_power_sum(n: int, e: int) -> int:
    """sigma_e(n), the sum of the e-th powers of the positive divisors of n."""
    if not is_int(n) or n <= 0:
        raise DomainError(f"divisor_power_sum expects n >= 1, got {n!r}")
    if not is_int(e) or e < 0:
        raise DomainError(f"divisor_power_sum expects e >= 0, got {e!r}")
    return sigma_table(int(e), int(n))[int(n)]
