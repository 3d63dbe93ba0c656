"""Standard normal distribution in binary64.

``cdf`` and ``sf`` go through ``math.erfc`` so both tails keep full relative
precision; ``ppf`` is the stdlib inverse (Wichura's AS241).
"""

import math
from statistics import NormalDist

_STD = NormalDist()
_SQRT2 = math.sqrt(2.0)


def cdf(x):
    return 0.5 * math.erfc(-x / _SQRT2)


def sf(x):
    """Upper tail ``1 - cdf(x)`` without cancellation."""
    return 0.5 * math.erfc(x / _SQRT2)


def ppf(p):
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {p}")
    return _STD.inv_cdf(p)


def isf(p):
    """``x`` with ``sf(x) == p``."""
    return -ppf(p)
