"""Exact rational coefficient type.

gmpy2.mpq when available, fractions.Fraction otherwise.  Both are exact and
interchangeable; nothing in the package depends on which one is active.
"""

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    from fractions import Fraction as Q

ZERO = Q(0)
ONE = Q(1)
