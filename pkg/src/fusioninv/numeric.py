"""Numeric policy: arbitrary-precision complex values and tolerances.

Values are :class:`mpmath.mpc` numbers computed in mpmath's global context.
The working precision is set with :func:`set_precision` (default 50 digits).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath

DEFAULT_PRECISION = 50
DEFAULT_TOL = 1e-9
DEFAULT_ZERO_TOL = 1e-9
DEFAULT_MAX_DENOMINATOR = 10**6

mpmath.mp.dps = DEFAULT_PRECISION


@dataclass(frozen=True)
class Tolerance:
    tol: float = DEFAULT_TOL
    zero_tol: float = DEFAULT_ZERO_TOL

    def __post_init__(self):
        if self.tol <= 0 or self.zero_tol <= 0:
            raise ValueError("tolerances must be positive")


def set_precision(digits: int) -> None:
    if digits < 20:
        raise ValueError(f"precision must be at least 20 digits, got {digits}")
    mpmath.mp.dps = digits


def get_precision() -> int:
    return mpmath.mp.dps


def to_complex(x) -> mpmath.mpc:
    """Convert ints, Fractions, floats, strings and mpmath numbers to ``mpc``."""
    if isinstance(x, mpmath.mpc):
        return x
    if isinstance(x, Rational):
        x = Fraction(x)
        return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
    return mpmath.mpc(x)


def parse_complex(re: str, im: str = "0") -> mpmath.mpc:
    """Parse decimal strings at the current working precision."""
    try:
        return mpmath.mpc(mpmath.mpf(str(re)), mpmath.mpf(str(im)))
    except (ValueError, TypeError) as exc:
        raise ValueError(f"not a decimal number: re={re!r} im={im!r}") from exc


def format_real(x: mpmath.mpf, digits: int | None = None) -> str:
    digits = digits or mpmath.mp.dps
    if x == 0:
        return "0"
    return mpmath.nstr(x, digits, strip_zeros=True, min_fixed=-digits, max_fixed=digits)


def format_complex(z) -> tuple[str, str]:
    z = to_complex(z)
    return format_real(z.real), format_real(z.imag)


def is_zero(z, zero_tol: float = DEFAULT_ZERO_TOL) -> bool:
    return abs(to_complex(z)) < zero_tol


def close(x, y, tol: float = DEFAULT_TOL) -> bool:
    """Equality under the tolerance policy; exact when both sides are rational."""
    if isinstance(x, Rational) and isinstance(y, Rational):
        return Fraction(x) == Fraction(y)
    return abs(to_complex(x) - to_complex(y)) < tol


def mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    """Exact value of a binary float."""
    x = mpmath.mpf(x)
    man, exp = x.man_exp  # man_exp drops the sign
    man = -abs(int(man)) if x < 0 else abs(int(man))
    if exp >= 0:
        return Fraction(man << int(exp))
    return Fraction(man, 1 << int(-exp))


def reconstruct_rational(x, tol: float = DEFAULT_TOL, max_denominator: int = DEFAULT_MAX_DENOMINATOR,
                         stable: bool = True) -> Fraction | None:
    """Best continued-fraction approximation of a real-valued ``x``.

    Returns ``None`` when ``x`` has a non-negligible imaginary part or no
    fraction with denominator at most ``max_denominator`` lies within ``tol``.

    With ``stable`` the fraction must also survive a search with the squared
    denominator bound. Convergents of an irrational number come within about
    ``1/q**2`` of it, so with ``q`` near 10**6 almost any real number passes a
    1e-9 test; a true rational, known to working precision, keeps its fraction.
    """
    if isinstance(x, Rational):
        q = Fraction(x)
        return q if q.denominator <= max_denominator else None
    z = to_complex(x)
    if abs(z.imag) >= tol:
        return None
    exact = mpf_to_fraction(z.real)
    q = exact.limit_denominator(max_denominator)
    if abs(z.real - to_complex(q).real) >= tol:
        return None
    if stable and exact.limit_denominator(max_denominator ** 2) != q:
        return None
    return q
