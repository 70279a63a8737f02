"""Arbitrary-precision arithmetic layer: precision contexts, constants,
Chebyshev evaluation, and deterministic summation.

Everything numeric in this package is an mpmath ``mpf`` (real) or ``mpc``
(complex).  A :class:`PrecisionContext` fixes the decimal working precision;
operations that take a context run under ``ctx.workprec()``, operations
without one (``chebyshev_t``, the per-zero term functions in :mod:`.li`)
inherit whatever precision the caller has established, which is how mpmath
code composes.

Determinism contract: same inputs + same context produce bit-identical
results.  mpmath rounds every operation to nearest-even at the active
precision and has no hidden state besides that precision, so determinism
reduces to always executing the same operation sequence, which the engines
in this package do (fixed summation trees, fixed iteration order).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Context as DecimalContext
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from typing import Iterable, Union

from mpmath import mp, mpf, mpc

Real = mpf
Complex = mpc
Number = Union[mpf, mpc]

#: Extra decimal digits carried internally above the requested precision, so
#: that round-off stays far below every tolerance expressed in ctx digits.
GUARD_DIGITS = 10

# Euler-Mascheroni constant, 1040 decimal digits.  Stored as a literal rather
# than computed at runtime; the digits were generated with mpmath and
# independently confirmed against MPFR's const_euler (gmpy2) -- the two agree
# on every digit kept here.  tests/test_precision.py re-checks the prefix
# against an MPFR evaluation when gmpy2 is importable.
_EULER_GAMMA_DIGITS = (
    "577215664901532860606512090082402431042159335939923598805767234884867726"
    "777664670936947063291746749514631447249807082480960504014486542836224173"
    "997644923536253500333742937337737673942792595258247094916008735203948165"
    "670853233151776611528621199501507984793745085705740029921354786146694029"
    "604325421519058775535267331399254012967420513754139549111685102807984234"
    "877587205038431093997361372553060889331267600172479537836759271351577226"
    "102734929139407984301034177717780881549570661075010161916633401522789358"
    "679654972520362128792265559536696281763887927268013243101047650596370394"
    "739495763890657296792960100901512519595092224350140934987122824794974719"
    "564697631850667612906381105182419744486783638086174945516989279230187739"
    "107294578155431600500218284409605377243420328547836701517739439870030237"
    "033951832869000155819398804270741154222781971652301107356583396734871765"
    "049194181230004065469314299929777956930310050308630341856980323108369164"
    "002589297089098548682577736428825395492587362959613329857473930237343884"
    "70703702844129201664178502487333"
)

#: Largest ctx.digits for which the stored literal still covers the working
#: precision (digits + guard) with rounding headroom.
MAX_GAMMA_LITERAL_DIGITS = 1000


class PrecisionExceedsLiteralError(ValueError):
    """Requested precision is beyond what the stored constant literal covers."""


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (decimal digits) and rounding policy.

    Only round-to-nearest-even is supported; it is what mpmath applies at
    every operation.  ``digits`` is the precision of reported results; ten
    guard digits are carried internally.
    """

    digits: int = 50
    rounding: str = "nearest-even"

    def __post_init__(self):
        if self.digits < 15:
            raise ValueError(f"precision must be at least 15 digits, got {self.digits}")
        if self.rounding != "nearest-even":
            raise ValueError(f"unsupported rounding policy: {self.rounding!r}")

    @property
    def working_dps(self) -> int:
        return self.digits + GUARD_DIGITS

    def workprec(self):
        """Context manager setting mpmath's precision to digits + guard."""
        return mp.workdps(self.working_dps)

    def real(self, value) -> Real:
        """Parse/convert to an mpf at working precision."""
        with self.workprec():
            x = mpf(value)
        _ensure_finite(x)
        return x

    def complex(self, re, im=0) -> Complex:
        with self.workprec():
            z = mpc(mpf(re), mpf(im))
        _ensure_finite(z)
        return z

    def to_str(self, value: Number, digits: int | None = None) -> str:
        """Decimal string at ``digits`` significant digits (default ctx.digits)."""
        return to_decimal_string(value, self.digits if digits is None else digits)


def _ensure_finite(x: Number) -> Number:
    if isinstance(x, mpc):
        _ensure_finite(x.real)
        _ensure_finite(x.imag)
        return x
    if not mp.isfinite(x):
        raise ValueError(f"non-finite value escaped a computation: {x}")
    return x


def euler_gamma(ctx: PrecisionContext) -> Real:
    """Euler-Mascheroni constant, correct to ctx.digits.

    Raises :class:`PrecisionExceedsLiteralError` when the request exceeds the
    stored 1040-digit literal (limit: 1000 digits).
    """
    if ctx.digits > MAX_GAMMA_LITERAL_DIGITS:
        raise PrecisionExceedsLiteralError(
            f"euler_gamma supports at most {MAX_GAMMA_LITERAL_DIGITS} digits, "
            f"got {ctx.digits}"
        )
    with ctx.workprec():
        return mpf("0." + _EULER_GAMMA_DIGITS)


def log_four_pi(ctx: PrecisionContext) -> Real:
    """log(4*pi) at working precision (computed, not stored)."""
    with ctx.workprec():
        return mp.log(4 * mp.pi)


def corollary_constant(ctx: PrecisionContext) -> Real:
    """The second-difference bound 2 + gamma - log(4*pi) = 0.04619...

    Equals the full sum over nontrivial zeros of 1/(rho(1-rho)), i.e. twice
    the first Li coefficient.
    """
    g = euler_gamma(ctx)
    with ctx.workprec():
        return _ensure_finite(2 + g - mp.log(4 * mp.pi))


def chebyshev_t(n: int, z: Number) -> Number:
    """Chebyshev polynomial of the first kind T_n(z) by the three-term
    recurrence T_0 = 1, T_1 = z, T_{k+1} = 2 z T_k - T_{k-1}.

    Runs at the caller's current mpmath precision.  The recurrence is used
    for every argument; at arbitrary precision there is no stability reason
    to special-case |z| <= 1.
    """
    if n < 0:
        raise ValueError(f"chebyshev_t degree must be >= 0, got {n}")
    if not isinstance(z, (mpf, mpc)):
        z = mp.mpmathify(z)
    one = mpf(1)
    if n == 0:
        return one if isinstance(z, mpf) else mpc(one)
    t_prev, t_cur = one, z
    for _ in range(n - 1):
        t_prev, t_cur = t_cur, 2 * z * t_cur - t_prev
    return _ensure_finite(t_cur)


def pairwise_sum(terms: Iterable[Number], ctx: PrecisionContext) -> Number:
    """Deterministic balanced-binary-tree sum over the given order.

    Adjacent elements are combined level by level, so the reduction tree is a
    function of the sequence length alone.  Re-running the same sequence
    gives a bit-identical result regardless of thread count (the reduction
    itself is sequential; parallel callers must sum chunk results with this
    same function, in index order).
    """
    level = list(terms)
    if not level:
        return ctx.real(0)
    with ctx.workprec():
        while len(level) > 1:
            nxt = [level[i] + level[i + 1] for i in range(0, len(level) - 1, 2)]
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
    return _ensure_finite(level[0])


def to_decimal_string(value: Number, digits: int) -> str:
    """Render to a decimal string with ``digits`` significant digits,
    round-half-even, trailing zeros preserved.

    The mpf is converted to an exact Decimal (binary floats are dyadic
    rationals) and rounded once, so the output is deterministic and does not
    depend on mpmath's string formatter.  Complex values render as
    ``re+imj`` / ``re-imj``.
    """
    if digits < 1:
        raise ValueError("need at least one significant digit")
    if isinstance(value, mpc):
        re_s = to_decimal_string(value.real, digits)
        im = value.imag
        im_s = to_decimal_string(abs(im), digits)
        sign = "-" if im < 0 else "+"
        return f"{re_s}{sign}{im_s}j"
    x = value if isinstance(value, mpf) else mpf(value)
    _ensure_finite(x)
    if x == 0:
        return "0"
    sign, man, exp, _ = x._mpf_
    with localcontext() as lc:
        # exact: 2**exp has at most |exp| decimal digits of fraction
        lc.prec = len(str(man)) + abs(exp) + digits + 10
        d = Decimal(man) * (Decimal(2) ** exp)
    rounded = DecimalContext(prec=digits, rounding=ROUND_HALF_EVEN).plus(d)
    s = str(rounded)
    return "-" + s if sign else s
