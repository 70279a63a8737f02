"""Li coefficient engines and recurrence verifiers.

The n-th Li coefficient is the sum over nontrivial zeros of 1 - (1 - 1/rho)^n.
With t = 1 - 1/rho (so t(rho) t(1-rho) = 1, and |t| = 1 exactly on the
critical line) the same quantity has four more computable forms:

* ``direct``     sum of 1 - t^n                       (the definition)
* ``chebyshev``  sum of 1 - T_n(x), x = (t + 1/t)/2 = 1 - 1/(2 rho (1-rho))
* ``sin2``       -(1/2) sum of (t^{n/2} - t^{-n/2})^2, one t per rho; on the
                 line each conjugate pair contributes 4 sin^2(n theta / 2),
                 which is the nonnegativity witness
* ``rec1``       lambda_n = lambda_{n-1} + sum (1/rho) t^{n-1}
* ``rec2``       lambda_n = 2 lambda_{n-1} - lambda_{n-2} - sum (1/rho^2) t^{n-2}

The chebyshev and sin2 routes require the input multiset to be symmetric
under rho -> 1 - rho (their per-rho terms average the rho and 1-rho
contributions); this is a checked precondition, not an assumption.

Catalog sums run over conjugate pairs in increasing-gamma order: each table
ordinate contributes one real pair term (rho and its conjugate 1 - rho
together), reduced with the deterministic pairwise tree.  Powers of t are
carried incrementally across n within a series computation, so a whole
series costs O(zeros * n_max) multiplications.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

from mpmath import mp, mpf, mpc

from .precision import PrecisionContext, Real, Complex, chebyshev_t, pairwise_sum
from .zeros import (InvalidZeroError, SyntheticZeroSet, ZeroCatalog, tail_bound)


class SymmetryError(ValueError):
    """chebyshev / sin2 asked for on a multiset not closed under rho -> 1-rho."""


class Method(str, Enum):
    DIRECT_KEIPER = "direct"
    CHEBYSHEV = "chebyshev"
    SIN_SQUARED = "sin2"
    RECURRENCE_T1 = "rec1"
    RECURRENCE_T2 = "rec2"

    @classmethod
    def parse(cls, token: str) -> "Method":
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown method {token!r}; expected one of "
                f"{[m.value for m in cls]}") from None


ALL_METHODS = tuple(Method)

Source = Union[ZeroCatalog, SyntheticZeroSet]


@dataclass(frozen=True)
class LiValue:
    """One computed Li coefficient with its provenance.

    ``tail`` bounds the absolute truncation error from zeros beyond the
    table (0 for synthetic multisets, which are summed exactly).
    ``max_gamma`` is 0 for synthetic inputs.
    """

    n: int
    value: Real
    method: Method
    zeros_used: int
    max_gamma: Real
    tail: Real
    ctx_digits: int


# ---------------------------------------------------------------------------
# pointwise transforms and per-zero terms (run at the caller's precision)

def t_of_rho(rho: Complex) -> Complex:
    """t = 1 - 1/rho = (rho - 1)/rho; t(rho) * t(1-rho) = 1."""
    rho = rho if isinstance(rho, (mpf, mpc)) else mp.mpmathify(rho)
    if rho == 0:
        raise InvalidZeroError("t_of_rho undefined at rho = 0")
    return 1 - 1 / rho


def x_of_rho(rho: Complex) -> Complex:
    """x = (t + 1/t)/2 = 1 - 1/(2 rho (1 - rho)); invariant under rho -> 1-rho."""
    rho = rho if isinstance(rho, (mpf, mpc)) else mp.mpmathify(rho)
    if rho == 0 or rho == 1:
        raise InvalidZeroError("x_of_rho undefined at rho in {0, 1}")
    return 1 - 1 / (2 * rho * (1 - rho))


def theta_of_gamma(g: Real) -> Real:
    """Argument of t on the critical line: t(1/2 + i g) = e^{i theta} with
    theta = pi - 2 arctan(2 g), in (0, pi] for g >= 0."""
    g = mpf(g)
    if g < 0:
        raise ValueError(f"ordinate must be >= 0, got {g}")
    return mp.pi - 2 * mp.atan(2 * g)


def term_keiper(rho: Complex, n: int) -> Complex:
    """1 - t^n, the definitional summand."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return 1 - t_of_rho(rho) ** n


def term_thm1(rho: Complex, n: int) -> Complex:
    """(1/rho) t^{n-1}, the first-difference summand."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rho = rho if isinstance(rho, (mpf, mpc)) else mp.mpmathify(rho)
    if rho == 0:
        raise InvalidZeroError("term_thm1 undefined at rho = 0")
    return (1 / rho) * (1 - 1 / rho) ** (n - 1)


def term_thm2(rho: Complex, n: int) -> Complex:
    """(1/rho^2) t^{n-2}, the second-difference summand."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    rho = rho if isinstance(rho, (mpf, mpc)) else mp.mpmathify(rho)
    if rho == 0:
        raise InvalidZeroError("term_thm2 undefined at rho = 0")
    return (1 / rho ** 2) * (1 - 1 / rho) ** (n - 2)


# ---------------------------------------------------------------------------
# series engines

def _catalog_series_values(cat: ZeroCatalog, n_max: int, method: Method,
                           ctx: PrecisionContext) -> list[Real]:
    """lambda_1 .. lambda_{n_max} over a catalog, one real pair term per
    ordinate, increasing gamma, pairwise-tree reduction."""
    values: list[Real] = []
    with ctx.workprec():
        gammas = [mpf(o.gamma) for o in cat.ordinates]
        quarter = mpf(1) / 4
        if method is Method.DIRECT_KEIPER:
            ts = [t_of_rho(mpc(mpf("0.5"), g)) for g in gammas]
            pows = [mpc(1) for _ in ts]
            for _ in range(n_max):
                pows = [p * t for p, t in zip(pows, ts)]
                values.append(pairwise_sum([2 - 2 * p.real for p in pows], ctx))
        elif method is Method.CHEBYSHEV:
            xs = [1 - 1 / (2 * (quarter + g * g)) for g in gammas]
            prev = [mpf(1)] * len(xs)
            cur = list(xs)
            for n in range(1, n_max + 1):
                values.append(pairwise_sum([2 * (1 - c) for c in cur], ctx))
                prev, cur = cur, [2 * x * c - p for x, c, p in zip(xs, cur, prev)]
        elif method is Method.SIN_SQUARED:
            halves = [(mp.pi - 2 * mp.atan(2 * g)) / 2 for g in gammas]
            for n in range(1, n_max + 1):
                values.append(pairwise_sum(
                    [4 * mp.sin(n * h) ** 2 for h in halves], ctx))
        elif method is Method.RECURRENCE_T1:
            ts = [t_of_rho(mpc(mpf("0.5"), g)) for g in gammas]
            inv_rho = [1 / mpc(mpf("0.5"), g) for g in gammas]
            pows = [mpc(1) for _ in ts]
            pows = [p * t for p, t in zip(pows, ts)]
            lam = pairwise_sum([2 - 2 * p.real for p in pows], ctx)
            values.append(lam)
            pows = [mpc(1) for _ in ts]
            for n in range(2, n_max + 1):
                pows = [p * t for p, t in zip(pows, ts)]  # t^{n-1}
                step = pairwise_sum(
                    [2 * (w * p).real for w, p in zip(inv_rho, pows)], ctx)
                lam = lam + step
                values.append(lam)
        elif method is Method.RECURRENCE_T2:
            ts = [t_of_rho(mpc(mpf("0.5"), g)) for g in gammas]
            inv_rho2 = [1 / mpc(mpf("0.5"), g) ** 2 for g in gammas]
            pow1 = [t for t in ts]
            lam1 = pairwise_sum([2 - 2 * p.real for p in pow1], ctx)
            values.append(lam1)
            if n_max >= 2:
                pow2 = [p * t for p, t in zip(pow1, ts)]
                lam2 = pairwise_sum([2 - 2 * p.real for p in pow2], ctx)
                values.append(lam2)
                prev2, prev1 = lam1, lam2
                pows = [mpc(1) for _ in ts]
                pows = [p * t for p, t in zip(pows, ts)]  # t^{n-2} at n=3
                for n in range(3, n_max + 1):
                    step = pairwise_sum(
                        [2 * (w * p).real for w, p in zip(inv_rho2, pows)], ctx)
                    lam = 2 * prev1 - prev2 - step
                    values.append(lam)
                    prev2, prev1 = prev1, lam
                    pows = [p * t for p, t in zip(pows, ts)]
        else:  # pragma: no cover
            raise ValueError(f"unhandled method {method}")
    return values[:n_max]


def _synthetic_series_values(zset: SyntheticZeroSet, n_max: int, method: Method,
                             ctx: PrecisionContext) -> list[Complex]:
    """Exact lambda_1 .. lambda_{n_max} over a finite multiset (complex)."""
    if method in (Method.CHEBYSHEV, Method.SIN_SQUARED) and not zset.symmetric:
        raise SymmetryError(
            f"method {method.value} requires a multiset symmetric under "
            "rho -> 1 - rho; use close_under_symmetry first")
    values: list[Complex] = []
    with ctx.workprec():
        rhos = [mpc(r) for r in zset.rhos]
        if method is Method.DIRECT_KEIPER:
            ts = [t_of_rho(r) for r in rhos]
            pows = [mpc(1) for _ in ts]
            for _ in range(n_max):
                pows = [p * t for p, t in zip(pows, ts)]
                values.append(pairwise_sum([1 - p for p in pows], ctx))
        elif method is Method.CHEBYSHEV:
            xs = [x_of_rho(r) for r in rhos]
            prev = [mpc(1)] * len(xs)
            cur = list(xs)
            for n in range(1, n_max + 1):
                values.append(pairwise_sum([1 - c for c in cur], ctx))
                prev, cur = cur, [2 * x * c - p for x, c, p in zip(xs, cur, prev)]
        elif method is Method.SIN_SQUARED:
            # literal half-integer powers; the squared difference does not
            # depend on which square root of t is taken
            roots = [mp.sqrt(t_of_rho(r)) for r in rhos]
            pows = [mpc(1) for _ in roots]
            half = mpf(1) / 2
            for _ in range(n_max):
                pows = [p * r for p, r in zip(pows, roots)]
                values.append(pairwise_sum(
                    [-half * (p - 1 / p) ** 2 for p in pows], ctx))
        elif method is Method.RECURRENCE_T1:
            ts = [t_of_rho(r) for r in rhos]
            inv_rho = [1 / r for r in rhos]
            lam = pairwise_sum([1 - t for t in ts], ctx)
            values.append(lam)
            pows = [mpc(1) for _ in ts]
            for n in range(2, n_max + 1):
                pows = [p * t for p, t in zip(pows, ts)]
                lam = lam + pairwise_sum(
                    [w * p for w, p in zip(inv_rho, pows)], ctx)
                values.append(lam)
        elif method is Method.RECURRENCE_T2:
            ts = [t_of_rho(r) for r in rhos]
            inv_rho2 = [1 / r ** 2 for r in rhos]
            lam1 = pairwise_sum([1 - t for t in ts], ctx)
            values.append(lam1)
            if n_max >= 2:
                lam2 = pairwise_sum([1 - t * t for t in ts], ctx)
                values.append(lam2)
                prev2, prev1 = lam1, lam2
                pows = [t for t in ts]  # t^{n-2} at n=3
                for n in range(3, n_max + 1):
                    step = pairwise_sum(
                        [w * p for w, p in zip(inv_rho2, pows)], ctx)
                    lam = 2 * prev1 - prev2 - step
                    values.append(lam)
                    prev2, prev1 = prev1, lam
                    pows = [p * t for p, t in zip(pows, ts)]
        else:  # pragma: no cover
            raise ValueError(f"unhandled method {method}")
    return values[:n_max]


def lambda_synthetic(zset: SyntheticZeroSet, n: int, method: Method,
                     ctx: PrecisionContext) -> Complex:
    """Exact finite-multiset Li coefficient (complex in general, tail 0)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return _synthetic_series_values(zset, n, method, ctx)[-1]


def lambda_catalog(cat: ZeroCatalog, n: int, method: Method,
                   ctx: PrecisionContext) -> LiValue:
    """Truncated Li coefficient over a catalog with its tail bound attached."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return lambda_series(cat, n, method, ctx)[-1]


def lambda_series(source: Source, n_max: int, method: Method,
                  ctx: PrecisionContext) -> list[LiValue]:
    """lambda_1 .. lambda_{n_max} as LiValues.

    Synthetic sources must be conjugate-closed here so the values are real;
    use :func:`lambda_synthetic` for raw complex values on arbitrary
    multisets.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if isinstance(source, ZeroCatalog):
        if not source.ordinates:
            raise ValueError("cannot compute over an empty catalog")
        raw = _catalog_series_values(source, n_max, method, ctx)
        out = []
        for i, v in enumerate(raw):
            n = i + 1
            out.append(LiValue(
                n=n, value=v, method=method, zeros_used=source.count,
                max_gamma=source.max_gamma,
                tail=tail_bound(source.max_gamma, n, ctx),
                ctx_digits=ctx.digits))
        return out
    if not source.conjugate_closed:
        raise ValueError(
            "a real lambda series needs a conjugate-closed multiset; "
            "got one that is not fixed by complex conjugation")
    raw_c = _synthetic_series_values(source, n_max, method, ctx)
    out = []
    with ctx.workprec():
        zero = mpf(0)
        slack = mpf(10) ** (5 - ctx.digits)
        for i, v in enumerate(raw_c):
            scale = max(mpf(1), abs(v))
            if abs(v.imag) > slack * scale:
                raise ValueError(
                    f"lambda_{i+1} came out non-real ({v}); multiset is not "
                    "numerically conjugate-closed")
            out.append(LiValue(
                n=i + 1, value=v.real, method=method, zeros_used=len(source),
                max_gamma=zero, tail=zero, ctx_digits=ctx.digits))
    return out


# ---------------------------------------------------------------------------
# identity verifiers: the recurrences hold term-wise for ARBITRARY finite
# multisets, so residuals are pure round-off

def residual_tolerance(ctx: PrecisionContext, scale: Real) -> Real:
    """Contract tolerance 10^(10 - digits) * max(1, |scale|)."""
    with ctx.workprec():
        return mpf(10) ** (10 - ctx.digits) * max(mpf(1), abs(scale))


def _source_pair_data(source: Source):
    """(rhos-or-gammas, paired) preparation shared by the residual engines.

    For catalogs, terms are summed as real conjugate-pair terms (2 Re(...));
    for synthetic multisets, terms are summed per element, complex.
    """
    if isinstance(source, ZeroCatalog):
        if not source.ordinates:
            raise ValueError("cannot verify over an empty catalog")
        return [mpc(mpf("0.5"), mpf(o.gamma)) for o in source.ordinates], True
    return [mpc(r) for r in source.rhos], False


def thm1_residual_series(source: Source, n_max: int,
                         ctx: PrecisionContext) -> list[tuple[int, Real]]:
    """|lambda_n - lambda_{n-1} - sum (1/rho) t^{n-1}| for n = 2..n_max."""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    out = []
    with ctx.workprec():
        rhos, paired = _source_pair_data(source)
        ts = [t_of_rho(r) for r in rhos]
        inv_rho = [1 / r for r in rhos]
        if paired:
            lam_pows = [mpc(1) for _ in ts]
            lam_pows = [p * t for p, t in zip(lam_pows, ts)]
            lam_prev = pairwise_sum([2 - 2 * p.real for p in lam_pows], ctx)
            s_pows = [mpc(1) for _ in ts]
            for n in range(2, n_max + 1):
                lam_pows = [p * t for p, t in zip(lam_pows, ts)]
                lam = pairwise_sum([2 - 2 * p.real for p in lam_pows], ctx)
                s_pows = [p * t for p, t in zip(s_pows, ts)]
                step = pairwise_sum(
                    [2 * (w * p).real for w, p in zip(inv_rho, s_pows)], ctx)
                out.append((n, abs(lam - lam_prev - step)))
                lam_prev = lam
        else:
            lam_pows = [t for t in ts]
            lam_prev = pairwise_sum([1 - p for p in lam_pows], ctx)
            s_pows = [mpc(1) for _ in ts]
            for n in range(2, n_max + 1):
                lam_pows = [p * t for p, t in zip(lam_pows, ts)]
                lam = pairwise_sum([1 - p for p in lam_pows], ctx)
                s_pows = [p * t for p, t in zip(s_pows, ts)]
                step = pairwise_sum(
                    [w * p for w, p in zip(inv_rho, s_pows)], ctx)
                out.append((n, abs(lam - lam_prev - step)))
                lam_prev = lam
    return out


def thm2_residual_series(source: Source, n_max: int,
                         ctx: PrecisionContext) -> list[tuple[int, Real]]:
    """|lambda_n - 2 lambda_{n-1} + lambda_{n-2} + sum (1/rho^2) t^{n-2}|
    for n = 3..n_max."""
    if n_max < 3:
        raise ValueError(f"n_max must be >= 3, got {n_max}")
    out = []
    with ctx.workprec():
        rhos, paired = _source_pair_data(source)
        ts = [t_of_rho(r) for r in rhos]
        inv_rho2 = [1 / r ** 2 for r in rhos]
        if paired:
            def lam_term(pows):
                return [2 - 2 * p.real for p in pows]

            def s_term(pows):
                return [2 * (w * p).real for w, p in zip(inv_rho2, pows)]
        else:
            def lam_term(pows):
                return [1 - p for p in pows]

            def s_term(pows):
                return [w * p for w, p in zip(inv_rho2, pows)]
        pow1 = [t for t in ts]
        pow2 = [t * t for t in ts]
        lam_back2 = pairwise_sum(lam_term(pow1), ctx)
        lam_back1 = pairwise_sum(lam_term(pow2), ctx)
        lam_pows = pow2
        s_pows = [mpc(1) for _ in ts]
        s_pows = [p * t for p, t in zip(s_pows, ts)]  # t^{n-2} at n=3
        for n in range(3, n_max + 1):
            lam_pows = [p * t for p, t in zip(lam_pows, ts)]
            lam = pairwise_sum(lam_term(lam_pows), ctx)
            step = pairwise_sum(s_term(s_pows), ctx)
            out.append((n, abs(lam - 2 * lam_back1 + lam_back2 + step)))
            lam_back2, lam_back1 = lam_back1, lam
            s_pows = [p * t for p, t in zip(s_pows, ts)]
    return out


def verify_thm1(source: Source, n: int, ctx: PrecisionContext) -> Real:
    """Residual of lambda_n = lambda_{n-1} + sum (1/rho) t^{n-1} (n >= 2)."""
    if n < 2:
        raise ValueError(f"first-difference recurrence needs n >= 2, got {n}")
    return thm1_residual_series(source, n, ctx)[-1][1]


def verify_thm2(source: Source, n: int, ctx: PrecisionContext) -> Real:
    """Residual of lambda_n = 2 lambda_{n-1} - lambda_{n-2} - sum (1/rho^2)
    t^{n-2} (n >= 3)."""
    if n < 3:
        raise ValueError(f"second-difference recurrence needs n >= 3, got {n}")
    return thm2_residual_series(source, n, ctx)[-1][1]


def verify_chebyshev_link(rho: Complex, n: int, ctx: PrecisionContext) -> Real:
    """Residual of the per-zero bridge between the Chebyshev form and the
    second-difference summand:

        T_{n-1}(x) / (rho (1-rho))
            = -(1/2) [ (1/rho^2) t^{n-2} + (1/(1-rho)^2) t^{-(n-2)} ]

    Exact for every rho outside {0, 1} and every n >= 1 (the n = 1 case uses
    the t^{-1} power).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    with ctx.workprec():
        rho = rho if isinstance(rho, (mpf, mpc)) else mp.mpmathify(rho)
        if rho == 0 or rho == 1:
            raise InvalidZeroError("link identity undefined at rho in {0, 1}")
        t = t_of_rho(rho)
        x = x_of_rho(rho)
        lhs = chebyshev_t(n - 1, x) / (rho * (1 - rho))
        u = (1 / rho ** 2) * t ** (n - 2)
        v = (1 / (1 - rho) ** 2) * t ** -(n - 2)
        return abs(lhs + (u + v) / 2)


def chebyshev_link_residuals(source: Source, n_max: int,
                             ctx: PrecisionContext) -> list[tuple[int, Real]]:
    """Worst per-zero bridge residual for each n = 1..n_max over a source."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    out = []
    with ctx.workprec():
        rhos, _ = _source_pair_data(source)
        ts = [t_of_rho(r) for r in rhos]
        xs = [x_of_rho(r) for r in rhos]
        denoms = [r * (1 - r) for r in rhos]
        inv_rho2 = [1 / r ** 2 for r in rhos]
        inv_one_minus_rho2 = [1 / (1 - r) ** 2 for r in rhos]
        pows = [1 / t for t in ts]  # t^{n-2} at n=1
        t_prev = [mpc(1)] * len(xs)  # T_{n-1}(x) at n=1
        t_cur = list(xs)
        for n in range(1, n_max + 1):
            worst = mpf(0)
            for i in range(len(rhos)):
                lhs = t_prev[i] / denoms[i]
                rhs = -(inv_rho2[i] * pows[i]
                        + inv_one_minus_rho2[i] / pows[i]) / 2
                worst = max(worst, abs(lhs - rhs))
            out.append((n, worst))
            pows = [p * t for p, t in zip(pows, ts)]
            t_prev, t_cur = t_cur, [2 * x * c - p
                                    for x, c, p in zip(xs, t_cur, t_prev)]
    return out
