"""Zero-ordinate tables and synthetic zero multisets.

A :class:`ZeroCatalog` is an ordered table of positive ordinates gamma of
nontrivial zeta zeros, ingested from plain text (one decimal per line, ``#``
comments, blank lines allowed, strictly ascending).  The catalog assumes the
critical-line representation rho = 1/2 + i*gamma; each table row stands for
the conjugate pair {rho, 1-rho}.  Ordinates are never computed here, only
ingested; simple multiplicity 1 is assumed throughout (all known zeros are
simple).

:class:`SyntheticZeroSet` carries an arbitrary finite multiset of complex
rho values for exact, truncation-free identity checks.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, Union

import httpx
from filelock import FileLock
from mpmath import mp, mpf, mpc

from .precision import PrecisionContext, Real, Complex, pairwise_sum

# ---------------------------------------------------------------------------
# errors

class ZeroTableError(ValueError):
    """A zero table failed to parse or validate; carries the 1-based line."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class OrdinateParseError(ZeroTableError):
    pass


class OrdinateOrderError(ZeroTableError):
    pass


class OrdinateValueError(ZeroTableError):
    pass


class InvalidZeroError(ValueError):
    """A synthetic rho value at a pole of the transform (rho in {0, 1})."""


class FetchError(RuntimeError):
    pass


class NetworkError(FetchError):
    pass


class RemoteStatusError(FetchError):
    def __init__(self, url: str, status_code: int):
        self.status_code = status_code
        super().__init__(f"GET {url} returned status {status_code}")


class CacheWriteError(FetchError):
    pass


# ---------------------------------------------------------------------------
# catalog

_ORDINATE_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)")


@dataclass(frozen=True)
class ZeroOrdinate:
    """One positive zero ordinate with the digits trusted from its source.

    ``literal`` is the exact decimal token from the table; it is what
    serialization re-emits, so round-trips are bit-exact.  ``gamma`` is the
    token parsed at (literal length + 10) digits, which preserves every
    digit the source provides.
    """

    literal: str
    gamma: Real = field(compare=False)
    source_digits: int

    def __post_init__(self):
        if self.gamma <= 0:
            raise OrdinateValueError(f"ordinate must be positive, got {self.literal}")
        if self.source_digits < 9:
            raise ValueError(f"source_digits must be >= 9, got {self.source_digits}")

    def rho(self) -> Complex:
        return mpc(mpf("0.5"), self.gamma)


@dataclass(frozen=True)
class ZeroCatalog:
    """Validated, strictly-increasing table of ordinates.

    Equality compares the ordinate literals and source_digits; the ``source``
    label is provenance metadata only.
    """

    ordinates: tuple[ZeroOrdinate, ...]
    source: str = field(compare=False, default="")

    def __len__(self) -> int:
        return len(self.ordinates)

    @property
    def count(self) -> int:
        return len(self.ordinates)

    @property
    def max_gamma(self) -> Real:
        if not self.ordinates:
            raise ValueError("empty catalog has no max_gamma")
        return self.ordinates[-1].gamma

    def gammas(self) -> list[Real]:
        return [o.gamma for o in self.ordinates]

    @property
    def source_digits(self) -> int:
        if not self.ordinates:
            return 0
        return min(o.source_digits for o in self.ordinates)


def _parse_ordinate_token(token: str, line_number: int, source_digits: int) -> ZeroOrdinate:
    if not _ORDINATE_RE.fullmatch(token):
        raise OrdinateParseError(f"not a decimal ordinate: {token!r}", line_number)
    digits = sum(c.isdigit() for c in token)
    with mp.workdps(max(30, digits + 10)):
        gamma = mpf(token)
    if gamma <= 0:
        raise OrdinateValueError(f"ordinate must be positive, got {token!r}", line_number)
    return ZeroOrdinate(literal=token, gamma=gamma, source_digits=source_digits)


def load_catalog(text: Union[bytes, str], source_digits: int = 15,
                 source: str = "") -> ZeroCatalog:
    """Parse a zero table.

    Accepts UTF-8 text with LF or CRLF endings; each line is blank, a ``#``
    comment, or one decimal ordinate, in strictly increasing order.  Errors
    name the offending 1-based line.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise OrdinateParseError(f"table is not valid UTF-8: {exc}") from None
    ordinates: list[ZeroOrdinate] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        ordinate = _parse_ordinate_token(line, line_number, source_digits)
        if ordinates and not ordinate.gamma > ordinates[-1].gamma:
            raise OrdinateOrderError(
                f"ordinate {ordinate.literal} does not increase past "
                f"{ordinates[-1].literal}", line_number)
        ordinates.append(ordinate)
    return ZeroCatalog(ordinates=tuple(ordinates), source=source)


def load_catalog_path(path: Union[str, Path], source_digits: int = 15,
                      source: str | None = None) -> ZeroCatalog:
    path = Path(path)
    return load_catalog(path.read_bytes(), source_digits=source_digits,
                        source=path.name if source is None else source)


def serialize_catalog(cat: ZeroCatalog) -> str:
    """Canonical text form: one ordinate literal per line, LF endings, no
    comments.  serialize(load(serialize(x))) == serialize(x) byte-for-byte."""
    if not cat.ordinates:
        return ""
    return "\n".join(o.literal for o in cat.ordinates) + "\n"


def rho_of(g: Union[ZeroOrdinate, Real]) -> Complex:
    """Critical-line zero 1/2 + i*gamma for an ordinate."""
    gamma = g.gamma if isinstance(g, ZeroOrdinate) else mpf(g)
    return mpc(mpf("0.5"), gamma)


# ---------------------------------------------------------------------------
# counting-asymptotic validation

@dataclass(frozen=True)
class ValidationRow:
    t: Real
    observed: int
    expected: Real
    deviation: Real
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple[ValidationRow, ...]
    passed: bool
    count: int
    source: str


def expected_zero_count(t: Real, ctx: PrecisionContext) -> Real:
    """Zero-counting asymptotic (T/2pi) log(T/(2pi e)) + 7/8."""
    with ctx.workprec():
        t = mpf(t)
        return (t / (2 * mp.pi)) * mp.log(t / (2 * mp.pi * mp.e)) + mpf(7) / 8


def validate(cat: ZeroCatalog, ctx: PrecisionContext,
             checkpoints: Sequence | None = None,
             tolerance: float = 2.0) -> ValidationReport:
    """Compare observed counts below each checkpoint against the counting
    asymptotic; PASS when every absolute deviation is <= ``tolerance``.

    Default checkpoints are the decades 10, 100, ... below max_gamma plus
    max_gamma itself.  Report-only: a failing catalog is returned flagged,
    not raised.
    """
    if not cat.ordinates:
        raise ValueError("cannot validate an empty catalog")
    if checkpoints is None:
        checkpoints = []
        decade = mpf(10)
        while decade < cat.max_gamma:
            checkpoints.append(decade)
            decade = decade * 10
        checkpoints.append(cat.max_gamma)
    rows = []
    gammas = cat.gammas()
    with ctx.workprec():
        for t in checkpoints:
            t = mpf(t)
            observed = sum(1 for g in gammas if g <= t)
            expected = expected_zero_count(t, ctx)
            deviation = abs(observed - expected)
            rows.append(ValidationRow(
                t=t, observed=observed, expected=expected,
                deviation=deviation, passed=bool(deviation <= tolerance)))
    return ValidationReport(rows=tuple(rows), passed=all(r.passed for r in rows),
                            count=cat.count, source=cat.source)


# ---------------------------------------------------------------------------
# truncation tail bound

def tail_bound(T, n: int, ctx: PrecisionContext) -> Real:
    """Upper bound on the absolute truncation error of the paired Li sum
    when zeros with ordinate > T are dropped.

    Each conjugate-paired term equals 2 - 2 cos(n*theta) with
    theta = pi - 2 arctan(2 gamma) <= 1/gamma, so a dropped pair contributes
    at most n^2/gamma^2; integrating n^2/t^2 against the zero density
    (1/2pi) log(t/2pi) over t > T gives

        n^2 (log(T/2pi) + 1) / (2 pi T),

    valid for T >= max(n, 2 pi e).  The bound is strictly decreasing in T on
    the domain and scales exactly as n^2.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    with ctx.workprec():
        T = mpf(T)
        if T < max(n, 20):
            raise ValueError(
                f"tail_bound requires T >= max(n, 20); got T={T}, n={n}")
        return (n * n) * (mp.log(T / (2 * mp.pi)) + 1) / (2 * mp.pi * T)


# ---------------------------------------------------------------------------
# synthetic multisets

@dataclass(frozen=True)
class SyntheticZeroSet:
    """Finite multiset of complex rho values for exact identity tests.

    ``symmetric`` is true iff the multiset is fixed by rho -> 1 - rho;
    ``conjugate_closed`` iff it is fixed by complex conjugation.  Elements
    are stored sorted by (re, im) so iteration order is deterministic.
    """

    rhos: tuple[Complex, ...]
    symmetric: bool
    conjugate_closed: bool

    def __len__(self) -> int:
        return len(self.rhos)


def _multiset(values: Iterable[Complex]) -> dict:
    counts: dict = {}
    for z in values:
        key = (z.real, z.imag)
        counts[key] = counts.get(key, 0) + 1
    return counts


def _sorted_rhos(values: Iterable[Complex]) -> tuple[Complex, ...]:
    return tuple(sorted(values, key=lambda z: (z.real, z.imag)))


def _check_valid(rhos: Sequence[Complex]) -> list[Complex]:
    out = []
    for rho in rhos:
        z = rho if isinstance(rho, mpc) else mpc(rho)
        if z == 0 or z == 1:
            raise InvalidZeroError(f"rho = {z} is a pole of t = 1 - 1/rho")
        out.append(z)
    return out


def synthetic_set(rhos: Iterable[Complex]) -> SyntheticZeroSet:
    """Build a multiset as given (no closure), computing both symmetry flags."""
    values = _check_valid(list(rhos))
    if not values:
        raise ValueError("synthetic zero set must be nonempty")
    counts = _multiset(values)
    mirrored = _multiset([1 - z for z in values])
    conjugated = _multiset([mpc(z.real, -z.imag) for z in values])
    return SyntheticZeroSet(
        rhos=_sorted_rhos(values),
        symmetric=counts == mirrored,
        conjugate_closed=counts == conjugated,
    )


def close_under_symmetry(rhos: Iterable[Complex]) -> SyntheticZeroSet:
    """Union of the input with its image under rho -> 1 - rho.

    Multiset union takes the max multiplicity on each side, so values
    already paired (and the fixed point rho = 1/2) are not duplicated.
    """
    values = _check_valid(list(rhos))
    if not values:
        raise ValueError("synthetic zero set must be nonempty")
    counts = _multiset(values)
    mirror_of = {}
    for z in values:
        mirror_of.setdefault(((1 - z).real, (1 - z).imag), 1 - z)
    closed: list[Complex] = []
    seen_keys = set()
    mirrored = _multiset([1 - z for z in values])
    for z in values:
        key = (z.real, z.imag)
        if key in seen_keys:
            continue
        seen_keys.add(key)
        closed.extend([z] * max(counts[key], mirrored.get(key, 0)))
    for key, mult in mirrored.items():
        if key not in seen_keys:
            seen_keys.add(key)
            closed.extend([mirror_of[key]] * mult)
    result = synthetic_set(closed)
    assert result.symmetric, "closure under rho -> 1-rho must be symmetric"
    return result


_COMPLEX_FULL_RE = re.compile(
    r"(?P<re>[+-]?(?:\d+\.?\d*|\.\d+))(?P<im>[+-](?:\d+\.?\d*|\.\d+)?)[ij]")
_COMPLEX_IMAG_RE = re.compile(r"(?P<im>[+-]?(?:\d+\.?\d*|\.\d+)?)[ij]")
_COMPLEX_REAL_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)")


def parse_rho_literal(token: str, ctx: PrecisionContext) -> Complex:
    """Parse one complex literal like ``2``, ``-1``, ``0.5+2i``, ``2i``."""
    s = token.strip().replace(" ", "")
    with ctx.workprec():
        m = _COMPLEX_FULL_RE.fullmatch(s)
        if m:
            im = m.group("im")
            if im in ("+", "-"):
                im += "1"
            return mpc(mpf(m.group("re")), mpf(im))
        m = _COMPLEX_IMAG_RE.fullmatch(s)
        if m:
            im = m.group("im")
            if im in ("", "+"):
                im = "1"
            elif im == "-":
                im = "-1"
            return mpc(0, mpf(im))
        if _COMPLEX_REAL_RE.fullmatch(s):
            return mpc(mpf(s), 0)
    raise ValueError(f"cannot parse complex literal {token!r}")


def parse_rho_list(text: str, ctx: PrecisionContext) -> list[Complex]:
    """Parse a comma-separated list of complex literals."""
    tokens = [t for t in text.split(",") if t.strip()]
    if not tokens:
        raise ValueError("empty synthetic zero list")
    return [parse_rho_literal(t, ctx) for t in tokens]


# ---------------------------------------------------------------------------
# remote tables with an on-disk cache

def _cache_paths(url: str, cache_dir: Path) -> tuple[Path, Path, Path]:
    digest = hashlib.sha256(url.encode("utf-8")).hexdigest()
    return (cache_dir / f"{digest}.txt",
            cache_dir / f"{digest}.meta.json",
            cache_dir / f"{digest}.lock")


def fetch_remote(url: str, cache_dir: Union[str, Path],
                 timeout: float = 60.0) -> bytes:
    """Fetch a zero table over HTTP, caching the body by URL digest.

    The first call stores ``<sha256(url)>.txt`` plus a ``.meta.json`` sidecar
    (url, fetch time, byte length) under ``cache_dir``; later calls are
    served from the cache without touching the network.  Writes hold an
    exclusive file lock, so concurrent fetchers are safe.
    """
    cache_dir = Path(cache_dir)
    data_path, meta_path, lock_path = _cache_paths(url, cache_dir)
    if data_path.exists():
        return data_path.read_bytes()
    try:
        response = httpx.get(url, timeout=timeout, follow_redirects=True)
    except httpx.HTTPError as exc:
        raise NetworkError(f"fetching {url} failed: {exc}") from exc
    if response.status_code != 200:
        raise RemoteStatusError(url, response.status_code)
    body = response.content
    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
        with FileLock(str(lock_path)):
            tmp = data_path.with_suffix(".tmp")
            tmp.write_bytes(body)
            os.replace(tmp, data_path)
            meta_path.write_text(json.dumps({
                "url": url,
                "fetched_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                "bytes": len(body),
            }, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise CacheWriteError(f"cannot write cache under {cache_dir}: {exc}") from exc
    return body


def cache_entry(url: str, cache_dir: Union[str, Path]) -> tuple[Path, bool]:
    """Cache file path for ``url`` and whether it already exists."""
    data_path, _, _ = _cache_paths(url, Path(cache_dir))
    return data_path, data_path.exists()
