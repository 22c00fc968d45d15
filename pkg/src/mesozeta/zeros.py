"""Computation, certification, ingestion and persistence of tables of
nontrivial zeta-zero ordinates, plus the counting functions N(T) and S(T).

The scanner walks Gram intervals, subdividing blocks whose endpoint signs
show fewer sign changes of Z than the block's Gram length (up to 64 points
per interval), then sharpens every bracket with a vectorized Illinois
iteration until the bracket width is <= 1e-9.

Certification is Turing's method: the integral of the counting error S(t)
over a block of Gram intervals is bounded by 2.30 + 0.128*log(t2/2pi)
(Turing's constants), while a table that under- or over-counts by an integer
d forces that integral to grow linearly with the block length, which
contradicts the bound once the block is long enough.  Anchors are checked on
both sides so tables that start mid-axis (coverage [t_lo, t_max] with
t_lo > 0) have their absolute count pinned as well.  Everything is floating
point with safety margins, not interval arithmetic.
"""
from __future__ import annotations

import hashlib
import io
import math
import struct
import urllib.error
import urllib.request
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import lambertw, roots_legendre

from .specialfn import (
    DEFAULT_PRECISION,
    EvaluationPrecision,
    TWO_PI,
    _theta_antiderivative,
    attainable_tolerance,
    riemann_siegel_theta,
    riemann_siegel_theta_deriv,
    riemann_siegel_Z,
)

__all__ = [
    "Zero",
    "ZeroTable",
    "CoverageError",
    "ZeroTableParseError",
    "MonotonicityError",
    "NegativityError",
    "CertificationError",
    "MissedZeroError",
    "UnknownSourceError",
    "ChecksumMismatchError",
    "NetworkError",
    "gram_points",
    "find_zeros",
    "turing_certify",
    "count_N",
    "s_of_t",
    "parse_zero_table",
    "write_table_cache",
    "read_table_cache",
    "fetch_zero_table",
]


class CoverageError(ValueError):
    """Height outside the table's covered range."""


class ZeroTableParseError(ValueError):
    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class MonotonicityError(ZeroTableParseError):
    pass


class NegativityError(ZeroTableParseError):
    pass


class CertificationError(RuntimeError):
    """Turing's criterion could not pin the count."""


class MissedZeroError(CertificationError):
    """Certified count exceeds located sign changes beyond repair."""


class UnknownSourceError(KeyError):
    pass


class ChecksumMismatchError(RuntimeError):
    pass


class NetworkError(RuntimeError):
    pass


@dataclass(frozen=True)
class Zero:
    index: int
    ordinate: float
    off_axis: float = 0.0
    multiplicity: int = 1


@dataclass
class ZeroTable:
    """Sorted ordinates with optional off-axis displacements.

    Bulk data lives in numpy arrays; the `zeros` property materializes Zero
    records on demand.  `t_lo` > 0 marks a mid-axis table whose absolute
    count below coverage is `base_count` (None until certification pins it).
    Treat instances as immutable after construction; certification only flips
    the `certified` flag and fills `base_count`.
    """

    ordinates: np.ndarray
    t_max: float
    source: str = "computed"
    certified: bool = False
    t_lo: float = 0.0
    base_count: int | None = 0
    off_axis: np.ndarray | None = None
    multiplicities: np.ndarray | None = None
    reference_height: float | None = None
    _mult_cumsum: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.ordinates = np.asarray(self.ordinates, dtype=float)
        if self.ordinates.size and np.any(np.diff(self.ordinates) < 0):
            raise MonotonicityError("ordinates must be sorted ascending")
        if self.ordinates.size and self.ordinates[0] <= 0:
            raise NegativityError("stored ordinates must be positive")
        if self.multiplicities is not None:
            self._mult_cumsum = np.concatenate([[0], np.cumsum(self.multiplicities)])

    def __len__(self):
        return len(self.ordinates)

    @property
    def zeros(self):
        off = self.off_axis if self.off_axis is not None else np.zeros(len(self))
        mult = self.multiplicities if self.multiplicities is not None else np.ones(len(self), dtype=int)
        return [
            Zero(i + 1, float(g), float(a), int(m))
            for i, (g, a, m) in enumerate(zip(self.ordinates, off, mult))
        ]

    def count_below(self, T: float) -> int:
        """Zeros (with multiplicity) strictly below T, relative to coverage start."""
        i = int(np.searchsorted(self.ordinates, T, side="left"))
        if self._mult_cumsum is not None:
            return int(self._mult_cumsum[i])
        return i

    def require_coverage(self, T: float):
        if T > self.t_max or T < self.t_lo:
            raise CoverageError(f"T={T:g} outside covered range [{self.t_lo:g}, {self.t_max:g}]")


# ----------------------------------------------------------------------
# Gram points
# ----------------------------------------------------------------------


def gram_points(indices):
    """Gram points g_n (theta(g_n) = n*pi), vectorized over integer indices >= -1."""
    n = np.asarray(indices, dtype=float)
    scalar = n.ndim == 0
    n = np.atleast_1d(n)
    target = n * math.pi
    x = (n + 1.125) / math.e
    guess = TWO_PI * (n + 1.125) / np.real(lambertw(np.maximum(x, 1e-9)))
    g = np.maximum(guess, 9.0)
    for _ in range(8):
        step = (riemann_siegel_theta(g) - target) / riemann_siegel_theta_deriv(g)
        g = g - step
        if np.max(np.abs(step)) < 1e-11:
            break
    return float(g[0]) if scalar else g


def _gram_index_below(t: float) -> int:
    """Largest n with g_n <= t (requires t >= g_{-1} ~ 9.67)."""
    if t < 9.7:
        return -2
    n = int(math.floor(riemann_siegel_theta(t) / math.pi))
    while gram_points(n) > t:
        n -= 1
    while gram_points(n + 1) <= t:
        n += 1
    return n


# ----------------------------------------------------------------------
# scanning
# ----------------------------------------------------------------------

_BRACKET_WIDTH = 1e-9
_MAX_SUBDIVISION = 64   # points per Gram interval
_CHUNK = 4096           # Gram intervals per work unit


def _illinois_refine(zfun, a, b, fa, fb, width=_BRACKET_WIDTH):
    """Vectorized Illinois iteration; shrinks brackets to `width`."""
    a = a.copy()
    b = b.copy()
    fa = fa.copy()
    fb = fb.copy()
    side = np.zeros(a.shape, dtype=np.int8)
    for it in range(120):
        act = np.nonzero((b - a) > width)[0]
        if act.size == 0:
            break
        ai, bi = a[act], b[act]
        fai, fbi = fa[act], fb[act]
        denom = fbi - fai
        x = np.where(denom != 0.0, bi - fbi * (bi - ai) / np.where(denom == 0, 1.0, denom), 0.5 * (ai + bi))
        lo = ai + 1e-3 * (bi - ai)
        hi = bi - 1e-3 * (bi - ai)
        if it % 4 == 3:
            x = 0.5 * (ai + bi)  # periodic bisection guards worst cases
        x = np.clip(x, lo, hi)
        fx = zfun(x)
        same_as_b = np.signbit(fx) == np.signbit(fbi)
        # replace one endpoint, halving the stale one (Illinois rule)
        idx_b = act[same_as_b]
        b[idx_b] = x[same_as_b]
        fb[idx_b] = fx[same_as_b]
        rep = side[idx_b] == 1
        fa[idx_b[rep]] *= 0.5
        side[idx_b] = 1
        idx_a = act[~same_as_b]
        a[idx_a] = x[~same_as_b]
        fa[idx_a] = fx[~same_as_b]
        rep = side[idx_a] == -1
        fb[idx_a[rep]] *= 0.5
        side[idx_a] = -1
    return 0.5 * (a + b)


def _brackets_from_grid(points, values):
    """Sign-change brackets from consecutive grid values."""
    s = np.signbit(values)
    change = s[:-1] != s[1:]
    i = np.nonzero(change)[0]
    return points[i], points[i + 1], values[i], values[i + 1]


def _subdivide_grids(zfun, pts, vals):
    """Insert midpoints into a batch of per-interval grids (one Z call)."""
    n, m = pts.shape
    mids = 0.5 * (pts[:, :-1] + pts[:, 1:])
    mvals = zfun(mids.ravel()).reshape(mids.shape)
    npts = np.empty((n, 2 * m - 1))
    nvals = np.empty_like(npts)
    npts[:, 0::2] = pts
    npts[:, 1::2] = mids
    nvals[:, 0::2] = vals
    nvals[:, 1::2] = mvals
    return npts, nvals


def _row_sign_changes(vals):
    s = np.signbit(vals)
    return (s[:, :-1] != s[:, 1:]).sum(axis=1)


def _scan_gram_range(n0, n1, prec):
    """Zeros in (g_{n0}, g_{n1}]: batched scan of Gram intervals [n0, n1).

    The range is extended on both sides to the nearest good Gram points so
    expected block counts are well defined regardless of where work-unit
    boundaries fall; zeros found in the extensions are discarded (the
    neighboring unit reproduces them bit-identically).
    """
    zfun = lambda t: riemann_siegel_Z(t, prec)
    g_lo_bound = gram_points(n0)
    g_hi_bound = gram_points(n1)

    def is_good(n, zval):
        return (zval < 0) == (n % 2 == 1)

    lo, hi = n0, n1
    idx = np.arange(lo, hi + 1)
    g = gram_points(idx)
    zg = zfun(g)
    # extend to good endpoints (cap 64 either side)
    for _ in range(64):
        if is_good(lo, zg[0]):
            break
        lo -= 1
        gnew = gram_points(lo)
        zg = np.concatenate([[zfun(np.array([gnew]))[0]], zg])
        g = np.concatenate([[gnew], g])
    for _ in range(64):
        if is_good(hi, zg[-1]):
            break
        hi += 1
        gnew = gram_points(hi)
        zg = np.concatenate([zg, [zfun(np.array([gnew]))[0]]])
        g = np.concatenate([g, [gnew]])
    idx = np.arange(lo, hi + 1)

    good = (zg < 0) == (idx % 2 == 1)
    good_pos = np.nonzero(good)[0]
    if good_pos.size < 2:
        good_pos = np.array([0, idx.size - 1])
    # block id per interval: intervals between consecutive good points
    n_int = idx.size - 1
    block_of = np.searchsorted(good_pos, np.arange(n_int), side="right") - 1
    block_of = np.clip(block_of, 0, good_pos.size - 2)
    edges = good_pos
    block_len = np.diff(edges)
    sign_change = np.signbit(zg[:-1]) != np.signbit(zg[1:])
    found = np.add.reduceat(sign_change.astype(np.int64), edges[:-1])

    brackets = []
    ok_blocks = found >= block_len
    ok_int = ok_blocks[block_of] & sign_change
    i = np.nonzero(ok_int)[0]
    brackets.append((g[i], g[i + 1], zg[i], zg[i + 1]))

    deficient = np.nonzero(~ok_blocks)[0]
    if deficient.size:
        mask_int = ~ok_blocks[block_of]
        rows = np.nonzero(mask_int)[0]
        pts = np.stack([g[rows], g[rows + 1]], axis=1)
        vals = np.stack([zg[rows], zg[rows + 1]], axis=1)
        row_block = block_of[rows]
        level = 1
        while level < _MAX_SUBDIVISION:
            level *= 2
            pts, vals = _subdivide_grids(zfun, pts, vals)
            per_row = _row_sign_changes(vals)
            per_block = np.zeros(good_pos.size - 1, dtype=np.int64)
            np.add.at(per_block, row_block, per_row)
            if np.all(per_block[deficient] >= block_len[deficient]):
                break
        s = np.signbit(vals)
        ch = s[:, :-1] != s[:, 1:]
        r, c = np.nonzero(ch)
        brackets.append((pts[r, c], pts[r, c + 1], vals[r, c], vals[r, c + 1]))

    a = np.concatenate([x[0] for x in brackets])
    b = np.concatenate([x[1] for x in brackets])
    fa = np.concatenate([x[2] for x in brackets])
    fb = np.concatenate([x[3] for x in brackets])
    if a.size == 0:
        return np.empty(0)
    out = _illinois_refine(zfun, a, b, fa, fb)
    out.sort()
    return out[(out > g_lo_bound) & (out <= g_hi_bound)]


def _scan_below_first_gram(zfun, t_min, g_first, n_first):
    """Scan (t_min, g_first] with a uniform grid; expected count from theta."""
    lo = max(t_min, 0.05)
    if lo >= g_first:
        return np.empty(0)
    expected = max(0, int(round(riemann_siegel_theta(g_first) / math.pi + 1)))
    npts = max(8, int(math.ceil((g_first - lo) / 0.35)))
    pts = np.linspace(lo, g_first, npts)[None, :]
    vals = zfun(pts[0])[None, :]
    level = 1
    while level < _MAX_SUBDIVISION and int(_row_sign_changes(vals)[0]) < expected:
        level *= 2
        pts, vals = _subdivide_grids(zfun, pts, vals)
    a, b, fa, fb = _brackets_from_grid(pts[0], vals[0])
    if not a.size:
        return np.empty(0)
    return _illinois_refine(zfun, a, b, fa, fb)


def _find_zeros_serial(t_min, t_max, prec):
    zfun = lambda t: riemann_siegel_Z(t, prec)
    parts = []
    n_hi = _gram_index_below(t_max)
    if n_hi < 0:
        pts = _scan_below_first_gram(zfun, t_min, t_max, None)
        return pts[(pts > t_min) & (pts <= t_max)]
    n_lo = _gram_index_below(t_min)
    if n_lo < 0:
        g0 = gram_points(0)
        start = min(g0, t_max)
        parts.append(_scan_below_first_gram(zfun, t_min, start, 0))
        n_lo = 0
    for c0 in range(n_lo, n_hi + 1, _CHUNK):
        c1 = min(c0 + _CHUNK, n_hi + 1)
        parts.append(_scan_gram_range(c0, c1, prec))
    # top stub: [g_{n_hi+1 boundary}, t_max] lies inside the last chunk's
    # final interval already; clamp instead
    out = np.concatenate([p for p in parts if p.size]) if parts else np.empty(0)
    out.sort()
    return out[(out > t_min) & (out <= t_max)]


def _scan_chunk_job(args):
    c0, c1, prec_tol, prec_terms = args
    prec = EvaluationPrecision(prec_tol, prec_terms)
    return _scan_gram_range(c0, c1, prec)


def find_zeros(
    t_min: float,
    t_max: float,
    prec: EvaluationPrecision = DEFAULT_PRECISION,
    jobs: int = 1,
) -> ZeroTable:
    """All zeros of Z in (t_min, t_max], located by Gram-interval scanning
    with adaptive subdivision and refined to bracket width <= 1e-9.

    The Z tolerance is relaxed to the attainable error at t_max when needed;
    bracket widths stay at 1e-9 regardless (positions of computed zeros then
    carry the Z noise divided by |Z'|, negligible at desk heights).

    `jobs` > 1 distributes fixed Gram-index chunks over processes; chunk
    boundaries do not depend on `jobs`, so results are identical.
    """
    if not (0 <= t_min <= t_max <= 1e8):
        raise ValueError("require 0 <= t_min <= t_max <= 1e8")
    tol = max(prec.abs_tol, 1.6 * float(attainable_tolerance(max(t_max, 1.0))))
    eff = EvaluationPrecision(tol, prec.max_terms)
    if t_min == t_max:
        ords = np.empty(0)
    elif jobs <= 1:
        ords = _find_zeros_serial(t_min, t_max, eff)
    else:
        import multiprocessing as mp

        zfun = lambda t: riemann_siegel_Z(t, eff)
        parts = []
        n_hi = _gram_index_below(t_max)
        n_lo = _gram_index_below(t_min)
        if n_lo < 0 and n_hi >= 0:
            parts.append(_scan_below_first_gram(zfun, t_min, min(gram_points(0), t_max), 0))
            n_lo = 0
        if n_hi < 0:
            ords = _scan_below_first_gram(zfun, t_min, t_max, None)
        else:
            chunks = [
                (c0, min(c0 + _CHUNK, n_hi + 1), eff.abs_tol, eff.max_terms)
                for c0 in range(n_lo, n_hi + 1, _CHUNK)
            ]
            with mp.Pool(jobs) as pool:
                parts.extend(pool.map(_scan_chunk_job, chunks))
            ords = np.concatenate([p for p in parts if p.size]) if parts else np.empty(0)
            ords.sort()
            ords = ords[(ords > t_min) & (ords <= t_max)]
    base = 0 if t_min == 0.0 else None
    return ZeroTable(
        ordinates=ords,
        t_max=float(t_max),
        source="computed",
        certified=False,
        t_lo=float(t_min),
        base_count=base,
    )


# ----------------------------------------------------------------------
# Turing certification
# ----------------------------------------------------------------------


def _turing_bound(t2: float) -> float:
    return 2.30 + 0.128 * math.log(t2 / TWO_PI)


_GL64 = roots_legendre(64)


def _theta_integral(a: float, b: float) -> float:
    """integral of theta over [a, b]."""
    if a >= 700.0:
        return float(_theta_antiderivative(b) - _theta_antiderivative(a))
    x, w = _GL64
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return float(half * np.dot(w, riemann_siegel_theta(mid + half * x)))


def _s_found_integral(table: ZeroTable, base: int, a: float, b: float) -> float:
    """integral over [a,b] of S_found(t) = N_found(t) - theta(t)/pi - 1."""
    n_a = base + table.count_below(a) + (1 if a in table.ordinates else 0)
    # count_below uses strict '<'; ordinates equal to a belong to N(a+) -- the
    # integral is insensitive to the boundary convention (measure zero).
    inside = table.ordinates[(table.ordinates > a) & (table.ordinates <= b)]
    mult_inside = np.ones(inside.size)
    if table.multiplicities is not None:
        sel = (table.ordinates > a) & (table.ordinates <= b)
        mult_inside = table.multiplicities[sel].astype(float)
    int_n = n_a * (b - a) + float(np.dot(b - inside, mult_inside))
    return int_n - _theta_integral(a, b) / math.pi - (b - a)


def _anchor_ok(table: ZeroTable, base: int, m: int, direction: int, margin=0.5, max_k=400):
    """Turing criterion at Gram anchor m, looking right (+1) or left (-1)."""
    g_m = gram_points(m)
    k = 8
    while k <= max_k:
        n2 = m + direction * k
        g_2 = gram_points(n2)
        lo, hi = (g_m, g_2) if direction > 0 else (g_2, g_m)
        if lo < table.t_lo - 1e-9 or hi > table.t_max + 1e-9:
            return False
        Ival = _s_found_integral(table, base, lo, hi)
        tb = _turing_bound(hi)
        if direction > 0:
            if (hi - lo) + Ival - tb >= margin:
                return True
        else:
            if (hi - lo) - Ival - tb >= margin:
                return True
        k *= 2
    return False


def _certify_anchor(table: ZeroTable, base: int, m: int, two_sided: bool) -> bool:
    if not _anchor_ok(table, base, m, +1):
        return False
    if two_sided and not _anchor_ok(table, base, m, -1):
        return False
    return True


def turing_certify(table: ZeroTable, T: float) -> int:
    """Certified N(T) by Turing's method; flips table.certified on success.

    For a table starting at 0 the count of located sign changes is an exact
    lower bound, so a single right-side block above T suffices.  Mid-axis
    tables get the absolute base count pinned by searching the integer offset
    that satisfies the criterion on both sides.
    """
    if T > table.t_max - 20:
        raise CoverageError("need table coverage at least 20 above T")
    if T < table.t_lo:
        raise CoverageError("T below table coverage")
    m = _gram_index_below(T) + 4
    from_zero = table.t_lo == 0.0
    if from_zero:
        base_candidates = [0]
    else:
        g_lo = riemann_siegel_theta(table.t_lo) / math.pi + 1.0
        est = int(round(g_lo))
        base_candidates = [est + d for d in (0, -1, 1, -2, 2, -3, 3)]
    # the bottom anchor needs room for its own left block inside coverage
    bottom_anchor = None if from_zero else _gram_index_below(table.t_lo) + 26
    for base in base_candidates:
        ok = _certify_anchor(table, base, m, two_sided=not from_zero)
        if ok and not from_zero:
            ok = _certify_anchor(table, base, bottom_anchor, two_sided=True)
        if ok:
            table.certified = True
            table.base_count = base if not from_zero else 0
            return (table.base_count or 0) + table.count_below(T)
    raise CertificationError(
        f"Turing criterion failed at anchor near T={T:g}; re-scan with deeper subdivision"
    )


# ----------------------------------------------------------------------
# counting functions
# ----------------------------------------------------------------------


def _require_counting(table: ZeroTable):
    if table.base_count is None:
        raise CoverageError("mid-axis table has no certified base count; run turing_certify")


def count_N(table: ZeroTable, T: float) -> int:
    """N(T) = #{0 < ordinate < T}, counted with multiplicity."""
    table.require_coverage(T)
    _require_counting(table)
    return table.base_count + table.count_below(T)


def s_of_t(table: ZeroTable, T: float) -> float:
    """S(T) = N(T) - theta(T)/pi - 1, the counting-error term."""
    table.require_coverage(T)
    _require_counting(table)
    return count_N(table, T) - riemann_siegel_theta(T) / math.pi - 1.0


# ----------------------------------------------------------------------
# text parsing
# ----------------------------------------------------------------------


def parse_zero_table(text, base: float = 0.0) -> ZeroTable:
    """Parse a one-ordinate-per-line text stream ('#' comments, blanks ok).

    Values are offsets added to `base`.  Input must be strictly increasing
    and positive after the offset.
    """
    if isinstance(text, (str, bytes)):
        stream = io.StringIO(text.decode() if isinstance(text, bytes) else text)
    else:
        stream = text
    vals = []
    prev = -math.inf
    for ln, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            v = float(line)
        except ValueError:
            raise ZeroTableParseError(f"malformed decimal at line {ln}: {line!r}", ln)
        ordinate = base + v
        if ordinate <= prev:
            raise MonotonicityError(f"non-increasing ordinate at line {ln}", ln)
        if ordinate <= 0:
            raise NegativityError(f"non-positive ordinate at line {ln}", ln)
        prev = ordinate
        vals.append(ordinate)
    arr = np.asarray(vals, dtype=float)
    t_lo = 0.0 if base == 0.0 else float(base)
    return ZeroTable(
        ordinates=arr,
        t_max=float(arr[-1]) if arr.size else max(t_lo, 0.0),
        source="ingested",
        certified=False,
        t_lo=t_lo,
        base_count=0 if base == 0.0 else None,
    )


# ----------------------------------------------------------------------
# binary cache (ZTBL)
# ----------------------------------------------------------------------

_ZTBL_MAGIC = b"ZTBL"


def write_table_cache(table: ZeroTable, path) -> None:
    """Bit-exact binary cache: magic 'ZTBL', u16 version=1, u16 flags=0,
    f64 base height, u64 count, count*f64 offsets, trailing CRC32 (all LE)."""
    base = 0.0  # offsets stored as absolute ordinates so reads are bit-exact
    payload = bytearray()
    payload += _ZTBL_MAGIC
    payload += struct.pack("<HHdQ", 1, 0, base, len(table.ordinates))
    payload += np.ascontiguousarray(table.ordinates, dtype="<f8").tobytes()
    crc = zlib.crc32(bytes(payload)) & 0xFFFFFFFF
    payload += struct.pack("<I", crc)
    tmp = Path(str(path) + ".tmp")
    tmp.write_bytes(bytes(payload))
    tmp.replace(path)


def read_table_cache(path, source="computed") -> ZeroTable:
    raw = Path(path).read_bytes()
    if len(raw) < 24 or raw[:4] != _ZTBL_MAGIC:
        raise ZeroTableParseError("not a ZTBL cache file")
    (crc_stored,) = struct.unpack("<I", raw[-4:])
    if zlib.crc32(raw[:-4]) & 0xFFFFFFFF != crc_stored:
        raise ChecksumMismatchError(f"CRC32 mismatch in {path}")
    version, flags, base, count = struct.unpack("<HHdQ", raw[4:24])
    if version != 1:
        raise ZeroTableParseError(f"unsupported ZTBL version {version}")
    offsets = np.frombuffer(raw[24:-4], dtype="<f8", count=count)
    ords = offsets if base == 0.0 else base + offsets
    t_lo = 0.0 if base == 0.0 else float(base)
    return ZeroTable(
        ordinates=np.array(ords, dtype=float),
        t_max=float(ords[-1]) if count else t_lo,
        source=source,
        certified=False,
        t_lo=t_lo,
        base_count=0 if t_lo == 0.0 else None,
    )


# ----------------------------------------------------------------------
# fetching
# ----------------------------------------------------------------------


def _load_registry(path) -> dict:
    """[sources] section: `identifier = URL sha256:HEX` per line."""
    registry = {}
    in_sources = False
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            in_sources = line == "[sources]"
            continue
        if not in_sources or "=" not in line:
            continue
        key, _, rest = line.partition("=")
        parts = rest.split()
        if not parts:
            continue
        url = parts[0]
        digest = None
        for p in parts[1:]:
            if p.startswith("sha256:"):
                digest = p[len("sha256:") :].lower()
        registry[key.strip()] = (url, digest)
    return registry


def fetch_zero_table(source_id: str, cache_dir, registry=None, base: float = 0.0) -> ZeroTable:
    """Download (or reuse from cache) a text zero table.

    `registry` maps identifier -> (url, sha256hex-or-None); it may also be a
    path to a config file with a [sources] section, and defaults to
    cache_dir/sources.conf.  Raw bytes and a parsed ZTBL cache are stored
    under cache_dir; warm calls never touch the network.
    """
    cache_dir = Path(cache_dir)
    if registry is None:
        registry = cache_dir / "sources.conf"
    if not isinstance(registry, dict):
        reg_path = Path(registry)
        if not reg_path.exists():
            raise UnknownSourceError(f"no source registry at {reg_path}")
        registry = _load_registry(reg_path)
    if source_id not in registry:
        raise UnknownSourceError(source_id)
    url, digest = registry[source_id]
    raw_path = cache_dir / "raw" / f"{source_id}.txt"
    bin_path = cache_dir / "tables" / f"{source_id}.ztbl"
    if raw_path.exists():
        raw = raw_path.read_bytes()
    else:
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                raw = resp.read()
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise NetworkError(f"fetching {source_id} from {url}: {exc}") from exc
        raw_path.parent.mkdir(parents=True, exist_ok=True)
        tmp = Path(str(raw_path) + ".tmp")
        tmp.write_bytes(raw)
        tmp.replace(raw_path)
    if digest is not None:
        got = hashlib.sha256(raw).hexdigest()
        if got != digest:
            raise ChecksumMismatchError(f"{source_id}: sha256 {got} != expected {digest}")
    if bin_path.exists():
        try:
            return read_table_cache(bin_path, source="ingested")
        except ChecksumMismatchError:
            raise
    table = parse_zero_table(raw.decode("utf-8"), base=base)
    bin_path.parent.mkdir(parents=True, exist_ok=True)
    write_table_cache(table, bin_path)
    return table
