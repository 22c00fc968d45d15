"""Test functions, the smooth frequency cutoff, band-limited smoothing with
harmonic extension, envelope/tail machinery and the Cauchy-kernel norm.

TestFunction is a compactly supported piecewise polynomial on half-open
pieces [x_i, x_{i+1}) with coefficients in the local coordinate u = x - x_i.
Public constructors produce constant/linear pieces; the same representation
carries the degree-5 smoothstep tapers used elsewhere.  Fourier transforms
are evaluated in closed form per piece (by-parts recursion, with a Taylor
branch for small |omega|), so transforms are exact up to rounding at any
real frequency.

Band-limited smoothing of eta by a cutoff K at scale L is the single
frequency-side integral

    (smoothed eta)(z) = integral K(xi/L) etahat(xi) e(z xi) dxi

over the compact support of K(./L); evaluating it at complex z is the
harmonic extension.  KernelSmoothed vectorizes this with oscillation-aware
Gauss-Legendre panels; bandlimited_convolve is the adaptive scalar variant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre

__all__ = [
    "QuadratureError",
    "TestFunction",
    "BandLimited",
    "indicator",
    "triangle",
    "piecewise_linear",
    "fejer_square_fn",
    "BumpKernel",
    "SmoothingWeight",
    "fejer_squared",
    "fejer_mixture",
    "KernelSmoothed",
    "bandlimited_convolve",
    "cell_envelope",
    "log_weighted_tail",
    "CauchyDilate",
    "cauchy_kernel",
    "cauchy_sup_norm",
    "check_pointwise_bound",
    "l1_truncation_error",
]

TWO_PI = 2.0 * math.pi


class QuadratureError(RuntimeError):
    """Adaptive panel refinement exceeded its depth cap."""


# ----------------------------------------------------------------------
# piecewise polynomials
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class TestFunction:
    """Compactly supported piecewise polynomial, pieces on [x_i, x_{i+1}).

    coeffs[i, d] multiplies (x - x_i)^d on piece i.  Bounded variation by
    construction; total_variation() includes the jumps at piece boundaries
    and at the support ends.
    """

    breakpoints: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        cf = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if bp.ndim != 1 or bp.size != cf.shape[0] + 1:
            raise ValueError("need len(breakpoints) == npieces + 1")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "coeffs", cf)

    # -- basic queries ---------------------------------------------------

    @property
    def support(self):
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def degree(self):
        return self.coeffs.shape[1] - 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.zeros_like(x)
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        inside = (idx >= 0) & (idx < len(self.coeffs))
        ii = idx[inside]
        u = x[inside] - self.breakpoints[ii]
        val = np.zeros_like(u)
        for d in range(self.coeffs.shape[1] - 1, -1, -1):
            val = val * u + self.coeffs[ii, d]
        out[inside] = val
        return float(out[0]) if scalar else out

    def integral(self) -> float:
        w = np.diff(self.breakpoints)
        total = 0.0
        for d in range(self.coeffs.shape[1]):
            total += np.sum(self.coeffs[:, d] * w ** (d + 1) / (d + 1))
        return float(total)

    def abs_integral(self) -> float:
        """integral of |eta| (pieces split at their sign changes)."""
        total = 0.0
        for i in range(len(self.coeffs)):
            w = self.breakpoints[i + 1] - self.breakpoints[i]
            c = self.coeffs[i]
            pts = [0.0, w]
            if np.any(c[1:]):
                for r in np.roots(c[::-1]):
                    if abs(r.imag) < 1e-12 and 0 < r.real < w:
                        pts.append(float(r.real))
            pts.sort()
            anti = np.concatenate([[0.0], c / np.arange(1, len(c) + 1)])
            for a, b in zip(pts[:-1], pts[1:]):
                total += abs(np.polyval(anti[::-1], b) - np.polyval(anti[::-1], a))
        return float(total)

    def piece_value(self, i, u):
        val = 0.0
        for d in range(self.coeffs.shape[1] - 1, -1, -1):
            val = val * u + self.coeffs[i, d]
        return val

    def jumps(self):
        """(position, jump) at every breakpoint, support ends included."""
        out = []
        prev = 0.0
        for i, x in enumerate(self.breakpoints):
            nxt = self.piece_value(i, 0.0) if i < len(self.coeffs) else 0.0
            out.append((float(x), float(nxt - prev)))
            if i < len(self.coeffs):
                prev = self.piece_value(i, self.breakpoints[i + 1] - x)
        return out

    def derivative_jumps(self):
        """(position, jump of eta') at every breakpoint."""
        der = self._derivative_coeffs()
        out = []
        prev = 0.0
        for i, x in enumerate(self.breakpoints):
            nxt = der[i, 0] if i < len(self.coeffs) else 0.0
            out.append((float(x), float(nxt - prev)))
            if i < len(self.coeffs):
                w = self.breakpoints[i + 1] - x
                prev = 0.0
                for d in range(der.shape[1] - 1, -1, -1):
                    prev = prev * w + der[i, d]
        return out

    def _derivative_coeffs(self):
        D = self.coeffs.shape[1]
        if D == 1:
            return np.zeros((len(self.coeffs), 1))
        return self.coeffs[:, 1:] * np.arange(1, D)[None, :]

    def total_variation(self) -> float:
        """Sum of jump magnitudes plus within-piece slope variation."""
        tv = sum(abs(j) for _, j in self.jumps())
        der = self._derivative_coeffs()
        for i in range(len(self.coeffs)):
            w = self.breakpoints[i + 1] - self.breakpoints[i]
            c = der[i]
            if not np.any(c):
                continue
            # integral of |P'| over [0, w], split at interior roots of P'
            roots = [r.real for r in np.roots(c[::-1]) if abs(r.imag) < 1e-12 and 0 < r.real < w]
            pts = [0.0] + sorted(roots) + [w]
            anti = np.concatenate([[0.0], c / np.arange(1, len(c) + 1)])
            for a, b in zip(pts[:-1], pts[1:]):
                va = np.polyval(anti[::-1], a)
                vb = np.polyval(anti[::-1], b)
                tv += abs(vb - va)
        return float(tv)

    def cell_sup(self, lo: float, hi: float) -> float:
        """sup of |self| over [lo, hi) (exact: endpoints plus critical points)."""
        cand = [lo, hi]
        cand += [x for x in self.breakpoints if lo < x < hi]
        der = self._derivative_coeffs()
        for i in range(len(self.coeffs)):
            a = self.breakpoints[i]
            b = self.breakpoints[i + 1]
            if b <= lo or a >= hi:
                continue
            c = der[i]
            if np.any(c):
                for r in np.roots(c[::-1]):
                    if abs(r.imag) < 1e-12 and 0 <= r.real <= b - a:
                        x = a + r.real
                        if lo <= x < hi:
                            cand.append(x)
        vals = np.abs(self(np.asarray(cand)))
        return float(vals.max()) if len(cand) else 0.0

    # -- algebra -----------------------------------------------------------

    def translate(self, c: float) -> "TestFunction":
        return TestFunction(self.breakpoints + c, self.coeffs.copy())

    def _recenter(self, new_bp):
        """Re-express on a refined breakpoint grid (exact Taylor shift)."""
        D = self.coeffs.shape[1]
        out = np.zeros((len(new_bp) - 1, D))
        for j in range(len(new_bp) - 1):
            x = new_bp[j]
            i = np.searchsorted(self.breakpoints, x, side="right") - 1
            if i < 0 or i >= len(self.coeffs):
                continue
            h = x - self.breakpoints[i]
            c = self.coeffs[i]
            for d in range(D):
                acc = 0.0
                for e in range(d, D):
                    acc += c[e] * math.comb(e, d) * h ** (e - d)
                out[j, d] = acc
        return out

    def __add__(self, other: "TestFunction") -> "TestFunction":
        bp = np.unique(np.concatenate([self.breakpoints, other.breakpoints]))
        D = max(self.coeffs.shape[1], other.coeffs.shape[1])
        a = np.zeros((len(bp) - 1, D))
        sa = self._recenter(bp)
        sb = other._recenter(bp)
        a[:, : sa.shape[1]] += sa
        a[:, : sb.shape[1]] += sb
        return TestFunction(bp, a)

    def __mul__(self, scalar: float) -> "TestFunction":
        return TestFunction(self.breakpoints, self.coeffs * float(scalar))

    __rmul__ = __mul__

    def piecewise_derivative(self) -> "TestFunction":
        """Derivative within pieces (distributional jump parts dropped)."""
        der = self._derivative_coeffs()
        return TestFunction(self.breakpoints, der)

    def multiply_by_x(self) -> "TestFunction":
        """x * eta(x), exact (degree + 1)."""
        D = self.coeffs.shape[1]
        out = np.zeros((len(self.coeffs), D + 1))
        for i in range(len(self.coeffs)):
            xi = self.breakpoints[i]
            # (u + xi) * sum c_d u^d
            out[i, : D] += xi * self.coeffs[i]
            out[i, 1 : D + 1] += self.coeffs[i]
        return TestFunction(self.breakpoints, out)

    # -- Fourier transform ----------------------------------------------

    def fourier(self, x, deriv: int = 0):
        """etahat(x) = integral e(-u x) eta(u) du, exact per piece.

        deriv=r returns the r-th derivative of etahat (transform of
        (-2 pi i u)^r eta).
        """
        fn = self
        for _ in range(deriv):
            fn = fn.multiply_by_x()
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        omega = TWO_PI * x
        out = np.zeros(x.shape, dtype=complex)
        D = fn.coeffs.shape[1]
        for i in range(len(fn.coeffs)):
            w = fn.breakpoints[i + 1] - fn.breakpoints[i]
            moments = _piece_moments(omega, w, D)
            contrib = np.zeros_like(out)
            for d in range(D):
                c = fn.coeffs[i, d]
                if c != 0.0:
                    contrib += c * moments[d]
            out += np.exp(-1j * omega * fn.breakpoints[i]) * contrib
        out *= (-2j * math.pi) ** deriv if deriv else 1.0
        return complex(out[0]) if scalar else out


def _piece_moments(omega, w, D):
    """I_m(omega) = integral_0^w u^m e^{-i omega u} du for m = 0..D-1."""
    omega = np.asarray(omega, dtype=float)
    small = np.abs(omega) * w < 0.35
    out = []
    ew = np.exp(-1j * omega * w)
    iw = 1j * omega
    with np.errstate(divide="ignore", invalid="ignore"):
        prev = np.where(small, 0, (1.0 - ew) / np.where(small, 1.0, iw))
        for m in range(D):
            if m > 0:
                prev = np.where(small, 0, (-(w**m) * ew + m * prev) / np.where(small, 1.0, iw))
            if np.any(small):
                # Taylor: sum_k (-i omega)^k w^(m+k+1)/(k! (m+k+1))
                acc = np.zeros_like(prev)
                term = np.ones_like(omega, dtype=complex)
                for k in range(0, 22):
                    acc = acc + term * (w ** (m + k + 1)) / (m + k + 1)
                    term = term * (-1j * omega) / (k + 1)
                prev = np.where(small, acc, prev)
            out.append(prev)
    return out


def indicator(a: float, b: float) -> TestFunction:
    return TestFunction(np.array([a, b]), np.array([[1.0]]))


@dataclass(frozen=True)
class BandLimited:
    """Function given by its compactly supported transform (a TestFunction).

    The value at x is the inverse transform of `transform`; smoothing
    machinery reads `fourier` straight from the stored piecewise polynomial,
    so a BandLimited whose transform sits inside the kernel plateau is an
    exact fixed point of KernelSmoothed.  Derivative requests return the
    piecewise-polynomial derivative of the transform (jump deltas dropped),
    which is all the tail-bound machinery needs.
    """

    transform: TestFunction

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.transform.fourier(-x).real

    def fourier(self, xi, deriv: int = 0):
        fn = self.transform
        for _ in range(deriv):
            fn = fn.piecewise_derivative()
        vals = fn(np.asarray(xi, dtype=float))
        return vals.astype(complex) if isinstance(vals, np.ndarray) else complex(vals)

    def integral(self) -> float:
        return float(self.transform(0.0))

    @property
    def support(self):
        return (-math.inf, math.inf)


def fejer_square_fn(bandwidth: float = 1.0) -> BandLimited:
    """B * (sin(pi B u)/(pi B u))^2: mass 1, transform = unit triangle on
    [-B, B].  The canonical exact fixed point of plateau kernels with
    plateau * L >= B."""
    return BandLimited(triangle(-bandwidth, bandwidth))


def triangle(a: float, b: float) -> TestFunction:
    """Hat function on [a, b], peak 1 at the midpoint."""
    m = 0.5 * (a + b)
    h = 2.0 / (b - a)
    return TestFunction(np.array([a, m, b]), np.array([[0.0, h], [1.0, -h]]))


def piecewise_linear(pieces) -> TestFunction:
    """pieces: iterable of (a, b, c0, c1) with value c0 + c1*(x - a) on [a, b)."""
    pieces = sorted(pieces)
    bp = []
    cf = []
    last = None
    for a, b, c0, c1 in pieces:
        if last is not None and a < last - 1e-15:
            raise ValueError("overlapping pieces")
        if last is not None and a > last + 1e-15:
            bp.append(last)
            cf.append([0.0, 0.0])  # explicit gap piece
        bp.append(a)
        cf.append([c0, c1])
        last = b
    bp.append(last)
    return TestFunction(np.array(bp), np.array(cf))


# ----------------------------------------------------------------------
# bump kernel
# ----------------------------------------------------------------------


def _smoothstep(u):
    """Quintic smoothstep: C^2, s(0)=0, s(1)=1, s'=s''=0 at both ends."""
    u = np.clip(u, 0.0, 1.0)
    return u**3 * (10.0 + u * (-15.0 + 6.0 * u))


@dataclass(frozen=True)
class BumpKernel:
    """Even C^2 cutoff: 1 on [-plateau, plateau], quintic taper to 0 at
    +-kappa with kappa = 1/(8k), plateau = 1/(16k).  The flat plateau makes
    band-limited functions with transform inside it exact fixed points of
    the smoothing."""

    order_k: int = 1

    def __post_init__(self):
        if self.order_k < 1:
            raise ValueError("order_k must be >= 1")

    @property
    def kappa(self) -> float:
        return 1.0 / (8.0 * self.order_k)

    @property
    def plateau(self) -> float:
        return 1.0 / (16.0 * self.order_k)

    def __call__(self, xi):
        xi = np.abs(np.asarray(xi, dtype=float))
        scalar = xi.ndim == 0
        xi = np.atleast_1d(xi)
        out = np.zeros_like(xi)
        out[xi <= self.plateau] = 1.0
        taper = (xi > self.plateau) & (xi < self.kappa)
        out[taper] = _smoothstep((self.kappa - xi[taper]) / (self.kappa - self.plateau))
        return float(out[0]) if scalar else out

    def second_derivative_l1(self) -> float:
        """Exact ||K''||_1 = 2 * TV(s') / taper_width = 120 * order_k."""
        return 120.0 * self.order_k


# ----------------------------------------------------------------------
# smoothing weights
# ----------------------------------------------------------------------


def cauchy_kernel(x):
    """Unit-mass Cauchy density (1/pi) / (1 + x^2)."""
    x = np.asarray(x, dtype=float)
    return (1.0 / math.pi) / (1.0 + x * x)


@dataclass(frozen=True)
class SmoothingWeight:
    """Nonnegative weight with quadratic decay and band-limited transform.

    Built from dilated/translated Fejer squares; `terms` is a list of
    (weight, center, scale) with each term w * scale * S(scale*(x-center)),
    S(u) = (sin pi u / pi u)^2.
    """

    terms: tuple
    mass: float = field(default=0.0)
    q_norm: float = field(default=0.0)
    transform_support: tuple = field(default=(0.0, 0.0))

    def __post_init__(self):
        mass = sum(w for w, _, _ in self.terms)
        smax = max(s for _, _, s in self.terms)
        object.__setattr__(self, "mass", float(mass))
        object.__setattr__(self, "transform_support", (-smax, smax))
        object.__setattr__(self, "q_norm", self._compute_q_norm())

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.zeros_like(x)
        for w, c, s in self.terms:
            u = s * (x - c)
            out += w * s * np.sinc(u) ** 2
        return float(out[0]) if scalar else out

    def _compute_q_norm(self) -> float:
        # pi * sup (1+x^2) sigma(x): grid over the effective support plus the
        # analytic x -> inf limit of each term, then local refinement
        los = min(c - 60.0 / s for _, c, s in self.terms)
        his = max(c + 60.0 / s for _, c, s in self.terms)
        grid = np.linspace(los, his, 20001)
        vals = (1.0 + grid**2) * self(grid)
        i = int(np.argmax(vals))
        a = grid[max(i - 1, 0)]
        b = grid[min(i + 1, grid.size - 1)]
        fine = np.linspace(a, b, 4001)
        best = float(np.max((1.0 + fine**2) * self(fine)))
        tail_limit = sum(w / (math.pi**2 * s) for w, _, s in self.terms)
        return math.pi * max(best, tail_limit)

    def scaled(self, factor: float) -> "SmoothingWeight":
        return SmoothingWeight(tuple((w * factor, c, s) for w, c, s in self.terms))


def fejer_squared(center: float = 0.0, scale: float = 1.0) -> SmoothingWeight:
    """sigma(x) = scale * (sin(pi scale (x-center)) / (pi scale (x-center)))^2;
    mass 1, transform supported in [-scale, scale]."""
    return SmoothingWeight(((1.0, center, scale),))


def fejer_mixture(lo: float, hi: float, scale: float, count: int) -> SmoothingWeight:
    """Equal-weight comb of dilated Fejer squares approximating 1_[lo,hi]."""
    centers = lo + (hi - lo) * (np.arange(count) + 0.5) / count
    terms = tuple((1.0 / count, float(c), scale) for c in centers)
    return SmoothingWeight(terms)


def cauchy_sup_norm(sigma) -> float:
    """pi * sup (1+x^2)|sigma(x)|.

    SmoothingWeight instances carry it precomputed; callables are scanned on
    a wide grid with local refinement."""
    if isinstance(sigma, SmoothingWeight):
        return sigma.q_norm
    grid = np.linspace(-400.0, 400.0, 400001)
    vals = (1.0 + grid**2) * np.abs(sigma(grid))
    i = int(np.argmax(vals))
    fine = np.linspace(grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)], 4001)
    return math.pi * float(np.max((1.0 + fine**2) * np.abs(sigma(fine))))


# ----------------------------------------------------------------------
# band-limited smoothing
# ----------------------------------------------------------------------


class KernelSmoothed:
    """Vectorized evaluator for the band-limited smoothing of eta by K(./L).

    Frequency nodes are composite Gauss-Legendre panels laid out piecewise on
    [-kappa L, -plateau L], [-plateau L, plateau L], [plateau L, kappa L]
    (where the integrand is analytic), with panel counts scaled to the
    oscillation rate of e(z xi) at the largest argument in the batch.
    """

    def __init__(self, eta: TestFunction, kernel: BumpKernel, L: float):
        if L <= 0:
            raise ValueError("L must be positive")
        self.eta = eta
        self.kernel = kernel
        self.L = float(L)
        self._cache = {}

    @property
    def band(self) -> float:
        return self.kernel.kappa * self.L

    def integral(self) -> float:
        return self.eta.integral()

    def _node_layout(self, key: float):
        """GL nodes and raw weights on the band for an oscillation class.

        Panel edges include the kernel's plateau/taper knots and, for
        band-limited eta, the knots of its piecewise transform, so the
        integrand is analytic on every panel.
        """
        ck = ("layout", key)
        if ck not in self._cache:
            kap = self.band
            pla = self.kernel.plateau * self.L
            knots = {-kap, -pla, pla, kap}
            if isinstance(self.eta, BandLimited):
                for x in self.eta.transform.breakpoints:
                    if -kap < x < kap:
                        knots.add(float(x))
            edges_all = sorted(knots)
            # panels per unit xi: phase advance per GL-16 panel stays <= ~8 rad
            per_unit = 1.0 + 0.75 * key
            xs, ws = [], []
            x16, w16 = roots_legendre(16)
            for a, b in zip(edges_all[:-1], edges_all[1:]):
                n = max(4, int(math.ceil((b - a) * per_unit)))
                edges = np.linspace(a, b, n + 1)
                mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
                half = 0.5 * (edges[1] - edges[0])
                xs.append((mid + half * x16[None, :]).ravel())
                ws.append(np.tile(half * w16, n))
            self._cache[ck] = (np.concatenate(xs), np.concatenate(ws))
        return self._cache[ck]

    def _nodes(self, max_abs_x: float):
        key = max(4.0, 2.0 ** math.ceil(math.log2(max(max_abs_x, 1e-9) + 1.0)))
        if key not in self._cache:
            xi, raw = self._node_layout(key)
            w = raw * self.kernel(xi / self.L) * self.eta.fourier(xi)
            self._cache[key] = (xi, w)
        return self._cache[key]

    def values(self, x):
        """Smoothed eta at real x (vectorized); real part returned, the
        imaginary part vanishes by conjugate symmetry for real eta."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.empty(x.shape)
        order = np.argsort(np.abs(x))
        sorted_x = x[order]
        absx = np.abs(sorted_x)
        # octave batches share node sets
        start = 0
        while start < sorted_x.size:
            lim = max(4.0, absx[start] * 2.0) if absx[start] > 4.0 else 4.0
            stop = int(np.searchsorted(absx, lim, side="right"))
            stop = max(stop, start + 1)
            xi, w = self._nodes(absx[min(stop - 1, absx.size - 1)])
            chunkx = sorted_x[start:stop]
            for c0 in range(0, chunkx.size, 512):
                seg = chunkx[c0 : c0 + 512]
                phase = np.exp((2j * math.pi) * np.multiply.outer(seg, xi))
                out_seg = phase @ w
                out[order[start + c0 : start + c0 + seg.size]] = out_seg.real
            start = stop
        return float(out[0]) if scalar else out

    def values_complex(self, z):
        """Harmonic extension at complex z (vectorized)."""
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        xi, w = self._nodes(float(np.max(np.abs(z.real), initial=0.0)))
        out = np.empty(z.shape, dtype=complex)
        for c0 in range(0, z.size, 512):
            seg = z[c0 : c0 + 512]
            phase = np.exp((2j * math.pi) * np.multiply.outer(seg, xi))
            out[c0 : c0 + seg.size] = phase @ w
        return complex(out[0]) if scalar else out

    def is_exact_fixed_point(self) -> bool:
        """True when eta's transform sits inside the kernel plateau, making
        the smoothing the identity."""
        if isinstance(self.eta, BandLimited):
            lo, hi = self.eta.transform.support
            return max(abs(lo), abs(hi)) <= self.kernel.plateau * self.L + 1e-12
        return False

    def decay_constant(self) -> float:
        """C with |smoothed(x)| <= C / dist(x, supp eta)^2 away from the
        support, from |inverse transform of K(./L)| <= ||K''||_1/(4 pi^2 L u^2)
        convolved against |eta|.  Scales like 1/L, unlike the cruder
        transform-side second-derivative bound."""
        if self.is_exact_fixed_point():
            return 0.0
        if isinstance(self.eta, BandLimited):
            # generic fallback: ||(K_L etahat)''||_1 / (4 pi^2)
            L = self.L
            xi, raw_w = self._node_layout(8.0)
            k0 = self.kernel(xi / L)
            k1, k2 = _bump_derivs(self.kernel, xi / L)
            e0 = self.eta.fourier(xi)
            e1 = self.eta.fourier(xi, deriv=1)
            e2 = self.eta.fourier(xi, deriv=2)
            g2 = np.abs(k2 / L**2 * e0 + 2.0 * k1 / L * e1 + k0 * e2)
            return float(np.dot(raw_w, g2)) / (4.0 * math.pi**2)
        mass = self.eta.abs_integral()
        return self.kernel.second_derivative_l1() * mass / (4.0 * math.pi**2 * self.L)


def _bump_derivs(kernel: BumpKernel, u):
    """K'(u), K''(u) for the quintic taper (vectorized)."""
    u = np.asarray(u, dtype=float)
    s = np.sign(u)
    a = np.abs(u)
    p, k = kernel.plateau, kernel.kappa
    w = k - p
    d1 = np.zeros_like(a)
    d2 = np.zeros_like(a)
    taper = (a > p) & (a < k)
    v = (k - a[taper]) / w
    sp = 30.0 * v**2 * (1.0 - v) ** 2
    spp = 60.0 * v * (1.0 - v) * (1.0 - 2.0 * v)
    d1[taper] = -sp / w * s[taper]
    d2[taper] = spp / w**2
    return d1, d2


def bandlimited_convolve(kernel: BumpKernel, L: float, eta: TestFunction, z, tol: float = 1e-10):
    """Adaptive evaluation of the smoothed eta at a single (possibly complex)
    argument z: integral of K(xi/L) etahat(xi) e(z xi) over the band.

    Panels double until two successive refinements agree to `tol`; depth is
    capped at 30 doublings (QuadratureError beyond).  For real z and real eta
    the imaginary part is conjugate-cancelled to <= 1e-12.
    """
    z = complex(z)
    kap = kernel.kappa * L
    pla = kernel.plateau * L
    pieces = ((-kap, -pla), (-pla, pla), (pla, kap))
    x16, w16 = roots_legendre(16)

    def integrate(n_per_piece):
        total = 0.0 + 0.0j
        for (a, b), n in zip(pieces, n_per_piece):
            edges = np.linspace(a, b, n + 1)
            mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
            half = 0.5 * (edges[1] - edges[0])
            xi = (mid + half * x16[None, :]).ravel()
            w = np.tile(half * w16, n)
            f = kernel(xi / L) * eta.fourier(xi) * np.exp(2j * math.pi * z * xi)
            total += np.dot(w, f)
        return total

    base = max(4, int(math.ceil((abs(z.real) + 1.0) * kap / 4.0)))
    n = [base, 2 * base, base]
    prev = integrate(n)
    for depth in range(30):
        n = [2 * v for v in n]
        cur = integrate(n)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            if z.imag == 0.0:
                return complex(cur.real, cur.imag if abs(cur.imag) > 1e-12 else 0.0)
            return cur
        prev = cur
    raise QuadratureError(f"no convergence at z={z!r} after 30 refinements")


# ----------------------------------------------------------------------
# envelopes and tails
# ----------------------------------------------------------------------


def cell_envelope(k: int, eta: TestFunction) -> TestFunction:
    """Step function on [l, l+1) holding sup |eta| over [k l, k(l+1))."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    lo, hi = eta.support
    l_lo = math.floor(lo / k)
    l_hi = math.ceil(hi / k)
    cells = []
    for ell in range(l_lo, l_hi):
        s = eta.cell_sup(k * ell, k * (ell + 1))
        cells.append((ell, s))
    while cells and cells[0][1] == 0.0:
        cells.pop(0)
    while cells and cells[-1][1] == 0.0:
        cells.pop()
    if not cells:
        return TestFunction(np.array([0.0, 1.0]), np.array([[0.0]]))
    bp = np.array([cells[0][0]] + [c[0] + 1 for c in cells], dtype=float)
    cf = np.array([[c[1]] for c in cells])
    return TestFunction(bp, cf)


@dataclass(frozen=True)
class CauchyDilate:
    """Q(u/H) truncated to |u| <= trunc; supplies exact unit-cell sups so the
    log-weighted tail of a non-compactly-supported comparator is summable."""

    H: float
    trunc: float = 1e6

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        out = cauchy_kernel(u / self.H)
        return np.where(np.abs(u) <= self.trunc, out, 0.0)

    def cell_sup(self, lo: float, hi: float) -> float:
        if lo >= self.trunc or hi <= -self.trunc:
            return 0.0
        if lo >= 0:
            u = lo
        elif hi <= 0:
            u = abs(hi)
        else:
            u = 0.0
        return float(cauchy_kernel(u / self.H))

    @property
    def support(self):
        return (-self.trunc, self.trunc)


def log_weighted_tail(T: float, fn) -> float:
    """sum over |l| > sqrt(T) of log(|l|+2) * sup_{[l,l+1)} |fn|.

    Exact for TestFunction; CauchyDilate uses its closed-form cell sups.
    Zero when the support sits inside [-sqrt(T), sqrt(T)] on integer cells.
    """
    if T < 2:
        raise ValueError("T must be >= 2")
    r = math.sqrt(T)
    lo, hi = fn.support
    out = 0.0
    # positive cells l > sqrt(T)
    l_start = math.floor(r) + 1
    if hi > l_start:
        if isinstance(fn, CauchyDilate):
            ls = np.arange(l_start, math.ceil(min(hi, fn.trunc)) + 1, dtype=float)
            sups = cauchy_kernel(ls / fn.H)
            sups[ls + 1 > fn.trunc] = cauchy_kernel(ls[ls + 1 > fn.trunc] / fn.H)  # still the left end
            out += float(np.sum(np.log(ls + 2.0) * sups))
        else:
            for ell in range(l_start, math.ceil(hi)):
                out += math.log(ell + 2) * fn.cell_sup(ell, ell + 1)
    # negative cells l < -sqrt(T): cells [l, l+1) with |l| > sqrt(T)
    l_end = -math.floor(r) - 1
    if lo < l_end:
        if isinstance(fn, CauchyDilate):
            ls = np.arange(math.floor(max(lo, -fn.trunc)), l_end + 1, dtype=float)
            sups = cauchy_kernel(np.abs(ls + 1.0) / fn.H)
            out += float(np.sum(np.log(np.abs(ls) + 2.0) * sups))
        else:
            for ell in range(math.floor(lo), l_end + 1):
                out += math.log(abs(ell) + 2) * fn.cell_sup(ell, ell + 1)
    return out


# ----------------------------------------------------------------------
# lemma-scale numerical checks
# ----------------------------------------------------------------------


def check_pointwise_bound(kernel: BumpKernel, eta: TestFunction, L: float, eps: float, x_grid):
    """Empirical implied constant of the second-difference bound.

    LHS(x) = |f(x+i eps) + f(x-i eps) - 2 f(x)| for the smoothed eta f;
    RHS(x) = eps/(1+x^2) * (1+eps L) exp(2 pi kappa eps L).
    Returns max over the grid of LHS/RHS.
    """
    if eps < 0 or L <= 0:
        raise ValueError("eps >= 0 and L > 0 required")
    if eps == 0.0:
        return 0.0
    sm = KernelSmoothed(eta, kernel, L)
    x = np.asarray(x_grid, dtype=float)
    up = sm.values_complex(x + 1j * eps)
    dn = sm.values_complex(x - 1j * eps)
    mid = sm.values(x)
    lhs = np.abs(up + dn - 2.0 * mid)
    rhs = eps / (1.0 + x**2) * (1.0 + eps * L) * math.exp(TWO_PI * kernel.kappa * eps * L)
    return float(np.max(lhs / rhs))


def l1_truncation_error(
    kernel: BumpKernel,
    L: float,
    f: TestFunction,
    weighted: bool = False,
    envelope: bool = False,
    y_max: float = 24.0,
) -> float:
    """Truncation error of the band-limited smoothing in three norms.

    * envelope=False, weighted=False: ||f - smoothed f||_{L1(dy)}
    * envelope=False, weighted=True:  same with weight log(|y|+2)
    * envelope=True: the fine-cell envelope integral
      sum_l sup_{[l/L,(l+1)/L)} |f - smoothed f| * (1/L)
      (the normalization under which L * result stays bounded).

    The y integral runs to +-y_max; beyond it |f - smoothed f| = |smoothed f|
    is bounded by decay_constant()/y^2 and the closed-form tail integral of
    that bound is added, so the result is a slight over-estimate with the
    same 1/L scaling as the truth.
    """
    sm = KernelSmoothed(f, kernel, L)
    lo, hi = f.support
    if not math.isfinite(lo):  # band-limited input: quadratic spatial decay
        lo, hi = -0.5 * y_max, 0.5 * y_max
    # dense core around the support, oscillation-resolving mid range
    h_core = min(1.0 / (8.0 * L), 0.02)
    core = np.arange(lo - 2.0, hi + 2.0, h_core)
    h_mid = 1.0 / (12.0 * sm.band + 8.0)
    mid_r = np.arange(hi + 2.0, y_max, h_mid)
    mid_l = -np.arange(-(lo - 2.0), y_max, h_mid)[::-1]
    y = np.unique(np.concatenate([mid_l, core, mid_r]))
    diff = np.abs(f(y) - sm.values(y))
    C = sm.decay_constant()
    # tail beyond y_max, integrated against C/dist(y, supp)^2
    d_r = y_max - hi
    d_l = y_max + lo
    if envelope:
        cells = np.floor(y * L).astype(np.int64)
        order = np.argsort(cells, kind="stable")
        cells_s = cells[order]
        diff_s = diff[order]
        boundaries = np.nonzero(np.diff(cells_s))[0]
        sups = np.maximum.reduceat(diff_s, np.concatenate([[0], boundaries + 1]))
        total = float(np.sum(sups)) / L
        total += C / d_r + C / d_l
        return total
    w = np.log(np.abs(y) + 2.0) if weighted else np.ones_like(y)
    val = float(np.trapezoid(diff * w, y))
    if weighted:
        lg = math.log(y_max + 2.0)
        tail = C * (lg + 1.0) / d_r + C * (lg + 1.0) / d_l
    else:
        tail = C / d_r + C / d_l
    return val + tail
