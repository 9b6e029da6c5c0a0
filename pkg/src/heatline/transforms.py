"""Fourier integral transforms with Gauss summability, and mollification.

The forward transform pairs a function with the character
exp(-2 pi i x.xi); the inverse transform flips the sign.  Since the
inverse transform of a transform need not be integrable, inversion is
regularized by a Gauss weight: the xi-integral of
fhat(xi) exp(2 pi i x.xi) gauss_alpha(xi) equals the Weierstrass
mollification (W_alpha * f)(x), and converges to f(x) as alpha -> 0.
That equality is computed here from quadrature-sampled transform values,
never substituted analytically, so it stays a falsifiable cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import KernelScale, gauss, weierstrass, weierstrass_peak
from .quadrature import (
    CompactSupport,
    GaussianDecay,
    GridSpec,
    QuadratureError,
    TestFunction,
    _coarse_points,
    _simpson_axis,
    integrate,
    integrate_auto,
    l1_norm,
    node_budget,
    points_ladder,
    radius_ladder,
)

_TWO_PI = 2.0 * math.pi
_CHUNK = 1 << 17
_TINY = 1e-300
_FREQ_CUTOFF = 1e-12  # gauss weight level that sets the sampled-frequency cube


@dataclass(frozen=True)
class FrequencySample:
    """A frequency point together with a transform value there."""

    xi: tuple[float, ...]
    value: complex


@dataclass(frozen=True)
class SummabilityTrace:
    """Values along a decreasing ladder of kernel scales, at an optional point."""

    alphas: tuple[float, ...]
    values: tuple[complex, ...]
    point: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.alphas) != len(self.values):
            raise ValueError("one value per alpha required")
        if len(self.alphas) == 0:
            raise ValueError("empty trace")
        arr = np.asarray(self.alphas, dtype=float)
        if np.any(arr <= 0.0) or np.any(np.diff(arr) >= 0.0):
            raise ValueError("alphas must be strictly decreasing positive reals")


@dataclass(frozen=True)
class SummabilityResult:
    limit: complex
    converged: bool
    final_difference: float


@dataclass(frozen=True)
class L1ContractionReport:
    """Both sides of the smoothing L1 inequality, with their error budgets."""

    lhs: float
    rhs: float
    lhs_error_budget: float
    rhs_error_budget: float


@dataclass(frozen=True)
class MultiplicationReport:
    """Both sides of the transform duality integral."""

    lhs: complex
    rhs: complex


def _real_point(x, dim: int) -> np.ndarray:
    a = np.atleast_1d(np.asarray(x, dtype=float))
    if a.shape != (dim,):
        raise ValueError(f"expected a real point of dimension {dim}, got shape {a.shape}")
    return a


def _require_integrable(f: TestFunction, what: str) -> None:
    if not f.integrable:
        raise QuadratureError(
            f"{what} needs an integrable-certified function; {f.name!r} has a "
            f"{type(f.envelope).__name__} envelope"
        )


def _pick_radius(envelope, dim: int, tol: float, label: str) -> float:
    rungs = radius_ladder()
    for r in rungs:
        if envelope.tail_bound(r, dim) <= tol / 2.0:
            return r
    raise QuadratureError(
        f"tolerance unreachable at budget for {label}: tail bound stays above "
        f"{tol / 2:.3e} at radius {rungs[-1]}"
    )


def _phase_sum(f: TestFunction, radius: float, n_points: int, xi_arr: np.ndarray, sign: float) -> np.ndarray:
    """Simpson sum of f(x) exp(sign 2 pi i x.xi) over the grid, for each row of xi_arr."""
    nodes, wts = _simpson_axis(radius, n_points)
    m = nodes.size
    dim = f.dim
    if dim == 1:
        wf = wts * f(nodes.reshape(-1, 1))
        phases = np.exp(sign * 2j * math.pi * np.outer(nodes, xi_arr[:, 0]))
        return wf @ phases
    total = m**dim
    shape = (m,) * dim
    out = np.zeros(xi_arr.shape[0], dtype=np.complex128)
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, total))
        multi = np.unravel_index(flat, shape)
        pts = np.stack([nodes[ix] for ix in multi], axis=-1)
        w = np.ones(flat.size)
        for ix in multi:
            w *= wts[ix]
        wf = w * f(pts)
        out += wf @ np.exp(sign * 2j * math.pi * (pts @ xi_arr.T))
    return out


def _transform_profile(f: TestFunction, xi_arr: np.ndarray, tol: float, sign: float) -> np.ndarray:
    """Transform values at a batch of real frequencies, on one escalating grid."""
    _require_integrable(f, "the Fourier transform")
    radius = _pick_radius(f.envelope, f.dim, tol, f.name)
    worst = float(np.max(np.sqrt(np.sum(xi_arr * xi_arr, axis=1)))) if xi_arr.size else 0.0
    min_points = 8.0 * radius * worst
    budget = node_budget()
    tried = False
    for n in points_ladder():
        if n**f.dim > budget:
            break
        if n < min_points:
            continue
        tried = True
        fine = _phase_sum(f, radius, n, xi_arr, sign)
        coarse = _phase_sum(f, radius, _coarse_points(n), xi_arr, sign)
        if float(np.max(np.abs(fine - coarse))) <= tol / 2.0:
            return fine
    reason = "discretization estimate never met the tolerance" if tried else "phase cap exceeds the point ladder"
    raise QuadratureError(f"tolerance unreachable at budget for {f.name!r}: {reason}")


def fourier(f: TestFunction, xi, tol: float = 1e-8) -> complex:
    """Transform value integral of f(x) exp(-2 pi i x.xi) over R^n."""
    xi = _real_point(xi, f.dim)
    return complex(_transform_profile(f, xi.reshape(1, -1), tol, -1.0)[0])


def inverse_fourier(phi: TestFunction, x, tol: float = 1e-8) -> complex:
    """Inverse transform: integral of phi(xi) exp(+2 pi i x.xi) over R^n."""
    x = _real_point(x, phi.dim)
    return complex(_transform_profile(phi, x.reshape(1, -1), tol, +1.0)[0])


def fourier_profile(
    f: TestFunction, xi_list, tol: float = 1e-8, inverse: bool = False
) -> list[FrequencySample]:
    """Transform values over a list of frequencies, sharing one grid."""
    arr = np.asarray(xi_list, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if f.dim == 1 else arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != f.dim:
        raise ValueError(f"frequency list must have shape (k, {f.dim})")
    values = _transform_profile(f, arr, tol, +1.0 if inverse else -1.0)
    return [FrequencySample(tuple(map(float, row)), complex(v)) for row, v in zip(arr, values)]


def fourier_complex(f: TestFunction, xi, tol: float = 1e-8) -> complex:
    """Transform of f at a complex frequency, certified by a Gaussian envelope.

    The integrand gains a factor exp(2 pi x . Im xi); only a GaussianDecay
    envelope can absorb that growth into a certified tail, via
    exp(-c r^2 + 2 pi q r) <= exp(2 pi^2 q^2 / c) exp(-c r^2 / 2).
    """
    arr = np.atleast_1d(np.asarray(xi, dtype=complex))
    if arr.shape != (f.dim,):
        raise ValueError(f"expected a frequency of dimension {f.dim}, got shape {arr.shape}")
    re, im = arr.real.copy(), arr.imag.copy()
    if not np.any(im):
        return fourier(f, re, tol)
    if not isinstance(f.envelope, GaussianDecay):
        raise QuadratureError(
            f"complex-frequency transform of {f.name!r} needs a GaussianDecay envelope "
            "to certify the tail against exponential growth"
        )
    c = f.envelope.rate
    q = float(np.sqrt(np.sum(im * im)))
    grown = GaussianDecay(c / 2.0, f.envelope.scale * math.exp(2.0 * math.pi**2 * q * q / c))
    inner = f.f

    def fn(pts: np.ndarray) -> np.ndarray:
        return (
            np.asarray(inner(pts))
            * np.exp(-2j * math.pi * (pts @ re))
            * np.exp(_TWO_PI * (pts @ im))
        )

    g = TestFunction(fn, f.dim, grown, name=f"fourier[{f.name}]@complex")
    result, _ = integrate_auto(g, tol, phase_rate=float(np.sqrt(np.sum(re * re))))
    return complex(result.value)


def gauss_mean(f: TestFunction, alpha: float, tol: float = 1e-8) -> complex:
    """Gauss mean: integral of f(x) gauss_alpha(x) over R^n."""
    scale = KernelScale(alpha, f.dim)
    inner = f.f

    def fn(pts: np.ndarray) -> np.ndarray:
        return np.asarray(inner(pts)) * gauss(scale, pts)

    weight_rate = 4.0 * math.pi**2 * alpha
    if f.integrable:
        envelope = f.envelope
        if isinstance(envelope, GaussianDecay):
            envelope = GaussianDecay(envelope.rate + weight_rate, envelope.scale)
    elif f.bounded:
        envelope = GaussianDecay(weight_rate, max(f.sup_bound, _TINY))
    else:
        raise QuadratureError(
            f"the Gauss mean of {f.name!r} needs a bounded or integrable-certified function"
        )
    g = TestFunction(fn, f.dim, envelope, name=f"gauss-mean[{f.name}]")
    result, _ = integrate_auto(g, tol)
    return complex(result.value)


def gauss_mean_trace(f: TestFunction, alphas, tol: float = 1e-8) -> SummabilityTrace:
    """Gauss means along a decreasing ladder of scales."""
    alphas = tuple(float(a) for a in alphas)
    values = tuple(gauss_mean(f, a, tol) for a in alphas)
    return SummabilityTrace(alphas=alphas, values=values, point=None)


def gauss_summable_limit(trace: SummabilityTrace, tol: float = 1e-6) -> SummabilityResult:
    """Declare the trace convergent and report its limit.

    Convergence requires the last two successive differences to shrink by a
    factor of at least 0.75 and the final difference to be at most 10 * tol;
    a heuristic, but a documented one.
    """
    if len(trace.alphas) < 4:
        raise ValueError(f"need at least 4 ladder rungs, got {len(trace.alphas)}")
    ratios = np.diff(np.asarray(trace.alphas)) / np.asarray(trace.alphas[:-1])
    if np.any(-ratios < 0.5 - 1e-12):
        raise ValueError("ladder must decrease geometrically with ratio <= 1/2")
    diffs = np.abs(np.diff(np.asarray(trace.values, dtype=complex)))
    final = float(diffs[-1])
    if final == 0.0:
        converged = True
    else:
        prev = float(diffs[-2])
        converged = final <= 10.0 * tol and prev > 0.0 and final / prev <= 0.75
    return SummabilityResult(limit=complex(trace.values[-1]), converged=converged, final_difference=final)


def mollify(f: TestFunction, alpha: float, x, tol: float = 1e-8) -> complex:
    """Smoothed value (W_alpha * f)(x) = integral of f(y) W_alpha(x - y) dy."""
    x = _real_point(x, f.dim)
    scale = KernelScale(alpha, f.dim)
    peak = weierstrass_peak(scale)
    inner = f.f
    if f.bounded:
        # integrate in u = x - y so the kernel, and hence the envelope,
        # stays centered at the origin
        def fn(pts: np.ndarray) -> np.ndarray:
            return np.asarray(inner(x - pts)) * weierstrass(scale, pts)

        envelope = GaussianDecay(1.0 / (4.0 * alpha), max(f.sup_bound, _TINY) * peak)
    elif f.integrable:
        def fn(pts: np.ndarray) -> np.ndarray:
            return np.asarray(inner(pts)) * weierstrass(scale, x - pts)

        envelope = f.envelope.scaled(peak)
    else:
        raise QuadratureError(
            f"mollification of {f.name!r} needs a bounded or integrable-certified function"
        )
    g = TestFunction(fn, f.dim, envelope, name=f"mollify[{f.name}]")
    result, _ = integrate_auto(g, tol)
    return complex(result.value)


def mollify_trace(f: TestFunction, alphas, x, tol: float = 1e-8) -> SummabilityTrace:
    """Mollified values at x along a decreasing ladder of scales."""
    x = _real_point(x, f.dim)
    alphas = tuple(float(a) for a in alphas)
    values = tuple(mollify(f, a, x, tol) for a in alphas)
    return SummabilityTrace(alphas=alphas, values=values, point=tuple(map(float, x)))


def _mollified_on_points(
    f: TestFunction, alpha: float, xs: np.ndarray, inner_tol: float
) -> np.ndarray:
    """(W_alpha * f)(x) for each row of xs, on one shared escalating grid."""
    if not f.bounded:
        raise QuadratureError(f"batched mollification needs a bounded function, got {f.name!r}")
    scale = KernelScale(alpha, f.dim)
    peak = weierstrass_peak(scale)
    envelope = GaussianDecay(1.0 / (4.0 * alpha), max(f.sup_bound, _TINY) * peak)
    radius = _pick_radius(envelope, f.dim, inner_tol, f"mollify[{f.name}]")
    budget = node_budget()
    for n in points_ladder():
        if n**f.dim > budget:
            break
        fine = _moll_sum(f, scale, xs, radius, n)
        coarse = _moll_sum(f, scale, xs, radius, _coarse_points(n))
        if float(np.max(np.abs(fine - coarse))) <= inner_tol / 2.0:
            return fine
    raise QuadratureError(f"tolerance unreachable at budget for mollify[{f.name}]")


def _moll_sum(f: TestFunction, scale: KernelScale, xs: np.ndarray, radius: float, n_points: int) -> np.ndarray:
    nodes, wts = _simpson_axis(radius, n_points)
    m_nodes = nodes.size
    dim = f.dim
    total = m_nodes**dim
    shape = (m_nodes,) * dim
    n_out = xs.shape[0]
    out = np.zeros(n_out, dtype=np.complex128)
    chunk = max(256, min(_CHUNK, (1 << 21) // max(1, n_out)))
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        multi = np.unravel_index(flat, shape)
        upts = np.stack([nodes[ix] for ix in multi], axis=-1)
        w = np.ones(flat.size)
        for ix in multi:
            w *= wts[ix]
        kw = w * weierstrass(scale, upts)
        shifted = xs[:, None, :] - upts[None, :, :]
        vals = f(shifted.reshape(-1, dim)).reshape(n_out, flat.size)
        out += vals @ kw.astype(np.complex128)
    return out


def mollify_l1_check(
    f: TestFunction, alpha: float, grid: GridSpec, inner_tol: float = 1e-8
) -> L1ContractionReport:
    """Check the L1 contraction: smoothed mass never exceeds the original.

    The left side integrates |(W_alpha * f)| over the given grid; the right
    side is the integral of |f|.  Cancellation under smoothing can only
    shrink the left side.
    """
    _require_integrable(f, "the L1 contraction check")
    if f.dim != grid.dim:
        raise ValueError(f"dimension mismatch: function {f.dim}, grid {grid.dim}")
    rhs = l1_norm(f, inner_tol)
    env = f.envelope
    if isinstance(env, CompactSupport):
        if not f.bounded:
            raise QuadratureError("a compactly supported integrand needs a sup bound here")
        rate = 1.0 / (4.0 * alpha)
        env = GaussianDecay(rate, max(f.sup_bound, _TINY) * math.exp(rate * env.radius**2))
    if not isinstance(env, GaussianDecay):
        raise QuadratureError(
            f"the L1 check of {f.name!r} needs a Gaussian or compact envelope"
        )
    # Gaussian convolution in closed form: smoothing a C exp(-c|x|^2)
    # envelope yields C (1+4ac)^(-n/2) exp(-c|x|^2 / (1+4ac))
    spread = 1.0 + 4.0 * alpha * env.rate
    outer_env = GaussianDecay(env.rate / spread, env.scale * spread ** (-f.dim / 2.0))

    def outer_fn(pts: np.ndarray) -> np.ndarray:
        return np.abs(_mollified_on_points(f, alpha, pts, inner_tol))

    g = TestFunction(outer_fn, f.dim, outer_env, name=f"|smooth[{f.name}]|")
    lhs = integrate(g, grid)
    inner_mass = (2.0 * grid.radius) ** f.dim
    return L1ContractionReport(
        lhs=float(lhs.value.real),
        rhs=float(rhs.value.real),
        lhs_error_budget=lhs.error_budget + inner_mass * inner_tol,
        rhs_error_budget=rhs.error_budget,
    )


def _sampled_transform(f: TestFunction, inner_tol: float, max_freq: float, sign: float = -1.0):
    """Freeze a grid for f and return (batch transform callable, L1 bound, grid).

    The callable evaluates the quadrature transform at arbitrary frequency
    points; by positivity of the Simpson weights its values are uniformly
    bounded by the returned quadrature L1 mass, which certifies envelopes
    built on top of it.
    """
    _require_integrable(f, "the sampled Fourier transform")
    radius = _pick_radius(f.envelope, f.dim, inner_tol, f.name)
    budget = node_budget()
    min_points = 8.0 * radius * max_freq
    probe = np.zeros((1, f.dim))
    probe[0, 0] = max_freq
    chosen = None
    for n in points_ladder():
        if n**f.dim > budget:
            break
        if n < min_points:
            continue
        fine = _phase_sum(f, radius, n, probe, sign)
        coarse = _phase_sum(f, radius, _coarse_points(n), probe, sign)
        if float(np.max(np.abs(fine - coarse))) <= inner_tol / 2.0:
            chosen = n
            break
    if chosen is None:
        raise QuadratureError(f"tolerance unreachable at budget sampling the transform of {f.name!r}")

    nodes, wts = _simpson_axis(radius, chosen)
    dim = f.dim
    if dim == 1:
        pts = nodes.reshape(-1, 1)
        w = wts
    else:
        m = nodes.size
        if m**dim > 1 << 22:
            raise QuadratureError(
                f"sampled transform of {f.name!r} needs {m}^{dim} nodes; over the materialization budget"
            )
        mesh = np.meshgrid(*([nodes] * dim), indexing="ij")
        pts = np.stack([ax.reshape(-1) for ax in mesh], axis=-1)
        wmesh = np.meshgrid(*([wts] * dim), indexing="ij")
        w = np.ones(pts.shape[0])
        for ax in wmesh:
            w *= ax.reshape(-1)
    wf = w * f(pts)
    l1_mass = float(np.sum(np.abs(wf)))

    def values(xi_pts: np.ndarray) -> np.ndarray:
        k = xi_pts.shape[0]
        if pts.shape[0] * k > 1 << 31:
            raise QuadratureError("sampled-transform evaluation exceeds the matrix budget")
        out = np.empty(k, dtype=np.complex128)
        step = max(1, (1 << 22) // pts.shape[0])
        for start in range(0, k, step):
            block = xi_pts[start : start + step]
            out[start : start + block.shape[0]] = wf @ np.exp(
                sign * 2j * math.pi * (pts @ block.T)
            )
        return out

    return values, l1_mass, GridSpec(radius, chosen, dim)


def gauss_inversion(f: TestFunction, x, alpha: float, tol: float = 1e-8) -> complex:
    """Gauss-weighted inversion integral at x, from sampled transform values.

    Computes the xi-integral of fhat(xi) exp(2 pi i x.xi) gauss_alpha(xi)
    with fhat itself obtained by quadrature, so agreement with the
    mollified value (W_alpha * f)(x) is a genuine two-route check.
    """
    _require_integrable(f, "Gauss-summable inversion")
    x = _real_point(x, f.dim)
    scale = KernelScale(alpha, f.dim)
    peak = weierstrass_peak(scale)  # integral of the gauss weight
    freq_radius = math.sqrt(math.log(1.0 / _FREQ_CUTOFF) / (4.0 * math.pi**2 * alpha))
    inner_tol = tol / (2.0 * max(1.0, peak))
    fhat, l1_mass, xgrid = _sampled_transform(f, inner_tol, freq_radius * math.sqrt(f.dim))

    def fn(xi_pts: np.ndarray) -> np.ndarray:
        return fhat(xi_pts) * np.exp(2j * math.pi * (xi_pts @ x)) * gauss(scale, xi_pts)

    envelope = GaussianDecay(4.0 * math.pi**2 * alpha, l1_mass * (1.0 + 1e-9) + _TINY)
    g = TestFunction(fn, f.dim, envelope, name=f"gauss-inv[{f.name}]")
    rate = float(np.sqrt(np.sum(x * x))) + xgrid.radius * math.sqrt(f.dim)
    result, _ = integrate_auto(g, tol / 2.0, phase_rate=rate)
    return complex(result.value)


def gauss_inversion_trace(f: TestFunction, alphas, x, tol: float = 1e-8) -> SummabilityTrace:
    """Inversion values at x along a decreasing ladder of scales."""
    x = _real_point(x, f.dim)
    alphas = tuple(float(a) for a in alphas)
    values = tuple(gauss_inversion(f, a_, x, tol) for a_ in alphas)
    return SummabilityTrace(alphas=alphas, values=values, point=tuple(map(float, x)))


def multiplication_formula_check(
    f: TestFunction, psi: TestFunction, tol: float = 1e-8
) -> MultiplicationReport:
    """Both sides of the duality: integral of fhat psi vs integral of f psihat.

    Each side samples one transform by quadrature and integrates it against
    the other factor, so the two sides share no computation path.
    """
    if f.dim != psi.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {psi.dim}")
    for side in (f, psi):
        _require_integrable(side, "the multiplication formula")
        if not isinstance(side.envelope, (GaussianDecay, CompactSupport)):
            raise QuadratureError(
                f"the multiplication formula needs Gaussian or compact envelopes, "
                f"got {type(side.envelope).__name__} for {side.name!r}"
            )
    lhs = _dual_pairing(f, psi, tol)
    rhs = _dual_pairing(psi, f, tol)
    return MultiplicationReport(lhs=lhs, rhs=rhs)


def _dual_pairing(transformed: TestFunction, weight: TestFunction, tol: float) -> complex:
    """Integral of (transform of `transformed`) times `weight`."""
    rough = l1_norm(transformed, 1e-6).value.real
    pre_env = weight.envelope.scaled(max(rough * 1.01, _TINY))
    radius = _pick_radius(pre_env, weight.dim, tol, weight.name)
    sampler, l1_mass, sgrid = _sampled_transform(
        transformed, tol / (2.0 * (2.0 * radius) ** weight.dim), radius * math.sqrt(weight.dim)
    )
    inner = weight.f

    def fn(xi_pts: np.ndarray) -> np.ndarray:
        return sampler(xi_pts) * np.asarray(inner(xi_pts))

    envelope = weight.envelope.scaled(l1_mass * (1.0 + 1e-9) + _TINY)
    g = TestFunction(fn, weight.dim, envelope, name=f"dual[{transformed.name},{weight.name}]")
    result, _ = integrate_auto(g, tol / 2.0, phase_rate=sgrid.radius * math.sqrt(weight.dim))
    return complex(result.value)


def modulate(h: TestFunction, a, eta, tol: float = 1e-8) -> complex:
    """Transform of h(x) exp(2 pi i a.x) at eta; the shift rule sends it to eta - a."""
    _require_integrable(h, "modulation")
    a = _real_point(a, h.dim)
    eta = _real_point(eta, h.dim)
    inner = h.f

    def fn(pts: np.ndarray) -> np.ndarray:
        return np.asarray(inner(pts)) * np.exp(2j * math.pi * (pts @ a))

    modded = TestFunction(
        fn,
        h.dim,
        h.envelope,
        bounded=h.bounded,
        sup_bound=h.sup_bound,
        name=f"mod[{h.name}]",
    )
    return fourier(modded, eta, tol)
