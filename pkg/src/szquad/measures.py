"""Moment and density providers for measures on the unit circle.

All measures are normalized eagerly so that c_0 = (1/2pi) int dsigma = 1;
downstream code relies on that. Moments follow the convention
c_k = (1/2pi) int e^{-ik phi} dsigma(phi), so conjugate symmetry
c_{-k} = conj(c_k) holds for every (real, positive) measure here.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidCoefficientsError,
    InvalidMeasureError,
    ResolutionError,
    UnsupportedVariantError,
)
from .opuc_core import inverse_szego, moments_from_alphas, verblunsky_from_moments

P = np.polynomial.polynomial


def _as_complex_tuple(values):
    if np.isscalar(values) or isinstance(values, complex):
        values = [values]
    return tuple(complex(v) for v in values)


@dataclass(frozen=True)
class Lebesgue:
    """Normalized arc length dphi/(2pi)."""


@dataclass(frozen=True)
class BernsteinSzego:
    """Density proportional to 1/|P(e^{i phi})|^2 for monic P with the given roots.

    All roots must lie strictly inside the unit disk. The recurrence
    coefficients of this measure are the Schur parameters of P followed by
    zeros, and the normalizing constant is prod(1 - |schur_j|^2).
    """

    roots: tuple

    def __init__(self, roots):
        object.__setattr__(self, "roots", _as_complex_tuple(roots))
        if any(abs(b) >= 1.0 - 1e-14 for b in self.roots):
            raise InvalidCoefficientsError("Bernstein-Szego roots must lie in the open unit disk")


@dataclass(frozen=True)
class Geronimus:
    """Constant recurrence coefficient a_j = a for all j, |a| < 1."""

    a: complex

    def __init__(self, a):
        a = complex(a)
        if abs(a) >= 1.0 - 1e-14:
            raise InvalidCoefficientsError("Geronimus parameter must lie in the open unit disk")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class ExplicitVerblunsky:
    """Measure given by its recurrence coefficients.

    Coefficients beyond the stored ones are taken to be zero (the
    Bernstein-Szego extension), so any moment order is available.
    """

    coeffs: tuple

    def __init__(self, coeffs):
        coeffs = _as_complex_tuple(coeffs)
        if any(abs(a) >= 1.0 - 1e-14 for a in coeffs):
            raise InvalidCoefficientsError("recurrence coefficients must lie in the open unit disk")
        object.__setattr__(self, "coeffs", coeffs)


@dataclass(frozen=True)
class ExplicitMoments:
    """Measure known only through finitely many trigonometric moments."""

    c: tuple

    def __init__(self, c):
        c = _as_complex_tuple(c)
        if not c or c[0] == 0:
            raise InvalidMeasureError("moment sequence has zero mass")
        object.__setattr__(self, "c", c)


@dataclass(frozen=True)
class DensitySamples:
    """Density sampled on the uniform grid phi_j = 2*pi*j/N, j = 0..N-1."""

    values: tuple

    def __init__(self, values):
        values = tuple(float(v) for v in values)
        if any(v < 0 for v in values):
            raise InvalidMeasureError("density samples must be nonnegative")
        if not values or sum(values) <= 0:
            raise InvalidMeasureError("density samples must have positive mean")
        object.__setattr__(self, "values", values)


def measure_id(spec):
    """Short provenance token for rule artifacts."""
    if isinstance(spec, Lebesgue):
        return "lebesgue"
    if isinstance(spec, BernsteinSzego):
        return "bernstein-szego:" + ";".join(f"{b.real:g},{b.imag:g}" for b in spec.roots)
    if isinstance(spec, Geronimus):
        return f"geronimus:{spec.a.real:g},{spec.a.imag:g}"
    if isinstance(spec, ExplicitVerblunsky):
        return f"explicit-verblunsky[{len(spec.coeffs)}]"
    if isinstance(spec, ExplicitMoments):
        return f"explicit-moments[{len(spec.c)}]"
    if isinstance(spec, DensitySamples):
        return f"density-samples[{len(spec.values)}]"
    raise UnsupportedVariantError(f"unknown measure spec {spec!r}")


def _grid_moments(values, n):
    values = np.asarray(values, dtype=float)
    if len(values) < 4 * n:
        raise ResolutionError(
            f"grid of {len(values)} samples cannot resolve {n} moments (need >= {4 * n})"
        )
    raw = np.fft.fft(values)[: n + 1] / len(values)
    if raw[0].real <= 0:
        raise InvalidMeasureError("sampled density has zero mass")
    return raw / raw[0]


def verblunsky_prefix(spec, count):
    """First `count` recurrence coefficients of the measure."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if isinstance(spec, Lebesgue):
        return np.zeros(count, dtype=complex)
    if isinstance(spec, BernsteinSzego):
        monic = P.polyfromroots(np.asarray(spec.roots, dtype=complex)) if spec.roots \
            else np.array([1.0 + 0j])
        schur = inverse_szego(monic)
        out = np.zeros(count, dtype=complex)
        out[: min(count, len(schur))] = schur[:count]
        return out
    if isinstance(spec, Geronimus):
        return np.full(count, spec.a, dtype=complex)
    if isinstance(spec, ExplicitVerblunsky):
        out = np.zeros(count, dtype=complex)
        stored = np.asarray(spec.coeffs, dtype=complex)
        out[: min(count, len(stored))] = stored[:count]
        return out
    if isinstance(spec, ExplicitMoments):
        c = np.asarray(spec.c, dtype=complex)
        if len(c) < count + 1:
            raise InvalidMeasureError(
                f"need {count + 1} moments to extract {count} coefficients, have {len(c)}"
            )
        return verblunsky_from_moments(c / c[0], count)
    if isinstance(spec, DensitySamples):
        return verblunsky_from_moments(_grid_moments(spec.values, count), count)
    raise UnsupportedVariantError(f"unknown measure spec {spec!r}")


def moments(spec, n):
    """Normalized moments c_0..c_n of the measure."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if isinstance(spec, Lebesgue):
        out = np.zeros(n + 1, dtype=complex)
        out[0] = 1.0
        return out
    if isinstance(spec, (BernsteinSzego, Geronimus, ExplicitVerblunsky)):
        return moments_from_alphas(verblunsky_prefix(spec, n), n)
    if isinstance(spec, ExplicitMoments):
        c = np.asarray(spec.c, dtype=complex)
        if len(c) < n + 1:
            raise InvalidMeasureError(f"spec holds {len(c)} moments, {n + 1} requested")
        return c[: n + 1] / c[0]
    if isinstance(spec, DensitySamples):
        return _grid_moments(spec.values, n)
    raise UnsupportedVariantError(f"unknown measure spec {spec!r}")


def density_eval(spec, phi):
    """Density f(phi) of the absolutely continuous part, normalized so that
    (1/2pi) int f dphi accounts for the a.c. mass.

    Geronimus measures may carry a point mass on top of the returned density,
    so integrating f on a grid need not reproduce moments(spec, ...).
    """
    phi_arr = np.asarray(phi, dtype=float)
    scalar = phi_arr.ndim == 0
    z = np.exp(1j * phi_arr)

    if isinstance(spec, Lebesgue):
        out = np.ones_like(phi_arr)
    elif isinstance(spec, BernsteinSzego):
        monic = P.polyfromroots(np.asarray(spec.roots, dtype=complex)) if spec.roots \
            else np.array([1.0 + 0j])
        schur = inverse_szego(monic)
        const = np.prod(1.0 - np.abs(schur) ** 2)
        out = const / np.abs(P.polyval(z, monic)) ** 2
    elif isinstance(spec, Geronimus):
        out = _geronimus_density(spec.a, z)
    elif isinstance(spec, DensitySamples):
        vals = np.asarray(spec.values, dtype=float)
        vals = vals / vals.mean()
        grid = 2 * np.pi * np.arange(len(vals) + 1) / len(vals)
        out = np.interp(np.mod(phi_arr, 2 * np.pi), grid, np.append(vals, vals[0]))
    else:
        raise UnsupportedVariantError(f"{type(spec).__name__} has no pointwise density")
    return float(out) if scalar else out


def _geronimus_density(a, z):
    """A.c. density of the constant-coefficient measure via its Schur function.

    The Schur function with constant parameters conj(a) satisfies
    a z f^2 + (1 - z) f - conj(a) = 0; picking the root with |f| <= 1 and
    forming the Caratheodory transform F = (1 + z f)/(1 - z f) gives the
    density as the boundary real part. Off the support arc both roots are
    unimodular and the real part vanishes.
    """
    if a == 0:
        return np.ones_like(np.real(z))
    disc = np.sqrt((1.0 - z) ** 2 + 4.0 * abs(a) ** 2 * z)
    f1 = ((z - 1.0) + disc) / (2.0 * a * z)
    f2 = ((z - 1.0) - disc) / (2.0 * a * z)
    f = np.where(np.abs(f1) <= np.abs(f2), f1, f2)
    F = (1.0 + z * f) / (1.0 - z * f)
    return np.maximum(F.real, 0.0)


def caratheodory_series(spec, order):
    """Truncated power series of F(z) = 1 + 2 sum_{k>=1} c_k z^k."""
    c = moments(spec, order)
    out = 2.0 * c
    out[0] = 1.0
    return out


def has_density(spec):
    return isinstance(spec, (Lebesgue, BernsteinSzego, Geronimus, DensitySamples))


# --- file formats (shared with the CLI) ---------------------------------

def load_moments_file(path):
    """Moment file: one complex per line as `re im` (imaginary part optional)."""
    rows = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (1, 2):
                raise InvalidMeasureError(f"bad moment line {line!r}")
            re = float(parts[0])
            im = float(parts[1]) if len(parts) == 2 else 0.0
            rows.append(complex(re, im))
    if not rows:
        raise InvalidMeasureError(f"no moments found in {path}")
    return np.array(rows, dtype=complex)


def load_density_file(path):
    """Density file: header line `grid_size`, then one nonnegative real per line."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise InvalidMeasureError(f"empty density file {path}")
    try:
        size = int(lines[0])
    except ValueError as exc:
        raise InvalidMeasureError(f"density file must start with grid_size, got {lines[0]!r}") from exc
    vals = [float(v) for v in lines[1:]]
    if len(vals) != size:
        raise InvalidMeasureError(f"density file declares {size} samples, holds {len(vals)}")
    return DensitySamples(vals)
