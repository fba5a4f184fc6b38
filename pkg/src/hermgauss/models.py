"""Statistical models on the (mu, sigma) plane.

A state is described by a coefficient table lambda_{nm} over oscillator
number states; its position distribution is

    P(x) = f(y(x)) / sigma,    y(x) = (x - mu) / (sqrt(2) sigma),

with the dimensionless kernel

    f(y) = sum_{nm} Re(lambda_{nm}) a_n a_m exp(-y^2) H_n(y) H_m(y) / sqrt(2 pi),

which integrates to 1/sqrt(2) over the real line.  All kernel evaluation is
carried on the normalized Hermite functions so large indices stay finite.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .hermite import hermite_normalized_all

__all__ = [
    "InvalidStateError",
    "ModelPoint",
    "PhysicalOscillator",
    "StateSpec",
    "KernelFn",
    "pdf",
    "kernel",
    "kernel_pure_factored",
    "from_physical",
    "wavefunction",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_NORM_TOL = 1e-12
# Eigenvalue checks of density tables are only run up to this dimension.
_PSD_CHECK_DIM = 64


class InvalidStateError(ValueError):
    """The state description violates a normalization or positivity rule."""


@dataclass(frozen=True)
class ModelPoint:
    """A point (mu, sigma) of the two-parameter manifold, sigma > 0."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            raise ValueError("mu and sigma must be finite")
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def y_of_x(self, x):
        return (np.asarray(x, dtype=float) - self.mu) / (math.sqrt(2.0) * self.sigma)


@dataclass(frozen=True)
class PhysicalOscillator:
    """Oscillator constants (mass, angular frequency, equilibrium position)."""

    mass: float
    omega0: float
    x0: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.mass <= 0.0 or self.omega0 <= 0.0 or self.hbar <= 0.0:
            raise ValueError("mass, omega0 and hbar must be positive")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.hbar / (2.0 * self.mass * self.omega0))

    def energy(self, n: int) -> float:
        if n < 0:
            raise ValueError("level index must be non-negative")
        return self.hbar * self.omega0 * (n + 0.5)


def from_physical(osc: PhysicalOscillator) -> ModelPoint:
    """Map oscillator constants to the manifold point (x0, sigma)."""
    return ModelPoint(mu=osc.x0, sigma=osc.sigma)


class StateSpec:
    """Immutable description of an oscillator state.

    Construct through one of the classmethods:

    * :meth:`eigenstate` -- the number state ``|n>``;
    * :meth:`mixture` -- a convex mixture of number states;
    * :meth:`superposition` -- a pure state sum alpha_n |n>;
    * :meth:`density` -- an explicit Hermitian coefficient table lambda_nm.

    Every variant is reduced to a sparse Hermitian table with unit trace,
    which is what the kernel evaluation consumes.
    """

    __slots__ = ("kind", "table", "weights", "coeffs", "parity_even",
                 "psd_checked", "max_index", "_kernel_cache")

    def __init__(self, kind, table, weights=None, coeffs=None, psd_checked=True):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "table", dict(table))
        object.__setattr__(self, "weights", None if weights is None else dict(weights))
        object.__setattr__(self, "coeffs", None if coeffs is None else dict(coeffs))
        object.__setattr__(self, "psd_checked", psd_checked)
        object.__setattr__(self, "max_index",
                           max((max(n, m) for (n, m) in self.table), default=0))
        parity = all((n - m) % 2 == 0 for (n, m) in self.table)
        object.__setattr__(self, "parity_even", parity)
        object.__setattr__(self, "_kernel_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("StateSpec is immutable")

    def __repr__(self):
        return f"StateSpec(kind={self.kind!r}, max_index={self.max_index})"

    # -- constructors -----------------------------------------------------

    @classmethod
    def eigenstate(cls, n: int) -> "StateSpec":
        n = int(n)
        if n < 0:
            raise InvalidStateError("eigenstate index must be non-negative")
        return cls("eigenstate", {(n, n): 1.0 + 0.0j}, weights={n: 1.0},
                   coeffs={n: 1.0 + 0.0j})

    @classmethod
    def mixture(cls, weights, renormalize: bool = False) -> "StateSpec":
        w = {int(n): float(v) for n, v in dict(weights).items()}
        if not w:
            raise InvalidStateError("mixture needs at least one term")
        if any(v < 0.0 for v in w.values()):
            raise InvalidStateError("mixture weights must be non-negative")
        total = math.fsum(w.values())
        if renormalize:
            if total <= 0.0:
                raise InvalidStateError("mixture weights sum to zero")
            w = {n: v / total for n, v in w.items()}
        elif abs(total - 1.0) > _NORM_TOL:
            raise InvalidStateError(
                f"mixture weights sum to {total!r}, expected 1 within {_NORM_TOL}")
        table = {(n, n): complex(v) for n, v in w.items() if v != 0.0}
        return cls("mixture", table, weights=w)

    @classmethod
    def superposition(cls, coeffs, renormalize: bool = False) -> "StateSpec":
        a = {int(n): complex(v) for n, v in dict(coeffs).items()}
        if not a:
            raise InvalidStateError("superposition needs at least one term")
        norm2 = math.fsum(abs(v) ** 2 for v in a.values())
        if renormalize:
            if norm2 <= 0.0:
                raise InvalidStateError("superposition coefficients are all zero")
            s = math.sqrt(norm2)
            a = {n: v / s for n, v in a.items()}
        elif abs(norm2 - 1.0) > _NORM_TOL:
            raise InvalidStateError(
                f"superposition norm is {norm2!r}, expected 1 within {_NORM_TOL}")
        a = {n: v for n, v in a.items() if v != 0.0}
        table = {(n, m): an * np.conj(am)
                 for n, an in a.items() for m, am in a.items()}
        return cls("superposition", table, coeffs=a)

    @classmethod
    def density(cls, entries, renormalize: bool = False) -> "StateSpec":
        table = {}
        for (n, m), v in dict(entries).items():
            n, m = int(n), int(m)
            if n < 0 or m < 0:
                raise InvalidStateError("density indices must be non-negative")
            table[(n, m)] = complex(v)
        if not table:
            raise InvalidStateError("density table is empty")
        for (n, m), v in table.items():
            w = table.get((m, n))
            if w is None or abs(np.conj(w) - v) > 1e-10 * max(1.0, abs(v)):
                raise InvalidStateError(
                    f"density table is not Hermitian at ({n}, {m})")
        trace = math.fsum(v.real for (n, m), v in table.items() if n == m)
        if renormalize:
            if trace <= 0.0:
                raise InvalidStateError("density trace must be positive")
            table = {k: v / trace for k, v in table.items()}
        elif abs(trace - 1.0) > _NORM_TOL:
            raise InvalidStateError(
                f"density trace is {trace!r}, expected 1 within {_NORM_TOL}")
        dim = max(max(n, m) for (n, m) in table) + 1
        psd_checked = dim <= _PSD_CHECK_DIM
        if psd_checked:
            dense = np.zeros((dim, dim), dtype=complex)
            for (n, m), v in table.items():
                dense[n, m] = v
            lo = np.linalg.eigvalsh(dense).min()
            if lo < -1e-10:
                raise InvalidStateError(
                    f"density table has negative eigenvalue {lo!r}")
        else:
            warnings.warn(
                f"density table dimension {dim} exceeds {_PSD_CHECK_DIM}; "
                "positive semidefiniteness is assumed, not checked",
                stacklevel=2)
        return cls("density", table, psd_checked=psd_checked)

    # -- structure queries ------------------------------------------------

    def real_superposition_coeffs(self):
        """Coefficients of a pure state on which the factored kernel applies.

        Returns a dict n -> float when the state is a superposition (or an
        eigenstate) whose coefficients are all real or all purely imaginary
        (the imaginary case reduces to the real one with Im(alpha_n)), and
        None otherwise.
        """
        if self.coeffs is None:
            return None
        vals = self.coeffs
        if all(abs(v.imag) == 0.0 for v in vals.values()):
            return {n: v.real for n, v in vals.items()}
        if all(abs(v.real) == 0.0 for v in vals.values()):
            return {n: v.imag for n, v in vals.items()}
        return None


@dataclass(frozen=True)
class KernelFn:
    """The dimensionless kernel f and its derivative for one state.

    ``f`` and ``f_prime`` are vectorized callables of y.  ``parity`` is
    "even" when every occupied index pair shares evenness (so f is an even
    function), "none" otherwise.  ``degree_hint`` bounds the polynomial
    degree multiplying exp(-y^2).
    """

    f: object
    f_prime: object
    parity: str
    degree_hint: int


def _psi_rows(max_index, y):
    return hermite_normalized_all(max_index, np.asarray(y, dtype=float))


def kernel(spec: StateSpec) -> KernelFn:
    """Build (f, f') for a state; cached on the spec."""
    cached = spec._kernel_cache.get("kernel")
    if cached is not None:
        return cached
    top = spec.max_index
    entries = [(n, m, v.real) for (n, m), v in spec.table.items() if v.real != 0.0]
    # Purely imaginary lambda_nm pairs cancel between (n, m) and (m, n).

    def f(y):
        psi = _psi_rows(top, y)
        acc = np.zeros_like(psi[0])
        for n, m, lam in entries:
            acc += lam * psi[n] * psi[m]
        return acc / _SQRT_2PI

    def f_prime(y):
        y = np.asarray(y, dtype=float)
        psi = _psi_rows(top, y)
        dpsi = np.empty_like(psi)
        dpsi[0] = -y * psi[0]
        for k in range(1, top + 1):
            dpsi[k] = math.sqrt(2.0 * k) * psi[k - 1] - y * psi[k]
        acc = np.zeros_like(psi[0])
        for n, m, lam in entries:
            acc += lam * (dpsi[n] * psi[m] + psi[n] * dpsi[m])
        return acc / _SQRT_2PI

    kf = KernelFn(f=f, f_prime=f_prime,
                  parity="even" if spec.parity_even else "none",
                  degree_hint=2 * top + 2)
    spec._kernel_cache["kernel"] = kf
    return kf


def kernel_pure_factored(spec: StateSpec):
    """Factored kernel (g, g') of a real-coefficient pure state.

    For a pure state with real coefficients, f = exp(-y^2) g(y)^2 / sqrt(2 pi)
    with g = sum alpha_n a_n H_n, and the Fisher integrand collapses to

        (f')^2 / f = 4 exp(-y^2) (g'(y) - y g(y))^2 / sqrt(2 pi),

    which is finite at every node of g (the double zeros cancel exactly).
    Returns (g, g_prime), both vectorized.
    """
    coeffs = spec.real_superposition_coeffs()
    if coeffs is None:
        raise InvalidStateError(
            "factored kernel requires a pure state with all-real (or "
            "all-imaginary) coefficients")
    top = spec.max_index
    terms = sorted(coeffs.items())

    def g(y):
        c = _scaled_hermite_rows(top, y)
        acc = np.zeros_like(c[0])
        for n, a in terms:
            acc += a * c[n]
        return acc

    def g_prime(y):
        c = _scaled_hermite_rows(top, y)
        acc = np.zeros_like(c[0])
        for n, a in terms:
            if n >= 1:
                acc += a * math.sqrt(2.0 * n) * c[n - 1]
        return acc

    return g, g_prime


def _scaled_hermite_rows(top, y):
    """Rows c_k(y) = a_k H_k(y), same bounded-factor recurrence as psi_k."""
    y = np.asarray(y, dtype=float)
    out = np.empty((top + 1,) + y.shape)
    out[0] = 1.0
    if top >= 1:
        out[1] = math.sqrt(2.0) * y
    for k in range(1, top):
        out[k + 1] = (math.sqrt(2.0 / (k + 1)) * y * out[k]
                      - math.sqrt(k / (k + 1.0)) * out[k - 1])
    return out


def fisher_ratio_factored(spec: StateSpec):
    """Vectorized (f')^2/f for a real pure state, via the factored kernel.

    Equal to 4 G'(y)^2 / sqrt(2 pi) with G = g * exp(-y^2/2) the normalized
    wavepacket profile; manifestly finite everywhere.
    """
    coeffs = spec.real_superposition_coeffs()
    if coeffs is None:
        raise InvalidStateError("factored Fisher ratio needs real coefficients")
    top = spec.max_index
    terms = sorted(coeffs.items())

    def ratio(y):
        y = np.asarray(y, dtype=float)
        psi = _psi_rows(top, y)
        acc = np.zeros_like(psi[0])
        for n, a in terms:
            if n >= 1:
                acc += a * math.sqrt(2.0 * n) * psi[n - 1]
            acc -= a * y * psi[n]
        return 4.0 * acc * acc / _SQRT_2PI

    return ratio


def pdf(spec: StateSpec, point: ModelPoint, x):
    """Position probability density P(x) = f(y(x)) / sigma."""
    kf = kernel(spec)
    x = np.asarray(x, dtype=float)
    v = kf.f(point.y_of_x(x)) / point.sigma
    return v if v.shape else float(v)


def wavefunction(n: int, point: ModelPoint, x):
    """Real position wave function of the number state |n> at (mu, sigma)."""
    x = np.asarray(x, dtype=float)
    y = point.y_of_x(x)
    v = hermite_normalized_all(int(n), y)[-1] / math.sqrt(_SQRT_2PI * point.sigma)
    return v if v.shape else float(v)
