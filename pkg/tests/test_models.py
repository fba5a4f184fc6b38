import math

import numpy as np
import pytest

from hermgauss.models import (
    InvalidStateError,
    KernelFn,
    ModelPoint,
    PhysicalOscillator,
    StateSpec,
    fisher_ratio_factored,
    from_physical,
    kernel,
    kernel_pure_factored,
    pdf,
    wavefunction,
)
from hermgauss.quadrature import integrate_real_line


def eigen_pdf_direct(n, point, x):
    """Direct evaluation of the n-th model density via float coefficients;
    independent of the normalized recurrence (valid for small n)."""
    from numpy.polynomial.hermite import hermval

    y = (np.asarray(x, dtype=float) - point.mu) / (math.sqrt(2) * point.sigma)
    c = np.zeros(n + 1)
    c[n] = 1.0
    h = hermval(y, c)
    a2 = 1.0 / (2.0 ** n * math.factorial(n))
    return np.exp(-y * y) * a2 * h * h / (math.sqrt(2 * math.pi) * point.sigma)


class TestModelPoint:
    def test_requires_positive_sigma(self):
        with pytest.raises(ValueError):
            ModelPoint(0.0, 0.0)
        with pytest.raises(ValueError):
            ModelPoint(0.0, -1.0)

    def test_y_mapping(self):
        p = ModelPoint(1.0, 2.0)
        assert p.y_of_x(1.0 + 2.0 * math.sqrt(2.0)) == pytest.approx(1.0)


class TestPhysicalOscillator:
    def test_unit_case(self):
        pt = from_physical(PhysicalOscillator(mass=1, omega0=1, x0=0))
        assert pt.mu == 0.0
        assert pt.sigma == pytest.approx(math.sqrt(0.5))

    def test_heavier_oscillator(self):
        pt = from_physical(PhysicalOscillator(mass=2, omega0=1, x0=3))
        assert (pt.mu, pt.sigma) == (3.0, 0.5)

    def test_level_energies(self):
        osc = PhysicalOscillator(mass=1, omega0=2, x0=0)
        assert osc.energy(1) == 3.0

    def test_rejects_nonpositive_constants(self):
        with pytest.raises(ValueError):
            PhysicalOscillator(mass=0, omega0=1, x0=0)
        with pytest.raises(ValueError):
            PhysicalOscillator(mass=1, omega0=-2, x0=0)


class TestStateSpecValidation:
    def test_mixture_must_sum_to_one(self):
        with pytest.raises(InvalidStateError):
            StateSpec.mixture({0: 0.5, 1: 0.5001})

    def test_mixture_renormalize(self):
        s = StateSpec.mixture({0: 2.0, 1: 2.0}, renormalize=True)
        assert s.weights == {0: 0.5, 1: 0.5}

    def test_negative_weight_rejected(self):
        with pytest.raises(InvalidStateError):
            StateSpec.mixture({0: 1.5, 1: -0.5})

    def test_superposition_norm(self):
        with pytest.raises(InvalidStateError):
            StateSpec.superposition({0: 1.0, 1: 0.1})
        s = StateSpec.superposition({0: 1.0, 1: 1.0}, renormalize=True)
        assert abs(s.coeffs[0]) == pytest.approx(1 / math.sqrt(2))

    def test_density_hermiticity(self):
        with pytest.raises(InvalidStateError):
            StateSpec.density({(0, 0): 0.5, (1, 1): 0.5, (0, 1): 0.3})
        with pytest.raises(InvalidStateError):
            StateSpec.density({(0, 0): 0.5, (1, 1): 0.5,
                               (0, 1): 0.3j, (1, 0): 0.3j})

    def test_density_psd(self):
        # Hermitian, trace one, but indefinite.
        with pytest.raises(InvalidStateError):
            StateSpec.density({(0, 0): 0.5, (1, 1): 0.5,
                               (0, 1): 0.9, (1, 0): 0.9})

    def test_large_density_warns_instead_of_checking(self):
        entries = {(n, n): 1.0 / 70 for n in range(70)}
        entries[(0, 0)] += 1.0 - sum(entries.values())
        with pytest.warns(UserWarning, match="assumed"):
            s = StateSpec.density(entries)
        assert not s.psd_checked

    def test_immutable(self):
        s = StateSpec.eigenstate(0)
        with pytest.raises(AttributeError):
            s.kind = "other"

    def test_parity_flags(self):
        assert StateSpec.mixture({0: 0.25, 3: 0.75}).parity_even
        assert StateSpec.superposition(
            {0: 1 / math.sqrt(2), 2: 1 / math.sqrt(2)}).parity_even
        assert not StateSpec.superposition(
            {0: 1 / math.sqrt(2), 1: 1 / math.sqrt(2)}).parity_even


class TestPdf:
    def test_ground_state_peak(self):
        v = pdf(StateSpec.eigenstate(0), ModelPoint(0, 1), 0.0)
        assert v == pytest.approx(1.0 / math.sqrt(2 * math.pi), rel=1e-14)

    def test_first_level_node(self):
        assert pdf(StateSpec.eigenstate(1), ModelPoint(0, 1), 0.0) == 0.0

    def test_mixture_is_convex_sum(self):
        mix = StateSpec.mixture({0: 0.5, 1: 0.5})
        v = pdf(mix, ModelPoint(0, 1), 0.0)
        assert v == pytest.approx(0.5 / math.sqrt(2 * math.pi), rel=1e-13)

    @pytest.mark.parametrize("n", [0, 1, 2, 5, 12, 20])
    def test_eigenstate_matches_direct_formula(self, n):
        rng = np.random.default_rng(n)
        point = ModelPoint(float(rng.uniform(-2, 2)), float(rng.uniform(0.5, 2)))
        x = rng.uniform(point.mu - 4, point.mu + 4, size=40)
        got = pdf(StateSpec.eigenstate(n), point, x)
        want = eigen_pdf_direct(n, point, x)
        np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-300)

    @pytest.mark.parametrize("spec", [
        StateSpec.eigenstate(3),
        StateSpec.mixture({0: 0.3, 2: 0.5, 5: 0.2}),
        StateSpec.superposition({0: 0.6, 1: 0.8}),
        StateSpec.density({(0, 0): 0.5, (2, 2): 0.5,
                           (0, 2): 0.25, (2, 0): 0.25}),
    ])
    def test_normalization_at_random_points(self, spec):
        rng = np.random.default_rng(17)
        kf = kernel(spec)
        for _ in range(5):
            point = ModelPoint(float(rng.uniform(-3, 3)), float(rng.uniform(0.3, 3)))
            # int pdf dx = sqrt(2) sigma * int f dy / sigma
            res = integrate_real_line(kf.f, degree_hint=kf.degree_hint)
            assert math.sqrt(2.0) * res.value == pytest.approx(1.0, abs=1e-8)
            assert pdf(spec, point, point.mu + 0.37) >= 0.0


class TestKernel:
    def test_eigenstate_kernel_parity(self):
        kf = kernel(StateSpec.eigenstate(3))
        assert kf.parity == "even"
        rng = np.random.default_rng(5)
        y = rng.uniform(-4, 4, size=100)
        np.testing.assert_array_equal(kf.f(y), kf.f(-y))

    def test_even_superposition_parity(self):
        s = StateSpec.superposition({0: 1 / math.sqrt(2), 2: 1 / math.sqrt(2)})
        assert kernel(s).parity == "even"

    def test_mixed_parity(self):
        s = StateSpec.superposition({0: 1 / math.sqrt(2), 1: 1 / math.sqrt(2)})
        assert kernel(s).parity == "none"

    def test_is_cached(self):
        s = StateSpec.eigenstate(2)
        assert kernel(s) is kernel(s)

    def test_derivative_matches_finite_difference(self):
        for spec in (StateSpec.eigenstate(4),
                     StateSpec.mixture({1: 0.5, 2: 0.5}),
                     StateSpec.superposition({0: 0.6, 3: 0.8})):
            kf = kernel(spec)
            rng = np.random.default_rng(23)
            y = rng.uniform(-4, 4, size=50)
            h = 1e-5
            fd = (kf.f(y + h) - kf.f(y - h)) / (2 * h)
            exact = kf.f_prime(y)
            tol = 1e-6 * np.maximum(1.0, np.abs(exact))
            assert np.all(np.abs(exact - fd) <= tol)

    def test_kernel_mass(self):
        for spec in (StateSpec.eigenstate(0), StateSpec.mixture({0: 0.5, 3: 0.5})):
            kf = kernel(spec)
            res = integrate_real_line(kf.f, degree_hint=kf.degree_hint)
            assert res.value == pytest.approx(1 / math.sqrt(2), abs=1e-10)

    def test_kernel_type(self):
        assert isinstance(kernel(StateSpec.eigenstate(0)), KernelFn)


class TestFactoredKernel:
    def test_rejects_complex_coefficients(self):
        s = StateSpec.superposition({0: 0.6, 1: 0.8j})
        with pytest.raises(InvalidStateError):
            kernel_pure_factored(s)

    def test_ground_state_ratio_is_symbolic_form(self):
        # For alpha_0 = 1: g' - y g = -y, so (f')^2/f = 4 y^2 e^{-y^2}/sqrt(2 pi)
        ratio = fisher_ratio_factored(StateSpec.eigenstate(0))
        y = np.linspace(-3, 3, 41)
        want = 4 * y * y * np.exp(-y * y) / math.sqrt(2 * math.pi)
        np.testing.assert_allclose(ratio(y), want, rtol=1e-12, atol=1e-15)

    def test_finite_at_nodes(self):
        # Eigenstate 2 has nodes at y = +-1/sqrt(2); the factored ratio is the
        # continuous limit of the unfactored one.
        s = StateSpec.eigenstate(2)
        ratio = fisher_ratio_factored(s)
        kf = kernel(s)
        node = 1.0 / math.sqrt(2.0)
        at_node = ratio(np.array([node]))[0]
        assert np.isfinite(at_node)
        eps = 1e-6
        near = (kf.f_prime(np.array([node + eps]))[0] ** 2
                / kf.f(np.array([node + eps]))[0])
        assert at_node == pytest.approx(near, rel=1e-4)

    def test_even_superposition_node_limit(self):
        # The 0 - 2 combination has a density node at y = sqrt((1+sqrt2)/2).
        coeffs = {0: 1 / math.sqrt(2), 2: -1 / math.sqrt(2)}
        s = StateSpec.superposition(coeffs)
        g, gp = kernel_pure_factored(s)
        from scipy.optimize import brentq
        node = brentq(lambda y: g(np.array([y]))[0], 0.1, 2.0)
        ratio = fisher_ratio_factored(s)
        kf = kernel(s)
        val = ratio(np.array([node]))[0]
        probe = node + 1e-6
        unfact = (kf.f_prime(np.array([probe]))[0] ** 2
                  / kf.f(np.array([probe]))[0])
        assert val == pytest.approx(unfact, rel=1e-4)

    def test_factored_equals_plain_kernel(self):
        s = StateSpec.superposition({1: 0.8, 4: -0.6})
        g, gp = kernel_pure_factored(s)
        kf = kernel(s)
        y = np.linspace(-3, 3, 31)
        f_fact = np.exp(-y * y) * g(y) ** 2 / math.sqrt(2 * math.pi)
        np.testing.assert_allclose(f_fact, kf.f(y), rtol=1e-12, atol=1e-15)
        h = 1e-6
        gp_fd = (g(y + h) - g(y - h)) / (2 * h)
        np.testing.assert_allclose(gp(y), gp_fd, rtol=1e-5, atol=1e-7)


class TestWavefunction:
    def test_ground_state_amplitude(self):
        assert wavefunction(0, ModelPoint(0, 1), 0.0) == pytest.approx(
            (2 * math.pi) ** -0.25, rel=1e-14)

    def test_first_level_is_odd(self):
        p = ModelPoint(0, 1)
        x = np.linspace(0.1, 3, 10)
        np.testing.assert_allclose(wavefunction(1, p, -x),
                                   -wavefunction(1, p, x), rtol=1e-14)

    def test_normalization(self):
        p = ModelPoint(0.5, 1.3)

        def sq(y):
            from hermgauss.hermite import hermite_normalized_all
            return hermite_normalized_all(3, y)[3] ** 2

        res = integrate_real_line(sq, degree_hint=8)
        # int phi^2 dx = sqrt(2) / sqrt(2 pi) * int psi^2 dy
        assert math.sqrt(2) * res.value / math.sqrt(2 * math.pi) == pytest.approx(
            1.0, abs=1e-10)

    def test_pdf_is_squared_wavefunction(self):
        p = ModelPoint(-0.7, 0.9)
        x = np.linspace(-4, 3, 40)
        for n in (0, 1, 4):
            got = pdf(StateSpec.eigenstate(n), p, x)
            want = wavefunction(n, p, x) ** 2
            np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-280)
