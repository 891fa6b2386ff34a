# -*- coding: utf-8 -*-
"""
Time dependent potentials and the spectral force kernels built from them.

Every potential is a static part plus a uniform drive force,
``V(x, t) = V0(x) + x * F(t)``. The quantum kernel applies the nonlocal
difference ``[V(x + hbar s / 2) - V(x - hbar s / 2)] / hbar`` which, for
polynomials up to degree four, is the truncated Moyal series.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math

import numpy as np

from decochaos.constants import TRACE
from decochaos.errors import ConfigurationError

logger = logging.getLogger('decochaos.potential')


class PotentialModel(object):
    """
    Base class for potentials.

    Subclasses provide the static part and its derivatives; the drive is
    a force that only depends on time.

    Attributes:
        mass (float):
            Particle mass.
        omega (float):
            Angular frequency of the drive; it also fixes the reference
            period used to count time.
    """
    kind = None

    def __init__(self, mass=1.0, omega=None):
        """ Constructor. """
        super(PotentialModel, self).__init__()
        mass = float(mass)
        if not (math.isfinite(mass) and mass > 0):
            raise ConfigurationError("mass must be positive, got %r" % mass)
        if omega is not None:
            omega = float(omega)
            if not (math.isfinite(omega) and omega > 0):
                raise ConfigurationError(
                    "drive frequency must be positive, got %r" % omega)
        self.mass = mass
        self.omega = omega

    @property
    def period(self):
        return None if self.omega is None else 2.0 * math.pi / self.omega

    def static_value(self, x):
        raise NotImplementedError

    def static_gradient(self, x):
        raise NotImplementedError

    def static_second_derivative(self, x):
        raise NotImplementedError

    def static_third_derivative(self, x):
        raise NotImplementedError

    def force_coefficients(self):
        """
        Coefficients of the static gradient as a polynomial in x, lowest
        power first, or None when the gradient is not a polynomial.
        """
        return None

    def drive(self, t):
        """ Uniform force added to the gradient at time `t`. """
        return 0.0

    def value(self, x, t=0.0):
        return self.static_value(x) + x * self.drive(t)

    def gradient(self, x, t=0.0):
        return self.static_gradient(x) + self.drive(t)

    def second_derivative(self, x, t=0.0):
        return self.static_second_derivative(x)

    def third_derivative(self, x, t=0.0):
        return self.static_third_derivative(x)

    def static_moyal_difference(self, x, s, hbar):
        """ `[V0(x + hbar s / 2) - V0(x - hbar s / 2)] / hbar`. """
        half = 0.5 * hbar * s
        return (self.static_value(x + half) -
                self.static_value(x - half)) / hbar

    def moyal_difference(self, x, s, t, hbar):
        """ The nonlocal difference including the drive. """
        return self.static_moyal_difference(x, s, hbar) + s * self.drive(t)

    def static_classical_difference(self, x, s):
        """ The hbar -> 0 limit of `static_moyal_difference`. """
        return s * self.static_gradient(x)


class DrivenDoubleWell(PotentialModel):
    """
    `V(x, t) = B x^4 - A x^2 + drive_amplitude * x * cos(omega t)`.

    Attributes:
        B (float):
            Quartic coefficient.
        A (float):
            Quadratic coefficient.
        drive_amplitude (float):
            Amplitude of the periodic force.
    """
    kind = 'double-well'

    def __init__(self, mass=1.0, B=0.5, A=10.0, drive_amplitude=10.0,
                 omega=6.07):
        """ Constructor. """
        super(DrivenDoubleWell, self).__init__(mass=mass, omega=omega)
        if omega is None:
            raise ConfigurationError("the double well needs a drive frequency")
        for name, value in (('B', B), ('A', A),
                            ('drive', drive_amplitude)):
            if not math.isfinite(float(value)):
                raise ConfigurationError(
                    "%s must be finite, got %r" % (name, value))
        if not B > 0:
            raise ConfigurationError("B must be positive, got %r" % B)
        self.B = float(B)
        self.A = float(A)
        self.drive_amplitude = float(drive_amplitude)
        logger.log(TRACE, "created %r", self)

    @classmethod
    def reference_regime(cls):
        """ m = 1, B = 0.5, A = 10, drive 10, omega = 6.07. """
        return cls(mass=1.0, B=0.5, A=10.0, drive_amplitude=10.0, omega=6.07)

    def __str__(self):
        return 'DrivenDoubleWell(B=%r, A=%r, drive=%r)' % (
            self.B, self.A, self.drive_amplitude)

    def __repr__(self):
        return 'DrivenDoubleWell(mass=%r, B=%r, A=%r, ' \
               'drive_amplitude=%r, omega=%r)' % (
                   self.mass, self.B, self.A,
                   self.drive_amplitude, self.omega)

    def static_value(self, x):
        x2 = x * x
        return self.B * x2 * x2 - self.A * x2

    def static_gradient(self, x):
        return 4.0 * self.B * x * x * x - 2.0 * self.A * x

    def static_second_derivative(self, x):
        return 12.0 * self.B * x * x - 2.0 * self.A

    def static_third_derivative(self, x):
        return 24.0 * self.B * x

    def force_coefficients(self):
        return (0.0, -2.0 * self.A, 0.0, 4.0 * self.B)

    def drive(self, t):
        return self.drive_amplitude * np.cos(self.omega * t)


class HarmonicOracle(PotentialModel):
    """
    `V(x) = k x^2 / 2`.

    `k` may be zero (free particle) or negative (inverted parabola).
    """
    kind = 'harmonic'

    def __init__(self, mass=1.0, k=1.0, omega=None):
        """ Constructor. """
        super(HarmonicOracle, self).__init__(mass=mass, omega=omega)
        if not math.isfinite(float(k)):
            raise ConfigurationError("k must be finite, got %r" % (k,))
        self.k = float(k)

    def __str__(self):
        return 'HarmonicOracle(k=%r)' % self.k

    def __repr__(self):
        return 'HarmonicOracle(mass=%r, k=%r, omega=%r)' % (
            self.mass, self.k, self.omega)

    @property
    def natural_frequency(self):
        return math.sqrt(self.k / self.mass) if self.k > 0 else None

    def static_value(self, x):
        return 0.5 * self.k * x * x

    def static_gradient(self, x):
        return self.k * x

    def static_second_derivative(self, x):
        return self.k + 0.0 * x

    def static_third_derivative(self, x):
        return 0.0 * x

    def force_coefficients(self):
        return (0.0, self.k)

    def static_moyal_difference(self, x, s, hbar):
        # The quadratic has no quantum correction.
        return self.static_classical_difference(x, s)

    def moyal_difference(self, x, s, t, hbar):
        return s * self.gradient(x, t)


def quantum_force_kernel(potential, x, s, t, dt, hbar):
    """
    `exp(i dt [V(x + hbar s / 2, t) - V(x - hbar s / 2, t)] / hbar)`.
    """
    return np.exp(1j * dt * potential.moyal_difference(x, s, t, hbar))


def classical_force_kernel(potential, x, s, t, dt):
    """ `exp(i dt s V'(x, t))`. """
    return np.exp(1j * dt * (s * potential.gradient(x, t)))


def third_derivative(potential, x):
    return potential.third_derivative(x)
