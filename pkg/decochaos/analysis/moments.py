# -*- coding: utf-8 -*-
"""
Moments of phase-space distributions, particle ensembles and wave
functions, and the moment-hierarchy validator.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math

import numpy as np
from scipy import fft as sp_fft
from scipy.special import comb

from decochaos.constants import MOMENT_NORM_TOLERANCE, MIN_RESIDUAL_SERIES
from decochaos.errors import StateError, ValidationError
from decochaos.grid import PhaseField, ComplexField, marginal, integrate_field
from decochaos.evolve.ensemble import ParticleEnsemble

logger = logging.getLogger('decochaos.analysis')


class MomentRecord(object):
    """
    Expectation values at one instant.

    Attributes:
        t (float):
            Time stamp.
        mean_x, mean_p (float):
            First moments.
        central_x, central_p (tuple):
            Central moments of orders 2, 3 and 4.
        cross_xp (float):
            `<(x - <x>)(p - <p>)>`.
        energy (float):
            `<p^2 / 2m + V(x, t)>`.
        mixed_xp2 (float):
            `<(x - <x>)^2 (p - <p>)>`.
        mixed_xp3 (float):
            `<(x - <x>)^3 (p - <p>)>`.
        samples (int):
            Number of particles behind the record; None for grids.
    """
    COLUMNS = (
        't', 'meanX', 'meanP',
        'centralX2', 'centralX3', 'centralX4',
        'centralP2', 'centralP3', 'centralP4',
        'crossXP', 'energy', 'mixedXP2', 'mixedXP3', 'samples',
    )

    def __init__(self, t, mean_x, mean_p, central_x, central_p, cross_xp,
                 energy, mixed_xp2=0.0, mixed_xp3=0.0, samples=None):
        """ Constructor. """
        super(MomentRecord, self).__init__()
        self.t = float(t)
        self.mean_x = float(mean_x)
        self.mean_p = float(mean_p)
        self.central_x = tuple(float(v) for v in central_x)
        self.central_p = tuple(float(v) for v in central_p)
        self.cross_xp = float(cross_xp)
        self.energy = float(energy)
        self.mixed_xp2 = float(mixed_xp2)
        self.mixed_xp3 = float(mixed_xp3)
        self.samples = None if samples is None else int(samples)

    def __repr__(self):
        return 'MomentRecord(t=%r, mean_x=%r, mean_p=%r, var_x=%r, ' \
               'var_p=%r, energy=%r)' % (
                   self.t, self.mean_x, self.mean_p,
                   self.var_x, self.var_p, self.energy)

    def __eq__(self, other):
        if not isinstance(other, MomentRecord):
            return NotImplemented
        return self.as_row() == other.as_row()

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    @property
    def var_x(self):
        return self.central_x[0]

    @property
    def var_p(self):
        return self.central_p[0]

    def raw_x(self, order):
        """ `<x^order>` rebuilt from the mean and the central moments. """
        return _raw_from_central(self.mean_x, self.central_x, order)

    def raw_p(self, order):
        return _raw_from_central(self.mean_p, self.central_p, order)

    def mixed(self, order):
        """ `<(x - <x>)^order (p - <p>)>` for order 0..3. """
        return (0.0, self.cross_xp, self.mixed_xp2, self.mixed_xp3)[order]

    def as_row(self):
        return (
            self.t, self.mean_x, self.mean_p,
            self.central_x[0], self.central_x[1], self.central_x[2],
            self.central_p[0], self.central_p[1], self.central_p[2],
            self.cross_xp, self.energy, self.mixed_xp2, self.mixed_xp3,
            self.samples,
        )

    @classmethod
    def from_row(cls, row):
        values = list(row)
        samples = values[13] if len(values) > 13 else None
        return cls(
            t=values[0], mean_x=values[1], mean_p=values[2],
            central_x=values[3:6], central_p=values[6:9],
            cross_xp=values[9], energy=values[10],
            mixed_xp2=values[11], mixed_xp3=values[12],
            samples=samples)

    def standard_error(self, name):
        """
        Standard error of `mean_x`, `mean_p`, `var_x` or `var_p` for
        ensemble records; None for grid records.
        """
        if not self.samples:
            return None
        n = float(self.samples)
        if name == 'mean_x':
            return math.sqrt(self.central_x[0] / n)
        elif name == 'mean_p':
            return math.sqrt(self.central_p[0] / n)
        elif name == 'var_x':
            return math.sqrt(max(
                self.central_x[2] - self.central_x[0] ** 2, 0.0) / n)
        elif name == 'var_p':
            return math.sqrt(max(
                self.central_p[2] - self.central_p[0] ** 2, 0.0) / n)
        raise ValidationError("no standard error for %r" % (name,))


def _raw_from_central(mean, central, order):
    # central[k - 2] holds the central moment of order k.
    full = (1.0, 0.0) + tuple(central)
    return sum(comb(order, k, exact=True) * full[k] * mean ** (order - k)
               for k in range(order + 1))


def _check_mass(mass, what):
    if abs(mass - 1.0) > MOMENT_NORM_TOLERANCE:
        raise StateError(
            "%s is not normalized (mass %r)" % (what, mass))


def _field_moments(field, potential, t):
    _check_mass(integrate_field(field), 'field')
    x = field.x_axis.nodes
    p = field.p_axis.nodes
    rho_x = marginal(field, 'x') * field.x_axis.spacing
    rho_p = marginal(field, 'p') * field.p_axis.spacing
    mean_x = float(np.dot(rho_x, x))
    mean_p = float(np.dot(rho_p, p))
    dx = x - mean_x
    dp = p - mean_p
    central_x = [float(np.dot(rho_x, dx ** n)) for n in (2, 3, 4)]
    central_p = [float(np.dot(rho_p, dp ** n)) for n in (2, 3, 4)]

    # x-weighted momentum deviation per x node.
    first_p = np.dot(field.values, dp) * field.cell_area
    cross = float(np.dot(first_p, dx))
    mixed2 = float(np.dot(first_p, dx ** 2))
    mixed3 = float(np.dot(first_p, dx ** 3))
    energy = float(np.dot(rho_p, p * p)) / (2.0 * potential.mass) + \
        float(np.dot(rho_x, potential.value(x, t)))
    return MomentRecord(t, mean_x, mean_p, central_x, central_p, cross,
                        energy, mixed2, mixed3)


def _ensemble_moments(ensemble, potential, t):
    if ensemble.count == 0:
        raise StateError("ensemble is empty")
    x = ensemble.positions
    p = ensemble.momenta
    mean_x = float(np.mean(x))
    mean_p = float(np.mean(p))
    dx = x - mean_x
    dp = p - mean_p
    central_x = [float(np.mean(dx ** n)) for n in (2, 3, 4)]
    central_p = [float(np.mean(dp ** n)) for n in (2, 3, 4)]
    cross = float(np.mean(dx * dp))
    mixed2 = float(np.mean(dx * dx * dp))
    mixed3 = float(np.mean(dx ** 3 * dp))
    energy = float(np.mean(p * p / (2.0 * potential.mass) +
                           potential.value(x, t)))
    return MomentRecord(t, mean_x, mean_p, central_x, central_p, cross,
                        energy, mixed2, mixed3, samples=ensemble.count)


def _wave_moments(psi, potential, t, hbar):
    if hbar is None:
        raise ValidationError("moments of a wave function need hbar")
    _check_mass(psi.norm(), 'wave function')
    axis = psi.axis
    x = axis.nodes
    k = axis.frequencies
    rho_x = psi.density() * axis.spacing
    spectrum = sp_fft.fft(psi.values)
    # |spectrum|^2 normalized to a probability vector over k.
    rho_k = np.abs(spectrum) ** 2
    rho_k /= np.sum(rho_k)
    p = hbar * k
    mean_x = float(np.dot(rho_x, x))
    mean_p = float(np.dot(rho_k, p))
    dx = x - mean_x
    dp = p - mean_p
    central_x = [float(np.dot(rho_x, dx ** n)) for n in (2, 3, 4)]
    central_p = [float(np.dot(rho_k, dp ** n)) for n in (2, 3, 4)]

    # (p - <p>) psi, evaluated spectrally; the Weyl-ordered mixed moments
    # are the real parts of <psi| dx^n (p - <p>) |psi>.
    dp_psi = sp_fft.ifft(p * spectrum) - mean_p * psi.values
    weight = np.conj(psi.values) * dp_psi * axis.spacing
    cross = float(np.real(np.dot(weight, dx)))
    mixed2 = float(np.real(np.dot(weight, dx ** 2)))
    mixed3 = float(np.real(np.dot(weight, dx ** 3)))
    energy = float(np.dot(rho_k, p * p)) / (2.0 * potential.mass) + \
        float(np.dot(rho_x, potential.value(x, t)))
    return MomentRecord(t, mean_x, mean_p, central_x, central_p, cross,
                        energy, mixed2, mixed3)


def compute_moments(source, potential, t, hbar=None):
    """
    Moments of a PhaseField, a ParticleEnsemble or a ComplexField.

    Arguments:
        source:
            The distribution. Fields must be normalized within 1e-6.
        potential (PotentialModel):
            Used for the energy, evaluated at time `t`.
        t (float):
            Time stamp of the record.
        hbar (float):
            Needed only for wave functions (p = hbar k).
    """
    if isinstance(source, PhaseField):
        return _field_moments(source, potential, t)
    elif isinstance(source, ParticleEnsemble):
        return _ensemble_moments(source, potential, t)
    elif isinstance(source, ComplexField):
        return _wave_moments(source, potential, t, hbar)
    raise ValidationError(
        "cannot compute moments of %r" % (type(source).__name__,))


class MomentResidual(object):
    """
    Residuals of the first three moment equations at one record.

    Attributes:
        t (float):
            Time of the record.
        r1 (float):
            `d<x>/dt - <p>/m`.
        r2 (float):
            `d<p>/dt + <V'(x, t)>`.
        r3 (float):
            `d<p^2>/dt + 2 <p V'(x, t)> - 2 D`; NaN when the moments
            kept in the records cannot close `<p V'>`.
        closed (bool):
            Whether `r3` could be formed.
    """
    def __init__(self, t, r1, r2, r3, closed):
        """ Constructor. """
        super(MomentResidual, self).__init__()
        self.t = t
        self.r1 = r1
        self.r2 = r2
        self.r3 = r3
        self.closed = closed

    def __repr__(self):
        return 'MomentResidual(t=%r, r1=%r, r2=%r, r3=%r, closed=%r)' % (
            self.t, self.r1, self.r2, self.r3, self.closed)


def mean_force(record, potential):
    """ `<V'(x, t)>` rebuilt from the record, or None without closure. """
    coefficients = potential.force_coefficients()
    if coefficients is None or len(coefficients) > 5:
        return None
    total = potential.drive(record.t)
    for order, coefficient in enumerate(coefficients):
        if coefficient:
            total += coefficient * record.raw_x(order)
    return float(total)


def momentum_force_correlation(record, potential):
    """ `<p V'(x, t)>` rebuilt from the record, or None without closure. """
    coefficients = potential.force_coefficients()
    if coefficients is None or len(coefficients) > 4:
        return None
    mu = record.mean_x
    total = potential.drive(record.t) * record.mean_p
    for order, coefficient in enumerate(coefficients):
        if not coefficient:
            continue
        # <p x^n> = <p><x^n> + sum_k C(n, k) mu^(n - k) <dp dx^k>
        value = record.mean_p * record.raw_x(order)
        for k in range(1, order + 1):
            value += comb(order, k, exact=True) * mu ** (order - k) * \
                record.mixed(k)
        total += coefficient * value
    return float(total)


def moment_residuals(series, potential, diffusion):
    """
    Centered finite-difference residuals of the moment hierarchy.

    The same code path serves quantum and classical series: the Moyal
    correction does not enter these equations.

    Raises:
        ValidationError: fewer than 5 records or irregular spacing.
    """
    series = list(series)
    if len(series) < MIN_RESIDUAL_SERIES:
        raise ValidationError(
            "residuals need at least %d records, got %d" % (
                MIN_RESIDUAL_SERIES, len(series)))
    times = np.array([r.t for r in series])
    steps = np.diff(times)
    h = float(np.mean(steps))
    if not h > 0 or np.max(np.abs(steps - h)) > 1e-9 * h:
        raise ValidationError("records are not uniformly spaced in time")

    mass = potential.mass
    closure = potential.force_coefficients() is not None and \
        len(potential.force_coefficients()) <= 4
    if not closure:
        logger.warning("recorded moments cannot close <p V'> for %s; "
                       "the third residual is left undefined", potential)

    mean_x = np.array([r.mean_x for r in series])
    mean_p = np.array([r.mean_p for r in series])
    second_p = np.array([r.raw_p(2) for r in series])

    result = []
    for i in range(1, len(series) - 1):
        record = series[i]
        d_x = (mean_x[i + 1] - mean_x[i - 1]) / (2.0 * h)
        d_p = (mean_p[i + 1] - mean_p[i - 1]) / (2.0 * h)
        d_p2 = (second_p[i + 1] - second_p[i - 1]) / (2.0 * h)
        r1 = d_x - record.mean_p / mass
        force = mean_force(record, potential)
        r2 = float('nan') if force is None else d_p + force
        if closure:
            r3 = d_p2 + 2.0 * momentum_force_correlation(
                record, potential) - 2.0 * diffusion
        else:
            r3 = float('nan')
        result.append(MomentResidual(record.t, r1, r2, r3, closure))
    return result
