# -*- coding: utf-8 -*-
"""
Periodic grid geometry and the field containers shared by all solvers.

The transform convention is fixed here once: the forward transform along
an axis maps the derivative along that axis to a multiplication by
``1j * frequency``. Forward transforms carry ``spacing / sqrt(2 pi)`` and
inverse transforms ``sqrt(2 pi) / spacing`` so that the discrete pair
mirrors the unitary continuous transform.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math

import numpy as np
from scipy import fft as sp_fft

from decochaos.constants import (
    MIN_AXIS_COUNT, AXIS_X, AXIS_P, FORWARD, INVERSE, TRACE
)
from decochaos.errors import (
    ConfigurationError, GridMismatchError, ValidationError
)

logger = logging.getLogger('decochaos.grid')

SQRT_2PI = math.sqrt(2.0 * math.pi)


def is_power_of_two(value):
    return value > 0 and (value & (value - 1)) == 0


class AxisGrid(object):
    """
    A uniform periodic axis.

    Attributes:
        minimum (float):
            First node.
        maximum (float):
            The end of the period; not a node itself.
        count (int):
            Number of nodes, a power of two.
        spacing (float):
            Distance between consecutive nodes.
        nodes (numpy.ndarray):
            `minimum + j * spacing` for `j` in `0..count-1`.
        frequencies (numpy.ndarray):
            Conjugate angular frequencies in the standard discrete
            transform ordering (zero first, Nyquist mode negative).
    """
    def __init__(self, minimum, maximum, count):
        """ Constructor. """
        super(AxisGrid, self).__init__()
        if isinstance(count, bool) or int(count) != count:
            raise ConfigurationError(
                "axis count must be an integer, got %r" % (count,))
        count = int(count)
        if count < MIN_AXIS_COUNT or not is_power_of_two(count):
            raise ConfigurationError(
                "axis count must be a power of two >= %d, got %d" % (
                    MIN_AXIS_COUNT, count))
        minimum = float(minimum)
        maximum = float(maximum)
        if not (math.isfinite(minimum) and math.isfinite(maximum)):
            raise ConfigurationError(
                "axis bounds must be finite, got [%r, %r]" % (
                    minimum, maximum))
        if maximum <= minimum:
            raise ConfigurationError(
                "degenerate axis interval [%r, %r]" % (minimum, maximum))

        self.minimum = minimum
        self.maximum = maximum
        self.count = count
        self.spacing = (maximum - minimum) / count
        self.nodes = minimum + self.spacing * np.arange(count, dtype=np.float64)
        self.frequencies = 2.0 * np.pi * sp_fft.fftfreq(count, self.spacing)

    def __str__(self):
        return 'AxisGrid(%r, %r, %r)' % (
            self.minimum, self.maximum, self.count)

    def __repr__(self):
        return 'AxisGrid(minimum=%r, maximum=%r, count=%r, spacing=%r)' % (
            self.minimum, self.maximum, self.count, self.spacing)

    def __eq__(self, other):
        if not isinstance(other, AxisGrid):
            return NotImplemented
        return (self.minimum == other.minimum and
                self.maximum == other.maximum and
                self.count == other.count)

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((self.minimum, self.maximum, self.count))

    @property
    def length(self):
        return self.maximum - self.minimum

    @property
    def frequency_spacing(self):
        return 2.0 * np.pi / self.length

    @property
    def half_frequencies(self):
        """ Non-negative frequencies as used by real-input transforms. """
        return 2.0 * np.pi * sp_fft.rfftfreq(self.count, self.spacing)

    def refined(self, factor=2):
        """ Same interval, `factor` times as many nodes. """
        return AxisGrid(self.minimum, self.maximum, self.count * factor)

    def edge_band(self, margin_fraction):
        """ Boolean mask of the nodes inside the outer band of the axis. """
        width = margin_fraction * self.length
        return ((self.nodes - self.minimum) < width) | \
            ((self.maximum - self.nodes) <= width)

    def to_dict(self):
        return {
            'min': self.minimum,
            'max': self.maximum,
            'count': self.count,
        }


def build_axis(minimum, maximum, count):
    """
    Creates an axis after validating its parameters.

    Raises:
        ConfigurationError: count is not a power of two >= 8 or the
            interval is empty.
    """
    axis = AxisGrid(minimum, maximum, count)
    logger.log(TRACE, "built %s with spacing %r", axis, axis.spacing)
    return axis


class PhaseField(object):
    """
    A distribution sampled on a rectangular phase-space grid.

    Values are indexed `[i_x, i_p]`. Fields coming out of a forward
    transform hold complex values; `transformed` lists the axes that are
    in the frequency domain.

    Attributes:
        x_axis (AxisGrid):
            Position axis.
        p_axis (AxisGrid):
            Momentum axis.
        values (numpy.ndarray):
            The samples, shape `(x_axis.count, p_axis.count)`.
        time (float):
            Simulation time of the samples.
        transformed (tuple):
            Axes currently in the frequency domain.
    """
    def __init__(self, x_axis, p_axis, values, time=0.0, transformed=()):
        """ Constructor. """
        super(PhaseField, self).__init__()
        values = np.asarray(values)
        if not np.iscomplexobj(values):
            values = values.astype(np.float64, copy=False)
        expected = (x_axis.count, p_axis.count)
        if values.shape != expected:
            raise GridMismatchError(
                "field of shape %r does not match grid %r" % (
                    values.shape, expected))
        self.x_axis = x_axis
        self.p_axis = p_axis
        self.values = values
        self.time = float(time)
        self.transformed = tuple(transformed)

    def __str__(self):
        return 'PhaseField(t=%r, %s x %s)' % (
            self.time, self.x_axis, self.p_axis)

    def __repr__(self):
        return 'PhaseField(x_axis=%r, p_axis=%r, time=%r, transformed=%r)' % (
            self.x_axis, self.p_axis, self.time, self.transformed)

    @property
    def shape(self):
        return self.values.shape

    @property
    def cell_area(self):
        return self.x_axis.spacing * self.p_axis.spacing

    def same_grid(self, other):
        return self.x_axis == other.x_axis and self.p_axis == other.p_axis

    def require_same_grid(self, other):
        if not self.same_grid(other):
            raise GridMismatchError(
                "fields live on different grids: %s / %s and %s / %s" % (
                    self.x_axis, self.p_axis, other.x_axis, other.p_axis))

    def with_values(self, values, time=None):
        """ A field on the same grid holding other values. """
        return PhaseField(
            self.x_axis, self.p_axis, values,
            time=self.time if time is None else time)

    def copy(self):
        return PhaseField(
            self.x_axis, self.p_axis, self.values.copy(),
            time=self.time, transformed=self.transformed)


class ComplexField(object):
    """
    A wave function sampled on a periodic axis.

    Attributes:
        axis (AxisGrid):
            The position axis.
        values (numpy.ndarray):
            Complex amplitudes.
        time (float):
            Simulation time.
    """
    def __init__(self, axis, values, time=0.0):
        """ Constructor. """
        super(ComplexField, self).__init__()
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (axis.count,):
            raise GridMismatchError(
                "wave function of shape %r does not match axis %s" % (
                    values.shape, axis))
        self.axis = axis
        self.values = values
        self.time = float(time)

    def __str__(self):
        return 'ComplexField(t=%r, %s)' % (self.time, self.axis)

    def __repr__(self):
        return 'ComplexField(axis=%r, time=%r)' % (self.axis, self.time)

    def norm(self):
        """ Sum of |psi|^2 times the spacing. """
        return float(np.sum(np.abs(self.values) ** 2) * self.axis.spacing)

    def density(self):
        return np.abs(self.values) ** 2

    def with_values(self, values, time=None):
        return ComplexField(
            self.axis, values, time=self.time if time is None else time)


def _axis_index(axis):
    if axis == AXIS_X:
        return 0
    elif axis == AXIS_P:
        return 1
    raise ValidationError("unknown axis %r" % (axis,))


def transform_along(field, axis, direction, workers=None):
    """
    Transforms a field along one axis.

    Arguments:
        field (PhaseField):
            The input; it may already be transformed along the other axis.
        axis (str):
            `x` or `p`.
        direction (str):
            `forward` or `inverse`.
        workers (int):
            Passed on to `scipy.fft`.

    Returns:
        A new PhaseField holding complex values.
    """
    index = _axis_index(axis)
    grid = field.x_axis if index == 0 else field.p_axis
    if field.values.shape != (field.x_axis.count, field.p_axis.count):
        raise GridMismatchError(
            "field of shape %r does not match its grids" % (
                field.values.shape,))

    transformed = list(field.transformed)
    if direction == FORWARD:
        if axis in transformed:
            raise ValidationError(
                "field is already transformed along %r" % axis)
        values = sp_fft.fft(field.values, axis=index, workers=workers)
        values *= grid.spacing / SQRT_2PI
        transformed.append(axis)
    elif direction == INVERSE:
        if axis not in transformed:
            raise ValidationError(
                "field is not transformed along %r" % axis)
        values = sp_fft.ifft(field.values, axis=index, workers=workers)
        values *= SQRT_2PI / grid.spacing
        transformed.remove(axis)
    else:
        raise ValidationError("unknown direction %r" % (direction,))

    return PhaseField(
        field.x_axis, field.p_axis, values,
        time=field.time, transformed=transformed)


def integrate_field(field):
    """ Sum of the values times the cell area. """
    return float(np.sum(field.values) * field.cell_area)


def marginal(field, axis):
    """
    Density along `axis`, obtained by integrating out the other axis.

    `marginal(f, 'x')` is the position density (length `x_axis.count`).
    """
    index = _axis_index(axis)
    if index == 0:
        return np.sum(field.values, axis=1) * field.p_axis.spacing
    return np.sum(field.values, axis=0) * field.x_axis.spacing


def boundary_mass(field, margin_fraction):
    """
    Mass of `|f|` on the nodes lying in the outer band of the domain.

    The band is `margin_fraction` of the length of each axis, measured
    from both ends.
    """
    if not 0.0 < margin_fraction < 0.5:
        raise ValidationError(
            "margin fraction must be in (0, 0.5), got %r" % (
                margin_fraction,))
    band = field.x_axis.edge_band(margin_fraction)[:, None] | \
        field.p_axis.edge_band(margin_fraction)[None, :]
    return float(np.sum(np.abs(field.values[band])) * field.cell_area)


def density_boundary_mass(psi, margin_fraction):
    """ Same as `boundary_mass` for the position density of a wave function. """
    if not 0.0 < margin_fraction < 0.5:
        raise ValidationError(
            "margin fraction must be in (0, 0.5), got %r" % (
                margin_fraction,))
    band = psi.axis.edge_band(margin_fraction)
    return float(np.sum(psi.density()[band]) * psi.axis.spacing)


def gaussian_field(x_axis, p_axis, mean, covariance, time=0.0):
    """
    A normalized bivariate Gaussian.

    Arguments:
        mean (tuple):
            `(x0, p0)`.
        covariance (tuple):
            `(var_x, var_p, cov_xp)`.
    """
    x0, p0 = mean
    var_x, var_p, cov_xp = covariance
    det = var_x * var_p - cov_xp * cov_xp
    if var_x <= 0 or var_p <= 0 or det <= 0:
        raise ValidationError(
            "covariance (%r, %r, %r) is not positive definite" % (
                var_x, var_p, cov_xp))
    dx = (x_axis.nodes - x0)[:, None]
    dp = (p_axis.nodes - p0)[None, :]
    exponent = (var_p * dx * dx - 2.0 * cov_xp * dx * dp +
                var_x * dp * dp) / (2.0 * det)
    values = np.exp(-exponent)
    field = PhaseField(x_axis, p_axis, values, time=time)
    mass = integrate_field(field)
    analytic = 2.0 * np.pi * math.sqrt(det)
    logger.log(TRACE, "gaussian field quadrature %r vs analytic %r",
               mass, analytic)
    if not mass > 0:
        raise ValidationError(
            "gaussian centered at (%r, %r) has no mass on the grid" % (
                x0, p0))
    field.values /= mass
    return field
