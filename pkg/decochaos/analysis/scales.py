# -*- coding: utf-8 -*-
"""
Break time, nonlinearity scale and coherence scale.
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import math

import numpy as np

from decochaos.constants import CHI_EPSILON
from decochaos.errors import ValidationError, AnalysisError
from decochaos.grid import marginal

logger = logging.getLogger('decochaos.analysis')


class BreakTimeEstimate(object):
    """
    `t_hbar = ln(chi * delta_p / hbar) / lam`.

    Attributes:
        valid (bool):
            False when the logarithm's argument is not above one.
    """
    def __init__(self, lam, chi, delta_p, hbar, t_hbar, valid):
        """ Constructor. """
        super(BreakTimeEstimate, self).__init__()
        self.lam = lam
        self.chi = chi
        self.delta_p = delta_p
        self.hbar = hbar
        self.t_hbar = t_hbar
        self.valid = valid

    def __repr__(self):
        return 'BreakTimeEstimate(lam=%r, chi=%r, delta_p=%r, hbar=%r, ' \
               't_hbar=%r, valid=%r)' % (
                   self.lam, self.chi, self.delta_p, self.hbar,
                   self.t_hbar, self.valid)


def break_time(lam, chi, delta_p, hbar):
    """
    Logarithmic break time of quantum-classical correspondence.

    Raises:
        ValidationError: any input is not positive.
    """
    for name, value in (('lambda', lam), ('chi', chi),
                        ('delta_p', delta_p), ('hbar', hbar)):
        if not value > 0:
            raise ValidationError("%s must be positive, got %r" % (
                name, value))
    argument = chi * delta_p / hbar
    t_hbar = math.log(argument) / lam
    valid = argument > 1.0
    if not valid:
        logger.warning("chi * delta_p / hbar = %r is not above one; the "
                       "break time estimate is not meaningful", argument)
    return BreakTimeEstimate(lam, chi, delta_p, hbar, t_hbar, valid)


class ChiEstimate(object):
    """
    Attributes:
        value (float):
            `sqrt(|<V' / V'''>|)` over the retained cells.
        excluded_mass (float):
            Mass of the cells dropped because `|V'''|` is too small.
    """
    def __init__(self, value, excluded_mass):
        """ Constructor. """
        super(ChiEstimate, self).__init__()
        self.value = value
        self.excluded_mass = excluded_mass

    def __repr__(self):
        return 'ChiEstimate(value=%r, excluded_mass=%r)' % (
            self.value, self.excluded_mass)

    def __float__(self):
        return float(self.value)


def chi_estimate(field, potential, t, epsilon=CHI_EPSILON):
    """
    Nonlinearity scale averaged over the position density of `field`.

    Cells where `|V'''| < epsilon * max|V'''|` (maximum over the position
    axis) are excluded and their mass is reported.

    Raises:
        AnalysisError: nothing is left after the exclusion.
    """
    if not epsilon > 0:
        raise ValidationError("epsilon must be positive, got %r" % epsilon)
    x = field.x_axis.nodes
    third = np.abs(potential.third_derivative(x, t) + 0.0 * x)
    weights = marginal(field, 'x') * field.x_axis.spacing
    cutoff = epsilon * float(np.max(third))
    kept = third >= cutoff if cutoff > 0 else np.zeros(x.shape, dtype=bool)
    kept &= third > 0
    excluded = float(np.sum(weights[~kept]))
    retained = float(np.sum(weights[kept]))
    if not kept.any() or retained == 0:
        raise AnalysisError(
            "all the mass lies where V''' vanishes; chi is undefined")
    ratio = potential.gradient(x[kept], t) / \
        potential.third_derivative(x[kept], t)
    average = float(np.dot(weights[kept], ratio)) / retained
    return ChiEstimate(math.sqrt(abs(average)), excluded)


def coherence_scale(diffusion, lam):
    """ `sqrt(2 D / lam)`. """
    if not lam > 0:
        raise ValidationError("lambda must be positive, got %r" % lam)
    if diffusion < 0:
        raise ValidationError(
            "diffusion must be non-negative, got %r" % diffusion)
    return math.sqrt(2.0 * diffusion / lam)
