"""Analytic reference expressions for the canonical circuits.

These closed forms are the independent cross-check route for the operator
engine: mean of J, squared phase derivative of the mean, and variance,
for the classical benchmark, the truncated SU(1,1) with unseeded b, and
the vacuum-seeded circuit.  The variance forms follow from a Wick
decomposition over coherent product states: writing each mode operator as
mean plus fluctuation, the variance of the quadratic J is the sum of the
squared moduli of the linearized fluctuation amplitudes plus the bilinear
vacuum contractions.

All functions expect mpmath-compatible numbers and evaluate in the
caller's working precision.
"""

from __future__ import annotations

from mpmath import cos, cosh, exp, mpc, mpf, sin, sinh

from .circuits import ARMS_BOTH, InterferometerParams

_I = mpc(0, 1)


def _phases(p: InterferometerParams, phi):
    phi_u = phi
    phi_v = phi if p.arms == ARMS_BOTH else mpf(0)
    return phi_u, phi_v


# -- classical benchmark ---------------------------------------------------
# Seeds below are the rescaled amplitudes actually present in the circuit.


def classical_mean(alpha, beta, gamma, kappa, phi_a, phi_b, phi_p, phi_c):
    """<J> for the classical circuit with per-arm sample phases."""
    return _I * exp(-_I * (phi_c + phi_p + phi_a)) * (
        -alpha * gamma * exp(_I * (phi_c + 2 * phi_a))
        + alpha * gamma * exp(_I * (phi_c + 2 * phi_p))
    ) + _I * exp(-_I * (phi_c + phi_p + phi_b)) * (
        beta * kappa * exp(_I * (2 * phi_c + phi_p))
        - beta * kappa * exp(_I * (phi_p + 2 * phi_b))
    )


def classical_derivative_sq(alpha, beta, gamma, kappa, phi_a, phi_b, phi_p, phi_c,
                            probe_only: bool = False):
    """|d<J>/dphi|**2 for the classical circuit."""
    if probe_only:
        return 4 * alpha**2 * gamma**2 * cos(phi_a - phi_p) ** 2
    z = (
        alpha * gamma * exp(_I * (phi_c + 2 * phi_p))
        + beta * kappa * exp(_I * (2 * phi_c + phi_p))
        + alpha * gamma * exp(_I * (phi_c + 2 * phi_a))
        + beta * kappa * exp(_I * (phi_p + 2 * phi_b))
    )
    return (z.conjugate() * z).real


def classical_variance(alpha, beta, gamma, kappa):
    """Coherent-state variance of J: phase independent."""
    return alpha**2 + beta**2 + gamma**2 + kappa**2


# -- truncated SU(1,1), b unseeded ------------------------------------------


def tsu11_mean(p: InterferometerParams, phi):
    """<J> for the truncated SU(1,1) circuit with beta = 0."""
    phi_u, phi_v = _phases(p, phi)
    eta = p.eta_p1
    return (
        2 * p.alpha * (eta ** mpf("0.5"))
        * (p.gamma * cosh(p.r) * sin(phi_u - p.phi_p)
           + p.kappa * sinh(p.r) * sin(phi_v - p.phi_c))
    )


def tsu11_derivative_sq(p: InterferometerParams, phi):
    """|d<J>/dphi|**2 for the truncated SU(1,1) circuit with beta = 0."""
    phi_u, phi_v = _phases(p, phi)
    eta = p.eta_p1
    bracket = p.gamma * cosh(p.r) * cos(phi_u - p.phi_p)
    if p.arms == ARMS_BOTH:
        bracket += p.kappa * sinh(p.r) * cos(phi_v - p.phi_c)
    return 4 * p.alpha**2 * eta * bracket**2


def tsu11_variance(p: InterferometerParams, phi):
    """Variance of J for the truncated SU(1,1) circuit with beta = 0.

    eta*alpha^2*cosh(2r) is the seed beating against LO-port vacuum, the
    (gamma^2+kappa^2) block is LO shot noise dressed by the squeezer, the
    2*eta*sinh(r)^2 term is spontaneous pair emission, and the cross term
    is the two-mode squeezing correlation between the detectors.
    """
    phi_u, phi_v = _phases(p, phi)
    eta = p.eta_p1
    g2k2 = p.gamma**2 + p.kappa**2
    return (
        eta * p.alpha**2 * cosh(2 * p.r)
        + g2k2 * (1 - eta + eta * cosh(2 * p.r))
        + 2 * eta * sinh(p.r) ** 2
        - 2 * eta * p.gamma * p.kappa * sinh(2 * p.r)
        * cos(phi_u + phi_v - p.phi_p - p.phi_c)
    )


# -- vacuum seeding ----------------------------------------------------------


def vacuum_variance(p: InterferometerParams, phi):
    """Variance of J with both amplifier inputs unseeded (<J> = 0)."""
    phi_u, phi_v = _phases(p, phi)
    eta = p.eta_p1
    x = phi_u + phi_v - p.phi_p - p.phi_c
    return (
        2 * eta * sinh(p.r) * (sinh(p.r) - p.gamma * p.kappa * cosh(p.r) * exp(-_I * x))
        + p.gamma * (
            -p.gamma * eta + p.gamma + p.gamma * eta * cosh(2 * p.r)
            - eta * p.kappa * sinh(2 * p.r) * exp(_I * x)
        )
        + p.kappa**2 * (-eta + eta * cosh(2 * p.r) + 1)
    ).real
