"""Interferometer circuits and their joint measurement operator.

Mode labels:

    a, b   seeds of the parametric amplifier (probe, conjugate)
    c, d   vacuum ports of the internal loss beamsplitters
    e, f   vacuum ports of the external loss beamsplitters
    g, h   local oscillators of the probe and conjugate homodyne detectors

Each builder returns (J, state): the joint rotated quadrature operator
J = af'.af - an'.an + bf'.bf - bn'.bn summed over both homodyne detectors,
and the coherent assignment of the seeded modes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from mpmath import cosh, exp, mpc, mpf, sinh, sqrt, workdps

from .algebra import DEFAULT_DPS, OperatorExpr, ladder, adjoint, mul
from .jones import sampling_phase

ARMS_BOTH = "both"
ARMS_PROBE = "probe-only"


@dataclass(frozen=True)
class InterferometerParams:
    """All physical knobs of the simulated circuits.

    r, s are the squeezing parameters of the first and second amplifier
    (gain G = cosh(r)**2); alpha, beta seed modes a, b; gamma, kappa are
    the LO amplitudes; the six eta values are power transmissions of the
    loss and homodyne beamsplitters; theta_f is the polarization rotation
    under test and phi_p, phi_c the LO phases.  ``arms`` selects whether
    only the probe or both squeezed beams pass the sample.
    """

    r: object = 0
    s: object = 0
    alpha: object = 0
    beta: object = 0
    gamma: object = 0
    kappa: object = 0
    eta_p1: object = 1
    eta_c1: object = 1
    eta_p2: object = 1
    eta_c2: object = 1
    eta_p3: object = 0.5
    eta_c3: object = 0.5
    theta_f: object = 0
    phi_p: object = 0
    phi_c: object = 0
    arms: str = ARMS_BOTH
    precision: int = DEFAULT_DPS

    def __post_init__(self):
        if self.precision < 30:
            raise ValueError(f"precision must be >= 30 digits, got {self.precision}")
        if self.arms not in (ARMS_BOTH, ARMS_PROBE):
            raise ValueError(f"arms must be '{ARMS_BOTH}' or '{ARMS_PROBE}'")
        with workdps(self.precision):
            for name in ("r", "s", "alpha", "beta", "gamma", "kappa",
                         "eta_p1", "eta_c1", "eta_p2", "eta_c2", "eta_p3", "eta_c3",
                         "theta_f", "phi_p", "phi_c"):
                object.__setattr__(self, name, mpf(getattr(self, name)))
        if self.r < 0 or self.s < 0:
            raise ValueError("squeezing parameters r, s must be nonnegative")
        for name in ("eta_p1", "eta_c1", "eta_p2", "eta_c2", "eta_p3", "eta_c3"):
            v = getattr(self, name)
            if not (0 <= v <= 1):
                raise ValueError(f"{name} = {v} outside [0, 1]")

    def gain_db(self):
        """Amplifier gain 10 log10(cosh(r)**2) in dB."""
        from mpmath import log10
        with workdps(self.precision):
            return 10 * log10(cosh(self.r) ** 2)

    def replace(self, **changes) -> "InterferometerParams":
        return replace(self, **changes)


def _i(dps):
    return mpc(0, 1)


def _homodyne_difference(sig: OperatorExpr, lo: OperatorExpr, eta3) -> OperatorExpr:
    """Balanced-detector difference af'.af - an'.an for one homodyne.

    af = sig*sqrt(eta3) + i*lo*sqrt(1-eta3); an = lo*sqrt(eta3) + i*sig*sqrt(1-eta3).
    """
    dps = sig.dps
    with workdps(dps):
        t, l = sqrt(eta3), sqrt(1 - mpf(eta3))
        i = _i(dps)
        af = sig * t + lo * (i * l)
        an = lo * t + sig * (i * l)
        return mul(adjoint(af), af) - mul(adjoint(an), an)


def build_su11_J(p: InterferometerParams, phi=None, dps: int | None = None):
    """Full SU(1,1) chain a,b -> u,v -> w,z -> x,y -> m,n -> homodynes.

    ``phi`` overrides the sampled-arm phase (used for numerical phase
    derivatives); it defaults to the transduced rotation.  Returns the
    operator J and the coherent assignment {a, b, g, h}.
    """
    dps = dps or p.precision
    with workdps(dps):
        i = _i(dps)
        if phi is None:
            phi = sampling_phase(p.theta_f, dps)
        phi_u = phi
        phi_v = phi if p.arms == ARMS_BOTH else mpf(0)

        def op(m):
            return ladder(m, False, 1, dps)

        a, b, c, d, e_, f = (op(m) for m in "abcdef")
        u = a * cosh(p.r) + adjoint(b) * sinh(p.r)
        v = adjoint(a) * sinh(p.r) + b * cosh(p.r)
        w = c * (i * sqrt(1 - p.eta_p1)) + u * (exp(i * phi_u) * sqrt(p.eta_p1))
        z = d * (i * sqrt(1 - p.eta_c1)) + v * (exp(i * phi_v) * sqrt(p.eta_c1))
        x = w * cosh(p.s) + adjoint(z) * sinh(p.s)
        y = adjoint(w) * sinh(p.s) + z * cosh(p.s)
        m_ = x * sqrt(p.eta_p2) + e_ * (i * sqrt(1 - p.eta_p2))
        n_ = y * sqrt(p.eta_c2) + f * (i * sqrt(1 - p.eta_c2))
        g_lo = op("g") * exp(i * p.phi_p)
        h_lo = op("h") * exp(i * p.phi_c)
        J = _homodyne_difference(m_, g_lo, p.eta_p3) + _homodyne_difference(
            n_, h_lo, p.eta_c3
        )
        state = {"a": mpc(p.alpha), "b": mpc(p.beta), "g": mpc(p.gamma), "h": mpc(p.kappa)}
    return J, state


def build_tsu11_J(p: InterferometerParams, phi=None, dps: int | None = None):
    """Truncated SU(1,1): second amplifier removed, dual homodyne readout.

    Forces s = 0, unit external transmissions and balanced homodyne
    splitters; eta_p1, eta_c1 keep their given values as the internal
    losses.
    """
    q = p.replace(s=0, eta_p2=1, eta_c2=1, eta_p3=0.5, eta_c3=0.5)
    return build_su11_J(q, phi=phi, dps=dps)


def build_vacuum_J(p: InterferometerParams, phi=None, dps: int | None = None):
    """Two-mode squeezed vacuum sensing: same circuit, no seeds."""
    if p.alpha != 0 or p.beta != 0:
        raise ValueError("vacuum circuit requires alpha = beta = 0")
    return build_tsu11_J(p, phi=phi, dps=dps)


def build_classical_J(p: InterferometerParams, phi=None, dps: int | None = None):
    """Photon-matched classical benchmark interferometer.

    Seeds are rescaled to alpha*sqrt(eta)*cosh(r) and alpha*sqrt(eta)*sinh(r)
    so the photon numbers on the sampled arms match the squeezed circuit,
    then each arm meets its LO on a balanced beamsplitter read out by a
    balanced detector pair.
    """
    dps = dps or p.precision
    with workdps(dps):
        i = _i(dps)
        if phi is None:
            phi = sampling_phase(p.theta_f, dps)
        phi_a = phi
        phi_b = phi if p.arms == ARMS_BOTH else mpf(0)
        rt2 = 1 / sqrt(2)

        def op(m):
            return ladder(m, False, 1, dps)

        a, b, g, h = (op(m) for m in "abgh")
        af = (a * exp(i * phi_a) + g * (i * exp(i * p.phi_p))) * rt2
        an = (a * (i * exp(i * phi_a)) + g * exp(i * p.phi_p)) * rt2
        bf = (b * exp(i * phi_b) + h * (i * exp(i * p.phi_c))) * rt2
        # the second detector pair mirrors the probe pair: each homodyne
        # contributes the difference of its own two ports
        bn = (b * (i * exp(i * phi_b)) + h * exp(i * p.phi_c)) * rt2
        J = (
            mul(adjoint(af), af)
            - mul(adjoint(an), an)
            + mul(adjoint(bf), bf)
            - mul(adjoint(bn), bn)
        )
        alpha_eff = p.alpha * sqrt(p.eta_p1) * cosh(p.r)
        beta_eff = p.alpha * sqrt(p.eta_c1) * sinh(p.r)
        state = {"a": mpc(alpha_eff), "b": mpc(beta_eff),
                 "g": mpc(p.gamma), "h": mpc(p.kappa)}
    return J, state


#: circuit name -> builder(p, phi=None, dps=None) -> (J, state)
CIRCUITS = {
    "classical": build_classical_J,
    "tsu11": build_tsu11_J,
    "su11": build_su11_J,
    "vacuum": build_vacuum_J,
}
