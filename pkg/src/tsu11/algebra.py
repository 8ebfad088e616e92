"""Exact symbolic algebra for multi-mode bosonic ladder operators.

An operator expression is a finite sum of scalar-weighted products of
creation and annihilation operators over named modes, e.g.

    2.5 * a'.a  -  1j * g'.b'.c

where a prime marks a creation operator.  Coefficients are
arbitrary-precision complex numbers (mpmath) and every expression carries
the decimal precision it was built at.  Operators of distinct modes
commute; same-mode factors obey [a, a'] = 1.

Expressions are immutable after construction and all operations are pure
functions, so evaluation is safe to run in parallel across parameter
points.
"""

from __future__ import annotations

import functools
from typing import Iterable, Mapping

from mpmath import mp, mpc, mpf, workdps

#: (mode label, dagger flag); dagger=True is a creation operator.
Factor = tuple[str, bool]

DEFAULT_DPS = 60

# Coefficients smaller than max|c| * 10**(-dps + ZERO_MARGIN) are rounding
# dust from cancellations and are dropped during canonical merge.
ZERO_MARGIN = 5


class PrecisionMismatch(ValueError):
    """Raised when expressions built at different precisions are combined."""


@functools.lru_cache(maxsize=None)
def _reorder(factors: tuple[Factor, ...]) -> tuple[tuple[tuple[Factor, ...], int], ...]:
    """Rewrite a factor product into normal order.

    Returns pairs (canonical factor tuple, integer multiplicity) whose sum
    equals the input product.  Each swap of a with a' of the same mode
    contributes the identity once; distinct modes commute freely.  The
    result is cached: the combinatorics are precision-free.
    """
    for i in range(len(factors) - 1):
        (m1, d1), (m2, d2) = factors[i], factors[i + 1]
        if not d1 and d2:
            # annihilation directly left of a creation: swap, and contract
            # when the modes coincide
            swapped = factors[:i] + (factors[i + 1], factors[i]) + factors[i + 2 :]
            acc: dict[tuple[Factor, ...], int] = {}
            for key, mult in _reorder(swapped):
                acc[key] = acc.get(key, 0) + mult
            if m1 == m2:
                contracted = factors[:i] + factors[i + 2 :]
                for key, mult in _reorder(contracted):
                    acc[key] = acc.get(key, 0) + mult
            return tuple(sorted(acc.items()))
    # already normal ordered: canonicalize as creations then annihilations,
    # each group sorted by mode label
    ordered = tuple(sorted(factors, key=lambda f: (not f[1], f[0])))
    return ((ordered, 1),)


def _mag(c: mpc):
    # magnitude proxy within sqrt(2) of |c|; avoids a square root per
    # coefficient and is plenty accurate for rounding-dust removal
    return abs(c.real) + abs(c.imag)


def _merge(raw: dict[tuple[Factor, ...], mpc], dps: int) -> dict[tuple[Factor, ...], mpc]:
    """Drop negligible coefficients relative to the largest one."""
    if not raw:
        return {}
    with workdps(dps):
        largest = max(_mag(c) for c in raw.values())
        if largest == 0:
            return {}
        floor = largest * mpf(10) ** (-dps + ZERO_MARGIN)
        return {k: c for k, c in raw.items() if _mag(c) > floor}


class OperatorExpr:
    """A canonically merged sum of weighted ladder-operator products.

    No two stored terms share a factor sequence and coefficients that are
    zero at working precision are dropped.  The empty factor tuple is the
    identity operator.
    """

    __slots__ = ("_terms", "dps")

    def __init__(
        self,
        terms: Mapping[tuple[Factor, ...], object] | None = None,
        dps: int = DEFAULT_DPS,
        _trusted: bool = False,
    ):
        self.dps = int(dps)
        if not terms:
            self._terms = {}
            return
        if _trusted:
            # internal fast path: keys already canonical tuples, values mpc
            self._terms = _merge(terms, self.dps)
            return
        raw: dict[tuple[Factor, ...], mpc] = {}
        with workdps(self.dps):
            for fac, c in terms.items():
                fac = tuple((str(m), bool(d)) for (m, d) in fac)
                raw[fac] = raw.get(fac, mpc(0)) + mpc(c)
        self._terms = _merge(raw, self.dps)

    # -- inspection ------------------------------------------------------

    def terms(self) -> Iterable[tuple[tuple[Factor, ...], mpc]]:
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((len(f) for f in self._terms), default=0)

    def modes(self) -> tuple[str, ...]:
        return tuple(sorted({m for fac in self._terms for (m, _) in fac}))

    def coefficient(self, factors: tuple[Factor, ...]) -> mpc:
        return self._terms.get(tuple(factors), mpc(0))

    # -- algebra ---------------------------------------------------------

    def _check(self, other: "OperatorExpr") -> None:
        if self.dps != other.dps:
            raise PrecisionMismatch(
                f"cannot combine expressions at {self.dps} and {other.dps} digits"
            )

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        self._check(other)
        with workdps(self.dps):
            acc = dict(self._terms)
            for fac, c in other._terms.items():
                acc[fac] = acc.get(fac, mpc(0)) + c
        return OperatorExpr(acc, self.dps, _trusted=True)

    def __sub__(self, other: "OperatorExpr") -> "OperatorExpr":
        return self + (-other)

    def __neg__(self) -> "OperatorExpr":
        return self.scaled(-1)

    def scaled(self, scalar) -> "OperatorExpr":
        with workdps(self.dps):
            s = mpc(scalar)
            return OperatorExpr(
                {f: c * s for f, c in self._terms.items()}, self.dps, _trusted=True
            )

    def __mul__(self, other):
        if isinstance(other, OperatorExpr):
            return mul(self, other)
        return self.scaled(other)

    def __rmul__(self, scalar) -> "OperatorExpr":
        return self.scaled(scalar)

    def adjoint(self) -> "OperatorExpr":
        return adjoint(self)

    def normal_order(self) -> "OperatorExpr":
        return normal_order(self)

    def expectation(self, state: Mapping[str, object]) -> mpc:
        return coherent_expectation(self, state)

    # -- serialization ---------------------------------------------------

    def to_text(self) -> str:
        """Deterministic text form: sorted terms, decimal coefficients."""
        lines = []
        with workdps(self.dps):
            for fac in sorted(self._terms, key=lambda f: (len(f), f)):
                c = self._terms[fac]
                ops = ".".join(m + ("'" if d else "") for (m, d) in fac) or "1"
                re_s = mp.nstr(c.real, self.dps, strip_zeros=False)
                im_s = mp.nstr(c.imag, self.dps, strip_zeros=False)
                lines.append(f"({re_s} {im_s}j) {ops}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        n = len(self._terms)
        return f"OperatorExpr({n} term{'s' if n != 1 else ''}, dps={self.dps})"


# -- constructors ---------------------------------------------------------


def ladder(mode: str, dagger: bool = False, coeff=1, dps: int = DEFAULT_DPS) -> OperatorExpr:
    """A single weighted ladder operator."""
    return OperatorExpr({((mode, dagger),): coeff}, dps)


def identity(coeff=1, dps: int = DEFAULT_DPS) -> OperatorExpr:
    """The identity operator scaled by coeff."""
    return OperatorExpr({(): coeff}, dps)


def zero(dps: int = DEFAULT_DPS) -> OperatorExpr:
    return OperatorExpr({}, dps)


# -- operations -----------------------------------------------------------


def mul(lhs: OperatorExpr, rhs: OperatorExpr) -> OperatorExpr:
    """Distributed product; factor sequences concatenate, no reordering."""
    lhs._check(rhs)
    acc: dict[tuple[Factor, ...], mpc] = {}
    with workdps(lhs.dps):
        for fa, ca in lhs._terms.items():
            for fb, cb in rhs._terms.items():
                key = fa + fb
                prod = ca * cb
                if key in acc:
                    acc[key] += prod
                else:
                    acc[key] = prod
    return OperatorExpr(acc, lhs.dps, _trusted=True)


def adjoint(x: OperatorExpr) -> OperatorExpr:
    """Hermitian conjugate: conjugate coefficients, reverse factors, flip daggers."""
    acc: dict[tuple[Factor, ...], mpc] = {}
    with workdps(x.dps):
        for fac, c in x._terms.items():
            key = tuple((m, not d) for (m, d) in reversed(fac))
            cc = c.conjugate()
            if key in acc:
                acc[key] += cc
            else:
                acc[key] = cc
    return OperatorExpr(acc, x.dps, _trusted=True)


def normal_order(x: OperatorExpr) -> OperatorExpr:
    """Equal operator with all creations left of all annihilations per term."""
    acc: dict[tuple[Factor, ...], mpc] = {}
    with workdps(x.dps):
        for fac, c in x._terms.items():
            for key, mult in _reorder(fac):
                add = c if mult == 1 else c * mult
                if key in acc:
                    acc[key] += add
                else:
                    acc[key] = add
    return OperatorExpr(acc, x.dps, _trusted=True)


def coherent_expectation(x: OperatorExpr, state: Mapping[str, object]) -> mpc:
    """Expectation value over a product of coherent states.

    ``state`` maps mode labels to complex eigenvalues; absent modes are
    vacuum.  After normal ordering, each creation factor of mode m becomes
    conj(state[m]) and each annihilation factor becomes state[m].
    """
    with workdps(x.dps):
        amp = {m: mpc(v) for m, v in state.items()}
        total = mpc(0)
        for fac, c in normal_order(x).terms():
            val = c
            for (m, d) in fac:
                a = amp.get(m)
                if a is None or a == 0:
                    val = None
                    break
                val = val * (a.conjugate() if d else a)
            if val is not None:
                total += val
        return total
