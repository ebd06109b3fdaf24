"""Subdivision masks, level-dependent mask families, and refinement.

A mask ``alpha`` drives one refinement step ``(S c)_j = sum_i
alpha_{j-2i} c_i``, equivalently ``alpha * (c^2)``.  Masks are stored
centered: interpolating masks put the copy tap at index 0 and symmetric
masks are symmetric about 0.  A family hands out the mask for each
refinement step; the level argument ``k`` counts steps already
performed, so ``mask_at_level(family, 0)`` refines the initial data.

Three concrete level-dependent families are provided besides stationary
masks: an interpolating four-point family with a trigonometric tension
(``NS4Point``), an exponential generalization of the cubic B-spline
(``NSCubic``), and a conic-reproducing family (``Conic``) whose
refinements keep sampled conic sections (circles in particular) exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParamsError,
    DegenerateParameterError,
    DomainError,
    PeriodTooShortError,
)
from .sequences import FinSeq, PeriodicSeq, add, convolve, upsample2

_PARITY_TOL = 1e-12
_DENOM_GUARD = 1e-12


class Mask:
    """A subdivision mask: centered taps plus level and family provenance.

    The even- and odd-indexed taps of a convergent scheme's mask each sum
    to one.  That is enforced at construction for families that satisfy
    it exactly; the exponential B-spline family only approaches it as the
    level grows, so it constructs masks with ``check_parity=False`` and
    the deviations remain available via :attr:`parity_deviation`.
    """

    __slots__ = ("taps", "level", "family_id")

    def __init__(self, taps: FinSeq, level: int = 0, family_id: str = "custom",
                 check_parity: bool = True):
        if taps.is_empty:
            raise BadParamsError("mask has no taps")
        object.__setattr__(self, "taps", taps)
        object.__setattr__(self, "level", int(level))
        object.__setattr__(self, "family_id", str(family_id))
        if check_parity:
            dev = max(abs(d) for d in self.parity_deviation)
            if dev > _PARITY_TOL:
                raise BadParamsError(
                    f"mask parity sums deviate from 1 by {dev:.3e}")

    def __setattr__(self, name, value):
        raise AttributeError("Mask is immutable")

    @property
    def even_sum(self) -> float:
        idx = self.taps.indices()
        return float(self.taps.coeffs[idx % 2 == 0].sum())

    @property
    def odd_sum(self) -> float:
        idx = self.taps.indices()
        return float(self.taps.coeffs[idx % 2 == 1].sum())

    @property
    def parity_deviation(self):
        """(even_sum - 1, odd_sum - 1)."""
        return (self.even_sum - 1.0, self.odd_sum - 1.0)

    def __repr__(self):
        return (f"Mask({self.family_id!r}, level={self.level}, "
                f"support={self.taps.support})")


def operator_norm_inf(mask: Mask) -> float:
    """Sup-norm of the refinement operator: max of the two parity l1 sums."""
    idx = mask.taps.indices()
    even = np.abs(mask.taps.coeffs[idx % 2 == 0]).sum()
    odd = np.abs(mask.taps.coeffs[idx % 2 == 1]).sum()
    return float(max(even, odd))


def _stencil_reach(taps: FinSeq) -> int:
    """Largest number of coarse points one output sample touches."""
    idx = taps.indices()
    reach = 0
    for parity in (0, 1):
        sel = idx[idx % 2 == parity]
        if sel.size:
            ms = (sel - parity) // 2
            reach = max(reach, int(ms.max() - ms.min()) + 1)
    return reach


def refine(mask: Mask, c):
    """One refinement step ``(S c)_j = sum_i alpha_{j-2i} c_i``.

    A periodic input of period N yields period 2N and must satisfy
    ``N >= stencil reach``, otherwise the output would wrap onto itself.
    """
    if isinstance(c, PeriodicSeq):
        reach = _stencil_reach(mask.taps)
        if c.period < reach:
            raise PeriodTooShortError(
                f"period {c.period} shorter than stencil reach {reach}")
    return convolve(mask.taps, upsample2(c))


# ---------------------------------------------------------------------------
# curve classes and tension parameters


class CurveClass:
    """Kind of exponential-polynomial data the conic family is tuned to."""

    __slots__ = ()


@dataclass(frozen=True)
class Polynomial(CurveClass):
    pass


@dataclass(frozen=True)
class Hyperbolic(CurveClass):
    sigma: float


@dataclass(frozen=True)
class Trigonometric(CurveClass):
    sigma: float


def initial_v(curve_class: CurveClass) -> float:
    """Starting tension for a family adapted to the given data class.

    Uniformly sampled data with angular spacing ``sigma`` (for closed
    curves, ``sigma = 2*pi/N`` with N sample points) gives ``cos(sigma)``
    in the trigonometric case and ``cosh(sigma)`` in the hyperbolic case;
    purely polynomial data gives 1.
    """
    if isinstance(curve_class, Polynomial):
        return 1.0
    if isinstance(curve_class, (Hyperbolic, Trigonometric)):
        if curve_class.sigma <= 0:
            raise DomainError("sigma must be positive")
        fn = math.cosh if isinstance(curve_class, Hyperbolic) else math.cos
        return fn(curve_class.sigma)
    raise BadParamsError(f"unknown curve class {curve_class!r}")


def v_next(v: float) -> float:
    """Tension update ``v -> sqrt((1+v)/2)``; fixed point at 1.

    For ``v = cos(t)`` this is the half-angle step ``cos(t) -> cos(t/2)``,
    and likewise for cosh.
    """
    if v <= -1.0:
        raise DomainError(f"tension {v} outside domain (-1, inf)")
    return math.sqrt((1.0 + v) / 2.0)


def _v_at(v_init: float, k: int) -> float:
    v = v_init
    for _ in range(k + 1):
        v = v_next(v)
    return v


def conic_params(v: float) -> tuple[float, float]:
    """Stencil parameters (a, b) of the conic-reproducing rules at tension v.

    Evaluated in a form with the removable ``(v-1)`` factor cancelled
    analytically, so the value stays accurate arbitrarily close to the
    polynomial limit; the limit itself (|v-1| < 1e-12) and v near 0 are
    rejected because the displayed rules degenerate there.
    """
    if abs(v) < _DENOM_GUARD or abs(v - 1.0) < _DENOM_GUARD:
        raise DegenerateParameterError(
            f"conic parameters degenerate at v={v!r}")
    if v <= -1.0:
        raise DomainError(f"tension {v} outside domain (-1, inf)")
    s = math.sqrt(2.0 * (v + 1.0))
    ring = v + 3.0 + 2.0 * s
    a = -(2.0 + s) * (v * v + 2.0 * v + 2.0) / (4.0 * v * s * (2.0 + v * s) * ring)
    b = ((v + 1.0) * (v - 2.0) - 2.0 * s) / (2.0 * v * s * ring)
    return a, b


# ---------------------------------------------------------------------------
# families


class SchemeFamily:
    """Supplier of per-level masks for a (possibly nonstationary) scheme."""

    family_id = "abstract"

    def mask_at_level(self, k: int) -> Mask:
        raise NotImplementedError

    def describe(self) -> dict:
        """JSON-serializable description (kind plus parameters)."""
        raise NotImplementedError

    @property
    def interpolating(self) -> bool:
        return False


class Stationary(SchemeFamily):
    """Same mask at every level."""

    family_id = "stationary"

    def __init__(self, taps: FinSeq, name: str = "stationary"):
        self._mask = Mask(taps, level=0, family_id=name)
        self.family_id = name

    def mask_at_level(self, k: int) -> Mask:
        if k < 0:
            raise DomainError("level must be nonnegative")
        return Mask(self._mask.taps, level=k, family_id=self.family_id)

    def describe(self) -> dict:
        return {
            "kind": "stationary",
            "offset": self._mask.taps.offset,
            "taps": self._mask.taps.coeffs.tolist(),
        }


def cubic_bspline_mask() -> FinSeq:
    """Stationary cubic B-spline mask {1/8, 1/2, 3/4, 1/2, 1/8} centered."""
    return FinSeq([1 / 8, 1 / 2, 3 / 4, 1 / 2, 1 / 8], -2)


def cubic_bspline_family() -> Stationary:
    return Stationary(cubic_bspline_mask(), name="cubic_bspline")


class NS4Point(SchemeFamily):
    """Interpolating four-point family with trigonometric tension theta.

    The even rule copies the coarse point.  The inserted value uses the
    weight ``w_k = 1 / (16 cos^2(theta 2^{-k-2}) cos(theta 2^{-k-1}))``
    on the outer pair and ``1/2 + w_k`` on the inner pair, which keeps
    both parity sums at one and reproduces the sampled circle when
    ``theta = 2*pi/N``.  ``theta = 0`` is the classical four-point scheme
    with weights {-1/16, 9/16, 9/16, -1/16}.
    """

    family_id = "ns4pt"

    def __init__(self, theta: float = 0.0):
        self.theta = float(theta)

    def mask_at_level(self, k: int) -> Mask:
        if k < 0:
            raise DomainError("level must be nonnegative")
        c_half = math.cos(self.theta * 2.0 ** (-k - 2))
        c_full = math.cos(self.theta * 2.0 ** (-k - 1))
        den = 16.0 * c_half * c_half * c_full
        if min(abs(c_half), abs(c_full), abs(den)) < _DENOM_GUARD:
            raise DegenerateParameterError(
                f"four-point weight denominator vanishes at level {k}")
        w = 1.0 / den
        inner = 0.5 + w
        taps = np.zeros(7)
        taps[[0, 6]] = -w
        taps[[2, 4]] = inner
        taps[3] = 1.0
        return Mask(FinSeq(taps, -3), level=k, family_id=self.family_id)

    def describe(self) -> dict:
        return {"kind": "ns4pt", "theta": self.theta}

    @property
    def interpolating(self) -> bool:
        return True


class NSCubic(SchemeFamily):
    """Exponential generalization of the cubic B-spline scheme.

    The level-k rules use the iterated tension ``v_k`` (k+1 applications
    of :func:`v_next` to ``v_init``):

    * even: ``1/(2(v+1)^2)``, ``(4v^2+2)/(2(v+1)^2)``, ``1/(2(v+1)^2)``
    * odd:  ``2v/(v+1)^2`` on both neighbours.

    At ``v = 1`` (and in the limit of large k) this is the cubic
    B-spline.  For v != 1 the parity sums are not exactly one -- the
    scheme generates exponentials rather than constants -- so parity is
    not enforced on these masks.
    """

    family_id = "nscubic"

    def __init__(self, v_init: float = 1.0):
        if v_init <= -1.0:
            raise DomainError(f"v_init must exceed -1, got {v_init}")
        self.v_init = float(v_init)

    def tension_at_level(self, k: int) -> float:
        if k < 0:
            raise DomainError("level must be nonnegative")
        return _v_at(self.v_init, k)

    def mask_at_level(self, k: int) -> Mask:
        v = self.tension_at_level(k)
        den = 2.0 * (v + 1.0) ** 2
        if abs(den) < _DENOM_GUARD:
            raise DegenerateParameterError(
                f"cubic rule denominator vanishes at level {k}")
        outer = 1.0 / den
        center = (4.0 * v * v + 2.0) / den
        oddtap = 2.0 * v / (v + 1.0) ** 2
        taps = np.array([outer, oddtap, center, oddtap, outer])
        return Mask(FinSeq(taps, -2), level=k, family_id=self.family_id,
                    check_parity=False)

    def describe(self) -> dict:
        return {"kind": "nscubic", "v_init": self.v_init}


class Conic(SchemeFamily):
    """Family reproducing {1, x, e^{tx}, e^{-tx}} sampled data.

    ``v_init`` is normally :func:`initial_v` of the data class; the
    level-k mask evaluates the nine-tap rules at the iterated tension.
    Both parity sums equal one identically in (a, b), so the masks pass
    the parity check at every level.
    """

    family_id = "conic"

    def __init__(self, v_init: float):
        if v_init <= -1.0:
            raise DomainError(f"v_init must exceed -1, got {v_init}")
        self.v_init = float(v_init)

    @classmethod
    def for_curve_class(cls, curve_class: CurveClass) -> "Conic":
        return cls(initial_v(curve_class))

    def tension_at_level(self, k: int) -> float:
        if k < 0:
            raise DomainError("level must be nonnegative")
        return _v_at(self.v_init, k)

    def mask_at_level(self, k: int) -> Mask:
        v = self.tension_at_level(k)
        a, b = conic_params(v)
        den = 4.0 * (v + 1.0)
        e2 = a / den
        e1 = (1.0 + 2.0 * v * (b + 2.0 * a)) / den
        e0 = (4.0 * v * (1.0 - b - 2.0 * a) - 2.0 * a + 2.0) / den
        o_outer = (2.0 * a * (v + 1.0) + b) / den
        o_inner = ((2.0 - 2.0 * a) * (v + 1.0) - b) / den
        taps = np.zeros(9)
        taps[[0, 2, 4, 6, 8]] = [e2, e1, e0, e1, e2]
        taps[[1, 3, 5, 7]] = [o_outer, o_inner, o_inner, o_outer]
        return Mask(FinSeq(taps, -4), level=k, family_id=self.family_id)

    def describe(self) -> dict:
        return {"kind": "conic", "v_init": self.v_init}


def family_from_description(desc: dict) -> SchemeFamily:
    """Rebuild a family from :meth:`SchemeFamily.describe` output."""
    kind = desc.get("kind")
    if kind == "stationary":
        return Stationary(FinSeq(desc["taps"], desc["offset"]))
    if kind == "ns4pt":
        return NS4Point(desc["theta"])
    if kind == "nscubic":
        return NSCubic(desc["v_init"])
    if kind == "conic":
        return Conic(desc["v_init"])
    raise BadParamsError(f"unknown family kind {kind!r}")


def refine_n(family: SchemeFamily, c, steps: int):
    """Apply ``steps`` refinement rounds, advancing the family level."""
    if steps < 0:
        raise DomainError("steps must be nonnegative")
    out = c
    for k in range(steps):
        out = refine(family.mask_at_level(k), out)
    return out


def write_mask_csv(path, family: SchemeFamily, levels: int) -> None:
    """Dump masks for levels 0..levels-1 as ``k,index,tap`` rows."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("k,index,tap\n")
        for k in range(levels):
            mask = family.mask_at_level(k)
            for i, t in zip(mask.taps.indices(), mask.taps.coeffs):
                fh.write(f"{k},{int(i)},{float(t)!r}\n")
