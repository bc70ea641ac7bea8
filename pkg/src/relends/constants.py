"""Constants ledger: every named constant with formula and provenance.

Certified mode computes the full chain exactly from (delta_X, epsilon, eta,
n0, diam_core) with Fractions; no floats anywhere.  Empirical mode takes the
three radii that drive the algorithm directly from the user and tags them
so, keeping the formula-derived fields for reference.

The certified radii are astronomically large for any honest delta (R0 is
tens of thousands even for delta_X = 1), so real runs use empirical mode;
certified mode exists to pin the arithmetic down and to document exactly
which formula produced which field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping

Rational = Fraction | int | str

# provenance tags
FORMULA = "formula"
ESTIMATED = "estimated"
DEFAULT = "default"
USER = "user"
OVERRIDE = "override"


@dataclass(frozen=True)
class Estimates:
    """Empirical hyperbolicity/quasi-convexity estimates from a Cayley ball."""

    delta_x: Fraction
    epsilon: Fraction
    method: str = "exhaustive"


@dataclass(frozen=True)
class ConstantsLedger:
    """All named constants, with per-field provenance.

    geodesic_extension_adjusted selects the constant that certifies the
    geodesic extension property of the quotient: when true, mu is the
    derived 4*delta_XH + delta_X; when false the quotient is asserted to
    extend geodesics with delta_XH itself and mu = delta_XH.  The flag
    never feeds back into delta_XH, M or R0: the golden arithmetic pins
    those to the unreplaced value.
    """

    delta_x: Fraction
    epsilon: Fraction
    eta: Fraction
    tau: Fraction
    n0: int
    alpha: Fraction
    diam_core: Fraction
    rho: Fraction
    delta_xh: Fraction
    mu: Fraction
    m: int
    r0: int
    inner_offset: Fraction
    outer_radius: int | None
    mode: str  # certified | empirical
    geodesic_extension_adjusted: bool
    provenance: Mapping[str, str]

    def __post_init__(self):
        if self.mode not in ("certified", "empirical"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def with_overrides(self, **fields) -> "ConstantsLedger":
        """Replace fields verbatim, tagging each as an override.

        No recomputation happens: an override is the caller taking
        responsibility for the value.
        """
        prov = dict(self.provenance)
        for name in fields:
            if name not in prov:
                raise ValueError(f"not an overridable field: {name}")
            prov[name] = OVERRIDE
        return replace(self, provenance=prov, **fields)

    def to_json_dict(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v) if v.denominator != 1 else str(v.numerator)
            return v

        return {
            "delta_x": enc(self.delta_x),
            "epsilon": enc(self.epsilon),
            "eta": enc(self.eta),
            "tau": enc(self.tau),
            "n0": self.n0,
            "alpha": enc(self.alpha),
            "diam_core": enc(self.diam_core),
            "rho": enc(self.rho),
            "delta_xh": enc(self.delta_xh),
            "mu": enc(self.mu),
            "m": self.m,
            "r0": self.r0,
            "inner_offset": enc(self.inner_offset),
            "outer_radius": self.outer_radius,
            "mode": self.mode,
            "geodesic_extension_adjusted": self.geodesic_extension_adjusted,
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ConstantsLedger":
        def dec(v):
            return Fraction(v)

        return cls(
            delta_x=dec(d["delta_x"]),
            epsilon=dec(d["epsilon"]),
            eta=dec(d["eta"]),
            tau=dec(d["tau"]),
            n0=int(d["n0"]),
            alpha=dec(d["alpha"]),
            diam_core=dec(d["diam_core"]),
            rho=dec(d["rho"]),
            delta_xh=dec(d["delta_xh"]),
            mu=dec(d["mu"]),
            m=int(d["m"]),
            r0=int(d["r0"]),
            inner_offset=dec(d["inner_offset"]),
            outer_radius=None if d["outer_radius"] is None else int(d["outer_radius"]),
            mode=d["mode"],
            geodesic_extension_adjusted=bool(d["geodesic_extension_adjusted"]),
            provenance=dict(d["provenance"]),
        )


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def derive_certified(
    delta_x: Rational,
    epsilon: Rational,
    eta: Rational | None,
    n0: int,
    diam_core: Rational,
    n_generators: int | None = None,
    geodesic_extension_adjusted: bool = True,
) -> ConstantsLedger:
    """Full certified chain, exact.

    tau = 12 delta_x + 2 epsilon + 2 eta
    alpha = (132 + 100 n0) delta_x
    rho = diam_core + alpha + delta_x
    delta_xh = 2 (diam_core + alpha + epsilon) + 65 delta_x
    M = smallest integer >= 43 delta_xh + 4,  R0 = ceil(M + delta_xh)
    inner_offset = 3 delta_xh
    outer_radius = R0 + ceil(10 delta_x (2 n_generators)^R0), which needs
    the generator count; left None (tagged) when it is not supplied.
    """
    dx = Fraction(delta_x)
    eps = Fraction(epsilon)
    prov: dict[str, str] = {}
    if eta is None:
        et = dx
        prov["eta"] = DEFAULT
    else:
        et = Fraction(eta)
        prov["eta"] = USER
    if dx < 0 or eps < 0 or et < 0:
        raise ValueError("delta_x, epsilon, eta must be nonnegative")
    if n0 < 1:
        raise ValueError("n0 must be a positive integer")
    dc = Fraction(diam_core)
    if dc < 0:
        raise ValueError("diam_core must be nonnegative")

    tau = 12 * dx + 2 * eps + 2 * et
    alpha = (132 + 100 * n0) * dx
    rho = dc + alpha + dx
    delta_xh = 2 * (dc + alpha + eps) + 65 * dx
    mu = (4 * delta_xh + dx) if geodesic_extension_adjusted else delta_xh
    m = _ceil(43 * delta_xh + 4)
    r0 = _ceil(m + delta_xh)
    inner_offset = 3 * delta_xh
    if n_generators is not None:
        if n_generators < 1:
            raise ValueError("n_generators must be positive")
        outer_radius = r0 + _ceil(10 * dx * Fraction(2 * n_generators) ** r0)
        prov["outer_radius"] = FORMULA
    else:
        outer_radius = None
        prov["outer_radius"] = "unavailable (generator count not supplied)"

    prov.update(
        delta_x=USER,
        epsilon=USER,
        n0=USER,
        diam_core=USER,
        tau=FORMULA,
        alpha=FORMULA,
        rho=FORMULA,
        delta_xh=FORMULA,
        mu=FORMULA,
        m=FORMULA,
        r0=FORMULA,
        inner_offset=FORMULA,
    )
    return ConstantsLedger(
        delta_x=dx,
        epsilon=eps,
        eta=et,
        tau=tau,
        n0=n0,
        alpha=alpha,
        diam_core=dc,
        rho=rho,
        delta_xh=delta_xh,
        mu=mu,
        m=m,
        r0=r0,
        inner_offset=inner_offset,
        outer_radius=outer_radius,
        mode="certified",
        geodesic_extension_adjusted=geodesic_extension_adjusted,
        provenance=prov,
    )


def empirical_ledger(
    r0: int,
    inner_offset: Rational,
    outer_radius: int,
    estimates: Estimates | None = None,
    m: int | None = None,
    eta: Rational | None = None,
    n0: int = 1,
    diam_core: Rational = 0,
    geodesic_extension_adjusted: bool = True,
) -> ConstantsLedger:
    """Ledger whose three working radii come straight from the user.

    The derived chain is still computed (from the estimates when given,
    from zeros otherwise) so reports show the formula values next to the
    radii actually used.
    """
    inner = Fraction(inner_offset)
    if not (0 < inner and 0 < r0 < outer_radius):
        raise ValueError(
            f"need inner_offset > 0 and 0 < R0 < outer_radius, "
            f"got inner_offset={inner}, R0={r0}, outer_radius={outer_radius}"
        )
    dx = estimates.delta_x if estimates else Fraction(0)
    eps = estimates.epsilon if estimates else Fraction(0)
    est_tag = ESTIMATED if estimates else DEFAULT
    prov: dict[str, str] = {"delta_x": est_tag, "epsilon": est_tag}
    if eta is None:
        et = dx
        prov["eta"] = DEFAULT
    else:
        et = Fraction(eta)
        prov["eta"] = USER
    dc = Fraction(diam_core)
    tau = 12 * dx + 2 * eps + 2 * et
    alpha = (132 + 100 * n0) * dx
    rho = dc + alpha + dx
    delta_xh = 2 * (dc + alpha + eps) + 65 * dx
    mu = (4 * delta_xh + dx) if geodesic_extension_adjusted else delta_xh
    if m is None:
        m = r0
        prov["m"] = DEFAULT
    else:
        prov["m"] = USER
    prov.update(
        n0=USER if n0 != 1 else DEFAULT,
        diam_core=USER if dc != 0 else DEFAULT,
        tau=FORMULA,
        alpha=FORMULA,
        rho=FORMULA,
        delta_xh=FORMULA,
        mu=FORMULA,
        r0=USER,
        inner_offset=USER,
        outer_radius=USER,
    )
    return ConstantsLedger(
        delta_x=dx,
        epsilon=eps,
        eta=et,
        tau=tau,
        n0=n0,
        alpha=alpha,
        diam_core=dc,
        rho=rho,
        delta_xh=delta_xh,
        mu=mu,
        m=m,
        r0=r0,
        inner_offset=inner,
        outer_radius=outer_radius,
        mode="empirical",
        geodesic_extension_adjusted=geodesic_extension_adjusted,
        provenance=prov,
    )


def annulus_inner_radius(ledger: ConstantsLedger) -> int:
    """Radius of the excluded inner ball for the class partition.

    The annulus keeps {inner_radius < dist <= outer_radius} with
    inner_radius = floor(R0 - inner_offset): the cut ball is closed, so a
    tree branch point at distance exactly R0 - inner_offset separates the
    sphere vertices hanging under it into distinct classes.  An offset
    deeper than R0 clamps to zero: the smallest cut that still counts
    anything is the base point alone.
    """
    gap = ledger.r0 - ledger.inner_offset
    return max(gap.numerator // gap.denominator, 0)


def exhaustive_outer_radius(ledger: ConstantsLedger) -> int | None:
    """Certified annulus reach; None when the ledger cannot know it."""
    return ledger.outer_radius
