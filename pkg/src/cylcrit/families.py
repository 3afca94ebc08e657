"""Parameter records for the energy families, the maps between them, and curvature Lagrangians.

Every curvature energy here has the form ``int P(kappa) ds``; the Lagrangian
variants carry ``P`` together with its first two kappa-derivatives.
"""

from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np

from .errors import (
    AlphaExcluded,
    DomainViolation,
    ExpRequiresNonzeroVarpi,
    ParameterError,
    ParamsExcluded,
)


def _is_integer(p):
    return float(p).is_integer()


@dataclass(frozen=True)
class ElasticParams:
    p: float
    mu: float = 0.0
    sigma: float = 0.0

    @property
    def kind(self):
        return Power(self.p, self.mu, self.sigma)


@dataclass(frozen=True)
class WillmoreParams:
    n: int
    p: float
    mu: float = 0.0
    varsigma: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError("n must be a positive integer")


@dataclass(frozen=True)
class SingularParams:
    alpha: float
    varpi: float = 0.0

    def __post_init__(self):
        if self.alpha == 0:
            raise ParamsExcluded("alpha = 0 gives constant mean curvature; excluded")


@dataclass(frozen=True)
class StationaryParams:
    eta: Optional[float]
    m: float
    lam: float = 0.0

    def __post_init__(self):
        if self.m == 0:
            raise ParamsExcluded("m = 0 gives constant mean curvature; excluded")
        if self.eta is not None and self.eta == 0:
            raise ParamsExcluded("eta = 0 gives constant mean curvature; excluded")

    @property
    def eta_fixed(self):
        return self.eta is not None

    def require_eta(self):
        if self.eta is None:
            raise ParameterError("eta is unfixed; estimate it with residuals.fit_eta first")
        return self.eta


# ----------------------------------------------------------------------------
# Lagrangians P(kappa)
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Power:
    """``P = (kappa - mu)**p + sigma``."""

    p: float
    mu: float = 0.0
    sigma: float = 0.0

    def check_domain(self, kappa):
        t = np.asarray(kappa, dtype=float) - self.mu
        if _is_integer(self.p):
            if self.p < 1 and np.any(t == 0):
                raise DomainViolation("kappa = mu where a negative power is evaluated")
        elif np.any(t <= 0):
            raise DomainViolation("non-integer power needs kappa > mu")
        return t

    def eval(self, kappa):
        t = self.check_domain(kappa)
        p = self.p
        if p == 0:
            zero = np.zeros_like(t)
            return 1.0 + self.sigma + zero, zero, zero
        pdot = p * t ** (p - 1)
        pddot = p * (p - 1) * t ** (p - 2) if p != 1 else np.zeros_like(t)
        return t**p + self.sigma, pdot, pddot

    def with_sigma(self, sigma):
        return Power(self.p, self.mu, sigma)


@dataclass(frozen=True)
class Exp:
    """``P = exp(mu * kappa)``; the alpha = -1 weighted-area case."""

    mu: float

    sigma = 0.0

    def check_domain(self, kappa):
        return np.asarray(kappa, dtype=float)

    def eval(self, kappa):
        k = self.check_domain(kappa)
        e = np.exp(self.mu * k)
        return e, self.mu * e, self.mu * self.mu * e


@dataclass(frozen=True)
class Log:
    """``P = log(kappa - lam) + sigma``; the m = -1 vertical-potential case."""

    lam: float = 0.0
    sigma: float = 0.0

    def check_domain(self, kappa):
        t = np.asarray(kappa, dtype=float) - self.lam
        if np.any(t <= 0):
            raise DomainViolation("log Lagrangian needs kappa > lambda")
        return t

    def eval(self, kappa):
        t = self.check_domain(kappa)
        return np.log(t) + self.sigma, 1.0 / t, -1.0 / (t * t)

    def with_sigma(self, sigma):
        return Log(self.lam, sigma)


LagrangianKind = Union[Power, Exp, Log]


def as_kind(obj):
    if isinstance(obj, ElasticParams):
        return obj.kind
    if isinstance(obj, (Power, Exp, Log)):
        return obj
    raise TypeError(f"not a Lagrangian: {obj!r}")


def lagrangian_eval(kind, kappa):
    """Return ``(P, dP/dkappa, d2P/dkappa2)``; scalars in, scalars out."""
    P, Pd, Pdd = as_kind(kind).eval(kappa)
    if np.ndim(kappa) == 0:
        return float(P), float(Pd), float(Pdd)
    return P, Pd, Pdd


# ----------------------------------------------------------------------------
# Parameter maps
# ----------------------------------------------------------------------------


def willmore_to_elastic(wp):
    return ElasticParams(p=wp.p, mu=wp.mu, sigma=float(wp.n) ** wp.p * wp.varsigma)


def singular_to_elastic(sp):
    """Weighted-area parameters to the free curvature Lagrangian of the generating curve."""
    if sp.alpha == 0:
        raise ParamsExcluded("alpha = 0 excluded")
    if sp.alpha == -1:
        if sp.varpi == 0:
            raise ExpRequiresNonzeroVarpi("alpha = -1 needs varpi != 0")
        return Exp(mu=1.0 / sp.varpi)
    a1 = sp.alpha + 1.0
    return ElasticParams(p=sp.alpha / a1, mu=sp.varpi / a1, sigma=0.0)


def elastic_to_singular(ep):
    """Inverse of ``singular_to_elastic`` on the Power branch (needs ``sigma = 0``, ``p != 1``)."""
    if ep.sigma != 0:
        raise ParameterError("only free (sigma = 0) elastic curves come from weighted areas")
    if ep.p == 1:
        raise ParameterError("p = 1 has no weighted-area preimage")
    alpha = ep.p / (1.0 - ep.p)
    return SingularParams(alpha=alpha, varpi=ep.mu * (alpha + 1.0))


def stationary_to_elastic(st, sigma):
    """Vertical-potential parameters to the curvature Lagrangian; ``sigma`` is free and caller-supplied."""
    if st.m == -1:
        return Log(lam=st.lam, sigma=float(sigma))
    return ElasticParams(p=(st.m + 1.0) / st.m, mu=st.lam, sigma=float(sigma))


def singular_to_stationary(sp):
    """``m = -alpha - 1``, ``lambda = varpi / (alpha + 1)``; eta stays unfixed."""
    if sp.alpha == -1:
        raise AlphaExcluded("alpha = -1 has no stationary counterpart (m would be 0)")
    return StationaryParams(eta=None, m=-sp.alpha - 1.0, lam=sp.varpi / (sp.alpha + 1.0))


def lagrangian_ode_residual(sp, kind, kappa):
    """``(alpha + 1) kappa P' - varpi P' - alpha P`` for the Lagrangian ``kind``."""
    P, Pd, _ = lagrangian_eval(kind, kappa)
    return (sp.alpha + 1.0) * kappa * Pd - sp.varpi * Pd - sp.alpha * P


# ----------------------------------------------------------------------------
# JSON records
# ----------------------------------------------------------------------------

_FAMILIES = {
    "elastic": ElasticParams,
    "willmore": WillmoreParams,
    "singular": SingularParams,
    "stationary": StationaryParams,
}


def params_to_record(obj):
    if isinstance(obj, ElasticParams):
        return {"family": "elastic", **asdict(obj)}
    if isinstance(obj, WillmoreParams):
        return {"family": "willmore", **asdict(obj)}
    if isinstance(obj, SingularParams):
        return {"family": "singular", **asdict(obj)}
    if isinstance(obj, StationaryParams):
        return {"family": "stationary", "eta": obj.eta, "m": obj.m, "lambda": obj.lam}
    if isinstance(obj, Power):
        return {"kind": "power", "p": obj.p, "mu": obj.mu, "sigma": obj.sigma}
    if isinstance(obj, Exp):
        return {"kind": "exp", "mu": obj.mu}
    if isinstance(obj, Log):
        return {"kind": "log", "lambda": obj.lam, "sigma": obj.sigma}
    raise TypeError(f"cannot serialize {obj!r}")


def params_from_record(rec):
    rec = dict(rec)
    if "kind" in rec:
        kind = rec.pop("kind")
        if kind == "power":
            return Power(float(rec["p"]), float(rec.get("mu", 0.0)), float(rec.get("sigma", 0.0)))
        if kind == "exp":
            return Exp(float(rec["mu"]))
        if kind == "log":
            return Log(float(rec.get("lambda", 0.0)), float(rec.get("sigma", 0.0)))
        raise ParameterError(f"unknown Lagrangian kind {kind!r}")
    family = rec.pop("family", None)
    if family not in _FAMILIES:
        raise ParameterError(f"unknown or missing family tag {family!r}")
    if family == "stationary":
        eta = rec.get("eta")
        return StationaryParams(
            eta=None if eta is None else float(eta),
            m=float(rec["m"]),
            lam=float(rec.get("lambda", rec.get("lam", 0.0))),
        )
    if family == "willmore":
        return WillmoreParams(
            n=int(rec["n"]), p=float(rec["p"]),
            mu=float(rec.get("mu", 0.0)), varsigma=float(rec.get("varsigma", 0.0)),
        )
    if family == "singular":
        return SingularParams(alpha=float(rec["alpha"]), varpi=float(rec.get("varpi", 0.0)))
    return ElasticParams(p=float(rec["p"]), mu=float(rec.get("mu", 0.0)), sigma=float(rec.get("sigma", 0.0)))


__all__ = [
    "ElasticParams", "WillmoreParams", "SingularParams", "StationaryParams",
    "Power", "Exp", "Log", "LagrangianKind", "as_kind", "lagrangian_eval",
    "willmore_to_elastic", "singular_to_elastic", "elastic_to_singular",
    "stationary_to_elastic", "singular_to_stationary", "lagrangian_ode_residual",
    "params_to_record", "params_from_record",
]
