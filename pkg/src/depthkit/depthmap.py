"""Depth and conductor transformation laws.

Each operation takes an extension E/F (a ``RamificationProfile`` or an
``ExtensionTower``) and exact rational depths.  Representation-theoretic
input the formulas depend on, such as the depth-change factor kappa of the
base correspondence or the essentially square-integrable hypothesis, is
always supplied by the caller.
"""
from fractions import Fraction
from typing import Any, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from depthkit.errors import DegreeError, InvalidParameterError, NonIntegralConductorError, TameProfileError
from depthkit.exactnum import RationalLike, format_rational, plf_eval, to_rational
from depthkit.ramification import (
    Extension,
    build_phi,
    build_psi,
    is_tame,
    largest_upper_jump,
)


def _depth(d: RationalLike, name: str = "depth") -> Fraction:
    d = to_rational(d)
    if d < 0:
        raise InvalidParameterError(f"{name} must be >= 0, got {format_rational(d)}")
    return d


class DepthQuery(BaseModel):
    """dep(pi), kappa_pi and the extension E/F for the Weil-restriction depth formula"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    depth: Fraction
    profile: Extension
    kappa: Fraction = Fraction(1)

    @field_validator("depth", "kappa", mode="before")
    @classmethod
    def coerce_rational(cls, v: Any) -> Fraction:
        return to_rational(v)

    @model_validator(mode="after")
    def check_ranges(self) -> "DepthQuery":
        if self.depth < 0:
            raise InvalidParameterError(f"depth must be >= 0, got {format_rational(self.depth)}")
        if self.kappa <= 0:
            raise InvalidParameterError(f"kappa must be > 0, got {format_rational(self.kappa)}")
        return self


class GLnData(BaseModel):
    """Rank, conductor, Swan exponent and depth of a representation of GL_n"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=1)
    conductor: int
    swan: Fraction
    depth: Fraction
    square_integrable: bool = True

    @model_validator(mode="after")
    def check_swan(self) -> "GLnData":
        if self.swan != Fraction(self.conductor - self.n, self.n):
            raise InvalidParameterError(
                f"Swan exponent {format_rational(self.swan)} != (f - n)/n for f = {self.conductor}, n = {self.n}"
            )
        if self.square_integrable and self.n >= 2 and self.conductor != self.n * self.depth + self.n:
            raise InvalidParameterError(
                f"Conductor {self.conductor} != n*depth + n for an essentially square-integrable representation"
            )
        return self

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "conductor": self.conductor,
            "swan": format_rational(self.swan),
            "depth": format_rational(self.depth),
        }


# Weil restriction, Shapiro, LLC

def depth_weil_restriction(d: RationalLike, profile: Extension) -> Fraction:
    """dep(iota^* pi) = e * dep(pi)"""
    return profile.e * _depth(d)


def depth_shapiro(d: RationalLike, profile: Extension) -> Fraction:
    """dep(Sh(phi)) = psi_{E/F}(dep(phi))"""
    return plf_eval(build_psi(profile), _depth(d))


def depth_zero_equivalence(d: RationalLike, profile: Extension) -> bool:
    """phi has depth 0 exactly when Sh(phi) has depth 0"""
    d = _depth(d)
    return (d == 0) == (depth_shapiro(d, profile) == 0)


def depth_llc(query: DepthQuery) -> Fraction:
    """dep(lambda_M(pi)) = phi_{E/F}(kappa * e * dep(pi))"""
    return plf_eval(build_phi(query.profile), query.kappa * query.profile.e * query.depth)


def llc_depth(d: RationalLike, profile: Extension, kappa: RationalLike = 1) -> Fraction:
    return depth_llc(DepthQuery(depth=d, profile=profile, kappa=kappa))


def is_depth_preserving(profile: Extension) -> Tuple[bool, Optional[Fraction]]:
    """lambda_M preserves depth iff E/F is tame; otherwise the largest upper jump is a witness"""
    if is_tame(profile):
        return True, None
    return False, largest_upper_jump(profile)


def depth_ratio_constant(profile: Extension) -> Fraction:
    """c with dep(lambda_M(pi)) = dep(pi) + c once e * dep(pi) is past psi(j)"""
    j = largest_upper_jump(profile)
    return j - plf_eval(build_psi(profile), j) / profile.e


def ratio_threshold(profile: Extension) -> Fraction:
    """Smallest depth from which depth_llc(d) = d + depth_ratio_constant"""
    j = largest_upper_jump(profile)
    return plf_eval(build_psi(profile), j) / profile.e


def depth_ratio(profile: Extension, d: RationalLike) -> Fraction:
    """dep(lambda_M(pi)) / dep(pi); tends to 1 as the depth grows"""
    d = _depth(d)
    if d == 0:
        raise InvalidParameterError("depth ratio needs a positive depth")
    return llc_depth(d, profile) / d


def wild_strict_increase_check(profile: Extension, d: RationalLike) -> bool:
    """phi(e * d) > d for a wildly ramified extension and d > 0"""
    if is_tame(profile):
        raise TameProfileError("Strict depth increase only holds for wildly ramified extensions")
    d = _depth(d)
    if d == 0:
        raise InvalidParameterError("strict increase is asserted for positive depths only")
    return llc_depth(d, profile) > d


# GL_n conductors, automorphic induction, Asai

def swan_from_conductor(n: int, conductor: int) -> Fraction:
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    return Fraction(conductor - n, n)


def gln_data(n: int, conductor: int, square_integrable: bool = True) -> GLnData:
    """GLnData from a conductor; the depth is the Swan exponent"""
    swan = swan_from_conductor(n, conductor)
    if swan < 0:
        raise InvalidParameterError(f"conductor {conductor} is below the rank {n}")
    return GLnData(n=n, conductor=conductor, swan=swan, depth=swan, square_integrable=square_integrable)


def conductor_from_depth(n: int, d: RationalLike) -> GLnData:
    """f(pi) = n * dep(pi) + n for essentially square-integrable pi, n >= 2"""
    if n < 2:
        raise InvalidParameterError(f"n must be >= 2, got {n}")
    d = _depth(d)
    f = n * d + n
    if f.denominator != 1:
        raise NonIntegralConductorError(
            f"n * depth = {format_rational(n * d)} is not an integer, so no conductor exists"
        )
    conductor = int(f)
    return GLnData(n=n, conductor=conductor, swan=swan_from_conductor(n, conductor), depth=d)


def automorphic_induction_depth(profile: Extension, d_e: RationalLike) -> Fraction:
    """dep(pi~) = phi_{E/F}(dep(pi_E))"""
    return plf_eval(build_phi(profile), _depth(d_e))


def automorphic_induction(n: int, profile: Extension, d_e: RationalLike) -> GLnData:
    """GL_{n[E:F]} data of the automorphic induction of a GL_n(E) representation"""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    rank = n * profile.degree
    if rank < 2:
        raise InvalidParameterError("the conductor formula needs n * [E:F] >= 2")
    return conductor_from_depth(rank, automorphic_induction_depth(profile, d_e))


def _require_quadratic(profile: Extension) -> None:
    if profile.degree != 2:
        raise DegreeError(f"The Asai lift needs [E:F] = 2, got e*f = {profile.degree}")


def asai_depth(profile: Extension, d_e: RationalLike) -> Fraction:
    """dep(As(pi_E)) = phi_{E/F}(dep(pi_E)) for quadratic E/F"""
    _require_quadratic(profile)
    return plf_eval(build_phi(profile), _depth(d_e))


def asai_swan(n: int, profile: Extension, swan_e: RationalLike) -> Fraction:
    """Swan exponent of As(pi_E) = phi_{E/F}(swan(pi_E)), n >= 2"""
    if n < 2:
        raise InvalidParameterError(f"n must be >= 2, got {n}")
    _require_quadratic(profile)
    return plf_eval(build_phi(profile), _depth(swan_e, "swan exponent"))


def asai_lift(n: int, profile: Extension, d_e: RationalLike) -> GLnData:
    """GL_{n^2}(F) data of the Asai lift; its Swan exponent equals its depth"""
    if n < 2:
        raise InvalidParameterError(f"n must be >= 2, got {n}")
    return conductor_from_depth(n * n, asai_depth(profile, d_e))
