"""Ramification filtrations of finite Galois extensions of local fields.

Profiles store lower-numbering data only: the integer breaks u at which the
ramification groups Gamma_u drop, and the group orders.  The Hasse-Herbrand
functions and everything in upper numbering are derived.
"""
from fractions import Fraction
from functools import lru_cache, reduce, singledispatch
from math import gcd, isqrt
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import isprime

from depthkit.errors import InvalidParameterError, InvalidProfileError, NotAbelianError, InvalidFunctionError
from depthkit.exactnum import PiecewiseLinearFn, plf_compose, plf_eval, plf_invert


class FiltrationStep(BaseModel):
    """|Gamma_v| = order for every v in (previous break, lower_break]"""
    model_config = ConfigDict(frozen=True)

    lower_break: int = Field(..., ge=0)
    order: int = Field(..., ge=2)

    def to_json_dict(self) -> Dict[str, int]:
        return {"break": self.lower_break, "order": self.order}


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _implied_abelian(order: int) -> bool:
    """Groups of order 1, q or q^2 (q prime) are abelian"""
    if order == 1 or isprime(order):
        return True
    root = isqrt(order)
    return root * root == order and isprime(root)


class RamificationProfile(BaseModel):
    """Lower-numbering ramification data of a finite Galois extension E/F.

    ``p`` may be None for unramified and tame profiles, whose filtration does
    not depend on the residue characteristic beyond gcd(e, p) = 1.
    """
    model_config = ConfigDict(frozen=True)

    p: Optional[int] = None
    e: int = Field(1, ge=1)
    f: int = Field(1, ge=1)
    filtration: Tuple[FiltrationStep, ...] = ()
    abelian: bool = False

    @field_validator("p")
    @classmethod
    def validate_prime(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and not isprime(v):
            raise InvalidProfileError(f"Residue characteristic must be prime, got {v}")
        return v

    @field_validator("filtration", mode="before")
    @classmethod
    def coerce_steps(cls, v: Any) -> Tuple[Any, ...]:
        steps = []
        for step in v:
            if isinstance(step, FiltrationStep):
                steps.append(step)
            elif isinstance(step, dict):
                steps.append(FiltrationStep(
                    lower_break=step.get("break", step.get("lower_break")),
                    order=step["order"],
                ))
            else:
                u, g = step
                steps.append(FiltrationStep(lower_break=u, order=g))
        return tuple(steps)

    @model_validator(mode="after")
    def validate_filtration(self) -> "RamificationProfile":
        steps = self.filtration
        if self.e == 1:
            if steps:
                raise InvalidProfileError("Unramified profile (e = 1) cannot have ramification steps")
            return self
        if not steps:
            raise InvalidProfileError(f"Ramified profile (e = {self.e}) needs at least one step")
        if steps[0].order != self.e:
            raise InvalidProfileError(f"|Gamma_0| = {steps[0].order} must equal e = {self.e}")
        for prev, step in zip(steps, steps[1:]):
            if step.lower_break <= prev.lower_break:
                raise InvalidProfileError(f"Breaks must strictly increase, got {prev.lower_break} then {step.lower_break}")
            if step.order >= prev.order:
                raise InvalidProfileError(f"Orders must strictly decrease, got {prev.order} then {step.order}")
            if prev.order % step.order:
                raise InvalidProfileError(f"Order {step.order} does not divide {prev.order}")

        wild = self.wild_order
        if wild > 1:
            if self.p is None:
                raise InvalidProfileError("A wildly ramified profile needs its residue characteristic p")
            for step in steps:
                if step.lower_break >= 1 and not _is_power_of(step.order, self.p):
                    raise InvalidProfileError(
                        f"|Gamma_{step.lower_break}| = {step.order} must be a power of p = {self.p}"
                    )
        if self.p is not None and gcd(self.e // wild, self.p) != 1:
            raise InvalidProfileError(
                f"Tame quotient Gamma_0/Gamma_1 of order {self.e // wild} must be prime to p = {self.p}"
            )
        return self

    @property
    def inertia_order(self) -> int:
        return self.e

    @property
    def residue_degree(self) -> int:
        return self.f

    @property
    def degree(self) -> int:
        return self.e * self.f

    @property
    def wild_order(self) -> int:
        """|Gamma_1|"""
        return self.order_at(1)

    @property
    def positive_breaks(self) -> Tuple[int, ...]:
        return tuple(s.lower_break for s in self.filtration if s.lower_break > 0)

    def order_at(self, u: Union[int, Fraction]) -> int:
        """|Gamma_u| for real u >= 0 (lower numbering is right-continuous at integers)"""
        for step in self.filtration:
            if u <= step.lower_break:
                return step.order
        return 1

    def order_above(self, u: Union[int, Fraction]) -> int:
        """|Gamma_{u+eps}| for small eps > 0"""
        for step in self.filtration:
            if u < step.lower_break:
                return step.order
        return 1

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "e": self.e,
            "f": self.f,
            "abelian": self.abelian,
            "filtration": [step.to_json_dict() for step in self.filtration],
        }

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "RamificationProfile":
        return cls(
            p=data.get("p"),
            e=data.get("e", 1),
            f=data.get("f", 1),
            filtration=data.get("filtration", []),
            abelian=data.get("abelian", False),
        )


class ExtensionTower(BaseModel):
    """A tower F = K_0 < K_1 < ... < K_n, given base first by the profiles of K_{i+1}/K_i"""
    model_config = ConfigDict(frozen=True)

    terms: Tuple[RamificationProfile, ...]

    @model_validator(mode="after")
    def validate_terms(self) -> "ExtensionTower":
        if not self.terms:
            raise InvalidProfileError("A tower needs at least one extension")
        chars = {t.p for t in self.terms if t.p is not None}
        if len(chars) > 1:
            raise InvalidProfileError(f"Residue characteristics disagree across the tower: {sorted(chars)}")
        return self

    @property
    def p(self) -> Optional[int]:
        return next((t.p for t in self.terms if t.p is not None), None)

    @property
    def e(self) -> int:
        return reduce(lambda a, b: a * b, (t.e for t in self.terms), 1)

    @property
    def f(self) -> int:
        return reduce(lambda a, b: a * b, (t.f for t in self.terms), 1)

    @property
    def inertia_order(self) -> int:
        return self.e

    @property
    def degree(self) -> int:
        return self.e * self.f

    @property
    def psi(self) -> PiecewiseLinearFn:
        """Composite psi, base first"""
        return build_psi(self)

    @property
    def phi(self) -> PiecewiseLinearFn:
        return build_phi(self)

    @property
    def upper_jumps(self) -> List[Fraction]:
        return upper_jumps(self)

    @property
    def largest_upper_jump(self) -> Fraction:
        return largest_upper_jump(self)

    @property
    def is_tame(self) -> bool:
        return is_tame(self)

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "e": self.e,
            "f": self.f,
            "terms": [t.to_json_dict() for t in self.terms],
        }


Extension = Union[RamificationProfile, ExtensionTower]


@lru_cache(maxsize=512)
def _lower_phi(profile: RamificationProfile) -> PiecewiseLinearFn:
    # phi(u) = integral_0^u dt / (Gamma_0 : Gamma_t)
    xs = [0, *profile.positive_breaks]
    slopes = [Fraction(profile.order_above(x), profile.e) for x in xs]
    return PiecewiseLinearFn.from_slopes(xs, slopes)


@singledispatch
def build_psi(extension: Any) -> PiecewiseLinearFn:
    """psi_{E/F}(x) = integral_0^x (Gamma^0 : Gamma^w) dw"""
    raise TypeError(f"Not an extension: {type(extension).__name__}")


@build_psi.register
def _(profile: RamificationProfile) -> PiecewiseLinearFn:
    return plf_invert(_lower_phi(profile))


@build_psi.register
def _(tower: ExtensionTower) -> PiecewiseLinearFn:
    return _tower_psi(tower)


@lru_cache(maxsize=256)
def _tower_psi(tower: ExtensionTower) -> PiecewiseLinearFn:
    psi = build_psi(tower.terms[0])
    for term in tower.terms[1:]:
        psi = compose_tower_psi(psi, build_psi(term))
    return psi


def build_phi(extension: Extension) -> PiecewiseLinearFn:
    """phi_{E/F}, the inverse of psi_{E/F}"""
    return plf_invert(build_psi(extension))


@singledispatch
def upper_jumps(extension: Any) -> List[Fraction]:
    """Upper-numbering jumps, ascending; 0 is a jump whenever inertia is nontrivial"""
    raise TypeError(f"Not an extension: {type(extension).__name__}")


@upper_jumps.register
def _(profile: RamificationProfile) -> List[Fraction]:
    phi = build_phi(profile)
    jumps = {plf_eval(phi, u) for u in profile.positive_breaks}
    if profile.e > 1:
        jumps.add(Fraction(0))
    return sorted(jumps)


@upper_jumps.register
def _(tower: ExtensionTower) -> List[Fraction]:
    # slope changes of psi sit exactly at the positive upper jumps
    jumps = set(build_psi(tower).xs[1:])
    if tower.e > 1:
        jumps.add(Fraction(0))
    return sorted(jumps)


def largest_upper_jump(extension: Extension) -> Fraction:
    """j, the largest upper jump (0 for unramified and tame extensions)"""
    jumps = upper_jumps(extension)
    return jumps[-1] if jumps else Fraction(0)


def is_tame(extension: Extension) -> bool:
    return largest_upper_jump(extension) == 0


def hasse_arf_check(profile: RamificationProfile) -> bool:
    """Upper jumps of an abelian extension are integers"""
    if not profile.abelian:
        raise NotAbelianError("Hasse-Arf applies to abelian extensions only (abelian flag is false)")
    return all(j.denominator == 1 for j in upper_jumps(profile))


def is_psi_shaped(fn: PiecewiseLinearFn) -> bool:
    return fn.is_convex() and all(s.denominator == 1 for s in fn.slopes)


def compose_tower_psi(lower: PiecewiseLinearFn, upper: PiecewiseLinearFn) -> PiecewiseLinearFn:
    """psi_{L/F} = psi_{L/E} o psi_{E/F} for a tower F < E < L"""
    for name, fn in (("lower", lower), ("upper", upper)):
        if not is_psi_shaped(fn):
            raise InvalidFunctionError(f"The {name} function is not a Herbrand psi (convex with integer slopes)")
    return plf_compose(upper, lower)


# Catalog

def unramified(f: int, p: Optional[int] = None) -> RamificationProfile:
    if f < 1:
        raise InvalidParameterError(f"f must be >= 1, got {f}")
    return RamificationProfile(p=p, e=1, f=f, abelian=True)


def tame(e: int, p: Optional[int] = None, f: int = 1) -> RamificationProfile:
    if e < 1:
        raise InvalidParameterError(f"e must be >= 1, got {e}")
    if f < 1:
        raise InvalidParameterError(f"f must be >= 1, got {f}")
    if p is not None and gcd(e, p) != 1:
        raise InvalidParameterError(f"gcd(e, p) must be 1 (e = {e}, p = {p})")
    steps = [(0, e)] if e > 1 else []
    return RamificationProfile(p=p, e=e, f=f, filtration=steps, abelian=True)


def artin_schreier(p: int, m: int) -> RamificationProfile:
    """Degree-p wild extension with a single lower break at m"""
    _require_prime(p)
    if m < 1:
        raise InvalidParameterError(f"m must be >= 1, got {m}")
    if gcd(m, p) != 1:
        raise InvalidParameterError(f"gcd(m, p) must be 1 (m = {m}, p = {p})")
    return RamificationProfile(p=p, e=p, f=1, filtration=[(m, p)], abelian=True)


def cyclotomic(p: int, n: int) -> RamificationProfile:
    """Q_p(zeta_{p^n}) / Q_p: |Gamma_u| = p^(n-k) for p^(k-1) <= u <= p^k - 1"""
    _require_prime(p)
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    e = p ** (n - 1) * (p - 1)
    raw = [(0, e)] + [(p ** k - 1, p ** (n - k)) for k in range(1, n)]
    return RamificationProfile(p=p, e=e, f=1, filtration=_merge_steps([s for s in raw if s[1] > 1]), abelian=True)


def from_breaks(
    p: Optional[int],
    e: int,
    f: int,
    breaks: Sequence[Tuple[int, int]],
    abelian: Optional[bool] = None,
) -> RamificationProfile:
    """Profile from sample pairs (u, g): |Gamma_v| = g for u <= v < next u.

    The last pair holds at its own u only; a trailing order 1 is optional.
    When ``abelian`` is omitted it is inferred only for group orders where
    every group is abelian.
    """
    if e < 1:
        raise InvalidParameterError(f"e must be >= 1, got {e}")
    if f < 1:
        raise InvalidParameterError(f"f must be >= 1, got {f}")
    pairs = [(int(u), int(g)) for u, g in breaks]
    for u, g in pairs:
        if u < 0:
            raise InvalidParameterError(f"break indices must be >= 0, got u = {u}")
        if g < 1:
            raise InvalidParameterError(f"group orders must be >= 1, got {g} at u = {u}")
    if abelian is None:
        abelian = _implied_abelian(e * f)
    if e == 1 and all(g == 1 for _, g in pairs):
        return RamificationProfile(p=p, e=1, f=f, abelian=abelian)
    if not pairs:
        raise InvalidParameterError(f"breaks must describe Gamma_0 of order e = {e}")
    if pairs[0][0] != 0:
        raise InvalidParameterError(f"breaks must start at u = 0, got u = {pairs[0][0]}")
    if pairs[0][1] != e:
        raise InvalidParameterError(f"|Gamma_0| must equal e = {e}, got {pairs[0][1]}")

    raw: List[Tuple[int, int]] = []
    for (u, g), (u_next, _) in zip(pairs, pairs[1:]):
        if u_next <= u:
            raise InvalidParameterError(f"break indices must strictly increase, got {u} then {u_next}")
        raw.append((u_next - 1, g))
    raw.append(pairs[-1])

    tail = [g for _, g in raw]
    if any(g == 1 for g in tail) and any(g > 1 for g in tail[tail.index(1):]):
        raise InvalidParameterError("order 1 may only appear as the trailing entry")
    try:
        return RamificationProfile(
            p=p, e=e, f=f, filtration=_merge_steps([s for s in raw if s[1] > 1]), abelian=abelian
        )
    except InvalidProfileError as err:
        raise InvalidParameterError(str(err)) from err


def _merge_steps(raw: Iterable[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Collapse consecutive equal orders into one step ending at the last break"""
    merged: List[Tuple[int, int]] = []
    for u, g in raw:
        if merged and merged[-1][1] == g:
            merged[-1] = (u, g)
        else:
            merged.append((u, g))
    return merged


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise InvalidParameterError(f"p must be prime, got {p}")


CATALOG_FAMILIES = {
    "unramified": unramified,
    "unram": unramified,
    "tame": tame,
    "artin_schreier": artin_schreier,
    "as": artin_schreier,
    "cyclotomic": cyclotomic,
    "cyclo": cyclotomic,
    "from_breaks": from_breaks,
    "breaks": from_breaks,
}


def catalog(name: str, **params: Any) -> RamificationProfile:
    """Standard extension by family name, e.g. catalog("artin_schreier", p=2, m=3)"""
    try:
        family = CATALOG_FAMILIES[name]
    except KeyError:
        raise InvalidParameterError(
            f"Unknown family {name!r}. Must be one of: {', '.join(sorted(CATALOG_FAMILIES))}"
        ) from None
    try:
        return family(**params)
    except TypeError as e:
        raise InvalidParameterError(f"Bad parameters for {name}: {e}") from e
    except InvalidProfileError as e:
        raise InvalidParameterError(str(e)) from e


def standard_profiles() -> Iterator[Tuple[str, RamificationProfile]]:
    """The fixed battery of catalog profiles used by the Herbrand and depth suites"""
    for f in range(1, 5):
        yield f"unram({f})", unramified(f)
    for e in range(2, 8):
        yield f"tame({e})", tame(e)
    for p in (2, 3, 5):
        for m in range(1, 8):
            if gcd(m, p) == 1:
                yield f"as(p={p}, m={m})", artin_schreier(p, m)
    for p in (2, 3):
        for n in range(1, 4):
            yield f"cyclo(p={p}, n={n})", cyclotomic(p, n)

