"""Truncated Laurent series over F_p and explicit automorphisms of F_p((t)).

A ``TruncatedLaurentSeries`` is c_0 t^v + ... + c_{N-1} t^(v+N-1) + O(t^(v+N))
with c_i in F_p.  v + N is the absolute precision; N is the relative
precision.  Precision rules:

* add/sub: absolute precision is the minimum of the operands'.
* mul: relative precision is the minimum of the operands'.
* invert: relative precision is unchanged.
* compose f(g) with v(g) = 1: relative precision min(N_f, N_g).

Leading zeros are stripped on construction, so a nonzero series always has
c_0 != 0; a series whose known coefficients all vanish is "zero to precision"
and only knows that its valuation is at least v + N.
"""
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import ceil, comb, gcd
import logging
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict
from sympy import isprime, primitive_root

from depthkit.errors import (
    ClosureError,
    IdentityAutomorphismError,
    InvalidParameterError,
    PrecisionError,
)
from depthkit.exactnum import RationalLike, plf_eval, to_rational
from depthkit.ramification import RamificationProfile, build_psi

DEFAULT_PRECISION = 256
MAX_GROUP_ORDER = 64


class AtLeast(NamedTuple):
    """Valuation of a series that is zero to its precision"""
    bound: int

    def __str__(self) -> str:
        return f">= {self.bound}"


Valuation = Union[int, AtLeast]


def _require_field(p: int, precision: int) -> None:
    if not isprime(p):
        raise InvalidParameterError(f"p must be prime, got {p}")
    if precision < 1:
        raise InvalidParameterError(f"precision must be >= 1, got {precision}")
    # convolution sums must fit in int64
    if precision * (p - 1) ** 2 >= 2 ** 62:
        raise InvalidParameterError(f"p = {p} is too large for precision {precision}")


def _mul_trunc(a: np.ndarray, b: np.ndarray, n: int, p: int) -> np.ndarray:
    return np.convolve(a[:n], b[:n])[:n] % p


def _unit_inverse(c: np.ndarray, n: int, p: int) -> np.ndarray:
    """1/c mod (p, t^n) for c[0] != 0, by Newton iteration b <- b(2 - cb)"""
    b = np.array([pow(int(c[0]), -1, p)], dtype=np.int64)
    k = 1
    while k < n:
        k = min(2 * k, n)
        cb = _mul_trunc(c, b, k, p)
        correction = (-cb) % p
        correction[0] = (correction[0] + 2) % p
        b = _mul_trunc(b, correction, k, p)
    return b[:n]


def _unit_power(c: np.ndarray, k: int, n: int, p: int) -> np.ndarray:
    if k < 0:
        c, k = _unit_inverse(c, n, p), -k
    result = np.zeros(n, dtype=np.int64)
    result[0] = 1
    base = c[:n]
    while k:
        if k & 1:
            result = _mul_trunc(result, base, n, p)
        k >>= 1
        if k:
            base = _mul_trunc(base, base, n, p)
    return result


def _times_unit_power(acc: np.ndarray, unit: np.ndarray, v: int, n: int, p: int) -> "TruncatedLaurentSeries":
    """t^v * unit^v * acc, where t * unit is the substituted series"""
    if v:
        acc = _mul_trunc(acc, _unit_power(unit[:n], v, n, p), n, p)
    return TruncatedLaurentSeries(p, acc, v)


class TruncatedLaurentSeries:
    """An element of F_p((t)) known to a finite precision; immutable"""

    __slots__ = ("p", "valuation_offset", "coefficients", "is_zero")

    def __init__(self, p: int, coefficients: Iterable[int], valuation_offset: int = 0):
        data = coefficients if isinstance(coefficients, np.ndarray) else list(coefficients)
        coeffs = np.asarray(data, dtype=np.int64) % p
        if coeffs.size == 0:
            raise PrecisionError("series has no significant coefficients")
        nonzero = np.flatnonzero(coeffs)
        if nonzero.size == 0:
            is_zero = True
        else:
            # stripping k leading zeros keeps the absolute precision v + N
            k = int(nonzero[0])
            coeffs = coeffs[k:]
            valuation_offset += k
            is_zero = False
        coeffs.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "valuation_offset", valuation_offset)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "is_zero", is_zero)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedLaurentSeries is immutable")

    @classmethod
    def monomial(cls, p: int, k: int, precision: int = DEFAULT_PRECISION, coefficient: int = 1) -> "TruncatedLaurentSeries":
        _require_field(p, precision)
        coeffs = np.zeros(precision, dtype=np.int64)
        coeffs[0] = coefficient
        return cls(p, coeffs, k)

    @classmethod
    def one(cls, p: int, precision: int = DEFAULT_PRECISION) -> "TruncatedLaurentSeries":
        return cls.monomial(p, 0, precision)

    @classmethod
    def uniformizer(cls, p: int, precision: int = DEFAULT_PRECISION) -> "TruncatedLaurentSeries":
        return cls.monomial(p, 1, precision)

    @classmethod
    def zero(cls, p: int, absolute_precision: int) -> "TruncatedLaurentSeries":
        return cls(p, [0], absolute_precision - 1)

    @property
    def precision(self) -> int:
        """Relative precision N"""
        return int(self.coefficients.size)

    @property
    def absolute_precision(self) -> int:
        return self.valuation_offset + self.precision

    def valuation(self) -> Valuation:
        if self.is_zero:
            return AtLeast(self.absolute_precision)
        return self.valuation_offset

    def coefficient(self, k: int) -> int:
        """Coefficient of t^k"""
        if k >= self.absolute_precision:
            raise PrecisionError(f"t^{k} is beyond the precision O(t^{self.absolute_precision})")
        i = k - self.valuation_offset
        return int(self.coefficients[i]) if i >= 0 else 0

    def _check(self, other: "TruncatedLaurentSeries") -> None:
        if self.p != other.p:
            raise InvalidParameterError(f"series over F_{self.p} and F_{other.p} cannot be combined")

    def _window(self, lo: int, hi: int) -> np.ndarray:
        """Known coefficients of t^lo .. t^(hi-1), zero-padded below the offset"""
        out = np.zeros(hi - lo, dtype=np.int64)
        start = self.valuation_offset
        stop = min(self.absolute_precision, hi)
        if stop > start:
            out[start - lo:stop - lo] = self.coefficients[:stop - start]
        return out

    def __add__(self, other: "TruncatedLaurentSeries") -> "TruncatedLaurentSeries":
        if isinstance(other, int):
            other = TruncatedLaurentSeries.monomial(self.p, 0, max(self.absolute_precision, 1), other)
        self._check(other)
        hi = min(self.absolute_precision, other.absolute_precision)
        lo = min(self.valuation_offset, other.valuation_offset)
        if hi <= lo:
            return TruncatedLaurentSeries.zero(self.p, hi)
        return TruncatedLaurentSeries(self.p, self._window(lo, hi) + other._window(lo, hi), lo)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedLaurentSeries":
        return TruncatedLaurentSeries(self.p, -self.coefficients, self.valuation_offset)

    def __sub__(self, other: Union["TruncatedLaurentSeries", int]) -> "TruncatedLaurentSeries":
        return self + (-other)

    def __rsub__(self, other: int) -> "TruncatedLaurentSeries":
        return (-self) + other

    def __mul__(self, other: Union["TruncatedLaurentSeries", int]) -> "TruncatedLaurentSeries":
        if isinstance(other, int):
            return TruncatedLaurentSeries(self.p, self.coefficients * (other % self.p), self.valuation_offset)
        self._check(other)
        n = min(self.precision, other.precision)
        v = self.valuation_offset + other.valuation_offset
        if self.is_zero or other.is_zero:
            return TruncatedLaurentSeries(self.p, np.zeros(n, dtype=np.int64), v)
        return TruncatedLaurentSeries(self.p, _mul_trunc(self.coefficients, other.coefficients, n, self.p), v)

    __rmul__ = __mul__

    def invert(self) -> "TruncatedLaurentSeries":
        if self.is_zero:
            raise PrecisionError("cannot invert a series that is zero to precision")
        inv = _unit_inverse(self.coefficients, self.precision, self.p)
        return TruncatedLaurentSeries(self.p, inv, -self.valuation_offset)

    def __truediv__(self, other: "TruncatedLaurentSeries") -> "TruncatedLaurentSeries":
        return self * other.invert()

    def __pow__(self, k: int) -> "TruncatedLaurentSeries":
        if self.is_zero:
            if k <= 0:
                raise PrecisionError("power of a series that is zero to precision")
            return TruncatedLaurentSeries(self.p, self.coefficients, k * self.valuation_offset)
        unit = _unit_power(self.coefficients, k, self.precision, self.p)
        return TruncatedLaurentSeries(self.p, unit, k * self.valuation_offset)

    def compose(self, g: "TruncatedLaurentSeries") -> "TruncatedLaurentSeries":
        """f(g) for g of valuation exactly 1"""
        self._check(g)
        if g.is_zero or g.valuation_offset != 1:
            raise InvalidParameterError(f"substitution needs a series of valuation 1, got {g.valuation()}")
        n = min(self.precision, g.precision)
        if self.is_zero:
            return TruncatedLaurentSeries(self.p, np.zeros(n, dtype=np.int64), self.valuation_offset)
        p = self.p
        unit = g.coefficients[:n]
        # g as a power series in t: t * unit
        shifted = np.zeros(n, dtype=np.int64)
        shifted[1:] = unit[:n - 1]
        c = self.coefficients[:n]
        acc = np.zeros(n, dtype=np.int64)
        acc[0] = c[n - 1]
        for i in range(n - 2, -1, -1):
            acc = _mul_trunc(acc, shifted, n, p)
            acc[0] = (acc[0] + c[i]) % p
        return _times_unit_power(acc, unit, self.valuation_offset, n, p)

    def truncate(self, precision: int) -> "TruncatedLaurentSeries":
        """Same series with relative precision lowered to ``precision``"""
        if precision > self.precision:
            raise PrecisionError(f"cannot raise precision from {self.precision} to {precision}")
        return TruncatedLaurentSeries(self.p, self.coefficients[:precision], self.valuation_offset)

    def agrees_with(self, other: "TruncatedLaurentSeries") -> bool:
        """Equal up to the smaller of the two precisions"""
        return (self - other).is_zero

    def key(self) -> Tuple[int, int, Tuple[int, ...]]:
        return self.valuation_offset, self.p, tuple(self.coefficients.tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        return self.key() == other.key() and self.is_zero == other.is_zero

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coefficients.tolist()):
            if c == 0 or len(terms) >= 6:
                continue
            k = self.valuation_offset + i
            mono = "1" if k == 0 else ("t" if k == 1 else f"t^{k}")
            terms.append(mono if c == 1 else f"{c}*{mono}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(t^{self.absolute_precision}) over F_{self.p}"


class SeriesAutomorphism:
    """The continuous automorphism t -> image of F_p((t)), acting by substitution"""

    __slots__ = ("image", "_powers")

    def __init__(self, image: TruncatedLaurentSeries):
        if image.is_zero or image.valuation_offset != 1:
            raise InvalidParameterError(f"the image of t must have valuation 1, got {image.valuation()}")
        object.__setattr__(self, "image", image)
        object.__setattr__(self, "_powers", None)

    def __setattr__(self, name, value):
        raise AttributeError("SeriesAutomorphism is immutable")

    @property
    def p(self) -> int:
        return self.image.p

    @property
    def precision(self) -> int:
        return self.image.precision

    def _power_matrix(self) -> np.ndarray:
        """Row i holds the coefficients of image^i mod t^N"""
        if self._powers is None:
            n, p = self.precision, self.p
            g = np.zeros(n, dtype=np.int64)
            g[1:] = self.image.coefficients[:n - 1]
            rows = np.zeros((n, n), dtype=np.int64)
            rows[0, 0] = 1
            for i in range(1, n):
                rows[i] = _mul_trunc(rows[i - 1], g, n, p)
            rows.setflags(write=False)
            object.__setattr__(self, "_powers", rows)
        return self._powers

    def __call__(self, x: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
        """x(sigma(t)); same result as x.compose(image), reusing the cached powers"""
        if x.p != self.p:
            raise InvalidParameterError(f"series over F_{x.p} and F_{self.p} cannot be combined")
        n = min(x.precision, self.precision)
        if x.is_zero:
            return TruncatedLaurentSeries(self.p, np.zeros(n, dtype=np.int64), x.valuation_offset)
        acc = (x.coefficients[:n] @ self._power_matrix()[:n, :n]) % self.p
        return _times_unit_power(acc, self.image.coefficients, x.valuation_offset, n, self.p)

    def compose(self, other: "SeriesAutomorphism") -> "SeriesAutomorphism":
        """self o other: t -> self(other(t))"""
        return SeriesAutomorphism(self(other.image))

    def power(self, k: int) -> "SeriesAutomorphism":
        if k < 0:
            raise InvalidParameterError("only nonnegative powers are supported")
        result = identity_automorphism(self.p, self.precision)
        for _ in range(k):
            result = self.compose(result)
        return result

    def displacement(self) -> TruncatedLaurentSeries:
        """sigma(t) - t"""
        return self.image - TruncatedLaurentSeries.uniformizer(self.p, self.precision)

    def i_value(self) -> Valuation:
        """i(sigma) = v(sigma(t) - t)"""
        return self.displacement().valuation()

    def is_identity(self) -> bool:
        return self.displacement().is_zero

    def key(self) -> Tuple[int, int, Tuple[int, ...]]:
        return self.image.key()

    def __repr__(self) -> str:
        return f"SeriesAutomorphism(t -> {self.image!r})"


def identity_automorphism(p: int, precision: int = DEFAULT_PRECISION) -> SeriesAutomorphism:
    return SeriesAutomorphism(TruncatedLaurentSeries.uniformizer(p, precision))


def _binomial_mod_p(a: int, k: int, p: int) -> int:
    """binom(a, k) mod p for integers a, k >= 0, by Lucas' theorem"""
    result = 1
    while k:
        a_digit, k_digit = a % p, k % p
        if k_digit > a_digit:
            return 0
        result = result * comb(a_digit, k_digit) % p
        a //= p
        k //= p
    return result


def as_automorphism(p: int, m: int, precision: int = DEFAULT_PRECISION) -> SeriesAutomorphism:
    """Order-p automorphism with lower break m: t -> t (1 + t^m)^(-1/m)

    The exponent -1/m is a p-adic integer a.  binom(a, k) mod p depends only on
    a mod p^L for any L with k < p^L, so a is replaced by the integer
    A = -m^-1 mod p^L with p^L above the largest k needed.
    """
    _require_field(p, precision)
    if m < 1 or gcd(m, p) != 1:
        raise InvalidParameterError(f"gcd(m, p) must be 1 (m = {m}, p = {p})")
    k_max = (precision - 1) // m
    modulus = p
    while modulus <= k_max:
        modulus *= p
    a = (-pow(m, -1, modulus)) % modulus
    coeffs = np.zeros(precision, dtype=np.int64)
    for k in range(k_max + 1):
        coeffs[k * m] = _binomial_mod_p(a, k, p)
    return SeriesAutomorphism(TruncatedLaurentSeries(p, coeffs, 1))


def scaling_automorphism(p: int, zeta: int, precision: int = DEFAULT_PRECISION) -> SeriesAutomorphism:
    """Tame automorphism t -> zeta t"""
    _require_field(p, precision)
    if zeta % p == 0:
        raise InvalidParameterError("zeta must be a unit mod p")
    return SeriesAutomorphism(TruncatedLaurentSeries.monomial(p, 1, precision, zeta))


def root_of_unity(p: int, e: int) -> int:
    """An element of exact order e in F_p^x"""
    if not isprime(p):
        raise InvalidParameterError(f"p must be prime, got {p}")
    if e < 1 or (p - 1) % e != 0:
        raise InvalidParameterError(f"e must divide p - 1 = {p - 1}, got {e}")
    return pow(int(primitive_root(p)), (p - 1) // e, p)


def measured_break(sigma: SeriesAutomorphism) -> int:
    """Lower ramification break: v(sigma(t) - t) - 1"""
    i = sigma.i_value()
    if isinstance(i, AtLeast):
        raise IdentityAutomorphismError(f"automorphism is the identity to precision {sigma.precision}")
    return i - 1


def automorphism_order(sigma: SeriesAutomorphism, max_order: int = MAX_GROUP_ORDER) -> int:
    power = sigma
    for k in range(1, max_order + 1):
        if power.is_identity():
            return k
        power = sigma.compose(power)
    raise ClosureError(f"no power up to {max_order} is the identity")


def close_group(
    generators: Sequence[SeriesAutomorphism],
    max_elements: int = MAX_GROUP_ORDER,
    p: Optional[int] = None,
    precision: Optional[int] = None,
) -> List[SeriesAutomorphism]:
    """Closure under composition, identity first then in discovery order"""
    if generators:
        p = generators[0].p
        precision = min(g.precision for g in generators)
    elif p is None:
        raise InvalidParameterError("an empty generator list needs p")
    ident = identity_automorphism(p, precision or DEFAULT_PRECISION)
    gens = [g if g.precision == ident.precision else SeriesAutomorphism(g.image.truncate(ident.precision))
            for g in generators]
    elements = [ident]
    seen = {ident.key()}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = s.compose(x)
                if y.key() not in seen:
                    if len(elements) >= max_elements:
                        raise ClosureError(f"generated set exceeds {max_elements} elements")
                    seen.add(y.key())
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    logging.debug(f"closed {len(gens)} generators to {len(elements)} automorphisms")
    return elements


def _require_closed(group: Sequence[SeriesAutomorphism]) -> None:
    keys = {g.key() for g in group}
    for a in group:
        for b in group:
            if a.compose(b).key() not in keys:
                raise ClosureError("automorphism set is not closed under composition")


def profile_from_group(
    generators: Sequence[SeriesAutomorphism],
    p: int,
    e_expected: Optional[int] = None,
    max_elements: int = MAX_GROUP_ORDER,
) -> RamificationProfile:
    """Lower filtration Gamma_u = {g : i(g) >= u + 1} of the generated group"""
    if not generators:
        if e_expected not in (None, 1):
            raise InvalidParameterError(f"expected e = {e_expected}, the empty group has e = 1")
        return RamificationProfile(p=p, e=1, f=1, abelian=True)
    group = close_group(generators, max_elements=max_elements)
    if e_expected is not None and len(group) != e_expected:
        raise InvalidParameterError(f"expected a group of order {e_expected}, generated {len(group)}")

    i_values: Dict[Tuple, int] = {}
    for g in group[1:]:
        i = g.i_value()
        if isinstance(i, AtLeast):
            raise PrecisionError("a non-identity element is indistinguishable from the identity")
        i_values[g.key()] = i

    levels = sorted({i - 1 for i in i_values.values()})
    steps = []
    for u in levels:
        members = [g for g in group[1:] if i_values[g.key()] >= u + 1]
        level = [group[0], *members]
        keys = {g.key() for g in level}
        for a in members:
            for b in members:
                if a.compose(b).key() not in keys:
                    raise ClosureError(f"ramification level {u} is not a subgroup")
        steps.append((u, len(level)))

    abelian = all(a.compose(b).key() == b.compose(a).key() for a in group for b in group)
    return RamificationProfile(p=p, e=len(group), f=1, filtration=steps, abelian=abelian)


def _norm(x: TruncatedLaurentSeries, group: Sequence[SeriesAutomorphism]) -> TruncatedLaurentSeries:
    result = group[0](x)
    for g in group[1:]:
        result = result * g(x)
    return result


def norm(x: TruncatedLaurentSeries, group: Sequence[SeriesAutomorphism]) -> TruncatedLaurentSeries:
    """Product of g(x) over the group; lands in the fixed field"""
    _require_closed(group)
    return _norm(x, group)


def is_fixed(x: TruncatedLaurentSeries, group: Sequence[SeriesAutomorphism]) -> bool:
    return all(g(x).agrees_with(x) for g in group)


class ProbeReport(BaseModel):
    """Outcome of a norm-map probe; truthy iff every trial passed"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    psi_n: Fraction
    threshold: int
    trials: int
    passed: int
    min_valuation: Optional[int]
    sharp: bool
    seed: int
    precision: int

    def __bool__(self) -> bool:
        return self.passed == self.trials


def _random_unit(p: int, start: int, precision: int, rng: np.random.Generator) -> TruncatedLaurentSeries:
    """A random unit; for start > 0 it has the form 1 + c t^start + ... with c != 0"""
    coeffs = rng.integers(0, p, size=precision)
    if start == 0:
        coeffs[0] = rng.integers(1, p)
    else:
        coeffs[0] = 1
        coeffs[1:start] = 0
        if start < precision:
            coeffs[start] = rng.integers(1, p)
    return TruncatedLaurentSeries(p, coeffs, 0)


def norm_filtration_probe(
    group: Sequence[SeriesAutomorphism],
    profile: RamificationProfile,
    n: int,
    trials: int = 50,
    seed: int = 0,
    jobs: int = 1,
    margin: int = 2,
) -> ProbeReport:
    """Sample u in U_E^psi(n) and check N(u) in U_F^n, i.e. v_E(N(u) - 1) >= e n"""
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")
    _require_closed(group)
    e = len(group)
    if profile.e != e:
        raise InvalidParameterError(f"profile has e = {profile.e} but the group has {e} elements")
    p = group[0].p
    precision = min(g.precision for g in group)
    psi_n = plf_eval(build_psi(profile), n)
    start = ceil(psi_n) if n > 0 else 0
    threshold = e * n
    if precision <= max(threshold, start) + margin:
        raise PrecisionError(
            f"precision {precision} is too small to observe valuation {threshold} (needs > {threshold + margin})"
        )

    def trial(k: int) -> Valuation:
        rng = np.random.default_rng([seed, k])
        u = _random_unit(p, start, precision, rng)
        if n == 0:
            return _norm(u, group).valuation()
        return (_norm(u, group) - 1).valuation()

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            valuations = list(executor.map(trial, range(trials)))
    else:
        valuations = [trial(k) for k in range(trials)]

    measured = [v.bound if isinstance(v, AtLeast) else v for v in valuations]
    if n == 0:
        # units must map to units
        passed = sum(1 for v in measured if v == 0)
    else:
        passed = sum(1 for v in measured if v >= threshold)
    min_valuation = min(measured) if measured else None
    report = ProbeReport(
        n=n,
        psi_n=psi_n,
        threshold=threshold,
        trials=trials,
        passed=passed,
        min_valuation=min_valuation,
        sharp=min_valuation == threshold,
        seed=seed,
        precision=precision,
    )
    if not report:
        logging.warning(f"norm probe failed {trials - passed}/{trials} trials at n = {n}")
    return report


def torus_filtration_check(
    e: int,
    r: RationalLike,
    samples: int = 50,
    precision: int = 64,
    seed: int = 0,
    p: int = 2,
) -> bool:
    """{u : v_E(u - 1) >= e r} = {u : v_F(u - 1) >= r} with v_F = v_E / e, on sampled units"""
    r = to_rational(r)
    if e < 1:
        raise InvalidParameterError(f"e must be >= 1, got {e}")
    if r < 0:
        raise InvalidParameterError(f"r must be >= 0, got {r}")
    if e * r >= precision:
        raise PrecisionError(f"e * r = {e * r} is outside the precision window {precision}")
    _require_field(p, precision)
    rng = np.random.default_rng(seed)
    for k in range(samples):
        start = int(rng.integers(1, precision))
        u = _random_unit(p, start, precision, rng)
        v = (u - 1).valuation()
        v_e = v.bound if isinstance(v, AtLeast) else v
        in_e = v_e >= e * r
        in_f = Fraction(v_e, e) >= r
        if in_e != in_f:
            logging.warning(f"torus sample {k}: v_E = {v_e} separates the filtrations at r = {r}")
            return False
    return True
