"""Exact rationals and piecewise-linear functions on [0, oo).

Every real-valued quantity in depthkit (depths, filtration indices, Herbrand
function values) is a ``fractions.Fraction``.  ``PiecewiseLinearFn`` stores a
continuous, strictly increasing function with f(0) = 0 in canonical form, so
that two functions are equal as Python objects exactly when they are equal
pointwise.
"""
from bisect import bisect_right
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from depthkit.errors import DomainError, InvalidFunctionError

Rational = Fraction
RationalLike = Union[Fraction, int, str]

Point = Tuple[Fraction, Fraction]


def to_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or "a/b" string to a Fraction. Floats are refused."""
    if isinstance(value, bool):
        raise InvalidFunctionError(f"Not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidFunctionError(f"Not a rational number: {value!r}") from e
    raise InvalidFunctionError(f"Not a rational number: {value!r} ({type(value).__name__})")


def format_rational(value: Fraction) -> str:
    """Reduced "a/b" form; integers print without a denominator"""
    return str(Fraction(value))


class PiecewiseLinearFn(BaseModel):
    """Continuous strictly increasing piecewise-linear f: [0, oo) -> [0, oo).

    ``breaks[i]`` is the point (x_i, f(x_i)) where segment i starts and
    ``slopes[i]`` is the slope on [x_i, x_{i+1}), the last slope extending
    to infinity.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    breaks: Tuple[Point, ...]
    slopes: Tuple[Fraction, ...]

    @field_validator("breaks", mode="before")
    @classmethod
    def coerce_breaks(cls, v: Any) -> Tuple[Point, ...]:
        return tuple((to_rational(x), to_rational(y)) for x, y in v)

    @field_validator("slopes", mode="before")
    @classmethod
    def coerce_slopes(cls, v: Any) -> Tuple[Fraction, ...]:
        return tuple(to_rational(s) for s in v)

    @model_validator(mode="after")
    def check_canonical(self) -> "PiecewiseLinearFn":
        if not self.breaks:
            raise InvalidFunctionError("A piecewise-linear function needs at least one segment")
        if len(self.breaks) != len(self.slopes):
            raise InvalidFunctionError(
                f"Expected one slope per segment: {len(self.breaks)} breaks, {len(self.slopes)} slopes"
            )
        if self.breaks[0] != (0, 0):
            raise InvalidFunctionError(f"Function must start at (0, 0), got {self.breaks[0]}")
        for s in self.slopes:
            if s <= 0:
                raise InvalidFunctionError(f"Slopes must be positive, got {s}")
        for i in range(1, len(self.breaks)):
            (x0, y0), (x1, y1) = self.breaks[i - 1], self.breaks[i]
            if x1 <= x0:
                raise InvalidFunctionError(f"Breakpoints not strictly increasing at x = {x1}")
            if y1 != y0 + self.slopes[i - 1] * (x1 - x0):
                raise InvalidFunctionError(f"Discontinuity at x = {x1}")
            if self.slopes[i] == self.slopes[i - 1]:
                raise InvalidFunctionError(f"Spurious breakpoint at x = {x1} (equal adjacent slopes)")
        return self

    @classmethod
    def from_slopes(cls, xs: Sequence[RationalLike], slopes: Sequence[RationalLike]) -> "PiecewiseLinearFn":
        """Build from segment start points (first must be 0) and slopes, merging collinear segments"""
        xs = [to_rational(x) for x in xs]
        slopes = [to_rational(s) for s in slopes]
        if len(xs) != len(slopes):
            raise InvalidFunctionError("Expected one slope per segment start")
        if not xs or xs[0] != 0:
            raise InvalidFunctionError("First segment must start at x = 0")

        breaks: List[Point] = []
        kept: List[Fraction] = []
        y = Fraction(0)
        for i, (x, s) in enumerate(zip(xs, slopes)):
            if i > 0:
                if x <= xs[i - 1]:
                    raise InvalidFunctionError(f"Segment starts not strictly increasing at x = {x}")
                y += slopes[i - 1] * (x - xs[i - 1])
            if kept and kept[-1] == s:
                continue
            breaks.append((x, y))
            kept.append(s)
        return cls(breaks=breaks, slopes=kept)

    @classmethod
    def linear(cls, slope: RationalLike) -> "PiecewiseLinearFn":
        return cls(breaks=[(0, 0)], slopes=[slope])

    @classmethod
    def identity(cls) -> "PiecewiseLinearFn":
        return cls.linear(1)

    @property
    def xs(self) -> Tuple[Fraction, ...]:
        return tuple(x for x, _ in self.breaks)

    @property
    def ys(self) -> Tuple[Fraction, ...]:
        return tuple(y for _, y in self.breaks)

    @property
    def final_slope(self) -> Fraction:
        return self.slopes[-1]

    @property
    def last_break(self) -> Fraction:
        """x-coordinate where the final linear piece starts"""
        return self.breaks[-1][0]

    def is_linear(self) -> bool:
        return len(self.slopes) == 1

    def is_convex(self) -> bool:
        return all(a < b for a, b in zip(self.slopes, self.slopes[1:]))

    def is_concave(self) -> bool:
        return all(a > b for a, b in zip(self.slopes, self.slopes[1:]))

    def segment_index(self, x: Fraction) -> int:
        """Index of the segment containing x (right-continuous at breakpoints)"""
        return bisect_right(self.xs, x) - 1

    def __call__(self, x: RationalLike) -> Fraction:
        return plf_eval(self, x)

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "breaks": [{"x": format_rational(x), "y": format_rational(y)} for x, y in self.breaks],
            "slopes": [format_rational(s) for s in self.slopes],
        }

    def describe(self) -> List[str]:
        """One human-readable line per linear piece"""
        lines = []
        for i, ((x, y), s) in enumerate(zip(self.breaks, self.slopes)):
            upper = f"{format_rational(self.breaks[i + 1][0])}]" if i + 1 < len(self.breaks) else "oo)"
            intercept = y - s * x
            if intercept == 0:
                expr = f"{format_rational(s)}*x"
            elif intercept > 0:
                expr = f"{format_rational(s)}*x + {format_rational(intercept)}"
            else:
                expr = f"{format_rational(s)}*x - {format_rational(-intercept)}"
            lines.append(f"[{format_rational(x)}, {upper}: {expr}")
        return lines


def plf_eval(f: PiecewiseLinearFn, x: RationalLike) -> Fraction:
    """Exact value f(x) for x >= 0"""
    x = to_rational(x)
    if x < 0:
        raise DomainError(f"x must be >= 0, got {format_rational(x)}")
    i = f.segment_index(x)
    x0, y0 = f.breaks[i]
    return y0 + f.slopes[i] * (x - x0)


def plf_invert(f: PiecewiseLinearFn) -> PiecewiseLinearFn:
    """Inverse function; breakpoints swap coordinates and slopes invert"""
    return PiecewiseLinearFn(
        breaks=[(y, x) for x, y in f.breaks],
        slopes=[1 / s for s in f.slopes],
    )


def plf_compose(outer: PiecewiseLinearFn, inner: PiecewiseLinearFn) -> PiecewiseLinearFn:
    """Canonical form of outer(inner(x))"""
    inverse = plf_invert(inner)
    candidates = set(inner.xs)
    candidates.update(plf_eval(inverse, y) for y in outer.xs)
    xs = sorted(candidates)

    slopes = []
    for x in xs:
        inner_slope = inner.slopes[inner.segment_index(x)]
        outer_slope = outer.slopes[outer.segment_index(plf_eval(inner, x))]
        slopes.append(inner_slope * outer_slope)
    return PiecewiseLinearFn.from_slopes(xs, slopes)


def rational_grid(upper: RationalLike, count: int) -> List[Fraction]:
    """``count`` evenly spaced rationals from 0 to ``upper`` inclusive"""
    upper = to_rational(upper)
    if count < 2:
        return [Fraction(0)]
    return [upper * k / (count - 1) for k in range(count)]

