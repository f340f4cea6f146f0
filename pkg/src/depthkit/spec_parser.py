"""Text form of extension towers.

    spec  := term ('*' term)*
    term  := NAME '(' [arg (',' arg)*] ')'
    arg   := value | KEY '=' value
    value := INT | '[' [pair (',' pair)*] ']'
    pair  := '(' INT ',' INT ')'

Terms are listed base first: "tame(2) * as(p=2, m=3)" is a tamely ramified
quadratic E/F followed by an Artin-Schreier L/E.  Error offsets are byte
offsets into the UTF-8 encoded input.
"""
import re
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from depthkit.errors import InvalidParameterError, InvalidProfileError, SpecSemanticError, SpecSyntaxError
from depthkit.ramification import (
    ExtensionTower,
    RamificationProfile,
    artin_schreier,
    cyclotomic,
    from_breaks,
    tame,
    unramified,
)

Value = Union[int, Tuple[Tuple[int, int], ...]]

# family -> (positional parameter order, builder)
FAMILIES = {
    "unram": (("f", "p"), unramified),
    "tame": (("e", "p", "f"), tame),
    "as": (("p", "m"), artin_schreier),
    "cyclo": (("p", "n"), cyclotomic),
    "breaks": (("p", "e", "f", "breaks"), from_breaks),
}

TOKEN_RE = re.compile(r"""
    \s*
    (?:
        (?P<int>-?[0-9]+)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op>[*(),=\[\]])
    )
""", re.X)


class Token:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind: str, text: str, offset: int):
        self.kind = kind
        self.text = text
        self.offset = offset

    def __repr__(self) -> str:
        return f"{self.kind}:{self.text!r}@{self.offset}"


class SpecTerm(BaseModel):
    """One extension in the tower, with its parameters by keyword"""
    model_config = ConfigDict(frozen=True)

    family: str
    params: Tuple[Tuple[str, Value], ...]

    @field_validator("params", mode="before")
    @classmethod
    def order_params(cls, v: Any) -> Tuple[Tuple[str, Any], ...]:
        items = v.items() if isinstance(v, dict) else v
        return tuple((k, val) for k, val in items)

    @property
    def kwargs(self) -> Dict[str, Value]:
        return dict(self.params)

    @property
    def p(self) -> Optional[int]:
        value = self.kwargs.get("p")
        return value if isinstance(value, int) else None

    def build(self) -> RamificationProfile:
        _, builder = FAMILIES[self.family]
        kwargs = dict(self.kwargs)
        if "breaks" in kwargs:
            kwargs["breaks"] = list(kwargs["breaks"])
        return builder(**kwargs)

    def format(self) -> str:
        parts = []
        for key, value in self.params:
            if isinstance(value, tuple):
                value = "[" + ", ".join(f"({u}, {g})" for u, g in value) + "]"
            parts.append(f"{key}={value}")
        return f"{self.family}({', '.join(parts)})"


class ExtensionSpec(BaseModel):
    """A parsed tower specification, base field first"""
    model_config = ConfigDict(frozen=True)

    terms: Tuple[SpecTerm, ...]

    @property
    def p(self) -> Optional[int]:
        return next((t.p for t in self.terms if t.p is not None), None)

    def profiles(self) -> List[RamificationProfile]:
        return [t.build() for t in self.terms]

    def to_tower(self) -> ExtensionTower:
        return ExtensionTower(terms=self.profiles())

    def to_extension(self) -> Union[RamificationProfile, ExtensionTower]:
        """The profile itself for a one-term spec, otherwise the tower"""
        if len(self.terms) == 1:
            return self.terms[0].build()
        return self.to_tower()


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = TOKEN_RE.match(text, pos)
        if not m:
            skipped = len(text[pos:]) - len(text[pos:].lstrip())
            bad = pos + skipped
            raise SpecSyntaxError(f"unexpected character {text[bad]!r}", _byte_offset(text, bad), text)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), _byte_offset(text, m.start(kind))))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.take()
        if tok.text != text or tok.kind not in ("op",):
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise SpecSyntaxError(f"expected {text!r}, found {found}", tok.offset, self.text)
        return tok

    def integer(self) -> int:
        tok = self.take()
        if tok.kind != "int":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise SpecSyntaxError(f"expected an integer, found {found}", tok.offset, self.text)
        return int(tok.text)

    def spec(self) -> List[Tuple[Token, List[Tuple[Optional[str], Value, Token]]]]:
        terms = [self.term()]
        while self.peek().text == "*" and self.peek().kind == "op":
            self.take()
            terms.append(self.term())
        tok = self.peek()
        if tok.kind != "end":
            raise SpecSyntaxError(f"expected '*' or end of input, found {tok.text!r}", tok.offset, self.text)
        return terms

    def term(self) -> Tuple[Token, List[Tuple[Optional[str], Value, Token]]]:
        name = self.take()
        if name.kind != "name":
            found = "end of input" if name.kind == "end" else repr(name.text)
            raise SpecSyntaxError(f"expected an extension name, found {found}", name.offset, self.text)
        self.expect("(")
        args: List[Tuple[Optional[str], Value, Token]] = []
        if self.peek().text != ")":
            args.append(self.arg())
            while self.peek().text == ",":
                self.take()
                args.append(self.arg())
        self.expect(")")
        return name, args

    def arg(self) -> Tuple[Optional[str], Value, Token]:
        start = self.peek()
        key = None
        if start.kind == "name":
            key = self.take().text
            self.expect("=")
        return key, self.value(), start

    def value(self) -> Value:
        tok = self.peek()
        if tok.text == "[":
            self.take()
            pairs = []
            if self.peek().text != "]":
                pairs.append(self.pair())
                while self.peek().text == ",":
                    self.take()
                    pairs.append(self.pair())
            self.expect("]")
            return tuple(pairs)
        return self.integer()

    def pair(self) -> Tuple[int, int]:
        self.expect("(")
        u = self.integer()
        self.expect(",")
        g = self.integer()
        self.expect(")")
        return u, g


def _bind(name: Token, args: List[Tuple[Optional[str], Value, Token]]) -> SpecTerm:
    if name.text not in FAMILIES:
        raise SpecSemanticError(
            f"unknown extension {name.text!r} at offset {name.offset}; expected one of {', '.join(FAMILIES)}"
        )
    order, _ = FAMILIES[name.text]
    bound: Dict[str, Value] = {}
    positional = True
    for i, (key, value, tok) in enumerate(args):
        if key is None:
            if not positional:
                raise SpecSemanticError(f"positional argument after keyword at offset {tok.offset}")
            if i >= len(order):
                raise SpecSemanticError(f"{name.text} takes at most {len(order)} arguments")
            key = order[i]
        else:
            positional = False
            if key not in order:
                raise SpecSemanticError(f"{name.text} has no parameter {key!r} (offset {tok.offset})")
        if key in bound:
            raise SpecSemanticError(f"parameter {key!r} given twice in {name.text} (offset {tok.offset})")
        if isinstance(value, tuple) != (key == "breaks"):
            raise SpecSemanticError(f"parameter {key!r} of {name.text} has the wrong type (offset {tok.offset})")
        bound[key] = value
    return SpecTerm(family=name.text, params=[(k, bound[k]) for k in order if k in bound])


def parse_spec(text: str) -> ExtensionSpec:
    """Parse and validate a tower specification"""
    parser = _Parser(text)
    terms = []
    bound_p: Optional[int] = None
    for name, args in parser.spec():
        term = _bind(name, args)
        try:
            term.build()
        except TypeError as err:
            raise SpecSemanticError(f"{term.format()} at offset {name.offset}: {err}") from err
        except (InvalidParameterError, InvalidProfileError) as err:
            raise SpecSemanticError(f"{err} in {term.format()} at offset {name.offset}") from err
        except ValidationError as err:
            problems = "; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in err.errors())
            raise SpecSemanticError(f"{problems} in {term.format()} at offset {name.offset}") from err
        if term.p is not None:
            if bound_p is not None and term.p != bound_p:
                raise SpecSemanticError(
                    f"residue characteristic p = {term.p} at offset {name.offset} contradicts p = {bound_p}"
                )
            bound_p = term.p
        terms.append(term)
    return ExtensionSpec(terms=terms)


def format_spec(spec: ExtensionSpec) -> str:
    """Canonical text; parse_spec(format_spec(s)) == s"""
    return " * ".join(t.format() for t in spec.terms)


def parse_extension(text: str) -> Union[RamificationProfile, ExtensionTower]:
    return parse_spec(text).to_extension()
