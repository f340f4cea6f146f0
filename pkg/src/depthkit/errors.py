from typing import Any, Optional


class DepthkitError(Exception):
    """Base class for depthkit errors"""
    code = "E_DEPTHKIT"


class DomainError(DepthkitError):
    """Argument outside the domain [0, oo) of a piecewise-linear function"""
    code = "E_DOMAIN"


class InvalidFunctionError(DepthkitError):
    """Breakpoints or slopes violate the piecewise-linear invariants"""
    code = "E_PLF"


class InvalidParameterError(DepthkitError):
    """Catalog or operation parameter violates a precondition"""
    code = "E_PARAM"


class InvalidProfileError(DepthkitError):
    """Ramification filtration data is not a legal profile"""
    code = "E_PROFILE"


class NotAbelianError(DepthkitError):
    """Operation requires an abelian extension"""
    code = "E_NOT_ABELIAN"


class TameProfileError(DepthkitError):
    """Operation requires a wildly ramified extension"""
    code = "E_TAME"


class NonIntegralConductorError(DepthkitError):
    """n * depth is not an integer, so no conductor exists"""
    code = "E_CONDUCTOR"


class DegreeError(DepthkitError):
    """Extension degree does not match the operation's hypothesis"""
    code = "E_DEGREE"


class GroupStructureError(DepthkitError):
    """Group axioms, subgroup, normality or action checks failed"""
    code = "E_GROUP"


class BudgetExceededError(DepthkitError):
    """Enumeration would exceed the configured budget"""
    code = "E_BUDGET"

    def __init__(self, message: str, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"{message} (required: {required}, budget: {budget})")


class PrecisionError(DepthkitError):
    """Series precision exhausted or insufficient for a probe"""
    code = "E_PRECISION"


class ClosureError(DepthkitError):
    """Automorphisms do not close to a group, or a level is not a subgroup"""
    code = "E_CLOSURE"


class IdentityAutomorphismError(DepthkitError):
    """A break was requested for the identity automorphism"""
    code = "E_IDENTITY"


class SpecSyntaxError(DepthkitError):
    """Extension specification text does not parse"""
    code = "E_SYNTAX"

    def __init__(self, message: str, offset: int, text: Optional[str] = None):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class SpecSemanticError(DepthkitError):
    """Extension specification parses but violates a catalog precondition"""
    code = "E_SEMANTIC"


class ConfigError(DepthkitError):
    """Configuration failed validation"""
    code = "E_CONFIG"


def error_payload(error: DepthkitError) -> dict[str, Any]:
    """Machine-readable form of a library error"""
    payload: dict[str, Any] = {"code": error.code, "message": str(error)}
    if isinstance(error, SpecSyntaxError):
        payload["offset"] = error.offset
    if isinstance(error, BudgetExceededError):
        payload["required"] = error.required
        payload["budget"] = error.budget
    return payload
