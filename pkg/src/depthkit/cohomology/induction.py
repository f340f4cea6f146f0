"""Induced groups, fixed points and descent to quotients.

An element of the induced group A* = Ind_h^g A is an h-equivariant map
f: g -> A, f(hx) = h.f(x).  It is determined by its values on the right coset
representatives r_0 = 1, r_1, ... of h in g, and is stored as the mixed-radix
code of that coordinate tuple with the first coordinate most significant, so
the unit map has code 0.
"""
import logging
from typing import List, Sequence, Tuple, Union

import numpy as np

from depthkit.cohomology.groups import FiniteGGroup, FiniteGroup, QuotientGroup, Subgroup
from depthkit.errors import BudgetExceededError, GroupStructureError

DEFAULT_MAX_INDUCED_ORDER = 729

# Full action validation is skipped above this many induced elements.
VALIDATE_INDUCED_ORDER = 256


def _as_subgroup(g: FiniteGroup, h: Union[Subgroup, Sequence[int]]) -> Subgroup:
    if isinstance(h, Subgroup):
        if h.parent is not g:
            raise GroupStructureError(f"subgroup does not belong to {g.name}")
        return h
    return g.subgroup(h)


class InducedModule(FiniteGGroup):
    """Ind_h^g A with g acting by right translation, (g'.f)(x) = f(x g')"""

    def __init__(self, g: FiniteGroup, h: Subgroup, base: FiniteGGroup, max_order: int = DEFAULT_MAX_INDUCED_ORDER):
        if base.acting.order != len(h):
            raise GroupStructureError(
                f"{base.name} is acted on by a group of order {base.acting.order}, expected {len(h)}"
            )
        self.g = g
        self.h = h
        self.base = base
        reps, coset_of = g.right_cosets(h.embedding)
        self.reps: Tuple[int, ...] = tuple(reps)
        self.coset_of: Tuple[int, ...] = tuple(coset_of)
        k = len(reps)
        a = base.coefficients.order
        order = a ** k
        if order > max_order:
            raise BudgetExceededError(
                f"Induced group Ind from {h.group.name} to {g.name} of {base.coefficients.name}",
                required=order,
                budget=max_order,
            )
        self.radix: Tuple[int, ...] = (a,) * k
        codes = np.arange(order)
        self.coords = np.stack(np.unravel_index(codes, self.radix), axis=1).astype(np.int64)

        # x = h_x . r_{coset(x)} with h_x in h, as an index into h.group
        self.h_part: List[int] = [
            h.index_of[g.rows[x][g.inv[reps[coset_of[x]]]]] for x in range(g.order)
        ]

        ct = base.coefficients.table
        prod = ct[self.coords[:, None, :], self.coords[None, :, :]]
        table = self.encode(prod)

        # r_i g' = h' r_j, so (g'.f)(r_i) = h'.f(r_j)
        action = np.empty((g.order, order), dtype=np.int64)
        for x in range(g.order):
            moved = np.empty_like(self.coords)
            for i, r in enumerate(reps):
                y = g.rows[r][x]
                moved[:, i] = base.action[self.h_part[y], self.coords[:, coset_of[y]]]
            action[x] = self.encode(moved)

        labels = self._labels(base.coefficients, order)
        coefficients = FiniteGroup(
            table,
            labels=labels,
            name=f"Ind({base.coefficients.name})",
            validate=order <= VALIDATE_INDUCED_ORDER,
        )
        logging.debug(f"Induced {base.name} from index-{k} subgroup: order {order}")
        super().__init__(
            g,
            coefficients,
            action,
            name=f"Ind_{h.group.name}^{g.name} {base.coefficients.name}",
            validate=order <= VALIDATE_INDUCED_ORDER,
        )

    def _labels(self, coeffs: FiniteGroup, order: int) -> List[str]:
        rows = self.coords.tolist()
        return ["(" + ",".join(coeffs.labels[v] for v in row) + ")" for row in rows[:order]]

    def encode(self, coords: np.ndarray) -> np.ndarray:
        """Codes of coordinate tuples along the last axis"""
        coords = np.asarray(coords, dtype=np.int64)
        return np.ravel_multi_index(tuple(np.moveaxis(coords, -1, 0)), self.radix).astype(np.int64)

    def coordinates(self, code: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.coords[code])

    def value_at(self, code: int, x: int) -> int:
        """f(x) for the element with the given code"""
        c = int(self.coords[code, self.coset_of[x]])
        return self.base.act[self.h_part[x]][c]

    def value_at_identity(self, code: int) -> int:
        return int(self.coords[code, 0])


def induce(
    g: FiniteGroup,
    h: Union[Subgroup, Sequence[int]],
    module: FiniteGGroup,
    max_order: int = DEFAULT_MAX_INDUCED_ORDER,
) -> InducedModule:
    """A* = Ind_h^g A; |A*| = |A|^[g:h]"""
    return InducedModule(g, _as_subgroup(g, h), module, max_order=max_order)


def fixed_points(module: FiniteGGroup, indices: Sequence[int]) -> Subgroup:
    """A^N for N a subgroup of the acting group, as a subgroup of the coefficients"""
    idx = module.acting.require_subgroup(indices)
    moved = module.action[list(idx)]
    fixed = np.flatnonzero(np.all(moved == np.arange(module.coefficients.order)[None, :], axis=0))
    return module.coefficients.subgroup(fixed.tolist(), name=f"{module.coefficients.name}^N")


class DescendedModule(FiniteGGroup):
    """A^N as a (g/N)-group for N normal in g"""

    def __init__(self, module: FiniteGGroup, normal: Sequence[int]):
        self.parent_module = module
        self.quotient: QuotientGroup = module.acting.quotient(normal)
        self.fixed: Subgroup = fixed_points(module, self.quotient.normal)
        action = _restricted_action(module, self.quotient.lift, self.fixed)
        super().__init__(
            self.quotient.group,
            self.fixed.group,
            action,
            name=f"{module.coefficients.name}^N under {self.quotient.group.name}",
        )


class ImageModule(FiniteGGroup):
    """A^(h meet N) as a group under the image of h in g/N.

    ``module`` is an h-group; elements of the image act through any preimage
    in h, which is well defined because h meet N acts trivially on A^(h meet N).
    """

    def __init__(self, module: FiniteGGroup, h: Subgroup, quotient: QuotientGroup):
        g = h.parent
        if quotient.parent is not g:
            raise GroupStructureError("quotient must be of the group containing h")
        normal = set(quotient.normal)
        self.intersection: Tuple[int, ...] = tuple(i for i, x in enumerate(h.embedding) if x in normal)
        self.fixed: Subgroup = fixed_points(module, self.intersection)
        image = sorted({quotient.projection[x] for x in h.embedding})
        self.image: Subgroup = quotient.group.subgroup(image, name=f"image of {h.group.name}")
        preimage = {}
        for i, x in enumerate(h.embedding):
            preimage.setdefault(quotient.projection[x], i)
        lift = [preimage[q] for q in self.image.embedding]
        action = _restricted_action(module, lift, self.fixed)
        super().__init__(
            self.image.group,
            self.fixed.group,
            action,
            name=f"{module.coefficients.name}^B under {self.image.group.name}",
        )


def _restricted_action(module: FiniteGGroup, lift: Sequence[int], fixed: Subgroup) -> np.ndarray:
    embed = np.asarray(fixed.embedding, dtype=np.int64)
    lookup = np.full(module.coefficients.order, -1, dtype=np.int64)
    lookup[embed] = np.arange(len(embed))
    images = lookup[module.action[np.asarray(lift, dtype=np.int64)[:, None], embed[None, :]]]
    if np.any(images < 0):
        raise GroupStructureError(f"fixed points of {module.name} are not stable under the quotient action")
    return images


def descend(module: FiniteGGroup, normal: Sequence[int]) -> DescendedModule:
    return DescendedModule(module, normal)
