"""Finite groups as multiplication tables, and finite groups acting on them.

Elements are integer indices 0..n-1 with the identity at 0.  Subgroups and
quotients keep their parent's index order, so the identity stays at 0 and
coset representatives (lowest parent index) are deterministic.
"""
from functools import cached_property
from itertools import product
import logging
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation
from sympy.combinatorics.named_groups import DihedralGroup, SymmetricGroup

from depthkit.errors import GroupStructureError

# Associativity is checked on the full n^3 cube only up to this order.
FULL_VALIDATION_ORDER = 64


class FiniteGroup:
    """A finite group given by its multiplication table, identity at index 0"""

    def __init__(
        self,
        table: np.ndarray,
        labels: Optional[Sequence[str]] = None,
        name: str = "",
        validate: bool = True,
    ):
        self.table = np.asarray(table, dtype=np.int64)
        n = self.table.shape[0]
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        self.name = name or f"group of order {n}"
        if validate:
            self._validate()
        self.inverse = np.argmax(self.table == 0, axis=1).astype(np.int64)
        # plain lists are much faster than numpy scalars in the enumeration loops
        self.rows: List[List[int]] = self.table.tolist()
        self.inv: List[int] = self.inverse.tolist()

    def _validate(self) -> None:
        t = self.table
        n = t.shape[0]
        if t.ndim != 2 or t.shape != (n, n) or n == 0:
            raise GroupStructureError(f"{self.name}: multiplication table must be square and nonempty")
        if len(self.labels) != n:
            raise GroupStructureError(f"{self.name}: {len(self.labels)} labels for {n} elements")
        if t.min() < 0 or t.max() >= n:
            raise GroupStructureError(f"{self.name}: table entries out of range")
        ident = np.arange(n)
        if not (np.array_equal(t[0], ident) and np.array_equal(t[:, 0], ident)):
            raise GroupStructureError(f"{self.name}: element 0 is not the identity")
        if not (np.all(np.sort(t, axis=0) == ident[:, None]) and np.all(np.sort(t, axis=1) == ident[None, :])):
            raise GroupStructureError(f"{self.name}: table is not a Latin square (inverse law fails)")
        if n <= FULL_VALIDATION_ORDER:
            left = t[t]
            right = t[ident[:, None, None], t[None, :, :]]
            if not np.array_equal(left, right):
                a, b, c = np.argwhere(left != right)[0]
                raise GroupStructureError(f"{self.name}: associativity fails for ({a}, {b}, {c})")
        else:
            logging.debug(f"{self.name}: skipping full associativity check for order {n}")

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.rows[x][a]
            k += 1
        return k

    def closure(self, generators: Iterable[int]) -> Tuple[int, ...]:
        """Sorted indices of the subgroup generated by ``generators``"""
        gens = list(generators)
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.rows[x][s]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    @cached_property
    def generators(self) -> Tuple[int, ...]:
        """Deterministic generating set: elements of largest order first, then by index"""
        candidates = sorted(range(1, self.order), key=lambda a: (-self.element_order(a), a))
        gens: List[int] = []
        span: Tuple[int, ...] = (0,)
        for a in candidates:
            if len(span) == self.order:
                break
            if a not in span:
                gens.append(a)
                span = self.closure(gens)
        return tuple(gens)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def is_subgroup(self, indices: Iterable[int]) -> bool:
        s = set(indices)
        if 0 not in s:
            return False
        return all(self.rows[a][b] in s for a in s for b in s)

    def is_normal(self, indices: Iterable[int]) -> bool:
        s = set(indices)
        if not self.is_subgroup(s):
            return False
        return all(self.rows[self.rows[g][h]][self.inv[g]] in s for g in range(self.order) for h in s)

    def require_subgroup(self, indices: Iterable[int]) -> Tuple[int, ...]:
        idx = tuple(sorted(set(indices)))
        if not self.is_subgroup(idx):
            raise GroupStructureError(f"{list(idx)} is not a subgroup of {self.name}")
        return idx

    def require_normal(self, indices: Iterable[int]) -> Tuple[int, ...]:
        idx = self.require_subgroup(indices)
        if not self.is_normal(idx):
            raise GroupStructureError(f"{list(idx)} is not a normal subgroup of {self.name}")
        return idx

    @cached_property
    def all_subgroups(self) -> Tuple[Tuple[int, ...], ...]:
        """Every subgroup, ordered by size then indices"""
        found = {self.closure([a]) for a in range(self.order)}
        frontier = set(found)
        while frontier:
            new = set()
            for s in frontier:
                for t in found:
                    joined = self.closure(s + t)
                    if joined not in found and joined not in new:
                        new.add(joined)
            found |= new
            frontier = new
        return tuple(sorted(found, key=lambda s: (len(s), s)))

    @cached_property
    def normal_subgroups(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(s for s in self.all_subgroups if self.is_normal(s))

    def right_cosets(self, indices: Sequence[int]) -> Tuple[List[int], List[int]]:
        """Representatives of H\\G (lowest index first) and the coset position of each element"""
        h = list(indices)
        coset_of = [-1] * self.order
        reps: List[int] = []
        for x in range(self.order):
            if coset_of[x] == -1:
                pos = len(reps)
                reps.append(x)
                for a in h:
                    coset_of[self.rows[a][x]] = pos
        return reps, coset_of

    def subgroup(self, indices: Iterable[int], name: str = "") -> "Subgroup":
        return Subgroup(self, self.require_subgroup(indices), name=name)

    def quotient(self, indices: Iterable[int], name: str = "") -> "QuotientGroup":
        return QuotientGroup(self, self.require_normal(indices), name=name)


class Subgroup:
    """A subgroup as a group in its own right, with its embedding in the parent"""

    def __init__(self, parent: FiniteGroup, indices: Tuple[int, ...], name: str = ""):
        self.parent = parent
        self.embedding = tuple(indices)
        self.index_of: Dict[int, int] = {p: i for i, p in enumerate(self.embedding)}
        sub = parent.table[np.ix_(self.embedding, self.embedding)]
        lookup = np.full(parent.order, -1, dtype=np.int64)
        lookup[list(self.embedding)] = np.arange(len(self.embedding))
        labels = [parent.labels[i] for i in self.embedding]
        self.group = FiniteGroup(
            lookup[sub],
            labels=labels,
            name=name or f"subgroup of order {len(self.embedding)} in {parent.name}",
        )

    def __len__(self) -> int:
        return len(self.embedding)


class QuotientGroup:
    """G/N with cosets ordered by their lowest-index representative"""

    def __init__(self, parent: FiniteGroup, normal: Tuple[int, ...], name: str = ""):
        self.parent = parent
        self.normal = tuple(normal)
        reps, coset_of = parent.right_cosets(self.normal)
        self.lift: Tuple[int, ...] = tuple(reps)
        self.projection: Tuple[int, ...] = tuple(coset_of)
        k = len(reps)
        table = np.array(
            [[coset_of[parent.rows[reps[i]][reps[j]]] for j in range(k)] for i in range(k)],
            dtype=np.int64,
        ).reshape(k, k)
        labels = [f"{parent.labels[r]}N" for r in reps]
        self.group = FiniteGroup(table, labels=labels, name=name or f"{parent.name} / N{len(self.normal)}")


class FiniteGGroup:
    """A finite group A on which a finite group g acts by automorphisms.

    ``action[x, a]`` is the index of x.a in A.
    """

    def __init__(
        self,
        acting: FiniteGroup,
        coefficients: FiniteGroup,
        action: np.ndarray,
        name: str = "",
        validate: bool = True,
    ):
        self.acting = acting
        self.coefficients = coefficients
        self.action = np.asarray(action, dtype=np.int64)
        self.name = name or f"{coefficients.name} under {acting.name}"
        if validate:
            self._validate()
        self.act: List[List[int]] = self.action.tolist()

    def _validate(self) -> None:
        g, a = self.acting.order, self.coefficients.order
        act = self.action
        if act.shape != (g, a):
            raise GroupStructureError(f"{self.name}: action table has shape {act.shape}, expected {(g, a)}")
        if not np.array_equal(act[0], np.arange(a)):
            raise GroupStructureError(f"{self.name}: identity does not act trivially")
        if not np.all(np.sort(act, axis=1) == np.arange(a)[None, :]):
            raise GroupStructureError(f"{self.name}: some element does not act bijectively")
        t = self.coefficients.table
        # x.(ab) = (x.a)(x.b)
        lhs = act[:, t]
        rhs = t[act[:, :, None], act[:, None, :]]
        if not np.array_equal(lhs, rhs):
            x = int(np.argwhere(lhs != rhs)[0][0])
            raise GroupStructureError(f"{self.name}: element {self.acting.labels[x]} does not act by an automorphism")
        # (xy).a = x.(y.a)
        composed = act[np.arange(g)[:, None, None], act[None, :, :]]
        if not np.array_equal(act[self.acting.table], composed):
            raise GroupStructureError(f"{self.name}: action is not a homomorphism g -> Aut(A)")

    def apply(self, x: int, a: int) -> int:
        return self.act[x][a]

    def restrict(self, sub: Subgroup) -> "FiniteGGroup":
        """The same coefficients viewed as a group under a subgroup of the acting group"""
        if sub.parent is not self.acting:
            raise GroupStructureError("restriction needs a subgroup of the acting group")
        return FiniteGGroup(sub.group, self.coefficients, self.action[list(sub.embedding)], validate=False)


# Standard groups

def cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, labels=[str(i) for i in range(n)], name=f"Z/{n}")


def trivial_group() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=np.int64), labels=["1"], name="1")


def direct_product(g: FiniteGroup, h: FiniteGroup, name: str = "") -> FiniteGroup:
    m = h.order
    pairs = list(product(range(g.order), range(m)))
    table = np.array([[g.rows[a][c] * m + h.rows[b][d] for (c, d) in pairs] for (a, b) in pairs], dtype=np.int64)
    labels = [f"({g.labels[a]},{h.labels[b]})" for a, b in pairs]
    return FiniteGroup(table, labels=labels, name=name or f"{g.name} x {h.name}")


def klein_four() -> FiniteGroup:
    return direct_product(cyclic(2), cyclic(2), name="V4")


def from_permutations(perms: Sequence[Permutation], name: str = "") -> FiniteGroup:
    """Group table of a closed set of permutations, identity first, then by array form"""
    ordered = sorted(perms, key=lambda p: (not p.is_Identity, p.array_form))
    index = {tuple(p.array_form): i for i, p in enumerate(ordered)}
    try:
        table = np.array([[index[tuple((a * b).array_form)] for b in ordered] for a in ordered], dtype=np.int64)
    except KeyError as e:
        raise GroupStructureError(f"{name or 'permutation set'} is not closed under composition") from e
    labels = [str(p.cyclic_form) if not p.is_Identity else "()" for p in ordered]
    return FiniteGroup(table, labels=labels, name=name)


def symmetric3() -> FiniteGroup:
    return from_permutations(list(SymmetricGroup(3).generate()), name="S3")


def dihedral4() -> FiniteGroup:
    return from_permutations(list(DihedralGroup(4).generate()), name="D4")


# Actions and automorphisms

def trivial_action(acting: FiniteGroup, coefficients: FiniteGroup) -> FiniteGGroup:
    action = np.tile(np.arange(coefficients.order), (acting.order, 1))
    return FiniteGGroup(acting, coefficients, action, name=f"{coefficients.name} (trivial {acting.name})")


def inversion_automorphism(group: FiniteGroup) -> List[int]:
    if not group.is_abelian():
        raise GroupStructureError(f"inversion is an automorphism of {group.name} only if it is abelian")
    return list(group.inv)


def conjugation_automorphism(group: FiniteGroup, c: int) -> List[int]:
    """a -> c a c^-1"""
    return [group.rows[group.rows[c][a]][group.inv[c]] for a in range(group.order)]


def action_from_generators(
    acting: FiniteGroup,
    coefficients: FiniteGroup,
    images: Mapping[int, Sequence[int]],
    name: str = "",
) -> FiniteGGroup:
    """Extend automorphisms given on generators of ``acting`` to a full action"""
    gens = list(images)
    if acting.closure(gens) != tuple(range(acting.order)):
        raise GroupStructureError(f"{gens} do not generate {acting.name}")
    maps: Dict[int, List[int]] = {0: list(range(coefficients.order))}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = acting.rows[x][s]
                composed = [maps[x][images[s][a]] for a in range(coefficients.order)]
                if y not in maps:
                    maps[y] = composed
                    nxt.append(y)
                elif maps[y] != composed:
                    raise GroupStructureError(
                        f"generator images do not define a homomorphism {acting.name} -> Aut({coefficients.name})"
                    )
        frontier = nxt
    action = np.array([maps[x] for x in range(acting.order)], dtype=np.int64)
    return FiniteGGroup(acting, coefficients, action, name=name)


def action_through_quotient(
    acting: FiniteGroup,
    coefficients: FiniteGroup,
    kernel: Sequence[int],
    automorphism: Sequence[int],
    name: str = "",
) -> FiniteGGroup:
    """Act through acting/kernel = Z/2 by an involutive automorphism of the coefficients"""
    kernel_set = set(acting.require_normal(kernel))
    if 2 * len(kernel_set) != acting.order:
        raise GroupStructureError("kernel must have index 2")
    auto = list(automorphism)
    ident = list(range(coefficients.order))
    action = np.array([ident if x in kernel_set else auto for x in range(acting.order)], dtype=np.int64)
    return FiniteGGroup(acting, coefficients, action, name=name)


def index_two_subgroups(group: FiniteGroup) -> List[Tuple[int, ...]]:
    return [s for s in group.normal_subgroups if 2 * len(s) == group.order]


def count_homomorphisms(source: FiniteGroup, target: FiniteGroup) -> int:
    """|Hom(source, target)|: every assignment on generators, extended and checked on the full table"""
    gens = list(source.generators)
    n = source.order
    count = 0
    for images in product(range(target.order), repeat=len(gens)):
        full = [-1] * n
        full[0] = 0
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s, v in zip(gens, images):
                    y = source.rows[x][s]
                    if full[y] == -1:
                        full[y] = target.rows[full[x]][v]
                        nxt.append(y)
            frontier = nxt
        if all(full[source.rows[x][y]] == target.rows[full[x]][full[y]] for x in range(n) for y in range(n)):
            count += 1
    return count
