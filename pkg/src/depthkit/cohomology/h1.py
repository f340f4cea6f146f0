"""Nonabelian first cohomology H^1(g, A) of a finite group g acting on a finite group A.

A 1-cocycle is a map alpha: g -> A with alpha(xy) = alpha(x) . x(alpha(y)); two
cocycles are cohomologous when beta(x) = a^-1 . alpha(x) . x(a) for some a in A.
Cocycles are stored as tuples of coefficient indices, indexed by elements of g.
"""
from concurrent.futures import ThreadPoolExecutor
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from depthkit.cohomology.groups import FiniteGGroup
from depthkit.errors import BudgetExceededError

Cocycle = Tuple[int, ...]

DEFAULT_ENUMERATION_BUDGET = 10 ** 7


class H1PointedSet:
    """Cohomology classes with canonical representatives.

    Classes are sorted by their lexicographically smallest cocycle; since the
    identity of A has index 0, the unit cocycle's class is always index 0.
    """

    def __init__(self, module: FiniteGGroup, cocycles: Sequence[Cocycle]):
        self.module = module
        self.class_of: Dict[Cocycle, int] = {}
        orbits: List[Tuple[Cocycle, List[Cocycle]]] = []
        for alpha in cocycles:
            if alpha in self.class_of:
                continue
            orbit = sorted(set(twist_orbit(module, alpha)))
            for beta in orbit:
                self.class_of[beta] = -1
            orbits.append((orbit[0], orbit))
        orbits.sort(key=lambda item: item[0])
        self.representatives: Tuple[Cocycle, ...] = tuple(rep for rep, _ in orbits)
        self.members: Tuple[Tuple[Cocycle, ...], ...] = tuple(tuple(orbit) for _, orbit in orbits)
        for i, (_, orbit) in enumerate(orbits):
            for beta in orbit:
                self.class_of[beta] = i
        self.distinguished = self.class_of.get(unit_cocycle(module), -1)

    def __len__(self) -> int:
        return len(self.representatives)

    @property
    def cocycles(self) -> List[Cocycle]:
        return list(self.class_of)

    def classify(self, alpha: Cocycle) -> Optional[int]:
        return self.class_of.get(tuple(alpha))

    def describe(self) -> List[str]:
        labels = self.module.coefficients.labels
        return ["[" + ", ".join(labels[v] for v in rep) + "]" for rep in self.representatives]


def unit_cocycle(module: FiniteGGroup) -> Cocycle:
    return (0,) * module.acting.order


def is_cocycle(module: FiniteGGroup, alpha: Sequence[int]) -> bool:
    """Full-table check of alpha(xy) = alpha(x) . x(alpha(y))"""
    g = module.acting
    a = np.asarray(alpha, dtype=np.int64)
    if a.shape != (g.order,):
        return False
    twisted = module.action[np.arange(g.order)[:, None], a[None, :]]
    rhs = module.coefficients.table[a[:, None], twisted]
    return bool(np.array_equal(a[g.table], rhs))


def twist_orbit(module: FiniteGGroup, alpha: Cocycle) -> List[Cocycle]:
    """All a^-1 . alpha(x) . x(a) for a in A"""
    A = module.coefficients
    act = module.action
    a_arr = np.asarray(alpha, dtype=np.int64)
    xs = np.arange(module.acting.order)
    orbit = []
    for a in range(A.order):
        moved = A.table[A.inverse[a], A.table[a_arr, act[xs, a]]]
        orbit.append(tuple(moved.tolist()))
    return orbit


def _propagate(module: FiniteGGroup, gens: Sequence[int], values: Sequence[int]) -> Optional[List[int]]:
    """Extend generator values along alpha(xs) = alpha(x) . x(alpha(s)); None on a conflict"""
    rows = module.acting.rows
    mul = module.coefficients.rows
    act = module.act
    alpha: List[int] = [-1] * module.acting.order
    alpha[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            ax = alpha[x]
            ax_row = mul[ax]
            act_x = act[x]
            for s, v in zip(gens, values):
                y = rows[x][s]
                val = ax_row[act_x[v]]
                if alpha[y] == -1:
                    alpha[y] = val
                    nxt.append(y)
                elif alpha[y] != val:
                    return None
        frontier = nxt
    return alpha


def _search(module: FiniteGGroup, gens: Sequence[int], prefix: List[int]) -> List[Cocycle]:
    n_coeff = module.coefficients.order
    found: List[Cocycle] = []
    stack = [prefix]
    while stack:
        values = stack.pop()
        k = len(values)
        partial = _propagate(module, gens[:k], values)
        if partial is None:
            continue
        if k == len(gens):
            found.append(tuple(partial))
            continue
        # push in reverse so values pop in increasing order
        for v in range(n_coeff - 1, -1, -1):
            stack.append(values + [v])
    return found


def enumerate_h1(
    module: FiniteGGroup,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    jobs: int = 1,
) -> H1PointedSet:
    """Every class of H^1(g, A), by generator-pruned search over cocycles"""
    gens = list(module.acting.generators)
    n_coeff = module.coefficients.order
    required = n_coeff ** len(gens)
    if required > budget:
        raise BudgetExceededError(
            f"Enumerating cocycles of {module.acting.name} in {module.coefficients.name}",
            required=required,
            budget=budget,
        )
    logging.debug(
        f"H1 of {module.name}: {len(gens)} generators, {required} candidate assignments"
    )

    if not gens:
        cocycles = [unit_cocycle(module)]
    elif jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            chunks = executor.map(lambda v: _search(module, gens, [v]), range(n_coeff))
            cocycles = [alpha for chunk in chunks for alpha in chunk]
    else:
        cocycles = _search(module, gens, [])

    for alpha in cocycles:
        if not is_cocycle(module, alpha):
            raise AssertionError(f"search produced a non-cocycle {alpha}")
    result = H1PointedSet(module, cocycles)
    logging.debug(f"H1 of {module.name}: {len(cocycles)} cocycles in {len(result)} classes")
    return result
