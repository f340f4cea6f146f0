"""Property suites behind ``depthkit verify``.

Every suite yields named cases; running a case produces a ``CaseResult``.
Results keep case order whatever the number of worker threads, so a report
digest depends only on the configuration and seed.
"""
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import gcd
import logging
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence

from depthkit.cohomology.battery import BatteryCase, BatterySettings, cohomology_cases, run_case, shapiro_cases
from depthkit.config import AppConfig
from depthkit.depthmap import (
    asai_depth,
    automorphic_induction_depth,
    conductor_from_depth,
    depth_ratio_constant,
    is_depth_preserving,
    llc_depth,
    ratio_threshold,
    swan_from_conductor,
    wild_strict_increase_check,
)
from depthkit.errors import DegreeError
from depthkit.exactnum import format_rational, plf_eval, rational_grid
from depthkit.laurent import (
    as_automorphism,
    automorphism_order,
    close_group,
    measured_break,
    norm_filtration_probe,
    profile_from_group,
    root_of_unity,
    scaling_automorphism,
    torus_filtration_check,
)
from depthkit.ramification import (
    RamificationProfile,
    artin_schreier,
    build_phi,
    build_psi,
    hasse_arf_check,
    is_tame,
    largest_upper_jump,
    standard_profiles,
    tame,
)
from depthkit.reports import CaseResult, VerificationReport, merge_reports

SUITE_NAMES = ("herbrand", "depth", "laurent", "shapiro", "cohomology")


def _case(name: str, expected: str, measured: str, passed: bool) -> CaseResult:
    return CaseResult(case=name, expected=expected, measured=measured, passed=passed)


def _fmt(values: Iterable[Fraction]) -> str:
    return ", ".join(format_rational(v) for v in values)


# Herbrand functions

def _herbrand_checks(name: str, profile: RamificationProfile) -> List[CaseResult]:
    phi, psi = build_phi(profile), build_psi(profile)
    j = largest_upper_jump(profile)
    e = profile.e
    grid = rational_grid(3 * j + 5, 50)

    bad = [x for x in grid if plf_eval(psi, plf_eval(phi, x)) != x or plf_eval(phi, plf_eval(psi, x)) != x]
    results = [_case(f"{name} inverse pair", "psi(phi(x)) = phi(psi(x)) = x", f"{len(grid) - len(bad)}/{len(grid)}", not bad)]

    psi_j = plf_eval(psi, j)
    tail_bad = [x for x in grid if x >= j and plf_eval(psi, x) != psi_j + e * (x - j)]
    results.append(_case(f"{name} linear tail", "psi(x) = psi(j) + e(x - j) for x >= j", f"j = {format_rational(j)}", not tail_bad))

    if is_tame(profile):
        linear = all(plf_eval(psi, x) == e * x for x in grid)
        results.append(_case(f"{name} tame bound", "psi(x) = e x", "linear" if linear else "not linear", linear))
    else:
        results.append(_case(f"{name} wild bound", "psi(j) < e j", f"{format_rational(psi_j)} vs {format_rational(e * j)}", psi_j < e * j))

    if profile.abelian:
        results.append(_case(f"{name} Hasse-Arf", "integral upper jumps", _fmt(build_phi(profile)(u) for u in profile.positive_breaks) or "none", hasse_arf_check(profile)))
    return results


def herbrand_cases(config: AppConfig) -> Iterator[BatteryCase]:
    for name, profile in standard_profiles():
        yield BatteryCase(name, lambda name=name, profile=profile: _herbrand_checks(name, profile))


# Depth and conductor theorems

def _depth_checks(name: str, profile: RamificationProfile) -> List[CaseResult]:
    e = profile.e
    grid = [d for d in rational_grid(5, 21) if d > 0]
    preserving, witness = is_depth_preserving(profile)
    keeps = all(llc_depth(d, profile) == d for d in grid)
    results = [_case(f"{name} depth preserved iff tame", str(is_tame(profile)), str(keeps), keeps == preserving == is_tame(profile))]

    if not preserving:
        increases = all(wild_strict_increase_check(profile, d) for d in grid)
        results.append(_case(f"{name} strict increase", "phi(e d) > d", f"witness j = {format_rational(witness)}", increases))

    c = depth_ratio_constant(profile)
    start = ratio_threshold(profile)
    ratio_grid = [start + k * Fraction(1, 3) for k in range(20) if start + k * Fraction(1, 3) > 0]
    ratio_ok = all(llc_depth(d, profile) / d == 1 + c / d for d in ratio_grid)
    results.append(_case(f"{name} ratio identity", f"1 + {format_rational(c)}/d", f"from d = {format_rational(start)}", ratio_ok))

    psi = build_psi(profile)
    diagram_ok = all(
        plf_eval(psi, llc_depth(d, profile, kappa)) == kappa * e * d
        for d in grid
        for kappa in (Fraction(1), Fraction(2), Fraction(1, 2))
    )
    results.append(_case(f"{name} restriction diagram", "psi(dep llc) = kappa e d", "grid of 20 x 3", diagram_ok))

    if profile.degree == 2:
        phi = build_phi(profile)
        same = all(asai_depth(profile, d) == automorphic_induction_depth(profile, d) == plf_eval(phi, d) for d in grid)
        results.append(_case(f"{name} Asai = AI depth", "phi_{E/F}(d)", "agree" if same else "differ", same))
    else:
        try:
            asai_depth(profile, 1)
            guarded = False
        except DegreeError:
            guarded = True
        results.append(_case(f"{name} Asai degree guard", "DegreeError", "raised" if guarded else "accepted", guarded))
    return results


def _conductor_checks() -> List[CaseResult]:
    example = conductor_from_depth(2, Fraction(1, 2))
    results = [_case(
        "GL_2 depth 1/2",
        "f = 3, swan = 1/2",
        f"f = {example.conductor}, swan = {format_rational(example.swan)}",
        example.conductor == 3 and example.swan == Fraction(1, 2),
    )]
    round_trip = True
    for n in range(2, 7):
        for f in range(n, 6 * n):
            swan = swan_from_conductor(n, f)
            round_trip &= conductor_from_depth(n, swan).conductor == f
    results.append(_case("swan <-> conductor round trip", "exact", "n = 2..6", round_trip))
    return results


def depth_cases(config: AppConfig) -> Iterator[BatteryCase]:
    for name, profile in standard_profiles():
        yield BatteryCase(name, lambda name=name, profile=profile: _depth_checks(name, profile))
    yield BatteryCase("conductor", _conductor_checks)


# Laurent series measurements

def _artin_schreier_case(p: int, m: int, precision: int, trials: int, seed: int, levels: Sequence[int], jobs: int) -> List[CaseResult]:
    name = f"as(p={p}, m={m})"
    sigma = as_automorphism(p, m, precision)
    order = automorphism_order(sigma)
    brk = measured_break(sigma)
    group = close_group([sigma])
    measured = profile_from_group([sigma], p, e_expected=p)
    expected = artin_schreier(p, m)
    samples = rational_grid(3 * m + 5, 20)
    phi_m, phi_c = build_phi(measured), build_phi(expected)
    results = [
        _case(f"{name} order", str(p), str(order), order == p),
        _case(f"{name} break", str(m), str(brk), brk == m),
        _case(f"{name} profile", "catalog profile", "equal" if measured == expected else str(measured.to_json_dict()), measured == expected),
        _case(f"{name} phi", "catalog phi at 20 points", "", all(plf_eval(phi_m, x) == plf_eval(phi_c, x) for x in samples)),
    ]
    for n in levels:
        report = norm_filtration_probe(group, measured, n, trials=trials, seed=seed, jobs=jobs)
        results.append(_case(
            f"{name} norm level {n}",
            f"{trials}/{trials} with v_E >= {report.threshold}",
            f"{report.passed}/{report.trials}, min v_E = {report.min_valuation}",
            bool(report),
        ))
    return results


def _tame_case(p: int, e: int, precision: int, trials: int, seed: int, levels: Sequence[int], jobs: int) -> List[CaseResult]:
    name = f"tame(e={e}, p={p})"
    tau = scaling_automorphism(p, root_of_unity(p, e), precision)
    group = close_group([tau])
    measured = profile_from_group([tau], p, e_expected=e)
    results = [_case(f"{name} profile", "catalog profile", "equal" if measured == tame(e, p) else "differs", measured == tame(e, p))]
    for n in levels:
        report = norm_filtration_probe(group, measured, n, trials=trials, seed=seed, jobs=jobs)
        results.append(_case(
            f"{name} norm level {n}",
            f"{trials}/{trials} with v_E >= {report.threshold}",
            f"{report.passed}/{report.trials}, min v_E = {report.min_valuation}",
            bool(report),
        ))
    return results


def laurent_cases(
    config: AppConfig,
    primes: Sequence[int] = (2, 3, 5),
    breaks: Sequence[int] = (1, 2, 3, 4, 5),
    levels: Sequence[int] = (0, 1, 2, 3, 4, 5),
) -> Iterator[BatteryCase]:
    lc = config.laurent
    jobs = config.cohomology.jobs
    for p in primes:
        for m in breaks:
            if gcd(m, p) != 1:
                continue

            def run(p=p, m=m) -> List[CaseResult]:
                return _artin_schreier_case(p, m, lc.precision, lc.trials, lc.seed, levels, jobs)

            yield BatteryCase(f"as(p={p}, m={m})", run)
    for p, e in ((3, 2), (5, 4)):
        if p in primes:
            yield BatteryCase(
                f"tame(e={e}, p={p})",
                lambda p=p, e=e: _tame_case(p, e, lc.precision, lc.trials, lc.seed, levels, jobs),
            )
    for e in (2, 3):
        for r in (Fraction(0), Fraction(1, 2), Fraction(5, 4), Fraction(3, 2), Fraction(2)):
            name = f"torus e={e}, r={format_rational(r)}"
            yield BatteryCase(
                name,
                lambda e=e, r=r, name=name: _case(
                    name, "equal filtrations", "", torus_filtration_check(e, r, precision=64, seed=lc.seed)
                ),
            )


def _battery_settings(config: AppConfig) -> BatterySettings:
    c = config.cohomology
    return BatterySettings(budget=c.enumeration_budget, max_induced_order=c.max_induced_order, jobs=c.jobs)


SUITES: Dict[str, Callable[[AppConfig], Iterator[BatteryCase]]] = {
    "herbrand": herbrand_cases,
    "depth": depth_cases,
    "laurent": laurent_cases,
    "shapiro": lambda config: shapiro_cases(_battery_settings(config)),
    "cohomology": lambda config: cohomology_cases(_battery_settings(config)),
}


def run_cases(
    cases: Sequence[BatteryCase],
    jobs: int = 1,
    on_done: Optional[Callable[[BatteryCase], None]] = None,
) -> List[CaseResult]:
    """Run cases, flattening multi-result cases, in case order"""

    def execute(case: BatteryCase) -> List[CaseResult]:
        result = run_case(case)
        if on_done:
            on_done(case)
        return result if isinstance(result, list) else [result]

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            chunks = list(executor.map(execute, cases))
    else:
        chunks = [execute(case) for case in cases]
    return [r for chunk in chunks for r in chunk]


def run_suite(
    name: str,
    config: AppConfig,
    cases: Optional[Sequence[BatteryCase]] = None,
    on_done: Optional[Callable[[BatteryCase], None]] = None,
) -> VerificationReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    if cases is None:
        cases = list(SUITES[name](config))
    logging.info(f"suite {name}: {len(cases)} cases")
    results = run_cases(cases, jobs=config.cohomology.jobs, on_done=on_done)
    return VerificationReport(suite=name, seed=config.laurent.seed, cases=results)


def run_all(
    config: AppConfig,
    batches: Optional[Dict[str, Sequence[BatteryCase]]] = None,
    on_done: Optional[Callable[[BatteryCase], None]] = None,
) -> VerificationReport:
    batches = batches or {}
    reports = [run_suite(name, config, cases=batches.get(name), on_done=on_done) for name in SUITE_NAMES]
    return merge_reports("all", config.laurent.seed, reports)
