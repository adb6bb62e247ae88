"""Self-verification: run the model's identity checks and report deviations.

Analytic checks exercise exact algebraic identities (tolerance 1e-12, or
exactly zero where conservation is exact by construction).  The optional
Monte Carlo block re-derives the closed forms from photon statistics at
modest sample sizes with sigma-scaled tolerances.

``run_verification`` accepts the element conventions under test so a
deliberately corrupted convention set can be fed in as a negative control;
the composed-versus-closed-form check must then fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlation import (
    QUARTER_TURN,
    JointSettings,
    detector_intensities,
    fringe_factor,
    general_cross_correlation,
    local_basis_sum,
    synchronized_correlation,
    synchronized_settings,
)
from .elements import (
    ALGEBRA_TOL,
    DEFAULT_CONVENTIONS,
    ElementConventions,
    beam_splitter_mix,
)
from .montecarlo import (
    DETECTORS,
    SourceParams,
    detection_probabilities,
    run_experiment,
)
from .station import (
    StationParams,
    closed_form_station,
    composed_station,
    station_outputs_deviation,
)


@dataclass(frozen=True)
class CheckResult:
    """One verified invariant: its worst observed deviation vs the bound."""

    name: str
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  {self.name}: max deviation {self.max_deviation:.3e} "
            f"(tolerance {self.tolerance:.1e})"
        )


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def lines(self) -> list[str]:
        out = [check.line() for check in self.checks]
        n_failed = sum(not check.passed for check in self.checks)
        if n_failed:
            out.append(f"{n_failed} of {len(self.checks)} checks FAILED")
        else:
            out.append(f"all {len(self.checks)} checks passed")
        return out


_PHASES = [2.0 * math.pi * k / 8.0 for k in range(8)]
_POL_ANGLES = [0.0, math.pi / 6.0, QUARTER_TURN, 1.0, -QUARTER_TURN]


def _check_composed_station(conventions: ElementConventions) -> CheckResult:
    worst = 0.0
    for phi in _PHASES:
        for zeta in _POL_ANGLES:
            for eta in (0.0, 0.7):
                for amplitude in (1.0, 0.5):
                    params = StationParams(
                        mzi_phase=phi,
                        polarizer_angle=zeta,
                        global_phase=eta,
                        input_amplitude=amplitude,
                    )
                    deviation = station_outputs_deviation(
                        composed_station(params, conventions),
                        closed_form_station(params),
                    )
                    worst = max(worst, deviation)
    return CheckResult("composed station matches closed form", worst, ALGEBRA_TOL)


def _check_beam_splitter_unitarity() -> CheckResult:
    rng = np.random.default_rng(1905)
    worst = 0.0
    for phase in (1j, -1j, 1.0, complex(math.cos(0.3), math.sin(0.3))):
        conventions = ElementConventions(bs_reflection_phase=phase)
        for _ in range(50):
            re = rng.normal(size=4)
            upper = complex(re[0], re[1])
            lower = complex(re[2], re[3])
            out_upper, out_lower = beam_splitter_mix(upper, lower, conventions)
            before = abs(upper) ** 2 + abs(lower) ** 2
            after = abs(out_upper) ** 2 + abs(out_lower) ** 2
            worst = max(worst, abs(after - before))
    return CheckResult("beam splitter conserves energy", worst, ALGEBRA_TOL)


def _check_station_energy() -> CheckResult:
    worst = 0.0
    for phi in _PHASES:
        for zeta in _POL_ANGLES:
            params = StationParams(
                mzi_phase=phi, polarizer_angle=zeta, input_amplitude=0.8
            )
            outputs = closed_form_station(params)
            total = outputs.e_out1.intensity() + outputs.e_out2.intensity()
            worst = max(worst, abs(total - 0.8**2))
    return CheckResult("station outputs carry the input energy", worst, ALGEBRA_TOL)


def _check_intensities_match_projections() -> CheckResult:
    worst = 0.0
    for phi in _PHASES:
        for psi in _PHASES[::2]:
            for zeta in _POL_ANGLES:
                settings = JointSettings(
                    phi_a=phi, psi_b=psi, xi_a=zeta, theta_b=0.6, i0=1.0
                )
                i_a, i_b, i_c, i_d = detector_intensities(settings)
                alice = closed_form_station(
                    StationParams(mzi_phase=phi, polarizer_angle=zeta)
                )
                bob = closed_form_station(
                    StationParams(mzi_phase=psi, polarizer_angle=0.6)
                )
                worst = max(
                    worst,
                    abs(i_a - abs(alice.e_proj_minus) ** 2),
                    abs(i_b - abs(alice.e_proj_plus) ** 2),
                    abs(i_c - abs(bob.e_proj_minus) ** 2),
                    abs(i_d - abs(bob.e_proj_plus) ** 2),
                )
    return CheckResult(
        "detector intensities equal projected station amplitudes", worst, ALGEBRA_TOL
    )


def _check_correlation_product_identity() -> CheckResult:
    worst = 0.0
    for phi in _PHASES:
        for psi in _PHASES[::2]:
            for i0 in (1.0, 2.5):
                settings = JointSettings(
                    phi_a=phi, psi_b=psi, xi_a=0.5, theta_b=1.1, i0=i0
                )
                i_a, i_b, i_c, i_d = detector_intensities(settings)
                marginal_sq = (i0 / 4.0) ** 2
                for pair, product in (
                    ("AD", i_a * i_d),
                    ("BC", i_b * i_c),
                    ("AC", i_a * i_c),
                    ("BD", i_b * i_d),
                ):
                    r = general_cross_correlation(settings, pair)
                    worst = max(worst, abs(r * marginal_sq - product))
    return CheckResult(
        "correlation times squared marginal equals intensity product",
        worst,
        ALGEBRA_TOL,
    )


def _check_synchronized_form() -> CheckResult:
    worst = 0.0
    for rho in np.linspace(0.0, 2.0 * math.pi, 97):
        for zeta in (QUARTER_TURN, -QUARTER_TURN):
            r = general_cross_correlation(
                synchronized_settings(rho, zeta), "AD"
            )
            worst = max(worst, abs(r - synchronized_correlation(rho)))
    return CheckResult(
        "synchronized correlation equals squared sine", worst, ALGEBRA_TOL
    )


def _check_probability_conservation() -> CheckResult:
    worst = 0.0
    for phi in np.linspace(0.0, 2.0 * math.pi, 41):
        for xi in np.linspace(-math.pi, math.pi, 37):
            settings = JointSettings(
                phi_a=phi, psi_b=1.3, xi_a=xi, theta_b=xi, i0=1.0
            )
            p = detection_probabilities(settings)
            worst = max(
                worst, abs(p["A"] + p["B"] - 0.5), abs(p["C"] + p["D"] - 0.5)
            )
    return CheckResult("detection probabilities conserve exactly", worst, 0.0)


def _check_local_basis_sum() -> CheckResult:
    worst = 0.0
    for rho in np.linspace(0.0, 2.0 * math.pi, 61):
        for detector in DETECTORS:
            worst = max(worst, abs(local_basis_sum(rho, detector) - 0.5))
    return CheckResult(
        "polarizer-basis sum hides the fringe locally", worst, ALGEBRA_TOL
    )


def _default_source() -> SourceParams:
    return SourceParams(mean_photon_number=0.05, n_time_bins=400_000, rng_seed=20260815)


def _sigma_or_inf(observed: float, expected: float, sigma: float) -> float:
    if sigma > 0.0:
        return abs(observed - expected) / sigma
    return 0.0 if observed == expected else math.inf


def _check_mc_convergence(source: SourceParams) -> CheckResult:
    points = [synchronized_settings(rho, QUARTER_TURN) for rho in _PHASES]
    results = run_experiment(points, source)
    worst = 0.0
    for point, result in zip(points, results):
        est = result.estimates["AD"]
        # The sampling target: at phases where the coincidence probability
        # is exactly zero, both the estimate and this truth are exact zeros.
        truth = general_cross_correlation(point, "AD")
        worst = max(worst, _sigma_or_inf(est.value, truth, est.std_error))
    return CheckResult(
        "monte carlo correlation converges at 8 synchronized phases (sigmas)",
        worst,
        5.0,
    )


def _check_mc_singles(source: SourceParams) -> CheckResult:
    settings = JointSettings(phi_a=0.9, psi_b=1.7, xi_a=QUARTER_TURN, theta_b=0.6)
    result = run_experiment([settings], source)[0]
    n = result.counts.n_post_selected_pairs
    probabilities = detection_probabilities(settings)
    worst = 0.0
    for detector in DETECTORS:
        p = probabilities[detector]
        sigma = math.sqrt(p * (1.0 - p) / n)
        worst = max(
            worst, _sigma_or_inf(result.singles_rates[detector], p, sigma)
        )
    return CheckResult("monte carlo singles follow the fringe (sigmas)", worst, 4.0)


def _check_mc_post_selection(source: SourceParams) -> CheckResult:
    settings = synchronized_settings(1.0, QUARTER_TURN)
    tally = run_experiment([settings], source)[0].tally
    mu = source.mean_photon_number
    p2 = math.exp(-mu) * mu * mu / 2.0
    sigma = math.sqrt(tally.n_bins * p2 * (1.0 - p2))
    deviation = _sigma_or_inf(float(tally.n_pair_bins), tally.n_bins * p2, sigma)
    return CheckResult(
        "doubly bunched bin fraction matches poisson mass (sigmas)", deviation, 4.0
    )


def run_verification(
    include_montecarlo: bool = True,
    source: SourceParams | None = None,
    conventions: ElementConventions = DEFAULT_CONVENTIONS,
) -> VerificationReport:
    """Evaluate every invariant check and collect the report."""
    checks = [
        _check_composed_station(conventions),
        _check_beam_splitter_unitarity(),
        _check_station_energy(),
        _check_intensities_match_projections(),
        _check_correlation_product_identity(),
        _check_synchronized_form(),
        _check_probability_conservation(),
        _check_local_basis_sum(),
    ]
    if include_montecarlo:
        mc_source = source if source is not None else _default_source()
        checks += [
            _check_mc_convergence(mc_source),
            _check_mc_singles(mc_source),
            _check_mc_post_selection(mc_source),
        ]
    return VerificationReport(checks=tuple(checks))
