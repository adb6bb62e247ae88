"""Photon-counting Monte Carlo for the paired-interferometer correlations.

Source model: an attenuated laser emits ``n ~ Poisson(mu)`` photons per time
bin.  Only doubly bunched bins (``n = 2``) survive post-selection; empty and
single-photon bins are discarded, and ``n >= 3`` bins are discarded but
tallied separately.  Each surviving pair sends one photon to each station
(configurable: a ``binomial`` routing variant lets every photon pick a side
independently and rejects same-side pairs).

Detection: a photon at Alice's station lands on detector A with probability
``(1 - sin 2xi cos phi) / 4``, on B with ``(1 + sin 2xi cos phi) / 4``, and is
absorbed by the polarizer with probability exactly ``1/2``; Bob's side is
symmetric with (theta, psi) and detectors C/D.  The two photons are sampled
independently -- all correlation comes from the shared settings, none from
the source.

Estimation: the coincidence proportion, normalized by the product of singles
marginals (``1/4`` each analytically, or sweep-averaged measured rates),
converges to the closed forms in :mod:`nmzi.correlation` with a plain
binomial standard error.

Reproducibility: all randomness descends from one ``SeedSequence`` spawn
tree -- run seed -> sweep point -> stream -> (photon counts, routing,
detection) -- with a fixed chunk size, so results are bit-identical for a
given (seed, stream count) partitioning declaration.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .correlation import CROSS_STATION_PAIRS, JointSettings, fringe_factor

DETECTORS = ("A", "B", "C", "D")

ROUTING_MODES = ("paired", "binomial")

# Phase-averaged singles rate per detector; denominator of the analytic
# normalization.
ANALYTIC_MARGINAL = 0.25

# Time bins drawn per vectorized Poisson call.  Part of the determinism
# contract: changing it would change how the bit stream is consumed.
_CHUNK_BINS = 1 << 20

_MU_WARNING_THRESHOLD = 0.5


@dataclass(frozen=True)
class SourceParams:
    """Attenuated-laser source and sampling-run parameters.

    ``mean_photon_number`` is the Poisson mean per time bin.  The model is
    built for the strongly attenuated regime; values above 0.5 work but
    trigger a warning since multi-photon discards then dominate.
    """

    mean_photon_number: float
    n_time_bins: int
    rng_seed: int = 0
    n_streams: int = 1
    routing: str = "paired"

    def __post_init__(self) -> None:
        mu = self.mean_photon_number
        if not math.isfinite(mu) or mu <= 0.0:
            raise ValueError(f"mean_photon_number must be positive, got {mu}")
        if self.n_time_bins < 1:
            raise ValueError(f"n_time_bins must be positive, got {self.n_time_bins}")
        if self.n_streams < 1:
            raise ValueError(f"n_streams must be positive, got {self.n_streams}")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError(
                f"rng_seed must fit an unsigned 64-bit integer, got {self.rng_seed}"
            )
        if self.routing not in ROUTING_MODES:
            raise ValueError(
                f"routing must be one of {ROUTING_MODES}, got {self.routing!r}"
            )
        if mu > _MU_WARNING_THRESHOLD:
            warnings.warn(
                f"mean photon number {mu} is outside the strongly attenuated "
                "regime (mu << 1); pair post-selection discards most bins",
                stacklevel=2,
            )

    def bins_in_stream(self, stream_index: int) -> int:
        """Contiguous share of time bins assigned to one stream."""
        base, extra = divmod(self.n_time_bins, self.n_streams)
        return base + (1 if stream_index < extra else 0)


@dataclass(frozen=True)
class PairEvent:
    """One post-selected doubly bunched pair: a bin with one photon per side."""

    bin_index: int
    stream_index: int = 0


@dataclass
class SamplingTally:
    """Bin-level bookkeeping of the source sampling."""

    n_bins: int = 0
    n_pair_bins: int = 0
    n_multi_bins: int = 0
    n_routing_rejected: int = 0

    @property
    def n_post_selected(self) -> int:
        return self.n_pair_bins - self.n_routing_rejected

    def merge(self, other: "SamplingTally") -> "SamplingTally":
        return SamplingTally(
            n_bins=self.n_bins + other.n_bins,
            n_pair_bins=self.n_pair_bins + other.n_pair_bins,
            n_multi_bins=self.n_multi_bins + other.n_multi_bins,
            n_routing_rejected=self.n_routing_rejected + other.n_routing_rejected,
        )


def _zero_singles() -> dict:
    return {d: 0 for d in DETECTORS}


def _zero_coincidences() -> dict:
    return {pair: 0 for pair in CROSS_STATION_PAIRS}


@dataclass
class CoincidenceCounts:
    """Detection tallies over the post-selected pairs.

    ``loss_events`` counts absorbed photons (not bins): a pair losing both
    photons contributes two.
    """

    n_post_selected_pairs: int = 0
    singles: dict = field(default_factory=_zero_singles)
    coincidences: dict = field(default_factory=_zero_coincidences)
    loss_events: int = 0

    @property
    def alice_losses(self) -> int:
        return self.n_post_selected_pairs - self.singles["A"] - self.singles["B"]

    @property
    def bob_losses(self) -> int:
        return self.n_post_selected_pairs - self.singles["C"] - self.singles["D"]

    def merge(self, other: "CoincidenceCounts") -> "CoincidenceCounts":
        return CoincidenceCounts(
            n_post_selected_pairs=self.n_post_selected_pairs
            + other.n_post_selected_pairs,
            singles={d: self.singles[d] + other.singles[d] for d in DETECTORS},
            coincidences={
                pair: self.coincidences[pair] + other.coincidences[pair]
                for pair in CROSS_STATION_PAIRS
            },
            loss_events=self.loss_events + other.loss_events,
        )

    def validate(self) -> None:
        """Check the count identities; raise ValueError if the ledger broke."""
        n = self.n_post_selected_pairs
        if n < 0 or self.loss_events < 0:
            raise ValueError("counters must be non-negative")
        if any(v < 0 for v in self.singles.values()) or any(
            v < 0 for v in self.coincidences.values()
        ):
            raise ValueError("counters must be non-negative")
        if self.alice_losses < 0 or self.bob_losses < 0:
            raise ValueError("singles exceed the number of post-selected pairs")
        if self.alice_losses + self.bob_losses != self.loss_events:
            raise ValueError(
                "loss ledger out of balance: "
                f"{self.alice_losses} + {self.bob_losses} != {self.loss_events}"
            )
        both_detected = sum(self.coincidences.values())
        if both_detected > n:
            raise ValueError("more coincidences than post-selected pairs")
        missed = n - both_detected
        if not missed <= self.loss_events <= 2 * missed:
            raise ValueError(
                f"loss_events={self.loss_events} inconsistent with "
                f"{missed} non-coincidence pairs"
            )


@dataclass(frozen=True)
class EstimatedCorrelation:
    """Monte Carlo correlation estimate with a binomial error bar.

    ``n_coincidences == 0`` marks a point where the estimate is an exact
    zero with a degenerate error bar; downstream consumers should treat the
    flag, not hide it.
    """

    value: float
    std_error: float
    n_effective: int
    n_coincidences: int

    def __post_init__(self) -> None:
        if not math.isfinite(self.std_error) or self.std_error < 0.0:
            raise ValueError(f"std_error must be non-negative, got {self.std_error}")
        if self.n_effective < 0 or self.n_coincidences < 0:
            raise ValueError("counts must be non-negative")

    @property
    def is_zero_coincidence(self) -> bool:
        return self.n_coincidences == 0


@dataclass(frozen=True)
class McPointResult:
    """Per-sweep-point Monte Carlo output: raw tallies plus estimates."""

    settings: JointSettings
    counts: CoincidenceCounts
    tally: SamplingTally
    estimates: Mapping[str, EstimatedCorrelation]
    singles_rates: Mapping[str, float]


# ---------------------------------------------------------------------------
# Source sampling


def _post_select(
    draws: np.ndarray, routing: str, routing_rng: np.random.Generator
) -> tuple[np.ndarray, int, int, int]:
    """Select pair bins from one chunk of Poisson draws.

    Returns (surviving positions, pair bins, multi-photon bins, rejected).
    """
    positions = np.flatnonzero(draws == 2)
    n_pair = positions.size
    n_multi = int(np.count_nonzero(draws >= 3))
    n_rejected = 0
    if routing == "binomial" and n_pair:
        sides = routing_rng.integers(0, 2, size=(n_pair, 2))
        one_per_side = sides[:, 0] != sides[:, 1]
        n_rejected = n_pair - int(np.count_nonzero(one_per_side))
        positions = positions[one_per_side]
    return positions, n_pair, n_multi, n_rejected


def _iter_stream_chunks(
    stream_seq: np.random.SeedSequence,
    n_bins: int,
    src: SourceParams,
    tally: SamplingTally | None,
) -> Iterator[tuple[int, np.ndarray, np.random.Generator]]:
    """Yield (chunk start, surviving bin offsets, detection rng) per chunk."""
    counts_seq, routing_seq, detect_seq = stream_seq.spawn(3)
    counts_rng = np.random.default_rng(counts_seq)
    routing_rng = np.random.default_rng(routing_seq)
    detect_rng = np.random.default_rng(detect_seq)
    for start in range(0, n_bins, _CHUNK_BINS):
        size = min(_CHUNK_BINS, n_bins - start)
        draws = counts_rng.poisson(src.mean_photon_number, size)
        positions, n_pair, n_multi, n_rejected = _post_select(
            draws, src.routing, routing_rng
        )
        if tally is not None:
            tally.n_bins += size
            tally.n_pair_bins += n_pair
            tally.n_multi_bins += n_multi
            tally.n_routing_rejected += n_rejected
        yield start, positions, detect_rng


def sample_post_selected_pairs(
    src: SourceParams, tally: SamplingTally | None = None
) -> Iterator[PairEvent]:
    """Stream the post-selected pair events of a run, in bin order per stream.

    If ``tally`` is given, bin-level statistics accumulate into it while the
    stream is consumed.  Re-running with identical params replays the exact
    same events.
    """
    root = np.random.SeedSequence(src.rng_seed)
    stream_offset = 0
    for stream_index, stream_seq in enumerate(root.spawn(src.n_streams)):
        n_bins = src.bins_in_stream(stream_index)
        for start, positions, _ in _iter_stream_chunks(stream_seq, n_bins, src, tally):
            base = stream_offset + start
            for pos in positions:
                yield PairEvent(bin_index=base + int(pos), stream_index=stream_index)
        stream_offset += n_bins


# ---------------------------------------------------------------------------
# Detection


def detection_probabilities(settings: JointSettings) -> dict:
    """Per-photon landing probabilities for the four detectors.

    Each side's pair sums to exactly 1/2; the missing half is the polarizer
    absorption.
    """
    return {d: fringe_factor(d, settings) / 4.0 for d in DETECTORS}


def detect_pair(
    settings: JointSettings, pair_event: PairEvent, rng: np.random.Generator
) -> tuple[str, str]:
    """Sample the fate of one pair: (A|B|loss) x (C|D|loss).

    The two photons are independent given the settings; ``pair_event`` is
    accepted for interface symmetry (which pair is being detected does not
    change the physics).
    """
    del pair_event
    p = detection_probabilities(settings)
    # Probability conservation is exact by construction; keep it checked in
    # debug runs.
    assert p["A"] + p["B"] == 0.5 and p["C"] + p["D"] == 0.5
    u = rng.random()
    if u < p["A"]:
        alice = "A"
    elif u < p["A"] + p["B"]:
        alice = "B"
    else:
        alice = "loss"
    v = rng.random()
    if v < p["C"]:
        bob = "C"
    elif v < p["C"] + p["D"]:
        bob = "D"
    else:
        bob = "loss"
    return alice, bob


def _tally_detections(
    counts: CoincidenceCounts,
    probabilities: Mapping[str, float],
    uv: np.ndarray,
) -> None:
    """Classify a chunk of pair events and add them to the running counts."""
    u = uv[:, 0]
    v = uv[:, 1]
    hits = {
        "A": u < probabilities["A"],
        "C": v < probabilities["C"],
    }
    hits["B"] = ~hits["A"] & (u < probabilities["A"] + probabilities["B"])
    hits["D"] = ~hits["C"] & (v < probabilities["C"] + probabilities["D"])
    alice_lost = ~(hits["A"] | hits["B"])
    bob_lost = ~(hits["C"] | hits["D"])

    counts.n_post_selected_pairs += uv.shape[0]
    for d in DETECTORS:
        counts.singles[d] += int(np.count_nonzero(hits[d]))
    for pair in CROSS_STATION_PAIRS:
        counts.coincidences[pair] += int(np.count_nonzero(hits[pair[0]] & hits[pair[1]]))
    counts.loss_events += int(np.count_nonzero(alice_lost))
    counts.loss_events += int(np.count_nonzero(bob_lost))


def _accumulate_point(
    settings: JointSettings, src: SourceParams, point_seq: np.random.SeedSequence
) -> tuple[CoincidenceCounts, SamplingTally]:
    """Run the full source + detection chain for one sweep point."""
    counts = CoincidenceCounts()
    tally = SamplingTally()
    probabilities = detection_probabilities(settings)
    for stream_index, stream_seq in enumerate(point_seq.spawn(src.n_streams)):
        n_bins = src.bins_in_stream(stream_index)
        for _, positions, detect_rng in _iter_stream_chunks(
            stream_seq, n_bins, src, tally
        ):
            if positions.size == 0:
                continue
            # Row-major (u, v) pairs: same bit-stream order as per-event
            # scalar detection.
            uv = detect_rng.random((positions.size, 2))
            _tally_detections(counts, probabilities, uv)
    return counts, tally


# ---------------------------------------------------------------------------
# Estimation


def estimate_correlation(
    counts: CoincidenceCounts,
    pair: str,
    normalization: str = "analytic",
    measured_marginals: Mapping[str, float] | None = None,
) -> EstimatedCorrelation:
    """Normalized coincidence-rate estimate for one cross-station pair.

    With ``analytic`` normalization the denominator is the phase-averaged
    singles product ``(1/4)^2``; with ``measured`` it is the product of
    sweep-averaged singles rates supplied in ``measured_marginals`` (their
    sampling error is not propagated -- a documented approximation).
    """
    if pair not in CROSS_STATION_PAIRS:
        raise ValueError(
            f"pair must be one of {CROSS_STATION_PAIRS}, got {pair!r}"
        )
    n = counts.n_post_selected_pairs
    if n <= 0:
        raise ValueError("cannot estimate a correlation from zero post-selected pairs")
    if normalization == "analytic":
        denominator = ANALYTIC_MARGINAL * ANALYTIC_MARGINAL
    elif normalization == "measured":
        if measured_marginals is None:
            raise ValueError(
                "measured normalization requires sweep-averaged singles rates"
            )
        try:
            m_i = measured_marginals[pair[0]]
            m_j = measured_marginals[pair[1]]
        except KeyError as exc:
            raise ValueError(f"measured marginal missing for detector {exc}") from exc
        if m_i <= 0.0 or m_j <= 0.0:
            raise ValueError("measured marginals must be positive")
        denominator = m_i * m_j
    else:
        raise ValueError(
            f"normalization must be 'analytic' or 'measured', got {normalization!r}"
        )
    n_coinc = counts.coincidences[pair]
    p_hat = n_coinc / n
    value = p_hat / denominator
    std_error = math.sqrt(p_hat * (1.0 - p_hat) / n) / denominator
    return EstimatedCorrelation(
        value=value, std_error=std_error, n_effective=n, n_coincidences=n_coinc
    )


def run_experiment(
    settings_sweep: Iterable[JointSettings],
    src: SourceParams,
    normalization: str = "analytic",
) -> list[McPointResult]:
    """Monte Carlo estimates over a sweep, aligned point-for-point with it.

    Deterministic for fixed (seed, stream count): every sweep point gets its
    own child seed, so the grid can be evaluated in any order or subset
    without changing any point's result.
    """
    points: Sequence[JointSettings] = list(settings_sweep)
    if not points:
        raise ValueError("settings sweep is empty")
    if normalization not in ("analytic", "measured"):
        raise ValueError(
            f"normalization must be 'analytic' or 'measured', got {normalization!r}"
        )
    root = np.random.SeedSequence(src.rng_seed)
    accumulated = [
        (settings, *_accumulate_point(settings, src, point_seq))
        for settings, point_seq in zip(points, root.spawn(len(points)))
    ]

    marginals: dict | None = None
    if normalization == "measured":
        total_pairs = sum(counts.n_post_selected_pairs for _, counts, _ in accumulated)
        if total_pairs == 0:
            raise ValueError("no post-selected pairs anywhere in the sweep")
        marginals = {
            d: sum(counts.singles[d] for _, counts, _ in accumulated) / total_pairs
            for d in DETECTORS
        }

    results = []
    for settings, counts, tally in accumulated:
        estimates = {
            pair: estimate_correlation(counts, pair, normalization, marginals)
            for pair in CROSS_STATION_PAIRS
        }
        rates = {
            d: counts.singles[d] / counts.n_post_selected_pairs for d in DETECTORS
        }
        results.append(
            McPointResult(
                settings=settings,
                counts=counts,
                tally=tally,
                estimates=estimates,
                singles_rates=rates,
            )
        )
    return results
