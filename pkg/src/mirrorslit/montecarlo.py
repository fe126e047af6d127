"""Seeded single-photon Monte Carlo of the mirror scan.

Each photon picks a slit at random, survives an acceptance test against the
fringe rate implied by the outcome hypothesis, lands somewhere on the
mirror, and is routed purely geometrically: the reflected ray either
crosses one detector aperture segment or misses both.  Mis-detection is
therefore an emergent geometric event, not a modelling input.

Every scan position owns an independent random substream keyed by
(seed, position index), so totals are reproducible regardless of the order
positions are evaluated in.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import design, geometry
from .geometry import Apparatus, DetectorLayout
from .wavemodel import (
    FringePattern,
    OutcomeHypothesis,
    fringe_spacing,
    fit_visibility,
    hypothesis_visibility,
    screen_intensity,
    wave_number,
    detector_intensity,
)


class ScanError(ValueError):
    pass


@dataclass(frozen=True)
class ScanConfig:
    x_positions: np.ndarray
    photons_per_position: int
    seed: int
    freeze_detectors: bool = False

    def __post_init__(self):
        xs = np.asarray(self.x_positions, dtype=float)
        object.__setattr__(self, "x_positions", xs)
        if xs.ndim != 1 or xs.size < 2:
            raise ScanError("need at least two scan positions")
        if np.any(np.diff(xs) <= 0):
            raise ScanError("scan positions must be strictly increasing")
        if self.photons_per_position < 1:
            raise ScanError("photons_per_position must be >= 1")

    def max_spacing(self) -> float:
        return float(np.max(np.diff(self.x_positions)))

    def check_sampling(self, app: Apparatus) -> None:
        """Grid must resolve the fringe period (a few samples per period)."""
        f_s = fringe_spacing(app)
        if self.max_spacing() > f_s / 2.0:
            raise ScanError(
                f"grid spacing {self.max_spacing():.3g} m exceeds half the "
                f"fringe period {f_s:.3g} m"
            )
        if self.max_spacing() > f_s / 8.0:
            warnings.warn(
                "grid spacing is coarser than an eighth of the fringe period; "
                "visibility estimates may degrade",
                stacklevel=2,
            )


@dataclass(frozen=True)
class ScanRecord:
    x: float
    n1: int
    n2: int
    misdetected: int
    i1_theory: float
    i2_theory: float

    @property
    def n(self) -> int:
        return self.n1 + self.n2


@dataclass(frozen=True)
class ScanSummary:
    records: list[ScanRecord]
    v_total: float
    v_1: float
    v_2: float
    misdetection_rate: float
    hypothesis: OutcomeHypothesis
    seed: int = 0

    def positions(self) -> np.ndarray:
        return np.array([r.x for r in self.records])

    def counts(self) -> np.ndarray:
        return np.array([r.n for r in self.records], dtype=float)


def _position_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def _acceptance_rate(app: Apparatus, x: float, v: float) -> float:
    """Fringe-modulated detection probability at the mirror, in [0, 1]."""
    k = wave_number(app)
    d1, d2 = geometry.path_lengths(app, x)
    g1, g2 = geometry.incidence_angles(app, x)
    return 0.5 * (1.0 + v * np.cos(k * (d1 - d2) + 2.0 * (g1 - g2)))


def _route_rays(
    origins: np.ndarray, directions: np.ndarray, layout: DetectorLayout
) -> np.ndarray:
    """Vectorized ray vs aperture-segment intersection.

    Returns the detector index (1 or 2) crossed by each ray, 0 for neither.
    """
    hit = np.zeros(len(origins), dtype=np.int64)
    for idx, (left, right) in (
        (1, (layout.d1_left, layout.d1_right)),
        (2, (layout.d2_left, layout.d2_right)),
    ):
        seg = right - left
        rel = left - origins
        denom = directions[:, 0] * (-seg[1]) - directions[:, 1] * (-seg[0])
        ok = np.abs(denom) > 0
        t = np.where(ok, (rel[:, 0] * (-seg[1]) + rel[:, 1] * seg[0]) / denom, -1.0)
        s = np.where(
            ok,
            (directions[:, 0] * rel[:, 1] - directions[:, 1] * rel[:, 0]) / denom,
            -1.0,
        )
        crossed = (t > 0) & (s >= 0.0) & (s <= 1.0)
        hit = np.where(crossed & (hit == 0), idx, hit)
    return hit


def photon_event(
    app: Apparatus,
    x: float,
    hyp: OutcomeHypothesis,
    rng: np.random.Generator,
    layout: DetectorLayout | None = None,
) -> tuple[int, int, bool]:
    """Simulate one photon at scan position x.

    Returns (detector, slit, misdetected) where detector is 1, 2, or 0 when
    the photon is not detected (rejected by the fringe rate, or its
    reflected ray misses both apertures).
    """
    if layout is None:
        layout = geometry.detector_layout(app, x)
    slit = 1 if rng.random() < 0.5 else 2
    v = hypothesis_visibility(hyp)
    if rng.random() >= _acceptance_rate(app, x, v):
        return 0, slit, False
    pl = geometry.mirror_placement(app, x)
    p = pl.end_low + rng.random() * (pl.end_high - pl.end_low)
    source = app.slits()[slit - 1]
    direction = geometry.reflect_direction(geometry.unit(p - source), pl.normal)
    detector = int(_route_rays(p[None, :], direction[None, :], layout)[0])
    misdetected = detector != 0 and detector != slit
    return detector, slit, misdetected


def _simulate_position(
    app: Apparatus,
    x: float,
    n_photons: int,
    v: float,
    rng: np.random.Generator,
    layout: DetectorLayout,
) -> tuple[int, int, int]:
    """Batch photon simulation at one position: (n1, n2, misdetected)."""
    slits = rng.integers(1, 3, size=n_photons)
    accept = rng.random(n_photons) < _acceptance_rate(app, x, v)
    mirror_frac = rng.random(n_photons)

    slits = slits[accept]
    mirror_frac = mirror_frac[accept]
    if slits.size == 0:
        return 0, 0, 0
    pl = geometry.mirror_placement(app, x)
    points = pl.end_low[None, :] + mirror_frac[:, None] * (pl.end_high - pl.end_low)
    s1, s2 = app.slits()
    sources = np.where((slits == 1)[:, None], s1[None, :], s2[None, :])
    incident = points - sources
    incident /= np.linalg.norm(incident, axis=1, keepdims=True)
    n = pl.normal
    directions = incident - 2.0 * (incident @ n)[:, None] * n[None, :]
    hits = _route_rays(points, directions, layout)
    n1 = int(np.sum(hits == 1))
    n2 = int(np.sum(hits == 2))
    mis = int(np.sum((hits != 0) & (hits != slits)))
    return n1, n2, mis


def simulate_scan(
    app: Apparatus, config: ScanConfig, hyp: OutcomeHypothesis
) -> ScanSummary:
    """Full photon-counting scan under an outcome hypothesis."""
    config.check_sampling(app)
    x_max = float(max(abs(config.x_positions[0]), abs(config.x_positions[-1])))
    report = design.validate(app, x_max)
    if not report.feasible:
        warnings.warn("apparatus fails design validation; simulating anyway", stacklevel=2)

    v = hypothesis_visibility(hyp)
    frozen = (
        geometry.detector_layout(app, 0.0) if config.freeze_detectors else None
    )
    records = []
    total_mis = 0
    total_n = 0
    for i, x in enumerate(config.x_positions):
        layout = frozen if frozen is not None else geometry.detector_layout(app, x)
        rng = _position_rng(config.seed, i)
        n1, n2, mis = _simulate_position(
            app, float(x), config.photons_per_position, v, rng, layout
        )
        records.append(
            ScanRecord(
                x=float(x),
                n1=n1,
                n2=n2,
                misdetected=mis,
                i1_theory=detector_intensity(app, float(x), 1),
                i2_theory=detector_intensity(app, float(x), 2),
            )
        )
        total_mis += mis
        total_n += n1 + n2

    f_s = fringe_spacing(app)
    xs = config.x_positions

    def fitted(values: np.ndarray) -> float:
        return fit_visibility(FringePattern(xs, values), f_s).visibility

    return ScanSummary(
        records=records,
        v_total=fitted(np.array([r.n for r in records], dtype=float)),
        v_1=fitted(np.array([r.n1 for r in records], dtype=float)),
        v_2=fitted(np.array([r.n2 for r in records], dtype=float)),
        misdetection_rate=(total_mis / total_n) if total_n else 0.0,
        hypothesis=hyp,
        seed=config.seed,
    )


def conventional_scan(app: Apparatus, config: ScanConfig) -> FringePattern:
    """Reference mirror-free experiment: one detector stepped along y = L.

    Counts are drawn with acceptance probability proportional to the plain
    two-beam screen intensity, with the same per-position substreams.
    """
    config.check_sampling(app)
    counts = np.empty(len(config.x_positions))
    for i, x in enumerate(config.x_positions):
        rng = _position_rng(config.seed, i)
        rate = screen_intensity(app, float(x)) / 4.0
        counts[i] = np.sum(rng.random(config.photons_per_position) < rate)
    return FringePattern(config.x_positions, counts)


def compare_distributions(
    reference: FringePattern, scan: ScanSummary
) -> tuple[float, bool]:
    """Pearson chi-squared per degree of freedom of N1+N2 against the
    reference counts, after normalizing to equal totals.  Compatible when
    chi2/dof < 2."""
    xs = scan.positions()
    if len(reference) != len(xs) or not np.allclose(reference.positions, xs):
        raise ScanError("reference and scan use different position grids")
    observed = scan.counts()
    ref = reference.intensities
    total_obs = observed.sum()
    total_ref = ref.sum()
    if total_ref == 0:
        raise ScanError("reference pattern has no counts")
    expected = ref * (total_obs / total_ref)
    mask = expected > 0
    chi2 = float(np.sum((observed[mask] - expected[mask]) ** 2 / expected[mask]))
    dof = int(np.sum(mask)) - 1
    if dof <= 0:
        raise ScanError("not enough populated bins for a comparison")
    per_dof = chi2 / dof
    return per_dof, per_dof < 2.0
