"""
Experiments Service
Time/field sweeps, maximum-fidelity searches, channel comparisons and
excitation-ordering studies.

Times cross this layer as Jt; internally t = Jt/|J|. Work is split into
fixed-size time chunks so results are bitwise identical for any worker count.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from src.models.channels import custom_channel, fm_ground_channel, neel_channel
from src.models.errors import InvalidArgumentError, ResourceLimitError
from src.models.schemas import (
    BranchPair,
    ChainSpec,
    ChannelComparisonRow,
    FidelityMode,
    FieldPolicy,
    Grid1D,
    OptimumResult,
    OrderingRow,
    SweepResult,
)
from src.services.fidelity import (
    average_fidelity,
    fidelity_from_arrays,
    gamma_fast,
    gamma_fast_batch,
)
from src.services.search import golden_section_max

logger = logging.getLogger(__name__)

GammaArrays = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]

_CANDIDATES = 8


# ============================================================================
# Work Distribution
# ============================================================================

def _run(fn: Callable, tasks: List, workers: Optional[int]) -> List:
    """Map fn over tasks, in order, optionally across processes."""
    workers = settings.DEFAULT_WORKERS if workers is None else workers
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _chunks(values: np.ndarray) -> List[np.ndarray]:
    size = settings.TIME_CHUNK
    return [values[i:i + size] for i in range(0, values.size, size)]


def _gamma_task(task: Tuple[ChainSpec, BranchPair, np.ndarray]) -> GammaArrays:
    spec, pair, times = task
    return gamma_fast_batch(spec, pair, times)


def _times(spec: ChainSpec, jts: Sequence[float]) -> np.ndarray:
    return np.asarray(jts, dtype=float) / abs(spec.coupling)


def gamma_series(
    spec: ChainSpec,
    pair: BranchPair,
    jts: Sequence[float],
    workers: Optional[int] = None,
) -> GammaArrays:
    """Γ1..Γ5 over an array of Jt values."""
    tasks = [(spec, pair, chunk) for chunk in _chunks(_times(spec, jts))]
    parts = _run(_gamma_task, tasks, workers)
    return tuple(np.concatenate([p[k] for p in parts]) for k in range(5))


def fidelity_at(
    spec: ChainSpec,
    pair: BranchPair,
    jt: float,
    mode: FidelityMode = FidelityMode.STRICT,
) -> float:
    """Average fidelity at one Jt."""
    return average_fidelity(gamma_fast(spec, pair, jt / abs(spec.coupling)), mode)


# ============================================================================
# Sweeps
# ============================================================================

def sweep_time_field(
    spec: ChainSpec,
    pair: BranchPair,
    t_grid: Grid1D,
    h_grid: Grid1D,
    mode: FidelityMode = FidelityMode.STRICT,
    workers: Optional[int] = None,
) -> SweepResult:
    """
    Average fidelity on a (Jt, h) grid; spec.field is replaced by each grid field.

    Γ is evaluated once per time at zero field; each grid field only rotates
    Γ5 by exp(2iht).

    Raises:
        ResourceLimitError: If the grid exceeds SWEEP_MAX_CELLS
    """
    cells = t_grid.size * h_grid.size
    if cells > settings.SWEEP_MAX_CELLS:
        raise ResourceLimitError(
            f"sweep of {cells} cells exceeds the limit {settings.SWEEP_MAX_CELLS}",
            field="grid",
            suggested_action="Coarsen the time or field grid",
        )
    jts = t_grid.points()
    fields = h_grid.points()
    times = _times(spec, jts)
    logger.debug(f"Sweep {jts.size} x {fields.size}, Γ at zero field in {len(_chunks(times))} work units")
    g1, g2, g3, g4, g5 = gamma_series(spec.with_field(0.0), pair, jts, workers)

    values = np.empty((jts.size, fields.size))
    for j, h in enumerate(fields):
        rotated = g5 * np.exp(2j * h * times)
        values[:, j] = fidelity_from_arrays(g1, g2, g3, g4, rotated, mode)
    values = np.clip(values, 0.0, 1.0)

    return SweepResult(times=jts, fields=fields, values=values, channel=pair.label, mode=mode)


# ============================================================================
# Maximum Search
# ============================================================================

def _local_maxima(values: np.ndarray) -> np.ndarray:
    if values.size == 1:
        return np.array([0])
    left = np.concatenate([[-np.inf], values[:-1]])
    right = np.concatenate([values[1:], [-np.inf]])
    return np.flatnonzero((values >= left) & (values >= right))


def default_time_window() -> Grid1D:
    return Grid1D(
        start=settings.DEFAULT_T_START,
        stop=settings.DEFAULT_T_STOP,
        step=settings.DEFAULT_T_STEP,
    )


def default_field_grid() -> Grid1D:
    return Grid1D(
        start=settings.DEFAULT_H_START,
        stop=settings.DEFAULT_H_STOP,
        step=settings.DEFAULT_H_STEP,
    )


def aligned_coherence(
    gamma5: np.ndarray,
    times: np.ndarray,
    field_range: Tuple[float, float],
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Largest Re(Γ5(t; h)) over h in field_range, and the smallest field reaching it.

    Γ5(t; h) = Γ5(t; 0) exp(2iht), so the real part peaks wherever
    arg Γ5(t; 0) + 2ht is a multiple of 2 pi. When no such h lies in the range
    the better endpoint wins.

    Args:
        gamma5: Γ5 at zero field, one entry per time
        times: Raw times t (not Jt)
        field_range: (lowest, highest) admissible field
    """
    lo, hi = field_range
    gamma5 = np.asarray(gamma5, dtype=complex)
    times = np.asarray(times, dtype=float)
    phase = np.angle(gamma5)
    magnitude = np.abs(gamma5)

    fields = np.full(times.shape, lo)
    coherence = magnitude * np.cos(phase + 2.0 * lo * times)

    moving = times > 0
    t = times[moving]
    k = np.ceil((phase[moving] + 2.0 * lo * t) / (2.0 * np.pi))
    aligned = (2.0 * np.pi * k - phase[moving]) / (2.0 * t)
    at_hi = magnitude[moving] * np.cos(phase[moving] + 2.0 * hi * t)

    inside = aligned <= hi
    best = np.where(inside, magnitude[moving], np.maximum(coherence[moving], at_hi))
    best_field = np.where(
        inside, aligned, np.where(at_hi > coherence[moving], hi, lo)
    )
    coherence[moving] = best
    fields[moving] = best_field
    return coherence, fields


def find_fmax(
    spec: ChainSpec,
    pair: BranchPair,
    t_window: Optional[Grid1D] = None,
    mode: FidelityMode = FidelityMode.STRICT,
    policy: Optional[FieldPolicy] = None,
    workers: Optional[int] = None,
    tie_tol: Optional[float] = None,
    refine_tol: Optional[float] = None,
) -> OptimumResult:
    """
    Maximum average fidelity over a Jt window, optionally over a field range.

    A coarse scan over the window is followed by golden-section refinement in Jt
    of the best local maxima. The earliest maximizer within tie_tol of the best
    refined value wins; equal times go to the smaller field.

    Γ1..Γ4 do not depend on h and Γ5(t; h) = Γ5(t; 0) exp(2iht), so the whole
    scan reuses one set of Γ arrays. With the field optimized, every time point
    takes the best field inside the policy grid's range, found by solving the
    phase condition rather than by sampling the grid. Refined values come from
    zero-field Γ rotated to the reported h.

    Raises:
        InvalidArgumentError: If the window starts before Jt = 0
        ResourceLimitError: If the window holds more than WINDOW_MAX_POINTS
    """
    window = t_window or default_time_window()
    policy = policy or FieldPolicy.fixed(spec.field)
    tie_tol = settings.TIE_TOL if tie_tol is None else tie_tol
    refine_tol = settings.REFINEMENT_TOL if refine_tol is None else refine_tol
    if window.start < 0:
        raise InvalidArgumentError("time window must start at Jt >= 0", field="t_window")
    if window.size > settings.WINDOW_MAX_POINTS:
        raise ResourceLimitError(
            f"time window of {window.size} points exceeds the limit {settings.WINDOW_MAX_POINTS}",
            field="t_window",
            suggested_action="Use a coarser Jt step; refinement recovers the peak",
        )

    optimize = policy.kind == "optimal"
    if optimize:
        grid = policy.grid or default_field_grid()
        field_range = (float(grid.start), float(grid.stop))
    else:
        field_range = (policy.field, policy.field)

    base = spec.with_field(0.0)
    jts = window.points()
    g1, g2, g3, g4, g5 = gamma_series(base, pair, jts, workers)
    if mode is FidelityMode.STRICT:
        coherence, _ = aligned_coherence(g5, _times(spec, jts), field_range)
    else:
        coherence = np.abs(g5)
    envelope = fidelity_from_arrays(g1, g2, g3, g4, coherence, FidelityMode.STRICT)
    coarse_max = float(envelope.max())

    peaks = _local_maxima(envelope)
    order = sorted(peaks, key=lambda i: (-envelope[i], i))[:_CANDIDATES]

    def evaluate_with_field(jt: float) -> Tuple[float, float]:
        t = jt / abs(spec.coupling)
        gammas = gamma_fast(base, pair, t)
        field = field_range[0]
        if optimize and mode is FidelityMode.STRICT:
            _, fields = aligned_coherence(np.array([gammas.gamma5]), np.array([t]), field_range)
            field = float(fields[0])
        return average_fidelity(gammas.shifted(field, t), mode), field

    def evaluate(jt: float) -> float:
        return evaluate_with_field(jt)[0]

    dt = window.spacing
    refined = []
    for i in order:
        jt0 = float(jts[i])
        value, field = evaluate_with_field(jt0)
        t_lo, t_hi = max(jt0 - dt, window.start), min(jt0 + dt, window.stop)
        if t_hi > t_lo:
            jt1, _ = golden_section_max(evaluate, t_lo, t_hi, refine_tol)
            v1, h1 = evaluate_with_field(jt1)
            if v1 > value:
                jt0, value, field = jt1, v1, h1
        refined.append((value, jt0, field))

    best = max(v for v, _, _ in refined)
    f_max, t_max, h_star = min(
        (r for r in refined if r[0] >= best - tie_tol),
        key=lambda r: (r[1], r[2]),
    )
    logger.info(
        f"Fmax={f_max:.6f} at Jt={t_max:.6f}, h={h_star:.6f} "
        f"(N={spec.n_sites}, channel={pair.label}, {policy.describe()})"
    )
    return OptimumResult(
        f_max=min(max(f_max, 0.0), 1.0),
        t_max=t_max,
        h_star=h_star,
        mode=mode,
        refinement_tol=refine_tol,
        coarse_max=coarse_max,
    )


# ============================================================================
# Studies
# ============================================================================

def compare_channels(
    n_values: Iterable[int],
    policy: FieldPolicy,
    mode: FidelityMode = FidelityMode.STRICT,
    t_window: Optional[Grid1D] = None,
    coupling: float = 1.0,
    workers: Optional[int] = None,
) -> List[ChannelComparisonRow]:
    """Fmax and Tmax versus N for the FM-ground and Néel channels."""
    rows = []
    for n in n_values:
        spec = ChainSpec(n_sites=n, coupling=coupling, field=policy.field)
        for pair in (fm_ground_channel(n), neel_channel(n)):
            result = find_fmax(spec, pair, t_window, mode, policy, workers)
            rows.append(
                ChannelComparisonRow(
                    n_sites=n,
                    channel=pair.label,
                    f_max=result.f_max,
                    t_max=result.t_max,
                    h_star=result.h_star,
                    mode=mode,
                )
            )
    return rows


def ordering_study(
    spec: ChainSpec,
    patterns: Sequence[Sequence[int]],
    reference_pair: Optional[BranchPair] = None,
    mode: FidelityMode = FidelityMode.STRICT,
    t_window: Optional[Grid1D] = None,
    workers: Optional[int] = None,
) -> List[OrderingRow]:
    """
    Fidelity of each channel ordering at the reference channel's arrival time.

    The first row is the reference itself; `delta` is F(pattern) - F(reference).

    Raises:
        InvalidArgumentError: If the patterns hold different excitation counts
    """
    reference = reference_pair or neel_channel(spec.n_sites)
    pairs = [custom_channel(spec.n_sites, p) for p in patterns]
    counts = {reference.m1} | {p.m1 for p in pairs}
    if len(counts) != 1:
        raise InvalidArgumentError(
            f"patterns hold different excitation counts {sorted(counts)}",
            field="patterns",
            suggested_action="Compare orderings of the same number of excitations",
        )

    optimum = find_fmax(spec, reference, t_window, mode, FieldPolicy.fixed(spec.field), workers)
    t_eval = optimum.t_max
    f_ref = fidelity_at(spec, reference, t_eval, mode)

    rows = [OrderingRow(pattern=reference.label, excitations=reference.m1, t_eval=t_eval,
                        fidelity=f_ref, delta=0.0)]
    for pair in pairs:
        value = fidelity_at(spec, pair, t_eval, mode)
        rows.append(
            OrderingRow(
                pattern=pair.label,
                excitations=pair.m1,
                t_eval=t_eval,
                fidelity=value,
                delta=value - f_ref,
            )
        )
    return rows


def max_pairwise_difference(rows: Sequence[OrderingRow]) -> float:
    """Largest |F_a - F_b| over all pairs of rows."""
    values = np.array([r.fidelity for r in rows])
    return float(values.max() - values.min()) if values.size else 0.0
