"""
Command-Line Interface
Thin wrappers around the experiments layer with reproducible CSV/JSON output.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource limit.
"""

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError as PydanticValidationError

from config.settings import get_study_config
from src.cli.config import CONFIG_KEYS, RunConfig
from src.cli.output import write_records
from src.models.channels import parse_channel
from src.models.errors import InvalidArgumentError, ResourceLimitError, VerificationError
from src.models.schemas import ChainSpec, FidelityMode, Grid1D
from src.services.experiments import (
    compare_channels,
    default_field_grid,
    default_time_window,
    max_pairwise_difference,
    ordering_study,
    sweep_time_field,
)
from src.services.fidelity import average_fidelity, gamma_fast
from src.services.verification import require_passed, verify_equivalence
from src.utils.helpers import parse_int_range
from src.utils.logging_config import setup_logging
from src.utils.validators import ConfigFileValidator, parse_field_policy, parse_grid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE_LIMIT = 3

SWEEP_JT_GRID = "0:20:0.05"
SWEEP_FIELD_RATIO = (0.0, 1.0, 0.05)  # 2h/|J| start, stop, step

COMMAND_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "compare": {"n": "4..12"},
    "tmax": {"n": "4..12"},
    "ordering": {"n": "6", "h": 1.0},
    "oracle-check": {"n": "2..12"},
}


# ============================================================================
# Helpers
# ============================================================================

def _single_n(cfg: RunConfig) -> int:
    try:
        return int(cfg.n)
    except ValueError as exc:
        raise InvalidArgumentError(f"expected one chain length, got '{cfg.n}'", field="n") from exc


def _n_values(cfg: RunConfig) -> List[int]:
    try:
        values = parse_int_range(cfg.n)
    except ValueError as exc:
        raise InvalidArgumentError(str(exc), field="n", suggested_action="Use e.g. 4..12") from exc
    if not values or min(values) < 2:
        raise InvalidArgumentError("chain lengths must be >= 2", field="n")
    return values


def _meta(cfg: RunConfig, **extra: Any) -> Dict[str, Any]:
    return {"command": cfg.command, "mode": cfg.mode.value, "config": cfg.echo(), **extra}


# ============================================================================
# Subcommands
# ============================================================================

def cmd_fidelity(cfg: RunConfig) -> int:
    """One fidelity record with its Γ values."""
    n = _single_n(cfg)
    spec = ChainSpec(n_sites=n, coupling=cfg.coupling, field=cfg.h)
    pair = parse_channel(cfg.channel, n)
    gammas = gamma_fast(spec, pair, cfg.jt / abs(cfg.coupling))
    record = {
        "n": n,
        "channel": pair.label,
        "h": cfg.h,
        "jt": cfg.jt,
        "mode": cfg.mode,
        "fidelity": average_fidelity(gammas, cfg.mode),
        "gamma1": gammas.gamma1,
        "gamma2": gammas.gamma2,
        "gamma3": gammas.gamma3,
        "gamma4": gammas.gamma4,
        "gamma5_re": gammas.gamma5.real,
        "gamma5_im": gammas.gamma5.imag,
    }
    write_records([record], list(record), cfg.format, _meta(cfg), cfg.output)
    return EXIT_OK


def _sweep_field_grid(coupling: float) -> Grid1D:
    start, stop, step = (abs(coupling) / 2.0 * r for r in SWEEP_FIELD_RATIO)
    return Grid1D(start=start, stop=stop, step=step)


def cmd_sweep(cfg: RunConfig) -> int:
    """Fidelity over a (Jt, h) grid, row-major with Jt outermost."""
    n = _single_n(cfg)
    spec = ChainSpec(n_sites=n, coupling=cfg.coupling, field=cfg.h)
    pair = parse_channel(cfg.channel, n)
    t_grid = parse_grid(cfg.jt_grid or SWEEP_JT_GRID, "jt_grid")
    h_grid = parse_grid(cfg.h_grid, "h_grid") if cfg.h_grid else _sweep_field_grid(cfg.coupling)

    result = sweep_time_field(spec, pair, t_grid, h_grid, cfg.mode, cfg.workers)
    records = [
        {"jt": float(jt), "h": float(h), "fidelity": float(result.values[i, j])}
        for i, jt in enumerate(result.times)
        for j, h in enumerate(result.fields)
    ]
    f_best, jt_best, h_best = result.argmax()
    logger.info(f"Sweep maximum F={f_best:.6f} at Jt={jt_best:g}, h={h_best:g}")
    write_records(records, ["jt", "h", "fidelity"], cfg.format,
                  _meta(cfg, channel=pair.label), cfg.output)
    return EXIT_OK


def _channel_table(cfg: RunConfig, columns: Sequence[str]) -> int:
    window = parse_grid(cfg.jt_grid, "jt_grid") if cfg.jt_grid else default_time_window()
    h_grid = parse_grid(cfg.h_grid, "h_grid") if cfg.h_grid else default_field_grid()
    policy = parse_field_policy(cfg.h_policy, h_grid)

    rows = compare_channels(_n_values(cfg), policy, cfg.mode, window, cfg.coupling, cfg.workers)
    by_n: Dict[int, Dict[str, Any]] = {}
    for row in rows:
        by_n.setdefault(row.n_sites, {})[row.channel] = row
    # with the field optimized both channels are expected to reach the same optimum
    for n, pair in by_n.items():
        fm, neel = pair.get("fm"), pair.get("neel")
        if policy.kind != "optimal" or not (fm and neel):
            continue
        if abs(fm.f_max - neel.f_max) > 1e-3 or abs(fm.t_max - neel.t_max) > 1e-3:
            logger.warning(
                f"N={n}: FM (F={fm.f_max:.6f}, Jt={fm.t_max:.4f}) and "
                f"Néel (F={neel.f_max:.6f}, Jt={neel.t_max:.4f}) differ"
            )

    records = [
        {"n": r.n_sites, "channel": r.channel, "f_max": r.f_max, "t_max": r.t_max,
         "h_star": r.h_star, "mode": r.mode}
        for r in rows
    ]
    write_records(records, columns, cfg.format, _meta(cfg, h_policy=policy.describe()), cfg.output)
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    """Fmax versus N for the FM-ground and Néel channels."""
    return _channel_table(cfg, ["n", "channel", "f_max", "t_max", "h_star", "mode"])


def cmd_tmax(cfg: RunConfig) -> int:
    """Arrival time Tmax versus N for the FM-ground and Néel channels."""
    return _channel_table(cfg, ["n", "channel", "t_max", "f_max", "h_star", "mode"])


def _parse_patterns(text: str) -> List[List[int]]:
    try:
        return [[int(s) for s in group.split(",") if s.strip()] for group in text.split(";") if group.strip()]
    except ValueError as exc:
        raise InvalidArgumentError(
            f"cannot parse patterns '{text}'",
            field="patterns",
            suggested_action="Separate site lists with ';', e.g. 2,3,4;3,4,5",
        ) from exc


def cmd_ordering(cfg: RunConfig) -> int:
    """Fidelity of reordered channels at the reference arrival time."""
    if cfg.preset:
        preset = get_study_config().get_ordering(cfg.preset)
        if preset is None:
            raise InvalidArgumentError(f"unknown preset '{cfg.preset}'", field="preset")
        n, field, coupling = preset.n_sites, preset.field, preset.coupling
        patterns, reference = preset.patterns, preset.reference
    else:
        if not cfg.patterns:
            raise InvalidArgumentError("give --patterns or --preset", field="patterns")
        n, field, coupling = _single_n(cfg), cfg.h, cfg.coupling
        patterns, reference = _parse_patterns(cfg.patterns), cfg.reference

    spec = ChainSpec(n_sites=n, coupling=coupling, field=field)
    window = parse_grid(cfg.jt_grid, "jt_grid") if cfg.jt_grid else default_time_window()
    rows = ordering_study(spec, patterns, parse_channel(reference, n), cfg.mode, window, cfg.workers)
    logger.info(f"Largest pairwise |dF| = {max_pairwise_difference(rows):.3e}")

    records = [
        {"pattern": r.pattern, "excitations": r.excitations, "jt": r.t_eval,
         "fidelity": r.fidelity, "delta": r.delta}
        for r in rows
    ]
    write_records(records, ["pattern", "excitations", "jt", "fidelity", "delta"], cfg.format,
                  _meta(cfg, n=n, h=field), cfg.output)
    return EXIT_OK


def cmd_oracle_check(cfg: RunConfig) -> int:
    """Cross-check the direct, fast and oracle evaluators."""
    report = verify_equivalence(
        _n_values(cfg),
        draws=cfg.draws,
        tolerance=cfg.tolerance,
        seed=cfg.seed,
        include_oracle=cfg.oracle,
        coupling=cfg.coupling,
    )
    records = [
        {"n": c.n_sites, "channel": c.channel, "jt": c.jt, "h": c.field,
         "fast_vs_direct": c.fast_vs_direct,
         "direct_vs_oracle": c.direct_vs_oracle if c.direct_vs_oracle is not None else "-"}
        for c in report.cases
    ]
    write_records(records, ["n", "channel", "jt", "h", "fast_vs_direct", "direct_vs_oracle"],
                  cfg.format, _meta(cfg, passed=report.passed, worst=report.worst), cfg.output)
    require_passed(report)
    print(f"PASS: worst deviation {report.worst:.3e} over {len(report.cases)} cases",
          file=sys.stderr)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "fidelity": cmd_fidelity,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
    "tmax": cmd_tmax,
    "ordering": cmd_ordering,
    "oracle-check": cmd_oracle_check,
}


# ============================================================================
# Parser
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", help="chain length N, or a range such as 4..12")
    common.add_argument("--coupling", type=float, help="exchange constant J (default 1.0)")
    common.add_argument("--channel", help="'neel', 'fm' or a site list like 2,4,6")
    common.add_argument("--h", type=float, help="field h")
    common.add_argument("--mode", choices=[m.value for m in FidelityMode])
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--output", help="output path (default: stdout)")
    common.add_argument("--workers", type=int, help="worker processes")
    common.add_argument("--seed", type=int, help="random seed for sampled studies")
    common.add_argument("--config", help="key=value file; flags override its values")
    common.add_argument("--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="spinxfer",
        description="SpinXfer - state transfer through multi-excitation XY spin chains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fidelity", parents=[common], help="fidelity at one (Jt, h)")
    p.add_argument("--jt", type=float, help="time as Jt")

    p = sub.add_parser("sweep", parents=[common], help="fidelity over a Jt x h grid")
    p.add_argument("--jt-grid", dest="jt_grid", help=f"start:stop:step (default {SWEEP_JT_GRID})")
    p.add_argument("--h-grid", dest="h_grid", help="start:stop:step (default 2h/|J| from 0 to 1 in steps of 0.05)")

    for name in ("compare", "tmax"):
        p = sub.add_parser(name, parents=[common], help=f"{name} table versus N")
        p.add_argument("--h-policy", dest="h_policy", help="fixed:<h> or optimal")
        p.add_argument("--jt-grid", dest="jt_grid", help="time window start:stop:step")
        p.add_argument("--h-grid", dest="h_grid", help="field grid for optimal policy")

    p = sub.add_parser("ordering", parents=[common], help="excitation-ordering study")
    p.add_argument("--patterns", help="site lists separated by ';', e.g. 2,3,4;3,4,5")
    p.add_argument("--preset", help="preset key from the study config")
    p.add_argument("--reference", help="reference channel (default neel)")
    p.add_argument("--jt-grid", dest="jt_grid", help="time window start:stop:step")

    p = sub.add_parser("oracle-check", parents=[common], help="evaluator cross-check")
    p.add_argument("--draws", type=int, help="random (Jt, h) draws per N")
    p.add_argument("--tolerance", type=float, help="pass threshold")
    p.add_argument("--no-oracle", dest="oracle", action="store_const", const=False,
                   help="skip exact diagonalization")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge command defaults, config file and flags into a RunConfig."""
    values: Dict[str, Any] = dict(COMMAND_DEFAULTS.get(args.command, {}))
    if args.config:
        values.update(ConfigFileValidator(CONFIG_KEYS).load(args.config))
    flags = {k: v for k, v in vars(args).items()
             if k in CONFIG_KEYS and v is not None}
    values.update(flags)
    return RunConfig(command=args.command, **values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging("DEBUG" if args.verbose else None)

    try:
        cfg = resolve_config(args)
        return COMMANDS[cfg.command](cfg)
    except (InvalidArgumentError, PydanticValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return EXIT_VERIFICATION_FAILED
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE_LIMIT


if __name__ == "__main__":
    sys.exit(main())
