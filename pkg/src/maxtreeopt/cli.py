"""Command line interface.

Subcommands:

* ``tree``      — build the max-tree of an image, dump it as JSON
* ``measures``  — per-maximum measure table as CSV
* ``synth``     — generate a synthetic test image
* ``optimize``  — run a full optimization described by a JSON config

Exit codes: 0 success, 1 input/parse errors, 2 config validation errors,
3 numerical aborts during optimization.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .grid import Connectivity
from .imageio import Image, read_csv_matrix, read_pgm, write_csv_matrix, write_pgm
from .losses import LossConfig
from .maxtree import build_maxtree, leaves
from .measures import MeasureKind, alt_measure, compute_measure, dyn_measure, vol_measure
from .optimizer import OptimConfig, OptimizationError, optimize
from .synth import GENERATORS


class ConfigError(ValueError):
    """Invalid run configuration; collects every problem found."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


_CONNECTIVITIES = {c.value: c for c in Connectivity}
_MEASURES = {k.value: k for k in MeasureKind}


def _load_image(path: Path, connectivity: Connectivity) -> Image:
    if path.suffix.lower() == ".pgm":
        return read_pgm(path, connectivity)
    return read_csv_matrix(path, connectivity)


def _save_image(image: Image, path: Path) -> None:
    if path.suffix.lower() == ".pgm":
        write_pgm(image, path)
    else:
        write_csv_matrix(image, path)


def _measures_csv(image: Image) -> str:
    tree = build_maxtree(image)
    lv = leaves(tree)
    alt = alt_measure(tree)
    dyn = dyn_measure(tree)
    vol = vol_measure(tree)
    lines = ["leaf_node,alt,dyn,vol,saddle_alt_dyn,saddle_vol"]
    for i, leaf in enumerate(lv):
        saddle_dyn_alt = tree.altitude[dyn.saddle[i]]
        saddle_vol_alt = tree.altitude[vol.saddle[i]]
        lines.append(
            f"{leaf},{alt.values[i]:.17g},{dyn.values[i]:.17g},"
            f"{vol.values[i]:.17g},{saddle_dyn_alt:.17g},{saddle_vol_alt:.17g}"
        )
    return "\n".join(lines) + "\n"


def cmd_tree(args) -> int:
    image = _load_image(Path(args.input), _CONNECTIVITIES[args.connectivity])
    dump = build_maxtree(image).to_json()
    if args.output:
        Path(args.output).write_text(dump + "\n", encoding="ascii")
    else:
        print(dump)
    return 0


def cmd_measures(args) -> int:
    image = _load_image(Path(args.input), _CONNECTIVITIES[args.connectivity])
    csv = _measures_csv(image)
    if args.output:
        Path(args.output).write_text(csv, encoding="ascii")
    else:
        sys.stdout.write(csv)
    return 0


def cmd_synth(args) -> int:
    kwargs = {"seed": args.seed}
    for name in ("width", "height", "noise"):
        if getattr(args, name) is not None:
            kwargs[name] = getattr(args, name)
    if args.generator == "two_ridges" and args.gap_x is not None:
        kwargs["gap_x"] = args.gap_x
    image = GENERATORS[args.generator](**kwargs)
    _save_image(image, Path(args.output))
    return 0


# ---------------------------------------------------------------------------
# optimize subcommand: JSON run configuration

_LOSS_DEFAULTS = {
    "ell": 1,
    "margin": 0.1,
    "saliency": "dyn",
    "importance": "dyn",
    "lambda1": 1.0,
    "lambda2": 0.0,
}
_OPTIM_FIELDS = {f.name for f in dataclasses.fields(OptimConfig)}
_OUTPUT_DEFAULTS = {
    "result_image": "result.csv",
    "loss_csv": "loss.csv",
    "maxima_csv": "maxima.csv",
    "snapshot_every": 0,
}
_SYNTH_KEYS = {
    "generator", "width", "height", "noise", "seed", "gap_x", "bumps",
}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    input_path: Path | None
    synth_spec: dict | None
    connectivity: Connectivity
    loss: LossConfig
    optim: OptimConfig
    result_image: Path
    loss_csv: Path
    maxima_csv: Path
    snapshot_every: int


def _check_unknown(section: dict, allowed, prefix: str, problems: list[str]):
    for key in section:
        if key not in allowed:
            problems.append(f"{prefix}{key}: unknown key")


def _number(section, key, default, problems, prefix, kind=float):
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        problems.append(f"{prefix}{key}: expected a number, got {value!r}")
        return default
    if kind is int and int(value) != value:
        problems.append(f"{prefix}{key}: expected an integer, got {value!r}")
        return default
    return kind(value)


def parse_run_config(doc: dict, base_dir: Path) -> RunConfig:
    """Validate a config document, reporting every problem at once."""
    problems: list[str] = []
    if not isinstance(doc, dict):
        raise ConfigError(["top level: expected a JSON object"])
    _check_unknown(
        doc, {"input", "connectivity", "loss", "optim", "outputs"}, "", problems
    )

    conn_name = doc.get("connectivity", "conn8")
    connectivity = _CONNECTIVITIES.get(conn_name)
    if connectivity is None:
        problems.append(
            f"connectivity: {conn_name!r} is not one of {sorted(_CONNECTIVITIES)}"
        )
        connectivity = Connectivity.CONN8

    input_path = None
    synth_spec = None
    raw_input = doc.get("input")
    if raw_input is None:
        problems.append("input: required (a path, {'path': ...} or {'synth': ...})")
    elif isinstance(raw_input, str):
        input_path = base_dir / raw_input
    elif isinstance(raw_input, dict):
        _check_unknown(raw_input, {"path", "synth"}, "input.", problems)
        if ("path" in raw_input) == ("synth" in raw_input):
            problems.append("input: give exactly one of 'path' or 'synth'")
        elif "path" in raw_input:
            input_path = base_dir / str(raw_input["path"])
        else:
            synth_spec = raw_input["synth"]
            if not isinstance(synth_spec, dict):
                problems.append("input.synth: expected an object")
                synth_spec = {}
            else:
                _check_unknown(synth_spec, _SYNTH_KEYS, "input.synth.", problems)
                gen = synth_spec.get("generator")
                if gen not in GENERATORS:
                    problems.append(
                        f"input.synth.generator: {gen!r} is not one of {sorted(GENERATORS)}"
                    )
    else:
        problems.append(f"input: expected a string or object, got {raw_input!r}")

    loss_doc = doc.get("loss", {})
    if not isinstance(loss_doc, dict):
        problems.append("loss: expected an object")
        loss_doc = {}
    _check_unknown(loss_doc, set(_LOSS_DEFAULTS), "loss.", problems)
    ell = _number(loss_doc, "ell", _LOSS_DEFAULTS["ell"], problems, "loss.", int)
    margin = _number(loss_doc, "margin", _LOSS_DEFAULTS["margin"], problems, "loss.")
    lambda1 = _number(loss_doc, "lambda1", _LOSS_DEFAULTS["lambda1"], problems, "loss.")
    lambda2 = _number(loss_doc, "lambda2", _LOSS_DEFAULTS["lambda2"], problems, "loss.")
    kinds = {}
    for key in ("saliency", "importance"):
        name = loss_doc.get(key, _LOSS_DEFAULTS[key])
        if name not in _MEASURES:
            problems.append(f"loss.{key}: {name!r} is not one of {sorted(_MEASURES)}")
            name = "dyn"
        kinds[key] = _MEASURES[name]
    loss_cfg = None
    try:
        loss_cfg = LossConfig(
            target_count=ell,
            margin=margin,
            saliency_kind=kinds["saliency"],
            importance_kind=kinds["importance"],
            lambda1=lambda1,
            lambda2=lambda2,
        )
    except ValueError as exc:
        problems.append(f"loss: {exc}")

    optim_doc = doc.get("optim", {})
    if not isinstance(optim_doc, dict):
        problems.append("optim: expected an object")
        optim_doc = {}
    _check_unknown(optim_doc, _OPTIM_FIELDS, "optim.", problems)
    defaults = OptimConfig()
    optim_kwargs = {}
    for field in dataclasses.fields(OptimConfig):
        kind = int if field.type == "int" else float
        optim_kwargs[field.name] = _number(
            optim_doc, field.name, getattr(defaults, field.name), problems,
            "optim.", kind,
        )
    optim_cfg = None
    try:
        optim_cfg = OptimConfig(**optim_kwargs)
    except ValueError as exc:
        problems.append(f"optim: {exc}")

    out_doc = doc.get("outputs", {})
    if not isinstance(out_doc, dict):
        problems.append("outputs: expected an object")
        out_doc = {}
    _check_unknown(out_doc, set(_OUTPUT_DEFAULTS), "outputs.", problems)
    snapshot_every = _number(
        out_doc, "snapshot_every", 0, problems, "outputs.", int
    )
    if snapshot_every < 0:
        problems.append("outputs.snapshot_every: must be non-negative")

    if problems:
        raise ConfigError(problems)
    return RunConfig(
        input_path=input_path,
        synth_spec=synth_spec,
        connectivity=connectivity,
        loss=loss_cfg,
        optim=optim_cfg,
        result_image=base_dir / str(out_doc.get("result_image", _OUTPUT_DEFAULTS["result_image"])),
        loss_csv=base_dir / str(out_doc.get("loss_csv", _OUTPUT_DEFAULTS["loss_csv"])),
        maxima_csv=base_dir / str(out_doc.get("maxima_csv", _OUTPUT_DEFAULTS["maxima_csv"])),
        snapshot_every=snapshot_every,
    )


def _synth_image(spec: dict, connectivity: Connectivity) -> Image:
    kwargs = {k: v for k, v in spec.items() if k != "generator"}
    if "bumps" in kwargs:
        kwargs["bumps"] = [tuple(b) for b in kwargs["bumps"]]
    return GENERATORS[spec["generator"]](connectivity=connectivity, **kwargs)


def run_optimize(config: RunConfig) -> dict:
    """Execute a validated run configuration and write all artifacts."""
    if config.synth_spec is not None:
        y = _synth_image(config.synth_spec, config.connectivity)
    else:
        y = _load_image(config.input_path, config.connectivity)

    snapshots = []

    def on_iteration(t, image):
        if config.snapshot_every > 0 and t % config.snapshot_every == 0:
            path = config.result_image.with_name(
                f"{config.result_image.stem}_iter{t:05d}.csv"
            )
            write_csv_matrix(image, path)
            snapshots.append(path)

    trajectory = optimize(y, config.loss, config.optim, on_iteration=on_iteration)

    _save_image(trajectory.final_image, config.result_image)
    with open(config.loss_csv, "w", encoding="ascii") as fh:
        fh.write("iter,total,l2,jr,smooth\n")
        for t, row in enumerate(trajectory.loss_log, start=1):
            fh.write(
                f"{t},{row.total:.17g},{row.l2:.17g},{row.jr:.17g},{row.smooth:.17g}\n"
            )
    config.maxima_csv.write_text(
        _measures_csv(trajectory.final_image), encoding="ascii"
    )

    final_tree = build_maxtree(trajectory.final_image)
    saliency = compute_measure(final_tree, config.loss.saliency_kind)
    surviving = int(np.sum(saliency.values > config.loss.margin / 2.0))
    return {
        "stop_reason": trajectory.stop_reason.value,
        "iterations": trajectory.iterations_run,
        "final_loss": trajectory.loss_log[-1].total,
        "surviving_maxima": surviving,
        "snapshots": snapshots,
    }


def cmd_optimize(args) -> int:
    config_path = Path(args.config)
    try:
        doc = json.loads(config_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError([f"{config_path}: {exc}"]) from exc
    config = parse_run_config(doc, config_path.resolve().parent)
    summary = run_optimize(config)
    print(
        f"stop_reason={summary['stop_reason']} "
        f"iterations={summary['iterations']} "
        f"final_loss={summary['final_loss']:.17g} "
        f"surviving_maxima={summary['surviving_maxima']}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxtreeopt",
        description="Max-tree measures and gradient-based maxima selection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("input", help="input image (.csv matrix or .pgm)")
        p.add_argument(
            "--connectivity",
            choices=sorted(_CONNECTIVITIES),
            default="conn8",
        )
        p.add_argument("--output", help="output file (default: stdout)")

    p_tree = sub.add_parser("tree", help="dump the max-tree as JSON")
    add_io(p_tree)
    p_tree.set_defaults(func=cmd_tree)

    p_meas = sub.add_parser("measures", help="per-maximum measure table (CSV)")
    add_io(p_meas)
    p_meas.set_defaults(func=cmd_measures)

    p_synth = sub.add_parser("synth", help="generate a synthetic image")
    p_synth.add_argument("generator", choices=sorted(GENERATORS))
    p_synth.add_argument("--width", type=int, default=None)
    p_synth.add_argument("--height", type=int, default=None)
    p_synth.add_argument("--noise", type=float, default=None)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--gap-x", type=int, default=None, dest="gap_x")
    p_synth.add_argument("--output", required=True)
    p_synth.set_defaults(func=cmd_synth)

    p_opt = sub.add_parser("optimize", help="run an optimization config")
    p_opt.add_argument("config", help="JSON run configuration")
    p_opt.set_defaults(func=cmd_optimize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 2
    except OptimizationError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
