"""Command-line entry point: ``compulse {profile,scan2d,solve,list,export-seq,figure}``.

Exit status: 0 on success, 2 on usage errors (including unknown sequence
labels), 3 when ``solve`` does not converge.
"""

import argparse
import json
import re
import sys
from pathlib import Path

from . import __version__, scan, sequences, solver, svg
from ._jit import set_threads
from .noise import NoiseParams

try:
    import tomllib
except ImportError:  # python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_USAGE, EXIT_NOCONVERGE = 0, 2, 3

DEFAULTS = {
    "family": None,
    "n": None,
    "inner_n": None,
    "p": None,
    "label": None,
    "universal": None,
    "sequence_file": None,
    "grid": None,
    "grid2d": "-1:1:101",
    "refine": "none",
    "noise": "off",
    "out": None,
    "format": "csv",
    "seed": 0,
    "restarts": 64,
    "conditions": None,
}


class UsageError(Exception):
    pass


def load_config(path):
    path = Path(path)
    text = path.read_text()
    doc = json.loads(text) if path.suffix == ".json" else tomllib.loads(text)
    return {k.replace("-", "_"): v for k, v in doc.items()}


def merged(args, config):
    """Flags win over the config file, which wins over built-in defaults."""
    out = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            out[key] = flag
        elif key in config:
            out[key] = config[key]
        else:
            out[key] = default
    for key in ("noise_params",):
        if key in config:
            out[key] = config[key]
    return out


def resolve_sequence(opts):
    if opts.get("sequence_file"):
        return sequences.Sequence.from_json(Path(opts["sequence_file"]).read_text())
    family, label = opts.get("family"), opts.get("label")
    if opts.get("universal"):
        family, label = "universal", opts["universal"]
    if family is None:
        raise UsageError("choose a sequence with --family (or --universal LABEL / --sequence-file PATH)")
    try:
        return sequences.build(family, n=opts.get("n"), inner_n=opts.get("inner_n"), p=opts.get("p"), label=label)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def resolve_noise(opts):
    spec = opts.get("noise") or "off"
    if "noise_params" in opts:
        return NoiseParams.from_mapping(opts["noise_params"])
    if spec == "off":
        return None
    if spec == "default":
        return NoiseParams()
    if spec.startswith("file="):
        return NoiseParams.from_file(spec[len("file=") :])
    raise UsageError(f"--noise must be off, default or file=PATH, got {spec!r}")


def grid_1d(opts):
    lo, hi, n = scan.GridSpec.parse_axis(opts.get("grid") or "-1:1:201")
    return scan.GridSpec(lo, hi, n, 0.0, 0.0, 1, refine=opts.get("refine") or "none")


def grid_2d(opts):
    lo, hi, n = scan.GridSpec.parse_axis(opts.get("grid") or "-1:1:101")
    dlo, dhi, dn = scan.GridSpec.parse_axis(opts.get("grid2d") or "-1:1:101")
    return scan.GridSpec(lo, hi, n, dlo, dhi, dn)


def records_json(seq, records, metrics=None):
    doc = {"sequence": seq.to_dict(), "records": []}
    for r in records:
        row = {"epsilon": r.epsilon, "delta": r.delta, "p_ideal": r.probability_ideal}
        if r.probability_noisy is not None:
            row["p_noisy"] = r.probability_noisy
        doc["records"].append(row)
    if metrics is not None:
        doc["metrics"] = metrics.__dict__
    return json.dumps(doc, indent=1) + "\n"


def write_output(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def cmd_profile(opts):
    seq = resolve_sequence(opts)
    records = scan.scan_1d(seq, grid_1d(opts), resolve_noise(opts))
    fmt = opts["format"]
    if fmt == "csv":
        text = scan.format_csv(records)
    elif fmt == "json":
        text = records_json(seq, records, scan.profile_metrics(records))
    else:
        text = svg.emit_svg(records, "line", title=seq.label, label=seq.label)
    write_output(text, opts["out"])
    return EXIT_OK


def cmd_scan2d(opts):
    seq = resolve_sequence(opts)
    records = scan.scan_2d(seq, grid_2d(opts), resolve_noise(opts))
    fmt = opts["format"]
    if fmt == "csv":
        text = scan.format_csv(records)
    elif fmt == "json":
        text = records_json(seq, records)
    else:
        text = svg.emit_svg(records, "heatmap", title=seq.label)
    write_output(text, opts["out"])
    return EXIT_OK


SOLVE_TEMPLATES = {
    "theta-bb": ("theta", solver.ExpansionPoint.AT_ZERO_ERROR),
    "theta-nb": ("theta", solver.ExpansionPoint.AT_ZERO_FIELD),
    "bb": ("pi", solver.ExpansionPoint.AT_ZERO_ERROR),
    "nb": ("pi", solver.ExpansionPoint.AT_ZERO_FIELD),
}


def cmd_solve(opts):
    family = opts.get("family")
    if family not in SOLVE_TEMPLATES:
        raise UsageError(f"solve supports --family {', '.join(SOLVE_TEMPLATES)}")
    if opts.get("n") is None:
        raise UsageError("solve needs --n (number of pulses)")
    kind, point = SOLVE_TEMPLATES[family]
    try:
        if kind == "theta":
            if opts.get("p") is None:
                raise UsageError("theta solves need --p")
            problem = solver.SolveProblem.theta(int(opts["n"]), float(opts["p"]), point, opts.get("conditions"))
        else:
            problem = solver.SolveProblem.pi_pulses(int(opts["n"]), point, opts.get("conditions"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = solver.solve(problem, n_restarts=int(opts["restarts"]), seed=int(opts["seed"]))
    write_output(result.report_json(problem), opts["out"])
    return EXIT_OK if result.converged else EXIT_NOCONVERGE


def cmd_list(opts):
    lines = []
    for family, entries in sequences.catalogue().items():
        lines.append(f"{family}: {', '.join(entries)}")
    write_output("\n".join(lines) + "\n", opts["out"])
    return EXIT_OK


def cmd_export_seq(opts):
    write_output(resolve_sequence(opts).to_json(), opts["out"])
    return EXIT_OK


# ---------------------------------------------------------------------------
# figure recipes


def slug(text):
    return re.sub(r"[^A-Za-z0-9.]+", "_", text).strip("_")


def run_recipe(path, out_dir):
    """Render every panel of a recipe; returns the written paths in order."""
    recipe = load_config(path)
    kind = recipe.get("kind", "profile")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for panel in recipe.get("panel", []):
        opts = dict(DEFAULTS)
        opts.update({k: v for k, v in recipe.items() if k in DEFAULTS})
        opts.update({k: v for k, v in panel.items() if k in DEFAULTS})
        noise = resolve_noise(opts)
        name = panel["name"]
        series = []
        for entry in panel["series"]:
            sopts = dict(opts)
            sopts.update({k.replace("-", "_"): v for k, v in entry.items()})
            seq = resolve_sequence(sopts)
            label = entry.get("legend", seq.label)
            if kind == "profile":
                records = scan.scan_1d(seq, grid_1d(opts), noise)
                csv_path = out_dir / f"{name}_{slug(seq.label)}.csv"
                csv_path.write_text(scan.format_csv(records))
                written.append(csv_path)
                eps, p = scan.as_arrays(records)
                series.append(svg.Series(label, eps, p, reference=seq.family is sequences.Family.SINGLE))
            elif kind == "scan2d":
                grid = grid_2d(opts)
                records = scan.scan_2d(seq, grid, noise)
                stem = out_dir / f"{name}_{slug(seq.label)}"
                stem.with_suffix(".csv").write_text(scan.format_csv(records))
                vals = [r.probability_noisy if noise is not None else r.probability_ideal for r in records]
                stem.with_suffix(".svg").write_text(svg.heatmap(grid.eps_axis, grid.delta_axis, vals, title=label))
                written += [stem.with_suffix(".csv"), stem.with_suffix(".svg")]
            else:
                raise UsageError(f"unknown recipe kind {kind!r}")
        if kind == "profile":
            svg_path = out_dir / f"{name}.svg"
            svg_path.write_text(svg.line_plot(series, title=panel.get("title", name)))
            written.append(svg_path)
    return written


def cmd_figure(opts, recipe, out_dir):
    for path in run_recipe(recipe, out_dir):
        print(path)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _selector_flags(p):
    p.add_argument("--family", choices=[f.value for f in sequences.Family if f is not sequences.Family.CUSTOM])
    p.add_argument("--n", type=int, help="number of pulses (outer block count for passband families)")
    p.add_argument("--inner-n", dest="inner_n", type=int, help="inner block length for passband families")
    p.add_argument("--p", type=float, help="target transition probability for theta families")
    p.add_argument("--label", help="table label, e.g. U5a")
    p.add_argument("--universal", metavar="LABEL", help="shorthand for --family universal --label LABEL")
    p.add_argument("--sequence-file", dest="sequence_file", help="sequence JSON written by export-seq")


def _common(p, formats=("csv", "json", "svg")):
    p.add_argument("--config", help="TOML or JSON file with default option values")
    p.add_argument("--out", help="output path (stdout if omitted)")
    p.add_argument("--format", choices=formats)


def build_parser():
    parser = argparse.ArgumentParser(prog="compulse", description="Composite pulse profiles, phase solving and figure recipes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="1-D excitation profile versus Rabi-frequency error")
    _selector_flags(p)
    _common(p)
    p.add_argument("--grid", help="epsilon axis as min:max:points (default -1:1:201)")
    p.add_argument("--refine", choices=["none", "center"])
    p.add_argument("--noise", help="off, default, or file=PATH")

    p = sub.add_parser("scan2d", help="2-D map versus Rabi-frequency error and detuning")
    _selector_flags(p)
    _common(p)
    p.add_argument("--grid", help="epsilon axis as min:max:points (default -1:1:101)")
    p.add_argument("--grid2d", help="detuning axis as min:max:points (default -1:1:101)")
    p.add_argument("--noise", help="off, default, or file=PATH")

    p = sub.add_parser("solve", help="recover phases by cancelling expansion terms")
    p.add_argument("--family", choices=list(SOLVE_TEMPLATES))
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--conditions", type=int, help="condition count (default: n - 1)")
    p.add_argument("--restarts", type=int)
    p.add_argument("--seed", type=int)
    _common(p, formats=("json",))

    p = sub.add_parser("list", help="list available families and table labels")
    _common(p, formats=("text",))

    p = sub.add_parser("export-seq", help="write a sequence as JSON")
    _selector_flags(p)
    _common(p, formats=("json",))

    p = sub.add_parser("figure", help="render a figure recipe (TOML)")
    p.add_argument("recipe")
    p.add_argument("--out-dir", default="figures-out")
    return parser


COMMANDS = {
    "profile": cmd_profile,
    "scan2d": cmd_scan2d,
    "solve": cmd_solve,
    "list": cmd_list,
    "export-seq": cmd_export_seq,
}


def _join_negative_ranges(argv):
    """Let ``--grid -1:1:201`` through; argparse would read ``-1:1:201`` as an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--grid", "--grid2d"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_negative_ranges(argv))
    except SystemExit as exc:  # argparse usage errors, --help, --version
        return exc.code
    set_threads()
    try:
        if args.command == "figure":
            return cmd_figure({}, args.recipe, args.out_dir)
        config = load_config(args.config) if getattr(args, "config", None) else {}
        opts = merged(args, config)
        if args.command == "solve":
            opts["format"] = "json"
        return COMMANDS[args.command](opts)
    except UsageError as exc:
        print(f"compulse: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, OSError) as exc:
        print(f"compulse: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
