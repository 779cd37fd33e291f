"""Command-line front end: analyze, simulate, generate, check-distributed, batch.

Exit codes: 0 success, 1 input error, 2 certificate verification failure,
3 distributed-condition failure.  Analysis and simulation reports render
matplotlib figures next to their JSON/CSV outputs unless --no-figures is
given; the delimited outputs stay the canonical, byte-deterministic ones.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import generate
from .certificates import CertificateError, classify_stability
from .equilibrium import ConvergenceError, equilibrium_cascade
from .graph import ParseError, read_edge_list, scc_decompose
from .model import EpidemicNetwork, read_model, write_model
from .simulate import integrate, lyapunov_trace, write_csv

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CERTIFICATE = 2
EXIT_CONDITION = 3


def _load_network(path: Path, beta: float | None, delta: float | None) -> EpidemicNetwork:
    """Model JSON, or an edge-list graph with uniform rates from the flags."""
    if path.suffix == ".json":
        return read_model(path)
    graph = read_edge_list(path)
    if beta is None or delta is None:
        raise ParseError(
            f"{path} is an edge list without rates; pass --beta and --delta"
        )
    return EpidemicNetwork.uniform(graph, beta=beta, delta=delta)


def _write_json(doc: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _analyze_document(net: EpidemicNetwork, tol: float = 1e-12):
    report = equilibrium_cascade(net, tol=tol)
    verdict = classify_stability(net, report)
    doc = {"equilibrium": report.to_json_dict(), "stability": verdict.to_json_dict()}
    return doc, report


def cmd_analyze(args) -> int:
    net = _load_network(Path(args.input), args.beta, args.delta)
    doc, report = _analyze_document(net, tol=args.tol)
    out = Path(args.output)
    _write_json(doc, out)
    if not args.no_figures:
        from .figures import save_equilibrium_figure

        save_equilibrium_figure(report, out.with_suffix(".png"), title=out.stem)
    print(f"{args.input}: {report.classification}, max component R0 = {report.r0_global:.6g}")
    return EXIT_OK


def _initial_state(args, n: int) -> np.ndarray:
    if args.random:
        rng = np.random.default_rng(args.seed)
        return rng.uniform(0.0, 1.0, size=n)
    if args.p0 is None:
        raise ParseError("pass an initial state file via --p0 or use --random")
    values = Path(args.p0).read_text(encoding="utf-8").replace(",", " ").split()
    try:
        p0 = np.array([float(v) for v in values])
    except ValueError as exc:
        raise ParseError(f"invalid initial state file {args.p0}: {exc}") from exc
    if p0.size != n:
        raise ParseError(f"initial state has {p0.size} entries, model has {n} nodes")
    return p0


def cmd_simulate(args) -> int:
    net = _load_network(Path(args.input), args.beta, args.delta)
    p0 = _initial_state(args, net.n)
    traj = integrate(net, p0, t_end=args.tmax, step=args.step, record_every=args.record_every)
    if args.lyapunov:
        report = equilibrium_cascade(net)
        traj.lyapunov = lyapunov_trace(traj, report.p_star)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(traj, out)
    if not args.no_figures:
        from .figures import save_trajectory_figure

        save_trajectory_figure(traj, out.with_suffix(".png"), title=out.stem)
    print(f"{args.input}: {len(traj.times)} samples to t={traj.times[-1]:g} -> {out}")
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        net, meta = generate.build_family(args.family, args.nodes, args.edge_prob, args.seed)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_model(net, out, meta=meta)
    decomp = scc_decompose(net.graph)
    print(f"{args.family}: n={net.n}, edges={len(net.graph.edges)}, sccs={decomp.count} -> {out}")
    return EXIT_OK


def cmd_check_distributed(args) -> int:
    from .game import distributed_condition

    net = _load_network(Path(args.input), args.beta, args.delta)
    verdict = distributed_condition(net)
    doc = verdict.to_json_dict()
    if args.output:
        _write_json(doc, Path(args.output))
    else:
        json.dump(doc, sys.stdout, indent=2)
        print()
    print(f"{args.input}: distributed condition {'holds' if verdict.all_pass else 'fails'}")
    return EXIT_OK if verdict.all_pass else EXIT_CONDITION


def cmd_batch(args) -> int:
    manifest = Path(args.input)
    if manifest.is_dir():
        paths = sorted(manifest.glob("*.json"))
    else:
        doc = json.loads(manifest.read_text(encoding="utf-8"))
        paths = [Path(p) for p in doc]
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = []
    worst = EXIT_OK
    for path in paths:
        entry = {"input": str(path)}
        try:
            net = read_model(path)
            doc, report = _analyze_document(net)
            _write_json(doc, outdir / f"{path.stem}.analysis.json")
            entry["classification"] = report.classification
            entry["r0_max"] = report.r0_global
        except ParseError as exc:
            entry["error"] = str(exc)
            worst = worst or EXIT_INPUT
        except (CertificateError, ConvergenceError) as exc:
            entry["error"] = str(exc)
            worst = worst or EXIT_CERTIFICATE
        summary.append(entry)
    _write_json({"analyses": summary}, outdir / "summary.json")
    print(f"batch: {len(paths)} models -> {outdir}")
    return worst


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sisnet",
        description="Analyze and simulate networked SIS epidemic dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common_model_flags(p):
        p.add_argument("--input", required=True, help="model JSON (or edge list with --beta/--delta)")
        p.add_argument("--beta", type=float, default=None, help="uniform infection rate for edge-list input")
        p.add_argument("--delta", type=float, default=None, help="uniform curing rate for edge-list input")

    p = sub.add_parser("analyze", help="equilibrium, classification, and stability certificates")
    common_model_flags(p)
    p.add_argument("--output", required=True, help="report JSON path")
    p.add_argument("--tol", type=float, default=1e-12, help="fixed-point iteration tolerance")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="integrate the dynamics and write a trajectory CSV")
    common_model_flags(p)
    p.add_argument("--output", required=True, help="trajectory CSV path")
    p.add_argument("--p0", help="initial state file (whitespace or comma separated)")
    p.add_argument("--random", action="store_true", help="random initial state from --seed")
    p.add_argument("--seed", type=int, default=0, help="seed for --random")
    p.add_argument("--step", type=float, default=1e-2, help="integrator step")
    p.add_argument("--tmax", type=float, default=100.0, help="end time")
    p.add_argument("--record-every", type=int, default=10, help="record every k-th step")
    p.add_argument("--lyapunov", action="store_true", help="append V(p - p*) column")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("generate", help="write a deterministic model file")
    p.add_argument("--family", required=True,
                   help="one of: ring, erdos, chain, two-scc, gd99c-style")
    p.add_argument("--nodes", type=int, default=20)
    p.add_argument("--edge-prob", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="model JSON path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("check-distributed", help="per-node distributed disease-free condition")
    common_model_flags(p)
    p.add_argument("--output", help="verdict JSON path (stdout when omitted)")
    p.set_defaults(func=cmd_check_distributed)

    p = sub.add_parser("batch", help="analyze every model in a directory or manifest")
    p.add_argument("--input", required=True, help="directory of model JSONs, or a JSON list of paths")
    p.add_argument("--output", required=True, help="output directory")
    p.set_defaults(func=cmd_batch)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CertificateError,) as exc:
        print(f"certificate error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except ConvergenceError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE


if __name__ == "__main__":
    sys.exit(main())
