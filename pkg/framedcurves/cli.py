"""Batch front end: build graph snapshots, emit and verify certificates, report invariants."""
import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence

import pandas as pd

from framedcurves.config import RunConfig, configured_level
from framedcurves.errors import ArtifactError, EnumerationBoundError, FramedCurvesError
from framedcurves.framing import Framing, arf_of, framing_from_gsb, invariants
from framedcurves.graphs import KINDS, MODEL_KBAR, GraphSnapshot, build_graph, theta
from framedcurves.resources.triangulation import canonical_triangulation
from framedcurves.services.artifact_service import ArtifactService
from framedcurves.services.export_service import ExportService
from framedcurves.strata import is_divisorial_candidate, level_assignments
from framedcurves.surface_core import TOTAL_BOUND, NormalMulticurve, enumerate_multicurves
from framedcurves.telemetry.setup_telemetry import setupLogging, traceFunction
from framedcurves.witness import FlatCertificate, find_disjoint_flat

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BOUND = 3


def resolve_framing(config: RunConfig) -> Framing:
    """The framing named by the run: a certificate's, explicit basis values, or zeros on the basis."""
    if config.certificate:
        record = ArtifactService().load(config.certificate)
        return FlatCertificate.from_dict(record).framing
    tri = canonical_triangulation(config.g, config.n)
    if config.gsb_values is not None:
        return framing_from_gsb(tri, config.gsb_values, config.signature, arf=config.arf)
    values = [0] * (2 * config.g)
    spin = config.g >= 2 and all(s % 2 for s in config.signature)
    if spin and config.arf is not None and arf_of(values) != config.arf % 2:
        # (1 + 1)(0 + 1) is even, so a_1 = 1 flips the Arf invariant
        values[0] = 1
    return framing_from_gsb(tri, values, config.signature, arf=config.arf if spin else None)


def _parse_weights(config: RunConfig, weights: Optional[Sequence[int]]) -> NormalMulticurve:
    if not weights:
        raise ArtifactError("this command needs --weights", clause="usage")
    return NormalMulticurve.from_weights(canonical_triangulation(config.g, config.n), weights)


@traceFunction({"kind": "kind"})
def cmd_graph(config: RunConfig, kind: str) -> List[str]:
    config.check_budget()
    if kind not in KINDS:
        raise ArtifactError(f"unknown graph kind {kind!r}; choose from {', '.join(KINDS)}", clause="usage")
    phi = resolve_framing(config)
    if config.bound == 0:
        logger.warning("bound 0 admits no curves; writing an empty %s snapshot", kind)
        if phi.genus < 3:
            raise ArtifactError(f"graphs are only built in genus at least 3, got {phi.genus}", clause="usage")
        snapshot = GraphSnapshot(
            kind, (), (), 0, phi, divisorial_bound=config.divisorial_bound if kind == MODEL_KBAR else None
        )
    else:
        snapshot = build_graph(kind, phi, config.bound, divisorial_bound=config.divisorial_bound)
    stem = f"{kind}_g{config.g}_n{config.n}_b{config.bound}"
    return ExportService(config.output_dir).write_snapshot(snapshot, stem)


@traceFunction
def cmd_flat(config: RunConfig) -> str:
    if config.g < 3:
        raise ArtifactError(f"disjoint witnesses need genus at least 3, got {config.g}", clause="usage")
    certificate = find_disjoint_flat(config.g, config.n, config.signature, arf=config.arf)
    sig = "_".join(str(s) for s in config.signature)
    path = ExportService(config.output_dir).write_json(f"flat_g{config.g}_n{config.n}_sig{sig}.json", certificate.to_dict())
    ArtifactService().verify(path)
    return path


def cmd_verify(path: str) -> int:
    try:
        ArtifactService().verify(path)
    except ArtifactError as e:
        logger.error(f"Verification of {path} failed at {e.clause}: {e}")
        return e.exit_code
    return EXIT_OK


@traceFunction
def cmd_invariants(config: RunConfig) -> str:
    config.check_budget()
    phi = resolve_framing(config)
    sample = config.bound if phi.genus == 1 and config.bound else None
    record = {"kind": "invariants", "framing": phi.to_dict(), **invariants(phi, arf1_sample_bound=sample).to_dict()}
    return ExportService(config.output_dir).write_json(f"invariants_g{config.g}_n{config.n}.json", record)


@traceFunction
def cmd_theta(config: RunConfig, weights: Optional[Sequence[int]]) -> str:
    config.check_budget()
    phi = resolve_framing(config)
    mu = _parse_weights(config, weights)
    result = theta(phi, mu, config.bound, divisorial_bound=config.divisorial_bound)
    record = {
        "kind": "theta",
        "framing": phi.to_dict(),
        "source": mu.to_dict(),
        "image": [c.to_dict()["weights"] for c in result.image],
        "bound": config.bound,
        "divisorial_bound": config.divisorial_bound,
    }
    return ExportService(config.output_dir).write_json(f"theta_g{config.g}_n{config.n}_b{config.bound}.json", record)


def _levels_rows(phi: Framing, gamma: NormalMulticurve) -> List[Dict]:
    rows = []
    for splitting in level_assignments(phi, gamma):
        rows.append(
            {
                "weights": " ".join(str(w) for w in gamma.weights),
                "curves": gamma.component_count,
                "N": splitting.N,
                "levels": " ".join(str(v) for v in splitting.levels),
                "orientations": " ".join("-1" if r else "1" for r in splitting.reversed_curves),
            }
        )
    return rows


@traceFunction
def cmd_levels(config: RunConfig, weights: Optional[Sequence[int]]) -> List[str]:
    """Level splittings of one multicurve, or of every multicurve up to the bound."""
    config.check_budget()
    phi = resolve_framing(config)
    if weights:
        candidates = [_parse_weights(config, weights)]
    else:
        candidates = list(enumerate_multicurves(phi.tri, config.bound, max_components=3, bound_mode=TOTAL_BOUND))
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        per_curve = list(pool.map(lambda gamma: _levels_rows(phi, gamma), candidates))
    rows = [row for found in per_curve for row in found]
    export = ExportService(config.output_dir)
    stem = f"levels_g{config.g}_n{config.n}_b{config.bound}"
    record: Dict = {"kind": "levels", "framing": phi.to_dict(), "bound": config.bound, "splittings": rows}
    if weights and invariants(phi).holomorphic_type:
        verdict = is_divisorial_candidate(phi, candidates[0], max_bound=config.max_bound)
        record["divisorial_checks"] = verdict.checks
    columns = ["weights", "curves", "N", "levels", "orientations"]
    return [export.write_json(f"{stem}.json", record), export.write_table(pd.DataFrame(rows, columns=columns), f"{stem}.csv")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framedcurves", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run file; flags override its settings")
    common.add_argument("--g", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--sig", type=int, nargs="+", dest="signature", help="winding numbers of the punctures")
    common.add_argument("--values", type=int, nargs="+", dest="gsb_values", help="values on a_1 b_1 ... a_g b_g")
    common.add_argument("--certificate", help="take the framing from a flat certificate")
    common.add_argument("--arf", type=int)
    common.add_argument("--bound", type=int)
    common.add_argument("--divisorial-bound", type=int, dest="divisorial_bound")
    common.add_argument("--max-bound", type=int, dest="max_bound")
    common.add_argument("--out", dest="output_dir")
    common.add_argument("--seed", type=int)

    sub = parser.add_subparsers(dest="command", required=True)
    graph = sub.add_parser("graph", parents=[common], help="write a graph snapshot")
    graph.add_argument("--kind", required=True)
    sub.add_parser("flat", parents=[common], help="emit a disjoint-witness certificate")
    verify = sub.add_parser("verify", help="re-run the checks embedded in an artifact")
    verify.add_argument("path")
    sub.add_parser("invariants", parents=[common], help="signature, types and Arf data of a framing")
    for name in ("theta", "levels"):
        command = sub.add_parser(name, parents=[common])
        command.add_argument("--weights", type=int, nargs="+", help="normal coordinates of the multicurve")
    return parser


def _config_from(args: argparse.Namespace) -> RunConfig:
    overrides = {k: getattr(args, k, None) for k in RunConfig.__dataclass_fields__}
    if args.config:
        return RunConfig.from_yaml(args.config, overrides)
    base = RunConfig()
    if overrides.get("signature") is None and overrides.get("n") not in (None, base.n):
        raise ArtifactError("changing --n needs a matching --sig", clause="usage")
    return base.merged(overrides)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and run one command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if args.command == "verify":
        return cmd_verify(args.path)
    try:
        config = _config_from(args)
        if args.command == "graph":
            cmd_graph(config, args.kind)
        elif args.command == "flat":
            cmd_flat(config)
        elif args.command == "invariants":
            cmd_invariants(config)
        elif args.command == "theta":
            cmd_theta(config, args.weights)
        else:
            cmd_levels(config, args.weights)
    except EnumerationBoundError as e:
        logger.error(f"Search ran out of budget: {e}")
        return EXIT_BOUND
    except ArtifactError as e:
        logger.error(f"{args.command} failed ({e.clause}): {e}")
        return e.exit_code
    except FramedCurvesError as e:
        logger.error(f"{args.command} rejected its input: {e}")
        return EXIT_USAGE
    return EXIT_OK


def main() -> None:
    setupLogging(configured_level())
    sys.exit(run())


if __name__ == "__main__":
    main()
