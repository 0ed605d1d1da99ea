"""Command-line surface: reproduce reports, verify structure, compute objects.

Exit codes: 0 success, 1 verification mismatch, 2 invalid arguments,
3 resource limit. All diagnostic output goes to stderr; results to stdout.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .complexes import Complex, neighborhood_complex
from .errors import ExpmorseError, InvalidArgumentError, ResourceLimitError
from .gf2 import BettiTable, betti_bounded
from .graphs import (Graph, complete_graph, cycle_graph, exponential_graph,
                     fold_core_exponential, fold_reduce, graph_from_json,
                     graph_to_json)
from .homc import enumerate_hom_cells, order_complex_of_hom
from .pipeline import LEMMA_KEYS, corollary1_report, theorem1_report, verify_lemma

__all__ = ["RunConfig", "cmd_reproduce", "cmd_verify", "cmd_compute", "main"]

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_BADARGS = 2
EXIT_RESOURCE = 3


@dataclass
class RunConfig:
    """Parsed invocation; one instance drives exactly one command."""

    command: str
    n: int = 0
    m: Optional[int] = None
    cor1: bool = False
    lemma: str = "all"
    seed: int = 0
    what: str = ""
    graph: Optional[str] = None
    exp: Optional[Tuple[int, int]] = None
    g: Optional[str] = None
    h: Optional[str] = None
    max_dim: Optional[int] = None
    max_faces: int = 5_000_000
    method: str = "both"
    format: str = "json"
    threads: Optional[int] = None

    def __post_init__(self):
        if self.threads is None:
            self.threads = os.cpu_count() or 1
        if self.threads < 1:
            raise InvalidArgumentError("--threads must be at least 1")
        if self.max_faces < 1:
            raise InvalidArgumentError("--max-faces must be positive")
        if self.max_dim is not None and self.max_dim < 0:
            raise InvalidArgumentError("--max-dim must be nonnegative")


def _atom(spec: str) -> Graph:
    """kN / cN shorthand, or a path to a graph JSON file."""
    if re.fullmatch(r"[kK]\d+", spec):
        return complete_graph(int(spec[1:]))
    if re.fullmatch(r"[cC]\d+", spec):
        return cycle_graph(int(spec[1:]))
    if os.path.exists(spec):
        try:
            with open(spec, "r", encoding="utf-8") as fh:
                return graph_from_json(json.load(fh))
        except (OSError, ValueError) as exc:
            raise InvalidArgumentError(f"cannot read graph file {spec}: {exc}") from exc
    raise InvalidArgumentError(f"unknown graph {spec!r}; use kN, cN, or a JSON file")


def _graph_from(cfg: RunConfig) -> Graph:
    if cfg.exp is not None:
        a, b = cfg.exp
        return fold_core_exponential(a, b)
    if cfg.graph:
        return _atom(cfg.graph)
    raise InvalidArgumentError("need --graph or --exp")


def _emit_json(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _graph_csv(G: Graph) -> str:
    rows = sorted(G.edges() + [(v, v) for v in G.loops()])
    return "u,v\n" + "".join(f"{u},{v}\n" for u, v in rows)


def _complex_csv(C: Complex) -> str:
    out = ["dim,vertex_list"]
    for f in C.facets:
        out.append(f"{len(f) - 1}," + " ".join(C.labels[v] for v in f))
    return "\n".join(out) + "\n"


def _betti_csv(bt: BettiTable) -> str:
    out = ["dim,betti"]
    out.extend(f"{d},{b}" for d, b in enumerate(bt.betti))
    return "\n".join(out) + "\n"


def _report_csv(d: dict) -> str:
    out = ["key,value"]
    for key, val in d.items():
        if key == "crosschecks":
            for item in val:
                out.append(f"crosscheck:{item['name']},{item['pass']}")
        elif isinstance(val, dict):
            for k2, v2 in val.items():
                out.append(f"{key}.{k2},{v2}")
        elif isinstance(val, list):
            out.append(f"{key}," + " ".join(str(v) for v in val))
        else:
            out.append(f"{key},{val}")
    return "\n".join(out) + "\n"


def cmd_reproduce(cfg: RunConfig) -> int:
    if cfg.cor1:
        if cfg.m is None:
            raise InvalidArgumentError("--cor1 needs --m")
        rep = corollary1_report(cfg.m, cfg.n)
    else:
        if not 3 <= cfg.n <= 5:
            raise InvalidArgumentError("reproduction is sized for 3 <= n <= 5")
        rep = theorem1_report(cfg.n, include_bruteforce=cfg.method != "morse")
    data = rep.to_json_dict()
    if cfg.format == "csv":
        sys.stdout.write(_report_csv(data))
    else:
        _emit_json(data)
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def cmd_verify(cfg: RunConfig) -> int:
    results = verify_lemma(cfg.n, cfg.lemma, cfg.seed)
    for name, ok in results:
        sys.stdout.write(f"{name}: {'pass' if ok else 'FAIL'}\n")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_MISMATCH


def cmd_compute(cfg: RunConfig) -> int:
    if cfg.what == "exp-graph":
        if not cfg.g or not cfg.h:
            raise InvalidArgumentError("exp-graph needs --g and --h")
        E = exponential_graph(_atom(cfg.g), _atom(cfg.h))
        if cfg.format == "csv":
            sys.stdout.write(_graph_csv(E))
        else:
            _emit_json(graph_to_json(E))
    elif cfg.what == "fold":
        F = fold_reduce(_graph_from(cfg))
        if cfg.format == "csv":
            sys.stdout.write(_graph_csv(F))
        else:
            _emit_json(graph_to_json(F))
    elif cfg.what == "ncomplex":
        NC = neighborhood_complex(_graph_from(cfg))
        if cfg.format == "csv":
            sys.stdout.write(_complex_csv(NC))
        else:
            from .complexes import complex_to_json
            _emit_json(complex_to_json(NC))
    elif cfg.what == "homology":
        NC = neighborhood_complex(_graph_from(cfg))
        maxdim = cfg.max_dim if cfg.max_dim is not None else max(NC.dim, 0)
        bt = betti_bounded(NC, maxdim, max_faces=cfg.max_faces)
        if cfg.format == "csv":
            sys.stdout.write(_betti_csv(bt))
        else:
            _emit_json(bt.to_json_dict())
    elif cfg.what == "hom":
        if not cfg.g or not cfg.h:
            raise InvalidArgumentError("hom needs --g and --h")
        cells = enumerate_hom_cells(_atom(cfg.g), _atom(cfg.h))
        OC = order_complex_of_hom(cells)
        maxdim = cfg.max_dim if cfg.max_dim is not None else max(OC.dim, 0)
        bt = betti_bounded(OC, maxdim, max_faces=cfg.max_faces)
        if cfg.format == "csv":
            sys.stdout.write(_betti_csv(bt))
        else:
            _emit_json(bt.to_json_dict())
    else:
        raise InvalidArgumentError(f"unknown compute target {cfg.what!r}")
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--threads", type=int, default=None,
                   help="worker bound; results do not depend on it")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="expmorse",
        description="Homology of neighborhood complexes of exponential graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    rp = sub.add_parser("reproduce", help="run the pipeline and its cross-checks")
    rp.add_argument("--n", type=int, required=True)
    rp.add_argument("--cor1", action="store_true",
                    help="classify the core of K_m^{K_n} instead")
    rp.add_argument("--m", type=int)
    rp.add_argument("--method", choices=("morse", "bruteforce", "both"),
                    default="both")
    _add_common(rp)
    rp.set_defaults(func=cmd_reproduce)

    vp = sub.add_parser("verify", help="run structural checks")
    vp.add_argument("--n", type=int, required=True)
    vp.add_argument("--lemma", choices=LEMMA_KEYS, default="all")
    vp.add_argument("--seed", type=int, default=0)
    _add_common(vp)
    vp.set_defaults(func=cmd_verify)

    cp = sub.add_parser("compute", help="ad-hoc graph and homology queries")
    cp.add_argument("what", choices=("exp-graph", "fold", "ncomplex",
                                     "homology", "hom"))
    cp.add_argument("--graph", help="kN, cN, or a graph JSON file")
    cp.add_argument("--exp", nargs=2, type=int, metavar=("M", "N"),
                    help="core of K_M^{K_N}")
    cp.add_argument("--g", help="source graph atom")
    cp.add_argument("--h", help="target graph atom")
    cp.add_argument("--max-dim", type=int, dest="max_dim")
    cp.add_argument("--max-faces", type=int, dest="max_faces", default=5_000_000)
    _add_common(cp)
    cp.set_defaults(func=cmd_compute)
    return ap


def _config_from(args: argparse.Namespace) -> RunConfig:
    exp = getattr(args, "exp", None)
    return RunConfig(
        command=args.command,
        n=getattr(args, "n", 0),
        m=getattr(args, "m", None),
        cor1=getattr(args, "cor1", False),
        lemma=getattr(args, "lemma", "all"),
        seed=getattr(args, "seed", 0),
        what=getattr(args, "what", ""),
        graph=getattr(args, "graph", None),
        exp=tuple(exp) if exp else None,
        g=getattr(args, "g", None),
        h=getattr(args, "h", None),
        max_dim=getattr(args, "max_dim", None),
        max_faces=getattr(args, "max_faces", 5_000_000),
        method=getattr(args, "method", "both"),
        format=args.format,
        threads=args.threads,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from(args)
        return args.func(cfg)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BADARGS
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ExpmorseError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
