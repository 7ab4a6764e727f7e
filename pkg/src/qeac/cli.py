"""Command-line front end.

Thin client over the service handlers: every subcommand builds the same
request models the HTTP API uses, runs them in-process by default, or
against a running server with --server. Outputs are deterministic given
the flags, so repeated invocations produce byte-identical files.

Exit codes: 0 success, 1 runtime or verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import httpx
from pydantic import ValidationError

from . import __version__
from .errors import QeacError
from .service import handlers
from .service.models import (
    CodesResponse,
    DecodeRequest,
    DecodeResponse,
    EncodeRequest,
    EncodeResponse,
    EvolveRequest,
    EvolveResponse,
    GeometryModel,
    SweepRequest,
    SweepResponse,
    TableResponse,
    TimeSeriesModel,
    TrajectoriesRequest,
    TrajectoriesResponse,
    VerifyRequest,
    VerifyResponse,
)

__all__ = ["main"]

CSV_HEADER = "t,fidelity,trace,purity,excitation"

_REMOTE_TIMEOUT = 600.0


class _UsageError(Exception):
    """Bad flag combinations detected after argparse."""


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _series_csv(series: TimeSeriesModel) -> str:
    lines = [CSV_HEADER]
    rows = zip(series.t, series.fidelity, series.trace, series.purity, series.excitation)
    for row in rows:
        lines.append(",".join(f"{value:.15g}" for value in row))
    return "\n".join(lines) + "\n"


def _remote(server: str, method: str, path: str, payload: dict | None = None,
            params: dict | None = None) -> dict:
    url = server.rstrip("/") + path
    if method == "get":
        response = httpx.get(url, params=params, timeout=_REMOTE_TIMEOUT)
    else:
        response = httpx.post(url, json=payload, timeout=_REMOTE_TIMEOUT)
    if response.status_code >= 400:
        try:
            detail = response.json()
        except ValueError:
            detail = response.text
        raise QeacError(f"server returned {response.status_code}: {detail}")
    return response.json()


def _load_geometry(path: str | None) -> GeometryModel | None:
    if path is None:
        return None
    with open(path, encoding="utf-8") as handle:
        return GeometryModel(**json.load(handle))


def _initial_spec(args: argparse.Namespace, L: int) -> dict:
    """Build the initial-state part of a request from the state flags."""
    chosen: dict = {}
    if args.c0 is not None or args.c1 is not None:
        if args.c0 is None or args.c1 is None:
            raise _UsageError("--c0 and --c1 must be given together")
        chosen["c0"] = args.c0
        chosen["c1"] = args.c1
    if args.singlet:
        chosen["singlet"] = True
    if args.dark is not None:
        chosen["dark"] = [float(x) for x in args.dark.split(",")]
    if args.state is not None:
        with open(args.state, encoding="utf-8") as handle:
            chosen["state"] = json.load(handle)
    if args.initial is not None:
        chosen["bitstring"] = args.initial
    if len(chosen) == 0:
        return {"bitstring": "1" * L}
    if len(chosen) > (2 if "c0" in chosen else 1):
        raise _UsageError(
            "choose one initial state: --c0/--c1, --singlet, --dark, --state, or --initial"
        )
    return chosen


def _register_size(args: argparse.Namespace, geometry: GeometryModel | None) -> int:
    if geometry is not None:
        return len(geometry.positions_m)
    if args.l is not None:
        return args.l
    if args.initial is not None:
        return len(args.initial)
    return 2


def _add_model_arguments(parser: argparse.ArgumentParser, t_max_default: float | None) -> None:
    parser.add_argument("--model", choices=("collective", "independent", "correlated"),
                        default="collective", help="damping model")
    parser.add_argument("--l", type=int, default=None, help="register size")
    parser.add_argument("--gamma0", type=float, default=1.0, help="single-qubit rate")
    parser.add_argument("--delta0", type=float, default=0.0, help="Lamb shift scale")
    parser.add_argument("--delta-model", choices=("zero", "collective", "cos"),
                        default="zero", dest="delta_model", help="Lamb shift kernel")
    parser.add_argument("--geometry", default=None, metavar="FILE",
                        help="geometry JSON for the correlated model")
    parser.add_argument("--t-max", type=float, default=t_max_default, dest="t_max",
                        help="horizon in units of 1/gamma0")
    parser.add_argument("--dt", type=float, default=1e-3, help="integration step")
    parser.add_argument("--samples", type=int, default=101, help="output grid points")
    parser.add_argument("--c0", type=float, default=None, help="logical amplitude of |0>")
    parser.add_argument("--c1", type=float, default=None, help="logical amplitude of |1>")
    parser.add_argument("--singlet", action="store_true", help="start from the singlet")
    parser.add_argument("--dark", default=None, metavar="W1,W2,...",
                        help="dark-basis weights, comma separated")
    parser.add_argument("--state", default=None, metavar="FILE",
                        help="JSON file of register amplitudes")
    parser.add_argument("--initial", default=None, metavar="BITS",
                        help="computational basis state, e.g. 11")
    parser.add_argument("--output", default=None, metavar="FILE", help="CSV destination")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qeac",
        description="Dark-state codes for collective amplitude damping: "
                    "tables, codewords, verification, and simulations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--server", default=None, metavar="URL",
                        help="run against a server instead of in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="multiplicities, dark counts, efficiencies")
    p.add_argument("--l-max", type=int, default=10, dest="l_max", help="largest register")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", default=None, metavar="FILE")

    p = sub.add_parser("verify", help="structural checks for one register size")
    p.add_argument("--l", type=int, required=True, help="register size (2..8)")
    p.add_argument("--output", default=None, metavar="FILE", help="summary JSON")

    p = sub.add_parser("codes", help="codeword sets as JSON")
    p.add_argument("--l", type=int, default=2, help="register size")
    p.add_argument("--source", choices=("computed", "reference"), default="computed")
    p.add_argument("--output", default=None, metavar="FILE")

    p = sub.add_parser("evolve", help="master-equation run (CSV time series)")
    _add_model_arguments(p, t_max_default=None)  # 5.0 for a run, 1.0 for a sweep
    p.add_argument("--sweep-separation", action="store_true", dest="sweep_separation",
                   help="sweep k0*d for a collinear chain instead of one run")
    p.add_argument("--k0d-max", type=float, default=2.0, dest="k0d_max")
    p.add_argument("--k0d-step", type=float, default=0.1, dest="k0d_step")
    p.add_argument("--state-index", type=int, default=-1, dest="state_index",
                   help="dark-basis vector driven through the sweep")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="sweep output format")

    p = sub.add_parser("trajectories", help="stochastic unravelling vs master solution")
    _add_model_arguments(p, t_max_default=2.0)
    p.add_argument("--n", type=int, default=1000, dest="n_traj", help="trajectory count")
    p.add_argument("--seed", type=int, default=42, help="ensemble seed")
    p.add_argument("--threshold", type=float, default=0.02,
                   help="trace-distance pass threshold")
    p.add_argument("--summary", default=None, metavar="FILE", help="summary JSON")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _cmd_table(args: argparse.Namespace) -> int:
    if not (1 <= args.l_max <= 200):
        raise _UsageError("--l-max must be in 1..200")
    if args.server:
        response = TableResponse.model_validate(
            _remote(args.server, "get", "/table", params={"l_max": args.l_max})
        )
    else:
        response = handlers.handle_table(args.l_max)
    if args.format == "json":
        _emit(_json_text(response.model_dump(by_alias=True)), args.output)
    else:
        lines = ["L,dark_count,efficiency,asymptote,gap,multiplicities"]
        for row in response.rows:
            blocks = " ".join(f"{m.two_j}:{m.n}" for m in row.multiplicities)
            lines.append(
                f"{row.L},{row.dark_count},{row.efficiency:.15g},"
                f"{row.asymptote:.15g},{row.gap:.15g},{blocks}"
            )
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    if not (2 <= args.l <= 8):
        raise _UsageError("--l must be in 2..8")
    if args.server:
        response = VerifyResponse.model_validate(
            _remote(args.server, "post", "/verify", payload={"L": args.l})
        )
    else:
        response = handlers.handle_verify(VerifyRequest(L=args.l))
    for check in response.checks:
        verdict = "pass" if check.passed else "FAIL"
        print(f"{check.name}: residual={check.residual:.3e} {verdict}")
    if args.output is not None:
        _emit(_json_text(response.model_dump(by_alias=True)), args.output)
    return 0 if response.passed else 1


def _cmd_codes(args: argparse.Namespace) -> int:
    if args.server:
        response = CodesResponse.model_validate(
            _remote(args.server, "get", f"/codes/{args.l}", params={"source": args.source})
        )
    else:
        response = handlers.handle_codes(args.l, args.source)
    _emit(_json_text(response.model_dump(by_alias=True)), args.output)
    return 0


def _cmd_evolve(args: argparse.Namespace) -> int:
    if args.sweep_separation:
        return _cmd_sweep(args)
    geometry = _load_geometry(args.geometry)
    L = _register_size(args, geometry)
    payload = {
        "model": args.model,
        "L": L,
        "gamma0": args.gamma0,
        "delta0": args.delta0,
        "delta_model": args.delta_model,
        "t_max": args.t_max if args.t_max is not None else 5.0,
        "dt": args.dt,
        "samples": args.samples,
        "geometry": geometry.model_dump() if geometry else None,
        "initial": _initial_spec(args, L),
    }
    if args.server:
        response = EvolveResponse.model_validate(
            _remote(args.server, "post", "/evolve", payload=payload)
        )
    else:
        response = handlers.handle_evolve(EvolveRequest.model_validate(payload))
    _emit(_series_csv(response.series), args.output)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    payload = {
        "L": args.l if args.l is not None else 3,
        "state_index": args.state_index,
        "gamma0": args.gamma0,
        "t_max": args.t_max if args.t_max is not None else 1.0,
        "dt": args.dt,
        "k0d_max": args.k0d_max,
        "k0d_step": args.k0d_step,
    }
    if args.server:
        response = SweepResponse.model_validate(
            _remote(args.server, "post", "/sweep-separation", payload=payload)
        )
    else:
        response = handlers.handle_sweep(SweepRequest.model_validate(payload))
    if args.format == "csv":
        lines = ["k0d,fidelity"]
        lines.extend(f"{p.k0d:.15g},{p.fidelity:.15g}" for p in response.points)
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(_json_text(response.model_dump(by_alias=True)), args.output)
    return 0 if all(c.passed for c in response.checks) else 1


def _cmd_trajectories(args: argparse.Namespace) -> int:
    geometry = _load_geometry(args.geometry)
    L = _register_size(args, geometry)
    payload = {
        "model": args.model,
        "L": L,
        "gamma0": args.gamma0,
        "delta0": args.delta0,
        "delta_model": args.delta_model,
        "t_max": args.t_max,
        "dt": args.dt,
        "samples": args.samples,
        "n_traj": args.n_traj,
        "seed": args.seed,
        "threshold": args.threshold,
        "geometry": geometry.model_dump() if geometry else None,
        "initial": _initial_spec(args, L),
    }
    if args.server:
        response = TrajectoriesResponse.model_validate(
            _remote(args.server, "post", "/trajectories", payload=payload)
        )
    else:
        response = handlers.handle_trajectories(TrajectoriesRequest.model_validate(payload))
    _emit(_series_csv(response.series), args.output)
    summary = response.model_dump(by_alias=True, exclude={"series"})
    if args.summary is not None:
        _emit(_json_text(summary), args.summary)
    elif args.output is not None:
        _emit(_json_text(summary), None)
    return 0 if all(c.passed for c in response.checks) else 1


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "table": _cmd_table,
    "verify": _cmd_verify,
    "codes": _cmd_codes,
    "evolve": _cmd_evolve,
    "trajectories": _cmd_trajectories,
    "serve": _cmd_serve,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2
    except QeacError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
