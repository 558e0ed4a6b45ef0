"""Command-line front end.

All subcommands are thin clients of the HTTP service: by default an
in-process ASGI client, or a remote base URL via --server. Tabular results
are written as CSV (atomically); scalar results print as JSON on stdout.
"""
from __future__ import annotations

import argparse
import json
import sys

import httpx

from .csvio import write_csv
from .service.schemas import EstimateModel


def _make_client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _parse_sweep(text: str, error) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        error("argument --sweep: expected start:end:step")
    try:
        start, end, step = (float(p) for p in parts)
    except ValueError:
        error(f"argument --sweep: non-numeric component in {text!r}")
    if start <= 0 or step <= 0 or end < start:
        error("argument --sweep: need start > 0, step > 0, end >= start")
    count = int((end - start) / step + 1e-9) + 1
    return [start + i * step for i in range(count)]


def _parse_levels(text: str, error) -> list[int]:
    try:
        if ":" in text:
            lo, hi = (int(p) for p in text.split(":"))
            levels = list(range(lo, hi + 1))
        else:
            levels = [int(p) for p in text.split(",")]
    except ValueError:
        levels = []
    if not levels or levels != sorted(set(levels)):
        error(f"argument --levels: expected N, N:M or comma list, got {text!r}")
    if levels[0] < 1 or levels[-1] > 5:
        error(f"argument --levels: levels must lie in 1..5, got {text!r}")
    return levels


def _add_run_flags(sub: argparse.ArgumentParser, default_decoder: str) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--sigma", type=float, help="single channel sigma")
    group.add_argument("--sweep", help="sigma grid start:end:step, endpoints on-grid included")
    sub.add_argument("--trials", type=int, default=None,
                     help="trials per cell (default: experiment-specific)")
    sub.add_argument("--decoder", choices=("analog", "digital", "both"),
                     default=default_decoder)
    sub.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    sub.add_argument("--out", required=True, help="output CSV path")
    sub.add_argument("--server", default=None, help="remote service base URL")


def _validated_sigmas(args, error) -> list[float]:
    if args.sigma is not None:
        if args.sigma <= 0:
            error(f"argument --sigma: must be positive, got {args.sigma}")
        return [args.sigma]
    return _parse_sweep(args.sweep, error)


def _check_common(args, error) -> None:
    if args.trials is not None and args.trials < 1:
        error(f"argument --trials: must be >= 1, got {args.trials}")
    if not 0 <= args.seed < 2**64:
        error(f"argument --seed: must be a 64-bit unsigned, got {args.seed}")


def _run_and_write(args, payload: dict) -> int:
    client = _make_client(args.server)
    resp = client.post("/run", json=payload)
    if resp.status_code != 200:
        print(f"error: service returned {resp.status_code}: {resp.text}", file=sys.stderr)
        return 1
    estimates = [EstimateModel(**d).to_estimate() for d in resp.json()["estimates"]]
    failed = [e for e in estimates if e.error is not None]
    if failed:
        e = failed[0]
        print(
            f"error: cell sigma={e.sigma} level={e.level} decoder={e.decoder} "
            f"failed: {e.error}",
            file=sys.stderr,
        )
        return 1
    write_csv(args.out, estimates)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gkpaqec",
        description="GKP-qubit QEC Monte Carlo simulator and decoders",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bitflip = sub.add_parser("bitflip", help="three-qubit bit-flip code failure rates")
    _add_run_flags(p_bitflip, default_decoder="both")

    p_c4c6 = sub.add_parser("c4c6", help="concatenated C4/C6 failure rates by level")
    _add_run_flags(p_c4c6, default_decoder="both")
    p_c4c6.add_argument("--levels", default="1:3",
                        help="concatenation levels: N, N:M or comma list (1..5)")

    p_oracle = sub.add_parser("oracle", help="exact quadrature failure probability")
    p_oracle.add_argument("--code", choices=("bitflip",), default="bitflip")
    p_oracle.add_argument("--sigma", type=float, required=True)
    p_oracle.add_argument("--decoder", choices=("analog", "digital"), required=True)
    p_oracle.add_argument("--grid", type=int, default=400)
    p_oracle.add_argument("--server", default=None)

    p_hash = sub.add_parser("hashing", help="hashing-bound sigma threshold")
    p_hash.add_argument("--mode", choices=("digital", "analog"), required=True)
    p_hash.add_argument("--lo", type=float, default=0.3)
    p_hash.add_argument("--hi", type=float, default=0.9)
    p_hash.add_argument("--tol", type=float, default=1e-4)
    p_hash.add_argument("--server", default=None)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)

    if args.command == "bitflip":
        _check_common(args, parser.error)
        sigmas = _validated_sigmas(args, parser.error)
        payload = {
            "experiment": "bitflip",
            "decoder": args.decoder,
            "sigmas": sigmas,
            "levels": [],
            "trials": args.trials,
            "seed": args.seed,
        }
        return _run_and_write(args, payload)

    if args.command == "c4c6":
        _check_common(args, parser.error)
        sigmas = _validated_sigmas(args, parser.error)
        levels = _parse_levels(args.levels, parser.error)
        payload = {
            "experiment": "c4c6",
            "decoder": args.decoder,
            "sigmas": sigmas,
            "levels": levels,
            "trials": args.trials,
            "seed": args.seed,
        }
        return _run_and_write(args, payload)

    if args.command == "oracle":
        if args.sigma <= 0:
            parser.error(f"argument --sigma: must be positive, got {args.sigma}")
        if args.grid < 100:
            parser.error(f"argument --grid: must be >= 100, got {args.grid}")
        client = _make_client(args.server)
        resp = client.post("/oracle", json={
            "code": args.code, "sigma": args.sigma,
            "decoder": args.decoder, "grid": args.grid,
        })
        if resp.status_code != 200:
            print(f"error: service returned {resp.status_code}: {resp.text}", file=sys.stderr)
            return 1
        body = resp.json()
        print(json.dumps({k: body[k] for k in ("sigma", "decoder", "grid", "p_fail")}))
        return 0

    if args.command == "hashing":
        if not 0 < args.lo < args.hi:
            parser.error(f"argument --lo/--hi: need 0 < lo < hi, got {args.lo}, {args.hi}")
        if args.tol <= 0:
            parser.error(f"argument --tol: must be positive, got {args.tol}")
        client = _make_client(args.server)
        resp = client.post("/hashing", json={
            "mode": args.mode, "lo": args.lo, "hi": args.hi, "tol": args.tol,
        })
        if resp.status_code != 200:
            print(f"error: service returned {resp.status_code}: {resp.text}", file=sys.stderr)
            return 1
        body = resp.json()
        print(json.dumps({k: body[k] for k in ("mode", "sigma_root", "db_root", "tolerance")}))
        return 0

    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
