"""Command-line interface: orbit / fibre / critical subcommands.

Exit codes: 0 success, 2 input validation failure, 3 computation failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time

from . import gb as gbmod
from .gb import IdealHandle, ideal_cache_key
from .hodge import HodgeDiamond, hodge_diamond
from .invariants import InvariantReport, invariant_report
from .orbit import (
    DEFAULT_PRIME,
    FibreSpec,
    OrbitSpec,
    critical_values,
    fibre_compactification,
    orbit_compactification,
)
from .poly import AlgebraError, ComputationError, UsageError

CACHE_ENV = "ORBIT_HODGE_CACHE"


class GBCache:
    """Content-addressed on-disk cache of reduced Groebner bases, keyed by a
    hash of (generator texts, order, prime).  Writes are atomic."""

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, key + ".json")

    def load(self, key: str):
        path = self._path(key)
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            return json.load(fh)

    def store(self, key: str, payload: dict):
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(payload, fh)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


class _Timings:
    def __init__(self):
        self.phases = {}

    def time(self, name: str):
        timings = self

        class _Ctx:
            def __enter__(self):
                self.t0 = time.monotonic()
                return self

            def __exit__(self, *exc):
                ms = int((time.monotonic() - self.t0) * 1000)
                timings.phases[name] = timings.phases.get(name, 0) + ms
                return False

        return _Ctx()


def render_diamond(d: HodgeDiamond, fmt: str = "text") -> str:
    if fmt == "text":
        return d.text()
    if fmt == "json":
        return json.dumps(d.to_json(), indent=2)
    raise UsageError(f"unknown diamond format {fmt!r}")


def _run_report(spec_echo: dict, prime: int, report: InvariantReport,
                diamond, timings: _Timings) -> dict:
    out = {
        "spec": spec_echo,
        "prime": prime,
        "invariants": report.to_json() if report is not None else None,
        "diamond": diamond.to_json() if diamond is not None else None,
        "timings_ms": dict(timings.phases),
    }
    return out


def _print_report(report: dict, as_json: bool):
    if as_json:
        print(json.dumps(report, indent=2))
        return
    inv = report.get("invariants")
    print(f"prime: {report['prime']}")
    if inv is not None:
        for k in ("proj_dim", "degree", "sing_codim", "smooth", "ambient_dim"):
            print(f"{k}: {inv[k]}")
    if report.get("diamond") is not None:
        print("hodge diamond:")
        print(render_diamond(HodgeDiamond.from_json(report["diamond"]), "text"))
    if report["timings_ms"]:
        phases = ", ".join(f"{k}={v}ms" for k, v in report["timings_ms"].items())
        print(f"timings: {phases}")


def _analyse(I: IdealHandle, args, timings: _Timings, spec_echo: dict) -> dict:
    with timings.time("invariants"):
        rep = invariant_report(I)
    diamond = None
    if args.diamond and rep.proj_dim >= 0:
        mode = "full-verify" if args.full_verify else "symmetry-fill"
        if mode == "symmetry-fill" and not rep.smooth:
            print("smoothness not certified; computing every cell directly",
                  file=sys.stderr)
            mode = "full-verify"
        with timings.time("diamond"):
            diamond = hodge_diamond(I, mode=mode, report=rep)
    return _run_report(spec_echo, args.prime, rep, diamond, timings)


def cmd_orbit(args) -> int:
    spec = OrbitSpec.parse(args.h0)
    timings = _Timings()
    with timings.time("compactify"):
        I = orbit_compactification(spec, prime=args.prime,
                                   saturate_by=args.saturate_by)
    report = _analyse(I, args, timings,
                      {"command": "orbit", "h0": list(spec.h0)})
    _print_report(report, args.json)
    return 0


def cmd_fibre(args) -> int:
    spec = FibreSpec(OrbitSpec.parse(args.h0),
                     tuple(OrbitSpec.parse(args.h).h0), args.lam)
    timings = _Timings()
    with timings.time("compactify"):
        I = fibre_compactification(spec, prime=args.prime,
                                   saturate_by=args.saturate_by)
    report = _analyse(I, args, timings,
                      {"command": "fibre", "h0": list(spec.orbit.h0),
                       "h": list(spec.h), "lambda": spec.lam})
    _print_report(report, args.json)
    return 0


def cmd_critical(args) -> int:
    spec = OrbitSpec.parse(args.h0)
    h = OrbitSpec.parse(args.h).h0
    vals = critical_values(spec, h)
    if args.json:
        print(json.dumps({"critical_values": vals}))
    else:
        print(" ".join(str(v) for v in vals))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="orbit-hodge",
        description="Compactified adjoint orbits of sl(n+1), their Lefschetz "
                    "fibres, and Hodge diamonds")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_h=False, with_lambda=False, heavy=True):
        p.add_argument("--h0", required=True,
                       help="diagonal of H0 (comma-separated integers, trace 0)")
        if with_h:
            p.add_argument("--h", required=True,
                           help="diagonal of H (distinct integers, trace 0)")
        if with_lambda:
            p.add_argument("--lambda", dest="lam", type=int, default=0,
                           help="fibre level")
        p.add_argument("--json", action="store_true", help="emit JSON")
        if heavy:
            p.add_argument("--diamond", action="store_true",
                           help="compute the Hodge diamond")
            p.add_argument("--full-verify", action="store_true",
                           help="compute every diamond cell directly")
            p.add_argument("--prime", type=int, default=DEFAULT_PRIME,
                           help="characteristic of the working field")
            p.add_argument("--saturate-by", choices=("max-ideal", "t"),
                           default="max-ideal",
                           help="saturate the homogenized ideal by the "
                                "irrelevant maximal ideal or by t alone")
            p.add_argument("--cache-dir", default=None,
                           help="Groebner basis cache directory "
                                f"(also ${CACHE_ENV})")
            p.add_argument("--threads", type=int, default=1,
                           help="internal parallelism bound")

    p_orbit = sub.add_parser("orbit", help="compactified adjoint orbit")
    common(p_orbit)
    p_orbit.set_defaults(func=cmd_orbit)

    p_fibre = sub.add_parser("fibre", help="compactified potential fibre")
    common(p_fibre, with_h=True, with_lambda=True)
    p_fibre.set_defaults(func=cmd_fibre)

    p_crit = sub.add_parser("critical", help="critical values of the potential")
    common(p_crit, with_h=True, heavy=False)
    p_crit.set_defaults(func=cmd_critical)
    return ap


def _install_cache(args):
    directory = getattr(args, "cache_dir", None) or os.environ.get(CACHE_ENV)
    if not directory:
        return
    cache = GBCache(directory)

    class _Hook:
        """Adapts the on-disk store to the gb-layer get/put protocol."""

        def get(self, I, order):
            payload = cache.load(ideal_cache_key(I, order))
            if payload is None:
                return None
            from .poly import parse_polynomial
            return [parse_polynomial(I.ring, t) for t in payload["basis"]]

        def put(self, I, order, basis):
            payload = dict(I.to_json())
            payload["basis"] = [g.text() for g in basis]
            cache.store(ideal_cache_key(I, order), payload)

    gbmod.set_cache(_Hook())


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        _install_cache(args)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ComputationError, AlgebraError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
