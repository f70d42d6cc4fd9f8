"""Command-line front end. Every subcommand reads JSON files and prints JSON.

Exit codes: 0 success, InCone, Factored or NoCounterexample; 1 a failed
verification suite; 2 Refuted, NotPreserving or Counterexample; 3 Unknown;
64 usage error; 65 input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import jsonio
from .choivar import VARIANTS, choi_variant
from .classify import Factored, classify_separability_preserver
from .cones import ConeId, Family, Verdict, certify
from .errors import ChoiconeError
from .mapspace import LinearMap
from .pairing import MAP_PRESETS, STATE_PRESETS, preset_map_pair, preset_pair
from .transforms import Counterexample, preserves_cone_sampled
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAILED, EXIT_NEGATIVE, EXIT_UNKNOWN = 0, 1, 2, 3
EXIT_USAGE, EXIT_FORMAT = 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _cone(text: str) -> ConeId:
    try:
        return ConeId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad cone {text!r}: expected family,k ({exc})") from None


def _default_seed() -> int:
    raw = os.environ.get("CHOICONE_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"CHOICONE_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="choicone", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("choi", help="Choi matrix of a map, optionally a named variant")
    c.add_argument("--map", required=True)
    c.add_argument("--variant", choices=VARIANTS, default="standard")
    c.add_argument("--unitary", help="mn x mn matrix for the ad-u variant")

    pr = sub.add_parser("pair", help="pair a map with a state")
    pr.add_argument("--map", required=True)
    pr.add_argument("--state", required=True)
    pr.add_argument("--preset", choices=STATE_PRESETS, default="standard")

    pm = sub.add_parser("pair-maps", help="pair two maps")
    pm.add_argument("--map1", required=True)
    pm.add_argument("--map2", required=True)
    pm.add_argument("--preset", choices=MAP_PRESETS, default="standard")

    ce = sub.add_parser("certify", help="cone membership certificate")
    ce.add_argument("--object", required=True)
    ce.add_argument("--cone", required=True, type=_cone, help="family,k e.g. schmidt,1")
    ce.add_argument("--restarts", type=int, default=50)
    ce.add_argument("--budget", type=int, default=200)
    ce.add_argument("--seed", type=int)

    tr = sub.add_parser("transform", help="apply a transform or test cone preservation")
    tr.add_argument("--spec", required=True)
    mode = tr.add_mutually_exclusive_group(required=True)
    mode.add_argument("--apply")
    mode.add_argument("--preserves", type=_cone)
    tr.add_argument("--samples", type=int, default=200)
    tr.add_argument("--restarts", type=int, default=50)
    tr.add_argument("--seed", type=int)

    cl = sub.add_parser("classify", help="factor a separability preserver or refute it")
    cl.add_argument("--theta", required=True)
    cl.add_argument("--tol", type=float, default=1e-8)
    cl.add_argument("--seed", type=int)

    ve = sub.add_parser("verify", help="run a self-check suite")
    ve.add_argument("--suite", choices=SUITES, default="all")
    ve.add_argument("--seed", type=int)
    return p


def _load_object(path: str, family: Family):
    """Maps for the map cones; states (or a map's Choi matrix) for the state cones."""
    obj = jsonio.load(path)
    is_map = isinstance(obj, dict) and any(key in obj for key in ("choi", "kraus", "name"))
    if family in (Family.K_POSITIVE, Family.K_SUPERPOSITIVE):
        if is_map:
            return jsonio.map_from_json(obj)
        z = jsonio.tensor_from_json(obj)
        return LinearMap(z.m, z.n, z)
    return jsonio.map_from_json(obj).choi if is_map else jsonio.tensor_from_json(obj)


def _run(args) -> tuple[object, int]:
    cmd = args.command
    seed = None
    if hasattr(args, "seed"):
        seed = args.seed if args.seed is not None else _default_seed()
    if cmd == "choi":
        phi = jsonio.map_from_json(jsonio.load(args.map))
        unitary = jsonio.matrix_from_json(jsonio.load(args.unitary)) if args.unitary else None
        if args.variant == "ad-u" and unitary is None:
            raise UsageError("--variant ad-u needs --unitary")
        return jsonio.tensor_to_json(choi_variant(args.variant, phi, unitary)), EXIT_OK
    if cmd == "pair":
        phi = jsonio.map_from_json(jsonio.load(args.map))
        z = jsonio.tensor_from_json(jsonio.load(args.state))
        value = preset_pair(args.preset, phi, z)
        return {"preset": args.preset, "value": jsonio.complex_to_json(value)}, EXIT_OK
    if cmd == "pair-maps":
        phi = jsonio.map_from_json(jsonio.load(args.map1))
        psi = jsonio.map_from_json(jsonio.load(args.map2))
        value = preset_map_pair(args.preset, phi, psi)
        return {"preset": args.preset, "value": jsonio.complex_to_json(value)}, EXIT_OK
    if cmd == "certify":
        obj = _load_object(args.object, args.cone.family)
        cert = certify(obj, args.cone, restarts=args.restarts, budget=args.budget, seed=seed)
        code = {Verdict.IN_CONE: EXIT_OK, Verdict.REFUTED: EXIT_NEGATIVE,
                Verdict.UNKNOWN: EXIT_UNKNOWN}[cert.verdict]
        return {"cone": {"family": args.cone.family.value, "k": args.cone.k},
                **jsonio.certificate_to_json(cert)}, code
    if cmd == "transform":
        theta = jsonio.superop_from_json(jsonio.load(args.spec))
        if args.apply:
            return jsonio.tensor_to_json(theta(jsonio.tensor_from_json(jsonio.load(args.apply)))), EXIT_OK
        res = preserves_cone_sampled(theta, args.preserves, args.samples, seed, args.restarts)
        if isinstance(res, Counterexample):
            return {"result": "Counterexample", "sample_index": res.sample_index,
                    "z": jsonio.tensor_to_json(res.z),
                    "member": jsonio.certificate_to_json(res.member),
                    "image": jsonio.certificate_to_json(res.image)}, EXIT_NEGATIVE
        return {"result": "NoCounterexample", "samples": res.samples,
                "worst_margin": res.worst_margin}, EXIT_OK
    if cmd == "classify":
        theta = jsonio.superop_from_json(jsonio.load(args.theta))
        res = classify_separability_preserver(theta, args.tol, seed)
        if isinstance(res, Factored):
            fac = res.factorization
            return {"result": "Factored", "s": jsonio.matrix_to_json(fac.s),
                    "t": jsonio.matrix_to_json(fac.t), "transpose_left": fac.transpose_left,
                    "transpose_right": fac.transpose_right, "flip": fac.flip, "scale": fac.scale,
                    "residual": res.residual}, EXIT_OK
        return {"result": "NotPreserving", "p": jsonio.matrix_to_json(res.p),
                "q": jsonio.matrix_to_json(res.q), "image": jsonio.tensor_to_json(res.image),
                "certificate": jsonio.certificate_to_json(res.certificate)}, EXIT_NEGATIVE
    report = run_suite(args.suite, seed)
    return report, EXIT_OK if report["pass"] else EXIT_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        payload, code = _run(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ChoiconeError, ValueError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    sys.stdout.write(jsonio.dumps(payload) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
