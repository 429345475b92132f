"""Command-line front end.

Subcommands::

    compute  one (theta, phi) point of an example system, JSON row on stdout
    sweep    a (theta, phi) grid from a JSON config, CSV out
    fuzz     randomized verification run, JSON report out
    multi    multi-observable bounds from a JSON spec, JSON out

Exit codes: 0 ok, 1 fuzz failures, 2 config, 3 degenerate, 4 orthogonality,
5 internal numerical error.  Failures print a JSON error object on stdout.
"""

import argparse
import json
import sys

import numpy as np

from . import harness, multi, sweep
from .errors import ConfigError, UncertaintyError, exit_code_for
from .hilbert import PureState, gram_schmidt_orthogonalize, orthogonality_check
from .systems import SYSTEMS, build

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_CONFIG = 2


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(exc):
    code = EXIT_CONFIG if isinstance(exc, (OSError, json.JSONDecodeError)) else exit_code_for(exc)
    payload = {"error": type(exc).__name__, "message": str(exc), "exitCode": code}
    key = getattr(exc, "key", None)
    if key is not None:
        payload["key"] = key
    sys.stdout.write(json.dumps(payload) + "\n")
    return code


def _load_json(path):
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}", "<json>") from None


def _families(text):
    try:
        fams = sorted({int(t) for t in text.split(",") if t.strip()})
    except ValueError:
        raise ConfigError("--families expects a comma-separated list of 1-4", "families") from None
    if not fams or any(f not in sweep.FAMILY_IDS for f in fams):
        raise ConfigError("--families expects a comma-separated list of 1-4", "families")
    return tuple(fams)


def cmd_compute(args):
    system = build(args.system, args.cutoff)
    row = sweep.compute_row(
        system,
        args.theta,
        args.phi,
        families=_families(args.families),
        orthogonalize=args.orthogonalize,
        companion=args.companion,
        strict=True,
    )
    _emit(json.dumps(row, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args):
    data = _load_json(args.config)
    if args.system is not None:
        data["system"] = args.system
    if args.orthogonalize:
        data["orthogonalize"] = True
    if args.cutoff is not None:
        data["cutoff"] = args.cutoff
    config = sweep.parse_sweep_config(data)
    out = args.out or config.output_path
    _emit(sweep.run_sweep(config), out)
    return EXIT_OK


_FUZZ_KEYS = {
    "seed": "seed",
    "trials": "trials",
    "dims": "dims",
    "nObservables": "n_observables",
    "epsVarReject": "eps_var_reject",
    "slackTolerance": "slack_tolerance",
}


def parse_fuzz_config(data):
    if not isinstance(data, dict):
        raise ConfigError("fuzz config must be a JSON object", "<root>")
    kwargs = {}
    for key, value in data.items():
        if key not in _FUZZ_KEYS:
            raise ConfigError(f"unknown fuzz config key {key!r}", key)
        kwargs[_FUZZ_KEYS[key]] = value
    try:
        return harness.FuzzConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), next(iter(data), None)) from None


def cmd_fuzz(args):
    data = _load_json(args.config)
    if args.seed is not None:
        data["seed"] = args.seed
    if args.trials is not None:
        data["trials"] = args.trials
    report = harness.run_fuzz(parse_fuzz_config(data))
    _emit(json.dumps(report.as_dict(), indent=2) + "\n", args.out)
    return EXIT_FAILURES if report.total_failures else EXIT_OK


def _complex(value, key):
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected a number or [re, im]", key)
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{key}: expected a number or [re, im]", key)


_COEFF_WORDS = {"1": 1, "+1": 1, "-1": -1, "i": 1j, "+i": 1j, "-i": -1j}


def _coefficient(value, key):
    if isinstance(value, str):
        if value.strip() not in _COEFF_WORDS:
            raise ConfigError(f"{key}: coefficient must be one of 1, -1, i, -i", key)
        return _COEFF_WORDS[value.strip()]
    c = _complex(value, key)
    if c not in (1, -1, 1j, -1j):
        raise ConfigError(f"{key}: coefficient must be one of 1, -1, i, -i", key)
    return c


def _coeff_label(c):
    return {1: "1", -1: "-1", 1j: "i", -1j: "-i"}[complex(c)]


def _vector(value, key):
    if not isinstance(value, list) or len(value) < 2:
        raise ConfigError(f"{key}: expected a list of amplitudes", key)
    return np.array([_complex(v, f"{key}[{k}]") for k, v in enumerate(value)])


def _matrix(value, key):
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ConfigError(f"{key}: expected an operator name or a square matrix", key)
    return np.array([[_complex(v, f"{key}[{i}][{j}]") for j, v in enumerate(row)]
                     for i, row in enumerate(value)])


def _parse_multi(data, orthogonalize):
    if not isinstance(data, dict):
        raise ConfigError("multi spec must be a JSON object", "<root>")
    known = {"system", "theta", "phi", "cutoff", "state", "observables", "coefficients",
             "companion", "variant", "search"}
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown multi spec key {key!r}", key)
    for key in ("observables",):
        if key not in data:
            raise ConfigError(f"missing required key {key!r}", key)
    system = None
    ref_perp = None
    if "system" in data:
        if data["system"] not in SYSTEMS:
            raise ConfigError(f"system must be one of {SYSTEMS}", "system")
        for key in ("theta", "phi"):
            if key not in data or isinstance(data[key], bool) or not isinstance(data[key], (int, float)):
                raise ConfigError(f"{key} must be a number when a system is given", key)
        system = build(data["system"], data.get("cutoff"))
        psi, ref_perp = system.state_pair(data["theta"], data["phi"])
    elif "state" in data:
        psi = PureState(_vector(data["state"], "state"))
    else:
        raise ConfigError("either 'system' (with theta, phi) or 'state' is required", "state")

    obs_spec = data["observables"]
    if not isinstance(obs_spec, list) or len(obs_spec) < 2:
        raise ConfigError("observables must list at least two operators", "observables")
    observables = []
    for k, item in enumerate(obs_spec):
        key = f"observables[{k}]"
        if isinstance(item, str):
            if system is None:
                raise ConfigError(f"{key}: operator names need a 'system'", key)
            try:
                observables.append(system.operator(item))
            except KeyError as exc:
                raise ConfigError(str(exc.args[0]), key) from None
        else:
            observables.append(_matrix(item, key))

    search = data.get("search", False)
    if search not in (False, "lower", "upper"):
        raise ConfigError("search must be false, 'lower' or 'upper'", "search")
    if not search:
        if "coefficients" not in data:
            raise ConfigError("missing required key 'coefficients'", "coefficients")
        coeffs = data["coefficients"]
        if not isinstance(coeffs, list):
            raise ConfigError("coefficients must be a list", "coefficients")
        coeffs = [_coefficient(c, f"coefficients[{k}]") for k, c in enumerate(coeffs)]
    else:
        coeffs = None

    variant = data.get("variant", "symmetric")
    if variant not in multi.VARIANTS:
        raise ConfigError(f"variant must be one of {multi.VARIANTS}", "variant")

    companion = data.get("companion")
    perp = None
    overlap = None
    repaired = False
    if companion == "builtin":
        if ref_perp is None:
            raise ConfigError("companion 'builtin' needs a 'system'", "companion")
        perp = ref_perp
    elif isinstance(companion, list):
        perp = PureState(_vector(companion, "companion"))
    elif companion is not None:
        raise ConfigError("companion must be null, 'builtin' or a list of amplitudes", "companion")
    if perp is not None:
        overlap = orthogonality_check(psi, perp)
        if overlap > 1e-10 and orthogonalize:
            perp = gram_schmidt_orthogonalize(perp, psi)
            repaired = True
    return psi, observables, coeffs, perp, variant, search, overlap, repaired


def cmd_multi(args):
    data = _load_json(args.config)
    psi, observables, coeffs, perp, variant, search, overlap, repaired = _parse_multi(
        data, args.orthogonalize
    )
    if search:
        found = multi.tightest_coefficients(observables, psi, perp, objective=search, variant=variant)
        spec, result = found.spec, found.result
    else:
        spec = multi.MultiObsSpec(observables, coeffs)
        if perp is None:
            result = multi.multi_bounds(spec, psi)
        else:
            result = multi.multi_bounds_orthogonal(spec, psi, perp, variant)
    mm = multi.multi_moments(spec, psi)
    payload = {
        "coefficients": [_coeff_label(c) for c in spec.coefficients],
        "stds": list(mm.stds),
        "sum": mm.sum,
        "F": mm.combined_dev,
        "G": mm.g_param,
        "crossSum": mm.cross_sum,
        "lower": result.lower,
        "upper": result.upper,
        "usedOrthogonal": result.used_orthogonal,
        "fPerp": result.f_perp,
        "gPerp": result.g_perp,
        "variant": result.variant if result.used_orthogonal else None,
        "orthoOverlap": overlap,
        "repaired": repaired,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="uncertainty-bounds",
        description="Strengthened forward and reverse bounds on variance sums.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate every bound at one (theta, phi) point")
    p.add_argument("--system", required=True, choices=SYSTEMS)
    p.add_argument("--theta", required=True, type=float, help="radians")
    p.add_argument("--phi", required=True, type=float, help="radians")
    p.add_argument("--families", default="1,2,3,4")
    p.add_argument("--companion", default="builtin", choices=sweep.COMPANIONS)
    p.add_argument("--orthogonalize", action="store_true",
                   help="Gram-Schmidt repair a non-orthogonal companion state")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="(theta, phi) grid from a JSON config, CSV output")
    p.add_argument("--config", required=True)
    p.add_argument("--system", choices=SYSTEMS)
    p.add_argument("--orthogonalize", action="store_true")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fuzz", help="randomized verification run, JSON report")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("multi", help="multi-observable bounds from a JSON spec")
    p.add_argument("--config", required=True)
    p.add_argument("--orthogonalize", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_multi)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        return args.func(args)
    except (UncertaintyError, OSError) as exc:
        return _fail(exc)
    except (ValueError, KeyError) as exc:
        return _fail(ConfigError(str(exc)))


if __name__ == "__main__":
    sys.exit(main())
