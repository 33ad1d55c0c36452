"""Command line front end with JSON input and output.

Every subcommand validates its input against the documented schema before
dispatch, prints a JSON result on stdout and exits 0; malformed input is
diagnosed on stderr with exit code 2; internal numerical failures exit 1.
Arguments that accept a file path also accept inline JSON (anything that
starts with '{' or '[').

Randomized checks take their seed from --seed, falling back to the
SECTIONREP_SEED environment variable and then to the built-in default.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

import numpy as np

from . import DEFAULT_SEED, __version__
from .boundary import (
    GrowthSpec,
    ck_norm,
    extends_to_ck,
    section_from_json,
)
from .charfactor import (
    factor_characters,
    multiset_from_json,
    multiset_to_json,
    polynomial_from_json,
    verify_factorization,
)
from .errors import InputError, NumericalFailure, SchemaError, SectionRepError
from .evalrep import (
    classify_inducible,
    equivalent,
    extract_highest_weight,
    functional_from_json,
    functional_to_json,
    realize,
    spec_from_json,
    spec_to_json,
    tensor,
)
from .irrep import (
    CompactElement,
    build_irrep,
    compact_kappa_norm,
    irrep_to_json,
    operator_norm,
)
from .rootdata import build_root_system, kappa_norm
from .selftest import run_selftest
from .series import parse_rule, rule_from_json, require_bounded
from .uhf import (
    itp_equivalent,
    powers_factor_type,
    product_state_from_json,
    state_eval,
    vector_sequence_from_json,
)


def _load_json(arg: str):
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        try:
            with open(arg, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError(f"cannot read {arg!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {arg!r}: {exc}") from exc


def _load_rule(arg: str):
    if arg.lstrip().startswith("{"):
        return rule_from_json(_load_json(arg))
    if ":" in arg and not os.path.exists(arg):
        return parse_rule(arg)
    return rule_from_json(_load_json(arg))


def _parse_floats(text: str):
    return tuple(float(x) for x in text.split(",")) if text else ()


def _parse_ints(text: str):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise SchemaError(f"bad integer list {text!r}: {exc}") from exc


def _emit(data: dict, fmt: str) -> None:
    if fmt == "table":
        width = max((len(k) for k in data), default=0)
        for key in sorted(data):
            print(f"{key.ljust(width)}  {json.dumps(data[key], sort_keys=True)}")
    else:
        print(json.dumps(data, sort_keys=True, indent=2))


def _resolve_seed(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get("SECTIONREP_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise SchemaError(f"SECTIONREP_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _complex_json(z: complex):
    return [z.real, z.imag]


# -- subcommand handlers -----------------------------------------------------


def _cmd_irrep(args) -> dict:
    rs = build_root_system(args.series, args.rank)
    weight = _parse_ints(args.weight)
    rep = build_irrep(rs, weight)
    if args.action == "build":
        return irrep_to_json(rep, include_matrices=args.matrices)
    x = CompactElement.from_simple(
        rs,
        c=_parse_floats(args.cartan),
        a=_parse_floats(args.real_root),
        b=_parse_floats(args.imag_root),
    )
    return {
        "operator_norm": operator_norm(rep, x),
        "weight_norm": kappa_norm(rs, weight, args.normalization),
        "element_norm": compact_kappa_norm(rs, x, args.normalization),
        "normalization": args.normalization,
    }


def _cmd_evalrep(args) -> dict:
    if args.action == "tensor":
        combined = tensor(spec_from_json(_load_json(args.inputs[0])), spec_from_json(_load_json(args.inputs[1])))
        return spec_to_json(combined)
    if args.action == "equiv":
        a = spec_from_json(_load_json(args.inputs[0]))
        b = spec_from_json(_load_json(args.inputs[1]))
        return {"equivalent": equivalent(a, b)}
    spec = spec_from_json(_load_json(args.inputs[0]))
    if args.action == "realize":
        rep = realize(spec)
        out = {
            "total_dim": rep.total_dim,
            "site_dims": list(rep.site_dims),
            "site_labels": list(rep.site_labels),
        }
        if args.validate:
            out["relation_residual"] = rep.validate()
        return out
    if args.action == "extract":
        data = extract_highest_weight(realize(spec))
        out = {"e_dim": data.e_dim}
        if data.functional is not None:
            out["functional"] = functional_to_json(data.functional)
        return out
    raise SchemaError(f"unknown evalrep action {args.action!r}")


def _cmd_classify(args) -> dict:
    functional = functional_from_json(_load_json(args.input))
    result = classify_inducible(functional)
    if result.inducible:
        return {"inducible": True, "spec": spec_to_json(result.spec)}
    return {"inducible": False, "reason": result.reason}


def _cmd_uhf(args) -> dict:
    if args.action == "equiv":
        v = vector_sequence_from_json(_load_json(args.inputs[0]))
        w = vector_sequence_from_json(_load_json(args.inputs[1]))
        return itp_equivalent(v, w).to_json()
    if args.action == "powers":
        state = _state_from_args(args)
        return {"type": powers_factor_type(state).value}
    if args.action == "state":
        state = _state_from_args(args)
        ops = []
        for item in _load_json(args.ops):
            try:
                site = int(item["site"])
                matrix = [[_entry_complex(x) for x in row] for row in item["matrix"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"bad site operator {item!r}: {exc}") from exc
            ops.append((site, matrix))
        return {"value": _complex_json(state_eval(state, ops))}
    if args.action == "l1bound":
        rule = _load_rule(args.rule)
        require_bounded(rule)
        from .uhf import l1_embedding_bound

        return l1_embedding_bound(rule).to_json()
    raise SchemaError(f"unknown uhf action {args.action!r}")


def _entry_complex(x) -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(x[0], x[1])
    raise SchemaError(f"bad complex entry {x!r}")


def _state_from_args(args):
    if args.state is not None:
        return product_state_from_json(_load_json(args.state))
    if args.tail is None:
        raise SchemaError("product state needs --state or --tail")
    return product_state_from_json(
        {"prefix": list(_parse_floats(args.prefix)), "tail": args.tail}
    )


def _cmd_growth(args) -> dict:
    if args.action == "check":
        spec = GrowthSpec(args.k, _load_rule(args.dist), _load_rule(args.wnorm))
        return extends_to_ck(spec).to_json()
    section = section_from_json(_load_json(args.section))
    return {"ck_norm": ck_norm(section, args.k), "k": args.k}


def _cmd_factor(args) -> dict:
    phi = polynomial_from_json(_load_json(args.input))
    rng = np.random.default_rng(_resolve_seed(args.seed))
    if args.action == "run":
        multiset = factor_characters(phi, rng=rng, verification_trials=args.trials)
        return {"degree": phi.degree, "factors": multiset_to_json(multiset)}
    multiset = multiset_from_json(_load_json(args.factors))
    return {"verified": verify_factorization(phi, multiset, args.trials, rng)}


def _cmd_selftest(args) -> int:
    results = run_selftest(_resolve_seed(args.seed))
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        suffix = f"  [{res.detail}]" if res.detail else ""
        print(f"{status} {res.name} (n={res.count}){suffix}")
        if not res.passed:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} property groups passed")
    return 0 if failed == 0 else 1


# -- parser ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sectionrep",
        description="bounded representation calculus for section algebras",
    )
    parser.add_argument("--version", action="version", version=f"sectionrep {__version__}")
    parser.add_argument(
        "--format", choices=("json", "table"), default="json", help="output format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_irrep = sub.add_parser("irrep", help="build irreducibles, compute operator norms")
    p_irrep.add_argument("action", choices=("build", "norm"))
    p_irrep.add_argument("--series", default="A")
    p_irrep.add_argument("--rank", type=int, required=True)
    p_irrep.add_argument("--weight", required=True, help="comma separated coordinates")
    p_irrep.add_argument("--matrices", action="store_true", help="include generator matrices")
    p_irrep.add_argument("--cartan", default="", help="torus coefficients of i*H_i")
    p_irrep.add_argument("--real-root", default="", help="coefficients of E - F")
    p_irrep.add_argument("--imag-root", default="", help="coefficients of i(E + F)")
    p_irrep.add_argument("--normalization", choices=("killing", "short2"), default="killing")
    p_irrep.set_defaults(handler=_cmd_irrep)

    p_eval = sub.add_parser("evalrep", help="evaluation representation calculus")
    p_eval.add_argument("action", choices=("tensor", "equiv", "realize", "extract", "classify"))
    p_eval.add_argument("inputs", nargs="*", help="spec files or inline JSON")
    p_eval.add_argument("--validate", action="store_true", help="report relation residuals")

    def _dispatch_evalrep(args):
        needed = {"tensor": 2, "equiv": 2, "realize": 1, "extract": 1, "classify": 1}[args.action]
        if len(args.inputs) != needed:
            raise SchemaError(f"evalrep {args.action} takes {needed} input(s)")
        if args.action == "classify":
            args.input = args.inputs[0]
            return _cmd_classify(args)
        return _cmd_evalrep(args)

    p_eval.set_defaults(handler=_dispatch_evalrep)

    p_uhf = sub.add_parser("uhf", help="infinite tensor product criteria")
    p_uhf.add_argument("action", choices=("equiv", "powers", "state", "l1bound"))
    p_uhf.add_argument("inputs", nargs="*", help="vector sequence files for equiv")
    p_uhf.add_argument("--state", help="product state JSON or file")
    p_uhf.add_argument("--prefix", default="", help="leading diagonal parameters")
    p_uhf.add_argument("--tail", type=float, help="eventual diagonal parameter")
    p_uhf.add_argument("--ops", help="finitely supported operator JSON or file")
    p_uhf.add_argument("--rule", help="norm rule for l1bound")

    def _dispatch_uhf(args):
        if args.action == "equiv" and len(args.inputs) != 2:
            raise SchemaError("uhf equiv takes two vector sequences")
        if args.action == "state" and args.ops is None:
            raise SchemaError("uhf state needs --ops")
        if args.action == "l1bound" and args.rule is None:
            raise SchemaError("uhf l1bound needs --rule")
        return _cmd_uhf(args)

    p_uhf.set_defaults(handler=_dispatch_uhf)

    p_growth = sub.add_parser("growth", help="boundary growth condition")
    p_growth.add_argument("action", choices=("check", "cknorm"))
    p_growth.add_argument("--k", type=int, required=True)
    p_growth.add_argument("--dist", help="distance rule (shorthand or JSON)")
    p_growth.add_argument("--wnorm", help="weight norm rule (shorthand or JSON)")
    p_growth.add_argument("--section", help="sampled section JSON or file")

    def _dispatch_growth(args):
        if args.action == "check" and (args.dist is None or args.wnorm is None):
            raise SchemaError("growth check needs --dist and --wnorm")
        if args.action == "cknorm" and args.section is None:
            raise SchemaError("growth cknorm needs --section")
        return _cmd_growth(args)

    p_growth.set_defaults(handler=_dispatch_growth)

    p_factor = sub.add_parser("factor", help="multiplicative character factorization")
    p_factor.add_argument("action", choices=("run", "verify"))
    p_factor.add_argument("--input", required=True, help="monomial table JSON or file")
    p_factor.add_argument("--factors", help="character multiset JSON (for verify)")
    p_factor.add_argument("--trials", type=int, default=1000)
    p_factor.add_argument("--seed", type=int)

    def _dispatch_factor(args):
        if args.action == "verify" and args.factors is None:
            raise SchemaError("factor verify needs --factors")
        return _cmd_factor(args)

    p_factor.set_defaults(handler=_dispatch_factor)

    p_self = sub.add_parser("selftest", help="run the invariant suite")
    p_self.add_argument("--seed", type=int)
    p_self.set_defaults(handler=_cmd_selftest, is_selftest=True)

    return parser


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "is_selftest", False):
            return args.handler(args)
        result = args.handler(args)
        _emit(result, args.format)
        return 0
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except SectionRepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # malformed input must never crash the process
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
