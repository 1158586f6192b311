"""Command-line interface.

Exit codes: 0 success, 2 parse/usage error, 3 semantic error (unbound atom,
arity mismatch, invalid likelihood or map), 4 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import connectives, formula, lefebvre, lindblad
from .likelihood import NORMALIZATION_TOL, Likelihood

EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC, EXIT_NUMERIC = 0, 2, 3, 4


class _InputError(Exception):
    """Malformed command input, reported with exit code 2."""


def _read_json_arg(value: str):
    """Inline JSON, a file path, or ``-`` for stdin."""
    if value == "-":
        text = sys.stdin.read()
    elif os.path.isfile(value):
        with open(value, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = value
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _InputError(f"invalid JSON at position {exc.pos}: {exc.msg}") from None


def _likelihood(value, tol: float) -> Likelihood:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        if not 0 <= value <= 1:
            raise ValueError(f"probability out of range: {value!r}")
        return Likelihood((value, 1 - value), tol=tol)
    if isinstance(value, list):
        return Likelihood(value, tol=tol)
    raise _InputError(f"expected a probability or an array of probabilities, got {value!r}")


def _parse_env(value: str, tol: float) -> dict[str, Likelihood]:
    data = _read_json_arg(value)
    if not isinstance(data, dict):
        raise _InputError("environment must be a JSON object mapping atom names to probabilities")
    return {name: _likelihood(v, tol) for name, v in data.items()}


def _fmt_value(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_fmt_value(x) for x in v) + "]"
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_fmt_value(x)}" for k, x in v.items())
    return str(v)


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload))
        return
    width = max(len(k) for k in payload)
    for key, value in payload.items():
        print(f"{key.ljust(width)}  {_fmt_value(value)}")


# -- subcommands -------------------------------------------------------------

def cmd_eval(args) -> dict:
    f = formula.parse(args.formula)
    env = _parse_env(args.env, args.tol)
    result = formula.evaluate(f, env)
    return {"formula": formula.to_text(f), "likelihood": result.probs.tolist()}


def cmd_compile(args) -> dict:
    f = formula.parse(args.formula)
    order = [a.strip() for a in args.atoms.split(",")] if args.atoms else None
    g = formula.compile_boolean(f, order, k=args.arity)
    return {"formula": formula.to_text(f),
            "atoms": order if order is not None else formula.atoms(f),
            **g.to_dict()}


def cmd_enumerate(args) -> dict:
    input_dim = args.input_dim if args.input_dim is not None else 2 ** args.n
    count = connectives.count_admissible(input_dim, args.output_dim)
    payload = {"inputDim": input_dim, "outputDim": args.output_dim, "count": count}
    if args.count_only:
        return payload
    try:
        maps = connectives.enumerate_admissible(input_dim, args.output_dim, cap=args.cap)
    except connectives.EnumerationTooLarge as exc:
        print(f"listing refused: {exc}", file=sys.stderr)
        payload["maps"] = None
        payload["refused"] = True
        return payload
    payload["maps"] = [list(g.targets) for g in maps]
    return payload


def _closed_form(name, p, q, rates):
    """Expected stationary joint for the built-in gates started from the product state."""
    if name == "prepare":
        a, b, c, d = lindblad.resolve_rates(p, q, rates)
        return lindblad.product_closed_form(a, b, c, d)
    if p is None or q is None:
        return None
    if name in ("andor", "orand"):
        hop = (p * q, 0.0, p + q - 2 * p * q, (1 - p) * (1 - q))   # 11, 10, 01, 00
        out = np.array(hop[::-1])
        return out if name == "andor" else out[[0, 2, 1, 3]]
    if name == "copy":
        return np.array([(1 - p) * (1 - q), 0.0, 0.0, p + q - p * q])
    return None


def cmd_simulate(args) -> dict:
    p, q = args.p, args.q
    rates = None
    if args.rates:
        rates = [float(x) for x in args.rates.split(",")]
        if len(rates) != 4:
            raise _InputError("--rates takes four comma-separated values a,b,c,d")
    gate = args.gate
    if gate == "custom":
        if not args.spec:
            raise _InputError("custom gate needs --spec")
        n, ops = lindblad.load_gate_spec(json.dumps(_read_json_arg(args.spec)))
    elif gate == "prepare":
        n, ops = 2, lindblad.preparation_ops(*lindblad.resolve_rates(p, q, rates))
    elif gate in ("andor", "orand"):
        n, ops = 2, lindblad.and_or_ops(args.rate, swapped=gate == "orand")
    else:
        n, ops = 2, lindblad.copy_ops(args.rate, args.rate)
    model = lindblad.build_rate_model(ops, n)

    if args.init:
        p0 = np.asarray(_read_json_arg(args.init), dtype=float)
    elif gate == "prepare":
        p0 = np.full(4, 0.25)
    elif p is not None and q is not None and n == 2:
        p0 = lindblad.prepare_product(p, q, tol=args.tol)
    else:
        raise _InputError("initial state needed: give --p and --q (two modes) or --init")

    result = lindblad.stationary(model, p0, tol=args.tol, max_time=args.max_time)
    payload = {
        "gate": gate,
        "n": n,
        "states": [format(s, f"0{n}b") for s in range(2 ** n)],
        "joint": result.p.tolist(),
        "likelihood": lindblad.to_likelihood(result.p).probs.tolist(),
        "marginals": [result.marginal(i).probs.tolist() for i in range(n)],
        "converged": True,
        "time": result.time,
        "residual": result.residual,
        "steps": result.steps,
    }
    expected = None if gate == "custom" or args.init else _closed_form(gate, p, q, rates)
    if expected is not None:
        payload["closedFormError"] = float(np.abs(result.p - expected).max())
    return payload


def _bipolar_inputs(args):
    if args.input:
        data = _read_json_arg(args.input)
        try:
            return [float(data[k]) for k in ("x1", "x2", "x3")]
        except (KeyError, TypeError, ValueError):
            raise _InputError('bipolar input must look like {"x1": .., "x2": .., "x3": ..}') from None
    if args.values == ["uniform"]:
        return None
    if len(args.values) != 3:
        raise _InputError("bipolar mode takes x1 x2 x3, or 'uniform'")
    try:
        return [float(v) for v in args.values]
    except ValueError as exc:
        raise _InputError(str(exc)) from None


def _tripolar_inputs(args):
    if args.input:
        data = _read_json_arg(args.input)
        try:
            return [data[k] for k in ("x1", "x2", "x3")]
        except (KeyError, TypeError):
            raise _InputError('tripolar input must look like {"x1": [..], "x2": [..], "x3": [..]}') from None
    if args.values in ([], ["uniform"]):
        return None
    if len(args.values) != 3:
        raise _InputError("tripolar mode takes three JSON triples, or 'uniform'")
    out = []
    for v in args.values:
        try:
            out.append(json.loads(v))
        except json.JSONDecodeError as exc:
            raise _InputError(f"invalid JSON triple {v!r} at position {exc.pos}") from None
    return out


def cmd_lefebvre(args) -> dict:
    if args.mode == "bipolar":
        xs = _bipolar_inputs(args)
        if xs is not None:
            return {"mode": "bipolar", "X": float(lefebvre.bipolar_choice(*xs))}
        if args.samples is not None:
            if args.seed is None:
                raise _InputError("--samples requires --seed")
            est = lefebvre.bipolar_montecarlo(args.samples, args.seed)
            return {"mode": "bipolar", "method": "montecarlo", "X": est.mean,
                    "stderr": est.stderr, "samples": est.n_samples, "seed": args.seed}
        exact = lefebvre.bipolar_expectation_exact()
        return {"mode": "bipolar", "method": "analytic", "X": float(exact), "exact": str(exact)}

    triples = _tripolar_inputs(args)
    if triples is None:
        third = [Fraction(1, 3)] * 3
        exact = lefebvre.tripolar_exact(third, third, third)
        triples = [[1 / 3] * 3] * 3
    else:
        exact = None
    rhos = [Likelihood(t, tol=args.tol) for t in triples]
    out = lefebvre.tripolar_choice(*rhos)
    via = lefebvre.tripolar_via_formula(*rhos)
    payload = {"mode": "tripolar", "X": out.positive, "Y": out.negative, "Z": out.middle,
               "formulaDeviation": max(abs(a - b) for a, b in zip(out, via))}
    if exact is not None:
        payload["exact"] = {"X": str(exact.positive), "Y": str(exact.negative),
                            "Z": str(exact.middle)}
    return payload


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")

    parser = argparse.ArgumentParser(
        prog="plauslogic",
        description="Probabilistic many-valued logic with admissible transforms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula on likelihoods")
    p.add_argument("formula")
    p.add_argument("--env", required=True,
                   help="JSON object name -> probability vector (inline, file, or '-')")
    p.add_argument("--tol", type=float, default=NORMALIZATION_TOL,
                   help="likelihood normalization tolerance")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compile", parents=[common],
                       help="compile a formula to one admissible map")
    p.add_argument("formula")
    p.add_argument("--atoms", help="comma-separated atom order (default: first appearance)")
    p.add_argument("--arity", type=int, default=2)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("enumerate", parents=[common], help="count or list admissible maps")
    p.add_argument("n", type=int, help="number of Boolean propositions (input dim 2**n)")
    p.add_argument("--input-dim", type=int, help="override the input dimension")
    p.add_argument("--output-dim", type=int, default=2)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--cap", type=int, default=connectives.ENUMERATION_CAP)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("simulate", parents=[common], help="run a rate-equation gate")
    p.add_argument("gate", choices=("prepare", "andor", "orand", "copy", "custom"))
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--rates", help="a,b,c,d for the preparation generator")
    p.add_argument("--rate", type=float, default=1.0, help="gate rate")
    p.add_argument("--spec", help='gate JSON {"n": .., "ops": [..]} (inline, file, or \'-\')')
    p.add_argument("--init", help="initial distribution as a JSON array")
    p.add_argument("--tol", type=float, default=lindblad.STATIONARY_TOL,
                   help="stationarity threshold on ||Qp||_1")
    p.add_argument("--max-time", type=float, default=lindblad.DEFAULT_MAX_TIME)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("lefebvre", parents=[common], help="reflexive choice model")
    p.add_argument("mode", choices=("bipolar", "tripolar"))
    p.add_argument("values", nargs="*",
                   help="bipolar: x1 x2 x3 | uniform; tripolar: three JSON triples | uniform")
    p.add_argument("--input", help="JSON object with x1, x2, x3")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float, default=NORMALIZATION_TOL)
    p.set_defaults(func=cmd_lefebvre)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.func(args)
    except (formula.ParseError, _InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except lindblad.ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    _emit(payload, args.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
