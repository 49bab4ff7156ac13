"""Command-line interface.

Exit codes: 0 success, 1 validation error, 2 feasibility-cap error,
3 envelope-failure defect.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .analysis import appendix_gap_check, complexity
from .decode import decode
from .disjunct import generate, generate_verified, rows_thm1, rows_thm4, rows_thm5, verify_disjunct
from .errors import EnvelopeDefectError, TGTError, ValidationError
from .matrix import BinaryMatrix, ItemSet, OutcomeVector
from .model import GapPolicy, NoiseSpec, TGTParams, encode
from .simulate import (
    DEFAULT_D_VALUES,
    DEFAULT_N_VALUES,
    DEFAULT_Z_VALUES,
    ExperimentSpec,
    SweepSpec,
    run_experiment,
    simulate_bounds,
    sweep_to_csv,
)


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; we need them on 1."""

    def error(self, message: str):  # noqa: D102 - argparse hook
        raise ValidationError(message)


def _int_list(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ValidationError(f"cannot parse {what} list {text!r}") from None


def _policy_from_args(args) -> GapPolicy:
    if args.policy == "always_positive":
        return GapPolicy.always_positive()
    if args.policy == "always_negative":
        return GapPolicy.always_negative()
    if args.policy == "bernoulli":
        return GapPolicy.bernoulli(args.bernoulli_p, seed=args.policy_seed)
    overrides = {}
    if args.policy_rows:
        for tok in args.policy_rows.split(","):
            if ":" not in tok:
                raise ValidationError(f"bad --policy-rows entry {tok!r}")
            row, _, bit = tok.partition(":")
            try:
                overrides[int(row)] = int(bit)
            except ValueError:
                raise ValidationError(f"bad --policy-rows entry {tok!r}") from None
    return GapPolicy.explicit(overrides)


def _noise_from_args(args) -> NoiseSpec:
    if args.noise == "none":
        return NoiseSpec.none()
    if args.noise == "flip_rows":
        return NoiseSpec.flip_rows(_int_list(args.noise_rows or "", "noise row"))
    return NoiseSpec.random_flips(args.noise_count, seed=args.noise_seed)


def _cmd_gen(args) -> int:
    if args.verify:
        result = generate_verified(
            args.n, args.d, args.u, args.z, args.seed,
            max_attempts=args.max_attempts, rows=args.rows,
        )
        matrix = result.matrix
        summary = f"rows={matrix.rows} cols={matrix.cols} attempts={result.attempts}"
    else:
        matrix = generate(args.n, args.d, args.u, args.z, args.seed, args.variant,
                          rows=args.rows)
        summary = f"rows={matrix.rows} cols={matrix.cols}"
    if args.out == "-":
        # keep stdout a clean matrix stream
        sys.stdout.write(matrix.to_text())
        print(summary, file=sys.stderr)
    else:
        matrix.save(args.out)
        print(summary)
    return 0


def _cmd_verify(args) -> int:
    matrix = BinaryMatrix.load(args.matrix)
    result = verify_disjunct(matrix, args.d, args.r, args.z, pair_cap=args.cap)
    if result.ok:
        print("PASS")
    else:
        w = result.witness
        assert w is not None
        print("FAIL")
        print(f"ones_set={w.ones_set.format()}")
        print(f"zeros_set={w.zeros_set.format()}")
        print(f"covered_rows={w.covered_rows}")
    return 0


def _bound_line(label: str, fn, *fargs) -> str:
    try:
        return f"{label}={fn(*fargs)}"
    except ValidationError as exc:
        return f"{label}=NA ({exc})"


def _cmd_bounds(args) -> int:
    print(_bound_line("rows_thm1", rows_thm1, args.n, args.d, args.u, args.z))
    print(_bound_line("rows_thm4", rows_thm4, args.n, args.d, args.u, args.z))
    print(_bound_line("rows_thm5", rows_thm5, args.n, args.d, args.u, args.z))
    return 0


def _cmd_encode(args) -> int:
    matrix = BinaryMatrix.load(args.matrix)
    defectives = ItemSet.parse(args.defectives)
    outcome = encode(
        matrix, defectives, args.ell, args.u,
        _policy_from_args(args), _noise_from_args(args),
    )
    if args.out == "-":
        sys.stdout.write(outcome.to_text())
    else:
        outcome.save(args.out)
    return 0


def _cmd_decode(args) -> int:
    matrix = BinaryMatrix.load(args.matrix)
    outcome = OutcomeVector.load(args.outcome)
    params = TGTParams(n=matrix.cols, d=args.d, ell=args.ell, u=args.u, z=args.z)
    result = decode(outcome, matrix, params, args.alg)
    print(f"s_prime={result.recovered.format()}")
    print(f"max_false_positives={result.max_false_positives}")
    print(f"max_false_negatives={result.max_false_negatives}")
    print(f"underdetermined={'true' if result.underdetermined else 'false'}")
    return 0


def _cmd_complexity(args) -> int:
    report = complexity(args.formula, args.n, args.d, args.ell, args.u, args.z,
                        s_size=args.s_size)
    print(f"formula={report.formula}")
    print(f"term_family={report.term_family}")
    print(f"term_extension={report.term_extension}")
    print(f"total={report.total}")
    return 0


def _cmd_appendix_check(args) -> int:
    report = appendix_gap_check(args.u, args.n)
    print(f"u={report.u} n={report.n}")
    print(f"lhs={report.lhs}")
    print(f"rhs={report.rhs}")
    print(f"holds={'true' if report.holds else 'false'}")
    return 0


def _cmd_simulate_bounds(args) -> int:
    spec = SweepSpec(
        n_values=_int_list(args.n_values, "n") or DEFAULT_N_VALUES,
        d_values=_int_list(args.d_values, "d") or DEFAULT_D_VALUES,
        z_values=_int_list(args.z_values, "z") or DEFAULT_Z_VALUES,
        schemes=tuple(s.strip() for s in args.schemes.split(",") if s.strip()),
    )
    csv_text = sweep_to_csv(simulate_bounds(spec))
    if args.out == "-":
        sys.stdout.write(csv_text)
    else:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(csv_text)
        print(f"wrote {csv_text.count(chr(10)) - 1} rows to {args.out}")
    return 0


def _cmd_experiment(args) -> int:
    spec = ExperimentSpec.load(args.spec)
    report = run_experiment(spec)
    sys.stdout.write(report.to_text())
    if report.defect:
        raise EnvelopeDefectError(
            f"{report.failures} envelope failure(s) on a verified matrix"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tgtkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a randomized pooling matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--variant", choices=("thm4", "thm5"), default="thm4")
    p.add_argument("--rows", type=int, default=None,
                   help="override the variant's row count")
    p.add_argument("--verify", action="store_true",
                   help="rejection-sample until the matrix verifies")
    p.add_argument("--max-attempts", type=int, default=100)
    p.add_argument("--out", default="-", help="matrix file (default: stdout)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("verify", help="exhaustively verify disjunctness")
    p.add_argument("--matrix", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--cap", type=int, default=100_000_000)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bounds", help="row-count bounds for all three schemes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("encode", help="outcome vector for a defective set")
    p.add_argument("--matrix", required=True)
    p.add_argument("--defectives", required=True,
                   help="comma-separated 1-based items (empty for none)")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--policy", required=True,
                   choices=("always_positive", "always_negative", "bernoulli",
                            "explicit"))
    p.add_argument("--bernoulli-p", type=float, default=0.5)
    p.add_argument("--policy-seed", type=int, default=0)
    p.add_argument("--policy-rows", default="",
                   help="explicit overrides, e.g. 2:1,5:0")
    p.add_argument("--noise", choices=("none", "flip_rows", "random_flips"),
                   default="none")
    p.add_argument("--noise-rows", default="")
    p.add_argument("--noise-count", type=int, default=0)
    p.add_argument("--noise-seed", type=int, default=0)
    p.add_argument("--out", default="-", help="outcome file (default: stdout)")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="recover an approximate defective set")
    p.add_argument("--matrix", required=True)
    p.add_argument("--outcome", required=True)
    p.add_argument("--alg", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("complexity", help="closed-form decoding cost")
    p.add_argument("--formula", choices=("thm3", "thm6", "thm7", "thm8"),
                   required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--s-size", type=int, default=None)
    p.set_defaults(func=_cmd_complexity)

    p = sub.add_parser("appendix-check",
                       help="extension-term vs C(n, u) inequality check")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_appendix_check)

    p = sub.add_parser("simulate-bounds", help="bound-comparison sweep as CSV")
    p.add_argument("--out", required=True, help="CSV path ('-' for stdout)")
    p.add_argument("--n-values", default=",".join(str(v) for v in DEFAULT_N_VALUES))
    p.add_argument("--d-values", default=",".join(str(v) for v in DEFAULT_D_VALUES))
    p.add_argument("--z-values", default=",".join(str(v) for v in DEFAULT_Z_VALUES))
    p.add_argument("--schemes", default="thm1,thm4")
    p.set_defaults(func=_cmd_simulate_bounds)

    p = sub.add_parser("experiment", help="run an end-to-end recovery experiment")
    p.add_argument("--spec", required=True, help="key=value spec file")
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except TGTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
