"""Command-line front end: ``heisquartic <subcommand> [flags]``.

Data goes to stdout (and to ``--json PATH`` when given), diagnostics to
stderr.  Exit codes: 0 success, 1 usage error, 2 a failed check, 3 numeric
indeterminacy.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from . import acceptance, chowring, invariants, series, thetanum, verlinde

SCHEMA = "1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2
EXIT_INDETERMINATE = 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    g: int | None = None
    d: int | None = None
    k: int | None = None
    gmin: int = 3
    gmax: int = 8
    route: str = "all"
    seed: int = 0
    tol: float = thetanum.DEFAULT_TOL
    rank_tol: float = thetanum.DEFAULT_RANK_TOL
    json_path: str | None = None
    format: str = "text"


@dataclass
class Output:
    """What a subcommand produced: a JSON payload plus optional CSV rows and text."""

    payload: dict
    text: str
    rows: list[list[Any]] | None = None
    ok: bool = True


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _uint64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--json", dest="json_path", metavar="PATH", help="also write the JSON payload to PATH")

    parser = _Parser(prog="heisquartic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("chern-table", parents=[common], help="top Chern class of Q1 on the Jacobian")
    p.add_argument("--gmin", type=int, default=3)
    p.add_argument("--gmax", type=int, default=8)

    p = sub.add_parser("euler", parents=[common], help="Euler characteristic on S^d C")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--route", choices=("sub", "res", "binom", "all"), default="all")

    p = sub.add_parser("ranks", parents=[common], help="ranks of Q_d and N_d and the polarity defect")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int)

    p = sub.add_parser("verlinde", parents=[common], help="rank-2 Verlinde number")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("dims", parents=[common], help="dimension counts for genus g")
    p.add_argument("--g", type=int, required=True)

    p = sub.add_parser("invariants", parents=[common], help="Heisenberg-invariant quartic basis")
    p.add_argument("--g", type=int, required=True)

    p = sub.add_parser("restrict-lemma", parents=[common], help="injectivity of the eigenspace restriction")
    p.add_argument("--g", type=int, required=True)

    for name, help_text in (("coble", "reconstruct the Coble quartic (g=3)"), ("kummer-quartic", "reconstruct the Kummer quartic (g=2)")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--seed", type=_uint64, default=0)
        p.add_argument("--tol", type=float, default=thetanum.DEFAULT_TOL)
        p.add_argument("--rank-tol", type=float, default=thetanum.DEFAULT_RANK_TOL)

    sub.add_parser("selftest", parents=[common], help="run every acceptance check")
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(list(argv))
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    return RunConfig(**fields)


# -- subcommands -------------------------------------------------------------

def _need(cfg: RunConfig, name: str) -> int:
    value = getattr(cfg, name)
    if value is None:
        raise UsageError(f"--{name} is required")
    return value


def run_chern_table(cfg: RunConfig) -> Output:
    if not 2 <= cfg.gmin <= cfg.gmax <= 12:
        raise UsageError("need 2 <= gmin <= gmax <= 12")
    table = chowring.chern_table(cfg.gmin, cfg.gmax)
    rows = [[g, c] for g, c in table]
    text = "\n".join(f"g={g}: c_g(Q1) = {c}" for g, c in table)
    return Output({"table": [{"g": g, "c_g": c} for g, c in table]}, text, [["g", "c_g(Q1)"]] + rows)


def run_euler(cfg: RunConfig) -> Output:
    g, d = _need(cfg, "g"), _need(cfg, "d")
    routes = {
        "sub": series.euler_char_substitution,
        "res": series.euler_char_residue,
        "binom": series.euler_char_binomial,
    }
    names = list(routes) if cfg.route == "all" else [cfg.route]
    values = {name: routes[name](g, d) for name in names}
    expected = series.euler_char_binomial(g, d)
    agree = all(v == expected for v in values.values())
    lines = [f"{name}: {v}" for name, v in values.items()]
    lines.append("routes agree" if agree else f"MISMATCH (expected {expected})")
    rows = [["route", "value"]] + [[n, v] for n, v in values.items()]
    return Output({"g": g, "d": d, "values": values, "agree": agree}, "\n".join(lines), rows, ok=agree)


def run_ranks(cfg: RunConfig) -> Output:
    g = _need(cfg, "g")
    ds = [cfg.d] if cfg.d is not None else list(range(g))
    entries = []
    for d in ds:
        q, n = series.rank_formulas(g, d)
        entries.append({"d": d, "rankQ": q, "rankN": n, "defect": series.polarity_defect(g, d)})
    rows = [["d", "rankQ", "rankN", "defect"]] + [[e["d"], e["rankQ"], e["rankN"], e["defect"]] for e in entries]
    text = "\n".join(f"d={e['d']}: rank Q_d = {e['rankQ']}, rank N_d = {e['rankN']}, defect = {e['defect']}" for e in entries)
    return Output({"g": g, "ranks": entries}, text, rows)


def run_verlinde(cfg: RunConfig) -> Output:
    g, k = _need(cfg, "g"), _need(cfg, "k")
    value = verlinde.verlinde_su2(g, k)
    return Output({"g": g, "k": k, "verlinde": value}, str(value), [["g", "k", "verlinde"], [g, k, value]])


def run_dims(cfg: RunConfig) -> Output:
    g = _need(cfg, "g")
    dims = verlinde.dims_summary(g)
    text = "\n".join(f"{name}: {v}" for name, v in dims.items())
    return Output({"g": g, **dims}, text, [list(dims), list(dims.values())])


def run_invariants(cfg: RunConfig) -> Output:
    g = _need(cfg, "g")
    basis = invariants.quartic_basis(g)
    entries = [{"label": label.to_json(), "poly": q.to_text()} for label, q in basis]
    rows = [["type", "data", "poly"]] + [[label.kind, " ".join(map(str, label.data)), q.to_text()] for label, q in basis]
    text = "\n".join(f"{e['label']['type']}{e['label']['data']}: {e['poly']}" for e in entries)
    return Output({"g": g, "count": len(entries), "basis": entries}, text, rows)


def run_restrict_lemma(cfg: RunConfig) -> Output:
    g = _need(cfg, "g")
    cert = invariants.combined_restriction_is_injective(g)
    payload = {"g": g, "rank": cert.rank, "dimension": cert.dimension, "injective": cert.injective}
    return Output(payload, cert.summary(), [list(payload), list(payload.values())], ok=cert.injective)


def _complex_pair(z: complex) -> list[float]:
    # adding 0.0 turns -0.0 into 0.0 so output does not depend on signed zeros
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def _reconstruction_output(rec: thetanum.Reconstruction, cfg: RunConfig) -> Output:
    coeffs = rec.basis_coefficients()
    labels = [label.to_json() for label in rec.labels]
    payload = {
        "g": rec.g,
        "seed": cfg.seed,
        "coefficients": [{"label": lab, "value": _complex_pair(c)} for lab, c in zip(labels, coeffs)],
        "singularValues": [float(s) for s in rec.kernel.singular_values],
        "gapRatio": float(rec.kernel.gap_ratio),
        "residuals": {
            "value": rec.value_residual,
            "gradient": rec.gradient_residual,
            "invariance": rec.invariance_residual,
        },
    }
    rows = [["type", "data", "re", "im"]] + [
        [lab["type"], " ".join(map(str, lab["data"])), *_complex_pair(c)] for lab, c in zip(labels, coeffs)
    ]
    pairs = [_complex_pair(c) for c in coeffs]
    lines = [f"{lab['type']}{lab['data']}: {re:+.12e} {im:+.12e}i" for lab, (re, im) in zip(labels, pairs)]
    lines.append(f"gap ratio {rec.kernel.gap_ratio:.3e}")
    lines.append(
        f"residuals: value {rec.value_residual:.3e}, gradient {rec.gradient_residual:.3e}, "
        f"invariance {rec.invariance_residual:.3e}"
    )
    return Output(payload, "\n".join(lines), rows)


def run_coble(cfg: RunConfig) -> Output:
    tau = thetanum.random_tau(3, cfg.seed)
    return _reconstruction_output(thetanum.coble_reconstruction(tau, cfg.seed, cfg.tol, cfg.rank_tol), cfg)


def run_kummer_quartic(cfg: RunConfig) -> Output:
    tau = thetanum.random_tau(2, cfg.seed)
    return _reconstruction_output(thetanum.kummer_reconstruction(tau, cfg.seed, cfg.tol, cfg.rank_tol), cfg)


def run_selftest(cfg: RunConfig) -> Output:
    results = acceptance.run_all()
    payload = {"criteria": [{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results]}
    rows = [["number", "name", "passed"]] + [[r.number, r.name, r.passed] for r in results]
    return Output(payload, "\n".join(r.line() for r in results), rows, ok=all(r.passed for r in results))


COMMANDS: dict[str, Callable[[RunConfig], Output]] = {
    "chern-table": run_chern_table,
    "euler": run_euler,
    "ranks": run_ranks,
    "verlinde": run_verlinde,
    "dims": run_dims,
    "invariants": run_invariants,
    "restrict-lemma": run_restrict_lemma,
    "coble": run_coble,
    "kummer-quartic": run_kummer_quartic,
    "selftest": run_selftest,
}


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"schema": SCHEMA, **out.payload}, indent=2, sort_keys=False)
    if fmt == "csv":
        if out.rows is None:
            raise UsageError("this subcommand has no CSV form")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(out.rows)
        return buf.getvalue().rstrip("\n")
    return out.text


def execute(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    out = COMMANDS[cfg.subcommand](cfg)
    print(render(out, cfg.format), file=stdout)
    if cfg.json_path:
        with open(cfg.json_path, "w", encoding="utf-8") as fh:
            fh.write(render(out, "json") + "\n")
    return EXIT_OK if out.ok else EXIT_CHECK_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        return execute(cfg)
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except (thetanum.IndeterminateRank, thetanum.ThetaTruncationError) as exc:
        print(f"numeric indeterminacy: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except (ArithmeticError, AssertionError, thetanum.ResidualCheckFailed) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
