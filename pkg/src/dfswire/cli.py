"""Command-line entry point.

    dfswire demo-dephasing
    dfswire dfs-find channel.json [--ops ops.json]
    dfswire channel-info channel.json
    dfswire privacy channel.json ensemble.json
    dfswire code-verify channel.json code.json --lambda 1e-6 --mu 1e-2
    dfswire capacity channel.json [--states ensemble.json] [--difference]

Exit status: 0 on success, 2 when an input fails validation, 1 when a
numerical routine fails.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import capacity as cap
from .channel import bob_state, builtin_collective_dephasing, dilate, eve_state
from .dfs import SystemOperatorSet, build_qeac, find_dfs, invariance_residual
from .errors import NumericalError, ValidationError
from .jsonio import (
    channel_from_json,
    code_from_json,
    dfs_to_json,
    dumps,
    ensemble_from_json,
    load_json,
    operators_from_json,
)
from .linalg import frobenius
from .secrecy import Ensemble, privacy, verify_wiretap_code

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 10000
DEFAULT_LAMBDA = 1e-6
DEFAULT_MU = 1e-6


def _positive(text):
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return val


def _positive_int(text):
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive, default=DEFAULT_TOL, help="optimizer tolerance in bits")
    common.add_argument("--max-iter", type=_positive_int, default=DEFAULT_MAX_ITER)
    common.add_argument("--lambda", dest="lam", type=_positive, default=DEFAULT_LAMBDA, help="decoding error bound")
    common.add_argument("--mu", type=_positive, default=DEFAULT_MU, help="leakage bound (bits per letter)")
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="dfswire", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dfs-find", parents=[common], help="find decoherence-free subspaces of a channel")
    p.add_argument("channel", type=Path)
    p.add_argument("--ops", type=Path, help="explicit system operators (default: the Kraus operators)")

    p = sub.add_parser("channel-info", parents=[common], help="validate a channel and its dilation")
    p.add_argument("channel", type=Path)

    p = sub.add_parser("privacy", parents=[common], help="Bob/Eve Holevo quantities for an ensemble")
    p.add_argument("channel", type=Path)
    p.add_argument("ensemble", type=Path)

    p = sub.add_parser("code-verify", parents=[common], help="check a wiretap code against (lambda, mu)")
    p.add_argument("channel", type=Path)
    p.add_argument("code", type=Path)

    p = sub.add_parser("capacity", parents=[common], help="maximize the Holevo quantity over input priors")
    p.add_argument("channel", type=Path)
    p.add_argument("--ops", type=Path, help="explicit system operators for the DFS search")
    p.add_argument("--states", type=Path, help="signal-state ensemble (probs are ignored)")
    p.add_argument("--difference", action="store_true", help="maximize chi_Bob - chi_Eve instead (lower bound)")

    sub.add_parser("demo-dephasing", parents=[common], help="two-qubit collective dephasing walkthrough")
    return parser


def _channel(path):
    return channel_from_json(load_json(path), where=str(path))


def _ops(args, channel):
    if args.ops is None:
        return SystemOperatorSet.from_channel(channel)
    return operators_from_json(load_json(args.ops), where=str(args.ops))


def cmd_dfs_find(args):
    ch = _channel(args.channel)
    subs = find_dfs(_ops(args, ch))
    report = dfs_to_json(ch.dim_in, subs)
    rows = [
        (str(i), str(s.dim), " ".join(f"{c.real:+.6g}" + (f"{c.imag:+.6g}j" if c.imag else "") for c in s.eigenvalues),
         f"{invariance_residual(ch, s):.3e}")
        for i, s in enumerate(subs)
    ]
    table = [f"channel {ch.label or args.channel}: ambient dimension {ch.dim_in}, {len(subs)} subspace(s)"]
    table += _table(("block", "dim", "eigenvalues", "invariance residual"), rows) if rows else ["no DFS"]
    return report, table


def cmd_channel_info(args):
    ch = _channel(args.channel)
    d = dilate(ch)
    report = {
        "label": ch.label,
        "dim_in": ch.dim_in,
        "num_kraus": len(ch),
        "env_dim": d.env_dim,
        "completeness_residual": ch.completeness_residual,
        "unitarity_residual": d.unitarity_residual(),
        "embedding_residual": d.embedding_residual(),
    }
    return report, _kv(report)


def cmd_privacy(args):
    d = dilate(_channel(args.channel))
    e = ensemble_from_json(load_json(args.ensemble), where=str(args.ensemble))
    r = privacy(d, e)
    report = {"chi_bob": r.chi_bob, "chi_eve": r.chi_eve, "privacy": r.privacy}
    return report, _kv(report)


def cmd_code_verify(args):
    d = dilate(_channel(args.channel))
    code = code_from_json(load_json(args.code), where=str(args.code))
    report = verify_wiretap_code(d, code, args.lam, args.mu).to_dict()
    return report, _kv(report)


def cmd_capacity(args):
    ch = _channel(args.channel)
    d = dilate(ch)
    if args.states is not None:
        e = ensemble_from_json(load_json(args.states), where=str(args.states))
        if args.difference:
            res = cap.secrecy_rate_sweep(d, list(e.states), tol=args.tol, max_iter=args.max_iter)
        else:
            received = [bob_state(d, s) for s in e.states]
            res = cap.maximize_holevo(received, tol=args.tol, max_iter=args.max_iter)
        signal_set = "user"
    else:
        subs = find_dfs(_ops(args, ch))
        subs = [s for s in subs if invariance_residual(ch, s) <= cap.INVARIANCE_TOL]
        if not subs:
            raise ValidationError("channel has no decoherence-free subspace (no DFS)")
        best = max(subs, key=lambda s: s.dim)
        if args.difference:
            code = build_qeac(best, best.dim)
            res = cap.secrecy_rate_sweep(d, list(code.codewords), tol=args.tol, max_iter=args.max_iter)
        else:
            res = cap.secrecy_capacity_dfs(d, best, tol=args.tol, max_iter=args.max_iter)
        signal_set = "dfs-basis"
    report = res.to_dict()
    report["signal_set"] = signal_set
    return report, _kv(report)


def run_demo(tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, lam=DEFAULT_LAMBDA, mu=DEFAULT_MU) -> dict:
    """Two-qubit collective dephasing: DFS, error-avoiding code, leakage and capacity."""
    ch = builtin_collective_dephasing(2)
    d = dilate(ch)
    subs = find_dfs(SystemOperatorSet.from_channel(ch))
    block = max(subs, key=lambda s: s.dim)
    code = build_qeac(block, 2)
    pr = privacy(d, Ensemble.uniform(code.codewords))
    verdict = verify_wiretap_code(d, code, lam, mu)
    capres = cap.secrecy_capacity_dfs(d, block, tol=tol, max_iter=max_iter)
    eves = [eve_state(d, w).matrix for w in code.codewords]
    return {
        "channel": {"label": ch.label, "dim_in": ch.dim_in, "num_kraus": len(ch), "env_dim": d.env_dim},
        "dfs": dfs_to_json(ch.dim_in, subs),
        "qeac": {
            "block_dim": block.dim,
            "codewords": [_ket_label(code.kets[u].reshape(-1)) for u in range(code.num_messages)],
            "length": code.length,
            "message_bits": code.message_bits,
            "rate_bits_per_use": code.rate,
            "rate_bits_per_dimension": code.rate_per_dimension,
            "invariance_residual": invariance_residual(ch, block),
            "eve_state_spread": max(frobenius(a - b) for a in eves for b in eves),
        },
        "chi_bob": pr.chi_bob,
        "chi_eve": pr.chi_eve,
        "privacy": pr.privacy,
        "verdict": verdict.to_dict(),
        "capacity": capres.to_dict(),
    }


def _ket_label(v) -> str:
    n = int(np.log2(v.size))
    terms = [f"{complex(v[i]).real:.6g}|{i:0{n}b}>" for i in np.flatnonzero(np.abs(v) > 1e-12)]
    return " + ".join(terms)


def cmd_demo(args):
    rep = run_demo(args.tol, args.max_iter, args.lam, args.mu)
    q = rep["qeac"]
    lines = [
        f"channel          {rep['channel']['label']} ({rep['channel']['num_kraus']} Kraus operators, env dim {rep['channel']['env_dim']})",
        f"DFS blocks       dims {rep['dfs']['dims']}",
        f"code block       dim {q['block_dim']}, codewords {', '.join(q['codewords'])}",
        f"rate             {q['message_bits']:g} bit / {q['length']} qubits",
        f"chi_bob          {rep['chi_bob']!r}",
        f"chi_eve          {rep['chi_eve']!r}",
        f"privacy          {rep['privacy']!r}",
        f"p_error          {rep['verdict']['p_error']!r}",
        f"leakage          {rep['verdict']['leakage_bits_per_letter']!r} bits/letter",
        f"wiretap code     {'yes' if rep['verdict']['passes'] else 'no'} (lambda={args.lam:g}, mu={args.mu:g})",
        f"capacity         {rep['capacity']['value_bits']!r} bits per channel use",
    ]
    return rep, lines


def _kv(report: dict) -> list[str]:
    width = max(len(k) for k in report)
    return [f"{k:<{width}}  {v!r}" if isinstance(v, float) else f"{k:<{width}}  {v}" for k, v in report.items()]


def _table(header, rows) -> list[str]:
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    return [fmt.format(*header), fmt.format(*("-" * w for w in widths))] + [fmt.format(*r) for r in rows]


COMMANDS = {
    "dfs-find": cmd_dfs_find,
    "channel-info": cmd_channel_info,
    "privacy": cmd_privacy,
    "code-verify": cmd_code_verify,
    "capacity": cmd_capacity,
    "demo-dephasing": cmd_demo,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, table = COMMANDS[args.command](args)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    text = dumps(report) if args.format == "json" else "\n".join(table) + "\n"
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
