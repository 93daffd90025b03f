"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import basecode, editgraph, harness, qsim
from .decoder import ChannelSpec, apply_insdel, decode
from .mhcode import mh_encode
from .qsim import Ensemble, PureState
from .editgraph import PathBudgetExceeded
from .seqcore import BudgetExceeded, format_sequence, parse_sequences

log = logging.getLogger("insdelq")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _read_sequence(path, q):
    try:
        with open(path) as fh:
            seqs = parse_sequences(fh.read(), q)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if not seqs:
        raise UsageError(f"{path}: no sequence found")
    return seqs[0]


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def sigma_from_dict(data: dict, site_dim: int) -> Ensemble:
    """Inserted-state spec: a state dump, or ``{"kind": basis|random_pure|maximally_mixed, ...}``."""
    if "components" in data:
        return qsim.ensemble_from_dict(data)
    kind = data.get("kind")
    if kind == "basis":
        return Ensemble.pure(PureState.basis((site_dim,), (int(data["index"]),)))
    if kind == "random_pure":
        return Ensemble.pure(PureState.random((site_dim,), int(data.get("seed", 0))))
    if kind == "maximally_mixed":
        return Ensemble.maximally_mixed((site_dim,))
    raise UsageError(f"unknown sigma kind {kind!r}")


def channel_from_dict(data: dict, site_dim: int) -> ChannelSpec:
    try:
        return ChannelSpec(int(data["insert_at"]), int(data["delete_at"]), sigma_from_dict(data["sigma"], site_dim))
    except KeyError as exc:
        raise UsageError(f"channel spec is missing key {exc}") from None


def _message(args, code):
    if getattr(args, "message", None):
        return qsim.ensemble_from_dict(_read_json(args.message)).components()[0][1]
    return PureState.random((code.l,) * code.base.k, args.seed)


def _code(args):
    return harness.code_from_config(_read_json(args.config) if args.config else {})


def cmd_matrix(args) -> int:
    x, y = _read_sequence(args.x, args.q), _read_sequence(args.y, args.q)
    h = editgraph.edit_matrix(x, y)
    if args.json:
        _emit(json.dumps(editgraph.build_graph(x, y, h).to_dict(), sort_keys=True), args.out)
    else:
        _emit(editgraph.format_matrix(h), args.out)
    return EXIT_OK


def cmd_candidates(args) -> int:
    x, y = _read_sequence(args.x, args.q), _read_sequence(args.y, args.q)
    h = editgraph.edit_matrix(x, y)
    bot, top = editgraph.path_bot(x, y, h), editgraph.path_top(x, y, h)
    s1, s2 = editgraph.f_insert(bot), editgraph.f_insert(top)
    data = {
        "x": list(x), "y": list(y), "matrix": h.tolist(), "distance": int(h[len(x), len(y)]),
        "P_bot": [list(v) for v in bot.vertices], "P_top": [list(v) for v in top.vertices],
        "S1": list(s1), "S2": list(s2),
    }
    if len(x) == len(y):
        data["J"] = list(editgraph.oracle_J(x, y))
    if args.json:
        _emit(json.dumps(data, sort_keys=True), args.out)
    else:
        lines = [editgraph.format_matrix(h), f"P_bot: {bot}", f"P_top: {top}",
                 f"S1: {format_sequence(s1)}", f"S2: {format_sequence(s2)}"]
        if "J" in data:
            lines.append(f"J: {format_sequence(data['J'])}")
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_encode(args) -> int:
    code = _code(args)
    _emit(qsim.dumps(mh_encode(code, _message(args, code))), args.out)
    return EXIT_OK


def cmd_channel(args) -> int:
    code = _code(args)
    state = qsim.ensemble_from_dict(_read_json(args.state))
    ch = channel_from_dict(_read_json(args.channel), code.site_dim)
    _emit(qsim.dumps(apply_insdel(state, ch)), args.out)
    return EXIT_OK


def cmd_decode(args) -> int:
    code = _code(args)
    target = None
    if args.state:
        received = qsim.ensemble_from_dict(_read_json(args.state))
        if args.message:
            target = _message(args, code)
    else:
        if not args.channel:
            raise UsageError("decode needs --state or --channel")
        target = _message(args, code)
        ch = channel_from_dict(_read_json(args.channel), code.site_dim)
        received = apply_insdel(mh_encode(code, target), ch)
    message, report = decode(code, received, args.seed)
    report.config = {"n": code.n, "l": code.l, "t": code.t, "base": code.base.name}
    if target is not None:
        report.fidelity = qsim.fidelity(target, message)
    payload = {"report": report.to_dict(), "message": qsim.ensemble_to_dict(message)}
    _emit(json.dumps(payload, indent=1, sort_keys=True), args.out)
    if report.fidelity is None:
        return EXIT_OK
    return EXIT_OK if report.fidelity >= args.threshold else EXIT_FAIL


def cmd_experiment(args) -> int:
    data = _read_json(args.config) if args.config else {}
    if args.seed is not None:
        data["seed"] = args.seed
    if args.threads is not None:
        data["threads"] = args.threads
    if args.threshold is not None:
        data["threshold"] = args.threshold
    config = harness.ExperimentConfig.from_dict(data)
    report = harness.cmd_experiment(config)
    log.info("experiment took %.1f s", report.wall_clock["seconds"])
    if args.out:
        report.write(args.out)
    print(json.dumps(report.summary(), sort_keys=True))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    data = _read_json(args.config) if args.config else {}
    if args.suite == "classical":
        if args.budget is not None:
            data["budget"] = args.budget
        if args.seed is not None:
            data["seed"] = args.seed
        report = harness.cmd_verify_classical(harness.ClassicalConfig.from_dict(data))
    else:
        if args.seed is not None:
            data["seed"] = args.seed
        report = harness.cmd_verify_quantum(harness.ExperimentConfig.from_dict(data))
    if args.out:
        report.write(args.out)
    for ex in report.counterexamples:
        print(json.dumps(ex, sort_keys=True), file=sys.stderr)
    print(json.dumps({"checks": report.checks, **report.summary()}, sort_keys=True))
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="insdelq", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True, seed=True, out=True):
        if config:
            sp.add_argument("--config", help="JSON config file")
        if seed:
            sp.add_argument("--seed", type=int, default=None)
        if out:
            sp.add_argument("--out", help="output path (prefix for experiment/verify)")

    for name, fn in (("matrix", cmd_matrix), ("candidates", cmd_candidates)):
        sp = sub.add_parser(name)
        sp.add_argument("x", help="file holding x (first sequence line)")
        sp.add_argument("y", help="file holding y (first sequence line)")
        sp.add_argument("--q", type=int, default=None, help="alphabet size")
        sp.add_argument("--json", action="store_true")
        common(sp, config=False, seed=False)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("encode")
    common(sp)
    sp.add_argument("--message", help="message state JSON (default: random from --seed)")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("channel")
    common(sp, seed=False)
    sp.add_argument("--state", required=True)
    sp.add_argument("--channel", required=True)
    sp.set_defaults(func=cmd_channel)

    sp = sub.add_parser("decode")
    common(sp)
    sp.add_argument("--channel")
    sp.add_argument("--message")
    sp.add_argument("--state", help="received state JSON; otherwise encode + channel are simulated")
    sp.add_argument("--threshold", type=float, default=1 - 1e-9)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("experiment")
    common(sp)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--threshold", type=float, default=None)
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("verify")
    sp.add_argument("suite", choices=["classical", "quantum"])
    common(sp)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--threads", type=int, default=None, help="accepted for interface parity; suites run serially")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError, TypeError, BudgetExceeded, PathBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except basecode.DecodingError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
