"""Command-line front end.

Exit status: 0 when the check passes (or the search converges), 1 when it
fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from qgr.claims import FAIL, report_json, report_text, run_claims, stable_float
from qgr.criteria import scr_check, symbolic_contradiction, wcr_check
from qgr.games import (
    Partition, catalog_game, classical_mixed_payoff, classify_group, load_game,
    payoff_partition,
)
from qgr.kernel import tensor_apply
from qgr.presets import data_path
from qgr.referee import (
    IntegrityError, build_measurement_scr, build_measurement_wcr,
    mixed_profile_ops, output_states, parse_ops_spec, quantum_payoff, read_ops_file,
)
from qgr.search import SearchConfig, feasibility_search, required_pairs, scr_constraints
from qgr.states import make_state, parse_state_spec

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# -- spec resolution ---------------------------------------------------------

def _state(args):
    try:
        spec = parse_state_spec(args.state)
        return spec, make_state(spec)
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from exc


def _ops(args, n):
    if args.ops and args.ops_file:
        raise UsageError("give either --ops or --ops-file, not both")
    try:
        if args.ops:
            return parse_ops_spec(args.ops, n)
        if args.ops_file:
            path = Path(args.ops_file)
            if not path.exists():
                shipped = data_path(path.name if path.suffix else path.name + ".ops")
                if not shipped.is_file():
                    raise UsageError(f"operator file {args.ops_file!r} not found")
                path = Path(str(shipped))
            ops = read_ops_file(path)
        else:
            raise UsageError("operators required: --ops or --ops-file")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if len(ops) != n:
        raise UsageError(f"operator file gives {len(ops)} players, state has {n}")
    return ops


def _game(args, n):
    if args.game and args.game_file:
        raise UsageError("give either --game or --game-file, not both")
    try:
        if args.game_file:
            game = load_game(args.game_file)
        elif args.game:
            params = {k: v for k, v in (("l0", args.l0), ("l1", args.l1), ("lam", args.lam))
                      if v is not None}
            game = catalog_game(args.game, n, **params)
        else:
            return None
    except (KeyError, ValueError, OSError, TypeError) as exc:
        raise UsageError(f"bad game: {exc}") from exc
    if game.n_players != n:
        raise UsageError(f"game has {game.n_players} players, state has {n}")
    return game


def _parse_partition(text, n):
    try:
        sets = [tuple(int(x) for x in s.split(",") if x.strip()) for s in text.split(";") if s.strip()]
        part = Partition(tuple(sets))
    except ValueError as exc:
        raise UsageError(f"bad partition: {exc}") from exc
    if part.n_players != n:
        raise UsageError("partition does not cover the outcomes of this state")
    return part


def _partition(args, n):
    if getattr(args, "partition", None):
        return _parse_partition(args.partition, n)
    game = _game(args, n)
    return None if game is None else payoff_partition(game)


def _emit(args, payload, text):
    print(json.dumps(payload, indent=2, sort_keys=True) if args.json else text)


# -- commands ----------------------------------------------------------------

def cmd_check(args):
    spec, psi = _state(args)
    n = spec.n_players
    ops = _ops(args, n)
    part = None
    if args.criterion == "scr":
        rep = scr_check(psi, ops, tol=args.tol)
    else:
        part = _partition(args, n)
        if part is None:
            raise UsageError("wcr needs --game, --game-file or --partition")
        rep = wcr_check(psi, ops, part, tol=args.tol)
    payload = {**rep.to_dict(), "state": spec.label(), "operators": args.ops or args.ops_file,
               "partition": part.as_lists() if part else None, "certificate": None}
    lines = [f"{rep.criterion.upper()} {'PASS' if rep.passed else 'FAIL'}  state {spec.label()}",
             f"max_violation {_fmt(rep.max_violation)} (tol {args.tol:g})"]
    if rep.worst_pair:
        lines.append(f"worst pair {rep.worst_pair[0]},{rep.worst_pair[1]}")
    if spec.excitations is not None:
        verdict = symbolic_contradiction(spec, part or Partition.singletons(n))
        payload["certificate"] = verdict.to_dict()
        rules = ", ".join(verdict.rules) or "none"
        lines.append(f"symbolic rules: {verdict.kind} ({rules})")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_classify(args):
    if args.players is None and not args.game_file:
        raise UsageError("classify needs --players for catalog games")
    n = args.players or load_game(args.game_file).n_players
    game = _game(args, n)
    if game is None:
        raise UsageError("classify needs --game or --game-file")
    group = classify_group(game)
    part = payoff_partition(game)
    payload = {"game": game.name, "players": n, "group": group,
               "n_sets": len(part.sets), "partition": part.as_lists()}
    lines = [f"{game.name}: {group}, {len(part.sets)} sets"]
    lines += [f"  S{i} = {{{', '.join(map(str, s))}}}" for i, s in enumerate(part.sets, 1)]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _thetas(text, n):
    if not text:
        return np.zeros(n)
    try:
        vals = [float(eval_angle(t)) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad --thetas: {exc}") from exc
    if len(vals) == 1:
        vals *= n
    if len(vals) != n:
        raise UsageError(f"--thetas needs 1 or {n} values")
    return np.array(vals)


def eval_angle(token: str) -> float:
    """Float, optionally written as a multiple or fraction of ``pi``
    (``pi/4``, ``3pi/8``, ``0.5*pi``)."""
    t = token.strip().replace("*", "")
    if "pi" not in t:
        return float(t)
    head, _, tail = t.partition("pi")
    num = float(head) if head not in ("", "+", "-") else float(head + "1")
    den = float(tail[1:]) if tail.startswith("/") else 1.0
    if tail and not tail.startswith("/"):
        raise ValueError(f"cannot parse angle {token!r}")
    return num * np.pi / den


def cmd_payoff(args):
    spec, psi = _state(args)
    n = spec.n_players
    ops = _ops(args, n)
    game = _game(args, n)
    if game is None:
        raise UsageError("payoff needs --game or --game-file")
    thetas = _thetas(args.thetas, n)
    outs = output_states(psi, ops)
    part = payoff_partition(game)
    scr = scr_check(psi, ops, tol=args.tol)
    wcr = wcr_check(psi, ops, part, tol=args.tol)
    if scr.passed:
        meas, mode = build_measurement_scr(outs, tol=args.tol), "scr"
    elif wcr.passed:
        meas, mode = build_measurement_wcr(outs, part, tol=args.tol), "wcr"
    else:
        msg = (f"refused: output states fail both reproducibility criteria "
               f"(largest required overlap {_fmt(wcr.max_violation)} at outcomes "
               f"{wcr.worst_pair}). The pure-strategy outcomes cannot be recovered, so "
               f"comparing this quantum version with the classical game is not meaningful.")
        payload = {"refused": True, "reason": msg, "max_violation": wcr.max_violation}
        if args.unsafe_distribution:
            final = tensor_apply(mixed_profile_ops(ops, thetas), psi)
            probs = np.abs(final) ** 2
            payload["unsafe_distribution"] = probs.tolist()
            msg += "\nNON-COMPARABLE computational-basis distribution:\n" + "\n".join(
                f"  |{k:0{n}b}>  {_fmt(p)}" for k, p in enumerate(probs))
        _emit(args, payload, msg)
        return EXIT_FAIL
    ws = mixed_profile_ops(ops, thetas)
    try:
        f = quantum_payoff(game, meas, psi, ws)
    except IntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    payload = {"refused": False, "measurement": mode, "thetas": thetas.tolist(),
               "quantum": f.tolist()}
    lines = [f"measurement {mode}, thetas {', '.join(_fmt(t) for t in thetas)}",
             "quantum payoff   " + " ".join(_fmt(x) for x in f)]
    if args.compare_classical:
        c = classical_mixed_payoff(game, np.cos(thetas) ** 2)
        res = float(np.max(np.abs(f - c)))
        payload.update(classical=c.tolist(), residual=res)
        lines += ["classical payoff " + " ".join(_fmt(x) for x in c), f"residual {_fmt(res)}"]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_search(args):
    spec, psi = _state(args)
    n = spec.n_players
    if args.scr:
        cons, source = scr_constraints(n), "scr"
    else:
        part = _partition(args, n)
        if part is None:
            raise UsageError("search needs --scr, --game, --game-file or --partition")
        cons, source = required_pairs(part), "partition"
    cfg = SearchConfig(restarts=args.restarts, max_iters=args.iters, threshold=args.threshold,
                       rng_seed=args.seed, infeasible_threshold=args.infeasible_threshold)
    res = feasibility_search(psi, cons, cfg)
    payload = {"state": spec.label(), "constraints": source, "n_pairs": len(cons),
               "seed": args.seed, **res.to_dict()}
    payload["best_residual"] = stable_float(res.best_residual)
    if payload["witness"] is not None:
        payload["witness"] = [[[[stable_float(x) for x in z] for z in row] for row in v]
                              for v in payload["witness"]]
    lines = [f"{spec.label()}: {len(cons)} required pairs ({source})", res.summary()]
    if res.converged:
        for k, v in enumerate(res.witness, 1):
            rows = "; ".join(" ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row) for row in v)
            lines.append(f"  v_{k} = [{rows}]")
    elif res.infeasible_evidence:
        lines.append("evidence of infeasibility")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if res.converged else EXIT_FAIL


def cmd_verify_paper(args):
    claims = run_claims(seed=args.seed, restarts=args.restarts)
    print(report_json(claims, args.seed, args.restarts) if args.json else report_text(claims))
    return EXIT_FAIL if any(c.status == FAIL for c in claims) else EXIT_OK


# -- parser ------------------------------------------------------------------

def _add_state(p):
    p.add_argument("--state", required=True,
                   help="ghz:N, w:N, dicke:N:m, bell, product:N or custom:@file")


def _add_ops(p):
    p.add_argument("--ops", help='"u1,u2" for every player or "u1,u2; u1,u2; ..." per player')
    p.add_argument("--ops-file", help="operator file (falls back to shipped files by name)")


def _add_game(p, players=False):
    p.add_argument("--game", help="catalog name (pd, sh, ..., minority, majority, coordination, "
                                  "zerosum, mp_extension)")
    p.add_argument("--game-file", help="JSON game definition")
    if players:
        p.add_argument("--players", type=int, help="number of players")
    p.add_argument("--l0", type=float, help="lambda_0 for native games")
    p.add_argument("--l1", type=float, help="lambda_1 for native games")
    p.add_argument("--lam", type=float, help="lambda for the zero-sum game")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="strong or weak reproducibility check")
    p.add_argument("criterion", choices=("scr", "wcr"))
    _add_state(p)
    _add_ops(p)
    _add_game(p)
    p.add_argument("--partition", help='explicit sets, e.g. "1,4;2,3"')
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="Group I/II and payoff partition of a game")
    _add_game(p, players=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("payoff", help="quantum expected payoff (refused when not reproducible)")
    _add_state(p)
    _add_ops(p)
    _add_game(p)
    p.add_argument("--thetas", help="mixing angles, one per player or one for all (pi/4 allowed)")
    p.add_argument("--compare-classical", action="store_true")
    p.add_argument("--unsafe-distribution", action="store_true",
                   help="on refusal, print the (non-comparable) outcome distribution")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_payoff)

    p = sub.add_parser("search", help="numerical feasibility search over local unitaries")
    _add_state(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--scr", action="store_true", help="require all outputs orthogonal")
    _add_game(p)
    p.add_argument("--partition")
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=1e-9)
    p.add_argument("--infeasible-threshold", type=float, default=1e-6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-paper", help="run the claim suite")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.exit(EXIT_USAGE, f"qgr {args.command}: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
