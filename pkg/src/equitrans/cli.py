"""Command-line front end.

Machine-readable JSON goes to stdout, one-line summaries to stderr.  Exit
codes: 0 ok, 1 refuted or unequal, 2 parse error, 3 shape mismatch,
4 inconclusive.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .bimatrix import DEFAULT_SUPPORT_CAP, enumerate_bimatrix_nash
from .equivalence import encode_strategies, equivalence_report
from .errors import BudgetExceeded, DimensionError, ParseError
from .falsifier import DEFAULT_BUDGET, IsPat, NoRefutation, falsify
from .game import DEFAULT_PROFILE_BUDGET, enumerate_pure_nash
from .serialize import (
    any_transformation_from_json,
    dumps,
    game_from_json,
    game_to_json,
    pat_to_json,
    read_json,
)
from .transforms import PatSpec, apply_transformation, detect_pat

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_PARSE = 2
EXIT_SHAPE = 3
EXIT_INCONCLUSIVE = 4


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _check_shapes(g, h) -> None:
    if g.shape != h.shape:
        raise DimensionError(f"game shape {list(g.shape)} does not match transformation shape {list(h.shape)}")


def cmd_apply(args) -> int:
    g = game_from_json(read_json(args.game))
    h = any_transformation_from_json(read_json(args.transform))
    _check_shapes(g, h)
    out = dumps(game_to_json(apply_transformation(h, g)))
    if args.out:
        Path(args.out).write_text(out)
        _note(f"wrote transformed game to {args.out}")
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_check_pat(args) -> int:
    h = any_transformation_from_json(read_json(args.transform))
    found = detect_pat(h)
    if isinstance(found, PatSpec):
        sys.stdout.write(dumps({"is_pat": True, **pat_to_json(found)}))
        _note("transformation is a positive affine transformation")
        return EXIT_OK
    report = {
        "is_pat": False,
        "reason": found.reason,
        "player": found.player,
        "profile": list(found.profile),
        "other": list(found.other) if found.other is not None else None,
        "message": found.message(),
    }
    sys.stdout.write(dumps(report))
    _note(f"not a PAT: {found.message()}")
    return EXIT_REFUTED


def cmd_equiv(args) -> int:
    g = game_from_json(read_json(args.game))
    h = any_transformation_from_json(read_json(args.transform))
    _check_shapes(g, h)
    report = equivalence_report(g, h, samples=args.samples, seed=args.seed, support_cap=args.support_cap)
    sys.stdout.write(dumps(report.to_json()))
    if report.passed:
        _note(f"all {len(report.br_checks)} best-response checks and the Nash-set checks passed")
        return EXIT_OK
    failures = report.failures
    if failures:
        first = failures[0]
        _note(
            f"{len(failures)} best-response checks failed; first: player {first.player + 1} "
            f"at {encode_strategies(first.profile)}: {list(first.br1)} vs {list(first.br2)}"
        )
    if not report.pure_ne_equal:
        _note("pure Nash sets differ")
    if report.bimatrix_ne_equal is False:
        _note("support-enumeration Nash sets differ")
    return EXIT_REFUTED


def _budget(args) -> int:
    env = os.environ.get("EQUITRANS_BUDGET")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"EQUITRANS_BUDGET must be an integer, got {env!r}")
    return args.budget


def cmd_falsify(args) -> int:
    h = any_transformation_from_json(read_json(args.transform))
    result = falsify(h, budget=_budget(args), seed=args.seed, grid_refine=args.grid_refine)
    if isinstance(result, IsPat):
        sys.stdout.write(dumps(result.to_json()))
        _note("is PAT: no witness can exist")
        return EXIT_OK
    if isinstance(result, NoRefutation):
        sys.stdout.write(dumps(result.to_json()))
        _note(f"no refutation found after {result.probes} probes (inconclusive; not a proof of preservation)")
        return EXIT_INCONCLUSIVE
    sys.stdout.write(dumps({"verdict": "witness", "witness": result.to_json()}))
    _note(
        f"witness via {result.probe}: player {result.player + 1} best responses "
        f"{[k + 1 for k in result.br_original.sorted()]} become {[k + 1 for k in result.br_transformed.sorted()]}"
    )
    return EXIT_REFUTED


def cmd_solve(args) -> int:
    g = game_from_json(read_json(args.game))
    pure = sorted(enumerate_pure_nash(g, args.profile_budget))
    out = {
        "pure_nash": [list(p) for p in pure],
        "all_pure_profiles_nash": len(pure) == g.num_profiles,
        "mixed_nash": None,
        "degenerate_supports": None,
    }
    if g.num_players == 2 and max(g.shape) <= args.support_cap:
        sol = enumerate_bimatrix_nash(g, args.support_cap)
        out["mixed_nash"] = [encode_strategies(s.strategies) for s in sol.equilibria]
        out["degenerate_supports"] = [[list(a), list(b)] for a, b in sol.degenerate_supports]
    sys.stdout.write(dumps(out))
    if out["all_pure_profiles_nash"]:
        _note("all pure profiles are NE")
    else:
        _note(f"{len(pure)} pure NE")
    if out["mixed_nash"] is not None:
        _note(f"{len(out['mixed_nash'])} NE from support enumeration, {len(out['degenerate_supports'])} degenerate support pairs")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equitrans", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", help="apply a transformation or PAT to a game")
    p.add_argument("game")
    p.add_argument("transform", help="transformation or PAT file")
    p.add_argument("-o", "--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("check-pat", help="decide structurally whether a transformation is a PAT")
    p.add_argument("transform")
    p.set_defaults(func=cmd_check_pat)

    p = sub.add_parser("equiv", help="compare best responses and Nash sets of a game and its transform")
    p.add_argument("game")
    p.add_argument("transform")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--support-cap", type=int, default=DEFAULT_SUPPORT_CAP)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("falsify", help="search for a witness game against a transformation")
    p.add_argument("transform")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="probe budget (env EQUITRANS_BUDGET overrides)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-refine", type=int, default=0)
    p.set_defaults(func=cmd_falsify)

    p = sub.add_parser("solve", help="list pure Nash equilibria and, for two players, support enumeration")
    p.add_argument("game")
    p.add_argument("--support-cap", type=int, default=DEFAULT_SUPPORT_CAP)
    p.add_argument("--profile-budget", type=int, default=DEFAULT_PROFILE_BUDGET)
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        _note(f"error: {exc}")
        return EXIT_PARSE
    except DimensionError as exc:
        _note(f"error: shape mismatch: {exc}")
        return EXIT_SHAPE
    except BudgetExceeded as exc:
        _note(f"error: {exc}")
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
