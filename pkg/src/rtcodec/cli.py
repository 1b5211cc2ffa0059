"""Command-line interface.

Subcommands: encode, corrupt, decode, trial, oracle. Exit codes: 0 success,
2 decode failure, 3 configuration error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

import numpy as np

from . import files
from .delcodec import decode_deletions, deletion_layout, encode_deletions
from .editcodec import decode_edits, edit_layout, encode_edits
from .errors import BudgetExceeded, DecodeFailure, ParamViolation, RtCodecError
from .harness import (
    oracle_ball_disjoint,
    oracle_cap_sweep,
    oracle_hasher_exhaustive,
    params_from_config,
    run_trials,
    validate_trial_config,
)
from .model import (
    BitTrack,
    DeletionPattern,
    EditPattern,
    apply_deletions,
    apply_edits,
    sample_deletion_pattern,
    sample_edit_pattern,
)
from .params import CodeParams

EXIT_OK = 0
EXIT_DECODE = 2
EXIT_CONFIG = 3
EXIT_IO = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise CliError(EXIT_CONFIG, f"bad JSON in {path}: {e}") from e


def _params_from_args(args, n: int) -> CodeParams:
    cfg = {
        "mode": args.mode,
        "n": n,
        "k": args.k,
        "d": args.d,
        "hash": args.hash,
        "rlayer_hash": args.rlayer_hash,
        "paper_exact": not args.relaxed,
    }
    if args.t is not None:
        cfg["t"] = args.t
    if args.period_bound is not None:
        cfg["T"] = args.period_bound
    if args.block_len is not None:
        cfg["block_len"] = args.block_len
    try:
        return params_from_config(cfg)
    except (ValueError, ParamViolation) as e:
        raise CliError(EXIT_CONFIG, str(e)) from e


def cmd_encode(args) -> int:
    try:
        track = files.read_track(args.infile)
    except (OSError, ValueError) as e:
        raise CliError(EXIT_IO, f"cannot read track: {e}") from e
    params = _params_from_args(args, len(track))
    try:
        if args.mode == "del":
            cw = encode_deletions(BitTrack(track), params)
            layout = deletion_layout(params)
        else:
            cw = encode_edits(BitTrack(track), params)
            layout = edit_layout(params)
    except RtCodecError as e:
        raise CliError(EXIT_CONFIG, str(e)) from e
    files.write_codeword(args.out, cw, params, layout.to_dict())
    print(f"wrote {len(cw)}-bit codeword to {args.out}")
    return EXIT_OK


def _parse_positions(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip() != "")


def cmd_corrupt(args) -> int:
    try:
        cw, params = files.read_codeword(args.infile)
    except (OSError, ValueError, KeyError) as e:
        raise CliError(EXIT_IO, f"cannot read codeword: {e}") from e
    track = BitTrack(cw)
    try:
        if args.delta1 is not None:
            delta1 = _parse_positions(args.delta1)
            if args.gamma1 is not None or params.kind == "edit":
                gamma1 = _parse_positions(args.gamma1 or "")
                ins_bits = (
                    tuple(tuple(int(b) for b in row) for row in args.ins_bits.split(","))
                    if args.ins_bits
                    else tuple(() for _ in range(params.d))
                )
                pattern = EditPattern(delta1, gamma1, ins_bits)
                matrix = apply_edits(track, pattern, params.geometry)
            else:
                pattern = DeletionPattern(delta1)
                matrix = apply_deletions(track, pattern, params.geometry)
        else:
            rng = random.Random(args.seed)
            if params.kind == "deletion":
                pattern = sample_deletion_pattern(rng, len(track), params.k, params.geometry)
                matrix = apply_deletions(track, pattern, params.geometry)
            else:
                pattern = sample_edit_pattern(
                    rng, len(track), params.k, params.d, params.geometry, r=args.r, s=args.s
                )
                matrix = apply_edits(track, pattern, params.geometry)
    except RtCodecError as e:
        raise CliError(EXIT_CONFIG, str(e)) from e
    files.write_matrix(args.out, matrix)
    print(f"wrote {matrix.d}x{matrix.cols} read matrix to {args.out}")
    return EXIT_OK


def cmd_decode(args) -> int:
    try:
        matrix = files.read_matrix(args.infile)
        doc = _load_json(args.sidecar)
        params = CodeParams.from_dict(doc["params"])
    except (OSError, ValueError, KeyError) as e:
        raise CliError(EXIT_IO, f"cannot read inputs: {e}") from e
    report: dict = {"schema_version": 1, "kind": params.kind}
    try:
        if params.kind == "deletion":
            out = decode_deletions(matrix, params)
        else:
            out = decode_edits(matrix, params)
    except DecodeFailure as e:
        report.update({"ok": False, "stage": e.stage, "error": str(e)})
        if args.report:
            Path(args.report).write_text(json.dumps(report, indent=2) + "\n")
        print(f"decode failed at stage {e.stage}: {e}", file=sys.stderr)
        return EXIT_DECODE
    files.write_track(args.out, out)
    report.update({"ok": True, "bits": len(out)})
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n")
    print(f"wrote {len(out)}-bit track to {args.out}")
    return EXIT_OK


def cmd_trial(args) -> int:
    cfg = _load_json(args.config)
    try:
        validate_trial_config(cfg)
    except ValueError as e:
        raise CliError(EXIT_CONFIG, str(e)) from e
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    trials = args.trials if args.trials is not None else cfg.get("trials", 100)
    try:
        report = run_trials(cfg, seed, trials, workers=args.workers, stable_report=args.stable_report)
    except (ParamViolation, ValueError) as e:
        raise CliError(EXIT_CONFIG, str(e)) from e
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    if report["successes"] < report["trials"] and cfg.get("paper_exact", True):
        print(f"{report['trials'] - report['successes']} trials failed", file=sys.stderr)
        return EXIT_DECODE
    return EXIT_OK


def cmd_oracle(args) -> int:
    try:
        if args.oracle == "ball-disjoint":
            cfg = _load_json(args.config)
            allowed = {"n", "k", "d", "t", "hash", "rlayer_hash", "count", "seed", "T", "block_len", "paper_exact", "mode"}
            unknown = set(cfg) - allowed
            if unknown:
                raise CliError(EXIT_CONFIG, f"unknown config keys: {sorted(unknown)}")
            cfg.setdefault("mode", "del")
            params = params_from_config({**cfg, "mode": "del"})
            rng = random.Random(cfg.get("seed", 0))
            messages = [
                BitTrack([rng.randrange(2) for _ in range(params.n)])
                for _ in range(cfg.get("count", 10))
            ]
            report = oracle_ball_disjoint(params, messages)
            ok = report["disjoint"]
        elif args.oracle == "hasher":
            report = oracle_hasher_exhaustive(args.hash, args.m, args.k)
            ok = report["failures"] == 0
        else:  # fsweep
            report = oracle_cap_sweep(args.max_n, args.max_k)
            ok = report["violations"] == 0
    except BudgetExceeded as e:
        raise CliError(EXIT_CONFIG, str(e)) from e
    except (ValueError, ParamViolation) as e:
        raise CliError(EXIT_CONFIG, str(e)) from e
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    return EXIT_OK if ok else EXIT_DECODE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rtcodec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="encode a track file into a codeword + sidecar")
    enc.add_argument("--in", dest="infile", required=True)
    enc.add_argument("--out", required=True)
    enc.add_argument("--mode", choices=["del", "edit"], default="del")
    enc.add_argument("--k", type=int, required=True)
    enc.add_argument("--d", type=int, required=True)
    enc.add_argument("--t", type=int)
    enc.add_argument("--hash", choices=["identity", "vt", "coloring"], default="identity")
    enc.add_argument("--rlayer-hash", choices=["identity", "vt", "coloring"], default="identity")
    enc.add_argument("--relaxed", action="store_true")
    enc.add_argument("--period-bound", type=int)
    enc.add_argument("--block-len", type=int)
    enc.set_defaults(func=cmd_encode)

    cor = sub.add_parser("corrupt", help="apply a shift-error pattern to a codeword")
    cor.add_argument("--in", dest="infile", required=True)
    cor.add_argument("--out", required=True)
    cor.add_argument("--seed", type=int, default=0)
    cor.add_argument("--delta1", help="comma-separated deletion positions (head 1)")
    cor.add_argument("--gamma1", help="comma-separated insertion positions (head 1)")
    cor.add_argument("--ins-bits", help="per-head inserted bits, heads comma-separated")
    cor.add_argument("--r", type=int, help="sampled deletion count (edit mode)")
    cor.add_argument("--s", type=int, help="sampled insertion count (edit mode)")
    cor.set_defaults(func=cmd_corrupt)

    dec = sub.add_parser("decode", help="decode a read matrix back into a track")
    dec.add_argument("--in", dest="infile", required=True)
    dec.add_argument("--sidecar", required=True)
    dec.add_argument("--out", required=True)
    dec.add_argument("--report")
    dec.set_defaults(func=cmd_decode)

    tri = sub.add_parser("trial", help="run a Monte-Carlo campaign from a JSON config")
    tri.add_argument("--config", required=True)
    tri.add_argument("--seed", type=int)
    tri.add_argument("--trials", type=int)
    tri.add_argument("--out")
    tri.add_argument("--workers", type=int, default=1)
    tri.add_argument("--stable-report", action="store_true", help="omit wall-clock for byte-identical reruns")
    tri.set_defaults(func=cmd_trial)

    ora = sub.add_parser("oracle", help="exhaustive desk-scale verifications")
    ora.add_argument("oracle", choices=["ball-disjoint", "hasher", "fsweep"])
    ora.add_argument("--config", help="ball-disjoint: JSON with n,k,d,t,count,seed")
    ora.add_argument("--hash", choices=["identity", "vt", "coloring"], default="coloring")
    ora.add_argument("--m", type=int, default=8)
    ora.add_argument("--k", type=int, default=2)
    ora.add_argument("--max-n", type=int, default=10)
    ora.add_argument("--max-k", type=int, default=2)
    ora.add_argument("--out")
    ora.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
