"""Command-line entry point.

Exit codes: 0 success, 1 domain error (error name and detail on stderr),
2 usage error.  Commands write only under their ``--out`` directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import errors
from .audit import fold
from .codec import decode
from .engine import Engine
from .ledger import derive_account, parse_log, read_log_lines, verify_log
from .simulation import config as simcfg
from .simulation import runner
from .tokens import design_from_data

DEFAULT_CREATOR = derive_account("fin4-cli:creator")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _load_engine(log_path) -> Engine:
    if log_path is None:
        return Engine()
    try:
        lines = read_log_lines(log_path)
    except OSError as exc:
        raise UsageError(f"cannot read {log_path}: {exc.strerror}") from None
    return Engine.from_log(lines)


def _write_log(engine: Engine, out) -> Path:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    engine.log.write(out / "events.log")
    return out / "events.log"


def _scenario(ref: str) -> simcfg.ScenarioConfig:
    path = Path(ref)
    if not path.exists() and (simcfg.SCENARIO_DIR / f"{ref}.json").exists():
        return simcfg.builtin_scenario(ref)
    return simcfg.scenario_from_data(_read_json(path))


# -- commands ------------------------------------------------------------------

def cmd_create_token(args, out):
    engine = _load_engine(args.log)
    design = design_from_data(_read_json(args.design))
    tid = engine.create_token(args.creator, design)
    _write_log(engine, args.out)
    print(f"token {tid} {design.symbol}", file=out)


def _submit_line(engine: Engine, obj, out):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise UsageError(f"expected a single-key object, got {obj!r}")
    (tag, body), = obj.items()
    if tag == "Claim":
        cid = engine.submit_claim(body["claimant"], body["token"], body.get("quantity", 1))
        print(f"claim {cid} {engine.get_claim(cid).status.value}", file=out)
    elif tag == "Attestation":
        att = decode(obj)
        status = engine.submit_attestation(att)
        claim = engine.get_claim(att.claim)
        print(f"claim {att.claim} slot {att.verifier_index} {status.value} "
              f"-> {claim.status.value}", file=out)
    elif tag == "Finalize":
        engine.finalize_claim(body["claim"])
        print(f"claim {body['claim']} finalized", file=out)
    elif tag == "AdvanceTime":
        print(f"tick {engine.advance_time(body['ticks'])}", file=out)
    else:
        raise UsageError(f"unknown line type {tag!r}")


def cmd_submit_claims(args, out):
    engine = _load_engine(args.log)
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            _submit_line(engine, obj, out)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.file}:{n}: invalid JSON ({exc.msg})") from None
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{args.file}:{n}: malformed entry ({exc})") from None
    _write_log(engine, args.out)


def cmd_run_sim(args, out):
    config = _scenario(args.config)
    if args.seed is not None:
        data = dict(config.raw, seed=args.seed)
        config = simcfg.scenario_from_data(data)
    result = runner.run(config)
    runner.write_run(result, args.out)
    s = result.summary()
    print(f"{s['scenario']}: {s['claims_submitted']} claims, {s['claims_approved']} approved, "
          f"ratio {s['approval_ratio']}, head {s['log_head_hash']}", file=out)


def cmd_sweep(args, out):
    config = _scenario(args.config)
    grid = _read_json(args.grid)
    rows = runner.sweep(config, grid, workers=args.workers)
    runner.write_sweep(rows, args.out)
    print(f"{len(rows)} runs written to {Path(args.out) / 'sweep.csv'}", file=out)


def cmd_verify_log(args, out):
    try:
        lines = read_log_lines(args.log)
    except OSError as exc:
        raise UsageError(f"cannot read {args.log}: {exc.strerror}") from None
    bad = verify_log(lines)
    if bad is not None:
        raise errors.CorruptLog(bad)
    print(f"ok: {len(lines)} records", file=out)


def _table(headers, rows) -> str:
    rows = [[str(c) for c in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(headers)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*headers), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*r) for r in rows]
    return "\n".join(line.rstrip() for line in lines)


def render_report(records, sections) -> str:
    f = fold(records)
    parts = []
    if "tokens" in sections:
        rows = [(t.id, t.symbol, t.name, t.creator[:12], t.curated_status, f.minted[t.id],
                 f.supply(t.id)) for t in sorted(f.tokens.values(), key=lambda t: t.id)]
        parts.append("== tokens ==\n" + _table(
            ("id", "symbol", "name", "creator", "curated", "minted", "supply"), rows))
    if "claims" in sections:
        funnel = f.funnel()
        rows = [(k, funnel[k]) for k in ("submitted", "approved", "rejected", "open")]
        parts.append("== claims ==\n" + _table(("stage", "count"), rows))
    if "polls" in sections:
        rows = []
        for p in sorted(f.polls.values(), key=lambda p: p.id):
            pay = "; ".join(f"{a[:12]}={n}({r})" for a, n, r in p.payouts)
            rows.append((p.id, p.token, p.challenger[:12], p.outcome, p.for_weight,
                         p.against_weight, pay))
        parts.append("== polls ==\n" + _table(
            ("poll", "token", "challenger", "outcome", "for", "against", "payouts"), rows))
    if "reputation" in sections:
        rep, gov = f.rep(), f.gov()
        rows = [(a[:12], rep.get(a, 0), gov.get(a, 0)) for a in sorted(set(rep) | set(gov))]
        parts.append("== reputation ==\n" + _table(("account", "REP", "GOV"), rows))
    if "pools" in sections:
        rows = sorted(f.pools.items())
        parts.append("== pools ==\n" + _table(("token", "balance"), rows))
    return "\n\n".join(parts) + "\n"


SECTIONS = ("tokens", "claims", "polls", "reputation", "pools")


def cmd_report(args, out):
    try:
        lines = read_log_lines(args.log)
    except OSError as exc:
        raise UsageError(f"cannot read {args.log}: {exc.strerror}") from None
    records = parse_log(lines)
    sections = [s for s in SECTIONS if getattr(args, s)] or list(SECTIONS)
    out.write(render_report(records, sections))


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fin4", description="Token economy engine, simulator and log tools.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("create-token", help="create a token from a design file")
    c.add_argument("--design", required=True)
    c.add_argument("--log", help="existing log to extend (default: fresh engine)")
    c.add_argument("--creator", default=DEFAULT_CREATOR)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_create_token)

    c = sub.add_parser("submit-claims", help="apply claims and attestations from a JSON-lines file")
    c.add_argument("file")
    c.add_argument("--log", required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_submit_claims)

    c = sub.add_parser("run-sim", help="run a scenario (file or builtin name)")
    c.add_argument("config")
    c.add_argument("--out", required=True)
    c.add_argument("--seed", type=int)
    c.set_defaults(func=cmd_run_sim)

    c = sub.add_parser("sweep", help="run a scenario over a parameter grid")
    c.add_argument("config")
    c.add_argument("grid")
    c.add_argument("--out", required=True)
    c.add_argument("--workers", type=int, default=1)
    c.set_defaults(func=cmd_sweep)

    c = sub.add_parser("verify-log", help="check the hash chain of a log")
    c.add_argument("log")
    c.set_defaults(func=cmd_verify_log)

    c = sub.add_parser("report", help="tables derived from a log")
    c.add_argument("log")
    for s in SECTIONS:
        c.add_argument(f"--{s}", action="store_true")
    c.set_defaults(func=cmd_report)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except errors.Fin4Error as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
        return 1
    return 0


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
