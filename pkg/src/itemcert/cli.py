"""Operator command line.

Commands: run (certify an item file), simulate (build a calibrated corpus and
run the pipeline over it), report (accreditation exports), audit verify
(ledger chain check), serve (review API).

Exit codes: 0 success, 1 usage error, 2 data error, 3 ledger invalid.
Identical inputs, config and seed produce identical outputs when --fixed-clock
pins the timestamps.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from itemcert import __version__
from itemcert.canonical import canonical_json
from itemcert.clock import fixed_clock, system_clock
from itemcert.config import load_config
from itemcert.connectors import ingest_items, item_to_line
from itemcert.errors import ItemCertError
from itemcert.ledger import EventType, Ledger, verify_chain
from itemcert.model import CertificationRecord, Label
from itemcert.pipeline import CertificationPipeline
from itemcert.reports import ReportPeriod, render_document, render_structured, summary_report
from itemcert.simulator import load_profile, review_script, simulate_corpus

USAGE_ERROR = 1
DATA_ERROR = 2
LEDGER_INVALID = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _clock_from(args):
    return fixed_clock() if args.fixed_clock else system_clock


def _triage_line(records) -> str:
    counts = {label: 0 for label in Label}
    for record in records:
        counts[record.label] += 1
    return (
        f"Green {counts[Label.GREEN]} / Yellow {counts[Label.YELLOW]} / "
        f"Red {counts[Label.RED]}"
    )


def _open_ledger(path: str | None, clock) -> Ledger:
    return Ledger(path, clock=clock)


def cmd_run(args) -> int:
    config = load_config(args.config)
    clock = _clock_from(args)
    ledger = _open_ledger(args.ledger, clock)
    try:
        with open(args.input, "r", encoding="utf-8", errors="replace") as handle:
            items, line_errors = ingest_items(handle)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return DATA_ERROR

    pipeline = CertificationPipeline(config=config, ledger=ledger)
    ledger.append(
        EventType.ITEM_INGESTED,
        {"batch": str(args.input), "items": len(items), "line_errors": len(line_errors),
         "config_hash": config.hash()},
    )

    from itemcert.canonical import sha256_hex
    from itemcert.model import ProvenanceRecord

    def provenance_for(item, line):
        return ProvenanceRecord(
            model_id="external-ingest",
            model_version="unversioned",
            prompt_hash=sha256_hex(line),
            prompt_text=None,
            system_instructions_hash=sha256_hex(""),
            generated_at=clock(),
            course_context=item.course_context,
        )

    records = pipeline.run((item, provenance_for(item, item_to_line(item))) for item in items)
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(record.to_json() + "\n")

    print(f"Certified {len(records)} items -> {out_path}")
    print(_triage_line(records))
    if line_errors:
        print(f"{len(line_errors)} line error(s):")
        for err in line_errors:
            print(f"  line {err.line_no}: {err.code}: {err.message}")
    return 0


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    clock = _clock_from(args)
    profile = load_profile(args.profile)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    ledger = _open_ledger(args.ledger or str(out_dir / "audit.jsonl"), clock)
    ledger.append(
        EventType.ITEM_INGESTED,
        {"batch": f"simulate:{profile.name}", "config_hash": config.hash(),
         "profile": profile.to_dict()},
    )

    simulated = simulate_corpus(profile, config=config, clock=clock)
    with open(out_dir / "corpus.jsonl", "w", encoding="utf-8") as handle:
        for sim in simulated:
            handle.write(item_to_line(sim.item) + "\n")

    pipeline = CertificationPipeline(config=config, ledger=ledger)
    records = pipeline.run((sim.item, sim.provenance) for sim in simulated)
    with open(out_dir / "certifications.jsonl", "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(record.to_json() + "\n")

    try:
        script = [
            {"item_id": item_id, "action": action.value}
            for item_id, action in review_script(records)
        ]
    except ItemCertError:
        script = []
    manifest = {
        "profile": profile.to_dict(),
        "config_hash": config.hash(),
        "items": [sim.manifest_entry() for sim in simulated],
        "review_script": script,
    }
    (out_dir / "manifest.json").write_text(
        canonical_json(manifest) + "\n", encoding="utf-8"
    )

    print(f"Simulated {len(simulated)} items -> {out_dir}")
    print(_triage_line(records))
    return 0


def cmd_report(args) -> int:
    try:
        lines = Path(args.certs).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        print(f"error: cannot read {args.certs}: {exc}", file=sys.stderr)
        return DATA_ERROR
    records = []
    for line_no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            records.append(CertificationRecord.from_json(line))
        except ItemCertError as exc:
            print(f"error: {args.certs}:{line_no}: {exc}", file=sys.stderr)
            return DATA_ERROR

    period = ReportPeriod.parse(args.from_, args.to)
    report = summary_report(records, period)
    rendered = (
        render_structured(report) if args.format == "structured" else render_document(report)
    )
    if args.out:
        Path(args.out).write_text(rendered + "\n", encoding="utf-8")
        print(f"Report written to {args.out}")
    else:
        print(rendered)
    if args.ledger:
        clock = _clock_from(args)
        ledger = _open_ledger(args.ledger, clock)
        ledger.append(
            EventType.REPORT_EXPORTED,
            {"certs": str(args.certs), "format": args.format,
             "records": report.total_records, "out": args.out or "-"},
        )
    return 0


def cmd_audit_verify(args) -> int:
    status = verify_chain(args.ledger)
    if status.valid:
        print(f"ledger {args.ledger}: valid")
        return 0
    print(
        f"ledger {args.ledger}: INVALID at entry {status.first_bad_index}: {status.detail}",
        file=sys.stderr,
    )
    return LEDGER_INVALID


def cmd_serve(args) -> int:
    import os

    from itemcert.service import create_app, serve
    from itemcert.store import RecordStore

    token = os.environ.get("REVIEW_API_TOKEN", "")
    if not token:
        print("error: REVIEW_API_TOKEN must be set to serve the review API", file=sys.stderr)
        return USAGE_ERROR
    config = load_config(args.config)
    clock = _clock_from(args)
    ledger = _open_ledger(args.ledger, clock)
    store = RecordStore(args.store)
    if args.certs:
        try:
            lines = Path(args.certs).read_text(encoding="utf-8").splitlines()
            for line in lines:
                if line.strip():
                    store.put(CertificationRecord.from_json(line))
        except (OSError, ItemCertError) as exc:
            print(f"error: cannot load records from {args.certs}: {exc}", file=sys.stderr)
            return DATA_ERROR
    host, _, port_text = args.addr.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: --addr must be host:port, got {args.addr!r}", file=sys.stderr)
        return USAGE_ERROR
    pipeline = CertificationPipeline(config=config, ledger=ledger)
    app = create_app(store, ledger, pipeline, api_token=token, clock=clock)
    print(f"Serving review API on http://{host}:{port_text} "
          f"({store.count('yellow')} items pending review)")
    serve(app, host, int(port_text))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="itemcert", description=__doc__)
    parser.add_argument("--version", action="version", version=f"itemcert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="pipeline configuration file (YAML)")
        p.add_argument(
            "--fixed-clock",
            action="store_true",
            help="pin all timestamps to a constant instant for reproducible output",
        )

    p_run = sub.add_parser("run", help="certify a newline-delimited item file")
    p_run.add_argument("--input", required=True)
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--ledger", default=None, help="audit ledger file (in-memory if omitted)")
    common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sim = sub.add_parser("simulate", help="build a simulated corpus and run the pipeline")
    p_sim.add_argument("--profile", required=True, help="builtin profile name or profile file")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--ledger", default=None)
    common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_rep = sub.add_parser("report", help="export an accreditation report")
    p_rep.add_argument("--certs", required=True, help="certifications.jsonl from run/simulate")
    p_rep.add_argument("--format", choices=("structured", "document"), default="structured")
    p_rep.add_argument("--out", default=None)
    p_rep.add_argument("--from", dest="from_", default=None, help="period start (RFC 3339)")
    p_rep.add_argument("--to", dest="to", default=None, help="period end (RFC 3339)")
    p_rep.add_argument("--ledger", default=None, help="append a report-exported audit event")
    common(p_rep)
    p_rep.set_defaults(func=cmd_report)

    p_audit = sub.add_parser("audit", help="audit ledger operations")
    audit_sub = p_audit.add_subparsers(dest="audit_command", required=True)
    p_verify = audit_sub.add_parser("verify", help="verify the hash chain")
    p_verify.add_argument("--ledger", required=True)
    p_verify.set_defaults(func=cmd_audit_verify)

    p_serve = sub.add_parser("serve", help="start the review API")
    p_serve.add_argument("--addr", default="127.0.0.1:8080")
    p_serve.add_argument("--certs", default=None, help="preload records from a certifications file")
    p_serve.add_argument("--store", default=":memory:", help="record store path (SQLite)")
    p_serve.add_argument("--ledger", default=None)
    common(p_serve)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ItemCertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
