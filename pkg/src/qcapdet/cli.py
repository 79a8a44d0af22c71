"""Command-line interface.

Exit codes: 0 on success, 2 for invalid configuration or arguments, 3 for a
numerical failure (an invariant violated while computing, including
incompatible dimensions between configured objects).
"""

from __future__ import annotations

import argparse
import json
import sys

from .certify import threshold_fidelity
from .errors import CertificationError, ConfigError
from .measurement import outcome_probabilities
from .harness import (
    SweepSpec,
    build_channel,
    build_povm,
    build_probe,
    parse_sweep,
    run_point,
    run_sweep,
    figure_rows,
    write_csv,
)

# Published threshold figures quoted for these two families; the depolarizing
# root computed from the closed form lands near 0.811 instead of the quoted
# 0.818 (see README), so both numbers are reported side by side.
REFERENCE_THRESHOLDS = {"erasure": 0.811, "depolarizing": 0.818}


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    return doc


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _apply_overrides(doc: dict, args) -> dict:
    doc = dict(doc)
    if args.seed is not None:
        doc["seed"] = args.seed
    if getattr(args, "shots", None) is not None:
        doc["shots"] = args.shots
    return doc


def _grouping_text(grouping) -> str:
    return ";".join("+".join(str(i) for i in group) for group in grouping)


def _cmd_certify(args) -> int:
    doc = _apply_overrides(_load_config(args.config), args)
    probe = build_probe(doc.get("probe", {}) or _missing("probe"))
    channel = build_channel(doc.get("channel", {}) or _missing("channel"))
    povm = build_povm(doc.get("povm", {}) or _missing("povm"), probe.d)
    shots = int(doc.get("shots", 0))
    seed = int(doc.get("seed", 0))
    result, estimate, record = run_point(
        probe, channel, povm, optimize=bool(doc.get("optimize", False)), shots=shots, seed=seed
    )
    row = {
        "probe": result.probe_label,
        "channel": result.channel_label,
        "povm": result.povm_label,
        "qdet": result.qdet,
        "output_entropy": result.output_entropy,
        "prob_entropy": result.prob_entropy,
        "log_tp": result.log_tp,
        "input_entropy": result.input_entropy,
        "private_lower": result.private_lower,
        "ea_classical_lower": result.ea_classical_lower,
        "grouping": _grouping_text(result.grouping),
        "shots": shots,
        "seed": seed,
    }
    if estimate is not None:
        row["qdet_estimate"] = estimate
    _emit(write_csv([row]), args.out)
    print(f"probe:   {result.probe_label}", file=sys.stderr)
    print(f"channel: {result.channel_label}", file=sys.stderr)
    print(f"povm:    {result.povm_label}", file=sys.stderr)
    print(
        f"qdet = {result.qdet:.6f} bits "
        f"(output entropy {result.output_entropy:.6f}, outcome entropy "
        f"{result.prob_entropy:.6f}, log2 t.p {result.log_tp:.6f})",
        file=sys.stderr,
    )
    if estimate is not None:
        print(f"finite-shot estimate ({shots} shots): {estimate:.6f} bits", file=sys.stderr)
    print(
        f"private info >= {result.private_lower:.6f}, "
        f"entanglement-assisted classical >= {result.ea_classical_lower:.6f}",
        file=sys.stderr,
    )
    return 0


def _missing(section: str):
    raise ConfigError(f"config is missing the {section!r} section")


def _cmd_sweep(args) -> int:
    doc = _apply_overrides(_load_config(args.config), args)
    spec = parse_sweep(doc)
    rows = run_sweep(spec)
    _emit(write_csv(rows), args.out)
    print(f"{len(rows)} grid points written", file=sys.stderr)
    return 0


def _cmd_figure(args) -> int:
    columns, rows = figure_rows(args.which)
    _emit(write_csv(rows, columns), args.out)
    print(f"figure {args.which}: {len(rows)} grid points written", file=sys.stderr)
    return 0


def _cmd_threshold(args) -> int:
    computed = threshold_fidelity(args.family, args.d)
    reference = REFERENCE_THRESHOLDS.get(args.family)
    row = {
        "family": args.family,
        "d": args.d,
        "computed_threshold": computed,
        "reference_threshold": reference,
    }
    _emit(write_csv([row]), args.out)
    print(
        f"{args.family} (d={args.d}): fidelity threshold {computed:.6f} "
        f"(reference value {reference})",
        file=sys.stderr,
    )
    if args.family == "depolarizing" and abs(computed - reference) > 1e-3:
        print(
            "note: the computed depolarizing root differs from the quoted 0.818; "
            "both values are reported (see README).",
            file=sys.stderr,
        )
    return 0


def _cmd_sample(args) -> int:
    doc = _apply_overrides(_load_config(args.config), args)
    probe = build_probe(doc.get("probe", {}) or _missing("probe"))
    channel = build_channel(doc.get("channel", {}) or _missing("channel"))
    povm = build_povm(doc.get("povm", {}) or _missing("povm"), probe.d)
    shots = int(doc.get("shots", 0))
    if shots < 1:
        raise ConfigError("sample requires shots >= 1 (set 'shots' or pass --shots)")
    seed = int(doc.get("seed", 0))
    result, estimate, record = run_point(probe, channel, povm, shots=shots, seed=seed)
    p = outcome_probabilities(probe, channel, povm)
    freq = record.frequencies()
    rows = [
        {
            "outcome": povm.labels[i],
            "probability": p[i],
            "count": record.counts[i],
            "frequency": freq[i],
        }
        for i in range(len(povm))
    ]
    _emit(write_csv(rows), args.out)
    print(
        f"{shots} shots (seed {seed}): plug-in qdet estimate {estimate:.6f} bits "
        f"(exact {result.qdet:.6f})",
        file=sys.stderr,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcapdet",
        description="Certify lower bounds on quantum channel capacities from probe statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True, shots=True):
        if config:
            p.add_argument("--config", required=True, help="path to a JSON run description")
        p.add_argument("--out", default=None, help="write CSV here instead of stdout")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        if shots:
            p.add_argument("--shots", type=int, default=None, help="override the config shot count")

    p = sub.add_parser("certify", help="certify a single probe/channel/povm configuration")
    add_common(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("sweep", help="run a one-variable parameter sweep")
    add_common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("figure", help="emit the data grid behind reference figure 1 or 2")
    p.add_argument("--which", type=int, choices=(1, 2), required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("threshold", help="locate the probe-fidelity certification threshold")
    p.add_argument("--family", choices=("depolarizing", "erasure"), required=True)
    p.add_argument("--d", type=int, default=2, help="system dimension (default 2)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("sample", help="draw finite-shot counts for a configuration")
    add_common(p)
    p.set_defaults(func=_cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CertificationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
