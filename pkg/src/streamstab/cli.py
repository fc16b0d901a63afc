"""Command-line entry point for batch metric, normalization, gating,
sweep, and generation runs.

Every subcommand writes its outputs atomically and drops a
``<output>.manifest.json`` run manifest recording the subcommand, file
names, configuration, tool version, and input digest. Exit codes: 0 on
success, 1 on validation errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .errors import StreamstabError
from .gate import GateModel, apply_gate, format_sweep, sweep, train_gate
from .metrics import corpus_stability
from .metrics import report_dict as stability_report_dict
from .normalize import (
    BracketTokenTable,
    annotate_spoken_punctuation,
    convert_bracket_tokens,
    lowercase_stream,
)
from .stream import Corpus, read_corpus, serialize_corpus
from .synth import GenConfig, generate_corpus, sample_transcripts
from .taxonomy import Lexicons, taxonomy_report
from .taxonomy import report_dict as taxonomy_report_dict


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent) or ".", prefix=path.name)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(
    subcommand: str, input_path: Path, outputs: list[Path], config: dict
) -> None:
    manifest = {
        "subcommand": subcommand,
        "input": input_path.name,
        "outputs": [p.name for p in outputs],
        "config": config,
        "version": __version__,
        "corpus_digest": _digest(input_path),
    }
    _atomic_write(
        outputs[0].with_name(outputs[0].name + ".manifest.json"),
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
    )


def _lexicons(args) -> Lexicons | None:
    if getattr(args, "lexicon_dir", None):
        return Lexicons.from_dir(Path(args.lexicon_dir))
    return None


def _parse_knobs(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _cmd_metrics(args) -> int:
    corpus = read_corpus(args.input)
    report = stability_report_dict(corpus_stability(corpus))
    out = Path(args.output)
    _atomic_write(out, json.dumps(report, indent=2) + "\n")
    _write_manifest("metrics", Path(args.input), [out], {})
    return 0


def _cmd_classify(args) -> int:
    corpus = read_corpus(args.input)
    report = taxonomy_report_dict(taxonomy_report(corpus, _lexicons(args)))
    out = Path(args.output)
    _atomic_write(out, json.dumps(report, indent=2) + "\n")
    _write_manifest(
        "classify", Path(args.input), [out], {"lexicon_dir": args.lexicon_dir}
    )
    return 0


def _cmd_normalize(args) -> int:
    out = Path(args.output)
    if args.mode == "lowercase":
        corpus = read_corpus(args.input)
        folded = Corpus(streams=tuple(lowercase_stream(s) for s in corpus))
        _atomic_write(out, serialize_corpus(folded))
    elif args.mode == "brackets":
        table = (
            BracketTokenTable.from_file(Path(args.bracket_table))
            if args.bracket_table
            else None
        )
        corpus = read_corpus(args.input)
        lines = []
        for stream in corpus:
            for seg in stream.segments:
                text, warnings = convert_bracket_tokens(seg.raw, table)
                for w in warnings:
                    print(
                        f"warning: {stream.utterance_id}: unknown bracket token {w}",
                        file=sys.stderr,
                    )
                lines.append(
                    json.dumps(
                        {
                            "utt": stream.utterance_id,
                            "t_ms": seg.t_ms,
                            "text": text,
                            "final": seg.is_final,
                        },
                        ensure_ascii=False,
                    )
                )
        _atomic_write(out, "\n".join(lines) + ("\n" if lines else ""))
    else:  # annotate: plain transcripts, one per line
        lex = _lexicons(args)
        lines = Path(args.input).read_text(encoding="utf-8").splitlines()
        annotated = [annotate_spoken_punctuation(line, lex) for line in lines]
        _atomic_write(out, "\n".join(annotated) + ("\n" if annotated else ""))
    _write_manifest(
        "normalize",
        Path(args.input),
        [out],
        {"mode": args.mode, "bracket_table": args.bracket_table},
    )
    return 0


def _cmd_gate_train(args) -> int:
    corpus = read_corpus(args.input)
    model = train_gate(corpus, args.epochs, args.learning_rate, args.seed)
    out = Path(args.output)
    _atomic_write(out, json.dumps(model.to_dict(), indent=2) + "\n")
    _write_manifest(
        "gate-train",
        Path(args.input),
        [out],
        {
            "epochs": args.epochs,
            "learning_rate": args.learning_rate,
            "seed": args.seed,
        },
    )
    return 0


def _cmd_gate_apply(args) -> int:
    corpus = read_corpus(args.input)
    model = GateModel.load(args.model)
    gated = Corpus(
        streams=tuple(apply_gate(s, model, args.threshold) for s in corpus)
    )
    out = Path(args.output)
    _atomic_write(out, serialize_corpus(gated))
    _write_manifest(
        "gate-apply",
        Path(args.input),
        [out],
        {"model": Path(args.model).name, "threshold": args.threshold},
    )
    return 0


def _cmd_sweep_pei(args) -> int:
    corpus = read_corpus(args.input)
    points = sweep(corpus, "pei", _parse_knobs(args.pei))
    out = Path(args.output)
    _atomic_write(out, format_sweep(points))
    _write_manifest("sweep-pei", Path(args.input), [out], {"pei": args.pei})
    return 0


def _cmd_sweep_threshold(args) -> int:
    corpus = read_corpus(args.input)
    model = GateModel.load(args.model)
    points = sweep(corpus, "threshold", _parse_knobs(args.threshold), model)
    out = Path(args.output)
    _atomic_write(out, format_sweep(points))
    _write_manifest(
        "sweep-threshold",
        Path(args.input),
        [out],
        {"model": Path(args.model).name, "threshold": args.threshold},
    )
    return 0


def _cmd_generate(args) -> int:
    transcripts = [
        line
        for line in Path(args.input).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    config = GenConfig(
        raw_pei_ms=args.pei,
        p_capitalization=args.p_capitalization,
        p_numeral=args.p_numeral,
        p_punctuation_spoken_path=args.p_punctuation,
        p_streaming_precursor=args.p_streaming,
        p_spacing=args.p_spacing,
        seed=args.seed,
    )
    corpus, labeled = generate_corpus(transcripts, config)
    out = Path(args.output)
    _atomic_write(out, serialize_corpus(corpus))
    outputs = [out]
    truth_path = Path(args.truth) if args.truth else out.with_suffix(".truth.jsonl")
    truth_lines = [
        json.dumps(
            {
                "utt": ls.stream.utterance_id,
                "transition_index": idx,
                "kind": kind.value,
            }
        )
        for ls in labeled
        for idx, kind in ls.truth_events
    ]
    _atomic_write(truth_path, "\n".join(truth_lines) + ("\n" if truth_lines else ""))
    outputs.append(truth_path)
    _write_manifest(
        "generate",
        Path(args.input),
        outputs,
        {
            "seed": args.seed,
            "pei": args.pei,
            "p_capitalization": args.p_capitalization,
            "p_numeral": args.p_numeral,
            "p_punctuation": args.p_punctuation,
            "p_streaming": args.p_streaming,
            "p_spacing": args.p_spacing,
        },
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streamstab",
        description="Stability metrics and mitigation simulators for "
        "incremental ASR partial results.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--input", required=True, help="input file path")
        p.add_argument("--output", required=True, help="output file path")
        p.set_defaults(func=func)
        return p

    add("metrics", _cmd_metrics, help="compute UPWR/UPSR stability report")

    p = add("classify", _cmd_classify, help="classify revision events")
    p.add_argument("--lexicon-dir", default=None)

    p = add("normalize", _cmd_normalize, help="apply a text-normalization stabilizer")
    p.add_argument(
        "--mode", choices=("lowercase", "brackets", "annotate"), required=True
    )
    p.add_argument("--bracket-table", default=None)
    p.add_argument("--lexicon-dir", default=None)

    p = add("gate-train", _cmd_gate_train, help="train the stability gate model")
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)

    p = add("gate-apply", _cmd_gate_apply, help="gate a corpus at one threshold")
    p.add_argument("--model", required=True)
    p.add_argument("--threshold", type=float, required=True)

    p = add("sweep-pei", _cmd_sweep_pei, help="PEI latency/stability sweep")
    p.add_argument("--pei", required=True, help="comma-separated PEI values in ms")

    p = add(
        "sweep-threshold", _cmd_sweep_threshold, help="threshold latency/stability sweep"
    )
    p.add_argument("--model", required=True)
    p.add_argument("--threshold", required=True, help="comma-separated thresholds")

    p = add("generate", _cmd_generate, help="generate a labeled synthetic corpus")
    p.add_argument("--truth", default=None, help="truth label output path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pei", type=int, default=50)
    p.add_argument("--p-capitalization", type=float, default=0.15)
    p.add_argument("--p-numeral", type=float, default=0.8)
    p.add_argument("--p-punctuation", type=float, default=0.6)
    p.add_argument("--p-streaming", type=float, default=0.25)
    p.add_argument("--p-spacing", type=float, default=0.3)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StreamstabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
