"""``montee`` command line.

Exit codes: 0 ok, 1 check failed, 2 usage error, 3 missing or unreadable
file, 4 malformed input.
"""

from __future__ import annotations

import argparse
import sys

from montee import SCHEMA_VERSION, __version__
from montee.corpus import open_text, read_corpus, read_relations, write_corpus, write_relations
from montee.errors import MonteeError
from montee.evalkit import (
    cohens_kappa,
    disagreements,
    labels_from_records,
    read_labels,
    sample_dense,
    score,
)
from montee.lexicon import load_lexicon, validate
from montee.pipeline import ExtractOptions, process_corpus
from montee.stats import PRESETS, DomainFilterConfig, filter_documents, parse_prefixes, tag_distribution, trigger_frequency

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_IO, EXIT_MALFORMED = 0, 1, 2, 3, 4


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _fraction(value: str) -> float:
    f = float(value)
    if not 0 <= f <= 1:
        raise argparse.ArgumentTypeError("must be in [0, 1]")
    return f


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="montee", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version",
                    version=f"montee {__version__} (format schema {SCHEMA_VERSION})")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract and tag event relations")
    p.add_argument("--input", required=True, help="parsed documents (JSONL), '-' for stdin")
    p.add_argument("--lexicon", required=True, help="trigger lexicon (TSV)")
    p.add_argument("--output", default="-")
    p.add_argument("--strip-modifiers", action="store_true",
                   help="also emit relations without modifiers such as 'managed to'")
    p.add_argument("--nary", action="store_true", help="emit prepositionally composed n-ary relations")
    p.add_argument("--keep-prepositions", action="store_true",
                   help="keep relations whose predicate is a bare preposition")
    p.add_argument("--certainty", action="store_true", help="add the 0/1/2 certainty label")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("eval", help="score predicted certainty labels against gold")
    p.add_argument("--gold", required=True, help="TSV of relation-id, label")
    p.add_argument("--pred", required=True, help="TSV of relation-id, label, or relations JSONL")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("kappa", help="Cohen's kappa between two annotation files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("stats", help="tag distribution and trigger frequencies")
    p.add_argument("--input", required=True, help="relations JSONL")
    p.add_argument("--top-triggers", type=_positive_int, default=10, metavar="K")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("dense", help="documents with at least a given fraction of tagged relations")
    p.add_argument("--input", required=True, help="relations JSONL")
    p.add_argument("--min-fraction", type=_fraction, default=0.2)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_dense)

    p = sub.add_parser("filter-domain", help="keep documents whose entities belong to a domain")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--domain", choices=sorted(PRESETS), help="preset types and thresholds")
    p.add_argument("--types", help="comma-separated FIGER type prefixes")
    p.add_argument("--min-fraction", type=_fraction)
    p.add_argument("--min-count", type=int)
    p.set_defaults(func=cmd_filter_domain)

    p = sub.add_parser("lexicon", help="lexicon utilities")
    lsub = p.add_subparsers(dest="lexicon_command", required=True)
    c = lsub.add_parser("check", help="validate a lexicon file")
    c.add_argument("path")
    c.add_argument("--output", default="-")
    c.set_defaults(func=cmd_lexicon_check)
    return ap


def cmd_extract(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    opts = ExtractOptions(
        strip_modifiers=args.strip_modifiers,
        nary=args.nary,
        certainty=args.certainty,
        keep_prepositions=args.keep_prepositions,
    )
    records = process_corpus(read_corpus(args.input), lexicon, opts, workers=args.workers)
    write_relations(records, args.output)
    return EXIT_OK


def _load_pred(path):
    if str(path).endswith(".jsonl"):
        return labels_from_records(read_relations(path))
    return read_labels(path)


def cmd_eval(args) -> int:
    report = score(read_labels(args.gold), _load_pred(args.pred))
    with open_text(args.output, "w") as f:
        f.write(report.format())
    return EXIT_OK


def cmd_kappa(args) -> int:
    a, b = read_labels(args.a), read_labels(args.b)
    if set(a) != set(b):
        raise MonteeError(f"annotation files cover different relation ids: "
                          f"{sorted(set(a) ^ set(b))[:10]}")
    ids = sorted(a)
    kappa = cohens_kappa([a[i] for i in ids], [b[i] for i in ids])
    diffs = disagreements(a, b)
    with open_text(args.output, "w") as f:
        f.write(f"kappa\t{kappa:.4f}\n")
        f.write(f"items\t{len(ids)}\n")
        f.write(f"disagreements\t{len(diffs)}\n")
        for rid, x, y in diffs:
            f.write(f"{rid}\t{x}\t{y}\n")
    return EXIT_OK


def cmd_stats(args) -> int:
    records = list(read_relations(args.input))
    dist = tag_distribution(records)
    top = trigger_frequency(records, args.top_triggers)
    with open_text(args.output, "w") as f:
        f.write(dist.format())
        f.write(f"Top {args.top_triggers} triggers\n")
        for phrase, n in top:
            f.write(f"{phrase}\t{n}\n")
    return EXIT_OK


def cmd_dense(args) -> int:
    ids = sample_dense(read_relations(args.input), args.min_fraction)
    with open_text(args.output, "w") as f:
        for doc_id in ids:
            f.write(doc_id + "\n")
    return EXIT_OK


def cmd_filter_domain(args) -> int:
    preset = PRESETS.get(args.domain)
    if preset is None and not args.types:
        raise _UsageError("filter-domain needs --domain or --types")
    types = parse_prefixes(args.types) if args.types else preset.type_prefixes
    if args.min_fraction is not None:
        min_fraction = args.min_fraction
    elif preset is not None:
        min_fraction = preset.min_fraction
    else:
        raise _UsageError("filter-domain needs --min-fraction when no --domain is given")
    min_count = args.min_count if args.min_count is not None else (preset.min_count if preset else 0)
    cfg = DomainFilterConfig(args.domain or "custom", types, min_fraction, min_count)
    write_corpus(filter_documents(read_corpus(args.input), cfg), args.output)
    return EXIT_OK


def cmd_lexicon_check(args) -> int:
    report = validate(load_lexicon(args.path))
    with open_text(args.output, "w") as f:
        f.write(report.format())
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


class _UsageError(Exception):
    pass


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except FileNotFoundError as exc:
        print(f"montee: error: no such file: {exc.filename}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"montee: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MonteeError as exc:
        print(f"montee: error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


def run(argv) -> int:
    """Run with an argument list and return the exit code, including usage errors."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
