import os
import sys
import logging
import argparse
from pathlib import Path
from functools import partial
from multiprocessing import Pool
from dataclasses import dataclass, field
from typing import List, Optional

from tqdm import tqdm

from src.ecst_xml import TreeXmlError, parse_tree_xml, serialize_metrics, serialize_tree
from src.frontend import FrontendIoError, LexError, ParseError, UnknownExtensionError
from src.metrics import format_table, measure_tree
from src.ecst import render_outline
from src.registry import DEFAULT_REGISTRY, load_registry, parse_file

logger = logging.getLogger("ecst_metrics")

TREE_SUFFIX = ".ecst.xml"
METRICS_SUFFIX = ".metrics.xml"

EXIT_OK = 0
EXIT_UNKNOWN_EXTENSION = 2
EXIT_SYNTAX = 3
EXIT_IO = 4
EXIT_TREE_XML = 5


@dataclass
class RunConfig:
    input_paths: List[str]
    registry_path: str = DEFAULT_REGISTRY
    tree_out_dir: Optional[str] = None
    metrics_out_dir: str = "metrics"
    extended_cc: bool = False
    emit_text_table: bool = False
    jobs: int = 1

    def __post_init__(self):
        if not self.input_paths:
            raise ValueError("at least one input file is required")


@dataclass
class FileOutcome:
    path: str
    exit_code: int
    summary: str
    table: Optional[str] = None
    outputs: List[str] = field(default_factory=list)


def exit_code_for(error: Exception) -> int:
    if isinstance(error, UnknownExtensionError):
        return EXIT_UNKNOWN_EXTENSION
    if isinstance(error, (LexError, ParseError)):
        return EXIT_SYNTAX
    if isinstance(error, TreeXmlError):
        return EXIT_TREE_XML
    return EXIT_IO


def report_error(path, error: Exception) -> int:
    separator = ":" if getattr(error, "span", None) is not None else ": "
    print(f"{path}{separator}{error}", file=sys.stderr)
    logger.debug("failure on %s", path, exc_info=error)
    return exit_code_for(error)


def write_bytes(path, data: bytes):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(data)


def is_tree_document(path) -> bool:
    return os.fspath(path).endswith(TREE_SUFFIX)


def load_tree(path, registry_path):
    if is_tree_document(path):
        with open(path, "rb") as f:
            return parse_tree_xml(f.read())
    return parse_file(path, load_registry(registry_path))


def cmd_parse(args) -> int:
    out = args.out or args.file + TREE_SUFFIX
    try:
        tree = parse_file(args.file, load_registry(args.registry))
        write_bytes(out, serialize_tree(tree))
    except (UnknownExtensionError, LexError, ParseError, FrontendIoError, TreeXmlError, OSError) as e:
        return report_error(args.file, e)
    print(f"{args.file}: {tree.language_id} eCST with {len(tree)} nodes -> {out}")
    return EXIT_OK


def metrics_path_for(path) -> str:
    path = os.fspath(path)
    if is_tree_document(path):
        path = path[:-len(TREE_SUFFIX)]
    return path + METRICS_SUFFIX


def cmd_measure(args) -> int:
    out = args.out or metrics_path_for(args.file)
    try:
        tree = load_tree(args.file, args.registry)
        report = measure_tree(tree, extended=args.extended_cc)
        write_bytes(out, serialize_metrics(report))
    except (UnknownExtensionError, LexError, ParseError, FrontendIoError, TreeXmlError, OSError) as e:
        return report_error(args.file, e)
    if args.table:
        print(format_table(report))
    else:
        print(f"{args.file}: {len(report.rows)} elements -> {out}")
    return EXIT_OK


def cmd_show(args) -> int:
    try:
        tree = load_tree(args.file, args.registry)
    except (UnknownExtensionError, LexError, ParseError, FrontendIoError, TreeXmlError, OSError) as e:
        return report_error(args.file, e)
    print(render_outline(tree, universal_only=args.universal_only))
    return EXIT_OK


def process_file(config: RunConfig, registry, path: str) -> FileOutcome:
    # parse -> tree XML -> reload -> measure -> metrics XML
    name = Path(path).name
    outputs = []
    try:
        document = serialize_tree(parse_file(path, registry))
        if config.tree_out_dir is not None:
            tree_path = os.path.join(config.tree_out_dir, name + TREE_SUFFIX)
            write_bytes(tree_path, document)
            outputs.append(tree_path)
        report = measure_tree(parse_tree_xml(document), extended=config.extended_cc)
        metrics_path = os.path.join(config.metrics_out_dir, name + METRICS_SUFFIX)
        write_bytes(metrics_path, serialize_metrics(report))
        outputs.append(metrics_path)
    except (UnknownExtensionError, LexError, ParseError, FrontendIoError, TreeXmlError, OSError) as e:
        return FileOutcome(path, report_error(path, e), f"{path}: FAILED ({e})")
    top = max((row.cc for row in report.rows), default=0)
    summary = f"{path}: {report.language_id}, {len(report.rows)} elements, max CC {top} -> {metrics_path}"
    table = format_table(report) if config.emit_text_table else None
    return FileOutcome(path, EXIT_OK, summary, table, outputs)


def output_clashes(paths):
    # outputs are named by file name, so a later input with a name already seen is refused
    first_by_name = {}
    clashes = {}
    for i, path in enumerate(paths):
        name = Path(path).name
        if name in first_by_name:
            error = FrontendIoError(f"output name {name!r} is already used by {first_by_name[name]}")
            clashes[i] = FileOutcome(path, report_error(path, error), f"{path}: FAILED ({error})")
        else:
            first_by_name[name] = path
    return clashes


def cmd_run(config: RunConfig) -> int:
    try:
        registry = load_registry(config.registry_path)
    except FrontendIoError as e:
        return report_error(config.registry_path, e)
    os.makedirs(config.metrics_out_dir, exist_ok=True)
    if config.tree_out_dir is not None:
        os.makedirs(config.tree_out_dir, exist_ok=True)

    clashes = output_clashes(config.input_paths)
    pending = [path for i, path in enumerate(config.input_paths) if i not in clashes]
    worker = partial(process_file, config, registry)
    done = []
    with tqdm(total=len(pending), unit="file", disable=len(pending) < 2) as pbar:
        if config.jobs <= 1:
            for path in pending:
                done.append(worker(path))
                pbar.update(1)
        else:
            with Pool(config.jobs) as pool:
                for outcome in pool.imap(worker, pending):
                    done.append(outcome)
                    pbar.update(1)

    done = iter(done)
    outcomes = [clashes[i] if i in clashes else next(done) for i in range(len(config.input_paths))]
    for outcome in outcomes:
        print(outcome.summary)
        if outcome.table is not None:
            print(outcome.table)
    return max(outcome.exit_code for outcome in outcomes)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecst_metrics", description="Language independent source code metrics over eCSTs")
    parser.add_argument('-v', '--verbose', action='store_true', help='Log debug information to standard error')
    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('parse', help='Parse a source file and store its eCST as XML')
    p.add_argument('file', type=str, help='Source file')
    p.add_argument('--registry', type=str, default=DEFAULT_REGISTRY, help='Language registry XML')
    p.add_argument('--out', type=str, default=None, help='eCST XML output path (default: FILE.ecst.xml)')

    m = commands.add_parser('measure', help='Compute metrics of a source file or of a stored eCST')
    m.add_argument('file', type=str, help='Source file or FILE.ecst.xml')
    m.add_argument('--registry', type=str, default=DEFAULT_REGISTRY, help='Language registry XML')
    m.add_argument('--out', type=str, default=None, help='Metrics XML output path (default: FILE.metrics.xml)')
    m.add_argument('--extended-cc', action='store_true', help='Also count logical operators in conditions')
    m.add_argument('--table', action='store_true', help='Print the metrics as a text table')

    r = commands.add_parser('run', help='Full pipeline: parse, store eCST, reload it, measure, store metrics')
    r.add_argument('files', type=str, nargs='+', help='Source files')
    r.add_argument('--registry', type=str, default=DEFAULT_REGISTRY, help='Language registry XML')
    r.add_argument('--tree-dir', type=str, default=None, help='Directory for eCST XML files')
    r.add_argument('--metrics-dir', type=str, default='metrics', help='Directory for metrics XML files')
    r.add_argument('--extended-cc', action='store_true', help='Also count logical operators in conditions')
    r.add_argument('--table', action='store_true', help='Print the metrics of each file as a text table')
    r.add_argument('-j', '--jobs', type=int, default=1, help='Number of parallel worker processes')

    s = commands.add_parser('show', help='Print the eCST of a source file or stored eCST as an outline')
    s.add_argument('file', type=str, help='Source file or FILE.ecst.xml')
    s.add_argument('--registry', type=str, default=DEFAULT_REGISTRY, help='Language registry XML')
    s.add_argument('--universal-only', action='store_true', help='Print universal nodes only')
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == 'parse':
        return cmd_parse(args)
    if args.command == 'measure':
        return cmd_measure(args)
    if args.command == 'show':
        return cmd_show(args)
    config = RunConfig(
        input_paths=args.files,
        registry_path=args.registry,
        tree_out_dir=args.tree_dir,
        metrics_out_dir=args.metrics_dir,
        extended_cc=args.extended_cc,
        emit_text_table=args.table,
        jobs=args.jobs,
    )
    return cmd_run(config)


if __name__ == "__main__":
    sys.exit(main())
