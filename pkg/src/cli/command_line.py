import argparse
import asyncio
import sys

from pathlib import Path
from typing import List, Optional

from loguru import logger
from tabulate import tabulate

from src.bench.benchmark_stage import BenchmarkStage
from src.bench.report import ReportFormat, emit_report
from src.common.common import configure_logging
from src.common.constants import EXIT_INPUT_ERROR, EXIT_SUCCESS
from src.common.exceptions import ConfigurationError, MeshAdjacencyError
from src.csr_build.csr_builder import build_adjacency
from src.exec_backend.backend import Backend
from src.mesh_core.generators import (generate_grid, generate_polygon_grid, generate_quad_grid, parse_grid_spec)
from src.mesh_core.mesh import ValidatedMesh
from src.mesh_core.mesh_stats import mesh_stats
from src.mesh_io.csr_writer import write_csr
from src.mesh_io.mesh_collector import MeshCollector
from src.mesh_io.mesh_loader import load_mesh
from src.mesh_io.off_writer import dump_off
from src.oracle.adjacency_verifier import verify_against_oracle
from src.pair_expand.pair_list import AdjacencyMode
from src.pipeline import AdjacencyPipeline

GRID_GENERATORS = {
    "triangle": generate_grid,
    "quad": generate_quad_grid,
    "polygon": generate_polygon_grid,
}


def mesh_from_args(args: argparse.Namespace) -> ValidatedMesh:
    if args.grid:
        return generate_grid(*parse_grid_spec(args.grid))

    return load_mesh(args.input)


def command_build(args: argparse.Namespace) -> int:
    mesh = mesh_from_args(args)
    backend = Backend.from_name(args.backend, args.workers)
    modes = AdjacencyMode.from_names([args.mode])
    output = Path(args.output)
    for mode in modes:
        # "both" writes one file per mode next to the requested output
        target = output if len(modes) == 1 else output.with_name(f"{output.stem}_{mode.short_name}{output.suffix}")
        write_csr(build_adjacency(mesh, mode, backend), target, args.binary)

    return EXIT_SUCCESS


def command_verify(args: argparse.Namespace) -> int:
    mesh = mesh_from_args(args)
    backends = [Backend.serial(), Backend.parallel(args.workers)]
    for mode in AdjacencyMode.from_names([args.mode]):
        verify_against_oracle(mesh, mode, backends)
        logger.info(f"{mode.name} adjacency matches the oracle on {', '.join(map(str, backends))}")

    return EXIT_SUCCESS


def command_bench(args: argparse.Namespace) -> int:
    if not args.input and not args.grid:
        raise ConfigurationError("bench needs at least one --input or --grid")

    mode_names = [name.strip() for name in args.modes.split(",") if name.strip()]
    config = {
        "runName": "cli_bench",
        "inputs": args.input or [],
        "grids": args.grid or [],
        "modes": mode_names,
        "stages": ["bench"],
        "bench": {"repetitions": args.reps, "workers": args.workers, "format": args.format},
    }
    named_meshes = asyncio.run(MeshCollector(config).collect_meshes())
    records = BenchmarkStage(config).benchmark(named_meshes)

    report = emit_report(records, ReportFormat.from_name(args.format))
    if args.out:
        Path(args.out).write_bytes(report)
        logger.info(f"Wrote {len(records)} benchmark records to {args.out}")
    else:
        sys.stdout.write(report.decode())

    return EXIT_SUCCESS


def command_stats(args: argparse.Namespace) -> int:
    stats = mesh_stats(mesh_from_args(args))
    print(tabulate(stats.as_row().items(), headers=["statistic", "value"], tablefmt="github"))

    return EXIT_SUCCESS


def command_run(args: argparse.Namespace) -> int:
    pipeline = AdjacencyPipeline(args.config)
    asyncio.run(pipeline.run())

    return EXIT_SUCCESS


def command_generate(args: argparse.Namespace) -> int:
    rows, cols = parse_grid_spec(args.grid)
    mesh = GRID_GENERATORS[args.kind](rows, cols)
    Path(args.output).write_bytes(dump_off(mesh))
    logger.info(f"Wrote {rows}x{cols} {args.kind} grid to {args.output}")

    return EXIT_SUCCESS


def worker_list(value: str) -> List[int]:
    try:
        return [int(token) for token in value.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{value}' is not a comma-separated list of worker counts")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="INFO", help="loguru level name")

    parser = argparse.ArgumentParser(prog="mesh-adjacency",
                                     description="One-ring mesh adjacency via sort-based data-parallel primitives")
    commands = parser.add_subparsers(dest="command", required=True)

    def add_mesh_source(command_parser: argparse.ArgumentParser) -> None:
        source = command_parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--input", help="OFF or OBJ mesh file")
        source.add_argument("--grid", help="synthetic triangle grid, RxC")

    build = commands.add_parser("build", parents=[common], help="build adjacency and write MESHCSR1")
    add_mesh_source(build)
    build.add_argument("--mode", default="nodes", choices=["nodes", "elements", "both"])
    build.add_argument("--backend", default="parallel", choices=["serial", "parallel"])
    build.add_argument("--workers", type=int, default=0, help="parallel workers, 0 = one per CPU")
    build.add_argument("--output", required=True)
    build.add_argument("--binary", action="store_true", help="binary MESHCSR1 instead of text")
    build.set_defaults(handler=command_build)

    verify = commands.add_parser("verify", parents=[common], help="compare both backends with the serial oracle")
    add_mesh_source(verify)
    verify.add_argument("--mode", default="both", choices=["nodes", "elements", "both"])
    verify.add_argument("--workers", type=int, default=0)
    verify.set_defaults(handler=command_verify)

    bench = commands.add_parser("bench", parents=[common], help="time the oracle against the parallel build")
    bench.add_argument("--input", action="append", help="mesh file, repeatable")
    bench.add_argument("--grid", action="append", help="synthetic grid RxC, repeatable")
    bench.add_argument("--modes", default="nodes,elements", help="comma-separated: nodes, elements, both")
    bench.add_argument("--workers", type=worker_list, default=[0], help="worker counts, comma-separated")
    bench.add_argument("--reps", type=int, default=5)
    bench.add_argument("--format", default="csv", choices=["csv", "json"])
    bench.add_argument("--out", help="report file, stdout when omitted")
    bench.set_defaults(handler=command_bench)

    stats = commands.add_parser("stats", parents=[common], help="print mesh statistics")
    add_mesh_source(stats)
    stats.set_defaults(handler=command_stats)

    run = commands.add_parser("run", parents=[common], help="run a configured pipeline")
    run.add_argument("--config", required=True, help="JSON run configuration")
    run.set_defaults(handler=command_run)

    generate = commands.add_parser("generate", parents=[common], help="write a synthetic grid as OFF")
    generate.add_argument("--grid", required=True, help="RxC")
    generate.add_argument("--kind", default="triangle", choices=sorted(GRID_GENERATORS))
    generate.add_argument("--output", required=True)
    generate.set_defaults(handler=command_generate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        return args.handler(args)
    except MeshAdjacencyError as error:
        logger.error(f"{type(error).__name__}: {error}")
        return error.exit_code
    except FileNotFoundError as error:
        logger.error(f"File not found: {error.filename}")
        return EXIT_INPUT_ERROR
    except OSError as error:
        logger.error(f"{type(error).__name__}: {error.strerror or error} ({error.filename})")
        return EXIT_INPUT_ERROR
