"""명령행 진입점입니다.

    coexist-sim simulate --config FILE [--sweep AXIS=v1,v2] [--solver NAME] [--out DIR]
                         [--plot] [--jobs N] [--seed S] [--trials N]
    coexist-sim codebook --config FILE --out FILE
    coexist-sim plot --csv FILE --kind {roc,nmse,pmd} [--out FILE]

출력 디렉터리 기본값은 환경 변수 COEXIST_OUT_DIR, 없으면 ./results 입니다.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from .config import SOLVERS, NetworkConfig
from .customerror import ExperimentError, TrialError
from .harness import NO_SWEEP, ExperimentPlan, parse_sweep, run_experiment
from .plotting import FIGURE_KINDS, plot
from .utils import codebook_rng
from .waveform import build_codebook, save_codebook

logger = logging.getLogger(__name__)

OUT_DIR_ENV = "COEXIST_OUT_DIR"
DEFAULT_OUT_DIR = "results"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def default_out_dir() -> Path:
    """환경 변수에서 기본 출력 디렉터리를 읽습니다."""
    return Path(os.environ.get(OUT_DIR_ENV, DEFAULT_OUT_DIR))


def build_parser() -> argparse.ArgumentParser:
    """하위 명령을 가진 인자 파서를 만듭니다."""
    parser = argparse.ArgumentParser(
        prog="coexist-sim",
        description="eMBB와 MTD가 한 자원 블록을 공유하는 상향링크 Monte-Carlo 시뮬레이터",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v: INFO, -vv: DEBUG")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="Monte-Carlo 실험을 실행합니다.")
    simulate.add_argument("--config", required=True, type=Path, help="key=value 설정 파일")
    simulate.add_argument("--sweep", default=None, help="AXIS=v1,v2,... (예: snr_e=-20,30)")
    simulate.add_argument("--solver", choices=SOLVERS, default=None)
    simulate.add_argument("--out", type=Path, default=None, help="출력 디렉터리")
    simulate.add_argument("--plot", action="store_true", help="그림 파일도 만듭니다.")
    simulate.add_argument("--jobs", type=int, default=1, help="작업자 프로세스 수")
    simulate.add_argument("--seed", type=int, default=None)
    simulate.add_argument("--trials", type=int, default=None)

    codebook = commands.add_parser("codebook", help="코드북을 만들어 .npz로 저장합니다.")
    codebook.add_argument("--config", required=True, type=Path)
    codebook.add_argument("--out", required=True, type=Path)

    figure = commands.add_parser("plot", help="CSV를 그림으로 그립니다.")
    figure.add_argument("--csv", required=True, type=Path)
    figure.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    figure.add_argument("--out", type=Path, default=None)
    return parser


def _load_config(args: argparse.Namespace) -> NetworkConfig:
    config = NetworkConfig.from_file(args.config)
    overrides = {
        key: getattr(args, key, None)
        for key in ("solver", "seed", "trials")
        if getattr(args, key, None) is not None
    }
    return config.replace(**overrides) if overrides else config


def _simulate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    sweep_var, values = parse_sweep(args.sweep) if args.sweep else (NO_SWEEP, [])
    plan = ExperimentPlan(
        config=config,
        sweep_var=sweep_var,
        values=values,
        out_dir=args.out if args.out is not None else default_out_dir(),
        plot=args.plot,
        jobs=args.jobs,
    )
    result = run_experiment(plan)
    print(result.metrics_path)
    print(result.roc_path)
    for path in result.figures:
        print(path)
    return EXIT_OK


def _codebook(args: argparse.Namespace) -> int:
    config = NetworkConfig.from_file(args.config)
    codebook = build_codebook(config, codebook_rng(config.seed), seed=config.seed)
    print(save_codebook(codebook, args.out))
    return EXIT_OK


def _plot(args: argparse.Namespace) -> int:
    print(plot(args.csv, args.kind, args.out))
    return EXIT_OK


COMMANDS = {"simulate": _simulate, "codebook": _codebook, "plot": _plot}


def main(argv: Optional[List[str]] = None) -> int:
    """명령행 인자를 해석해 하위 명령을 실행하고 종료 코드를 반환합니다.

    설정 오류는 2, 실행 중 오류와 입출력 오류는 1을 반환합니다.
    """
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ExperimentError, TrialError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_FAILURE
    except ValueError as exc:
        logger.error("설정 오류: %s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
