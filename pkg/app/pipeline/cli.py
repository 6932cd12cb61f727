"""pointloc 실행 CLI.

사용법:
    uv run pointloc synth --out data/synth
    uv run pointloc train --dataset data/synth --out runs/point
    uv run pointloc infer --dataset data/synth --out runs/point --pseudo auto
    uv run pointloc eval --dataset data/synth --out runs/point
    uv run pointloc sweep stride --dataset data/synth --out runs/stride
    uv run python -m app.pipeline          # 인자 없이 실행하면 대화형 메뉴
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import pandas as pd
from InquirerPy import inquirer
from InquirerPy.separator import Separator
from pydantic import ValidationError
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from app.config import settings
from app.core.exceptions import ConfigError, PointLocError
from app.models.enums import Prior
from app.pipeline import console, error_console
from app.pipeline.file_utils import write_csv
from app.pipeline.loader import Dataset, load_dataset, manifest_path
from app.pipeline.processors.base import SweepContext
from app.pipeline.registry import Registry, auto_discover
from app.pipeline.runner import (
    diagnose_table,
    estimate_weights,
    evaluate,
    infer,
    load_detections,
    load_models,
    parse_pseudo,
    plan_inference,
    pseudo_context,
    save_detections,
    save_evaluation,
    save_models,
    train_models,
    versioned,
)
from app.pipeline.synth import synth_generate
from app.schemas.config import MiningConfig, RunConfig, SynthConfig
from app.services.pseudo import available_kinds, select_pseudo

logger = logging.getLogger(__name__)


# ── 인자 ──


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"쉼표로 구분한 실수 목록이어야 합니다: {text}") from e


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"쉼표로 구분한 정수 목록이어야 합니다: {text}") from e


def _names(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _common(parser: argparse.ArgumentParser, *, dataset: bool = True) -> None:
    if dataset:
        parser.add_argument("--dataset", type=Path, required=True, help="매니페스트 파일 또는 그 디렉토리")
    parser.add_argument("--out", type=Path, required=True, help="출력 디렉토리")
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument("--verbose", "-v", action="store_true", help="DEBUG 로그 출력")


def _training(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lambda-reg", type=float, default=None)
    parser.add_argument("--iterations", type=int, default=None)
    parser.add_argument("--folds", type=int, default=None)
    parser.add_argument("--prior", choices=[p.value for p in Prior], default=Prior.POINT.value)


def _inference(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--pseudo",
        type=_names,
        default=["none"],
        help="none, train_stats, self, person, imotion, center, auto (쉼표로 여러 개)",
    )
    parser.add_argument("--lambda-t", type=float, default=None, help="주면 시간 길이 prior 를 적용")


def _taus(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tau-grid", type=_floats, default=list(settings.tau_grid))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pointloc", description="point 감독 시공간 액션 위치 추정")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("synth", help="합성 데이터셋 생성")
    _common(p, dataset=False)
    defaults = SynthConfig.model_fields
    p.add_argument("--n-actions", type=int, default=defaults["n_actions"].default)
    p.add_argument("--train-per-action", type=int, default=defaults["train_per_action"].default)
    p.add_argument("--test-per-action", type=int, default=defaults["test_per_action"].default)
    p.add_argument("--frames", type=int, default=defaults["frames_per_video"].default)
    p.add_argument("--width", type=int, default=defaults["width"].default)
    p.add_argument("--height", type=int, default=defaults["height"].default)
    p.add_argument("--proposals", type=int, default=defaults["proposals_per_video"].default)
    p.add_argument("--jitter-fraction", type=float, default=defaults["jitter_fraction"].default)
    p.add_argument("--feature-dim", type=int, default=defaults["feature_dim"].default)
    p.add_argument("--feature-noise", type=float, default=defaults["feature_noise"].default)
    p.add_argument(
        "--shared-noise",
        type=float,
        default=defaults["feature_noise_shared"].default,
        help="특징 잡음 분산 중 비디오 단위로 공유되는 비율 [0, 1]",
    )
    p.add_argument("--stride", type=int, default=defaults["point_stride"].default)
    p.add_argument("--sigma", type=float, default=defaults["point_noise"].default)
    p.add_argument("--epsilon", type=float, default=defaults["epsilon"].default)
    p.add_argument("--oracle", action="store_true", help="GT 튜브를 proposal 에 포함")
    p.add_argument("--off-center", action="store_true", help="GT 를 프레임 가장자리 쪽에 배치")
    p.add_argument("--no-detections", action="store_true")
    p.add_argument("--no-mass-maps", action="store_true")

    p = sub.add_parser("train", help="액션별 분류기 학습")
    _common(p)
    _training(p)

    p = sub.add_parser("infer", help="테스트 비디오 top-1 검출")
    _common(p)
    _inference(p)
    p.add_argument("--models", type=Path, default=None, help="모델 디렉토리 (기본: --out)")

    p = sub.add_parser("pseudo-weight", help="pseudo-point 가중치 λ_P 추정")
    _common(p)
    _inference(p)

    p = sub.add_parser("eval", help="AP / AUC 평가")
    _common(p)
    _taus(p)
    p.add_argument("--detections", type=Path, default=None, help="detections.json (기본: --out)")

    p = sub.add_parser("diagnose", help="top-R 오류 진단")
    _common(p)
    _taus(p)
    p.add_argument("--detections", type=Path, default=None, help="detections.json (기본: --out)")

    p = sub.add_parser("sweep", help="실험 sweep (CSV 출력)")
    p.add_argument("experiment", choices=[*Registry.names(), "all"])
    _common(p)
    _training(p)
    _inference(p)
    _taus(p)
    p.add_argument("--stride-grid", type=_ints, default=[1, 2, 5, 10, 20])
    p.add_argument("--sigma-grid", type=_floats, default=[0.0, 1.0, 5.0, 10.0, 50.0])
    p.add_argument("--epsilon-grid", type=_floats, default=[0.0, 0.5, 0.9, 1.0])
    return parser


def run_config(args: argparse.Namespace) -> RunConfig:
    """argparse 결과를 검증된 RunConfig 로."""
    overrides = {
        "lambda_reg": getattr(args, "lambda_reg", None),
        "iterations": getattr(args, "iterations", None),
        "folds": getattr(args, "folds", None),
    }
    mining = MiningConfig(seed=args.seed, **{k: v for k, v in overrides.items() if v is not None})
    fields: dict[str, object] = {
        "subcommand": args.subcommand,
        "dataset": getattr(args, "dataset", None),
        "out": args.out,
        "seed": args.seed,
        "mining": mining,
    }
    for name in ("prior", "pseudo", "lambda_t", "tau_grid", "stride_grid", "sigma_grid", "epsilon_grid"):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    config = RunConfig.model_validate(fields)
    if config.dataset is not None:
        if not manifest_path(config.dataset).exists():
            raise ConfigError(f"데이터셋이 없습니다: {config.dataset}")
        if config.out is not None and config.out.resolve() == manifest_path(config.dataset).parent.resolve():
            raise ConfigError("--out 은 데이터셋 디렉토리와 달라야 합니다")
    return config


# ── 출력 ──


def print_table(title: str, table: pd.DataFrame) -> None:
    view = Table(title=title)
    for column in table.columns:
        view.add_column(str(column), justify="right" if column != table.columns[0] else "left")
    for row in table.itertuples(index=False):
        view.add_row(*(f"{v:.4f}" if isinstance(v, float) else str(v) for v in row))
    console.print(view)


def _dataset(config: RunConfig) -> Dataset:
    assert config.dataset is not None
    return load_dataset(config.dataset)


def _detections_path(args: argparse.Namespace, config: RunConfig) -> Path:
    assert config.out is not None
    return args.detections if args.detections is not None else config.out


# ── 서브커맨드 ──


def cmd_synth(args: argparse.Namespace, config: RunConfig) -> None:
    assert config.out is not None
    synth = SynthConfig(
        seed=config.seed,
        n_actions=args.n_actions,
        train_per_action=args.train_per_action,
        test_per_action=args.test_per_action,
        frames_per_video=args.frames,
        width=args.width,
        height=args.height,
        proposals_per_video=args.proposals,
        jitter_fraction=args.jitter_fraction,
        feature_dim=args.feature_dim,
        feature_noise=args.feature_noise,
        feature_noise_shared=args.shared_noise,
        point_stride=args.stride,
        point_noise=args.sigma,
        epsilon=args.epsilon,
        include_oracle=args.oracle,
        off_center=args.off_center,
        include_detections=not args.no_detections,
        include_mass_maps=not args.no_mass_maps,
    )
    path = synth_generate(synth, config.out)
    console.print(f"[green]✓[/] 매니페스트: {path}")


def cmd_train(args: argparse.Namespace, config: RunConfig) -> None:
    assert config.out is not None
    dataset = _dataset(config)
    models = train_models(dataset.actions, dataset.train, config.prior, config.mining)
    for path in save_models(config.out, models):
        console.print(f"[green]✓[/] 모델: {path}")


def cmd_infer(args: argparse.Namespace, config: RunConfig) -> None:
    assert config.out is not None
    dataset = _dataset(config)
    models = load_models(args.models or config.out, dataset.actions, dataset.feature_dim)
    plan = plan_inference(dataset.actions, dataset.train, config.pseudo, config.lambda_t)
    detections = infer(dataset.actions, dataset.test, models, plan)
    csv_path, json_path = save_detections(config.out, detections)
    console.print(f"[green]✓[/] 검출 {len(detections)}건: {csv_path}, {json_path}")


def cmd_pseudo_weight(args: argparse.Namespace, config: RunConfig) -> None:
    assert config.out is not None
    dataset = _dataset(config)
    context = pseudo_context(dataset.actions, dataset.train)
    kinds = parse_pseudo(config.pseudo)
    if not kinds:
        kinds = available_kinds(dataset.train, context)
    weights = estimate_weights(kinds, dataset.train, context)
    chosen = select_pseudo(weights)
    table = pd.DataFrame(
        [
            {"kind": w.kind.value, "lambda_p": w.lambda_p, "selected": w.kind is chosen.kind}
            for w in weights
        ],
        columns=["kind", "lambda_p", "selected"],
    )
    write_csv(config.out / "pseudo_weights.csv", versioned(table))
    print_table("pseudo-point 가중치", table)


def cmd_eval(args: argparse.Namespace, config: RunConfig) -> None:
    assert config.out is not None
    dataset = _dataset(config)
    detections = load_detections(_detections_path(args, config))
    table, summary = evaluate(detections, dataset.ground_truth(), config.tau_grid, dataset.actions)
    save_evaluation(config.out, table, summary)
    print_table("mAP / AUC", summary)


def cmd_diagnose(args: argparse.Namespace, config: RunConfig) -> None:
    assert config.out is not None
    dataset = _dataset(config)
    detections = load_detections(_detections_path(args, config))
    table = diagnose_table(detections, dataset.ground_truth(), config.tau_grid)
    write_csv(config.out / "diagnosis.csv", versioned(table))
    print_table("top-R 오류 진단", table)


def cmd_sweep(args: argparse.Namespace, config: RunConfig) -> None:
    dataset = _dataset(config)
    context = SweepContext(actions=dataset.actions, videos=dataset.videos, config=config)
    names = Registry.names() if args.experiment == "all" else [args.experiment]
    for name in names:
        result = Registry.get(name).run(context)
        console.print(f"[green]✓[/] {result.summary()}")
        print_table(name, result.table.drop(columns=["schema_version"]))


COMMANDS: dict[str, Callable[[argparse.Namespace, RunConfig], None]] = {
    "synth": cmd_synth,
    "train": cmd_train,
    "infer": cmd_infer,
    "pseudo-weight": cmd_pseudo_weight,
    "eval": cmd_eval,
    "diagnose": cmd_diagnose,
    "sweep": cmd_sweep,
}


def setup_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else settings.log_level.upper()
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=error_console, show_path=False)],
        force=True,
    )


def _one_line(error: Exception) -> str:
    return " ".join(line.strip() for line in str(error).splitlines() if line.strip())


def run(argv: Sequence[str]) -> int:
    """서브커맨드 하나를 실행하고 종료 코드를 돌려줍니다."""
    auto_discover()
    args = build_parser().parse_args(list(argv))
    setup_logging(args.verbose)
    try:
        config = run_config(args)
        COMMANDS[args.subcommand](args, config)
    except (PointLocError, ValidationError) as e:
        error_console.print(f"[red]error: {_one_line(e)}[/]", highlight=False, soft_wrap=True)
        return 1
    return 0


# ── 대화형 메뉴 ──


def _ask_path(message: str, default: str = "") -> str:
    return inquirer.filepath(message=message, default=default).execute()


def menu_argv(subcommand: str) -> list[str]:
    """메뉴 선택을 서브커맨드 인자로 바꿉니다."""
    argv = [subcommand]
    if subcommand == "sweep":
        experiment = inquirer.select(
            message="실험을 선택하세요:",
            choices=[{"name": f"{n} - {d}", "value": n} for n, d in Registry.list_all()]
            + [{"name": "전체", "value": "all"}],
        ).execute()
        argv.append(experiment)
    if subcommand != "synth":
        argv += ["--dataset", _ask_path("데이터셋 경로:", "data/synth")]
    argv += ["--out", _ask_path("출력 디렉토리:", f"runs/{subcommand}")]
    if subcommand in ("infer", "pseudo-weight", "sweep"):
        pseudo = inquirer.select(
            message="pseudo-point:",
            choices=["none", "auto", "person", "imotion", "center", "self", "train_stats"],
        ).execute()
        argv += ["--pseudo", pseudo]
    if subcommand in ("train", "sweep"):
        prior = inquirer.select(message="감독 방식:", choices=[p.value for p in Prior]).execute()
        argv += ["--prior", prior]
    return argv


def main_menu() -> None:
    """메인 메뉴."""
    auto_discover()
    console.print(Panel("[bold cyan]pointloc 실행 CLI[/]", subtitle="v0.1.0", expand=False))

    while True:
        action = inquirer.select(
            message="작업을 선택하세요:",
            choices=[
                {"name": "합성 데이터셋 생성", "value": "synth"},
                Separator(),
                {"name": "학습", "value": "train"},
                {"name": "pseudo-point 가중치", "value": "pseudo-weight"},
                {"name": "추론", "value": "infer"},
                Separator(),
                {"name": "평가", "value": "eval"},
                {"name": "오류 진단", "value": "diagnose"},
                {"name": "실험 sweep", "value": "sweep"},
                Separator(),
                {"name": "종료", "value": "exit"},
            ],
        ).execute()

        if action == "exit":
            console.print("[dim]종료합니다.[/]")
            break

        status = run(menu_argv(action))
        if status != 0 and not inquirer.confirm(message="계속하시겠습니까?", default=True).execute():
            break


def main(argv: Sequence[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else list(argv)
    if not args:
        main_menu()
        return 0
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
