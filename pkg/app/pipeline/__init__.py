"""pointloc 데이터 / 실험 파이프라인 패키지."""

from rich.console import Console

console = Console()
error_console = Console(stderr=True)
