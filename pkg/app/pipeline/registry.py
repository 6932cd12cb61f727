"""sweep 실험 목록.

processors/ 의 각 모듈은 import 될 때 자기 실험 인스턴스를 `Registry.register` 로 올립니다.
CLI 의 `sweep <이름>` 선택지와 대화형 메뉴는 이 목록을 그대로 씁니다.
"""

from app.core.exceptions import ConfigError
from app.pipeline.processors.base import BaseExperiment


class Registry:
    """이름 → sweep 실험. 같은 이름을 다시 올리면 덮어씁니다."""

    _experiments: dict[str, BaseExperiment] = {}

    @classmethod
    def register(cls, experiment: BaseExperiment) -> None:
        cls._experiments[experiment.name] = experiment

    @classmethod
    def get(cls, name: str) -> BaseExperiment:
        try:
            return cls._experiments[name]
        except KeyError:
            known = ", ".join(cls.names()) or "없음"
            raise ConfigError(f"알 수 없는 sweep: {name} (가능: {known})") from None

    @classmethod
    def list_all(cls) -> list[tuple[str, str]]:
        """메뉴 표시용 (이름, 설명)."""
        return [(name, cls._experiments[name].description) for name in cls.names()]

    @classmethod
    def names(cls) -> list[str]:
        """등록 순서 그대로의 실험 이름."""
        return list(cls._experiments)

    @classmethod
    def count(cls) -> int:
        return len(cls._experiments)


def auto_discover() -> None:
    """processors 패키지의 실험 모듈을 모두 import 해 등록을 끝냅니다.

    base 는 추상 클래스만 있으므로 건너뜁니다. 이미 import 된 모듈은 다시 실행되지 않으므로
    여러 번 불러도 목록은 같습니다. sweep 을 늘리려면 processors/ 에 모듈을 하나 두고
    BaseExperiment 구현 아래에서 Registry.register 를 부르면 됩니다.
    """
    import importlib
    import pkgutil

    import app.pipeline.processors as pkg

    for module in pkgutil.iter_modules(pkg.__path__):
        if module.name != "base":
            importlib.import_module(f"{pkg.__name__}.{module.name}")
