"""공통 예외 정의.

모든 예외는 ValueError 를 함께 상속하므로 내장 예외로 잡는 호출부도 그대로 동작합니다.
"""


class PointLocError(ValueError):
    """pointloc 예외의 베이스 클래스."""


class DatasetError(PointLocError):
    """파일 누락, 스키마 위반, 알 수 없는 비디오 id 등 데이터셋 오류."""


class DimensionMismatchError(PointLocError):
    """특징 차원이 모델/데이터셋과 일치하지 않음."""


class EmptyInputError(PointLocError):
    """비어 있는 클래스, 검출 집합, 학습 집합 등."""


class ConfigError(PointLocError):
    """잘못된 설정 값 또는 만족할 수 없는 합성 데이터 구성."""
