"""사용자 정의 예외를 처리하는 모듈입니다.

classes:
    - InvalidConfigError: 유효하지 않은 설정값에 대한 예외를 처리하는 클래스
    - OutOfDomainError: 수학적 정의역을 벗어난 입력에 대한 예외를 처리하는 클래스
    - UnsupportedSizeError: 지원하지 않는 행렬 크기에 대한 예외를 처리하는 클래스
    - InfeasibleCollisionError: 달성할 수 없는 충돌 확률에 대한 예외를 처리하는 클래스
    - DimensionMismatchError: 행렬 차원 불일치에 대한 예외를 처리하는 클래스
    - EmptyPoolError: 비어 있거나 부족한 후보 집합에 대한 예외를 처리하는 클래스
    - SchemaError: CSV 스키마 위반에 대한 예외를 처리하는 클래스
    - TrialError: 개별 Monte-Carlo 시행의 실패를 감싸는 클래스
    - ExperimentError: 실험 전체의 실패를 처리하는 클래스
"""


class InvalidConfigError(ValueError):
    """유효하지 않은 설정값에 대한 예외를 처리하는 클래스입니다."""

    def __init__(self, message: str):
        """InvalidConfigError 인스턴스를 초기화합니다.

        Args:
            message (str): 오류를 설명하는 메시지.
        """
        super().__init__(message)


class OutOfDomainError(ValueError):
    """수학적 정의역을 벗어난 입력에 대한 예외를 처리하는 클래스입니다.

    예를 들어 거리가 0 이하인 경우 경로 손실을 계산할 수 없습니다.
    """

    def __init__(self, message: str):
        """OutOfDomainError 인스턴스를 초기화합니다.

        Args:
            message (str): 오류를 설명하는 메시지.
        """
        super().__init__(message)


class UnsupportedSizeError(ValueError):
    """지원하지 않는 행렬 크기에 대한 예외를 처리하는 클래스입니다."""

    def __init__(self, message: str):
        """UnsupportedSizeError 인스턴스를 초기화합니다.

        Args:
            message (str): 오류를 설명하는 메시지.
        """
        super().__init__(message)


class InfeasibleCollisionError(ValueError):
    """목표 충돌 확률을 달성할 수 없을 때 발생하는 예외입니다.

    달성 가능한 가장 작은 충돌 확률을 min_probability 속성으로 전달합니다.
    """

    def __init__(self, message: str, min_probability: float):
        """InfeasibleCollisionError 인스턴스를 초기화합니다.

        Args:
            message (str): 오류를 설명하는 메시지.
            min_probability (float): 달성 가능한 최소 충돌 확률.
        """
        super().__init__(message)
        self.min_probability = min_probability


class DimensionMismatchError(ValueError):
    """행렬 차원 불일치에 대한 예외를 처리하는 클래스입니다."""

    def __init__(self, message: str):
        """DimensionMismatchError 인스턴스를 초기화합니다.

        Args:
            message (str): 오류를 설명하는 메시지.
        """
        super().__init__(message)


class EmptyPoolError(ValueError):
    """비어 있거나 부족한 후보 집합에 대한 예외를 처리하는 클래스입니다."""

    def __init__(self, message: str):
        """EmptyPoolError 인스턴스를 초기화합니다.

        Args:
            message (str): 오류를 설명하는 메시지.
        """
        super().__init__(message)


class SchemaError(ValueError):
    """CSV 스키마 위반에 대한 예외를 처리하는 클래스입니다."""

    def __init__(self, message: str):
        """SchemaError 인스턴스를 초기화합니다.

        Args:
            message (str): 오류를 설명하는 메시지.
        """
        super().__init__(message)


class TrialError(RuntimeError):
    """개별 Monte-Carlo 시행의 실패를 시행 번호와 함께 감싸는 예외입니다."""

    def __init__(self, message: str, trial_index: int):
        """TrialError 인스턴스를 초기화합니다.

        Args:
            message (str): 오류를 설명하는 메시지.
            trial_index (int): 실패한 시행 번호.
        """
        super().__init__(f"[trial {trial_index}] {message}")
        self.message = message
        self.trial_index = trial_index

    def __reduce__(self):
        """작업자 프로세스에서 돌려받을 수 있도록 생성 인자를 보존합니다."""
        return type(self), (self.message, self.trial_index)


class ExperimentError(RuntimeError):
    """실험 전체의 실패에 대한 예외를 처리하는 클래스입니다."""

    def __init__(self, message: str):
        """ExperimentError 인스턴스를 초기화합니다.

        Args:
            message (str): 오류를 설명하는 메시지.
        """
        super().__init__(message)
