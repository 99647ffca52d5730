"""유효성 검사를 위한 함수들을 모아놓은 모듈입니다."""

from typing import Sequence, Tuple, Union

import numpy as np

from .customerror import DimensionMismatchError, InvalidConfigError

_INT_TYPES = (int, np.integer)
_REAL_TYPES = (int, float, np.integer, np.floating)


def validate_type(
    allowed_types: Union[Tuple, object],
    *args,
    disallow_none: bool = False,
    exception_type=InvalidConfigError,
):
    """특정 타입에 대해 유효성 검사를 하는 함수입니다.

    허용할 타입을 allowed_types로 받아서, args에 대해 검사합니다.
    bool은 int의 하위 타입이지만 숫자 설정값으로는 허용하지 않습니다.

    Args:
        allowed_types (Union[tuple, object]): 허용할 타입
        args: 검사할 값들
        disallow_none (bool): None을 허용할지 여부
        exception_type : 예외 타입
    """
    if not isinstance(allowed_types, tuple):
        allowed_types = (allowed_types,)
    for value in args:
        if disallow_none and value is None:
            raise exception_type("None이어서는 안됩니다.")
        if value is None:
            continue
        if isinstance(value, bool) and bool not in allowed_types:
            raise exception_type(f"{value}는 {allowed_types} 중 하나여야 합니다.")
        if not isinstance(value, allowed_types):
            raise exception_type(f"{value}는 {allowed_types} 중 하나여야 합니다.")


def validate_int(*args, minimum: int = None, disallow_none: bool = True):
    """여러 인자에 대해 정수형인지, 그리고 하한 이상인지 확인하는 함수입니다.

    Args:
        args: 검사할 값들
        minimum (int): 허용하는 최솟값. None이면 하한을 검사하지 않습니다.
        disallow_none (bool): None을 허용할지 여부
    """
    validate_type(_INT_TYPES, *args, disallow_none=disallow_none)
    if minimum is None:
        return
    for value in args:
        if value is not None and value < minimum:
            raise InvalidConfigError(f"{value}는 {minimum} 이상이어야 합니다.")


def validate_positive(*args, allow_zero: bool = False):
    """여러 인자에 대해 양의 실수인지 확인하는 함수입니다.

    Args:
        args: 검사할 값들
        allow_zero (bool): 0을 허용할지 여부
    """
    validate_type(_REAL_TYPES, *args, disallow_none=True)
    for value in args:
        if not np.isfinite(value):
            raise InvalidConfigError(f"{value}는 유한한 값이어야 합니다.")
        if value < 0 or (value == 0 and not allow_zero):
            raise InvalidConfigError(f"{value}는 양수여야 합니다.")


def validate_probability(*args, open_interval: bool = True):
    """여러 인자에 대해 확률값인지 확인하는 함수입니다.

    open_interval이 True이면 (0, 1), False이면 (0, 1] 구간을 허용합니다.

    Args:
        args: 검사할 값들
        open_interval (bool): 1을 제외할지 여부
    """
    validate_type(_REAL_TYPES, *args, disallow_none=True)
    for value in args:
        upper_ok = value < 1 if open_interval else value <= 1
        if not (0 < value and upper_ok):
            interval = "(0, 1)" if open_interval else "(0, 1]"
            raise InvalidConfigError(f"{value}는 {interval} 구간에 있어야 합니다.")


def is_power_of_two(value: int) -> bool:
    """값이 2의 거듭제곱(1 포함)인지 반환합니다."""
    return value >= 1 and (value & (value - 1)) == 0


def validate_power_of_two(*args, exception_type=InvalidConfigError):
    """여러 인자에 대해 2의 거듭제곱인지 확인하는 함수입니다.

    Hadamard 행렬은 2의 거듭제곱 차수에 대해서만 생성할 수 있습니다.

    Args:
        args: 검사할 값들
        exception_type : 예외 타입
    """
    validate_type(_INT_TYPES, *args, disallow_none=True, exception_type=exception_type)
    for value in args:
        if not is_power_of_two(int(value)):
            raise exception_type(f"{value}는 2의 거듭제곱이어야 합니다.")


def validate_shape(array: np.ndarray, shape: Sequence, name: str = "array"):
    """배열의 모양을 검사하는 함수입니다.

    shape의 원소가 None이면 해당 축의 길이는 검사하지 않습니다.

    Args:
        array (np.ndarray): 검사할 배열
        shape (Sequence): 기대하는 모양
        name (str): 오류 메시지에 사용할 배열 이름

    Raises:
        DimensionMismatchError: 차원 수나 축 길이가 다를 때
    """
    actual = np.shape(array)
    if len(actual) != len(shape) or any(
        expected is not None and expected != got
        for expected, got in zip(shape, actual)
    ):
        raise DimensionMismatchError(
            f"{name}의 모양은 {tuple(shape)}이어야 하지만 {actual}입니다."
        )
