"""validation 모듈의 검사 함수를 테스트합니다."""

import numpy as np
import pytest

from coexistence_sim.customerror import (
    DimensionMismatchError,
    InvalidConfigError,
    UnsupportedSizeError,
)
from coexistence_sim.validation import (
    is_power_of_two,
    validate_int,
    validate_positive,
    validate_power_of_two,
    validate_probability,
    validate_shape,
    validate_type,
)


def test_validate_type_rejects_bool_for_numbers():
    validate_type((int, float), 1, 2.5)
    with pytest.raises(InvalidConfigError):
        validate_type((int, float), True)
    validate_type(bool, True, False)


def test_validate_type_none_handling():
    validate_type(int, None)
    with pytest.raises(InvalidConfigError):
        validate_type(int, None, disallow_none=True)


def test_validate_int_minimum():
    validate_int(1, 2, np.int64(3), minimum=1)
    with pytest.raises(InvalidConfigError):
        validate_int(0, minimum=1)
    with pytest.raises(InvalidConfigError):
        validate_int(1.5)
    validate_int(None, minimum=1, disallow_none=False)


@pytest.mark.parametrize("value", [0.0, -1.0, float("inf"), float("nan")])
def test_validate_positive_rejects(value):
    with pytest.raises(InvalidConfigError):
        validate_positive(value)


def test_validate_positive_allow_zero():
    validate_positive(0.0, allow_zero=True)
    validate_positive(1e-20, 3)


def test_validate_probability_intervals():
    validate_probability(0.5)
    validate_probability(1.0, open_interval=False)
    for value in (0.0, 1.0, -0.1):
        with pytest.raises(InvalidConfigError):
            validate_probability(value)
    with pytest.raises(InvalidConfigError):
        validate_probability(1.1, open_interval=False)


def test_power_of_two():
    assert [n for n in range(1, 20) if is_power_of_two(n)] == [1, 2, 4, 8, 16]
    validate_power_of_two(32)
    with pytest.raises(UnsupportedSizeError):
        validate_power_of_two(12, exception_type=UnsupportedSizeError)


def test_validate_shape_wildcard():
    validate_shape(np.zeros((3, 4)), (3, None))
    with pytest.raises(DimensionMismatchError):
        validate_shape(np.zeros((3, 4)), (4, None), "S")
    with pytest.raises(DimensionMismatchError):
        validate_shape(np.zeros(3), (3, 1))
