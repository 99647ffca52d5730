"""라이브러리의 기본 공통 부모 클래스를 정의합니다.

classes:
    - BaseModel: 라이브러리의 기본 공통 부모 클래스
    - ParentConfig: 설정 객체의 부모 클래스
"""

import json
from abc import ABC, ABCMeta, abstractmethod
from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from .customerror import InvalidConfigError


class BaseModel(ABC, metaclass=ABCMeta):
    """라이브러리의 기본 공통 부모 클래스로 대부분의 도메인 객체는 이 클래스를 상속받아 구현됩니다.

    - remove_none_item: None이 아닌 값만을 가진 dict를 생성합니다.
    - render: 객체를 CSV/JSON으로 내보내기 알맞은 dict로 변환합니다.
    - validate: 객체가 불변 조건을 만족하는지 검증합니다.
    """

    @staticmethod
    def remove_none_item(base: Dict) -> Dict:
        """딕셔너리의 key-value 쌍 중 value가 None인 쌍을 제거합니다.

        Args:
            base (dict): None인 값을 제거할 딕셔너리

        Returns:
            dict: None인 값을 제거한 딕셔너리

        Examples:
            >>> BaseModel.remove_none_item({'pmd': 0.1, 'nmse': None})
            {'pmd': 0.1}
        """
        return {key: value for key, value in base.items() if value is not None}

    @staticmethod
    def to_builtin(value):
        """numpy 스칼라와 배열을 JSON으로 직렬화 가능한 파이썬 값으로 바꿉니다."""
        if isinstance(value, np.ndarray):
            return value.tolist()
        if isinstance(value, np.generic):
            return value.item()
        return value

    @abstractmethod
    def render(self) -> Union[Dict, List]:
        """객체를 내보내기 알맞은 dict로 변환합니다.

        Returns:
            dict: 변환된 dict 객체.
        """

    @abstractmethod
    def validate(self):
        """객체가 불변 조건에 알맞은지 검증합니다.

        조건에 맞지 않을 경우 customerror 모듈의 예외를 발생시키도록 구현해야 합니다.
        """


class ParentConfig(ABC, metaclass=ABCMeta):
    """설정 객체의 부모 클래스입니다.

    dict, JSON 문자열, key=value 텍스트 파일로부터 객체를 만드는 경로를 통일합니다.

    Abstract Methods:
        from_dict: 딕셔너리를 객체로 변환하는 메서드
    """

    @classmethod
    @abstractmethod
    def from_dict(cls, data: Dict):
        """딕셔너리를 받아서 객체로 변환하는 메서드입니다.

        Args:
            data (dict): 딕셔너리
        """

    @classmethod
    def from_json(cls, data: str):
        """JSON 문자열을 객체로 변환하는 메서드입니다.

        from_dict 메서드를 호출하여 JSON 문자열을 객체로 변환합니다.

        Args:
            data (str): JSON 문자열
        """
        return cls.from_dict(json.loads(data))

    @staticmethod
    def parse_key_values(text: str) -> Dict[str, str]:
        """key=value 형식의 텍스트를 문자열 딕셔너리로 파싱합니다.

        '#' 이후는 주석으로 무시하며 빈 줄은 건너뜁니다.

        Args:
            text (str): 설정 파일 내용

        Returns:
            dict: key와 문자열 value의 딕셔너리
        """
        out = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidConfigError(f"{number}번째 줄이 key=value 형식이 아닙니다: {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in out:
                raise InvalidConfigError(f"'{key}' 키가 중복되었습니다.")
            out[key] = value
        return out

    @classmethod
    def from_file(cls, path: Union[str, Path]):
        """key=value 텍스트 파일을 읽어 객체로 변환합니다.

        확장자가 .json이면 from_json을 사용합니다.

        Args:
            path (Union[str, Path]): 설정 파일 경로
        """
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if path.suffix == ".json":
            return cls.from_json(text)
        return cls.from_dict(cls.parse_key_values(text))
