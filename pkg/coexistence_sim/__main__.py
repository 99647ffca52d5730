"""python -m coexistence_sim 실행을 지원합니다."""

import sys

from .cli import main

sys.exit(main())
