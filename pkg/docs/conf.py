import sys
import os

# 프로젝트 경로 설정
sys.path.insert(0, os.path.abspath('../'))

# 프로젝트 정보
project = 'coexistence-sim'
copyright = "Copyright (c) 2026 coexistence-sim developers"
author = "coexistence-sim developers"
release = '0.1.0'

# 확장 모듈 설정
extensions = [
    'myst_parser',
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax',
    'sphinx_copybutton',
]

templates_path = ['_templates']
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

language = 'ko'

source_suffix = {
    '.rst': 'restructuredtext',
    '.md': 'markdown',
}

html_theme = "sphinx_rtd_theme"

myst_enable_extensions = [
    "colon_fence",
    "deflist",
    "dollarmath",
    "linkify",
]

# 문서 빌드 환경에는 matplotlib을 설치하지 않습니다.
autodoc_mock_imports = ['matplotlib']

autodoc_default_options = {
    'members': True,
    'undoc-members': True,
    'show-inheritance': True,
}
