"""python -m app.pipeline 으로 CLI를 실행합니다."""

import sys

from app.pipeline.cli import main

sys.exit(main())
