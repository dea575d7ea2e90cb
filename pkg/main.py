"""
domtest 入口点

运行: python main.py <子命令> 或 domtest (安装后)
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "src"))

from domtest.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
