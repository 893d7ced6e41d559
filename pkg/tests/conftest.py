import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from config.settings import get_config_manager  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_config():
    """Every test starts and ends on defaults plus environment."""
    manager = get_config_manager()
    manager.reload_config()
    yield manager
    manager.reload_config()
