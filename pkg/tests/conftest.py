import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
GOLDEN = FIXTURES / "golden"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def compare_or_regenerate(path: Path, text: str) -> None:
    """Assert byte equality with a golden file; regenerate with MIXLR_REGEN_GOLDENS=1."""
    if os.environ.get("MIXLR_REGEN_GOLDENS") == "1":
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return
    assert path.exists(), f"golden file missing: {path} (set MIXLR_REGEN_GOLDENS=1)"
    assert text == path.read_text(encoding="utf-8"), f"output differs from {path}"
