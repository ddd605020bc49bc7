from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / name)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion."""
    num = request.node.get_closest_marker("criterion").args[0]
    ACCEPTANCE[num] = (False, "did not finish")

    def done(detail=""):
        ACCEPTANCE[num] = (True, detail)

    yield done
    ok, detail = ACCEPTANCE[num]
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
