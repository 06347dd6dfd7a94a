import math

import pytest

PI = math.pi

# -(u')' = lam (2 + sin 2 pi x) u on (0,1), u(0)=u(1)=0: finite differences at
# n = 4000 and 8000 combined by Richardson extrapolation.
FD_TRIG_LAMBDA1 = 4.757356625118867
FD_TRIG_LAMBDA2 = 21.632591490455997
# same for the weight 2 + sin(16 pi x), n = 16000 and 32000
FD_TRIG8_LAMBDA1 = 4.932356814909158


@pytest.fixture
def tmp_cfg(tmp_path):
    def write(text: str):
        path = tmp_path / "cfg.toml"
        path.write_text(text)
        return path
    return write


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
