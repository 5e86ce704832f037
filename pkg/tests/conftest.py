import pytest


@pytest.fixture
def criterion(capsys):
    """Print one PASS/FAIL line per acceptance criterion through the capture."""

    def report(number: int, name: str, ok: bool, detail: str = "") -> None:
        tail = f" ({detail})" if detail else ""
        with capsys.disabled():
            print(f"ACCEPTANCE {number:02d} {name}: {'PASS' if ok else 'FAIL'}{tail}")

    return report
