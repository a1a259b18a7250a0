import pytest

from leonard_lab.scalar import QQ, FieldSpec

GF13 = FieldSpec.prime(13)
FIELDS = [QQ, GF13]


@pytest.fixture(params=FIELDS, ids=str)
def field(request):
    return request.param


def mat(field, rows):
    from leonard_lab.linalg import ExactMatrix

    return ExactMatrix(field, rows)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
