"""Collects acceptance pass/fail lines for the end-of-run summary section."""

LINES: list[str] = []


def record(line: str) -> None:
    LINES.append(line)
