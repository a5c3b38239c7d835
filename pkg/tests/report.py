"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

LINES: list[str] = []


def record(criterion: int, name: str, ok: bool, detail: str = "") -> bool:
    LINES.append(f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {name}"
                 + (f"  [{detail}]" if detail else ""))
    print(LINES[-1])
    return ok
