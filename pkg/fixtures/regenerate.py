"""Rewrite fixtures/golden from the current CLI output.

Run from anywhere: ``python3 fixtures/regenerate.py``. Each case in
cases.json is run with ``--json`` in a fresh interpreter; the golden file holds
stdout followed by a final ``exit=<code>`` line.
"""
import json
import pathlib
import subprocess
import sys

HERE = pathlib.Path(__file__).resolve().parent


def render(argv: list[str]) -> bytes:
    cmd, path, *rest = argv
    proc = subprocess.run(
        [sys.executable, "-m", "descentkit", cmd, str(HERE / path), "--json", *rest],
        capture_output=True,
        cwd=HERE,
    )
    return proc.stdout + f"exit={proc.returncode}\n".encode()


def main() -> None:
    cases = json.loads((HERE / "cases.json").read_text())
    out = HERE / "golden"
    out.mkdir(exist_ok=True)
    for name, argv in cases.items():
        (out / f"{name}.out").write_bytes(render(argv))
        print(name)


if __name__ == "__main__":
    main()
