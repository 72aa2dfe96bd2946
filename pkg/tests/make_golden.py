"""Regenerate tests/golden/*.json from the CLI verdict table."""
from __future__ import annotations

import pathlib
import sys

HERE = pathlib.Path(__file__).parent
sys.path.insert(0, str(HERE))

from alephmon.cli import run  # noqa: E402
from cli_table import table  # noqa: E402


def main():
    out = HERE / "golden"
    out.mkdir(exist_ok=True)
    for name, argv, expected in table(HERE / "fixtures"):
        code, text, err = run([*argv, "--json"])
        assert code == expected, (name, code, err)
        if code == 64:
            continue
        (out / f"{name}.json").write_text(text, encoding="utf-8")
        print(f"{code}  {name}")


if __name__ == "__main__":
    main()
