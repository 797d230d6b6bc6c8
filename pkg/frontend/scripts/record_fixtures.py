"""Record service payloads as frontend test fixtures.

Runs the engine in-process on a small structured dataset and writes the
canonical JSON bodies the UI tests replay.

Run from the repo root: python frontend/scripts/record_fixtures.py
"""

import pathlib

from summit.model import encode
from summit.payloads import canonical_json
from summit.service import SummitApp

OUT = pathlib.Path(__file__).resolve().parent.parent / "test" / "fixtures"

rows = [
    ("a", "p", "1"), ("a", "q", "1"), ("b", "p", "2"),
    ("b", "q", "2"), ("c", "s", "3"), ("d", "t", "3"),
    ("a", "s", "2"), ("b", "t", "1"), ("c", "p", "1"), ("d", "q", "2"),
]
vals = [10.0, 9.0, 8.0, 7.0, 6.0, 5.0, 2.0, 1.5, 1.0, 0.5]
ds = encode(["A", "B", "C"], rows, vals)

app = SummitApp(ds)

fixtures = {
    "meta.json": app.get_meta(),
    "solution_k4.json": app.post_summarize({"k": 4, "L": 6, "D": 0}, "fix"),
    "guidance.json": app.get_guidance(
        {"L": ["6"], "kmin": ["1"], "kmax": ["6"], "dmin": ["0"], "dmax": ["2"]}),
    "compare_k4_to_k3.json": app.post_compare(
        {"current": {"k": 3, "L": 6, "D": 0}}, "fix"),
}

OUT.mkdir(parents=True, exist_ok=True)
for name, payload in fixtures.items():
    path = OUT / name
    path.write_text(canonical_json(payload) + "\n")
    print(f"wrote {path}")
