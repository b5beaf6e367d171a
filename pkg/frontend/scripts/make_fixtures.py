#!/usr/bin/env python3
"""Capture real service responses as viewer test fixtures.

Run from the repository root (or anywhere) after installing the Python
package; rewrites frontend/tests/fixtures/*.json.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from proofbench.parsing import parse_hlks
from proofbench.service import create_app

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
CHAIN = ROOT.parent / "tests" / "data" / "chain.lks"

E1_TEXT = (
    "proof e1 proves P |- P {\n"
    "  1: ax(P |- P)\n"
    "  2: ax(P |- P)\n"
    "  root: cut(1, 2, P)\n"
    "}\n"
)


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app(parse_hlks(CHAIN.read_text() + E1_TEXT)))

    def save(name: str, payload) -> None:
        (FIXTURES / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")

    save("db.json", client.get("/api/db").json())
    save("view_psi2.json", client.get("/api/object/psi/view", params={"n": 2}).json())
    save(
        "view_psi2_hide_structural.json",
        client.get("/api/object/psi/view", params={"n": 2, "hideStructural": "true"}).json(),
    )
    save("view_e1.json", client.get("/api/object/e1/view").json())
    save(
        "search_e1_cut.json",
        client.get("/api/object/e1/search", params={"q": "cut"}).json(),
    )
    client.post("/api/proof/e1/transform", json={"op": "struct"})
    save("view_e1_struct.json", client.get("/api/object/e1.struct/view").json())
    save(
        "view_e1_struct_hidden.json",
        client.get("/api/object/e1.struct/view", params={"hidden": "r0"}).json(),
    )
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
