"""The exemplar-based design loop against the session service.

A designer records two exemplars of a layout that reorders its widgets when
narrow; the error map grows a fault line at the transition.  Redrawing the
narrow exemplar as a wrapped flow and committing it re-runs inference: the
fault line disappears and a flow pattern takes its place.

Runs the FastAPI app in-process (no network needed).
"""

from fastapi.testclient import TestClient
from pathlib import Path
import tempfile

from resizelens import builtin_oracle
from resizelens.geometry import snapshot_to_dict
from resizelens.service import create_app

oracle = builtin_oracle("reorder_pathological")
exemplars = {"samples": [snapshot_to_dict(oracle.query(340, 100)),
                         snapshot_to_dict(oracle.query(230, 100))]}

with tempfile.TemporaryDirectory() as tmp:
    client = TestClient(create_app(Path(tmp)))
    created = client.post("/sessions", json={"samples": exemplars}).json()
    sid = created["id"]
    before = client.get(f"/sessions/{sid}/errormap.json").json()["errormap"]
    print("fault lines before the fix:",
          [(f["axis"], f["position"], f["cause"]) for f in before["fault_lines"]])

    corrected = {"window": {"width": 230, "height": 100},
                 "widgets": [{"id": "A", "left": 0, "top": 0, "width": 60, "height": 40},
                             {"id": "B", "left": 60, "top": 0, "width": 50, "height": 40},
                             {"id": "C", "left": 0, "top": 40, "width": 70, "height": 40}]}
    resp = client.put(f"/sessions/{sid}/exemplars/230x100", json=corrected)
    print("committed corrected exemplar, revision:", resp.json()["revision"])

    after = client.get(f"/sessions/{sid}/errormap.json").json()["errormap"]
    meta = client.get(f"/sessions/{sid}").json()
    print("fault lines after the fix:", after["fault_lines"])
    print("patterns now:", [p["kind"] for p in meta["patterns"]])
