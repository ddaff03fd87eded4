"""Directory-backed persistence for published apps and augmentation requests.

Layout under the store root:

    apps/<id>.mowa.xml    canonical spec bytes, content-addressed
    index.json            app metadata keyed by id
    requests.json         augmentation requests keyed by id

Published bytes never change: put_app with an existing id is a no-op, which
is exactly the idempotence the publish operation promises. JSON files are
replaced via write-then-rename so a concurrent reader never sees a torn file.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from pathlib import Path

INDEX_NAME = "index.json"
REQUESTS_NAME = "requests.json"


class DirectoryStore:
    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.apps_dir = self.root / "apps"
        self.apps_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    # -- json files ---------------------------------------------------------

    def _read_json(self, name: str) -> dict:
        path = self.root / name
        if not path.exists():
            return {}
        return json.loads(path.read_text(encoding="utf-8"))

    def _write_json(self, name: str, data: dict) -> None:
        path = self.root / name
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(data, indent=2, sort_keys=True), encoding="utf-8")
        tmp.replace(path)

    # -- apps ----------------------------------------------------------------

    def app_path(self, app_id: str) -> Path:
        return self.apps_dir / f"{app_id}.mowa.xml"

    def put_app(self, app_id: str, spec_bytes: bytes, meta: dict) -> tuple[dict, bool]:
        """Returns (record, created). Re-putting an existing id changes nothing."""
        with self._lock:
            index = self._read_json(INDEX_NAME)
            if app_id in index:
                return index[app_id], False
            path = self.app_path(app_id)
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(spec_bytes)
            tmp.replace(path)
            record = dict(meta)
            record["id"] = app_id
            record["uploaded_at"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
            index[app_id] = record
            self._write_json(INDEX_NAME, index)
            return record, True

    def get_app_bytes(self, app_id: str) -> bytes | None:
        path = self.app_path(app_id)
        if not path.exists():
            return None
        return path.read_bytes()

    def get_app_record(self, app_id: str) -> dict | None:
        return self._read_json(INDEX_NAME).get(app_id)

    def list_apps(self) -> list[dict]:
        index = self._read_json(INDEX_NAME)
        return sorted(index.values(), key=lambda r: (r["uploaded_at"], r["id"]))

    # -- requests -------------------------------------------------------------

    def create_request(self, title: str, description: str, requester: str) -> dict:
        with self._lock:
            requests = self._read_json(REQUESTS_NAME)
            rid = uuid.uuid4().hex[:12]
            record = {
                "id": rid,
                "title": title,
                "description": description,
                "requester": requester,
                "status": "open",
                "fulfilled_by": None,
                "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            }
            requests[rid] = record
            self._write_json(REQUESTS_NAME, requests)
            return record

    def get_request(self, rid: str) -> dict | None:
        return self._read_json(REQUESTS_NAME).get(rid)

    def list_requests(self) -> list[dict]:
        requests = self._read_json(REQUESTS_NAME)
        return sorted(requests.values(), key=lambda r: (r["created_at"], r["id"]))

    def fulfill_request(self, rid: str, app_id: str) -> dict | None:
        """Transition open -> fulfilled. Returns None when rid is unknown."""
        with self._lock:
            requests = self._read_json(REQUESTS_NAME)
            record = requests.get(rid)
            if record is None:
                return None
            if record["status"] == "fulfilled":
                raise AlreadyFulfilled(rid)
            record["status"] = "fulfilled"
            record["fulfilled_by"] = app_id
            self._write_json(REQUESTS_NAME, requests)
            return record


class AlreadyFulfilled(Exception):
    def __init__(self, rid: str) -> None:
        super().__init__(f"request {rid} is already fulfilled")
        self.rid = rid
