"""Local HTTP surface for a form: schema out, values in.

Serves one session per process on loopback. The browser client (or any
HTTP caller) fetches GET /schema, posts a complete values map to
POST /values (all-or-nothing, validated server-side), triggers callbacks
via POST /actions/<name>, uploads blobs via multipart POST
/upload/<name>, polls GET /outputs, and may POST /cancel. Validation
failures are answered 200 with errors in the body; a closed session
answers 409.
"""

from __future__ import annotations

import copy
import json
import re
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Dict, List, Optional, Tuple, Union

from .form import FormSpec
from .model import Blob, ElementKind, ValidationError, validate
from .outcome import Cancelled, Submitted
from .persistence import save_parameters

SCHEMA_VERSION = 1


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    disable_nagle_algorithm = True  # unbuffered responses stall keep-alive otherwise


class WebBridgeError(Exception):
    pass


def wire_schema(form: FormSpec) -> dict:
    elements = []
    for el in form.elements:
        cs = el.constraints
        current = form.values.get(el.name) if el.has_value else None
        default = el.default
        if isinstance(current, Blob):
            current = {"filename": current.filename, "size": len(current.data)}
        if isinstance(default, Blob):
            default = None
        elements.append(
            {
                "name": el.name,
                "kind": el.kind.value,
                "label": el.label,
                "constraints": {
                    "min": cs.min,
                    "max": cs.max,
                    "step": cs.step,
                    "options": cs.options,
                    "extensions": cs.extensions,
                    "must_exist": cs.must_exist,
                    "max_length": cs.max_length,
                },
                "default": default,
                "current": current,
                "help": el.help,
            }
        )
    return {"title": form.title, "version": SCHEMA_VERSION, "elements": elements}


class Session:
    """One served form: lifecycle open -> submitted | cancelled."""

    def __init__(self, form: FormSpec, server: ThreadingHTTPServer):
        self.id = uuid.uuid4().hex
        self.form = form
        self.state = "open"
        self._server = server
        self.bind_addr = "%s:%d" % server.server_address[:2]
        self._lock = threading.RLock()
        self._done = threading.Event()
        self._outcome: Optional[Union[Submitted, Cancelled]] = None
        self._snapshot = copy.deepcopy(form.values)
        self._output_log: List[str] = []

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    def wait(self, timeout: Optional[float] = None):
        """Block until the session is submitted or cancelled."""
        if self._done.wait(timeout):
            return self._outcome
        return None

    def close(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    # -- request-side operations (called with the lock held) ---------------

    def submit_values(self, payload) -> dict:
        with self._lock:
            if self.state != "open":
                return {"error": "session_closed"}
            if not isinstance(payload, dict):
                return {
                    "ok": False,
                    "errors": [
                        {
                            "name": "",
                            "rule": "type_mismatch",
                            "message": "payload must be a JSON object",
                        }
                    ],
                }
            staged = {}
            errors = []
            for name, raw in payload.items():
                el = next(
                    (
                        e
                        for e in self.form.elements
                        if e.name == name and e.has_value
                    ),
                    None,
                )
                if el is None:
                    errors.append(
                        {
                            "name": str(name),
                            "rule": "unknown_element",
                            "message": f"no such element: {name!r}",
                        }
                    )
                    continue
                if el.kind is ElementKind.FILE_UPLOAD:
                    continue  # blobs arrive via /upload, never via /values
                result = validate(el, raw)
                if isinstance(result, ValidationError):
                    errors.append(
                        {
                            "name": name,
                            "rule": result.rule,
                            "message": result.message,
                        }
                    )
                else:
                    staged[name] = result
            if errors:
                return {"ok": False, "errors": errors}
            self.form.values.update(staged)
            save_parameters(self.form)
            self.state = "submitted"
            self._outcome = Submitted(self.form.get_values())
            self._done.set()
            return {"ok": True}

    def invoke_action(self, name: str) -> Tuple[int, dict]:
        with self._lock:
            if self.state != "open":
                return 409, {"error": "session_closed"}
            if name not in self.form.actions:
                return 200, {
                    "ok": False,
                    "errors": [
                        {
                            "name": name,
                            "rule": "unknown_element",
                            "message": f"no such action: {name!r}",
                        }
                    ],
                }
            ok, lines = self.form.invoke_action(name)
            self._output_log.extend(lines)
            body = {"ok": ok, "output_lines": lines}
            if not ok:
                body["message"] = lines[0] if lines else "callback failed"
            return 200, body

    def store_upload(self, name: str, blob: Blob) -> Tuple[int, dict]:
        with self._lock:
            if self.state != "open":
                return 409, {"error": "session_closed"}
            el = next(
                (
                    e
                    for e in self.form.elements
                    if e.name == name and e.kind is ElementKind.FILE_UPLOAD
                ),
                None,
            )
            if el is None:
                return 200, {
                    "ok": False,
                    "errors": [
                        {
                            "name": name,
                            "rule": "unknown_element",
                            "message": f"no such upload element: {name!r}",
                        }
                    ],
                }
            result = validate(el, blob)
            if isinstance(result, ValidationError):
                return 200, {
                    "ok": False,
                    "errors": [
                        {
                            "name": name,
                            "rule": result.rule,
                            "message": result.message,
                        }
                    ],
                }
            self.form.values[name] = result
            return 200, {"ok": True, "filename": blob.filename, "size": len(blob.data)}

    def cancel(self) -> Tuple[int, dict]:
        with self._lock:
            if self.state != "open":
                return 409, {"error": "session_closed"}
            self.form.values = copy.deepcopy(self._snapshot)
            self.state = "cancelled"
            self._outcome = Cancelled("client cancelled")
            self._done.set()
            return 200, {"ok": True}

    def outputs_since(self, since: int) -> dict:
        with self._lock:
            lines = [
                {"seq": i, "text": text}
                for i, text in enumerate(self._output_log)
                if i >= since
            ]
            return {"lines": lines, "next": len(self._output_log)}


def _parse_multipart(content_type: str, body: bytes) -> Optional[Blob]:
    match = re.search(r'boundary="?([^";]+)"?', content_type)
    if not match:
        return None
    boundary = match.group(1).encode()
    for part in body.split(b"--" + boundary):
        part = part.strip(b"\r\n")
        if not part or part == b"--":
            continue
        header_blob, _, payload = part.partition(b"\r\n\r\n")
        headers = header_blob.decode("utf-8", "replace")
        fn = re.search(r'filename="([^"]*)"', headers)
        if fn:
            return Blob(fn.group(1), payload)
    return None


def _make_handler(session: Session, static_dir: Optional[str]):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"
        disable_nagle_algorithm = True  # small replies; write them eagerly

        def log_message(self, *args):  # keep test output clean
            pass

        def _send(self, code: int, body: dict) -> None:
            data = json.dumps(body).encode("utf-8")
            self.send_response(code)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def _read_body(self) -> bytes:
            length = int(self.headers.get("Content-Length") or 0)
            return self.rfile.read(length) if length else b""

        def do_GET(self):
            path, _, query = self.path.partition("?")
            if path == "/schema":
                with session._lock:
                    self._send(200, wire_schema(session.form))
            elif path == "/outputs":
                since = 0
                m = re.search(r"(?:^|&)since=(\d+)", query)
                if m:
                    since = int(m.group(1))
                self._send(200, session.outputs_since(since))
            elif path == "/" or path.startswith("/static/"):
                self._send_static(path)
            else:
                self._send(404, {"error": "not_found"})

        def _send_static(self, path: str) -> None:
            import os

            if static_dir is None:
                self._send(404, {"error": "not_found"})
                return
            rel = "index.html" if path == "/" else path[len("/static/") :]
            full = os.path.abspath(os.path.join(static_dir, rel))
            if not full.startswith(os.path.abspath(static_dir)) or not os.path.isfile(
                full
            ):
                self._send(404, {"error": "not_found"})
                return
            ctype = {
                ".html": "text/html; charset=utf-8",
                ".js": "text/javascript; charset=utf-8",
                ".css": "text/css; charset=utf-8",
            }.get(os.path.splitext(full)[1], "application/octet-stream")
            with open(full, "rb") as fh:
                data = fh.read()
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def do_POST(self):
            path = self.path.partition("?")[0]
            body = self._read_body()
            if path == "/values":
                try:
                    payload = json.loads(body.decode("utf-8")) if body else None
                except (ValueError, UnicodeDecodeError):
                    payload = None
                result = session.submit_values(payload)
                if result.get("error") == "session_closed":
                    self._send(409, result)
                else:
                    self._send(200, result)
            elif path.startswith("/actions/"):
                code, result = session.invoke_action(path[len("/actions/") :])
                self._send(code, result)
            elif path.startswith("/upload/"):
                blob = _parse_multipart(self.headers.get("Content-Type", ""), body)
                if blob is None:
                    self._send(
                        200,
                        {
                            "ok": False,
                            "errors": [
                                {
                                    "name": path[len("/upload/") :],
                                    "rule": "parse_failure",
                                    "message": "expected a multipart file upload",
                                }
                            ],
                        },
                    )
                    return
                code, result = session.store_upload(path[len("/upload/") :], blob)
                self._send(code, result)
            elif path == "/cancel":
                code, result = session.cancel()
                self._send(code, result)
            else:
                self._send(404, {"error": "not_found"})

    return Handler


def serve(
    form: FormSpec, bind_addr: str = "127.0.0.1:0", static_dir: Optional[str] = None
) -> Session:
    """Start the HTTP session for ``form``; returns immediately.

    The caller blocks on ``session.wait()`` for the outcome. Binding
    defaults to loopback; an occupied port raises WebBridgeError.
    """
    host, _, port_text = bind_addr.rpartition(":")
    if not host or not port_text.isdigit():
        raise WebBridgeError(f"invalid bind address {bind_addr!r}")
    try:
        server = _Server((host, int(port_text)), BaseHTTPRequestHandler)
    except OSError as exc:
        raise WebBridgeError(f"cannot bind {bind_addr!r}: {exc}") from exc
    session = Session(form, server)
    server.RequestHandlerClass = _make_handler(session, static_dir)
    thread = threading.Thread(
        target=lambda: server.serve_forever(poll_interval=0.02),
        name=f"paramforge-web-{session.port}",
        daemon=True,
    )
    thread.start()
    session._thread = thread
    return session
