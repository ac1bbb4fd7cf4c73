"""
Record/replay cassettes for deterministic, offline collection.

A cassette is a directory. Every recorded request becomes one entry file
holding the request line, a subset of headers and the raw response body;
``index.json`` maps request keys ``"<source_id> <url>"`` to entry file names.

Entry file layout (bytes)::

    GET https://example.org/backlinks?site=itu.edu.tr HTTP/1.1
    X-Source-Id: yahoo_backlinks

    HTTP/1.1 200
    Content-Type: text/html
    X-Recorded-At: 2013-07-15T10:00:00+00:00

    <raw response body>

Latency probe attempts are recorded the same way under the source id
``probe:<location>`` and the URL ``tcp://<host>:<port>/attempt/<n>``; the
body holds the measured milliseconds, or the failure reason with status 0.

Classes:
    CassetteEntry: One recorded exchange.
    Cassette: Directory-backed store of entries.
    CassetteTransport: Transport wrapper implementing Record, Replay and Passthrough.

Example:
    >>> cassette = Cassette(Path("cassettes/2013-summer"))
    >>> transport = CassetteTransport(cassette, CassetteMode.REPLAY)
    >>> transport.fetch("yahoo_backlinks", "https://example.org/backlinks?site=itu.edu.tr").status_code
    200
"""

import hashlib
import json
import logging
import threading
from datetime import datetime
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict

from persistence.errors import DatasetIoError, FetchError, ProbeError, UsageError
from persistence.models import CassetteMode
from persistence.transport import Transport, TransportResponse

logger = logging.getLogger(__name__)

INDEX_FILE = "index.json"
PROBE_FAILED_STATUS = 0


class CassetteEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    source_id: str
    url: str
    status_code: int
    content_type: Optional[str] = None
    recorded_at: datetime
    body: bytes

    def to_bytes(self) -> bytes:
        head = [
            f"GET {self.url} HTTP/1.1",
            f"X-Source-Id: {self.source_id}",
            "",
            f"HTTP/1.1 {self.status_code}",
        ]
        if self.content_type:
            head.append(f"Content-Type: {self.content_type}")
        head.append(f"X-Recorded-At: {self.recorded_at.isoformat()}")
        return ("\n".join(head) + "\n\n").encode("utf-8") + self.body

    @classmethod
    def from_bytes(cls, raw: bytes) -> "CassetteEntry":
        try:
            request_block, response_head, body = raw.split(b"\n\n", 2)
            request_lines = request_block.decode("utf-8").split("\n")
            response_lines = response_head.decode("utf-8").split("\n")
            url = request_lines[0].split(" ")[1]
            headers = dict(line.split(": ", 1) for line in request_lines[1:] + response_lines[1:])
            status_code = int(response_lines[0].split(" ")[1])
            return cls(
                source_id=headers["X-Source-Id"],
                url=url,
                status_code=status_code,
                content_type=headers.get("Content-Type"),
                recorded_at=datetime.fromisoformat(headers["X-Recorded-At"]),
                body=body,
            )
        except (ValueError, IndexError, KeyError) as e:
            raise DatasetIoError(f"corrupt cassette entry: {e}") from e

    def to_response(self) -> TransportResponse:
        return TransportResponse(
            status_code=self.status_code,
            body=self.body,
            content_type=self.content_type,
            received_at=self.recorded_at,
        )


def request_key(source_id: str, url: str) -> str:
    return f"{source_id} {url}"


class Cassette:
    """
    Directory-backed collection of recorded exchanges.

    Writes are serialized with a lock so concurrent collection workers can
    record into the same cassette. Entry file names are derived from the
    request key, so re-recording a request overwrites its previous entry.
    """

    def __init__(self, directory: Path) -> None:
        self.directory = Path(directory)
        self._lock = threading.Lock()
        self._index: dict[str, str] = self._read_index()

    def _read_index(self) -> dict[str, str]:
        index_path = self.directory / INDEX_FILE
        if not index_path.exists():
            return {}
        try:
            return json.loads(index_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise DatasetIoError(f"cannot read cassette index {index_path}: {e}") from e

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, key: str) -> bool:
        return key in self._index

    def lookup(self, source_id: str, url: str) -> Optional[CassetteEntry]:
        file_name = self._index.get(request_key(source_id, url))
        if file_name is None:
            return None
        try:
            raw = (self.directory / file_name).read_bytes()
        except OSError as e:
            raise DatasetIoError(f"cannot read cassette entry {file_name}: {e}") from e
        return CassetteEntry.from_bytes(raw)

    def store(self, entry: CassetteEntry) -> None:
        key = request_key(entry.source_id, entry.url)
        file_name = hashlib.sha256(key.encode("utf-8")).hexdigest()[:20] + ".http"
        with self._lock:
            try:
                self.directory.mkdir(parents=True, exist_ok=True)
                (self.directory / file_name).write_bytes(entry.to_bytes())
                self._index[key] = file_name
                (self.directory / INDEX_FILE).write_text(
                    json.dumps(self._index, indent=2, sort_keys=True, ensure_ascii=False),
                    encoding="utf-8",
                )
            except OSError as e:
                raise DatasetIoError(f"cannot write cassette {self.directory}: {e}") from e


class CassetteTransport(Transport):
    """
    Transport wrapper with three modes.

    Record:      forward to the inner transport and persist every response.
    Replay:      answer from the cassette only; never opens a connection.
    Passthrough: forward to the inner transport without recording.
    """

    def __init__(
        self, cassette: Cassette, mode: CassetteMode, inner: Optional[Transport] = None
    ) -> None:
        if mode != CassetteMode.REPLAY and inner is None:
            raise UsageError(f"cassette mode '{mode.value}' needs a live transport")
        self.cassette = cassette
        self.mode = mode
        self.inner = inner if mode != CassetteMode.REPLAY else None
        self.offline = mode == CassetteMode.REPLAY

    def fetch(self, source_id: str, url: str) -> TransportResponse:
        if self.mode == CassetteMode.REPLAY:
            entry = self.cassette.lookup(source_id, url)
            if entry is None:
                raise FetchError(f"{source_id}: GET {url} is not recorded in the cassette")
            return entry.to_response()

        response = self.inner.fetch(source_id, url)
        if self.mode == CassetteMode.RECORD:
            self.cassette.store(
                CassetteEntry(
                    source_id=source_id,
                    url=url,
                    status_code=response.status_code,
                    content_type=response.content_type,
                    recorded_at=response.received_at,
                    body=response.body,
                )
            )
        return response

    def connect_time(self, probe_id: str, host: str, port: int, attempt: int) -> float:
        source_id = f"probe:{probe_id}"
        url = f"tcp://{host}:{port}/attempt/{attempt}"

        if self.mode == CassetteMode.REPLAY:
            entry = self.cassette.lookup(source_id, url)
            if entry is None:
                raise ProbeError(f"{probe_id}: probe of {host}:{port} attempt {attempt} is not recorded")
            if entry.status_code == PROBE_FAILED_STATUS:
                raise ProbeError(entry.body.decode("utf-8"))
            return float(entry.body.decode("ascii"))

        if self.mode == CassetteMode.PASSTHROUGH:
            return self.inner.connect_time(probe_id, host, port, attempt)

        recorded_at = datetime.now().astimezone()
        try:
            millis = self.inner.connect_time(probe_id, host, port, attempt)
        except ProbeError as e:
            self.cassette.store(
                CassetteEntry(
                    source_id=source_id,
                    url=url,
                    status_code=PROBE_FAILED_STATUS,
                    recorded_at=recorded_at,
                    body=str(e).encode("utf-8"),
                )
            )
            raise
        self.cassette.store(
            CassetteEntry(
                source_id=source_id,
                url=url,
                status_code=200,
                recorded_at=recorded_at,
                body=repr(millis).encode("ascii"),
            )
        )
        return millis
