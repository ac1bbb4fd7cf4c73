"""
Network transports used by the collectors.

A transport performs the two kinds of network operation the collectors need:
an HTTP GET of a resolved source URL, and the timing of one TCP connect to a
host. The live implementation talks to the network through a
``requests.Session`` and plain sockets; ``persistence.cassette`` wraps any
transport with record/replay behaviour.

Classes:
    TransportResponse: Status, body and receive time of one GET.
    Transport: Abstract transport interface.
    HttpTransport: Live transport (requests + TCP connect timing).

Dependencies:
    - requests: HTTP client with connection pooling
    - urllib3 Retry: Backoff policy mounted through requests.adapters.HTTPAdapter
    - socket / time.perf_counter: Unprivileged TCP connect timing (no ICMP)
    - persistence.settings: Timeouts, retries and user agent

Example:
    >>> transport = HttpTransport()
    >>> response = transport.fetch("alexa", "https://www.alexa.com/siteinfo/itu.edu.tr")
    >>> response.status_code
    200
    >>> transport.connect_time("tr-istanbul", "www.itu.edu.tr", 443, attempt=0)
    41.7
"""

import logging
import socket
import time
from abc import ABC, abstractmethod
from datetime import datetime, timezone
from typing import Callable, Optional

import requests
from pydantic import BaseModel, ConfigDict
from requests.adapters import HTTPAdapter
from urllib3.util.retry import Retry

from persistence import settings
from persistence.errors import FetchError, ProbeError

logger = logging.getLogger(__name__)

RETRY_STATUSES = (429, 500, 502, 503, 504)


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


class TransportResponse(BaseModel):
    model_config = ConfigDict(frozen=True)

    status_code: int
    body: bytes
    content_type: Optional[str] = None
    received_at: datetime

    @property
    def ok(self) -> bool:
        return 200 <= self.status_code < 400

    @property
    def text(self) -> str:
        return self.body.decode("utf-8", errors="replace")


class Transport(ABC):
    """
    Interface every transport implements.

    ``offline`` is True when the transport is guaranteed never to touch the
    network; the collectors skip real-time rate limiting in that case.
    """

    offline: bool = False

    @abstractmethod
    def fetch(self, source_id: str, url: str) -> TransportResponse:
        """GET ``url`` on behalf of ``source_id``. Raises FetchError on network failure."""
        raise NotImplementedError("You must implement this method")

    @abstractmethod
    def connect_time(self, probe_id: str, host: str, port: int, attempt: int) -> float:
        """Return one TCP connect round-trip to ``host:port`` in milliseconds. Raises ProbeError."""
        raise NotImplementedError("You must implement this method")


def build_retry(attempts: int) -> Retry:
    """
    Retry policy for GET requests: connection errors, read timeouts and
    throttling or server-error statuses are retried with exponential backoff.
    The last response is returned even when its status is still an error.
    """
    return Retry(
        total=max(0, attempts - 1),
        backoff_factor=settings.HTTP_RETRY_BACKOFF,
        status_forcelist=RETRY_STATUSES,
        allowed_methods=frozenset({"GET"}),
        raise_on_status=False,
    )


class HttpTransport(Transport):
    """
    Live transport.

    GET requests go through a shared ``requests.Session`` with a connect/read
    timeout. Retries with exponential backoff come from an ``HTTPAdapter``
    mounted for both schemes. HTTP error statuses are returned, not raised;
    the collector decides what they mean.

    TCP connect timing measures from the machine running the collector. The
    ``probe_id`` names the vantage point this process represents; running the
    collector at several locations and merging the cassettes gives a
    multi-location probe.
    """

    def __init__(
        self,
        session: Optional[requests.Session] = None,
        now: Callable[[], datetime] = utc_now,
        timeout: float = settings.HTTP_TIMEOUT,
        retries: int = settings.HTTP_RETRIES,
        probe_timeout: float = settings.PROBE_TIMEOUT,
    ) -> None:
        self.session = session or requests.Session()
        self.session.headers.setdefault("User-Agent", settings.USER_AGENT)
        adapter = HTTPAdapter(max_retries=build_retry(retries))
        self.session.mount("http://", adapter)
        self.session.mount("https://", adapter)
        self.now = now
        self.timeout = (settings.HTTP_CONNECT_TIMEOUT, timeout)
        self.probe_timeout = probe_timeout

    def fetch(self, source_id: str, url: str) -> TransportResponse:
        try:
            response = self.session.get(url, timeout=self.timeout)
        except requests.exceptions.RequestException as e:
            logger.debug("GET %s for %s failed: %s", url, source_id, e)
            raise FetchError(f"{source_id}: GET {url} failed: {e}") from e
        return TransportResponse(
            status_code=response.status_code,
            body=response.content,
            content_type=response.headers.get("Content-Type"),
            received_at=self.now(),
        )

    def connect_time(self, probe_id: str, host: str, port: int, attempt: int) -> float:
        try:
            with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as sock:
                sock.settimeout(self.probe_timeout)
                started = time.perf_counter_ns()
                sock.connect((socket.gethostbyname(host), port))
                finished = time.perf_counter_ns()
        except OSError as e:
            raise ProbeError(f"{probe_id}: connect to {host}:{port} failed: {e}") from e
        return (finished - started) / 1_000_000
