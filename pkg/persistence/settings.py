"""
Environment-backed defaults for the Web Reputation Index system.

Values are loaded from the process environment, optionally seeded from a
``.env`` file in the working directory. None of them is required; every
setting falls back to a default suitable for a single collector host.

Environment Variables:
    WRI_PARALLELISM: Worker bound for snapshot collection (default 4).
    WRI_HTTP_TIMEOUT: Read timeout in seconds for HTTP requests (default 15).
    WRI_HTTP_RETRIES: Attempts on connection errors and timeouts (default 3).
    WRI_PROBE_TIMEOUT: TCP connect timeout in seconds (default 3).
    WRI_PROBE_PORT: Port the latency probe connects to (default 443).
    WRI_USER_AGENT: User agent sent by the live HTTP transport.

Example:
    >>> from persistence.settings import DEFAULT_PARALLELISM
    >>> DEFAULT_PARALLELISM
    4
"""

import os

from dotenv import load_dotenv

load_dotenv()

DEFAULT_PARALLELISM: int = int(os.getenv("WRI_PARALLELISM", "4"))
HTTP_TIMEOUT: float = float(os.getenv("WRI_HTTP_TIMEOUT", "15"))
HTTP_CONNECT_TIMEOUT: float = 10.0
HTTP_RETRIES: int = int(os.getenv("WRI_HTTP_RETRIES", "3"))
HTTP_RETRY_BACKOFF: float = 1.0
PROBE_TIMEOUT: float = float(os.getenv("WRI_PROBE_TIMEOUT", "3"))
PROBE_PORT: int = int(os.getenv("WRI_PROBE_PORT", "443"))
USER_AGENT: str = os.getenv(
    "WRI_USER_AGENT", "web-reputation-index/0.1 (+webometrics research collector)"
)
