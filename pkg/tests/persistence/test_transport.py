"""
Test suite for HttpTransport.

The requests session and the socket module are mocked and retry policies are
inspected, so no connection is opened.
"""

import socket
import unittest
from unittest.mock import MagicMock, patch

import requests
from requests.adapters import HTTPAdapter

from persistence.errors import FetchError, ProbeError
from persistence.transport import HttpTransport, build_retry
from tests.builders import FIXED_TIME

URL = "https://siteexplorer.example/backlinks?site=itu.edu.tr"


def http_response(status_code=200, content=b"<p>Inlinks (12)</p>", content_type="text/html"):
    response = MagicMock()
    response.status_code = status_code
    response.content = content
    response.headers = {"Content-Type": content_type}
    return response


class TestRetryPolicy(unittest.TestCase):
    """Test cases for build_retry and the adapters HttpTransport mounts."""

    def test_attempts_become_retries(self):
        retry = build_retry(3)

        self.assertEqual(retry.total, 2)
        self.assertEqual(retry.backoff_factor, 1.0)
        self.assertEqual(tuple(retry.status_forcelist), (429, 500, 502, 503, 504))
        self.assertEqual(retry.allowed_methods, frozenset({"GET"}))
        self.assertFalse(retry.raise_on_status)

    def test_single_attempt_never_retries(self):
        self.assertEqual(build_retry(1).total, 0)
        self.assertEqual(build_retry(0).total, 0)

    def test_adapter_is_mounted_for_both_schemes(self):
        transport = HttpTransport(session=requests.Session(), retries=4)

        for url in ("http://www.itu.edu.tr/", "https://www.itu.edu.tr/"):
            with self.subTest(url=url):
                adapter = transport.session.get_adapter(url)
                self.assertIsInstance(adapter, HTTPAdapter)
                self.assertEqual(adapter.max_retries.total, 3)


class TestFetch(unittest.TestCase):
    """Test cases for HttpTransport.fetch."""

    def setUp(self):
        self.session = MagicMock()
        self.transport = HttpTransport(session=self.session, now=lambda: FIXED_TIME, timeout=15.0, retries=3)

    def test_successful_get(self):
        self.session.get.return_value = http_response()

        response = self.transport.fetch("yahoo_backlinks", URL)

        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.text, "<p>Inlinks (12)</p>")
        self.assertEqual(response.content_type, "text/html")
        self.assertEqual(response.received_at, FIXED_TIME)
        self.session.get.assert_called_once_with(URL, timeout=(10.0, 15.0))
        self.assertEqual([c.args[0] for c in self.session.mount.call_args_list], ["http://", "https://"])

    def test_error_status_is_returned(self):
        self.session.get.return_value = http_response(status_code=503, content=b"busy")

        response = self.transport.fetch("yahoo_backlinks", URL)

        self.assertFalse(response.ok)
        self.assertEqual(response.status_code, 503)

    def test_exhausted_retries_become_fetch_errors(self):
        for error in (
            requests.exceptions.ConnectionError("reset"),
            requests.exceptions.ReadTimeout("slow"),
            requests.exceptions.RetryError("too many 503 responses"),
            requests.exceptions.InvalidURL("bad url"),
        ):
            with self.subTest(error=type(error).__name__):
                self.session.get.reset_mock()
                self.session.get.side_effect = error

                with self.assertRaises(FetchError) as context:
                    self.transport.fetch("yahoo_backlinks", URL)

                self.assertIn(f"yahoo_backlinks: GET {URL} failed", str(context.exception))
                self.assertIs(context.exception.__cause__, error)
                self.assertEqual(self.session.get.call_count, 1)

    def test_user_agent_is_set(self):
        session = requests.Session()
        session.headers.pop("User-Agent", None)

        HttpTransport(session=session)

        self.assertIn("web-reputation-index", session.headers["User-Agent"])


class TestConnectTime(unittest.TestCase):
    """Test cases for HttpTransport.connect_time."""

    def setUp(self):
        self.transport = HttpTransport(session=MagicMock(), probe_timeout=3.0)

    @patch("persistence.transport.time.perf_counter_ns", side_effect=[1_000_000, 42_500_000])
    @patch("persistence.transport.socket.gethostbyname", return_value="160.75.25.5")
    @patch("persistence.transport.socket.socket")
    def test_connect_time_in_milliseconds(self, mock_socket, _gethostbyname, _clock):
        sock = mock_socket.return_value.__enter__.return_value

        millis = self.transport.connect_time("tr-istanbul", "itu.edu.tr", 443, attempt=0)

        self.assertEqual(millis, 41.5)
        sock.settimeout.assert_called_once_with(3.0)
        sock.connect.assert_called_once_with(("160.75.25.5", 443))

    @patch("persistence.transport.socket.gethostbyname", return_value="160.75.25.5")
    @patch("persistence.transport.socket.socket")
    def test_refused_connection(self, mock_socket, _gethostbyname):
        mock_socket.return_value.__enter__.return_value.connect.side_effect = ConnectionRefusedError()

        with self.assertRaises(ProbeError):
            self.transport.connect_time("tr-istanbul", "itu.edu.tr", 443, attempt=1)

    @patch("persistence.transport.socket.socket")
    @patch("persistence.transport.socket.gethostbyname")
    def test_unknown_host(self, mock_gethostbyname, _socket):
        mock_gethostbyname.side_effect = socket.gaierror("Name or service not known")

        with self.assertRaises(ProbeError):
            self.transport.connect_time("tr-istanbul", "no-such-host.example", 443, attempt=0)


if __name__ == "__main__":
    unittest.main()
