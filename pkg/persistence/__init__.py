from .dataset_store import DatasetStore
from .cassette import Cassette, CassetteTransport
from .transport import HttpTransport, Transport, TransportResponse
from .appendix_fixture import load_appendix_fixture, fixture_results

__all__ = [
    "DatasetStore",
    "Cassette",
    "CassetteTransport",
    "HttpTransport",
    "Transport",
    "TransportResponse",
    "load_appendix_fixture",
    "fixture_results",
]
