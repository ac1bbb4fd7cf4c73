"""
Collect Command for the Web Reputation Index system.

This module implements the ``collect`` operation: it reads the entities to
measure, fetches every configured source for every entity, probes the web
host latency, and writes the resulting snapshot.

Transport selection:
    - ``--replay --cassette DIR``: answers come from the cassette only; no
      connection is opened. The cassette directory must exist.
    - ``--record --cassette DIR``: live requests, every response recorded.
    - ``--cassette DIR`` alone: live requests through the cassette wrapper
      without recording.
    - no cassette: live requests.

The entities file is a CSV with ``slug,name,population,host`` columns, or a
JSON snapshot whose entities are re-collected. Failed cells never fail the
command; they are listed on the error stream and stored as Missing.

Classes:
    CollectCommand: Command implementation of snapshot collection.

Dependencies:
    - business_logic.services.collector_service.CollectorService: Collection
    - persistence.cassette: Record/replay transport
    - persistence.transport.HttpTransport: Live HTTP and TCP probing

Example:
    >>> CollectCommand().execute(RunConfig(
    ...     input_path=Path("entities.csv"), sources_path=Path("sources.json"),
    ...     cassette_dir=Path("cassettes/2013"), cassette_mode=CassetteMode.REPLAY,
    ...     output_path=Path("snapshot.json"), format=DataFormat.JSON))
    ✅ Collected 3 entities x 16 indicators (0 issues)
    🔑 snapshot sha256=4be1...
"""

import logging
from typing import Union

from business_logic.base.command import Command
from business_logic.dataset_store_manager import store
from business_logic.services.collector_service import CollectorService
from business_logic.services.indicator_service import IndicatorService
from persistence.cassette import Cassette, CassetteTransport
from persistence.errors import UsageError, WebReputationError
from persistence.models import CassetteMode, DataFormat, EntityRecord, RunConfig, Snapshot
from persistence.transport import HttpTransport, Transport

logger = logging.getLogger(__name__)


class CollectCommand(Command):
    """
    Command building a snapshot from web sources.

    Return Value Patterns:
        - (True, Snapshot): the collected snapshot, already written
        - (False, UsageError): bad cassette flags or inputs
        - (False, WebReputationError): unreadable inputs or unwritable output
    """

    def execute(self, config: RunConfig) -> tuple[bool, Union[Snapshot, WebReputationError]]:
        try:
            transport = self.build_transport(config)
            indicator_set = self.indicator_set(config)
            entities = self._entities(config)
            sources = store.load_sources(config.sources_path) if config.sources_path else []
            plan = config.probe_plan() if config.probe_enabled else None

            report = CollectorService.collect_with_report(
                entities,
                sources,
                plan,
                transport,
                indicator_set=indicator_set,
                parallelism=config.parallelism,
                label=config.label,
            )
            for issue in report.issues:
                self.status(
                    f"⚠️  {issue.slug}/{issue.indicator_id} ({issue.source_id}): {issue.reason}"
                )

            snapshot = report.snapshot
            store.save_snapshot(snapshot, config.output_path, config.format)
            self.status(
                f"✅ Collected {len(snapshot.entities)} entities x {indicator_set.K} indicators "
                f"({len(report.issues)} issues)"
            )
            self.status(f"🔑 snapshot sha256={IndicatorService.snapshot_hash(snapshot)}")
            return True, snapshot
        except WebReputationError as e:
            return False, e

    @staticmethod
    def build_transport(config: RunConfig) -> Transport:
        """
        Choose the transport for the configured cassette mode.

        Raises:
            UsageError: If ``--record``/``--replay`` is given without
                ``--cassette``, or the replay cassette does not exist.
        """
        if config.cassette_dir is None:
            if config.cassette_mode != CassetteMode.PASSTHROUGH:
                raise UsageError(f"--{config.cassette_mode.value} needs --cassette DIR")
            return HttpTransport()

        if config.cassette_mode == CassetteMode.REPLAY:
            if not config.cassette_dir.is_dir():
                raise UsageError(f"cassette directory {config.cassette_dir} does not exist")
            logger.info("replaying cassette %s", config.cassette_dir)
            return CassetteTransport(Cassette(config.cassette_dir), CassetteMode.REPLAY)
        return CassetteTransport(Cassette(config.cassette_dir), config.cassette_mode, HttpTransport())

    def _entities(self, config: RunConfig) -> tuple[EntityRecord, ...]:
        if config.input_path is None:
            raise UsageError("--input is required")
        entities_format = DataFormat.JSON if config.input_path.suffix.lower() == ".json" else DataFormat.CSV
        snapshot = store.load_snapshot(config.input_path, entities_format, self.indicator_set(config))
        return snapshot.entities
