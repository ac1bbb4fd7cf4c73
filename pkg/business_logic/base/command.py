"""
Command Pattern base class for the Web Reputation Index system.

Every command-line operation (compute, rank, stats, collect, validate,
fixture) is a Command object. The presentation layer builds a RunConfig from
the command-line flags and hands it to ``execute``; the command performs the
operation and reports the outcome as a ``(success, result)`` tuple instead of
raising, so the caller only has to map a failure to an exit status.

Classes:
    Command: Abstract base class defining the command execution interface.

Dependencies:
    - abc.ABC, abc.abstractmethod: Interface definition
    - business_logic.dataset_store_manager.store: Shared file store
    - persistence.models.RunConfig: Per-run configuration

Implementation Guidelines:
    - Return ``(True, result)`` on success, ``(False, error)`` on failure
    - Catch WebReputationError inside ``execute``; its ``exit_code`` tells the
      caller how the process should end
    - Write status lines to the error stream and data to files or stdout

Example:
    >>> command = ComputeCommand()
    >>> success, result = command.execute(RunConfig(input_path=Path("universities.csv")))
    >>> if not success:
    ...     print(f"❌ {result}", file=sys.stderr)
    ...     sys.exit(result.exit_code)
"""

import sys
from abc import ABC, abstractmethod
from typing import Any, Optional

from business_logic.dataset_store_manager import store
from business_logic.services.indicator_service import IndicatorService
from persistence.appendix_fixture import fixture_results
from persistence.errors import UsageError
from persistence.models import IndexResult, IndicatorSet, RunConfig, SeriesStats, Snapshot


class Command(ABC):
    """
    Abstract base class of all command-line operations.

    Subclasses implement ``execute``. The helpers below cover the inputs
    several commands share: the indicator universe, a snapshot file, and a
    results file or the embedded appendix fixture.

    Return Value Convention:
        - (True, result): the operation completed; ``result`` is the
          domain object produced (PipelineResult, Ranking, SeriesStats, ...)
        - (False, error): ``error`` is the WebReputationError that stopped it
    """

    @abstractmethod
    def execute(self, config: RunConfig) -> tuple[bool, Any]:
        """
        Execute the command for one run configuration.

        Args:
            config (RunConfig): Flags and defaults for this run.

        Returns:
            tuple[bool, Any]: ``(success, result)``; see the class docstring.
        """
        raise NotImplementedError("You must implement this method")

    @staticmethod
    def status(message: str) -> None:
        """Write one status line to the error stream."""
        print(message, file=sys.stderr)

    @staticmethod
    def indicator_set(config: RunConfig) -> IndicatorSet:
        if config.indicators_path is not None:
            return store.load_indicator_set(config.indicators_path)
        return IndicatorService.build_default_indicator_set()

    @staticmethod
    def snapshot(config: RunConfig) -> Snapshot:
        if config.input_path is None:
            raise UsageError("--input is required")
        return store.load_snapshot(
            config.input_path,
            config.format,
            Command.indicator_set(config),
            label=config.label or None,
        )

    @staticmethod
    def results(config: RunConfig) -> tuple[list[IndexResult], Optional[SeriesStats]]:
        """Results from ``--input`` or, with ``--from-fixture``, the appendix table."""
        if config.from_fixture:
            return fixture_results(), None
        if config.input_path is None:
            raise UsageError("--input or --from-fixture is required")
        return store.load_results(config.input_path, config.format)
