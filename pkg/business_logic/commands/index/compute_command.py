"""
Compute Command for the Web Reputation Index system.

This module implements the ``compute`` operation: it loads a snapshot, runs
the full index pipeline (min-max normalization, polarity, WRI, population
normalization, final rescale) and writes the rank-ordered results together
with their descriptive statistics.

Non-nominal paths never fail the command. Degenerate indicators, WRI values
outside [0, 1] and zero-population substitutions are reported on the error
stream and the command still succeeds.

Classes:
    ComputeCommand: Command implementation of the index pipeline.

Dependencies:
    - business_logic.base.command.Command: Base command interface
    - business_logic.services: IndicatorService, WriService, RankingService
    - business_logic.dataset_store_manager.store: Results output
    - presentation.table_formatter.format_stats_line: Statistics summary

Example:
    >>> success, results = ComputeCommand().execute(
    ...     RunConfig(input_path=Path("universities.csv"), output_path=Path("results.csv"))
    ... )
    ✅ Computed the index of 170 entities (formula population mode)
    📊 mean=0.412305 max=1.000000 min=0.000000 std=0.231877 count=170 convention=population
"""

from typing import Union

from business_logic.base.command import Command
from business_logic.dataset_store_manager import store
from business_logic.services.indicator_service import IndicatorService
from business_logic.services.ranking_service import RankingService
from business_logic.services.wri_service import WriService
from persistence.appendix_fixture import fixture_results
from persistence.errors import WebReputationError
from persistence.models import IndexResult, PipelineResult, ResultFlag, RunConfig
from presentation.table_formatter import format_stats_line


class ComputeCommand(Command):
    """
    Command running the index pipeline over one snapshot.

    With ``--from-fixture`` the pipeline is skipped and the embedded appendix
    values pass straight through to the results file and statistics.

    Return Value Patterns:
        - (True, list[IndexResult]): results in rank order, already written
        - (False, WebReputationError): parse, schema, data or I/O failure
    """

    def execute(self, config: RunConfig) -> tuple[bool, Union[list[IndexResult], WebReputationError]]:
        """
        Execute the compute workflow.

        Workflow:
            1. Load and validate the snapshot (warnings are counted, not fatal)
            2. Run the pipeline in the configured population mode
            3. Report degenerate indicators and per-entity flags
            4. Optionally compare both population modes by Kendall's tau
            5. Write results and statistics; print the statistics line

        Args:
            config (RunConfig): Input/output paths, format, population mode,
                std convention and the ``from_fixture``/``compare_modes`` switches.
        """
        try:
            if config.from_fixture:
                ordered = RankingService.order(fixture_results())
                stats = WriService.descriptive_stats(
                    (result.final_index for result in ordered), config.std_convention
                )
                self.status(f"📋 Using the embedded appendix values ({len(ordered)} universities)")
            else:
                snapshot = self.snapshot(config)
                warnings = IndicatorService.validate_snapshot(snapshot)
                if warnings:
                    self.status(
                        f"⚠️  {len(warnings)} validation warnings (run 'validate' for details)"
                    )

                pipeline = WriService.run_pipeline(
                    snapshot, config.population_mode, config.std_convention
                )
                self._report_flags(pipeline)
                ordered = RankingService.order(pipeline.results)
                stats = pipeline.stats
                self.status(
                    f"✅ Computed the index of {len(ordered)} entities "
                    f"({config.population_mode.value} population mode)"
                )

                if config.compare_modes:
                    tau = WriService.compare_population_modes(snapshot, config.std_convention)
                    self.status(f"📊 Kendall tau between formula and text population modes: {tau:.6f}")

            store.save_results(ordered, stats, config.output_path, config.format)
            self.status(f"📊 {format_stats_line(stats)}")
            return True, ordered
        except WebReputationError as e:
            return False, e

    def _report_flags(self, pipeline: PipelineResult) -> None:
        if pipeline.degenerate_ids:
            self.status(
                f"⚠️  {ResultFlag.DEGENERATE_INDICATORS_EXCLUDED.value}: "
                f"{', '.join(pipeline.degenerate_ids)}"
            )
        for flag in (ResultFlag.WRI_OUT_OF_RANGE, ResultFlag.ZERO_POPULATION_GUARD):
            flagged = [result.slug for result in pipeline.results if flag in result.flags]
            if flagged:
                self.status(f"⚠️  {flag.value}: {len(flagged)} entities ({', '.join(flagged)})")
