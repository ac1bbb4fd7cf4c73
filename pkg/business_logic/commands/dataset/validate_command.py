"""
Validate Command for the Web Reputation Index system.

Loads a snapshot and prints every validation warning (missing values,
booleans of the wrong type, values outside their plausible bounds) as a
table. Warnings never fail the command; unparseable files do.

Classes:
    ValidateCommand: Command implementation of snapshot validation.
"""

from typing import Union

from business_logic.base.command import Command
from business_logic.dataset_store_manager import store
from business_logic.services.indicator_service import IndicatorService
from persistence.errors import WebReputationError
from persistence.models import RunConfig, ValidationWarning
from presentation.table_formatter import format_warnings_table


class ValidateCommand(Command):
    """
    Return Value Patterns:
        - (True, list[ValidationWarning]): possibly empty
        - (False, WebReputationError): parse, schema or non-finite value errors
    """

    def execute(self, config: RunConfig) -> tuple[bool, Union[list[ValidationWarning], WebReputationError]]:
        try:
            snapshot = self.snapshot(config)
            warnings = IndicatorService.validate_snapshot(snapshot)
            if warnings:
                store.write_report(format_warnings_table(warnings) + "\n", config.output_path)
                self.status(f"⚠️  {len(warnings)} warnings in {len(snapshot.entities)} entities")
            else:
                self.status(f"✅ {len(snapshot.entities)} entities, no warnings")
            return True, warnings
        except WebReputationError as e:
            return False, e
