"""
Presentation layer option handling for the Web Reputation Index system.

This module provides the Option class that binds a command-line subcommand to
its business logic command and turns the command's ``(success, result)``
outcome into a process exit status. It is the only place where a failed
command becomes a printed error.

Classes:
    Option: A subcommand bound to its command.

Dependencies:
    - business_logic.base.command.Command: Commands implementing execute(config)
    - persistence.errors.WebReputationError: ``exit_code`` of a failure

Example:
    >>> option = Option("rank", RankCommand())
    >>> exit_code = option.choose(RunConfig(from_fixture=True, top=10))
"""

import logging
import sys

from business_logic.base.command import Command
from persistence.errors import WebReputationError
from persistence.models import RunConfig

logger = logging.getLogger(__name__)


class Option:
    """
    A subcommand bound to a business logic command.

    Commands print their own status lines; a successful run adds nothing.

    Attributes:
        name (str): Subcommand name as typed on the command line.
        command (Command): Command whose ``execute`` does the work.

    Exit Status:
        - 0 when the command succeeds, warnings included
        - ``error.exit_code`` for a WebReputationError (1 for I/O, 2 for usage
          and data errors)
        - 1 for anything unexpected, which is logged with its traceback
    """

    def __init__(self, name: str, command: Command) -> None:
        self.name = name
        self.command = command

    def choose(self, config: RunConfig) -> int:
        """
        Run the command for ``config`` and return the exit status.

        Args:
            config (RunConfig): Configuration built from the command line.

        Returns:
            int: Process exit status.
        """
        try:
            success, result = self.command.execute(config)
        except Exception:
            logger.exception("%s failed unexpectedly", self.name)
            print(f"❌ {self.name} failed unexpectedly (run with --verbose for details)", file=sys.stderr)
            return 1

        if not success:
            print(f"❌ Error: {result}", file=sys.stderr)
            return result.exit_code if isinstance(result, WebReputationError) else 1

        return 0

    def __str__(self) -> str:
        return self.name
