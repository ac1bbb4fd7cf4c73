from .collect_command import CollectCommand
from .fixture_command import FixtureCommand
from .validate_command import ValidateCommand

__all__ = ["CollectCommand", "FixtureCommand", "ValidateCommand"]
