"""
Named extraction rules that turn a fetched response body into a value.

A SourceDescriptor names its rule and an optional argument:

    regex_number  first match of a regular expression (group 1 if present)
    css_number    text of the first element matching a CSS selector
    json_number   value at a dotted path in a JSON document (``data.0.count``)
    presence      True when a regular expression matches (or the body is non-empty)

Numbers may carry thousands separators (commas, spaces, non-breaking spaces)
and a trailing ``%``; both are dropped before parsing. Values that are not
finite (``nan``, ``inf``, ``1e999``) fail extraction.

Dependencies:
    - bs4.BeautifulSoup: HTML parsing for CSS selectors
    - soupsieve: Selector compilation when checking a rule argument
    - re, json: Pattern and JSON extraction

Example:
    >>> apply_rule("regex_number", "Backlinks: 80,400", r"Backlinks:\\s*([\\d,]+)")
    80400.0
    >>> apply_rule("presence", "<a href='https://facebook.com/itu'>", "facebook\\.com/")
    True
"""

import json
import math
import re
from typing import Callable, NamedTuple, Optional, Union

import soupsieve
from bs4 import BeautifulSoup

from persistence.errors import ExtractionError, UsageError

Extracted = Union[float, bool]
ExtractionRule = Callable[[str, Optional[str]], Extracted]
ArgumentCheck = Callable[[str], object]

_SEPARATORS = re.compile(r"[,\s]")


class _Registered(NamedTuple):
    rule: ExtractionRule
    requires_argument: bool
    check: Optional[ArgumentCheck]


_RULES: dict[str, _Registered] = {}


def register(
    name: str, requires_argument: bool = False, check: Optional[ArgumentCheck] = None
) -> Callable[[ExtractionRule], ExtractionRule]:
    """Register a rule; ``check`` compiles the argument and raises on a malformed one."""

    def decorator(rule: ExtractionRule) -> ExtractionRule:
        _RULES[name] = _Registered(rule, requires_argument, check)
        return rule

    return decorator


def rule_names() -> list[str]:
    return sorted(_RULES)


def _registered(name: str) -> _Registered:
    try:
        return _RULES[name]
    except KeyError:
        raise UsageError(
            f"unknown extraction rule '{name}'; known rules: {', '.join(rule_names())}"
        ) from None


def get_rule(name: str) -> ExtractionRule:
    return _registered(name).rule


def check_argument(name: str, argument: Optional[str]) -> None:
    """
    Reject an unknown rule, a missing required argument or an argument that
    does not compile (regular expression or CSS selector).

    Raises:
        UsageError: On any of the above.
    """
    registered = _registered(name)
    if not argument:
        if registered.requires_argument:
            raise UsageError(f"extraction rule '{name}' needs an argument")
        return
    if registered.check is None:
        return
    try:
        registered.check(argument)
    except (re.error, soupsieve.SelectorSyntaxError) as e:
        raise UsageError(f"extraction rule '{name}' cannot use {argument!r}: {e}") from e


def apply_rule(name: str, body: str, argument: Optional[str] = None) -> Extracted:
    return get_rule(name)(body, argument)


def _finite(value: float, text: object) -> float:
    if not math.isfinite(value):
        raise ExtractionError(f"{text!r} is not a finite number")
    return value


def parse_number(text: str) -> float:
    cleaned = _SEPARATORS.sub("", text.strip()).rstrip("%")
    try:
        value = float(cleaned)
    except ValueError:
        raise ExtractionError(f"cannot read a number from {text!r}") from None
    return _finite(value, text)


def _require(argument: Optional[str], rule: str) -> str:
    if not argument:
        raise UsageError(f"extraction rule '{rule}' needs an argument")
    return argument


@register("regex_number", requires_argument=True, check=re.compile)
def regex_number(body: str, argument: Optional[str]) -> float:
    match = re.search(_require(argument, "regex_number"), body)
    if match is None:
        raise ExtractionError(f"pattern {argument!r} not found")
    return parse_number(match.group(1) if match.groups() else match.group(0))


@register("css_number", requires_argument=True, check=soupsieve.compile)
def css_number(body: str, argument: Optional[str]) -> float:
    element = BeautifulSoup(body, "html.parser").select_one(_require(argument, "css_number"))
    if element is None:
        raise ExtractionError(f"selector {argument!r} matched nothing")
    return parse_number(element.get_text(strip=True))


@register("json_number", requires_argument=True)
def json_number(body: str, argument: Optional[str]) -> Extracted:
    try:
        node = json.loads(body)
    except json.JSONDecodeError as e:
        raise ExtractionError(f"response is not JSON: {e}") from e

    for key in _require(argument, "json_number").split("."):
        try:
            node = node[int(key)] if isinstance(node, list) else node[key]
        except (KeyError, IndexError, ValueError, TypeError):
            raise ExtractionError(f"path {argument!r} not found at '{key}'") from None

    if isinstance(node, bool):
        return node
    if isinstance(node, (int, float)):
        try:
            return _finite(float(node), node)
        except OverflowError:
            raise ExtractionError(f"{node!r} is not a finite number") from None
    if isinstance(node, str):
        return parse_number(node)
    raise ExtractionError(f"path {argument!r} holds {type(node).__name__}, not a number")


@register("presence", check=re.compile)
def presence(body: str, argument: Optional[str]) -> bool:
    if not argument:
        return bool(body.strip())
    return re.search(argument, body) is not None
