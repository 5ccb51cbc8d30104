"""
Text grammars for points, segments, group elements, series and windows, plus
the JSON descriptors for chains and couples.

    point      FiniteChain: g<i> or a declared label; ProductQZ: (<label>,<int>)
    segment    empty | all | suffix(<i>) | {<label>:none|all|tail(<int>), ...}
    group      0 | <rational>@<point> (+ <rational>@<point>)*
    series     0 | [<rational>*]t{<group>} (+ [<rational>*]t{<group>})*
    window     <int>:<int>

Whitespace between tokens is ignored. Every failure raises ParseError with the
0-based position of the offending character.
"""

import json
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional, Tuple, Union

from .chain import Chain, ChainPoint, FinalSegment, SliceState, ZWindow
from .couple import AsymptoticCouple, couple_from_shift, couple_from_table
from .errors import HahnFieldError, ParseError
from .group import GroupElement
from .series import Series

logger = logging.getLogger(__name__)

LABEL_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"[+-]?\d+")
_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")


class _Cursor:
    """A position in the text being parsed."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, literal: str) -> bool:
        self.skip()
        return self.text.startswith(literal, self.pos)

    def accept(self, literal: str) -> bool:
        if self.peek(literal):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.accept(literal):
            self.fail(f"expected {literal!r}")

    def match(self, pattern: "re.Pattern[str]", what: str) -> str:
        self.skip()
        found = pattern.match(self.text, self.pos)
        if found is None:
            self.fail(f"expected {what}")
        self.pos = found.end()
        return found.group(0)

    def finish(self) -> None:
        if not self.at_end():
            self.fail("unexpected trailing input")

    def fail(self, message: str, position: Optional[int] = None) -> NoReturn:
        raise ParseError(message, self.text, self.pos if position is None else position)


def _rational(cursor: _Cursor) -> Fraction:
    start = cursor.pos
    token = cursor.match(_RATIONAL, "a rational number")
    if "/" in token and int(token.split("/")[1]) == 0:
        cursor.fail("zero denominator", start)
    return Fraction(token)


def _point(cursor: _Cursor, chain: Chain) -> ChainPoint:
    cursor.skip()
    start = cursor.pos
    if chain.is_finite:
        label = cursor.match(LABEL_PATTERN, "a point")
        if label in chain.labels:
            return chain.point(label)
        found = re.fullmatch(r"g(\d+)", label)
        if found is None or int(found.group(1)) >= len(chain):
            cursor.fail(f"{label!r} is not a point of {chain}", start)
        return chain.point(int(found.group(1)))
    cursor.expect("(")
    label_start = cursor.pos
    label = cursor.match(LABEL_PATTERN, "a Q-label")
    if label not in chain.labels:
        cursor.fail(f"{label!r} is not a Q-label of {chain}", label_start)
    cursor.expect(",")
    n = int(cursor.match(_INT, "an integer coordinate"))
    cursor.expect(")")
    return chain.point(label, n)


def _group(cursor: _Cursor, chain: Chain) -> GroupElement:
    terms: Dict[ChainPoint, Fraction] = {}
    while True:
        coeff = _rational(cursor)
        if not terms and coeff == 0 and not cursor.peek("@"):
            return GroupElement.zero(chain)
        cursor.expect("@")
        point = _point(cursor, chain)
        terms[point] = terms.get(point, Fraction(0)) + coeff
        if not cursor.accept("+"):
            return GroupElement(chain, terms)


def _series(cursor: _Cursor, chain: Chain) -> Series:
    terms: Dict[GroupElement, Fraction] = {}
    while True:
        if cursor.peek("t{"):
            coeff = Fraction(1)
        else:
            coeff = _rational(cursor)
            if not terms and coeff == 0 and not cursor.peek("*"):
                return Series.zero(chain)
            cursor.expect("*")
        cursor.expect("t{")
        exponent = _group(cursor, chain)
        cursor.expect("}")
        terms[exponent] = terms.get(exponent, Fraction(0)) + coeff
        if not cursor.accept("+"):
            return Series(chain, terms)


def _slice_state(cursor: _Cursor) -> SliceState:
    if cursor.accept("none"):
        return SliceState.none()
    if cursor.accept("all"):
        return SliceState.all()
    if cursor.accept("tail"):
        cursor.expect("(")
        start = int(cursor.match(_INT, "a tail start"))
        cursor.expect(")")
        return SliceState.tail(start)
    cursor.fail("expected none, all or tail(<int>)")


def _segment(cursor: _Cursor, chain: Chain) -> FinalSegment:
    if cursor.accept("empty"):
        return FinalSegment.empty(chain)
    if cursor.accept("all"):
        return FinalSegment.full(chain)
    if chain.is_finite:
        cursor.expect("suffix")
        cursor.expect("(")
        cursor.skip()
        start_pos = cursor.pos
        start = int(cursor.match(_INT, "a start index"))
        cursor.expect(")")
        if not 0 <= start <= len(chain):
            cursor.fail(f"start {start} outside {chain}", start_pos)
        return FinalSegment.suffix(chain, start)
    cursor.expect("{")
    states: Dict[str, SliceState] = {}
    while True:
        cursor.skip()
        label_start = cursor.pos
        label = cursor.match(LABEL_PATTERN, "a Q-label")
        if label not in chain.labels:
            cursor.fail(f"{label!r} is not a Q-label of {chain}", label_start)
        if label in states:
            cursor.fail(f"slice {label} given twice", label_start)
        cursor.expect(":")
        states[label] = _slice_state(cursor)
        if not cursor.accept(","):
            break
    cursor.expect("}")
    try:
        return FinalSegment.from_slices(chain, states)
    except HahnFieldError as exc:
        cursor.fail(str(exc), 0)


def _whole(text: str, parse, *args):
    cursor = _Cursor(text)
    result = parse(cursor, *args)
    cursor.finish()
    return result


def parse_point(text: str, chain: Chain) -> ChainPoint:
    return _whole(text, _point, chain)


def parse_group_element(text: str, chain: Chain) -> GroupElement:
    return _whole(text, _group, chain)


def parse_series(text: str, chain: Chain) -> Series:
    return _whole(text, _series, chain)


def parse_segment(text: str, chain: Chain) -> FinalSegment:
    return _whole(text, _segment, chain)


def parse_window(text: str) -> ZWindow:
    cursor = _Cursor(text)
    lo = int(cursor.match(_INT, "the window start"))
    cursor.expect(":")
    cursor.skip()
    hi_pos = cursor.pos
    hi = int(cursor.match(_INT, "the window end"))
    cursor.finish()
    if lo > hi:
        cursor.fail(f"empty window {lo}:{hi}", hi_pos)
    return ZWindow(lo, hi)


def parse_labels(text: str) -> List[str]:
    """A comma-separated list of distinct labels, e.g. ``q1,q2,q3``."""
    cursor = _Cursor(text)
    labels: List[str] = []
    while True:
        cursor.skip()
        start = cursor.pos
        label = cursor.match(LABEL_PATTERN, "a label")
        if label in labels:
            cursor.fail(f"label {label} given twice", start)
        labels.append(label)
        if not cursor.accept(","):
            break
    cursor.finish()
    return labels


# -- JSON descriptors -----------------------------------------------------


def _descriptor_error(message: str, text: str) -> ParseError:
    return ParseError(message, text, 0)


def chain_from_dict(data: Any, text: str = "") -> Chain:
    """``{"kind": "product" | "finite", "labels": [...]}``."""
    if not isinstance(data, dict):
        raise _descriptor_error("a chain descriptor must be an object", text)
    kind = data.get("kind", "product")
    labels = data.get("labels")
    if not isinstance(labels, list) or not labels or not all(isinstance(x, str) for x in labels):
        raise _descriptor_error("chain labels must be a nonempty list of strings", text)
    for label in labels:
        if LABEL_PATTERN.fullmatch(label) is None:
            raise _descriptor_error(f"{label!r} is not a valid label", text)
    if len(set(labels)) != len(labels):
        raise _descriptor_error("chain labels must be distinct", text)
    if kind == "product":
        return Chain.product(labels)
    if kind == "finite":
        return Chain.finite(labels)
    raise _descriptor_error(f"unknown chain kind {kind!r}", text)


def couple_from_dict(data: Any, text: str = "") -> AsymptoticCouple:
    """
    ``{"chain": {...}, "offset": "<group>", "table": {"<point>": "<group>"}}``;
    offset defaults to 0 and the table is only allowed on finite chains.
    """
    if not isinstance(data, dict):
        raise _descriptor_error("a couple descriptor must be an object", text)
    chain = chain_from_dict(data.get("chain"), text)
    offset = parse_group_element(str(data.get("offset", "0")), chain)
    table = data.get("table")
    if table is None:
        return couple_from_shift(chain, offset)
    if not isinstance(table, dict):
        raise _descriptor_error("a class table must be an object", text)
    values = {parse_point(point, chain): parse_group_element(str(value), chain) for point, value in table.items()}
    try:
        return couple_from_table(chain, values, offset)
    except ValueError as exc:
        raise _descriptor_error(str(exc), text) from exc


def _load(source: Union[str, Path]) -> Tuple[Any, str]:
    text = Path(source).read_text()
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, text, exc.pos) from exc


def load_chain(source: Union[str, Path]) -> Chain:
    data, text = _load(source)
    if isinstance(data, dict) and "chain" in data:
        data = data["chain"]
    return chain_from_dict(data, text)


def load_couple(source: Union[str, Path]) -> AsymptoticCouple:
    data, text = _load(source)
    couple = couple_from_dict(data, text)
    logger.debug("loaded %r from %s", couple, source)
    return couple
