"""Prefix expression language for points of a completion.

Grammar::

    expr  := NAME "(" expr ("," expr)* ")"      add, neg, sub, or an operation symbol
           | "embed:" LITERAL                   a base element
           | "sqrt:" Q | "bisect-sqrt:" Q       square roots over q-abs
           | "padic-sqrt:" Q "@" P              square root in q-padic:P
           | "geom:" R                          1 + R + R^2 + ...
           | LITERAL                            same as embed:LITERAL

Literal syntax is the instance's own (``3/2``, ``e1``, ``[[1,0],[0,1]]``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .completion import CompletedElement, comp_add, comp_apply_op, comp_neg, comp_sub, embed
from .constructions import babylonian_sqrt, bisection_sqrt, geometric_series, hensel_sqrt
from .core import OmegaGroup

__all__ = ["ExpressionError", "Node", "parse_expression", "evaluate", "evaluate_text"]

NAMED = ("sqrt", "bisect-sqrt", "padic-sqrt", "geom", "embed")
_NAME_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-")


class ExpressionError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    kind: str  # "apply", "named" or "literal"
    value: str
    children: tuple = ()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise ExpressionError("%s at position %d in %r" % (message, self.pos, self.text))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def raw_argument(self) -> str:
        """Text up to the next top-level ',' or ')'."""
        start, depth = self.pos, 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in "[{":
                depth += 1
            elif ch in "]}":
                depth -= 1
            elif ch in ",)" and depth == 0:
                break
            self.pos += 1
        raw = self.text[start:self.pos].strip()
        if not raw:
            self.error("empty argument")
        return raw

    def expr(self) -> Node:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in _NAME_CHARS:
            self.pos += 1
        name = self.text[start:self.pos]
        self.skip()
        nxt = self.text[self.pos] if self.pos < len(self.text) else ""
        if name and nxt == "(" and not name[0].isdigit() and name[0] != "-":
            self.pos += 1
            children = [self.expr()]
            self.skip()
            while self.pos < len(self.text) and self.text[self.pos] == ",":
                self.pos += 1
                children.append(self.expr())
                self.skip()
            if self.pos >= len(self.text) or self.text[self.pos] != ")":
                self.error("expected ')'")
            self.pos += 1
            return Node("apply", name, tuple(children))
        if name in NAMED and nxt == ":":
            self.pos += 1
            return Node("named", name, (Node("literal", self.raw_argument()),))
        self.pos = start
        return Node("literal", self.raw_argument())

    def parse(self) -> Node:
        node = self.expr()
        self.skip()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")
        return node


def parse_expression(text: str) -> Node:
    return _Parser(text).parse()


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ExpressionError("not a rational: %r" % text) from None


def _literal(group: OmegaGroup, text: str):
    if group.parse is None:
        raise ExpressionError("%s has no literal syntax" % group.name)
    try:
        return group.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ExpressionError("bad %s literal %r: %s" % (group.name, text, exc)) from None


def _named(group: OmegaGroup, name: str, arg: str) -> CompletedElement:
    if name == "embed":
        return embed(group, _literal(group, arg))
    if name in ("sqrt", "bisect-sqrt"):
        if group.name != "q-abs":
            raise ExpressionError("%s:<q> is only defined over q-abs, not %s" % (name, group.name))
        build = babylonian_sqrt if name == "sqrt" else bisection_sqrt
        return CompletedElement(build(_rational(arg)))
    if name == "padic-sqrt":
        q, sep, p = arg.partition("@")
        if not sep:
            raise ExpressionError("padic-sqrt needs the form padic-sqrt:<q>@<p>")
        try:
            prime = int(p)
        except ValueError:
            raise ExpressionError("bad prime %r" % p) from None
        if group.name != "q-padic:%d" % prime:
            raise ExpressionError("padic-sqrt:%s is not an element of %s" % (arg, group.name))
        return CompletedElement(hensel_sqrt(_rational(q), prime))
    if name == "geom":
        return CompletedElement(geometric_series(group, _rational(arg)))
    raise ExpressionError("unknown named element %r" % name)


def evaluate(node: Node, group: OmegaGroup) -> CompletedElement:
    if node.kind == "literal":
        return embed(group, _literal(group, node.value))
    if node.kind == "named":
        return _named(group, node.value, node.children[0].value)
    args = [evaluate(child, group) for child in node.children]
    name, n = node.value, len(args)
    if name == "add" and n == 2:
        return comp_add(*args)
    if name == "sub" and n == 2:
        return comp_sub(*args)
    if name == "neg" and n == 1:
        return comp_neg(*args)
    if name in ("add", "sub", "neg"):
        raise ExpressionError("%s called with %d arguments" % (name, n))
    try:
        op = group.op(name)
    except KeyError:
        raise ExpressionError("%s has no operation %r" % (group.name, name)) from None
    if op.arity != n:
        raise ExpressionError("%s takes %d arguments, got %d" % (name, op.arity, n))
    return comp_apply_op(op, args)


def evaluate_text(text: str, group: OmegaGroup) -> CompletedElement:
    return evaluate(parse_expression(text), group)
