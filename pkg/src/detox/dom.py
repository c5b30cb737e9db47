"""Lenient HTML DOM: parsing, stable serialization, and a CSS selector subset.

The serializer is a fixed point of the parser: parsing serializer output and
re-serializing reproduces the bytes exactly. Document rewriting relies on
that property for idempotent filtering and byte-identical reinstatement.

Selectors support tag, ``#id``, ``.class``, ``[attr]``/``[attr=value]``,
plus descendant (space) and child (``>``) combinators.
"""

from __future__ import annotations

from functools import lru_cache
from html.parser import HTMLParser
from typing import Iterator

VOID_ELEMENTS = frozenset(
    {
        "area", "base", "br", "col", "embed", "hr", "img", "input",
        "link", "meta", "param", "source", "track", "wbr",
    }
)
RAW_TEXT_ELEMENTS = frozenset({"script", "style"})


class Node:
    __slots__ = ("parent",)

    def __init__(self) -> None:
        self.parent: Element | Document | None = None


class Text(Node):
    __slots__ = ("data",)

    def __init__(self, data: str) -> None:
        super().__init__()
        self.data = data

    def __repr__(self) -> str:
        return f"Text({self.data!r})"


class Comment(Node):
    __slots__ = ("data",)

    def __init__(self, data: str) -> None:
        super().__init__()
        self.data = data


class Declaration(Node):
    """Doctype or other <!...> declaration, kept verbatim."""

    __slots__ = ("data",)

    def __init__(self, data: str) -> None:
        super().__init__()
        self.data = data


class MarkedSection(Node):
    """A ``<![...]>`` section (CDATA, conditional, ...) as the parser saw it."""

    __slots__ = ("data",)

    def __init__(self, data: str) -> None:
        super().__init__()
        self.data = data


class ProcessingInstruction(Node):
    __slots__ = ("data",)

    def __init__(self, data: str) -> None:
        super().__init__()
        self.data = data


class Element(Node):
    __slots__ = ("tag", "attrs", "children")

    def __init__(self, tag: str, attrs: dict[str, str | None] | None = None) -> None:
        super().__init__()
        self.tag = tag
        self.attrs: dict[str, str | None] = attrs if attrs is not None else {}
        self.children: list[Node] = []

    def __repr__(self) -> str:
        return f"Element(<{self.tag}> attrs={self.attrs} children={len(self.children)})"

    def append(self, node: Node) -> None:
        node.parent = self
        self.children.append(node)

    def classes(self) -> list[str]:
        value = self.attrs.get("class")
        return value.split() if value else []


class Document(Node):
    __slots__ = ("children",)

    def __init__(self) -> None:
        super().__init__()
        self.children: list[Node] = []

    def append(self, node: Node) -> None:
        node.parent = self
        self.children.append(node)


class _TreeBuilder(HTMLParser):
    """Builds a tree, recovering from unclosed and stray end tags."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.document = Document()
        self._stack: list[Element] = []

    def _top(self) -> Element | Document:
        return self._stack[-1] if self._stack else self.document

    def _append(self, node: Node) -> None:
        parent = self._top()
        if isinstance(node, Text) and parent.children and isinstance(parent.children[-1], Text):
            parent.children[-1].data += node.data
            return
        parent.append(node)

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        element = Element(tag)
        for name, value in attrs:
            if name not in element.attrs:  # first occurrence wins
                element.attrs[name] = value
        self._append(element)
        if tag not in VOID_ELEMENTS:
            self._stack.append(element)

    def handle_startendtag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        element = Element(tag)
        for name, value in attrs:
            if name not in element.attrs:
                element.attrs[name] = value
        self._append(element)

    def handle_endtag(self, tag: str) -> None:
        for index in range(len(self._stack) - 1, -1, -1):
            if self._stack[index].tag == tag:
                del self._stack[index:]
                return
        # stray end tag: ignore

    def handle_data(self, data: str) -> None:
        if data:
            self._append(Text(data))

    def handle_comment(self, data: str) -> None:
        self._append(Comment(data))

    def handle_decl(self, decl: str) -> None:
        self._append(Declaration(decl))

    def unknown_decl(self, data: str) -> None:
        self._append(MarkedSection(data))

    def handle_pi(self, data: str) -> None:
        self._append(ProcessingInstruction(data))


def parse_html(html: str) -> Document:
    builder = _TreeBuilder()
    builder.feed(html)
    builder.close()
    return builder.document


def escape_text(data: str) -> str:
    return data.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def escape_attr(data: str) -> str:
    return (
        data.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def serialize(node: Node | Document) -> str:
    parts: list[str] = []
    _serialize_into(node, parts, raw=False)
    return "".join(parts)


class _MarkedSectionProbe(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.events: list[tuple[str, str]] = []

    def unknown_decl(self, data: str) -> None:
        self.events.append(("section", data))

    def handle_data(self, data: str) -> None:
        self.events.append(("data", data))

    def handle_comment(self, data: str) -> None:
        self.events.append(("comment", data))


@lru_cache(maxsize=256)
def _marked_section_markup(payload: str) -> str:
    # The stdlib parser strips a keyword-dependent closer (]]> vs ]>), so
    # verify the candidate round-trips to this exact payload before emitting.
    for closer in ("]]>", "]>"):
        candidate = f"<![{payload}{closer}"
        probe = _MarkedSectionProbe()
        probe.feed(candidate)
        probe.close()
        if probe.events == [("section", payload)]:
            return candidate
    return ""  # unstable payload from pathological markup: drop it


def _serialize_into(node: Node | Document, parts: list[str], raw: bool) -> None:
    if isinstance(node, Document):
        for child in node.children:
            _serialize_into(child, parts, raw=False)
    elif isinstance(node, Element):
        parts.append(f"<{node.tag}")
        for name, value in node.attrs.items():
            if value is None:
                parts.append(f" {name}")
            else:
                parts.append(f' {name}="{escape_attr(value)}"')
        parts.append(">")
        if node.tag in VOID_ELEMENTS:
            return
        child_raw = node.tag in RAW_TEXT_ELEMENTS
        for child in node.children:
            _serialize_into(child, parts, raw=child_raw)
        parts.append(f"</{node.tag}>")
    elif isinstance(node, Text):
        parts.append(node.data if raw else escape_text(node.data))
    elif isinstance(node, Comment):
        parts.append(f"<!--{node.data}-->")
    elif isinstance(node, Declaration):
        parts.append(f"<!{node.data}>")
    elif isinstance(node, MarkedSection):
        parts.append(_marked_section_markup(node.data))
    elif isinstance(node, ProcessingInstruction):
        parts.append(f"<?{node.data}>")
    else:  # pragma: no cover - node types are closed
        raise TypeError(f"cannot serialize {type(node).__name__}")


def text_content(node: Node | Document) -> str:
    """Depth-first text, skipping script/style, whitespace collapsed and trimmed."""
    parts: list[str] = []
    _collect_text(node, parts)
    return " ".join("".join(parts).split())


def _collect_text(node: Node | Document, parts: list[str]) -> None:
    if isinstance(node, Text):
        parts.append(node.data)
    elif isinstance(node, Element):
        if node.tag in RAW_TEXT_ELEMENTS:
            return
        for child in node.children:
            _collect_text(child, parts)
    elif isinstance(node, Document):
        for child in node.children:
            _collect_text(child, parts)


def iter_elements(node: Node | Document) -> Iterator[Element]:
    """All descendant elements in document order (excluding `node` itself)."""
    children = getattr(node, "children", None)
    if not children:
        return
    for child in children:
        if isinstance(child, Element):
            yield child
            yield from iter_elements(child)


def ancestors(node: Node) -> Iterator[Element]:
    current = node.parent
    while isinstance(current, Element):
        yield current
        current = current.parent


def replace_node(old: Node, new: Node) -> None:
    parent = old.parent
    if parent is None:
        raise ValueError("cannot replace a detached node")
    index = parent.children.index(old)
    parent.children[index] = new
    new.parent = parent
    old.parent = None


def replace_with_nodes(old: Node, new_nodes: list[Node]) -> None:
    parent = old.parent
    if parent is None:
        raise ValueError("cannot replace a detached node")
    index = parent.children.index(old)
    for node in new_nodes:
        node.parent = parent
    parent.children[index : index + 1] = new_nodes
    old.parent = None


# --- Selector subset -------------------------------------------------------


class SelectorError(ValueError):
    """Raised when a selector does not parse or uses unsupported syntax."""


class _Simple:
    __slots__ = ("kind", "name", "value")

    def __init__(self, kind: str, name: str | None = None, value: str | None = None) -> None:
        self.kind = kind  # tag | id | class | attr | universal
        self.name = name
        self.value = value

    def matches(self, element: Element) -> bool:
        if self.kind == "universal":
            return True
        if self.kind == "tag":
            return element.tag == self.name
        if self.kind == "id":
            return element.attrs.get("id") == self.name
        if self.kind == "class":
            return self.name in element.classes()
        # attr
        if self.name not in element.attrs:
            return False
        if self.value is None:
            return True
        return (element.attrs.get(self.name) or "") == self.value


class Selector:
    """Parsed complex selector: compounds joined by descendant/child combinators."""

    __slots__ = ("parts", "source")

    def __init__(self, parts: list[tuple[str | None, list[_Simple]]], source: str) -> None:
        self.parts = parts
        self.source = source

    def __repr__(self) -> str:
        return f"Selector({self.source!r})"

    def matches(self, element: Element) -> bool:
        return self._match_at(element, len(self.parts) - 1)

    def _match_at(self, element: Element, index: int) -> bool:
        combinator, compound = self.parts[index]
        if not all(simple.matches(element) for simple in compound):
            return False
        if index == 0:
            return True
        if combinator == ">":
            parent = element.parent
            return isinstance(parent, Element) and self._match_at(parent, index - 1)
        for ancestor in ancestors(element):
            if self._match_at(ancestor, index - 1):
                return True
        return False


_NAME_END = frozenset(" \t\n\r\f>.#[=]\"'")


class _SelectorScanner:
    def __init__(self, source: str) -> None:
        self.source = source
        self.pos = 0

    def error(self, message: str) -> SelectorError:
        return SelectorError(f"bad selector {self.source!r}: {message}")

    def eof(self) -> bool:
        return self.pos >= len(self.source)

    def peek(self) -> str:
        return self.source[self.pos] if self.pos < len(self.source) else ""

    def skip_ws(self) -> bool:
        start = self.pos
        while not self.eof() and self.source[self.pos] in " \t\n\r\f":
            self.pos += 1
        return self.pos > start

    def read_name(self) -> str:
        start = self.pos
        while not self.eof() and self.source[self.pos] not in _NAME_END:
            self.pos += 1
        if self.pos == start:
            raise self.error(f"expected a name at offset {start}")
        return self.source[start : self.pos]

    def read_attr_value(self) -> str:
        quote = self.peek()
        if quote in "\"'":
            self.pos += 1
            start = self.pos
            while not self.eof() and self.source[self.pos] != quote:
                self.pos += 1
            if self.eof():
                raise self.error("unterminated quoted attribute value")
            value = self.source[start : self.pos]
            self.pos += 1
            return value
        start = self.pos
        while not self.eof() and self.source[self.pos] not in " \t\n\r\f]":
            self.pos += 1
        return self.source[start : self.pos]


def parse_selector(source: str) -> Selector:
    scanner = _SelectorScanner(source.strip())
    if scanner.eof():
        raise SelectorError("empty selector")

    parts: list[tuple[str | None, list[_Simple]]] = []
    combinator: str | None = None
    while not scanner.eof():
        compound: list[_Simple] = []
        while not scanner.eof():
            char = scanner.peek()
            if char in " \t\n\r\f>":
                break
            if char == "*":
                scanner.pos += 1
                compound.append(_Simple("universal"))
            elif char == "#":
                scanner.pos += 1
                compound.append(_Simple("id", scanner.read_name()))
            elif char == ".":
                scanner.pos += 1
                compound.append(_Simple("class", scanner.read_name()))
            elif char == "[":
                scanner.pos += 1
                scanner.skip_ws()
                name = scanner.read_name().lower()
                scanner.skip_ws()
                if scanner.peek() == "=":
                    scanner.pos += 1
                    scanner.skip_ws()
                    value = scanner.read_attr_value()
                    scanner.skip_ws()
                    simple = _Simple("attr", name, value)
                else:
                    simple = _Simple("attr", name)
                if scanner.peek() != "]":
                    raise scanner.error("expected ']' in attribute selector")
                scanner.pos += 1
                compound.append(simple)
            else:
                compound.append(_Simple("tag", scanner.read_name().lower()))
        if not compound:
            raise scanner.error(f"expected a compound selector at offset {scanner.pos}")
        parts.append((combinator, compound))

        had_ws = scanner.skip_ws()
        if scanner.eof():
            break
        if scanner.peek() == ">":
            scanner.pos += 1
            scanner.skip_ws()
            if scanner.eof():
                raise scanner.error("dangling '>' combinator")
            combinator = ">"
        elif had_ws:
            combinator = " "
        else:
            raise scanner.error(f"unexpected character {scanner.peek()!r}")
    return Selector(parts, source)


def matches(element: Element, selector: Selector | str) -> bool:
    if isinstance(selector, str):
        selector = parse_selector(selector)
    return selector.matches(element)


def find_all(root: Node | Document, selector: Selector | str) -> list[Element]:
    if isinstance(selector, str):
        selector = parse_selector(selector)
    return [element for element in iter_elements(root) if selector.matches(element)]


def find_first(root: Node | Document, selector: Selector | str) -> Element | None:
    if isinstance(selector, str):
        selector = parse_selector(selector)
    for element in iter_elements(root):
        if selector.matches(element):
            return element
    return None
