"""Line-oriented replay-script format.

    # comment
    [meta text="..."]
    [config nmax=8 depth=4]
    [def name=U2 set=[0 0 0 0 0 / 2] & [0 1 0 1 0 / 0]]
    [query] set=$U2 offset=0 twist={0 0 0 0 0 / 0} shift=0
    [step kind=demazure alpha=3 expect=shift]
    [step kind=sommers chain=3,4,5 m=2 expect_offset=-4 expect_twist={1 2 2 2 1 / 0}]
    [step kind=koszul sub=[0 1 1 2 0 / 2] mode=conclude]
    [term j=1]
      ...steps...
      [conclude kind=vanish]
    [/term]
    [expect result=sequence]
    [expect_kernel set=[2 0 2 0 2 / 0] offset=-8 twist={2 3 4 3 2 / 2}]

Blocks ([term ...], [quotient]) attach to the step line immediately before
them.  A value runs to the next `key=` at bracket depth zero, so weights,
diagrams and set expressions need no quoting; free text uses "...".
"""

from __future__ import annotations

import re


class ScriptSyntaxError(Exception):
    pass


class Node:
    __slots__ = ("tag", "attrs", "blocks", "line")

    def __init__(self, tag, attrs, line):
        self.tag = tag
        self.attrs = attrs
        self.blocks = {}  # block key -> list[Node]
        self.line = line

    def __repr__(self):
        return f"<{self.tag} {self.attrs} line {self.line}>"


_KEY_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*=")


def _parse_attrs(text):
    """key=value pairs; a value extends to the next top-level `key=`."""
    positions = []
    depth = 0
    in_quote = False
    i = 0
    while i < len(text):
        ch = text[i]
        if in_quote:
            if ch == '"':
                in_quote = False
            i += 1
            continue
        if ch == '"':
            in_quote = True
            i += 1
            continue
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif depth == 0 and (ch.isalpha() or ch == "_"):
            m = _KEY_RE.match(text, i)
            if m and (i == 0 or text[i - 1].isspace()):
                positions.append((i, text[i:m.end() - 1], m.end()))
                i = m.end()
                continue
        i += 1
    attrs = {}
    for idx, (start, key, vstart) in enumerate(positions):
        vend = positions[idx + 1][0] if idx + 1 < len(positions) else len(text)
        value = text[vstart:vend].strip()
        if value.startswith('"') and value.endswith('"') and len(value) >= 2:
            value = value[1:-1]
        if key in attrs:
            prev = attrs[key]
            attrs[key] = (prev if isinstance(prev, list) else [prev]) + [value]
        else:
            attrs[key] = value
    return attrs


def parse_script(text):
    """Parse to a list of Nodes with nested term/quotient blocks resolved."""
    items = []
    stack = [items]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not line.startswith("["):
            raise ScriptSyntaxError(f"line {lineno}: expected a [...] directive")
        if line.startswith("[/"):
            if not re.fullmatch(r"\[/(term|quotient)\]", line) or len(stack) == 1:
                raise ScriptSyntaxError(f"line {lineno}: stray close {line!r}")
            stack.pop()
            continue
        m = re.match(r"\[\s*([a-z_0-9]+)\s*", line)
        if not m:
            raise ScriptSyntaxError(f"line {lineno}: cannot parse {line!r}")
        tag = m.group(1)
        rest = line[m.end():]
        if rest.startswith("]"):
            attr_text = rest[1:]
        else:
            close = rest.rfind("]")
            if close < 0:
                raise ScriptSyntaxError(f"line {lineno}: unterminated directive")
            attr_text = rest[:close] + " " + rest[close + 1:]
        attrs = _parse_attrs(attr_text.strip())
        if tag in ("term", "quotient"):
            if not stack[-1]:
                raise ScriptSyntaxError(f"line {lineno}: {tag} block has no owning step")
            owner = stack[-1][-1]
            if tag == "term":
                key = attrs.get("j")
                if key is None:
                    raise ScriptSyntaxError(f"line {lineno}: term needs j= (a number, f, or 0)")
            else:
                key = "quotient"
            if key in owner.blocks:
                raise ScriptSyntaxError(f"line {lineno}: duplicate block {key!r}")
            new_list = []
            owner.blocks[key] = new_list
            stack.append(new_list)
            continue
        stack[-1].append(Node(tag, attrs, lineno))
    if len(stack) != 1:
        raise ScriptSyntaxError("unclosed block at end of script")
    return items


def attr_int(node, key, default=None):
    v = node.attrs.get(key)
    if v is None:
        if default is None:
            raise ScriptSyntaxError(f"line {node.line}: missing {key}=")
        return default
    return int(v)


def attr_str(node, key, default=None):
    v = node.attrs.get(key)
    if v is None:
        if default is None:
            raise ScriptSyntaxError(f"line {node.line}: missing {key}=")
        return default
    return v


def attr_ids(node, key):
    """1-based comma list -> 0-based tuple."""
    v = attr_str(node, key)
    return tuple(int(x) - 1 for x in v.split(","))


def attr_groups(node, key):
    """1-based groups '1,2|4,5|6' -> ((0,1),(3,4),(5,))."""
    v = attr_str(node, key)
    return tuple(tuple(int(x) - 1 for x in g.split(",")) for g in v.split("|"))
