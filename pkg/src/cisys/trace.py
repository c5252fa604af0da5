"""Structured trace of subalgorithm calls.

Each call produces a ``call`` event and, for calls that return a value, a
matching ``return`` event.  :meth:`Tracer.lines` renders them as

    → Name(args)
      ...nested calls...
    = result

with two spaces per nesting level; a call with nothing nested inside is
rendered on one line as ``→ Name(args) = result``.
"""

from dataclasses import dataclass, field

__all__ = ["TraceEvent", "Tracer"]


@dataclass
class TraceEvent:
    kind: str  # "call", "return" or "note"
    name: str
    depth: int
    text: str
    data: dict = field(default_factory=dict)


class Tracer:
    def __init__(self, format_state=None):
        self.events = []
        self.depth = 0
        self._stack = []
        self._format_state = format_state or (lambda s: "")

    def __bool__(self):
        return True

    def spec(self, state):
        return self._format_state(state)

    def call(self, name, args, depth=None, **data):
        """A call that never returns a value (its children nest under it)."""
        if depth is not None:
            self.depth = depth
        self.events.append(TraceEvent("call", name, self.depth, args, data))
        self.depth += 1

    def enter(self, name, args, **data):
        self.events.append(TraceEvent("call", name, self.depth, args, data))
        self._stack.append((name, self.depth))
        self.depth += 1

    def leave(self, result, kind=None, **data):
        name, depth = self._stack.pop()
        self.depth = depth
        self.events.append(TraceEvent("return", kind or name, depth, result, data))

    def note(self, text, **data):
        self.events.append(TraceEvent("note", data.pop("name", ""), self.depth, text, data))

    def lines(self):
        out = []
        ev = self.events
        i = 0
        while i < len(ev):
            e = ev[i]
            pad = "  " * e.depth
            if e.kind == "call":
                nxt = ev[i + 1] if i + 1 < len(ev) else None
                if nxt is not None and nxt.kind == "return" and nxt.depth == e.depth and nxt.name == e.name:
                    out.append(f"{pad}→ {e.name}({e.text}) = {nxt.text}")
                    i += 2
                    continue
                out.append(f"{pad}→ {e.name}({e.text})")
            elif e.kind == "return":
                out.append(f"{pad}= {e.text}")
            else:
                out.append(f"{pad}{e.text}")
            i += 1
        return out

    def render(self):
        return "\n".join(self.lines()) + "\n"
