"""Annular link states, affine connectivity diagrams, and their product.

Conventions, fixed once and used by every module:

* Nodes are 0-indexed internally; the seam (the cut realizing the periodic
  boundary) sits between node n-1 and node 0.  The CLI maps to the 1-based
  labels of the literature, where e_0 is the generator wrapping the seam.
* Curves are tracked in the universal cover: node i lifts to integer
  position i, and position p + n is one full turn to the right.  An arc
  {i, j} with i < j either stays in the window (no seam crossing) or
  connects i to j - n (one crossing); wider lifts would self-intersect.
* A through-line crossing the seam leftward while traversed downward
  counts +1; rightward counts -1.  Seam copies live at positions k n - 1/2,
  so the signed crossing count of a monotone descent from cover position a
  to b is f(a) - f(b) with f(x) = floor((2x+1)/(2n)).
* A diagram is stored in sandwich normal form (bottom state, mid, top
  state).  For d > 0, mid is the defect-index shift: bottom defect a
  attaches to top defect a + mid in the cover, so the translation generator
  Omega has mid = +1.  For d = 0, mid counts non-contractible loops.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

DEFECT = None  # node descriptor for a defect; arcs are (partner, crosses)


class LinkState:
    """An annular link state: n nodes, each a defect or one end of an arc."""

    __slots__ = ("n", "nodes", "defects", "cover", "n_crossing", "_hash")

    def __init__(self, nodes, validate=True):
        nodes = tuple(tuple(x) if isinstance(x, list) else x for x in nodes)
        object.__setattr__(self, "n", len(nodes))
        object.__setattr__(self, "nodes", nodes)
        n = self.n
        defects = []
        cover = [None] * n
        crossing = 0
        for i, desc in enumerate(nodes):
            if desc is DEFECT:
                defects.append(i)
                continue
            j, crosses = desc
            if not crosses:
                cover[i] = j
            else:
                cover[i] = j - n if i < j else j + n
                crossing += 1
        object.__setattr__(self, "defects", tuple(defects))
        object.__setattr__(self, "cover", tuple(cover))
        object.__setattr__(self, "n_crossing", crossing // 2)
        object.__setattr__(self, "_hash", hash((n, nodes)))
        if validate:
            self._validate()

    def _validate(self):
        n, nodes = self.n, self.nodes
        for i, desc in enumerate(nodes):
            if desc is DEFECT:
                continue
            j, crosses = desc
            if not 0 <= j < n or j == i:
                raise ValueError(f"bad partner {j} at node {i}")
            back = nodes[j]
            if back is DEFECT or back[0] != i or back[1] != crosses:
                raise ValueError(f"pairing not involutive at node {i}")
        if not self._planar():
            raise ValueError("link state is not planar on the annulus")

    def _planar(self):
        """Noncrossing in the cover; no defect is overarched."""
        n = self.n
        lifts = []
        for i, j, crosses in self.arcs():
            lifts.append((j - n, i) if crosses else (i, j))
        for (a1, b1), (a2, b2) in itertools.combinations(lifts, 2):
            for k in (-n, 0, n):
                a, b = a2 + k, b2 + k
                if (a1 < a < b1) != (a1 < b < b1):
                    return False
        for p in self.defects:
            for a, b in lifts:
                for k in (-n, 0, n):
                    if a < p + k < b:
                        return False
        return True

    @property
    def d(self) -> int:
        return len(self.defects)

    def arcs(self):
        """Each arc once, as (i, j, crosses) with i < j."""
        out = []
        for i, desc in enumerate(self.nodes):
            if desc is not DEFECT and i < desc[0]:
                out.append((i, desc[0], desc[1]))
        return out

    def crossing_count(self) -> int:
        return self.n_crossing

    def sort_key(self):
        return tuple((0, 0, 0) if x is DEFECT else (1, x[0], int(x[1]))
                     for x in self.nodes)

    def __eq__(self, other):
        return isinstance(other, LinkState) and self.nodes == other.nodes

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"LinkState({self.art()!r})"

    def art(self) -> str:
        """One-character glyph per node: | defect, ( ) plain arc, < > seam arc."""
        out = []
        for i, desc in enumerate(self.nodes):
            if desc is DEFECT:
                out.append("|")
            else:
                j, crosses = desc
                if crosses:
                    out.append("<" if i < j else ">")
                else:
                    out.append("(" if i < j else ")")
        return "".join(out)

    def to_json(self):
        return [("D" if x is DEFECT else {"p": x[0], "seam": bool(x[1])})
                for x in self.nodes]

    @staticmethod
    def from_json(entries):
        nodes = [DEFECT if e == "D" else (e["p"], bool(e["seam"]))
                 for e in entries]
        return LinkState(nodes)


def parity(v: LinkState) -> int:
    """The literature convention, kept verbatim: 0 for an odd number of
    seam-crossing arcs, 1 for an even number (inverted vs. the natural
    indicator)."""
    return 1 - (v.crossing_count() % 2)


def sigma_bt(b: LinkState, t: LinkState) -> int:
    """0 when b and t have equal parity, 1 otherwise."""
    return (b.crossing_count() + t.crossing_count()) % 2


@lru_cache(maxsize=None)
def all_defect(n: int) -> LinkState:
    return LinkState((DEFECT,) * n, validate=False)


@lru_cache(maxsize=None)
def link_states(n: int, d: int):
    """All of B_{n,d}, ordered lexicographically on node descriptors."""
    if d < 0 or d > n or (n - d) % 2:
        raise ValueError(f"no link states with n={n}, d={d}")
    out = []

    def recurse(nodes, free):
        if not free:
            try:
                out.append(LinkState(nodes))
            except ValueError:
                pass
            return
        i = free[0]
        rest = free[1:]
        for pick in range(len(rest)):
            j = rest[pick]
            remaining = rest[:pick] + rest[pick + 1:]
            for crosses in (False, True):
                nxt = list(nodes)
                nxt[i] = (j, crosses)
                nxt[j] = (i, crosses)
                recurse(nxt, remaining)

    for defect_set in itertools.combinations(range(n), d):
        nodes = [DEFECT] * n
        free = tuple(i for i in range(n) if i not in defect_set)
        recurse(nodes, free)
    out.sort(key=LinkState.sort_key)
    return tuple(out)


class Diagram:
    """An affine connectivity in sandwich normal form."""

    __slots__ = ("n", "bottom", "top", "mid", "even", "_hash")

    def __init__(self, bottom: LinkState, top: LinkState, mid: int):
        if bottom.n != top.n:
            raise ValueError("bottom/top size mismatch")
        if bottom.d != top.d:
            raise ValueError("bottom/top defect count mismatch")
        if bottom.d == 0 and mid < 0:
            raise ValueError("loop count must be nonnegative")
        object.__setattr__(self, "n", bottom.n)
        object.__setattr__(self, "bottom", bottom)
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "mid", mid)
        object.__setattr__(
            self, "even",
            (bottom.n_crossing + top.n_crossing + mid) % 2 == 0)
        object.__setattr__(self, "_hash", hash((bottom, top, mid)))

    @property
    def d(self) -> int:
        return self.bottom.d

    def is_even(self) -> bool:
        """Even = an even number of seam crossings in total."""
        return self.even

    def sort_key(self):
        return (-self.d, self.bottom.sort_key(), self.top.sort_key(), self.mid)

    def __eq__(self, other):
        return (isinstance(other, Diagram) and self.mid == other.mid
                and self.bottom == other.bottom and self.top == other.top)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Diagram({self.bottom.art()!r}, mid={self.mid}, {self.top.art()!r})"

    def art(self) -> str:
        label = f"f^{self.mid}" if self.d == 0 else f"O^{self.mid}"
        return f"top: {self.top.art()}  mid: {label}  bot: {self.bottom.art()}"

    def to_json(self):
        return {"n": self.n, "d": self.d, "bottom": self.bottom.to_json(),
                "top": self.top.to_json(), "mid": self.mid}

    @staticmethod
    def from_json(obj):
        return Diagram(LinkState.from_json(obj["bottom"]),
                       LinkState.from_json(obj["top"]), obj["mid"])


def recanonicalize(c: Diagram) -> Diagram:
    """Rebuild through the validating constructors; the identity on canonical
    diagrams."""
    return Diagram(LinkState(c.bottom.nodes), LinkState(c.top.nodes), c.mid)


def flip(c: Diagram) -> Diagram:
    """The vertical flip (anti-involution): swap faces, negate the winding."""
    mid = -c.mid if c.d > 0 else c.mid
    return Diagram(c.top, c.bottom, mid)


# -- generators --------------------------------------------------------------

def identity(n: int) -> Diagram:
    a = all_defect(n)
    return Diagram(a, a, 0)


def omega(n: int, power: int = 1) -> Diagram:
    a = all_defect(n)
    return Diagram(a, a, power)


def omega_inv(n: int) -> Diagram:
    return omega(n, -1)


def e(n: int, j: int) -> Diagram:
    """The Temperley-Lieb generator e_j, 0 <= j <= n-1 in the usual 1-based
    labels; e_0 is the one wrapping the seam."""
    if n < 2 or not 0 <= j <= n - 1:
        raise ValueError(f"e_{j} undefined for n={n}")
    nodes = [DEFECT] * n
    if j == 0:
        nodes[n - 1] = (0, True)
        nodes[0] = (n - 1, True)
    else:
        nodes[j - 1] = (j, False)
        nodes[j] = (j - 1, False)
    v = LinkState(nodes, validate=False)
    return Diagram(v, v, 0)


def generator(n: int, name: str) -> Diagram:
    """Dispatcher used by the CLI: 'id', 'omega', 'omega_inv', or 'e3'."""
    if name == "id":
        return identity(n)
    if name == "omega":
        return omega(n)
    if name == "omega_inv":
        return omega_inv(n)
    if name.startswith("e"):
        return e(n, int(name[1:]))
    raise ValueError(f"unknown generator {name!r}")


# -- tracing -----------------------------------------------------------------

_state_pool: dict = {}
_diagram_pool: dict = {}


def _intern_state(nodes: tuple) -> LinkState:
    """Interned construction for traced (pre-validated) states."""
    st = _state_pool.get(nodes)
    if st is None:
        st = _state_pool[nodes] = LinkState(nodes, validate=False)
    return st


def intern_diagram(bottom: LinkState, top: LinkState, mid: int) -> Diagram:
    key = (bottom, top, mid)
    d = _diagram_pool.get(key)
    if d is None:
        d = _diagram_pool[key] = Diagram(bottom, top, mid)
    return d


# Port ids: bottom node i -> i, top node i -> n + i.  A wire entry maps a
# port to (target port id, cover position of the target when the source sits
# in the principal copy).

@lru_cache(maxsize=1 << 17)
def _wires(c: Diagram):
    n = c.n
    tgt = [0] * (2 * n)
    pos = [0] * (2 * n)
    for i, cv in enumerate(c.bottom.cover):
        if cv is not None:
            tgt[i] = cv % n
            pos[i] = cv
    for i, cv in enumerate(c.top.cover):
        if cv is not None:
            tgt[n + i] = n + cv % n
            pos[n + i] = cv
    d = c.d
    if d:
        db, dt = c.bottom.defects, c.top.defects
        for a, p in enumerate(db):
            t = a + c.mid
            tpos = dt[t % d] + n * (t // d)
            tgt[p] = n + tpos % n
            pos[p] = tpos
        for b, p in enumerate(dt):
            a = b - c.mid
            bpos = db[a % d] + n * (a // d)
            tgt[n + p] = bpos % n
            pos[n + p] = bpos
    return tuple(tgt), tuple(pos)


def _cross_count(x: int, n: int) -> int:
    """Number of seam copies at or left of cover position x."""
    return (2 * x + 1) // (2 * n)


def multiply_raw(c1: Diagram, c2: Diagram):
    """Stack c2 over c1 and trace every curve in the universal cover.

    Returns (canonical Diagram, beta_exp, nc_gained): the number of
    contractible loops erased and of new non-contractible loops formed.
    For a d = 0 result the returned diagram's mid already includes both the
    inherited and the newly gained non-contractible loops.
    """
    n = c1.n
    if n != c2.n:
        raise ValueError("size mismatch")
    t1, p1 = _wires(c1)
    t2, p2 = _wires(c2)

    bot = [None] * n     # base bottom node -> partner cover position
    topp = [None] * n
    through = [None] * n  # base bottom node -> top cover position
    seen = bytearray(n)   # interface base nodes consumed
    top_used = bytearray(n)

    d_new = 0
    for i in range(n):
        if bot[i] is not None:
            continue
        # walk from c1's bottom port i until leaving through an outer face
        layer, port, shift = 0, i, 0
        while True:
            if layer == 0:
                t = t1[port]
                p = p1[port] + shift
                if t >= n:               # c1 top: cross the interface up
                    base = t - n
                    seen[base] = 1
                    layer, port, shift = 1, base, p - base
                    continue
                bot[i] = p
                bot[t] = i + (t - p)
                break
            t = t2[port]
            p = p2[port] + shift
            if t < n:                    # c2 bottom: cross down
                seen[t] = 1
                layer, port, shift = 0, n + t, p - t
                continue
            through[i] = p
            top_used[t - n] = 1          # consumed by a through-line
            d_new += 1
            break

    for i in range(n):
        if top_used[i] or topp[i] is not None:
            continue
        layer, port, shift = 1, n + i, 0
        while True:
            if layer == 1:
                t = t2[port]
                p = p2[port] + shift
                if t < n:
                    seen[t] = 1
                    layer, port, shift = 0, n + t, p - t
                    continue
                base = t - n
                topp[i] = p
                topp[base] = i + (base - p)
                break
            t = t1[port]
            p = p1[port] + shift
            if t < n:
                raise AssertionError("top trace escaped through the bottom")
            base = t - n
            seen[base] = 1
            layer, port, shift = 1, base, p - base

    beta_exp = 0
    nc_gained = 0
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = 1
        layer, pos = 1, start
        while True:
            base = pos % n
            off = pos - base
            if layer == 1:
                t = t2[base]
                p = p2[base] + off
            else:
                t = t1[n + base] - n
                p = p1[n + base] + off
            seen[t] = 1
            if t == start:
                delta = p - start
                break
            pos, layer = p, 1 - layer
        if delta == 0:
            beta_exp += 1
        else:
            if delta != n and delta != -n:
                raise AssertionError("loop with |winding| > 1")
            nc_gained += 1

    bnodes = [DEFECT] * n
    tnodes = [DEFECT] * n
    for i in range(n):
        x = bot[i]
        if x is not None:
            j = x % n
            bnodes[i] = (j, j != x)
        x = topp[i]
        if x is not None:
            j = x % n
            tnodes[i] = (j, j != x)
    bottom = _intern_state(tuple(bnodes))
    top = _intern_state(tuple(tnodes))
    if d_new:
        index_of = {p: a for a, p in enumerate(top.defects)}
        mid = None
        for a, pb in enumerate(bottom.defects):
            x = through[pb]
            r = index_of[x % n] + d_new * (x // n) - a
            if mid is None:
                mid = r
            elif mid != r:
                raise AssertionError("through-lines with unequal winding")
        result = intern_diagram(bottom, top, mid)
    else:
        inherited = (c1.mid if c1.d == 0 else 0) + (c2.mid if c2.d == 0 else 0)
        result = intern_diagram(bottom, top, inherited + nc_gained)
    return result, beta_exp, nc_gained


def act_on_state(c: Diagram, w: LinkState):
    """Draw the link state w above the diagram c and read off the bottom.

    Returns (beta_exp, nc_count, z_exp, new LinkState), or None when two
    defects of w are joined.  z_exp counts seam crossings of the defects,
    leftward-downward positive; nc loops can only arise for d = 0.
    """
    if c.n != w.n:
        raise ValueError("size mismatch")
    n = c.n
    t1, p1 = _wires(c)
    wc = w.cover

    new_nodes = [DEFECT] * n
    new_defect_of = {}
    z_exp = 0
    used_top = set()

    def descend(port, shift):
        # Walk downward through c / the arcs of w from a c-top port.
        # Returns ('B', pos) or ('D', base) when hitting a defect of w.
        while True:
            t, p = t1[port], p1[port] + shift
            if t < n:
                return "B", p
            base = t - n
            used_top.add(base)
            up = wc[base]
            if up is None:
                return "D", base
            part = up + (p - base)
            b2 = part % n
            used_top.add(b2)
            port, shift = n + b2, part - b2

    for di, p in enumerate(w.defects):
        used_top.add(p)
        kind, out = descend(n + p, 0)
        if kind == "D":
            return None
        new_defect_of[out % n] = di
        z_exp += _cross_count(p, n) - _cross_count(out, n)

    bot_pair = {}
    for i in range(n):
        if i in new_defect_of or i in bot_pair:
            continue
        t, p = t1[i], p1[i]
        if t < n:
            bot_pair[i] = p
            bot_pair[t] = i + (t - p)
            continue
        base = t - n
        used_top.add(base)
        up = wc[base]
        if up is None:
            raise AssertionError("defect path revisited")
        part = up + (p - base)
        b2 = part % n
        used_top.add(b2)
        kind, out = descend(n + b2, part - b2)
        if kind != "B":
            raise AssertionError("arc trace ended on a defect")
        bot_pair[i] = out
        bot_pair[out % n] = i + (out % n - out)

    beta_exp = 0
    nc = 0
    for start in range(n):
        if start in used_top:
            continue
        used_top.add(start)
        pos, layer = start, 1  # 1 = about to use w's arc, 0 = c's top arc
        while True:
            base = pos % n
            if layer == 1:
                up = wc[base]
                p = up + (pos - base)
            else:
                t, p0 = t1[n + base], p1[n + base]
                if t < n:
                    raise AssertionError("loop trace fell through")
                p = p0 + (pos - base)
            b2 = p % n
            used_top.add(b2)
            if b2 == start:
                delta = p - start
                break
            pos, layer = p, 1 - layer
        if delta == 0:
            beta_exp += 1
        else:
            if abs(delta) != n:
                raise AssertionError("loop with |winding| > 1")
            nc += 1

    for i, x in bot_pair.items():
        j = x % n
        new_nodes[i] = (j, j != x)
    state = _intern_state(tuple(new_nodes))
    return beta_exp, nc, z_exp, state
