"""Line-oriented text formats and DOT export.

Split system files:

    # comment
    TAXA a b c d e
    SPLIT a b | c d e

Network files:

    TAXA a b c d
    VERTEX 0 a      # leaf carrying taxon a
    VERTEX 4        # internal vertex
    EDGE 0 4

Emitters are deterministic (canonical sorting throughout) so outputs can
serve as golden files; parsers reject malformed input with the offending
line number rather than repairing it.
"""

from __future__ import annotations

from typing import Iterable

from .buneman import BunemanGraph, gate
from .core import Split, SplitSystem, TaxaSet, indices_of
from .errors import ValidationError
from .network import Network, make_network


def _clean_lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_split_system(text: str) -> SplitSystem:
    taxa: TaxaSet | None = None
    sides: list[int] = []
    for lineno, line in _clean_lines(text):
        tokens = line.split()
        if tokens[0].upper() == "TAXA":
            if taxa is not None:
                raise ValidationError("line %d: duplicate TAXA line" % lineno)
            try:
                taxa = TaxaSet.of(tokens[1:])
            except ValidationError as exc:
                raise ValidationError("line %d: %s" % (lineno, exc)) from None
        elif tokens[0].upper() == "SPLIT":
            if taxa is None:
                raise ValidationError("line %d: SPLIT before TAXA" % lineno)
            body = line[len(tokens[0]):].strip()
            if body.count("|") != 1:
                raise ValidationError("line %d: a split needs exactly one '|'" % lineno)
            left, right = body.split("|")
            lmask = 0
            for name in left.split():
                lmask |= 1 << taxa.index(name)
            rmask = 0
            for name in right.split():
                rmask |= 1 << taxa.index(name)
            if lmask & rmask:
                raise ValidationError("line %d: split sides overlap" % lineno)
            if lmask | rmask != taxa.full_mask:
                raise ValidationError("line %d: split sides do not cover the taxa" % lineno)
            if lmask == 0 or rmask == 0:
                raise ValidationError("line %d: split side is empty" % lineno)
            sides.append(lmask)
        else:
            raise ValidationError("line %d: unknown directive %r" % (lineno, tokens[0]))
    if taxa is None:
        raise ValidationError("missing TAXA line")
    return SplitSystem.of(taxa, sides)


def emit_split_system(sigma: SplitSystem) -> str:
    lines = ["TAXA " + " ".join(sigma.taxa.names)]
    for s in sigma:
        lines.append("SPLIT " + s.format(sigma.taxa))
    return "\n".join(lines) + "\n"


def parse_network(text: str) -> Network:
    taxa: TaxaSet | None = None
    labels: dict[str, object] = {}
    declared: set[str] = set()
    edges: list[tuple[str, str]] = []
    for lineno, line in _clean_lines(text):
        tokens = line.split()
        head = tokens[0].upper()
        if head == "TAXA":
            if taxa is not None:
                raise ValidationError("line %d: duplicate TAXA line" % lineno)
            try:
                taxa = TaxaSet.of(tokens[1:])
            except ValidationError as exc:
                raise ValidationError("line %d: %s" % (lineno, exc)) from None
        elif head == "VERTEX":
            if taxa is None:
                raise ValidationError("line %d: VERTEX before TAXA" % lineno)
            if len(tokens) not in (2, 3):
                raise ValidationError("line %d: VERTEX takes an id and optional taxon" % lineno)
            vid = tokens[1]
            if vid in declared:
                raise ValidationError("line %d: duplicate vertex %r" % (lineno, vid))
            declared.add(vid)
            if len(tokens) == 3:
                labels[vid] = tokens[2]
        elif head == "EDGE":
            if len(tokens) != 3:
                raise ValidationError("line %d: EDGE takes two vertex ids" % lineno)
            if taxa is None:
                raise ValidationError("line %d: EDGE before TAXA" % lineno)
            for vid in tokens[1:]:
                if vid not in declared:
                    raise ValidationError("line %d: undeclared vertex %r" % (lineno, vid))
            if tokens[1] == tokens[2]:
                raise ValidationError("line %d: self-loop" % lineno)
            edges.append((tokens[1], tokens[2]))
        else:
            raise ValidationError("line %d: unknown directive %r" % (lineno, tokens[0]))
    if taxa is None:
        raise ValidationError("missing TAXA line")
    try:
        return make_network(taxa, edges, labels)
    except ValidationError:
        raise


def emit_network(net: Network) -> str:
    lines = ["TAXA " + " ".join(net.taxa.names)]
    for v in range(net.num_vertices):
        x = net.taxon_of_leaf.get(v)
        if x is None:
            lines.append("VERTEX %d" % v)
        else:
            lines.append("VERTEX %d %s" % (v, net.taxa.names[x]))
    for u, v in sorted(net.edges):
        lines.append("EDGE %d %d" % (u, v))
    return "\n".join(lines) + "\n"


def emit_buneman_text(g: BunemanGraph) -> str:
    """Readable listing of a Buneman graph (emit-only format).

    Vertices are the side-selection bitstrings over the canonical split
    order (lowest split index first); Kuratowski vertices carry their
    taxon name.
    """
    m = len(g.splits)
    lines = ["TAXA " + " ".join(g.system.taxa.names)]
    for i, s in enumerate(g.splits):
        lines.append("# split %d: %s" % (i, s.format(g.system.taxa)))
    kur = {mask: x for x, mask in enumerate(g.kuratowski_masks)}
    for i, mask in enumerate(g.vertices):
        bits = format(mask, "0%db" % m)[::-1]
        x = kur.get(mask)
        if x is None:
            lines.append("BVERTEX %d %s" % (i, bits))
        else:
            lines.append("BVERTEX %d %s %s" % (i, bits, g.system.taxa.names[x]))
    for u, v in sorted(g.edges):
        lines.append("BEDGE %d %d" % (u, v))
    return "\n".join(lines) + "\n"


def describe_marguerites(g: BunemanGraph) -> str:
    """Text report of every marguerite: order, vertex counts, identities."""
    from .buneman import marguerite

    taxa = g.system.taxa
    chunks = []
    found = False
    for ci, comp in enumerate(g.components):
        if len(comp) < 2:
            continue
        found = True
        marg = marguerite(g, comp)
        lines = ["MARGUERITE k=%d" % marg.k]
        lines.append(
            "  classes: " + " / ".join(" ".join(taxa.names_of(c)) for c in marg.classes)
        )
        lines.append(
            "  vertices: %d external-path + %d inner = %d"
            % (
                len(set(marg.phi.values())),
                len(set(marg.psi.values())),
                len(marg.vertex_set()),
            )
        )
        for (a, b) in marg.psi_identities:
            lines.append("  inner identity: psi[%d,%d] = psi[%d,%d]" % (*a, *b))
        chunks.append("\n".join(lines))
    if not found:
        return "no marguerites: every block is a cut-edge\n"
    return "\n".join(chunks) + "\n"


def describe_embedding(emb) -> str:
    """Text report of a network embedding into its Buneman graph."""
    g = emb.graph
    m = len(g.splits)
    lines = ["EMBEDDING of %d network vertices" % len(emb.vertex_image)]
    for v in sorted(emb.vertex_image):
        mask = emb.vertex_image[v]
        tag = ""
        x = emb.network.taxon_of_leaf.get(v)
        if x is not None:
            tag = " " + emb.network.taxa.names[x]
        lines.append("XI %d %s%s" % (v, format(mask, "0%db" % m)[::-1], tag))
    for (u, v), path in sorted(emb.edge_paths.items()):
        lines.append(
            "PATH %d %d : %s" % (u, v, " ".join(format(p, "0%db" % m)[::-1] for p in path))
        )
    return "\n".join(lines) + "\n"


def emit_dot(obj: Network | BunemanGraph) -> str:
    if isinstance(obj, Network):
        return _network_dot(obj)
    if isinstance(obj, BunemanGraph):
        return _buneman_dot(obj)
    raise ValidationError("DOT export supports networks and Buneman graphs")


def _network_dot(net: Network) -> str:
    lines = ["graph splitnest {", "  node [shape=point];"]
    for v in range(net.num_vertices):
        x = net.taxon_of_leaf.get(v)
        if x is not None:
            lines.append('  v%d [shape=plaintext, label="%s"];' % (v, net.taxa.names[x]))
    cyc = net.all_cycle_edges
    for u, v in sorted(net.edges):
        style = " [penwidth=2, color=steelblue]" if (u, v) in cyc else ""
        lines.append("  v%d -- v%d%s;" % (u, v, style))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _buneman_dot(g: BunemanGraph) -> str:
    lines = ["graph splitnest_buneman {", "  node [shape=point];"]
    kur = {m: x for x, m in enumerate(g.kuratowski_masks)}
    # the external (gate) vertices of every multi-split block
    externals: set[int] = set()
    for comp in g.components:
        if len(comp) >= 2:
            for x in range(g.system.n):
                externals.add(gate(g, g.kuratowski_masks[x], comp))
    for i, m in enumerate(g.vertices):
        x = kur.get(m)
        if x is not None:
            lines.append('  v%d [shape=plaintext, label="%s"];' % (i, g.system.taxa.names[x]))
        elif m in externals:
            lines.append("  v%d [shape=circle, label=\"\", width=0.12, style=filled];" % i)
    for u, v in sorted(g.edges):
        lines.append("  v%d -- v%d;" % (u, v))
    lines.append("}")
    return "\n".join(lines) + "\n"
