"""Sliced planar diagrams, their evaluation, and cut-point manipulation.

A diagram is a bottom signature (ordered oriented strands) plus layers of
atoms read bottom to top; each layer's atoms consume the incoming strands
left to right.  An up strand colored M carries the coordinates of M, a down
strand the coordinates of the left dual of M.  The four cup/cap atoms are

    EvL(M):   (M,down),(M,up) -> .          f (x) m |-> f(m)
    CoevL(M): . -> (M,up),(M,down)          sum_i e_i (x) e^i
    EvR(M):   (M,up),(M,down) -> .          m (x) f |-> f(g m)
    CoevR(M): . -> (M,down),(M,up)          sum_i e^i (x) g^{-1} e_i

with g the pivot; the right pair is the one that closes strands through the
pivot (a CoevR/EvL circle evaluates to the trace of g^{-1} on the color,
which is the plain dimension exactly when g = 1, e.g. for group algebras).
Evaluation applies one atom at a time to a state matrix, so a layer's
Kronecker product is never materialized.
"""

from __future__ import annotations

from typing import Any, Iterable, Sequence

from hopfmod.hopf import HopfAlgebra
from hopfmod.linalg import Mat
from hopfmod.rep import (Module, Morph, dual_left, dual_right, regular,
                         tensor, trivial, word_module)

__all__ = [
    "SignatureMismatch", "Strand", "Id", "Coupon", "EvL", "CoevL", "EvR",
    "CoevR", "Gate", "SliceDiagram", "OpenPresentation", "evaluate",
    "fprime", "rotate_cut", "admissibility_check", "strand_module",
    "signature_module", "diagram_from_json", "diagram_to_json",
]

UP = "up"
DOWN = "down"


class SignatureMismatch(ValueError):
    """Layer boundaries fail to chain; carries the offending layer index."""

    def __init__(self, layer: int, message: str):
        super().__init__(f"layer {layer}: {message}")
        self.layer = layer


Strand = tuple  # (Module, "up" | "down")


def strand_module(strand: Strand) -> Module:
    """The module a strand carries: the color, or its left dual when down."""
    module, orient = strand
    return module if orient == UP else dual_left(module)


def signature_module(alg: HopfAlgebra, sig: Sequence[Strand]) -> Module:
    """The tensor word a signature spans (trivial module when empty)."""
    if not sig:
        return trivial(alg)
    out = strand_module(sig[0])
    for s in sig[1:]:
        out = tensor(out, strand_module(s))
    return out


def _sig_dim(sig: Sequence[Strand]) -> int:
    d = 1
    for module, _ in sig:
        d *= module.dim
    return d


def _sig_eq(a: Sequence[Strand], b: Sequence[Strand]) -> bool:
    return len(a) == len(b) and all(
        x[0] == y[0] and x[1] == y[1] for x, y in zip(a, b))


def _sig_str(sig: Sequence[Strand]) -> str:
    return "[" + ", ".join(f"{m.label}:{o}" for m, o in sig) + "]"


def _flat_letters(trace: tuple) -> tuple:
    """Leaf traces of a tensor word, dropping unit factors.

    Tensor re-association and unit insertion leave action matrices
    untouched, so coupon interfaces are compared at this granularity.
    """
    if trace[0] == "tensor":
        return _flat_letters(trace[1]) + _flat_letters(trace[2])
    if trace == ("trivial",):
        return ()
    return (trace,)


def _sig_letters(sig: Sequence[Strand]) -> tuple:
    out: tuple = ()
    for s in sig:
        out += _flat_letters(strand_module(s).trace)
    return out


# -- atoms ------------------------------------------------------------------

class Atom:
    """One box in a layer; knows its strand interface and its matrix."""

    def inputs(self) -> list[Strand]:
        raise NotImplementedError

    def outputs(self) -> list[Strand]:
        raise NotImplementedError

    def block(self) -> Mat | None:
        """Matrix (out-dim x in-dim), or None for an identity pass-through."""
        raise NotImplementedError


class Id(Atom):
    def __init__(self, module: Module, orient: str = UP):
        self.module = module
        self.orient = orient

    def inputs(self):
        return [(self.module, self.orient)]

    def outputs(self):
        return [(self.module, self.orient)]

    def block(self):
        return None


class Coupon(Atom):
    """A registered morphism between oriented tensor words."""

    def __init__(self, name: str, morph: Morph,
                 ins: Sequence[Strand], outs: Sequence[Strand]):
        if (_sig_letters(ins) != _flat_letters(morph.source.trace)
                or _sig_dim(ins) != morph.source.dim):
            raise SignatureMismatch(
                -1, f"coupon {name}: input strands do not form the source")
        if (_sig_letters(outs) != _flat_letters(morph.target.trace)
                or _sig_dim(outs) != morph.target.dim):
            raise SignatureMismatch(
                -1, f"coupon {name}: output strands do not form the target")
        self.name = name
        self.morph = morph
        self.ins = list(ins)
        self.outs = list(outs)

    def inputs(self):
        return list(self.ins)

    def outputs(self):
        return list(self.outs)

    def block(self):
        return self.morph.mat


class EvL(Atom):
    def __init__(self, module: Module):
        self.module = module

    def inputs(self):
        return [(self.module, DOWN), (self.module, UP)]

    def outputs(self):
        return []

    def block(self):
        F = self.module.algebra.field
        n = self.module.dim
        out = Mat.zeros(F, 1, n * n)
        for i in range(n):
            out.rows[0][i * n + i] = F.one
        return out


class CoevL(Atom):
    def __init__(self, module: Module):
        self.module = module

    def inputs(self):
        return []

    def outputs(self):
        return [(self.module, UP), (self.module, DOWN)]

    def block(self):
        F = self.module.algebra.field
        n = self.module.dim
        out = Mat.zeros(F, n * n, 1)
        for i in range(n):
            out.rows[i * n + i][0] = F.one
        return out


class EvR(Atom):
    def __init__(self, module: Module):
        self.module = module

    def inputs(self):
        return [(self.module, UP), (self.module, DOWN)]

    def outputs(self):
        return []

    def block(self):
        alg = self.module.algebra
        F = alg.field
        n = self.module.dim
        g = self.module.action_vec(alg.pivot)
        out = Mat.zeros(F, 1, n * n)
        for j in range(n):
            for i in range(n):
                out.rows[0][j * n + i] = g.rows[i][j]
        return out


class CoevR(Atom):
    def __init__(self, module: Module):
        self.module = module

    def inputs(self):
        return []

    def outputs(self):
        return [(self.module, DOWN), (self.module, UP)]

    def block(self):
        alg = self.module.algebra
        F = alg.field
        n = self.module.dim
        ginv = self.module.action_vec(alg.pivot_inverse)
        out = Mat.zeros(F, n * n, 1)
        for i in range(n):
            for j in range(n):
                out.rows[i * n + j][0] = ginv.rows[j][i]
        return out


class Gate(Atom):
    """Marker where a strand crosses a surface gate; not evaluable."""

    def __init__(self, gate_id: int, module: Module, orient: str, side: str):
        if side not in ("in", "out"):
            raise ValueError("gate side must be 'in' or 'out'")
        self.gate_id = gate_id
        self.module = module
        self.orient = orient
        self.side = side

    def inputs(self):
        return [(self.module, self.orient)]

    def outputs(self):
        return [(self.module, self.orient)]

    def block(self):
        return None


# -- diagrams ---------------------------------------------------------------

class SliceDiagram:
    """Bottom signature plus layers of atoms; validated on construction."""

    def __init__(self, algebra: HopfAlgebra, bottom: Sequence[Strand],
                 layers: Sequence[Sequence[Atom]]):
        self.algebra = algebra
        self.bottom = [tuple(s) for s in bottom]
        self.layers = [list(layer) for layer in layers]
        self.top = self._validate()

    def _validate(self) -> list[Strand]:
        sig = list(self.bottom)
        for idx, layer in enumerate(self.layers):
            pos = 0
            out: list[Strand] = []
            for atom in layer:
                ins = atom.inputs()
                take = sig[pos:pos + len(ins)]
                if not _sig_eq(take, ins):
                    raise SignatureMismatch(
                        idx, f"atom expects {_sig_str(ins)} but the incoming "
                        f"signature continues {_sig_str(take)}")
                pos += len(ins)
                out.extend(atom.outputs())
            if pos != len(sig):
                raise SignatureMismatch(
                    idx, f"{len(sig) - pos} incoming strand(s) left "
                    "unconsumed")
            sig = out
        return sig

    @property
    def is_closed(self) -> bool:
        return not self.bottom and not self.top

    def has_gates(self) -> bool:
        return any(isinstance(a, Gate) for layer in self.layers
                   for a in layer)

    def strand_colors(self) -> list[Module]:
        seen: list[Module] = []
        for m, _ in self.bottom:
            if m not in seen:
                seen.append(m)
        for layer in self.layers:
            for atom in layer:
                for m, _ in atom.inputs() + atom.outputs():
                    if m not in seen:
                        seen.append(m)
        return seen


def evaluate(diagram: SliceDiagram) -> Mat:
    """The composite matrix (top-word x bottom-word); 1x1 when closed."""
    F = diagram.algebra.field
    state = Mat.identity(F, _sig_dim(diagram.bottom))
    sig = list(diagram.bottom)
    for idx, layer in enumerate(diagram.layers):
        parts: list[tuple[Atom, int, int]] = []  # atom, din, dout
        for atom in layer:
            if isinstance(atom, Gate):
                raise SignatureMismatch(
                    idx, "gate atoms appear only inside gate diagrams")
            parts.append((atom, _sig_dim(atom.inputs()),
                          _sig_dim(atom.outputs())))
        left = 1
        right = _sig_dim(sig)
        for atom, din, dout in parts:
            right //= din
            block = atom.block()
            if block is not None:
                state = _apply_block(F, state, left, din, dout, right, block)
            left *= dout
        sig = []
        for atom in layer:
            sig.extend(atom.outputs())
    return state


def _apply_block(F, state: Mat, left: int, din: int, dout: int, right: int,
                 block: Mat) -> Mat:
    ncols = state.ncols
    out = Mat.zeros(F, left * dout * right, ncols)
    for o in range(dout):
        brow = block.rows[o]
        for i in range(din):
            c = brow[i]
            if c == F.zero:
                continue
            for l in range(left):
                src = (l * din + i) * right
                dst = (l * dout + o) * right
                for r in range(right):
                    srow = state.rows[src + r]
                    drow = out.rows[dst + r]
                    for k in range(ncols):
                        if srow[k] != F.zero:
                            drow[k] = F.add(drow[k], F.mul(c, srow[k]))
    return out


def admissibility_check(diagram: SliceDiagram) -> bool:
    """True iff some strand color is flagged projective (empty: False)."""
    colors = diagram.strand_colors()
    return any(m.projective for m in colors)


# -- open presentations and the renormalized invariant -----------------------

class OpenPresentation:
    """A 1-1 tangle: one bottom strand, one identical top strand."""

    def __init__(self, diagram: SliceDiagram):
        if len(diagram.bottom) != 1 or len(diagram.top) != 1:
            raise SignatureMismatch(
                -1, "an open presentation has exactly one strand at each end")
        if not _sig_eq(diagram.bottom, diagram.top):
            raise SignatureMismatch(
                -1, "bottom and top strands differ")
        self.diagram = diagram
        self.cut_module = strand_module(diagram.bottom[0])
        if not self.cut_module.projective:
            raise SignatureMismatch(
                -1, f"cut strand {self.cut_module.label} is not projective")

    @property
    def algebra(self) -> HopfAlgebra:
        return self.diagram.algebra

    @property
    def strand(self) -> Strand:
        return self.diagram.bottom[0]


def fprime(ctx, presentation: OpenPresentation) -> Any:
    """The renormalized invariant of the closed-up graph: t_X of the matrix."""
    return ctx.mtrace(presentation.cut_module, evaluate(presentation.diagram))


def rotate_cut(presentation: OpenPresentation, mode: str) -> OpenPresentation:
    """Re-cut the closed graph on the other side of the tangle.

    Both modes reverse the strand; conjugate_left parks the new strand to
    the left of the tangle using the duality pair that closes on that side,
    conjugate_right to the right with the other pair.  Applying opposite
    modes in sequence cancels by the corresponding snake identity.
    """
    if mode not in ("conjugate_left", "conjugate_right"):
        raise ValueError("mode must be conjugate_left or conjugate_right")
    diagram = presentation.diagram
    color, orient = presentation.strand
    rev = DOWN if orient == UP else UP
    if mode == "conjugate_left":
        if orient == UP:
            cup, cap = CoevL(color), EvL(color)
        else:
            cup, cap = CoevR(color), EvR(color)
        bottom_layer = [Id(color, rev), cup]
        top_layer = [cap, Id(color, rev)]
    else:
        if orient == UP:
            cup, cap = CoevR(color), EvR(color)
        else:
            cup, cap = CoevL(color), EvL(color)
        bottom_layer = [cup, Id(color, rev)]
        top_layer = [Id(color, rev), cap]
    middle = [[Id(color, rev)] + list(layer) + [Id(color, rev)]
              for layer in diagram.layers]
    out = SliceDiagram(
        diagram.algebra, [(color, rev)],
        [bottom_layer] + middle + [top_layer])
    return OpenPresentation(out)


# -- serialization -------------------------------------------------------------

def _parse_strand(alg: HopfAlgebra, rec: Sequence) -> Strand:
    word, orient = rec
    if orient not in (UP, DOWN):
        raise ValueError(f"orientation must be 'up' or 'down', got {orient!r}")
    return (word_module(alg, word), orient)


def diagram_from_json(alg: HopfAlgebra, data: dict,
                      registry: dict[str, Morph] | None = None
                      ) -> SliceDiagram:
    """Build a diagram from the file format.

    Atoms: {"atom": "id"|"evL"|"coevL"|"evR"|"coevR"|"coupon"|"gate", ...};
    strand colors are module words ("H", "vH", "rH", "1", comma tensors).
    Coupons name entries of the registry argument or of the file's own
    "registry" section ({"in": sig, "out": sig, "matrix": rows}).
    """
    reg: dict[str, Morph] = dict(registry or {})
    coupon_sigs: dict[str, tuple[list[Strand], list[Strand]]] = {}
    F = alg.field
    for name, rec in (data.get("registry") or {}).items():
        ins = [_parse_strand(alg, s) for s in rec["in"]]
        outs = [_parse_strand(alg, s) for s in rec["out"]]
        mat = Mat(F, [[F.parse(x) for x in row] for row in rec["matrix"]])
        reg[name] = Morph(signature_module(alg, ins),
                          signature_module(alg, outs), mat)
        coupon_sigs[name] = (ins, outs)
    layers: list[list[Atom]] = []
    for layer_rec in data["layers"]:
        layer: list[Atom] = []
        for rec in layer_rec:
            kind = rec["atom"]
            if kind == "id":
                m = word_module(alg, rec["module"])
                layer.append(Id(m, rec.get("orientation", UP)))
            elif kind == "coupon":
                name = rec["name"]
                if name not in reg:
                    raise KeyError(f"coupon {name!r} is not registered")
                if name in coupon_sigs:
                    ins, outs = coupon_sigs[name]
                else:
                    ins = [_parse_strand(alg, s) for s in rec["in"]]
                    outs = [_parse_strand(alg, s) for s in rec["out"]]
                layer.append(Coupon(name, reg[name], ins, outs))
            elif kind in ("evL", "coevL", "evR", "coevR"):
                m = word_module(alg, rec["module"])
                layer.append({"evL": EvL, "coevL": CoevL, "evR": EvR,
                              "coevR": CoevR}[kind](m))
            elif kind == "gate":
                m = word_module(alg, rec["module"])
                layer.append(Gate(rec["gate"], m,
                                  rec.get("orientation", UP), rec["side"]))
            else:
                raise ValueError(f"unknown atom kind {kind!r}")
        layers.append(layer)
    bottom = [_parse_strand(alg, s) for s in data.get("bottom", [])]
    return SliceDiagram(alg, bottom, layers)


def _word_of(module: Module) -> str:
    trace = module.trace
    if trace == ("regular",):
        return "H"
    if trace == ("trivial",):
        return "1"
    if trace == ("dualL", ("regular",)):
        return "vH"
    if trace == ("dualR", ("regular",)):
        return "rH"
    if trace[0] == "tensor":
        left = _word_of(_of_trace(module.algebra, trace[1]))
        right = _word_of(_of_trace(module.algebra, trace[2]))
        return f"{left},{right}"
    raise ValueError(f"module {module.label} has no word form")


def _of_trace(alg: HopfAlgebra, trace: tuple) -> Module:
    from hopfmod.rep import _module_from_trace
    return _module_from_trace(alg, trace)


def diagram_to_json(diagram: SliceDiagram) -> dict:
    """Inverse of diagram_from_json for word-colored, registry-keyed atoms."""
    F = diagram.algebra.field
    layers = []
    registry: dict[str, dict] = {}
    for layer in diagram.layers:
        out = []
        for atom in layer:
            if isinstance(atom, Id):
                out.append({"atom": "id", "module": _word_of(atom.module),
                            "orientation": atom.orient})
            elif isinstance(atom, EvL):
                out.append({"atom": "evL", "module": _word_of(atom.module)})
            elif isinstance(atom, CoevL):
                out.append({"atom": "coevL", "module": _word_of(atom.module)})
            elif isinstance(atom, EvR):
                out.append({"atom": "evR", "module": _word_of(atom.module)})
            elif isinstance(atom, CoevR):
                out.append({"atom": "coevR", "module": _word_of(atom.module)})
            elif isinstance(atom, Coupon):
                out.append({"atom": "coupon", "name": atom.name})
                registry[atom.name] = {
                    "in": [[_word_of(m), o] for m, o in atom.ins],
                    "out": [[_word_of(m), o] for m, o in atom.outs],
                    "matrix": [[F.to_json(x) for x in row]
                               for row in atom.morph.mat.rows],
                }
            elif isinstance(atom, Gate):
                out.append({"atom": "gate", "gate": atom.gate_id,
                            "module": _word_of(atom.module),
                            "orientation": atom.orient, "side": atom.side})
            else:
                raise ValueError(f"unserializable atom {atom!r}")
        layers.append(out)
    data = {"bottom": [[_word_of(m), o] for m, o in diagram.bottom],
            "layers": layers}
    if registry:
        data["registry"] = registry
    return data
