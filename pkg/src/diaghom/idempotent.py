"""Mirror diagrams, normalized idempotents, threaded idempotents and the
checks that feed the Ext-invariance machinery."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import AlgebraElement, AlgebraSpec, multiply, structure
from .coeff import NotInvertible, SparseMatrix, profile, smith_normal_form
from .diagram import Diagram, Family, FamilyViolation, compose, enumerate_diagrams, is_member
from .linkstate import (
    LinkState,
    NoDefects,
    juxtapose,
    mirror_diagram,
    reachable_ideal_basis,
    right_link_state,
)


@dataclass(frozen=True)
class AbsorptionReport:
    holds: bool
    scalar_exponents: tuple | None = None
    witness: Diagram | None = None
    scalar: object = None


def _validated(d: Diagram, fam: Family) -> Diagram:
    if not is_member(d, fam):
        raise FamilyViolation(f"constructed {d!r} is not a {fam} diagram")
    return d


def mirror_dp(p: LinkState, fam: Family) -> Diagram:
    """Diagram with right link state p and left link state its mirror."""
    return _validated(mirror_diagram(p), fam)


def exponents(p: LinkState, fam: Family) -> tuple[int, int]:
    """(alpha, beta) for the self-absorption scalar of the mirror diagram.

    alpha counts closed loops from undecorated arcs.  beta counts isolated
    vertices for rook-type families and blobbed arcs for blob algebras.
    """
    if fam.blob:
        blobbed = len(p.blobbed_arcs)
        return (len(p.arcs) - blobbed, blobbed)
    if fam.rook_like:
        return (len(p.arcs), len(p.isolated))
    return (len(p.arcs), 0)


def predicted_scalar(spec: AlgebraSpec, alpha: int, beta: int):
    ring = spec.ring
    fam = spec.family
    if fam.kind in ("R", "PR"):
        return ring.power(spec.epsilon, beta)
    c = ring.power(spec.delta, alpha)
    if fam.rook_like:
        c = ring.mul(c, ring.power(spec.epsilon, beta))
    elif fam.blob:
        c = ring.mul(c, ring.power(spec.gamma, beta))
    return c


def _beta_of(res, fam: Family) -> int:
    return res.blobbed_loops if fam.blob else res.isolated_middle


def check_absorption(p: LinkState, e, spec: AlgebraSpec, expected=None) -> AbsorptionReport:
    """Check y*e is a uniform multiple of y for every y in the left ideal of p.

    For a diagram e the report carries the exponents (alpha, beta); for an
    algebra element it carries the scalar.  ``expected`` (exponents or a
    scalar, matching e's type) is compared when given.
    """
    fam = spec.family
    ys = reachable_ideal_basis(p, fam)
    if isinstance(e, Diagram):
        seen = None
        for y in ys:
            res = compose(y, e, fam)
            if res.is_zero or res.diagram != y:
                return AbsorptionReport(False, seen, y)
            exps = (res.loops, _beta_of(res, fam))
            if seen is None:
                seen = exps
            elif exps != seen:
                return AbsorptionReport(False, seen, y)
        if expected is not None and seen is not None and tuple(expected) != seen:
            return AbsorptionReport(False, seen, None)
        scalar = predicted_scalar(spec, *seen) if seen is not None else None
        return AbsorptionReport(True, seen, None, scalar)
    scalar = None
    for y in ys:
        ye = multiply(AlgebraElement.basis_element(spec, y), e)
        c = ye.coefficient(y)
        if ye != AlgebraElement.basis_element(spec, y, c) or (scalar is not None and c != scalar):
            return AbsorptionReport(False, None, y, scalar)
        scalar = c
    if expected is not None and scalar is not None and spec.ring.normalize(expected) != scalar:
        return AbsorptionReport(False, None, None, scalar)
    return AbsorptionReport(True, None, None, scalar)


def normalized_idempotent(p: LinkState, spec: AlgebraSpec) -> AlgebraElement:
    """delta^-alpha (epsilon or gamma)^-beta times the mirror diagram."""
    fam = spec.family
    alpha, beta = exponents(p, fam)
    ring = spec.ring
    c = ring.one
    if fam.kind not in ("R", "PR") and alpha:
        c = ring.mul(c, ring.power(ring.invert(spec.delta, "delta"), alpha))
    if beta:
        name = "gamma" if fam.blob else "epsilon"
        c = ring.mul(c, ring.power(ring.invert(spec.param(name), name), beta))
    return AlgebraElement(spec, {mirror_dp(p, fam): c})


# ---------------------------------------------------------------------------
# Threaded idempotents


def _ordered_arcs(p: LinkState) -> list[tuple[int, int]]:
    return sorted(p.arcs)


def _thread(p: LinkState, first_block) -> Diagram:
    """All defects but the bottom-most are horizontal; the bottom-most defect a
    threads through every arc of p and lands on the left vertex a.

    ``first_block(v)`` tells whether v lies in the block of a; each arc
    contributes its endpoint in a's block (entered first) and its other
    endpoint (left through an arc of the constructed diagram).
    """
    if not p.defects:
        raise NoDefects("threading needs a defect")
    n = p.n
    a = max(p.defects)
    chain = []
    for x, y in _ordered_arcs(p):
        near, far = (x, y) if first_block(x) else (y, x)
        chain.append((near, far))
    left_arcs = []
    if chain:
        entry = chain[0][0]
        for (_, far), (near, _) in zip(chain, chain[1:]):
            left_arcs.append((far, near))
        left_arcs.append((chain[-1][1], a))
    else:
        entry = a
    edges = [(d, -d) for d in sorted(p.defects) if d != a]
    edges.append((entry, -a))
    edges += left_arcs
    edges += [(-x, -y) for x, y in sorted(p.arcs)]
    return Diagram.from_edges(n, edges)


def walled_ep(p: LinkState, r: int, s: int) -> Diagram:
    """Idempotent for a walled Brauer link state with at least one defect."""
    fam = Family("WB", r, s)
    if not p.defects:
        raise NoDefects("walled_ep needs a defect")
    a = max(p.defects)
    a_right = a > r
    return _validated(_thread(p, lambda v: (v > r) == a_right), fam)


def brauer_ep(p: LinkState) -> Diagram:
    """Brauer analogue of walled_ep: arcs are entered at their larger endpoint."""
    if not p.defects:
        raise NoDefects("brauer_ep needs a defect")
    e = _thread_by_order(p)
    return _validated(e, Family("B"))


def _thread_by_order(p: LinkState) -> Diagram:
    arcs = _ordered_arcs(p)
    larger = {y for _, y in arcs}
    return _thread(p, lambda v: v in larger)


def vertex_split(q: LinkState) -> list[tuple[int, int]]:
    """Consecutive intervals (inclusive, 1-based), each holding one defect.

    Intervals end at each defect; the last one runs to n.  When q has
    blobbed arcs the vertices above the top defect form their own
    defect-free first interval.
    """
    if not q.defects:
        raise NoDefects("vertex_split needs a defect")
    ds = sorted(q.defects)
    out = []
    start = 1
    if q.blobbed_arcs and ds[0] > 1:
        out.append((1, ds[0] - 1))
        start = ds[0]
    for d in ds[:-1]:
        out.append((start, d))
        start = d + 1
    out.append((start, q.n))
    return out


def _shift(arcs, k):
    return [(x + k, y + k) for x, y in arcs]


def _interval_threading(lo: int, hi: int, d: int, arcs: list[tuple[int, int]]):
    """Left endpoint of the defect's propagating edge and the left arcs."""
    if lo == hi:
        return lo, []
    if d == hi:
        return lo, _shift(arcs, 1)
    if d == lo:
        return hi, _shift(arcs, -1)
    upper = [a for a in arcs if a[1] < d]
    lower = [a for a in arcs if a[0] > d]
    out = []
    for x, y in _shift(upper, 1):
        out.append((x, hi) if y == d else (x, y))
    out += _shift(lower, -1)
    return lo, out


def _rotate(arcs, lo: int, hi: int):
    def rot(v):
        return hi if v == lo else v - 1

    return [tuple(sorted((rot(x), rot(y)))) for x, y in arcs]


def blob_eq(q: LinkState, n: int | None = None) -> Diagram:
    """Threaded diagram for a blob (or Temperley-Lieb) link state.

    Without blobbed arcs y*e = y on the left ideal of q; with blobbed arcs the
    region above the top defect closes into one blobbed loop and y*e = gamma*y.
    """
    n = q.n if n is None else n
    if n != q.n:
        raise ValueError("size mismatch")
    if not q.defects:
        raise NoDefects("blob_eq needs a defect")
    edges, blobs = [], []
    for lo, hi in vertex_split(q):
        arcs = [a for a in sorted(q.arcs) if lo <= a[0] and a[1] <= hi]
        ds = [d for d in q.defects if lo <= d <= hi]
        if not ds:
            edges += _rotate(arcs, lo, hi)
            continue
        (d,) = ds
        v, left = _interval_threading(lo, hi, d, arcs)
        edges.append((v, -d))
        if d in q.blobbed_defects:
            blobs.append((v, -d))
        edges += left
    for x, y in sorted(q.arcs):
        edges.append((-x, -y))
        if (x, y) in q.blobbed_arcs:
            blobs.append((-x, -y))
    fam = Family("BL") if q.blobbed_arcs or q.blobbed_defects else Family("TL")
    return _validated(Diagram.from_edges(n, edges, blobs), fam)


def tl_ep(p: LinkState) -> Diagram:
    return blob_eq(p)


def blobbed_loop_completion(q: LinkState) -> LinkState:
    """A planar state q2 whose juxtaposition with q is one blobbed loop."""
    if q.defects or not q.blobbed_arcs:
        raise ValueError("completion needs a defect-free state with a blobbed arc")
    q2 = LinkState(q.n, frozenset(_rotate(sorted(q.arcs), 1, q.n)))
    loops = juxtapose(q, q2).loops()
    if len(loops) == 1 and loops[0].blobbed and len(loops[0].vertices) == q.n:
        return q2
    found = meander_search(q)
    if found is None:
        raise ArithmeticError(f"no one-loop completion for {q!r}")
    return found


def meander_search(q: LinkState) -> LinkState | None:
    """Exhaustive search for a non-crossing perfect matching forming a single
    blobbed loop with q; first hit in lexicographic order."""
    from .diagram import _matchings

    for m in _matchings(tuple(range(1, q.n + 1)), False, True):
        cand = LinkState(q.n, frozenset(m))
        loops = juxtapose(q, cand).loops()
        if len(loops) == 1 and loops[0].blobbed and len(loops[0].vertices) == q.n:
            return cand
    return None


# ---------------------------------------------------------------------------
# Idempotents under each theorem's hypotheses


def _invertible(spec: AlgebraSpec, names) -> bool:
    return all(spec.ring.is_unit(spec.param(n)) for n in names)


def theorem_idempotent(p: LinkState, spec: AlgebraSpec) -> AlgebraElement | None:
    """The idempotent generating the left ideal of p, or None when no
    construction applies under the available invertibility."""
    fam = spec.family
    alpha, beta = exponents(p, fam)
    used = []
    if alpha and fam.kind not in ("R", "PR"):
        used.append("delta")
    if beta:
        used.append("gamma" if fam.blob else "epsilon")
    if _invertible(spec, used):
        return normalized_idempotent(p, spec)
    if not p.defects:
        return None
    if fam.kind == "WB":
        return AlgebraElement(spec, {walled_ep(p, fam.r, fam.s): 1})
    if fam.kind == "B":
        return AlgebraElement(spec, {brauer_ep(p): 1})
    if fam.kind == "TL":
        return AlgebraElement(spec, {blob_eq(p): 1})
    if fam.kind == "BL":
        e = blob_eq(p)
        if not p.blobbed_arcs:
            return AlgebraElement(spec, {e: 1})
        if not spec.ring.is_unit(spec.gamma):
            return None
        return AlgebraElement(spec, {e: spec.ring.invert(spec.gamma, "gamma")})
    return None


def check_ideal_generation(e: AlgebraElement, p: LinkState, spec: AlgebraSpec) -> bool:
    """span{x e : x basis} equals the span of the left ideal basis of p."""
    st = structure(spec)
    ys = reachable_ideal_basis(p, spec.family)
    ypos = {st.index[y]: k for k, y in enumerate(ys)}
    if any(st.index[d] not in ypos for d in e.terms):
        return False
    evec = e.to_indices()
    triples = []
    for col, x in enumerate(st.basis):
        for k, c in st.product({col: spec.ring.one}, evec).items():
            if k not in ypos:
                return False
            triples.append((ypos[k], col, c))
    ring = spec.ring
    nrows = len(ys)
    if nrows == 0:
        return True
    if ring.kind == "Zmod":
        m = ring.modulus
        triples += [(i, st.dim + i, m) for i in range(nrows)]
        mat = SparseMatrix(nrows, st.dim + nrows, triples)
        f = smith_normal_form(mat)
        return len(f) == nrows and all(x == 1 for x in f)
    mat = SparseMatrix(nrows, st.dim, triples, ring)
    if ring.kind == "Q":
        return profile(mat, ring).rank == nrows
    f = smith_normal_form(mat)
    return len(f) == nrows and all(x == 1 for x in f)


def check_commuting_idempotents(es: list[AlgebraElement]) -> bool:
    for e in es:
        if multiply(e, e) != e:
            return False
    for x, y in itertools.combinations(es, 2):
        if multiply(x, y) != multiply(y, x):
            return False
    return True


@dataclass(frozen=True)
class StateReport:
    state: LinkState
    constructed: bool
    idempotent: bool = False
    absorption: bool = False
    generation: bool = False

    @property
    def ok(self) -> bool:
        return not self.constructed or (self.idempotent and self.absorption and self.generation)

    def to_json(self) -> dict:
        return {"state": self.state.to_json(), "constructed": self.constructed,
                "idempotent": self.idempotent, "absorption": self.absorption,
                "generation": self.generation, "ok": self.ok}


def verify_state(p: LinkState, spec: AlgebraSpec) -> StateReport:
    """Idempotency, absorption with scalar one, and ideal generation for the
    idempotent attached to p; also the scalar predicted for d_p when d_p applies."""
    e = theorem_idempotent(p, spec)
    if e is None:
        return StateReport(p, False)
    idem = multiply(e, e) == e
    rep = check_absorption(p, e, spec)
    absorb = rep.holds and rep.scalar == spec.ring.one
    fam = spec.family
    if fam.kind not in ("WB", "B", "TL", "BL") or spec.ring.is_unit(spec.delta):
        a, b = exponents(p, fam)
        absorb = absorb and check_absorption(p, mirror_dp(p, fam), spec, expected=(a, b)).holds
    return StateReport(p, True, idem, absorb, check_ideal_generation(e, p, spec))


def all_right_states(spec: AlgebraSpec) -> list[LinkState]:
    return sorted({right_link_state(d) for d in enumerate_diagrams(spec.family, spec.n)})


def verify_all(spec: AlgebraSpec) -> list[StateReport]:
    return [verify_state(p, spec) for p in all_right_states(spec)]


__all__ = [
    "StateReport",
    "verify_all",
    "verify_state",
    "AbsorptionReport",
    "NotInvertible",
    "blob_eq",
    "blobbed_loop_completion",
    "brauer_ep",
    "check_absorption",
    "check_commuting_idempotents",
    "check_ideal_generation",
    "exponents",
    "meander_search",
    "mirror_dp",
    "normalized_idempotent",
    "theorem_idempotent",
    "tl_ep",
    "vertex_split",
    "walled_ep",
]
