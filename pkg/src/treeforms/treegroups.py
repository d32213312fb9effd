"""Graded groups of trees modulo antisymmetry and Jacobi relations.

Three families are built as finitely presented abelian groups over the
canonical tree generators:

  * L(n, m): rooted trees of order n; relations are orientation
    reversal at every trivalent vertex (AS) and the Jacobi rewiring at
    every internal non-root edge (IHX).  This presents the degree-n
    part of the free quasi-Lie algebra on m generators: [X, X] = 0 is
    never imposed, so self-reverse trees contribute 2-torsion.
  * T(n, m): unrooted trees of order n with the same local relations.
  * Tinf(n, m): unrooted trees of order 2n together with one twisted
    generator per rooted tree J of order n, subject to the symmetry
    J~ = (-J)~, the interior twist 2 J~ = <J, J>, and the twisted
    Jacobi relation I~ = H~ + X~ - <H, X> at every internal edge of
    the generating body.

The rooted product induces the bracket, the inner product induces the
pairing into T(2n, m), and the universality of both is machine-checked
here (split-independent extension of pairings along generator images;
the twisted group as the universal symmetric refinement; exactness of
the inclusion/boundary sequence relating the three families).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from . import trees as tr
from .abelian import (
    FPAbelianGroup,
    GroupHom,
    cokernel,
    fp_group,
    hom,
    hom_is_isomorphism,
    is_exact,
    kernel,
    tensor_Z2,
    vec_add,
    zero_vector,
)
from .errors import TreeformsError
from .quadratic import BilinearForm, UniversalRefinement, universal_symmetric
from .trees import InfTree, Leaf, Node, TreeVector


@dataclass(frozen=True)
class TreeGroup:
    kind: str  # "L" | "T" | "Tinf"
    n: int
    m: int
    group: FPAbelianGroup
    gens: tuple
    index: dict

    def vector_of(self, tv) -> list:
        """Coordinates of a tree linear combination over the generators."""
        v = zero_vector(self.group.generators)
        items = tv.items() if isinstance(tv, TreeVector) else tv
        for t, c in items:
            if t not in self.index:
                raise TreeformsError(
                    f"{tr.print_tree(t)} is not a generator of {self.kind}"
                    f"({self.n}, {self.m})"
                )
            v[self.index[t]] += c
        return v

    def nf(self, v):
        return self.group.element_nf(v)


def _as_rows(tg_gens, index, g):
    """AS and IHX relation rows over a generator list (rooted or unrooted)."""
    rows = []
    for t in tg_gens:
        base = index[t]
        for v in range(tr.order(t)):
            row = zero_vector(g)
            row[base] += 1
            row[index[tr.as_variant(t, v)]] += 1
            rows.append(tuple(row))
        for e in tr.internal_edge_ids(t):
            i_, h_, x_ = tr.ihx_triple(t, e)
            row = zero_vector(g)
            row[index[i_]] += 1
            row[index[h_]] -= 1
            row[index[x_]] += 1
            rows.append(tuple(row))
    return rows


@functools.lru_cache(maxsize=None)
def build_L(n: int, m: int) -> TreeGroup:
    """Rooted trees of order n modulo AS and IHX."""
    gens = tuple(tr.enumerate_trees("rooted", n, m))
    index = {t: i for i, t in enumerate(gens)}
    rows = _as_rows(gens, index, len(gens))
    grp = fp_group(len(gens), rows, names=[tr.print_tree(t) for t in gens])
    return TreeGroup("L", n, m, grp, gens, index)


@functools.lru_cache(maxsize=None)
def build_T(n: int, m: int) -> TreeGroup:
    """Unrooted trees of order n modulo AS and IHX."""
    gens = tuple(tr.enumerate_trees("unrooted", n, m))
    index = {t: i for i, t in enumerate(gens)}
    rows = _as_rows(gens, index, len(gens))
    grp = fp_group(len(gens), rows, names=[tr.print_tree(t) for t in gens])
    return TreeGroup("T", n, m, grp, gens, index)


@functools.lru_cache(maxsize=None)
def build_Tinf(n: int, m: int) -> TreeGroup:
    """Unrooted trees of order 2n plus twisted generators of order n.

    Generator layout: the unrooted block first (enumeration order),
    then one InfTree generator per rooted tree of order n.
    """
    t_gens = tuple(tr.enumerate_trees("unrooted", 2 * n, m))
    bodies = tuple(tr.enumerate_trees("rooted", n, m))
    gens = t_gens + tuple(InfTree(b) for b in bodies)
    g = len(gens)
    index = {t: i for i, t in enumerate(gens)}
    rows = _as_rows(t_gens, index, g)
    for body in bodies:
        base = index[InfTree(body)]
        # symmetry: one orientation reversal per trivalent vertex
        for v in range(tr.order(body)):
            row = zero_vector(g)
            row[base] += 1
            row[index[InfTree(tr.as_variant(body, v))]] -= 1
            rows.append(tuple(row))
        # interior twist 2 J~ = <J, J>
        row = zero_vector(g)
        row[base] += 2
        row[index[tr.inner_product(body, body)]] -= 1
        rows.append(tuple(row))
        # twisted IHX  I~ - H~ - X~ + <H, X>
        for e in tr.internal_edge_ids(body):
            i_, h_, x_ = tr.ihx_triple(body, e)
            row = zero_vector(g)
            row[index[InfTree(i_)]] += 1
            row[index[InfTree(h_)]] -= 1
            row[index[InfTree(x_)]] -= 1
            row[index[tr.inner_product(h_, x_)]] += 1
            rows.append(tuple(row))
    grp = fp_group(g, rows, names=[tr.print_tree(t) for t in gens])
    return TreeGroup("Tinf", n, m, grp, gens, index)


def build(kind: str, n: int, m: int) -> TreeGroup:
    builders = {"L": build_L, "T": build_T, "Tinf": build_Tinf}
    if kind not in builders:
        raise TreeformsError(f"unknown group kind {kind!r}")
    return builders[kind](n, m)


# ---------------------------------------------------------------------------
# elements


class _Element:
    """Class of a tree linear combination in its quotient group."""

    def __init__(self, tg: TreeGroup, tv):
        if isinstance(tv, tr.TreeVector):
            vec = tg.vector_of(tv)
        else:
            vec = list(tv)
            if len(vec) != tg.group.generators:
                raise TreeformsError("coordinate length mismatch")
        self.tg = tg
        self.vec = tuple(vec)

    @property
    def nf(self):
        return self.tg.group.element_nf(list(self.vec))

    def is_zero(self):
        return all(c == 0 for c in self.nf)

    def __eq__(self, other):
        return (
            isinstance(other, _Element)
            and self.tg.kind == other.tg.kind
            and self.tg.n == other.tg.n
            and self.tg.m == other.tg.m
            and self.nf == other.nf
        )

    def __add__(self, other):
        if self.tg is not other.tg:
            raise TreeformsError("elements of different groups")
        return type(self)(self.tg, vec_add(self.vec, other.vec))

    def __neg__(self):
        return type(self)(self.tg, [-c for c in self.vec])

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return type(self)(self.tg, [k * c for c in self.vec])

    def as_treevector(self) -> tr.TreeVector:
        return tr.TreeVector(
            [(self.tg.gens[i], c) for i, c in enumerate(self.vec) if c]
        )

    def __repr__(self):
        return f"{type(self).__name__}({self.as_treevector()!r})"


class LieElement(_Element):
    pass


class TreeElement(_Element):
    pass


class TwistedElement(_Element):
    pass


def lie_element(n, m, tv) -> LieElement:
    return LieElement(build_L(n, m), tv)


def leaf_element(i, m) -> LieElement:
    return lie_element(0, m, tr.TreeVector.from_tree(Leaf(i)))


def tree_element(n, m, tv) -> TreeElement:
    return TreeElement(build_T(n, m), tv)


def twisted_element(n, m, vec) -> TwistedElement:
    return TwistedElement(build_Tinf(n, m), vec)


def bracket(x: LieElement, y: LieElement) -> LieElement:
    """Bilinear extension of the rooted product; lands one order up."""
    if x.tg.m != y.tg.m:
        raise TreeformsError("label counts differ")
    target = build_L(x.tg.n + y.tg.n + 1, x.tg.m)
    acc = []
    for s, cs in x.as_treevector().items():
        for t, ct in y.as_treevector().items():
            acc.append((Node(s, t), cs * ct))
    return LieElement(target, tr.TreeVector(acc))


def pairing(x: LieElement, y: LieElement) -> TreeElement:
    """Bilinear extension of the inner product into T(nx + ny, m)."""
    if x.tg.m != y.tg.m:
        raise TreeformsError("label counts differ")
    target = build_T(x.tg.n + y.tg.n, x.tg.m)
    acc = []
    for s, cs in x.as_treevector().items():
        for t, ct in y.as_treevector().items():
            acc.append((tr.inner_product(s, t), cs * ct))
    return TreeElement(target, tr.TreeVector(acc))


# ---------------------------------------------------------------------------
# the universal linear extension of a pairing along generator images


def _substitute(t, images):
    """Multilinear substitution of leaf labels by rooted-tree vectors."""
    if isinstance(t, Leaf):
        return images[t.label - 1]
    lhs = _substitute(t.first, images)
    rhs = _substitute(t.second, images)
    acc = []
    for s, cs in lhs.items():
        for u, cu in rhs.items():
            acc.append((Node(s, u), cs * cu))
    return tr.TreeVector(acc)


def _probe_target_pairing(m2: int):
    """Spot-check symmetry and invariance of the target pairing."""
    a, b, c = Leaf(1), Leaf(min(2, m2)), Leaf(1)
    if tr.inner_product(a, b) != tr.inner_product(b, a):
        raise TreeformsError("target pairing failed symmetry probe")
    lhs = tr.inner_product(Node(a, b), c)
    rhs = tr.inner_product(a, Node(b, c))
    if lhs != rhs:
        raise TreeformsError("target pairing failed invariance probe")


def psi(n: int, m: int, images) -> GroupHom:
    """Linear map on T(2n, m) induced by generator images and the pairing.

    `images` lists one element of some L(k, m2) per label 1..m.  Each
    unrooted generator is split at one edge, both halves are pushed
    through the substitution, and the target pairing is applied; the
    hom constructor then certifies independence of the relations.
    Split-independence itself is checked by `psi_split_values`.
    """
    if len(images) != m:
        raise TreeformsError(f"need {m} images, got {len(images)}")
    k = images[0].tg.n
    m2 = images[0].tg.m
    for im in images:
        if im.tg.n != k or im.tg.m != m2:
            raise TreeformsError("images must share one order and label count")
    _probe_target_pairing(m2)
    image_tvs = [im.as_treevector() for im in images]
    source = build_T(2 * n, m)
    target = build_T(2 * n + (2 * n + 2) * k, m2)
    rows = []
    for t in source.gens:
        x, y = tr.splits(t)[0]
        acc = []
        for s, cs in _substitute(x, image_tvs).items():
            for u, cu in _substitute(y, image_tvs).items():
                acc.append((tr.inner_product(s, u), cs * cu))
        rows.append(target.vector_of(tr.TreeVector(acc)))
    return hom(source.group, target.group, rows)


def psi_split_values(t, images):
    """Normal forms of the extension evaluated through every split of t."""
    k = images[0].tg.n
    m2 = images[0].tg.m
    target = build_T(tr.order(t) + (tr.order(t) + 2) * k, m2)
    image_tvs = [im.as_treevector() for im in images]
    values = []
    for x, y in tr.splits(t):
        acc = []
        for s, cs in _substitute(x, image_tvs).items():
            for u, cu in _substitute(y, image_tvs).items():
                acc.append((tr.inner_product(s, u), cs * cu))
        values.append(target.nf(target.vector_of(tr.TreeVector(acc))))
    return values


# ---------------------------------------------------------------------------
# the maps between the three families


@functools.lru_cache(maxsize=None)
def map_p(n: int, m: int) -> GroupHom:
    """T(2n, m) -> Tinf(n, m), t |-> t."""
    src = build_T(2 * n, m)
    dst = build_Tinf(n, m)
    rows = [dst.group.unit_vector(dst.index[t]) for t in src.gens]
    return hom(src.group, dst.group, rows)


@functools.lru_cache(maxsize=None)
def map_h(n: int, m: int) -> GroupHom:
    """Tinf(n, m) -> T(2n, m): t |-> 2t and J~ |-> <J, J>."""
    src = build_Tinf(n, m)
    dst = build_T(2 * n, m)
    rows = []
    for t in src.gens:
        if isinstance(t, InfTree):
            rows.append(dst.group.unit_vector(dst.index[tr.inner_product(t.body, t.body)]))
        else:
            row = zero_vector(dst.group.generators)
            row[dst.index[t]] = 2
            rows.append(row)
    return hom(src.group, dst.group, rows)


@functools.lru_cache(maxsize=None)
def _tensor_L(n: int, m: int) -> FPAbelianGroup:
    return tensor_Z2(build_L(n, m).group)


@functools.lru_cache(maxsize=None)
def map_bound(n: int, m: int) -> GroupHom:
    """Tinf(n, m) -> Z2 (x) L(n, m): t |-> 0 and J~ |-> J."""
    src = build_Tinf(n, m)
    lgrp = build_L(n, m)
    dst = _tensor_L(n, m)
    rows = []
    for t in src.gens:
        if isinstance(t, InfTree):
            rows.append(dst.unit_vector(lgrp.index[t.body]))
        else:
            rows.append(zero_vector(dst.generators))
    return hom(src.group, dst, rows)


class TwistedRefinement:
    """The quadratic map from L(n, m) into Tinf(n, m), J |-> J~.

    Not additive: along the pairing it satisfies
    q(x + y) = q(x) + q(y) + <x, y>, with 2 q(x) = <x, x>.
    """

    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m
        self.L = build_L(n, m)
        self.T = build_T(2 * n, m)
        self.tinf = build_Tinf(n, m)

    def on_tree(self, body) -> TwistedElement:
        return TwistedElement(
            self.tinf,
            self.tinf.group.unit_vector(self.tinf.index[InfTree(body)]),
        )

    def _embed_t(self, tvec):
        out = zero_vector(self.tinf.group.generators)
        for i, c in enumerate(tvec):
            if c:
                out[self.tinf.index[self.T.gens[i]]] += c
        return out

    def __call__(self, x: LieElement) -> TwistedElement:
        if x.tg.n != self.n or x.tg.m != self.m:
            raise TreeformsError("element lives in the wrong graded piece")
        acc = zero_vector(self.tinf.group.generators)
        prefix = zero_vector(self.L.group.generators)
        for k, c in enumerate(x.vec):
            if not c:
                continue
            sign = 1 if c > 0 else -1
            body = self.L.gens[k]
            for _ in range(abs(c)):
                letter = [sign if j == k else 0
                          for j in range(self.L.group.generators)]
                mu_letter = zero_vector(self.tinf.group.generators)
                mu_letter[self.tinf.index[InfTree(body)]] = 1
                if sign < 0:
                    # q(-J) = -q(J) + <J, J>
                    mu_letter = [-a for a in mu_letter]
                    mu_letter[self.tinf.index[tr.inner_product(body, body)]] += 1
                cross = self._pair_vec(prefix, letter)
                acc = vec_add(acc, vec_add(mu_letter, self._embed_t(cross)))
                prefix = vec_add(prefix, letter)
        return TwistedElement(self.tinf, acc)

    def _pair_vec(self, xv, yv):
        out = zero_vector(self.T.group.generators)
        for i, ci in enumerate(xv):
            if ci:
                for j, cj in enumerate(yv):
                    if cj:
                        t = tr.inner_product(self.L.gens[i], self.L.gens[j])
                        out[self.T.index[t]] += ci * cj
        return out


def map_q(n: int, m: int) -> TwistedRefinement:
    return TwistedRefinement(n, m)


# ---------------------------------------------------------------------------
# theorem verification


@dataclass
class ExactnessReport:
    n: int
    m: int
    injective: bool
    middle: bool
    surjective: bool
    certificate: "dict | None"

    @property
    def passed(self):
        return self.injective and self.middle and self.surjective

    def to_json(self):
        return {
            "order": self.n,
            "labels": self.m,
            "injective": self.injective,
            "middle_exact": self.middle,
            "surjective": self.surjective,
            "passed": self.passed,
        }


def verify_exact(n: int, m: int) -> ExactnessReport:
    """Certify 0 -> T(2n) -> Tinf(n) -> Z2 (x) L(n) -> 0 at (n, m)."""
    p = map_p(n, m)
    bound = map_bound(n, m)
    kp, _ = kernel(p)
    injective = kp.is_trivial()
    middle, cert = is_exact(p, bound)
    cb, _ = cokernel(bound)
    surjective = cb.is_trivial()
    return ExactnessReport(n, m, injective, middle, surjective, cert)


def tree_pairing_form(n: int, m: int) -> BilinearForm:
    """The inner-product pairing of L(n, m) as a bilinear form into T(2n, m)."""
    L = build_L(n, m)
    T = build_T(2 * n, m)
    values = []
    for a in L.gens:
        row = []
        for b in L.gens:
            v = zero_vector(T.group.generators)
            v[T.index[tr.inner_product(a, b)]] = 1
            row.append(v)
        values.append(row)
    return BilinearForm(L.group, T.group, values)


@dataclass
class UniversalComparison:
    n: int
    m: int
    refinement: UniversalRefinement
    iso: GroupHom
    is_isomorphism: bool
    factors_match: bool
    p_square: bool
    h_square: bool

    @property
    def passed(self):
        return (
            self.is_isomorphism
            and self.factors_match
            and self.p_square
            and self.h_square
        )

    def to_json(self):
        return {
            "order": self.n,
            "labels": self.m,
            "isomorphism": self.is_isomorphism,
            "invariant_factors_match": self.factors_match,
            "p_square": self.p_square,
            "h_square": self.h_square,
            "passed": self.passed,
        }


def build_Tinf_universal(n: int, m: int) -> UniversalComparison:
    """Universal symmetric refinement of the tree pairing vs Tinf(n, m).

    The comparison map fixes every unrooted generator and sends mu(J)
    to the twisted generator J~; it must be an isomorphism commuting
    with both structure maps.
    """
    lam = tree_pairing_form(n, m)
    ur = universal_symmetric(lam)
    tinf = build_Tinf(n, m)
    L = build_L(n, m)
    T = build_T(2 * n, m)
    rows = [tinf.group.unit_vector(tinf.index[t]) for t in T.gens]
    rows += [tinf.group.unit_vector(tinf.index[InfTree(b)]) for b in L.gens]
    iso = hom(ur.qgroup.M_e, tinf.group, rows)
    factors_match = (
        ur.qgroup.M_e.invariant_factors == tinf.group.invariant_factors
        and ur.qgroup.M_e.rank == tinf.group.rank
    )
    p_square = iso.compose(ur.qgroup.p).equals(map_p(n, m))
    h_square = map_h(n, m).compose(iso).equals(ur.qgroup.h)
    return UniversalComparison(
        n=n,
        m=m,
        refinement=ur,
        iso=iso,
        is_isomorphism=hom_is_isomorphism(iso),
        factors_match=factors_match,
        p_square=p_square,
        h_square=h_square,
    )
