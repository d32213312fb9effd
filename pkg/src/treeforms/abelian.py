"""Exact integer linear algebra for finitely presented abelian groups.

Everything runs over arbitrary-precision integers: Smith normal form
with unimodular transforms, presented groups with element normal
forms, homomorphisms checked against relations, and the derived
kernel/image/cokernel subquotients used for exactness certificates.

Matrices are plain lists of row lists.  Smith normal form pivots on
the minimal absolute value (lowest row, then column, on ties) to keep
intermediate entries small; the decomposition re-verifies U*A*V = S
and the unimodularity of U and V on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ResourceLimitError, TreeformsError

DEFAULT_MAX_GENERATORS = 20_000
DEFAULT_MAX_RELATIONS = 200_000


# ---------------------------------------------------------------------------
# matrix helpers (rows of ints)


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_vector(n):
    return [0] * n


def mat_mul(a, b):
    if not a:
        return []
    rows, inner = len(a), len(a[0]) if a[0] else 0
    cols = len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            c = ai[k]
            if c:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        oi[j] += c * bk[j]
    return out


def mat_vec(a, v):
    out = [0] * len(a)
    for j, c in enumerate(v):
        if c:
            for i in range(len(a)):
                if a[i][j]:
                    out[i] += a[i][j] * c
    return out


def transpose(a, cols=None):
    if not a:
        return [[] for _ in range(cols)] if cols else []
    return [list(col) for col in zip(*a)]


def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v):
    return [a - b for a, b in zip(u, v)]


def vec_scale(k, v):
    return [k * a for a in v]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SmithDecomposition:
    """U*A*V = S with S diagonal, d1 | d2 | ... >= 0, U and V unimodular."""

    U: list
    S: list
    V: list
    Uinv: list
    Vinv: list
    diagonal: tuple

    def check(self, A):
        rows = len(A)
        cols = len(A[0]) if A else 0
        if mat_mul(mat_mul(self.U, A), self.V) != self.S:
            raise TreeformsError("Smith decomposition failed U*A*V = S")
        if mat_mul(self.U, self.Uinv) != identity_matrix(rows):
            raise TreeformsError("U is not unimodular")
        if mat_mul(self.V, self.Vinv) != identity_matrix(cols):
            raise TreeformsError("V is not unimodular")
        for i in range(len(self.diagonal) - 1):
            a, b = self.diagonal[i], self.diagonal[i + 1]
            if a == 0 and b != 0:
                raise TreeformsError("zero divisor ordering violated")
            if a != 0 and b % a != 0:
                raise TreeformsError("divisibility chain violated")


def _find_pivot(s, t, rows, cols):
    best = None
    best_abs = None
    for i in range(t, rows):
        si = s[i]
        for j in range(t, cols):
            e = si[j]
            if e:
                a = -e if e < 0 else e
                if best_abs is None or a < best_abs:
                    best, best_abs = (i, j), a
                    if a == 1:
                        return best
    return best


def smith_normal_form(A, verify=True) -> SmithDecomposition:
    """Deterministic SNF over Z with tracked unimodular transforms."""
    rows = len(A)
    cols = len(A[0]) if A else 0
    for row in A:
        if len(row) != cols:
            raise TreeformsError("ragged matrix")
    s = [list(row) for row in A]
    u, uinv = identity_matrix(rows), identity_matrix(rows)
    v, vinv = identity_matrix(cols), identity_matrix(cols)

    def swap_rows(i, j):
        if i != j:
            s[i], s[j] = s[j], s[i]
            u[i], u[j] = u[j], u[i]
            for r in uinv:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i != j:
            for r in s:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]
            vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(i, j, q):
        # row_i += q * row_j
        if q:
            s[i] = [a + q * b for a, b in zip(s[i], s[j])]
            u[i] = [a + q * b for a, b in zip(u[i], u[j])]
            for r in uinv:
                r[j] -= q * r[i]

    def add_col(j, i, q):
        # col_j += q * col_i
        if q:
            for r in s:
                r[j] += q * r[i]
            for r in v:
                r[j] += q * r[i]
            vinv[i] = [a - q * b for a, b in zip(vinv[i], vinv[j])]

    def negate_row(i):
        s[i] = [-a for a in s[i]]
        u[i] = [-a for a in u[i]]
        for r in uinv:
            r[i] = -r[i]

    def clear_at(t):
        # make (t,t) the gcd of the trailing block's row t / col t, zero the rest
        while True:
            piv = _find_pivot(s, t, rows, cols)
            if piv is None:
                return False
            swap_rows(piv[0], t)
            swap_cols(piv[1], t)
            if s[t][t] < 0:
                negate_row(t)
            dirty = False
            for i in range(t + 1, rows):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // s[t][t]))
                    if s[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // s[t][t]))
                    if s[t][j]:
                        dirty = True
            if not dirty:
                clean = all(s[i][t] == 0 for i in range(t + 1, rows)) and all(
                    s[t][j] == 0 for j in range(t + 1, cols)
                )
                if clean:
                    return True

    t = 0
    limit = min(rows, cols)
    while t < limit and clear_at(t):
        t += 1
    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for i in range(t - 1):
            a, b = s[i][i], s[i + 1][i + 1]
            if a and b % a != 0:
                add_col(i, i + 1, 1)
                clear_at(i)
                changed = True
    for i in range(t):
        if s[i][i] < 0:
            negate_row(i)
    diag = tuple(s[i][i] for i in range(min(rows, cols)))
    dec = SmithDecomposition(U=u, S=s, V=v, Uinv=uinv, Vinv=vinv, diagonal=diag)
    if verify:
        dec.check(A)
    return dec


def determinant_divisors(A, k):
    """gcd of all k x k minors; independent oracle for invariant factors."""
    import itertools
    import math

    rows = len(A)
    cols = len(A[0]) if A else 0
    g = 0
    for rsel in itertools.combinations(range(rows), k):
        for csel in itertools.combinations(range(cols), k):
            minor = [[A[i][j] for j in csel] for i in rsel]
            g = math.gcd(g, _det(minor))
            if g == 1:
                return 1
    return g


def _det(a):
    # fraction-free Bareiss elimination
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# relation-lattice plumbing


def row_space_basis(rows, cols):
    """Basis of the integer row space, by Euclidean column elimination.

    Only spans matter here, so the result is staircase-shaped but not
    fully reduced.  Deterministic for a fixed input order.
    """
    seen = set()
    pivots = {}
    for row in rows:
        r = list(row)
        key = tuple(r)
        if key in seen:
            continue
        seen.add(key)
        while True:
            c = next((j for j, e in enumerate(r) if e), None)
            if c is None:
                break
            if c in pivots:
                p = pivots[c]
                q = r[c] // p[c]
                r = [a - q * b for a, b in zip(r, p)]
                if r[c]:
                    pivots[c], r = r, p
            else:
                if r[c] < 0:
                    r = [-a for a in r]
                pivots[c] = r
                break
    return [pivots[c] for c in sorted(pivots)]


class RowLattice:
    """Integer span of a set of row vectors, with membership tests."""

    def __init__(self, rows, cols):
        self.cols = cols
        self.rows = [list(r) for r in rows]
        self._snf = smith_normal_form(self.rows, verify=False) if self.rows else None

    def contains(self, v) -> bool:
        if len(v) != self.cols:
            raise TreeformsError("dimension mismatch")
        if self._snf is None:
            return all(a == 0 for a in v)
        w = [0] * self.cols
        for j, c in enumerate(v):
            if c:
                row = self._snf.V[j]
                for k in range(self.cols):
                    if row[k]:
                        w[k] += c * row[k]
        diag = self._snf.diagonal
        for j in range(self.cols):
            d = diag[j] if j < len(diag) else 0
            if d == 0:
                if w[j] != 0:
                    return False
            elif w[j] % d != 0:
                return False
        return True


def left_kernel_basis(rows, cols):
    """Rows x with x * M = 0, for M given by `rows`."""
    if not rows:
        return []
    dec = smith_normal_form(rows, verify=False)
    diag = dec.diagonal
    out = []
    for i in range(len(rows)):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            out.append(list(dec.U[i]))
    return out


# ---------------------------------------------------------------------------
# finitely presented abelian groups


class FPAbelianGroup:
    """Z^g modulo the integer row span of a relation matrix.

    Normal forms come from the Smith decomposition of the transposed
    relation basis: two vectors represent the same element iff their
    `element_nf` tuples agree.
    """

    def __init__(self, generators, relations=(), names=None,
                 max_generators=None, max_relations=None):
        max_g = DEFAULT_MAX_GENERATORS if max_generators is None else max_generators
        max_r = DEFAULT_MAX_RELATIONS if max_relations is None else max_relations
        if generators > max_g:
            raise ResourceLimitError(f"{generators} generators exceeds cap {max_g}")
        if len(relations) > max_r:
            raise ResourceLimitError(f"{len(relations)} relations exceeds cap {max_r}")
        self.generators = generators
        self.relations = tuple(tuple(r) for r in relations)
        for r in self.relations:
            if len(r) != generators:
                raise TreeformsError(
                    f"relation length {len(r)} != generator count {generators}"
                )
        self.names = tuple(names) if names is not None else None
        if self.names is not None and len(self.names) != generators:
            raise TreeformsError("one name per generator required")
        self.rel_basis = row_space_basis(self.relations, generators)
        if self.rel_basis:
            a = transpose(self.rel_basis, cols=generators)
            dec = smith_normal_form(a)
            self._u = dec.U
            self._ucols = transpose(dec.U, cols=generators)
            self._diag = dec.diagonal
        else:
            self._u = identity_matrix(generators)
            self._ucols = identity_matrix(generators)
            self._diag = ()
        self._lattice = RowLattice(self.rel_basis, generators)
        self._name_index = (
            {nm: i for i, nm in enumerate(self.names)} if self.names else None
        )

    # -- structure ---------------------------------------------------------

    @property
    def invariant_factors(self):
        return tuple(d for d in self._diag if d > 1)

    @property
    def rank(self):
        return self.generators - sum(1 for d in self._diag if d != 0)

    def is_trivial(self):
        return self.rank == 0 and not self.invariant_factors

    def describe(self):
        parts = []
        if self.rank:
            parts.append(f"Z^{self.rank}" if self.rank > 1 else "Z")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"

    # -- elements ----------------------------------------------------------

    def element_nf(self, v):
        """Canonical coordinates; equal tuples iff equal group elements."""
        if len(v) != self.generators:
            raise TreeformsError(
                f"vector length {len(v)} != generator count {self.generators}"
            )
        y = [0] * self.generators
        for j, c in enumerate(v):
            if c:
                col = self._ucols[j]
                for i in range(self.generators):
                    if col[i]:
                        y[i] += c * col[i]
        out = []
        for i in range(self.generators):
            d = self._diag[i] if i < len(self._diag) else 0
            out.append(y[i] % d if d > 0 else y[i])
        return tuple(out)

    def is_zero(self, v) -> bool:
        return all(a == 0 for a in self.element_nf(v))

    def unit_vector(self, i):
        return tuple(1 if j == i else 0 for j in range(self.generators))

    def index_of(self, name):
        if self._name_index is None:
            raise TreeformsError("group has no generator names")
        return self._name_index[name]

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.invariant_factors)}

    def __repr__(self):
        return f"FPAbelianGroup({self.describe()}, g={self.generators})"


def fp_group(generators, relations=(), names=None, **caps) -> FPAbelianGroup:
    return FPAbelianGroup(generators, relations, names, **caps)


def tensor_Z2(g: FPAbelianGroup) -> FPAbelianGroup:
    """Tensor with Z/2: impose 2*gen = 0 on every generator."""
    doubling = [
        tuple(2 if j == i else 0 for j in range(g.generators))
        for i in range(g.generators)
    ]
    return FPAbelianGroup(g.generators, g.relations + tuple(doubling), g.names)


# ---------------------------------------------------------------------------
# homomorphisms


class GroupHom:
    """Homomorphism given on generators; checked against source relations."""

    def __init__(self, source: FPAbelianGroup, target: FPAbelianGroup, rows,
                 check=True):
        self.source = source
        self.target = target
        self.rows = tuple(tuple(r) for r in rows)
        if len(self.rows) != source.generators:
            raise TreeformsError("one image row per source generator required")
        for r in self.rows:
            if len(r) != target.generators:
                raise TreeformsError("image row length != target generator count")
        if check:
            for r in source.rel_basis:
                if not target.is_zero(self.apply(r)):
                    self._raise_not_well_defined()

    def _raise_not_well_defined(self):
        for idx, r in enumerate(self.source.relations):
            if not self.target.is_zero(self.apply(r)):
                raise TreeformsError(
                    f"hom not well-defined on relations (relation {idx}: {list(r)})"
                )
        raise TreeformsError("hom not well-defined on relations")

    def apply(self, v):
        if len(v) != self.source.generators:
            raise TreeformsError("dimension mismatch")
        out = [0] * self.target.generators
        for j, c in enumerate(v):
            if c:
                row = self.rows[j]
                for i in range(self.target.generators):
                    if row[i]:
                        out[i] += c * row[i]
        return out

    def __call__(self, v):
        return self.apply(v)

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self o inner."""
        if inner.target is not self.source and (
            inner.target.generators != self.source.generators
            or inner.target.relations != self.source.relations
        ):
            raise TreeformsError("composition domain mismatch")
        rows = [self.apply(r) for r in inner.rows]
        return GroupHom(inner.source, self.target, rows, check=False)

    def equals(self, other: "GroupHom") -> bool:
        if (self.source.generators != other.source.generators
                or self.target.generators != other.target.generators):
            return False
        return all(
            self.target.element_nf(a) == other.target.element_nf(b)
            for a, b in zip(self.rows, other.rows)
        )


def identity_hom(g: FPAbelianGroup) -> GroupHom:
    return GroupHom(g, g, identity_matrix(g.generators), check=False)


def zero_hom(source, target) -> GroupHom:
    return GroupHom(source, target,
                    [[0] * target.generators for _ in range(source.generators)],
                    check=False)


def hom(source, target, rows, check=True) -> GroupHom:
    return GroupHom(source, target, rows, check=check)


# ---------------------------------------------------------------------------
# kernels, images, cokernels, exactness


def _preimage_lattice(f: GroupHom):
    """Spanning rows for {x in Z^gs : f(x) = 0 in target}."""
    stacked = [list(r) for r in f.rows] + [list(r) for r in f.target.rel_basis]
    gs = f.source.generators
    kern = left_kernel_basis(stacked, f.target.generators)
    rows = [k[:gs] for k in kern]
    rows = row_space_basis(rows, gs)
    return rows


def kernel(f: GroupHom):
    """(K, incl) with K presented on a spanning set of the kernel lattice."""
    xrows = _preimage_lattice(f)
    k = len(xrows)
    stacked = [list(r) for r in xrows] + [list(r) for r in f.source.rel_basis]
    rel = [c[:k] for c in left_kernel_basis(stacked, f.source.generators)]
    grp = FPAbelianGroup(k, rel)
    incl = GroupHom(grp, f.source, xrows, check=True)
    return grp, incl


def image(f: GroupHom):
    """(I, emb) with I = source/kernel and emb the induced map to target."""
    xrows = _preimage_lattice(f)
    grp = FPAbelianGroup(f.source.generators, tuple(tuple(r) for r in xrows))
    emb = GroupHom(grp, f.target, f.rows, check=True)
    return grp, emb


def cokernel(f: GroupHom):
    """(C, proj) with C = target / image(f)."""
    rel = f.target.relations + f.rows
    grp = FPAbelianGroup(f.target.generators, rel, f.target.names)
    proj = GroupHom(f.target, grp, identity_matrix(f.target.generators), check=False)
    return grp, proj


def hom_is_isomorphism(f: GroupHom) -> bool:
    k, _ = kernel(f)
    if not k.is_trivial():
        return False
    c, _ = cokernel(f)
    return c.is_trivial()


def is_exact(f: GroupHom, g: GroupHom):
    """image(f) == kernel(g) as subgroups of the middle group.

    Returns (flag, certificate); on failure the certificate names a
    violating element of the middle group.
    """
    mid = f.target
    if g.source.generators != mid.generators or g.source.relations != mid.relations:
        raise TreeformsError("middle groups disagree")
    for j, row in enumerate(f.rows):
        if not g.target.is_zero(g.apply(row)):
            return False, {
                "reason": "composite not zero",
                "element": list(row),
                "source_generator": j,
            }
    image_lattice = RowLattice(
        [list(r) for r in f.rows] + [list(r) for r in mid.rel_basis],
        mid.generators,
    )
    for x in _preimage_lattice(g):
        if not image_lattice.contains(x):
            return False, {
                "reason": "kernel element not in image",
                "element": list(x),
            }
    return True, None
