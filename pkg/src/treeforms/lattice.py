"""Symmetric unimodular integer forms and their small quadratic invariants.

Provides exact signature computation by rational congruence
diagonalization, characteristic vectors with the torsor relation

    tau(c + 2x) - tau(c) = (lam(c, x) + lam(x, x)) / 2   (mod 2)

forced by the closed formula tau(c) = (lam(c, c) - signature) / 8, the
derived Kirby-Siebenmann-style Z/2 invariant, the Arf invariant of
quadratic refinements over GF(2) via a symplectic basis, and the Z/8
Gauss-sum invariant of Z/4-valued refinements, computed exactly in
Z[x]/(x^4 + 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import TreeformsError


# ---------------------------------------------------------------------------
# symmetric integer forms


@dataclass(frozen=True)
class SymIntForm:
    matrix: tuple

    def __post_init__(self):
        m = self.matrix
        r = len(m)
        for row in m:
            if len(row) != r:
                raise TreeformsError("form matrix must be square")
        for i in range(r):
            for j in range(r):
                if m[i][j] != m[j][i]:
                    raise TreeformsError("form matrix must be symmetric")

    @property
    def rank(self):
        return len(self.matrix)

    def evaluate(self, x, y):
        if len(x) != self.rank or len(y) != self.rank:
            raise TreeformsError("vector length mismatch")
        return sum(
            x[i] * self.matrix[i][j] * y[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def determinant(self):
        return _int_det([list(r) for r in self.matrix])

    def is_unimodular(self):
        return abs(self.determinant()) == 1


def form_from_rows(rows) -> SymIntForm:
    return SymIntForm(tuple(tuple(int(e) for e in row) for row in rows))


def diagonal_form(entries) -> SymIntForm:
    n = len(entries)
    return form_from_rows(
        [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]
    )


def e8_form() -> SymIntForm:
    """The even unimodular rank-8 form, as the standard Cartan matrix."""
    bonds = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]
    m = [[0] * 8 for _ in range(8)]
    for i in range(8):
        m[i][i] = 2
    for i, j in bonds:
        m[i][j] = m[j][i] = -1
    return form_from_rows(m)


def hyperbolic_form() -> SymIntForm:
    return form_from_rows([[0, 1], [1, 0]])


def _int_det(m):
    # fraction-free Bareiss
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def signature(form: SymIntForm) -> int:
    """Positive minus negative inertia, by exact congruence diagonalization.

    Pivots on nonzero diagonal entries; when the whole remaining
    diagonal vanishes, a row/column addition creates the standard
    2 lam(i, j) pivot.  Raises on rationally degenerate forms.
    """
    n = form.rank
    a = [[Fraction(e) for e in row] for row in form.matrix]
    pos = neg = 0
    todo = list(range(n))
    while todo:
        piv = next((i for i in todo if a[i][i] != 0), None)
        if piv is None:
            ij = next(
                ((i, j) for i in todo for j in todo if i != j and a[i][j] != 0),
                None,
            )
            if ij is None:
                raise TreeformsError("degenerate form has no signature")
            i, j = ij
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        todo.remove(piv)
        for i in todo:
            if a[i][piv] != 0:
                q = a[i][piv] / d
                for k in range(n):
                    a[i][k] -= q * a[piv][k]
                for k in range(n):
                    a[k][i] -= q * a[k][piv]
    return pos - neg


# ---------------------------------------------------------------------------
# characteristic vectors, tau, and the Z/2 smoothing invariant


def is_characteristic(form: SymIntForm, c) -> bool:
    """lam(c, x) = lam(x, x) mod 2 for all x; basis vectors suffice."""
    if not form.is_unimodular():
        raise TreeformsError("characteristic vectors need a unimodular form")
    n = form.rank
    for i in range(n):
        ei = [1 if j == i else 0 for j in range(n)]
        if (form.evaluate(c, ei) - form.matrix[i][i]) % 2:
            return False
    return True


def find_characteristic(form: SymIntForm):
    """The unique characteristic vector with entries in {0, 1}."""
    if not form.is_unimodular():
        raise TreeformsError("characteristic vectors need a unimodular form")
    n = form.rank
    rows = [[form.matrix[i][j] % 2 for j in range(n)] for i in range(n)]
    rhs = [form.matrix[i][i] % 2 for i in range(n)]
    sol = _gf2_solve(rows, rhs)
    if sol is None:
        raise TreeformsError("mod-2 system unsolvable; form cannot be unimodular")
    return list(sol)


def _gf2_solve(rows, rhs):
    n = len(rows)
    a = [rows[i][:] + [rhs[i]] for i in range(n)]
    cols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, n) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(n):
            if i != r and a[i][c]:
                a[i] = [(x + y) % 2 for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n):
        if a[i][cols]:
            return None
    sol = [0] * cols
    for i, c in enumerate(pivots):
        sol[c] = a[i][cols]
    return sol


def tau(form: SymIntForm, c) -> int:
    """(lam(c, c) - signature) / 8 mod 2 for a characteristic vector c."""
    if not is_characteristic(form, c):
        raise TreeformsError(f"{c} is not characteristic")
    diff = form.evaluate(c, c) - signature(form)
    if diff % 8:
        # classical: lam(c,c) = signature mod 8 for unimodular forms
        raise TreeformsError(
            f"eight-divisibility violated: lam(c,c) - sig = {diff}"
        )
    return (diff // 8) % 2


def ks(form: SymIntForm, c, tau_c: int) -> int:
    """tau_c + (lam(c, c) - signature) / 8 mod 2; independent of c when
    tau_c transforms by the torsor relation."""
    if not is_characteristic(form, c):
        raise TreeformsError(f"{c} is not characteristic")
    diff = form.evaluate(c, c) - signature(form)
    if diff % 8:
        raise TreeformsError(
            f"eight-divisibility violated: lam(c,c) - sig = {diff}"
        )
    return (tau_c + diff // 8) % 2


def torsor_check(form: SymIntForm, c, x):
    """Verify tau(c + 2x) - tau(c) = (lam(c, x) + lam(x, x)) / 2 mod 2."""
    if not is_characteristic(form, c):
        raise TreeformsError(f"{c} is not characteristic")
    shifted = [ci + 2 * xi for ci, xi in zip(c, x)]
    lhs = (tau(form, shifted) - tau(form, c)) % 2
    num = form.evaluate(c, x) + form.evaluate(x, x)
    if num % 2:
        raise TreeformsError("parity broken: c is not characteristic")
    rhs = (num // 2) % 2
    return {"lhs": lhs, "rhs": rhs, "passed": lhs == rhs}


# ---------------------------------------------------------------------------
# quadratic refinements over GF(2) and the Arf invariant


@dataclass(frozen=True)
class Z2QuadraticSpace:
    """(V, lam, q) over GF(2) with q(x+y) = q(x) + q(y) + lam(x, y)."""

    bilinear: tuple
    qvals: tuple

    def __post_init__(self):
        d = len(self.bilinear)
        for row in self.bilinear:
            if len(row) != d:
                raise TreeformsError("bilinear matrix must be square")
        if len(self.qvals) != d:
            raise TreeformsError("one q value per basis vector required")
        for i in range(d):
            for j in range(d):
                if self.bilinear[i][j] % 2 != self.bilinear[j][i] % 2:
                    raise TreeformsError("bilinear matrix must be symmetric")

    @property
    def dim(self):
        return len(self.bilinear)

    def b(self, x, y):
        return (
            sum(x[i] * self.bilinear[i][j] * y[j]
                for i in range(self.dim) for j in range(self.dim))
            % 2
        )

    def q(self, x):
        total = sum(x[i] * self.qvals[i] for i in range(self.dim))
        total += sum(
            x[i] * x[j] * self.bilinear[i][j]
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
        )
        return total % 2

    def is_even(self):
        return all(self.bilinear[i][i] % 2 == 0 for i in range(self.dim))

    def is_nonsingular(self):
        return _gf2_det(self.bilinear) == 1


def _gf2_det(rows):
    n = len(rows)
    a = [[e % 2 for e in row] for row in rows]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        a[c], a[piv] = a[piv], a[c]
        for i in range(c + 1, n):
            if a[i][c]:
                a[i] = [(x + y) % 2 for x, y in zip(a[i], a[c])]
    return 1


def z2_space(bilinear, qvals) -> Z2QuadraticSpace:
    return Z2QuadraticSpace(
        tuple(tuple(e % 2 for e in row) for row in bilinear),
        tuple(v % 2 for v in qvals),
    )


def hyperbolic_z2(pairs: int, qvals=None) -> Z2QuadraticSpace:
    d = 2 * pairs
    b = [[0] * d for _ in range(d)]
    for k in range(pairs):
        b[2 * k][2 * k + 1] = b[2 * k + 1][2 * k] = 1
    return z2_space(b, qvals if qvals is not None else [0] * d)


def parity(space: Z2QuadraticSpace) -> str:
    if not space.is_nonsingular():
        raise TreeformsError("singular form has no parity classification here")
    return "even" if space.is_even() else "odd"


def has_z2_refinement(space: Z2QuadraticSpace) -> bool:
    """Z/2-valued refinements exist exactly for even nonsingular forms."""
    return parity(space) == "even"


def _symplectic_basis(space: Z2QuadraticSpace):
    d = space.dim
    basis = [[1 if j == i else 0 for j in range(d)] for i in range(d)]
    pairs = []
    while basis:
        u = basis[0]
        v = next((w for w in basis[1:] if space.b(u, w) == 1), None)
        if v is None:
            raise TreeformsError("singular or odd form: no symplectic partner")
        pairs.append((u, v))
        reduced = []
        for w in basis:
            if w is u or w is v:
                continue
            coeff_u = space.b(w, v)
            coeff_v = space.b(w, u)
            nw = [
                (w[i] + coeff_u * u[i] + coeff_v * v[i]) % 2 for i in range(d)
            ]
            if any(nw):
                reduced.append(nw)
        basis = _gf2_independent(reduced)
    return pairs


def _gf2_independent(vectors):
    out = []
    pivots = {}
    for v in vectors:
        w = v[:]
        for c, pv in pivots.items():
            if w[c]:
                w = [(a + b) % 2 for a, b in zip(w, pv)]
        lead = next((i for i, e in enumerate(w) if e), None)
        if lead is not None:
            pivots[lead] = w
            out.append(w)
    return out


def arf_z2(space: Z2QuadraticSpace) -> int:
    """Arf invariant via a symplectic basis: sum of q(a_i) q(b_i)."""
    if not space.is_nonsingular():
        raise TreeformsError("Arf invariant needs a nonsingular form")
    if not space.is_even():
        raise TreeformsError("Z/2 Arf invariant needs an even form")
    pairs = _symplectic_basis(space)
    return sum(space.q(a) * space.q(b) for a, b in pairs) % 2


def arf_democratic(space: Z2QuadraticSpace) -> int:
    """Majority vote of q over the whole space; oracle for arf_z2."""
    import itertools

    zeros = ones = 0
    for x in itertools.product((0, 1), repeat=space.dim):
        if space.q(list(x)):
            ones += 1
        else:
            zeros += 1
    if zeros == ones:
        raise TreeformsError("no majority; not a nonsingular even refinement")
    return 0 if zeros > ones else 1


def orthogonal_sum_z2(a: Z2QuadraticSpace, b: Z2QuadraticSpace) -> Z2QuadraticSpace:
    d1, d2 = a.dim, b.dim
    bil = [[0] * (d1 + d2) for _ in range(d1 + d2)]
    for i in range(d1):
        for j in range(d1):
            bil[i][j] = a.bilinear[i][j]
    for i in range(d2):
        for j in range(d2):
            bil[d1 + i][d1 + j] = b.bilinear[i][j]
    return z2_space(bil, list(a.qvals) + list(b.qvals))


# ---------------------------------------------------------------------------
# Z/4-valued refinements and the Z/8 Gauss-sum invariant


@dataclass(frozen=True)
class Z4Refinement:
    """mu: V -> Z/4 with mu(x+y) = mu(x) + mu(y) + 2 lam(x, y).

    Compatibility mu(x) = lam(x, x) mod 2 is enforced on the basis and
    propagates by the quadratic expansion.
    """

    bilinear: tuple
    muvals: tuple

    def __post_init__(self):
        d = len(self.bilinear)
        for row in self.bilinear:
            if len(row) != d:
                raise TreeformsError("bilinear matrix must be square")
        if len(self.muvals) != d:
            raise TreeformsError("one mu value per basis vector required")
        for i in range(d):
            for j in range(d):
                if self.bilinear[i][j] % 2 != self.bilinear[j][i] % 2:
                    raise TreeformsError("bilinear matrix must be symmetric")
        for i in range(d):
            if self.muvals[i] % 2 != self.bilinear[i][i] % 2:
                raise TreeformsError(
                    f"mu(e_{i}) must reduce to lam(e_{i}, e_{i}) mod 2"
                )

    @property
    def dim(self):
        return len(self.bilinear)

    def b(self, x, y):
        return (
            sum(x[i] * self.bilinear[i][j] * y[j]
                for i in range(self.dim) for j in range(self.dim))
            % 2
        )

    def mu(self, x):
        total = sum(x[i] * self.muvals[i] for i in range(self.dim))
        total += 2 * sum(
            x[i] * x[j] * self.bilinear[i][j]
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
        )
        return total % 4

    def is_nonsingular(self):
        return _gf2_det(self.bilinear) == 1


def z4_refinement(bilinear, muvals) -> Z4Refinement:
    return Z4Refinement(
        tuple(tuple(e % 2 for e in row) for row in bilinear),
        tuple(v % 4 for v in muvals),
    )


def z4_from_z2(space: Z2QuadraticSpace) -> Z4Refinement:
    """Double a Z/2 refinement of an even form into a Z/4 refinement."""
    if not space.is_even():
        raise TreeformsError("doubling needs an even form")
    return z4_refinement(space.bilinear, [2 * v for v in space.qvals])


def orthogonal_sum_z4(a: Z4Refinement, b: Z4Refinement) -> Z4Refinement:
    d1, d2 = a.dim, b.dim
    bil = [[0] * (d1 + d2) for _ in range(d1 + d2)]
    for i in range(d1):
        for j in range(d1):
            bil[i][j] = a.bilinear[i][j]
    for i in range(d2):
        for j in range(d2):
            bil[d1 + i][d1 + j] = b.bilinear[i][j]
    return z4_refinement(bil, list(a.muvals) + list(b.muvals))


def _cyc8_mul(a, b):
    # multiply in Z[x]/(x^4 + 1)
    out = [0, 0, 0, 0]
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    k = i + j
                    if k >= 4:
                        out[k - 4] -= ai * bj
                    else:
                        out[k] += ai * bj
    return out


def _cyc8_pow(a, n):
    out = [1, 0, 0, 0]
    for _ in range(n):
        out = _cyc8_mul(out, a)
    return out


def brown_z8(refinement: Z4Refinement) -> int:
    """Gauss-sum invariant: sum over V of i^mu = (sqrt 2)^dim zeta8^beta.

    Computed exactly in Z[x]/(x^4 + 1) with i = x^2 and
    sqrt 2 = x - x^3; returns beta in Z/8.  A sum that matches no beta
    certifies that the data was not a refinement.
    """
    import itertools

    if not refinement.is_nonsingular():
        raise TreeformsError("Gauss-sum invariant needs a nonsingular form")
    total = [0, 0, 0, 0]
    for x in itertools.product((0, 1), repeat=refinement.dim):
        e = (2 * refinement.mu(list(x))) % 8
        term = [0, 0, 0, 0]
        if e < 4:
            term[e % 4] = 1
        else:
            term[e % 4] = -1
        total = [a + b for a, b in zip(total, term)]
    magnitude = _cyc8_pow([0, 1, 0, -1], refinement.dim)  # (sqrt 2)^dim
    for beta in range(8):
        cand = _cyc8_mul(magnitude, _cyc8_pow([0, 1, 0, 0], beta))
        if cand == total:
            return beta
    raise TreeformsError(
        f"Gauss sum {total} is not (sqrt 2)^{refinement.dim} * zeta8^k: "
        "the data is not a quadratic refinement"
    )


NAMED_FORMS = {
    "E8": e8_form,
    "H": hyperbolic_form,
}


def named_form(name: str) -> SymIntForm:
    key = name.strip()
    if key in NAMED_FORMS:
        return NAMED_FORMS[key]()
    if key.startswith("diag(") and key.endswith(")"):
        entries = [int(s) for s in key[5:-1].split(",") if s.strip()]
        return diagonal_form(entries)
    raise TreeformsError(f"unknown named form {name!r}")
