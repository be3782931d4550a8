"""Exact integer linear algebra for finitely presented abelian groups.

Everything here works with plain Python integers, so intermediate values
never overflow.  A group is presented as ``Z^basis / <relations>`` where the
relation rows are integer vectors over an ordered list of opaque labels.

>>> g = present(["a", "b"], [K0Element({"a": 2}), K0Element({"a": 1, "b": 3})])
>>> g.invariant_factors, g.free_rank
((6,), 0)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

__all__ = [
    "IntMatrix",
    "SmithForm",
    "K0Element",
    "FpGroup",
    "GroupHom",
    "Lattice",
    "AbelianError",
    "IllDefinedHomError",
    "snf",
    "present",
    "member",
    "induced_hom",
    "is_isomorphism",
    "left_kernel",
]


class AbelianError(ValueError):
    """Raised on malformed input (unknown labels, shape mismatches)."""


class IllDefinedHomError(AbelianError):
    """Raised when a generator assignment does not respect the relations."""


# ---------------------------------------------------------------------------
# Matrices


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major as a flat tuple."""

    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise AbelianError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise AbelianError(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise AbelianError("column count needed for an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise AbelianError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, k: int) -> "IntMatrix":
        return cls(k, k, tuple(int(i == j) for i in range(k) for j in range(k)))

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntMatrix":
        return cls(r, c, (0,) * (r * c))

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> List[int]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> List[List[int]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise AbelianError("shape mismatch in product")
        b = other.to_rows()
        out = []
        for i in range(self.rows):
            a = self.row(i)
            acc = [0] * other.cols
            for k, x in enumerate(a):
                if x:
                    bk = b[k]
                    for j in range(other.cols):
                        acc[j] += x * bk[j]
            out.append(acc)
        return IntMatrix.from_rows(out, other.cols)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise AbelianError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for r in range(k + 1, n):
                    if a[r][k]:
                        a[k], a[r] = a[r], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SmithForm:
    """``U * M * V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def snf(M: IntMatrix) -> SmithForm:
    """Smith normal form with transformation matrices.

    The diagonal is canonical (nonnegative, each entry dividing the next);
    ``U`` and ``V`` are some unimodular pair realizing it.
    """
    m, n = M.rows, M.cols
    A = M.to_rows()
    U = IntMatrix.identity(m).to_rows()
    V = IntMatrix.identity(n).to_rows()

    def row_comb(i, k, a, b, c, d):
        # rows (i, k) <- (a*ri + b*rk, c*ri + d*rk) with ad - bc = +-1
        for mat in (A, U):
            ri, rk = mat[i], mat[k]
            mat[i] = [a * x + b * y for x, y in zip(ri, rk)]
            mat[k] = [c * x + d * y for x, y in zip(ri, rk)]

    def col_comb(j, k, a, b, c, d):
        for mat in (A, V):
            for r in mat:
                x, y = r[j], r[k]
                r[j] = a * x + b * y
                r[k] = c * x + d * y

    t = 0
    while t < min(m, n):
        # pick the nonzero entry of least absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            A[i], A[t] = A[t], A[i]
            U[i], U[t] = U[t], U[i]
        if j != t:
            for mat in (A, V):
                for r in mat:
                    r[j], r[t] = r[t], r[j]
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    p, q = A[t][t], A[i][t]
                    if q % p == 0:
                        row_comb(t, i, 1, 0, -(q // p), 1)
                    else:
                        g, s, u = _xgcd(p, q)
                        row_comb(t, i, s, u, -q // g, p // g)
            for j in range(t + 1, n):
                if A[t][j]:
                    p, q = A[t][t], A[t][j]
                    if q % p == 0:
                        col_comb(t, j, 1, 0, -(q // p), 1)
                    else:
                        g, s, u = _xgcd(p, q)
                        col_comb(t, j, s, u, -q // g, p // g)
                        done = False
            if done:
                # pivot must divide the rest of the block
                p = A[t][t]
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                for mat in (A, U):
                    mat[t] = [x + y for x, y in zip(mat[t], mat[bad])]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SmithForm(
        IntMatrix.from_rows(U, m),
        IntMatrix.from_rows(A, n),
        IntMatrix.from_rows(V, n),
    )


# ---------------------------------------------------------------------------
# Lattices in row echelon form


class Lattice:
    """A sublattice of ``Z^dim`` kept as an echelon basis.

    Rows are inserted one at a time; each stored row has a positive pivot
    and zeros before it.  Membership is decided by exact reduction.
    """

    def __init__(self, dim: int, rows: Iterable[Sequence[int]] = ()):
        self.dim = dim
        self._piv: Dict[int, List[int]] = {}
        for r in rows:
            self.add(r)

    def _reduce(self, v: List[int]) -> List[int]:
        for c in range(self.dim):
            x = v[c]
            if x:
                p = self._piv.get(c)
                if p is None:
                    return v
                q = x // p[c]
                if q:
                    v = [a - q * b for a, b in zip(v, p)]
                if v[c]:
                    return v
        return v

    def add(self, row: Sequence[int]) -> bool:
        """Insert a generator; return True if the lattice grew."""
        v = list(row)
        if len(v) != self.dim:
            raise AbelianError("vector length does not match lattice dimension")
        grew = False
        c = 0
        while c < self.dim:
            x = v[c]
            if not x:
                c += 1
                continue
            p = self._piv.get(c)
            if p is None:
                if x < 0:
                    v = [-a for a in v]
                self._piv[c] = v
                return True
            if x % p[c] == 0:
                q = x // p[c]
                v = [a - q * b for a, b in zip(v, p)]
                c += 1
                continue
            g, s, t = _xgcd(p[c], x)
            new = [s * a + t * b for a, b in zip(p, v)]
            v = [(x // g) * a - (p[c] // g) * b for a, b in zip(p, v)]
            self._piv[c] = new
            grew = True
            c += 1
        return grew

    def __contains__(self, row: Sequence[int]) -> bool:
        v = list(row)
        for c in range(self.dim):
            x = v[c]
            if x:
                p = self._piv.get(c)
                if p is None or x % p[c]:
                    return False
                q = x // p[c]
                v = [a - q * b for a, b in zip(v, p)]
        return True

    @property
    def rank(self) -> int:
        return len(self._piv)

    def basis(self) -> List[List[int]]:
        """Hermite normal form rows (entries above each pivot reduced)."""
        cols = sorted(self._piv)
        rows = [list(self._piv[c]) for c in cols]
        for k, c in enumerate(cols):
            for i in range(k):
                q = rows[i][c] // rows[k][c]
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[k])]
        return rows

    def is_full(self) -> bool:
        """True iff the lattice is all of ``Z^dim``."""
        return self.rank == self.dim and all(p[c] == 1 for c, p in self._piv.items())


def left_kernel(rows: Sequence[Sequence[int]], cols: int) -> List[List[int]]:
    """Basis of ``{x : x * A == 0}`` over the integers, ``A`` given by rows."""
    k = len(rows)
    aug = [list(r) + [int(i == j) for j in range(k)] for i, r in enumerate(rows)]
    piv: Dict[int, List[int]] = {}
    kernel = []
    for v in aug:
        c = 0
        while c < cols:
            x = v[c]
            if not x:
                c += 1
                continue
            p = piv.get(c)
            if p is None:
                piv[c] = v
                v = None
                break
            g, s, t = _xgcd(p[c], x)
            new = [s * a + t * b for a, b in zip(p, v)]
            v = [(x // g) * a - (p[c] // g) * b for a, b in zip(p, v)]
            piv[c] = new
            c += 1
        if v is not None:
            kernel.append(v[cols:])
    return kernel


# ---------------------------------------------------------------------------
# Group elements and groups


class K0Element:
    """Finitely supported integer combination of labels."""

    __slots__ = ("_c", "_h")

    def __init__(self, coefficients: Optional[Mapping[str, int]] = None):
        self._c = {k: int(v) for k, v in (coefficients or {}).items() if v}
        self._h = None

    @classmethod
    def basis_vector(cls, label: str) -> "K0Element":
        return cls({label: 1})

    @classmethod
    def from_vector(cls, basis: Sequence[str], vec: Sequence[int]) -> "K0Element":
        return cls(dict(zip(basis, vec)))

    @property
    def coefficients(self) -> Dict[str, int]:
        return dict(self._c)

    def __getitem__(self, label: str) -> int:
        return self._c.get(label, 0)

    def support(self) -> List[str]:
        return sorted(self._c)

    def to_vector(self, basis: Sequence[str]) -> List[int]:
        index = {b: i for i, b in enumerate(basis)}
        vec = [0] * len(basis)
        for k, v in self._c.items():
            if k not in index:
                raise AbelianError(f"label {k!r} is not in the basis")
            vec[index[k]] = v
        return vec

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other: "K0Element") -> "K0Element":
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return K0Element(out)

    def __neg__(self) -> "K0Element":
        return K0Element({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "K0Element") -> "K0Element":
        return self + (-other)

    def __rmul__(self, k: int) -> "K0Element":
        return K0Element({a: k * v for a, v in self._c.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, K0Element) and self._c == other._c

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(frozenset(self._c.items()))
        return self._h

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c):
            v = self._c[k]
            sign = "-" if v < 0 else "+"
            mag = "" if abs(v) == 1 else f"{abs(v)}*"
            parts.append(f"{sign} {mag}[{k}]")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _sum(elements: Iterable[K0Element]) -> K0Element:
    out: Dict[str, int] = {}
    for e in elements:
        for k, v in e._c.items():
            out[k] = out.get(k, 0) + v
    return K0Element(out)


@dataclass(frozen=True, eq=False)
class FpGroup:
    """``Z^basis / relations`` with canonical invariants.

    ``relations`` holds the Hermite normal form of the relation lattice,
    which presents the same group as the rows originally supplied.
    """

    basis: Tuple[str, ...]
    relations: IntMatrix
    invariant_factors: Tuple[int, ...]
    free_rank: int
    _lattice: Lattice = field(repr=False, compare=False, default=None)
    _V: Optional[IntMatrix] = field(repr=False, compare=False, default=None)
    _diag: Tuple[int, ...] = field(repr=False, compare=False, default=())

    @property
    def lattice(self) -> Lattice:
        return self._lattice

    def canonical(self) -> Tuple[Tuple[int, ...], int]:
        return self.invariant_factors, self.free_rank

    def order(self) -> Optional[int]:
        """Number of elements, or None for an infinite group."""
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_zero(self, e: K0Element) -> bool:
        return e.to_vector(self.basis) in self._lattice

    def equal(self, a: K0Element, b: K0Element) -> bool:
        return self.is_zero(a - b)

    def coordinates(self, e: K0Element) -> List[int]:
        """Coordinates in ``Z/d_1 + ... + Z/d_k + Z^r`` (torsion reduced mod d_i)."""
        vec = e.to_vector(self.basis)
        m = len(self.basis)
        V = self._V.to_rows() if self._V is not None else IntMatrix.identity(m).to_rows()
        y = [sum(vec[k] * V[k][i] for k in range(m)) for i in range(m)]
        out = []
        for i in range(m):
            d = self._diag[i] if i < len(self._diag) else 0
            if d == 1:
                continue
            out.append(y[i] % d if d else y[i])
        return out

    def describe(self) -> str:
        if self.is_trivial():
            return "trivial group"
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        text = " + ".join(parts)
        if not self.invariant_factors:
            text = f"free rank {self.free_rank}"
        return text

    def isomorphic(self, other: "FpGroup") -> bool:
        return self.canonical() == other.canonical()


def present(basis: Sequence[str], relations: Iterable[K0Element]) -> FpGroup:
    """Build ``Z^basis / <relations>`` and compute its invariant factors."""
    basis = tuple(basis)
    if len(set(basis)) != len(basis):
        raise AbelianError("duplicate basis label")
    index = {b: i for i, b in enumerate(basis)}
    lat = Lattice(len(basis))
    for r in relations:
        vec = [0] * len(basis)
        for k, v in r._c.items():
            if k not in index:
                raise AbelianError(f"relation mentions unknown label {k!r}")
            vec[index[k]] = v
        lat.add(vec)
    return _group_from_lattice(basis, lat)


def _group_from_lattice(basis: Tuple[str, ...], lat: Lattice) -> FpGroup:
    rows = lat.basis()
    m = len(basis)
    mat = IntMatrix.from_rows(rows, m)
    if rows:
        form = snf(mat)
        diag, V = form.diagonal, form.V
    else:
        diag, V = [], IntMatrix.identity(m)
    nonzero = [d for d in diag if d]
    return FpGroup(
        basis=basis,
        relations=mat,
        invariant_factors=tuple(d for d in nonzero if d > 1),
        free_rank=m - len(nonzero),
        _lattice=lat,
        _V=V,
        _diag=tuple(nonzero),
    )


def member(subgroup_gens: Sequence[K0Element], v: K0Element,
           basis: Optional[Sequence[str]] = None) -> bool:
    """Is ``v`` an integer combination of ``subgroup_gens``?"""
    if basis is None:
        labels = set(v.support())
        for g in subgroup_gens:
            labels.update(g.support())
        basis = sorted(labels)
    lat = Lattice(len(basis), (g.to_vector(basis) for g in subgroup_gens))
    return v.to_vector(basis) in lat


# ---------------------------------------------------------------------------
# Homomorphisms


@dataclass(frozen=True, eq=False)
class GroupHom:
    """A homomorphism given by the images of the source generators."""

    source: FpGroup
    target: FpGroup
    gen_images: Tuple[K0Element, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.gen_images) != len(self.source.basis):
            raise AbelianError("need exactly one image per source generator")

    def image_of(self, label: str) -> K0Element:
        return self.gen_images[self.source.basis.index(label)]

    def __call__(self, e: K0Element) -> K0Element:
        index = {b: i for i, b in enumerate(self.source.basis)}
        out: Dict[str, int] = {}
        for k, v in e._c.items():
            if k not in index:
                raise AbelianError(f"label {k!r} is not a source generator")
            for t, w in self.gen_images[index[k]]._c.items():
                out[t] = out.get(t, 0) + v * w
        return K0Element(out)

    def matrix(self) -> List[List[int]]:
        """Row ``i`` is the image of source generator ``i``."""
        return [g.to_vector(self.target.basis) for g in self.gen_images]

    def compose(self, first: "GroupHom") -> "GroupHom":
        """``self`` after ``first``."""
        if first.target.basis != self.source.basis:
            raise AbelianError("composition across different bases")
        return GroupHom(first.source, self.target,
                        tuple(self(g) for g in first.gen_images),
                        name=f"{self.name}*{first.name}")

    def agrees_with(self, other: "GroupHom") -> List[str]:
        """Source generators on which the two maps differ in the target group."""
        if self.source.basis != other.source.basis or self.target.basis != other.target.basis:
            raise AbelianError("maps have different source or target")
        return [b for b, x, y in zip(self.source.basis, self.gen_images, other.gen_images)
                if not self.target.equal(x, y)]


def induced_hom(source: FpGroup, target: FpGroup, gen_images: Sequence[K0Element],
                name: str = "") -> GroupHom:
    """Check that the assignment kills every source relation, then return it."""
    h = GroupHom(source, target, tuple(gen_images), name=name)
    for g in h.gen_images:
        g.to_vector(target.basis)
    for row in source.relations.to_rows():
        img = h(K0Element.from_vector(source.basis, row))
        if not target.is_zero(img):
            rel = K0Element.from_vector(source.basis, row)
            raise IllDefinedHomError(
                f"{name or 'assignment'} sends relation {rel!r} to nonzero {img!r}")
    return h


def is_surjective(h: GroupHom) -> bool:
    lat = Lattice(len(h.target.basis), h.matrix())
    for r in h.target.relations.to_rows():
        lat.add(r)
    return lat.is_full()


def is_injective(h: GroupHom) -> bool:
    t = len(h.target.basis)
    rows = h.matrix() + [[-x for x in r] for r in h.target.relations.to_rows()]
    s = len(h.source.basis)
    for k in left_kernel(rows, t):
        if k[:s] not in h.source.lattice:
            return False
    return True


def is_isomorphism(h: GroupHom) -> bool:
    """Bijectivity decided exactly on the presentations."""
    return is_surjective(h) and is_injective(h)
