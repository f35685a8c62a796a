"""Newton paths, their dual cones, and generating functions over cones.

Two fans are built here.  The quasi-ordinary one comes from the monotone
path of compact faces: one edge cone per edge and vertex regions obtained
by inclusion and exclusion of simplicial cones.  The general one handles
any Newton polyhedron by enumerating facets, building the face lattice
and triangulating normal cones by pulling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from .errors import DimensionGuard, InvalidCone, InvalidInput
from .exactalg import UniPoly, factor_irreducible
from .mpoly import MPoly, QOPair, edge_lattice, face_poly_w, monotone_path
from .rings import MotivicExpr, RatFuncS

Vec = tuple[int, ...]


# ---------------------------------------------------------------- lattice helpers


def _rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def _det(rows: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] / m[col][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def _solve(cols: Sequence[Vec], target: Sequence) -> list[Fraction] | None:
    """Coefficients mu with sum mu_j cols_j = target, or None."""
    k = len(cols)
    n = len(target)
    aug = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    row = 0
    pivots = []
    for col in range(k):
        piv = next((i for i in range(row, n) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [a * inv for a in aug[row]]
        for i in range(n):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    if any(aug[i][k] != 0 for i in range(row, n)):
        return None
    mu = [Fraction(0)] * k
    for i, col in enumerate(pivots):
        mu[col] = aug[i][k]
    return mu


def primitive(v: Sequence) -> Vec:
    """Primitive integer vector on the ray of v."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise InvalidCone("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def _rational_kernel(rows: Sequence[Sequence], n: int) -> list[Vec]:
    """Integer vectors spanning the rational kernel of rows."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [a * inv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fcol]
        out.append(primitive(v))
    return out


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> list[Vec]:
    """Z-basis of {k in Z^n : rows * k = 0} by unimodular column reduction."""
    B = [list(r) for r in rows]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]  # columns of U

    def colop(i: int, j: int, a: int, b: int, c: int, d: int) -> None:
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for row in B:
            row[i], row[j] = a * row[i] + b * row[j], c * row[i] + d * row[j]
        ui, uj = U[i], U[j]
        U[i] = [a * x + b * y for x, y in zip(ui, uj)]
        U[j] = [c * x + d * y for x, y in zip(ui, uj)]

    pivot = 0
    for row in B:
        if pivot >= n:
            break
        for j in range(pivot + 1, n):
            x, y = row[pivot], row[j]
            if y == 0:
                continue
            g, s, t = _ext_gcd(x, y)
            colop(pivot, j, s, t, -y // g, x // g)
        if row[pivot] != 0:
            pivot += 1
    return [tuple(U[j]) for j in range(pivot, n)]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def minors_gcd(gens: Sequence[Vec]) -> int:
    """gcd of the maximal minors of the generator matrix."""
    k = len(gens)
    n = len(gens[0])
    g = 0
    for cols in combinations(range(n), k):
        g = gcd(g, int(_det([[v[c] for c in cols] for v in gens])))
    return g


# ---------------------------------------------------------------- simplicial cones


class SimplicialCone:
    """Cone spanned by linearly independent nonnegative integer vectors."""

    def __init__(self, gens: Sequence[Sequence[int]]):
        gens = tuple(tuple(int(x) for x in g) for g in gens)
        if not gens:
            raise InvalidCone("a cone needs at least one generator")
        n = len(gens[0])
        if any(len(g) != n for g in gens):
            raise InvalidCone("generators of different lengths")
        if any(not any(g) for g in gens):
            raise InvalidCone("zero generator")
        if _rank(gens) != len(gens):
            raise InvalidCone("generators are linearly dependent")
        self.gens = gens
        self.ambient = n
        self._fund: list[Vec] | None = None

    @property
    def dim(self) -> int:
        return len(self.gens)

    def multiplicity(self) -> int:
        return minors_gcd(self.gens)

    def _lattice_basis(self) -> list[Vec]:
        if self.dim == self.ambient:
            return [tuple(1 if i == j else 0 for j in range(self.ambient)) for i in range(self.ambient)]
        comp = _rational_kernel(self.gens, self.ambient)
        return integer_kernel(comp, self.ambient)

    def fundamental_set(self) -> list[Vec]:
        """Lattice points sum mu_j a_j with 0 < mu_j <= 1."""
        if self._fund is not None:
            return self._fund
        basis = self._lattice_basis()
        # coordinates of basis vectors in terms of the generators
        images = []
        for v in basis:
            mu = _solve(self.gens, v)
            if mu is None:  # pragma: no cover - basis lies in the span
                raise InvalidCone("lattice basis outside the cone span")
            images.append(mu)

        def reduce(mu):
            return tuple(m - (m.numerator // m.denominator) if m != int(m) else Fraction(1) for m in mu)

        start = tuple(Fraction(1) for _ in self.gens)
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for mu in frontier:
                for im in images:
                    cand = reduce([a + b for a, b in zip(mu, im)])
                    if cand not in seen:
                        seen.add(cand)
                        nxt.append(cand)
            frontier = nxt
        pts = []
        for mu in seen:
            pt = [sum(m * g[i] for m, g in zip(mu, self.gens)) for i in range(self.ambient)]
            pts.append(tuple(int(x) for x in pt))
        if len(pts) != self.multiplicity():
            raise InvalidCone("fundamental set size differs from the multiplicity")
        self._fund = sorted(pts)
        return self._fund

    def contains_relint(self, k: Sequence[int]) -> bool:
        mu = _solve(self.gens, k)
        return mu is not None and all(m > 0 for m in mu)

    def __repr__(self):
        return f"SimplicialCone({list(self.gens)})"


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def genfun(cone: SimplicialCone, sigma: Sequence[int], point: Sequence[int]) -> MotivicExpr:
    """Sum over the relative interior of L^-sigma(k) T^(k . point)."""
    num = {}
    for g in cone.fundamental_set():
        key = (-_dot(sigma, g), _dot(point, g))
        num[key] = num.get(key, 0) + 1
    den = {}
    for a in cone.gens:
        key = (_dot(sigma, a), _dot(point, a))
        den[key] = den.get(key, 0) + 1
    return MotivicExpr(num, den)


def j_simplex(cone: SimplicialCone, sigma: Sequence[int], point: Sequence[int]) -> RatFuncS:
    """mult / prod (sigma(a) + m(a) s) over the generators of the cone."""
    den = {}
    for a in cone.gens:
        key = (_dot(point, a), _dot(sigma, a))
        den[key] = den.get(key, 0) + 1
    return RatFuncS(cone.multiplicity(), den)


# ---------------------------------------------------------------- quasi-ordinary path


@dataclass(frozen=True)
class EdgeData:
    """Lattice data of one compact edge of a monotone Newton path.

    The edge runs from the lower vertex ``lo`` to ``hi``; ``index`` is 1 for
    the edge touching the lowest vertex.
    """

    index: int
    lo: Vec
    hi: Vec
    n1: int
    b: Vec
    length: int
    c: Vec
    p: Vec
    bbar: Vec
    M: Vec
    lam: tuple[Fraction, ...]
    w: tuple[Vec, ...]
    face_poly_w: UniPoly
    roots: tuple[tuple[UniPoly, int], ...]

    @property
    def d(self) -> int:
        return len(self.b)

    @property
    def v(self) -> int:
        """Number of distinct roots of the face polynomial."""
        return sum(f.degree() for f, _ in self.roots)

    def t_tilde(self, nu: Sequence[int]) -> list[tuple[int, int]]:
        """(M_l, nu_l n1 + b_l) so that T~_l = M_l s + nu_l n1 + b_l."""
        return [(self.M[l], nu[l] * self.n1 + self.b[l]) for l in range(self.d)]

    def cone(self) -> SimplicialCone:
        return SimplicialCone(self.w)


def make_edge(h: MPoly, index: int, lo: Vec, hi: Vec) -> EdgeData:
    n1, b, length = edge_lattice(lo, hi)
    d = len(b)
    c = tuple(gcd(n1, bl) for bl in b)
    p = tuple(n1 // cl for cl in c)
    bbar = tuple(bl // cl for bl, cl in zip(b, c))
    M = tuple(n1 * lo[l] + b[l] * lo[-1] for l in range(d))
    lam = tuple(Fraction(bl, n1) for bl in b)
    w = []
    for l in range(d):
        vec = [0] * (d + 1)
        vec[l] = p[l]
        vec[d] = bbar[l]
        w.append(tuple(vec))
    fw = face_poly_w(h, lo, hi)
    roots = tuple(factor_irreducible(fw))
    return EdgeData(index, tuple(lo), tuple(hi), n1, b, length, c, p, bbar, M, lam, tuple(w), fw, roots)


@dataclass(frozen=True)
class NewtonPath:
    """Vertices tau_0 (lowest) .. tau_r (top) and the edges between them."""

    vertices: tuple[Vec, ...]
    edges: tuple[EdgeData, ...]

    @property
    def r(self) -> int:
        return len(self.edges)

    @property
    def d(self) -> int:
        return len(self.vertices[0]) - 1

    def height(self, q: int) -> int:
        return self.vertices[q][-1]


def build_newton_path(pair: QOPair | MPoly) -> NewtonPath:
    h = pair.h if isinstance(pair, QOPair) else pair
    verts = monotone_path(h.support())
    edges = tuple(make_edge(h, q + 1, verts[q], verts[q + 1]) for q in range(len(verts) - 1))
    return NewtonPath(tuple(verts), edges)


def _sigma(nu: Sequence[int]) -> Vec:
    return tuple(nu) + (1,)


def _upper_cone(path: NewtonPath, q: int) -> SimplicialCone:
    """Closure of the region above edge q: cone(w^q, e_z)."""
    d = path.d
    ez = tuple(1 if i == d else 0 for i in range(d + 1))
    return SimplicialCone(path.edges[q - 1].w + (ez,))


def _orthant(d: int) -> SimplicialCone:
    return SimplicialCone([tuple(1 if i == j else 0 for j in range(d + 1)) for i in range(d + 1)])


def vertex_regions(path: NewtonPath, q: int) -> list[tuple[int, SimplicialCone]]:
    """Signed simplicial cones whose relative interiors add up to the region of tau_q."""
    r = path.r
    if r == 0:
        return [(1, _orthant(path.d))]
    if q == 0:
        return [(1, _upper_cone(path, 1))]
    if q < r:
        outer = _upper_cone(path, q + 1)
    else:
        outer = _orthant(path.d)
    return [(1, outer), (-1, _upper_cone(path, q)), (-1, path.edges[q - 1].cone())]


def j_edge(edge: EdgeData, nu: Sequence[int]) -> RatFuncS:
    """n1^(d-1) / prod T~_l."""
    den = {}
    for key in edge.t_tilde(nu):
        den[key] = den.get(key, 0) + 1
    return RatFuncS(edge.n1 ** (edge.d - 1), den)


def j_vertex(path: NewtonPath, q: int, nu: Sequence[int]) -> RatFuncS:
    """Topological integral over the vertex region of tau_q."""
    point = path.vertices[q]
    sigma = _sigma(nu)
    out = RatFuncS(0)
    for sign, cone in vertex_regions(path, q):
        if cone.dim == cone.ambient:
            out = out + j_simplex(cone, sigma, point) * sign
    return out


def s_vertex(path: NewtonPath, q: int, nu: Sequence[int]) -> MotivicExpr:
    point = path.vertices[q]
    sigma = _sigma(nu)
    out = MotivicExpr.const(0)
    for sign, cone in vertex_regions(path, q):
        out = out + genfun(cone, sigma, point) * sign
    return out


def s_edge(path: NewtonPath, q: int, nu: Sequence[int]) -> MotivicExpr:
    edge = path.edges[q - 1]
    return genfun(edge.cone(), _sigma(nu), edge.lo)


# ---------------------------------------------------------------- general polyhedra


MAX_FAN_DIM = 5


@dataclass(frozen=True)
class Face:
    points: frozenset  # support points on the face
    rec: frozenset  # recession directions e_i (indices)
    facets: frozenset  # indices of facets containing the face
    dim: int

    @property
    def compact(self) -> bool:
        return not self.rec


class GeneralFaceFan:
    """Face lattice of a Newton polyhedron and triangulated normal cones."""

    def __init__(self, support: Sequence[Vec]):
        pts = sorted(set(tuple(p) for p in support))
        if not pts:
            raise InvalidInput("empty support")
        n = len(pts[0])
        if n > MAX_FAN_DIM:
            raise DimensionGuard(f"general face fan limited to {MAX_FAN_DIM} variables, got {n}")
        self.n = n
        self.points = [p for p in pts if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in pts)]
        self.normals = self._facets()
        self.faces = self._faces()
        self._tri_cache: dict = {}
        self._vol_cache: dict = {}

    # facets
    def _facets(self) -> list[Vec]:
        n = self.n
        P = self.points
        units = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
        cands = set()
        p0s = P
        for p0 in p0s:
            dirs = [tuple(a - b for a, b in zip(p, p0)) for p in P if p != p0] + units
            for combo in combinations(dirs, n - 1):
                ker = _rational_kernel(combo, n) if n > 1 else [(1,)]
                if len(ker) != 1:
                    continue
                k = ker[0]
                if all(x <= 0 for x in k):
                    k = tuple(-x for x in k)
                if any(x < 0 for x in k):
                    continue
                cands.add(k)
        normals = []
        for k in sorted(cands):
            m = min(_dot(k, p) for p in P)
            on = [p for p in P if _dot(k, p) == m]
            rec = [i for i in range(n) if k[i] == 0]
            span = [tuple(a - b for a, b in zip(p, on[0])) for p in on[1:]] + [units[i] for i in rec]
            if span and _rank(span) == n - 1:
                normals.append(k)
            elif not span and n == 1:
                normals.append(k)
        return normals

    def _face_of(self, ks: frozenset) -> tuple[frozenset, frozenset]:
        pts = set(self.points)
        rec = set(range(self.n))
        for i in ks:
            k = self.normals[i]
            m = min(_dot(k, p) for p in self.points)
            pts &= {p for p in self.points if _dot(k, p) == m}
            rec &= {j for j in range(self.n) if k[j] == 0}
        return frozenset(pts), frozenset(rec)

    def _closure(self, pts: frozenset, rec: frozenset) -> frozenset:
        out = []
        for i, k in enumerate(self.normals):
            m = min(_dot(k, p) for p in self.points)
            if all(_dot(k, p) == m for p in pts) and all(k[j] == 0 for j in rec):
                out.append(i)
        return frozenset(out)

    def _faces(self) -> list[Face]:
        n = self.n
        units = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
        seen: dict = {}
        frontier = [frozenset([i]) for i in range(len(self.normals))]
        while frontier:
            nxt = []
            for ks in frontier:
                pts, rec = self._face_of(ks)
                if not pts:
                    continue
                key = (pts, rec)
                if key in seen:
                    continue
                closed = self._closure(pts, rec)
                p0 = next(iter(pts))
                span = [tuple(a - b for a, b in zip(p, p0)) for p in pts if p != p0]
                span += [units[j] for j in rec]
                dim = _rank(span) if span else 0
                seen[key] = Face(pts, rec, closed, dim)
                for i in range(len(self.normals)):
                    if i not in closed:
                        nxt.append(closed | {i})
            frontier = nxt
        return sorted(seen.values(), key=lambda f: (f.dim, sorted(f.points), sorted(f.rec)))

    def compact_faces(self) -> list[Face]:
        return [f for f in self.faces if f.compact]

    def vertices_of(self, face: Face) -> list[Vec]:
        return sorted(next(iter(g.points)) for g in self.faces if g.dim == 0 and g.points <= face.points)

    def face_of_vector(self, k: Sequence[int]) -> frozenset:
        m = min(_dot(k, p) for p in self.points)
        return frozenset(p for p in self.points if _dot(k, p) == m)

    # normal cones
    def _cofaces(self, face: Face) -> list[Face]:
        return [g for g in self.faces if g.dim == face.dim + 1 and g.facets < face.facets]

    def triangulate(self, face: Face) -> list[tuple[int, ...]]:
        """Full-dimensional simplices of the normal cone, as facet index tuples."""
        key = (face.points, face.rec)
        if key in self._tri_cache:
            return self._tri_cache[key]
        codim = self.n - face.dim
        fac = sorted(face.facets)
        if codim == 1 or len(fac) == codim:
            out = [tuple(fac)]
        else:
            apex = fac[0]
            out = []
            for g in self._cofaces(face):
                if apex in g.facets:
                    continue
                for simplex in self.triangulate(g):
                    out.append(tuple(sorted((apex,) + simplex)))
        self._tri_cache[key] = out
        return out

    def normal_cones(self, face: Face) -> list[SimplicialCone]:
        return [SimplicialCone([self.normals[i] for i in s]) for s in self.triangulate(face)]

    def relint_cones(self, face: Face) -> list[SimplicialCone]:
        """Simplicial cones (all dimensions) partitioning the relative interior."""
        out = {}
        target = face.points
        for s in self.triangulate(face):
            for size in range(1, len(s) + 1):
                for sub in combinations(s, size):
                    if sub in out:
                        continue
                    k = [sum(self.normals[i][j] for i in sub) for j in range(self.n)]
                    if all(x > 0 for x in k) and self.face_of_vector(k) == target:
                        out[sub] = SimplicialCone([self.normals[i] for i in sub])
        return [out[s] for s in sorted(out)]

    # volumes
    def _polytope_simplices(self, face: Face) -> list[tuple[Vec, ...]]:
        if face.dim == 0:
            return [(next(iter(face.points)),)]
        verts = self.vertices_of(face)
        apex = verts[0]
        out = []
        for g in self.faces:
            if g.dim == face.dim - 1 and g.compact and g.points < face.points and apex not in g.points:
                for simp in self._polytope_simplices(g):
                    out.append((apex,) + simp)
        return out

    def normalized_volume(self, face: Face) -> int:
        """(dim tau)! times the lattice volume of a compact face."""
        if not face.compact:
            raise InvalidInput("volume of a non-compact face")
        key = face.points
        if key not in self._vol_cache:
            total = 0
            for simp in self._polytope_simplices(face):
                if face.dim == 0:
                    total += 1
                    continue
                v0 = simp[0]
                vecs = [tuple(a - b for a, b in zip(v, v0)) for v in simp[1:]]
                total += minors_gcd(vecs)
            self._vol_cache[key] = total
        return self._vol_cache[key]

    def euler_torus_count(self, face: Face) -> int:
        """(-1)^dim (dim)! V for the torus part of a non-degenerate face."""
        return (-1) ** face.dim * self.normalized_volume(face)

    def j_face(self, face: Face, sigma: Sequence[int]) -> RatFuncS:
        point = next(iter(face.points))
        out = RatFuncS(0)
        for cone in self.normal_cones(face):
            out = out + j_simplex(cone, sigma, point)
        return out

    def s_face(self, face: Face, sigma: Sequence[int]) -> MotivicExpr:
        point = next(iter(face.points))
        out = MotivicExpr.const(0)
        for cone in self.relint_cones(face):
            out = out + genfun(cone, sigma, point)
        return out


def build_general_fan(support: Sequence[Vec]) -> GeneralFaceFan:
    return GeneralFaceFan(support)

