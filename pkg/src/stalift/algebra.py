"""Finite-dimensional algebras by basis and structure constants.

An `FdAlgebra` stores, for each basis element b_i, the matrix of left
multiplication on the left regular module in the row-vector convention:
``vec(b_i . x) = vec(x) @ lmul[i]``.  Consequently ``lmul[j] @ lmul[i]``
expands b_i b_j, and module action matrices throughout the package satisfy
``act(x . y) = act(y) @ act(x)``.

Constructors: quiver presentations (path layers reduced against the
relation ideal until a whole length layer dies), corners eAe, enveloping
algebras A (x) B^op, opposites, and triangular matrix algebras.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    FieldMismatch, InternalCheckError, NonAdmissible, NotIdempotent,
    UnsupportedCharP,
)
from .exactla import (
    FieldSpec, Mat, SubspaceReducer, hstack, kernel_basis, rank, rref,
    row_space_basis, solve, vstack,
)

DEFAULT_PATH_LENGTH_CAP = 64
DEFAULT_PATH_COUNT_CAP = 200_000
_FULL_VALIDATION_DIM = {"Q": 12, "Fp": 48}


@dataclass(frozen=True)
class QuiverPresentation:
    """Quiver with admissible relations.

    relations: list of relations; each relation is a list of terms
    (coefficient, path) where a path is a tuple of arrow names composing
    left-to-right (target of each arrow = source of the next).
    """

    vertices: Tuple[str, ...]
    arrows: Tuple[Tuple[str, str, str], ...]  # (name, source, target)
    relations: Tuple[Tuple[Tuple[object, Tuple[str, ...]], ...], ...]
    field: FieldSpec

    def __post_init__(self):
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        arrow_by_name = {a[0]: a for a in self.arrows}
        for rel in self.relations:
            ends = set()
            for coeff, path in rel:
                if len(path) < 2:
                    raise ValueError("relation terms must have length >= 2")
                for u, v in zip(path, path[1:]):
                    if arrow_by_name[u][2] != arrow_by_name[v][1]:
                        raise ValueError(f"non-composable path {path}")
                ends.add((arrow_by_name[path[0]][1], arrow_by_name[path[-1]][2]))
            if len(ends) != 1:
                raise ValueError("relation terms are not parallel")


def quiver(vertices, arrows, relations, field) -> QuiverPresentation:
    rels = tuple(
        tuple((c, tuple(p)) for c, p in rel) for rel in relations
    )
    return QuiverPresentation(tuple(vertices), tuple(arrows), rels, field)


@dataclass
class Provenance:
    kind: str  # quiver | corner | endomorphism | enveloping | opposite | triangular | complex_endo | field
    data: dict = dc_field(default_factory=dict)


class FdAlgebra:
    """Associative unital algebra with a fixed complete set of pairwise
    orthogonal primitive idempotents."""

    def __init__(
        self,
        field: FieldSpec,
        labels: Sequence[str],
        lmul: Sequence[Mat],
        unit: Mat,
        idempotents: Sequence[Mat],
        gens: Sequence[Mat],
        provenance: Provenance,
        validate: str = "auto",
    ):
        self.field = field
        self.dim = len(labels)
        self.labels = tuple(labels)
        self.lmul = tuple(lmul)
        self.unit = unit
        self.idempotents = tuple(idempotents)
        self.gens = tuple(gens)
        self.provenance = provenance
        self._cache: dict = {}
        self._rmul: Optional[Tuple[Mat, ...]] = None
        if validate != "off":
            self._validate(full=(validate == "full"))

    # -- basic element operations --------------------------------------

    def zero_vec(self) -> Mat:
        return Mat.zeros(self.field, 1, self.dim)

    def basis_vec(self, i: int) -> Mat:
        f = self.field
        data = [[f.one() if j == i else f.zero() for j in range(self.dim)]]
        return Mat(f, 1, self.dim, data)

    def rmul(self) -> Tuple[Mat, ...]:
        """rmul[j] with vec(x . b_j) = vec(x) @ rmul[j]."""
        if self._rmul is None:
            f = self.field
            n = self.dim
            out = []
            for j in range(n):
                rows = [self.lmul[t].row(j) for t in range(n)]
                out.append(Mat.from_rows(f, rows) if n else Mat.zeros(f, 0, 0))
            self._rmul = tuple(out)
        return self._rmul

    def left_mult_matrix(self, x: Mat) -> Mat:
        """M with vec(x . v) = vec(v) @ M."""
        out = Mat.zeros(self.field, self.dim, self.dim)
        for i in range(self.dim):
            c = x.entry(0, i)
            if c != 0:
                out = out + self.lmul[i].scale(c)
        return out

    def right_mult_matrix(self, x: Mat) -> Mat:
        """M with vec(v . x) = vec(v) @ M."""
        rm = self.rmul()
        out = Mat.zeros(self.field, self.dim, self.dim)
        for j in range(self.dim):
            c = x.entry(0, j)
            if c != 0:
                out = out + rm[j].scale(c)
        return out

    def mul(self, x: Mat, y: Mat) -> Mat:
        return x @ self.right_mult_matrix(y)

    def is_idempotent(self, e: Mat) -> bool:
        return self.mul(e, e) == e

    def element_power(self, x: Mat, k: int) -> Mat:
        acc = self.unit
        for _ in range(k):
            acc = self.mul(acc, x)
        return acc

    def corner_subspace(self, e: Mat) -> Mat:
        """Row basis of eAe inside the ambient coordinates."""
        proj = self.right_mult_matrix(e) @ self.left_mult_matrix(e)
        return row_space_basis(proj)

    # -- validation -----------------------------------------------------

    def _validate(self, full: bool):
        f = self.field
        n = self.dim
        u = self.unit
        for i in range(n):
            b = self.basis_vec(i)
            if self.mul(u, b) != b or self.mul(b, u) != b:
                raise InternalCheckError("unit law fails")
        s = self.zero_vec()
        for i, e in enumerate(self.idempotents):
            s = s + e
            if self.mul(e, e) != e:
                raise InternalCheckError("idempotent is not idempotent")
            for j, e2 in enumerate(self.idempotents):
                if i != j and not self.mul(e, e2).is_zero():
                    raise InternalCheckError("idempotents not orthogonal")
        if s != u:
            raise InternalCheckError("idempotents do not sum to the unit")
        limit = _FULL_VALIDATION_DIM["Q" if f.is_rational else "Fp"]
        if full or n <= limit:
            self._check_associativity()
        self._check_generating()

    def _check_associativity(self):
        n = self.dim
        f = self.field
        if not f.is_rational:
            C = np.stack([m.np for m in self.lmul]) if n else np.zeros((0, 0, 0), dtype=np.int64)
            p = f.p
            for i in range(n):
                lhs = np.tensordot(C[i].astype(np.float64),
                                   C.astype(np.float64), axes=([1], [0]))
                lhs = np.rint(lhs).astype(np.int64) % p
                rhs = np.tensordot(C.astype(np.float64), C[i].astype(np.float64),
                                   axes=([2], [0]))
                rhs = np.rint(rhs).astype(np.int64) % p
                if not np.array_equal(lhs, rhs):
                    raise InternalCheckError("associativity fails")
            return
        for i in range(n):
            Li = self.lmul[i]
            for j in range(n):
                lhs = self.lmul[j] @ Li
                prod = self.basis_vec(i) @ self.rmul()[j]
                rhs = Mat.zeros(f, n, n)
                for k in range(n):
                    c = prod.entry(0, k)
                    if c != 0:
                        rhs = rhs + self.lmul[k].scale(c)
                if lhs != rhs:
                    raise InternalCheckError("associativity fails")

    def _check_generating(self):
        red = SubspaceReducer(self.field, self.dim)
        red.add(self.unit.row(0))
        for g in list(self.idempotents) + list(self.gens):
            red.add(g.row(0))
        gen_mats = [self.right_mult_matrix(g)
                    for g in list(self.idempotents) + list(self.gens)]
        gen_mats += [self.left_mult_matrix(g)
                     for g in list(self.idempotents) + list(self.gens)]
        grew = True
        while grew and red.dim < self.dim:
            grew = False
            basis = red.basis_matrix()
            for mat in gen_mats:
                prod = basis @ mat
                for i in range(prod.rows):
                    if red.add(prod.row(i)):
                        grew = True
        if red.dim != self.dim:
            raise InternalCheckError("declared generators do not generate")

    def __repr__(self):
        return (f"FdAlgebra({self.field}, dim={self.dim}, "
                f"{len(self.idempotents)} idempotents, {self.provenance.kind})")


# ---------------------------------------------------------------------------
# quiver presentation -> algebra
# ---------------------------------------------------------------------------

def _enumerate_paths(pres: QuiverPresentation, max_len: int, count_cap: int):
    """Paths grouped by length; a path is (source, target, names)."""
    by_source: Dict[str, List[Tuple[str, str, str]]] = {v: [] for v in pres.vertices}
    for a in pres.arrows:
        by_source[a[1]].append(a)
    layers = [[(v, v, ()) for v in pres.vertices]]
    total = len(layers[0])
    for _ in range(max_len):
        prev = layers[-1]
        nxt = []
        for (s, t, names) in prev:
            for (an, asrc, atgt) in by_source[t]:
                nxt.append((s, atgt, names + (an,)))
        total += len(nxt)
        if total > count_cap:
            raise NonAdmissible(f"path count exceeded {count_cap}")
        layers.append(nxt)
        if not nxt:
            break
    return layers


def algebra_from_quiver(
    pres: QuiverPresentation,
    length_cap: int = DEFAULT_PATH_LENGTH_CAP,
    count_cap: int = DEFAULT_PATH_COUNT_CAP,
) -> FdAlgebra:
    """Quotient of the path algebra by an admissible relation ideal.

    Builds path layers, spans the two-sided ideal generated by the
    relations, and succeeds once an entire length layer lies in the ideal
    (which certifies that a power of the arrow ideal is contained in it).
    """
    f = pres.field
    window = 4
    while True:
        result = _try_build(pres, window, count_cap)
        if result is not None:
            return result
        if window >= length_cap:
            raise NonAdmissible(
                f"path basis failed to stabilize below length {length_cap}")
        window = min(window * 2, length_cap)


def _try_build(pres: QuiverPresentation, window: int, count_cap: int):
    f = pres.field
    layers = _enumerate_paths(pres, window, count_cap)
    all_paths: List[Tuple[str, str, Tuple[str, ...]]] = [p for layer in layers for p in layer]
    # longest-first coordinates: reduction rewrites long paths into shorter ones
    order = sorted(range(len(all_paths)),
                   key=lambda i: (-len(all_paths[i][2]), all_paths[i][2]))
    coord_of = {all_paths[i]: pos for pos, i in enumerate(order)}
    paths_ordered = [all_paths[i] for i in order]
    npaths = len(paths_ordered)

    red = SubspaceReducer(f, npaths)
    arrow_by_name = {a[0]: a for a in pres.arrows}

    def term_path(path_names):
        src = arrow_by_name[path_names[0]][1]
        tgt = arrow_by_name[path_names[-1]][2]
        return (src, tgt, tuple(path_names))

    rel_data = []
    for rel in pres.relations:
        terms = [(f.of(c), term_path(p)) for c, p in rel]
        rel_data.append(terms)

    # span { p . r . q } for all path pairs within the window
    for terms in rel_data:
        rsrc = terms[0][1][0]
        rtgt = terms[0][1][1]
        min_len = min(len(t[1][2]) for t in terms)
        for left in all_paths:
            if left[1] != rsrc:
                continue
            for right in all_paths:
                if right[0] != rtgt:
                    continue
                if len(left[2]) + min_len + len(right[2]) > window:
                    continue
                vec = [f.zero()] * npaths
                ok = True
                for c, (s, t, names) in terms:
                    full = (left[0], right[1], left[2] + names + right[2])
                    if full not in coord_of:
                        ok = False  # term sticks out of the window
                        break
                    vec[coord_of[full]] = vec[coord_of[full]] + c if f.is_rational else (
                        vec[coord_of[full]] + c) % f.p
                if ok:
                    red.add(vec)

    # find the first length whose entire layer lies in the ideal
    death = None
    for t in range(1, len(layers)):
        if not layers[t]:
            death = t
            break
        if all(red.contains(_unit_vec(f, npaths, coord_of[p])) for p in layers[t]):
            death = t
            break
    if death is None or 2 * (death - 1) > window:
        return None

    nonpivot = red.nonpivot_columns()
    basis_paths = [paths_ordered[c] for c in nonpivot]
    if any(len(p[2]) >= death for p in basis_paths):
        raise InternalCheckError("basis path at or beyond the dead layer")
    # ascending (length, lex) presentation order
    basis_paths.sort(key=lambda p: (len(p[2]), pres.vertices.index(p[0]) if not p[2] else 0, p[2]))
    basis_coord = {p: i for i, p in enumerate(basis_paths)}
    n = len(basis_paths)

    def residue_coords(path) -> List:
        vec = [f.zero()] * npaths
        vec[coord_of[path]] = f.one()
        r = red.residue(vec)
        out = [f.zero()] * n
        for c_idx, val in enumerate(r):
            if val != 0:
                bp = paths_ordered[c_idx]
                out[basis_coord[bp]] = val
        return out

    # lmul[i][t, s] = coefficient of b_s in b_i . b_t
    lmul_rows = [[None] * n for _ in range(n)]
    zero_row = [f.zero()] * n
    for i, bi in enumerate(basis_paths):
        for t, bt in enumerate(basis_paths):
            if bi[1] != bt[0]:
                lmul_rows[i][t] = list(zero_row)
                continue
            prod = (bi[0], bt[1], bi[2] + bt[2])
            if len(prod[2]) >= death:
                lmul_rows[i][t] = list(zero_row)
            else:
                lmul_rows[i][t] = residue_coords(prod)
    lmul = [Mat.from_rows(f, lmul_rows[i]) if n else Mat.zeros(f, 0, 0) for i in range(n)]

    def vec_of(path) -> Mat:
        data = [f.zero()] * n
        data[basis_coord[path]] = f.one()
        return Mat(f, 1, n, [data])

    idempotents = [vec_of((v, v, ())) for v in pres.vertices]
    unit = idempotents[0]
    for e in idempotents[1:]:
        unit = unit + e
    gens = [vec_of(term_path([a[0]])) for a in pres.arrows
            if (a[1], a[2], (a[0],)) in basis_coord]

    def label(p):
        if not p[2]:
            return f"e_{p[0]}"
        return "".join(p[2])

    alg = FdAlgebra(
        f, [label(p) for p in basis_paths], lmul, unit, idempotents, gens,
        Provenance("quiver", {
            "presentation": pres,
            "basis_paths": tuple(basis_paths),
            "loewy_bound": death,
        }),
    )
    _assert_primitive_family(alg)
    return alg


def _unit_vec(f: FieldSpec, n: int, i: int):
    v = [f.zero()] * n
    v[i] = f.one()
    return v


def field_algebra(f: FieldSpec) -> FdAlgebra:
    one = Mat.from_rows(f, [[f.one()]])
    return FdAlgebra(f, ["1"], [Mat.from_rows(f, [[f.one()]])], one, [one], [],
                     Provenance("field", {}))


# ---------------------------------------------------------------------------
# idempotent refinement (Fitting decomposition under right multiplication)
# ---------------------------------------------------------------------------

def coords_in_rowspace(basis: Mat, vectors: Mat) -> Mat:
    """lam with lam @ basis = vectors; raises if some row is outside."""
    res = solve(basis.transpose(), vectors.transpose())
    if res is None:
        raise InternalCheckError("vector outside the declared row space")
    return res.particular.transpose()


def _corner_right_mult(alg: FdAlgebra, basis: Mat, u_ambient: Mat) -> Mat:
    """Right multiplication by u on the corner, in corner coordinates."""
    prod = basis @ alg.right_mult_matrix(u_ambient)
    return coords_in_rowspace(basis, prod)


def find_nontrivial_idempotent(alg: FdAlgebra, e: Mat) -> Optional[Mat]:
    """Search eAe for an idempotent distinct from 0 and e.

    Deterministic sweep of corner basis elements and pairwise sums; each
    candidate u is split by the Fitting decomposition of right
    multiplication, which decomposes the corner into two left ideals and
    the corner unit into two orthogonal idempotents.
    """
    basis = alg.corner_subspace(e)
    k = basis.rows
    if k <= 1:
        return None
    f = alg.field
    e_coords = coords_in_rowspace(basis, e)

    candidates = [basis.submatrix([a], list(range(basis.cols))) for a in range(k)]
    sums = []
    for a in range(k):
        for b in range(a + 1, k):
            sums.append(candidates[a] + candidates[b])
    for u in candidates + sums:
        ru = _corner_right_mult(alg, basis, u)
        fit = ru.power(k)
        ker = kernel_basis(fit.transpose())  # rows v with v @ fit = 0
        if not ker or len(ker) == k:
            continue
        ker_mat = Mat.from_rows(f, [list(v) for v in ker])
        im_mat = row_space_basis(fit)
        if im_mat.rows + ker_mat.rows != k:
            continue
        stacked = vstack([ker_mat, im_mat])
        lam = coords_in_rowspace(stacked, e_coords)
        eps0 = lam.submatrix([0], list(range(ker_mat.rows))) @ ker_mat
        eps0_amb = eps0 @ basis
        if eps0_amb.is_zero() or eps0_amb == e:
            continue
        if not alg.is_idempotent(eps0_amb):
            raise InternalCheckError("Fitting split produced a non-idempotent")
        return eps0_amb
    return None


def refine_idempotent_family(alg: FdAlgebra, family: Sequence[Mat]) -> List[Mat]:
    """Split each idempotent into primitive orthogonal pieces."""
    out: List[Mat] = []
    queue = list(family)
    while queue:
        e = queue.pop(0)
        piece = find_nontrivial_idempotent(alg, e)
        if piece is None:
            out.append(e)
        else:
            rest = e - piece
            if not alg.is_idempotent(rest):
                raise InternalCheckError("idempotent complement failed")
            queue.insert(0, rest)
            queue.insert(0, piece)
    return out


def _assert_primitive_family(alg: FdAlgebra):
    for e in alg.idempotents:
        if find_nontrivial_idempotent(alg, e) is not None:
            raise InternalCheckError("declared idempotent is not primitive")


# ---------------------------------------------------------------------------
# corners, opposites, enveloping and triangular algebras
# ---------------------------------------------------------------------------

@dataclass
class CornerEmbedding:
    parent: FdAlgebra
    e: Mat
    basis: Mat  # corner basis rows in parent coordinates

    def to_parent(self, x: Mat) -> Mat:
        return x @ self.basis

    def from_parent(self, x: Mat) -> Mat:
        return coords_in_rowspace(self.basis, x)


def corner_algebra(a: FdAlgebra, e: Mat) -> Tuple[FdAlgebra, CornerEmbedding]:
    """eAe with unit e; primitive idempotents are the parent's absorbed ones."""
    if not a.is_idempotent(e):
        raise NotIdempotent("corner at a non-idempotent element")
    basis = a.corner_subspace(e)
    k = basis.rows
    f = a.field

    def to_corner(x: Mat) -> Mat:
        return coords_in_rowspace(basis, x)

    lmul = []
    for i in range(k):
        bi = basis.submatrix([i], list(range(basis.cols)))
        prod = basis @ a.left_mult_matrix(bi)  # row t = b_i . b_t
        lmul.append(to_corner(prod))

    absorbed = []
    for ei in a.idempotents:
        if a.mul(a.mul(e, ei), e) == ei and a.mul(e, ei) == ei and a.mul(ei, e) == ei:
            absorbed.append(to_corner(ei))
    unit_c = to_corner(e)
    total = Mat.zeros(f, 1, k)
    for ei in absorbed:
        total = total + ei
    if total != unit_c:
        # general idempotent: recompute a primitive decomposition inside eAe
        emb0 = CornerEmbedding(a, e, basis)
        fam = _refined_corner_family(a, e)
        absorbed = [to_corner(x) for x in fam]
    embedding = CornerEmbedding(a, e, basis)
    gens = [Mat(f, 1, k, [_unit_vec(f, k, i)]) for i in range(k)]
    alg = FdAlgebra(
        f, [f"c{i}" for i in range(k)], lmul, unit_c, absorbed, gens,
        Provenance("corner", {"parent": a, "e": e, "embedding": None}),
    )
    alg.provenance.data["embedding"] = embedding
    return alg, embedding


def _refined_corner_family(a: FdAlgebra, e: Mat) -> List[Mat]:
    fam = refine_idempotent_family(a, [e])
    return fam


def opposite_algebra(a: FdAlgebra) -> FdAlgebra:
    """Structure constants transposed: c'_{ij}^k = c_{ji}^k."""
    return FdAlgebra(
        a.field, [f"{l}^op" for l in a.labels], list(a.rmul()), a.unit,
        list(a.idempotents), list(a.gens),
        Provenance("opposite", {"parent": a}),
    )


def _kron(f: FieldSpec, A: Mat, B: Mat) -> Mat:
    if not f.is_rational:
        return Mat(f, A.rows * B.rows, A.cols * B.cols, np.kron(A.np, B.np) % f.p)
    rows = []
    for i in range(A.rows):
        for u in range(B.rows):
            row = []
            for j in range(A.cols):
                aij = A.entry(i, j)
                row.extend([aij * B.entry(u, v) for v in range(B.cols)])
            rows.append(row)
    return Mat.from_rows(f, rows) if rows else Mat.zeros(f, 0, 0)


def enveloping_algebra(a: FdAlgebra, b: FdAlgebra) -> FdAlgebra:
    """A (x)_k B^op; bimodules between A and B are left modules over it."""
    if a.field != b.field:
        raise FieldMismatch("enveloping algebra over mixed fields")
    f = a.field
    bop = opposite_algebra(b)
    labels = [f"{la}(x){lb}" for la in a.labels for lb in bop.labels]
    lmul = [_kron(f, a.lmul[i], bop.lmul[j])
            for i in range(a.dim) for j in range(bop.dim)]

    def tens(x: Mat, y: Mat) -> Mat:
        return _kron(f, x, y)

    unit = tens(a.unit, bop.unit)
    idems = [tens(e1, e2) for e1 in a.idempotents for e2 in bop.idempotents]
    gens = [tens(g, bop.unit) for g in list(a.gens) + list(a.idempotents)]
    gens += [tens(a.unit, g) for g in list(bop.gens) + list(bop.idempotents)]
    alg = FdAlgebra(
        f, labels, lmul, unit, idems, gens,
        Provenance("enveloping", {"left": a, "right": b, "right_op": bop}),
        validate="auto" if a.dim * b.dim <= 64 else "light",
    )
    return alg


def env_tensor_vec(a: FdAlgebra, b: FdAlgebra, x: Mat, y: Mat) -> Mat:
    """Coordinates of x (x) y inside enveloping_algebra(a, b)."""
    return _kron(a.field, x, y)


def triangular_matrix_algebra(a: FdAlgebra, b: FdAlgebra, m) -> FdAlgebra:
    """Lower triangular algebra [[A, 0], [M, B]] for a B-A-bimodule M.

    `m` is an FdModule over enveloping_algebra(b, a); multiplication is
    (a,m,b)(a',m',b') = (aa', m.a' + b.m', bb').
    """
    if a.field != b.field:
        raise FieldMismatch("triangular algebra over mixed fields")
    f = a.field
    env = m.algebra
    prov = env.provenance
    if prov.kind != "enveloping" or prov.data["left"] is not b or prov.data["right"] is not a:
        raise FieldMismatch("bimodule must live over enveloping_algebra(b, a)")
    na, nb, nm = a.dim, b.dim, m.dim
    n = na + nm + nb
    zeros = lambda r, c: Mat.zeros(f, r, c)

    def right_a_action(x_a: Mat) -> Mat:
        # right action of A on M = action of 1_B (x) x_a in B (x) A^op
        return m.act(env_tensor_vec(b, a, b.unit, x_a))

    def left_b_action(x_b: Mat) -> Mat:
        return m.act(env_tensor_vec(b, a, x_b, a.unit))

    lmul: List[Mat] = []
    for i in range(na):
        xa = a.basis_vec(i)
        top = hstack([a.lmul[i], zeros(na, nm), zeros(na, nb)])
        mid = hstack([zeros(nm, na), zeros(nm, nm), zeros(nm, nb)])
        bot = hstack([zeros(nb, na), zeros(nb, nm), zeros(nb, nb)])
        lmul.append(vstack([top, mid, bot]))
    for u in range(nm):
        # b_u in M: (m-part) . (a', 0, 0) contributes m.a'; left mult by m kills M and B
        rows_top = []
        for t in range(na):
            xa = a.basis_vec(t)
            img = m.basis_vec(u) @ right_a_action(xa)  # m_u . a_t  -> wrong side
            rows_top.append([f.zero()] * na + list(img.row(0)) + [f.zero()] * nb)
        top = Mat.from_rows(f, rows_top) if na else zeros(0, n)
        mid = hstack([zeros(nm, na), zeros(nm, nm), zeros(nm, nb)])
        bot = hstack([zeros(nb, na), zeros(nb, nm), zeros(nb, nb)])
        lmul.append(vstack([top, mid, bot]))
    for j in range(nb):
        xb = b.basis_vec(j)
        act_m = left_b_action(xb)
        top = hstack([zeros(na, na), zeros(na, nm), zeros(na, nb)])
        mid = hstack([zeros(nm, na), act_m, zeros(nm, nb)])
        bot = hstack([zeros(nb, na), zeros(nb, nm), b.lmul[j]])
        lmul.append(vstack([top, mid, bot]))

    def embed_a(x: Mat) -> Mat:
        return hstack([x, zeros(1, nm), zeros(1, nb)])

    def embed_m(x: Mat) -> Mat:
        return hstack([zeros(1, na), x, zeros(1, nb)])

    def embed_b(x: Mat) -> Mat:
        return hstack([zeros(1, na), zeros(1, nm), x])

    labels = [f"a:{l}" for l in a.labels] + [f"m:{i}" for i in range(nm)] + \
             [f"b:{l}" for l in b.labels]
    unit = embed_a(a.unit) + embed_b(b.unit)
    idems = [embed_a(e) for e in a.idempotents] + [embed_b(e) for e in b.idempotents]
    gens = [embed_a(g) for g in a.gens] + [embed_b(g) for g in b.gens] + \
           [embed_m(m.basis_vec(u)) for u in range(nm)]
    return FdAlgebra(
        f, labels, lmul, unit, idems, gens,
        Provenance("triangular", {"a": a, "b": b, "m": m,
                                  "split": (na, nm, nb)}),
    )


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def cartan_matrix(a: FdAlgebra) -> List[List[int]]:
    """Entry (i, j) = dim e_i A e_j."""
    out = []
    for ei in a.idempotents:
        li = a.left_mult_matrix(ei)
        row = []
        for ej in a.idempotents:
            rj = a.right_mult_matrix(ej)
            row.append(rank(rj @ li))
        out.append(row)
    return out


def radical_basis(a: FdAlgebra) -> Mat:
    """Row basis of the Jacobson radical.

    Over Q: radical of the trace form (x, y) -> tr(L_x L_y).  Over F_p the
    route is structural, following the construction that produced the
    algebra; generic F_p algebras with no such route raise UnsupportedCharP.
    """
    if "radical" in a._cache:
        return a._cache["radical"]
    f = a.field
    if f.is_rational:
        rad = _radical_trace_form(a)
    else:
        rad = _radical_structural(a)
    _verify_radical(a, rad)
    a._cache["radical"] = rad
    return rad


def _radical_trace_form(a: FdAlgebra) -> Mat:
    n = a.dim
    f = a.field
    gram = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = a.lmul[j] @ a.lmul[i]
            row.append(sum(prod.entry(t, t) for t in range(n)))
        gram.append(row)
    g = Mat.from_rows(f, gram) if n else Mat.zeros(f, 0, 0)
    ker = kernel_basis(g)
    if not ker:
        return Mat.zeros(f, 0, n)
    return Mat.from_rows(f, [list(v) for v in ker])


def _radical_structural(a: FdAlgebra) -> Mat:
    f = a.field
    kind = a.provenance.kind
    n = a.dim
    if kind == "field":
        return Mat.zeros(f, 0, n)
    if kind == "quiver":
        paths = a.provenance.data["basis_paths"]
        rows = [list(_unit_vec(f, n, i)) for i, p in enumerate(paths) if p[2]]
        return Mat.from_rows(f, rows) if rows else Mat.zeros(f, 0, n)
    if kind == "opposite":
        parent = a.provenance.data["parent"]
        return radical_basis(parent)
    if kind == "corner":
        parent = a.provenance.data["parent"]
        emb: CornerEmbedding = a.provenance.data["embedding"]
        rad_p = radical_basis(parent)
        proj = rad_p @ parent.right_mult_matrix(emb.e) @ parent.left_mult_matrix(emb.e)
        rows = row_space_basis(proj)
        if rows.rows == 0:
            return Mat.zeros(f, 0, n)
        return coords_in_rowspace(emb.basis, rows)
    if kind == "enveloping":
        left = a.provenance.data["left"]
        right_op = a.provenance.data["right_op"]
        rad_l = radical_basis(left)
        rad_r = radical_basis(right_op)
        red = SubspaceReducer(f, n)
        for i in range(rad_l.rows):
            x = rad_l.submatrix([i], list(range(left.dim)))
            for j in range(right_op.dim):
                red.add(_kron(f, x, right_op.basis_vec(j)).row(0))
        for i in range(left.dim):
            x = left.basis_vec(i)
            for j in range(rad_r.rows):
                y = rad_r.submatrix([j], list(range(right_op.dim)))
                red.add(_kron(f, x, y).row(0))
        return red.basis_matrix()
    if kind == "triangular":
        na, nm, nb = a.provenance.data["split"]
        alg_a = a.provenance.data["a"]
        alg_b = a.provenance.data["b"]
        rad_a = radical_basis(alg_a)
        rad_b = radical_basis(alg_b)
        rows = []
        for i in range(rad_a.rows):
            rows.append(list(rad_a.row(i)) + [f.zero()] * (nm + nb))
        for u in range(nm):
            rows.append([f.zero()] * na + list(_unit_vec(f, nm, u)) + [f.zero()] * nb)
        for i in range(rad_b.rows):
            rows.append([f.zero()] * (na + nm) + list(rad_b.row(i)))
        return Mat.from_rows(f, rows) if rows else Mat.zeros(f, 0, a.dim)
    if kind in ("endomorphism", "complex_endo"):
        rad = a.provenance.data.get("radical_rows")
        if rad is None:
            raise UnsupportedCharP("endomorphism algebra lacks stored radical data")
        return rad
    raise UnsupportedCharP(f"no structural radical route for provenance {kind!r}")


def _verify_radical(a: FdAlgebra, rad: Mat):
    # nilpotency: powers of the span must reach zero within dim steps
    if rad.rows == 0:
        return
    current = rad
    for _ in range(a.dim + 1):
        red = SubspaceReducer(a.field, a.dim)
        for i in range(current.rows):
            x = current.submatrix([i], list(range(a.dim)))
            prod = rad @ a.right_mult_matrix(x)
            for r in range(prod.rows):
                red.add(prod.row(r))
        nxt = red.basis_matrix()
        if nxt.rows == 0:
            return
        current = nxt
    raise InternalCheckError("declared radical is not nilpotent")


def endomorphism_algebra(m):
    """End_A(M) as an FdAlgebra together with its hom-space basis."""
    from .modules import endomorphism_algebra as _impl
    return _impl(m)
