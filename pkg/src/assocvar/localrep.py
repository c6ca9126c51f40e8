"""Matrix modules over presented algebras: simplicity, commutants, and
local function rings obtained by closing the action image under inverses
of commutant units.

Right-module convention throughout: modules are row-vector spaces and a
word acts by multiplying its generator matrices in word order.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from . import linalg
from .algebra import FpAlgebra
from .errors import FieldError, GuardExceeded, InvalidModule, ParseError
from .fields import Field, PrimeField
from .freealg import NcPoly, parse_presentation

SIMPLE_GUARD_DIM = 6
ISO_GUARD_DIM = 3
UNIT_ENUM_GUARD = 10**5


@dataclass(frozen=True)
class MatrixModule:
    algebra: FpAlgebra
    dim: int
    action: tuple  # one dim x dim matrix per generator

    def __post_init__(self):
        if len(self.action) != len(self.algebra.gens):
            raise InvalidModule(
                f"{len(self.algebra.gens)} generators but {len(self.action)} matrices"
            )
        for m in self.action:
            if len(m) != self.dim or any(len(row) != self.dim for row in m):
                raise InvalidModule(f"matrix size is not {self.dim}x{self.dim}")


@dataclass(frozen=True)
class ModuleCheck:
    valid: bool
    witness: NcPoly | None = None


def poly_action(m: MatrixModule, p: NcPoly):
    """Evaluate a polynomial on the generator matrices."""
    fld = m.algebra.field
    acc = linalg.zeros(fld, m.dim, m.dim)
    for w, c in p.terms.items():
        mat = linalg.identity(fld, m.dim)
        for i in w:
            mat = linalg.mat_mul(fld, mat, m.action[i])
        acc = linalg.mat_add(fld, acc, linalg.mat_scale(fld, c, mat))
    return acc


def check_module(m: MatrixModule) -> ModuleCheck:
    for r in m.algebra.rels:
        if not linalg.is_zero_matrix(m.algebra.field, poly_action(m, r)):
            return ModuleCheck(False, witness=r)
    return ModuleCheck(True)


def is_simple(m: MatrixModule) -> bool:
    """No proper nonzero invariant subspace; decided by spinning up the
    cyclic span of every nonzero vector (projective representatives)."""
    fld = m.algebra.field
    if not isinstance(fld, PrimeField):
        raise GuardExceeded("simplicity search runs over prime fields only")
    if m.dim > SIMPLE_GUARD_DIM:
        raise GuardExceeded(f"module dimension {m.dim} exceeds guard {SIMPLE_GUARD_DIM}")
    r = m.dim
    if r == 1:
        return True
    for rep in _projective_reps(fld.p, r):
        span = [list(rep)]
        frontier = [list(rep)]
        while frontier:
            nxt = []
            for v in frontier:
                for g in m.action:
                    w = _vec_mat(fld, v, g)
                    stacked = span + [w]
                    if linalg.rank(fld, stacked) > len(span):
                        span = linalg.row_space_basis(fld, stacked)
                        nxt.append(w)
            frontier = nxt
        if len(span) < r:
            return False
    return True


def _vec_mat(fld, v, m):
    return [
        _dot(fld, v, [m[i][j] for i in range(len(v))]) for j in range(len(m[0]))
    ]


def _dot(fld, a, b):
    acc = fld.zero
    for x, y in zip(a, b):
        acc = fld.add(acc, fld.mul(x, y))
    return acc


def _projective_reps(p, r):
    """One vector per line of F_p^r: first nonzero coordinate is 1."""
    for lead in range(r):
        for tail in itertools.product(range(p), repeat=r - lead - 1):
            yield (0,) * lead + (1,) + tail


@dataclass(frozen=True)
class CommutantBasis:
    module: MatrixModule
    basis: tuple  # matrices commuting with every generator image


def commutant(m: MatrixModule) -> CommutantBasis:
    """Exact nullspace of X |-> [X, action_g] over all generators."""
    fld = m.algebra.field
    r = m.dim
    rows = []
    for g in m.action:
        # entry (i,j) of X*g - g*X, unknowns X flattened row-major
        for i in range(r):
            for j in range(r):
                row = [fld.zero] * (r * r)
                for k in range(r):
                    row[i * r + k] = fld.add(row[i * r + k], g[k][j])
                    row[k * r + j] = fld.sub(row[k * r + j], g[i][k])
                rows.append(row)
    if not rows:
        vecs = linalg.nullspace(fld, [], ncols=r * r)
    else:
        vecs = linalg.nullspace(fld, rows)
    mats = tuple(_unflatten(v, r) for v in vecs)
    return CommutantBasis(m, mats)


def _flatten(mat):
    return [x for row in mat for x in row]


def _unflatten(vec, r):
    return [list(vec[i * r : (i + 1) * r]) for i in range(r)]


# ---------------------------------------------------------------------------
# Inverse-closure engine (shared by local_ring and localize_along)
# ---------------------------------------------------------------------------


def _mul_span_closure(fld, r, seeds):
    """Unital span of products of the seed matrices; returns rref rows."""
    vecs = [_flatten(linalg.identity(fld, r))] + [_flatten(s) for s in seeds]
    basis = linalg.row_space_basis(fld, vecs)
    while True:
        dim = len(basis)
        prods = list(basis)
        for a in basis:
            for b in basis:
                prods.append(
                    _flatten(
                        linalg.mat_mul(fld, _unflatten(a, r), _unflatten(b, r))
                    )
                )
        basis = linalg.row_space_basis(fld, prods)
        if len(basis) == dim:
            return basis


def _block_invertible(fld, mat, blocks):
    for off, size in blocks:
        sub = [row[off : off + size] for row in mat[off : off + size]]
        if fld.is_zero(linalg.det(fld, sub)):
            return False
    return True


def _unit_candidates(fld, inter_basis, r):
    """Elements of a subspace to try inverting.  Over F_p the whole
    subspace is enumerated (guarded); over Q/R only the basis lines."""
    if isinstance(fld, PrimeField) and fld.p ** len(inter_basis) <= UNIT_ENUM_GUARD:
        for combo in itertools.product(range(fld.p), repeat=len(inter_basis)):
            if not any(combo):
                continue
            v = [fld.zero] * (r * r)
            for c, b in zip(combo, inter_basis):
                if c:
                    v = [fld.add(x, fld.mul(c, y)) for x, y in zip(v, b)]
            yield _unflatten(v, r)
    else:
        for b in inter_basis:
            yield _unflatten(list(b), r)


@dataclass
class LocalRing:
    module: MatrixModule
    basis: list  # matrices spanning the ring
    adjoined_inverses: list  # the elements that were inverted

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, mat) -> bool:
        fld = self.module.algebra.field
        vecs = [_flatten(b) for b in self.basis]
        red, piv = linalg.rref(fld, vecs)
        return linalg.in_row_space(fld, red[: len(piv)], piv, _flatten(mat))


def local_ring(m: MatrixModule, blocks=None) -> LocalRing:
    """Close the action image under inverses of commutant units.

    The loop alternates: multiplicative span -> adjoin inverses of span
    elements that lie in the commutant and are invertible in every block
    -> re-span, until the dimension is stable (it is capped by dim^2).
    """
    chk = check_module(m)
    if not chk.valid:
        raise InvalidModule("relations do not vanish on the module", witness=chk.witness)
    fld = m.algebra.field
    r = m.dim
    if blocks is None:
        blocks = [(0, r)]
    comm_vecs = [_flatten(c) for c in commutant(m).basis]
    span = _mul_span_closure(fld, r, list(m.action))
    adjoined = []
    while True:
        dim = len(span)
        inter = linalg.intersect_row_spaces(fld, span, comm_vecs)
        new_mats = []
        for cand in _unit_candidates(fld, inter, r):
            if not _block_invertible(fld, cand, blocks):
                continue
            inv = linalg.inverse(fld, cand) if len(blocks) == 1 else _blockwise_inverse(fld, cand, blocks)
            red, piv = linalg.rref(fld, span)
            if not linalg.in_row_space(fld, red[: len(piv)], piv, _flatten(inv)):
                adjoined.append(cand)
                new_mats.append(inv)
        if not new_mats:
            break
        span = _mul_span_closure(
            fld, r, [_unflatten(v, r) for v in span] + new_mats
        )
        if len(span) == dim:
            break
    basis = [_unflatten(v, r) for v in span]
    return LocalRing(m, basis, adjoined)


def _blockwise_inverse(fld, mat, blocks):
    out = linalg.zeros(fld, len(mat), len(mat))
    for off, size in blocks:
        sub = [row[off : off + size] for row in mat[off : off + size]]
        inv = linalg.inverse(fld, sub)
        for i in range(size):
            for j in range(size):
                out[off + i][off + j] = inv[i][j]
    return out


def modules_isomorphic(m1: MatrixModule, m2: MatrixModule) -> bool:
    """Existence of an invertible intertwiner, brute-forced at small size."""
    if m1.algebra.pres != m2.algebra.pres:
        raise InvalidModule("modules over different algebras")
    if m1.dim != m2.dim:
        return False
    fld = m1.algebra.field
    r = m1.dim
    if r > ISO_GUARD_DIM:
        raise GuardExceeded(f"isomorphism search guarded at dim {ISO_GUARD_DIM}")
    rows = []
    # unknown T (r x r): action1_g * T - T * action2_g = 0
    for g1, g2 in zip(m1.action, m2.action):
        for i in range(r):
            for j in range(r):
                row = [fld.zero] * (r * r)
                for k in range(r):
                    row[k * r + j] = fld.add(row[k * r + j], g1[i][k])
                    row[i * r + k] = fld.sub(row[i * r + k], g2[k][j])
                rows.append(row)
    sols = linalg.nullspace(fld, rows) if rows else linalg.nullspace(fld, [], ncols=r * r)
    if not sols:
        return False
    if isinstance(fld, PrimeField) and fld.p ** len(sols) <= UNIT_ENUM_GUARD:
        for cand in _unit_candidates(fld, sols, r):
            if not fld.is_zero(linalg.det(fld, cand)):
                return True
        return False
    for s in sols:
        if not fld.is_zero(linalg.det(fld, _unflatten(s, r))):
            return True
    return False


def product_local_rings(modules) -> LocalRing:
    """Block-diagonal local ring on the direct sum of pairwise
    non-isomorphic modules; its dimension is the sum of the block dims."""
    modules = list(modules)
    if not modules:
        raise InvalidModule("empty module list")
    if len(modules) == 1:
        return local_ring(modules[0])
    algebra = modules[0].algebra
    fld = algebra.field
    for m in modules[1:]:
        if m.algebra.pres != algebra.pres:
            raise InvalidModule("modules over different algebras")
    for a, b in itertools.combinations(modules, 2):
        if a.dim == b.dim and modules_isomorphic(a, b):
            raise InvalidModule("isomorphic duplicate modules in a product")
    total = sum(m.dim for m in modules)
    offsets = []
    off = 0
    for m in modules:
        offsets.append(off)
        off += m.dim
    sum_action = []
    for g in range(len(algebra.gens)):
        big = linalg.zeros(fld, total, total)
        for m, off in zip(modules, offsets):
            for i in range(m.dim):
                for j in range(m.dim):
                    big[off + i][off + j] = m.action[g][i][j]
        sum_action.append(big)
    sum_module = MatrixModule(algebra, total, tuple(sum_action))
    basis = []
    adjoined = []
    for m, off in zip(modules, offsets):
        block = local_ring(m)
        for b in block.basis:
            big = linalg.zeros(fld, total, total)
            for i in range(m.dim):
                for j in range(m.dim):
                    big[off + i][off + j] = b[i][j]
            basis.append(big)
        adjoined.extend(block.adjoined_inverses)
    return LocalRing(sum_module, basis, adjoined)


# ---------------------------------------------------------------------------
# Localization along a homomorphism into a matrix algebra
# ---------------------------------------------------------------------------


def _expr_mul(fld, e1, e2):
    out = {}
    for w1, c1 in e1.items():
        for w2, c2 in e2.items():
            w = w1 + w2
            out[w] = fld.add(out.get(w, fld.zero), fld.mul(c1, c2))
    return {w: c for w, c in out.items() if not fld.is_zero(c)}


def _expr_eval(fld, expr, letters, r):
    """Evaluate a letter-word expression with matrix letter values."""
    acc = linalg.zeros(fld, r, r)
    for w, c in expr.items():
        mat = linalg.identity(fld, r)
        for i in w:
            mat = linalg.mat_mul(fld, mat, letters[i])
        acc = linalg.mat_add(fld, acc, linalg.mat_scale(fld, c, mat))
    return acc


@dataclass
class Localization:
    """Subring of a matrix algebra generated by generator images plus
    inverses of images passing a unit predicate.

    Letters 0..n-1 are the generators; letter n+k is the k-th adjoined
    inverse.  Every adjoined element remembers the expression that built
    it, so the universal factorization can be replayed in any other ring.
    """

    field: Field
    r: int
    gen_images: list
    basis: list
    adjoined: list  # (expr, element, inverse) triples

    @property
    def dim(self):
        return len(self.basis)

    def letters(self):
        return list(self.gen_images) + [inv for (_, _, inv) in self.adjoined]

    def factor_through(self, h_images, target_r: int):
        """Images under the unique map to a ring receiving the same data.

        Returns psi on all letters; raises if some adjoined element's
        h-value is singular (then the target does not receive the data).
        """
        fld = self.field
        letters = list(h_images)
        for expr, _, _ in self.adjoined:
            val = _expr_eval(fld, expr, letters, target_r)
            try:
                letters.append(linalg.inverse(fld, val))
            except FieldError:
                raise FieldError(
                    "factorization target does not invert an adjoined element"
                )
        return letters


def localize_along(
    algebra: FpAlgebra, images, unit_test, blocks=None
) -> Localization:
    """Close im(f) under inverses of elements passing ``unit_test``.

    ``unit_test`` marks the division-ring elements of the target; it is an
    error for it to accept a non-invertible matrix.
    """
    fld = algebra.field
    r = len(images[0]) if images else 1
    module = MatrixModule(algebra, r, tuple(images))
    chk = check_module(module)
    if not chk.valid:
        raise InvalidModule("images do not satisfy the relations", witness=chk.witness)
    if blocks is None:
        blocks = [(0, r)]
    n = len(images)
    span_exprs = []  # (flat vector, expr) appended only when independent
    def try_add(vec, expr):
        vecs = [v for v, _ in span_exprs] + [vec]
        if linalg.rank(fld, vecs) > len(span_exprs):
            span_exprs.append((vec, expr))
            return True
        return False

    try_add(_flatten(linalg.identity(fld, r)), {(): fld.one})
    for i, g in enumerate(images):
        try_add(_flatten(g), {(i,): fld.one})
    adjoined = []
    letters = list(images)
    changed = True
    while changed:
        changed = False
        # multiplicative closure with expression tracking
        snapshot = list(span_exprs)
        for v1, e1 in snapshot:
            for v2, e2 in snapshot:
                prod = linalg.mat_mul(fld, _unflatten(v1, r), _unflatten(v2, r))
                if try_add(_flatten(prod), _expr_mul(fld, e1, e2)):
                    changed = True
        # adjoin inverses of unit-test elements already expressed
        for v, e in list(span_exprs):
            mat = _unflatten(v, r)
            if linalg.is_zero_matrix(fld, mat) or not unit_test(mat):
                continue
            if not _block_invertible(fld, mat, blocks):
                raise FieldError(
                    "unit_test accepted a non-invertible element", witness=mat
                )
            inv = (
                linalg.inverse(fld, mat)
                if len(blocks) == 1
                else _blockwise_inverse(fld, mat, blocks)
            )
            letter = n + len(adjoined)
            if try_add(_flatten(inv), {(letter,): fld.one}):
                adjoined.append((e, mat, inv))
                letters.append(inv)
                changed = True
    basis = [_unflatten(v, r) for v, _ in span_exprs]
    return Localization(fld, r, list(images), basis, adjoined)


# ---------------------------------------------------------------------------
# Module files
# ---------------------------------------------------------------------------

_MODULE_RE = re.compile(r"^\s*module\s+r\s*=\s*(\d+)\s*$")
_ASSIGN_RE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_]*)\s*=\s*(\[.*\])\s*$")


def parse_module_file(text: str) -> MatrixModule:
    """A presentation file followed by ``module r=<dim>`` and one matrix
    assignment per generator: ``x = [[0,1],[0,0]]``."""
    pres_stmts = []
    module_dim = None
    assigns = {}
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0]
        for part in stripped.split(";"):
            part = part.strip()
            if not part:
                continue
            m = _MODULE_RE.match(part)
            if m:
                module_dim = int(m.group(1))
                continue
            a = _ASSIGN_RE.match(part)
            if a:
                assigns[a.group(1)] = a.group(2)
                continue
            pres_stmts.append(part)
    if module_dim is None:
        raise ParseError("missing 'module r=<dim>' statement")
    pres = parse_presentation("\n".join(pres_stmts))
    algebra = FpAlgebra(pres)
    fld = pres.field
    action = []
    for name in pres.gens:
        if name not in assigns:
            raise ParseError(f"no matrix assigned to generator {name!r}")
        action.append(parse_matrix(assigns[name], fld, module_dim))
    return MatrixModule(algebra, module_dim, tuple(action))


def parse_matrix(text: str, fld: Field, expected_dim: int | None = None):
    """Parse ``[[a,b],[c,d]]`` with field-scalar entries."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"bad matrix literal {text!r}")
    body = text[1:-1].strip()
    rows = []
    depth = 0
    current = ""
    for ch in body:
        if ch == "[":
            depth += 1
            current = ""
        elif ch == "]":
            depth -= 1
            rows.append([fld.parse(tok.strip()) for tok in current.split(",") if tok.strip()])
        elif depth == 1:
            current += ch
    if expected_dim is not None:
        if len(rows) != expected_dim or any(len(r) != expected_dim for r in rows):
            raise ParseError(f"matrix is not {expected_dim}x{expected_dim}: {text!r}")
    return rows
